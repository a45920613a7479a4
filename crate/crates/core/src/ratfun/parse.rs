//! Expression front end.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)*
//! atom   := integer | identifier | '(' expr ')'
//! ```

use num::{BigInt, BigRational, Num};

use super::poly::Coeff;
use super::ratfun::RatFun;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>> {
        let mut lx = Lexer {
            src,
            toks: Vec::new(),
        };
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::from_str_radix(&lx.src[start..i], 10).unwrap();
                lx.toks.push((Tok::Int(n), start));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                lx.toks.push((Tok::Ident(lx.src[start..i].to_string()), start));
            } else if "+-*/^()".contains(c) {
                lx.toks.push((Tok::Sym(c), i));
                i += 1;
            } else {
                let ch = src[i..].chars().next().unwrap();
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
        lx.toks.push((Tok::End, src.len()));
        Ok(lx.toks)
    }
}

struct Parser<'v> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'v [String],
}

impl<'v> Parser<'v> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn arity(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun> {
        if let Tok::Sym('-') = self.peek() {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun> {
        let mut base = self.atom()?;
        while let Tok::Sym('^') = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                (Tok::Int(n), _) => {
                    let e: u32 = u32::try_from(&n).map_err(|_| Error::ExponentOverflow)?;
                    if base.degree().saturating_mul(e as u64) > u32::MAX as u64 {
                        return Err(Error::ExponentOverflow);
                    }
                    base = base.pow(e);
                }
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a non-negative integer exponent".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(RatFun::constant(self.arity(), BigRational::from_integer(n))),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(RatFun::var(self.arity(), i)),
                None => Err(Error::UnknownIdentifier { name, pos }),
            },
            Tok::Sym('(') => {
                let inner = self.expr()?;
                let close = self.pos();
                match self.bump() {
                    (Tok::Sym(')'), _) => Ok(inner),
                    _ => Err(Error::Syntax {
                        pos: close,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Tok::End => Err(Error::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            Tok::Sym(c) => Err(Error::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

/// Parses an expression over the given ordered variable list.
pub fn parse(expr: &str, vars: &[String]) -> Result<RatFun> {
    let toks = Lexer::run(expr)?;
    let mut p = Parser { toks, at: 0, vars };
    let f = p.expr()?;
    match p.peek() {
        Tok::End => Ok(f),
        _ => Err(Error::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        }),
    }
}

/// Identifiers in order of first appearance.
pub fn identifiers(expr: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (t, _) in Lexer::run(expr)? {
        if let Tok::Ident(s) = t {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Parses a rational literal such as `-3/4` or `7`.
pub fn parse_coeff(s: &str) -> Result<Coeff> {
    let f = parse(s, &[])?;
    f.constant_value().ok_or(Error::Syntax {
        pos: 0,
        msg: "expected a rational constant".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{rational, vars};

    #[test]
    fn literal_fraction() {
        let v = vars(&["x", "y", "z"]);
        let f = parse("(x+y)/(y+z)", &v).unwrap();
        assert_eq!(f.fmt_with(&v), "(x + y)/(y + z)");
    }

    #[test]
    fn reduction_and_cancellation() {
        let v = vars(&["x", "y"]);
        assert!(parse("x/x", &v).unwrap().is_one());
        assert!(parse("x^2*y - y*x^2", &v).unwrap().is_zero());
    }

    #[test]
    fn precedence() {
        let v = vars(&["x"]);
        let a = parse("-x^2", &v).unwrap();
        let b = parse("-(x^2)", &v).unwrap();
        assert_eq!(a, b);
        let c = parse("1/2*x", &v).unwrap();
        assert_eq!(c, RatFun::var(1, 0).scale(&rational(1, 2)));
        let d = parse("2^3^2", &v).unwrap();
        assert_eq!(d.constant_value(), Some(rational(64, 1)));
    }

    #[test]
    fn errors_are_positioned() {
        let v = vars(&["x", "y"]);
        assert_eq!(
            parse("x + w", &v),
            Err(Error::UnknownIdentifier {
                name: "w".into(),
                pos: 4
            })
        );
        assert!(matches!(parse("x + * y", &v), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("(x + y", &v), Err(Error::Syntax { pos: 6, .. })));
        assert_eq!(parse("x/(y-y)", &v), Err(Error::DivisionByZero));
        assert_eq!(parse("x^99999999999", &v), Err(Error::ExponentOverflow));
        assert!(matches!(parse("x $ y", &v), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn rational_literal() {
        assert_eq!(parse_coeff("-3/4").unwrap(), rational(-3, 4));
    }
}
