use num::{BigInt, Integer, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ratform::ratfun::{arith, parse, probably_equal, rational, vars, ArithOp, Coeff, Monomial, Poly, RatFun};
use ratform::Error;

const P31: u64 = 2_147_483_647;

fn xyz() -> Vec<String> {
    vars(&["x", "y", "z"])
}

fn rf(e: &str) -> RatFun {
    parse(e, &xyz()).unwrap()
}

fn q(n: i64) -> Coeff {
    rational(n, 1)
}

#[test]
fn parse_examples() {
    let f = rf("(x+y)/(y+z)");
    assert_eq!(f.num(), rf("x+y").num());
    assert_eq!(f.den(), rf("y+z").num());
    assert!(parse("x/x", &vars(&["x"])).unwrap().is_one());
    assert!(parse("x^2*y - y*x^2", &vars(&["x", "y"])).unwrap().is_zero());
}

#[test]
fn grammar() {
    assert_eq!(rf("-x^2"), rf("-(x^2)"));
    assert_eq!(rf("2*x^2*3"), rf("6*x^2"));
    assert_eq!(rf("x - y - z"), rf("(x - y) - z"));
    assert_eq!(rf("x/y/z"), rf("x/(y*z)"));
    assert_eq!(rf("3/4*x").eval(&[q(4), q(0), q(0)]).unwrap(), q(3));
    assert!(matches!(parse("x + w", &xyz()), Err(Error::UnknownIdentifier { .. })));
    assert!(matches!(parse("x +", &xyz()), Err(Error::Syntax { .. })));
    assert!(matches!(parse("x/(y - y)", &xyz()), Err(Error::DivisionByZero)));
    assert!(parse("x^-1", &xyz()).is_err());
}

#[test]
fn arith_examples() {
    assert_eq!(arith(ArithOp::Add, &rf("x"), &rf("y")).unwrap(), rf("x+y"));
    assert_eq!(arith(ArithOp::Div, &rf("x^2-y^2"), &rf("x-y")).unwrap(), rf("x+y"));
    let f = rf("(x^2+y)/(y+z^3)");
    assert!(arith(ArithOp::Sub, &f, &f).unwrap().is_zero());
    let g = parse("x", &vars(&["x"])).unwrap();
    assert!(matches!(arith(ArithOp::Add, &f, &g), Err(Error::ArityMismatch { .. })));
    assert!(matches!(f.div(&RatFun::zero(3)), Err(Error::DivisionByZero)));
}

#[test]
fn partial_examples() {
    assert_eq!(rf("(x+y)/(y+z)").partial(0), rf("1/(y+z)"));
    assert_eq!(rf("x*(y+z)^3").partial(1), rf("3*x*(y+z)^2"));
    assert!(rf("7/3").partial(0).is_zero());
}

#[test]
fn eval_examples() {
    assert_eq!(rf("(x+y)/(y+z)").eval(&[q(1), q(2), q(3)]).unwrap(), rational(3, 5));
    let inv = parse("1/x", &vars(&["x"])).unwrap();
    assert_eq!(inv.eval(&[q(0)]), Err(Error::Pole));
    let xy = parse("x*y", &vars(&["x", "y"])).unwrap();
    assert_eq!(xy.eval_mod(&[3, 4], P31).unwrap(), 12);
}

#[test]
fn is_zero_examples() {
    let v = vars(&["x", "y"]);
    let h = parse("x/y", &v).unwrap();
    let e = h.mul(&h.partial(0).partial(1)).sub(&h.partial(0).mul(&h.partial(1)));
    assert!(e.is_zero());
    assert!(parse("x+y-y-x", &v).unwrap().is_zero());
    assert!(!parse("x-y", &v).unwrap().is_zero());
}

#[test]
fn substitute_examples() {
    let f = rf("(x+y)/(y+z)");
    assert_eq!(f.specialize(&[(2, Coeff::zero())]).unwrap(), rf("(x+y)/y"));
    assert_eq!(f.substitute(&[]).unwrap(), f);
    assert_eq!(rf("x^2").substitute(&[(0, rf("y+1"))]).unwrap(), rf("y^2+2*y+1"));
    assert!(matches!(
        rf("1/z").specialize(&[(2, Coeff::zero())]),
        Err(Error::DegenerateSpecialization)
    ));
}

#[test]
fn printing_round_trips() {
    for e in ["(x + y)/(y + z)", "x*(y + z)^3", "-x^2/3 + y", "1/(x - 1/2)", "(x*y - 2)/(3*z^2 + x)"] {
        let f = rf(e);
        assert_eq!(parse(&f.fmt_with(&xyz()), &xyz()).unwrap(), f, "{e}");
    }
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..=2, 0u32..=2, 0u32..=2), 1..=4).prop_map(|terms| {
        Poly::from_terms(
            3,
            terms
                .into_iter()
                .map(|(c, a, b, d)| (Monomial::new(vec![a, b, d]), q(c))),
        )
    })
}

fn ratfun_strategy() -> impl Strategy<Value = RatFun> {
    (poly_strategy(), poly_strategy()).prop_filter_map("zero denominator", |(n, d)| RatFun::new(n, d).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in ratfun_strategy(), b in ratfun_strategy(), c in ratfun_strategy()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn canonical_equality_matches_sampling(a in ratfun_strategy(), b in ratfun_strategy()) {
        let primes = [P31, 2_147_483_629];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // a·b/b is the same function as a by a different route.
        if !b.is_zero() {
            let back = a.mul(&b).div(&b).unwrap();
            prop_assert!(back.sub(&a).is_zero());
            prop_assert!(probably_equal(&back, &a, &primes, 20, &mut rng));
        }
        let same = a.sub(&b).is_zero();
        prop_assert_eq!(same, probably_equal(&a, &b, &primes, 20, &mut rng));
    }

    #[test]
    fn partials_commute(f in ratfun_strategy()) {
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            prop_assert_eq!(f.partial(i).partial(j), f.partial(j).partial(i));
        }
    }

    #[test]
    fn eval_is_a_homomorphism(a in ratfun_strategy(), b in ratfun_strategy(), pt in prop::array::uniform3(-9i64..=9)) {
        let pt: Vec<Coeff> = pt.iter().map(|&v| q(v)).collect();
        let (Ok(va), Ok(vb)) = (a.eval(&pt), b.eval(&pt)) else { return Ok(()) };
        prop_assert_eq!(a.add(&b).eval(&pt).unwrap(), &va + &vb);
        prop_assert_eq!(a.sub(&b).eval(&pt).unwrap(), &va - &vb);
        prop_assert_eq!(a.mul(&b).eval(&pt).unwrap(), &va * &vb);
        if !vb.is_zero() {
            if let Ok(v) = a.div(&b).and_then(|d| d.eval(&pt)) {
                prop_assert_eq!(v, &va / &vb);
            }
        }
    }

    #[test]
    fn modular_eval_agrees(f in ratfun_strategy(), pt in prop::array::uniform3(1u64..1000)) {
        let exact: Vec<Coeff> = pt.iter().map(|&v| q(v as i64)).collect();
        if let (Ok(v), Ok(m)) = (f.eval(&exact), f.eval_mod(&pt, P31)) {
            let p = BigInt::from(P31);
            let den_inv = v.denom().modpow(&(&p - 2u32), &p);
            let expect = (v.numer() * den_inv).mod_floor(&p);
            prop_assert_eq!(BigInt::from(m), expect);
        }
    }

    #[test]
    fn printing_round_trips_randomly(f in ratfun_strategy()) {
        prop_assert_eq!(parse(&f.fmt_with(&xyz()), &xyz()).unwrap(), f);
    }
}
