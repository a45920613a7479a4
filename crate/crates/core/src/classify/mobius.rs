use crate::error::Result;
use crate::ratfun::{Coeff, RatFun};

/// A Möbius map `t ↦ (a t + b)/(c t + d)` with small integer entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub name: &'static str,
}

impl Mobius {
    pub const fn new(a: i64, b: i64, c: i64, d: i64, name: &'static str) -> Self {
        Self { a, b, c, d, name }
    }

    pub fn apply(&self, f: &RatFun) -> Result<RatFun> {
        let n = f.arity();
        let num = f.scale(&Coeff::from_integer(self.a.into())).add(&RatFun::from_int(n, self.b));
        let den = f.scale(&Coeff::from_integer(self.c.into())).add(&RatFun::from_int(n, self.d));
        num.div(&den)
    }
}

/// The coordinate moves `t, 1/t, t−1, 1/(t−1), t/(t−1), (t−1)/t`.
pub const SCHEDULE: [Mobius; 6] = [
    Mobius::new(1, 0, 0, 1, "t"),
    Mobius::new(0, 1, 1, 0, "1/t"),
    Mobius::new(1, -1, 0, 1, "t-1"),
    Mobius::new(0, 1, 1, -1, "1/(t-1)"),
    Mobius::new(1, 0, 1, -1, "t/(t-1)"),
    Mobius::new(1, -1, 1, 0, "(t-1)/t"),
];

/// Pre-normalizations tried by the twisted fitter: the schedule followed by
/// the inverses it does not already contain, so that `m(q(s)) = s` has a
/// solution `m` whenever `q` is in the schedule.
pub const NORMALIZATIONS: [Mobius; 9] = [
    SCHEDULE[0],
    SCHEDULE[1],
    SCHEDULE[2],
    SCHEDULE[3],
    SCHEDULE[4],
    SCHEDULE[5],
    Mobius::new(1, 1, 0, 1, "t+1"),
    Mobius::new(1, 1, 1, 0, "(t+1)/t"),
    Mobius::new(0, 1, -1, 1, "1/(1-t)"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::{parse, vars};

    #[test]
    fn inverses_are_covered() {
        let v = vars(&["x"]);
        let x = parse("x", &v).unwrap();
        for q in SCHEDULE {
            let qx = q.apply(&x).unwrap();
            let hit = NORMALIZATIONS
                .iter()
                .any(|m| m.apply(&qx).map(|y| y == x).unwrap_or(false));
            assert!(hit, "no inverse for {}", q.name);
        }
    }
}
