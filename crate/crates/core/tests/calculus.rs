use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ratform::calculus::{
    hermite_antiderivative, independent_of, logderiv_integrate, residue_profile, separable_product, LogDerivFailure,
};
use ratform::ratfun::{parse, rational, vars, RatFun};

fn rf(e: &str) -> RatFun {
    parse(e, &vars(&["x", "y", "z"])).unwrap()
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(3)
}

#[test]
fn separable_examples() {
    let mut r = rng();
    for e in ["x/y", "x^2*y^3", "(y+z)/(3*x)", "(x^2 - 1)*(y + z)/(x*y^2)"] {
        let h = rf(e);
        let (u, v) = separable_product(&h, &[0], &[1], &mut r).expect(e);
        assert_eq!(u.div(&v).unwrap(), h, "{e}");
        assert!(!u.involves(1) && !v.involves(0));
    }
    let (u, v) = separable_product(&rf("(y+z)/(3*x)"), &[0], &[1], &mut r).unwrap();
    assert!(u.involves(2) || v.involves(2));
    assert!(separable_product(&rf("x+y"), &[0], &[1], &mut r).is_none());
    assert!(separable_product(&rf("x*y + 1"), &[0], &[1], &mut r).is_none());
}

#[test]
fn independence_examples() {
    let p = rf("x+y+z");
    assert!(independent_of(&p.partial(0).div(&p.partial(1)).unwrap(), 2));
    assert!(!independent_of(&rf("(y+z)/(3*x)"), 2));
    assert!(independent_of(&rf("5/7"), 0));
}

#[test]
fn hermite_examples() {
    assert_eq!(hermite_antiderivative(&rf("1/x^2"), 0), Some(rf("-1/x")));
    assert_eq!(hermite_antiderivative(&rf("2*x+3"), 0), Some(rf("x^2+3*x")));
    assert_eq!(hermite_antiderivative(&rf("1/x"), 0), None);
    let g = hermite_antiderivative(&rf("y/(x+z)^3"), 0).unwrap();
    assert_eq!(g.partial(0), rf("y/(x+z)^3"));
}

#[test]
fn residue_examples() {
    let p = residue_profile(&rf("3/(2*x)"), 0);
    assert_eq!(p.residues.len(), 1);
    assert_eq!(p.residues[0].factor, rf("x"));
    assert_eq!(p.residues[0].rational_value(), Some(rational(3, 2)));
    assert_eq!(p.residue_denominator_lcm(), Some(2));

    let p = residue_profile(&rf("1/(x-1) + 2/(x+1)"), 0);
    let mut vals: Vec<_> = p.residues.iter().map(|r| r.rational_value().unwrap()).collect();
    vals.sort();
    assert_eq!(vals, vec![rational(1, 1), rational(2, 1)]);
    assert!(p.all_rational());

    let p = residue_profile(&rf("x/(x^2+1)"), 0);
    assert_eq!(p.residues.len(), 1);
    let r = &p.residues[0];
    assert!(!r.splits_over_q);
    assert_eq!(r.value, rf("1/2"));
    assert_eq!(r.trace(0), rf("1"));
}

#[test]
fn logderiv_examples() {
    assert_eq!(logderiv_integrate(&rf("2/x"), 0), Ok(rf("x^2")));
    assert_eq!(logderiv_integrate(&rf("1/(x-1) - 3/x"), 0), Ok(rf("(x-1)/x^3")));
    assert_eq!(logderiv_integrate(&rf("3/(2*x)"), 0), Err(LogDerivFailure::NonIntegerResidue));
    assert_eq!(logderiv_integrate(&rf("3/x").scale(&rational(2, 1)), 0), Ok(rf("x^6")));
    assert_eq!(logderiv_integrate(&rf("1/x^2"), 0), Err(LogDerivFailure::HigherOrderPole));
    assert_eq!(logderiv_integrate(&rf("x"), 0), Err(LogDerivFailure::PolynomialPart));
}

/// Product of small linear factors in `var`, with `z` as a parameter in one
/// of them.
fn factored(var: &'static str) -> impl Strategy<Value = RatFun> {
    (prop::collection::vec(-4i64..=4, 1..=3), prop::collection::vec(-4i64..=4, 0..=2), 1i64..=3).prop_map(
        move |(num, den, c)| {
            let lin = |a: &i64| format!("({var} - {a})");
            let mut e = format!("{c}*(({var} + z)*{})", num.iter().map(lin).collect::<Vec<_>>().join("*"));
            if !den.is_empty() {
                e = format!("{e}/({})", den.iter().map(|a| format!("({var} + {a} + 5*z)")).collect::<Vec<_>>().join("*"));
            }
            rf(&e)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn separable_recovers_products(u0 in factored("x"), v0 in factored("y")) {
        let h = u0.div(&v0).unwrap();
        let (u, v) = separable_product(&h, &[0], &[1], &mut rng()).unwrap();
        prop_assert_eq!(u.div(&v).unwrap(), h);
        prop_assert!(!u.involves(1) && !v.involves(0));
    }

    #[test]
    fn hermite_round_trip(g in factored("x")) {
        let dg = g.partial(0);
        let back = hermite_antiderivative(&dg, 0).unwrap();
        prop_assert!(!back.sub(&g).involves(0));
    }

    #[test]
    fn logderiv_round_trip(g in factored("x")) {
        let f = g.partial(0).div(&g).unwrap();
        let back = logderiv_integrate(&f, 0).unwrap();
        prop_assert!(!back.div(&g).unwrap().involves(0));
    }

    #[test]
    fn residues_scale(g in factored("x"), n in 2i64..=5) {
        let f = g.partial(0).div(&g).unwrap();
        let a = residue_profile(&f, 0);
        let b = residue_profile(&f.scale(&rational(n, 1)), 0);
        prop_assert_eq!(a.residues.len(), b.residues.len());
        for (ra, rb) in a.residues.iter().zip(&b.residues) {
            prop_assert_eq!(&ra.factor, &rb.factor);
            prop_assert_eq!(ra.value.scale(&rational(n, 1)), rb.value.clone());
        }
        // Residues of f/n are k/n; the least clearing multiplier is their lcm.
        let scaled = residue_profile(&f.scale(&rational(1, n)), 0);
        let l = scaled.residue_denominator_lcm().unwrap() as i64;
        let clears = |k: i64| scaled.residues.iter().all(|r| (r.rational_value().unwrap() * rational(k, 1)).is_integer());
        prop_assert!(clears(l));
        prop_assert!((1..l).all(|k| !clears(k)));
    }
}
