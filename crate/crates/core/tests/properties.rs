use proptest::prelude::*;

use openclosed::algebra::poly::Mono2;
use openclosed::algebra::ratfunc::MonoU;
use openclosed::algebra::scalar::{int, ratio};
use openclosed::correspondence::{tuple_weight, CorrespondenceTuple, Leg};
use openclosed::engine::Engine;
use openclosed::sweep::{negate_u, sweep_cases, SweepConfig};
use openclosed::{Insertion, Poly2, RatFunc2, Scalar};

fn poly(terms: &[(u32, u32, i64, i64)]) -> Poly2 {
    Poly2::from_terms(terms.iter().map(|&(a, b, n, d)| (Mono2::new(a, b), ratio(n, d))))
}

prop_compose! {
    fn small_poly()(terms in prop::collection::vec((0u32..3, 0u32..3, -5i64..=5, 1i64..=3), 0..4)) -> Poly2 {
        poly(&terms)
    }
}

prop_compose! {
    /// Numerator over a product of linear forms and possibly `u1² + s²`.
    fn ratfunc()(
        num in small_poly(),
        forms in prop::collection::vec((-2i64..=2, -2i64..=2), 0..3),
        quad in any::<bool>(),
    ) -> RatFunc2 {
        let mut den = Poly2::one();
        for (p, q) in forms {
            if p != 0 || q != 0 {
                den = &den * &Poly2::linear(int(p), int(q));
            }
        }
        if quad {
            den = &den * &poly(&[(2, 0, 1, 1), (0, 2, 1, 1)]);
        }
        RatFunc2::from_parts(num, den).unwrap()
    }
}

prop_compose! {
    /// Homogeneous: `c · u1^i · s^j / ∏ (p u1 + q s)`.
    fn homogeneous()(
        c in (-5i64..=5).prop_filter("nonzero", |c| *c != 0),
        i in 0u32..3,
        j in 0u32..2,
        forms in prop::collection::vec((1i64..=2, -2i64..=2), 0..3),
    ) -> RatFunc2 {
        let den = forms.iter().fold(Poly2::one(), |acc, &(p, q)| &acc * &Poly2::linear(int(p), int(q)));
        RatFunc2::from_parts(Poly2::monomial(int(c), i, j), den).unwrap()
    }
}

fn point() -> impl Strategy<Value = (Scalar, Scalar)> {
    ((-9i64..=9, 1i64..=4), (-9i64..=9, 1i64..=4)).prop_map(|((a, b), (c, d))| (ratio(a, b), ratio(c, d)))
}

proptest! {
    #[test]
    fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert!((&a - &a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a.clone());
            prop_assert!((&b * &b.checked_inv().unwrap()).is_one());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), (x, y) in point()) {
        if let (Some(va), Some(vb)) = (a.eval(&x, &y), b.eval(&x, &y)) {
            prop_assert_eq!((&a * &b).eval(&x, &y), Some(&va * &vb));
            prop_assert_eq!((&a + &b).eval(&x, &y), Some(&va + &vb));
        }
    }

    #[test]
    fn fan_swap_is_an_involutive_automorphism(a in ratfunc(), b in ratfunc()) {
        prop_assert_eq!(a.swap_u1_u2().swap_u1_u2(), a.clone());
        prop_assert_eq!((&a * &b).swap_u1_u2(), &a.swap_u1_u2() * &b.swap_u1_u2());
        prop_assert_eq!((&a + &b).swap_u1_u2(), &a.swap_u1_u2() + &b.swap_u1_u2());
    }

    #[test]
    fn valuation_is_additive(a in homogeneous(), b in homogeneous()) {
        let ab = &a * &b;
        prop_assert_eq!(ab.s_valuation().unwrap(), a.s_valuation().unwrap() + b.s_valuation().unwrap());
        prop_assert_eq!(
            ab.homogeneous_degree().unwrap(),
            a.homogeneous_degree().unwrap() + b.homogeneous_degree().unwrap()
        );
    }

    #[test]
    fn restriction_is_multiplicative(a in homogeneous(), b in homogeneous()) {
        prop_assume!(a.s_valuation().unwrap() >= 0 && b.s_valuation().unwrap() >= 0);
        let ra = a.restrict_antidiagonal().unwrap();
        let rb = b.restrict_antidiagonal().unwrap();
        prop_assert_eq!((&a * &b).restrict_antidiagonal().unwrap(), &ra * &rb);
    }

    #[test]
    fn monomial_strings_round_trip(c in -20i64..=20, d in 1i64..=9, k in -8i64..=8) {
        let m = MonoU::new(ratio(c, d), k);
        prop_assert_eq!(MonoU::parse(&m.canonical_string()), Some(m));
    }

    #[test]
    fn tuple_weight_ignores_leg_order(
        mut legs1 in prop::collection::vec((1u32..=3, 0u32..=1), 1..4),
        mut legs2 in prop::collection::vec((1u32..=3, 0u32..=1), 0..3),
        seed in any::<u64>(),
    ) {
        let e = Engine::global();
        let make = |l1: &[(u32, u32)], l2: &[(u32, u32)]| CorrespondenceTuple {
            type1: l1.iter().map(|&(mu, d)| Leg { mu, d, markings: vec![] }).collect(),
            type2: l2.iter().map(|&(mu, d)| Leg { mu, d, markings: vec![] }).collect(),
        };
        let first = tuple_weight(e, &make(&legs1, &legs2), &[]);
        let shift = (seed % legs1.len() as u64) as usize;
        legs1.rotate_left(shift);
        legs1.reverse();
        legs2.reverse();
        let second = tuple_weight(e, &make(&legs1, &legs2), &[]);
        match (first, second) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (x, y) => prop_assert_eq!(x.is_err(), y.is_err()),
        }
    }
}

/// Exchanging the two hemispheres maps `(d+, d-)` to `(d-, d+)`, `φ1 ↔ φ2`, `u ↦ -u`.
#[test]
fn disk_swap_property_on_the_sweep() {
    let e = Engine::global();
    let mut checked = 0;
    for (beta, ins) in sweep_cases(&SweepConfig::default()) {
        let swapped: Vec<Insertion> = ins.iter().map(|i| Insertion::new(3 - i.alpha, i.a)).collect();
        let here = e.disk_invariant(beta, &ins).unwrap();
        let there = e.disk_invariant((beta.1, beta.0), &swapped).unwrap();
        assert_eq!(there, negate_u(&here), "{beta:?} {ins:?}");
        checked += 1;
    }
    assert_eq!(checked, 774);
}
