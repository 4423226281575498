//! Property tests for the order and group structure underneath everything
//! else: if these hold, truncation and the solver can rely on the algebra.

use proptest::prelude::*;

use transs_core::calculus;
use transs_core::monomial::Monomial;
use transs_core::rational::{rat, rat_int, Rat};
use transs_core::series::{Bound, Series};

fn mono_strategy() -> impl Strategy<Value = Monomial> {
    // x^{a/d} e^{b·x + c·x^2} with small integers
    (
        -6i64..=6,
        prop_oneof![Just(1i64), Just(2), Just(3)],
        -3i64..=3,
        -2i64..=2,
    )
        .prop_map(|(a, d, b, c)| {
            let mut terms = Vec::new();
            if b != 0 {
                terms.push((Monomial::x(), rat_int(b)));
            }
            if c != 0 {
                terms.push((Monomial::x_power(rat_int(2)), rat_int(c)));
            }
            let expo = Series::from_terms(terms, Bound::Exact);
            Monomial::new(0, rat(a, d), expo).unwrap()
        })
}

proptest! {
    #[test]
    fn group_axioms(a in mono_strategy(), b in mono_strategy(), c in mono_strategy()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&Monomial::one()), a.clone());
        prop_assert!(a.mul(&a.inv()).is_one());
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn order_translation_invariance(a in mono_strategy(), b in mono_strategy(), g in mono_strategy()) {
        let before = a.cmp_mono(&b);
        prop_assert_eq!(a.mul(&g).cmp_mono(&b.mul(&g)), before);
    }

    #[test]
    fn lift_preserves_order(a in mono_strategy(), b in mono_strategy(), depth in 1u32..=2) {
        let before = a.cmp_mono(&b);
        prop_assert_eq!(a.lift_to(depth).cmp_mono(&b.lift_to(depth)), before);
        // and lifting is a semantic no-op
        prop_assert_eq!(a.lift_to(depth).cmp_mono(&a), std::cmp::Ordering::Equal);
    }

    /// Height wins: with L purely large of exact height 1, x^b e^L beats
    /// every height-<=1 monomial, and x^b e^{-L} loses to it.
    #[test]
    fn height_wins(
        b in -5i64..=5,
        l_coeff in 1i64..=4,
        t in mono_strategy(),
    ) {
        let inner = Series::from_terms(
            vec![(Monomial::exp_iter(1), rat_int(l_coeff))],
            Bound::Exact,
        );
        let big = Monomial::new(0, rat_int(b), inner.clone()).unwrap();
        let small = Monomial::new(0, rat_int(b), inner.scalar_mul(&rat_int(-1))).unwrap();
        prop_assert_eq!(big.cmp_mono(&t), std::cmp::Ordering::Greater);
        prop_assert_eq!(small.cmp_mono(&t), std::cmp::Ordering::Less);
    }

    /// Archimedean gap: a large log-free monomial exceeds some real power
    /// of x; the witness comes from the dominant structure.
    #[test]
    fn large_monomials_beat_a_power(m in mono_strategy()) {
        if m.is_large() {
            let c: Rat = if m.exp_part().terms().is_empty() {
                m.x_exp().clone() / rat_int(2)
            } else {
                rat_int(1_000_000)
            };
            prop_assert!(c > rat_int(0));
            prop_assert_eq!(
                m.cmp_mono(&Monomial::x_power(c)),
                std::cmp::Ordering::Greater
            );
        }
    }

    /// Leibniz rule on random exact series.
    #[test]
    fn leibniz(
        a in proptest::collection::vec((mono_strategy(), -4i64..=4), 0..3),
        b in proptest::collection::vec((mono_strategy(), -4i64..=4), 0..3),
    ) {
        let a = Series::from_terms(
            a.into_iter().map(|(m, c)| (m, rat_int(c))).collect(),
            Bound::Exact,
        );
        let b = Series::from_terms(
            b.into_iter().map(|(m, c)| (m, rat_int(c))).collect(),
            Bound::Exact,
        );
        let lhs = calculus::derivative(&a.mul(&b)).unwrap();
        let rhs = calculus::derivative(&a)
            .unwrap()
            .mul(&b)
            .add(&a.mul(&calculus::derivative(&b).unwrap()));
        prop_assert!(lhs.eq_series(&rhs).unwrap());
    }

    /// Chain rule through exp: (e^T)' = e^T·T' for small T.
    #[test]
    fn chain_rule_exp(
        t in proptest::collection::vec((mono_strategy(), -4i64..=4), 0..3),
    ) {
        let t: Vec<(Monomial, Rat)> = t
            .into_iter()
            .filter(|(m, _)| m.is_small())
            .map(|(m, c)| (m, rat_int(c)))
            .collect();
        let t = Series::from_terms(t, Bound::Exact);
        let target = Monomial::x_power(rat_int(-12));
        let e = calculus::exp(&t, &target, Default::default()).unwrap();
        let lhs = calculus::derivative(&e).unwrap();
        let rhs = e.mul(&calculus::derivative(&t).unwrap());
        let residual = lhs.sub(&rhs);
        prop_assert!(residual.terms().is_empty(), "residual {}", residual);
    }

    /// Chain rule through powers: (S^b)' = b·S^{b-1}·S' for positive S.
    #[test]
    fn chain_rule_power(
        small in proptest::collection::vec((mono_strategy(), -4i64..=4), 0..2),
    ) {
        let small: Vec<(Monomial, Rat)> = small
            .into_iter()
            .filter(|(m, _)| m.is_small())
            .map(|(m, c)| (m, rat_int(c)))
            .collect();
        let s = Series::one().add(&Series::from_terms(small, Bound::Exact));
        let b = rat(3, 2);
        let target = Monomial::x_power(rat_int(-10));
        let budget = Default::default();
        let p = calculus::power(&s, &b, &target, budget).unwrap();
        let p1 = calculus::power(&s, &(b.clone() - rat_int(1)), &target, budget).unwrap();
        let lhs = calculus::derivative(&p).unwrap();
        let rhs = p1.scalar_mul(&b).mul(&calculus::derivative(&s).unwrap());
        let residual = lhs.sub(&rhs);
        prop_assert!(residual.terms().is_empty(), "residual {}", residual);
    }

    /// Chain rule through composition: (T∘S)' = (T'∘S)·S' for a
    /// near-identity inner series.
    #[test]
    fn chain_rule_compose(
        t in proptest::collection::vec((mono_strategy(), -4i64..=4), 0..3),
        small in proptest::collection::vec((mono_strategy(), -3i64..=3), 0..2),
    ) {
        let t = Series::from_terms(
            t.into_iter().map(|(m, c)| (m, rat_int(c))).collect(),
            Bound::Exact,
        );
        let small: Vec<(Monomial, Rat)> = small
            .into_iter()
            .filter(|(m, _)| m.is_small())
            .map(|(m, c)| (m, rat_int(c)))
            .collect();
        let s = Series::x().add(&Series::from_terms(small, Bound::Exact));
        let target = Monomial::x_power(rat_int(-8));
        let budget = Default::default();
        let composed = match calculus::compose(&t, &s, &target, budget) {
            Ok(c) => c,
            Err(_) => return Ok(()), // irrational scalar draw
        };
        let dt_at_s = match calculus::compose(
            &calculus::derivative(&t).unwrap(),
            &s,
            &target,
            budget,
        ) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let lhs = calculus::derivative(&composed).unwrap();
        let rhs = dt_at_s.mul(&calculus::derivative(&s).unwrap());
        let residual = lhs.sub(&rhs);
        prop_assert!(residual.terms().is_empty(), "residual {}", residual);
    }
}
