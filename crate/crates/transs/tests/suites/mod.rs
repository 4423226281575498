//! Randomized law suites backing the last acceptance criterion. Each suite
//! runs at least 200 deterministic cases and asserts exactly.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use transs_core::calculus::{self, TaylorBudget};
use transs_core::foundations::{
    check_domination_chain, dominates, mi_leq, min_elements, IndexOrder, MultiIndex,
};
use transs_core::grid::{
    derivative_addendum, inversion_addendum, is_mu_small, mu_dominates, smallness_addendum,
    RatioSet,
};
use transs_core::integrate;
use transs_core::monomial::{lsupp, Monomial};
use transs_core::rational::{rat, rat_int, Rat};
use transs_core::series::{Bound, FarOrd, Series};
use transs_core::solve::IterationPolicy;

pub const CASES: usize = 200;

fn rng() -> StdRng {
    StdRng::seed_from_u64(0x7472616e7373)
}

fn budget() -> TaylorBudget {
    TaylorBudget::default()
}

fn nonzero_coeff(r: &mut StdRng) -> Rat {
    loop {
        let n = r.gen_range(-6i64..=6);
        if n != 0 {
            return rat(n, r.gen_range(1i64..=3));
        }
    }
}

/// x^a e^{b·x} with small rational a and integer b.
fn pool_monomial(r: &mut StdRng) -> Monomial {
    let a = rat(r.gen_range(-4i64..=4), if r.gen_bool(0.2) { 2 } else { 1 });
    let b = r.gen_range(-2i64..=2);
    let mut m = Monomial::x_power(a);
    if b != 0 {
        let expo = Series::from_terms(vec![(Monomial::x(), rat_int(b))], Bound::Exact);
        m = m.mul(&Monomial::new(0, rat_int(0), expo).unwrap());
    }
    m
}

fn rand_series(r: &mut StdRng, max_terms: usize) -> Series {
    let n = r.gen_range(0..=max_terms);
    let terms = (0..n)
        .map(|_| (pool_monomial(r), nonzero_coeff(r)))
        .collect();
    Series::from_terms(terms, Bound::Exact)
}

fn rand_nonzero_series(r: &mut StdRng, max_terms: usize) -> Series {
    loop {
        let s = rand_series(r, max_terms);
        if !s.terms().is_empty() {
            return s;
        }
    }
}

fn eq(a: &Series, b: &Series) -> bool {
    a.eq_series(b).unwrap()
}

/// Field and valuation axioms on random exact series, plus the inverse
/// round trip.
pub fn field_and_valuation() {
    let mut r = rng();
    for case in 0..CASES {
        let a = rand_series(&mut r, 4);
        let b = rand_series(&mut r, 4);
        let c = rand_series(&mut r, 3);
        assert!(eq(&a.add(&b).add(&c), &a.add(&b.add(&c))), "case {case}");
        assert!(eq(&a.add(&b), &b.add(&a)), "case {case}");
        assert!(eq(&a.mul(&b), &b.mul(&a)), "case {case}");
        assert!(eq(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))), "case {case}");
        assert!(
            eq(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))),
            "case {case}"
        );
        assert!(eq(&Series::one().mul(&a), &a), "case {case}");
        assert!(eq(&a.sub(&a), &Series::zero()), "case {case}");

        if a.is_positive() && b.is_positive() {
            assert!(a.add(&b).is_positive(), "case {case}");
            assert!(a.mul(&b).is_positive(), "case {case}");
        }

        if !a.terms().is_empty() && !b.terms().is_empty() {
            let prod = a.mul(&b);
            assert_eq!(
                prod.mag().unwrap(),
                &a.mag().unwrap().mul(b.mag().unwrap()),
                "case {case}"
            );
            let sum = a.add(&b);
            if let Ok(mag_sum) = sum.mag() {
                let max_mag = a.mag().unwrap().max(b.mag().unwrap());
                assert_ne!(
                    mag_sum.cmp_mono(max_mag),
                    std::cmp::Ordering::Greater,
                    "case {case}"
                );
                if a.mag().unwrap() != b.mag().unwrap() {
                    assert_eq!(mag_sum, max_mag, "case {case}");
                }
            }
            if a.mag().unwrap().is_large() {
                let abs_a = if a.is_positive() { a.clone() } else { a.neg() };
                assert_eq!(
                    abs_a.cmp_series(&Series::one()).unwrap(),
                    std::cmp::Ordering::Greater,
                    "case {case}"
                );
            }
        }

        if !a.terms().is_empty() {
            let target = a.mag().unwrap().inv().mul(&Monomial::x_power(rat_int(-8)));
            let inv = calculus::mul_inverse(&a, &target, budget()).unwrap();
            let residual = a.mul(&inv).sub(&Series::one());
            assert!(residual.terms().is_empty(), "case {case}: {residual}");
        }
    }
    println!("  suite field-and-valuation: {CASES} cases");
}

fn rand_index(r: &mut StdRng, dim: usize) -> MultiIndex {
    MultiIndex::new((0..dim).map(|_| r.gen_range(-4i64..=4)).collect())
}

fn rand_index_set(r: &mut StdRng, dim: usize) -> Vec<MultiIndex> {
    let n = r.gen_range(0..=6);
    (0..n).map(|_| rand_index(r, dim)).collect()
}

/// Dickson and domination properties of multi-index sets.
pub fn dickson_and_domination() {
    let mut r = rng();
    for case in 0..CASES {
        let dim = r.gen_range(2..=3);
        let e = rand_index_set(&mut r, dim);
        let f = rand_index_set(&mut r, dim);
        let g = rand_index_set(&mut r, dim);

        let min_e = min_elements(&e).unwrap();
        for (i, a) in min_e.iter().enumerate() {
            for (j, b) in min_e.iter().enumerate() {
                if i != j {
                    assert_eq!(
                        mi_leq(a, b).unwrap(),
                        IndexOrder::Incomparable,
                        "case {case}"
                    );
                }
            }
        }
        for k in &e {
            assert!(
                min_e
                    .iter()
                    .any(|m| matches!(mi_leq(m, k).unwrap(), IndexOrder::LessOrEqual)),
                "case {case}"
            );
        }
        let min_f = min_elements(&f).unwrap();
        assert_eq!(
            dominates(&e, &f).unwrap(),
            dominates(&min_e, &min_f).unwrap(),
            "case {case}"
        );
        if dominates(&e, &f).unwrap() {
            for m in &min_e {
                assert!(!min_f.contains(m), "case {case}");
            }
        }
        if dominates(&e, &f).unwrap() && dominates(&f, &g).unwrap() {
            assert!(dominates(&e, &g).unwrap(), "case {case}");
            assert!(check_domination_chain(&[e.clone(), f.clone(), g.clone()]).unwrap());
        }
    }
    println!("  suite dickson-domination: {CASES} cases");
}

fn small_series(r: &mut StdRng, max_terms: usize) -> Series {
    let terms: Vec<(Monomial, Rat)> = (0..max_terms)
        .filter_map(|_| {
            let m = pool_monomial(r);
            if m.is_small() {
                Some((m, nonzero_coeff(r)))
            } else {
                None
            }
        })
        .collect();
    Series::from_terms(terms, Bound::Exact)
}

fn large_series(r: &mut StdRng) -> Series {
    loop {
        let s = rand_nonzero_series(r, 4);
        if s.mag().unwrap().is_large() {
            return s;
        }
    }
}

/// The derivative lemmas: order relations survive differentiation.
pub fn derivative_lemmas() {
    let mut r = rng();
    let x_inv = Monomial::x_power(rat_int(-1));
    for case in 0..CASES {
        let s = small_series(&mut r, 4);
        let ds = calculus::derivative(&s).unwrap();
        assert!(ds.terms().iter().all(|(m, _)| m.is_small()), "case {case}");

        let t = large_series(&mut r);
        let dt = calculus::derivative(&t).unwrap();
        if t.is_positive() {
            assert!(dt.is_positive(), "case {case}: d({t}) = {dt}");
        }
        let t2 = t.mul(&t);
        assert_eq!(t2.far_cmp(&dt).unwrap(), FarOrd::FarLarger, "case {case}");
        let ddt = calculus::derivative(&dt).unwrap();
        if !ddt.terms().is_empty() {
            assert_eq!(
                dt.mul(&dt).far_cmp(&ddt).unwrap(),
                FarOrd::FarLarger,
                "case {case}"
            );
        }

        let s2 = rand_nonzero_series(&mut r, 3);
        if t.far_cmp(&s2).unwrap() == FarOrd::FarLarger && !s2.mag().unwrap().is_one() {
            let ds2 = calculus::derivative(&s2).unwrap();
            if !ds2.terms().is_empty() {
                assert_eq!(dt.far_cmp(&ds2).unwrap(), FarOrd::FarLarger, "case {case}");
            }
        }

        let any = rand_series(&mut r, 3);
        let d_any = calculus::derivative(&any).unwrap();
        let is_const = any.terms().iter().all(|(m, _)| m.is_one());
        assert_eq!(d_any.is_zero(), is_const, "case {case}");
        assert!(
            d_any.terms().iter().all(|(m, _)| *m != x_inv),
            "case {case}: x^-1 in {d_any}"
        );

        // order preservation of exp, up to the working accuracy: a strict
        // input order may collapse to observational equality when the
        // difference falls below the expansion target, but can never flip
        let u1 = small_series(&mut r, 3);
        let u2 = small_series(&mut r, 3);
        if u1.cmp_series(&u2).unwrap() == std::cmp::Ordering::Less {
            let target = Monomial::x_power(rat_int(-10));
            let e1 = calculus::exp(&u1, &target, budget()).unwrap();
            let e2 = calculus::exp(&u2, &target, budget()).unwrap();
            if let Ok(ord) = e1.cmp_series(&e2) {
                assert_ne!(ord, std::cmp::Ordering::Greater, "case {case}");
            }
        }

        let h = |s: &Series| s.terms().iter().map(|(m, _)| m.height()).max().unwrap_or(0);
        let pos = {
            let mut t = large_series(&mut r);
            if !t.is_positive() {
                t = t.neg();
            }
            t
        };
        let target = pos.mag().unwrap().inv().mul(&Monomial::x_power(rat_int(-6)));
        if let Ok(p) = calculus::power(&pos, &rat_int(3), &target, budget()) {
            assert!(h(&p) <= h(&pos), "case {case}");
        }
        let u = small_series(&mut r, 2);
        let e = calculus::exp(&u, &Monomial::x_power(rat_int(-8)), budget()).unwrap();
        assert!(h(&e) <= h(&u) + 1, "case {case}");

        // power is monotone for positive exponents, up to working accuracy
        let s1 = Series::one().add(&small_series(&mut r, 2));
        let s2 = s1.add(&Series::from_monomial(Monomial::x_power(rat(-1, 2))));
        let target = Monomial::x_power(rat_int(-8));
        if let (Ok(p1), Ok(p2)) = (
            calculus::power(&s1, &rat(3, 2), &target, budget()),
            calculus::power(&s2, &rat(3, 2), &target, budget()),
        ) {
            if let Ok(ord) = p1.cmp_series(&p2) {
                assert_ne!(ord, std::cmp::Ordering::Greater, "case {case}");
            }
        }
    }
    println!("  suite derivative-lemmas: {CASES} cases");
}

/// Support confinement under near-identity composition: with supp T inside
/// G_0 ∪ G^small_1 and small B ≺ x supported in G_1, every monomial of
/// T∘(x+B) stays in G_0 ∪ G^small_1.
pub fn composition_support_confinement() {
    let mut r = rng();
    for case in 0..CASES {
        let mut terms = Vec::new();
        for _ in 0..3 {
            let m = pool_monomial(&mut r);
            if m.height() == 0 || m.is_small() {
                terms.push((m, nonzero_coeff(&mut r)));
            }
        }
        let t = Series::from_terms(terms, Bound::Exact);
        let b = small_series(&mut r, 2);
        let inner = Series::x().add(&b);
        let target = Monomial::x_power(rat_int(-6)).mul(&{
            let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-6))], Bound::Exact);
            Monomial::new(0, rat_int(0), expo).unwrap()
        });
        let composed = match calculus::compose(&t, &inner, &target, budget()) {
            Ok(c) => c,
            Err(_) => continue,
        };
        for (m, _) in composed.terms() {
            assert!(
                m.height() == 0 || m.is_small(),
                "case {case}: {m} escapes in {composed}"
            );
        }
    }
    println!("  suite composition-support: {CASES} cases");
}

/// exp/log and derivative/antiderivative round trips.
pub fn round_trips() {
    let mut r = rng();
    let x_inv = Monomial::x_power(rat_int(-1));
    let e_neg = {
        let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-1))], Bound::Exact);
        Monomial::new(0, rat_int(0), expo).unwrap()
    };
    for case in 0..CASES {
        let u = small_series(&mut r, 3);
        let target = Monomial::x_power(rat_int(-10));
        let e = calculus::exp(&u, &target, budget()).unwrap();
        let back = calculus::log(&e, &target, budget()).unwrap();
        let residual = back.sub(&u);
        assert!(residual.terms().is_empty(), "case {case}: {residual}");

        let mut terms = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let a = r.gen_range(-3i64..=1);
            let b = r.gen_range(0i64..=2);
            let m = Monomial::x_power(rat_int(a)).mul(&e_neg.pow(&rat_int(b)));
            terms.push((m, nonzero_coeff(&mut r)));
        }
        let a_series = Series::from_terms(terms, Bound::Exact);
        let policy = IterationPolicy::new(x_inv.pow(&rat_int(8)).mul(&e_neg.pow(&rat_int(3))));
        let anti = match integrate::antiderivative(&a_series, &policy, budget()) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let d = calculus::derivative(&anti).unwrap();
        let residual = d.sub(&a_series);
        assert!(residual.terms().is_empty(), "case {case}: {residual}");

        if case % 10 == 0 {
            let deep = calculus::compose_log(&a_series);
            if let Ok(anti) = integrate::antiderivative(&deep, &policy, budget()) {
                let d = calculus::derivative(&anti).unwrap();
                let residual = d.sub(&deep);
                assert!(residual.terms().is_empty(), "case {case} deep: {residual}");
            }
        }

        // two antiderivatives of the same monomial differ by a constant;
        // this doubles as the closed-form vs contraction cross-check
        let a_exp = rat(r.gen_range(-4i64..=4), 1);
        let b_exp = loop {
            let b = r.gen_range(-2i64..=2);
            if b != 0 {
                break b;
            }
        };
        let mono = Monomial::x_power(a_exp.clone()).mul(&e_neg.pow(&rat_int(-b_exp)));
        let single = Series::from_monomial(mono);
        let via_general = integrate::antiderivative(&single, &policy, budget());
        let via_closed = integrate::anti_xaebxc(
            &a_exp,
            &rat_int(b_exp),
            &rat_int(1),
            &policy.target_bound,
            budget(),
        );
        if let (Ok(b1), Ok(b2)) = (via_general, via_closed) {
            let diff = b1.sub(&b2);
            assert!(
                diff.terms().iter().all(|(m, _)| m.is_one()),
                "case {case}: difference {diff} is not a constant"
            );
        }
    }
    println!("  suite round-trips: {CASES} cases");
}

fn rand_ratio_set(r: &mut StdRng) -> RatioSet {
    let pool = [
        Monomial::x_power(rat_int(-1)),
        Monomial::x_power(rat(-1, 2)),
        {
            let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-1))], Bound::Exact);
            Monomial::new(0, rat_int(0), expo).unwrap()
        },
        {
            let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-2))], Bound::Exact);
            Monomial::new(0, rat_int(0), expo).unwrap()
        },
        {
            let expo =
                Series::from_terms(vec![(Monomial::exp_iter(1), rat_int(-1))], Bound::Exact);
            Monomial::new(0, rat_int(0), expo).unwrap()
        },
    ];
    loop {
        let picks: Vec<Monomial> = pool
            .iter()
            .filter(|_| r.gen_bool(0.5))
            .cloned()
            .collect();
        if !picks.is_empty() {
            return RatioSet::new(picks).unwrap();
        }
    }
}

/// A series supported on the grid of the given ratios, strictly positive
/// exponents when asked.
fn grid_series(r: &mut StdRng, mu: &RatioSet, strictly_positive: bool) -> Series {
    let n = mu.len();
    let terms: Vec<(Monomial, Rat)> = (0..r.gen_range(1..=3))
        .map(|_| {
            let mut k: Vec<i64> = (0..n).map(|_| r.gen_range(0..=3)).collect();
            if strictly_positive && k.iter().all(|&c| c == 0) {
                k[0] = 1;
            }
            (mu.pow(&MultiIndex::new(k)), nonzero_coeff(r))
        })
        .collect();
    Series::from_terms(terms, Bound::Exact)
}

/// Addenda: idempotence, manifest smallness, height bounds, lsupp
/// stability, and μ-domination order facts.
pub fn addenda_laws() {
    let mut r = rng();
    for case in 0..CASES {
        let mu = rand_ratio_set(&mut r);

        let d1 = derivative_addendum(&mu).unwrap();
        let d2 = derivative_addendum(&d1).unwrap();
        assert_eq!(d1, d2, "case {case}");

        let t = {
            let mut s = grid_series(&mut r, &mu, false);
            let damp = {
                let expo = Series::from_terms(
                    vec![(Monomial::exp_iter(1), rat_int(-3))],
                    Bound::Exact,
                );
                Monomial::new(0, rat_int(0), expo).unwrap()
            };
            if !s.is_small().unwrap() {
                s = s.mul_monomial(&damp);
            }
            s
        };
        if let Ok(bigger) = smallness_addendum(&t, &mu) {
            for (m, _) in t.terms() {
                assert!(
                    is_mu_small(m, &bigger),
                    "case {case}: {m} not small in {bigger}"
                );
            }
            let hmax = mu
                .ratios()
                .iter()
                .chain(t.terms().iter().map(|(m, _)| m))
                .map(|m| m.height())
                .max()
                .unwrap();
            for m in bigger.ratios() {
                assert!(m.height() <= hmax, "case {case}");
            }
            let lsupp_of = |rs: &RatioSet| -> Vec<Monomial> {
                let mut out = Vec::new();
                for m in rs.ratios() {
                    out.extend(lsupp(m).unwrap());
                }
                out
            };
            let base = lsupp_of(&mu);
            for l in lsupp_of(&bigger) {
                assert!(base.contains(&l), "case {case}: new lsupp element {l}");
            }
        }

        let a = Series::one().add(&grid_series(&mut r, &mu, true));
        if let Ok(bigger) = inversion_addendum(&a, &mu) {
            let (_, _, s) = a.decompose_multiplicative().unwrap();
            for (m, _) in s.terms() {
                assert!(is_mu_small(m, &bigger), "case {case}");
            }
        }

        let s1 = grid_series(&mut r, &mu, true);
        let s2 = s1.mul(&grid_series(&mut r, &mu, true));
        let s3 = s2.mul(&grid_series(&mut r, &mu, true));
        if mu_dominates(&s1, &s2, &mu).unwrap() && mu_dominates(&s2, &s3, &mu).unwrap() {
            assert!(mu_dominates(&s1, &s3, &mu).unwrap(), "case {case}");
        }
        if mu_dominates(&s1, &s2, &mu).unwrap() {
            assert_eq!(s1.far_cmp(&s2).unwrap(), FarOrd::FarLarger, "case {case}");
        }
    }
    println!("  suite addenda-laws: {CASES} cases");
}

/// Whether T' > 0 and A < B always force T∘A < T∘B is an open question;
/// this runs the experiment and reports, asserting nothing about the claim.
pub fn monotone_composition_experiment() {
    let mut r = rng();
    let mut less = 0usize;
    let mut undecided = 0usize;
    let mut total = 0usize;
    let tight = TaylorBudget { max_terms: 48 };
    for _ in 0..CASES {
        // integer-power monomials keep the scalar arithmetic rational
        let terms: Vec<(Monomial, Rat)> = (0..r.gen_range(1..=3))
            .map(|_| {
                let a = r.gen_range(0i64..=3);
                let b = r.gen_range(0i64..=1);
                let expo = Series::from_terms(vec![(Monomial::x(), rat_int(b))], Bound::Exact);
                let m = Monomial::x_power(rat_int(a))
                    .mul(&Monomial::new(0, rat_int(0), expo).unwrap());
                (m, rat(r.gen_range(1i64..=4), 1))
            })
            .collect();
        let t = Series::from_terms(terms, Bound::Exact);
        if t.terms().is_empty() || !t.mag().unwrap().is_large() {
            continue;
        }
        let dt = calculus::derivative(&t).unwrap();
        if !dt.is_positive() {
            continue;
        }
        let a = Series::x().add(&small_series(&mut r, 1));
        let b = a.add(&Series::from_monomial(Monomial::x_power(rat(-1, 2))));
        let target = Monomial::x_power(rat_int(-4));
        let (ca, cb) = match (
            calculus::compose(&t, &a, &target, tight),
            calculus::compose(&t, &b, &target, tight),
        ) {
            (Ok(ca), Ok(cb)) => (ca, cb),
            _ => continue,
        };
        total += 1;
        match ca.cmp_series(&cb) {
            Ok(std::cmp::Ordering::Less) => less += 1,
            Ok(std::cmp::Ordering::Greater) => {}
            _ => undecided += 1,
        }
    }
    println!(
        "  experiment monotone-composition: {less} less, {undecided} undecided, \
         {} flipped of {total} (reported, not asserted)",
        total - less - undecided
    );
}
