//! Differentiation, multiplicative inverse, real powers, exp, log,
//! composition, and depth shifts.
//!
//! Every expansion loop here is driven by a target bound: Taylor terms are
//! produced until they fall at or below it, and the loop errors with
//! `BudgetExceeded` when that never happens within the budget — which is
//! the symptom of a bound finer than the working grid descends (e.g. asking
//! for accuracy e^{-x} from powers of x^{-1}).
//!
//! Bounds are propagated honestly: when an input is known only to O(r), the
//! output bound coarsens accordingly, even if a finer target was requested.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::{lsupp, Monomial};
use crate::rational::{rat_pow_rat, Rat};
use crate::series::{Bound, Series};

/// Cap on the number of terms any single expansion loop may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaylorBudget {
    pub max_terms: usize,
}

impl Default for TaylorBudget {
    fn default() -> Self {
        TaylorBudget { max_terms: 256 }
    }
}

// ---------------------------------------------------------------------------
// Derivative
// ---------------------------------------------------------------------------

/// d/dx of a log-free monomial: (x^b e^L)' = (b x^{-1} + L') x^b e^L.
fn monomial_derivative_core(m: &Monomial) -> Result<Series> {
    if m.is_one() {
        return Ok(Series::zero());
    }
    let mut factor = Series::zero();
    if !m.x_exp().is_zero() {
        factor = Series::term(
            Monomial::x_power(Rat::from_integer((-1).into())),
            m.x_exp().clone(),
        );
    }
    if !m.exp_part().terms().is_empty() {
        factor = factor.add(&derivative_core(m.exp_part())?);
    }
    Ok(factor.mul_monomial(m))
}

/// Derivative of a log-free series (exact in, exact out).
fn derivative_core(t: &Series) -> Result<Series> {
    let mut acc = Series::zero();
    for (m, c) in t.terms() {
        acc = acc.add(&monomial_derivative_core(m)?.scalar_mul(c));
    }
    Ok(acc)
}

/// The chain factor (log_M x)' written in core coordinates:
/// the inverse of exp_1(x)·exp_2(x)···exp_M(x).
fn log_chain_factor(depth: u32) -> Monomial {
    let mut expo = Vec::new();
    for j in 0..depth {
        expo.push((Monomial::exp_iter(j), Rat::from_integer((-1).into())));
    }
    let expo = Series::from_terms(expo, Bound::Exact);
    Monomial::new_unchecked(0, Rat::zero(), expo)
}

/// Termwise derivative, recursive in height, with the depth-M chain factor.
///
/// For a truncated input the output bound is max over ℓ in lsupp of the
/// working ratios (or, lacking a context, of the support itself) of ℓ·r.
pub fn derivative(t: &Series) -> Result<Series> {
    let depth = t.depth();
    let core = t.core_series();
    let mut out = derivative_core(&core)?;
    let bound = match core.bound() {
        Bound::Exact => Bound::Exact,
        Bound::OTerm(r) => {
            let mut pool: Vec<Monomial> = Vec::new();
            if let Some(ratios) = t.ctx() {
                for mu in ratios.ratios() {
                    pool.extend(lsupp(&mu.lift_to(depth).with_depth(0))?);
                }
            } else {
                for (m, _) in core.terms() {
                    pool.extend(lsupp(m)?);
                }
                pool.extend(lsupp(r)?);
            }
            let r_prime = pool
                .iter()
                .map(|l| l.mul(r))
                .max_by(|a, b| a.cmp_mono(b))
                .unwrap_or_else(|| r.mul(&Monomial::x_power(Rat::from_integer((-1).into()))));
            Bound::OTerm(r_prime)
        }
    };
    out = Series::from_terms(out.terms().to_vec(), Bound::coarser(out.bound(), &bound));
    if depth > 0 {
        out = out.mul_monomial(&log_chain_factor(depth));
    }
    Ok(out.at_depth(depth).with_ctx(t.ctx_arc()))
}

// ---------------------------------------------------------------------------
// Expansion loops
// ---------------------------------------------------------------------------

/// Sum c_j · S^j until the running power falls at or below `rel_bound`.
/// The coefficient stream is queried lazily; a zero coefficient does not
/// stop the loop, but an exhausted power does. An exactly-zero S gives an
/// exact constant back.
fn power_series_sum(
    s: &Series,
    mut coeff: impl FnMut(usize) -> Rat,
    rel_bound: &Bound,
    budget: TaylorBudget,
) -> Result<Series> {
    let c0 = coeff(0);
    if s.is_zero() {
        return Ok(Series::constant(c0));
    }
    let mut acc = Series::constant(c0);
    if s.terms().is_empty() {
        // s is zero only up to its bound; the sum inherits that uncertainty.
        if let Bound::OTerm(r) = rel_bound {
            acc = acc.add(&Series::zero_bounded(r.clone()));
        }
        return Ok(acc);
    }
    let mut pow = Series::one();
    for j in 1..=budget.max_terms {
        pow = pow.mul(s);
        if let Bound::OTerm(r) = rel_bound {
            pow = pow.truncated_to(r);
        }
        if pow.terms().is_empty() {
            return Ok(acc.add(&pow)); // carries the tail bound
        }
        // a power whose support only grows is the early symptom of an
        // unreachable bound; give up before the terms pile up
        if pow.terms().len() > 8 * budget.max_terms {
            return Err(Error::BudgetExceeded {
                max_terms: budget.max_terms,
            });
        }
        acc = acc.add(&pow.scalar_mul(&coeff(j)));
    }
    Err(Error::BudgetExceeded {
        max_terms: budget.max_terms,
    })
}

/// S^k for integer k, as plain ring arithmetic: exact inputs stay exact
/// when nothing falls under the target, truncated inputs propagate their
/// bounds. Negative k inverts first. A power whose support above the
/// target outgrows the term budget fails rather than grinding.
pub fn int_pow(s: &Series, k: i64, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    if k == 0 {
        return Ok(Series::one());
    }
    if k < 0 {
        let inv = mul_inverse(s, target, budget)?;
        return int_pow(&inv, -k, target, budget);
    }
    let work_cap = 64 * budget.max_terms;
    let mut acc = Series::one();
    let mut base = s.clone();
    let mut k = k as u64;
    loop {
        if acc.terms().len() * base.terms().len() > work_cap
            || base.terms().len() * base.terms().len() > work_cap
        {
            return Err(Error::BudgetExceeded {
                max_terms: budget.max_terms,
            });
        }
        if k & 1 == 1 {
            acc = acc.mul(&base).truncated_to(target);
        }
        k >>= 1;
        if k == 0 {
            return Ok(acc);
        }
        base = base.mul(&base).truncated_to(target);
    }
}

/// Multiplicative inverse: geometric series on the small part of the
/// canonical multiplicative decomposition.
pub fn mul_inverse(a: &Series, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    let (c, g, s) = a.decompose_multiplicative()?;
    let g_inv = g.inv();
    let rel = Bound::coarser(s.bound(), &Bound::OTerm(target.mul(&g)));
    let mut sign = Rat::from_integer(1.into());
    let p = power_series_sum(
        &s,
        |j| {
            if j == 0 {
                Rat::from_integer(1.into())
            } else {
                sign = -sign.clone();
                sign.clone()
            }
        },
        &rel,
        budget,
    )?;
    Ok(p.scalar_mul(&c.recip())
        .mul_monomial(&g_inv)
        .with_ctx(a.ctx_arc()))
}

/// S^b for rational b and positive S: c^b x^{ab} e^{bL} (1+U)^b.
///
/// Integer exponents take the exact ring route; fractional ones expand the
/// binomial series on the small part.
pub fn power(s: &Series, b: &Rat, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    if b.is_zero() {
        return Ok(Series::one());
    }
    if s.terms().is_empty() {
        return if s.is_zero() {
            Err(Error::NotPositive)
        } else {
            Err(Error::UnresolvedOrder)
        };
    }
    if s.leading_coeff()?.is_negative() {
        return Err(Error::NotPositive);
    }
    if b.is_integer() {
        let k = i64::try_from(b.to_integer())
            .map_err(|_| Error::InvalidParameters("exponent out of range".into()))?;
        return int_pow(s, k, target, budget);
    }
    let (c, g, u) = s.decompose_multiplicative()?;
    let c_b = rat_pow_rat(&c, b)
        .ok_or_else(|| Error::NonRationalConstant(format!("({c})^({b})")))?;
    let g_b = g.pow(b);
    let rel = Bound::coarser(u.bound(), &Bound::OTerm(target.mul(&g_b.inv())));
    let mut binom = Rat::from_integer(1.into());
    let p = power_series_sum(
        &u,
        |j| {
            if j > 0 {
                let jr = Rat::from_integer((j as i64).into());
                binom = binom.clone() * (b.clone() - jr.clone() + Rat::from_integer(1.into())) / jr;
            }
            binom.clone()
        },
        &rel,
        budget,
    )?;
    Ok(p.scalar_mul(&c_b).mul_monomial(&g_b).with_ctx(s.ctx_arc()))
}

/// The transmonomial e^L for an exact purely large series L.
pub(crate) fn exp_monomial(l: &Series) -> Monomial {
    if l.terms().is_empty() {
        return Monomial::one();
    }
    let depth = l.depth();
    Monomial::new_unchecked(depth, Rat::zero(), l.core_series())
}

/// e^S = e^L · e^c · (Taylor of e^U); c must be 0 to stay rational.
pub fn exp(s: &Series, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    let (l, c, u) = s.decompose_additive()?;
    if !c.is_zero() {
        return Err(Error::NonRationalConstant(format!("e^({c})")));
    }
    let e_l = exp_monomial(&l);
    let rel = Bound::coarser(u.bound(), &Bound::OTerm(target.mul(&e_l.inv())));
    let mut inv_fact = Rat::from_integer(1.into());
    let p = power_series_sum(
        &u,
        |j| {
            if j > 0 {
                inv_fact = inv_fact.clone() / Rat::from_integer((j as i64).into());
            }
            inv_fact.clone()
        },
        &rel,
        budget,
    )?;
    Ok(p.mul_monomial(&e_l).with_ctx(s.ctx_arc()))
}

/// log T = log a + b·log x + L + log(1+S); a must be 1 to stay rational.
/// A nonzero b raises the depth by one.
pub fn log(t: &Series, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    let (a, g, s) = t.decompose_multiplicative()?;
    if a.is_negative() || a.is_zero() {
        return Err(Error::NotPositive);
    }
    if a != Rat::from_integer(1.into()) {
        return Err(Error::NonRationalConstant(format!("log({a})")));
    }
    let depth = g.depth();
    let rel = Bound::coarser(s.bound(), &Bound::OTerm(target.clone()));
    let mut coeff = Rat::zero();
    let log1p = power_series_sum(
        &s,
        |j| {
            if j > 0 {
                let jr = Rat::from_integer((j as i64).into());
                coeff = if j % 2 == 1 { jr.recip() } else { -jr.recip() };
            }
            coeff.clone()
        },
        &rel,
        budget,
    )?;
    let l_series = g.exp_part().at_depth(depth);
    let inner = l_series.add(&log1p);
    let out = if g.x_exp().is_zero() {
        inner
    } else {
        let log_next = Monomial::log_iter(depth + 1);
        inner
            .lifted_to(depth + 1)
            .add(&Series::term(log_next, g.x_exp().clone()))
    };
    Ok(out.with_ctx(t.ctx_arc()))
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

/// A coarse small target used for first-pass exponent composition.
fn small_probe(target: &Monomial, s_mag: &Monomial) -> Monomial {
    if target.is_small() {
        target.clone()
    } else {
        s_mag.inv()
    }
}

/// Compose a single log-free monomial with a large positive log-free
/// series: (x^b e^L) ∘ S = S^b · e^{L∘S}.
fn compose_monomial_core(
    g: &Monomial,
    s: &Series,
    target: &Monomial,
    budget: TaylorBudget,
) -> Result<Series> {
    if g.is_one() {
        return Ok(Series::one());
    }
    let s_mag = s.mag()?.clone();
    if g.exp_part().terms().is_empty() {
        return power(s, g.x_exp(), target, budget);
    }
    let probe = small_probe(target, &s_mag);
    let l = g.exp_part();
    let mut e = compose_core(l, s, &probe, budget)?;
    let (lam, _, _) = e.decompose_additive()?;
    let e_lam = exp_monomial(&lam);
    // Magnitude estimate of the result, used to refine the exponent target:
    // an exponent error delta shows up as delta·(magnitude of g∘S).
    let mag_est = s_mag.pow(g.x_exp()).mul(&e_lam);
    let needed = target.mul(&mag_est.inv());
    if needed.cmp_mono(&probe) == Ordering::Less {
        e = compose_core(l, s, &needed, budget)?;
    }
    let x_part = if g.x_exp().is_zero() {
        Series::one()
    } else {
        power(s, g.x_exp(), &target.mul(&e_lam.inv()), budget)?
    };
    let exp_part = exp(&e, &target.mul(&s_mag.pow(g.x_exp()).inv()), budget)?;
    Ok(x_part.mul(&exp_part))
}

/// Linear extension of monomial composition over a log-free series.
fn compose_core(t: &Series, s: &Series, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    let mut acc = Series::zero();
    for (g, c) in t.terms() {
        acc = acc.add(&compose_monomial_core(g, s, target, budget)?.scalar_mul(c));
    }
    if let Bound::OTerm(r) = t.bound() {
        // The bound monomial maps through the composition as well.
        let rc = compose_monomial_core(r, s, target, budget)?;
        let mapped = match rc.terms().first() {
            Some((m, _)) => m.clone(),
            None => match rc.bound() {
                Bound::OTerm(b) => b.clone(),
                Bound::Exact => target.clone(),
            },
        };
        if !mapped.is_one() {
            // uncertainty inherited from t's own bound, not a truncation
            acc = acc.add(&Series::zero_bounded(mapped));
        }
    }
    Ok(acc)
}

/// T ∘ S for S large and positive. Depths compose additively: with
/// T = T1∘log_{M1} and S = T2∘log_{M2}, the result is
/// (T1 ∘ S') ∘ log_{M1+M2} where log_{M1}(T2) = S'∘log_{M1}.
///
/// The iterated logarithms of S are computed twice when T carries depth: a
/// coarse pass yields the result's leading magnitude, from which the
/// accuracy actually required of the logarithms follows (an error δ in S'
/// enters the result magnified by roughly the result's own scale).
pub fn compose(t: &Series, s: &Series, target: &Monomial, budget: TaylorBudget) -> Result<Series> {
    match s.terms().first() {
        Some((m, c)) if m.is_large() && c.is_positive() => {}
        _ => return Err(Error::NotLargePositive),
    }
    let m1 = t.depth();
    let m2 = s.depth();
    let target_core = target.lift_to(target.depth().max(m1 + m2)).with_depth(0);
    let t_core = t.core_series();
    let s_mag_core = s.core_series().mag()?.clone();

    let chain = |delta: &Monomial, budget: TaylorBudget| -> Result<Series> {
        let mut w = s.core_series();
        for _ in 0..m1 {
            w = log(&w, delta, budget)?;
        }
        Ok(w.lifted_to(m1).core_series())
    };

    let s_core = if m1 == 0 {
        s.core_series()
    } else {
        let coarse = s_mag_core.inv().with_depth(m1);
        let s_coarse = chain(&coarse, budget)?;
        let mut delta = coarse;
        if let Some((top, _)) = t_core.terms().first() {
            if let Ok(probe) = compose_monomial_core(top, &s_coarse, &target_core, budget) {
                if let Ok(res_mag) = probe.mag() {
                    let refined = target_core.div(res_mag);
                    if refined.is_small() {
                        delta = refined.with_depth(m1);
                    }
                }
            }
        }
        chain(&delta, budget)?
    };

    let out = compose_core(&t_core, &s_core, &target_core, budget)?;
    Ok(out
        .at_depth(m1 + m2)
        .with_ctx(Series::join_ctx(t.ctx_arc(), s.ctx_arc())))
}

/// T ∘ log: exact depth shift one level deeper.
pub fn compose_log(t: &Series) -> Series {
    t.map_monomials(|m| m.wrap_log())
}

/// Rewrite at the smallest depth at which every monomial (and the bound)
/// is expressible, undoing lift steps. Values never change; this is the
/// explicit inverse of lifting for callers that want shallow output.
pub fn lower_depth(t: &Series) -> Series {
    let mut cur = t.clone();
    'outer: loop {
        if cur.depth() == 0 {
            return cur;
        }
        let mut terms = Vec::with_capacity(cur.terms().len());
        for (m, c) in cur.terms() {
            match m.try_lower() {
                Some(l) => terms.push((l, c.clone())),
                None => break 'outer,
            }
        }
        let bound = match cur.bound() {
            Bound::Exact => Bound::Exact,
            Bound::OTerm(r) => match r.try_lower() {
                Some(l) => Bound::OTerm(l),
                // a bound already shallower than the terms stays put
                None if r.depth() < cur.depth() => Bound::OTerm(r.clone()),
                None => break 'outer,
            },
        };
        cur = Series::from_terms(terms, bound).with_ctx(cur.ctx_arc());
    }
    cur
}

/// T ∘ exp: peel one logarithm, or substitute x -> e^x when log-free.
/// Exact in both cases.
pub fn compose_exp(t: &Series) -> Series {
    t.map_monomials(|m| m.unwrap_log())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn xp(b: i64) -> Monomial {
        Monomial::x_power(rat_int(b))
    }

    fn e_pow(l: i64) -> Monomial {
        let expo = Series::from_terms(vec![(Monomial::x(), rat_int(l))], Bound::Exact);
        Monomial::new(0, rat_int(0), expo).unwrap()
    }

    fn budget() -> TaylorBudget {
        TaylorBudget::default()
    }

    #[test]
    fn derivative_of_log() {
        let log_x = Series::from_monomial(Monomial::log_iter(1));
        let d = derivative(&log_x).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].0, xp(-1));
        assert_eq!(d.terms()[0].1, rat_int(1));
        assert!(d.is_exact());
    }

    #[test]
    fn derivative_telescopes_euler_series() {
        // d/dx sum_{k<=K} k! e^x x^{-k-1} = e^x/x + (K+1)! e^x x^{-K-2}
        let k_max = 6i64;
        let mut terms = Vec::new();
        let mut fact = rat_int(1);
        for k in 0..=k_max {
            if k > 0 {
                fact *= rat_int(k);
            }
            terms.push((xp(-k - 1).mul(&e_pow(1)), fact.clone()));
        }
        let s = Series::from_terms(terms, Bound::Exact);
        let d = derivative(&s).unwrap();
        let mut expected = vec![(xp(-1).mul(&e_pow(1)), rat_int(1))];
        let mut tail = rat_int(1);
        for k in 1..=(k_max + 1) {
            tail *= rat_int(k);
        }
        expected.push((xp(-k_max - 2).mul(&e_pow(1)), -tail));
        let expected = Series::from_terms(expected, Bound::Exact);
        assert!(d.eq_series(&expected).unwrap());
    }

    #[test]
    fn derivative_of_nested_exponential() {
        // (e^{-e^x})' = -e^x e^{-e^x}
        let inner = Monomial::exp_iter(1);
        let expo = Series::from_terms(vec![(inner.clone(), rat_int(-1))], Bound::Exact);
        let m = Monomial::new(0, rat_int(0), expo).unwrap();
        let d = derivative(&Series::from_monomial(m.clone())).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].1, rat_int(-1));
        assert_eq!(d.terms()[0].0, inner.mul(&m));
    }

    #[test]
    fn inverse_of_exp_plus_x() {
        // (e^x + x)^{-1} = sum (-1)^j x^j e^{-(j+1)x}
        let a = Series::from_terms(
            vec![(e_pow(1), rat_int(1)), (Monomial::x(), rat_int(1))],
            Bound::Exact,
        );
        let target = e_pow(-9).mul(&xp(0)); // e^{-9x}
        let inv = mul_inverse(&a, &target, budget()).unwrap();
        for j in 0..=7i64 {
            let m = xp(j).mul(&e_pow(-j - 1));
            let expect = if j % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(inv.coeff(&m), expect, "term j={j}");
        }
        // check the product really is 1 up to the bound
        let prod = a.mul(&inv);
        let diff = prod.sub(&Series::one());
        assert!(diff.terms().is_empty(), "residual {diff}");
    }

    #[test]
    fn inverse_of_monomial_is_exact() {
        let one_over = mul_inverse(&Series::one(), &xp(-5), budget()).unwrap();
        assert!(one_over.eq_series(&Series::one()).unwrap());
        assert!(one_over.is_exact());

        let x_inv = mul_inverse(&Series::x(), &xp(-5), budget()).unwrap();
        assert!(x_inv.is_exact());
        assert_eq!(x_inv.terms()[0].0, xp(-1));
    }

    #[test]
    fn power_basics() {
        assert!(power(&Series::zero(), &rat_int(0), &xp(-5), budget())
            .unwrap()
            .eq_series(&Series::one())
            .unwrap());

        let x2 = Series::from_monomial(xp(2));
        let root = power(&x2, &rat(1, 2), &xp(-5), budget()).unwrap();
        assert!(root.eq_series(&Series::x()).unwrap());

        // (1 + x^{-1})^{-2} = 1 - 2x^{-1} + 3x^{-2} - 4x^{-3} + ...
        let s = Series::one().add(&Series::from_monomial(xp(-1)));
        let p = power(&s, &rat_int(-2), &xp(-6), budget()).unwrap();
        for j in 0..=5i64 {
            let expect = rat_int(if j % 2 == 0 { j + 1 } else { -(j + 1) });
            assert_eq!(p.coeff(&xp(-j)), expect, "coefficient at x^-{j}");
        }

        // non-rational constant
        let two = Series::constant(rat_int(2));
        assert!(matches!(
            power(&two, &rat(1, 2), &xp(-5), budget()),
            Err(Error::NonRationalConstant(_))
        ));
        // not positive
        let neg = Series::constant(rat_int(-1));
        assert!(matches!(
            power(&neg, &rat(1, 2), &xp(-5), budget()),
            Err(Error::NotPositive)
        ));
    }

    #[test]
    fn exp_basics() {
        assert!(exp(&Series::zero(), &xp(-5), budget())
            .unwrap()
            .eq_series(&Series::one())
            .unwrap());

        let ex = exp(&Series::x(), &xp(-5), budget()).unwrap();
        assert!(ex.is_exact());
        assert_eq!(ex.terms().len(), 1);
        assert_eq!(ex.terms()[0].0, e_pow(1));

        // nonzero constant term refuses
        assert!(matches!(
            exp(&Series::one(), &xp(-5), budget()),
            Err(Error::NonRationalConstant(_))
        ));

        // order-preserving on small arguments: exp(x^{-1}) > exp(-x^{-1})
        let s1 = Series::from_monomial(xp(-1));
        let e1 = exp(&s1, &xp(-8), budget()).unwrap();
        let e2 = exp(&s1.neg(), &xp(-8), budget()).unwrap();
        assert_eq!(e1.cmp_series(&e2).unwrap(), Ordering::Greater);
    }

    #[test]
    fn log_basics() {
        let lx = log(&Series::x(), &xp(-5), budget()).unwrap();
        assert_eq!(lx.terms().len(), 1);
        assert_eq!(lx.terms()[0].0, Monomial::log_iter(1));

        // log(e^x (1 + x^{-1})) = x + x^{-1} - x^{-2}/2 + x^{-3}/3 - ...
        let t = Series::from_terms(
            vec![(e_pow(1), rat_int(1)), (e_pow(1).mul(&xp(-1)), rat_int(1))],
            Bound::Exact,
        );
        let l = log(&t, &xp(-6), budget()).unwrap();
        assert_eq!(l.coeff(&Monomial::x()), rat_int(1));
        for j in 1..=5i64 {
            let expect = rat(if j % 2 == 1 { 1 } else { -1 }, j);
            assert_eq!(l.coeff(&xp(-j)), expect, "coefficient at x^-{j}");
        }

        assert!(matches!(
            log(&Series::constant(rat_int(2)), &xp(-5), budget()),
            Err(Error::NonRationalConstant(_))
        ));
        assert!(matches!(
            log(&Series::x().neg(), &xp(-5), budget()),
            Err(Error::NotPositive)
        ));
    }

    #[test]
    fn exp_log_round_trip() {
        // log(exp(T)) = T for T with zero constant term. The target for
        // exp is absolute, so it carries the e^{2x} scale of the result.
        let t = Series::from_terms(
            vec![
                (Monomial::x(), rat_int(2)),
                (xp(-1), rat(3, 2)),
                (xp(-2), rat_int(-1)),
            ],
            Bound::Exact,
        );
        let e = exp(&t, &e_pow(2).mul(&xp(-8)), budget()).unwrap();
        let back = log(&e, &xp(-8), budget()).unwrap();
        let diff = back.sub(&t);
        assert!(diff.terms().is_empty(), "round trip residual {diff}");
    }

    #[test]
    fn compose_identity_and_polynomial() {
        let s = Series::from_terms(
            vec![(Monomial::x(), rat_int(1)), (Monomial::one(), rat_int(1))],
            Bound::Exact,
        );
        // x ∘ S = S
        let c = compose(&Series::x(), &s, &xp(-5), budget()).unwrap();
        assert!(c.eq_series(&s).unwrap());

        // x^2 ∘ (x+1) = x^2 + 2x + 1
        let x2 = Series::from_monomial(xp(2));
        let c = compose(&x2, &s, &xp(-5), budget()).unwrap();
        let expected = Series::from_terms(
            vec![
                (xp(2), rat_int(1)),
                (Monomial::x(), rat_int(2)),
                (Monomial::one(), rat_int(1)),
            ],
            Bound::Exact,
        );
        assert!(c.eq_series(&expected).unwrap());

        // small inner series refuses
        assert!(matches!(
            compose(&x2, &Series::from_monomial(xp(-1)), &xp(-5), budget()),
            Err(Error::NotLargePositive)
        ));
    }

    #[test]
    fn depth_shifts() {
        let lx = compose_log(&Series::x());
        assert_eq!(lx.terms()[0].0, Monomial::log_iter(1));
        let back = compose_exp(&lx);
        assert!(back.eq_series(&Series::x()).unwrap());

        // compose_exp(x^b) = e^{bx}
        let xb = Series::from_monomial(Monomial::x_power(rat(5, 2)));
        let e = compose_exp(&xb);
        assert_eq!(e.terms().len(), 1);
        let m = &e.terms()[0].0;
        assert!(m.x_exp().is_zero());
        assert_eq!(m.exp_part().terms()[0].1, rat(5, 2));
    }

    #[test]
    fn budget_exceeded_when_bound_unreachable() {
        // 1/(1 - x^{-1}) to accuracy e^{-x}: powers of x^{-1} never get there
        let a = Series::one().sub(&Series::from_monomial(xp(-1)));
        let err = mul_inverse(&a, &e_pow(-1), TaylorBudget { max_terms: 64 }).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
