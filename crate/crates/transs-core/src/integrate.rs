//! Antiderivatives.
//!
//! Three layers: a closed-form family for x^a e^{b x^c}; integration of
//! e^T for large T through the contraction ansatz S = (e^T/T')(1+U); and
//! the general integral, which conjugates by exp until the integrand is
//! power-free, integrates termwise, and composes back with log. The
//! integration constant is always 0.

use num_traits::{One, Signed, Zero};

use crate::calculus::{self, TaylorBudget};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::Rat;
use crate::series::{Bound, Series};
use crate::solve::{solve_linear, IterationPolicy};

/// Γ(j-u)/Γ(1-u) as the exact product (1-u)(2-u)···(j-1-u).
pub fn gamma_ratio(j: u64, u: &Rat) -> Rat {
    let mut acc = Rat::one();
    for i in 1..j {
        acc *= Rat::from_integer(i.into()) - u.clone();
    }
    acc
}

/// Antiderivative of x^a e^{b x^c} (c > 0, b ≠ 0):
/// sum_j Γ(j-(a+1)/c)/(Γ(1-(a+1)/c)·c·b^j) · x^{a+1-jc} e^{b x^c}.
/// Finite exactly when (a+1)/c is a positive integer.
pub fn anti_xaebxc(
    a: &Rat,
    b: &Rat,
    c: &Rat,
    target: &Monomial,
    budget: TaylorBudget,
) -> Result<Series> {
    if !c.is_positive() || b.is_zero() {
        return Err(Error::InvalidParameters(
            "need c > 0 and b != 0 in x^a e^{b x^c}".into(),
        ));
    }
    let u = (a.clone() + Rat::one()) / c.clone();
    let expo = Series::term(Monomial::x_power(c.clone()), b.clone());
    let e_bxc = Monomial::new_unchecked(0, Rat::zero(), expo);
    let mut terms = Vec::new();
    let mut b_pow = Rat::one();
    for j in 1..=(budget.max_terms as u64) {
        b_pow *= b.clone();
        let coeff = gamma_ratio(j, &u) / (c.clone() * b_pow.clone());
        if coeff.is_zero() {
            // (a+1)/c hit a positive integer: the sum is finite and exact.
            return Ok(Series::from_terms(terms, Bound::Exact));
        }
        let x_exp = a.clone() + Rat::one() - Rat::from_integer(j.into()) * c.clone();
        let m = Monomial::x_power(x_exp).mul(&e_bxc);
        if m.cmp_mono(target) != std::cmp::Ordering::Greater {
            return Ok(Series::from_terms(terms, Bound::OTerm(target.clone())));
        }
        terms.push((m, coeff));
    }
    Err(Error::BudgetExceeded {
        max_terms: budget.max_terms,
    })
}

/// Antiderivative of e^T for large log-free T: S = (e^T/T')(1+U) where
/// U solves U = T''/(T')² + (T''/(T')²)·U - U'/T'.
pub fn anti_exp_large(t: &Series, policy: &IterationPolicy, budget: TaylorBudget) -> Result<Series> {
    match t.terms().first() {
        Some((m, _)) if m.is_large() => {}
        _ => return Err(Error::NotLarge),
    }
    let r_out = &policy.target_bound;
    let dt = calculus::derivative(t)?;
    let dt2 = calculus::derivative(&dt)?;
    let mag_dt = dt.mag()?.clone();
    let (lam, _, _) = t.decompose_additive()?;
    let e_lam = calculus::exp_monomial(&lam);
    // e^T/T' has magnitude about e^Λ/mag(T'); U is relative to that.
    let lead = e_lam.div(&mag_dt);
    let r_u = r_out.div(&lead);
    let inv_target = r_u.div(&mag_dt);
    let inv_dt = calculus::mul_inverse(&dt, &inv_target, budget)?;
    let a = dt2.mul(&inv_dt).mul(&inv_dt).truncated_to(&r_u);
    let u_policy = IterationPolicy {
        target_bound: r_u.clone(),
        max_iterations: policy.max_iterations,
        diagnostics: policy.diagnostics,
    };
    let u = solve_linear(
        |y| {
            let dy = calculus::derivative(y)?;
            Ok(a.mul(y).sub(&dy.mul(&inv_dt)).truncated_to(&r_u))
        },
        &a,
        &u_policy,
    )?;
    let e_t = calculus::exp(t, &r_out.mul(&mag_dt), budget)?;
    let s = e_t
        .mul(&inv_dt)
        .mul(&Series::one().add(&u))
        .truncated_to(r_out);
    Ok(s)
}

/// Termwise antiderivative of a power-free series (all x-exponents zero).
/// The constant term integrates to c·x.
pub fn anti_powerfree(t: &Series, policy: &IterationPolicy, budget: TaylorBudget) -> Result<Series> {
    if t.terms().iter().any(|(m, _)| !m.x_exp().is_zero()) {
        return Err(Error::NotPowerFree);
    }
    let mut acc = Series::zero();
    for (m, c) in t.terms() {
        let piece = if m.is_one() {
            Series::term(Monomial::x(), c.clone())
        } else {
            let expo = m.exp_part().at_depth(m.depth());
            anti_exp_large(&expo, policy, budget)?.scalar_mul(c)
        };
        acc = acc.add(&piece);
    }
    if let Bound::OTerm(r) = t.bound() {
        // Each tail monomial e^L integrates to something ≍ e^L/L', and
        // x·L' ≻ 1 for large L, so r·x bounds the integral of the tail.
        // This is genuine new uncertainty, not a truncation request.
        acc = acc.add(&Series::zero_bounded(r.mul(&Monomial::x())));
    }
    Ok(acc)
}

/// Antiderivative of an arbitrary series.
///
/// For depth-M input A: conjugate with exp M+1 times, multiply by the
/// chain factor exp_1(x)···exp_{M+1}(x), integrate the now power-free
/// series, and wrap the result back under log_{M+1}.
pub fn antiderivative(a: &Series, policy: &IterationPolicy, budget: TaylorBudget) -> Result<Series> {
    if a.is_zero() {
        return Ok(Series::zero());
    }
    let depth = a.depth();
    let mut conj = a.clone();
    for _ in 0..=depth {
        conj = calculus::compose_exp(&conj);
    }
    let chain = {
        let expo = Series::from_terms(
            (0..=depth)
                .map(|j| (Monomial::exp_iter(j), Rat::one()))
                .collect(),
            Bound::Exact,
        );
        Monomial::new_unchecked(0, Rat::zero(), expo)
    };
    let integrand = conj.mul_monomial(&chain);
    let mut target_core = Series::from_monomial(policy.target_bound.clone());
    for _ in 0..=depth {
        target_core = calculus::compose_exp(&target_core);
    }
    let inner_policy = IterationPolicy {
        target_bound: target_core.mag()?.clone(),
        max_iterations: policy.max_iterations,
        diagnostics: policy.diagnostics,
    };
    let s = anti_powerfree(&integrand, &inner_policy, budget)?;
    let mut out = s;
    for _ in 0..=depth {
        out = calculus::compose_log(&out);
    }
    Ok(out)
}
