//! Fixed-point iteration on truncated series.
//!
//! The map Φ is supplied as a closure (the CLI builds one from an
//! expression with an unknown). Iterates are truncated to the target bound
//! and the loop stops at the first iterate whose stored terms repeat —
//! observational stabilization above the bound. Contractivity is not proved,
//! it is monitored: with diagnostics on, each difference of consecutive
//! iterates must μ-dominate the next, μ being the ratio context carried by
//! the series themselves.

use crate::error::{Error, Result};
use crate::grid::{mu_dominates, smallness_addendum, RatioSet};
use crate::monomial::Monomial;
use crate::series::Series;

#[derive(Debug, Clone)]
pub struct IterationPolicy {
    pub target_bound: Monomial,
    pub max_iterations: usize,
    pub diagnostics: bool,
}

impl IterationPolicy {
    pub fn new(target_bound: Monomial) -> Self {
        IterationPolicy {
            target_bound,
            max_iterations: 64,
            diagnostics: false,
        }
    }
}

fn supports_of(s: &Series) -> Vec<String> {
    s.terms().iter().map(|(m, _)| m.to_string()).collect()
}

/// Grow the diagnostic ratio set so the series is manifestly small over it:
/// the smallness addendum when the supports sit on the grid, otherwise the
/// small support monomials themselves.
fn enrich(mu: RatioSet, s: &Series) -> RatioSet {
    if let Ok(bigger) = smallness_addendum(s, &mu) {
        return bigger;
    }
    let smalls: Vec<Monomial> = s
        .terms()
        .iter()
        .map(|(m, _)| m.clone())
        .filter(|m| m.is_small() && !crate::grid::is_mu_small(m, &mu))
        .collect();
    match RatioSet::new(smalls) {
        Ok(extra) => mu.union(&extra),
        Err(_) => mu,
    }
}

/// Iterate T ↦ Φ(T) from the seed until the terms above the target bound
/// stop changing.
pub fn fixed_point<F>(mut phi: F, seed: &Series, policy: &IterationPolicy) -> Result<Series>
where
    F: FnMut(&Series) -> Result<Series>,
{
    let mut cur = seed.truncated_to(&policy.target_bound);
    let mut prev_diff: Option<Series> = None;
    let mut history: Vec<Vec<String>> = Vec::new();
    let mut diag_mu: Option<RatioSet> = None;
    for iteration in 1..=policy.max_iterations {
        let next = phi(&cur)?.truncated_to(&policy.target_bound);
        let diff = next.sub(&cur);
        if diff.terms().is_empty() {
            return Ok(next);
        }
        if policy.diagnostics {
            if let Some(prev) = &prev_diff {
                // Working grid: the context carried by the iterates, grown
                // by smallness addenda as new support monomials show up.
                let mut mu = diag_mu
                    .or_else(|| diff.ctx().or_else(|| prev.ctx()).cloned())
                    .unwrap_or_else(RatioSet::empty);
                mu = enrich(mu, prev);
                mu = enrich(mu, &diff);
                // A verified domination failure means the map is not
                // contracting on this grid; an unverifiable step (supports
                // off the grid) is skipped, monitoring is best-effort.
                if let Ok(false) = mu_dominates(prev, &diff, &mu) {
                    history.push(supports_of(&diff));
                    return Err(Error::NoStabilization {
                        iterations: iteration,
                        last_diff_supports: history,
                    });
                }
                diag_mu = Some(mu);
            }
        }
        history.push(supports_of(&diff));
        if history.len() > 3 {
            history.remove(0);
        }
        prev_diff = Some(diff);
        cur = next;
    }
    Err(Error::NoStabilization {
        iterations: policy.max_iterations,
        last_diff_supports: history,
    })
}

/// Linear form: solve Y = Φ(Y) + T0 by iterating from T0.
pub fn solve_linear<F>(mut phi_linear: F, t0: &Series, policy: &IterationPolicy) -> Result<Series>
where
    F: FnMut(&Series) -> Result<Series>,
{
    fixed_point(|y| Ok(phi_linear(y)?.add(t0)), &Series::zero(), policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use crate::series::Bound;

    fn xp(b: i64) -> Monomial {
        Monomial::x_power(rat_int(b))
    }

    #[test]
    fn zero_map_returns_t0() {
        let t0 = Series::from_terms(
            vec![(Monomial::x(), rat_int(2)), (xp(-1), rat(1, 3))],
            Bound::Exact,
        );
        let policy = IterationPolicy::new(xp(-4));
        let got = solve_linear(|_| Ok(Series::zero()), &t0, &policy).unwrap();
        assert_eq!(got.terms(), t0.truncated_to(&xp(-4)).terms());
    }

    #[test]
    fn no_stabilization_reports() {
        // Y ↦ Y + 1 never stabilizes
        let policy = IterationPolicy {
            target_bound: xp(-2),
            max_iterations: 8,
            diagnostics: false,
        };
        let err = fixed_point(|y| Ok(y.add(&Series::one())), &Series::zero(), &policy).unwrap_err();
        assert!(matches!(err, Error::NoStabilization { iterations: 8, .. }));
    }

    #[test]
    fn geometric_fixed_point() {
        // Y = x^{-1}·Y + 1 has solution 1 + x^{-1} + x^{-2} + ...
        let policy = IterationPolicy::new(xp(-5));
        let got = solve_linear(
            |y| Ok(y.mul(&Series::from_monomial(xp(-1)))),
            &Series::one(),
            &policy,
        )
        .unwrap();
        for j in 0..=4i64 {
            assert_eq!(got.coeff(&xp(-j)), rat_int(1));
        }
    }

    #[test]
    fn finer_bound_extends_without_changing_coefficients() {
        let solve_at = |bound: Monomial| {
            solve_linear(
                |y| {
                    Ok(y
                        .mul(&Series::from_monomial(xp(-1)))
                        .add(&y.mul(&y).mul(&Series::from_monomial(xp(-1))).scalar_mul(&rat(1, 2))))
                },
                &Series::one(),
                &IterationPolicy::new(bound),
            )
            .unwrap()
        };
        let coarse = solve_at(xp(-4));
        let fine = solve_at(xp(-9));
        for (m, c) in coarse.terms() {
            assert_eq!(&fine.coeff(m), c, "coefficient of {m} changed on refinement");
        }
        assert!(fine.terms().len() > coarse.terms().len());
    }
}
