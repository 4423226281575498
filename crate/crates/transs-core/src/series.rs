//! Grid-based transseries values: finite term maps with an accuracy bound.
//!
//! A `Series` stores finitely many (monomial, coefficient) pairs in strictly
//! descending order together with a `Bound`. An `Exact` bound means the
//! value is the finite sum of the stored terms. An `OTerm(r)` bound means
//! every unrepresented term of the true value is far-smaller-or-comparable
//! to `r`; all stored terms are strictly far larger than `r`. This is the
//! truncation contract that keeps every computation finite.
//!
//! An optional ratio context tags the series with the grid generators it was
//! computed over. It never affects values; the solver uses it for its
//! contraction diagnostics and the derivative uses it to propagate bounds.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::grid::RatioSet;
use crate::monomial::{depth_var, Monomial};
use crate::rational::Rat;

/// Truncation contract of a series.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    /// The stored terms are the whole value.
    Exact,
    /// All unrepresented terms are ≼ the given monomial (which is never 1).
    OTerm(Monomial),
}

impl Bound {
    /// The coarser (≻-larger) of two bounds; `Exact` is the finest.
    pub fn coarser(a: &Bound, b: &Bound) -> Bound {
        match (a, b) {
            (Bound::Exact, other) | (other, Bound::Exact) => other.clone(),
            (Bound::OTerm(r), Bound::OTerm(s)) => {
                if r.cmp_mono(s) == Ordering::Less {
                    Bound::OTerm(s.clone())
                } else {
                    Bound::OTerm(r.clone())
                }
            }
        }
    }

    /// Multiply an O-term bound by a monomial; exact stays exact.
    pub fn mul_monomial(&self, g: &Monomial) -> Bound {
        match self {
            Bound::Exact => Bound::Exact,
            Bound::OTerm(r) => Bound::OTerm(r.mul(g)),
        }
    }

    pub fn as_oterm(&self) -> Option<&Monomial> {
        match self {
            Bound::Exact => None,
            Bound::OTerm(r) => Some(r),
        }
    }
}

/// Far-comparison outcome (magnitude level).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FarOrd {
    /// A ≺ B.
    FarSmaller,
    /// A ≻ B.
    FarLarger,
    /// A ≍ B; `asymptotic` is set when additionally dom A = dom B (A ∼ B).
    Comparable { asymptotic: bool },
}

/// Classification flags of a series, applied to its stored terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub small: bool,
    pub large: bool,
    pub purely_large: bool,
    pub power_free: bool,
}

#[derive(Clone)]
pub struct Series {
    terms: Vec<(Monomial, Rat)>,
    bound: Bound,
    ctx: Option<Arc<RatioSet>>,
}

impl Series {
    pub fn zero() -> Self {
        Series {
            terms: Vec::new(),
            bound: Bound::Exact,
            ctx: None,
        }
    }

    /// Zero stored terms under a bound: an unknown value ≼ r.
    pub fn zero_bounded(r: Monomial) -> Self {
        Series {
            terms: Vec::new(),
            bound: Bound::OTerm(r),
            ctx: None,
        }
    }

    pub fn one() -> Self {
        Series::constant(Rat::from_integer(1.into()))
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            return Series::zero();
        }
        Series {
            terms: vec![(Monomial::one(), c)],
            bound: Bound::Exact,
            ctx: None,
        }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Series {
            terms: vec![(m, Rat::from_integer(1.into()))],
            bound: Bound::Exact,
            ctx: None,
        }
    }

    /// The variable x as a series.
    pub fn x() -> Self {
        Series::from_monomial(Monomial::x())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        Series::from_terms(vec![(m, c)], Bound::Exact)
    }

    /// Normalize a term list: lift every key to the deepest depth present,
    /// sort descending, merge equal monomials, drop zero coefficients and
    /// terms absorbed by the bound.
    pub fn from_terms(mut terms: Vec<(Monomial, Rat)>, bound: Bound) -> Self {
        debug_assert!(bound.as_oterm().map_or(true, |r| !r.is_one()));
        let dmax = terms.iter().map(|(m, _)| m.depth()).max().unwrap_or(0);
        if terms
            .iter()
            .any(|(m, _)| !m.is_one() && m.depth() != dmax)
        {
            for (m, _) in terms.iter_mut() {
                *m = m.lift_to(dmax);
            }
        }
        terms.sort_by(|a, b| b.0.cmp_mono(&a.0));
        let mut merged: Vec<(Monomial, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some((last, acc)) if last.cmp_mono(&m) == Ordering::Equal => {
                    *acc += c;
                    if acc.is_zero() {
                        merged.pop();
                    }
                }
                _ => merged.push((m, c)),
            }
        }
        if let Bound::OTerm(r) = &bound {
            merged.retain(|(m, _)| m.cmp_mono(r) == Ordering::Greater);
        }
        Series {
            terms: merged,
            bound,
            ctx: None,
        }
    }

    pub fn terms(&self) -> &[(Monomial, Rat)] {
        &self.terms
    }

    pub fn bound(&self) -> &Bound {
        &self.bound
    }

    pub fn ctx(&self) -> Option<&RatioSet> {
        self.ctx.as_deref()
    }

    pub fn with_ctx(mut self, ctx: Option<Arc<RatioSet>>) -> Self {
        self.ctx = ctx;
        self
    }

    pub fn forget_ctx(mut self) -> Self {
        self.ctx = None;
        self
    }

    pub(crate) fn ctx_arc(&self) -> Option<Arc<RatioSet>> {
        self.ctx.clone()
    }

    pub(crate) fn join_ctx(a: Option<Arc<RatioSet>>, b: Option<Arc<RatioSet>>) -> Option<Arc<RatioSet>> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                if Arc::ptr_eq(&a, &b) || *a == *b {
                    Some(a)
                } else {
                    Some(Arc::new(a.union(&b)))
                }
            }
        }
    }

    /// True exact zero: no terms and nothing hidden.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && matches!(self.bound, Bound::Exact)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.bound, Bound::Exact)
    }

    /// Common logarithmic depth of the stored terms (units are depth 0).
    pub fn depth(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.depth()).max().unwrap_or(0)
    }

    /// Leading-term sign of an exact series. For truncated series use
    /// `cmp_series` which reports unresolved cases.
    pub(crate) fn sign_exact(&self) -> Ordering {
        match self.terms.first() {
            None => Ordering::Equal,
            Some((_, c)) => c.cmp(&Rat::zero()),
        }
    }

    /// Total order on exact series by leading difference; both operands are
    /// assumed exact (monomial exponents always are).
    pub(crate) fn cmp_exact(&self, other: &Series) -> Ordering {
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.terms.get(i), other.terms.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, c)), None) => return c.cmp(&Rat::zero()),
                (None, Some((_, c))) => return Rat::zero().cmp(c),
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp_mono(mb) {
                    Ordering::Greater => return ca.cmp(&Rat::zero()),
                    Ordering::Less => return Rat::zero().cmp(cb),
                    Ordering::Equal => {
                        if ca != cb {
                            return ca.cmp(cb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            };
        }
    }

    pub fn neg(&self) -> Series {
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
            bound: self.bound.clone(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn scalar_mul(&self, s: &Rat) -> Series {
        if s.is_zero() {
            // The bound still limits what the dropped value could hide, and
            // 0·unknown is 0, so the scalar zero collapses everything.
            return Series::zero().with_ctx(self.ctx.clone());
        }
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())).collect(),
            bound: self.bound.clone(),
            ctx: self.ctx.clone(),
        }
    }

    /// Termwise sum. The bound coarsens to the larger of the two; stored
    /// terms that fall under it are absorbed.
    pub fn add(&self, other: &Series) -> Series {
        let bound = Bound::coarser(&self.bound, &other.bound);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Series::from_terms(terms, bound)
            .with_ctx(Series::join_ctx(self.ctx.clone(), other.ctx.clone()))
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    /// Convolution product.
    ///
    /// The result bound is the coarsest of r_A·mag(B), r_B·mag(A) and
    /// r_A·r_B over the bounds actually present; product terms at or below
    /// it are discarded.
    pub fn mul(&self, other: &Series) -> Series {
        let ctx = Series::join_ctx(self.ctx.clone(), other.ctx.clone());
        if self.is_zero() || other.is_zero() {
            return Series::zero().with_ctx(ctx);
        }
        let mut bound = Bound::Exact;
        if let Bound::OTerm(ra) = &self.bound {
            if let Some((mb, _)) = other.terms.first() {
                bound = Bound::coarser(&bound, &Bound::OTerm(ra.mul(mb)));
            }
            if let Bound::OTerm(rb) = &other.bound {
                bound = Bound::coarser(&bound, &Bound::OTerm(ra.mul(rb)));
            }
        }
        if let Bound::OTerm(rb) = &other.bound {
            if let Some((ma, _)) = self.terms.first() {
                bound = Bound::coarser(&bound, &Bound::OTerm(rb.mul(ma)));
            }
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca.clone() * cb.clone()));
            }
        }
        Series::from_terms(terms, bound).with_ctx(ctx)
    }

    /// Multiply by a single monomial: keys shift, the bound shifts.
    pub fn mul_monomial(&self, g: &Monomial) -> Series {
        Series {
            terms: self.terms.iter().map(|(m, c)| (m.mul(g), c.clone())).collect(),
            bound: self.bound.mul_monomial(g),
            ctx: self.ctx.clone(),
        }
    }

    /// Coarsen the bound to at least O(r) and drop absorbed terms. An exact
    /// series that loses no terms stays exact: the stored sum still is the
    /// whole value.
    pub fn truncated_to(&self, r: &Monomial) -> Series {
        if matches!(self.bound, Bound::Exact)
            && self
                .terms
                .iter()
                .all(|(m, _)| m.cmp_mono(r) == Ordering::Greater)
        {
            return self.clone();
        }
        let bound = Bound::coarser(&self.bound, &Bound::OTerm(r.clone()));
        Series::from_terms(self.terms.clone(), bound).with_ctx(self.ctx.clone())
    }

    /// Largest stored monomial.
    pub fn mag(&self) -> Result<&Monomial> {
        self.terms.first().map(|(m, _)| m).ok_or(Error::ZeroSeries)
    }

    /// Dominant term (coefficient, monomial).
    pub fn dom(&self) -> Result<(&Rat, &Monomial)> {
        self.terms.first().map(|(m, c)| (c, m)).ok_or(Error::ZeroSeries)
    }

    pub fn leading_coeff(&self) -> Result<&Rat> {
        self.terms.first().map(|(_, c)| c).ok_or(Error::ZeroSeries)
    }

    /// Sign of the value: sign of the dominant coefficient.
    pub fn is_positive(&self) -> bool {
        self.sign_exact() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign_exact() == Ordering::Less
    }

    fn check_small_split(&self) -> Result<()> {
        match &self.bound {
            Bound::Exact => Ok(()),
            Bound::OTerm(r) if r.is_small() => Ok(()),
            _ => Err(Error::LargeTailUnresolved),
        }
    }

    /// Canonical additive decomposition A = L + c + S with L purely large
    /// and exact, c the constant term, S small and carrying A's bound.
    pub fn decompose_additive(&self) -> Result<(Series, Rat, Series)> {
        self.check_small_split()?;
        let mut large = Vec::new();
        let mut small = Vec::new();
        let mut constant = Rat::zero();
        for (m, c) in &self.terms {
            match m.cmp_one() {
                Ordering::Greater => large.push((m.clone(), c.clone())),
                Ordering::Equal => constant = c.clone(),
                Ordering::Less => small.push((m.clone(), c.clone())),
            }
        }
        Ok((
            Series::from_terms(large, Bound::Exact).with_ctx(self.ctx.clone()),
            constant,
            Series::from_terms(small, self.bound.clone()).with_ctx(self.ctx.clone()),
        ))
    }

    /// Canonical multiplicative decomposition T = a·g·(1+S) with S small.
    pub fn decompose_multiplicative(&self) -> Result<(Rat, Monomial, Series)> {
        let (lead, mag) = {
            let (c, m) = self.dom()?;
            (c.clone(), m.clone())
        };
        let g_inv = mag.inv();
        let a_inv = lead.recip();
        let rest: Vec<(Monomial, Rat)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(m, c)| (m.mul(&g_inv), c.clone() * a_inv.clone()))
            .collect();
        let bound = self.bound.mul_monomial(&g_inv);
        Ok((
            lead,
            mag,
            Series::from_terms(rest, bound).with_ctx(self.ctx.clone()),
        ))
    }

    /// Ordering of values via the sign of the difference.
    ///
    /// Equal stored terms under equal bounds count as equal (observational
    /// equality); a difference hidden entirely below an inexact bound is
    /// unresolved.
    pub fn cmp_series(&self, other: &Series) -> Result<Ordering> {
        let d = self.sub(other);
        if let Some((_, c)) = d.terms.first() {
            return Ok(c.cmp(&Rat::zero()));
        }
        if matches!(d.bound, Bound::Exact) {
            return Ok(Ordering::Equal);
        }
        if self.terms == other.terms && self.bound == other.bound {
            return Ok(Ordering::Equal);
        }
        Err(Error::UnresolvedOrder)
    }

    pub fn eq_series(&self, other: &Series) -> Result<bool> {
        Ok(self.cmp_series(other)? == Ordering::Equal)
    }

    /// Magnitude-level comparison; flags dominance equality (∼).
    pub fn far_cmp(&self, other: &Series) -> Result<FarOrd> {
        match (self.terms.first(), other.terms.first()) {
            (Some((ma, ca)), Some((mb, cb))) => Ok(match ma.cmp_mono(mb) {
                Ordering::Greater => FarOrd::FarLarger,
                Ordering::Less => FarOrd::FarSmaller,
                Ordering::Equal => FarOrd::Comparable { asymptotic: ca == cb },
            }),
            (None, None) => {
                if matches!(self.bound, Bound::Exact) && matches!(other.bound, Bound::Exact) {
                    Ok(FarOrd::Comparable { asymptotic: true })
                } else {
                    Err(Error::UnresolvedOrder)
                }
            }
            (None, Some((mb, _))) => match &self.bound {
                Bound::Exact => Ok(FarOrd::FarSmaller),
                Bound::OTerm(r) if r.cmp_mono(mb) == Ordering::Less => Ok(FarOrd::FarSmaller),
                _ => Err(Error::UnresolvedOrder),
            },
            (Some((ma, _)), None) => match &other.bound {
                Bound::Exact => Ok(FarOrd::FarLarger),
                Bound::OTerm(r) if r.cmp_mono(ma) == Ordering::Less => Ok(FarOrd::FarLarger),
                _ => Err(Error::UnresolvedOrder),
            },
        }
    }

    /// Classification flags over the stored terms. Requires the bound to be
    /// exact or smaller than 1 so that smallness statements are meaningful.
    pub fn classify(&self) -> Result<Classification> {
        self.check_small_split()?;
        let small = self.terms.iter().all(|(m, _)| m.is_small());
        let purely_large = self.terms.iter().all(|(m, _)| m.is_large());
        let large = self
            .terms
            .first()
            .map(|(m, _)| m.is_large())
            .unwrap_or(false);
        let power_free = self.terms.iter().all(|(m, _)| m.x_exp().is_zero());
        Ok(Classification {
            small,
            large,
            purely_large,
            power_free,
        })
    }

    pub fn is_small(&self) -> Result<bool> {
        Ok(self.classify()?.small)
    }

    /// Rewrite the whole series at a deeper logarithmic depth.
    pub fn lifted_to(&self, depth: u32) -> Series {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.lift_to(depth), c.clone()))
            .collect();
        let bound = match &self.bound {
            Bound::Exact => Bound::Exact,
            Bound::OTerm(r) => Bound::OTerm(r.lift_to(depth)),
        };
        Series {
            terms,
            bound,
            ctx: self.ctx.clone(),
        }
    }

    /// Strip the stored terms (and bound) to depth 0, keeping cores.
    /// Representational; used by depth-shifting operations.
    pub(crate) fn core_series(&self) -> Series {
        self.map_monomials(|m| m.with_depth(0))
    }

    /// Reinterpret a log-free series at the given depth.
    pub(crate) fn at_depth(&self, depth: u32) -> Series {
        self.map_monomials(|m| m.with_depth(depth))
    }

    pub(crate) fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Series {
        let terms = self.terms.iter().map(|(m, c)| (f(m), c.clone())).collect();
        let bound = match &self.bound {
            Bound::Exact => Bound::Exact,
            Bound::OTerm(r) => Bound::OTerm(f(r)),
        };
        Series::from_terms(terms, bound).with_ctx(self.ctx.clone())
    }

    /// Coefficient of a given monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms
            .iter()
            .find(|(k, _)| k.cmp_mono(m) == Ordering::Equal)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub(crate) fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.terms.is_empty() {
            match &self.bound {
                Bound::Exact => return write!(f, "0"),
                Bound::OTerm(r) => return write!(f, "O({r})"),
            }
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs == Rat::from_integer(1.into()) {
                m.fmt_with_var(f, var)?;
            } else {
                write!(f, "{abs}*")?;
                m.fmt_with_var(f, var)?;
            }
        }
        if let Bound::OTerm(r) = &self.bound {
            write!(f, " + O({r})")?;
        }
        Ok(())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = depth_var(self.depth());
        self.fmt_with_var(f, &var)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
