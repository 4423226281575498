//! Transmonomials.
//!
//! A monomial is a log-free core `x^b e^L` composed with `log_M`: the field
//! `depth` stores M, `x_exp` stores b, and `exp_part` stores L, a purely
//! large, exact, log-free series of strictly smaller height. The group law
//! adds exponents; the order is lexicographic (exponent series first, then
//! the x-exponent), which is exactly "far larger" at x -> +infinity.
//!
//! Depths are never lowered automatically. Two monomials at different
//! depths are compared by lifting the shallower one, using the identity
//! T∘log_M = (T∘exp)∘log_{M+1}.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::series::{Bound, Series};

#[derive(Clone)]
pub struct Monomial {
    depth: u32,
    x_exp: Rat,
    exp_part: Arc<Series>,
}

/// Stored nesting levels of a monomial: exponential height of the core and
/// logarithmic depth of the wrapper.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeightDepth {
    pub height: u32,
    pub depth: u32,
}

impl Monomial {
    /// The group identity, 1.
    pub fn one() -> Self {
        Monomial {
            depth: 0,
            x_exp: Rat::zero(),
            exp_part: Arc::new(Series::zero()),
        }
    }

    /// x^b at depth 0.
    pub fn x_power(b: Rat) -> Self {
        Monomial {
            depth: 0,
            x_exp: b,
            exp_part: Arc::new(Series::zero()),
        }
    }

    /// The variable x itself.
    pub fn x() -> Self {
        Monomial::x_power(Rat::from_integer(1.into()))
    }

    /// log_m x as a monomial: the core x at depth m.
    pub fn log_iter(m: u32) -> Self {
        if m == 0 {
            return Monomial::x();
        }
        Monomial {
            depth: m,
            x_exp: Rat::from_integer(1.into()),
            exp_part: Arc::new(Series::zero()),
        }
    }

    /// exp_j(x) = e^{e^{...^{e^x}}} with j exponentials, as a log-free monomial.
    pub fn exp_iter(j: u32) -> Self {
        let mut m = Monomial::x();
        for _ in 0..j {
            m = Monomial {
                depth: 0,
                x_exp: Rat::zero(),
                exp_part: Arc::new(Series::from_monomial(m)),
            };
        }
        m
    }

    /// e^L for an exact purely large series L (at L's own depth).
    pub fn exp_of(l: &Series) -> Result<Self> {
        Monomial::new(l.depth(), Rat::zero(), l.core_series())
    }

    /// Build x^b e^L at the given depth.
    ///
    /// `exp_part` must be exact and purely large; the unit is normalized to
    /// depth 0.
    pub fn new(depth: u32, x_exp: Rat, exp_part: Series) -> Result<Self> {
        if !matches!(exp_part.bound(), Bound::Exact) {
            return Err(Error::InexactExponent);
        }
        for (m, _) in exp_part.terms() {
            if m.cmp_one() != Ordering::Greater {
                return Err(Error::InexactExponent);
            }
        }
        Ok(Self::new_unchecked(depth, x_exp, exp_part))
    }

    /// Like `new`, for callers that already guarantee the invariants.
    pub(crate) fn new_unchecked(depth: u32, x_exp: Rat, exp_part: Series) -> Self {
        if x_exp.is_zero() && exp_part.terms().is_empty() {
            return Monomial::one();
        }
        Monomial {
            depth,
            x_exp,
            exp_part: Arc::new(exp_part.forget_ctx()),
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn x_exp(&self) -> &Rat {
        &self.x_exp
    }

    pub fn exp_part(&self) -> &Series {
        &self.exp_part
    }

    pub fn is_one(&self) -> bool {
        self.x_exp.is_zero() && self.exp_part.terms().is_empty()
    }

    /// Exponential height of the stored core: 0 for x^b, else one more than
    /// the largest height in the exponent's support.
    pub fn height(&self) -> u32 {
        self.exp_part
            .terms()
            .iter()
            .map(|(m, _)| m.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn height_depth(&self) -> HeightDepth {
        HeightDepth {
            height: self.height(),
            depth: self.depth,
        }
    }

    /// Compare against 1. Lexicographic: the exponent series decides, then
    /// the x-exponent.
    pub fn cmp_one(&self) -> Ordering {
        match self.exp_part.sign_exact() {
            Ordering::Equal => self.x_exp.cmp(&Rat::zero()),
            ord => ord,
        }
    }

    pub fn is_small(&self) -> bool {
        self.cmp_one() == Ordering::Less
    }

    pub fn is_large(&self) -> bool {
        self.cmp_one() == Ordering::Greater
    }

    /// Group law: exponents add. Operands of different depths are lifted to
    /// the larger depth first.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let depth = self.depth.max(other.depth);
        let a = self.lift_to(depth);
        let b = other.lift_to(depth);
        Monomial::new_unchecked(
            depth,
            a.x_exp().clone() + b.x_exp().clone(),
            a.exp_part().add(b.exp_part()),
        )
    }

    /// Group inverse: (-b, -L) at the same depth.
    pub fn inv(&self) -> Monomial {
        Monomial::new_unchecked(self.depth, -self.x_exp.clone(), self.exp_part.neg())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    /// Raise to a rational power: (b·e, e·L).
    pub fn pow(&self, e: &Rat) -> Monomial {
        if e.is_zero() {
            return Monomial::one();
        }
        Monomial::new_unchecked(
            self.depth,
            self.x_exp.clone() * e.clone(),
            self.exp_part.scalar_mul(e),
        )
    }

    /// Total order, "far larger" reversed into std orientation:
    /// `Greater` means self ≻ other.
    pub fn cmp_mono(&self, other: &Monomial) -> Ordering {
        if self.is_one() {
            return other.cmp_one().reverse();
        }
        if other.is_one() {
            return self.cmp_one();
        }
        if self.depth == other.depth {
            if Arc::ptr_eq(&self.exp_part, &other.exp_part) {
                return self.x_exp.cmp(&other.x_exp);
            }
            return match self.exp_part.cmp_exact(&other.exp_part) {
                Ordering::Equal => self.x_exp.cmp(&other.x_exp),
                ord => ord,
            };
        }
        let depth = self.depth.max(other.depth);
        self.lift_to(depth).cmp_mono(&other.lift_to(depth))
    }

    /// One lift step: x^b e^L at depth M becomes e^{b·x + L∘exp} at depth
    /// M+1, the same value written one logarithm deeper.
    pub fn lift_once(&self) -> Monomial {
        if self.is_one() {
            return Monomial::one();
        }
        let core = subst_exp_core(&Monomial::new_unchecked(
            0,
            self.x_exp.clone(),
            self.exp_part.as_ref().clone(),
        ));
        Monomial::new_unchecked(self.depth + 1, core.x_exp, (*core.exp_part).clone())
    }

    /// Lift to the given depth (which must not be below the current one).
    pub fn lift_to(&self, depth: u32) -> Monomial {
        debug_assert!(depth >= self.depth || self.is_one());
        let mut m = self.clone();
        while !m.is_one() && m.depth < depth {
            m = m.lift_once();
        }
        m
    }

    /// Reinterpret the same core at a different depth. Representational
    /// only; callers own the semantics.
    pub(crate) fn with_depth(&self, depth: u32) -> Monomial {
        Monomial::new_unchecked(depth, self.x_exp.clone(), (*self.exp_part).clone())
    }

    /// m ∘ log: the same core one logarithm deeper.
    pub fn wrap_log(&self) -> Monomial {
        if self.is_one() {
            return Monomial::one();
        }
        self.with_depth(self.depth + 1)
    }

    /// m ∘ exp: peel one logarithm, or substitute x -> e^x when log-free.
    pub fn unwrap_log(&self) -> Monomial {
        if self.is_one() {
            return Monomial::one();
        }
        if self.depth >= 1 {
            self.with_depth(self.depth - 1)
        } else {
            subst_exp_core(self)
        }
    }

    /// Undo one lift step where the core visibly is a composition with
    /// exp: a depth-M monomial e^{b·x + L∘exp} becomes x^b e^L at depth
    /// M-1. Returns None when the core is not of that shape.
    pub fn try_lower(&self) -> Option<Monomial> {
        if self.is_one() {
            return Some(Monomial::one());
        }
        if self.depth == 0 || !self.x_exp.is_zero() {
            return None;
        }
        let (b, expo) = unsubst_core(&self.exp_part)?;
        Some(Monomial::new_unchecked(self.depth - 1, b, expo))
    }

    pub(crate) fn fmt_with_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut wrote = false;
        if !self.x_exp.is_zero() {
            if self.x_exp == Rat::from_integer(1.into()) {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{}", self.x_exp)?;
            }
            wrote = true;
        }
        if !self.exp_part.terms().is_empty() {
            if wrote {
                write!(f, "*")?;
            }
            write!(f, "e^(")?;
            self.exp_part.fmt_with_var(f, var)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The log-free substitution x -> e^x on a depth-0 core:
/// x^b e^L becomes e^{b·x + L∘e^x}. Exact; no truncation happens.
pub(crate) fn subst_exp_core(m: &Monomial) -> Monomial {
    debug_assert_eq!(m.depth, 0);
    if m.is_one() {
        return Monomial::one();
    }
    let mut terms: Vec<(Monomial, Rat)> = m
        .exp_part
        .terms()
        .iter()
        .map(|(k, c)| (subst_exp_core(k), c.clone()))
        .collect();
    if !m.x_exp.is_zero() {
        terms.push((Monomial::x(), m.x_exp.clone()));
    }
    let expo = Series::from_terms(terms, Bound::Exact);
    Monomial::new_unchecked(0, Rat::zero(), expo)
}

/// Inverse of `subst_exp_core` on an exponent series: split off the
/// coefficient of x and un-substitute the remaining support.
fn unsubst_core(expo: &Series) -> Option<(Rat, Series)> {
    let mut b = Rat::zero();
    let mut terms = Vec::new();
    for (k, c) in expo.terms() {
        if k.exp_part().terms().is_empty() && *k.x_exp() == Rat::from_integer(1.into()) {
            b = c.clone();
        } else if k.x_exp().is_zero() && !k.exp_part().terms().is_empty() {
            let (bk, ek) = unsubst_core(k.exp_part())?;
            terms.push((Monomial::new_unchecked(0, bk, ek), c.clone()));
        } else {
            return None;
        }
    }
    Some((b, Series::from_terms(terms, Bound::Exact)))
}

/// `lsupp`: the support of the logarithmic derivative, {x^{-1}} ∪ supp L'.
///
/// Defined for log-free monomials; conjugate first at positive depth.
pub fn lsupp(m: &Monomial) -> Result<Vec<Monomial>> {
    if m.depth != 0 {
        return Err(Error::InvalidParameters(
            "lsupp is defined for log-free monomials".into(),
        ));
    }
    let mut out = vec![Monomial::x_power(Rat::from_integer((-1).into()))];
    let dl = crate::calculus::derivative(m.exp_part())?;
    for (g, _) in dl.terms() {
        if !out.iter().any(|h| h == g) {
            out.push(g.clone());
        }
    }
    out.sort_by(|a, b| b.cmp_mono(a));
    Ok(out)
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_mono(other) == Ordering::Equal
    }
}

impl Eq for Monomial {}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_mono(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_mono(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = depth_var(self.depth);
        self.fmt_with_var(f, &var)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Variable name for a given depth: x, log(x), log(log(x)), ...
pub(crate) fn depth_var(depth: u32) -> String {
    let mut v = String::from("x");
    for _ in 0..depth {
        v = format!("log({v})");
    }
    v
}
