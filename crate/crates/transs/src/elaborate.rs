//! Elaboration of expressions to truncated transseries.
//!
//! Evaluation is bottom-up against a context holding the working bound,
//! the expansion budget, and a ratio set. The ratio set starts as
//! {x^{-1}} plus e^{-|L|} for every exp subterm that elaborates without
//! the unknown, closed under the derivative addendum; it then grows at
//! every inverse/power/exp/log/derivative step so the solver's contraction
//! diagnostics have a grid to check against. Ratios never affect values.

use std::sync::Arc;

use transs_core::calculus::{self, TaylorBudget};
use transs_core::error::Error;
use transs_core::grid::{self, RatioSet};
use transs_core::integrate;
use transs_core::monomial::Monomial;
use transs_core::series::Series;
use transs_core::solve::IterationPolicy;

use crate::parser::Expr;

#[derive(Debug, Clone)]
pub struct Context {
    pub ratios: RatioSet,
    pub bound: Monomial,
    pub budget: TaylorBudget,
    pub max_iterations: usize,
    pub diagnostics: bool,
}

impl Context {
    pub fn new(bound: Monomial) -> Self {
        let x_inv = Monomial::x_power(transs_core::Rat::from_integer((-1).into()));
        Context {
            ratios: RatioSet::new(vec![x_inv]).expect("x^{-1} is small"),
            bound,
            budget: TaylorBudget::default(),
            max_iterations: 64,
            diagnostics: false,
        }
    }

    pub fn policy(&self) -> IterationPolicy {
        IterationPolicy {
            target_bound: self.bound.clone(),
            max_iterations: self.max_iterations,
            diagnostics: self.diagnostics,
        }
    }

    fn tag(&self, s: Series) -> Series {
        s.with_ctx(Some(Arc::new(self.ratios.clone())))
    }

    /// Best-effort ratio extension by the smallness addendum of a small
    /// series; when the series is off the current grid, its support
    /// monomials join the ratio set directly.
    fn absorb_small(&mut self, s: &Series) {
        if s.terms().is_empty() {
            return;
        }
        match grid::smallness_addendum(s, &self.ratios) {
            Ok(bigger) => self.ratios = bigger,
            Err(_) => {
                let smalls: Vec<Monomial> = s
                    .terms()
                    .iter()
                    .map(|(m, _)| m.clone())
                    .filter(|m| m.is_small())
                    .collect();
                if let Ok(extra) = RatioSet::new(smalls) {
                    self.ratios = self.ratios.union(&extra);
                }
            }
        }
    }

    fn absorb_inverse(&mut self, a: &Series) {
        if let Ok((_, _, s)) = a.decompose_multiplicative() {
            self.absorb_small(&s);
        }
    }

    fn absorb_exp_arg(&mut self, arg: &Series) {
        if let Ok((l, _, u)) = arg.decompose_additive() {
            if !l.terms().is_empty() {
                let neg_abs = if l.is_positive() { l.neg() } else { l };
                if let Ok(r) = Monomial::exp_of(&neg_abs) {
                    if r.is_small() && !self.ratios.contains(&r) {
                        self.ratios = self.ratios.union(&RatioSet::new(vec![r]).unwrap());
                    }
                }
            }
            self.absorb_small(&u);
        }
    }

    fn close_for_derivative(&mut self) {
        if let Ok(closed) = grid::derivative_addendum(&self.ratios) {
            self.ratios = closed;
        }
    }
}

/// Evaluate a bound expression directly to a monomial: products of
/// rational powers of x, log(...), and exp(purely large argument), with an
/// overall coefficient of 1. No truncation is involved, so bounds can sit
/// below any working accuracy.
pub fn bound_monomial(e: &Expr) -> Result<Monomial, Error> {
    fn eval(e: &Expr) -> Result<(transs_core::Rat, Monomial), Error> {
        let bad = |what: &str| {
            Err(Error::InvalidParameters(format!(
                "bound must be a monomial expression; {what} is not"
            )))
        };
        match e {
            Expr::Number(c) => Ok((c.clone(), Monomial::one())),
            Expr::VarX => Ok((num_traits::One::one(), Monomial::x())),
            Expr::Neg(a) => {
                let (c, m) = eval(a)?;
                Ok((-c, m))
            }
            Expr::Mul(a, b) => {
                let (ca, ma) = eval(a)?;
                let (cb, mb) = eval(b)?;
                Ok((ca * cb, ma.mul(&mb)))
            }
            Expr::Div(a, b) => {
                let (ca, ma) = eval(a)?;
                let (cb, mb) = eval(b)?;
                if num_traits::Zero::is_zero(&cb) {
                    return bad("division by zero");
                }
                Ok((ca / cb, ma.div(&mb)))
            }
            Expr::Pow(a, r) => {
                let (ca, ma) = eval(a)?;
                let c = transs_core::rational::rat_pow_rat(&ca, r)
                    .ok_or_else(|| Error::NonRationalConstant(format!("({ca})^({r})")))?;
                Ok((c, ma.pow(r)))
            }
            Expr::Log(a) => {
                let (c, m) = eval(a)?;
                let one: transs_core::Rat = num_traits::One::one();
                if c == one
                    && *m.x_exp() == one
                    && m.exp_part().terms().is_empty()
                {
                    Ok((one, Monomial::log_iter(m.depth() + 1)))
                } else {
                    bad("log of a non-variable")
                }
            }
            Expr::Exp(a) => {
                // the argument is an ordinary expression, but must come out
                // purely large and exact
                let mut ctx = Context::new(Monomial::x_power(
                    transs_core::Rat::from_integer((-1).into()),
                ));
                let arg = elaborate(a, &mut ctx, None)?;
                Ok((num_traits::One::one(), Monomial::exp_of(&arg)?))
            }
            Expr::Add(..) | Expr::Sub(..) | Expr::Diff(..) | Expr::Int(..) | Expr::VarY => {
                bad("sums, the unknown, and operators")
            }
        }
    }
    let (c, m) = eval(e)?;
    let one: transs_core::Rat = num_traits::One::one();
    if c != one {
        return Err(Error::InvalidParameters(
            "bound must have coefficient 1".into(),
        ));
    }
    if m.is_one() {
        return Err(Error::InvalidParameters(
            "bound must differ from 1".into(),
        ));
    }
    Ok(m)
}

/// Scan an expression for exp occurrences and seed the ratio set with
/// e^{-|L|} for each elaboratable argument, then close under the
/// derivative addendum.
pub fn collect_ratios(e: &Expr, ctx: &mut Context) {
    fn walk(e: &Expr, ctx: &mut Context) {
        match e {
            Expr::Exp(inner) => {
                walk(inner, ctx);
                let mut probe = ctx.clone();
                if let Ok(s) = elaborate(inner, &mut probe, None) {
                    ctx.absorb_exp_arg(&s);
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                walk(a, ctx);
                walk(b, ctx);
            }
            Expr::Pow(a, _) | Expr::Log(a) | Expr::Diff(a) | Expr::Int(a) | Expr::Neg(a) => {
                walk(a, ctx)
            }
            Expr::Number(_) | Expr::VarX | Expr::VarY => {}
        }
    }
    walk(e, ctx);
    ctx.close_for_derivative();
}

/// Evaluate an expression to a series under the context. The unknown Y
/// resolves through `binding`.
pub fn elaborate(e: &Expr, ctx: &mut Context, binding: Option<&Series>) -> Result<Series, Error> {
    match e {
        Expr::Number(c) => Ok(ctx.tag(Series::constant(c.clone()))),
        Expr::VarX => Ok(ctx.tag(Series::x())),
        Expr::VarY => binding.cloned().map(|s| ctx.tag(s)).ok_or_else(|| {
            Error::InvalidParameters("the unknown Y is only available under solve".into())
        }),
        Expr::Neg(a) => Ok(elaborate(a, ctx, binding)?.neg()),
        Expr::Add(a, b) => {
            let a = elaborate(a, ctx, binding)?;
            let b = elaborate(b, ctx, binding)?;
            Ok(a.add(&b))
        }
        Expr::Sub(a, b) => {
            let a = elaborate(a, ctx, binding)?;
            let b = elaborate(b, ctx, binding)?;
            Ok(a.sub(&b))
        }
        Expr::Mul(a, b) => {
            let a = elaborate(a, ctx, binding)?;
            let b = elaborate(b, ctx, binding)?;
            Ok(a.mul(&b))
        }
        Expr::Div(a, b) => {
            let a = elaborate(a, ctx, binding)?;
            let b = elaborate(b, ctx, binding)?;
            ctx.absorb_inverse(&b);
            let inv = calculus::mul_inverse(&b, &ctx.bound, ctx.budget)?;
            Ok(a.mul(&inv))
        }
        Expr::Pow(a, e) => {
            let a = elaborate(a, ctx, binding)?;
            if e.is_integer() {
                let k = i64::try_from(e.to_integer())
                    .map_err(|_| Error::InvalidParameters("exponent out of range".into()))?;
                if k < 0 {
                    ctx.absorb_inverse(&a);
                }
                calculus::int_pow(&a, k, &ctx.bound, ctx.budget)
            } else {
                ctx.absorb_inverse(&a);
                calculus::power(&a, e, &ctx.bound, ctx.budget)
            }
        }
        Expr::Exp(a) => {
            let a = elaborate(a, ctx, binding)?;
            ctx.absorb_exp_arg(&a);
            calculus::exp(&a, &ctx.bound, ctx.budget)
        }
        Expr::Log(a) => {
            let a = elaborate(a, ctx, binding)?;
            ctx.absorb_inverse(&a);
            let out = calculus::log(&a, &ctx.bound, ctx.budget)?;
            if out.depth() > a.depth() {
                let deep_inv = Monomial::log_iter(out.depth()).inv();
                if let Ok(extra) = RatioSet::new(vec![deep_inv]) {
                    ctx.ratios = ctx.ratios.union(&extra);
                }
            }
            Ok(out)
        }
        Expr::Diff(a) => {
            let a = elaborate(a, ctx, binding)?;
            ctx.close_for_derivative();
            calculus::derivative(&a)
        }
        Expr::Int(a) => {
            let a = elaborate(a, ctx, binding)?;
            integrate::antiderivative(&a, &ctx.policy(), ctx.budget)
        }
    }
}
