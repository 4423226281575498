//! Transseries solution of the Riccati equation
//!
//!     Y' = (x - x^2)/(x^2 - x + 1) · Y + Y^2.
//!
//! The linear part has the solution S0 = exp(∫a) ~ e^{-x}, and the full
//! equation then solves in closed form as Y = S0/(1 - ∫S0), one member of
//! the c-family Y = c·S0/(1 - c·∫S0). Expanded on the {x^{-1}, e^{-x}}
//! grid the support is an omega^2-style table: one power series in 1/x per
//! e^{-jx} row, which is how the rows are assembled and checked here.

use transs::elaborate::{elaborate, Context};
use transs::parser::parse;
use transs::render::render_series;
use transs_core::calculus;
use transs_core::integrate;
use transs_core::monomial::Monomial;
use transs_core::rational::{rat_int, Rat};
use transs_core::series::{Bound, Series};
use transs_core::solve::IterationPolicy;

fn main() {
    let budget = Default::default();
    let xp = |b: i64| Monomial::x_power(rat_int(b));
    let em1 = {
        let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-1))], Bound::Exact);
        Monomial::new(0, rat_int(0), expo).unwrap()
    };

    // a(x) = (x - x^2)/(x^2 - x + 1), expanded at infinity
    let mut ctx = Context::new(xp(-14));
    let a = elaborate(&parse("(x-x^2)/(x^2-x+1)").unwrap(), &mut ctx, None).unwrap();
    println!("a(x)  = {}", render_series(&a));

    // S0 = exp(∫a), the linear solution with leading coefficient 1
    let policy = IterationPolicy::new(xp(-12));
    let ia = integrate::antiderivative(&a, &policy, budget).unwrap();
    let ia = calculus::lower_depth(&ia.truncated_to(&xp(-10)));
    let s0 = calculus::exp(&ia, &em1.mul(&xp(-10)), budget).unwrap();

    // ∫S0, lowered back to the plain x world
    let p_policy = IterationPolicy::new(em1.mul(&xp(-10)));
    let p = integrate::antiderivative(&s0, &p_policy, budget).unwrap();
    let p = calculus::lower_depth(&p.truncated_to(&em1.mul(&xp(-8))));

    // rows of Y = S0·(1 + ∫S0 + (∫S0)^2 + ...) as power series in 1/x
    let s_row = s0.mul_monomial(&em1.inv());
    let p_row = p.mul_monomial(&em1.inv());
    let jmax = 6usize;
    let mut rows = Vec::new();
    let mut p_pow = Series::one();
    for _ in 1..=jmax {
        rows.push(s_row.mul(&p_pow));
        p_pow = p_pow.mul(&p_row);
    }
    println!("\nY = sum over j of e^(-j*x) · R_j(1/x) with:");
    for (j, row) in rows.iter().enumerate() {
        println!("  R_{} = {}", j + 1, render_series(&row.truncated_to(&xp(-7))));
    }

    // residual of the equation, row by row: nothing survives
    let mut worst: Option<String> = None;
    for j in 1..=jmax {
        let row = &rows[j - 1];
        let mut r = calculus::derivative(row)
            .unwrap()
            .sub(&row.scalar_mul(&Rat::from_integer((j as i64).into())))
            .sub(&a.mul(row));
        for i in 1..j {
            r = r.sub(&rows[i - 1].mul(&rows[j - i - 1]));
        }
        assert!(r.terms().is_empty(), "row {j} residual {r}");
        if worst.is_none() {
            worst = Some(format!("{:?}", r.bound()));
        }
    }
    println!("\nequation residual vanishes row by row (row-1 accuracy {})", worst.unwrap());
}
