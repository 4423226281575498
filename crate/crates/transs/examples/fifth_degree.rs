//! All three real transseries branches of Y^5 + e^x Y^2 - x Y - 9 = 0.
//!
//! Dominant-balance reasoning (done once, by hand): a solution has
//! dom Y = a x^b e^L; comparing the four terms leaves L = x/3 with a = -1,
//! or L = -x/2 with a = ±3. Substituting Y = a e^L (1+S) and solving for
//! the dominant S-term turns the equation into a contractive fixed point
//! for the small correction S, which is what the solver iterates.

use transs::elaborate::{collect_ratios, elaborate, Context};
use transs::parser::parse;
use transs::render::render_with_bound;
use transs_core::monomial::Monomial;
use transs_core::numeric::{format_decimal, numeric_eval};
use transs_core::rational::{parse_rat, rat, rat_int};
use transs_core::series::{Bound, Series};
use transs_core::solve;

fn e_pow(p: i64, q: i64) -> Monomial {
    let expo = Series::from_terms(vec![(Monomial::x(), rat(p, q))], Bound::Exact);
    Monomial::new(0, rat_int(0), expo).unwrap()
}

fn solve_phi(phi_text: &str, bound: Monomial) -> Series {
    let phi = parse(phi_text).unwrap();
    let mut ctx = Context::new(bound);
    ctx.diagnostics = true;
    collect_ratios(&phi, &mut ctx);
    let policy = ctx.policy();
    solve::fixed_point(|y| elaborate(&phi, &mut ctx, Some(y)), &Series::zero(), &policy).unwrap()
}

fn main() {
    // branch Y = -e^{x/3}(1+S)
    let s = solve_phi(
        "-3*Y^2 - 10/3*Y^3 - 5/3*Y^4 - 1/3*Y^5 \
         + 1/3*x*exp(-4/3*x)*Y + 1/3*x*exp(-4/3*x) - 3*exp(-5/3*x)",
        e_pow(-15, 2),
    );
    let e13 = e_pow(1, 3);
    let y1 = Series::from_monomial(e13.clone()).neg().sub(&s.mul_monomial(&e13));
    println!("branch L = x/3:\n  Y = {}\n", render_with_bound(&y1));

    // branches Y = ±3 e^{-x/2}(1+S)
    let em12 = e_pow(-1, 2);
    let s_plus = solve_phi(
        "-1/2*Y^2 - 27/2*exp(-5/2*x)*(1+Y)^5 + 1/6*x*exp(-1/2*x)*(1+Y)",
        e_pow(-27, 4),
    );
    let y2 = Series::from_monomial(em12.clone())
        .scalar_mul(&rat_int(3))
        .add(&s_plus.mul_monomial(&em12).scalar_mul(&rat_int(3)));
    println!("branch a = +3:\n  Y = {}\n", render_with_bound(&y2));

    let s_minus = solve_phi(
        "-1/2*Y^2 + 27/2*exp(-5/2*x)*(1+Y)^5 - 1/6*x*exp(-1/2*x)*(1+Y)",
        e_pow(-27, 4),
    );
    let y3 = Series::from_monomial(em12.clone())
        .scalar_mul(&rat_int(-3))
        .sub(&s_minus.mul_monomial(&em12).scalar_mul(&rat_int(3)));
    println!("branch a = -3:\n  Y = {}\n", render_with_bound(&y3));

    let at = parse_rat("10").unwrap();
    for (name, y) in [("L=x/3", &y1), ("a=+3", &y2), ("a=-3", &y3)] {
        let v = numeric_eval(y, &at, 30).unwrap();
        println!("value at x=10 ({name}): {}", format_decimal(&v, 30));
    }
}
