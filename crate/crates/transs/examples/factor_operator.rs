//! Factor D^2 + xD + I = (D - α)(D - β) with transseries coefficients.
//!
//! Matching coefficients gives α + β = -x and αβ - β' = 1, and eliminating
//! α leaves β = (-1 - β' - β^2)/x, a contractive map on the x^{-1} grid.

use transs::elaborate::{collect_ratios, elaborate, Context};
use transs::parser::parse;
use transs::render::render_with_bound;
use transs_core::calculus;
use transs_core::monomial::Monomial;
use transs_core::rational::rat_int;
use transs_core::series::Series;
use transs_core::solve;

fn main() {
    let phi = parse("(-1 - diff(Y) - Y^2)/x").unwrap();
    let mut ctx = Context::new(Monomial::x_power(rat_int(-16)));
    ctx.diagnostics = true;
    collect_ratios(&phi, &mut ctx);
    let policy = ctx.policy();
    let beta =
        solve::fixed_point(|y| elaborate(&phi, &mut ctx, Some(y)), &Series::zero(), &policy)
            .unwrap();
    let alpha = Series::x().neg().sub(&beta);
    println!("alpha = {}", render_with_bound(&alpha));
    println!("beta  = {}", render_with_bound(&beta));

    let residual = alpha
        .mul(&beta)
        .sub(&calculus::derivative(&beta).unwrap())
        .sub(&Series::one());
    println!("alpha*beta - beta' - 1 = {}", render_with_bound(&residual));
}
