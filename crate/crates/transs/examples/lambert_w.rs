//! The compositional inverse of x e^x.
//!
//! From W e^W = x one gets W = log x + Q with e^{-Q} = log x + Q. Solving
//! that equation for the exponential occurrence of Q diverges; solving for
//! the additive occurrence gives the contractive form Q = -log(log x + Q),
//! which is the map iterated here. The result is the classical expansion
//! in powers of log log x over log x.

use transs::elaborate::{collect_ratios, elaborate, Context};
use transs::parser::parse;
use transs::render::render_with_bound;
use transs_core::calculus;
use transs_core::monomial::Monomial;
use transs_core::rational::rat_int;
use transs_core::series::{Bound, Series};
use transs_core::solve;

fn main() {
    // working accuracy: total degree 7 in (1/log x, log log x / log x)
    let bound = {
        let expo = Series::from_terms(vec![(Monomial::x(), rat_int(-7))], Bound::Exact);
        Monomial::new(2, rat_int(8), expo).unwrap()
    };
    let phi = parse("-log(log(x)+Y)").unwrap();
    let mut ctx = Context::new(bound);
    ctx.diagnostics = true;
    collect_ratios(&phi, &mut ctx);
    let policy = ctx.policy();
    let q = solve::fixed_point(|y| elaborate(&phi, &mut ctx, Some(y)), &Series::zero(), &policy)
        .unwrap();
    let w = q.add(&Series::from_monomial(Monomial::log_iter(1)));
    println!("W(x) = {}\n", render_with_bound(&w));

    // check the defining identity: W e^W - x vanishes to working accuracy
    let scale = {
        let expo = Series::from_terms(
            vec![(Monomial::exp_iter(1), rat_int(1)), (Monomial::x(), rat_int(-8))],
            Bound::Exact,
        );
        Monomial::new(2, rat_int(8), expo).unwrap()
    };
    let e_w = calculus::exp(&w, &scale, Default::default()).unwrap();
    let residual = w.mul(&e_w).sub(&Series::x());
    println!("W e^W - x = {}", render_with_bound(&residual));
}
