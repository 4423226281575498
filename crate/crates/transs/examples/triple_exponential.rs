//! The antiderivative of e^{e^{e^x}}.
//!
//! The integrand is e^T with T = e^{e^x} large, so the contraction ansatz
//! S = (e^T/T')(1+U) applies, with U solving the linear fixed point
//! U = T''/(T')^2 + (T''/(T')^2)·U - U'/T'. The coefficient rows that
//! come out count ordered set partitions (Fubini-like numbers).

use transs::render::render_with_bound;
use transs_core::integrate;
use transs_core::monomial::Monomial;
use transs_core::rational::rat_int;
use transs_core::series::{Bound, Series};
use transs_core::solve::IterationPolicy;

fn main() {
    let integrand = Series::from_monomial(Monomial::exp_iter(3));
    let bound = {
        let expo = Series::from_terms(
            vec![
                (Monomial::exp_iter(2), rat_int(1)),
                (Monomial::exp_iter(1), rat_int(-6)),
            ],
            Bound::Exact,
        );
        Monomial::new(0, rat_int(0), expo).unwrap()
    };
    let policy = IterationPolicy::new(bound);
    let s = integrate::antiderivative(&integrand, &policy, Default::default()).unwrap();
    println!("∫ e^(e^(e^x)) dx = {}", render_with_bound(&s));
}
