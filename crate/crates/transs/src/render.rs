//! Text and JSON rendering of series.
//!
//! The text form lists terms far-largest first and is re-parseable by the
//! expression grammar: monomials come out as products of `x^p/q` powers
//! (with log(x), log(log(x)), ... substituted at depth) and `exp(...)`
//! factors. The JSON schema is stable and mirrors the recursive monomial
//! structure.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use transs_core::monomial::Monomial;
use transs_core::rational::Rat;
use transs_core::series::{Bound, Series};

fn depth_var(depth: u32) -> String {
    let mut v = String::from("x");
    for _ in 0..depth {
        v = format!("log({v})");
    }
    v
}

fn pow_piece(var: &str, e: &Rat) -> String {
    if e.is_one() {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// Invert the substitution x -> e^x: succeeds on monomials of the form
/// e^{b·x + L∘exp}, returning x^b e^L.
fn try_unsubst(m: &Monomial) -> Option<Monomial> {
    if m.is_one() {
        return Some(Monomial::one());
    }
    if !m.x_exp().is_zero() {
        return None;
    }
    let mut x_exp = Rat::from_integer(0.into());
    let mut expo = Vec::new();
    for (k, c) in m.exp_part().terms() {
        if k.exp_part().terms().is_empty() && k.x_exp().is_one() {
            x_exp = c.clone();
        } else {
            expo.push((try_unsubst(k)?, c.clone()));
        }
    }
    let expo = transs_core::Series::from_terms(expo, transs_core::Bound::Exact);
    Monomial::new(0, x_exp, expo).ok()
}

/// Render one monomial, peeling apparent depth where the core is visibly a
/// composition with exp: e^{c·x} at depth M is (log_{M-1} x)^c, and a
/// conjugated factor e^{c·(h∘exp)} at depth M displays as e^{c·h} at depth
/// M-1. Display only; values are untouched.
fn render_monomial_at(m: &Monomial, depth: u32) -> String {
    if m.is_one() {
        return "1".into();
    }
    let var = depth_var(depth);
    let mut pieces = Vec::new();
    if !m.x_exp().is_zero() {
        pieces.push(pow_piece(&var, m.x_exp()));
    }
    let mut residue = Vec::new();
    for (k, c) in m.exp_part().terms() {
        if depth > 0 && k.exp_part().terms().is_empty() && k.x_exp().is_one() {
            pieces.push(pow_piece(&depth_var(depth - 1), c));
        } else if depth > 0 {
            match try_unsubst(k) {
                Some(h) => {
                    // e^{c·(h∘exp)} at this depth is e^{c·h} one level
                    // down; recurse so nested shifts keep simplifying
                    let expo = transs_core::Series::from_terms(
                        vec![(h, c.clone())],
                        transs_core::Bound::Exact,
                    );
                    match Monomial::new(0, Rat::from_integer(0.into()), expo) {
                        Ok(shifted) => pieces.push(render_monomial_at(&shifted, depth - 1)),
                        Err(_) => residue.push((k.clone(), c.clone())),
                    }
                }
                None => residue.push((k.clone(), c.clone())),
            }
        } else {
            residue.push((k.clone(), c.clone()));
        }
    }
    if !residue.is_empty() {
        let rs = transs_core::Series::from_terms(residue, transs_core::Bound::Exact);
        pieces.push(format!("exp({})", render_terms_at(&rs, depth)));
    }
    pieces.join("*")
}

fn render_terms_at(s: &Series, depth: u32) -> String {
    if s.terms().is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in s.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = render_monomial_at(m, depth);
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{abs}*{mono}"));
        }
    }
    out
}

/// Re-parseable rendering of the stored terms (no bound marker).
pub fn render_series(s: &Series) -> String {
    render_terms_at(s, s.depth())
}

pub fn render_monomial(m: &Monomial) -> String {
    render_monomial_at(m, m.depth())
}

/// Display rendering: terms plus an O(...) marker when truncated.
pub fn render_with_bound(s: &Series) -> String {
    let body = render_series(s);
    match s.bound() {
        Bound::Exact => body,
        Bound::OTerm(r) => format!("{body} + O({})", render_monomial(r)),
    }
}

fn rat_json(c: &Rat) -> Value {
    Value::String(c.to_string())
}

fn monomial_json(m: &Monomial) -> Value {
    json!({
        "depth": m.depth(),
        "x_exp": rat_json(m.x_exp()),
        "exp_terms": m.exp_part().terms().iter().map(|(k, c)| {
            json!({ "coeff": rat_json(c), "monomial": monomial_json(k) })
        }).collect::<Vec<_>>(),
    })
}

/// The stable JSON schema:
/// {"terms":[{"coeff":"p/q","monomial":{"depth":M,"x_exp":"p/q",
///  "exp_terms":[...]}}],"bound":{"kind":"oterm","monomial":{...}}|{"kind":"exact"}}
pub fn series_json(s: &Series) -> Value {
    json!({
        "terms": s.terms().iter().map(|(m, c)| {
            json!({ "coeff": rat_json(c), "monomial": monomial_json(m) })
        }).collect::<Vec<_>>(),
        "bound": match s.bound() {
            Bound::Exact => json!({ "kind": "exact" }),
            Bound::OTerm(r) => json!({ "kind": "oterm", "monomial": monomial_json(r) }),
        },
    })
}
