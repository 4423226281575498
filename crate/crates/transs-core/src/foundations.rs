//! Multi-indices and the well-partial-order machinery behind grids.
//!
//! Multi-indices label points of a grid generated by a finite ratio set.
//! The componentwise partial order is what makes grid supports well
//! partially ordered (Dickson's lemma), which in turn is what terminates
//! every truncated computation in this crate. The operations here are the
//! finite shadows of that theory: minimal elements, set domination, and
//! the per-step contraction diagnostic used by the fixed-point solver.

use crate::error::{Error, Result};

/// An integer n-tuple indexing a grid point.
///
/// The dimension is fixed per value; mixing dimensions is an error.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<i64>);

/// Outcome of comparing two multi-indices componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexOrder {
    /// k[i] <= p[i] for all i.
    LessOrEqual,
    /// k[i] >= p[i] for all i and k != p.
    Greater,
    Incomparable,
}

impl MultiIndex {
    pub fn new(components: Vec<i64>) -> Self {
        assert!(!components.is_empty(), "multi-index dimension must be >= 1");
        MultiIndex(components)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    /// |k| = k_1 + ... + k_n.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Componentwise sum.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        check_dim(self, other)?;
        Ok(MultiIndex::new(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// True iff every component is >= 0 and at least one is > 0.
    pub fn is_strictly_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }
}

fn check_dim(k: &MultiIndex, p: &MultiIndex) -> Result<()> {
    if k.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: k.dim(),
            right: p.dim(),
        });
    }
    Ok(())
}

fn check_dims_all<'a, I: IntoIterator<Item = &'a MultiIndex>>(items: I) -> Result<Option<usize>> {
    let mut dim = None;
    for k in items {
        match dim {
            None => dim = Some(k.dim()),
            Some(d) if d == k.dim() => {}
            Some(d) => {
                return Err(Error::DimensionMismatch {
                    left: d,
                    right: k.dim(),
                })
            }
        }
    }
    Ok(dim)
}

/// Componentwise comparison: `LessOrEqual` iff k <= p in every coordinate.
pub fn mi_leq(k: &MultiIndex, p: &MultiIndex) -> Result<IndexOrder> {
    check_dim(k, p)?;
    let mut le = true;
    let mut ge = true;
    for (a, b) in k.0.iter().zip(&p.0) {
        if a > b {
            le = false;
        }
        if a < b {
            ge = false;
        }
    }
    Ok(match (le, ge) {
        (true, _) => IndexOrder::LessOrEqual,
        (false, true) => IndexOrder::Greater,
        (false, false) => IndexOrder::Incomparable,
    })
}

/// k < p: componentwise <= and not equal.
pub fn mi_lt(k: &MultiIndex, p: &MultiIndex) -> Result<bool> {
    Ok(matches!(mi_leq(k, p)?, IndexOrder::LessOrEqual) && k != p)
}

/// The <=-minimal members of a finite set.
///
/// Every element of the input is >= some returned element, and the result
/// is an antichain. For grid subsets this is the finite `Min` set that
/// Dickson's lemma guarantees.
pub fn min_elements(set: &[MultiIndex]) -> Result<Vec<MultiIndex>> {
    check_dims_all(set)?;
    let mut min: Vec<MultiIndex> = Vec::new();
    'outer: for k in set {
        let mut i = 0;
        while i < min.len() {
            match mi_leq(&min[i], k)? {
                IndexOrder::LessOrEqual => continue 'outer, // dominated (or duplicate)
                IndexOrder::Greater => {
                    min.swap_remove(i);
                }
                IndexOrder::Incomparable => i += 1,
            }
        }
        min.push(k.clone());
    }
    min.sort();
    Ok(min)
}

/// E dominates F: every k in F has some p in E with p strictly below k.
///
/// The empty F is dominated by anything.
pub fn dominates(e: &[MultiIndex], f: &[MultiIndex]) -> Result<bool> {
    check_dims_all(e.iter().chain(f))?;
    for k in f {
        let mut found = false;
        for p in e {
            if mi_lt(p, k)? {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff each set of the chain dominates its successor.
///
/// This is the solver's per-step contraction diagnostic: a strictly
/// dominating chain of difference supports is point-finite, so the
/// iteration cannot revisit a grid point forever.
pub fn check_domination_chain(chain: &[Vec<MultiIndex>]) -> Result<bool> {
    check_dims_all(chain.iter().flatten())?;
    for pair in chain.windows(2) {
        if !dominates(&pair[0], &pair[1])? {
            return Ok(false);
        }
    }
    Ok(true)
}
