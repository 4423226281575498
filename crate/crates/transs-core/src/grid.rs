//! Ratio sets, grids, and the addenda that keep computations inside them.
//!
//! A ratio set is a finite descending list of small monomials; the grid it
//! generates with base m is { μ^k : k >= m }. Membership questions reduce
//! to exact rational linear algebra on exponent vectors: a monomial is
//! coordinatized by its x-exponent together with the coefficients of its
//! exponent series over a common basis of support monomials. The kernel of
//! that system is the lattice of multiplicative relations among the ratios
//! (e.g. μ1^3 = μ2^2 for {x^{-1/3}, x^{-1/2}}), and integral solutions are
//! enumerated exactly for kernel rank <= 1, which covers every ratio set
//! the kernel itself constructs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::foundations::{min_elements, MultiIndex};
use crate::monomial::Monomial;
use crate::rational::Rat;
use crate::series::Series;

/// A finite ordered set μ_1 ≻ μ_2 ≻ ... ≻ μ_n of small monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSet {
    ratios: Vec<Monomial>,
}

impl RatioSet {
    /// Normalize: sort descending, deduplicate, reject non-small entries.
    pub fn new(ratios: Vec<Monomial>) -> Result<Self> {
        for r in &ratios {
            if !r.is_small() {
                return Err(Error::InvalidParameters(format!(
                    "ratio {r} is not small"
                )));
            }
        }
        let mut rs = RatioSet { ratios: Vec::new() };
        for r in ratios {
            rs.insert(r);
        }
        Ok(rs)
    }

    pub fn empty() -> Self {
        RatioSet { ratios: Vec::new() }
    }

    fn insert(&mut self, r: Monomial) {
        match self
            .ratios
            .binary_search_by(|probe| r.cmp_mono(probe))
        {
            Ok(_) => {}
            Err(pos) => self.ratios.insert(pos, r),
        }
    }

    pub fn ratios(&self) -> &[Monomial] {
        &self.ratios
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.ratios.iter().any(|r| r == m)
    }

    pub fn union(&self, other: &RatioSet) -> RatioSet {
        let mut out = self.clone();
        for r in &other.ratios {
            if !out.contains(r) {
                out.insert(r.clone());
            }
        }
        out
    }

    /// μ^k = μ_1^{k_1} ... μ_n^{k_n}.
    pub fn pow(&self, k: &MultiIndex) -> Monomial {
        debug_assert_eq!(k.dim(), self.ratios.len());
        let mut acc = Monomial::one();
        for (r, &e) in self.ratios.iter().zip(k.components()) {
            if e != 0 {
                acc = acc.mul(&r.pow(&Rat::from_integer(e.into())));
            }
        }
        acc
    }
}

impl fmt::Display for RatioSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.ratios.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// A grid: all μ^k with k >= base.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub ratios: RatioSet,
    pub base: MultiIndex,
}

impl Grid {
    pub fn new(ratios: RatioSet, base: MultiIndex) -> Result<Self> {
        if base.dim() != ratios.len() {
            return Err(Error::DimensionMismatch {
                left: base.dim(),
                right: ratios.len(),
            });
        }
        Ok(Grid { ratios, base })
    }

    pub fn contains(&self, g: &Monomial) -> bool {
        !mu_representations(g, &self.ratios, &self.base).is_empty()
    }
}

// ---------------------------------------------------------------------------
// Exponent-lattice linear algebra
// ---------------------------------------------------------------------------

/// Exponent coordinates of log-free cores over a shared basis. Rows are
/// ordered by significance: exponent-support monomials descending, the
/// x-exponent last — so the lexicographic sign of a coordinate vector is
/// the far-order sign of the monomial it describes.
fn exponent_matrix(monos: &[&Monomial]) -> Vec<Vec<Rat>> {
    let mut basis: Vec<Monomial> = Vec::new();
    for m in monos {
        for (h, _) in m.exp_part().terms() {
            if !basis.iter().any(|b| b == h) {
                basis.push(h.clone());
            }
        }
    }
    basis.sort_by(|a, b| b.cmp_mono(a));
    monos
        .iter()
        .map(|m| {
            let mut col: Vec<Rat> = basis.iter().map(|h| m.exp_part().coeff(h)).collect();
            col.push(m.x_exp().clone());
            col
        })
        .collect()
}

/// The integer system A·k = v describing μ^k = g, one row per basis
/// monomial (each row cleared of denominators separately).
struct ExponentSystem {
    /// m rows by n columns, rows ordered by significance.
    a: Vec<Vec<BigInt>>,
    v: Vec<BigInt>,
}

fn build_system(g: &Monomial, ratios: &RatioSet) -> ExponentSystem {
    let depth = ratios
        .ratios()
        .iter()
        .map(|r| r.depth())
        .chain(std::iter::once(g.depth()))
        .max()
        .unwrap_or(0);
    let lifted: Vec<Monomial> = ratios.ratios().iter().map(|r| r.lift_to(depth)).collect();
    let g = g.lift_to(depth);
    let mut all: Vec<&Monomial> = lifted.iter().collect();
    all.push(&g);
    let cols = exponent_matrix(&all);
    let n = ratios.len();
    let rows = cols[0].len();
    let mut a = vec![vec![BigInt::zero(); n]; rows];
    let mut v = vec![BigInt::zero(); rows];
    for r in 0..rows {
        let mut denom = BigInt::one();
        for col in cols.iter() {
            denom = denom.lcm(col[r].denom());
        }
        let scale = |q: &Rat| (q * Rat::from_integer(denom.clone())).to_integer();
        for (c, col) in cols.iter().take(n).enumerate() {
            a[r][c] = scale(&col[r]);
        }
        v[r] = scale(&cols[n][r]);
    }
    ExponentSystem { a, v }
}

/// Column-style Hermite reduction: returns an integral particular solution
/// of A·k = v together with a basis of the integral kernel lattice, or
/// None when no integral solution exists.
fn hnf_solve(sys: &ExponentSystem) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let m = sys.a.len();
    let n = if m == 0 { 0 } else { sys.a[0].len() };
    let mut h: Vec<Vec<BigInt>> = sys.a.clone();
    // U tracks the column operations: A·U = H throughout.
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect();
    // u is stored column-major: u[j] is the j-th column of U.
    let col_op_sub = |h: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        for row in h.iter_mut() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
        let delta: Vec<BigInt> = u[src].iter().map(|x| q * x).collect();
        for (x, d) in u[dst].iter_mut().zip(delta) {
            *x -= d;
        }
    };
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    let mut col = 0usize;
    for r in 0..m {
        if col == n {
            break;
        }
        // Euclid across columns col..n on row r until one nonzero remains.
        loop {
            let mut nonzero: Vec<usize> = (col..n).filter(|&j| !h[r][j].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by(|&x, &y| h[r][x].magnitude().cmp(h[r][y].magnitude()));
            let a = nonzero[0];
            let b = nonzero[1];
            let q = &h[r][b] / &h[r][a]; // truncated division shrinks |h[r][b]|
            col_op_sub(&mut h, &mut u, b, a, &q);
        }
        if let Some(j) = (col..n).find(|&j| !h[r][j].is_zero()) {
            h.iter_mut().for_each(|row| row.swap(col, j));
            u.swap(col, j);
            pivot_of_row[r] = Some(col);
            col += 1;
        }
    }
    let rank = col;
    // Forward-substitute for y with H·y = v (y is zero on kernel columns).
    let mut y = vec![BigInt::zero(); n];
    for r in 0..m {
        let mut rhs = sys.v[r].clone();
        for (j, yj) in y.iter().enumerate().take(rank) {
            rhs -= &h[r][j] * yj;
        }
        match pivot_of_row[r] {
            Some(c) => {
                let d = &h[r][c];
                if (&rhs % d).is_zero() {
                    y[c] = rhs / d;
                } else {
                    return None;
                }
            }
            None => {
                if !rhs.is_zero() {
                    return None;
                }
            }
        }
    }
    // k = U·y; kernel basis is the trailing columns of U.
    let k: Vec<BigInt> = (0..n)
        .map(|i| {
            let mut acc = BigInt::zero();
            for (j, yj) in y.iter().enumerate().take(rank) {
                acc += &u[j][i] * yj;
            }
            acc
        })
        .collect();
    let kernel: Vec<Vec<BigInt>> = (rank..n).map(|j| u[j].clone()).collect();
    Some((k, kernel))
}

/// Hierarchical row weights: W_last = 1 and each earlier (more
/// significant) row outweighs any achievable combination of the later ones
/// within the matrix's own coefficient range. This turns the lexicographic
/// "far smaller than 1" of every ratio into a strictly negative linear
/// functional, which bounds the branch-and-prune enumeration below.
fn row_weights(sys: &ExponentSystem) -> Vec<BigInt> {
    let m = sys.a.len();
    let mut cmax = BigInt::one();
    for row in sys.a.iter().chain(std::iter::once(&sys.v)) {
        for x in row {
            if x.magnitude() > cmax.magnitude() {
                cmax = BigInt::from_biguint(num_bigint::Sign::Plus, x.magnitude().clone());
            }
        }
    }
    let mut w = vec![BigInt::one(); m];
    for r in (0..m.saturating_sub(1)).rev() {
        let tail: BigInt = w[r + 1..].iter().sum();
        w[r] = &cmax * &tail + 1;
    }
    w
}

fn to_multi_index(k: &[BigInt]) -> Option<MultiIndex> {
    let mut out = Vec::with_capacity(k.len());
    for x in k {
        out.push(i64::try_from(x.clone()).ok()?);
    }
    Some(MultiIndex::new(out))
}

/// All k >= base with μ^k = g, by exact branch-and-prune over the scaled
/// integer exponent system. The weight functional λ is strictly negative
/// on every ratio column, so each residual bounds the remaining
/// multiplicities and the search is finite.
pub fn mu_representations(g: &Monomial, ratios: &RatioSet, base: &MultiIndex) -> Vec<MultiIndex> {
    let n = ratios.len();
    if n == 0 || base.dim() != n {
        return Vec::new();
    }
    let sys = build_system(g, ratios);
    // Shift to l = k - base >= 0.
    let mut v = sys.v.clone();
    for (r, row) in sys.a.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            v[r] -= entry * BigInt::from(base.components()[c]);
        }
    }
    let w = row_weights(&sys);
    let lambda = |col: &[BigInt]| -> BigInt {
        col.iter().zip(&w).map(|(x, wr)| x * wr).sum()
    };
    let m = sys.a.len();
    let mut cols: Vec<(usize, Vec<BigInt>, BigInt)> = (0..n)
        .map(|c| {
            let col: Vec<BigInt> = (0..m).map(|r| sys.a[r][c].clone()).collect();
            let l = lambda(&col);
            (c, col, l)
        })
        .collect();
    debug_assert!(cols.iter().all(|(_, _, l)| l.is_negative()));
    // most negative first: big ratios branch least
    cols.sort_by(|a, b| a.2.cmp(&b.2));

    // Pruning tables. A row untouched by the remaining columns must have a
    // zero residual; a row whose remaining entries all share one sign
    // bounds the current multiplicity sharply (and rejects residuals of
    // the wrong sign outright).
    let settled_rows: Vec<Vec<usize>> = (0..=n)
        .map(|level| {
            (0..m)
                .filter(|&r| cols[level..].iter().all(|(_, col, _)| col[r].is_zero()))
                .collect()
        })
        .collect();
    let same_sign_rows: Vec<Vec<usize>> = (0..n)
        .map(|level| {
            (0..m)
                .filter(|&r| {
                    !cols[level].1[r].is_zero()
                        && (cols[level..].iter().all(|(_, col, _)| !col[r].is_positive())
                            || cols[level..].iter().all(|(_, col, _)| !col[r].is_negative()))
                })
                .collect()
        })
        .collect();

    struct Search<'a> {
        cols: &'a [(usize, Vec<BigInt>, BigInt)],
        settled_rows: &'a [Vec<usize>],
        same_sign_rows: &'a [Vec<usize>],
        assignment: Vec<BigInt>,
        found: Vec<Vec<BigInt>>,
    }
    impl Search<'_> {
        fn dfs(&mut self, level: usize, residual: &[BigInt], lam_residual: BigInt) {
            if lam_residual.is_positive() {
                return;
            }
            for &r in &self.settled_rows[level] {
                if !residual[r].is_zero() {
                    return;
                }
            }
            if level == self.cols.len() {
                if residual.iter().all(|x| x.is_zero()) {
                    self.found.push(self.assignment.clone());
                }
                return;
            }
            let (slot, col, lam_col) = &self.cols[level];
            let mut max = (&lam_residual / lam_col).max(BigInt::zero());
            for &r in &self.same_sign_rows[level] {
                // remaining contributions to row r all have the sign of
                // col[r], so the residual must too, and l_i is capped
                if residual[r].sign() != num_bigint::Sign::NoSign
                    && residual[r].sign() != col[r].sign()
                {
                    return;
                }
                max = max.min((&residual[r] / &col[r]).max(BigInt::zero()));
            }
            if level + 1 == self.cols.len() {
                // last column: solve directly from any active row
                if let Some(r) = (0..col.len()).find(|&r| !col[r].is_zero()) {
                    if (&residual[r] % &col[r]).is_zero() {
                        let mult = &residual[r] / &col[r];
                        if !mult.is_negative()
                            && residual
                                .iter()
                                .zip(col.iter())
                                .all(|(t, a)| (t - &mult * a).is_zero())
                        {
                            self.assignment[*slot] = mult;
                            self.found.push(self.assignment.clone());
                            self.assignment[*slot] = BigInt::zero();
                        }
                    }
                }
                return;
            }
            let mut mult = BigInt::zero();
            while mult <= max {
                self.assignment[*slot] = mult.clone();
                let lam_next = &lam_residual - &mult * lam_col;
                let res_next: Vec<BigInt> = residual
                    .iter()
                    .zip(col.iter())
                    .map(|(t, a)| t - &mult * a)
                    .collect();
                self.dfs(level + 1, &res_next, lam_next);
                self.assignment[*slot] = BigInt::zero();
                mult += 1;
            }
        }
    }
    let lam_v = lambda(&v);
    let mut search = Search {
        cols: &cols,
        settled_rows: &settled_rows,
        same_sign_rows: &same_sign_rows,
        assignment: vec![BigInt::zero(); n],
        found: Vec::new(),
    };
    search.dfs(0, &v, lam_v);
    let found = search.found;

    let mut out: Vec<MultiIndex> = found
        .into_iter()
        .filter_map(|l| {
            let k: Vec<BigInt> = l
                .iter()
                .zip(base.components())
                .map(|(li, b)| li + BigInt::from(*b))
                .collect();
            to_multi_index(&k)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Group membership: is g a product of (possibly negative) ratio powers?
pub fn in_ratio_group(g: &Monomial, ratios: &RatioSet) -> bool {
    if ratios.is_empty() {
        return g.is_one();
    }
    hnf_solve(&build_system(g, ratios)).is_some()
}

/// A canonical integral exponent vector for g over the ratio group, if one
/// exists. With an ambiguous grid (nontrivial relations among the ratios)
/// this picks the Hermite particular solution, which is deterministic.
fn canonical_representation(g: &Monomial, ratios: &RatioSet) -> Option<MultiIndex> {
    if ratios.is_empty() {
        return None;
    }
    let (k, _) = hnf_solve(&build_system(g, ratios))?;
    to_multi_index(&k)
}

// ---------------------------------------------------------------------------
// μ-smallness and the addenda
// ---------------------------------------------------------------------------

/// g is μ-small iff it can be written μ^k with k > 0.
pub fn is_mu_small(g: &Monomial, ratios: &RatioSet) -> bool {
    if ratios.is_empty() {
        return false;
    }
    let zero = MultiIndex::zeros(ratios.len());
    mu_representations(g, ratios, &zero)
        .into_iter()
        .any(|k| k.is_strictly_positive())
}

/// A canonical exponent vector for every monomial of a series, or NotInGrid.
fn exponent_set(t: &Series, ratios: &RatioSet) -> Result<Vec<MultiIndex>> {
    let mut out = Vec::new();
    for (g, _) in t.terms() {
        match canonical_representation(g, ratios) {
            Some(k) => out.push(k),
            None => return Err(Error::NotInGrid),
        }
    }
    Ok(out)
}

/// Extend μ so that a small series T becomes manifestly μ̃-small: add μ^k
/// for the minimal exponents of supp T that are not already positive.
pub fn smallness_addendum(t: &Series, ratios: &RatioSet) -> Result<RatioSet> {
    if !t.is_small()? {
        return Err(Error::NotSmall);
    }
    let e = exponent_set(t, ratios)?;
    let min = min_elements(&e)?;
    let mut out = ratios.clone();
    for k in min {
        if !k.is_strictly_positive() {
            let g = ratios.pow(&k);
            debug_assert!(g.is_small());
            // the canonical exponent may be non-positive even when some
            // positive representation exists; only genuinely new ratios
            // are added
            if !out.contains(&g) && !is_mu_small(&g, &out) {
                out.insert(g);
            }
        }
    }
    Ok(out)
}

/// Ratios sufficient to invert A: μ plus the smallness addendum of the S
/// from the multiplicative decomposition A = a·g·(1+S).
pub fn inversion_addendum(a: &Series, ratios: &RatioSet) -> Result<RatioSet> {
    let (_, _, s) = a.decompose_multiplicative()?;
    if s.terms().is_empty() {
        return Ok(ratios.clone());
    }
    smallness_addendum(&s, ratios)
}

/// Close μ under "exponents generated": for every ratio x^b e^L, each
/// monomial of L must lie in the group generated by the set; missing ones
/// are added (inverted to their small side) and processed in turn.
pub fn heredity_addendum(ratios: &RatioSet) -> Result<RatioSet> {
    let mut out = ratios.clone();
    let mut queue: Vec<Monomial> = out.ratios().to_vec();
    while let Some(r) = queue.pop() {
        let depth = r.depth();
        let core_exp = r.exp_part().clone();
        let _ = depth;
        for (h, _) in core_exp.terms() {
            // h lives one level shallower than r's core; compare within the
            // group after normalizing to r's depth convention.
            let h_at_depth = promote_exponent_monomial(h, r.depth());
            if !in_ratio_group(&h_at_depth, &out) {
                let small = if h_at_depth.is_small() {
                    h_at_depth.clone()
                } else {
                    h_at_depth.inv()
                };
                if !out.contains(&small) {
                    out.insert(small.clone());
                    queue.push(small);
                }
            }
        }
    }
    Ok(out)
}

/// Exponent-support monomials of a depth-M core are depth-0 objects written
/// in the core variable; as values they sit at the same depth M.
fn promote_exponent_monomial(h: &Monomial, depth: u32) -> Monomial {
    if depth == 0 || h.is_one() {
        h.clone()
    } else {
        Monomial::new_unchecked(depth, h.x_exp().clone(), h.exp_part().clone())
    }
}

/// Heredity closure plus x^{-1}; idempotent.
pub fn derivative_addendum(ratios: &RatioSet) -> Result<RatioSet> {
    let mut out = heredity_addendum(ratios)?;
    let x_inv = Monomial::x_power(Rat::from_integer((-1).into()));
    if !out.contains(&x_inv) {
        out.insert(x_inv);
    }
    Ok(out)
}

/// S μ-dominates T: every monomial of T is μ-dominated by some monomial of
/// S, i.e. their ratio is manifestly μ-small.
pub fn mu_dominates(s: &Series, t: &Series, ratios: &RatioSet) -> Result<bool> {
    for (g, _) in s.terms().iter().chain(t.terms()) {
        if !in_ratio_group(g, ratios) {
            return Err(Error::NotInGrid);
        }
    }
    'outer: for (b, _) in t.terms() {
        for (a, _) in s.terms() {
            if is_mu_small(&b.div(a), ratios) {
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}
