//! Exact sparse elimination: ranks, kernels and echelon bases.
//!
//! Ranks are computed fraction-free. Every vector is scaled to a primitive
//! integer vector and pivots are eliminated by cross-multiplication followed
//! by content removal, first by sparse pivoting in checked `i64` arithmetic
//! and, if any intermediate overflows, again in arbitrary precision.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{axpy, SparseVec, Q};

/// Rank of the span of the given sparse columns.
pub fn rank(cols: &[SparseVec]) -> usize {
    match rank_small(cols) {
        Some(r) => r,
        None => rank_big(cols),
    }
}

fn lcm_denominators(v: &SparseVec) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
}

fn primitive_big(v: &mut Vec<(usize, BigInt)>) {
    let g = v.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for (_, c) in v.iter_mut() {
            *c /= &g;
        }
    }
    if v.first().map(|(_, c)| c.is_negative()).unwrap_or(false) {
        for (_, c) in v.iter_mut() {
            *c = -c.clone();
        }
    }
}

fn to_integer_big(v: &SparseVec) -> Vec<(usize, BigInt)> {
    let l = lcm_denominators(v);
    let mut out: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(i, c)| (*i, (c.numer() * (&l / c.denom()))))
        .collect();
    primitive_big(&mut out);
    out
}

fn combine_big(
    a: &[(usize, BigInt)],
    ca: &BigInt,
    b: &[(usize, BigInt)],
    cb: &BigInt,
) -> Vec<(usize, BigInt)> {
    // ca*a - cb*b
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, ca * &a[i].1));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(cb * &b[j].1)));
            j += 1;
        } else {
            let s = ca * &a[i].1 - cb * &b[j].1;
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn rank_big(cols: &[SparseVec]) -> usize {
    let mut basis: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for col in cols {
        let mut v = to_integer_big(col);
        while let Some(&(lead, ref lv)) = v.first() {
            let Some(b) = basis.get(&lead) else { break };
            let bl = &b[0].1;
            let g = bl.gcd(lv);
            let (ca, cb) = (bl / &g, lv / &g);
            v = combine_big(&v, &ca, b, &cb);
            primitive_big(&mut v);
        }
        if let Some(&(lead, _)) = v.first() {
            basis.insert(lead, v);
        }
    }
    basis.len()
}

fn to_integer_small(v: &SparseVec) -> Option<Vec<(usize, i64)>> {
    let l = lcm_denominators(v);
    let mut out = Vec::with_capacity(v.len());
    for (i, c) in v {
        let n = c.numer() * (&l / c.denom());
        out.push((*i, n.to_i64()?));
    }
    primitive_small(&mut out);
    Some(out)
}

fn primitive_small(v: &mut [(usize, i64)]) {
    let g = v.iter().fold(0i64, |acc, (_, c)| acc.gcd(c));
    if g > 1 {
        for (_, c) in v.iter_mut() {
            *c /= g;
        }
    }
    if v.first().map(|(_, c)| *c < 0).unwrap_or(false) {
        for (_, c) in v.iter_mut() {
            *c = -*c;
        }
    }
}

fn combine_small(a: &[(usize, i64)], ca: i64, b: &[(usize, i64)], cb: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, ca.checked_mul(a[i].1)?));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, cb.checked_mul(b[j].1)?.checked_neg()?));
            j += 1;
        } else {
            let s = ca.checked_mul(a[i].1)?.checked_sub(cb.checked_mul(b[j].1)?)?;
            if s != 0 {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Sparse elimination in checked `i64`: repeatedly pivots on the shortest
/// column, choosing its shortest row and preferring unit entries, and folds
/// the pivot column into every other column meeting the pivot row.
fn rank_small(cols: &[SparseVec]) -> Option<usize> {
    let mut row_id: HashMap<usize, usize> = HashMap::new();
    let mut mat: Vec<Vec<(usize, i64)>> = Vec::with_capacity(cols.len());
    for col in cols {
        let mut v: Vec<(usize, i64)> = to_integer_small(col)?
            .into_iter()
            .map(|(i, c)| {
                let n = row_id.len();
                (*row_id.entry(i).or_insert(n), c)
            })
            .collect();
        v.sort_unstable_by_key(|e| e.0);
        mat.push(v);
    }
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); row_id.len()];
    for (j, v) in mat.iter().enumerate() {
        for (i, _) in v {
            rows[*i].insert(j);
        }
    }
    let mut queue: BTreeSet<(usize, usize)> = mat.iter().enumerate().map(|(j, v)| (v.len(), j)).collect();
    let mut rank = 0;
    while let Some((len, j)) = queue.pop_first() {
        if len == 0 {
            continue;
        }
        let pivot_col = std::mem::take(&mut mat[j]);
        for (i, _) in &pivot_col {
            rows[*i].remove(&j);
        }
        let &(pi, pv) = pivot_col
            .iter()
            .min_by_key(|(i, c)| (c.unsigned_abs() != 1, rows[*i].len()))
            .expect("non-empty pivot column");
        let others: Vec<usize> = rows[pi].iter().copied().collect();
        for k in others {
            let old = std::mem::take(&mut mat[k]);
            queue.remove(&(old.len(), k));
            let a = old.iter().find(|(i, _)| *i == pi).map(|e| e.1).unwrap_or(0);
            let g = pv.gcd(&a);
            let mut merged = combine_small(&old, pv / g, &pivot_col, a / g)?;
            primitive_small(&mut merged);
            for (i, _) in &old {
                rows[*i].remove(&k);
            }
            for (i, _) in &merged {
                rows[*i].insert(k);
            }
            queue.insert((merged.len(), k));
            mat[k] = merged;
        }
        rank += 1;
    }
    Some(rank)
}

/// Incremental row-echelon basis over the rationals (pivot = leading index,
/// normalised to 1).
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` until its leading index is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, c)) = v.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => v = axpy(&v, &(-c), p),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns `true` when it was independent of the basis.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.first().cloned() {
            None => false,
            Some((lead, c)) => {
                let inv = Q::one() / c;
                let normed = r.iter().map(|(i, x)| (*i, x * &inv)).collect();
                self.pivots.insert(lead, normed);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

/// Basis of `{ x : sum_j x_j cols[j] = 0 }`, expressed in column coordinates.
pub fn kernel_basis(cols: &[SparseVec]) -> Vec<SparseVec> {
    // pivot lead -> (reduced vector with lead normalised to 1, combination)
    let mut basis: HashMap<usize, (SparseVec, SparseVec)> = HashMap::new();
    let mut kernel = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut comb: SparseVec = vec![(j, Q::one())];
        while let Some((lead, c)) = v.first().cloned() {
            match basis.get(&lead) {
                Some((p, pc)) => {
                    let m = -c;
                    v = axpy(&v, &m, p);
                    comb = axpy(&comb, &m, pc);
                }
                None => break,
            }
        }
        match v.first().cloned() {
            None => kernel.push(comb),
            Some((lead, c)) => {
                let inv = Q::one() / c;
                let v: SparseVec = v.iter().map(|(i, x)| (*i, x * &inv)).collect();
                let comb: SparseVec = comb.iter().map(|(i, x)| (*i, x * &inv)).collect();
                basis.insert(lead, (v, comb));
            }
        }
    }
    kernel
}

/// Applies a column-major sparse matrix to a sparse vector.
pub fn apply(cols: &[SparseVec], x: &SparseVec) -> SparseVec {
    let mut acc = SparseVec::new();
    for (j, c) in x {
        acc = axpy(&acc, c, &cols[*j]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn dense_rank_oracle(m: &[Vec<i64>]) -> usize {
        // plain rational Gaussian elimination on a dense copy
        let mut a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect();
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    for k in 0..cols {
                        let t = &f * &a[r][k];
                        a[i][k] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn cols_of(m: &[Vec<i64>]) -> Vec<SparseVec> {
        let ncols = m[0].len();
        (0..ncols)
            .map(|j| {
                m.iter()
                    .enumerate()
                    .filter(|(_, r)| r[j] != 0)
                    .map(|(i, r)| (i, q(r[j])))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_matches_dense() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(&cols_of(&m)), dense_rank_oracle(&m));
        assert_eq!(rank(&cols_of(&m)), 2);
    }

    #[test]
    fn big_path_agrees() {
        let cols = vec![
            vec![(0, q(i64::MAX / 3)), (1, q(7))],
            vec![(0, q(i64::MAX / 5)), (1, q(11))],
            vec![(0, q(1)), (1, q(1))],
        ];
        assert_eq!(rank_big(&cols), 2);
        assert_eq!(rank(&cols), 2);
    }

    #[test]
    fn kernel_is_kernel() {
        let cols = vec![
            vec![(0, q(1)), (1, q(1))],
            vec![(0, q(2)), (1, q(2))],
            vec![(1, q_frac(1, 3))],
        ];
        let k = kernel_basis(&cols);
        assert_eq!(k.len(), 1);
        assert!(apply(&cols, &k[0]).is_empty());
    }

    #[test]
    fn echelon_independence() {
        let mut e = Echelon::new();
        assert!(e.insert(vec![(1, q(2))]));
        assert!(!e.insert(vec![(1, q(5))]));
        assert!(e.insert(vec![(0, q(1)), (1, q(1))]));
        assert!(e.contains(&vec![(0, q(3))]));
    }

    proptest::proptest! {
        #[test]
        fn sparse_pivoting_matches_big_path(
            entries in proptest::collection::vec(proptest::sample::select(vec![0i64, 0, 0, 0, 1, -1, 2, 3]), 144),
        ) {
            let m: Vec<Vec<i64>> = entries.chunks(12).map(|r| r.to_vec()).collect();
            let cols = cols_of(&m);
            proptest::prop_assert_eq!(rank_small(&cols), Some(rank_big(&cols)));
            proptest::prop_assert_eq!(rank_big(&cols), dense_rank_oracle(&m));
        }

        #[test]
        fn rank_invariant_under_column_permutation(
            entries in proptest::collection::vec(-2i64..3, 20),
            seed in 0usize..20,
        ) {
            let m: Vec<Vec<i64>> = entries.chunks(5).map(|r| r.to_vec()).collect();
            let cols = cols_of(&m);
            let mut perm = cols.clone();
            let n = perm.len();
            perm.rotate_left(seed % n);
            perm.reverse();
            proptest::prop_assert_eq!(rank(&cols), rank(&perm));
            proptest::prop_assert_eq!(rank(&cols), dense_rank_oracle(&m));
        }
    }
}
