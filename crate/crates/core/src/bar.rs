//! The curved two-sided bar construction `A ⊗ Ā^{⊗n} ⊗ A` with its
//! differentials `d₋₁`, `d_v`, `d₁`, the unit-insertion homotopy and a
//! validator for generalized resolutions.
//!
//! Operators act lazily on basis tensors, so relations can be checked on
//! every basis tensor without materialising large matrices. Small columns
//! can still be turned into [`LinearMap`]s.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdg::{validate_cdg, AlgebraPresentation, CdgViolation};
use crate::graded::{CochainComplex, GradedError, GradedSpace, LinearMap};
use crate::par;
use crate::rational::{axpy, format_q, sign, SparseVec, Q};

/// Basis tensor `[a0, v1, .., vn, a_{n+1}]` of algebra basis indices.
pub type Tensor = Vec<usize>;
/// Linear combination of basis tensors.
pub type TensorVec = BTreeMap<Tensor, Q>;

#[derive(Debug, Error)]
pub enum BarError {
    #[error("tensor length must be at least 1, got {0}")]
    TooShort(usize),
    #[error("algebra fails the cdg axioms ({} violations)", .0.len())]
    InvalidAlgebra(Vec<CdgViolation>),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Deliberate corruptions used to show that the identity suites are not
/// vacuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarMutation {
    /// Flip the sign of the insertion at `slot` (1-based) of `d₁` on `column`.
    FlipD1Sign { column: usize, slot: usize },
    /// Negate the homotopy on `column`.
    NegateHomotopy { column: usize },
}

#[derive(Debug, Clone)]
pub struct BarComplex {
    algebra: Arc<AlgebraPresentation>,
    reduced: bool,
    max_len: usize,
    middle: Vec<usize>,
    middle_pos: Vec<Option<usize>>,
    mutation: Option<BarMutation>,
}

pub fn build_bar(a: &AlgebraPresentation, reduced: bool, n: usize) -> Result<BarComplex, BarError> {
    if n < 1 {
        return Err(BarError::TooShort(n));
    }
    let v = validate_cdg(a);
    if !v.is_empty() {
        return Err(BarError::InvalidAlgebra(v));
    }
    Ok(BarComplex::new_unchecked(a.clone(), reduced, n))
}

fn add_term(v: &mut TensorVec, t: Tensor, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(t.clone()).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&t);
    }
}

pub fn add_into(acc: &mut TensorVec, c: &Q, v: &TensorVec) {
    for (t, x) in v {
        add_term(acc, t.clone(), c * x);
    }
}

impl BarComplex {
    /// Skips the cdg validation (the caller vouches for the algebra).
    pub fn new_unchecked(a: AlgebraPresentation, reduced: bool, n: usize) -> Self {
        let middle: Vec<usize> = if reduced {
            a.reduced_indices()
        } else {
            (0..a.dim()).collect()
        };
        let mut middle_pos = vec![None; a.dim()];
        for (p, &i) in middle.iter().enumerate() {
            middle_pos[i] = Some(p);
        }
        Self {
            algebra: Arc::new(a),
            reduced,
            max_len: n,
            middle,
            middle_pos,
            mutation: None,
        }
    }

    pub fn with_mutation(mut self, m: BarMutation) -> Self {
        self.mutation = Some(m);
        self
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Algebra indices allowed as middle factors.
    pub fn middle(&self) -> &[usize] {
        &self.middle
    }

    pub fn column_dim(&self, n: usize) -> usize {
        let d = self.algebra.dim();
        d * d * self.middle.len().pow(n as u32)
    }

    pub fn encode(&self, t: &[usize]) -> usize {
        let d = self.algebra.dim();
        let m = self.middle.len();
        let mut idx = t[0];
        for &v in &t[1..t.len() - 1] {
            idx = idx * m + self.middle_pos[v].expect("middle factor");
        }
        idx * d + t[t.len() - 1]
    }

    pub fn decode(&self, n: usize, mut idx: usize) -> Tensor {
        let d = self.algebra.dim();
        let m = self.middle.len();
        let mut t = vec![0; n + 2];
        t[n + 1] = idx % d;
        idx /= d;
        for k in (1..=n).rev() {
            t[k] = self.middle[idx % m];
            idx /= m;
        }
        t[0] = idx;
        t
    }

    pub fn tensor_degree(&self, t: &[usize]) -> i64 {
        self.algebra.grading().reduce(t.iter().map(|&i| self.algebra.degree(i)).sum())
    }

    pub fn tensor_label(&self, t: &[usize]) -> String {
        t.iter().map(|&i| self.algebra.label(i)).collect::<Vec<_>>().join("⊗")
    }

    pub fn render(&self, v: &TensorVec) -> Vec<(String, String)> {
        v.iter().map(|(t, c)| (self.tensor_label(t), format_q(c))).collect()
    }

    /// Projection onto the chosen complement of the scalars (identity on the
    /// unreduced bar).
    fn project(&self, v: &SparseVec) -> SparseVec {
        if self.reduced {
            v.iter().filter(|(i, _)| *i != self.algebra.unit()).cloned().collect()
        } else {
            v.clone()
        }
    }

    /// Replaces position `k` of `t` by each term of `v`, scaled by `c`.
    fn splice(out: &mut TensorVec, t: &[usize], k: usize, v: &SparseVec, c: &Q) {
        for (i, x) in v {
            let mut s = t.to_vec();
            s[k] = *i;
            add_term(out, s, c * x);
        }
    }

    /// `d₋₁ = Σ_{i=0}^{n} (−1)^i (contract factors i and i+1)`, column n → n−1.
    pub fn d_minus1(&self, t: &[usize]) -> TensorVec {
        let a = &self.algebra;
        let n = t.len() - 2;
        let mut out = TensorVec::new();
        if n == 0 {
            return out;
        }
        for i in 0..=n {
            let prod = a.mul_basis(t[i], t[i + 1]);
            let prod = if i == 0 || i == n { prod.clone() } else { self.project(prod) };
            let s = sign(i as i64);
            for (k, c) in &prod {
                let mut r = Vec::with_capacity(n + 1);
                r.extend_from_slice(&t[..i]);
                r.push(*k);
                r.extend_from_slice(&t[i + 2..]);
                add_term(&mut out, r, &s * c);
            }
        }
        out
    }

    /// `d_v = (−1)^n Σ_j (−1)^{|t_0|+..+|t_{j−1}|} (d applied to factor j)`.
    pub fn d_v(&self, t: &[usize]) -> TensorVec {
        let a = &self.algebra;
        let n = t.len() - 2;
        let mut out = TensorVec::new();
        let mut before = 0i64;
        for j in 0..t.len() {
            let dj = a.d_basis(t[j]);
            if !dj.is_empty() {
                let dj = if j == 0 || j == n + 1 { dj.clone() } else { self.project(dj) };
                Self::splice(&mut out, t, j, &dj, &sign(n as i64 + before));
            }
            before += a.degree(t[j]);
        }
        out
    }

    fn d1_sign(&self, column: usize, slot: usize) -> Q {
        let s = sign(slot as i64 + 1);
        match self.mutation {
            Some(BarMutation::FlipD1Sign { column: c, slot: k }) if c == column && k == slot => -s,
            _ => s,
        }
    }

    /// `d₁ = Σ_{k=1}^{n+1} (−1)^{k+1} (insert B before factor k)`, column n → n+1.
    pub fn d_1(&self, t: &[usize]) -> TensorVec {
        let n = t.len() - 2;
        let b = self.project(self.algebra.curvature());
        let mut out = TensorVec::new();
        if b.is_empty() {
            return out;
        }
        for k in 1..=n + 1 {
            let s = self.d1_sign(n, k);
            for (i, c) in &b {
                let mut r = Vec::with_capacity(n + 3);
                r.extend_from_slice(&t[..k]);
                r.push(*i);
                r.extend_from_slice(&t[k..]);
                add_term(&mut out, r, &s * c);
            }
        }
        out
    }

    /// `h(a₀⊗..⊗a_{n+1}) = 1⊗π(a₀)⊗a₁⊗..⊗a_{n+1}`, column n → n+1.
    pub fn homotopy(&self, t: &[usize]) -> TensorVec {
        let n = t.len() - 2;
        let a = &self.algebra;
        let mut out = TensorVec::new();
        let head = self.project(&vec![(t[0], Q::one())]);
        let c = match self.mutation {
            Some(BarMutation::NegateHomotopy { column }) if column == n => -Q::one(),
            _ => Q::one(),
        };
        for (i, x) in &head {
            let mut r = Vec::with_capacity(n + 3);
            r.push(a.unit());
            r.push(*i);
            r.extend_from_slice(&t[1..]);
            add_term(&mut out, r, &c * x);
        }
        out
    }

    /// Multiplication `a₀⊗a₁ ↦ a₀a₁` on column 0.
    pub fn augmentation(&self, t: &[usize]) -> SparseVec {
        debug_assert_eq!(t.len(), 2);
        self.algebra.mul_basis(t[0], t[1]).clone()
    }

    /// `(Bx − xB)` for a basis tensor: `B a₀ ⊗ .. − .. ⊗ a_{n+1} B`.
    pub fn curvature_commutator(&self, t: &[usize]) -> TensorVec {
        let a = &self.algebra;
        let b = a.curvature();
        let mut out = TensorVec::new();
        if b.is_empty() {
            return out;
        }
        let last = t.len() - 1;
        let left = a.mul(b, &vec![(t[0], Q::one())]);
        Self::splice(&mut out, t, 0, &left, &Q::one());
        let right = a.mul(&vec![(t[last], Q::one())], b);
        Self::splice(&mut out, t, last, &right, &-Q::one());
        out
    }

    pub fn apply<F>(&self, op: F, v: &TensorVec) -> TensorVec
    where
        F: Fn(&[usize]) -> TensorVec,
    {
        let mut out = TensorVec::new();
        for (t, c) in v {
            add_into(&mut out, c, &op(t));
        }
        out
    }

    /// Column `n` as a graded space with labels `a0⊗v1⊗..⊗a'` and the
    /// internal degree of each tensor.
    pub fn column_space(&self, n: usize) -> Result<Arc<GradedSpace>, GradedError> {
        let basis = (0..self.column_dim(n))
            .map(|i| {
                let t = self.decode(n, i);
                (self.tensor_label(&t), self.tensor_degree(&t))
            })
            .collect();
        Ok(Arc::new(GradedSpace::new(self.algebra.grading(), basis)?))
    }

    /// Materialises `op` from column `n` to column `n + shift`.
    pub fn materialize<F>(
        &self,
        op: F,
        n: usize,
        shift: isize,
        internal_degree: i64,
        source: &Arc<GradedSpace>,
        target: &Arc<GradedSpace>,
    ) -> LinearMap
    where
        F: Fn(&[usize]) -> TensorVec + Sync + Send,
    {
        let tn = (n as isize + shift) as usize;
        let idx: Vec<usize> = (0..self.column_dim(n)).collect();
        let cols = par::map_collect(&idx, |&i| {
            let out = op(&self.decode(n, i));
            let mut col: SparseVec = out
                .into_iter()
                .map(|(t, c)| {
                    debug_assert_eq!(t.len(), tn + 2);
                    (self.encode(&t), c)
                })
                .collect();
            col.sort_by_key(|e| e.0);
            col
        });
        LinearMap::from_cols_unchecked(source.clone(), target.clone(), internal_degree, cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarRelation {
    DMinusOneSquared,
    DMinusOneAnticommutesWithDv,
    CurvatureRelation,
    DvAnticommutesWithDOne,
    DOneSquared,
    Homotopy,
    AugmentedHomotopy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarViolation {
    pub relation: BarRelation,
    pub column: usize,
    pub tensor: String,
    pub deviation: Vec<(String, String)>,
}

fn tv_sub(a: &TensorVec, b: &TensorVec) -> TensorVec {
    let mut out = a.clone();
    add_into(&mut out, &-Q::one(), b);
    out
}

fn tv_add(a: &TensorVec, b: &TensorVec) -> TensorVec {
    let mut out = a.clone();
    add_into(&mut out, &Q::one(), b);
    out
}

impl BarComplex {
    /// Every component of `d² = (B· − ·B)` for `d = d₋₁ + d_v + d₁`, checked
    /// on every basis tensor of every column where all maps involved stay
    /// within the stored columns `0..=N`.
    pub fn check_relations(&self) -> Vec<BarViolation> {
        let mut out = Vec::new();
        for n in 0..=self.max_len {
            out.extend(self.check_column(n));
        }
        out
    }

    fn check_column(&self, n: usize) -> Vec<BarViolation> {
        let big_n = self.max_len;
        let curved = self.algebra.is_curved();
        let found = par::filter_range(self.column_dim(n), |i| {
            let t = self.decode(n, i);
            let mut v = Vec::new();
            let mut push = |rel, dev: TensorVec| {
                if !dev.is_empty() {
                    v.push(BarViolation {
                        relation: rel,
                        column: n,
                        tensor: self.tensor_label(&t),
                        deviation: self.render(&dev),
                    });
                }
            };
            let dm = self.d_minus1(&t);
            let dv = self.d_v(&t);
            if n >= 2 {
                push(BarRelation::DMinusOneSquared, self.apply(|s| self.d_minus1(s), &dm));
            }
            if n >= 1 {
                let x = tv_add(&self.apply(|s| self.d_v(s), &dm), &self.apply(|s| self.d_minus1(s), &dv));
                push(BarRelation::DMinusOneAnticommutesWithDv, x);
            }
            if n < big_n {
                let d1 = self.d_1(&t);
                let mut lhs = self.apply(|s| self.d_v(s), &dv);
                add_into(&mut lhs, &Q::one(), &self.apply(|s| self.d_minus1(s), &d1));
                add_into(&mut lhs, &Q::one(), &self.apply(|s| self.d_1(s), &dm));
                push(BarRelation::CurvatureRelation, tv_sub(&lhs, &self.curvature_commutator(&t)));
                if curved {
                    let x = tv_add(&self.apply(|s| self.d_1(s), &dv), &self.apply(|s| self.d_v(s), &d1));
                    push(BarRelation::DvAnticommutesWithDOne, x);
                    if n + 2 <= big_n {
                        push(BarRelation::DOneSquared, self.apply(|s| self.d_1(s), &d1));
                    }
                }
            } else {
                // top column: only d_v² can be checked, and only without B
                if !curved {
                    push(BarRelation::CurvatureRelation, self.apply(|s| self.d_v(s), &dv));
                }
            }
            (!v.is_empty()).then_some(v)
        });
        found.into_iter().flatten().collect()
    }
}

/// `h d₋₁ + d₋₁ h = id` on columns `1..N−1` and the augmented identity
/// `d₋₁ h + (1⊗−)∘augmentation = id` on column 0.
pub fn check_homotopy(bar: &BarComplex) -> Vec<BarViolation> {
    let mut out = Vec::new();
    let a = bar.algebra();
    for n in 0..bar.max_len() {
        let found = par::filter_range(bar.column_dim(n), |i| {
            let t = bar.decode(n, i);
            let mut lhs = bar.apply(|s| bar.d_minus1(s), &bar.homotopy(&t));
            let relation = if n == 0 {
                for (k, c) in bar.augmentation(&t) {
                    add_term(&mut lhs, vec![a.unit(), k], c);
                }
                BarRelation::AugmentedHomotopy
            } else {
                add_into(&mut lhs, &Q::one(), &bar.apply(|s| bar.homotopy(s), &bar.d_minus1(&t)));
                BarRelation::Homotopy
            };
            add_term(&mut lhs, t.clone(), -Q::one());
            (!lhs.is_empty()).then(|| BarViolation {
                relation,
                column: n,
                tensor: bar.tensor_label(&t),
                deviation: bar.render(&lhs),
            })
        });
        out.extend(found);
    }
    out
}

/// Materialised data of a generalized resolution: columns `0..=N` and maps
/// `d_k` from column `n` to column `n + k` for `k = −1, 0, 1, 2, ..`.
#[derive(Debug, Clone)]
pub struct ResolutionData {
    pub columns: Vec<Arc<GradedSpace>>,
    /// `d_minus1[n]`: column n → n−1 (`None` for n = 0).
    pub d_minus1: Vec<Option<LinearMap>>,
    pub d_v: Vec<LinearMap>,
    /// `higher[k−1][n]`: `d_k` from column n to n+k, present while n+k ≤ N.
    pub higher: Vec<Vec<LinearMap>>,
    /// Per column, the map `d²` should equal (absent = 0).
    pub curvature_action: Vec<Option<LinearMap>>,
    /// `homotopy[n]`: column n → n+1, present while n+1 ≤ N.
    pub homotopy: Option<Vec<LinearMap>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionViolation {
    /// Column shift of the offending component of `d²`, or `None` for the
    /// homotopy identity.
    pub shift: Option<i64>,
    pub column: usize,
    pub basis_label: String,
    pub deviation: Vec<(String, String)>,
}

impl ResolutionData {
    fn top(&self) -> usize {
        self.columns.len() - 1
    }

    /// `d_k` on column `n`, for `k ≥ −1`.
    fn piece(&self, k: i64, n: usize) -> Option<&LinearMap> {
        match k {
            -1 => self.d_minus1.get(n).and_then(|m| m.as_ref()),
            0 => self.d_v.get(n),
            k => self.higher.get(k as usize - 1).and_then(|v| v.get(n)),
        }
    }

    fn max_k(&self) -> i64 {
        self.higher.len() as i64
    }
}

fn structural_check(data: &ResolutionData) -> Result<(), GradedError> {
    let top = data.top();
    let same = |m: &LinearMap, s: usize, t: usize| -> Result<(), GradedError> {
        if m.source().as_ref() != data.columns[s].as_ref() || m.target().as_ref() != data.columns[t].as_ref() {
            return Err(GradedError::Structural(format!("map from column {s} to column {t} has mismatched spaces")));
        }
        Ok(())
    };
    for n in 0..=top {
        for k in -1..=data.max_k() {
            if let Some(m) = data.piece(k, n) {
                let t = n as i64 + k;
                if t < 0 || t as usize > top {
                    return Err(GradedError::Structural(format!("d_{k} leaves the stored columns at {n}")));
                }
                same(m, n, t as usize)?;
            }
        }
        if let Some(Some(c)) = data.curvature_action.get(n) {
            same(c, n, n)?;
        }
    }
    Ok(())
}

/// Checks `d² = curvature_action` for `d = Σ d_k` component by component
/// and, if a homotopy is supplied, `h d₋₁ + d₋₁ h = id` on columns ≥ 1.
pub fn validate_generalized_resolution(data: &ResolutionData) -> Result<Vec<ResolutionViolation>, GradedError> {
    structural_check(data)?;
    let top = data.top() as i64;
    let kmax = data.max_k();
    let mut out = Vec::new();
    for n in 0..=data.top() {
        for shift in -2..=2 * kmax {
            // every pair (i, j) with i + j = shift, applying d_j first
            let pairs: Vec<(i64, i64)> = (-1..=kmax)
                .map(|j| (shift - j, j))
                .filter(|(i, _)| (-1..=kmax).contains(i))
                .collect();
            let defined = pairs.iter().all(|&(i, j)| {
                let mid = n as i64 + j;
                (0..=top).contains(&mid) && (0..=top).contains(&(mid + i))
            });
            if !defined || pairs.is_empty() {
                continue;
            }
            let dim = data.columns[n].dim();
            let found = par::filter_range(dim, |b| {
                let mut acc = SparseVec::new();
                for &(i, j) in &pairs {
                    let (Some(first), Some(second)) = (data.piece(j, n), data.piece(i, (n as i64 + j) as usize))
                    else {
                        continue;
                    };
                    acc = axpy(&acc, &Q::one(), &second.apply(first.col(b)));
                }
                if shift == 0 {
                    if let Some(Some(c)) = data.curvature_action.get(n) {
                        acc = axpy(&acc, &-Q::one(), c.col(b));
                    }
                }
                let target = (n as i64 + shift) as usize;
                (!acc.is_empty()).then(|| ResolutionViolation {
                    shift: Some(shift),
                    column: n,
                    basis_label: data.columns[n].label(b).to_string(),
                    deviation: data.columns[target].render(&acc),
                })
            });
            out.extend(found);
        }
    }
    if let Some(h) = &data.homotopy {
        for n in 1..data.top() {
            let (Some(dm), Some(dm_up)) = (data.piece(-1, n), data.piece(-1, n + 1)) else {
                continue;
            };
            let found = par::filter_range(data.columns[n].dim(), |b| {
                let mut acc = dm_up.apply(h[n].col(b));
                acc = axpy(&acc, &Q::one(), &h[n - 1].apply(dm.col(b)));
                acc = axpy(&acc, &-Q::one(), &vec![(b, Q::one())]);
                (!acc.is_empty()).then(|| ResolutionViolation {
                    shift: None,
                    column: n,
                    basis_label: data.columns[n].label(b).to_string(),
                    deviation: data.columns[n].render(&acc),
                })
            });
            out.extend(found);
        }
    }
    Ok(out)
}

impl BarComplex {
    /// Materialises columns `0..=N` with `d₋₁`, `d_v`, `d₁`, the curvature
    /// commutator and the homotopy.
    pub fn resolution_data(&self) -> Result<ResolutionData, GradedError> {
        let top = self.max_len;
        let columns: Vec<Arc<GradedSpace>> = (0..=top).map(|n| self.column_space(n)).collect::<Result<_, _>>()?;
        let d_minus1 = (0..=top)
            .map(|n| (n > 0).then(|| self.materialize(|t| self.d_minus1(t), n, -1, 0, &columns[n], &columns[n - 1])))
            .collect();
        let d_v = (0..=top)
            .map(|n| self.materialize(|t| self.d_v(t), n, 0, 1, &columns[n], &columns[n]))
            .collect();
        let d1 = (0..top)
            .map(|n| self.materialize(|t| self.d_1(t), n, 1, 2, &columns[n], &columns[n + 1]))
            .collect();
        let curvature_action = (0..=top)
            .map(|n| {
                self.algebra
                    .is_curved()
                    .then(|| self.materialize(|t| self.curvature_commutator(t), n, 0, 2, &columns[n], &columns[n]))
            })
            .collect();
        let homotopy = (0..top)
            .map(|n| self.materialize(|t| self.homotopy(t), n, 1, 0, &columns[n], &columns[n + 1]))
            .collect();
        Ok(ResolutionData {
            columns,
            d_minus1,
            d_v,
            higher: vec![d1],
            curvature_action,
            homotopy: Some(homotopy),
        })
    }

    /// The augmented complex `col_N → .. → col_0 → A` under `d₋₁`, placed in
    /// cohomological degrees `−N..1`.
    pub fn augmented_complex(&self) -> Result<CochainComplex, GradedError> {
        let a = &self.algebra;
        let top = self.max_len;
        let mut c = CochainComplex::new(crate::graded::Grading::Integer);
        let columns: Vec<Arc<GradedSpace>> = (0..=top).map(|n| self.column_space(n)).collect::<Result<_, _>>()?;
        for n in 0..=top {
            c.spaces.insert(-(n as i64), columns[n].clone());
        }
        c.spaces.insert(1, a.space().clone());
        for n in 1..=top {
            let m = self.materialize(|t| self.d_minus1(t), n, -1, 0, &columns[n], &columns[n - 1]);
            c.differentials.insert(-(n as i64), m);
        }
        let aug: Vec<SparseVec> = (0..self.column_dim(0)).map(|i| self.augmentation(&self.decode(0, i))).collect();
        c.differentials
            .insert(0, LinearMap::from_cols_unchecked(columns[0].clone(), a.space().clone(), 0, aug));
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{build_dual_numbers, build_ground_field, build_mf_algebra, random_cdg};
    use crate::graded::cohomology_dims;
    use crate::poly::Poly;

    fn curved_quartic() -> AlgebraPresentation {
        let names = vec!["x".to_string()];
        build_mf_algebra(&Poly::parse("x^2", &names).unwrap(), &names, 3).unwrap()
    }

    #[test]
    fn ground_field_columns_are_lines() {
        let reduced = build_bar(&build_ground_field(), true, 3).unwrap();
        assert_eq!(reduced.column_dim(0), 1);
        assert!((1..=3).all(|n| reduced.column_dim(n) == 0));
        let bar = build_bar(&build_ground_field(), false, 3).unwrap();
        assert!((0..=3).all(|n| bar.column_dim(n) == 1));
        // unreduced: d₋₁ alternates identity / zero
        let t1 = bar.decode(1, 0);
        assert_eq!(bar.d_minus1(&t1).len(), 0);
        let t2 = bar.decode(2, 0);
        assert_eq!(bar.d_minus1(&t2).len(), 1);
        assert!(bar.check_relations().is_empty());
        assert!(check_homotopy(&bar).is_empty());
    }

    #[test]
    fn dual_numbers_dimensions_and_homotopy() {
        let bar = build_bar(&build_dual_numbers(), true, 3).unwrap();
        assert!((0..=3).all(|n| bar.column_dim(n) == 4));
        assert!(bar.check_relations().is_empty());
        assert!(check_homotopy(&bar).is_empty());
    }

    #[test]
    fn curved_relations_hold() {
        let a = curved_quartic();
        for reduced in [true, false] {
            let bar = build_bar(&a, reduced, 3).unwrap();
            assert!(bar.check_relations().is_empty());
            assert!(check_homotopy(&bar).is_empty());
        }
    }

    #[test]
    fn random_presentations_satisfy_relations() {
        for seed in 0..10 {
            let a = random_cdg(seed);
            let bar = build_bar(&a, true, 3).unwrap();
            let v = bar.check_relations();
            assert!(v.is_empty(), "seed {seed}: {:?}", v.first());
            assert!(check_homotopy(&bar).is_empty(), "seed {seed}");
        }
    }

    #[test]
    fn flipped_d1_sign_is_localized() {
        let bar = build_bar(&curved_quartic(), true, 3).unwrap().with_mutation(BarMutation::FlipD1Sign {
            column: 1,
            slot: 2,
        });
        let v = bar.check_relations();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.column <= 2));
    }

    #[test]
    fn negated_homotopy_is_localized() {
        let bar = build_bar(&build_dual_numbers(), true, 4)
            .unwrap()
            .with_mutation(BarMutation::NegateHomotopy { column: 2 });
        let v = check_homotopy(&bar);
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.column == 2 || x.column == 3));
        assert!(v.iter().any(|x| x.column == 2));
    }

    #[test]
    fn materialized_resolution_validates() {
        let bar = build_bar(&curved_quartic(), true, 3).unwrap();
        let data = bar.resolution_data().unwrap();
        assert!(validate_generalized_resolution(&data).unwrap().is_empty());
        // a wrong d₂ breaks d² = curvature
        let mut bad = data.clone();
        let d2: Vec<LinearMap> = (0..2)
            .map(|n| {
                let (s, t) = (bad.columns[n].clone(), bad.columns[n + 2].clone());
                let mut cols = vec![SparseVec::new(); s.dim()];
                cols[0] = vec![(0, Q::one())];
                LinearMap::from_cols_unchecked(s, t, 3, cols)
            })
            .collect();
        bad.higher.push(d2);
        assert!(!validate_generalized_resolution(&bad).unwrap().is_empty());
    }

    #[test]
    fn homotopy_implies_acyclicity() {
        let bar = build_bar(&build_dual_numbers(), true, 3).unwrap();
        let c = bar.augmented_complex().unwrap();
        let dims = cohomology_dims(&c, &[-2, -1, 0, 1]).unwrap();
        assert_eq!(dims, vec![0, 0, 0, 0]);
    }
}
