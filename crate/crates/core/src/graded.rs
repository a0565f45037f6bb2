//! Finite graded vector spaces over the rationals, sparse homogeneous maps,
//! cochain complexes (possibly curved), totalization and cohomology.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Echelon};
use crate::par;
use crate::rational::{axpy, collect_sparse, format_q, scale, SparseVec, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grading {
    Integer,
    ModTwo,
}

impl Grading {
    #[inline]
    pub fn reduce(self, d: i64) -> i64 {
        match self {
            Grading::Integer => d,
            Grading::ModTwo => d.rem_euclid(2),
        }
    }

    #[inline]
    pub fn add(self, a: i64, b: i64) -> i64 {
        self.reduce(a + b)
    }

    #[inline]
    pub fn eq(self, a: i64, b: i64) -> bool {
        self.reduce(a) == self.reduce(b)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("entry {source_label:?} -> {target_label:?} violates map degree {degree}")]
    DegreeMismatch {
        source_label: String,
        target_label: String,
        degree: i64,
    },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("column index {0} is positive; columns must be bounded above by 0")]
    UnboundedColumns(i64),
    #[error("differential does not square to zero in the requested window ({} violations)", .0.len())]
    NotAComplex(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

/// Ordered basis of labelled homogeneous vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    grading: Grading,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new(grading: Grading, basis: Vec<(String, i64)>) -> Result<Self, GradedError> {
        let mut index = HashMap::with_capacity(basis.len());
        let mut out = Vec::with_capacity(basis.len());
        for (i, (label, degree)) in basis.into_iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(GradedError::DuplicateLabel(label));
            }
            out.push(BasisElement {
                label,
                degree: grading.reduce(degree),
            });
        }
        Ok(Self {
            grading,
            basis: out,
            index,
        })
    }

    pub fn empty(grading: Grading) -> Self {
        Self {
            grading,
            basis: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// All basis vectors placed in a single degree.
    pub fn concentrated(grading: Grading, degree: i64, labels: Vec<String>) -> Result<Self, GradedError> {
        Self::new(grading, labels.into_iter().map(|l| (l, degree)).collect())
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn lookup(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn dim_in_degree(&self, d: i64) -> usize {
        let d = self.grading.reduce(d);
        self.basis.iter().filter(|b| b.degree == d).count()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Human-readable rendering of a coordinate vector.
    pub fn render(&self, v: &SparseVec) -> Vec<(String, String)> {
        v.iter()
            .map(|(i, c)| (self.label(*i).to_string(), format_q(c)))
            .collect()
    }
}

/// Sparse degree-homogeneous map stored column-major by source index.
#[derive(Debug, Clone)]
pub struct LinearMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    degree: i64,
    cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        cols: Vec<SparseVec>,
    ) -> Result<Self, GradedError> {
        if cols.len() != source.dim() {
            return Err(GradedError::Structural(format!(
                "{} columns for a source of dimension {}",
                cols.len(),
                source.dim()
            )));
        }
        let g = source.grading();
        for (j, col) in cols.iter().enumerate() {
            for (i, _) in col {
                if *i >= target.dim() {
                    return Err(GradedError::IndexOutOfRange(*i));
                }
                if !g.eq(target.degree(*i), source.degree(j) + degree) {
                    return Err(GradedError::DegreeMismatch {
                        source_label: source.label(j).to_string(),
                        target_label: target.label(*i).to_string(),
                        degree,
                    });
                }
            }
        }
        Ok(Self {
            source,
            target,
            degree: g.reduce(degree),
            cols,
        })
    }

    /// Constructor for callers that build degree-correct columns by
    /// construction; the degree invariant is still checked in debug builds.
    pub fn from_cols_unchecked(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        cols: Vec<SparseVec>,
    ) -> Self {
        debug_assert_eq!(cols.len(), source.dim());
        let g = source.grading();
        Self {
            source,
            target,
            degree: g.reduce(degree),
            cols,
        }
    }

    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> Self {
        let n = source.dim();
        Self::from_cols_unchecked(source, target, degree, vec![Vec::new(); n])
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let cols = (0..space.dim()).map(|i| vec![(i, Q::one())]).collect();
        Self::from_cols_unchecked(space.clone(), space, 0, cols)
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn cols(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        linalg::apply(&self.cols, v)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap, GradedError> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(GradedError::Structural(
                "composition of maps with mismatched spaces".into(),
            ));
        }
        let cols = par::map_collect(first.cols.as_slice(), |c| self.apply(c));
        Ok(Self::from_cols_unchecked(
            first.source.clone(),
            self.target.clone(),
            first.degree + self.degree,
            cols,
        ))
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, GradedError> {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, GradedError> {
        self.combine(other, &(-Q::one()))
    }

    fn combine(&self, other: &LinearMap, c: &Q) -> Result<LinearMap, GradedError> {
        if self.source.as_ref() != other.source.as_ref() || self.target.as_ref() != other.target.as_ref() {
            return Err(GradedError::Structural("sum of maps between different spaces".into()));
        }
        let g = self.source.grading();
        if self.cols.iter().any(|c| !c.is_empty())
            && other.cols.iter().any(|c| !c.is_empty())
            && !g.eq(self.degree, other.degree)
        {
            return Err(GradedError::Structural("sum of maps of different degree".into()));
        }
        let degree = if self.cols.iter().all(|c| c.is_empty()) {
            other.degree
        } else {
            self.degree
        };
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| axpy(a, c, b))
            .collect();
        Ok(Self::from_cols_unchecked(
            self.source.clone(),
            self.target.clone(),
            degree,
            cols,
        ))
    }

    pub fn scaled(&self, c: &Q) -> LinearMap {
        let cols = self.cols.iter().map(|v| scale(v, c)).collect();
        Self::from_cols_unchecked(self.source.clone(), self.target.clone(), self.degree, cols)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.cols)
    }

    /// Dense row-major copy, for tests and diagnostics on small maps.
    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut m = vec![vec![Q::zero(); self.source.dim()]; self.target.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = c.clone();
            }
        }
        m
    }

    /// Restriction to the listed source columns and target rows (re-indexed).
    pub fn block(
        &self,
        source: Arc<GradedSpace>,
        src_idx: &[usize],
        target: Arc<GradedSpace>,
        tgt_idx: &[usize],
    ) -> LinearMap {
        let pos: HashMap<usize, usize> = tgt_idx.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let cols = src_idx
            .iter()
            .map(|&j| {
                collect_sparse(
                    self.cols[j]
                        .iter()
                        .filter_map(|(i, c)| pos.get(i).map(|&k| (k, c.clone()))),
                )
            })
            .collect();
        Self::from_cols_unchecked(source, target, self.degree, cols)
    }
}

/// One failure of `d∘d` to match the declared curvature action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub degree: i64,
    pub basis_label: String,
    /// Non-zero coordinates of `d²(e) - curvature(e)`.
    pub deviation: Vec<(String, String)>,
}

/// Cochain complex indexed by cohomological degree. For `Grading::ModTwo`
/// only degrees 0 and 1 are used and `d^1` maps back into degree 0.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    pub grading: Grading,
    pub spaces: BTreeMap<i64, Arc<GradedSpace>>,
    pub differentials: BTreeMap<i64, LinearMap>,
    pub curvature_action: Option<BTreeMap<i64, LinearMap>>,
}

impl CochainComplex {
    pub fn new(grading: Grading) -> Self {
        Self {
            grading,
            spaces: BTreeMap::new(),
            differentials: BTreeMap::new(),
            curvature_action: None,
        }
    }

    pub fn space(&self, k: i64) -> Option<&Arc<GradedSpace>> {
        self.spaces.get(&self.grading.reduce(k))
    }

    pub fn differential(&self, k: i64) -> Option<&LinearMap> {
        self.differentials.get(&self.grading.reduce(k))
    }

    pub fn dim(&self, k: i64) -> usize {
        self.space(k).map(|s| s.dim()).unwrap_or(0)
    }

    fn curvature(&self, k: i64) -> Option<&LinearMap> {
        self.curvature_action
            .as_ref()
            .and_then(|m| m.get(&self.grading.reduce(k)))
    }

    /// Degrees `k` for which `d^{k+1} ∘ d^k` is defined by stored data.
    fn square_degrees(&self) -> Vec<i64> {
        self.differentials
            .keys()
            .copied()
            .filter(|&k| self.differentials.contains_key(&self.grading.reduce(k + 1)))
            .collect()
    }

    fn check_structure(&self) -> Result<(), GradedError> {
        for (&k, d) in &self.differentials {
            if let Some(s) = self.space(k) {
                if s.as_ref() != d.source().as_ref() {
                    return Err(GradedError::Structural(format!("d^{k} has the wrong source")));
                }
            }
            if let Some(t) = self.space(k + 1) {
                if t.as_ref() != d.target().as_ref() {
                    return Err(GradedError::Structural(format!("d^{k} has the wrong target")));
                }
            }
            if let Some(next) = self.differential(k + 1) {
                if next.source().as_ref() != d.target().as_ref() {
                    return Err(GradedError::Structural(format!(
                        "target of d^{k} differs from source of d^{}",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn square_violations(&self, k: i64) -> Vec<Violation> {
        let (Some(d0), Some(d1)) = (self.differential(k), self.differential(k + 1)) else {
            return Vec::new();
        };
        let curv = self.curvature(k);
        let idx: Vec<usize> = (0..d0.source().dim()).collect();
        let found = par::map_collect(idx.as_slice(), |&j| {
            let dd = d1.apply(d0.col(j));
            let dev = match curv {
                Some(c) => axpy(&dd, &(-Q::one()), c.col(j)),
                None => dd,
            };
            (!dev.is_empty()).then(|| Violation {
                degree: k,
                basis_label: d0.source().label(j).to_string(),
                deviation: d1.target().render(&dev),
            })
        });
        found.into_iter().flatten().collect()
    }

    /// Cohomology dimension without representatives.
    pub fn cohomology_dim(&self, k: i64) -> Result<usize, GradedError> {
        self.refuse_if_not_complex(k)?;
        let n = self.dim(k);
        let rank_out = self.differential(k).map(|d| d.rank()).unwrap_or(0);
        let rank_in = self.differential(k - 1).map(|d| d.rank()).unwrap_or(0);
        Ok(n - rank_out - rank_in)
    }

    fn refuse_if_not_complex(&self, k: i64) -> Result<(), GradedError> {
        self.check_structure()?;
        // d^k ∘ d^{k-1} must vanish; a non-zero curvature there is refused too
        let bad = self.square_violations_plain(k - 1);
        if bad.is_empty() {
            Ok(())
        } else {
            Err(GradedError::NotAComplex(bad))
        }
    }

    /// Violations of `d∘d = 0` ignoring any declared curvature.
    fn square_violations_plain(&self, k: i64) -> Vec<Violation> {
        let mut plain = self.clone();
        plain.curvature_action = None;
        plain.square_violations(k)
    }
}

/// Every basis vector on which `d²` deviates from the curvature action (or 0).
pub fn check_complex(c: &CochainComplex) -> Result<Vec<Violation>, GradedError> {
    c.check_structure()?;
    let mut out = Vec::new();
    for k in c.square_degrees() {
        out.extend(c.square_violations(k));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tensor_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_floor: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologySlice {
    pub degree: i64,
    pub dimension: usize,
    /// Cocycles in coordinates of the degree-`degree` space.
    pub representatives: Vec<SparseVec>,
}

/// `H^k` with representatives spanning a complement of the image inside
/// the kernel.
pub fn cohomology(c: &CochainComplex, k: i64) -> Result<CohomologySlice, GradedError> {
    c.refuse_if_not_complex(k)?;
    let n = c.dim(k);
    let kernel: Vec<SparseVec> = match c.differential(k) {
        Some(d) => linalg::kernel_basis(d.cols()),
        None => (0..n).map(|i| vec![(i, Q::one())]).collect(),
    };
    let mut ech = Echelon::new();
    if let Some(d) = c.differential(k - 1) {
        for col in d.cols() {
            ech.insert(col.clone());
        }
    }
    let mut reps = Vec::new();
    for z in kernel {
        if ech.insert(z.clone()) {
            reps.push(z);
        }
    }
    Ok(CohomologySlice {
        degree: k,
        dimension: reps.len(),
        representatives: reps,
    })
}

/// Per-degree cohomology dimensions, computed concurrently.
pub fn cohomology_dims(c: &CochainComplex, degrees: &[i64]) -> Result<Vec<usize>, GradedError> {
    par::map_collect(degrees, |&k| c.cohomology_dim(k))
        .into_iter()
        .collect()
}

/// Family of maps from column `from` to column `to`, keyed by the vertical
/// degree of the source; vertical degree rises by `1 - (to - from)`.
#[derive(Debug, Clone)]
pub struct ConnectingMap {
    pub from: i64,
    pub to: i64,
    pub maps: BTreeMap<i64, LinearMap>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    /// The supplied pieces already anticommute; they are summed as given.
    Anticommuting,
    /// Vertical differentials of column `h` are multiplied by `(-1)^h`.
    Checkerboard,
}

/// Totalization of a (generalized) double complex inside a finite window of
/// total degrees. Columns are indexed by `h <= 0`. Inside a finite window
/// the sum and product totalizations coincide.
pub fn totalize(
    columns: &[(i64, CochainComplex)],
    connecting: &[ConnectingMap],
    window: RangeInclusive<i64>,
    signs: SignConvention,
) -> Result<CochainComplex, GradedError> {
    let grading = columns
        .first()
        .map(|(_, c)| c.grading)
        .unwrap_or(Grading::Integer);
    if let Some((h, _)) = columns.iter().find(|(h, _)| *h > 0) {
        return Err(GradedError::UnboundedColumns(*h));
    }
    let col_of: BTreeMap<i64, &CochainComplex> = columns.iter().map(|(h, c)| (*h, c)).collect();
    // total degree -> list of (h, v, offset)
    let mut pieces: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
    let mut spaces = BTreeMap::new();
    for k in window.clone() {
        let mut labels = Vec::new();
        let mut list = Vec::new();
        for (&h, col) in &col_of {
            let v = k - h;
            if let Some(s) = col.spaces.get(&v) {
                list.push((h, v, labels.len()));
                for b in s.basis() {
                    labels.push((format!("[{h},{v}]{}", b.label), k));
                }
            }
        }
        pieces.insert(k, list);
        spaces.insert(k, Arc::new(GradedSpace::new(grading, labels)?));
    }
    let mut diffs = BTreeMap::new();
    for k in window.clone() {
        if !window.contains(&(k + 1)) {
            break;
        }
        let src = spaces[&k].clone();
        let tgt = spaces[&(k + 1)].clone();
        let mut cols = vec![SparseVec::new(); src.dim()];
        let offset_in = |k: i64, h: i64, v: i64| -> Option<usize> {
            pieces
                .get(&k)
                .and_then(|l| l.iter().find(|p| p.0 == h && p.1 == v))
                .map(|p| p.2)
        };
        for &(h, v, off) in &pieces[&k] {
            let col = col_of[&h];
            if let Some(d) = col.differentials.get(&v) {
                let s = match signs {
                    SignConvention::Anticommuting => Q::one(),
                    SignConvention::Checkerboard => crate::rational::sign(h),
                };
                if let Some(toff) = offset_in(k + 1, h, v + 1) {
                    for j in 0..d.source().dim() {
                        let add: SparseVec = d.col(j).iter().map(|(i, c)| (i + toff, c * &s)).collect();
                        cols[off + j] = axpy(&cols[off + j], &Q::one(), &add);
                    }
                }
            }
            for cm in connecting.iter().filter(|cm| cm.from == h) {
                let Some(m) = cm.maps.get(&v) else { continue };
                let tv = v + 1 - (cm.to - cm.from);
                if let Some(toff) = offset_in(k + 1, cm.to, tv) {
                    for j in 0..m.source().dim() {
                        let add: SparseVec = m.col(j).iter().map(|(i, c)| (i + toff, c.clone())).collect();
                        cols[off + j] = axpy(&cols[off + j], &Q::one(), &add);
                    }
                }
            }
        }
        diffs.insert(k, LinearMap::from_cols_unchecked(src, tgt, 1, cols));
    }
    Ok(CochainComplex {
        grading,
        spaces,
        differentials: diffs,
        curvature_action: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn line(label: &str, deg: i64) -> Arc<GradedSpace> {
        Arc::new(GradedSpace::new(Grading::Integer, vec![(label.into(), deg)]).unwrap())
    }

    fn two_term(c: i64) -> CochainComplex {
        let a = line("a", 0);
        let b = line("b", 1);
        let d = LinearMap::new(a.clone(), b.clone(), 1, vec![if c == 0 { vec![] } else { vec![(0, q(c))] }]).unwrap();
        let mut cx = CochainComplex::new(Grading::Integer);
        cx.spaces.insert(0, a);
        cx.spaces.insert(1, b);
        cx.differentials.insert(0, d);
        cx
    }

    #[test]
    fn zero_two_term_complex() {
        let cx = two_term(0);
        assert!(check_complex(&cx).unwrap().is_empty());
        assert_eq!(cohomology(&cx, 0).unwrap().dimension, 1);
        assert_eq!(cohomology(&cx, 1).unwrap().dimension, 1);
    }

    #[test]
    fn multiplication_by_two_is_invertible() {
        let cx = two_term(2);
        assert_eq!(cohomology(&cx, 1).unwrap().dimension, 0);
        assert_eq!(cohomology(&cx, 0).unwrap().dimension, 0);
    }

    #[test]
    fn identity_squared_reports_every_basis_vector() {
        let s = Arc::new(
            GradedSpace::new(Grading::ModTwo, vec![("x".into(), 0), ("y".into(), 1)]).unwrap(),
        );
        let e0 = Arc::new(GradedSpace::new(Grading::ModTwo, vec![("x".into(), 0)]).unwrap());
        let e1 = Arc::new(GradedSpace::new(Grading::ModTwo, vec![("y".into(), 1)]).unwrap());
        let _ = s;
        let mut cx = CochainComplex::new(Grading::ModTwo);
        cx.spaces.insert(0, e0.clone());
        cx.spaces.insert(1, e1.clone());
        cx.differentials
            .insert(0, LinearMap::new(e0.clone(), e1.clone(), 1, vec![vec![(0, q(1))]]).unwrap());
        cx.differentials
            .insert(1, LinearMap::new(e1, e0, 1, vec![vec![(0, q(1))]]).unwrap());
        let v = check_complex(&cx).unwrap();
        assert_eq!(v.len(), 2);
        assert!(cohomology(&cx, 0).is_err());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let a = line("a", 0);
        let b = line("b", 0);
        assert!(matches!(
            LinearMap::new(a, b, 1, vec![vec![(0, q(1))]]),
            Err(GradedError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn mismatched_consecutive_spaces_is_structural() {
        let mut cx = two_term(1);
        let c = line("c", 2);
        let other = line("b'", 1);
        cx.differentials
            .insert(1, LinearMap::new(other, c.clone(), 1, vec![vec![]]).unwrap());
        cx.spaces.insert(2, c);
        assert!(matches!(check_complex(&cx), Err(GradedError::Structural(_))));
    }

    #[test]
    fn empty_complex_is_zero() {
        let cx = CochainComplex::new(Grading::Integer);
        assert!(check_complex(&cx).unwrap().is_empty());
        assert_eq!(cohomology(&cx, 3).unwrap().dimension, 0);
    }

    #[test]
    fn single_column_totalizes_to_itself() {
        let cx = two_term(3);
        let tot = totalize(&[(0, cx.clone())], &[], 0..=1, SignConvention::Checkerboard).unwrap();
        assert_eq!(tot.dim(0), 1);
        assert_eq!(tot.dim(1), 1);
        assert_eq!(tot.differentials[&0].to_dense(), cx.differentials[&0].to_dense());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let cx = two_term(1);
        let mut maps = BTreeMap::new();
        for (k, s) in &cx.spaces {
            maps.insert(*k, LinearMap::identity(s.clone()));
        }
        let cm = ConnectingMap { from: -1, to: 0, maps };
        let tot = totalize(
            &[(-1, cx.clone()), (0, cx)],
            &[cm],
            -1..=2,
            SignConvention::Checkerboard,
        )
        .unwrap();
        assert!(check_complex(&tot).unwrap().is_empty());
        for k in 0..=1 {
            assert_eq!(cohomology(&tot, k).unwrap().dimension, 0, "degree {k}");
        }
    }

    #[test]
    fn positive_column_index_refused() {
        let cx = two_term(1);
        assert!(matches!(
            totalize(&[(1, cx)], &[], 0..=1, SignConvention::Checkerboard),
            Err(GradedError::UnboundedColumns(1))
        ));
    }

    fn space_of(prefix: &str, deg: i64, n: usize) -> Arc<GradedSpace> {
        Arc::new(GradedSpace::concentrated(Grading::Integer, deg, (0..n).map(|i| format!("{prefix}{i}")).collect()).unwrap())
    }

    fn sparse_cols(m: &[Vec<i64>], ncols: usize) -> Vec<SparseVec> {
        (0..ncols)
            .map(|j| m.iter().enumerate().filter(|(_, r)| r[j] != 0).map(|(i, r)| (i, q(r[j]))).collect())
            .collect()
    }

    /// `V0 → V1 → V2` with `V1 = im-side ⊕ source-side`, then scrambled by
    /// elementary basis changes of `V1`.
    fn split_complex(a: &[i64], b: &[i64], ops: &[(usize, usize, i64)]) -> (CochainComplex, usize, usize) {
        let (n0, k, l, n2) = (2, 3, 2, 3);
        let n1 = k + l;
        let mut d0: Vec<Vec<i64>> = (0..n1).map(|i| if i < k { a[i * n0..(i + 1) * n0].to_vec() } else { vec![0; n0] }).collect();
        let mut d1: Vec<Vec<i64>> = (0..n2).map(|i| (0..n1).map(|j| if j < k { 0 } else { b[i * l + j - k] }).collect()).collect();
        for &(i, j, c) in ops {
            let (i, j) = (i % n1, j % n1);
            if i == j {
                continue;
            }
            let rj = d0[j].clone();
            for (x, y) in d0[i].iter_mut().zip(rj) {
                *x += c * y;
            }
            for r in d1.iter_mut() {
                r[j] -= c * r[i];
            }
        }
        let (v0, v1, v2) = (space_of("a", 0, n0), space_of("b", 1, n1), space_of("c", 2, n2));
        let m0 = LinearMap::new(v0.clone(), v1.clone(), 1, sparse_cols(&d0, n0)).unwrap();
        let m1 = LinearMap::new(v1.clone(), v2.clone(), 1, sparse_cols(&d1, n1)).unwrap();
        let ra = LinearMap::new(space_of("a", 0, n0), space_of("p", 1, k), 1, sparse_cols(&(0..k).map(|i| a[i * n0..(i + 1) * n0].to_vec()).collect::<Vec<_>>(), n0)).unwrap().rank();
        let rb = LinearMap::new(space_of("s", 1, l), space_of("c", 2, n2), 1, sparse_cols(&(0..n2).map(|i| b[i * l..(i + 1) * l].to_vec()).collect::<Vec<_>>(), l)).unwrap().rank();
        let mut cx = CochainComplex::new(Grading::Integer);
        cx.spaces.insert(0, v0);
        cx.spaces.insert(1, v1);
        cx.spaces.insert(2, v2);
        cx.differentials.insert(0, m0);
        cx.differentials.insert(1, m1);
        (cx, ra, rb)
    }

    proptest::proptest! {
        #[test]
        fn cohomology_is_invariant_under_basis_change(
            a in proptest::collection::vec(-2i64..3, 6),
            b in proptest::collection::vec(-2i64..3, 6),
            ops in proptest::collection::vec((0usize..5, 0usize..5, -2i64..3), 0..6),
        ) {
            let (cx, ra, rb) = split_complex(&a, &b, &ops);
            proptest::prop_assert!(check_complex(&cx).unwrap().is_empty());
            let dims: Vec<usize> = (0..=2).map(|k| cx.cohomology_dim(k).unwrap()).collect();
            proptest::prop_assert_eq!(dims.clone(), vec![2 - ra, 5 - ra - rb, 3 - rb]);
            let euler = dims[0] as i64 - dims[1] as i64 + dims[2] as i64;
            proptest::prop_assert_eq!(euler, 2 - 5 + 3);
            for k in 0..=2 {
                let c = cohomology(&cx, k).unwrap();
                proptest::prop_assert_eq!(c.dimension, dims[k as usize]);
                proptest::prop_assert_eq!(c.representatives.len(), dims[k as usize]);
            }
        }
    }
}
