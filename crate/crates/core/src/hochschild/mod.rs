//! Hochschild cochain complexes and their cohomology.

pub mod gerstenhaber;
pub mod model;
pub mod window;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdg::{AlgebraPresentation, FamilyKind};
use crate::graded::{self, CochainComplex, GradedError, GradedSpace, Grading, LinearMap, TruncationParams};
use crate::par;
use crate::rational::{format_q, SparseVec};

pub use model::{delta_elementary, normalize_terms, CochainModel, CochainTerm, FiniteModel, PolyModel};
pub use window::{WindowComplex, WindowOptions};

/// Cochain spaces larger than this are refused instead of materialised.
pub const MAX_COCHAINS: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HhError {
    #[error("tensor length {given} is too small for the requested degrees; need at least {minimal}")]
    TruncationTooSmall { given: usize, minimal: usize },
    #[error("the finite pipeline needs an uncurved algebra; use a polynomial family for curved input")]
    CurvedFinite,
    #[error("the polynomial pipeline needs {0}")]
    NotPolynomial(String),
    #[error("{0} cochains exceed the limit of {MAX_COCHAINS}")]
    TooLarge(usize),
    #[error("empty truncation schedule")]
    EmptySchedule,
    #[error("Koszul pipeline: {0}")]
    Koszul(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Which cochain model computes the cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CochainKind {
    /// `Ā^{⊗≤N} → A` for a finite algebra, as a quotient complex.
    Finite,
    /// `P̄^{⊗n} → P/(weight > D)` in a weight window, for polynomial families.
    Window,
    /// Polyvector fields from the twisted Koszul resolution.
    Koszul,
}

/// The finite truncated complex together with its cochain bookkeeping.
pub struct FiniteComplex {
    pub model: FiniteModel,
    pub max_arity: usize,
    pub complex: CochainComplex,
    pub cochains: BTreeMap<i64, Vec<(Vec<usize>, usize)>>,
}

fn all_tensors(count: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * count);
        for t in &out {
            for v in 0..count {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Cochains of arity at most `max_arity` in the degrees `lo-1 ..= hi+1`,
/// with the arity `max_arity + 1` part of the differential dropped.
pub fn finite_complex(a: &AlgebraPresentation, max_arity: usize, lo: i64, hi: i64) -> Result<FiniteComplex, HhError> {
    let model = FiniteModel::new(a);
    let g = model.grading();
    let wanted: Vec<i64> = match g {
        Grading::Integer => (lo - 1..=hi + 1).collect(),
        Grading::ModTwo => vec![0, 1],
    };
    let mut total = 0usize;
    for n in 0..=max_arity {
        total = total.saturating_add(model.input_count().saturating_pow(n as u32).saturating_mul(model.output_count()));
    }
    if total > MAX_COCHAINS {
        return Err(HhError::TooLarge(total));
    }
    let mut cochains: BTreeMap<i64, Vec<(Vec<usize>, usize)>> = wanted.iter().map(|k| (*k, Vec::new())).collect();
    for n in 0..=max_arity {
        for u in all_tensors(model.input_count(), n) {
            for b in 0..model.output_count() {
                let k = g.reduce(n as i64 + model.internal_degree(&u, b));
                if let Some(list) = cochains.get_mut(&k) {
                    list.push((u.clone(), b));
                }
            }
        }
    }
    let mut spaces: BTreeMap<i64, Arc<GradedSpace>> = BTreeMap::new();
    let mut index: HashMap<i64, HashMap<(Vec<usize>, usize), usize>> = HashMap::new();
    for (k, list) in &cochains {
        let basis = list.iter().map(|(u, b)| (model.cochain_label(u, *b), *k)).collect();
        spaces.insert(*k, Arc::new(GradedSpace::new(g, basis)?));
        index.insert(*k, list.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect());
    }
    let mut complex = CochainComplex::new(g);
    for (k, list) in &cochains {
        let next = g.reduce(k + 1);
        let Some(target_index) = index.get(&next) else { continue };
        let cols = par::map_collect(list.as_slice(), |(u, b)| {
            let terms = delta_elementary(&model, u, *b)
                .into_iter()
                .filter(|(w, _, _)| w.len() <= max_arity)
                .collect();
            let mut col: SparseVec = normalize_terms(terms)
                .into_iter()
                .map(|(w, m, c)| (target_index[&(w, m)], c))
                .collect();
            col.sort_by_key(|e| e.0);
            col
        });
        complex
            .differentials
            .insert(*k, LinearMap::from_cols_unchecked(spaces[k].clone(), spaces[&next].clone(), 1, cols));
    }
    complex.spaces = spaces;
    Ok(FiniteComplex {
        model,
        max_arity,
        complex,
        cochains,
    })
}

/// Elementary cochains of arity `<= max_arity` (in any degree) on which
/// `δ∘δ` fails to vanish, computed without truncation.
pub fn square_violations<M: CochainModel>(model: &M, max_arity: usize) -> Vec<String> {
    let mut cells = Vec::new();
    for n in 0..=max_arity {
        for u in all_tensors(model.input_count(), n) {
            for b in 0..model.output_count() {
                cells.push((u.clone(), b));
            }
        }
    }
    let found = par::map_collect(cells.as_slice(), |(u, b)| {
        let once = normalize_terms(delta_elementary(model, u, *b));
        let mut twice = Vec::new();
        for (w, m, c) in once {
            for (w2, m2, c2) in delta_elementary(model, &w, m) {
                twice.push((w2, m2, &c * c2));
            }
        }
        let twice = normalize_terms(twice);
        (!twice.is_empty()).then(|| model.cochain_label(u, *b))
    });
    found.into_iter().flatten().collect()
}

/// Dimension of one cohomology group at one truncation level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDims {
    pub truncation: TruncationParams,
    pub dimensions: Vec<usize>,
    /// Before discarding classes supported in the top weights.
    pub raw_dimensions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: i64,
    pub dimension: usize,
    pub stabilized: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub cochains: CochainKind,
    pub grading: Grading,
    pub degrees: Vec<i64>,
    pub levels: Vec<LevelDims>,
    pub entries: Vec<DegreeEntry>,
    /// Output weights above this are socle artifacts, when curved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact_threshold: Option<u32>,
}

impl CohomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.dimension).collect()
    }

    pub fn all_stabilized(&self) -> bool {
        self.entries.iter().all(|e| e.stabilized)
    }
}

#[derive(Debug, Clone, Default)]
pub struct HhOptions {
    pub cochains: Option<CochainKind>,
    pub representatives: bool,
}

/// The cochain model used when none is requested: the weight window for
/// truncated polynomial and matrix factorization families, finite otherwise.
pub fn default_kind(a: &AlgebraPresentation) -> CochainKind {
    match a.family().map(|f| f.kind) {
        Some(FamilyKind::TruncatedPolynomial) | Some(FamilyKind::MatrixFactorization) => CochainKind::Window,
        _ => CochainKind::Finite,
    }
}

/// Smallest tensor length that computes the requested degrees exactly.
pub fn minimal_tensor_length(a: &AlgebraPresentation, kind: CochainKind, degrees: &[i64], order: u32) -> usize {
    match kind {
        CochainKind::Finite => degrees.iter().map(|k| k + 1).max().unwrap_or(1).max(1) as usize,
        CochainKind::Window => {
            let extra: u32 = a.family().map(|f| f.weights().iter().sum()).unwrap_or(0);
            let by_degree = degrees.iter().map(|k| k + 1).max().unwrap_or(1).max(1) as usize;
            by_degree.max((order + extra) as usize)
        }
        CochainKind::Koszul => 0,
    }
}

/// `HH*(A)` in the requested degrees at every level of the schedule. A
/// degree is stabilized when the last two levels agree.
pub fn compute_hh(
    a: &AlgebraPresentation,
    degrees: &[i64],
    schedule: &[TruncationParams],
    opts: &HhOptions,
) -> Result<CohomologyReport, HhError> {
    if schedule.is_empty() {
        return Err(HhError::EmptySchedule);
    }
    let kind = opts.cochains.unwrap_or_else(|| default_kind(a));
    let g = a.grading();
    let mut levels = Vec::new();
    let mut reps = Vec::new();
    let mut threshold = None;
    for (i, t) in schedule.iter().enumerate() {
        let last = i + 1 == schedule.len();
        let with_reps = last && opts.representatives;
        match kind {
            CochainKind::Koszul => {
                let (level, r, thr) = crate::koszul::koszul_level(a, t, degrees, with_reps)
                    .map_err(|e| HhError::Koszul(e.to_string()))?;
                threshold = thr;
                if with_reps {
                    reps = r;
                }
                levels.push(level);
            }
            CochainKind::Finite => {
                if a.is_curved() {
                    return Err(HhError::CurvedFinite);
                }
                let n = t.tensor_length.unwrap_or_else(|| minimal_tensor_length(a, kind, degrees, 0));
                let minimal = minimal_tensor_length(a, kind, degrees, 0);
                if n < minimal {
                    return Err(HhError::TruncationTooSmall { given: n, minimal });
                }
                let lo = degrees.iter().copied().min().unwrap_or(0);
                let hi = degrees.iter().copied().max().unwrap_or(0);
                let fc = finite_complex(a, n, lo, hi)?;
                let dims = graded::cohomology_dims(&fc.complex, degrees)?;
                if with_reps {
                    for &k in degrees {
                        let slice = graded::cohomology(&fc.complex, k)?;
                        let space = fc.complex.space(k).cloned();
                        reps.push(
                            slice
                                .representatives
                                .iter()
                                .map(|v| space.as_ref().map(|s| render_pairs(&s.render(v))).unwrap_or_default())
                                .collect::<Vec<_>>(),
                        );
                    }
                }
                levels.push(LevelDims {
                    truncation: TruncationParams {
                        tensor_length: Some(n),
                        ..t.clone()
                    },
                    dimensions: dims.clone(),
                    raw_dimensions: dims,
                });
            }
            CochainKind::Window => {
                let fam = a
                    .family()
                    .ok_or_else(|| HhError::NotPolynomial("family metadata with variables".into()))?;
                let order = t.order.or(fam.order).ok_or_else(|| HhError::NotPolynomial("a truncation order".into()))?;
                let minimal = minimal_tensor_length(a, kind, degrees, order);
                let n = t.tensor_length.unwrap_or(minimal);
                if n < minimal {
                    return Err(HhError::TruncationTooSmall { given: n, minimal });
                }
                let floor = t.weight_floor.unwrap_or(order as i64 - n as i64);
                let model = window::model_for(a, order, floor)?;
                let wc = WindowComplex::new(model, &WindowOptions::default())?;
                threshold = wc.artifact_threshold();
                let res = wc.cohomology(with_reps);
                let pick = |m: &BTreeMap<i64, usize>| -> Vec<usize> {
                    degrees.iter().map(|k| m.get(&g.reduce(*k)).copied().unwrap_or(0)).collect()
                };
                if with_reps {
                    for k in degrees {
                        reps.push(res.representatives.get(&g.reduce(*k)).cloned().unwrap_or_default());
                    }
                }
                levels.push(LevelDims {
                    truncation: TruncationParams {
                        tensor_length: Some(n),
                        order: Some(order),
                        weight_floor: Some(floor),
                    },
                    dimensions: pick(&res.dimensions),
                    raw_dimensions: pick(&res.raw_dimensions),
                });
            }
        }
    }
    let lastl = levels.last().expect("non-empty schedule");
    let prev = if levels.len() >= 2 { Some(&levels[levels.len() - 2]) } else { None };
    let entries = degrees
        .iter()
        .enumerate()
        .map(|(i, &k)| DegreeEntry {
            degree: k,
            dimension: lastl.dimensions[i],
            stabilized: prev.map(|p| p.dimensions[i] == lastl.dimensions[i]).unwrap_or(false),
            representatives: reps.get(i).cloned().unwrap_or_default(),
        })
        .collect();
    Ok(CohomologyReport {
        cochains: kind,
        grading: g,
        degrees: degrees.to_vec(),
        levels,
        entries,
        artifact_threshold: threshold,
    })
}

/// `"c*label + ..."` from `(label, coefficient)` pairs.
pub fn render_pairs(pairs: &[(String, String)]) -> String {
    if pairs.is_empty() {
        return "0".into();
    }
    pairs
        .iter()
        .map(|(l, c)| if c == "1" { l.clone() } else { format!("{c}*{l}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Renders a combination of elementary cochains.
pub fn render_terms<M: CochainModel + ?Sized>(model: &M, terms: &[CochainTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(w, b, c)| {
            if c.is_one() {
                model.cochain_label(w, *b)
            } else {
                format!("{}*{}", format_q(c), model.cochain_label(w, *b))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{build_dual_numbers, build_exterior_with_degree, build_ground_field, build_truncated_polynomial, random_cdg, standard_variables};

    fn sched(ns: &[usize]) -> Vec<TruncationParams> {
        ns.iter()
            .map(|n| TruncationParams {
                tensor_length: Some(*n),
                ..Default::default()
            })
            .collect()
    }

    #[test]
    fn dual_numbers_dims() {
        let a = build_dual_numbers();
        let r = compute_hh(&a, &[0, 1, 2, 3, 4], &sched(&[5, 6]), &HhOptions::default()).unwrap();
        assert_eq!(r.dims(), vec![2, 1, 1, 1, 1]);
        assert!(r.all_stabilized());
    }

    #[test]
    fn ground_field_dims() {
        let a = build_ground_field();
        let r = compute_hh(&a, &[0, 1, 2, 3], &sched(&[4, 5]), &HhOptions::default()).unwrap();
        assert_eq!(r.dims(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn odd_line_of_negative_degree() {
        let a = build_exterior_with_degree(1, -1, Grading::Integer);
        let r = compute_hh(&a, &[0, 1, 2, 3], &sched(&[4, 5]), &HhOptions::default()).unwrap();
        assert_eq!(r.dims(), vec![1, 1, 1, 1]);
        assert!(r.all_stabilized());
    }

    #[test]
    fn too_short_is_refused() {
        let a = build_dual_numbers();
        let err = compute_hh(&a, &[0, 1, 2, 3], &sched(&[2]), &HhOptions::default()).unwrap_err();
        assert_eq!(err, HhError::TruncationTooSmall { given: 2, minimal: 4 });
    }

    #[test]
    fn finite_complexes_square_to_zero() {
        for seed in 0..12u64 {
            let a = random_cdg(seed);
            let m = FiniteModel::new(&a);
            assert!(square_violations(&m, 2).is_empty(), "seed {seed}");
        }
        let a = build_truncated_polynomial(&standard_variables(1), 5).unwrap();
        assert!(square_violations(&FiniteModel::new(&a), 3).is_empty());
    }

    #[test]
    fn finite_complex_passes_check() {
        let a = build_dual_numbers();
        let fc = finite_complex(&a, 4, 0, 3).unwrap();
        assert!(graded::check_complex(&fc.complex).unwrap().is_empty());
    }

    #[test]
    fn representatives_of_dual_numbers() {
        let a = build_dual_numbers();
        let opts = HhOptions {
            representatives: true,
            ..Default::default()
        };
        let r = compute_hh(&a, &[0, 1], &sched(&[3]), &opts).unwrap();
        assert_eq!(r.entries[0].representatives.len(), 2);
        assert_eq!(r.entries[1].representatives, vec!["[eps]->eps".to_string()]);
    }
}
