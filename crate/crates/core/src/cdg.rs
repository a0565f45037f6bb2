//! Curved dg-algebras on finite monomial bases: presentations, built-in
//! families, opposite and enveloping algebras, right modules and axiom checks.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{GradedError, GradedSpace, Grading, LinearMap};
use crate::par;
use crate::poly::{monomial_label, monomials_up_to, Exponents, Poly};
use crate::rational::{axpy, collect_sparse, format_q, q, scale, sign, SparseVec, Q};

/// Exhaustive associativity checks are used up to this total dimension.
pub const EXHAUSTIVE_LIMIT: usize = 200;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdgError {
    #[error("truncation order must be at least 1, got {0}")]
    NonPositiveOrder(i64),
    #[error("variable weights must be positive")]
    NonPositiveWeight,
    #[error("potential has a non-zero constant term")]
    ConstantTerm,
    #[error("potential has degree {deg} above the truncation order {order}")]
    PotentialTooLarge { deg: u32, order: u32 },
    #[error("structure constants: {0}")]
    Table(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
}

impl Variable {
    pub fn new(name: &str, degree: i64, weight: u32) -> Self {
        Self {
            name: name.to_string(),
            degree,
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    TruncatedPolynomial,
    Exterior,
    MatrixFactorization,
    DualNumbers,
    Explicit,
}

/// Where a presentation came from. Polynomial families also record the
/// exponent vector of every basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMetadata {
    pub kind: FamilyKind,
    pub variables: Vec<Variable>,
    pub order: Option<u32>,
    pub potential: Option<Poly>,
    pub exponents: Vec<Exponents>,
}

impl FamilyMetadata {
    pub fn weights(&self) -> Vec<u32> {
        self.variables.iter().map(|v| v.weight).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    space: Arc<GradedSpace>,
    unit: usize,
    mult: Vec<SparseVec>,
    differential: LinearMap,
    curvature: SparseVec,
    family: Option<FamilyMetadata>,
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
            && self.unit == other.unit
            && self.mult == other.mult
            && self.differential.cols() == other.differential.cols()
            && self.curvature == other.curvature
    }
}

impl AlgebraPresentation {
    /// Assembles a presentation. `mult[i * dim + j]` is the product of basis
    /// elements `i` and `j`. Degree homogeneity is enforced here; the cdg
    /// axioms are left to [`validate_cdg`].
    pub fn new(
        space: Arc<GradedSpace>,
        unit: usize,
        mult: Vec<SparseVec>,
        differential: Vec<SparseVec>,
        curvature: SparseVec,
        family: Option<FamilyMetadata>,
    ) -> Result<Self, CdgError> {
        let n = space.dim();
        let g = space.grading();
        if unit >= n {
            return Err(CdgError::Table(format!("unit index {unit} out of range")));
        }
        if mult.len() != n * n {
            return Err(CdgError::Table(format!(
                "{} products given for a basis of size {n}",
                mult.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                for (k, _) in &mult[i * n + j] {
                    if *k >= n {
                        return Err(CdgError::Table(format!("product index {k} out of range")));
                    }
                    if !g.eq(space.degree(*k), space.degree(i) + space.degree(j)) {
                        return Err(CdgError::Table(format!(
                            "{}*{} has a term {} of the wrong degree",
                            space.label(i),
                            space.label(j),
                            space.label(*k)
                        )));
                    }
                }
            }
        }
        for (k, _) in &curvature {
            if *k >= n || !g.eq(space.degree(*k), 2) {
                return Err(CdgError::Table("curvature must be homogeneous of degree 2".into()));
            }
        }
        let differential = LinearMap::new(space.clone(), space.clone(), 1, differential)?;
        Ok(Self {
            space,
            unit,
            mult,
            differential,
            curvature,
            family,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn grading(&self) -> Grading {
        self.space.grading()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn label(&self, i: usize) -> &str {
        self.space.label(i)
    }

    pub fn family(&self) -> Option<&FamilyMetadata> {
        self.family.as_ref()
    }

    pub fn differential(&self) -> &LinearMap {
        &self.differential
    }

    pub fn curvature(&self) -> &SparseVec {
        &self.curvature
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_empty()
    }

    pub fn has_differential(&self) -> bool {
        !self.differential.is_zero()
    }

    /// Product of two basis elements.
    #[inline]
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, ci) in a {
            for (j, cj) in b {
                let c = ci * cj;
                for (k, ck) in self.mul_basis(*i, *j) {
                    terms.push((*k, &c * ck));
                }
            }
        }
        collect_sparse(terms)
    }

    pub fn d(&self, a: &SparseVec) -> SparseVec {
        self.differential.apply(a)
    }

    pub fn d_basis(&self, i: usize) -> &SparseVec {
        self.differential.col(i)
    }

    /// Non-unit basis indices, spanning the chosen complement of the scalars.
    pub fn reduced_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| i != self.unit).collect()
    }

    /// Parity of a vector's degree; vectors are assumed homogeneous.
    pub fn degree_of(&self, v: &SparseVec) -> Option<i64> {
        v.first().map(|(i, _)| self.degree(*i))
    }

    pub fn render(&self, v: &SparseVec) -> Vec<(String, String)> {
        self.space.render(v)
    }

    /// Copy with one structure constant replaced (used by mutation tests).
    pub fn with_product(&self, i: usize, j: usize, value: SparseVec) -> Self {
        let mut out = self.clone();
        let n = self.dim();
        out.mult[i * n + j] = value;
        out
    }

    /// Copy with a different differential on basis element `i` (unchecked).
    pub fn with_differential_col(&self, i: usize, value: SparseVec) -> Self {
        let mut cols = self.differential.cols().to_vec();
        cols[i] = value;
        let mut out = self.clone();
        out.differential = LinearMap::from_cols_unchecked(self.space.clone(), self.space.clone(), 1, cols);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unit,
    Associativity,
    Leibniz,
    Bianchi,
    CurvatureSquare,
    ModuleUnit,
    ModuleAssociativity,
    ModuleLeibniz,
    ModuleCurvature,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdgViolation {
    pub axiom: Axiom,
    pub basis: Vec<String>,
    pub deviation: Vec<(String, String)>,
}

fn violation(space: &GradedSpace, axiom: Axiom, labels: Vec<String>, dev: &SparseVec) -> CdgViolation {
    CdgViolation {
        axiom,
        basis: labels,
        deviation: dev.iter().map(|(i, c)| (space.label(*i).to_string(), format_q(c))).collect(),
    }
}

fn basis_vec(i: usize) -> SparseVec {
    vec![(i, Q::one())]
}

/// Checks unit, associativity, the graded Leibniz rule, `dB = 0` and
/// `d²(x) = Bx − xB`. An empty result means every axiom holds.
pub fn validate_cdg(a: &AlgebraPresentation) -> Vec<CdgViolation> {
    let n = a.dim();
    let sp = a.space().as_ref();
    let mut out = Vec::new();
    let u = a.unit();
    for i in 0..n {
        let e = basis_vec(i);
        for (prod, order) in [(a.mul_basis(u, i), "1*"), (a.mul_basis(i, u), "*1")] {
            let dev = axpy(prod, &-Q::one(), &e);
            if !dev.is_empty() {
                let lbl = if order == "1*" {
                    vec![sp.label(u).to_string(), sp.label(i).to_string()]
                } else {
                    vec![sp.label(i).to_string(), sp.label(u).to_string()]
                };
                out.push(violation(sp, Axiom::Unit, lbl, &dev));
            }
        }
    }

    let triple = |i: usize, j: usize, k: usize| -> Option<CdgViolation> {
        let left = a.mul(a.mul_basis(i, j), &basis_vec(k));
        let right = a.mul(&basis_vec(i), a.mul_basis(j, k));
        let dev = axpy(&left, &-Q::one(), &right);
        (!dev.is_empty()).then(|| {
            violation(
                sp,
                Axiom::Associativity,
                vec![sp.label(i).into(), sp.label(j).into(), sp.label(k).into()],
                &dev,
            )
        })
    };
    let firsts: Vec<usize> = (0..n).collect();
    if n <= EXHAUSTIVE_LIMIT {
        let found = par::map_collect(&firsts, |&i| {
            let mut v = Vec::new();
            for j in 0..n {
                for k in 0..n {
                    v.extend(triple(i, j, k));
                }
            }
            v
        });
        out.extend(found.into_iter().flatten());
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..SAMPLED_TRIPLES {
            let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            out.extend(triple(i, j, k));
        }
    }

    // d(xy) = d(x) y + (-1)^{|x|} x d(y)
    let found = par::map_collect(&firsts, |&i| {
        let mut v = Vec::new();
        let ei = basis_vec(i);
        for j in 0..n {
            let ej = basis_vec(j);
            let lhs = a.d(a.mul_basis(i, j));
            let r1 = a.mul(a.d_basis(i), &ej);
            let r2 = a.mul(&ei, a.d_basis(j));
            let rhs = axpy(&r1, &sign(a.degree(i)), &r2);
            let dev = axpy(&lhs, &-Q::one(), &rhs);
            if !dev.is_empty() {
                v.push(violation(sp, Axiom::Leibniz, vec![sp.label(i).into(), sp.label(j).into()], &dev));
            }
        }
        v
    });
    out.extend(found.into_iter().flatten());

    let b = a.curvature();
    let db = a.d(b);
    if !db.is_empty() {
        out.push(violation(sp, Axiom::Bianchi, vec!["B".into()], &db));
    }
    for i in 0..n {
        let e = basis_vec(i);
        let dd = a.d(a.d_basis(i));
        let comm = axpy(&a.mul(b, &e), &-Q::one(), &a.mul(&e, b));
        let dev = axpy(&dd, &-Q::one(), &comm);
        if !dev.is_empty() {
            out.push(violation(sp, Axiom::CurvatureSquare, vec![sp.label(i).into()], &dev));
        }
    }
    out
}

fn polynomial_presentation(
    variables: &[Variable],
    order: u32,
    grading: Grading,
    kind: FamilyKind,
    potential: Option<Poly>,
) -> Result<AlgebraPresentation, CdgError> {
    let weights: Vec<u32> = variables.iter().map(|v| v.weight).collect();
    let names: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
    let exps = monomials_up_to(&weights, order);
    let index: std::collections::HashMap<&Exponents, usize> =
        exps.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let deg = |e: &Exponents| -> i64 { e.iter().zip(variables).map(|(k, v)| *k as i64 * v.degree).sum() };
    let basis: Vec<(String, i64)> = exps.iter().map(|e| (monomial_label(e, &names), deg(e))).collect();
    let space = Arc::new(GradedSpace::new(grading, basis)?);
    let n = exps.len();
    let mut mult = Vec::with_capacity(n * n);
    for a in &exps {
        for b in &exps {
            let e: Exponents = a.iter().zip(b).map(|(x, y)| x + y).collect();
            mult.push(match index.get(&e) {
                Some(&k) => vec![(k, Q::one())],
                None => Vec::new(),
            });
        }
    }
    let curvature = match &potential {
        Some(f) => collect_sparse(f.terms().filter_map(|(e, c)| index.get(e).map(|&k| (k, c.clone())))),
        None => Vec::new(),
    };
    let family = FamilyMetadata {
        kind,
        variables: variables.to_vec(),
        order: Some(order),
        potential,
        exponents: exps.clone(),
    };
    AlgebraPresentation::new(space, 0, mult, vec![Vec::new(); n], curvature, Some(family))
}

fn check_order(order: i64) -> Result<u32, CdgError> {
    if order < 1 {
        return Err(CdgError::NonPositiveOrder(order));
    }
    Ok(order as u32)
}

/// `K[x_1..x_n]` modulo all monomials of weighted degree above `order`,
/// with `d = 0` and `B = 0`.
pub fn build_truncated_polynomial(variables: &[Variable], order: i64) -> Result<AlgebraPresentation, CdgError> {
    build_truncated_polynomial_graded(variables, order, Grading::Integer)
}

pub fn build_truncated_polynomial_graded(
    variables: &[Variable],
    order: i64,
    grading: Grading,
) -> Result<AlgebraPresentation, CdgError> {
    let order = check_order(order)?;
    if variables.iter().any(|v| v.weight == 0) {
        return Err(CdgError::NonPositiveWeight);
    }
    polynomial_presentation(variables, order, grading, FamilyKind::TruncatedPolynomial, None)
}

/// Standard variables `x` (one), `x, y` (two) or `x1..xn`, degree 0, weight 1.
pub fn standard_variables(n: usize) -> Vec<Variable> {
    match n {
        1 => vec![Variable::new("x", 0, 1)],
        2 => vec![Variable::new("x", 0, 1), Variable::new("y", 0, 1)],
        _ => (1..=n).map(|i| Variable::new(&format!("x{i}"), 0, 1)).collect(),
    }
}

pub fn build_dual_numbers() -> AlgebraPresentation {
    let vars = [Variable::new("eps", 0, 1)];
    polynomial_presentation(&vars, 1, Grading::Integer, FamilyKind::DualNumbers, None)
        .expect("dual numbers are well formed")
}

/// The ground field as a one-dimensional algebra.
pub fn build_ground_field() -> AlgebraPresentation {
    build_exterior(0)
}

/// Exterior algebra on `n` generators of degree 1.
pub fn build_exterior(n: usize) -> AlgebraPresentation {
    build_exterior_with_degree(n, 1, Grading::Integer)
}

/// Exterior algebra `Λ(t1..tn)`; generators anticommute when their degree
/// is odd and commute otherwise, and always square to zero.
pub fn build_exterior_with_degree(n: usize, generator_degree: i64, grading: Grading) -> AlgebraPresentation {
    let mut subsets: Vec<u32> = (0..(1u32 << n)).collect();
    subsets.sort_by_key(|s| (s.count_ones(), s.reverse_bits()));
    let label = |s: u32| -> String {
        if s == 0 {
            "1".into()
        } else {
            (0..n)
                .filter(|i| s & (1 << i) != 0)
                .map(|i| format!("t{}", i + 1))
                .collect::<Vec<_>>()
                .join("*")
        }
    };
    let basis: Vec<(String, i64)> = subsets
        .iter()
        .map(|&s| (label(s), s.count_ones() as i64 * generator_degree))
        .collect();
    let space = Arc::new(GradedSpace::new(grading, basis).expect("distinct subsets"));
    let pos: std::collections::HashMap<u32, usize> = subsets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let odd = generator_degree.rem_euclid(2) == 1;
    let mut mult = Vec::with_capacity(subsets.len() * subsets.len());
    for &s in &subsets {
        for &t in &subsets {
            if s & t != 0 {
                mult.push(Vec::new());
                continue;
            }
            // inversions: pairs (i in s, j in t) with i > j
            let inv: u32 = (0..n).filter(|j| t & (1 << j) != 0).map(|j| (s >> (j + 1)).count_ones()).sum();
            let c = if odd { sign(inv as i64) } else { Q::one() };
            mult.push(vec![(pos[&(s | t)], c)]);
        }
    }
    let variables = (1..=n).map(|i| Variable::new(&format!("t{i}"), generator_degree, 1)).collect();
    let family = FamilyMetadata {
        kind: FamilyKind::Exterior,
        variables,
        order: None,
        potential: None,
        exponents: subsets
            .iter()
            .map(|s| (0..n).map(|i| (s >> i) & 1).collect())
            .collect(),
    };
    let dim = subsets.len();
    AlgebraPresentation::new(space, 0, mult, vec![Vec::new(); dim], Vec::new(), Some(family))
        .expect("exterior algebra is well formed")
}

/// Z/2-graded `(K[x]/m^{D+1}, 0, f)` with all variables even.
pub fn build_mf_algebra(f: &Poly, names: &[String], order: i64) -> Result<AlgebraPresentation, CdgError> {
    let order = check_order(order)?;
    if !f.constant_term().is_zero() {
        return Err(CdgError::ConstantTerm);
    }
    if let Some(deg) = f.total_degree() {
        if deg > order {
            return Err(CdgError::PotentialTooLarge { deg, order });
        }
    }
    let variables: Vec<Variable> = names.iter().map(|n| Variable::new(n, 0, 1)).collect();
    polynomial_presentation(
        &variables,
        order,
        Grading::ModTwo,
        FamilyKind::MatrixFactorization,
        Some(f.clone()),
    )
}

/// Opposite algebra: `a ·op b = (−1)^{|a||b|} b a`, same differential,
/// curvature `−B`.
pub fn opposite(a: &AlgebraPresentation) -> AlgebraPresentation {
    let n = a.dim();
    let mut mult = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            mult.push(scale(a.mul_basis(j, i), &sign(a.degree(i) * a.degree(j))));
        }
    }
    AlgebraPresentation {
        space: a.space.clone(),
        unit: a.unit,
        mult,
        differential: a.differential.clone(),
        curvature: scale(&a.curvature, &-Q::one()),
        family: a.family.clone(),
    }
}

/// Graded tensor product `A ⊗ C` with basis pairs labelled `a|c`.
pub fn tensor(a: &AlgebraPresentation, c: &AlgebraPresentation) -> AlgebraPresentation {
    let (na, nc) = (a.dim(), c.dim());
    let grading = a.grading();
    let idx = |i: usize, j: usize| i * nc + j;
    let basis: Vec<(String, i64)> = (0..na)
        .flat_map(|i| (0..nc).map(move |j| (i, j)))
        .map(|(i, j)| (format!("{}|{}", a.label(i), c.label(j)), a.degree(i) + c.degree(j)))
        .collect();
    let space = Arc::new(GradedSpace::new(grading, basis).expect("pairs of distinct labels are distinct"));
    let n = na * nc;
    let mut mult = vec![Vec::new(); n * n];
    for i1 in 0..na {
        for j1 in 0..nc {
            for i2 in 0..na {
                for j2 in 0..nc {
                    let s = sign(c.degree(j1) * a.degree(i2));
                    let mut terms = Vec::new();
                    for (k, ck) in a.mul_basis(i1, i2) {
                        for (l, cl) in c.mul_basis(j1, j2) {
                            terms.push((idx(*k, *l), &s * ck * cl));
                        }
                    }
                    mult[idx(i1, j1) * n + idx(i2, j2)] = collect_sparse(terms);
                }
            }
        }
    }
    let mut dcols = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nc {
            let mut terms: Vec<(usize, Q)> = a.d_basis(i).iter().map(|(k, ck)| (idx(*k, j), ck.clone())).collect();
            let s = sign(a.degree(i));
            terms.extend(c.d_basis(j).iter().map(|(l, cl)| (idx(i, *l), &s * cl)));
            dcols.push(collect_sparse(terms));
        }
    }
    let mut curv: Vec<(usize, Q)> = a.curvature().iter().map(|(k, ck)| (idx(*k, c.unit()), ck.clone())).collect();
    curv.extend(c.curvature().iter().map(|(l, cl)| (idx(a.unit(), *l), cl.clone())));
    let family = tensor_family(a, c);
    AlgebraPresentation {
        space: space.clone(),
        unit: idx(a.unit(), c.unit()),
        mult,
        differential: LinearMap::from_cols_unchecked(space.clone(), space, 1, dcols),
        curvature: collect_sparse(curv),
        family,
    }
}

fn tensor_family(a: &AlgebraPresentation, c: &AlgebraPresentation) -> Option<FamilyMetadata> {
    let (fa, fc) = (a.family()?, c.family()?);
    let mut variables = fa.variables.clone();
    let renamed: Vec<Variable> = fc
        .variables
        .iter()
        .map(|v| Variable {
            name: second_factor_name(&v.name),
            ..v.clone()
        })
        .collect();
    variables.extend(renamed);
    let mut exponents = Vec::new();
    for ea in &fa.exponents {
        for ec in &fc.exponents {
            exponents.push(ea.iter().chain(ec).copied().collect());
        }
    }
    Some(FamilyMetadata {
        kind: FamilyKind::Explicit,
        variables,
        order: None,
        potential: None,
        exponents,
    })
}

/// `x -> y`, `y -> z`... is ambiguous, so the second factor's variables get
/// a trailing prime except for the familiar one-variable case `x -> y`.
fn second_factor_name(name: &str) -> String {
    if name == "x" {
        "y".into()
    } else {
        format!("{name}'")
    }
}

/// `A^e = A^op ⊗ A`, with curvature `1⊗B − B⊗1`.
pub fn enveloping(a: &AlgebraPresentation) -> AlgebraPresentation {
    tensor(&opposite(a), a)
}

/// Right dg-module over an algebra.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    space: Arc<GradedSpace>,
    /// `action[m * dim(R) + r]` is `e_m · e_r`.
    action: Vec<SparseVec>,
    differential: LinearMap,
}

impl ModulePresentation {
    pub fn new(
        space: Arc<GradedSpace>,
        algebra_dim: usize,
        action: Vec<SparseVec>,
        differential: Vec<SparseVec>,
    ) -> Result<Self, CdgError> {
        if action.len() != space.dim() * algebra_dim {
            return Err(CdgError::Table("action table has the wrong size".into()));
        }
        let differential = LinearMap::new(space.clone(), space.clone(), 1, differential)?;
        Ok(Self {
            space,
            action,
            differential,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn differential(&self) -> &LinearMap {
        &self.differential
    }

    pub fn act_basis(&self, m: usize, r: usize, algebra_dim: usize) -> &SparseVec {
        &self.action[m * algebra_dim + r]
    }

    pub fn act(&self, m: &SparseVec, r: &SparseVec, algebra_dim: usize) -> SparseVec {
        let mut terms = Vec::new();
        for (i, ci) in m {
            for (j, cj) in r {
                let c = ci * cj;
                for (k, ck) in self.act_basis(*i, *j, algebra_dim) {
                    terms.push((*k, &c * ck));
                }
            }
        }
        collect_sparse(terms)
    }
}

/// `A` as a right `A^e`-module: `x · (a⊗b) = (−1)^{|x||a|} a x b`.
pub fn regular_bimodule(a: &AlgebraPresentation) -> (AlgebraPresentation, ModulePresentation) {
    let ae = enveloping(a);
    let n = a.dim();
    let mut action = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for i in 0..n {
            for j in 0..n {
                let s = sign(a.degree(x) * a.degree(i));
                let ax = a.mul_basis(i, x);
                action.push(scale(&a.mul(ax, &basis_vec(j)), &s));
            }
        }
    }
    let m = ModulePresentation {
        space: a.space.clone(),
        action,
        differential: a.differential.clone(),
    };
    (ae, m)
}

/// Unit, associativity, Leibniz and `d_M²(m) = −m·B` for a right module.
pub fn validate_module(m: &ModulePresentation, r: &AlgebraPresentation) -> Vec<CdgViolation> {
    let sp = m.space().as_ref();
    let (nm, nr) = (sp.dim(), r.dim());
    let mut out = Vec::new();
    let mlabel = |i: usize| sp.label(i).to_string();
    let rlabel = |i: usize| r.label(i).to_string();
    for x in 0..nm {
        let dev = axpy(m.act_basis(x, r.unit(), nr), &-Q::one(), &basis_vec(x));
        if !dev.is_empty() {
            out.push(violation(sp, Axiom::ModuleUnit, vec![mlabel(x)], &dev));
        }
    }
    let xs: Vec<usize> = (0..nm).collect();
    let found = par::map_collect(&xs, |&x| {
        let mut v = Vec::new();
        let ex = basis_vec(x);
        for i in 0..nr {
            let xi = m.act_basis(x, i, nr);
            for j in 0..nr {
                let left = m.act(xi, &basis_vec(j), nr);
                let right = m.act(&ex, r.mul_basis(i, j), nr);
                let dev = axpy(&left, &-Q::one(), &right);
                if !dev.is_empty() {
                    v.push(violation(sp, Axiom::ModuleAssociativity, vec![mlabel(x), rlabel(i), rlabel(j)], &dev));
                }
            }
            let lhs = m.differential().apply(xi);
            let r1 = m.act(m.differential().col(x), &basis_vec(i), nr);
            let r2 = m.act(&ex, r.d_basis(i), nr);
            let rhs = axpy(&r1, &sign(sp.degree(x)), &r2);
            let dev = axpy(&lhs, &-Q::one(), &rhs);
            if !dev.is_empty() {
                v.push(violation(sp, Axiom::ModuleLeibniz, vec![mlabel(x), rlabel(i)], &dev));
            }
        }
        let dd = m.differential().apply(m.differential().col(x));
        let xb = m.act(&ex, r.curvature(), nr);
        let dev = axpy(&dd, &Q::one(), &xb);
        if !dev.is_empty() {
            v.push(violation(sp, Axiom::ModuleCurvature, vec![mlabel(x)], &dev));
        }
        v
    });
    out.extend(found.into_iter().flatten());
    out
}

/// Small random cdg-algebras for property suites, reproducible from `seed`.
///
/// Three shapes are drawn: upper triangular graded matrix algebras with an
/// inner differential `[a, −]` and curvature `a²`, the same algebras with a
/// central curvature, and Z/2-graded truncated polynomials with a random
/// potential. All have dimension at most 6.
pub fn random_cdg(seed: u64) -> AlgebraPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match rng.gen_range(0..3) {
        0 | 1 => random_triangular(&mut rng),
        _ => random_curved_polynomial(&mut rng),
    }
}

fn small_coeff(rng: &mut ChaCha8Rng) -> Q {
    let num = rng.gen_range(-3i64..=3);
    let den = if rng.gen_bool(0.25) { 2 } else { 1 };
    Q::new(num.into(), den.into())
}

fn random_triangular(rng: &mut ChaCha8Rng) -> AlgebraPresentation {
    let k: usize = rng.gen_range(2..=3);
    let grading = if rng.gen_bool(0.3) { Grading::ModTwo } else { Grading::Integer };
    let g: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
    // matrix units e_ij, i <= j; the basis replaces e_00 by the identity
    let units: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| units.iter().position(|u| *u == (i, j)).expect("upper unit");
    let n = units.len();
    let basis: Vec<(String, i64)> = units
        .iter()
        .map(|&(i, j)| {
            let l = if (i, j) == (0, 0) { "1".to_string() } else { format!("e{i}{j}") };
            (l, g[j] - g[i])
        })
        .collect();
    let space = Arc::new(GradedSpace::new(grading, basis).expect("distinct matrix units"));
    // basis element b -> matrix-unit coordinates
    let to_units = |b: usize| -> SparseVec {
        if b == 0 {
            (0..k).map(|i| (pos(i, i), Q::one())).collect()
        } else {
            vec![(b, Q::one())]
        }
    };
    // matrix-unit coordinates -> basis coordinates (e_00 = 1 - sum e_ii)
    let from_units = |v: &SparseVec| -> SparseVec {
        let mut terms = Vec::new();
        for (u, c) in v {
            if *u == 0 {
                terms.push((0, c.clone()));
                for i in 1..k {
                    terms.push((pos(i, i), -c.clone()));
                }
            } else {
                terms.push((*u, c.clone()));
            }
        }
        collect_sparse(terms)
    };
    let unit_mul = |a: &SparseVec, b: &SparseVec| -> SparseVec {
        let mut terms = Vec::new();
        for (x, cx) in a {
            for (y, cy) in b {
                let (i, j) = units[*x];
                let (j2, l) = units[*y];
                if j == j2 {
                    terms.push((pos(i, l), cx * cy));
                }
            }
        }
        collect_sparse(terms)
    };
    let mut mult = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            mult.push(from_units(&unit_mul(&to_units(a), &to_units(b))));
        }
    }
    let shell = AlgebraPresentation::new(space.clone(), 0, mult.clone(), vec![Vec::new(); n], Vec::new(), None)
        .expect("triangular algebra is well formed");
    let odd: Vec<usize> = (0..n).filter(|&b| grading.eq(space.degree(b), 1)).collect();
    let a: SparseVec = collect_sparse(odd.iter().map(|&b| (b, small_coeff(rng))));
    let (dcols, curvature) = if !a.is_empty() && rng.gen_bool(0.7) {
        // d = [a, −] (graded commutator), B = a²
        let dcols = (0..n)
            .map(|b| {
                let e = basis_vec(b);
                let ab = shell.mul(&a, &e);
                let ba = shell.mul(&e, &a);
                axpy(&ab, &-sign(space.degree(b)), &ba)
            })
            .collect();
        (dcols, shell.mul(&a, &a))
    } else {
        let central = if grading == Grading::ModTwo {
            vec![(0, small_coeff(rng))]
        } else {
            Vec::new()
        };
        (vec![Vec::new(); n], collect_sparse(central))
    };
    AlgebraPresentation::new(space, 0, mult, dcols, curvature, None).expect("random triangular cdg")
}

fn random_curved_polynomial(rng: &mut ChaCha8Rng) -> AlgebraPresentation {
    let vars = if rng.gen_bool(0.5) { standard_variables(1) } else { standard_variables(2) };
    let order = if vars.len() == 1 { rng.gen_range(2..=5) } else { 1 };
    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let weights: Vec<u32> = vars.iter().map(|v| v.weight).collect();
    let mut f = Poly::zero(vars.len());
    for e in monomials_up_to(&weights, order as u32).into_iter().skip(1) {
        if rng.gen_bool(0.5) {
            f.add_term(e, small_coeff(rng));
        }
    }
    build_mf_algebra(&f, &names, order).expect("random potential has no constant term")
}

/// Deterministic description of a product for diagnostics.
pub fn describe(a: &AlgebraPresentation, v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(i, c)| format!("{}*{}", format_q(c), a.label(*i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// `λ·1` as a sparse vector.
pub fn scalar(a: &AlgebraPresentation, c: i64) -> SparseVec {
    if c == 0 {
        Vec::new()
    } else {
        vec![(a.unit(), q(c))]
    }
}
