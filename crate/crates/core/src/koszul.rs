//! Koszul bimodule resolutions of polynomial algebras, the curvature twist
//! for matrix factorizations, the polyvector complex and the HKR map.
//!
//! The resolution of `P = K[x₁..x_n]` over `P^e = K[x, y]` has terms
//! `Λᵏ ⊗ P^e` with `d(α ⊗ g) = Σ ι_{eⁱ}α ⊗ (xᵢ − yᵢ)g`. Columns are stored
//! modulo total weight above `D`, where `eⁱ` has the weight of `xᵢ`; every
//! map here is weight non-decreasing, so the quotient is a complex and the
//! weight `≤ D` part is a direct sum of graded pieces of an exact complex.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bar::{validate_generalized_resolution, ResolutionData, ResolutionViolation};
use crate::cdg::{AlgebraPresentation, Variable};
use crate::graded::{GradedError, GradedSpace, Grading, LinearMap};
use crate::linalg;
use crate::poly::{monomial_label, monomials_up_to, Exponents, Poly};
use crate::rational::{collect_sparse, sign, SparseVec, Q};

mod hkr;
mod polyvector;

pub use hkr::*;
pub use polyvector::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoszulError {
    #[error("the Koszul pipeline needs {0}")]
    NotPolynomial(String),
    #[error("potential has a non-zero constant term")]
    ConstantTerm,
    #[error("cofactors do not telescope to f(y) − f(x): deviation {0}")]
    Cofactors(String),
    #[error("twisted resolution fails its identities ({} violations)", .0.len())]
    Identity(Vec<ResolutionViolation>),
    #[error("the HKR comparison is stated for uncurved algebras")]
    Curved,
    #[error("empty truncation schedule")]
    EmptySchedule,
    #[error("{0}")]
    Hochschild(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Exterior word as a bit mask over the variables.
pub type Word = u32;

fn word_weight(word: Word, weights: &[u32]) -> u32 {
    (0..weights.len()).filter(|i| word & (1 << i) != 0).map(|i| weights[i]).sum()
}

/// Sign of moving `eⁱ` to its place in `word`: `(−1)^{#{j ∈ word : j < i}}`.
pub fn insertion_sign(word: Word, i: usize) -> Q {
    sign((word & ((1u32 << i) - 1)).count_ones() as i64)
}

pub fn word_label(word: Word, prefix: &str, names: &[String], sep: &str) -> String {
    if word == 0 {
        return "1".into();
    }
    (0..names.len())
        .filter(|i| word & (1 << i) != 0)
        .map(|i| format!("{prefix}{}", names[i]))
        .collect::<Vec<_>>()
        .join(sep)
}

/// The telescoping cofactors of `f` in `2n` variables `(x, y)`:
/// `Fᵢ = (f(x_{<i}, yᵢ, y_{>i}) − f(x_{≤i}, y_{>i})) / (yᵢ − xᵢ)`, so that
/// `Σ (yᵢ − xᵢ) Fᵢ = f(y) − f(x)`.
pub fn curvature_cofactors(f: &Poly) -> Result<Vec<Poly>, KoszulError> {
    if !f.constant_term().is_zero() {
        return Err(KoszulError::ConstantTerm);
    }
    let n = f.nvars();
    let x = |i: usize| Poly::var(2 * n, i);
    let y = |i: usize| Poly::var(2 * n, n + i);
    // g_i = f(x_1..x_i, y_{i+1}..y_n)
    let g = |i: usize| -> Poly {
        let images: Vec<Poly> = (0..n).map(|j| if j < i { x(j) } else { y(j) }).collect();
        f.substitute(&images, 2 * n)
    };
    (0..n)
        .map(|i| {
            g(i).sub(&g(i + 1))
                .divide_by_difference(n + i, i)
                .ok_or_else(|| KoszulError::Cofactors(format!("slot {} leaves a remainder", i + 1)))
        })
        .collect()
}

/// `Σ (yᵢ − xᵢ) Fᵢ − (f(y) − f(x))`, zero for valid cofactors.
pub fn cofactor_deviation(f: &Poly, cofactors: &[Poly]) -> Poly {
    let n = f.nvars();
    let xs: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n, i)).collect();
    let ys: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n, n + i)).collect();
    let mut acc = f.substitute(&xs, 2 * n).sub(&f.substitute(&ys, 2 * n));
    for (i, fi) in cofactors.iter().enumerate() {
        acc = acc.add(&ys[i].sub(&xs[i]).mul(fi));
    }
    acc
}

/// Restriction of a polynomial in `(x, y)` to the diagonal `y = x`.
pub fn diagonal(p: &Poly) -> Poly {
    let n = p.nvars() / 2;
    let images: Vec<Poly> = (0..2 * n).map(|j| Poly::var(n, j % n)).collect();
    p.substitute(&images, n)
}

/// Negates one cofactor, or a single term of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CofactorMutation {
    pub cofactor: usize,
    pub term: Option<usize>,
}

pub fn mutate_cofactors(cofactors: &[Poly], m: CofactorMutation) -> Vec<Poly> {
    let mut out = cofactors.to_vec();
    if let Some(p) = out.get_mut(m.cofactor) {
        *p = match m.term {
            None => p.scale(&-Q::one()),
            Some(t) => {
                let mut q = p.clone();
                if let Some((e, c)) = p.terms().nth(t) {
                    q.add_term(e.clone(), -(c.clone() + c.clone()));
                }
                q
            }
        };
    }
    out
}

pub struct KoszulResolution {
    names: Vec<String>,
    weights: Vec<u32>,
    degrees: Vec<i64>,
    order: u32,
    columns: Vec<Arc<GradedSpace>>,
    basis: Vec<Vec<(Word, Exponents)>>,
    index: Vec<HashMap<(Word, Exponents), usize>>,
    d: Vec<Option<LinearMap>>,
    twist: Option<Vec<LinearMap>>,
    curvature_action: Option<Vec<LinearMap>>,
    cofactors: Vec<Poly>,
    potential: Poly,
}

/// Variables and truncation order of a polynomial family.
pub fn family_variables(a: &AlgebraPresentation) -> Result<(Vec<Variable>, u32, Poly), KoszulError> {
    let fam = a
        .family()
        .filter(|f| !f.exponents.is_empty() && f.order.is_some())
        .ok_or_else(|| KoszulError::NotPolynomial("a truncated polynomial family".into()))?;
    if a.has_differential() {
        return Err(KoszulError::NotPolynomial("a zero differential".into()));
    }
    if fam.variables.iter().any(|v| v.degree.rem_euclid(2) != 0) {
        return Err(KoszulError::NotPolynomial("even variables".into()));
    }
    if fam.variables.len() > 16 {
        return Err(KoszulError::NotPolynomial("at most 16 variables".into()));
    }
    let n = fam.variables.len();
    let f = fam.potential.clone().unwrap_or_else(|| Poly::zero(n));
    Ok((fam.variables.clone(), fam.order.unwrap_or(0), f))
}

/// The untwisted Koszul resolution of a truncated polynomial family.
pub fn koszul_resolution(a: &AlgebraPresentation) -> Result<KoszulResolution, KoszulError> {
    let (vars, order, _) = family_variables(a)?;
    KoszulResolution::new(&vars, order, a.grading())
}

/// The resolution twisted by the telescoping cofactors of `f`; `f = 0`
/// returns it unchanged.
pub fn twist_koszul(res: KoszulResolution, f: &Poly) -> Result<KoszulResolution, KoszulError> {
    if f.is_zero() {
        return Ok(res);
    }
    let cofactors = curvature_cofactors(f)?;
    res.twisted_with(f, cofactors)
}

impl KoszulResolution {
    pub fn new(vars: &[Variable], order: u32, grading: Grading) -> Result<Self, KoszulError> {
        let n = vars.len();
        let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
        let weights: Vec<u32> = vars.iter().map(|v| v.weight).collect();
        let degrees: Vec<i64> = vars.iter().map(|v| v.degree).collect();
        let w2: Vec<u32> = weights.iter().chain(&weights).copied().collect();
        let coeffs = monomials_up_to(&w2, order);
        let mut words: Vec<Word> = (0..(1u32 << n)).collect();
        words.sort_by_key(|w| (w.count_ones(), w.reverse_bits()));
        let mut basis = vec![Vec::new(); n + 1];
        for &w in &words {
            let ww = word_weight(w, &weights);
            for e in &coeffs {
                let we: u32 = e.iter().zip(&w2).map(|(a, b)| a * b).sum();
                if ww + we <= order {
                    basis[w.count_ones() as usize].push((w, e.clone()));
                }
            }
        }
        let right_names: Vec<String> = names.iter().map(|s| format!("{s}'")).collect();
        let both: Vec<String> = names.iter().chain(&right_names).cloned().collect();
        let degree_of = |w: Word, e: &Exponents| -> i64 {
            let wd: i64 = (0..n).filter(|i| w & (1 << i) != 0).map(|i| degrees[i] - 1).sum();
            wd + e.iter().enumerate().map(|(j, k)| *k as i64 * degrees[j % n]).sum::<i64>()
        };
        let columns = basis
            .iter()
            .map(|col| {
                let labels = col
                    .iter()
                    .map(|(w, e)| {
                        (
                            format!("{}|{}", word_label(*w, "e", &names, "∧"), monomial_label(e, &both)),
                            degree_of(*w, e),
                        )
                    })
                    .collect();
                GradedSpace::new(grading, labels).map(Arc::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let index = basis
            .iter()
            .map(|col| col.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect())
            .collect();
        let mut res = Self {
            names,
            weights,
            degrees,
            order,
            columns,
            basis,
            index,
            d: Vec::new(),
            twist: None,
            curvature_action: None,
            cofactors: Vec::new(),
            potential: Poly::zero(n),
        };
        res.d = (0..=n)
            .map(|k| {
                (k > 0)
                    .then(|| {
                        let cols = (0..res.basis[k].len()).map(|j| res.apply_generator_map(k, j, k - 1, &res.d_generator(res.basis[k][j].0))).collect();
                        LinearMap::new(res.columns[k].clone(), res.columns[k - 1].clone(), 1, cols)
                    })
                    .transpose()
            })
            .collect::<Result<_, _>>()?;
        Ok(res)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn variable_degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn column(&self, k: usize) -> &Arc<GradedSpace> {
        &self.columns[k]
    }

    /// `d` from column `k` to `k − 1`.
    pub fn d(&self, k: usize) -> Option<&LinearMap> {
        self.d.get(k).and_then(|m| m.as_ref())
    }

    /// The twist from column `k` to `k + 1`.
    pub fn twist(&self, k: usize) -> Option<&LinearMap> {
        self.twist.as_ref().and_then(|t| t.get(k))
    }

    pub fn cofactors(&self) -> &[Poly] {
        &self.cofactors
    }

    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    pub fn is_twisted(&self) -> bool {
        self.twist.is_some()
    }

    /// `d(eᴵ) = Σ ι_{eⁱ} eᴵ ⊗ (xᵢ − yᵢ)` on a generator.
    pub fn d_generator(&self, word: Word) -> Vec<(Word, Poly)> {
        let n = self.rank();
        (0..n)
            .filter(|i| word & (1 << i) != 0)
            .map(|i| {
                let s = insertion_sign(word, i);
                let c = Poly::var(2 * n, i).sub(&Poly::var(2 * n, n + i)).scale(&s);
                (word & !(1 << i), c)
            })
            .collect()
    }

    /// `k(eᴵ) = Σ eⁱ ∧ eᴵ ⊗ Fᵢ` on a generator.
    pub fn twist_generator(&self, word: Word) -> Vec<(Word, Poly)> {
        self.cofactors
            .iter()
            .enumerate()
            .filter(|(i, fi)| word & (1 << i) == 0 && !fi.is_zero())
            .map(|(i, fi)| (word | (1 << i), fi.scale(&insertion_sign(word, i))))
            .collect()
    }

    /// `−F = f(x) − f(y)` in the `(x, y)` variables.
    pub fn curvature_polynomial(&self) -> Poly {
        let n = self.rank();
        let xs: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n, i)).collect();
        let ys: Vec<Poly> = (0..n).map(|i| Poly::var(2 * n, n + i)).collect();
        self.potential.substitute(&xs, 2 * n).sub(&self.potential.substitute(&ys, 2 * n))
    }

    /// Image of basis element `j` of column `from` under a map given on
    /// generators, truncated to the stored weights of column `to`.
    fn apply_generator_map(&self, from: usize, j: usize, to: usize, images: &[(Word, Poly)]) -> SparseVec {
        let (_, e) = &self.basis[from][j];
        collect_sparse(images.iter().flat_map(|(w, p)| {
            p.terms().filter_map(move |(t, c)| {
                let s: Exponents = e.iter().zip(t).map(|(a, b)| a + b).collect();
                self.index[to].get(&(*w, s)).map(|&i| (i, c.clone()))
            })
        }))
    }

    fn materialize(
        &self,
        from: usize,
        to: usize,
        degree: i64,
        images: impl Fn(Word) -> Vec<(Word, Poly)>,
    ) -> Result<LinearMap, GradedError> {
        let cols = (0..self.basis[from].len())
            .map(|j| self.apply_generator_map(from, j, to, &images(self.basis[from][j].0)))
            .collect();
        LinearMap::new(self.columns[from].clone(), self.columns[to].clone(), degree, cols)
    }

    /// Installs the twist for `f` with the given cofactors and checks
    /// `k² = 0` and `dk + kd = −F` on every basis element.
    pub fn twisted_with(mut self, f: &Poly, cofactors: Vec<Poly>) -> Result<Self, KoszulError> {
        let n = self.rank();
        if f.nvars() != n || cofactors.len() != n {
            return Err(KoszulError::NotPolynomial(format!("a potential in {n} variables")));
        }
        if !f.constant_term().is_zero() {
            return Err(KoszulError::ConstantTerm);
        }
        self.potential = f.clone();
        self.cofactors = cofactors;
        // internal degree of the twist: (|xᵢ| − 1) + |Fᵢ| = |f| − 1
        let fdeg = f
            .terms()
            .next()
            .map(|(e, _)| e.iter().zip(&self.degrees).map(|(k, d)| *k as i64 * d).sum::<i64>())
            .unwrap_or(0);
        let twist = (0..n)
            .map(|k| self.materialize(k, k + 1, fdeg - 1, |w| self.twist_generator(w)))
            .collect::<Result<Vec<_>, _>>()?;
        let curv = self.curvature_polynomial();
        let action = (0..=n)
            .map(|k| self.materialize(k, k, fdeg, |w| vec![(w, curv.clone())]))
            .collect::<Result<Vec<_>, _>>()?;
        self.twist = Some(twist);
        self.curvature_action = Some(action);
        let violations = validate_generalized_resolution(&self.resolution_data()?)?;
        if !violations.is_empty() {
            return Err(KoszulError::Identity(violations));
        }
        Ok(self)
    }

    /// The columns and maps in the layout of a generalized resolution:
    /// `d₋₁ = d`, `d_v = 0`, `d₁ = k`, curvature action `−F`.
    pub fn resolution_data(&self) -> Result<ResolutionData, GradedError> {
        let n = self.rank();
        let d_v = self
            .columns
            .iter()
            .map(|c| LinearMap::zero(c.clone(), c.clone(), 1))
            .collect();
        Ok(ResolutionData {
            columns: self.columns.clone(),
            d_minus1: self.d.clone(),
            d_v,
            higher: self.twist.iter().cloned().collect(),
            curvature_action: (0..=n)
                .map(|k| self.curvature_action.as_ref().map(|a| a[k].clone()))
                .collect(),
            homotopy: None,
        })
    }

    /// The augmentation `x^a ⊗ y^b ↦ x^{a+b}` from column 0 onto
    /// `P / (weight > D)`.
    pub fn augmentation(&self) -> Vec<SparseVec> {
        let n = self.rank();
        let target = monomials_up_to(&self.weights, self.order);
        let pos: HashMap<&Exponents, usize> = target.iter().enumerate().map(|(i, e)| (e, i)).collect();
        self.basis[0]
            .iter()
            .map(|(_, e)| {
                let s: Exponents = (0..n).map(|i| e[i] + e[n + i]).collect();
                vec![(pos[&s], Q::one())]
            })
            .collect()
    }

    /// Homology of the augmented complex `col_n → .. → col_0 → P`, per
    /// column; all zero when the resolution is exact in the window.
    pub fn homology_dims(&self) -> Vec<usize> {
        let n = self.rank();
        let ranks: Vec<usize> = (0..=n).map(|k| self.d(k).map(|m| m.rank()).unwrap_or(0)).collect();
        let aug = linalg::rank(&self.augmentation());
        let p_dim = monomials_up_to(&self.weights, self.order).len();
        let mut out: Vec<usize> = (0..=n)
            .map(|k| {
                let outgoing = if k == 0 { aug } else { ranks[k] };
                let incoming = if k < n { ranks[k + 1] } else { 0 };
                self.columns[k].dim() - outgoing - incoming
            })
            .collect();
        out.push(p_dim - aug);
        out
    }

    /// Checks `d² = 0` and `ε ∘ d = 0` exactly.
    pub fn square_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for k in 2..=self.rank() {
            if let (Some(a), Some(b)) = (self.d(k), self.d(k - 1)) {
                for j in 0..self.columns[k].dim() {
                    if !b.apply(a.col(j)).is_empty() {
                        out.push(format!("d² on {}", self.columns[k].label(j)));
                    }
                }
            }
        }
        if let Some(d1) = self.d(1) {
            let aug = self.augmentation();
            for j in 0..self.columns[1].dim() {
                if !linalg::apply(&aug, d1.col(j)).is_empty() {
                    out.push(format!("ε∘d on {}", self.columns[1].label(j)));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{build_truncated_polynomial, standard_variables};
    use crate::rational::q;
    use proptest::prelude::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn poly(s: &str, n: &[&str]) -> Poly {
        Poly::parse(s, &names(n)).unwrap()
    }

    #[test]
    fn cofactors_of_a_square() {
        let f = poly("x^2", &["x"]);
        let fs = curvature_cofactors(&f).unwrap();
        assert_eq!(fs, vec![poly("x + y", &["x", "y"])]);
        assert_eq!(diagonal(&fs[0]), poly("2*x", &["x"]));
    }

    #[test]
    fn cofactors_of_a_product_telescope_in_order() {
        let f = poly("x1*x2", &["x1", "x2"]);
        let fs = curvature_cofactors(&f).unwrap();
        let n4 = ["x1", "x2", "y1", "y2"];
        assert_eq!(fs, vec![poly("y2", &n4), poly("x1", &n4)]);
        assert!(cofactor_deviation(&f, &fs).is_zero());
    }

    #[test]
    fn constant_term_is_refused() {
        let f = poly("1 + x", &["x"]);
        assert_eq!(curvature_cofactors(&f), Err(KoszulError::ConstantTerm));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        (1usize..=3).prop_flat_map(|n| {
            proptest::collection::vec((proptest::collection::vec(0u32..=3, n), -4i64..=4), 0..6).prop_map(move |ts| {
                let mut p = Poly::zero(n);
                for (mut e, c) in ts {
                    if e.iter().sum::<u32>() == 0 {
                        e[0] = 1;
                    }
                    while e.iter().sum::<u32>() > 5 {
                        let i = e.iter().position(|k| *k > 0).unwrap();
                        e[i] -= 1;
                    }
                    p.add_term(e, q(c));
                }
                p
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn cofactors_telescope_and_restrict_to_partials(f in arb_poly()) {
            let fs = curvature_cofactors(&f).unwrap();
            prop_assert!(cofactor_deviation(&f, &fs).is_zero());
            for (i, fi) in fs.iter().enumerate() {
                prop_assert_eq!(diagonal(fi), f.derivative(i));
            }
        }
    }

    #[test]
    fn one_variable_is_multiplication_by_the_difference() {
        let a = build_truncated_polynomial(&standard_variables(1), 3).unwrap();
        let res = koszul_resolution(&a).unwrap();
        assert_eq!(res.rank(), 1);
        let d = res.d(1).unwrap();
        // e|1 ↦ x − x'
        let j = res.column(1).lookup("ex|1").unwrap();
        let img = res.column(0).render(d.col(j));
        assert_eq!(img.len(), 2);
        assert!(res.square_violations().is_empty());
        assert!(res.homology_dims().iter().all(|h| *h == 0));
    }

    #[test]
    fn two_variables_are_exact_in_the_window() {
        for order in 1..=4 {
            let a = build_truncated_polynomial(&standard_variables(2), order).unwrap();
            let res = koszul_resolution(&a).unwrap();
            assert!(res.square_violations().is_empty());
            assert_eq!(res.homology_dims(), vec![0, 0, 0, 0], "order {order}");
        }
        let a = build_truncated_polynomial(&standard_variables(3), 3).unwrap();
        let res = koszul_resolution(&a).unwrap();
        assert!(res.homology_dims().iter().all(|h| *h == 0));
    }

    fn mf(f: &str, n: &[&str], order: i64) -> KoszulResolution {
        let f = poly(f, n);
        let a = crate::cdg::build_mf_algebra(&f, &names(n), order).unwrap();
        twist_koszul(koszul_resolution(&a).unwrap(), &f).unwrap()
    }

    #[test]
    fn twist_of_a_square_acts_by_the_curvature_difference() {
        let res = mf("x^2", &["x"], 5);
        let c = res.curvature_polynomial();
        assert_eq!(c, poly("x^2 - y^2", &["x", "y"]));
        // entrywise against direct polynomial arithmetic
        let d = res.d(1).unwrap();
        let k = res.twist(0).unwrap();
        for j in 0..res.column(0).dim() {
            let (_, e) = &res.basis[0][j];
            let expect = Poly::monomial(e.clone(), Q::one()).mul(&c);
            let got = d.apply(k.col(j));
            let want: SparseVec = collect_sparse(
                expect
                    .terms()
                    .filter_map(|(t, c)| res.index[0].get(&(0, t.clone())).map(|&i| (i, c.clone()))),
            );
            assert_eq!(got, want);
        }
    }

    #[test]
    fn twist_squares_to_zero_for_two_cubes() {
        let res = mf("x^3 + y^3", &["x", "y"], 5);
        let k0 = res.twist(0).unwrap();
        let k1 = res.twist(1).unwrap();
        for j in 0..res.column(0).dim() {
            assert!(k1.apply(k0.col(j)).is_empty());
        }
    }

    #[test]
    fn zero_potential_leaves_the_resolution_untwisted() {
        let a = build_truncated_polynomial(&standard_variables(2), 3).unwrap();
        let res = twist_koszul(koszul_resolution(&a).unwrap(), &Poly::zero(2)).unwrap();
        assert!(!res.is_twisted());
    }

    #[test]
    fn flipped_cofactor_is_caught_with_a_witness() {
        let f = poly("x^2 + x*y", &["x", "y"]);
        let a = crate::cdg::build_mf_algebra(&f, &names(&["x", "y"]), 4).unwrap();
        let fs = curvature_cofactors(&f).unwrap();
        for i in 0..2 {
            for t in 0..fs[i].terms().count() {
                let bad = mutate_cofactors(&fs, CofactorMutation { cofactor: i, term: Some(t) });
                assert!(!cofactor_deviation(&f, &bad).is_zero());
                let err = koszul_resolution(&a).unwrap().twisted_with(&f, bad).err().unwrap();
                let KoszulError::Identity(v) = err else { panic!("expected identity failure") };
                assert!(v.iter().all(|w| w.shift == Some(0)));
            }
        }
    }
}
