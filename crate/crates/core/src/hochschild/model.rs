//! Coefficient models for Hochschild cochains `Ā^{⊗n} → M`.
//!
//! A cochain is identified with an `A^e`-linear map out of the reduced bar
//! resolution through `φ ↦ (a₀⊗v⊗a' ↦ (−1)^{p|a₀|} a₀ φ(v) a')`. Its
//! differential is `δφ = d_M φ − (−1)^k φ̃ ∘ d_Bar` with `k = n + p`; the
//! function [`delta_elementary`] writes out the image of an elementary
//! cochain `e_{u,b}` (sending the basis tensor `u` to the basis vector `b`).

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::cdg::AlgebraPresentation;
use crate::graded::Grading;
use crate::poly::{monomials_up_to, Exponents, Poly};
use crate::rational::{collect_sparse, sign, SparseVec, Q};

/// Everything the cochain differential needs to know about `A` and `M`.
pub trait CochainModel: Sync {
    fn grading(&self) -> Grading;
    fn input_count(&self) -> usize;
    fn output_count(&self) -> usize;
    fn input_degree(&self, v: usize) -> i64;
    fn output_degree(&self, b: usize) -> i64;
    fn input_label(&self, v: usize) -> String;
    fn output_label(&self, b: usize) -> String;
    /// `(v, v·b)` for reduced inputs `v` with `v·b ≠ 0`.
    fn left_products(&self, b: usize) -> &[(usize, SparseVec)];
    /// `(v, b·v)` for reduced inputs `v` with `b·v ≠ 0`.
    fn right_products(&self, b: usize) -> &[(usize, SparseVec)];
    /// `(v, v', c)` such that the reduced product `π(v v')` has coefficient
    /// `c` on the input `t`.
    fn splittings(&self, t: usize) -> &[(usize, usize, Q)];
    /// Module differential on an output basis vector.
    fn d_output(&self, b: usize) -> &SparseVec;
    /// `(v, c)` such that `π(d v)` has coefficient `c` on the input `t`.
    fn d_preimages(&self, t: usize) -> &[(usize, Q)];
    /// `π(B)` in input coordinates.
    fn curvature_input(&self) -> &SparseVec;

    fn tensor_degree(&self, u: &[usize]) -> i64 {
        u.iter().map(|&v| self.input_degree(v)).sum()
    }

    /// Internal degree `p` of the elementary cochain `e_{u,b}`.
    fn internal_degree(&self, u: &[usize], b: usize) -> i64 {
        self.output_degree(b) - self.tensor_degree(u)
    }

    fn cochain_label(&self, u: &[usize], b: usize) -> String {
        let ins: Vec<String> = u.iter().map(|&v| self.input_label(v)).collect();
        format!("[{}]->{}", ins.join(","), self.output_label(b))
    }
}

/// One term `c · e_{w, b}` of a cochain.
pub type CochainTerm = (Vec<usize>, usize, Q);

/// `δ e_{u,b}` as a list of elementary terms (arity `n+1`, `n` and `n−1`).
pub fn delta_elementary<M: CochainModel + ?Sized>(model: &M, u: &[usize], b: usize) -> Vec<CochainTerm> {
    let n = u.len();
    let p = model.internal_degree(u, b);
    let k = n as i64 + p;
    let outer = -sign(k);
    let mut out: Vec<CochainTerm> = Vec::new();
    let push_vec = |out: &mut Vec<CochainTerm>, w: Vec<usize>, val: &SparseVec, c: &Q| {
        for (m, x) in val {
            out.push((w.clone(), *m, c * x));
        }
    };

    // d₋₁ part, arity n + 1
    for (v, vb) in model.left_products(b) {
        let mut w = Vec::with_capacity(n + 1);
        w.push(*v);
        w.extend_from_slice(u);
        let c = &outer * sign(p * model.input_degree(*v));
        push_vec(&mut out, w, vb, &c);
    }
    for i in 1..=n {
        let c_i = &outer * sign(i as i64);
        for (v, v2, c) in model.splittings(u[i - 1]) {
            let mut w = Vec::with_capacity(n + 1);
            w.extend_from_slice(&u[..i - 1]);
            w.push(*v);
            w.push(*v2);
            w.extend_from_slice(&u[i..]);
            out.push((w, b, &c_i * c));
        }
    }
    let c_last = &outer * sign(n as i64 + 1);
    for (v, bv) in model.right_products(b) {
        let mut w = Vec::with_capacity(n + 1);
        w.extend_from_slice(u);
        w.push(*v);
        push_vec(&mut out, w, bv, &c_last);
    }

    // d_M and d_v parts, arity n
    push_vec(&mut out, u.to_vec(), model.d_output(b), &Q::one());
    let mut before = 0i64;
    for j in 0..n {
        let c_j = &outer * sign(n as i64 + before);
        for (v, c) in model.d_preimages(u[j]) {
            let mut w = u.to_vec();
            w[j] = *v;
            out.push((w, b, &c_j * c));
        }
        before += model.input_degree(u[j]);
    }

    // d₁ part, arity n − 1: φ evaluated with B inserted at slot j
    let curv = model.curvature_input();
    if !curv.is_empty() {
        for j in 1..=n {
            if let Some((_, c)) = curv.iter().find(|(t, _)| *t == u[j - 1]) {
                let mut w = u.to_vec();
                w.remove(j - 1);
                out.push((w, b, &outer * sign(j as i64 + 1) * c));
            }
        }
    }
    out
}

/// Merges repeated terms and drops zeros.
pub fn normalize_terms(mut terms: Vec<CochainTerm>) -> Vec<CochainTerm> {
    terms.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    let mut out: Vec<CochainTerm> = Vec::with_capacity(terms.len());
    for (w, m, c) in terms {
        match out.last_mut() {
            Some((w2, m2, acc)) if *w2 == w && *m2 == m => *acc += c,
            _ => out.push((w, m, c)),
        }
    }
    out.retain(|t| !t.2.is_zero());
    out
}

/// A finite cdg-algebra with coefficients in itself (`M = A`); inputs are
/// the non-unit basis elements.
pub struct FiniteModel {
    algebra: AlgebraPresentation,
    /// input index -> algebra index
    inputs: Vec<usize>,
    input_of: Vec<Option<usize>>,
    left: Vec<Vec<(usize, SparseVec)>>,
    right: Vec<Vec<(usize, SparseVec)>>,
    splits: Vec<Vec<(usize, usize, Q)>>,
    d_pre: Vec<Vec<(usize, Q)>>,
    curvature: SparseVec,
}

impl FiniteModel {
    pub fn new(a: &AlgebraPresentation) -> Self {
        let inputs = a.reduced_indices();
        let mut input_of = vec![None; a.dim()];
        for (p, &i) in inputs.iter().enumerate() {
            input_of[i] = Some(p);
        }
        let to_input = |v: &SparseVec| -> SparseVec {
            v.iter().filter_map(|(i, c)| input_of[*i].map(|p| (p, c.clone()))).collect()
        };
        let n = a.dim();
        let mut left = vec![Vec::new(); n];
        let mut right = vec![Vec::new(); n];
        for b in 0..n {
            for (p, &v) in inputs.iter().enumerate() {
                let vb = a.mul_basis(v, b);
                if !vb.is_empty() {
                    left[b].push((p, vb.clone()));
                }
                let bv = a.mul_basis(b, v);
                if !bv.is_empty() {
                    right[b].push((p, bv.clone()));
                }
            }
        }
        let mut splits = vec![Vec::new(); inputs.len()];
        for (p1, &v1) in inputs.iter().enumerate() {
            for (p2, &v2) in inputs.iter().enumerate() {
                for (t, c) in to_input(a.mul_basis(v1, v2)) {
                    splits[t].push((p1, p2, c));
                }
            }
        }
        let mut d_pre = vec![Vec::new(); inputs.len()];
        for (p, &v) in inputs.iter().enumerate() {
            for (t, c) in to_input(a.d_basis(v)) {
                d_pre[t].push((p, c));
            }
        }
        let curvature = to_input(a.curvature());
        Self {
            algebra: a.clone(),
            inputs,
            input_of,
            left,
            right,
            splits,
            d_pre,
            curvature,
        }
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    /// Algebra index of an input.
    pub fn input_algebra_index(&self, v: usize) -> usize {
        self.inputs[v]
    }

    pub fn input_of(&self, i: usize) -> Option<usize> {
        self.input_of[i]
    }
}

impl CochainModel for FiniteModel {
    fn grading(&self) -> Grading {
        self.algebra.grading()
    }
    fn input_count(&self) -> usize {
        self.inputs.len()
    }
    fn output_count(&self) -> usize {
        self.algebra.dim()
    }
    fn input_degree(&self, v: usize) -> i64 {
        self.algebra.degree(self.inputs[v])
    }
    fn output_degree(&self, b: usize) -> i64 {
        self.algebra.degree(b)
    }
    fn input_label(&self, v: usize) -> String {
        self.algebra.label(self.inputs[v]).to_string()
    }
    fn output_label(&self, b: usize) -> String {
        self.algebra.label(b).to_string()
    }
    fn left_products(&self, b: usize) -> &[(usize, SparseVec)] {
        &self.left[b]
    }
    fn right_products(&self, b: usize) -> &[(usize, SparseVec)] {
        &self.right[b]
    }
    fn splittings(&self, t: usize) -> &[(usize, usize, Q)] {
        &self.splits[t]
    }
    fn d_output(&self, b: usize) -> &SparseVec {
        self.algebra.d_basis(b)
    }
    fn d_preimages(&self, t: usize) -> &[(usize, Q)] {
        &self.d_pre[t]
    }
    fn curvature_input(&self) -> &SparseVec {
        &self.curvature
    }
}

/// The polynomial algebra `P = K[x₁..x_n]` (`d = 0`, curvature `f`) with
/// coefficients in `M = P / (weight > D)`, restricted to cochains of weight
/// `wt(output) − wt(inputs) ≥ w₀`. These cochains span a finite subcomplex;
/// its arity is bounded by `D − w₀`.
pub struct PolyModel {
    pub weights: Vec<u32>,
    pub degrees: Vec<i64>,
    pub names: Vec<String>,
    pub order: u32,
    pub floor: i64,
    pub potential: Poly,
    grading: Grading,
    inputs: Vec<Exponents>,
    input_index: HashMap<Exponents, usize>,
    outputs: Vec<Exponents>,
    output_index: HashMap<Exponents, usize>,
    left: Vec<Vec<(usize, SparseVec)>>,
    splits: Vec<Vec<(usize, usize, Q)>>,
    curvature: SparseVec,
    empty: SparseVec,
}

impl PolyModel {
    pub fn new(
        names: Vec<String>,
        weights: Vec<u32>,
        degrees: Vec<i64>,
        grading: Grading,
        potential: Poly,
        order: u32,
        floor: i64,
    ) -> Self {
        let max_input = (order as i64 - floor).max(0) as u32;
        let inputs: Vec<Exponents> = monomials_up_to(&weights, max_input).into_iter().skip(1).collect();
        let input_index: HashMap<Exponents, usize> = inputs.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let outputs = monomials_up_to(&weights, order);
        let output_index: HashMap<Exponents, usize> = outputs.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let wt = |e: &Exponents| -> u32 { e.iter().zip(&weights).map(|(a, w)| a * w).sum() };
        let mut left = vec![Vec::new(); outputs.len()];
        for (b, eb) in outputs.iter().enumerate() {
            for (v, ev) in inputs.iter().enumerate() {
                if wt(ev) + wt(eb) > order {
                    continue;
                }
                let s: Exponents = ev.iter().zip(eb).map(|(x, y)| x + y).collect();
                left[b].push((v, vec![(output_index[&s], Q::one())]));
            }
        }
        let mut splits = vec![Vec::new(); inputs.len()];
        for (t, et) in inputs.iter().enumerate() {
            for (v, ev) in inputs.iter().enumerate() {
                if ev.iter().zip(et).all(|(a, b)| a <= b) {
                    let rest: Exponents = et.iter().zip(ev).map(|(a, b)| a - b).collect();
                    if let Some(&v2) = input_index.get(&rest) {
                        splits[t].push((v, v2, Q::one()));
                    }
                }
            }
        }
        let curvature = collect_sparse(
            potential
                .terms()
                .filter_map(|(e, c)| input_index.get(e).map(|&i| (i, c.clone()))),
        );
        Self {
            weights,
            degrees,
            names,
            order,
            floor,
            potential,
            grading,
            inputs,
            input_index,
            outputs,
            output_index,
            left,
            splits,
            curvature,
            empty: SparseVec::new(),
        }
    }

    pub fn input_exponents(&self, v: usize) -> &Exponents {
        &self.inputs[v]
    }

    pub fn output_exponents(&self, b: usize) -> &Exponents {
        &self.outputs[b]
    }

    pub fn input_id(&self, e: &Exponents) -> Option<usize> {
        self.input_index.get(e).copied()
    }

    pub fn output_id(&self, e: &Exponents) -> Option<usize> {
        self.output_index.get(e).copied()
    }

    pub fn weight(&self, e: &Exponents) -> u32 {
        e.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn max_arity(&self) -> usize {
        (self.order as i64 - self.floor).max(0) as usize
    }
}

impl CochainModel for PolyModel {
    fn grading(&self) -> Grading {
        self.grading
    }
    fn input_count(&self) -> usize {
        self.inputs.len()
    }
    fn output_count(&self) -> usize {
        self.outputs.len()
    }
    fn input_degree(&self, v: usize) -> i64 {
        self.inputs[v].iter().zip(&self.degrees).map(|(a, d)| *a as i64 * d).sum()
    }
    fn output_degree(&self, b: usize) -> i64 {
        self.outputs[b].iter().zip(&self.degrees).map(|(a, d)| *a as i64 * d).sum()
    }
    fn input_label(&self, v: usize) -> String {
        crate::poly::monomial_label(&self.inputs[v], &self.names)
    }
    fn output_label(&self, b: usize) -> String {
        crate::poly::monomial_label(&self.outputs[b], &self.names)
    }
    fn left_products(&self, b: usize) -> &[(usize, SparseVec)] {
        &self.left[b]
    }
    fn right_products(&self, b: usize) -> &[(usize, SparseVec)] {
        &self.left[b]
    }
    fn splittings(&self, t: usize) -> &[(usize, usize, Q)] {
        &self.splits[t]
    }
    fn d_output(&self, _b: usize) -> &SparseVec {
        &self.empty
    }
    fn d_preimages(&self, _t: usize) -> &[(usize, Q)] {
        &[]
    }
    fn curvature_input(&self) -> &SparseVec {
        &self.curvature
    }
}
