//! The HKR map from polyvector fields to Hochschild cochains of a
//! polynomial algebra in a weight window, and its comparison with the
//! computed cohomology.

use serde::{Deserialize, Serialize};

use crate::cdg::AlgebraPresentation;
use crate::graded::{Grading, TruncationParams};
use crate::hochschild::window::model_for;
use crate::hochschild::{
    compute_hh, minimal_tensor_length, render_terms, CochainKind, CochainModel, CochainTerm, HhOptions, PolyModel,
    WindowComplex, WindowOptions,
};
use crate::poly::{monomials_up_to, Exponents, Poly};
use crate::rational::{q, sign, Q};

use super::{family_variables, KoszulError, PolyvectorField};

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        // insert k−1 at every position; moving it left past j entries flips j times
        for pos in 0..=p.len() {
            let mut p2 = p.clone();
            p2.insert(pos, k - 1);
            let flips = (p.len() - pos) as i64;
            out.push((p2, s * if flips % 2 == 0 { 1 } else { -1 }));
        }
    }
    out
}

/// `Σ_σ sgn(σ) Π_j ∂_{i_σ(j)}-exponent of uⱼ`: the numeric factor of the
/// HKR value on monomials.
fn alternating_factor(inputs: &[&Exponents], word: &[usize], perms: &[(Vec<usize>, i64)]) -> i64 {
    perms
        .iter()
        .map(|(p, s)| s * inputs.iter().zip(p).map(|(u, &l)| u[word[l]] as i64).product::<i64>())
        .sum()
}

/// `v = g ∂_{i₁}∧..∧∂_{i_k}` ↦ the cochain `(a₁, .., a_k) ↦ g Σ_σ sgn(σ)
/// Π ∂_{i_σ(j)} aⱼ`, without a `1/k!` factor, on the window's inputs.
pub fn hkr_map(v: &PolyvectorField, model: &PolyModel) -> Result<Vec<CochainTerm>, KoszulError> {
    if !model.potential.is_zero() {
        return Err(KoszulError::Curved);
    }
    let k = v.degree();
    let word = &v.word;
    let wt = |e: &Exponents| -> u32 { model.weight(e) };
    let word_weight: u32 = word.iter().map(|&i| model.weights[i]).sum();
    let perms = permutations(k);
    let useful: Vec<usize> = (0..model.input_count())
        .filter(|&u| word.iter().any(|&i| model.input_exponents(u)[i] > 0))
        .collect();
    let mut out = Vec::new();
    for (g, c) in v.coefficient.terms() {
        let budget = (model.order + word_weight) as i64 - wt(g) as i64;
        let mut tuple = Vec::with_capacity(k);
        enumerate(model, &useful, k, budget, &mut tuple, &mut |t| {
            let ins: Vec<&Exponents> = t.iter().map(|&u| model.input_exponents(u)).collect();
            let factor = alternating_factor(&ins, word, &perms);
            if factor == 0 {
                return;
            }
            let mut e = g.clone();
            for u in &ins {
                for (a, b) in e.iter_mut().zip(u.iter()) {
                    *a += b;
                }
            }
            for &i in word {
                e[i] -= 1;
            }
            if let Some(b) = model.output_id(&e) {
                out.push((t.to_vec(), b, c * q(factor)));
            }
        });
    }
    out.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    Ok(out)
}

fn enumerate(
    model: &PolyModel,
    useful: &[usize],
    left: usize,
    budget: i64,
    tuple: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if left == 0 {
        visit(tuple);
        return;
    }
    for &u in useful {
        let w = model.weight(model.input_exponents(u)) as i64;
        if w <= budget {
            tuple.push(u);
            enumerate(model, useful, left - 1, budget - w, tuple, visit);
            tuple.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkrDegree {
    pub degree: i64,
    pub polyvector_dimension: usize,
    pub hochschild_dimension: usize,
    pub stabilized: bool,
    pub cocycles: bool,
    pub independent: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HkrReport {
    pub order: u32,
    pub degrees: Vec<HkrDegree>,
    pub failures: Vec<String>,
}

impl HkrReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Monomial basis `x^m ∂_I` of degree-`k` polyvector fields.
pub fn polyvector_basis(nvars: usize, weights: &[u32], order: u32, k: usize) -> Vec<PolyvectorField> {
    let mut out = Vec::new();
    let mut words: Vec<u32> = (0..(1u32 << nvars)).filter(|w| w.count_ones() as usize == k).collect();
    words.sort_by_key(|w| w.reverse_bits());
    for w in words {
        let word: Vec<usize> = (0..nvars).filter(|i| w & (1 << i) != 0).collect();
        for m in monomials_up_to(weights, order) {
            out.push(PolyvectorField {
                coefficient: Poly::monomial(m, Q::from_integer(1.into())),
                word: word.clone(),
            });
        }
    }
    out
}

/// Checks that every HKR image is a cocycle, that the images are
/// independent modulo coboundaries, and that `dim HHᵏ = dim Λᵏ Der` in
/// stabilized degrees.
pub fn hkr_compare(
    a: &AlgebraPresentation,
    degrees: &[i64],
    schedule: &[TruncationParams],
) -> Result<HkrReport, KoszulError> {
    if a.is_curved() {
        return Err(KoszulError::Curved);
    }
    if a.grading() != Grading::Integer {
        return Err(KoszulError::NotPolynomial("an integer grading".into()));
    }
    let (vars, family_order, _) = family_variables(a)?;
    let order = schedule.last().and_then(|t| t.order).unwrap_or(family_order);
    let schedule: Vec<TruncationParams> = if schedule.is_empty() {
        let n = minimal_tensor_length(a, CochainKind::Window, degrees, order);
        [n, n + 1]
            .iter()
            .map(|&n| TruncationParams {
                tensor_length: Some(n),
                order: Some(order),
                weight_floor: None,
            })
            .collect()
    } else {
        schedule.to_vec()
    };
    let hh = compute_hh(a, degrees, &schedule, &HhOptions::default()).map_err(|e| KoszulError::Hochschild(e.to_string()))?;
    let last = hh.levels.last().expect("non-empty schedule");
    let floor = last.truncation.weight_floor.unwrap_or(0);
    let model = model_for(a, order, floor).map_err(|e| KoszulError::Hochschild(e.to_string()))?;
    let window = WindowComplex::new(model, &WindowOptions::default()).map_err(|e| KoszulError::Hochschild(e.to_string()))?;
    let model = window.model();
    let weights: Vec<u32> = vars.iter().map(|v| v.weight).collect();
    let mut failures = Vec::new();
    let mut out = Vec::new();
    for (i, &k) in degrees.iter().enumerate() {
        let fields = if k < 0 { Vec::new() } else { polyvector_basis(vars.len(), &weights, order, k as usize) };
        let mut images = Vec::with_capacity(fields.len());
        let mut cocycles = true;
        for v in &fields {
            let img = hkr_map(v, model)?;
            let d = window.delta(&img);
            if !d.is_empty() {
                cocycles = false;
                failures.push(format!(
                    "HKR image of {} is not a cocycle: δ = {}",
                    field_label(v, model),
                    render_terms(model, &d)
                ));
            }
            images.push(img);
        }
        let independent = window.independent_modulo_boundaries(&images).unwrap_or(0);
        if independent != fields.len() {
            failures.push(format!(
                "degree {k}: only {independent} of {} HKR classes are independent modulo coboundaries",
                fields.len()
            ));
        }
        let entry = &hh.entries[i];
        if entry.stabilized && entry.dimension != fields.len() {
            failures.push(format!(
                "degree {k}: dim HH = {} but dim Λ Der = {}",
                entry.dimension,
                fields.len()
            ));
        }
        if !entry.stabilized {
            failures.push(format!("degree {k}: not stabilized over the schedule"));
        }
        out.push(HkrDegree {
            degree: k,
            polyvector_dimension: fields.len(),
            hochschild_dimension: entry.dimension,
            stabilized: entry.stabilized,
            cocycles,
            independent,
        });
    }
    Ok(HkrReport {
        order,
        degrees: out,
        failures,
    })
}

fn field_label(v: &PolyvectorField, model: &PolyModel) -> String {
    let coeff = v.coefficient.render(&model.names);
    let word: Vec<String> = v.word.iter().map(|&i| format!("∂{}", model.names[i])).collect();
    if word.is_empty() {
        coeff
    } else {
        format!("({coeff})*{}", word.join("∧"))
    }
}

/// Sign of a permutation given as images of `0..k`.
pub fn permutation_sign(p: &[usize]) -> Q {
    let inv = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    sign(inv as i64)
}
