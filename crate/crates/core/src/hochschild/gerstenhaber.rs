//! Gerstenhaber operations on Hochschild cochains.
//!
//! Cochains are stored unshifted, as maps `A^{⊗n} → A` keyed by tuples of
//! algebra basis indices, but every operation is the shifted one on
//! `(sA)^{⊗n} → sA` through `F̂(sa₁,…,saₙ) = (−1)^{Σ_j (n−j)(|a_j|−1)} s F(a₁,…,aₙ)`.
//! The curved structure `m = m₀ + m₁ + m₂` (curvature, differential,
//! product) has shifted degree 1 and satisfies `m ∘ m = 0`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cdg::AlgebraPresentation;
use crate::rational::{axpy, format_q, q, scale, sign, SparseVec, Q};

use super::model::{delta_elementary, normalize_terms, FiniteModel};

/// A cochain homogeneous of shifted degree `shifted`, possibly of mixed
/// arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    pub shifted: i64,
    pub values: BTreeMap<Vec<usize>, SparseVec>,
}

impl Cochain {
    pub fn zero(shifted: i64) -> Self {
        Self {
            shifted,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_value(&mut self, key: Vec<usize>, c: &Q, v: &SparseVec) {
        let cur = self.values.remove(&key).unwrap_or_default();
        let next = axpy(&cur, c, v);
        if !next.is_empty() {
            self.values.insert(key, next);
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.combine(&Q::one(), other)
    }

    /// `self + c·other`.
    pub fn combine(&self, c: &Q, other: &Cochain) -> Cochain {
        let mut out = self.clone();
        for (k, v) in &other.values {
            out.add_value(k.clone(), c, v);
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> Cochain {
        let mut out = Cochain::zero(self.shifted);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.values {
            out.values.insert(k.clone(), scale(v, c));
        }
        out
    }

    /// Vanishes whenever an argument is the unit.
    pub fn is_normalized(&self, a: &AlgebraPresentation) -> bool {
        self.values.keys().all(|k| !k.contains(&a.unit()))
    }

    pub fn render(&self, a: &AlgebraPresentation) -> String {
        if self.values.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, v) in &self.values {
            let args: Vec<&str> = k.iter().map(|i| a.label(*i)).collect();
            let val: Vec<String> = v.iter().map(|(i, c)| format!("{}*{}", format_q(c), a.label(*i))).collect();
            parts.push(format!("[{}]->{}", args.join(","), val.join("+")));
        }
        parts.join("; ")
    }
}

fn shifted_deg(a: &AlgebraPresentation, i: usize) -> i64 {
    a.degree(i) - 1
}

/// `(−1)^{Σ_j (n−j)(|a_j|−1)}` for the tuple `key`.
pub fn decalage_sign(a: &AlgebraPresentation, key: &[usize]) -> Q {
    let n = key.len() as i64;
    let e: i64 = key
        .iter()
        .enumerate()
        .map(|(j, &i)| (n - 1 - j as i64) * shifted_deg(a, i))
        .sum();
    sign(e)
}

/// Shifted circle product `(F∘G)(x) = Σ_i (−1)^{‖G‖(‖x₁‖+…+‖x_i‖)} F(x₁,…,x_i, G(…), …)`.
pub fn circle(a: &AlgebraPresentation, f: &Cochain, g: &Cochain) -> Cochain {
    let mut out = Cochain::zero(f.shifted + g.shifted);
    for (fk, fv) in &f.values {
        let ef = decalage_sign(a, fk);
        let mut before = 0i64;
        for (i, &slot) in fk.iter().enumerate() {
            for (gk, gv) in &g.values {
                let c = gv.iter().find(|(t, _)| *t == slot).map(|(_, c)| c);
                let Some(c) = c else { continue };
                let mut key = Vec::with_capacity(fk.len() + gk.len() - 1);
                key.extend_from_slice(&fk[..i]);
                key.extend_from_slice(gk);
                key.extend_from_slice(&fk[i + 1..]);
                let s = sign(g.shifted * before) * &ef * decalage_sign(a, gk) * decalage_sign(a, &key) * c;
                out.add_value(key, &s, fv);
            }
            before += shifted_deg(a, slot);
        }
    }
    out
}

/// `[F,G] = F∘G − (−1)^{‖F‖‖G‖} G∘F`.
pub fn bracket(a: &AlgebraPresentation, f: &Cochain, g: &Cochain) -> Cochain {
    let fg = circle(a, f, g);
    let gf = circle(a, g, f);
    fg.combine(&-sign(f.shifted * g.shifted), &gf)
}

/// `m₂{F,G}`: `(F⌣G)(x) = (−1)^{‖G‖(‖x₁‖+…+‖x_n‖)} m₂(F(x′), G(x″))`.
pub fn cup(a: &AlgebraPresentation, f: &Cochain, g: &Cochain) -> Cochain {
    let mut out = Cochain::zero(f.shifted + g.shifted + 1);
    for (fk, fv) in &f.values {
        let before: i64 = fk.iter().map(|&i| shifted_deg(a, i)).sum();
        let ef = decalage_sign(a, fk);
        for (gk, gv) in &g.values {
            let mut key = fk.clone();
            key.extend_from_slice(gk);
            let eg = decalage_sign(a, gk);
            let mut val = SparseVec::new();
            for (i, ci) in fv {
                for (j, cj) in gv {
                    // m₂(s e_i, s e_j) = (−1)^{|e_i|−1} s(e_i e_j)
                    let c = sign(shifted_deg(a, *i)) * ci * cj;
                    val = axpy(&val, &c, a.mul_basis(*i, *j));
                }
            }
            let s = sign(g.shifted * before) * &ef * eg * decalage_sign(a, &key);
            out.add_value(key, &s, &val);
        }
    }
    out
}

/// `m = m₀ + m₁ + m₂` stored unshifted: `B`, `d` and the product, on all
/// arguments including the unit.
pub fn structure_cochain(a: &AlgebraPresentation) -> Cochain {
    let mut m = Cochain::zero(1);
    if a.is_curved() {
        m.values.insert(Vec::new(), a.curvature().clone());
    }
    for i in 0..a.dim() {
        if !a.d_basis(i).is_empty() {
            m.values.insert(vec![i], a.d_basis(i).clone());
        }
        for j in 0..a.dim() {
            if !a.mul_basis(i, j).is_empty() {
                m.values.insert(vec![i, j], a.mul_basis(i, j).clone());
            }
        }
    }
    m
}

/// The product alone, `m₂`.
pub fn product_cochain(a: &AlgebraPresentation) -> Cochain {
    let mut m = Cochain::zero(1);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if !a.mul_basis(i, j).is_empty() {
                m.values.insert(vec![i, j], a.mul_basis(i, j).clone());
            }
        }
    }
    m
}

/// `D F = [m, F]`.
pub fn differential(a: &AlgebraPresentation, f: &Cochain) -> Cochain {
    bracket(a, &structure_cochain(a), f)
}

/// The bar-dual differential of a normalized cochain, repackaged as a
/// cochain keyed by algebra indices.
pub fn bar_differential(model: &FiniteModel, f: &Cochain) -> Cochain {
    let mut terms = Vec::new();
    for (k, v) in &f.values {
        let u: Vec<usize> = k.iter().map(|i| model.input_of(*i).expect("normalized cochain")).collect();
        for (b, c) in v {
            for (w, m, c2) in delta_elementary(model, &u, *b) {
                terms.push((w, m, c * c2));
            }
        }
    }
    let mut out = Cochain::zero(f.shifted + 1);
    for (w, m, c) in normalize_terms(terms) {
        let key: Vec<usize> = w.iter().map(|v| model.input_algebra_index(*v)).collect();
        out.add_value(key, &c, &vec![(m, Q::one())]);
    }
    out
}

/// Multiplies the arity-`n` part by `(−1)^{n(n+1)/2}`; conjugating the
/// bar-dual differential by this involution gives `[m, −]`.
pub fn arity_twist(f: &Cochain) -> Cochain {
    let mut out = f.clone();
    for (k, v) in out.values.iter_mut() {
        let n = k.len() as i64;
        if (n * (n + 1) / 2) % 2 == 1 {
            *v = scale(v, &-Q::one());
        }
    }
    out
}

/// A random normalized cochain of the given arity, homogeneous of shifted
/// degree `shifted`.
pub fn random_cochain(a: &AlgebraPresentation, rng: &mut ChaCha8Rng, arity: usize, shifted: i64, terms: usize) -> Cochain {
    let inputs = a.reduced_indices();
    let g = a.grading();
    let mut c = Cochain::zero(shifted);
    if inputs.is_empty() && arity > 0 {
        return c;
    }
    for _ in 0..terms * 4 {
        if c.values.len() >= terms {
            break;
        }
        let key: Vec<usize> = (0..arity).map(|_| inputs[rng.gen_range(0..inputs.len())]).collect();
        let need: i64 = shifted + 1 + key.iter().map(|&i| shifted_deg(a, i)).sum::<i64>();
        let outs: Vec<usize> = (0..a.dim()).filter(|&b| g.eq(a.degree(b), need)).collect();
        if outs.is_empty() {
            continue;
        }
        let b = outs[rng.gen_range(0..outs.len())];
        let coeff = q(rng.gen_range(1..4) * if rng.gen_bool(0.5) { 1 } else { -1 });
        c.add_value(key, &coeff, &vec![(b, Q::one())]);
    }
    c
}

/// Shifted degrees that admit some normalized cochain of this arity.
pub fn available_degrees(a: &AlgebraPresentation, arity: usize) -> Vec<i64> {
    let inputs = a.reduced_indices();
    let mut sums: Vec<i64> = vec![0];
    for _ in 0..arity {
        let mut next: Vec<i64> = sums
            .iter()
            .flat_map(|s| inputs.iter().map(move |&i| s + shifted_deg(a, i)))
            .collect();
        next.sort_unstable();
        next.dedup();
        sums = next;
    }
    let g = a.grading();
    let mut out: Vec<i64> = sums
        .iter()
        .flat_map(|s| (0..a.dim()).map(move |b| g.reduce(shifted_deg(a, b) - s)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GerstenhaberProperty {
    Antisymmetry,
    Jacobi,
    PreLie,
    Derivation,
    StructureSquare,
    Normalized,
    MatchesBarDifferential,
}

#[derive(Debug, Clone, Serialize)]
pub struct GerstenhaberViolation {
    pub property: GerstenhaberProperty,
    pub witness: String,
    pub deviation: String,
}

/// Draws `pairs` random triples of cochains (arity ≤ 2) and checks every
/// identity on them, together with `[m,m] = 0` and the agreement of `[m,−]`
/// with the bar-dual differential.
pub fn check_gerstenhaber(a: &AlgebraPresentation, pairs: usize, seed: u64) -> Vec<GerstenhaberViolation> {
    let mut out = Vec::new();
    let m = structure_cochain(a);
    let mm = bracket(a, &m, &m);
    if !mm.is_zero() {
        out.push(GerstenhaberViolation {
            property: GerstenhaberProperty::StructureSquare,
            witness: "m".into(),
            deviation: mm.render(a),
        });
    }
    let model = FiniteModel::new(a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Cochain {
        let arity = rng.gen_range(0..3usize);
        let degs = available_degrees(a, arity);
        let s = degs[rng.gen_range(0..degs.len())];
        random_cochain(a, rng, arity, s, 3)
    };
    let triples: Vec<(Cochain, Cochain, Cochain)> = (0..pairs).map(|_| (draw(&mut rng), draw(&mut rng), draw(&mut rng))).collect();
    let found = crate::par::map_collect(triples.as_slice(), |(f, g, h)| {
        let mut bad = Vec::new();
        let (sf, sg, sh) = (f.shifted, g.shifted, h.shifted);
        let wit = || format!("F = {} | G = {} | H = {}", f.render(a), g.render(a), h.render(a));
        let mut report = |p: GerstenhaberProperty, dev: Cochain| {
            if !dev.is_zero() {
                bad.push(GerstenhaberViolation {
                    property: p,
                    witness: wit(),
                    deviation: dev.render(a),
                });
            }
        };
        let fg = bracket(a, f, g);
        let gf = bracket(a, g, f);
        report(GerstenhaberProperty::Antisymmetry, fg.combine(&sign(sf * sg), &gf));

        let gh = bracket(a, g, h);
        let hf = bracket(a, h, f);
        let jac = bracket(a, f, &gh)
            .scaled(&sign(sf * sh))
            .combine(&sign(sg * sf), &bracket(a, g, &hf))
            .combine(&sign(sh * sg), &bracket(a, h, &fg));
        report(GerstenhaberProperty::Jacobi, jac);

        let left = circle(a, &circle(a, f, g), h).combine(&-Q::one(), &circle(a, f, &circle(a, g, h)));
        let right = circle(a, &circle(a, f, h), g).combine(&-Q::one(), &circle(a, f, &circle(a, h, g)));
        report(GerstenhaberProperty::PreLie, left.combine(&-sign(sg * sh), &right));

        let dfg = differential(a, &fg);
        let rhs = bracket(a, &differential(a, f), g).combine(&sign(sf), &bracket(a, f, &differential(a, g)));
        report(GerstenhaberProperty::Derivation, dfg.combine(&-Q::one(), &rhs));

        let df = differential(a, f);
        let unnormalized = if df.is_normalized(a) { Cochain::zero(df.shifted) } else { df.clone() };
        report(GerstenhaberProperty::Normalized, unnormalized);
        let twisted = arity_twist(&bar_differential(&model, &arity_twist(f)));
        report(GerstenhaberProperty::MatchesBarDifferential, df.combine(&-Q::one(), &twisted));
        bad
    });
    out.extend(found.into_iter().flatten());
    out
}
