//! `Hom_{P^e}(K, M)` for the (twisted) Koszul resolution `K` and
//! `M = P / (weight > D)`: polyvector fields `eᴵ* ⊗ m`. The differential is
//! read off the generator maps by restricting their coefficients to the
//! diagonal, which kills `d` and turns the twist into contraction with `df`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::cdg::{build_mf_algebra, AlgebraPresentation};
use crate::graded::{Grading, TruncationParams};
use crate::hochschild::{compute_hh, render_pairs, CochainKind, CohomologyReport, HhOptions, LevelDims};
use crate::linalg::{self, Echelon};
use crate::poly::{monomial_label, monomials_up_to, Exponents, Poly};
use crate::rational::{collect_sparse, format_q, sign, SparseVec, Q};

use super::{diagonal, family_variables, twist_koszul, word_label, KoszulError, KoszulResolution, Word};

/// `coefficient · ∂_{i₁} ∧ .. ∧ ∂_{i_k}` with `i₁ < .. < i_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyvectorField {
    pub coefficient: Poly,
    pub word: Vec<usize>,
}

impl PolyvectorField {
    pub fn new(coefficient: Poly, word: Vec<usize>) -> Result<Self, KoszulError> {
        if word.windows(2).any(|w| w[0] >= w[1]) || word.iter().any(|&i| i >= coefficient.nvars()) {
            return Err(KoszulError::NotPolynomial("a strictly increasing word of variable indices".into()));
        }
        Ok(Self { coefficient, word })
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn mask(&self) -> Word {
        self.word.iter().fold(0, |m, i| m | (1 << i))
    }
}

pub struct PolyvectorComplex {
    names: Vec<String>,
    weights: Vec<u32>,
    grading: Grading,
    basis: Vec<(Word, Exponents)>,
    index: HashMap<(Word, Exponents), usize>,
    degrees: Vec<i64>,
    diff: Vec<SparseVec>,
    threshold: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyvectorCohomology {
    pub dimensions: BTreeMap<i64, usize>,
    pub raw_dimensions: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<String>>,
}

/// Applies `Hom(−, M)` to the resolution. With `exclude_artifacts`, classes
/// carried by coefficients of weight above `D − deg f` are discarded.
pub fn hom_complex(res: &KoszulResolution, grading: Grading, exclude_artifacts: bool) -> PolyvectorComplex {
    let n = res.rank();
    let weights = res.weights().to_vec();
    let outputs = monomials_up_to(&weights, res.order());
    let mut words: Vec<Word> = (0..(1u32 << n)).collect();
    words.sort_by_key(|w| (w.count_ones(), w.reverse_bits()));
    let mut basis = Vec::new();
    for &w in &words {
        for m in &outputs {
            basis.push((w, m.clone()));
        }
    }
    let index: HashMap<(Word, Exponents), usize> = basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let vdeg = res.variable_degrees();
    let degree_of = |w: Word, m: &Exponents| -> i64 {
        let wd: i64 = (0..n).filter(|i| w & (1 << i) != 0).map(|i| 1 - vdeg[i]).sum();
        grading.reduce(wd + m.iter().zip(vdeg).map(|(k, d)| *k as i64 * d).sum::<i64>())
    };
    let degrees: Vec<i64> = basis.iter().map(|(w, m)| degree_of(*w, m)).collect();
    let wt = |e: &Exponents| -> u32 { e.iter().zip(&weights).map(|(a, b)| a * b).sum() };

    // δφ = −(−1)^{|φ|} φ ∘ (d + k); for φ = eᴵ* ⊗ m and a generator eᴶ whose
    // image contains eᴵ ⊗ c, δφ picks up eᴶ* ⊗ c(x, x) m.
    let mut acc: Vec<Vec<(usize, Q)>> = vec![Vec::new(); basis.len()];
    for &j in &words {
        let images = res.d_generator(j).into_iter().chain(res.twist_generator(j));
        for (i, c) in images {
            let c = diagonal(&c);
            if c.is_zero() {
                continue;
            }
            for m in &outputs {
                let src = index[&(i, m.clone())];
                let s = -sign(degrees[src]);
                for (t, coeff) in c.terms() {
                    let e: Exponents = m.iter().zip(t).map(|(a, b)| a + b).collect();
                    if wt(&e) <= res.order() {
                        acc[src].push((index[&(j, e)], &s * coeff));
                    }
                }
            }
        }
    }
    let diff = acc.into_iter().map(collect_sparse).collect();
    let f = res.potential();
    let threshold = (exclude_artifacts && !f.is_zero())
        .then(|| res.order().saturating_sub(f.weighted_degree(&weights).unwrap_or(0)));
    PolyvectorComplex {
        names: res.names().to_vec(),
        weights,
        grading,
        basis,
        index,
        degrees,
        diff,
        threshold,
    }
}

impl PolyvectorComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn artifact_threshold(&self) -> Option<u32> {
        self.threshold
    }

    pub fn label(&self, i: usize) -> String {
        let (w, m) = &self.basis[i];
        let coeff = monomial_label(m, &self.names);
        match *w {
            0 => coeff,
            _ => format!("{coeff}*{}", word_label(*w, "∂", &self.names, "∧")),
        }
    }

    pub fn position(&self, word: Word, m: &Exponents) -> Option<usize> {
        self.index.get(&(word, m.clone())).copied()
    }

    /// Coordinates of a polyvector field; `None` if a coefficient leaves
    /// the truncation.
    pub fn coordinates(&self, v: &PolyvectorField) -> Option<SparseVec> {
        let w = v.mask();
        let mut out = Vec::new();
        for (e, c) in v.coefficient.terms() {
            out.push((self.position(w, e)?, c.clone()));
        }
        Some(collect_sparse(out))
    }

    pub fn differential(&self, v: &SparseVec) -> SparseVec {
        linalg::apply(&self.diff, v)
    }

    pub fn render(&self, v: &SparseVec) -> String {
        let pairs: Vec<(String, String)> = v.iter().map(|(i, c)| (self.label(*i), format_q(c))).collect();
        render_pairs(&pairs)
    }

    fn is_high(&self, i: usize) -> bool {
        let m = &self.basis[i].1;
        let w: u32 = m.iter().zip(&self.weights).map(|(a, b)| a * b).sum();
        self.threshold.map(|t| w > t).unwrap_or(false)
    }

    /// Per degree: the kept part is `dim Z − dim(Z ∩ V + B)` with `V` the
    /// span of high coefficients, computed from ranks as in the bar window.
    pub fn cohomology(&self, with_reps: bool) -> PolyvectorCohomology {
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            by_degree.entry(*d).or_default().push(i);
        }
        let low_rows = |c: &SparseVec| -> SparseVec { c.iter().filter(|(i, _)| !self.is_high(*i)).cloned().collect() };
        let mut out = PolyvectorCohomology::default();
        for (&p, members) in &by_degree {
            let cols: Vec<SparseVec> = members.iter().map(|&i| self.diff[i].clone()).collect();
            let incoming: Vec<SparseVec> = self
                .diff
                .iter()
                .filter(|c| c.first().map(|(i, _)| self.degrees[*i] == p).unwrap_or(false))
                .cloned()
                .collect();
            let full = linalg::rank(&cols);
            let in_full = linalg::rank(&incoming);
            let raw = members.len() - full - in_full;
            let kept = match self.threshold {
                Some(_) => {
                    let high: Vec<SparseVec> = members
                        .iter()
                        .filter(|&&i| self.is_high(i))
                        .map(|&i| self.diff[i].clone())
                        .collect();
                    let low = members.len() - high.len();
                    let in_low: Vec<SparseVec> = incoming.iter().map(low_rows).collect();
                    low + linalg::rank(&high) - full - linalg::rank(&in_low)
                }
                None => raw,
            };
            out.dimensions.insert(p, kept);
            out.raw_dimensions.insert(p, raw);
            if with_reps {
                out.representatives.insert(p, self.representatives(members, &incoming));
            }
        }
        out
    }

    fn representatives(&self, members: &[usize], incoming: &[SparseVec]) -> Vec<String> {
        let cols: Vec<SparseVec> = members.iter().map(|&i| self.diff[i].clone()).collect();
        let mut ech = Echelon::new();
        for c in incoming {
            ech.insert(c.clone());
        }
        let high: Vec<usize> = members.iter().copied().filter(|&i| self.is_high(i)).collect();
        if !high.is_empty() {
            let restricted: Vec<SparseVec> = high.iter().map(|&i| self.diff[i].clone()).collect();
            for z in linalg::kernel_basis(&restricted) {
                ech.insert(collect_sparse(z.into_iter().map(|(j, c)| (high[j], c))));
            }
        }
        let mut reps = Vec::new();
        for z in linalg::kernel_basis(&cols) {
            let v = collect_sparse(z.into_iter().map(|(j, c)| (members[j], c)));
            if ech.insert(v.clone()) {
                reps.push(self.render(&v));
            }
        }
        reps
    }
}

/// One level of the Koszul pipeline for a polynomial family: dimensions in
/// the requested degrees, representatives if asked, and the artifact
/// threshold.
pub fn koszul_level(
    a: &AlgebraPresentation,
    t: &TruncationParams,
    degrees: &[i64],
    with_reps: bool,
) -> Result<(LevelDims, Vec<Vec<String>>, Option<u32>), KoszulError> {
    let (vars, family_order, f) = family_variables(a)?;
    let order = t.order.unwrap_or(family_order);
    if let Some(deg) = f.total_degree() {
        if deg > order {
            return Err(KoszulError::NotPolynomial(format!("an order of at least {deg}")));
        }
    }
    let g = a.grading();
    let res = twist_koszul(KoszulResolution::new(&vars, order, g)?, &f)?;
    let hom = hom_complex(&res, g, true);
    let coh = hom.cohomology(with_reps);
    let pick = |m: &BTreeMap<i64, usize>| -> Vec<usize> {
        degrees.iter().map(|k| m.get(&g.reduce(*k)).copied().unwrap_or(0)).collect()
    };
    let reps = if with_reps {
        degrees
            .iter()
            .map(|k| coh.representatives.get(&g.reduce(*k)).cloned().unwrap_or_default())
            .collect()
    } else {
        Vec::new()
    };
    let level = LevelDims {
        truncation: TruncationParams {
            order: Some(order),
            ..Default::default()
        },
        dimensions: pick(&coh.dimensions),
        raw_dimensions: pick(&coh.raw_dimensions),
    };
    Ok((level, reps, hom.artifact_threshold()))
}

/// `HH(K[x]/(weight > D), 0, f)` from the Koszul side at each order of the
/// schedule. A degree is stabilized when the last two orders agree.
pub fn mf_hochschild(
    f: &Poly,
    names: &[String],
    orders: &[u32],
    degrees: &[i64],
    representatives: bool,
) -> Result<CohomologyReport, KoszulError> {
    let top = *orders.iter().max().ok_or(KoszulError::EmptySchedule)?;
    let a = build_mf_algebra(f, names, top as i64).map_err(|e| KoszulError::NotPolynomial(e.to_string()))?;
    let schedule: Vec<TruncationParams> = orders
        .iter()
        .map(|d| TruncationParams {
            order: Some(*d),
            ..Default::default()
        })
        .collect();
    let opts = HhOptions {
        cochains: Some(CochainKind::Koszul),
        representatives,
    };
    compute_hh(&a, degrees, &schedule, &opts).map_err(|e| KoszulError::Hochschild(e.to_string()))
}

/// `dim K[x]/(∂₁f, .., ∂_nf)` by monomial enumeration, when every partial
/// derivative is a single term and the quotient is finite.
pub fn jacobian_dimension(f: &Poly) -> Option<usize> {
    let n = f.nvars();
    let mut gens: Vec<Exponents> = Vec::new();
    for i in 0..n {
        let d = f.derivative(i);
        let mut terms = d.terms();
        let (e, _) = terms.next()?;
        if terms.next().is_some() {
            return None;
        }
        gens.push(e.clone());
    }
    // a pure power of each variable bounds the enumeration
    let mut bound = vec![0u32; n];
    for (i, b) in bound.iter_mut().enumerate() {
        *b = gens
            .iter()
            .filter(|e| e.iter().enumerate().all(|(j, k)| j == i || *k == 0))
            .map(|e| e[i])
            .min()?;
    }
    let mut count = 0;
    let mut cur = vec![0u32; n];
    loop {
        if !gens.iter().any(|g| g.iter().zip(&cur).all(|(a, b)| a <= b)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            cur[i] += 1;
            if cur[i] < bound[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

impl PolyvectorComplex {
    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn basis(&self) -> &[(Word, Exponents)] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn column(&self, i: usize) -> &SparseVec {
        &self.diff[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{build_mf_algebra, build_truncated_polynomial, standard_variables};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn mf_dims(f: &str, n: &[&str], order: u32) -> (Vec<usize>, Vec<usize>) {
        let p = Poly::parse(f, &names(n)).unwrap();
        let a = build_mf_algebra(&p, &names(n), order as i64).unwrap();
        let (lvl, _, _) = koszul_level(&a, &TruncationParams::default(), &[0, 1], false).unwrap();
        (lvl.dimensions, lvl.raw_dimensions)
    }

    #[test]
    fn matrix_factorization_reports_stabilize() {
        let f = Poly::parse("x^3", &names(&["x"])).unwrap();
        let r = mf_hochschild(&f, &names(&["x"]), &[5, 7], &[0, 1], false).unwrap();
        assert_eq!(r.cochains, CochainKind::Koszul);
        assert_eq!(r.dims(), vec![2, 0]);
        assert!(r.all_stabilized());
    }

    #[test]
    fn bar_and_koszul_agree_on_small_potentials() {
        let cases: [(&str, &[&str], u32); 5] = [
            ("x^2", &["x"], 4),
            ("x^3", &["x"], 5),
            ("x^4", &["x"], 6),
            ("x^2 + x^3", &["x"], 6),
            ("x*y", &["x", "y"], 4),
        ];
        for (f, n, d) in cases {
            let p = Poly::parse(f, &names(n)).unwrap();
            let a = build_mf_algebra(&p, &names(n), d as i64).unwrap();
            let sched = vec![TruncationParams::default()];
            let bar = compute_hh(&a, &[0, 1], &sched, &HhOptions::default()).unwrap();
            let kos = compute_hh(
                &a,
                &[0, 1],
                &sched,
                &HhOptions {
                    cochains: Some(CochainKind::Koszul),
                    representatives: false,
                },
            )
            .unwrap();
            assert_eq!(bar.dims(), kos.dims(), "{f} at D = {d}");
            assert_eq!(bar.levels[0].raw_dimensions, kos.levels[0].raw_dimensions, "{f} raw at D = {d}");
        }
    }

    #[test]
    fn jacobian_rings_by_enumeration() {
        let j = |f: &str, n: &[&str]| jacobian_dimension(&Poly::parse(f, &names(n)).unwrap());
        assert_eq!(j("x^2", &["x"]), Some(1));
        assert_eq!(j("x^3", &["x"]), Some(2));
        assert_eq!(j("x^4", &["x"]), Some(3));
        assert_eq!(j("x^2 + y^3", &["x", "y"]), Some(2));
        assert_eq!(j("x^3 + y^3", &["x", "y"]), Some(4));
        assert_eq!(j("x*y", &["x", "y"]), Some(1));
        assert_eq!(j("x^2*y", &["x", "y"]), None);
        assert_eq!(j("x^2 + x^3", &["x"]), None);
    }

    #[test]
    fn milnor_numbers_from_the_koszul_side() {
        assert_eq!(mf_dims("x^2", &["x"], 4).0, vec![1, 0]);
        assert_eq!(mf_dims("x^3", &["x"], 5).0, vec![2, 0]);
        assert_eq!(mf_dims("x^3", &["x"], 8).0, vec![2, 0]);
        assert_eq!(mf_dims("x^2 + y^3", &["x", "y"], 5).0, vec![2, 0]);
        assert_eq!(mf_dims("x^3 + y^3", &["x", "y"], 7).0, vec![4, 0]);
        assert_eq!(mf_dims("x*y", &["x", "y"], 4).0, vec![1, 0]);
    }

    #[test]
    fn contraction_with_df_on_vector_fields() {
        let p = Poly::parse("x^3", &names(&["x"])).unwrap();
        let a = build_mf_algebra(&p, &names(&["x"]), 5).unwrap();
        let (vars, order, f) = family_variables(&a).unwrap();
        let res = twist_koszul(KoszulResolution::new(&vars, order, Grading::ModTwo).unwrap(), &f).unwrap();
        let hom = hom_complex(&res, Grading::ModTwo, true);
        let v = PolyvectorField::new(Poly::var(1, 0), vec![0]).unwrap();
        let img = hom.differential(&hom.coordinates(&v).unwrap());
        // x·∂x ↦ ±3x³
        assert_eq!(hom.render(&img), "3*x^3");
    }

    #[test]
    fn zero_potential_gives_all_polyvectors() {
        let a = build_truncated_polynomial(&standard_variables(2), 3).unwrap();
        let (lvl, _, thr) = koszul_level(&a, &TruncationParams::default(), &[0, 1, 2, 3], false).unwrap();
        assert_eq!(thr, None);
        assert_eq!(lvl.dimensions, vec![10, 20, 10, 0]);
    }

    #[test]
    fn representatives_of_the_milnor_ring() {
        let p = Poly::parse("x^3", &names(&["x"])).unwrap();
        let a = build_mf_algebra(&p, &names(&["x"]), 6).unwrap();
        let (_, reps, _) = koszul_level(&a, &TruncationParams::default(), &[0], true).unwrap();
        assert_eq!(reps[0], vec!["1".to_string(), "x".to_string()]);
    }
}
