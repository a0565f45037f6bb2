//! Cochains of a polynomial algebra in a weight window.
//!
//! The window splits into blocks: cochains are keyed by arity `n` and the
//! multidegree `μ = exp(output) − Σ exp(inputs)`, keys are joined along the
//! steps of the differential, and inside a joined component a level
//! function that the differential raises by a fixed step separates the
//! cochain groups. Blocks are independent and processed in parallel.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::cdg::AlgebraPresentation;
use crate::graded::{CochainComplex, GradedSpace, Grading, LinearMap};
use crate::linalg::{self, Echelon};
use crate::par;
use crate::poly::Poly;
use crate::rational::{SparseVec, Q};

use super::model::{delta_elementary, normalize_terms, CochainModel, CochainTerm, PolyModel};
use super::{render_terms, HhError, MAX_COCHAINS};

#[derive(Debug, Clone)]
pub struct WindowOptions {
    /// Discard classes represented entirely by outputs of weight above
    /// `D − deg f`.
    pub exclude_artifacts: bool,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self { exclude_artifacts: true }
    }
}

/// The window model of a polynomial or matrix factorization family.
pub fn model_for(a: &AlgebraPresentation, order: u32, floor: i64) -> Result<PolyModel, HhError> {
    let fam = a
        .family()
        .ok_or_else(|| HhError::NotPolynomial("family metadata with variables".into()))?;
    if a.has_differential() {
        return Err(HhError::NotPolynomial("a zero differential".into()));
    }
    if fam.variables.iter().any(|v| v.degree.rem_euclid(2) != 0) {
        return Err(HhError::NotPolynomial("even variables".into()));
    }
    let names = fam.names();
    let potential = fam.potential.clone().unwrap_or_else(|| Poly::zero(names.len()));
    Ok(PolyModel::new(
        names,
        fam.weights(),
        fam.variables.iter().map(|v| v.degree).collect(),
        a.grading(),
        potential,
        order,
        floor,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Levels {
    /// `δ` raises the level by this step.
    Step(i64),
    /// Only the parity of the arity is preserved.
    Cyclic,
}

struct Block {
    comp: usize,
    level: i64,
    degree: i64,
    members: Vec<(Vec<usize>, usize)>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

pub struct WindowComplex {
    model: Arc<PolyModel>,
    levels: Levels,
    blocks: Vec<Block>,
    block_at: HashMap<(usize, i64), usize>,
    threshold: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WindowCohomology {
    pub dimensions: BTreeMap<i64, usize>,
    pub raw_dimensions: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<String>>,
}

struct BlockRanks {
    full: usize,
    on_high: usize,
    onto_low: usize,
}

/// Rational `λ` with `λ·e = 2` for every exponent `e` of `f`, scaled to
/// integers; returns `(λ·den, den)`.
fn quasi_homogeneous_weights(f: &Poly, nvars: usize) -> Option<(Vec<i64>, i64)> {
    let mut rows: Vec<Vec<Q>> = f
        .terms()
        .map(|(e, _)| {
            let mut r: Vec<Q> = e.iter().map(|x| Q::from_integer((*x as i64).into())).collect();
            r.push(Q::from_integer(2.into()));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let m = rows[i][c].clone();
                for j in 0..=nvars {
                    let v = &rows[r][j] * &m;
                    rows[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut lam = vec![Q::zero(); nvars];
    for (i, &c) in pivots.iter().enumerate() {
        lam[c] = rows[i][nvars].clone();
    }
    let den = lam
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let den: i64 = i64::try_from(den).ok()?;
    let scaled = lam
        .iter()
        .map(|x| i64::try_from((x * Q::from_integer(den.into())).to_integer()).ok())
        .collect::<Option<Vec<i64>>>()?;
    Some((scaled, den))
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn enumerate_for_output(model: &PolyModel, b: usize) -> Vec<(Vec<usize>, usize)> {
    let budget = model.weight(model.output_exponents(b)) as i64 - model.floor;
    let mut out = Vec::new();
    if budget < 0 {
        return out;
    }
    let weights: Vec<i64> = (0..model.input_count())
        .map(|v| model.weight(model.input_exponents(v)) as i64)
        .collect();
    fn rec(weights: &[i64], left: i64, cur: &mut Vec<usize>, b: usize, out: &mut Vec<(Vec<usize>, usize)>) {
        out.push((cur.clone(), b));
        for (v, w) in weights.iter().enumerate() {
            if *w > left {
                break;
            }
            cur.push(v);
            rec(weights, left - w, cur, b, out);
            cur.pop();
        }
    }
    rec(&weights, budget, &mut Vec::new(), b, &mut out);
    out
}

impl WindowComplex {
    pub fn new(model: PolyModel, opts: &WindowOptions) -> Result<Self, HhError> {
        let model = Arc::new(model);
        let outputs: Vec<usize> = (0..model.output_count()).collect();
        let per_output = par::map_collect(outputs.as_slice(), |&b| enumerate_for_output(&model, b));
        let total: usize = per_output.iter().map(|v| v.len()).sum();
        if total > MAX_COCHAINS {
            return Err(HhError::TooLarge(total));
        }
        let cochains: Vec<(Vec<usize>, usize)> = per_output.into_iter().flatten().collect();

        let nv = model.nvars();
        let key_of = |u: &[usize], b: usize| -> (usize, Vec<i64>) {
            let mut mu: Vec<i64> = model.output_exponents(b).iter().map(|x| *x as i64).collect();
            for &v in u {
                for (m, e) in mu.iter_mut().zip(model.input_exponents(v)) {
                    *m -= *e as i64;
                }
            }
            (u.len(), mu)
        };
        let mut key_id: HashMap<(usize, Vec<i64>), usize> = HashMap::new();
        let mut keys: Vec<(usize, Vec<i64>)> = Vec::new();
        let mut cochain_key = Vec::with_capacity(cochains.len());
        for (u, b) in &cochains {
            let k = key_of(u, *b);
            let id = *key_id.entry(k.clone()).or_insert_with(|| {
                keys.push(k);
                keys.len() - 1
            });
            cochain_key.push(id);
        }
        let steps: Vec<Vec<i64>> = model
            .potential
            .terms()
            .map(|(e, _)| e.iter().map(|x| *x as i64).collect())
            .collect();
        let mut parent: Vec<usize> = (0..keys.len()).collect();
        for (i, (n, mu)) in keys.iter().enumerate() {
            let mut join = |other: &(usize, Vec<i64>)| {
                if let Some(&j) = key_id.get(other) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            };
            join(&(n + 1, mu.clone()));
            if *n > 0 {
                for s in &steps {
                    let m2: Vec<i64> = mu.iter().zip(s).map(|(a, b)| a + b).collect();
                    join(&(n - 1, m2));
                }
            }
        }

        let g = model.grading();
        let (levels, lam) = match g {
            Grading::Integer => (Levels::Step(1), None),
            Grading::ModTwo => match quasi_homogeneous_weights(&model.potential, nv) {
                Some((lam, den)) => (Levels::Step(den), Some(lam)),
                None => (Levels::Cyclic, None),
            },
        };
        let level_of = |u: &[usize], b: usize, key: &(usize, Vec<i64>)| -> i64 {
            match (levels, &lam) {
                (Levels::Step(den), Some(lam)) => den * key.0 as i64 + lam.iter().zip(&key.1).map(|(a, b)| a * b).sum::<i64>(),
                (Levels::Step(_), None) => key.0 as i64 + model.internal_degree(u, b),
                (Levels::Cyclic, _) => (key.0 % 2) as i64,
            }
        };

        let mut block_at: HashMap<(usize, i64), usize> = HashMap::new();
        let mut blocks: Vec<Block> = Vec::new();
        for (c, (u, b)) in cochains.into_iter().enumerate() {
            let kid = cochain_key[c];
            let comp = find(&mut parent, kid);
            let level = level_of(&u, b, &keys[kid]);
            let bi = *block_at.entry((comp, level)).or_insert_with(|| {
                blocks.push(Block {
                    comp,
                    level,
                    degree: g.reduce(u.len() as i64 + model.internal_degree(&u, b)),
                    members: Vec::new(),
                    index: HashMap::new(),
                });
                blocks.len() - 1
            });
            let blk = &mut blocks[bi];
            blk.index.insert((u.clone(), b), blk.members.len());
            blk.members.push((u, b));
        }

        let threshold = if opts.exclude_artifacts && !model.potential.is_zero() {
            let deg = model.potential.weighted_degree(&model.weights).unwrap_or(0);
            Some(model.order.saturating_sub(deg))
        } else {
            None
        };
        Ok(Self {
            model,
            levels,
            blocks,
            block_at,
            threshold,
        })
    }

    pub fn model(&self) -> &PolyModel {
        &self.model
    }

    pub fn artifact_threshold(&self) -> Option<u32> {
        self.threshold
    }

    pub fn cochain_count(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).max().unwrap_or(0)
    }

    fn next_block(&self, bi: usize) -> Option<usize> {
        let b = &self.blocks[bi];
        let lv = match self.levels {
            Levels::Step(s) => b.level + s,
            Levels::Cyclic => 1 - b.level,
        };
        self.block_at.get(&(b.comp, lv)).copied()
    }

    fn prev_block(&self, bi: usize) -> Option<usize> {
        let b = &self.blocks[bi];
        let lv = match self.levels {
            Levels::Step(s) => b.level - s,
            Levels::Cyclic => 1 - b.level,
        };
        self.block_at.get(&(b.comp, lv)).copied()
    }

    /// `δ` on the members of block `bi`, in coordinates of the next block.
    fn columns(&self, bi: usize) -> Vec<SparseVec> {
        let blk = &self.blocks[bi];
        let target = self.next_block(bi).map(|t| &self.blocks[t]);
        blk.members
            .iter()
            .map(|(u, b)| {
                let terms = normalize_terms(delta_elementary(self.model.as_ref(), u, *b));
                let Some(t) = target else {
                    debug_assert!(terms.is_empty());
                    return Vec::new();
                };
                let mut col: SparseVec = terms
                    .into_iter()
                    .map(|(w, m, c)| (t.index[&(w, m)], c))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect()
    }

    fn is_high(&self, b: usize) -> bool {
        match self.threshold {
            Some(t) => self.model.weight(self.model.output_exponents(b)) > t,
            None => false,
        }
    }

    /// Ranks of `δ` out of block `bi`: in full, on its high columns, and
    /// onto the low rows of the next block.
    fn block_ranks(&self, bi: usize) -> BlockRanks {
        let blk = &self.blocks[bi];
        let out = self.columns(bi);
        let full = linalg::rank(&out);
        let high_cols: Vec<SparseVec> = out
            .iter()
            .zip(&blk.members)
            .filter(|(_, m)| self.is_high(m.1))
            .map(|(c, _)| c.clone())
            .collect();
        let on_high = linalg::rank(&high_cols);
        let onto_low = match (self.threshold, self.next_block(bi)) {
            (Some(_), Some(nb)) => {
                let tgt = &self.blocks[nb];
                let low: Vec<SparseVec> = out
                    .iter()
                    .map(|c| c.iter().filter(|(i, _)| !self.is_high(tgt.members[*i].1)).cloned().collect())
                    .collect();
                linalg::rank(&low)
            }
            _ => full,
        };
        BlockRanks { full, on_high, onto_low }
    }

    /// Representatives of the kept classes of block `bi`.
    fn block_representatives(&self, bi: usize) -> Vec<String> {
        let blk = &self.blocks[bi];
        let out = self.columns(bi);
        let mut ech = Echelon::new();
        if let Some(p) = self.prev_block(bi) {
            for c in self.columns(p) {
                ech.insert(c);
            }
        }
        let high: Vec<usize> = (0..blk.members.len()).filter(|&i| self.is_high(blk.members[i].1)).collect();
        if !high.is_empty() {
            let restricted: Vec<SparseVec> = high.iter().map(|&i| out[i].clone()).collect();
            for z in linalg::kernel_basis(&restricted) {
                let mut v: SparseVec = z.into_iter().map(|(j, c)| (high[j], c)).collect();
                v.sort_by_key(|e| e.0);
                ech.insert(v);
            }
        }
        let mut reps = Vec::new();
        for z in linalg::kernel_basis(&out) {
            if ech.insert(z.clone()) {
                let terms: Vec<CochainTerm> = z
                    .into_iter()
                    .map(|(i, c)| (blk.members[i].0.clone(), blk.members[i].1, c))
                    .collect();
                reps.push(render_terms(self.model.as_ref(), &terms));
            }
        }
        reps
    }

    /// Cohomology per degree (reduced for `Z/2`), summed over blocks. With
    /// `V` the span of high-weight cochains (a subcomplex), the kept part of
    /// a block is `dim Z − dim(Z ∩ V + B) = #low − rank δ + rank δ|_V −
    /// rank(π_low ∘ δ_in)`.
    pub fn cohomology(&self, with_reps: bool) -> WindowCohomology {
        let ids: Vec<usize> = (0..self.blocks.len()).collect();
        let ranks = par::map_collect(ids.as_slice(), |&bi| self.block_ranks(bi));
        let mut res = WindowCohomology::default();
        for (bi, blk) in self.blocks.iter().enumerate() {
            let r = &ranks[bi];
            let (in_full, in_low) = match self.prev_block(bi) {
                Some(p) => (ranks[p].full, ranks[p].onto_low),
                None => (0, 0),
            };
            let dim = blk.members.len();
            let raw = dim - r.full - in_full;
            let kept = if self.threshold.is_some() {
                let low = blk.members.iter().filter(|m| !self.is_high(m.1)).count();
                low + r.on_high - r.full - in_low
            } else {
                raw
            };
            *res.raw_dimensions.entry(blk.degree).or_insert(0) += raw;
            *res.dimensions.entry(blk.degree).or_insert(0) += kept;
        }
        if with_reps {
            let reps = par::map_collect(ids.as_slice(), |&bi| self.block_representatives(bi));
            for (bi, r) in reps.into_iter().enumerate() {
                res.representatives.entry(self.blocks[bi].degree).or_default().extend(r);
            }
        }
        res
    }

    /// Applies `δ` to a combination of elementary cochains.
    pub fn delta(&self, terms: &[CochainTerm]) -> Vec<CochainTerm> {
        let mut out = Vec::new();
        for (w, m, c) in terms {
            for (w2, m2, c2) in delta_elementary(self.model.as_ref(), w, *m) {
                out.push((w2, m2, c * c2));
            }
        }
        normalize_terms(out)
    }

    fn locate(&self, terms: &[CochainTerm]) -> Option<(usize, SparseVec)> {
        let (w0, m0, _) = terms.first()?;
        let key = (w0.clone(), *m0);
        let bi = self.blocks.iter().position(|b| b.index.contains_key(&key))?;
        let blk = &self.blocks[bi];
        let mut v = SparseVec::new();
        for (w, m, c) in terms {
            v.push((*blk.index.get(&(w.clone(), *m))?, c.clone()));
        }
        v.sort_by_key(|e| e.0);
        Some((bi, v))
    }

    /// Number of the given cocycles that stay independent modulo
    /// coboundaries. Each vector must lie in a single block.
    pub fn independent_modulo_boundaries(&self, vectors: &[Vec<CochainTerm>]) -> Option<usize> {
        let mut by_block: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
        for v in vectors {
            if v.is_empty() {
                continue;
            }
            let (bi, coords) = self.locate(v)?;
            by_block.entry(bi).or_default().push(coords);
        }
        let mut total = 0;
        for (bi, vs) in by_block {
            let mut ech = Echelon::new();
            if let Some(p) = self.prev_block(bi) {
                for c in self.columns(p) {
                    ech.insert(c);
                }
            }
            total += vs.into_iter().filter(|v| ech.insert(v.clone())).count();
        }
        Some(total)
    }

    /// The whole window as a cochain complex (degrees reduced by the
    /// grading), for small instances.
    pub fn to_cochain_complex(&self) -> Result<CochainComplex, HhError> {
        let g = self.model.grading();
        let mut by_degree: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for (bi, blk) in self.blocks.iter().enumerate() {
            for i in 0..blk.members.len() {
                by_degree.entry(blk.degree).or_default().push((bi, i));
            }
        }
        let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
        let mut spaces = BTreeMap::new();
        for (k, list) in &by_degree {
            let basis = list
                .iter()
                .enumerate()
                .map(|(j, (bi, i))| {
                    pos.insert((*bi, *i), j);
                    let (u, b) = &self.blocks[*bi].members[*i];
                    (self.model.cochain_label(u, *b), *k)
                })
                .collect();
            spaces.insert(*k, Arc::new(GradedSpace::new(g, basis)?));
        }
        let mut cc = CochainComplex::new(g);
        for (k, list) in &by_degree {
            let next = g.reduce(k + 1);
            let Some(tgt) = spaces.get(&next) else { continue };
            let mut cols = vec![SparseVec::new(); list.len()];
            for (bi, blk) in self.blocks.iter().enumerate() {
                if blk.degree != *k {
                    continue;
                }
                let Some(nb) = self.next_block(bi) else { continue };
                for (i, col) in self.columns(bi).into_iter().enumerate() {
                    let mut c: SparseVec = col.into_iter().map(|(t, x)| (pos[&(nb, t)], x)).collect();
                    c.sort_by_key(|e| e.0);
                    cols[pos[&(bi, i)]] = c;
                }
            }
            cc.differentials
                .insert(*k, LinearMap::from_cols_unchecked(spaces[k].clone(), tgt.clone(), 1, cols));
        }
        cc.spaces = spaces;
        Ok(cc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdg::{build_mf_algebra, build_truncated_polynomial, standard_variables};
    use crate::graded::check_complex;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn mf(f: &str, vars: &[&str], order: u32, floor: i64) -> WindowComplex {
        let n = names(vars);
        let p = Poly::parse(f, &n).unwrap();
        let a = build_mf_algebra(&p, &n, order as i64).unwrap();
        WindowComplex::new(model_for(&a, order, floor).unwrap(), &WindowOptions::default()).unwrap()
    }

    #[test]
    fn quadratic_potential() {
        let w = mf("x^2", &["x"], 4, -1);
        let h = w.cohomology(false);
        assert_eq!(h.dimensions.get(&0), Some(&1));
        assert_eq!(h.dimensions.get(&1).copied().unwrap_or(0), 0);
    }

    #[test]
    fn cubic_potential() {
        let w = mf("x^3", &["x"], 5, -1);
        let h = w.cohomology(false);
        assert_eq!(h.dimensions.get(&0), Some(&2));
        assert_eq!(h.dimensions.get(&1).copied().unwrap_or(0), 0);
    }

    #[test]
    fn window_squares_to_zero() {
        let w = mf("x^3", &["x"], 4, -1);
        let cc = w.to_cochain_complex().unwrap();
        assert!(check_complex(&cc).unwrap().is_empty());
        let w = mf("x^2 + y^2", &["x", "y"], 3, -2);
        let cc = w.to_cochain_complex().unwrap();
        assert!(check_complex(&cc).unwrap().is_empty());
    }

    #[test]
    fn polynomial_line_matches_polyvectors() {
        let a = build_truncated_polynomial(&standard_variables(1), 6).unwrap();
        let w = WindowComplex::new(model_for(&a, 6, -1).unwrap(), &WindowOptions::default()).unwrap();
        let h = w.cohomology(false);
        assert_eq!(h.dimensions.get(&0), Some(&7));
        assert_eq!(h.dimensions.get(&1), Some(&7));
        assert_eq!(h.dimensions.get(&2).copied().unwrap_or(0), 0);
    }

    #[test]
    fn non_homogeneous_potential_uses_parity_blocks() {
        let w = mf("x^2 + x^3", &["x"], 5, -1);
        let h = w.cohomology(false);
        assert_eq!(h.dimensions.get(&0), Some(&1));
    }
}
