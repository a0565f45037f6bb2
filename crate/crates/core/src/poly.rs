//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_q, parse_q, q, Q};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("cannot parse polynomial term {0:?}")]
    BadTerm(String),
    #[error("exponent vector has {got} entries, expected {expected}")]
    Arity { got: usize, expected: usize },
}

/// One `coefficient * x^exponents` term in serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub exponents: Vec<u32>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Q::one())
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Q)>) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::Arity {
                    got: e.len(),
                    expected: nvars,
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&(-Q::one())))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Q::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum())
            .max()
    }

    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * q(e[i] as i64));
            }
        }
        out
    }

    /// Substitutes polynomial `images[i]` (in `target_nvars` variables) for
    /// variable `i`.
    pub fn substitute(&self, images: &[Poly], target_nvars: usize) -> Poly {
        let mut out = Self::zero(target_nvars);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target_nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact division by `x_i - x_j` (the caller guarantees divisibility);
    /// returns `None` when a non-zero remainder is left.
    pub fn divide_by_difference(&self, i: usize, j: usize) -> Option<Poly> {
        // long division with respect to x_i, treating the rest as coefficients
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        let xi = Poly::var(self.nvars, i);
        let xj = Poly::var(self.nvars, j);
        let divisor = xi.sub(&xj);
        loop {
            let lead = rem
                .terms
                .iter()
                .filter(|(e, _)| e[i] > 0)
                .max_by_key(|(e, _)| e[i])
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((mut e, c)) = lead else { break };
            e[i] -= 1;
            let t = Poly::monomial(e, c);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(&divisor));
        }
        rem.is_zero().then_some(quot)
    }

    pub fn to_docs(&self) -> Vec<TermDoc> {
        self.terms
            .iter()
            .map(|(e, c)| TermDoc {
                coeff: format_q(c),
                exponents: e.clone(),
            })
            .collect()
    }

    pub fn from_docs(nvars: usize, docs: &[TermDoc]) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for d in docs {
            if d.exponents.len() != nvars {
                return Err(PolyError::Arity {
                    got: d.exponents.len(),
                    expected: nvars,
                });
            }
            let c = parse_q(&d.coeff).map_err(|_| PolyError::BadTerm(d.coeff.clone()))?;
            p.add_term(d.exponents.clone(), c);
        }
        Ok(p)
    }

    /// Parses expressions such as `"x^2 + 3/2*x*y - y^3"` over the named
    /// variables.
    pub fn parse(s: &str, names: &[String]) -> Result<Self, PolyError> {
        let n = names.len();
        let mut p = Poly::zero(n);
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Ok(p);
        }
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (k, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && k > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            let mut coeff = Q::one();
            let mut e = vec![0u32; n];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(PolyError::BadTerm(term.clone()));
                }
                let first = factor.chars().next().unwrap_or('0');
                if first.is_ascii_digit() {
                    coeff *= parse_q(factor).map_err(|_| PolyError::BadTerm(term.clone()))?;
                    continue;
                }
                let (name, pw) = match factor.split_once('^') {
                    Some((a, b)) => (a, b.parse::<u32>().map_err(|_| PolyError::BadTerm(term.clone()))?),
                    None => (factor, 1),
                };
                let i = names
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                e[i] += pw;
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(e, coeff);
        }
        Ok(p)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mono = monomial_label(e, names);
            if mono == "1" {
                parts.push(format_q(c));
            } else if c.is_one() {
                parts.push(mono);
            } else if *c == -Q::one() {
                parts.push(format!("-{mono}"));
            } else {
                parts.push(format!("{}*{}", format_q(c), mono));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// `"1"`, `"x"`, `"x^2*y"`, ...
pub fn monomial_label(e: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// All exponent vectors with `Σ w_i e_i <= max`, ordered by weighted degree
/// then reverse-lexicographically.
pub fn monomials_up_to(weights: &[u32], max: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    fn rec(weights: &[u32], i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == weights.len() {
            out.push(cur.clone());
            return;
        }
        let mut k = 0;
        while k * weights[i] <= left {
            cur[i] = k;
            rec(weights, i + 1, left - k * weights[i], cur, out);
            k += 1;
        }
        cur[i] = 0;
    }
    let mut cur = vec![0; weights.len()];
    rec(weights, 0, max, &mut cur, &mut out);
    let wdeg = |e: &Exponents| -> u32 { e.iter().zip(weights).map(|(a, w)| a * w).sum() };
    out.sort_by(|a, b| wdeg(a).cmp(&wdeg(b)).then_with(|| b.cmp(a)));
    out
}

/// Exponent vectors of weighted degree exactly `d`.
pub fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Exponents> {
    monomials_up_to(weights, d)
        .into_iter()
        .filter(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum::<u32>() == d)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parse_render_roundtrip() {
        let n = names(&["x", "y"]);
        let p = Poly::parse("x^2 + 3/2*x*y - y^3", &n).unwrap();
        assert_eq!(p.coeff(&[2, 0]), q(1));
        assert_eq!(p.coeff(&[1, 1]), crate::rational::q_frac(3, 2));
        assert_eq!(p.coeff(&[0, 3]), q(-1));
        let again = Poly::parse(&p.render(&n), &n).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn weighted_enumeration() {
        // wt(x)=2, wt(y)=3, degree <= 6: 1, x, y, x^2, xy, x^3, y^2
        assert_eq!(monomials_up_to(&[2, 3], 6).len(), 7);
        assert_eq!(monomials_up_to(&[1, 1], 2).len(), 6);
    }

    #[test]
    fn division_by_difference() {
        // (y^2 - x^2)/(y - x) = x + y  over variables (x, y)
        let n = names(&["x", "y"]);
        let f = Poly::parse("y^2 - x^2", &n).unwrap();
        let qt = f.divide_by_difference(1, 0).unwrap();
        assert_eq!(qt, Poly::parse("x + y", &n).unwrap());
        assert!(Poly::parse("x", &n).unwrap().divide_by_difference(1, 0).is_none());
    }
}
