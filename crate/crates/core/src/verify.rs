//! The identity suites behind `hh verify`.
//!
//! Every check records how many cases it covered and, on failure, a few
//! localized witnesses. Mutations corrupt one sign on purpose so that the
//! suites can be shown to fail.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bar::{build_bar, check_homotopy, BarMutation, BarViolation};
use crate::cdg::{
    build_dual_numbers, build_exterior, build_exterior_with_degree, build_ground_field, build_mf_algebra,
    build_truncated_polynomial, enveloping, opposite, random_cdg, regular_bimodule, standard_variables,
    validate_cdg, validate_module, AlgebraPresentation, CdgViolation,
};
use crate::graded::{Grading, TruncationParams};
use crate::hochschild::gerstenhaber::check_gerstenhaber;
use crate::hochschild::{compute_hh, square_violations, CochainKind, FiniteModel, HhOptions};
use crate::koszul::{
    cofactor_deviation, curvature_cofactors, diagonal, hkr_compare, jacobian_dimension, koszul_resolution,
    mf_hochschild, mutate_cofactors, CofactorMutation, KoszulError,
};
use crate::par;
use crate::poly::Poly;
use crate::rational::q;

const MAX_WITNESSES: usize = 3;
/// Random presentations per suite.
pub const RANDOM_PRESENTATIONS: u64 = 25;
/// Random cochain triples per algebra in the Gerstenhaber suite.
pub const GERSTENHABER_PAIRS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Core,
    Bar,
    Gerstenhaber,
    Koszul,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "core" => Ok(Suite::Core),
            "bar" => Ok(Suite::Bar),
            "gerstenhaber" => Ok(Suite::Gerstenhaber),
            "koszul" => Ok(Suite::Koszul),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

/// A deliberate sign flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// `d1:<column>:<slot>`
    D1Sign { column: usize, slot: usize },
    /// `cofactor:<index>` or `cofactor:<index>:<term>`
    Cofactor(CofactorMutation),
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.parse::<usize>().map_err(|_| format!("bad number {p:?} in mutation {s:?}"));
        match parts.as_slice() {
            ["d1", c, k] => Ok(Mutation::D1Sign {
                column: num(c)?,
                slot: num(k)?,
            }),
            ["cofactor", i] => Ok(Mutation::Cofactor(CofactorMutation {
                cofactor: num(i)?,
                term: None,
            })),
            ["cofactor", i, t] => Ok(Mutation::Cofactor(CofactorMutation {
                cofactor: num(i)?,
                term: Some(num(t)?),
            })),
            _ => Err(format!("mutation {s:?} is not d1:<column>:<slot> or cofactor:<index>[:<term>]")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub property: String,
    pub instance: String,
    pub cases: usize,
    pub failures: usize,
    pub witnesses: Vec<String>,
}

impl CheckResult {
    fn new(suite: &str, property: &str, instance: &str, cases: usize, failures: Vec<String>) -> Self {
        Self {
            suite: suite.into(),
            property: property.into(),
            instance: instance.into(),
            cases,
            failures: failures.len(),
            witnesses: failures.into_iter().take(MAX_WITNESSES).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}/{} [{}] {} cases", self.suite, self.property, self.instance, self.cases)?;
        if !self.passed() {
            write!(f, ", {} failing", self.failures)?;
            for w in &self.witnesses {
                write!(f, "\n    witness: {w}")?;
            }
        }
        Ok(())
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn mf(f: &str, vars: &[&str], order: i64) -> AlgebraPresentation {
    let p = Poly::parse(f, &names(vars)).expect("built-in potential parses");
    build_mf_algebra(&p, &names(vars), order).expect("built-in potential is valid")
}

/// The built-in family instances used by the suites.
pub fn builtin_instances() -> Vec<(String, AlgebraPresentation)> {
    let tp = |n: usize, d: i64| build_truncated_polynomial(&standard_variables(n), d).expect("valid order");
    vec![
        ("ground_field".into(), build_ground_field()),
        ("dual_numbers".into(), build_dual_numbers()),
        ("exterior(1)".into(), build_exterior(1)),
        ("exterior(2)".into(), build_exterior(2)),
        ("exterior(3)".into(), build_exterior(3)),
        ("exterior(1; degree -1)".into(), build_exterior_with_degree(1, -1, Grading::Integer)),
        ("truncated_polynomial(x; D=3)".into(), tp(1, 3)),
        ("truncated_polynomial(x,y; D=2)".into(), tp(2, 2)),
        ("matrix_factorization(x^2; D=3)".into(), mf("x^2", &["x"], 3)),
        ("matrix_factorization(x^3; D=4)".into(), mf("x^3", &["x"], 4)),
        ("matrix_factorization(x*y; D=2)".into(), mf("x*y", &["x", "y"], 2)),
        ("matrix_factorization(x^2+y^3; D=3)".into(), mf("x^2 + y^3", &["x", "y"], 3)),
    ]
}

pub fn random_instances() -> Vec<(String, AlgebraPresentation)> {
    (0..RANDOM_PRESENTATIONS).map(|s| (format!("random({s})"), random_cdg(s))).collect()
}

fn cdg_witness(v: &CdgViolation) -> String {
    format!("{:?} on ({}): deviation {:?}", v.axiom, v.basis.join(", "), v.deviation)
}

fn bar_witness(v: &BarViolation) -> String {
    format!("{:?} at column {} on {}: deviation {:?}", v.relation, v.column, v.tensor, v.deviation)
}

fn core_suite() -> Vec<CheckResult> {
    let instances: Vec<(String, AlgebraPresentation)> = builtin_instances().into_iter().chain(random_instances()).collect();
    let mut out = Vec::new();
    let per = par::map_collect(instances.as_slice(), |(name, a)| {
        let mut r = Vec::new();
        let v = validate_cdg(a);
        r.push(CheckResult::new("core", "cdg_axioms", name, a.dim() * a.dim(), v.iter().map(cdg_witness).collect()));
        let op = opposite(a);
        let back = opposite(&op);
        let mut inv = Vec::new();
        if back != *a {
            inv.push("opposite(opposite(A)) differs from A".to_string());
        }
        inv.extend(validate_cdg(&op).iter().map(cdg_witness));
        r.push(CheckResult::new("core", "opposite", name, 1, inv));
        if a.dim() <= 8 {
            let ae = enveloping(a);
            let mut bad: Vec<String> = validate_cdg(&ae).iter().map(cdg_witness).collect();
            let (ae2, m) = regular_bimodule(a);
            bad.extend(validate_module(&m, &ae2).iter().map(cdg_witness));
            r.push(CheckResult::new("core", "enveloping_and_bimodule", name, ae.dim(), bad));
        }
        if !a.is_curved() && a.dim() <= 8 {
            let model = FiniteModel::new(a);
            let bad = square_violations(&model, 3);
            r.push(CheckResult::new("core", "cochain_square_zero", name, 1, bad));
        }
        r
    });
    for r in per {
        out.extend(r);
    }
    out
}

/// Largest `N ≤ 4` whose reduced bar columns stay small.
fn bar_length(a: &AlgebraPresentation) -> usize {
    let d = a.dim();
    let reduced = d.saturating_sub(1).max(1);
    (1..=4).rev().find(|&n| d * d * reduced.pow(n as u32) <= 100_000).unwrap_or(1)
}

fn bar_suite(mutation: Option<BarMutation>) -> Vec<CheckResult> {
    let instances: Vec<(String, AlgebraPresentation)> = builtin_instances().into_iter().chain(random_instances()).collect();
    let per = par::map_collect(instances.as_slice(), |(name, a)| {
        let n = bar_length(a);
        let mut r = Vec::new();
        for reduced in [true, false] {
            if !reduced && a.dim() > 4 {
                continue;
            }
            let mut bar = match build_bar(a, reduced, n) {
                Ok(b) => b,
                Err(e) => {
                    r.push(CheckResult::new("bar", "build", name, 1, vec![e.to_string()]));
                    continue;
                }
            };
            if let Some(m) = mutation {
                bar = bar.with_mutation(m);
            }
            let label = format!("{name}; N={n}; {}", if reduced { "reduced" } else { "unreduced" });
            let cases: usize = (0..=n).map(|k| bar.column_dim(k)).sum();
            let v = bar.check_relations();
            r.push(CheckResult::new("bar", "relations", &label, cases, v.iter().map(bar_witness).collect()));
            let h = check_homotopy(&bar);
            r.push(CheckResult::new("bar", "homotopy", &label, cases, h.iter().map(bar_witness).collect()));
        }
        r
    });
    per.into_iter().flatten().collect()
}

fn gerstenhaber_suite() -> Vec<CheckResult> {
    let mut instances: Vec<(String, AlgebraPresentation)> = builtin_instances()
        .into_iter()
        .filter(|(_, a)| a.dim() >= 2 && a.dim() <= 6)
        .collect();
    instances.extend(random_instances().into_iter().take(3));
    let per = par::map_collect(instances.as_slice(), |(name, a)| {
        let v = check_gerstenhaber(a, GERSTENHABER_PAIRS, 7);
        let w = v
            .iter()
            .map(|x| format!("{:?} on {}: deviation {}", x.property, x.witness, x.deviation))
            .collect();
        CheckResult::new("gerstenhaber", "bracket_identities", name, GERSTENHABER_PAIRS, w)
    });
    per
}

/// Potentials checked by the Koszul suite, with their variables and order.
pub fn koszul_potentials() -> Vec<(&'static str, Vec<&'static str>, i64)> {
    vec![
        ("x^2", vec!["x"], 5),
        ("x^3", vec!["x"], 5),
        ("x^4", vec!["x"], 6),
        ("x^2 + y^3", vec!["x", "y"], 5),
        ("x^3 + y^3", vec!["x", "y"], 5),
        ("x1*x2", vec!["x1", "x2"], 4),
        ("x^2 + x*y + y^3", vec!["x", "y"], 4),
    ]
}

fn koszul_suite(mutation: Option<CofactorMutation>) -> Vec<CheckResult> {
    let mut out = Vec::new();
    // random telescoping identities
    let mut bad = Vec::new();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
    let total = 100;
    for _ in 0..total {
        let f = random_potential(&mut rng);
        let mut fs = curvature_cofactors(&f).expect("no constant term");
        if let Some(m) = mutation {
            fs = mutate_cofactors(&fs, m);
        }
        let dev = cofactor_deviation(&f, &fs);
        if !dev.is_zero() {
            bad.push(format!("f = {f}: Σ(yᵢ−xᵢ)Fᵢ − (f(y) − f(x)) = {dev}"));
        }
        for (i, fi) in fs.iter().enumerate() {
            if diagonal(fi) != f.derivative(i) {
                bad.push(format!("f = {f}: F{}(x,x) = {} but ∂{}f = {}", i + 1, diagonal(fi), i + 1, f.derivative(i)));
            }
        }
    }
    out.push(CheckResult::new("koszul", "cofactor_telescope", "100 random potentials", total, bad));

    for n in 1..=3usize {
        let d = if n == 3 { 3 } else { 5 };
        let a = build_truncated_polynomial(&standard_variables(n), d).expect("valid order");
        let res = koszul_resolution(&a).expect("polynomial family");
        let mut bad = res.square_violations();
        let h = res.homology_dims();
        if h.iter().any(|x| *x != 0) {
            bad.push(format!("homology of the augmented complex {h:?}"));
        }
        out.push(CheckResult::new("koszul", "resolution_exact", &format!("n={n}; D={d}"), res.rank() + 2, bad));
    }

    let pots = koszul_potentials();
    let per = par::map_collect(pots.as_slice(), |(f, vars, d)| {
        let a = mf(f, vars, *d);
        let p = a.family().and_then(|x| x.potential.clone()).expect("potential");
        let label = format!("f={f}; D={d}");
        let mut r = Vec::new();
        let mut fs = curvature_cofactors(&p).expect("no constant term");
        if let Some(m) = mutation {
            fs = mutate_cofactors(&fs, m);
        }
        let res = koszul_resolution(&a).expect("polynomial family");
        let cases: usize = (0..=res.rank()).map(|k| res.column(k).dim()).sum();
        let bad = match res.twisted_with(&p, fs) {
            Ok(_) => Vec::new(),
            Err(KoszulError::Identity(v)) => v
                .iter()
                .map(|w| {
                    let what = match w.shift {
                        Some(-2) => "d²",
                        Some(2) => "k²",
                        Some(0) => "dk + kd + F",
                        _ => "d² component",
                    };
                    format!("{what} at column {} on {}: deviation {:?}", w.column, w.basis_label, w.deviation)
                })
                .collect(),
            Err(e) => vec![e.to_string()],
        };
        r.push(CheckResult::new("koszul", "twist_identities", &label, cases, bad));
        if let Some(expect) = jacobian_dimension(&p) {
            let orders = [*d as u32, *d as u32 + 2];
            let mut bad = Vec::new();
            match mf_hochschild(&p, &names(vars), &orders, &[0, 1], false) {
                Ok(rep) => {
                    if rep.entries[0].dimension != expect || !rep.entries[0].stabilized {
                        bad.push(format!("even dimension {} (stabilized: {}), Jacobian ring {expect}", rep.entries[0].dimension, rep.entries[0].stabilized));
                    }
                }
                Err(e) => bad.push(e.to_string()),
            }
            r.push(CheckResult::new("koszul", "jacobian_oracle", &label, 1, bad));
        }
        r
    });
    out.extend(per.into_iter().flatten());

    // the two pipelines on instances small enough for both
    let shared: Vec<(&str, Vec<&str>, i64)> = vec![
        ("x^2", vec!["x"], 4),
        ("x^3", vec!["x"], 5),
        ("x^4", vec!["x"], 6),
        ("x^2 + x^3", vec!["x"], 5),
        ("x*y", vec!["x", "y"], 4),
    ];
    let per = par::map_collect(shared.as_slice(), |(f, vars, d)| {
        let a = mf(f, vars, *d);
        let sched = [TruncationParams::default()];
        let bar = compute_hh(&a, &[0, 1], &sched, &HhOptions::default());
        let kos = compute_hh(
            &a,
            &[0, 1],
            &sched,
            &HhOptions {
                cochains: Some(CochainKind::Koszul),
                representatives: false,
            },
        );
        let bad = match (bar, kos) {
            (Ok(b), Ok(k)) if b.dims() == k.dims() => Vec::new(),
            (Ok(b), Ok(k)) => vec![format!("bar {:?} vs koszul {:?}", b.dims(), k.dims())],
            (b, k) => vec![format!("{:?} / {:?}", b.err(), k.err())],
        };
        CheckResult::new("koszul", "bar_equals_koszul", &format!("f={f}; D={d}"), 2, bad)
    });
    out.extend(per);

    // f = 0: the Koszul answer is the polyvector count that HKR realizes
    for (n, d) in [(1usize, 4i64), (2, 2), (2, 3)] {
        let a = build_truncated_polynomial(&standard_variables(n), d).expect("valid order");
        let label = format!("n={n}; D={d}");
        let mut bad = Vec::new();
        match hkr_compare(&a, &[0, 1, 2], &[]) {
            Ok(r) => {
                bad.extend(r.failures.clone());
                let kos = compute_hh(
                    &a,
                    &[0, 1, 2],
                    &[TruncationParams::default()],
                    &HhOptions {
                        cochains: Some(CochainKind::Koszul),
                        representatives: false,
                    },
                );
                match kos {
                    Ok(k) => {
                        let poly: Vec<usize> = r.degrees.iter().map(|x| x.polyvector_dimension).collect();
                        if k.dims() != poly {
                            bad.push(format!("koszul {:?} vs polyvectors {poly:?}", k.dims()));
                        }
                    }
                    Err(e) => bad.push(e.to_string()),
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
        out.push(CheckResult::new("koszul", "hkr_comparison", &label, 3, bad));
    }
    out
}

fn random_potential(rng: &mut rand_chacha::ChaCha8Rng) -> Poly {
    use rand::Rng;
    let n = rng.gen_range(1..=3usize);
    let mut p = Poly::zero(n);
    for _ in 0..rng.gen_range(1..=5) {
        let deg = rng.gen_range(1..=5u32);
        let mut e = vec![0u32; n];
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        p.add_term(e, q(rng.gen_range(-3i64..=3)));
    }
    p
}

/// Runs the selected suites, with at most one mutation applied.
pub fn run(suite: Suite, mutation: Option<Mutation>) -> Vec<CheckResult> {
    let bar_mut = match mutation {
        Some(Mutation::D1Sign { column, slot }) => Some(BarMutation::FlipD1Sign { column, slot }),
        _ => None,
    };
    let cof_mut = match mutation {
        Some(Mutation::Cofactor(c)) => Some(c),
        _ => None,
    };
    let mut out = Vec::new();
    if suite.includes(Suite::Core) {
        out.extend(core_suite());
    }
    if suite.includes(Suite::Bar) {
        out.extend(bar_suite(bar_mut));
    }
    if suite.includes(Suite::Gerstenhaber) {
        out.extend(gerstenhaber_suite());
    }
    if suite.includes(Suite::Koszul) {
        out.extend(koszul_suite(cof_mut));
    }
    out
}
