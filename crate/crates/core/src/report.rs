//! The `hh` report: one cohomology report per pipeline plus a cross-check.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cdg::AlgebraPresentation;
use crate::descriptor::{supports_koszul, AlgebraDescriptor};
use crate::graded::TruncationParams;
use crate::hochschild::{compute_hh, default_kind, minimal_tensor_length, CochainKind, CohomologyReport, HhOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    Bar,
    Koszul,
    Both,
}

impl FromStr for Pipeline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bar" => Ok(Pipeline::Bar),
            "koszul" => Ok(Pipeline::Koszul),
            "both" => Ok(Pipeline::Both),
            _ => Err(format!("unknown pipeline {s:?}, expected bar, koszul or both")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

/// `"a..b"` (inclusive) or a comma separated list.
pub fn parse_degrees(s: &str) -> Result<Vec<i64>, String> {
    let bad = |_| format!("bad degree range {s:?}");
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(bad)?;
        let b: i64 = b.trim().parse().map_err(bad)?;
        if a > b {
            return Err(format!("empty degree range {s:?}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(bad)).collect()
}

/// `"N:D,N:D"`; either side may be left empty, `"N"` alone sets only the
/// tensor length.
pub fn parse_schedule(s: &str) -> Result<Vec<TruncationParams>, String> {
    let bad = |_| format!("bad schedule entry in {s:?}");
    s.split(',')
        .map(|e| {
            let (n, d) = e.split_once(':').unwrap_or((e, ""));
            let n = n.trim();
            let d = d.trim();
            Ok(TruncationParams {
                tensor_length: if n.is_empty() { None } else { Some(n.parse().map_err(bad)?) },
                order: if d.is_empty() { None } else { Some(d.parse().map_err(bad)?) },
                weight_floor: None,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct HhRequest {
    pub pipeline: Option<Pipeline>,
    pub degrees: Vec<i64>,
    pub schedule: Option<Vec<TruncationParams>>,
    pub representatives: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub threads: usize,
    pub parallel: bool,
    pub milliseconds: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HhReport {
    pub input: AlgebraDescriptor,
    pub dimension: usize,
    pub pipeline: Pipeline,
    pub degrees: Vec<i64>,
    pub schedule: Vec<TruncationParams>,
    pub results: BTreeMap<String, CohomologyReport>,
    /// Present when both pipelines ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    pub stabilized: bool,
    pub timing: Timing,
}

impl HhReport {
    pub fn success(&self) -> bool {
        self.stabilized && self.agreement != Some(false)
    }

    /// The report with the timing block cleared, for comparisons.
    pub fn without_timing(&self) -> HhReport {
        HhReport {
            timing: Timing {
                threads: 0,
                parallel: false,
                milliseconds: BTreeMap::new(),
            },
            ..self.clone()
        }
    }
}

fn default_schedule(a: &AlgebraPresentation, degrees: &[i64]) -> Vec<TruncationParams> {
    let kind = default_kind(a);
    let order = a.family().and_then(|f| f.order);
    let n = minimal_tensor_length(a, kind, degrees, order.unwrap_or(0));
    (0..2)
        .map(|i| TruncationParams {
            tensor_length: Some(n + i),
            order,
            weight_floor: None,
        })
        .collect()
}

fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

pub fn run_hh(input: &AlgebraDescriptor, req: &HhRequest) -> Result<HhReport, RunError> {
    let a = input.build().map_err(|e| RunError::Usage(e.to_string()))?;
    if req.degrees.is_empty() {
        return Err(RunError::Usage("no degrees requested".into()));
    }
    let koszul_ok = supports_koszul(&a);
    let pipeline = req.pipeline.unwrap_or(if input.is_matrix_factorization() { Pipeline::Both } else { Pipeline::Bar });
    if pipeline != Pipeline::Bar && !koszul_ok {
        return Err(RunError::Usage(
            "the koszul pipeline needs a truncated polynomial or matrix factorization input".into(),
        ));
    }
    let schedule = req.schedule.clone().unwrap_or_else(|| default_schedule(&a, &req.degrees));
    if schedule.is_empty() {
        return Err(RunError::Usage("empty schedule".into()));
    }
    let mut runs = Vec::new();
    if pipeline != Pipeline::Koszul {
        runs.push(("bar", default_kind(&a)));
    }
    if pipeline != Pipeline::Bar {
        runs.push(("koszul", CochainKind::Koszul));
    }
    let mut results = BTreeMap::new();
    let mut milliseconds = BTreeMap::new();
    for (name, kind) in runs {
        let opts = HhOptions {
            cochains: Some(kind),
            representatives: req.representatives,
        };
        let t0 = Instant::now();
        let r = compute_hh(&a, &req.degrees, &schedule, &opts).map_err(|e| match e {
            crate::hochschild::HhError::TruncationTooSmall { .. }
            | crate::hochschild::HhError::CurvedFinite
            | crate::hochschild::HhError::EmptySchedule => RunError::Usage(e.to_string()),
            e => RunError::Compute(e.to_string()),
        })?;
        milliseconds.insert(name.to_string(), t0.elapsed().as_secs_f64() * 1e3);
        results.insert(name.to_string(), r);
    }
    let agreement = match (results.get("bar"), results.get("koszul")) {
        (Some(b), Some(k)) => Some(b.dims() == k.dims()),
        _ => None,
    };
    let stabilized = results.values().all(|r| r.all_stabilized());
    Ok(HhReport {
        input: input.clone(),
        dimension: a.dim(),
        pipeline,
        degrees: req.degrees.clone(),
        schedule,
        results,
        agreement,
        stabilized,
        timing: Timing {
            threads: threads(),
            parallel: crate::par::is_parallel(),
            milliseconds,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::parse_descriptor;

    #[test]
    fn degree_and_schedule_syntax() {
        assert_eq!(parse_degrees("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_degrees("-1, 2").unwrap(), vec![-1, 2]);
        assert!(parse_degrees("3..1").is_err());
        let s = parse_schedule("4:3,5:3,6").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].tensor_length, Some(4));
        assert_eq!(s[1].order, Some(3));
        assert_eq!(s[2].order, None);
        assert!(parse_schedule("x:3").is_err());
    }

    #[test]
    fn dual_numbers_report() {
        let d = parse_descriptor(r#"{"kind": "dual_numbers"}"#).unwrap();
        let req = HhRequest {
            degrees: vec![0, 1, 2, 3, 4],
            ..Default::default()
        };
        let r = run_hh(&d, &req).unwrap();
        assert_eq!(r.results["bar"].dims(), vec![2, 1, 1, 1, 1]);
        assert!(r.success());
        assert_eq!(r.agreement, None);
    }

    #[test]
    fn mf_defaults_to_both_pipelines() {
        let d = parse_descriptor(r#"{"kind": "matrix_factorization", "variables": ["x"], "potential": "x^3", "order": 5}"#)
            .unwrap();
        let req = HhRequest {
            degrees: vec![0, 1, 2, 3],
            ..Default::default()
        };
        let r = run_hh(&d, &req).unwrap();
        assert_eq!(r.pipeline, Pipeline::Both);
        assert_eq!(r.agreement, Some(true));
        assert!(r.success());
        let again = run_hh(&d, &req).unwrap();
        assert_eq!(
            serde_json::to_string(&again.without_timing()).unwrap(),
            serde_json::to_string(&r.without_timing()).unwrap()
        );
    }

    #[test]
    fn koszul_needs_a_polynomial_family() {
        let d = parse_descriptor(r#"{"kind": "exterior", "generators": 1}"#).unwrap();
        let req = HhRequest {
            pipeline: Some(Pipeline::Koszul),
            degrees: vec![0],
            ..Default::default()
        };
        assert!(matches!(run_hh(&d, &req), Err(RunError::Usage(_))));
    }
}
