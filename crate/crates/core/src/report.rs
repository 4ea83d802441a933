//! End-to-end verification runs over a range of tree sizes.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::check::Check;
use crate::complex::{
    build_ms_complex_capped, euler_characteristic, is_flag, ComplexError, SimplicialComplex,
};
use crate::cycle::DEFAULT_CYCLE_CAP;
use crate::homotopy::{
    collapse_certificate, homology, lemma51_verdict, replay_collapse, CriterionStatus,
    DEFAULT_CIRCUIT_BUDGET, DEFAULT_FACE_BUDGET,
};
use crate::knot::{bounds, BoundSet, RationalSlope, TwistSequence};
use crate::metric::{cycle_weight_band_check, metric_checks};
use crate::orientation::MAX_TREE_SIZE;

/// Largest tree size for flagness, homology, collapse and the circuit
/// criterion.
pub const PRACTICAL_CAP: usize = 6;
pub const SKIPPED_CAP: &str = "skipped (cap)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Build(#[from] ComplexError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n_min: usize,
    pub n_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist_sequence: Option<TwistSequence>,
    pub cycle_cap: usize,
    pub face_budget: usize,
    pub circuit_budget: usize,
    pub homology: bool,
    pub collapse: bool,
    pub lemma51: bool,
    pub flag: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_min: 2,
            n_max: 6,
            twist_sequence: None,
            cycle_cap: DEFAULT_CYCLE_CAP,
            face_budget: DEFAULT_FACE_BUDGET,
            circuit_budget: DEFAULT_CIRCUIT_BUDGET,
            homology: true,
            collapse: true,
            lemma51: true,
            flag: true,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn for_range(n_min: usize, n_max: usize) -> Self {
        RunConfig {
            n_min,
            n_max,
            ..RunConfig::default()
        }
    }

    /// A single instance whose tree size is the length of the sequence.
    pub fn for_twists(seq: TwistSequence) -> Self {
        RunConfig {
            n_min: seq.len(),
            n_max: seq.len(),
            twist_sequence: Some(seq),
            ..RunConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let bad = |m: String| Err(ReportError::ConfigInvalid(m));
        if self.n_min == 0 || self.n_min > self.n_max {
            return bad(format!("empty n range {}..{}", self.n_min, self.n_max));
        }
        if self.n_max > MAX_TREE_SIZE {
            return bad(format!("n = {} exceeds the hard cap {MAX_TREE_SIZE}", self.n_max));
        }
        if self.cycle_cap == 0 || self.cycle_cap > MAX_TREE_SIZE {
            return bad(format!("cycle cap {} outside 1..={MAX_TREE_SIZE}", self.cycle_cap));
        }
        if self.n_max > self.cycle_cap {
            return bad(format!("n = {} exceeds the cycle cap {}", self.n_max, self.cycle_cap));
        }
        if self.face_budget == 0 || self.circuit_budget == 0 {
            return bad("budgets must be positive".to_owned());
        }
        if let Some(seq) = &self.twist_sequence {
            if (self.n_min, self.n_max) != (seq.len(), seq.len()) {
                return bad("a twist sequence fixes n to its length".to_owned());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotSummary {
    pub twist_sequence: TwistSequence,
    /// Slope and genus are only defined for even length.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<RationalSlope>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundSet>,
}

impl KnotSummary {
    pub fn new(seq: &TwistSequence) -> Self {
        let genus = seq.genus().ok();
        KnotSummary {
            twist_sequence: seq.clone(),
            slope: seq.slope().ok(),
            genus,
            bounds: genus.and_then(|g| bounds(g).ok()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDescriptor {
    pub n_range: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knot: Option<KnotSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceReport {
    pub n: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub input: InputDescriptor,
    pub config: RunConfig,
    pub instances: Vec<InstanceReport>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn checks(&self) -> impl Iterator<Item = (usize, &Check)> {
        self.instances
            .iter()
            .flat_map(|i| i.checks.iter().map(move |c| (i.n, c)))
    }

    /// The same report with every timing zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in r.instances.iter_mut().flat_map(|i| i.checks.iter_mut()) {
            c.seconds = 0.0;
        }
        r
    }
}

pub fn run_verification(cfg: &RunConfig) -> Result<VerificationReport, ReportError> {
    cfg.validate()?;
    let knot = cfg.twist_sequence.as_ref().map(KnotSummary::new);
    let mut instances = Vec::new();
    for n in cfg.n_min..=cfg.n_max {
        let k = build_ms_complex_capped(n, cfg.cycle_cap)?;
        let checks = instance_checks(&k, cfg);
        let pass = checks.iter().all(|c| c.pass);
        instances.push(InstanceReport { n, checks, pass });
    }
    let pass = instances.iter().all(|i| i.pass);
    Ok(VerificationReport {
        tool: "kakimizu".to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        input: InputDescriptor {
            n_range: [cfg.n_min, cfg.n_max],
            knot,
        },
        config: cfg.clone(),
        instances,
        pass,
    })
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every check for one complex built from the `n`-vertex tree.
pub fn instance_checks(k: &SimplicialComplex, cfg: &RunConfig) -> Vec<Check> {
    let n = k.tree_size().expect("complex built from a tree");
    let mut checks = Vec::new();

    checks.push(Check::timed("vertex_count", "2^(n-1) vertices", || {
        let expected = 1u64 << (n - 1);
        let actual = k.vertex_count() as u64;
        (json!(expected), json!(actual), actual == expected)
    }));
    checks.push(Check::timed("purity", "every facet has n vertices", || {
        let mut sizes: Vec<usize> = k.facets().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes.dedup();
        (json!([n]), json!(sizes), sizes == [n])
    }));
    checks.push(Check::timed(
        "facet_count",
        "(n-1)! facets, as in the standard triangulation of the (n-1)-cube",
        || {
            let expected = factorial(n - 1);
            let actual = k.facets().len() as u64;
            (json!(expected), json!(actual), actual == expected)
        },
    ));
    checks.push(Check::timed("euler_characteristic", "chi = 1", || {
        let chi = euler_characteristic(k);
        (json!(1), json!(chi), chi == 1)
    }));

    checks.extend(metric_checks(k));
    checks.push(cycle_weight_band_check(n));

    let capped = n > PRACTICAL_CAP;
    if cfg.flag {
        let claim = "the complex is flag";
        checks.push(if capped {
            Check::skipped("flag", claim, SKIPPED_CAP)
        } else {
            Check::timed("flag", claim, || {
                let v = is_flag(k);
                (json!({"flag": true}), json!(v), v.flag)
            })
        });
    }
    if cfg.homology {
        let claim = "reduced integral homology vanishes";
        checks.push(if capped {
            Check::skipped("homology", claim, SKIPPED_CAP)
        } else {
            Check::timed("homology", claim, || {
                let expected = json!({"trivial": true});
                match homology(k, cfg.face_budget) {
                    Ok(h) => (expected, json!(h), h.is_trivial()),
                    Err(e) => (expected, json!(e.to_string()), false),
                }
            })
        });
    }
    if cfg.collapse {
        let claim = "greedy collapse reaches a point and replays";
        checks.push(if capped {
            Check::skipped("collapse", claim, SKIPPED_CAP)
        } else {
            Check::timed("collapse", claim, || {
                let expected = json!({"collapses_to_point": true, "replayed": true});
                match collapse_certificate(k, cfg.face_budget) {
                    Ok(Some(cert)) => {
                        let replayed = replay_collapse(k, &cert, cfg.face_budget);
                        let actual = json!({
                            "collapses_to_point": true,
                            "replayed": replayed,
                            "pairs": cert.pairs.len(),
                        });
                        (expected, actual, replayed)
                    }
                    Ok(None) => (expected, json!("inconclusive: greedy collapse stuck"), false),
                    Err(e) => (expected, json!(e.to_string()), false),
                }
            })
        });
    }
    if cfg.lemma51 {
        let claim = "short-circuit criterion holds exactly when the diameter is at most 2";
        checks.push(if capped {
            Check::skipped("lemma51", claim, SKIPPED_CAP)
        } else {
            Check::timed("lemma51", claim, || {
                let status = if n <= 3 {
                    CriterionStatus::SimplyConnected
                } else {
                    CriterionStatus::CriterionFails
                };
                let expected = json!({"status": status, "all_circuits_contractible": true});
                match lemma51_verdict(k, cfg.circuit_budget) {
                    Ok(v) => {
                        let pass = v.status == status && v.all_circuits_contractible;
                        (expected, json!(v), pass)
                    }
                    Err(e) => (expected, json!(e.to_string()), false),
                }
            })
        });
    }
    checks
}

/// Serialises a report as pretty JSON with a trailing newline.
pub fn report_json(r: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serialises");
    s.push('\n');
    s
}

/// Looks up a check value by name, for callers that only need one field.
pub fn find_check<'a>(r: &'a VerificationReport, n: usize, name: &str) -> Option<&'a Check> {
    r.checks().find(|(m, c)| *m == n && c.name == name).map(|(_, c)| c)
}

pub fn actual_of(r: &VerificationReport, n: usize, name: &str) -> Option<Value> {
    find_check(r, n, name).map(|c| c.actual.clone())
}
