//! Edge-path metric on the 1-skeleton.
//!
//! Vertices keep the complex's ascending label order, and neighbour lists are
//! ascending, so breadth-first search visits neighbours in label order and
//! every witness is reproducible.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::check::Check;
use crate::complex::{build_ms_complex_capped, ComplexError, SimplicialComplex};
use crate::cycle::{enumerate_cycles_capped, DEFAULT_CYCLE_CAP};
use crate::knot::bounds;
use crate::orientation::{weight, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("graph is disconnected")]
    Disconnected,
    /// 1-based hop index along the constructed path.
    #[error("hop {k} ({from} -> {to}) is not an edge")]
    StepNotAnEdge { k: usize, from: String, to: String },
    #[error("orientations belong to trees of different sizes")]
    SizeMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    labels: Vec<String>,
    neighbours: Vec<Vec<usize>>,
}

impl AdjacencyGraph {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbours.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    fn require(&self, label: &str) -> Result<usize, MetricError> {
        self.index_of(label)
            .ok_or_else(|| MetricError::UnknownVertex(label.to_owned()))
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.neighbours[a].binary_search(&b).is_ok()
    }

    pub fn is_edge_between(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(a), Some(b)) => self.is_edge(a, b),
            _ => false,
        }
    }

    /// Sorted edge list `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbours
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    /// Distances from `source`, `None` when unreachable, plus BFS parents.
    fn bfs(&self, source: usize) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut dist = vec![None; self.labels.len()];
        let mut parent = vec![usize::MAX; self.labels.len()];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.neighbours[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        (dist, parent)
    }
}

pub fn one_skeleton_graph(k: &SimplicialComplex) -> AdjacencyGraph {
    let mut neighbours = vec![Vec::new(); k.vertex_count()];
    for (a, b) in k.edges() {
        neighbours[a].push(b);
        neighbours[b].push(a);
    }
    for ns in &mut neighbours {
        ns.sort_unstable();
    }
    AdjacencyGraph {
        labels: k.labels().to_vec(),
        neighbours,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub path: Vec<String>,
    pub length: usize,
}

impl PathWitness {
    fn from_labels(path: Vec<String>) -> Self {
        let length = path.len().saturating_sub(1);
        PathWitness { path, length }
    }

    /// Checks that consecutive vertices are adjacent and the length matches.
    pub fn is_valid_in(&self, g: &AdjacencyGraph) -> bool {
        !self.path.is_empty()
            && self.length + 1 == self.path.len()
            && self.path.iter().all(|v| g.index_of(v).is_some())
            && self.path.windows(2).all(|w| g.is_edge_between(&w[0], &w[1]))
    }
}

/// Shortest path from `a` to `b`.
pub fn distance(g: &AdjacencyGraph, a: &str, b: &str) -> Result<(usize, PathWitness), MetricError> {
    let (s, t) = (g.require(a)?, g.require(b)?);
    let (dist, parent) = g.bfs(s);
    let d = dist[t].ok_or(MetricError::Disconnected)?;
    let mut rev = vec![t];
    let mut cur = t;
    while cur != s {
        cur = parent[cur];
        rev.push(cur);
    }
    let path = rev.into_iter().rev().map(|v| g.labels[v].clone()).collect();
    Ok((d, PathWitness::from_labels(path)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diameter {
    pub diameter: usize,
    /// First pair, in label order, at maximal distance.
    pub pair: (String, String),
}

/// Maximum distance over all pairs, by BFS from every vertex.
pub fn diameter(g: &AdjacencyGraph) -> Result<Diameter, MetricError> {
    if g.vertex_count() == 0 {
        return Err(MetricError::Disconnected);
    }
    let eccentricities: Vec<Option<(usize, usize)>> = (0..g.vertex_count())
        .into_par_iter()
        .map(|s| {
            let (dist, _) = g.bfs(s);
            let mut best = (0, s);
            for (t, d) in dist.into_iter().enumerate() {
                let d = d?;
                if d > best.0 {
                    best = (d, t);
                }
            }
            Some(best)
        })
        .collect();
    let mut best = (0, 0, 0);
    for (s, e) in eccentricities.into_iter().enumerate() {
        let (d, t) = e.ok_or(MetricError::Disconnected)?;
        if d > best.0 {
            best = (d, s, t);
        }
    }
    Ok(Diameter {
        diameter: best.0,
        pair: (g.labels[best.1].clone(), g.labels[best.2].clone()),
    })
}

/// Inductive path: on matching last signs recurse on the tree without its
/// last edge and lift; otherwise walk to `b` with its last sign copied from
/// `a`, then flip that sign.
fn inductive_path(a: Orientation, b: Orientation) -> Vec<Orientation> {
    let n = a.tree_size();
    if n == 1 {
        return vec![a];
    }
    let last = n - 1;
    if a.sign(last) == b.sign(last) {
        let (a0, b0) = (a.truncate_last().unwrap(), b.truncate_last().unwrap());
        inductive_path(a0, b0)
            .into_iter()
            .map(|r| r.extend(a.sign(last)).expect("same size as a"))
            .collect()
    } else {
        let via = b.flip(last);
        let mut path = inductive_path(a, via);
        path.push(b);
        path
    }
}

/// Constructive path of length at most `n-1`, with each hop checked
/// against `oracle`.
pub fn lemma71_path(
    a: &Orientation,
    b: &Orientation,
    oracle: &AdjacencyGraph,
) -> Result<PathWitness, MetricError> {
    if a.tree_size() != b.tree_size() {
        return Err(MetricError::SizeMismatch);
    }
    let path: Vec<String> = inductive_path(*a, *b)
        .iter()
        .map(Orientation::to_sign_string)
        .collect();
    for p in &path {
        oracle.require(p)?;
    }
    for (k, w) in path.windows(2).enumerate() {
        if !oracle.is_edge_between(&w[0], &w[1]) {
            return Err(MetricError::StepNotAnEdge {
                k: k + 1,
                from: w[0].clone(),
                to: w[1].clone(),
            });
        }
    }
    Ok(PathWitness::from_labels(path))
}

/// Number of random pairs checked for the constructive path when the tree
/// is too large for an exhaustive sweep.
pub const SAMPLED_PAIRS: usize = 200;
/// Largest tree size swept exhaustively by [`verify_metric_claims`].
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 6;
const SAMPLE_SEED: u64 = 0x6b61_6b69;

/// Runs the distance checks for the `n`-vertex tree.
pub fn verify_metric_claims(n: usize) -> Result<Vec<Check>, ComplexError> {
    let k = build_ms_complex_capped(n, DEFAULT_CYCLE_CAP.max(n))?;
    Ok(metric_checks(&k))
}

/// Distance checks on an already built complex.
pub fn metric_checks(k: &SimplicialComplex) -> Vec<Check> {
    let n = k.tree_size().expect("complex built from a tree");
    let g = one_skeleton_graph(k);
    let orientations = k.orientations().expect("orientation labels");
    let mut checks = Vec::new();

    let diam = diameter(&g);
    checks.push(Check::timed("diameter", "diameter of G(K) equals n-1", || {
        let actual = diam.as_ref().map(|d| d.diameter as i64).unwrap_or(-1);
        (json(n as i64 - 1), json(actual), actual == n as i64 - 1)
    }));

    if n.is_multiple_of(2) {
        let g_genus = (n / 2) as u64;
        let b = bounds(g_genus).expect("positive genus");
        checks.push(Check::timed(
            "diameter_bound",
            "diameter is at most 2g(3g-2)+1, and at most 2 in genus one",
            || {
                let d = diam.as_ref().map(|d| d.diameter as u64).unwrap_or(u64::MAX);
                let limit = b.genus1_refined_diameter.unwrap_or(b.diameter_bound);
                let expected = serde_json::json!({
                    "at_most": b.diameter_bound,
                    "genus1_at_most": b.genus1_refined_diameter,
                });
                (expected, json(d), d <= b.diameter_bound && d <= limit)
            },
        ));
    }

    checks.push(Check::timed(
        "weight_lipschitz",
        "|w(a)-w(b)| <= 1 on every edge",
        || {
            let bad = g
                .edges()
                .into_iter()
                .filter(|&(a, b)| weight(&orientations[a]).abs_diff(weight(&orientations[b])) > 1)
                .count();
            (json(0), json(bad as i64), bad == 0)
        },
    ));

    let minus = Orientation::all_minus(n).unwrap();
    let plus = Orientation::all_plus(n).unwrap();
    checks.push(Check::timed(
        "extremal_distance",
        "d(all minus, all plus) = n-1",
        || {
            let d = distance(&g, &minus.to_sign_string(), &plus.to_sign_string())
                .map(|(d, _)| d as i64)
                .unwrap_or(-1);
            (json(n as i64 - 1), json(d), d == n as i64 - 1)
        },
    ));

    checks.push(Check::timed(
        "inductive_path_extremal",
        "constructive path from all minus to all plus has BFS length",
        || {
            let bfs = distance(&g, &minus.to_sign_string(), &plus.to_sign_string())
                .map(|(d, _)| d as i64)
                .unwrap_or(-1);
            let built = lemma71_path(&minus, &plus, &g)
                .map(|p| p.length as i64)
                .unwrap_or(-1);
            (json(bfs), json(built), built == bfs && bfs >= 0)
        },
    ));

    checks.push(Check::timed(
        "inductive_path_bound",
        "constructive path is a valid path of length at most n-1",
        || {
            let pairs = path_pairs(&orientations);
            let failures: Vec<String> = pairs
                .par_iter()
                .filter_map(|(a, b)| match lemma71_path(a, b, &g) {
                    Ok(p) if p.length < n => None,
                    Ok(p) => Some(format!("{a} -> {b}: length {}", p.length)),
                    Err(e) => Some(format!("{a} -> {b}: {e}")),
                })
                .collect();
            let expected = serde_json::json!({
                "pairs": pairs.len(),
                "failures": 0,
                "max_length": n - 1,
            });
            let actual = serde_json::json!({
                "pairs": pairs.len(),
                "failures": failures.len(),
                "first_failure": failures.first(),
            });
            (expected, actual, failures.is_empty())
        },
    ));

    checks
}

fn path_pairs(orientations: &[Orientation]) -> Vec<(Orientation, Orientation)> {
    let n = orientations[0].tree_size();
    if n <= EXHAUSTIVE_PAIR_LIMIT {
        return orientations
            .iter()
            .flat_map(|a| orientations.iter().map(move |b| (*a, *b)))
            .collect();
    }
    sample_pairs(orientations, SAMPLED_PAIRS, SAMPLE_SEED)
}

/// Deterministic sample of distinct ordered pairs.
pub fn sample_pairs(
    orientations: &[Orientation],
    count: usize,
    seed: u64,
) -> Vec<(Orientation, Orientation)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let total = orientations.len() * orientations.len();
    while seen.len() < count.min(total) {
        let a = *orientations.choose(&mut rng).unwrap();
        let b = orientations[rng.gen_range(0..orientations.len())];
        seen.insert((a, b));
    }
    seen.into_iter().collect()
}

/// Weight band of each cycle: the set of weights must be two consecutive
/// integers (one value when `n = 1`).
pub fn cycle_weight_band_check(n: usize) -> Check {
    Check::timed(
        "cycle_weight_band",
        "weights along each cycle are two successive integers",
        || {
            let cycles = enumerate_cycles_capped(n, DEFAULT_CYCLE_CAP.max(n)).unwrap_or_default();
            let bad = cycles
                .iter()
                .filter(|c| {
                    let ws: BTreeSet<usize> = c.orientations.iter().map(weight).collect();
                    let lo = *ws.first().unwrap();
                    let expected: BTreeSet<usize> = if n == 1 {
                        [lo].into()
                    } else {
                        [lo, lo + 1].into()
                    };
                    ws != expected
                })
                .count();
            let actual = serde_json::json!({"cycles": cycles.len(), "violations": bad});
            let pass = bad == 0 && !cycles.is_empty();
            (serde_json::json!({"violations": 0}), actual, pass)
        },
    )
}

fn json(v: impl Into<serde_json::Value>) -> serde_json::Value {
    v.into()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_ms_complex, fixtures::hollow_square};

    fn o(s: &str) -> Orientation {
        s.parse().unwrap()
    }

    fn graph(n: usize) -> AdjacencyGraph {
        one_skeleton_graph(&build_ms_complex(n).unwrap())
    }

    #[test]
    fn skeleton_graphs() {
        let g3 = graph(3);
        assert_eq!((g3.vertex_count(), g3.edge_count()), (4, 5));
        let g2 = graph(2);
        assert_eq!((g2.vertex_count(), g2.edge_count()), (2, 1));
        let g1 = graph(1);
        assert_eq!((g1.vertex_count(), g1.edge_count()), (1, 0));
    }

    #[test]
    fn distance_examples() {
        let g3 = graph(3);
        let (d, p) = distance(&g3, "--", "++").unwrap();
        assert_eq!(d, 2);
        assert_eq!(p.path, ["--", "+-", "++"]);
        assert!(p.is_valid_in(&g3));
        let (d, p) = distance(&g3, "+-", "+-").unwrap();
        assert_eq!((d, p.path), (0, vec!["+-".to_string()]));
        assert_eq!(
            distance(&g3, "+", "--"),
            Err(MetricError::UnknownVertex("+".into()))
        );
        for n in [2, 4, 6] {
            let g = graph(n);
            let minus = "-".repeat(n - 1);
            let plus = "+".repeat(n - 1);
            assert_eq!(distance(&g, &minus, &plus).unwrap().0, n - 1);
        }
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(diameter(&graph(2)).unwrap().diameter, 1);
        assert_eq!(diameter(&graph(3)).unwrap().diameter, 2);
        assert_eq!(diameter(&graph(4)).unwrap().diameter, 3);
        assert_eq!(diameter(&graph(1)).unwrap().diameter, 0);
        let sq = one_skeleton_graph(&hollow_square());
        assert_eq!(diameter(&sq).unwrap().diameter, 2);
        let two_points = crate::complex::SimplicialComplex::from_labeled_sets(&[vec!["a"], vec!["b"]]).unwrap();
        assert_eq!(
            diameter(&one_skeleton_graph(&two_points)),
            Err(MetricError::Disconnected)
        );
    }

    #[test]
    fn inductive_path_examples() {
        let g3 = graph(3);
        let p = lemma71_path(&o("--"), &o("++"), &g3).unwrap();
        assert_eq!(p.path, ["--", "+-", "++"]);
        assert_eq!(p.length, 2);
        let p = lemma71_path(&o("-+"), &o("-+"), &g3).unwrap();
        assert_eq!((p.path.len(), p.length), (1, 0));
        let g4 = graph(4);
        let p = lemma71_path(&o("---"), &o("+++"), &g4).unwrap();
        assert_eq!(p.length, 3);
        assert_eq!(distance(&g4, "---", "+++").unwrap().0, 3);
        assert_eq!(
            lemma71_path(&o("--"), &o("+"), &g3),
            Err(MetricError::SizeMismatch)
        );
    }

    #[test]
    fn inductive_path_reports_missing_edges() {
        // a graph on the n=3 vertices with the "+-"/"++" edge missing
        let k = crate::complex::SimplicialComplex::from_labeled_sets(&[
            vec!["--", "+-"],
            vec!["--", "-+"],
            vec!["-+", "++"],
        ])
        .unwrap();
        let g = one_skeleton_graph(&k);
        assert_eq!(
            lemma71_path(&o("--"), &o("++"), &g),
            Err(MetricError::StepNotAnEdge {
                k: 2,
                from: "+-".into(),
                to: "++".into()
            })
        );
    }

    // Exhaustive over n <= 6.
    #[test]
    fn inductive_path_never_beats_bfs_and_respects_bound() {
        for n in 1..=6 {
            let g = graph(n);
            let all = crate::orientation::all_orientations(n).unwrap();
            for a in &all {
                for b in &all {
                    let p = lemma71_path(a, b, &g).unwrap();
                    let (d, w) = distance(&g, &a.to_string(), &b.to_string()).unwrap();
                    assert!(p.is_valid_in(&g) && w.is_valid_in(&g));
                    assert!(p.length < n);
                    assert!(p.length >= d);
                    assert_eq!(d, distance(&g, &b.to_string(), &a.to_string()).unwrap().0);
                }
            }
        }
    }

    #[test]
    fn metric_claims_pass() {
        for n in [2, 3, 4, 6] {
            let checks = verify_metric_claims(n).unwrap();
            for c in &checks {
                assert!(c.pass, "n={n}: {c:?}");
            }
            assert_eq!(checks.len(), if n % 2 == 0 { 6 } else { 5 });
        }
        assert!(cycle_weight_band_check(5).pass);
    }

    #[test]
    fn sampling_is_deterministic() {
        let all = crate::orientation::all_orientations(8).unwrap();
        let a = sample_pairs(&all, 200, 7);
        assert_eq!(a.len(), 200);
        assert_eq!(a, sample_pairs(&all, 200, 7));
        assert_eq!(sample_pairs(&all[..2], 200, 7).len(), 4);
    }
}
