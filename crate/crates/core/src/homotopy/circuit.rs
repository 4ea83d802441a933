//! Closed edge paths and a bounded search for null-homotopies.
//!
//! Loops are rewritten by three moves: drop a backtrack `a b a -> a`, cut a
//! corner `a b c -> a c` across a triangle, and the reverse of a cut. A loop
//! that reaches a single vertex is contractible and the chain of loops is the
//! witness. Running out of budget only means the search gave up.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::metric::AdjacencyGraph;

pub const DEFAULT_CIRCUIT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error("loop is empty")]
    Empty,
    #[error("vertex {0} is out of range")]
    UnknownVertex(usize),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
}

/// Cyclic vertex sequence; consecutive entries, and the last and first,
/// are adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeLoop(Vec<u32>);

impl EdgeLoop {
    pub fn new(g: &AdjacencyGraph, vertices: Vec<u32>) -> Result<Self, LoopError> {
        if vertices.is_empty() {
            return Err(LoopError::Empty);
        }
        if let Some(&v) = vertices.iter().find(|&&v| v as usize >= g.vertex_count()) {
            return Err(LoopError::UnknownVertex(v as usize));
        }
        if vertices.len() > 1 {
            for i in 0..vertices.len() {
                let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
                if !g.is_edge(a as usize, b as usize) {
                    return Err(LoopError::NotAdjacent(a as usize, b as usize));
                }
            }
        }
        Ok(EdgeLoop(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pairwise distinct vertices and length at least 3.
    pub fn is_circuit(&self) -> bool {
        let distinct: HashSet<_> = self.0.iter().collect();
        self.0.len() >= 3 && distinct.len() == self.0.len()
    }
}

/// Smallest rotation of the loop or of its reverse.
fn canonical(v: &[u32]) -> Vec<u32> {
    let n = v.len();
    let mut best: Option<Vec<u32>> = None;
    let mut rev = v.to_vec();
    rev.reverse();
    for seq in [v, &rev[..]] {
        for r in 0..n {
            let cand: Vec<u32> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Triangles of a complex, indexed for the corner moves.
pub struct TriangleIndex {
    triangles: HashSet<[u32; 3]>,
    apexes: HashMap<(u32, u32), Vec<u32>>,
}

impl TriangleIndex {
    pub fn new(k: &SimplicialComplex) -> Self {
        let mut triangles = HashSet::new();
        let mut apexes: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for t in k.faces(2) {
            let [a, b, c] = [t[0], t[1], t[2]];
            triangles.insert([a, b, c]);
            for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
                apexes.entry((x, y)).or_default().push(z);
                apexes.entry((y, x)).or_default().push(z);
            }
        }
        for v in apexes.values_mut() {
            v.sort_unstable();
        }
        TriangleIndex { triangles, apexes }
    }

    fn is_triangle(&self, a: u32, b: u32, c: u32) -> bool {
        let mut t = [a, b, c];
        t.sort_unstable();
        self.triangles.contains(&t)
    }

    fn apexes(&self, a: u32, c: u32) -> &[u32] {
        self.apexes.get(&(a, c)).map_or(&[], Vec::as_slice)
    }
}

/// Loops one move away from `v` (not canonicalised).
fn successors(v: &[u32], tri: &TriangleIndex, max_len: usize) -> Vec<Vec<u32>> {
    let n = v.len();
    let mut out = Vec::new();
    if n == 1 {
        return out;
    }
    if n == 2 {
        out.push(vec![v[0]]);
    }
    for i in 0..n {
        let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
        if n >= 3 && a == c {
            // a b a -> a
            let drop = [(i + 1) % n, (i + 2) % n];
            out.push(
                (0..n)
                    .filter(|p| !drop.contains(p))
                    .map(|p| v[p])
                    .collect(),
            );
        } else if n >= 3 && tri.is_triangle(a, b, c) {
            let skip = (i + 1) % n;
            out.push((0..n).filter(|&p| p != skip).map(|p| v[p]).collect());
        }
    }
    if n < max_len {
        for i in 0..n {
            let (a, c) = (v[i], v[(i + 1) % n]);
            for &b in tri.apexes(a, c) {
                let mut w = v.to_vec();
                w.insert(i + 1, b);
                out.push(w);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractibilityStatus {
    Contractible,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractibilityVerdict {
    pub status: ContractibilityStatus,
    /// Loops from the input to a single vertex, each one move from the
    /// previous (up to rotation and reversal).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Vec<u32>>>,
    pub states_visited: usize,
    pub budget: usize,
}

impl ContractibilityVerdict {
    pub fn is_contractible(&self) -> bool {
        self.status == ContractibilityStatus::Contractible
    }
}

/// Search over loops reachable by the three moves, capped at `budget`
/// visited loops and loop length `2k + 2`. Shorter loops are expanded
/// first (ties in discovery order), so shrinking moves are tried before
/// detours.
pub fn is_circuit_contractible(
    tri: &TriangleIndex,
    lp: &EdgeLoop,
    budget: usize,
) -> ContractibilityVerdict {
    let max_len = 2 * lp.len() + 2;
    let start = canonical(lp.vertices());
    let mut states: Vec<Vec<u32>> = vec![start.clone()];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut heap = BinaryHeap::from([Reverse((start.len(), 0usize))]);
    let mut found = (start.len() == 1).then_some(0);
    'search: while let Some(Reverse((_, id))) = heap.pop() {
        if found.is_some() {
            break;
        }
        for next in successors(&states[id], tri, max_len) {
            let next = canonical(&next);
            if index.contains_key(&next) {
                continue;
            }
            if states.len() >= budget {
                break 'search;
            }
            let nid = states.len();
            index.insert(next.clone(), nid);
            parent.push(Some(id));
            heap.push(Reverse((next.len(), nid)));
            let done = next.len() == 1;
            states.push(next);
            if done {
                found = Some(nid);
                break 'search;
            }
        }
    }
    let states_visited = states.len();
    match found {
        Some(end) => {
            let mut chain = vec![states[end].clone()];
            let mut cur = end;
            while let Some(p) = parent[cur] {
                chain.push(states[p].clone());
                cur = p;
            }
            chain.reverse();
            ContractibilityVerdict {
                status: ContractibilityStatus::Contractible,
                witness: Some(chain),
                states_visited,
                budget,
            }
        }
        None => ContractibilityVerdict {
            status: ContractibilityStatus::Unknown,
            witness: None,
            states_visited,
            budget,
        },
    }
}

/// Checks that a witness starts at `lp`, ends at a single vertex, and that
/// each step is one move.
pub fn replay_witness(tri: &TriangleIndex, lp: &EdgeLoop, witness: &[Vec<u32>]) -> bool {
    let max_len = 2 * lp.len() + 2;
    let Some(first) = witness.first() else {
        return false;
    };
    if canonical(first) != canonical(lp.vertices()) || witness.last().map(Vec::len) != Some(1) {
        return false;
    }
    witness.windows(2).all(|w| {
        let target = canonical(&w[1]);
        successors(&w[0], tri, max_len)
            .iter()
            .any(|s| canonical(s) == target)
    })
}

/// Circuits with `min_len..=max_len` distinct vertices, one per rotation and
/// reflection class, each starting at its smallest vertex.
pub fn simple_circuits(g: &AdjacencyGraph, min_len: usize, max_len: usize) -> Vec<EdgeLoop> {
    fn extend(
        g: &AdjacencyGraph,
        path: &mut Vec<u32>,
        min_len: usize,
        max_len: usize,
        out: &mut Vec<EdgeLoop>,
    ) {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() >= min_len.max(3)
            && path[1] < last
            && g.is_edge(last as usize, start as usize)
        {
            out.push(EdgeLoop(path.clone()));
        }
        if path.len() == max_len {
            return;
        }
        for &v in g.neighbours(last as usize) {
            let v = v as u32;
            if v > start && !path.contains(&v) {
                path.push(v);
                extend(g, path, min_len, max_len, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.vertex_count() as u32 {
        extend(g, &mut vec![s], min_len, max_len, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_ms_complex;
    use crate::complex::fixtures::hollow_square;
    use crate::metric::one_skeleton_graph;

    fn setup(k: &SimplicialComplex) -> (AdjacencyGraph, TriangleIndex) {
        (one_skeleton_graph(k), TriangleIndex::new(k))
    }

    fn lp(g: &AdjacencyGraph, labels: &[&str]) -> EdgeLoop {
        let v = labels
            .iter()
            .map(|l| g.index_of(l).unwrap() as u32)
            .collect();
        EdgeLoop::new(g, v).unwrap()
    }

    #[test]
    fn triangle_boundary_contracts_in_two_moves() {
        let k3 = build_ms_complex(3).unwrap();
        let (g, tri) = setup(&k3);
        let l = lp(&g, &["--", "+-", "-+"]);
        assert!(l.is_circuit());
        let v = is_circuit_contractible(&tri, &l, 1000);
        assert!(v.is_contractible());
        let w = v.witness.unwrap();
        assert_eq!(w.len(), 3);
        assert!(replay_witness(&tri, &l, &w));
    }

    #[test]
    fn square_boundary_contracts_through_diagonal() {
        let k3 = build_ms_complex(3).unwrap();
        let (g, tri) = setup(&k3);
        let l = lp(&g, &["--", "+-", "++", "-+"]);
        let v = is_circuit_contractible(&tri, &l, 1000);
        assert!(v.is_contractible());
        assert!(replay_witness(&tri, &l, v.witness.as_ref().unwrap()));
    }

    #[test]
    fn hollow_square_stays_unknown() {
        let k = hollow_square();
        let (g, tri) = setup(&k);
        let l = lp(&g, &["a", "b", "c", "d"]);
        for budget in [1, 10, 1_000_000] {
            let v = is_circuit_contractible(&tri, &l, budget);
            assert_eq!(v.status, ContractibilityStatus::Unknown);
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn loop_validation() {
        let k = hollow_square();
        let g = one_skeleton_graph(&k);
        assert_eq!(EdgeLoop::new(&g, vec![]), Err(LoopError::Empty));
        assert_eq!(EdgeLoop::new(&g, vec![0, 2]), Err(LoopError::NotAdjacent(0, 2)));
        assert_eq!(EdgeLoop::new(&g, vec![0, 7]), Err(LoopError::UnknownVertex(7)));
        assert!(!EdgeLoop::new(&g, vec![0, 1]).unwrap().is_circuit());
    }

    #[test]
    fn backtracks_and_bad_witnesses() {
        let k3 = build_ms_complex(3).unwrap();
        let (g, tri) = setup(&k3);
        let l = lp(&g, &["--", "+-"]);
        let v = is_circuit_contractible(&tri, &l, 10);
        assert!(v.is_contractible());
        assert_eq!(v.witness.as_ref().unwrap().len(), 2);
        let l4 = lp(&g, &["--", "+-", "++", "-+"]);
        // skipping straight to a point is not a single move
        assert!(!replay_witness(&tri, &l4, &[l4.vertices().to_vec(), vec![0]]));
        assert!(!replay_witness(&tri, &l4, &[]));
    }

    #[test]
    fn circuit_enumeration() {
        let k3 = build_ms_complex(3).unwrap();
        let g = one_skeleton_graph(&k3);
        let c = simple_circuits(&g, 3, 5);
        // two triangles and the outer square
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().filter(|l| l.len() == 3).count(), 2);
        let sq = one_skeleton_graph(&hollow_square());
        assert_eq!(simple_circuits(&sq, 3, 5).len(), 1);
        assert_eq!(simple_circuits(&sq, 3, 3).len(), 0);
    }
}
