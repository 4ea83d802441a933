//! Finite simplicial complexes stored as a canonical facet list.
//!
//! Vertices are labelled by strings kept in ascending order; facets are
//! ascending index lists, sorted. Lower faces are enumerated on demand.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::cycle::{maximal_simplices_capped, DEFAULT_CYCLE_CAP};
use crate::knot::TwistSequence;
use crate::orientation::{all_orientations, Orientation, OrientationError};

/// A face as an ascending list of vertex indices.
pub type Face = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("vertex labels are not strictly ascending at position {0}")]
    UnsortedVertices(usize),
    #[error("facet {0} is empty, unsorted or references a missing vertex")]
    BadFacet(usize),
    #[error("facets are not strictly ascending at position {0}")]
    UnsortedFacets(usize),
    #[error("facet {inner} is contained in facet {outer}")]
    NestedFacets { inner: usize, outer: usize },
    #[error("vertex {0} lies in no facet")]
    UncoveredVertex(usize),
    #[error("face count exceeds budget {0}")]
    BudgetExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n: Option<usize>,
    twist_sequence: Option<TwistSequence>,
    labels: Vec<String>,
    facets: Vec<Face>,
    facet_sets: Vec<FixedBitSet>,
}

impl SimplicialComplex {
    /// Builds a complex from parts that must already be canonical.
    pub fn from_parts(labels: Vec<String>, facets: Vec<Face>) -> Result<Self, ComplexError> {
        for i in 1..labels.len() {
            if labels[i - 1] >= labels[i] {
                return Err(ComplexError::UnsortedVertices(i));
            }
        }
        let nv = labels.len();
        for (i, f) in facets.iter().enumerate() {
            let sorted = f.windows(2).all(|w| w[0] < w[1]);
            if f.is_empty() || !sorted || f.iter().any(|&v| v as usize >= nv) {
                return Err(ComplexError::BadFacet(i));
            }
        }
        for i in 1..facets.len() {
            if facets[i - 1] >= facets[i] {
                return Err(ComplexError::UnsortedFacets(i));
            }
        }
        let facet_sets: Vec<FixedBitSet> = facets.iter().map(|f| bitset(nv, f)).collect();

        let mut by_size: Vec<usize> = (0..facets.len()).collect();
        by_size.sort_by_key(|&i| facets[i].len());
        for &i in &by_size {
            let larger = by_size.partition_point(|&j| facets[j].len() <= facets[i].len());
            for &j in &by_size[larger..] {
                if facet_sets[i].is_subset(&facet_sets[j]) {
                    return Err(ComplexError::NestedFacets { inner: i, outer: j });
                }
            }
        }
        let mut covered = FixedBitSet::with_capacity(nv);
        for s in &facet_sets {
            covered.union_with(s);
        }
        if let Some(v) = (0..nv).find(|&v| !covered.contains(v)) {
            return Err(ComplexError::UncoveredVertex(v));
        }

        Ok(SimplicialComplex {
            n: None,
            twist_sequence: None,
            labels,
            facets,
            facet_sets,
        })
    }

    /// Builds a complex from labelled vertex sets, canonicalising the order
    /// and discarding sets contained in others.
    pub fn from_labeled_sets<S: AsRef<str>>(sets: &[Vec<S>]) -> Result<Self, ComplexError> {
        let labels: Vec<String> = sets
            .iter()
            .flatten()
            .map(|s| s.as_ref().to_owned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index = |s: &str| labels.binary_search_by(|l| l.as_str().cmp(s)).unwrap() as u32;
        let mut faces: Vec<Face> = sets
            .iter()
            .map(|set| {
                let mut f: Face = set.iter().map(|s| index(s.as_ref())).collect();
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        faces.sort();
        faces.dedup();
        let sets: Vec<HashSet<u32>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        let facets: Vec<Face> = faces
            .iter()
            .enumerate()
            .filter(|(i, f)| {
                !sets.iter().enumerate().any(|(j, s)| {
                    j != *i && s.len() > f.len() && f.iter().all(|v| s.contains(v))
                })
            })
            .map(|(_, f)| f.clone())
            .collect();
        Self::from_parts(labels, facets)
    }

    /// The full simplex on the given labels.
    pub fn simplex<S: AsRef<str>>(labels: &[S]) -> Result<Self, ComplexError> {
        let set: Vec<&str> = labels.iter().map(AsRef::as_ref).collect();
        Self::from_labeled_sets(&[set])
    }

    pub fn with_tree_size(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_twist_sequence(mut self, seq: TwistSequence) -> Self {
        self.twist_sequence = Some(seq);
        self
    }

    /// Tree size when the vertices are orientations.
    pub fn tree_size(&self) -> Option<usize> {
        self.n
    }

    pub fn twist_sequence(&self) -> Option<&TwistSequence> {
        self.twist_sequence.as_ref()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    /// Vertex labels parsed as orientations.
    pub fn orientations(&self) -> Result<Vec<Orientation>, OrientationError> {
        self.labels.iter().map(|l| l.parse()).collect()
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(1) - 1
    }

    pub fn is_pure(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dimension() + 1)
    }

    /// Whether the vertex set spans a face.
    pub fn contains_face(&self, vertices: &[u32]) -> bool {
        let set = bitset(self.labels.len(), vertices);
        self.facet_sets.iter().any(|f| set.is_subset(f))
    }

    /// All faces of dimension `k`, sorted.
    pub fn faces(&self, k: usize) -> Vec<Face> {
        let mut set = HashSet::new();
        for f in &self.facets {
            if f.len() > k {
                for_each_subset(f, k + 1, &mut |s| {
                    set.insert(s.to_vec());
                });
            }
        }
        let mut out: Vec<Face> = set.into_iter().collect();
        out.sort();
        out
    }

    /// Faces grouped by dimension, aborting when more than `budget` faces
    /// turn up.
    pub fn faces_by_dimension(&self, budget: usize) -> Result<Vec<Vec<Face>>, ComplexError> {
        let mut total = 0usize;
        let mut out = Vec::with_capacity(self.dimension() + 1);
        for k in 0..=self.dimension() {
            let mut set = HashSet::new();
            for f in self.facets.iter().filter(|f| f.len() > k) {
                for_each_subset(f, k + 1, &mut |s| {
                    set.insert(s.to_vec());
                });
                if total + set.len() > budget {
                    return Err(ComplexError::BudgetExceeded(budget));
                }
            }
            total += set.len();
            let mut faces: Vec<Face> = set.into_iter().collect();
            faces.sort();
            out.push(faces);
        }
        Ok(out)
    }

    /// Edges of the complex as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.faces(1)
            .into_iter()
            .map(|e| (e[0] as usize, e[1] as usize))
            .collect()
    }
}

pub(crate) fn bitset(len: usize, items: &[u32]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    for &v in items {
        s.insert(v as usize);
    }
    s
}

/// Calls `f` on every `k`-element subset of `items`, in lexicographic order.
pub fn for_each_subset(items: &[u32], k: usize, f: &mut impl FnMut(&[u32])) {
    fn go(items: &[u32], k: usize, start: usize, buf: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let need = k - buf.len();
        for i in start..=items.len() - need {
            buf.push(items[i]);
            go(items, k, i + 1, buf, f);
            buf.pop();
        }
    }
    if k > items.len() {
        return;
    }
    let mut buf = Vec::with_capacity(k);
    go(items, k, 0, &mut buf, f);
}

/// The Kakimizu complex of the `n`-vertex linear tree: vertices are all
/// orientations, maximal simplices are vertex sets of cycles.
pub fn build_ms_complex(n: usize) -> Result<SimplicialComplex, ComplexError> {
    build_ms_complex_capped(n, DEFAULT_CYCLE_CAP)
}

pub fn build_ms_complex_capped(n: usize, cap: usize) -> Result<SimplicialComplex, ComplexError> {
    let vertices = all_orientations(n)?;
    let labels: Vec<String> = vertices.iter().map(Orientation::to_sign_string).collect();
    let mut facets: Vec<Face> = maximal_simplices_capped(n, cap)?
        .iter()
        .map(|s| {
            s.vertices()
                .iter()
                .map(|r| vertices.binary_search(r).expect("orientation listed") as u32)
                .collect()
        })
        .collect();
    facets.sort();
    Ok(SimplicialComplex::from_parts(labels, facets)?.with_tree_size(n))
}

/// Face counts `f_0, .., f_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }
}

pub fn f_vector(k: &SimplicialComplex) -> FVector {
    FVector((0..=k.dimension()).map(|d| k.faces(d).len() as u64).collect())
}

pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    f_vector(k)
        .0
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagVerdict {
    pub flag: bool,
    /// A clique of the 1-skeleton spanning no face, all of whose proper
    /// subsets are faces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
}

/// Checks that every clique of the 1-skeleton is a face by running
/// Bron-Kerbosch with pivoting over maximal cliques, stopping at the first
/// maximal clique that is not a face.
pub fn is_flag(k: &SimplicialComplex) -> FlagVerdict {
    let nv = k.vertex_count();
    let mut adj = vec![FixedBitSet::with_capacity(nv); nv];
    for (a, b) in k.edges() {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut p = FixedBitSet::with_capacity(nv);
    p.insert_range(..);
    let mut search = CliqueSearch {
        complex: k,
        adj: &adj,
        clique: Vec::new(),
        bad: None,
    };
    search.expand(p, FixedBitSet::with_capacity(nv));

    let Some(clique) = search.bad else {
        return FlagVerdict {
            flag: true,
            witness: None,
        };
    };
    // smallest non-face subset; every smaller subset was a face
    let mut witness = None;
    for size in 2..=clique.len() {
        for_each_subset(&clique, size, &mut |s| {
            if witness.is_none() && !k.contains_face(s) {
                witness = Some(s.to_vec());
            }
        });
        if witness.is_some() {
            break;
        }
    }
    let witness = witness.expect("maximal clique is a non-face");
    FlagVerdict {
        flag: false,
        witness: Some(
            witness
                .iter()
                .map(|&v| k.labels()[v as usize].clone())
                .collect(),
        ),
    }
}

struct CliqueSearch<'a> {
    complex: &'a SimplicialComplex,
    adj: &'a [FixedBitSet],
    clique: Vec<u32>,
    bad: Option<Vec<u32>>,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut p: FixedBitSet, mut x: FixedBitSet) {
        if self.bad.is_some() {
            return;
        }
        if p.is_clear() && x.is_clear() {
            let mut c = self.clique.clone();
            c.sort_unstable();
            if !self.complex.contains_face(&c) {
                self.bad = Some(c);
            }
            return;
        }
        let pivot = p
            .union(&x)
            .max_by_key(|&u| p.intersection(&self.adj[u]).count())
            .expect("p or x non-empty");
        let candidates: Vec<usize> = p.difference(&self.adj[pivot]).collect();
        for v in candidates {
            let mut p2 = p.clone();
            p2.intersect_with(&self.adj[v]);
            let mut x2 = x.clone();
            x2.intersect_with(&self.adj[v]);
            self.clique.push(v as u32);
            self.expand(p2, x2);
            self.clique.pop();
            if self.bad.is_some() {
                return;
            }
            p.set(v, false);
            x.insert(v);
        }
    }
}

/// Faces of dimension at most `k`, with the maximal ones as facets.
pub fn skeleton(c: &SimplicialComplex, k: usize) -> SimplicialComplex {
    let mut facets: Vec<Face> = c
        .facets()
        .iter()
        .filter(|f| f.len() <= k)
        .cloned()
        .collect();
    facets.extend(c.faces(k));
    facets.sort();
    let mut out = SimplicialComplex::from_parts(c.labels.clone(), facets)
        .expect("skeleton of a valid complex is valid");
    out.n = c.n;
    out.twist_sequence = c.twist_sequence.clone();
    out
}
