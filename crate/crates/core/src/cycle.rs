//! Sink-reversal cycles and the maximal simplices they span.
//!
//! A cycle of length `n` visits `n` distinct orientations, reversing at each
//! step a sink not used before, so the reversed vertices run through a
//! permutation of `1..=n` and the walk closes up.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::orientation::{apply_sink_reversal, LinearTree, Orientation, OrientationError};

/// Default cap on `n` for cycle enumeration.
pub const DEFAULT_CYCLE_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    pub orientations: Vec<Orientation>,
    /// 1-based tree vertices reversed at each step.
    pub vertex_order: Vec<usize>,
}

/// First violated clause of the cycle definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum CycleViolation {
    Empty,
    /// Orientations disagree on the tree size, or the sequence lengths do
    /// not match the tree size.
    ShapeMismatch { expected: usize, found: usize },
    NotAPermutation,
    RepeatedOrientation { k: usize },
    /// `k` is the 1-based step.
    NotASink { k: usize, vertex: usize },
    WrongSuccessor { k: usize },
}

impl fmt::Display for CycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleViolation::Empty => write!(f, "empty cycle"),
            CycleViolation::ShapeMismatch { expected, found } => {
                write!(f, "expected length {expected}, found {found}")
            }
            CycleViolation::NotAPermutation => write!(f, "vertex order is not a permutation"),
            CycleViolation::RepeatedOrientation { k } => {
                write!(f, "orientation at step {k} repeats an earlier one")
            }
            CycleViolation::NotASink { k, vertex } => {
                write!(f, "v_{vertex} is not a sink at step {k}")
            }
            CycleViolation::WrongSuccessor { k } => {
                write!(f, "step {k} does not lead to the next orientation")
            }
        }
    }
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.orientations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orientations.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<Orientation> {
        self.orientations.iter().copied().collect()
    }

    /// Rotation starting at the smallest orientation.
    pub fn canonical(&self) -> Cycle {
        let Some(start) = self
            .orientations
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| **r)
            .map(|(i, _)| i)
        else {
            return self.clone();
        };
        let mut orientations = self.orientations.clone();
        let mut vertex_order = self.vertex_order.clone();
        orientations.rotate_left(start);
        if vertex_order.len() == orientations.len() {
            vertex_order.rotate_left(start);
        }
        Cycle {
            orientations,
            vertex_order,
        }
    }
}

pub fn validate_cycle(c: &Cycle) -> Result<(), CycleViolation> {
    let len = c.orientations.len();
    if len == 0 {
        return Err(CycleViolation::Empty);
    }
    let n = c.orientations[0].tree_size();
    if len != n {
        return Err(CycleViolation::ShapeMismatch {
            expected: n,
            found: len,
        });
    }
    if let Some(bad) = c.orientations.iter().find(|r| r.tree_size() != n) {
        return Err(CycleViolation::ShapeMismatch {
            expected: n,
            found: bad.tree_size(),
        });
    }
    if c.vertex_order.len() != n {
        return Err(CycleViolation::ShapeMismatch {
            expected: n,
            found: c.vertex_order.len(),
        });
    }

    let mut seen = vec![false; n + 1];
    for &j in &c.vertex_order {
        if j == 0 || j > n || seen[j] {
            return Err(CycleViolation::NotAPermutation);
        }
        seen[j] = true;
    }

    for k in 1..n {
        if c.orientations[..k].contains(&c.orientations[k]) {
            return Err(CycleViolation::RepeatedOrientation { k: k + 1 });
        }
    }

    for (k, (rho, &j)) in c.orientations.iter().zip(&c.vertex_order).enumerate() {
        let next = match apply_sink_reversal(rho, j) {
            Ok(next) => next,
            Err(_) => return Err(CycleViolation::NotASink { k: k + 1, vertex: j }),
        };
        if next != c.orientations[(k + 1) % n] {
            return Err(CycleViolation::WrongSuccessor { k: k + 1 });
        }
    }
    Ok(())
}

fn check_cap(n: usize, cap: usize) -> Result<(), OrientationError> {
    LinearTree::new(n)?;
    if n > cap {
        return Err(OrientationError::NTooLarge(n));
    }
    Ok(())
}

/// Every cycle of the `n`-vertex tree up to rotation, each starting at its
/// smallest orientation. Sorted by `(orientations, vertex_order)`.
pub fn enumerate_cycles(n: usize) -> Result<Vec<Cycle>, OrientationError> {
    enumerate_cycles_capped(n, DEFAULT_CYCLE_CAP)
}

pub fn enumerate_cycles_capped(n: usize, cap: usize) -> Result<Vec<Cycle>, OrientationError> {
    check_cap(n, cap)?;
    let roots = crate::orientation::all_orientations(n)?;
    let mut cycles: Vec<Cycle> = roots
        .par_iter()
        .flat_map_iter(|root| {
            let mut out = Vec::new();
            let mut search = Search {
                n,
                root: *root,
                path: vec![*root],
                order: Vec::with_capacity(n),
                out: &mut out,
            };
            search.dfs(*root, 0);
            out
        })
        .collect();
    cycles.sort_by(|a, b| {
        a.orientations
            .cmp(&b.orientations)
            .then_with(|| a.vertex_order.cmp(&b.vertex_order))
    });
    Ok(cycles)
}

struct Search<'a> {
    n: usize,
    root: Orientation,
    path: Vec<Orientation>,
    order: Vec<usize>,
    out: &'a mut Vec<Cycle>,
}

impl Search<'_> {
    fn dfs(&mut self, current: Orientation, used: u32) {
        let depth = self.order.len();
        for j in 1..=self.n {
            if used >> j & 1 == 1 || !current.is_sink(j) {
                continue;
            }
            let next = apply_sink_reversal(&current, j).expect("sink checked");
            if depth + 1 == self.n {
                if next == self.root {
                    let mut order = self.order.clone();
                    order.push(j);
                    self.out.push(Cycle {
                        orientations: self.path.clone(),
                        vertex_order: order,
                    });
                }
                continue;
            }
            // the root must stay the smallest member; members stay distinct
            if next <= self.root || self.path.contains(&next) {
                continue;
            }
            self.path.push(next);
            self.order.push(j);
            self.dfs(next, used | 1 << j);
            self.path.pop();
            self.order.pop();
        }
    }
}

/// Vertex set of at least one cycle; sorted, `n` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MaximalSimplex(pub Vec<Orientation>);

impl MaximalSimplex {
    pub fn vertices(&self) -> &[Orientation] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn maximal_simplices(n: usize) -> Result<Vec<MaximalSimplex>, OrientationError> {
    maximal_simplices_capped(n, DEFAULT_CYCLE_CAP)
}

pub fn maximal_simplices_capped(
    n: usize,
    cap: usize,
) -> Result<Vec<MaximalSimplex>, OrientationError> {
    Ok(simplices_of(&enumerate_cycles_capped(n, cap)?))
}

/// Deduplicated, sorted vertex sets of the given cycles.
pub fn simplices_of(cycles: &[Cycle]) -> Vec<MaximalSimplex> {
    cycles
        .iter()
        .map(|c| MaximalSimplex(c.vertex_set().into_iter().collect()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}
