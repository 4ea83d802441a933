//! Greedy elementary collapses.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::HomotopyError;
use crate::complex::{Face, SimplicialComplex};

/// Elementary collapses in the order applied, and what is left afterwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollapseCertificate {
    /// `(free face, its unique coface)`
    pub pairs: Vec<(Face, Face)>,
    pub terminal: Vec<Face>,
}

impl CollapseCertificate {
    pub fn collapses_to_point(&self) -> bool {
        self.terminal.len() == 1 && self.terminal[0].len() == 1
    }
}

struct FaceTable {
    faces: Vec<Face>,
    cofaces: Vec<Vec<usize>>,
    boundary: Vec<Vec<usize>>,
}

impl FaceTable {
    fn new(k: &SimplicialComplex, budget: usize) -> Result<Self, HomotopyError> {
        let mut faces: Vec<Face> = k
            .faces_by_dimension(budget)
            .map_err(|_| HomotopyError::BudgetExceeded(budget))?
            .into_iter()
            .flatten()
            .collect();
        faces.sort();
        let index: HashMap<&Face, usize> = faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut cofaces = vec![Vec::new(); faces.len()];
        let mut boundary = vec![Vec::new(); faces.len()];
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 2 {
                continue;
            }
            for skip in 0..f.len() {
                let mut g = f.clone();
                g.remove(skip);
                let j = index[&g];
                boundary[i].push(j);
                cofaces[j].push(i);
            }
        }
        Ok(FaceTable {
            faces,
            cofaces,
            boundary,
        })
    }
}

/// Repeatedly removes the smallest free face (in lexicographic vertex order)
/// with its coface. Returns `None` when the greedy run gets stuck before a
/// single vertex; that outcome says nothing either way about contractibility.
pub fn collapse_certificate(
    k: &SimplicialComplex,
    budget: usize,
) -> Result<Option<CollapseCertificate>, HomotopyError> {
    let table = FaceTable::new(k, budget)?;
    let total = table.faces.len();
    let mut alive = vec![true; total];
    let mut live_cofaces: Vec<usize> = table.cofaces.iter().map(Vec::len).collect();

    let coface_of = |s: usize, alive: &[bool]| -> Option<usize> {
        table.cofaces[s].iter().copied().find(|&t| alive[t])
    };
    let is_free = |s: usize, alive: &[bool], live: &[usize]| -> Option<usize> {
        if !alive[s] || live[s] != 1 {
            return None;
        }
        let t = coface_of(s, alive)?;
        (live[t] == 0).then_some(t)
    };

    let mut candidates: BTreeSet<usize> = (0..total)
        .filter(|&s| is_free(s, &alive, &live_cofaces).is_some())
        .collect();
    let mut pairs = Vec::new();
    while let Some(s) = candidates.pop_first() {
        let Some(t) = is_free(s, &alive, &live_cofaces) else {
            continue;
        };
        alive[s] = false;
        alive[t] = false;
        pairs.push((table.faces[s].clone(), table.faces[t].clone()));
        for &b in table.boundary[t].iter().chain(&table.boundary[s]) {
            if b != s {
                live_cofaces[b] -= 1;
            }
        }
        // freeness can only change on the boundaries of s and t and one
        // level further down
        for &b in table.boundary[t].iter().chain(&table.boundary[s]) {
            if !alive[b] {
                continue;
            }
            candidates.insert(b);
            candidates.extend(table.boundary[b].iter().copied());
        }
    }
    let terminal: Vec<Face> = (0..total)
        .filter(|&i| alive[i])
        .map(|i| table.faces[i].clone())
        .collect();
    let cert = CollapseCertificate { pairs, terminal };
    Ok(cert.collapses_to_point().then_some(cert))
}

/// Replays a certificate against the complex: every pair must be a free
/// face with its unique coface at its step, and the survivors must match
/// the recorded terminal complex.
pub fn replay_collapse(k: &SimplicialComplex, cert: &CollapseCertificate, budget: usize) -> bool {
    let Ok(all) = k.faces_by_dimension(budget) else {
        return false;
    };
    let mut present: HashSet<Face> = all.into_iter().flatten().collect();
    for (s, t) in &cert.pairs {
        if !present.contains(s) || !present.contains(t) {
            return false;
        }
        if t.len() != s.len() + 1 || !s.iter().all(|v| t.contains(v)) {
            return false;
        }
        let others = (0..k.vertex_count() as u32)
            .filter(|v| !s.contains(v))
            .filter(|&v| {
                let mut g = s.clone();
                g.push(v);
                g.sort_unstable();
                present.contains(&g)
            })
            .count();
        let t_maximal = (0..k.vertex_count() as u32).filter(|v| !t.contains(v)).all(|v| {
            let mut g = t.clone();
            g.push(v);
            g.sort_unstable();
            !present.contains(&g)
        });
        if others != 1 || !t_maximal {
            return false;
        }
        present.remove(s);
        present.remove(t);
    }
    let mut rest: Vec<Face> = present.into_iter().collect();
    rest.sort();
    rest == cert.terminal
}
