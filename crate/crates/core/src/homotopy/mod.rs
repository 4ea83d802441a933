//! Contractibility evidence: integer homology, collapses, and null-homotopies
//! of short circuits.

mod circuit;
mod collapse;
pub mod snf;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use circuit::{
    is_circuit_contractible, replay_witness, simple_circuits, ContractibilityStatus,
    ContractibilityVerdict, EdgeLoop, LoopError, TriangleIndex, DEFAULT_CIRCUIT_BUDGET,
};
pub use collapse::{collapse_certificate, replay_collapse, CollapseCertificate};

use crate::complex::{Face, SimplicialComplex};
use crate::metric::{diameter, one_skeleton_graph};
use snf::{invariant_factors, SparseMatrix};

pub const DEFAULT_FACE_BUDGET: usize = 1_000_000;
/// Vertex cap for the short-circuit criterion.
pub const CIRCUIT_VERTEX_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error("work exceeds budget {0}")]
    BudgetExceeded(usize),
    #[error("integer overflow during Smith normal form")]
    Overflow,
    #[error("invariant factors fail the divisibility check")]
    SnfSelfCheck,
}

/// Reduced integral homology, one entry per dimension `0..=dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub reduced_betti: Vec<u64>,
    /// Torsion coefficients (> 1) per dimension.
    pub torsion: Vec<Vec<u64>>,
}

impl HomologySummary {
    pub fn is_trivial(&self) -> bool {
        self.reduced_betti.iter().all(|&b| b == 0) && self.torsion.iter().all(Vec::is_empty)
    }
}

/// Boundary map from `k`-faces (columns) to `(k-1)`-faces (rows).
fn boundary_matrix(lower: &[Face], upper: &[Face]) -> SparseMatrix {
    let index: HashMap<&Face, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m = SparseMatrix::new(lower.len(), upper.len());
    for (j, f) in upper.iter().enumerate() {
        for skip in 0..f.len() {
            let mut g = f.clone();
            g.remove(skip);
            let sign = if skip % 2 == 0 { 1 } else { -1 };
            m.set(index[&g], j, sign);
        }
    }
    m
}

pub fn homology(k: &SimplicialComplex, face_budget: usize) -> Result<HomologySummary, HomotopyError> {
    let faces = k
        .faces_by_dimension(face_budget)
        .map_err(|_| HomotopyError::BudgetExceeded(face_budget))?;
    let dim = faces.len() - 1;

    // factors[d] = invariant factors of the boundary out of dimension d;
    // the augmentation plays that role in dimension 0
    let mut factors: Vec<Vec<i64>> = vec![Vec::new(); dim + 2];
    factors[0] = if faces[0].is_empty() { vec![] } else { vec![1] };
    let computed: Vec<Result<Vec<i64>, HomotopyError>> = (1..=dim)
        .into_par_iter()
        .map(|d| invariant_factors(&boundary_matrix(&faces[d - 1], &faces[d])))
        .collect();
    for (d, f) in (1..=dim).zip(computed) {
        factors[d] = f?;
    }

    let mut reduced_betti = Vec::with_capacity(dim + 1);
    let mut torsion = Vec::with_capacity(dim + 1);
    for d in 0..=dim {
        let cells = faces[d].len() as u64;
        let rank_out = factors[d].len() as u64;
        let rank_in = factors[d + 1].len() as u64;
        reduced_betti.push(cells - rank_out - rank_in);
        torsion.push(
            factors[d + 1]
                .iter()
                .filter(|&&x| x > 1)
                .map(|&x| x as u64)
                .collect(),
        );
    }
    Ok(HomologySummary {
        reduced_betti,
        torsion,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionStatus {
    SimplyConnected,
    CriterionFails,
}

/// Outcome of the short-circuit simple-connectivity criterion: diameter at
/// most 2 and every circuit of length 3, 4 or 5 contractible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionVerdict {
    pub status: CriterionStatus,
    /// `None` when the 1-skeleton is disconnected.
    pub diameter: Option<usize>,
    pub diameter_at_most_2: bool,
    /// Circuit counts of length 3, 4, 5.
    pub circuits: [usize; 3],
    pub all_circuits_contractible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unresolved_circuit: Option<Vec<String>>,
    pub reasons: Vec<String>,
}

impl CriterionVerdict {
    pub fn simply_connected(&self) -> bool {
        self.status == CriterionStatus::SimplyConnected
    }
}

/// A failed precondition does not show the complex is not simply
/// connected.
pub fn lemma51_verdict(
    k: &SimplicialComplex,
    circuit_budget: usize,
) -> Result<CriterionVerdict, HomotopyError> {
    if k.vertex_count() > CIRCUIT_VERTEX_CAP {
        return Err(HomotopyError::BudgetExceeded(CIRCUIT_VERTEX_CAP));
    }
    let g = one_skeleton_graph(k);
    let diam = diameter(&g).ok().map(|d| d.diameter);
    let diameter_ok = diam.is_some_and(|d| d <= 2);

    let tri = TriangleIndex::new(k);
    let circuits = simple_circuits(&g, 3, 5);
    let mut counts = [0usize; 3];
    for c in &circuits {
        counts[c.len() - 3] += 1;
    }
    let unresolved = circuits
        .par_iter()
        .find_first(|c| !is_circuit_contractible(&tri, c, circuit_budget).is_contractible());

    let mut reasons = Vec::new();
    match diam {
        None => reasons.push("1-skeleton is disconnected".to_owned()),
        Some(d) if d > 2 => reasons.push(format!("diameter {d} exceeds 2")),
        _ => {}
    }
    if let Some(c) = unresolved {
        reasons.push(format!(
            "circuit of length {} not shown contractible within budget {circuit_budget}",
            c.len()
        ));
    }
    let status = if reasons.is_empty() {
        CriterionStatus::SimplyConnected
    } else {
        CriterionStatus::CriterionFails
    };
    Ok(CriterionVerdict {
        status,
        diameter: diam,
        diameter_at_most_2: diameter_ok,
        circuits: counts,
        all_circuits_contractible: unresolved.is_none(),
        unresolved_circuit: unresolved.map(|c| {
            c.vertices()
                .iter()
                .map(|&v| k.labels()[v as usize].clone())
                .collect()
        }),
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{hollow_square, tetrahedron_boundary};
    use crate::complex::{build_ms_complex, euler_characteristic, skeleton};

    const B: usize = DEFAULT_FACE_BUDGET;

    fn rp2() -> SimplicialComplex {
        let tris = [
            [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2],
            [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4],
        ];
        let sets: Vec<Vec<String>> = tris
            .iter()
            .map(|t| t.iter().map(|v| format!("v{v}")).collect())
            .collect();
        SimplicialComplex::from_labeled_sets(&sets).unwrap()
    }

    #[test]
    fn homology_examples() {
        let h = homology(&build_ms_complex(3).unwrap(), B).unwrap();
        assert_eq!(h.reduced_betti, vec![0, 0, 0]);
        assert!(h.is_trivial());
        let h = homology(&hollow_square(), B).unwrap();
        assert_eq!(h.reduced_betti, vec![0, 1]);
        assert_eq!(h.torsion, vec![Vec::<u64>::new(), vec![]]);
        let h = homology(&build_ms_complex(1).unwrap(), B).unwrap();
        assert_eq!(h.reduced_betti, vec![0]);
    }

    #[test]
    fn homology_detects_spheres_and_torsion() {
        let h = homology(&tetrahedron_boundary(), B).unwrap();
        assert_eq!(h.reduced_betti, vec![0, 0, 1]);
        let h = homology(&rp2(), B).unwrap();
        assert_eq!(h.reduced_betti, vec![0, 0, 0]);
        assert_eq!(h.torsion, vec![vec![], vec![2], vec![]]);
        assert_eq!(euler_characteristic(&rp2()), 1);
    }

    #[test]
    fn skeleton_homology_agrees_below_top() {
        for n in 2..=5 {
            let k = build_ms_complex(n).unwrap();
            let full = homology(&k, B).unwrap();
            for d in 1..n {
                let s = homology(&skeleton(&k, d), B).unwrap();
                assert_eq!(s.reduced_betti[..d], full.reduced_betti[..d], "n={n} d={d}");
                assert_eq!(s.torsion[..d], full.torsion[..d]);
            }
        }
    }

    #[test]
    fn homology_budget() {
        assert_eq!(
            homology(&build_ms_complex(5).unwrap(), 50),
            Err(HomotopyError::BudgetExceeded(50))
        );
    }

    #[test]
    fn criterion_examples() {
        let v = lemma51_verdict(&build_ms_complex(3).unwrap(), DEFAULT_CIRCUIT_BUDGET).unwrap();
        assert!(v.simply_connected(), "{v:?}");
        assert_eq!(v.diameter, Some(2));
        assert_eq!(v.circuits, [2, 1, 0]);

        let v = lemma51_verdict(&build_ms_complex(2).unwrap(), DEFAULT_CIRCUIT_BUDGET).unwrap();
        assert!(v.simply_connected());
        assert_eq!(v.circuits, [0, 0, 0]);

        let v = lemma51_verdict(&hollow_square(), DEFAULT_CIRCUIT_BUDGET).unwrap();
        assert_eq!(v.status, CriterionStatus::CriterionFails);
        assert!(v.diameter_at_most_2);
        assert!(!v.all_circuits_contractible);
        assert_eq!(v.unresolved_circuit.unwrap(), ["a", "b", "c", "d"]);
        assert_eq!(homology(&hollow_square(), B).unwrap().reduced_betti[1], 1);

        let simplex = SimplicialComplex::simplex(&["p", "q", "r", "s"]).unwrap();
        assert!(lemma51_verdict(&simplex, DEFAULT_CIRCUIT_BUDGET)
            .unwrap()
            .simply_connected());
    }

    #[test]
    fn criterion_on_larger_trees_fails_on_diameter_only() {
        for n in 4..=6 {
            let v = lemma51_verdict(&build_ms_complex(n).unwrap(), DEFAULT_CIRCUIT_BUDGET).unwrap();
            assert_eq!(v.status, CriterionStatus::CriterionFails);
            assert_eq!(v.diameter, Some(n - 1));
            assert!(v.all_circuits_contractible, "n={n}");
        }
        assert_eq!(
            lemma51_verdict(&build_ms_complex(8).unwrap(), 10),
            Err(HomotopyError::BudgetExceeded(CIRCUIT_VERTEX_CAP))
        );
    }

    #[test]
    fn three_witnesses_agree_up_to_six() {
        for n in 2..=6 {
            let k = build_ms_complex(n).unwrap();
            assert_eq!(euler_characteristic(&k), 1);
            assert!(homology(&k, B).unwrap().is_trivial());
            let c = collapse_certificate(&k, B).unwrap().expect("collapsible");
            assert!(replay_collapse(&k, &c, B));
        }
    }

    #[test]
    fn octahedron_passes_criterion() {
        // simply connected, though not contractible
        let oct = SimplicialComplex::from_labeled_sets(&[
            vec!["n", "a", "b"], vec!["n", "b", "c"], vec!["n", "c", "d"], vec!["n", "d", "a"],
            vec!["s", "a", "b"], vec!["s", "b", "c"], vec!["s", "c", "d"], vec!["s", "d", "a"],
        ])
        .unwrap();
        let v = lemma51_verdict(&oct, DEFAULT_CIRCUIT_BUDGET).unwrap();
        assert!(v.simply_connected());
        assert_eq!(homology(&oct, B).unwrap().reduced_betti, vec![0, 0, 1]);
    }
}
