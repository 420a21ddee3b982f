//! Extremal and probabilistic constructions: the fiber blow-up (conjectured
//! extremal for induced-subgraph richness under a homogeneity constraint)
//! and random search for small-homogeneous-set witnesses.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ramsey::{max_clique, rm_number_capped};
use crate::rng::derive_seed;

/// Replaces each node i of `base` by the m independent nodes m*i .. m*i+m-1
/// (fiber i) and joins every cross-fiber pair over each base edge. Fibers
/// are independent sets because the base adjacency is irreflexive.
pub fn blowup(base: &Graph, m: usize) -> Result<Graph> {
    if m == 0 {
        return Err(Error::InvalidInput("blow-up multiplicity must be >= 1".into()));
    }
    let n = base.n();
    let mut edges = Vec::with_capacity(base.edge_count() * m * m);
    for (i1, i2) in base.edges() {
        for l1 in 0..m {
            for l2 in 0..m {
                edges.push((m * i1 + l1, m * i2 + l2));
            }
        }
    }
    Graph::build(n.checked_mul(m).ok_or(Error::Overflow("blow-up size"))?, &edges)
}

/// The counting ceiling (m+1)^n on the number of induced-subgraph classes of
/// blowup(base, m): a subset's class is determined by its per-fiber sizes.
pub fn blowup_iso_bound(base: &Graph, m: usize) -> BigUint {
    BigUint::from(m + 1).pow(base.n() as u32)
}

/// True iff blowup(base, m) has no clique of size r1 and no independent set
/// of size m * r2. Exact clique searches on the blow-up and its complement.
pub fn blowup_rm_transfer(base: &Graph, m: usize, r1: usize, r2: usize) -> Result<bool> {
    let g = blowup(base, m)?;
    let clique = max_clique(&g).len();
    let indep = max_clique(&g.complement()).len();
    Ok(clique < r1 && indep < m * r2)
}

#[derive(Clone, Debug)]
pub enum WitnessOutcome {
    Found {
        graph: Graph,
        trial: u64,
        rm: usize,
    },
    Exhausted {
        trials: u64,
    },
}

impl WitnessOutcome {
    pub fn found(&self) -> Option<&Graph> {
        match self {
            WitnessOutcome::Found { graph, .. } => Some(graph),
            WitnessOutcome::Exhausted { .. } => None,
        }
    }
}

/// Samples G(n, 1/2) up to `trials` times and returns the first sample whose
/// largest homogeneous set has fewer than `r` nodes. Trial t uses the graph
/// seed derive_seed(seed, t), so the lowest succeeding trial wins
/// deterministically.
pub fn search_ramsey_witness(n: usize, r: usize, trials: u64, seed: u64) -> Result<WitnessOutcome> {
    for trial in 0..trials {
        let g = Graph::random(n, 0.5, derive_seed(seed, trial))?;
        let (rm, _) = rm_number_capped(&g, n.max(crate::ramsey::DEFAULT_RM_CAP))?;
        if rm < r {
            return Ok(WitnessOutcome::Found { graph: g, trial, rm });
        }
    }
    Ok(WitnessOutcome::Exhausted { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{canonical_form, count_induced_iso_classes};
    use crate::ramsey::rm_number;

    #[test]
    fn multiplicity_one_is_identity_up_to_iso() {
        let h = Graph::random(5, 0.5, 2).unwrap();
        let g = blowup(&h, 1).unwrap();
        assert_eq!(canonical_form(&g), canonical_form(&h));
    }

    #[test]
    fn blowup_of_k2_is_complete_bipartite() {
        let g = blowup(&Graph::complete(2).unwrap(), 2).unwrap();
        let k22 = Graph::build(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(canonical_form(&g), canonical_form(&k22));
        assert_eq!(g.n(), 4);
    }

    #[test]
    fn node_count_scales() {
        let h = Graph::cycle(5).unwrap();
        assert_eq!(blowup(&h, 3).unwrap().n(), 15);
        assert!(blowup(&h, 0).is_err());
    }

    #[test]
    fn fibers_are_independent() {
        let h = Graph::random(6, 0.6, 4).unwrap();
        let m = 3;
        let g = blowup(&h, m).unwrap();
        for i in 0..h.n() {
            for l1 in 0..m {
                for l2 in (l1 + 1)..m {
                    assert!(!g.has_edge(m * i + l1, m * i + l2));
                }
            }
        }
    }

    #[test]
    fn iso_bound_values() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(blowup_iso_bound(&k2, 2), BigUint::from(9u32));
        let g = blowup(&k2, 2).unwrap();
        let exact = count_induced_iso_classes(&g).unwrap();
        assert_eq!(exact, 6);
        let h5 = Graph::cycle(5).unwrap();
        assert_eq!(blowup_iso_bound(&h5, 3), BigUint::from(1024u32));
        // m = 1 gives the trivially true 2^n ceiling
        let h = Graph::random(4, 0.5, 8).unwrap();
        assert!(BigUint::from(count_induced_iso_classes(&h).unwrap()) <= blowup_iso_bound(&h, 1));
    }

    #[test]
    fn transfer_checks() {
        // C5 witnesses 5 -/-> (3,3); its 2-blow-up has no triangle and no
        // independent 6-set
        let c5 = Graph::cycle(5).unwrap();
        assert!(blowup_rm_transfer(&c5, 2, 3, 3).unwrap());
        // K2 with m=2: clique number 2 < 3, independence number 2 < 4
        assert!(blowup_rm_transfer(&Graph::complete(2).unwrap(), 2, 3, 2).unwrap());
        // m = 1 reduces to the homogeneous-number check on the base
        let (rm, _) = rm_number(&c5).unwrap();
        assert_eq!(
            blowup_rm_transfer(&c5, 1, 3, 3).unwrap(),
            rm < 3
        );
    }

    #[test]
    fn witness_search_finds_c5_like_graphs() {
        // some 5-node graph with no homogeneous triple exists (C5), so with
        // enough trials the search succeeds and the witness verifies
        let out = search_ramsey_witness(5, 3, 3000, 11).unwrap();
        match out {
            WitnessOutcome::Found { graph, rm, .. } => {
                assert!(rm < 3);
                assert_eq!(rm_number(&graph).unwrap().0, rm);
            }
            WitnessOutcome::Exhausted { .. } => panic!("expected a witness on 5 nodes"),
        }
    }

    #[test]
    fn witness_search_on_six_nodes_must_fail() {
        // every 6-node graph has a homogeneous triple
        let out = search_ramsey_witness(6, 3, 64, 5).unwrap();
        assert!(out.found().is_none());
    }
}
