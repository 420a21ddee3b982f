//! Slow, independent reference implementations.
//!
//! Everything here works straight from definitions (permutation search,
//! subset enumeration) and deliberately shares no code with the fast paths
//! it cross-checks. Intended for tests and small inputs only.

use std::collections::HashMap;

use crate::graph::{Graph, NodeSet};
use crate::ramsey::{HomogeneousKind, HomogeneousSet};

/// The labeled graph whose upper-triangle edge bits (pair (i,j), i < j, in
/// column-major order) are the low bits of `mask`.
pub fn graph_from_bitmask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << k) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::build(n, &edges).expect("mask edges are in range")
}

/// Isomorphism by backtracking permutation search with degree pruning.
pub fn perm_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }

    fn extend(g: &Graph, h: &Graph, v: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = g.n();
        if v == n {
            return true;
        }
        for t in 0..n {
            if used[t] || g.degree(v) != h.degree(t) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], t)) {
                map[v] = t;
                used[t] = true;
                if extend(g, h, v + 1, map, used) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(g, h, 0, &mut map, &mut used)
}

/// Minimum adjacency bit string over all n! orderings; equal strings iff
/// isomorphic. Only sensible for n <= 10.
pub fn min_adjacency_form(g: &Graph) -> Vec<u8> {
    let n = g.n();
    assert!(n <= 10, "permutation canonical form is for n <= 10");
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut bytes = Vec::with_capacity(n * n / 8 + 1);
        let mut acc = 0u8;
        let mut used = 0u8;
        for i in 0..n {
            for j in (i + 1)..n {
                acc = (acc << 1) | u8::from(g.has_edge(perm[i], perm[j]));
                used += 1;
                if used == 8 {
                    bytes.push(acc);
                    acc = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            bytes.push(acc << (8 - used));
        }
        if best.as_ref().is_none_or(|b| bytes < *b) {
            best = Some(bytes);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Counts induced-subgraph isomorphism classes by pairwise permutation
/// search over all 2^n subsets (empty subgraph included).
pub fn count_iso_classes_by_search(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 16, "subset enumeration oracle is for n <= 16");
    let mut classes: HashMap<(usize, Vec<usize>), Vec<Graph>> = HashMap::new();
    let mut count = 0usize;
    for mask in 0u64..(1 << n) {
        let s = NodeSet::from_members(n, (0..n).filter(|&v| mask & (1 << v) != 0)).unwrap();
        let sub = g.induced_subgraph(&s).unwrap();
        let mut degs: Vec<usize> = (0..sub.n()).map(|v| sub.degree(v)).collect();
        degs.sort_unstable();
        let bucket = classes.entry((sub.n(), degs)).or_default();
        if !bucket.iter().any(|rep| perm_isomorphic(rep, &sub)) {
            bucket.push(sub);
            count += 1;
        }
    }
    count
}

fn mask_is_clique(g: &Graph, mask: u64) -> bool {
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let mut rest = m;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !g.has_edge(v, u) {
                return false;
            }
        }
    }
    true
}

/// Largest clique by subset enumeration (lowest-mask witness).
pub fn max_clique_exhaustive(g: &Graph) -> NodeSet {
    let n = g.n();
    assert!(n <= 20, "subset enumeration oracle is for n <= 20");
    let mut best_mask = 0u64;
    let mut best = 0u32;
    for mask in 0u64..(1 << n) {
        if mask.count_ones() > best && mask_is_clique(g, mask) {
            best = mask.count_ones();
            best_mask = mask;
        }
    }
    NodeSet::from_members(n, (0..n).filter(|&v| best_mask & (1 << v) != 0)).unwrap()
}

/// Largest homogeneous set by subset enumeration; ties prefer the clique.
pub fn max_homogeneous_exhaustive(g: &Graph) -> HomogeneousSet {
    let clique = max_clique_exhaustive(g);
    let indep = max_clique_exhaustive(&g.complement());
    if clique.len() >= indep.len() {
        HomogeneousSet {
            kind: HomogeneousKind::Clique,
            members: clique,
        }
    } else {
        HomogeneousSet {
            kind: HomogeneousKind::Independent,
            members: indep,
        }
    }
}

/// Largest k admitting disjoint k-sets with all cross pairs edges or none,
/// by direct double subset enumeration.
pub fn bipartite_exhaustive(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 12, "double subset enumeration oracle is for n <= 12");
    let mut best = 0usize;
    for a1 in 1u64..(1 << n) {
        let k = a1.count_ones() as usize;
        if k <= best {
            continue;
        }
        'a2: for a2 in 1u64..(1 << n) {
            if a2 & a1 != 0 || a2.count_ones() as usize != k {
                continue;
            }
            let mut all_edges = true;
            let mut no_edges = true;
            let mut m1 = a1;
            while m1 != 0 {
                let x = m1.trailing_zeros() as usize;
                m1 &= m1 - 1;
                let mut m2 = a2;
                while m2 != 0 {
                    let y = m2.trailing_zeros() as usize;
                    m2 &= m2 - 1;
                    if g.has_edge(x, y) {
                        no_edges = false;
                    } else {
                        all_edges = false;
                    }
                    if !all_edges && !no_edges {
                        continue 'a2;
                    }
                }
            }
            best = k;
            break;
        }
    }
    best
}

/// Nodes adjacent to exactly one of x and y, straight from the definition.
pub fn dif_by_definition(g: &Graph, x: usize, y: usize) -> Vec<usize> {
    (0..g.n())
        .filter(|&z| g.has_edge(z, x) != g.has_edge(z, y))
        .collect()
}

/// Conflict sets by the literal quadruple loop: j lands in u_i iff some
/// member of block j is adjacent to exactly one of block i's representative
/// and another block-i member.
pub fn conflicts_by_definition(g: &Graph, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let b = blocks.len();
    let mut out = vec![Vec::new(); b];
    for i in 0..b {
        let m = blocks[i].len();
        for j in 0..b {
            if j == i {
                continue;
            }
            'found: for l1 in 1..m {
                for l2 in 0..blocks[j].len() {
                    let z = blocks[j][l2];
                    let x0 = blocks[i][0];
                    let x1 = blocks[i][l1];
                    if g.has_edge(z, x0) != g.has_edge(z, x1) {
                        out[i].push(j);
                        break 'found;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_isomorphic_basics() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(perm_isomorphic(&c5, &c5.complement()));
        assert!(!perm_isomorphic(
            &Graph::complete(3).unwrap(),
            &Graph::path(3).unwrap()
        ));
    }

    #[test]
    fn min_adjacency_form_detects_relabelling() {
        let a = Graph::build(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Graph::build(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(min_adjacency_form(&a), min_adjacency_form(&b));
        assert_ne!(
            min_adjacency_form(&a),
            min_adjacency_form(&Graph::cycle(4).unwrap())
        );
    }

    #[test]
    fn class_count_small_known_values() {
        assert_eq!(count_iso_classes_by_search(&Graph::complete(3).unwrap()), 4);
        assert_eq!(count_iso_classes_by_search(&Graph::path(3).unwrap()), 5);
        assert_eq!(count_iso_classes_by_search(&Graph::cycle(5).unwrap()), 8);
    }

    #[test]
    fn exhaustive_clique_and_bipartite() {
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(max_clique_exhaustive(&c5).len(), 2);
        assert_eq!(max_homogeneous_exhaustive(&c5).members.len(), 2);
        let k22 = Graph::build(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(bipartite_exhaustive(&k22), 2);
        assert_eq!(bipartite_exhaustive(&Graph::empty(4).unwrap()), 2);
        assert_eq!(bipartite_exhaustive(&Graph::complete(2).unwrap()), 1);
    }

    #[test]
    fn dif_matches_fast_path() {
        for seed in 0..6 {
            let g = Graph::random(9, 0.5, seed).unwrap();
            for x in 0..9 {
                for y in 0..9 {
                    assert_eq!(
                        dif_by_definition(&g, x, y),
                        g.dif_set(x, y).unwrap().members()
                    );
                }
            }
        }
    }
}
