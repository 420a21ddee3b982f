//! Homogeneous-set machinery: exact clique/independence numbers by branch
//! and bound, the bipartite variant, Erdős–Szekeres thresholds, and a greedy
//! two-budget Ramsey extractor.

use crate::error::{Error, Result};
use crate::graph::{words_for, Graph, NodeSet};

pub const DEFAULT_RM_CAP: usize = 512;
pub const DEFAULT_BIPARTITE_CAP: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum HomogeneousKind {
    Clique,
    Independent,
}

impl HomogeneousKind {
    pub fn flipped(self) -> Self {
        match self {
            HomogeneousKind::Clique => HomogeneousKind::Independent,
            HomogeneousKind::Independent => HomogeneousKind::Clique,
        }
    }
}

impl std::fmt::Display for HomogeneousKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HomogeneousKind::Clique => write!(f, "clique"),
            HomogeneousKind::Independent => write!(f, "independent"),
        }
    }
}

/// A node set that is complete or edgeless in its owning graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousSet {
    pub kind: HomogeneousKind,
    pub members: NodeSet,
}

impl HomogeneousSet {
    /// Rechecks the homogeneity claim against the graph.
    pub fn verify(&self, g: &Graph) -> bool {
        let members = self.members.members();
        if members.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                let adjacent = g.has_edge(x, y);
                match self.kind {
                    HomogeneousKind::Clique if !adjacent => return false,
                    HomogeneousKind::Independent if adjacent => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

// ---------------------------------------------------------------------------
// exact maximum clique (branch and bound with greedy colouring)
// ---------------------------------------------------------------------------

struct CliqueSearch<'g> {
    g: &'g Graph,
    w: usize,
    best: Vec<usize>,
}

impl<'g> CliqueSearch<'g> {
    fn row_and(&self, v: usize, set: &[u64], out: &mut Vec<u64>) {
        out.clear();
        out.extend(self.g.row(v).iter().zip(set).map(|(a, b)| a & b));
    }

    fn set_pop(set: &[u64]) -> usize {
        set.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn lowest(set: &[u64]) -> Option<usize> {
        for (wi, &word) in set.iter().enumerate() {
            if word != 0 {
                return Some(wi * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Greedy colouring of the candidate set; returns vertices with their
    /// colour numbers in non-decreasing colour order.
    fn color_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut remaining = cand.to_vec();
        let mut verts = Vec::with_capacity(Self::set_pop(cand));
        let mut colors = Vec::with_capacity(verts.capacity());
        let mut color = 0usize;
        let mut q = vec![0u64; self.w];
        while Self::set_pop(&remaining) > 0 {
            color += 1;
            q.copy_from_slice(&remaining);
            while let Some(v) = Self::lowest(&q) {
                verts.push(v);
                colors.push(color);
                remaining[v / 64] &= !(1 << (v % 64));
                // drop v and its neighbours from this colour class
                q[v / 64] &= !(1 << (v % 64));
                for (qw, rw) in q.iter_mut().zip(self.g.row(v)) {
                    *qw &= !rw;
                }
            }
        }
        (verts, colors)
    }

    fn expand(&mut self, r: &mut Vec<usize>, cand: &mut Vec<u64>) {
        let (verts, colors) = self.color_sort(cand);
        for i in (0..verts.len()).rev() {
            let v = verts[i];
            if r.len() + colors[i] <= self.best.len() {
                return;
            }
            let mut next = Vec::with_capacity(self.w);
            self.row_and(v, cand, &mut next);
            r.push(v);
            if Self::set_pop(&next) == 0 {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.expand(r, &mut next);
            }
            r.pop();
            cand[v / 64] &= !(1 << (v % 64));
        }
    }
}

/// Exact maximum clique, deterministic witness.
pub fn max_clique(g: &Graph) -> NodeSet {
    let n = g.n();
    let mut search = CliqueSearch {
        g,
        w: words_for(n),
        best: Vec::new(),
    };
    let full = NodeSet::full(n);
    let mut cand = full.words().to_vec();
    let mut r = Vec::new();
    if n > 0 {
        search.expand(&mut r, &mut cand);
    }
    let mut members = search.best;
    members.sort_unstable();
    NodeSet::from_members(n, members).expect("clique members in range")
}

/// Max over the clique and independence numbers, with a witness achieving
/// it (ties prefer the clique). Exact; `n` must stay within the cap.
pub fn rm_number(g: &Graph) -> Result<(usize, HomogeneousSet)> {
    rm_number_capped(g, DEFAULT_RM_CAP)
}

pub fn rm_number_capped(g: &Graph, cap: usize) -> Result<(usize, HomogeneousSet)> {
    let n = g.n();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact homogeneous-number search",
            n,
            cap,
        });
    }
    let clique = max_clique(g);
    let indep = max_clique(&g.complement());
    let set = if clique.len() >= indep.len() {
        HomogeneousSet {
            kind: HomogeneousKind::Clique,
            members: clique,
        }
    } else {
        HomogeneousSet {
            kind: HomogeneousKind::Independent,
            members: indep,
        }
    };
    debug_assert!(set.verify(g));
    Ok((set.len(), set))
}

// ---------------------------------------------------------------------------
// bipartite variant
// ---------------------------------------------------------------------------

/// Largest k with disjoint k-sets A1, A2 such that every cross pair is an
/// edge, or no cross pair is; returns k with a witness pair. Brute force
/// over subsets, so n is capped (memory and time are O(2^n)).
pub fn bipartite_rm(g: &Graph) -> Result<(usize, NodeSet, NodeSet)> {
    bipartite_rm_capped(g, DEFAULT_BIPARTITE_CAP)
}

pub fn bipartite_rm_capped(g: &Graph, cap: usize) -> Result<(usize, NodeSet, NodeSet)> {
    let n = g.n();
    if n > cap || n > 24 {
        return Err(Error::CapExceeded {
            what: "bipartite homogeneous search",
            n,
            cap: cap.min(24),
        });
    }
    if n < 2 {
        return Ok((0, NodeSet::empty(n), NodeSet::empty(n)));
    }
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
    let row = |v: usize| g.row(v)[0];
    // joint[mask] = nodes adjacent to everything in mask;
    // avoid[mask] = nodes adjacent to nothing in mask
    let mut joint = vec![full; 1 << n];
    let mut avoid = vec![full; 1 << n];
    let mut best_k = 0usize;
    let mut best: Option<(u64, u64)> = None;
    for mask in 1u64..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = (mask & (mask - 1)) as usize;
        joint[mask as usize] = joint[rest] & row(v);
        avoid[mask as usize] = avoid[rest] & !row(v) & !(1 << v);
        let k = mask.count_ones() as usize;
        if k <= best_k {
            continue;
        }
        for pool in [joint[mask as usize] & !mask, avoid[mask as usize] & !mask] {
            if pool.count_ones() as usize >= k {
                // take the k lowest candidates as the witness partner
                let mut take = 0u64;
                let mut p = pool;
                for _ in 0..k {
                    let b = p.trailing_zeros();
                    take |= 1 << b;
                    p &= p - 1;
                }
                best_k = k;
                best = Some((mask, take));
                break;
            }
        }
    }
    let to_set = |mask: u64| {
        NodeSet::from_members(n, (0..n).filter(|&v| mask & (1 << v) != 0)).expect("in range")
    };
    match best {
        Some((a1, a2)) => Ok((best_k, to_set(a1), to_set(a2))),
        None => Ok((0, NodeSet::empty(n), NodeSet::empty(n))),
    }
}

// ---------------------------------------------------------------------------
// thresholds
// ---------------------------------------------------------------------------

/// Erdős–Szekeres threshold C(r1 + r2 - 2, r1 - 1): every graph on that many
/// nodes has a clique of size r1 or an independent set of size r2.
pub fn es_bound(r1: u64, r2: u64) -> Result<u128> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::InvalidInput(
            "es_bound requires both sizes >= 1".into(),
        ));
    }
    binomial(r1 as u128 + r2 as u128 - 2, r1 as u128 - 1)
}

fn binomial(n: u128, k: u128) -> Result<u128> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc
            .checked_mul(n - k + i)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / i;
    }
    Ok(acc)
}

/// A valid threshold m with m -> (size, size): exact for size <= 3 (from the
/// built-in table {1, 2, 6}, each verifiable by exhaustive search), and the
/// Erdős–Szekeres bound C(2s-2, s-1) beyond that. Always valid, not always
/// minimal.
pub fn diagonal_ramsey(size: u64) -> Result<u128> {
    match size {
        0 => Err(Error::InvalidInput("diagonal threshold needs size >= 1".into())),
        1 => Ok(1),
        2 => Ok(2),
        3 => Ok(6),
        s => es_bound(s, s),
    }
}

// ---------------------------------------------------------------------------
// greedy Ramsey extraction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum ExtractOutcome {
    Found(HomogeneousSet),
    /// The greedy chain ran out of nodes; the partial chains are still valid
    /// homogeneous sets, just smaller than their budgets.
    Failed {
        partial_clique: NodeSet,
        partial_independent: NodeSet,
    },
}

impl ExtractOutcome {
    pub fn found(&self) -> Option<&HomogeneousSet> {
        match self {
            ExtractOutcome::Found(h) => Some(h),
            ExtractOutcome::Failed { .. } => None,
        }
    }
}

fn es_margin(need1: u64, need2: u64) -> i128 {
    if need1 == 0 || need2 == 0 {
        return 0;
    }
    match es_bound(need1, need2) {
        Ok(v) => v.min(i128::MAX as u128) as i128,
        Err(_) => i128::MAX / 2,
    }
}

/// Iterated pivoting: take the lowest remaining node and recurse into its
/// neighbourhood (the node joins the clique chain) or its non-neighbourhood
/// (the node joins the independent chain), choosing the side with the larger
/// slack against its Erdős–Szekeres budget; ties go to the side containing
/// the smallest remaining node. If n >= es_bound(r1, r2) a set is guaranteed;
/// below the threshold the greedy may fail, which is reported as data.
pub fn ramsey_extract(g: &Graph, r1: usize, r2: usize) -> ExtractOutcome {
    let n = g.n();
    let mut live = NodeSet::full(n);
    let mut clique: Vec<usize> = Vec::new();
    let mut indep: Vec<usize> = Vec::new();
    loop {
        if clique.len() >= r1 {
            return ExtractOutcome::Found(HomogeneousSet {
                kind: HomogeneousKind::Clique,
                members: NodeSet::from_members(n, clique).expect("in range"),
            });
        }
        if indep.len() >= r2 {
            return ExtractOutcome::Found(HomogeneousSet {
                kind: HomogeneousKind::Independent,
                members: NodeSet::from_members(n, indep).expect("in range"),
            });
        }
        let Some(v) = live.min() else {
            return ExtractOutcome::Failed {
                partial_clique: NodeSet::from_members(n, clique).expect("in range"),
                partial_independent: NodeSet::from_members(n, indep).expect("in range"),
            };
        };
        live.remove(v);
        let nb = live.intersection(&g.neighbors(v));
        let mb = live.difference(&g.neighbors(v));
        let need1 = (r1 - clique.len()) as u64;
        let need2 = (r2 - indep.len()) as u64;
        let dn = nb.len() as i128 - es_margin(need1 - 1, need2);
        let dm = mb.len() as i128 - es_margin(need1, need2 - 1);
        let go_neighbors = if dn != dm {
            dn > dm
        } else {
            match (nb.min(), mb.min()) {
                (Some(a), Some(b)) => a < b,
                (Some(_), None) => true,
                _ => false,
            }
        };
        if go_neighbors {
            clique.push(v);
            live = nb;
        } else {
            indep.push(v);
            live = mb;
        }
    }
}

// ---------------------------------------------------------------------------
// homogeneous blocks
// ---------------------------------------------------------------------------

/// The lexicographically first m-subset of `s` that is complete or edgeless,
/// by direct enumeration.
pub(crate) fn exhaustive_homogeneous(g: &Graph, s: &NodeSet, m: usize) -> Option<HomogeneousSet> {
    let members = s.members();
    if members.len() < m {
        return None;
    }
    if m == 0 {
        return Some(HomogeneousSet {
            kind: HomogeneousKind::Clique,
            members: NodeSet::empty(g.n()),
        });
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let pick: Vec<usize> = idx.iter().map(|&i| members[i]).collect();
        let mut all_edges = true;
        let mut no_edges = true;
        'pairs: for (a, &x) in pick.iter().enumerate() {
            for &y in &pick[a + 1..] {
                if g.has_edge(x, y) {
                    no_edges = false;
                } else {
                    all_edges = false;
                }
                if !all_edges && !no_edges {
                    break 'pairs;
                }
            }
        }
        if all_edges || no_edges {
            let kind = if all_edges {
                HomogeneousKind::Clique
            } else {
                HomogeneousKind::Independent
            };
            return Some(HomogeneousSet {
                kind,
                members: NodeSet::from_members(g.n(), pick).expect("in range"),
            });
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + members.len() - m {
                break;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// An m-node subset of `s` on which the graph is complete or edgeless, or
/// None. Exhaustive (hence exact) when |s| <= 20; the greedy extractor on
/// the induced subgraph otherwise, which may miss an existing block.
pub fn homogeneous_block(g: &Graph, s: &NodeSet, m: usize) -> Option<HomogeneousSet> {
    let members = s.members();
    if members.len() < m {
        return None;
    }
    if members.len() <= 20 {
        return exhaustive_homogeneous(g, s, m);
    }
    let sub = g.induced_subgraph(s).expect("subset in range");
    match ramsey_extract(&sub, m, m) {
        ExtractOutcome::Found(h) => {
            let mapped: Vec<usize> = h.members.iter().map(|i| members[i]).collect();
            Some(HomogeneousSet {
                kind: h.kind,
                members: NodeSet::from_members(g.n(), mapped).expect("in range"),
            })
        }
        ExtractOutcome::Failed { .. } => None,
    }
}

// ---------------------------------------------------------------------------
// comparison baseline
// ---------------------------------------------------------------------------

/// log2 of the classical richness baseline 2^(n / (2 t^(20 log2(2t)))).
pub fn alon_hajnal_log2(n: u64, t: u64) -> f64 {
    let t = t as f64;
    let denom = 2.0 * t.powf(20.0 * (2.0 * t).log2());
    n as f64 / denom
}

/// The baseline itself; 1.0 when the exponent underflows, infinity when it
/// overflows f64 range.
pub fn alon_hajnal_bound(n: u64, t: u64) -> f64 {
    2f64.powf(alon_hajnal_log2(n, t))
}
