//! Graph isomorphism via canonical forms, pinned-vertex canonical forms, and
//! the exact count of induced-subgraph isomorphism classes.
//!
//! Canonical forms are computed by individualization-refinement: refine an
//! ordered partition to equitability, branch on the first non-singleton
//! cell, and take the byte-wise minimum leaf encoding. Two prunings keep
//! symmetric graphs tractable: vertices in a known automorphism orbit with an
//! already-explored sibling are skipped, and a sibling subtree whose first
//! leaf repeats the first sibling's first leaf is skipped wholesale (its leaf
//! set is an automorphic image of an explored one).

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{words_for, Graph, NodeSet};
use crate::rng::{stream_rng, STREAM_SUBSET_BASE};
use rand_core::RngCore;

/// Default node cap for the exact 2^n induced-subgraph enumeration.
pub const DEFAULT_ISO_COUNT_CAP: usize = 16;

/// Opaque canonical byte string. Equal bytes mean isomorphic graphs (plain
/// forms) or pin-respecting isomorphic structures (pinned forms); the two
/// kinds never compare equal to each other.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<CanonicalForm> {
        if s.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("odd-length hex form {s:?}")));
        }
        let bytes = (0..s.len() / 2)
            .map(|i| u8::from_str_radix(&s[2 * i..2 * i + 2], 16))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map_err(|_| Error::InvalidInput(format!("bad hex form {s:?}")))?;
        Ok(CanonicalForm(bytes))
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.hex())
    }
}

impl std::fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalForm({})", self.hex())
    }
}

/// A graph with an ordered sequence of distinguished pin nodes. Isomorphisms
/// between pinned graphs must map pin k to pin k.
#[derive(Clone, Debug)]
pub struct PinnedGraph {
    graph: Graph,
    pins: Vec<usize>,
}

impl PinnedGraph {
    pub fn new(graph: Graph, pins: Vec<usize>) -> Result<PinnedGraph> {
        let mut seen = HashSet::new();
        for &p in &pins {
            if p >= graph.n() {
                return Err(Error::InvalidPins(format!(
                    "pin {p} out of range for n = {}",
                    graph.n()
                )));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidPins(format!("duplicate pin {p}")));
            }
        }
        Ok(PinnedGraph { graph, pins })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pins(&self) -> &[usize] {
        &self.pins
    }
}

// ---------------------------------------------------------------------------
// partition refinement search
// ---------------------------------------------------------------------------

type Cells = Vec<Vec<usize>>;

fn cell_mask(n: usize, cell: &[usize]) -> Vec<u64> {
    let mut mask = vec![0u64; words_for(n)];
    for &v in cell {
        mask[v / 64] |= 1 << (v % 64);
    }
    mask
}

fn count_in(row: &[u64], mask: &[u64]) -> u32 {
    row.iter().zip(mask).map(|(a, b)| (a & b).count_ones()).sum()
}

/// Equitable refinement. Splits every cell by the vector of adjacency counts
/// into all cells, ordering sub-cells by count vector; repeats to a fixed
/// point. The resulting partition (and its cell order) is invariant under
/// relabelling.
fn refine(g: &Graph, cells: &mut Cells) {
    loop {
        let masks: Vec<Vec<u64>> = cells.iter().map(|c| cell_mask(g.n(), c)).collect();
        let mut out: Cells = Vec::with_capacity(cells.len());
        let mut changed = false;
        for cell in cells.iter() {
            if cell.len() <= 1 {
                out.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
            for &v in cell {
                let key: Vec<u32> = masks.iter().map(|m| count_in(g.row(v), m)).collect();
                groups.entry(key).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            for (_, sub) in groups {
                out.push(sub);
            }
        }
        *cells = out;
        if !changed {
            return;
        }
    }
}

fn individualize(cells: &Cells, ci: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    for (i, cell) in cells.iter().enumerate() {
        if i == ci {
            out.push(vec![v]);
            out.push(cell.iter().copied().filter(|&x| x != v).collect());
        } else {
            out.push(cell.clone());
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

struct Search<'g> {
    g: &'g Graph,
    n: usize,
    header: Vec<u8>,
    best: Option<Vec<u8>>,
    reference: Option<(Vec<u8>, Vec<usize>)>,
    gens: Vec<Vec<usize>>,
    base: Vec<usize>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, header: Vec<u8>) -> Self {
        Search {
            g,
            n: g.n(),
            header,
            best: None,
            reference: None,
            gens: Vec::new(),
            base: Vec::new(),
        }
    }

    fn emit(&self, inv: &[usize]) -> Vec<u8> {
        let mut out = self.header.clone();
        let mut acc = 0u8;
        let mut used = 0u8;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                acc = (acc << 1) | u8::from(self.g.has_edge(inv[i], inv[j]));
                used += 1;
                if used == 8 {
                    out.push(acc);
                    acc = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            out.push(acc << (8 - used));
        }
        out
    }

    fn process_leaf(&mut self, cells: &Cells) -> Vec<u8> {
        let mut labels = vec![0usize; self.n];
        let mut inv = vec![0usize; self.n];
        for (pos, cell) in cells.iter().enumerate() {
            labels[cell[0]] = pos;
            inv[pos] = cell[0];
        }
        let bytes = self.emit(&inv);
        match &self.reference {
            None => {
                self.reference = Some((bytes.clone(), labels));
                self.best = Some(bytes.clone());
            }
            Some((rbytes, rlabels)) => {
                if *rbytes == bytes && *rlabels != labels {
                    let mut rinv = vec![0usize; self.n];
                    for (x, &l) in rlabels.iter().enumerate() {
                        rinv[l] = x;
                    }
                    let perm: Vec<usize> = (0..self.n).map(|x| rinv[labels[x]]).collect();
                    if !self.gens.contains(&perm) {
                        self.gens.push(perm);
                    }
                }
                if bytes < *self.best.as_ref().expect("best set with reference") {
                    self.best = Some(bytes.clone());
                }
            }
        }
        bytes
    }

    fn in_orbit_of_tried(&mut self, v: usize, tried: &[usize]) -> bool {
        if self.gens.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.n);
        'gens: for perm in &self.gens {
            for &b in &self.base {
                if perm[b] != b {
                    continue 'gens;
                }
            }
            for x in 0..self.n {
                if perm[x] != x {
                    uf.union(x, perm[x]);
                }
            }
        }
        let rv = uf.find(v);
        tried.iter().any(|&u| uf.find(u) == rv)
    }

    /// Fully explores a subtree; returns its leftmost leaf's bytes.
    fn explore(&mut self, mut cells: Cells) -> Vec<u8> {
        refine(self.g, &mut cells);
        let Some(ti) = cells.iter().position(|c| c.len() > 1) else {
            return self.process_leaf(&cells);
        };
        let target = cells[ti].clone();
        let mut tried: Vec<usize> = Vec::new();
        let mut first_bytes: Option<Vec<u8>> = None;
        for &v in &target {
            if !tried.is_empty() && self.in_orbit_of_tried(v, &tried) {
                continue;
            }
            let child = individualize(&cells, ti, v);
            self.base.push(v);
            match &first_bytes {
                None => first_bytes = Some(self.explore(child)),
                Some(fb) => {
                    let pb = self.probe(child.clone());
                    if pb != *fb {
                        self.explore(child);
                    }
                }
            }
            self.base.pop();
            tried.push(v);
        }
        first_bytes.expect("non-empty target cell")
    }

    /// Walks only the leftmost descent of a subtree and processes its leaf.
    fn probe(&mut self, mut cells: Cells) -> Vec<u8> {
        refine(self.g, &mut cells);
        let Some(ti) = cells.iter().position(|c| c.len() > 1) else {
            return self.process_leaf(&cells);
        };
        let v = cells[ti][0];
        let child = individualize(&cells, ti, v);
        self.probe(child)
    }

    fn run(mut self, initial: Cells) -> CanonicalForm {
        let initial: Cells = initial.into_iter().filter(|c| !c.is_empty()).collect();
        if initial.iter().all(|c| c.is_empty()) && self.n > 0 {
            unreachable!("initial partition must cover all nodes");
        }
        self.explore(initial);
        CanonicalForm(self.best.expect("at least one leaf"))
    }
}

fn header(tag: u8, n: usize, pins: Option<usize>) -> Vec<u8> {
    let mut h = vec![tag];
    h.extend_from_slice(&(n as u32).to_le_bytes());
    if let Some(k) = pins {
        h.extend_from_slice(&(k as u32).to_le_bytes());
    }
    h
}

/// Canonical form of a graph: equal forms iff isomorphic. Stable across runs.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    if n == 0 {
        return CanonicalForm(header(b'G', 0, None));
    }
    let initial: Cells = vec![(0..n).collect()];
    Search::new(g, header(b'G', n, None)).run(initial)
}

/// Canonical form refined by pins: equal forms iff some isomorphism maps pin
/// k to pin k for every k. Lives in a separate namespace from plain forms.
pub fn pinned_canonical_form(pg: &PinnedGraph) -> CanonicalForm {
    let g = pg.graph();
    let n = g.n();
    let hdr = header(b'P', n, Some(pg.pins().len()));
    if n == 0 {
        return CanonicalForm(hdr);
    }
    let pinned: HashSet<usize> = pg.pins().iter().copied().collect();
    let mut initial: Cells = pg.pins().iter().map(|&p| vec![p]).collect();
    let rest: Vec<usize> = (0..n).filter(|v| !pinned.contains(v)).collect();
    if !rest.is_empty() {
        initial.push(rest);
    }
    Search::new(g, hdr).run(initial)
}

/// True iff an edge-preserving bijection between the two graphs exists.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    canonical_form(g) == canonical_form(h)
}

// ---------------------------------------------------------------------------
// induced-subgraph class counting
// ---------------------------------------------------------------------------

fn subset_of_mask(n: usize, mask: u64) -> NodeSet {
    NodeSet::from_members(n, (0..n).filter(|&v| mask & (1 << v) != 0)).expect("in range")
}

/// All induced-subgraph isomorphism classes of `g` (the empty subgraph
/// included), each with the first subset realizing it in ascending bitmask
/// order. Exact; requires n <= cap.
pub fn induced_iso_classes(g: &Graph, cap: usize) -> Result<Vec<(CanonicalForm, NodeSet)>> {
    let n = g.n();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded {
            what: "exact induced-subgraph class count",
            n,
            cap: cap.min(63),
        });
    }
    let mut first_rep: Vec<(CanonicalForm, NodeSet)> = Vec::new();
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    for mask in 0..(1u64 << n) {
        let s = subset_of_mask(n, mask);
        let form = canonical_form(&g.induced_subgraph(&s)?);
        if seen.insert(form.clone()) {
            first_rep.push((form, s));
        }
    }
    Ok(first_rep)
}

/// The number of isomorphism classes among all 2^n induced subgraphs of `g`,
/// the empty subgraph included (so the count is exactly the number of
/// distinct canonical forms over all node subsets).
pub fn count_induced_iso_classes(g: &Graph) -> Result<usize> {
    count_induced_iso_classes_capped(g, DEFAULT_ISO_COUNT_CAP)
}

pub fn count_induced_iso_classes_capped(g: &Graph, cap: usize) -> Result<usize> {
    Ok(induced_iso_classes(g, cap)?.len())
}

/// Result of the sampling fallback for graphs above the enumeration cap.
/// `distinct` is a lower bound on the class count, never an estimate of it.
#[derive(Clone, Copy, Debug)]
pub struct SampledIsoCount {
    pub distinct: usize,
    pub samples: u64,
}

/// Hashes canonical forms of uniformly random subsets; the number of
/// distinct forms seen is a valid lower bound on the class count.
pub fn sample_induced_iso_classes(g: &Graph, samples: u64, seed: u64) -> SampledIsoCount {
    let n = g.n();
    let w = words_for(n);
    let mut rng = stream_rng(seed, STREAM_SUBSET_BASE);
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    for _ in 0..samples {
        let words: Vec<u64> = (0..w).map(|_| rng.next_u64()).collect();
        let s = NodeSet::from_words(n, words);
        let sub = g.induced_subgraph(&s).expect("subset in range");
        seen.insert(canonical_form(&sub));
    }
    SampledIsoCount {
        distinct: seen.len(),
        samples,
    }
}

/// Memo-friendly map from canonical form to class count, used by callers that
/// count classes for many small graphs.
pub type FormCountMap = HashMap<CanonicalForm, usize>;
