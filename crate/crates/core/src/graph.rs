//! Finite simple undirected graphs with bit-packed adjacency rows.
//!
//! Nodes are dense integers `0..n-1`. Each adjacency row is a slice of u64
//! words, so the neighbourhood symmetric difference of two nodes is a
//! whole-row XOR and its size a popcount. Graphs are immutable once built.

use crate::error::{Error, Result};
use crate::rng::{stream_rng, unit_f64, STREAM_GRAPH};

/// Hard cap on the node count. The row-per-node bit matrix stays manageable
/// below this, and the exact oracles are far out of reach above it anyway.
pub const MAX_NODES: usize = 1 << 16;

pub(crate) fn words_for(nbits: usize) -> usize {
    nbits.div_ceil(64)
}

/// A subset of the nodes `0..capacity-1` of some graph, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    nbits: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(nbits: usize) -> Self {
        NodeSet {
            nbits,
            words: vec![0; words_for(nbits)],
        }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = NodeSet {
            nbits,
            words: vec![!0u64; words_for(nbits)],
        };
        s.mask_tail();
        s
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(nbits: usize, members: I) -> Result<Self> {
        let mut s = NodeSet::empty(nbits);
        for v in members {
            if v >= nbits {
                return Err(Error::NodeOutOfRange { node: v, n: nbits });
            }
            s.words[v / 64] |= 1 << (v % 64);
        }
        Ok(s)
    }

    pub(crate) fn from_words(nbits: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(nbits));
        let mut s = NodeSet { nbits, words };
        s.mask_tail();
        s
    }

    fn mask_tail(&mut self) {
        let r = self.nbits % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
        if self.nbits == 0 {
            self.words.clear();
        }
    }

    pub fn capacity(&self) -> usize {
        self.nbits
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.nbits && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.nbits, "node {v} out of range");
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.nbits {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        assert_eq!(self.nbits, other.nbits);
        NodeSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        assert_eq!(self.nbits, other.nbits);
        NodeSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        assert_eq!(self.nbits, other.nbits);
        NodeSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Display for NodeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl std::fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.members().iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// A finite simple undirected graph. Adjacency is symmetric and irreflexive;
/// the instance is immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    w: usize,
    bits: Vec<u64>,
}

impl Graph {
    fn with_capacity(n: usize) -> Result<Graph> {
        if n > MAX_NODES {
            return Err(Error::TooManyNodes { n, max: MAX_NODES });
        }
        let w = words_for(n);
        Ok(Graph {
            n,
            w,
            bits: vec![0; n * w],
        })
    }

    /// Builds a graph from an unordered edge list. Pairs are symmetrized and
    /// duplicates collapse; loops and out-of-range endpoints are rejected.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut g = Graph::with_capacity(n)?;
        for &(x, y) in edges {
            if x >= n {
                return Err(Error::NodeOutOfRange { node: x, n });
            }
            if y >= n {
                return Err(Error::NodeOutOfRange { node: y, n });
            }
            if x == y {
                return Err(Error::LoopEdge(x));
            }
            g.bits[x * g.w + y / 64] |= 1 << (y % 64);
            g.bits[y * g.w + x / 64] |= 1 << (x % 64);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Graph::with_capacity(n)
    }

    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::with_capacity(n)?;
        for x in 0..n {
            let row = &mut g.bits[x * g.w..(x + 1) * g.w];
            for (wi, word) in row.iter_mut().enumerate() {
                let lo = wi * 64;
                let hi = (lo + 64).min(n);
                if hi > lo {
                    *word = if hi - lo == 64 { !0 } else { (1u64 << (hi - lo)) - 1 };
                }
            }
            row[x / 64] &= !(1 << (x % 64));
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::build(n, &edges)
    }

    pub fn path(n: usize) -> Result<Graph> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::build(n, &edges)
    }

    /// G(n, p): each pair is independently an edge with probability p.
    /// Deterministic given the seed; see the rng module for the exact scheme.
    pub fn random(n: usize, p: f64, seed: u64) -> Result<Graph> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut g = Graph::with_capacity(n)?;
        let mut rng = stream_rng(seed, STREAM_GRAPH);
        for i in 0..n {
            for j in (i + 1)..n {
                if unit_f64(&mut rng) < p {
                    g.bits[i * g.w + j / 64] |= 1 << (j % 64);
                    g.bits[j * g.w + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.w..(v + 1) * self.w]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.n && y < self.n);
        self.bits[x * self.w + y / 64] & (1 << (y % 64)) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in self.neighbors(i).iter() {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        NodeSet::from_words(self.n, self.row(v).to_vec())
    }

    pub fn node_set(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    /// The induced subgraph on `s`, relabelled 0..|s|-1 in ascending node
    /// order; an edge survives iff both endpoints are in `s`.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Result<Graph> {
        let members = s.members();
        for &v in &members {
            if v >= self.n {
                return Err(Error::NodeOutOfRange { node: v, n: self.n });
            }
        }
        let mut g = Graph::with_capacity(members.len())?;
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate().skip(i + 1) {
                if self.has_edge(x, y) {
                    g.bits[i * g.w + j / 64] |= 1 << (j % 64);
                    g.bits[j * g.w + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(g)
    }

    /// Edge-complement; an involution.
    pub fn complement(&self) -> Graph {
        let mut g = Graph::with_capacity(self.n).expect("same size");
        for v in 0..self.n {
            let src = self.row(v);
            let dst = &mut g.bits[v * self.w..(v + 1) * self.w];
            for (wi, word) in dst.iter_mut().enumerate() {
                let lo = wi * 64;
                let hi = (lo + 64).min(self.n);
                let mask = if hi <= lo {
                    0
                } else if hi - lo == 64 {
                    !0
                } else {
                    (1u64 << (hi - lo)) - 1
                };
                *word = !src[wi] & mask;
            }
            dst[v / 64] &= !(1 << (v % 64));
        }
        g
    }

    /// The set of nodes adjacent to exactly one of x and y: the symmetric
    /// difference of the two neighbourhoods, as a whole-row XOR. Note x is a
    /// member iff x E y (and likewise y), since adjacency is irreflexive and
    /// the quantification runs over all nodes.
    pub fn dif_set(&self, x: usize, y: usize) -> Result<NodeSet> {
        if x >= self.n {
            return Err(Error::NodeOutOfRange { node: x, n: self.n });
        }
        if y >= self.n {
            return Err(Error::NodeOutOfRange { node: y, n: self.n });
        }
        let words = self
            .row(x)
            .iter()
            .zip(self.row(y))
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(NodeSet::from_words(self.n, words))
    }

    /// |dif_set(x, y)| without materializing the set.
    pub fn dif(&self, x: usize, y: usize) -> Result<usize> {
        if x >= self.n {
            return Err(Error::NodeOutOfRange { node: x, n: self.n });
        }
        if y >= self.n {
            return Err(Error::NodeOutOfRange { node: y, n: self.n });
        }
        Ok(self
            .row(x)
            .iter()
            .zip(self.row(y))
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}
