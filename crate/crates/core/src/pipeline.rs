//! The certificate pipeline.
//!
//! Given a graph, sample a small distinguishing node set A, partition the
//! remaining nodes by their adjacency trace on A, and branch:
//!
//! * many trace classes certify many pairwise non-isomorphic induced
//!   subgraphs (each union of classes over A gives a distinct pinned
//!   structure), yielding an `IsoRich` certificate with a lower bound on the
//!   log2 class count;
//! * few classes let us carve disjoint homogeneous blocks out of the
//!   classes, discard blocks whose members split other blocks' neighbourhood
//!   traces (conflict sets), and run the greedy Ramsey extractor on the
//!   block representatives, yielding an explicit `Homogeneous` certificate.
//!
//! Every certificate is rechecked from scratch by [`verify_certificate`],
//! which never trusts stored numbers.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::constants::{rat_to_f64, Constants, Rat};
use crate::error::{Error, Result};
use crate::graph::{words_for, Graph, NodeSet};
use crate::graph6::{graph6_decode, graph6_encode};
use crate::iso::{pinned_canonical_form, CanonicalForm, PinnedGraph};
use crate::ramsey::{
    exhaustive_homogeneous, homogeneous_block, ramsey_extract, ExtractOutcome, HomogeneousKind,
    HomogeneousSet,
};
use crate::rng::{stream_rng, unit_f64, STREAM_SAMPLE_BASE};

// ---------------------------------------------------------------------------
// distinguishing sets and trace classes
// ---------------------------------------------------------------------------

/// A distinguishing set A together with the partition of V \ A into classes
/// of equal adjacency trace on A, ordered by smallest member.
#[derive(Clone, Debug)]
pub struct NeighborhoodPartition {
    pub a: NodeSet,
    pub classes: Vec<NodeSet>,
}

impl NeighborhoodPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Clone, Debug)]
pub enum SampleOutcome {
    Found {
        a: NodeSet,
        attempts: u32,
    },
    /// All attempts failed one of the three postconditions; counts say which.
    Exhausted {
        attempts: u32,
        empty_failures: u32,
        size_failures: u32,
        separation_failures: u32,
    },
}

impl SampleOutcome {
    pub fn found(&self) -> Option<&NodeSet> {
        match self {
            SampleOutcome::Found { a, .. } => Some(a),
            SampleOutcome::Exhausted { .. } => None,
        }
    }
}

pub(crate) fn a_size_bound(c3: &Rat, n: usize) -> usize {
    (rat_to_f64(c3) * n as f64 / (n as f64).log2()).ceil() as usize
}

pub(crate) fn separation_bound(c4: &Rat, n: usize) -> f64 {
    let l = (n as f64).log2();
    rat_to_f64(c4) * l * l
}

/// Checks that every pair of nodes with equal adjacency trace on `a` has at
/// most `bound` nodes adjacent to exactly one of them.
pub(crate) fn separation_holds(g: &Graph, a: &NodeSet, bound: f64) -> bool {
    let n = g.n();
    let mut groups: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    for v in 0..n {
        let trace: Vec<u64> = g
            .row(v)
            .iter()
            .zip(a.words())
            .map(|(r, m)| r & m)
            .collect();
        groups.entry(trace).or_default().push(v);
    }
    for group in groups.values() {
        for (i, &x) in group.iter().enumerate() {
            for &y in &group[i + 1..] {
                if g.dif(x, y).expect("in range") as f64 > bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Samples A by independent coin flips with probability c3 / log2(n) per
/// node, retrying until A is nonempty, small enough, and separating (every
/// same-trace pair has a small neighbourhood difference). Attempt t draws
/// from rng stream t. Exhaustion is data, not an error.
pub fn sample_distinguishing_set(
    g: &Graph,
    c: &Constants,
    seed: u64,
    max_attempts: u32,
) -> Result<SampleOutcome> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "distinguishing-set sampling needs n >= 2".into(),
        ));
    }
    let p = (rat_to_f64(&c.c3) / (n as f64).log2()).clamp(0.0, 1.0);
    let size_bound = a_size_bound(&c.c3, n);
    let dif_bound = separation_bound(&c.c4, n);
    let mut empty_failures = 0;
    let mut size_failures = 0;
    let mut separation_failures = 0;
    for attempt in 0..max_attempts {
        let mut rng = stream_rng(seed, STREAM_SAMPLE_BASE + attempt as u64);
        let mut a = NodeSet::empty(n);
        for v in 0..n {
            if unit_f64(&mut rng) < p {
                a.insert(v);
            }
        }
        if a.is_empty() {
            empty_failures += 1;
            continue;
        }
        if a.len() > size_bound {
            size_failures += 1;
            continue;
        }
        if !separation_holds(g, &a, dif_bound) {
            separation_failures += 1;
            continue;
        }
        return Ok(SampleOutcome::Found {
            a,
            attempts: attempt + 1,
        });
    }
    Ok(SampleOutcome::Exhausted {
        attempts: max_attempts,
        empty_failures,
        size_failures,
        separation_failures,
    })
}

/// Partitions V \ A by adjacency trace on A; classes are ordered by their
/// smallest member.
pub fn neighborhood_classes(g: &Graph, a: &NodeSet) -> NeighborhoodPartition {
    let n = g.n();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if a.contains(v) {
            continue;
        }
        let trace: Vec<u64> = g
            .row(v)
            .iter()
            .zip(a.words())
            .map(|(r, m)| r & m)
            .collect();
        match index.get(&trace) {
            Some(&i) => classes[i].push(v),
            None => {
                index.insert(trace, classes.len());
                classes.push(vec![v]);
            }
        }
    }
    NeighborhoodPartition {
        a: a.clone(),
        classes: classes
            .into_iter()
            .map(|c| NodeSet::from_members(n, c).expect("in range"))
            .collect(),
    }
}

/// ell - |A| * log2(n): a lower bound on log2 of the induced-subgraph class
/// count whenever ell trace classes exist. May be negative; callers clamp.
pub fn class_lower_bound(ell: usize, a_size: usize, n: usize) -> f64 {
    ell as f64 - a_size as f64 * (n as f64).log2()
}

/// The pinned structure on A plus the union of the classes selected by
/// `mask`, with the members of A pinned in ascending order.
pub(crate) fn pinned_union_graph(
    g: &Graph,
    part: &NeighborhoodPartition,
    mask: u64,
) -> PinnedGraph {
    let mut nodes = part.a.clone();
    for (i, class) in part.classes.iter().enumerate() {
        if i < 64 && mask & (1 << i) != 0 {
            nodes = nodes.union(class);
        }
    }
    let sub = g.induced_subgraph(&nodes).expect("subset in range");
    let members = nodes.members();
    let pins: Vec<usize> = part
        .a
        .iter()
        .map(|av| members.binary_search(&av).expect("pin selected"))
        .collect();
    PinnedGraph::new(sub, pins).expect("valid pins")
}

/// The first `budget` class-union pinned structures in ascending mask order
/// (all 2^ell of them when that is within budget). Distinct masks give
/// pairwise non-isomorphic pinned structures.
pub fn iso_rich_family(
    g: &Graph,
    part: &NeighborhoodPartition,
    budget: usize,
) -> Vec<(u64, PinnedGraph)> {
    let ell = part.classes.len();
    let total: u64 = if ell >= 63 { u64::MAX } else { 1u64 << ell };
    let count = total.min(budget as u64);
    (0..count)
        .map(|mask| (mask, pinned_union_graph(g, part, mask)))
        .collect()
}

// ---------------------------------------------------------------------------
// homogeneous blocks
// ---------------------------------------------------------------------------

/// A homogeneous block: an m1*-node subset of one trace class, members in
/// ascending order with members[0] the designated representative.
#[derive(Clone, Debug)]
pub struct Block {
    pub members: Vec<usize>,
    pub kind: HomogeneousKind,
    pub class_index: usize,
}

#[derive(Clone, Debug, Default)]
pub struct BlockFamily {
    pub blocks: Vec<Block>,
    /// conflicts[i] lists the blocks j != i owning a member adjacent to
    /// exactly one of (representative of i, some other member of i).
    pub conflicts: Option<Vec<Vec<usize>>>,
}

impl BlockFamily {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Greedily carves disjoint homogeneous m1*-blocks out of each trace class,
/// stopping a class once its remainder drops below m2* or no block can be
/// found. A greedy miss on a remainder of at least m2* nodes is retried
/// exhaustively before the class is closed, so the family is maximal
/// whenever m2* is a valid diagonal threshold.
pub fn build_blocks(g: &Graph, part: &NeighborhoodPartition, c: &Constants) -> BlockFamily {
    let m1 = c.m1_star as usize;
    let mut blocks = Vec::new();
    for (ci, class) in part.classes.iter().enumerate() {
        let mut remainder = class.clone();
        loop {
            if (remainder.len() as u128) < c.m2_star {
                break;
            }
            let found = homogeneous_block(g, &remainder, m1).or_else(|| {
                if remainder.len() > 20 {
                    exhaustive_homogeneous(g, &remainder, m1)
                } else {
                    None
                }
            });
            match found {
                Some(h) => {
                    let members = h.members.members();
                    for &v in &members {
                        remainder.remove(v);
                    }
                    blocks.push(Block {
                        members,
                        kind: h.kind,
                        class_index: ci,
                    });
                }
                None => break,
            }
        }
    }
    BlockFamily {
        blocks,
        conflicts: None,
    }
}

/// Fills `conflicts`: j lands in u_i iff some member of block j is adjacent
/// to exactly one of block i's representative and another block-i member.
/// Computed as a union of row XORs per block, then block membership tests.
pub fn conflict_sets(g: &Graph, fam: &mut BlockFamily) {
    let b = fam.blocks.len();
    let w = words_for(g.n());
    let mut conflicts = vec![Vec::new(); b];
    for i in 0..b {
        let bi = &fam.blocks[i];
        let x0 = bi.members[0];
        let mut dmask = vec![0u64; w];
        for &xl in &bi.members[1..] {
            for ((d, a), b) in dmask.iter_mut().zip(g.row(x0)).zip(g.row(xl)) {
                *d |= a ^ b;
            }
        }
        for (j, bj) in fam.blocks.iter().enumerate() {
            if j == i {
                continue;
            }
            if bj
                .members
                .iter()
                .any(|&z| dmask[z / 64] & (1 << (z % 64)) != 0)
            {
                conflicts[i].push(j);
            }
        }
    }
    fam.conflicts = Some(conflicts);
}

/// Two-pass greedy selection of pairwise non-conflicting indices: the
/// ascending pass keeps j iff no kept i < j lists j, the descending pass
/// over the survivors keeps i iff no kept j > i lists i. The result W
/// satisfies "i != j in W implies j not in u_i" and has at least
/// i* / (D+1)^2 members, D = max |u_i|.
pub fn greedy_independent(u: &[Vec<usize>]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for j in 0..u.len() {
        if kept.iter().all(|&i| !u[i].contains(&j)) {
            kept.push(j);
        }
    }
    let mut kept2: Vec<usize> = Vec::new();
    for &i in kept.iter().rev() {
        if kept2.iter().all(|&j| !u[j].contains(&i)) {
            kept2.push(i);
        }
    }
    kept2.reverse();
    kept2
}

/// The majority-colour subset of W (ties prefer the clique colour).
pub fn majority_color(fam: &BlockFamily, w: &[usize]) -> (Vec<usize>, HomogeneousKind) {
    let cliques = w
        .iter()
        .filter(|&&i| fam.blocks[i].kind == HomogeneousKind::Clique)
        .count();
    let kind = if 2 * cliques >= w.len() {
        HomogeneousKind::Clique
    } else {
        HomogeneousKind::Independent
    };
    let wp = w
        .iter()
        .copied()
        .filter(|&i| fam.blocks[i].kind == kind)
        .collect();
    (wp, kind)
}

fn check_block_uniformity(g: &Graph, fam: &BlockFamily, wp: &[usize]) -> Result<()> {
    for (pos, &i1) in wp.iter().enumerate() {
        for &i2 in &wp[pos + 1..] {
            let b1 = &fam.blocks[i1].members;
            let b2 = &fam.blocks[i2].members;
            let expect = g.has_edge(b1[0], b2[0]);
            for &x in b1 {
                for &y in b2 {
                    if g.has_edge(x, y) != expect {
                        return Err(Error::BlockUniformity(format!(
                            "blocks {i1} and {i2}: edge({x},{y}) = {}, but edge({},{}) = {expect}",
                            g.has_edge(x, y),
                            b1[0],
                            b2[0]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// certificates and traces
// ---------------------------------------------------------------------------

/// Machine-checkable pipeline output: either a lower bound on the log2
/// induced-subgraph class count (with the distinguishing set and optional
/// pinned-form evidence) or an explicit homogeneous set with its target.
#[derive(Clone, Debug)]
pub enum Certificate {
    IsoRich {
        a: NodeSet,
        ell: usize,
        log2_bound: f64,
        c3: Rat,
        c4: Rat,
        evidence: Vec<(u64, CanonicalForm)>,
    },
    Homogeneous {
        set: HomogeneousSet,
        target: f64,
        met_target: bool,
    },
}

impl Certificate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Certificate::IsoRich { .. } => "iso-rich",
            Certificate::Homogeneous { .. } => "homogeneous",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    IsoRich,
    HomogeneousClique,
    HomogeneousIndependent,
    BelowTarget,
    SampleExhausted,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Branch::IsoRich => "iso-rich",
            Branch::HomogeneousClique => "homogeneous-clique",
            Branch::HomogeneousIndependent => "homogeneous-independent",
            Branch::BelowTarget => "below-target",
            Branch::SampleExhausted => "sample-exhausted",
        };
        write!(f, "{s}")
    }
}

#[derive(Clone, Debug)]
pub struct TraceCheck {
    pub name: &'static str,
    /// None for informational entries, Some(pass) for asserted inequalities.
    pub holds: Option<bool>,
    pub detail: String,
}

/// Everything the pipeline observed on one run, including pass/fail for
/// every inequality it asserted along the way.
#[derive(Clone, Debug)]
pub struct Trace {
    pub n: usize,
    pub seed: u64,
    pub attempts: u32,
    pub target: f64,
    pub branch: Branch,
    pub a_size: Option<usize>,
    pub ell: Option<usize>,
    pub iso_rich_log2_bound: Option<f64>,
    pub i_star: Option<usize>,
    pub w_len: Option<usize>,
    pub w_prime_len: Option<usize>,
    pub w_dprime_len: Option<usize>,
    pub checks: Vec<TraceCheck>,
}

impl Trace {
    fn new(n: usize, seed: u64, target: f64) -> Trace {
        Trace {
            n,
            seed,
            attempts: 0,
            target,
            branch: Branch::SampleExhausted,
            a_size: None,
            ell: None,
            iso_rich_log2_bound: None,
            i_star: None,
            w_len: None,
            w_prime_len: None,
            w_dprime_len: None,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, holds: bool, detail: String) {
        self.checks.push(TraceCheck {
            name,
            holds: Some(holds),
            detail,
        });
    }

    fn info(&mut self, name: &'static str, detail: String) {
        self.checks.push(TraceCheck {
            name,
            holds: None,
            detail,
        });
    }

    /// True iff every asserted inequality held.
    pub fn all_asserted_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds.unwrap_or(true))
    }
}

impl std::fmt::Display for Trace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "trace branch {}", self.branch)?;
        writeln!(f, "trace n {}", self.n)?;
        writeln!(f, "trace seed {}", self.seed)?;
        writeln!(f, "trace attempts {}", self.attempts)?;
        writeln!(f, "trace target {}", self.target)?;
        if let Some(v) = self.a_size {
            writeln!(f, "trace a-size {v}")?;
        }
        if let Some(v) = self.ell {
            writeln!(f, "trace ell {v}")?;
        }
        if let Some(v) = self.iso_rich_log2_bound {
            writeln!(f, "trace iso-rich-log2-bound {v}")?;
        }
        if let Some(v) = self.i_star {
            writeln!(f, "trace i-star {v}")?;
        }
        if let Some(v) = self.w_len {
            writeln!(f, "trace w {v}")?;
        }
        if let Some(v) = self.w_prime_len {
            writeln!(f, "trace w-prime {v}")?;
        }
        if let Some(v) = self.w_dprime_len {
            writeln!(f, "trace w-dprime {v}")?;
        }
        for c in &self.checks {
            let verdict = match c.holds {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "info",
            };
            writeln!(f, "check {} {} {}", c.name, verdict, c.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    /// None when distinguishing-set sampling was exhausted.
    pub certificate: Option<Certificate>,
    pub trace: Trace,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub max_attempts: u32,
    pub evidence_budget: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_attempts: 64,
            evidence_budget: 256,
        }
    }
}

// ---------------------------------------------------------------------------
// the pipeline
// ---------------------------------------------------------------------------

pub fn run_pipeline(g: &Graph, c: &Constants, seed: u64) -> Result<PipelineRun> {
    run_pipeline_with(g, c, seed, &PipelineOptions::default())
}

pub fn run_pipeline_with(
    g: &Graph,
    c: &Constants,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<PipelineRun> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidInput("pipeline requires n >= 4".into()));
    }
    let log2n = (n as f64).log2();
    let target = rat_to_f64(&c.c1) * log2n;
    let mut trace = Trace::new(n, seed, target);

    let (a, attempts) = match sample_distinguishing_set(g, c, seed, opts.max_attempts)? {
        SampleOutcome::Found { a, attempts } => (a, attempts),
        SampleOutcome::Exhausted {
            attempts,
            empty_failures,
            size_failures,
            separation_failures,
        } => {
            trace.attempts = attempts;
            trace.branch = Branch::SampleExhausted;
            trace.info(
                "a-sample",
                format!(
                    "exhausted after {attempts} attempts (empty {empty_failures}, size {size_failures}, separation {separation_failures})"
                ),
            );
            return Ok(PipelineRun {
                certificate: None,
                trace,
            });
        }
    };
    trace.attempts = attempts;
    trace.a_size = Some(a.len());

    let size_bound = a_size_bound(&c.c3, n);
    trace.check(
        "a-size-bound",
        !a.is_empty() && a.len() <= size_bound,
        format!("1 <= |A| = {} <= {size_bound}", a.len()),
    );
    let dif_bound = separation_bound(&c.c4, n);
    trace.check(
        "a-separation",
        separation_holds(g, &a, dif_bound),
        format!("same-trace pairs have dif <= {dif_bound}"),
    );

    let part = neighborhood_classes(g, &a);
    let ell = part.class_count();
    trace.ell = Some(ell);
    let bound = class_lower_bound(ell, a.len(), n);
    trace.iso_rich_log2_bound = Some(bound);

    let threshold = (c.c2 + c.c3) * Rat::from_integer(n as i128);
    let rich = Rat::from_integer(ell as i128) >= threshold;
    trace.info(
        "class-count",
        format!(
            "ell = {ell}, iso-rich threshold = {} ({})",
            rat_to_f64(&threshold),
            if rich { "rich" } else { "sparse" }
        ),
    );

    if rich {
        let evidence: Vec<(u64, CanonicalForm)> = iso_rich_family(g, &part, opts.evidence_budget)
            .into_iter()
            .map(|(mask, pg)| (mask, pinned_canonical_form(&pg)))
            .collect();
        let distinct: HashSet<&CanonicalForm> = evidence.iter().map(|(_, f)| f).collect();
        trace.check(
            "evidence-distinct",
            distinct.len() == evidence.len(),
            format!("{} pinned forms pairwise distinct", evidence.len()),
        );
        trace.branch = Branch::IsoRich;
        return Ok(PipelineRun {
            certificate: Some(Certificate::IsoRich {
                a,
                ell,
                log2_bound: bound,
                c3: c.c3,
                c4: c.c4,
                evidence,
            }),
            trace,
        });
    }

    // homogeneous branch
    let m1 = c.m1_star as usize;
    let mut fam = build_blocks(g, &part, c);
    let i_star = fam.len();
    trace.i_star = Some(i_star);
    conflict_sets(g, &mut fam);
    let conflicts = fam.conflicts.clone().expect("just computed");

    let dmax = conflicts.iter().map(|u| u.len()).max().unwrap_or(0);
    let conflict_bound = (c.m1_star as f64) * (c.m1_star.saturating_sub(1) as f64)
        * rat_to_f64(&c.c4)
        * log2n
        * log2n;
    trace.check(
        "conflict-bound",
        dmax as f64 <= conflict_bound,
        format!("max |u_i| = {dmax} <= {conflict_bound}"),
    );
    let block_floor = (n as f64 / m1 as f64)
        * ((c.m2_star as f64) * rat_to_f64(&c.c5) - rat_to_f64(&c.c3) / log2n);
    trace.check(
        "block-count",
        i_star as f64 >= block_floor - 1e-9,
        format!("i* = {i_star} >= {block_floor}"),
    );

    let w = greedy_independent(&conflicts);
    trace.w_len = Some(w.len());
    let dd = (dmax + 1) * (dmax + 1);
    trace.check(
        "selection-bound",
        w.len() * dd >= i_star,
        format!("|W| = {} >= i*/(D+1)^2 = {i_star}/{dd}", w.len()),
    );

    let (wp, color) = majority_color(&fam, &w);
    trace.w_prime_len = Some(wp.len());
    trace.info("majority-color", format!("{color}"));

    check_block_uniformity(g, &fam, &wp)?;
    trace.check(
        "block-uniformity",
        true,
        format!(
            "cross-block adjacency over {} selected blocks matches the representatives",
            wp.len()
        ),
    );

    // representative graph, ascending by representative node
    let mut reps: Vec<(usize, usize)> = wp.iter().map(|&i| (fam.blocks[i].members[0], i)).collect();
    reps.sort_unstable();
    let rep_set = NodeSet::from_members(n, reps.iter().map(|r| r.0))?;
    let aux = g.induced_subgraph(&rep_set)?;

    let r1 = ((rat_to_f64(&c.c1) / m1 as f64) * log2n).ceil() as usize;
    let r2 = target.ceil() as usize;
    trace.info("budgets", format!("clique-side {r1} blocks, independent-side {r2} nodes"));

    let expand = |aux_nodes: &NodeSet| -> Vec<usize> {
        aux_nodes
            .iter()
            .flat_map(|ai| fam.blocks[reps[ai].1].members.iter().copied())
            .collect()
    };
    let bare = |aux_nodes: &NodeSet| -> Vec<usize> { aux_nodes.iter().map(|ai| reps[ai].0).collect() };

    let outcome = match color {
        HomogeneousKind::Clique => ramsey_extract(&aux, r1, r2),
        HomogeneousKind::Independent => ramsey_extract(&aux, r2, r1),
    };

    let (members, kind, w_dprime, below_target) = match (color, outcome) {
        (HomogeneousKind::Clique, ExtractOutcome::Found(h)) => match h.kind {
            HomogeneousKind::Clique => {
                (expand(&h.members), HomogeneousKind::Clique, h.members.len(), false)
            }
            HomogeneousKind::Independent => {
                (bare(&h.members), HomogeneousKind::Independent, h.members.len(), false)
            }
        },
        (HomogeneousKind::Independent, ExtractOutcome::Found(h)) => match h.kind {
            HomogeneousKind::Clique => {
                (bare(&h.members), HomogeneousKind::Clique, h.members.len(), false)
            }
            HomogeneousKind::Independent => {
                (expand(&h.members), HomogeneousKind::Independent, h.members.len(), false)
            }
        },
        (
            color,
            ExtractOutcome::Failed {
                partial_clique,
                partial_independent,
            },
        ) => {
            let (cand_clique, cand_indep) = match color {
                HomogeneousKind::Clique => (expand(&partial_clique), bare(&partial_independent)),
                HomogeneousKind::Independent => {
                    (bare(&partial_clique), expand(&partial_independent))
                }
            };
            if cand_clique.len() >= cand_indep.len() {
                (
                    cand_clique,
                    HomogeneousKind::Clique,
                    partial_clique.len(),
                    true,
                )
            } else {
                (
                    cand_indep,
                    HomogeneousKind::Independent,
                    partial_independent.len(),
                    true,
                )
            }
        }
    };
    trace.w_dprime_len = Some(w_dprime);

    let set = HomogeneousSet {
        kind,
        members: NodeSet::from_members(n, members)?,
    };
    if !set.verify(g) {
        return Err(Error::BlockUniformity(
            "constructed homogeneous set failed verification".into(),
        ));
    }
    let met_target = set.len() as f64 >= target;
    trace.branch = if below_target || !met_target {
        Branch::BelowTarget
    } else {
        match kind {
            HomogeneousKind::Clique => Branch::HomogeneousClique,
            HomogeneousKind::Independent => Branch::HomogeneousIndependent,
        }
    };
    trace.info(
        "homogeneous-size",
        format!("{} {} nodes, target {target}", set.len(), kind),
    );
    Ok(PipelineRun {
        certificate: Some(Certificate::Homogeneous {
            set,
            target,
            met_target,
        }),
        trace,
    })
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub lines: Vec<String>,
}

impl VerifyReport {
    fn record(&mut self, ok: bool, msg: String) {
        self.ok &= ok;
        self.lines
            .push(format!("{} {msg}", if ok { "pass" } else { "FAIL" }));
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for l in &self.lines {
            writeln!(f, "verify {l}")?;
        }
        write!(f, "verify result {}", if self.ok { "VALID" } else { "INVALID" })
    }
}

/// Rechecks a certificate against the graph from scratch. Stored numbers are
/// recomputed, stored evidence is recomputed and compared, and claims are
/// required to match exactly; any mismatch yields false with a report line.
pub fn verify_certificate(g: &Graph, cert: &Certificate) -> VerifyReport {
    let mut rep = VerifyReport {
        ok: true,
        lines: Vec::new(),
    };
    let n = g.n();
    match cert {
        Certificate::IsoRich {
            a,
            ell,
            log2_bound,
            c3,
            c4,
            evidence,
        } => {
            if a.capacity() != n {
                rep.record(false, format!("A is over {} nodes, graph has {n}", a.capacity()));
                return rep;
            }
            rep.record(!a.is_empty(), "A nonempty".into());
            let size_bound = a_size_bound(c3, n);
            rep.record(
                a.len() <= size_bound,
                format!("|A| = {} within size bound {size_bound}", a.len()),
            );
            let dif_bound = separation_bound(c4, n);
            rep.record(
                separation_holds(g, a, dif_bound),
                format!("same-trace pairs have dif <= {dif_bound}"),
            );
            let part = neighborhood_classes(g, a);
            rep.record(
                part.class_count() == *ell,
                format!("recomputed ell = {} matches stored {ell}", part.class_count()),
            );
            let recomputed = class_lower_bound(part.class_count(), a.len(), n);
            rep.record(
                recomputed == *log2_bound,
                format!("recomputed log2 bound {recomputed} matches stored {log2_bound}"),
            );
            if !evidence.is_empty() {
                let mut all_match = true;
                for (mask, form) in evidence {
                    if part.class_count() < 64 && *mask >= (1u64 << part.class_count().min(63)) {
                        all_match = false;
                        break;
                    }
                    let pg = pinned_union_graph(g, &part, *mask);
                    if pinned_canonical_form(&pg) != *form {
                        all_match = false;
                        break;
                    }
                }
                rep.record(
                    all_match,
                    format!("{} evidence forms recomputed and matched", evidence.len()),
                );
                let distinct: HashSet<&CanonicalForm> =
                    evidence.iter().map(|(_, f)| f).collect();
                rep.record(
                    distinct.len() == evidence.len(),
                    "evidence forms pairwise distinct".into(),
                );
            }
        }
        Certificate::Homogeneous {
            set,
            target,
            met_target,
        } => {
            if set.members.capacity() != n {
                rep.record(
                    false,
                    format!("set is over {} nodes, graph has {n}", set.members.capacity()),
                );
                return rep;
            }
            rep.record(
                set.verify(g),
                format!("{} of {} nodes is homogeneous", set.kind, set.len()),
            );
            let recomputed = set.len() as f64 >= *target;
            rep.record(
                recomputed == *met_target,
                format!(
                    "size {} vs target {target}: met-target {met_target} consistent",
                    set.len()
                ),
            );
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// certificate text form
// ---------------------------------------------------------------------------

/// Line-oriented, self-describing certificate text. With `graph` supplied
/// the graph is embedded by its graph6 string for standalone verification.
pub fn certificate_to_text(cert: &Certificate, graph: Option<&Graph>) -> String {
    let mut out = String::new();
    match cert {
        Certificate::IsoRich {
            a,
            ell,
            log2_bound,
            c3,
            c4,
            evidence,
        } => {
            out.push_str("certificate iso-rich\n");
            if let Some(g) = graph {
                let _ = writeln!(out, "graph {}", graph6_encode(g));
            }
            let _ = writeln!(out, "n {}", a.capacity());
            let _ = writeln!(out, "a {a}");
            let _ = writeln!(out, "ell {ell}");
            let _ = writeln!(out, "log2-bound {log2_bound}");
            let _ = writeln!(out, "c3 {c3}");
            let _ = writeln!(out, "c4 {c4}");
            let _ = writeln!(out, "evidence {}", evidence.len());
            for (mask, form) in evidence {
                let _ = writeln!(out, "form {mask} {}", form.hex());
            }
        }
        Certificate::Homogeneous {
            set,
            target,
            met_target,
        } => {
            out.push_str("certificate homogeneous\n");
            if let Some(g) = graph {
                let _ = writeln!(out, "graph {}", graph6_encode(g));
            }
            let _ = writeln!(out, "n {}", set.members.capacity());
            let _ = writeln!(out, "kind {}", set.kind);
            let _ = writeln!(out, "members {}", set.members);
            let _ = writeln!(out, "target {target}");
            let _ = writeln!(out, "met-target {met_target}");
        }
    }
    out.push_str("end\n");
    out
}

impl std::fmt::Display for Certificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", certificate_to_text(self, None))
    }
}

struct LineReader<'a> {
    lines: std::str::Lines<'a>,
}

impl<'a> LineReader<'a> {
    fn next_line(&mut self) -> Result<&'a str> {
        self.lines
            .next()
            .ok_or_else(|| Error::CertificateParse("unexpected end of certificate".into()))
    }

    fn expect_field(&mut self, key: &str) -> Result<&'a str> {
        let line = self.next_line()?;
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' ').or(if r.is_empty() { Some("") } else { None }))
            .ok_or_else(|| Error::CertificateParse(format!("expected {key:?} line, got {line:?}")))
    }
}

fn parse_members(n: usize, text: &str) -> Result<NodeSet> {
    let mut members = Vec::new();
    for tok in text.split_whitespace() {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::CertificateParse(format!("bad node {tok:?}")))?;
        members.push(v);
    }
    NodeSet::from_members(n, members)
        .map_err(|e| Error::CertificateParse(format!("member out of range: {e}")))
}

fn parse_f64(text: &str) -> Result<f64> {
    text.trim()
        .parse()
        .map_err(|_| Error::CertificateParse(format!("bad number {text:?}")))
}

/// Parses the text form back, returning the embedded graph (when present,
/// decoded from its graph6 line) alongside the certificate.
pub fn certificate_from_text(text: &str) -> Result<(Option<Graph>, Certificate)> {
    let mut r = LineReader { lines: text.lines() };
    let head = r.next_line()?;
    let kind = head
        .strip_prefix("certificate ")
        .ok_or_else(|| Error::CertificateParse(format!("expected certificate header, got {head:?}")))?;
    let mut line = r.next_line()?;
    let graph = if let Some(g6) = line.strip_prefix("graph ") {
        let g = graph6_decode(g6.trim())?;
        line = r.next_line()?;
        Some(g)
    } else {
        None
    };
    let n: usize = line
        .strip_prefix("n ")
        .ok_or_else(|| Error::CertificateParse(format!("expected n line, got {line:?}")))?
        .trim()
        .parse()
        .map_err(|_| Error::CertificateParse("bad n".into()))?;
    let cert = match kind {
        "iso-rich" => {
            let a = parse_members(n, r.expect_field("a")?)?;
            let ell: usize = r
                .expect_field("ell")?
                .trim()
                .parse()
                .map_err(|_| Error::CertificateParse("bad ell".into()))?;
            let log2_bound = parse_f64(r.expect_field("log2-bound")?)?;
            let c3 = crate::constants::parse_decimal_rational(r.expect_field("c3")?)?;
            let c4 = crate::constants::parse_decimal_rational(r.expect_field("c4")?)?;
            let count: usize = r
                .expect_field("evidence")?
                .trim()
                .parse()
                .map_err(|_| Error::CertificateParse("bad evidence count".into()))?;
            let mut evidence = Vec::with_capacity(count);
            for _ in 0..count {
                let body = r.expect_field("form")?;
                let (mask, hex) = body
                    .split_once(' ')
                    .ok_or_else(|| Error::CertificateParse("bad form line".into()))?;
                let mask: u64 = mask
                    .parse()
                    .map_err(|_| Error::CertificateParse("bad form mask".into()))?;
                evidence.push((mask, CanonicalForm::from_hex(hex.trim())
                    .map_err(|e| Error::CertificateParse(e.to_string()))?));
            }
            Certificate::IsoRich {
                a,
                ell,
                log2_bound,
                c3,
                c4,
                evidence,
            }
        }
        "homogeneous" => {
            let kind = match r.expect_field("kind")?.trim() {
                "clique" => HomogeneousKind::Clique,
                "independent" => HomogeneousKind::Independent,
                other => {
                    return Err(Error::CertificateParse(format!("bad kind {other:?}")));
                }
            };
            let members = parse_members(n, r.expect_field("members")?)?;
            let target = parse_f64(r.expect_field("target")?)?;
            let met_target = match r.expect_field("met-target")?.trim() {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::CertificateParse(format!("bad met-target {other:?}")));
                }
            };
            Certificate::Homogeneous {
                set: HomogeneousSet { kind, members },
                target,
                met_target,
            }
        }
        other => {
            return Err(Error::CertificateParse(format!(
                "unknown certificate kind {other:?}"
            )));
        }
    };
    let end = r.next_line()?;
    if end.trim() != "end" {
        return Err(Error::CertificateParse(format!("expected end, got {end:?}")));
    }
    Ok((graph, cert))
}
