//! Exact desk-scale machinery for the dichotomy between graphs with many
//! pairwise non-isomorphic induced subgraphs and graphs with large
//! homogeneous (complete or edgeless) node sets.
//!
//! The crate provides:
//!
//! * bit-packed immutable graphs with graph6 I/O ([`graph`], [`graph6`]);
//! * canonical forms, pinned (labelled-vertex) canonical forms, and the
//!   exact induced-subgraph isomorphism-class count ([`iso`]);
//! * exact homogeneous-set search: clique/independence numbers by branch and
//!   bound, the bipartite variant, Erdős–Szekeres thresholds, and a greedy
//!   Ramsey extractor ([`ramsey`]);
//! * the certificate pipeline that, given a graph, either lower-bounds the
//!   number of induced-subgraph isomorphism classes or extracts an explicit
//!   homogeneous set, together with a machine-checkable certificate
//!   ([`constants`], [`pipeline`]);
//! * blow-up constructions and randomized witness search ([`construct`]);
//! * deterministic experiment sweeps with CSV output ([`sweep`]).
//!
//! Slow but independent reference implementations used to cross-check the
//! fast paths live in [`oracle`].

pub mod constants;
pub mod construct;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod iso;
pub mod oracle;
pub mod pipeline;
pub mod ramsey;
pub mod rng;
pub mod sweep;

pub use constants::{
    derive_constants, desk_scale_constants, parse_decimal_rational, rat_to_f64, ConstantOverrides,
    Constants, Rat,
};
pub use construct::{
    blowup, blowup_iso_bound, blowup_rm_transfer, search_ramsey_witness, WitnessOutcome,
};
pub use error::{Error, Result};
pub use graph::{Graph, NodeSet, MAX_NODES};
pub use graph6::{graph6_decode, graph6_encode, parse_edge_list, read_graphs};
pub use iso::{
    canonical_form, count_induced_iso_classes, count_induced_iso_classes_capped,
    induced_iso_classes, is_isomorphic, pinned_canonical_form, sample_induced_iso_classes,
    CanonicalForm, PinnedGraph, SampledIsoCount, DEFAULT_ISO_COUNT_CAP,
};
pub use pipeline::{
    build_blocks, certificate_from_text, certificate_to_text, class_lower_bound, conflict_sets,
    greedy_independent, iso_rich_family, majority_color, neighborhood_classes, run_pipeline,
    run_pipeline_with, sample_distinguishing_set, verify_certificate, Block, BlockFamily, Branch,
    Certificate, NeighborhoodPartition, PipelineOptions, PipelineRun, SampleOutcome, Trace,
    VerifyReport,
};
pub use ramsey::{
    alon_hajnal_bound, alon_hajnal_log2, bipartite_rm, bipartite_rm_capped, diagonal_ramsey,
    es_bound, homogeneous_block, max_clique, ramsey_extract, rm_number, rm_number_capped,
    ExtractOutcome, HomogeneousKind, HomogeneousSet, DEFAULT_BIPARTITE_CAP, DEFAULT_RM_CAP,
};
pub use sweep::{generate_graph, run_sweep, SweepConfig, CSV_HEADER};
