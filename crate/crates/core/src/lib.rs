//! Skeleton navigation of bipartite perfect matching polytopes.
//!
//! The crate provides, roughly bottom-up:
//!
//! - [`graph`]: bipartite graphs, digraphs, orientations, perfect matchings,
//!   and the matching/orientation bijection with its cycle-flip primitive;
//! - [`skeleton`]: polytope-skeleton adjacency, symmetric-difference
//!   decomposition, and exact brute-force oracles (matching enumeration and
//!   BFS over the flip graph);
//! - [`recovery`]: the long-cycle recovery algorithm that turns a directed
//!   cycle in the final orientation of a flip trace into a directed cycle of
//!   guaranteed length in the initial orientation;
//! - [`reduction`]: the gadget-based instance generator mapping a Hamiltonian
//!   digraph to a subcubic bipartite graph with two matchings at flip
//!   distance two, plus the witness, contraction, and extraction pipeline;
//! - [`lp`]: the exact-rational LP view — polytope points, circuit vectors,
//!   circuit moves, monotone weight construction, and pivot-rule runs.

pub mod error;
pub mod graph;
pub mod lp;
pub mod recovery;
pub mod reduction;
pub mod skeleton;

pub use error::{Error, Result};
pub use graph::{
    flip_cycle, matching_to_orientation, orientation_to_matching, BipartiteGraph, Cycle, Digraph,
    EdgeId, Orientation, PerfectMatching, Vertex,
};
pub use lp::{
    circuit_move, circuit_vectors, monotone_weights, pivot_run, CircuitVector, PivotRule, PivotRun,
    PolytopePoint, Rational, WeightFunction,
};
pub use recovery::{
    build_label_multigraph, build_union_components, compute_flip_cycles,
    eulerian_cycle_decomposition, longest_directed_cycle, random_flip_trace, recover_long_cycle,
    stitch_cycle, ComponentMultigraph, CycleUnion, FlipTrace, MultiArc,
};
pub use reduction::{
    build_reduction, contract_cycle, contraction_factor, extract_long_cycle,
    random_hamiltonian_digraph, two_flip_witness, LongCycleExtraction, ReductionInstance,
    VertexGadget,
};
pub use skeleton::{
    alternating_cycles, enumerate_perfect_matchings, find_perfect_matching, is_adjacent,
    skeleton_distance, sym_diff_decompose, CycleDecomposition, FlipPath,
};
