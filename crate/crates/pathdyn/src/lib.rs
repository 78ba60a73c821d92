//! Partially dynamic path algorithms: earliest arrivals, bottleneck paths,
//! and node-weighted shortest paths under insertion-only or deletion-only
//! update sequences, plus the matrix kernels and reduction harnesses the
//! engines are built from and measured against.
//!
//! The crate is organised around update traces (`trace`): a trace fixes a
//! graph, a problem, and an interleaving of updates and queries. Engines
//! (`engine`) replay traces; per-problem oracles recompute every answer from
//! scratch so any engine can be cross-checked on any trace.

pub mod codec;
pub mod graph;
pub mod trace;

pub mod oracle;
pub mod shortest;

pub mod arrival;
pub mod reach;

pub mod balance;
pub mod bottleneck;
pub mod dominance;
pub mod dyadic;
pub mod engine;
pub mod matrix;
pub mod maxmin;
pub mod nodeweight;

pub mod bundle;
pub mod clique;
pub mod reduce_bp;
pub mod reduce_ea;
pub mod reduce_nw;
pub mod reduce_sp;
