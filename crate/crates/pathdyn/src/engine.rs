//! Trace replay engines: one interface over all the dynamic structures so a
//! trace can be driven through any of them and the results diffed.
//! `RecomputeEngine` answers every query from scratch and is the baseline
//! the others must match byte for byte.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arrival::{static_ssea, DecrementalSsea, IncrementalSsea};
use crate::bottleneck::{static_ssbp, BottleneckError, LayeredSsbp, ThresholdStBP};
use crate::dyadic::DyadicSsbp;
use crate::graph::{GraphError, Mode, Vertex, Weight, INF};
use crate::nodeweight::{static_nw_sssp, NwBatcher};
use crate::reach::{FullyDynamicStReach, ReachStrategy};
use crate::shortest::{bfs_reach, static_sp};
use crate::trace::{Answer, Op, Problem, QueryKind, TraceResult, UpdateTrace};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Bottleneck(#[from] BottleneckError),
    #[error("no engine named {0:?}")]
    UnknownEngine(String),
    #[error("unknown engine parameter {0:?}")]
    UnknownParam(String),
    #[error("parameter {key}={value} outside [0,1]")]
    BadParam { key: &'static str, value: f64 },
    #[error("{engine} cannot replay {problem:?} traces")]
    WrongProblem { engine: &'static str, problem: Problem },
    #[error("{engine} cannot replay {mode:?} traces")]
    WrongMode { engine: &'static str, mode: Mode },
    #[error("{engine} does not handle {op} ops")]
    WrongOp { engine: &'static str, op: &'static str },
    #[error("{engine} needs a header target for {kind:?} queries")]
    MissingTarget { engine: &'static str, kind: QueryKind },
}

pub trait Engine {
    fn name(&self) -> &'static str;

    /// Applies one op. Updates return None, queries Some(answer).
    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError>;

    /// Structure counters for audits and bench output.
    fn counters(&self) -> Vec<(&'static str, u64)> {
        Vec::new()
    }
}

/// Replays a whole trace, collecting one answer per query op.
pub fn run_trace(engine: &mut dyn Engine, trace: &UpdateTrace) -> Result<TraceResult, EngineError> {
    let mut result = TraceResult::default();
    for &op in &trace.ops {
        if let Some(answer) = engine.step(op)? {
            result.answers.push(answer);
        }
    }
    Ok(result)
}

pub const ENGINE_NAMES: &[&str] = &[
    "recompute",
    "ssea",
    "threshold-stbp",
    "layered-ssbp",
    "dyadic-ssbp",
    "batched-nwsp",
    "st-reach",
];

/// Engines able to replay this exact trace, baseline first. The op scan
/// matters: setw rules out the insert/delete-only structures even when the
/// problem and mode would fit.
pub fn engines_for(trace: &UpdateTrace) -> Vec<&'static str> {
    let h = &trace.header;
    let has_setw = trace.ops.iter().any(|o| matches!(o, Op::Setw { .. }));
    let has_delete = trace.ops.iter().any(|o| matches!(o, Op::Delete { .. }));
    let grow_only = h.mode == Mode::Incremental && !has_setw && !has_delete;
    let mut out = vec!["recompute"];
    match h.problem {
        Problem::Ssea | Problem::Stea => {
            if h.mode != Mode::Dynamic && !has_setw {
                out.push("ssea");
            }
        }
        Problem::Stbp | Problem::Ssbp => {
            if h.problem == Problem::Stbp && h.mode != Mode::Dynamic && !has_setw {
                out.push("threshold-stbp");
            }
            if h.mode != Mode::Dynamic {
                out.push("layered-ssbp");
            }
            if grow_only {
                out.push("dyadic-ssbp");
            }
        }
        Problem::NwSssp | Problem::NwStsp => {
            if grow_only {
                out.push("batched-nwsp");
            }
        }
        Problem::StReach => out.push("st-reach"),
        Problem::Stsp | Problem::Sssp => {}
    }
    out
}

fn get_param(
    params: &BTreeMap<String, f64>,
    key: &'static str,
    default: f64,
) -> Result<f64, EngineError> {
    let value = params.get(key).copied().unwrap_or(default);
    if !(0.0..=1.0).contains(&value) {
        return Err(EngineError::BadParam { key, value });
    }
    Ok(value)
}

/// Builds a named engine for a trace. Recognized parameters: dyadic.t,
/// dyadic.g, batch.t; anything else is rejected to catch typos.
pub fn new_engine(
    name: &str,
    trace: &UpdateTrace,
    params: &BTreeMap<String, f64>,
) -> Result<Box<dyn Engine>, EngineError> {
    for key in params.keys() {
        if !matches!(key.as_str(), "dyadic.t" | "dyadic.g" | "batch.t") {
            return Err(EngineError::UnknownParam(key.clone()));
        }
    }
    match name {
        "recompute" => Ok(Box::new(RecomputeEngine::new(trace)?)),
        "ssea" => Ok(Box::new(SseaEngine::new(trace)?)),
        "threshold-stbp" => Ok(Box::new(ThresholdStbpEngine::new(trace)?)),
        "layered-ssbp" => Ok(Box::new(LayeredSsbpEngine::new(trace)?)),
        "dyadic-ssbp" => {
            let t = get_param(params, "dyadic.t", 0.5)?;
            let g = get_param(params, "dyadic.g", 0.5)?;
            Ok(Box::new(DyadicSsbpEngine::new(trace, t, g)?))
        }
        "batched-nwsp" => {
            let t = get_param(params, "batch.t", 0.5)?;
            Ok(Box::new(BatchedNwspEngine::new(trace, t)?))
        }
        "st-reach" => Ok(Box::new(StReachEngine::new(trace)?)),
        _ => Err(EngineError::UnknownEngine(name.to_string())),
    }
}

/// Static recomputation after every update; handles every problem and mode.
pub struct RecomputeEngine {
    problem: Problem,
    source: Vertex,
    target: Option<Vertex>,
    g: crate::graph::DynamicGraph,
}

impl RecomputeEngine {
    pub fn new(trace: &UpdateTrace) -> Result<RecomputeEngine, EngineError> {
        Ok(RecomputeEngine {
            problem: trace.header.problem,
            source: trace.header.source,
            target: trace.header.target,
            g: trace.initial_graph()?,
        })
    }

    fn target(&self, kind: QueryKind) -> Result<Vertex, EngineError> {
        self.target.ok_or(EngineError::MissingTarget { engine: "recompute", kind })
    }

    fn distances(&self, kind: QueryKind) -> Vec<Weight> {
        match kind {
            QueryKind::StDist | QueryKind::SsspAll => match self.problem {
                Problem::NwSssp | Problem::NwStsp => static_nw_sssp(&self.g, self.source),
                _ => static_sp(&self.g, self.source),
            },
            QueryKind::StBottleneck | QueryKind::SsbpAll => static_ssbp(&self.g, self.source),
            QueryKind::StArrival | QueryKind::SseaAll => static_ssea(&self.g, self.source),
            QueryKind::StReach => unreachable!("handled before distances"),
        }
    }
}

impl Engine for RecomputeEngine {
    fn name(&self) -> &'static str {
        "recompute"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            Op::Insert { u, v, w } => {
                self.g.insert_edge(u, v, w)?;
                Ok(None)
            }
            Op::Delete { u, v } => {
                self.g.delete_edge(u, v)?;
                Ok(None)
            }
            Op::Setw { u, v, w } => {
                self.g.set_weight(u, v, w)?;
                Ok(None)
            }
            Op::Query { kind: QueryKind::StReach } => {
                let t = self.target(QueryKind::StReach)?;
                Ok(Some(Answer::from_bool(bfs_reach(&self.g, self.source)[t])))
            }
            Op::Query { kind } => {
                let all = self.distances(kind);
                Ok(Some(if kind.needs_target() {
                    Answer::scalar(all[self.target(kind)?])
                } else {
                    Answer::vector(all)
                }))
            }
        }
    }
}

enum SseaInner {
    Inc(IncrementalSsea),
    Dec(DecrementalSsea),
}

/// Chain-gadget earliest arrivals, incremental or decremental per the trace
/// header. Undirected base edges become two gadget arcs, so the wrapper
/// mirrors every op.
pub struct SseaEngine {
    inner: SseaInner,
    directed: bool,
    target: Option<Vertex>,
}

impl SseaEngine {
    pub fn new(trace: &UpdateTrace) -> Result<SseaEngine, EngineError> {
        let h = &trace.header;
        if !matches!(h.problem, Problem::Ssea | Problem::Stea) {
            return Err(EngineError::WrongProblem { engine: "ssea", problem: h.problem });
        }
        let inner = match h.mode {
            Mode::Incremental => {
                let initial = h.initial_edges.as_deref().unwrap_or(&[]);
                let inserts = trace.ops.iter().filter(|o| matches!(o, Op::Insert { .. })).count();
                let arcs = if h.directed { 1 } else { 2 };
                let mut eng =
                    IncrementalSsea::new(h.n, h.source, (initial.len() + inserts) * arcs);
                for &(u, v, w) in initial {
                    eng.insert(u, v, w);
                    if !h.directed {
                        eng.insert(v, u, w);
                    }
                }
                SseaInner::Inc(eng)
            }
            Mode::Decremental => {
                SseaInner::Dec(DecrementalSsea::new(&trace.initial_graph()?, h.source))
            }
            Mode::Dynamic => return Err(EngineError::WrongMode { engine: "ssea", mode: h.mode }),
        };
        Ok(SseaEngine { inner, directed: h.directed, target: h.target })
    }
}

impl Engine for SseaEngine {
    fn name(&self) -> &'static str {
        "ssea"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match (op, &mut self.inner) {
            (Op::Insert { u, v, w }, SseaInner::Inc(eng)) => {
                eng.insert(u, v, w);
                if !self.directed {
                    eng.insert(v, u, w);
                }
                Ok(None)
            }
            (Op::Delete { u, v }, SseaInner::Dec(eng)) => {
                eng.delete(u, v);
                if !self.directed {
                    eng.delete(v, u);
                }
                Ok(None)
            }
            (Op::Query { kind: QueryKind::StArrival }, inner) => {
                let t = self.target.ok_or(EngineError::MissingTarget {
                    engine: "ssea",
                    kind: QueryKind::StArrival,
                })?;
                Ok(Some(Answer::scalar(match inner {
                    SseaInner::Inc(eng) => eng.arrival(t),
                    SseaInner::Dec(eng) => eng.arrival(t),
                })))
            }
            (Op::Query { kind: QueryKind::SseaAll }, inner) => {
                Ok(Some(Answer::vector(match inner {
                    SseaInner::Inc(eng) => eng.arrivals(),
                    SseaInner::Dec(eng) => eng.arrivals(),
                })))
            }
            (Op::Insert { .. }, _) => Err(EngineError::WrongOp { engine: "ssea", op: "insert" }),
            (Op::Delete { .. }, _) => Err(EngineError::WrongOp { engine: "ssea", op: "delete" }),
            (Op::Setw { .. }, _) => Err(EngineError::WrongOp { engine: "ssea", op: "setw" }),
            (Op::Query { .. }, _) => Err(EngineError::WrongOp { engine: "ssea", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        match &self.inner {
            SseaInner::Inc(eng) => vec![("gadget_edges", eng.gadget_edges_created())],
            SseaInner::Dec(_) => Vec::new(),
        }
    }
}

/// Connectivity-threshold s-t bottleneck.
pub struct ThresholdStbpEngine {
    inner: ThresholdStBP,
    /// s == t answers +inf without consulting the structure.
    trivial: bool,
}

impl ThresholdStbpEngine {
    pub fn new(trace: &UpdateTrace) -> Result<ThresholdStbpEngine, EngineError> {
        let h = &trace.header;
        if h.problem != Problem::Stbp {
            return Err(EngineError::WrongProblem { engine: "threshold-stbp", problem: h.problem });
        }
        if h.mode == Mode::Dynamic {
            return Err(EngineError::WrongMode { engine: "threshold-stbp", mode: h.mode });
        }
        let t = h.target.ok_or(EngineError::MissingTarget {
            engine: "threshold-stbp",
            kind: QueryKind::StBottleneck,
        })?;
        let initial = h.initial_edges.clone().unwrap_or_default();
        Ok(ThresholdStbpEngine {
            inner: ThresholdStBP::new(h.n, h.source, t, h.directed, h.mode, initial)?,
            trivial: h.source == t,
        })
    }
}

impl Engine for ThresholdStbpEngine {
    fn name(&self) -> &'static str {
        "threshold-stbp"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            Op::Insert { u, v, w } => {
                self.inner.insert(u, v, w)?;
                Ok(None)
            }
            Op::Delete { u, v } => {
                self.inner.delete(u, v)?;
                Ok(None)
            }
            Op::Setw { .. } => Err(EngineError::WrongOp { engine: "threshold-stbp", op: "setw" }),
            Op::Query { kind: QueryKind::StBottleneck } => Ok(Some(if self.trivial {
                Answer::scalar(INF)
            } else {
                Answer::Scalar(self.inner.answer())
            })),
            Op::Query { .. } => Err(EngineError::WrongOp { engine: "threshold-stbp", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![("structure_ops", self.inner.structure_ops())]
    }
}

/// One reachability instance per distinct weight; the universe is gathered
/// from the whole trace up front.
pub struct LayeredSsbpEngine {
    inner: LayeredSsbp,
    n: usize,
    source: Vertex,
    target: Option<Vertex>,
}

impl LayeredSsbpEngine {
    pub fn new(trace: &UpdateTrace) -> Result<LayeredSsbpEngine, EngineError> {
        let h = &trace.header;
        if !matches!(h.problem, Problem::Ssbp | Problem::Stbp) {
            return Err(EngineError::WrongProblem { engine: "layered-ssbp", problem: h.problem });
        }
        if h.mode == Mode::Dynamic {
            return Err(EngineError::WrongMode { engine: "layered-ssbp", mode: h.mode });
        }
        let g = trace.initial_graph()?;
        let mut universe: Vec<Weight> = g.edges().map(|(_, _, w)| w).collect();
        universe.extend(trace.ops.iter().filter_map(|op| match op {
            Op::Insert { w, .. } | Op::Setw { w, .. } => Some(*w),
            _ => None,
        }));
        Ok(LayeredSsbpEngine {
            inner: LayeredSsbp::new(&g, h.source, h.mode, universe)?,
            n: h.n,
            source: h.source,
            target: h.target,
        })
    }
}

impl Engine for LayeredSsbpEngine {
    fn name(&self) -> &'static str {
        "layered-ssbp"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            Op::Insert { u, v, w } => {
                self.inner.insert(u, v, w)?;
                Ok(None)
            }
            Op::Delete { u, v } => {
                self.inner.delete(u, v)?;
                Ok(None)
            }
            Op::Setw { u, v, w } => {
                self.inner.set_weight(u, v, w)?;
                Ok(None)
            }
            Op::Query { kind: QueryKind::StBottleneck } => {
                let t = self.target.ok_or(EngineError::MissingTarget {
                    engine: "layered-ssbp",
                    kind: QueryKind::StBottleneck,
                })?;
                let b = if t == self.source { INF } else { self.inner.query(t) };
                Ok(Some(Answer::scalar(b)))
            }
            Op::Query { kind: QueryKind::SsbpAll } => {
                Ok(Some(Answer::vector(self.inner.query_all(self.n, self.source))))
            }
            Op::Query { .. } => Err(EngineError::WrongOp { engine: "layered-ssbp", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("last_query_probes", self.inner.last_query_probes()),
            ("max_query_probes", self.inner.max_query_probes()),
            ("weight_universe", self.inner.universe_size() as u64),
        ]
    }
}

/// Dyadic-interval incremental SSBP; header initial edges count as the
/// first updates.
pub struct DyadicSsbpEngine {
    inner: DyadicSsbp,
    target: Option<Vertex>,
}

impl DyadicSsbpEngine {
    pub fn new(trace: &UpdateTrace, t: f64, g: f64) -> Result<DyadicSsbpEngine, EngineError> {
        let h = &trace.header;
        if !matches!(h.problem, Problem::Ssbp | Problem::Stbp) {
            return Err(EngineError::WrongProblem { engine: "dyadic-ssbp", problem: h.problem });
        }
        if h.mode != Mode::Incremental {
            return Err(EngineError::WrongMode { engine: "dyadic-ssbp", mode: h.mode });
        }
        let initial = h.initial_edges.clone().unwrap_or_default();
        Ok(DyadicSsbpEngine {
            inner: DyadicSsbp::new(h.n, h.source, h.directed, t, g, initial),
            target: h.target,
        })
    }
}

impl Engine for DyadicSsbpEngine {
    fn name(&self) -> &'static str {
        "dyadic-ssbp"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            Op::Insert { u, v, w } => {
                self.inner.insert(u, v, w);
                Ok(None)
            }
            Op::Delete { .. } => Err(EngineError::WrongOp { engine: "dyadic-ssbp", op: "delete" }),
            Op::Setw { .. } => Err(EngineError::WrongOp { engine: "dyadic-ssbp", op: "setw" }),
            Op::Query { kind: QueryKind::SsbpAll } => {
                Ok(Some(Answer::vector(self.inner.query_all())))
            }
            Op::Query { kind: QueryKind::StBottleneck } => {
                let t = self.target.ok_or(EngineError::MissingTarget {
                    engine: "dyadic-ssbp",
                    kind: QueryKind::StBottleneck,
                })?;
                Ok(Some(Answer::scalar(self.inner.query_all()[t])))
            }
            Op::Query { .. } => Err(EngineError::WrongOp { engine: "dyadic-ssbp", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("block_len", self.inner.block_len()),
            ("intervals_built", self.inner.intervals().len() as u64),
        ]
    }
}

/// Batched node-weighted shortest paths: snapshot distances at batch
/// boundaries, buffered inserts stitched in at query time.
pub struct BatchedNwspEngine {
    inner: NwBatcher,
    problem: Problem,
    target: Option<Vertex>,
}

impl BatchedNwspEngine {
    pub fn new(trace: &UpdateTrace, t: f64) -> Result<BatchedNwspEngine, EngineError> {
        let h = &trace.header;
        if !matches!(h.problem, Problem::NwSssp | Problem::NwStsp) || h.node_weights.is_none() {
            return Err(EngineError::WrongProblem { engine: "batched-nwsp", problem: h.problem });
        }
        if h.mode != Mode::Incremental {
            return Err(EngineError::WrongMode { engine: "batched-nwsp", mode: h.mode });
        }
        let pair_target = if h.problem == Problem::NwStsp {
            Some(h.target.ok_or(EngineError::MissingTarget {
                engine: "batched-nwsp",
                kind: QueryKind::StDist,
            })?)
        } else {
            None
        };
        Ok(BatchedNwspEngine {
            inner: NwBatcher::new(trace.initial_graph()?, h.source, pair_target, t),
            problem: h.problem,
            target: h.target,
        })
    }
}

impl Engine for BatchedNwspEngine {
    fn name(&self) -> &'static str {
        "batched-nwsp"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            // Path length is a sum of node weights, so the edge weight
            // carries no information here.
            Op::Insert { u, v, .. } => {
                self.inner.insert(u, v)?;
                Ok(None)
            }
            Op::Delete { .. } => Err(EngineError::WrongOp { engine: "batched-nwsp", op: "delete" }),
            Op::Setw { .. } => Err(EngineError::WrongOp { engine: "batched-nwsp", op: "setw" }),
            Op::Query { kind: QueryKind::SsspAll } => {
                Ok(Some(Answer::vector(self.inner.query_all())))
            }
            Op::Query { kind: QueryKind::StDist } => {
                let d = if self.problem == Problem::NwStsp {
                    self.inner.query_st()
                } else {
                    let t = self.target.ok_or(EngineError::MissingTarget {
                        engine: "batched-nwsp",
                        kind: QueryKind::StDist,
                    })?;
                    self.inner.query_all()[t]
                };
                Ok(Some(Answer::scalar(d)))
            }
            Op::Query { .. } => Err(EngineError::WrongOp { engine: "batched-nwsp", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("rebuilds", self.inner.rebuilds()),
            ("batch_cap", self.inner.batch_cap() as u64),
            ("buffered", self.inner.buffered() as u64),
        ]
    }
}

/// Fully dynamic s-t reachability; incremental traces keep a live SSR, the
/// rest recompute per query.
pub struct StReachEngine {
    inner: FullyDynamicStReach,
}

impl StReachEngine {
    pub fn new(trace: &UpdateTrace) -> Result<StReachEngine, EngineError> {
        let h = &trace.header;
        if h.problem != Problem::StReach {
            return Err(EngineError::WrongProblem { engine: "st-reach", problem: h.problem });
        }
        let t = h.target.ok_or(EngineError::MissingTarget {
            engine: "st-reach",
            kind: QueryKind::StReach,
        })?;
        let strategy = if h.mode == Mode::Incremental {
            ReachStrategy::IncrementalWithRebuild
        } else {
            ReachStrategy::RecomputeOnQuery
        };
        let mut inner = FullyDynamicStReach::new(h.n, h.source, t, h.directed, strategy);
        for &(u, v, _) in h.initial_edges.as_deref().unwrap_or(&[]) {
            inner.insert(u, v);
        }
        Ok(StReachEngine { inner })
    }
}

impl Engine for StReachEngine {
    fn name(&self) -> &'static str {
        "st-reach"
    }

    fn step(&mut self, op: Op) -> Result<Option<Answer>, EngineError> {
        match op {
            Op::Insert { u, v, .. } => {
                self.inner.insert(u, v);
                Ok(None)
            }
            Op::Delete { u, v } => {
                self.inner.delete(u, v);
                Ok(None)
            }
            // Weights cannot change reachability.
            Op::Setw { .. } => Ok(None),
            Op::Query { kind: QueryKind::StReach } => {
                Ok(Some(Answer::from_bool(self.inner.query())))
            }
            Op::Query { .. } => Err(EngineError::WrongOp { engine: "st-reach", op: "query" }),
        }
    }

    fn counters(&self) -> Vec<(&'static str, u64)> {
        vec![("edge_ops", self.inner.edge_ops())]
    }
}
