//! Update traces: the exchange format between generators, engines, and
//! oracles. A trace is JSON Lines: one header line, then one op per line.
//! Results are JSON Lines too, one answer per query op, in order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DynamicGraph, GraphError, Mode, Vertex, Weight, INF, NEG_INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    /// s-t shortest path, edge weighted.
    Stsp,
    /// single-source shortest paths, edge weighted.
    Sssp,
    /// s-t bottleneck path.
    Stbp,
    /// single-source bottleneck paths.
    Ssbp,
    /// single-source earliest arrivals.
    Ssea,
    /// s-t earliest arrival.
    Stea,
    /// node-weighted single-source shortest paths.
    NwSssp,
    /// node-weighted s-t shortest path.
    NwStsp,
    /// s-t reachability.
    StReach,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    StDist,
    SsspAll,
    StBottleneck,
    SsbpAll,
    StArrival,
    SseaAll,
    StReach,
}

impl QueryKind {
    pub fn needs_target(self) -> bool {
        matches!(
            self,
            QueryKind::StDist | QueryKind::StBottleneck | QueryKind::StArrival | QueryKind::StReach
        )
    }

    /// Query kinds a trace of the given problem may contain.
    pub fn fits(self, problem: Problem) -> bool {
        use Problem::*;
        use QueryKind::*;
        matches!(
            (problem, self),
            (Stsp, StDist)
                | (Sssp, SsspAll)
                | (Sssp, StDist)
                | (Stbp, StBottleneck)
                | (Ssbp, SsbpAll)
                | (Ssbp, StBottleneck)
                | (Ssea, SseaAll)
                | (Ssea, StArrival)
                | (Stea, StArrival)
                | (NwSssp, SsspAll)
                | (NwSssp, StDist)
                | (NwStsp, StDist)
                | (Problem::StReach, QueryKind::StReach)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub n: usize,
    pub directed: bool,
    pub problem: Problem,
    pub source: Vertex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vertex>,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_weights: Option<Vec<Weight>>,
    /// Starting edge set, applied before any op. Decremental and
    /// weight-dynamic traces need one; incremental traces may use it for a
    /// preprocessed base graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_edges: Option<Vec<(Vertex, Vertex, Weight)>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Op {
    Insert { u: Vertex, v: Vertex, w: Weight },
    Delete { u: Vertex, v: Vertex },
    Setw { u: Vertex, v: Vertex, w: Weight },
    Query { kind: QueryKind },
}

impl Op {
    pub fn is_query(self) -> bool {
        matches!(self, Op::Query { .. })
    }

    pub fn is_update(self) -> bool {
        !self.is_query()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateTrace {
    pub header: TraceHeader,
    pub ops: Vec<Op>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: {what}")]
    Invariant { line: usize, what: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("empty trace file")]
    Empty,
}

impl UpdateTrace {
    pub fn new(header: TraceHeader) -> Self {
        UpdateTrace { header, ops: Vec::new() }
    }

    pub fn query_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_query()).count()
    }

    pub fn update_count(&self) -> usize {
        self.ops.iter().filter(|o| o.is_update()).count()
    }

    /// Fresh graph holding the header's initial edges, flagged with the
    /// trace's mode (dynamic traces leave the graph unflagged).
    pub fn initial_graph(&self) -> Result<DynamicGraph, GraphError> {
        let mut g = DynamicGraph::new(self.header.n, self.header.directed);
        if let Some(w) = &self.header.node_weights {
            g.set_node_weights(w.clone())?;
        }
        if let Some(edges) = &self.header.initial_edges {
            for &(u, v, w) in edges {
                g.insert_edge(u, v, w)?;
            }
        }
        let g = match self.header.mode {
            Mode::Dynamic => g,
            m => g.with_mode(m),
        };
        Ok(g)
    }

    /// Replays the ops against a scratch graph, proving the header's mode
    /// flag, edge preconditions, and query kinds all hold.
    pub fn validate(&self) -> Result<(), TraceError> {
        let mut g = self.initial_graph().map_err(|e| TraceError::Invariant {
            line: 1,
            what: format!("initial edges: {e}"),
        })?;
        for (i, op) in self.ops.iter().enumerate() {
            let line = i + 2;
            let bad = |what: String| TraceError::Invariant { line, what };
            match *op {
                Op::Insert { u, v, w } => {
                    g.insert_edge(u, v, w).map_err(|e| bad(e.to_string()))?
                }
                Op::Delete { u, v } => g.delete_edge(u, v).map_err(|e| bad(e.to_string()))?,
                Op::Setw { u, v, w } => g.set_weight(u, v, w).map_err(|e| bad(e.to_string()))?,
                Op::Query { kind } => {
                    if !kind.fits(self.header.problem) {
                        return Err(bad(format!(
                            "query kind {kind:?} does not fit problem {:?}",
                            self.header.problem
                        )));
                    }
                    if kind.needs_target() && self.header.target.is_none() {
                        return Err(bad(format!("query kind {kind:?} needs a target")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save(&self) -> String {
        let mut out = String::new();
        out.push_str(&serde_json::to_string(&HeaderLine { header: &self.header }).unwrap());
        out.push('\n');
        for op in &self.ops {
            out.push_str(&serde_json::to_string(op).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or(TraceError::Empty)?;
        let header: OwnedHeaderLine =
            serde_json::from_str(first).map_err(|e| TraceError::Parse { line: 1, source: e })?;
        let mut ops = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let op: Op =
                serde_json::from_str(line).map_err(|e| TraceError::Parse { line: i + 1, source: e })?;
            ops.push(op);
        }
        let trace = UpdateTrace { header: header.header, ops };
        trace.validate()?;
        Ok(trace)
    }

    pub fn save_to(&self, path: &std::path::Path) -> Result<(), TraceError> {
        std::fs::write(path, self.save())?;
        Ok(())
    }

    pub fn load_from(path: &std::path::Path) -> Result<Self, TraceError> {
        let text = std::fs::read_to_string(path)?;
        Self::load(&text)
    }
}

#[derive(Serialize)]
struct HeaderLine<'a> {
    header: &'a TraceHeader,
}

#[derive(Deserialize)]
struct OwnedHeaderLine {
    header: TraceHeader,
}

/// Seeded random trace for cross-engine diffs and benches. Incremental
/// traces grow from empty, decremental ones shrink from a random start,
/// dynamic ones mix inserts and deletes; roughly 30% of ops are queries,
/// drawn uniformly from the kinds that fit the problem.
pub fn random_trace(
    problem: Problem,
    mode: Mode,
    n: usize,
    num_ops: usize,
    seed: u64,
) -> UpdateTrace {
    use rand::prelude::*;
    assert!(n >= 2, "need room for a source and a distinct target");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let directed = rng.random_bool(0.5);
    let source = rng.random_range(0..n);
    let mut target = rng.random_range(0..n);
    while target == source {
        target = rng.random_range(0..n);
    }
    let node_weights = matches!(problem, Problem::NwSssp | Problem::NwStsp)
        .then(|| (0..n).map(|_| rng.random_range(0..=20)).collect::<Vec<Weight>>());
    // Undirected edges live under one canonical key so the generator never
    // re-inserts a present edge or deletes an absent one.
    let canon = |u: Vertex, v: Vertex| if directed || u < v { (u, v) } else { (v, u) };
    let mut present = std::collections::BTreeSet::new();
    let mut initial_edges = None;
    if mode != Mode::Incremental {
        let mut edges = Vec::new();
        for _ in 0..2 * n {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && present.insert(canon(u, v)) {
                let (u, v) = canon(u, v);
                edges.push((u, v, rng.random_range(1..=16)));
            }
        }
        initial_edges = Some(edges);
    }
    let kinds: Vec<QueryKind> = [
        QueryKind::StDist,
        QueryKind::SsspAll,
        QueryKind::StBottleneck,
        QueryKind::SsbpAll,
        QueryKind::StArrival,
        QueryKind::SseaAll,
        QueryKind::StReach,
    ]
    .into_iter()
    .filter(|k| k.fits(problem))
    .collect();
    let mut ops = Vec::with_capacity(num_ops);
    while ops.len() < num_ops {
        let query = |rng: &mut rand_chacha::ChaCha8Rng| Op::Query {
            kind: *kinds.choose(rng).expect("every problem has a query kind"),
        };
        if rng.random_bool(0.3) {
            ops.push(query(&mut rng));
            continue;
        }
        let may_delete = mode != Mode::Incremental && !present.is_empty();
        let may_insert = mode != Mode::Decremental;
        if may_delete && (!may_insert || rng.random_bool(0.5)) {
            let pick = rng.random_range(0..present.len());
            let &(u, v) = present.iter().nth(pick).unwrap();
            present.remove(&(u, v));
            ops.push(Op::Delete { u, v });
        } else if may_insert {
            // A dense graph may leave no free pair within the attempt
            // budget; fall back to a query so the trace keeps its length.
            let mut placed = false;
            for _ in 0..8 {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                if u == v || !present.insert(canon(u, v)) {
                    continue;
                }
                let (u, v) = canon(u, v);
                ops.push(Op::Insert { u, v, w: rng.random_range(1..=16) });
                placed = true;
                break;
            }
            if !placed {
                ops.push(query(&mut rng));
            }
        } else {
            ops.push(query(&mut rng));
        }
    }
    UpdateTrace {
        header: TraceHeader {
            n,
            directed,
            problem,
            source,
            target: Some(target),
            mode,
            node_weights,
            initial_edges,
        },
        ops,
    }
}

/// Pads a trace with isolated vertices. They are never touched by any op, so
/// every query answer is unchanged.
pub fn sparsify_trace(trace: &UpdateTrace, n_target: usize) -> Result<UpdateTrace, TraceError> {
    if n_target < trace.header.n {
        return Err(TraceError::Invariant {
            line: 1,
            what: format!("n_target {} below trace n {}", n_target, trace.header.n),
        });
    }
    let mut out = trace.clone();
    out.header.n = n_target;
    if let Some(w) = &mut out.header.node_weights {
        w.resize(n_target, 0);
    }
    Ok(out)
}

/// One answer per query op. Scalars and per-vertex arrays; None encodes both
/// "unreachable" and an infinite value, matching the wire format's null.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Scalar(Option<Weight>),
    Vector(Vec<Option<Weight>>),
}

/// Maps the +/- infinity sentinels to None; finite weights pass through.
pub fn finite(w: Weight) -> Option<Weight> {
    if w == INF || w == NEG_INF {
        None
    } else {
        Some(w)
    }
}

impl Answer {
    pub fn scalar(w: Weight) -> Self {
        Answer::Scalar(finite(w))
    }

    pub fn vector(ws: impl IntoIterator<Item = Weight>) -> Self {
        Answer::Vector(ws.into_iter().map(finite).collect())
    }

    pub fn from_bool(b: bool) -> Self {
        Answer::Scalar(Some(b as Weight))
    }

    pub fn as_scalar(&self) -> Option<Weight> {
        match self {
            Answer::Scalar(w) => *w,
            Answer::Vector(_) => panic!("vector answer where scalar expected"),
        }
    }

    pub fn as_vector(&self) -> &[Option<Weight>] {
        match self {
            Answer::Vector(v) => v,
            Answer::Scalar(_) => panic!("scalar answer where vector expected"),
        }
    }
}

impl Serialize for Answer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Line<'a, T: Serialize> {
            answer: &'a T,
        }
        match self {
            Answer::Scalar(w) => Line { answer: w }.serialize(s),
            Answer::Vector(v) => Line { answer: v }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Answer {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Line {
            answer: serde_json::Value,
        }
        let line = Line::deserialize(d)?;
        match line.answer {
            serde_json::Value::Null => Ok(Answer::Scalar(None)),
            serde_json::Value::Number(x) => {
                let w = x.as_i64().ok_or_else(|| serde::de::Error::custom("answer not an i64"))?;
                Ok(Answer::Scalar(Some(w)))
            }
            serde_json::Value::Array(items) => {
                let mut v = Vec::with_capacity(items.len());
                for item in items {
                    v.push(match item {
                        serde_json::Value::Null => None,
                        serde_json::Value::Number(x) => Some(
                            x.as_i64()
                                .ok_or_else(|| serde::de::Error::custom("answer not an i64"))?,
                        ),
                        _ => return Err(serde::de::Error::custom("bad answer element")),
                    });
                }
                Ok(Answer::Vector(v))
            }
            _ => Err(serde::de::Error::custom("bad answer value")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TraceResult {
    pub answers: Vec<Answer>,
}

impl TraceResult {
    pub fn save(&self) -> String {
        let mut out = String::new();
        for a in &self.answers {
            out.push_str(&serde_json::to_string(a).unwrap());
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self, TraceError> {
        let mut answers = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let a: Answer = serde_json::from_str(line)
                .map_err(|e| TraceError::Parse { line: i + 1, source: e })?;
            answers.push(a);
        }
        Ok(TraceResult { answers })
    }
}

/// Result equivalence across sparsification. Scalar answers must be equal;
/// per-vertex answers must agree on the original universe, with the padding
/// vertices unreachable (null).
pub fn sparsified_results_match(before: &TraceResult, after: &TraceResult) -> bool {
    before.answers.len() == after.answers.len()
        && before.answers.iter().zip(&after.answers).all(|(b, a)| match (b, a) {
            (Answer::Scalar(x), Answer::Scalar(y)) => x == y,
            (Answer::Vector(x), Answer::Vector(y)) => {
                y.len() >= x.len()
                    && y[..x.len()] == x[..]
                    && y[x.len()..].iter().all(Option::is_none)
            }
            _ => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(problem: Problem, mode: Mode) -> TraceHeader {
        TraceHeader {
            n: 4,
            directed: true,
            problem,
            source: 0,
            target: Some(3),
            mode,
            node_weights: None,
            initial_edges: None,
        }
    }

    #[test]
    fn save_load_roundtrip() {
        let mut t = UpdateTrace::new(header(Problem::Stbp, Mode::Incremental));
        t.ops.push(Op::Insert { u: 0, v: 1, w: 5 });
        t.ops.push(Op::Query { kind: QueryKind::StBottleneck });
        t.ops.push(Op::Insert { u: 1, v: 3, w: 2 });
        let text = t.save();
        let back = UpdateTrace::load(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let mut text = UpdateTrace::new(header(Problem::Stbp, Mode::Incremental)).save();
        text.push_str("{\"op\":\"insert\",\"u\":0\n");
        match UpdateTrace::load(&text) {
            Err(TraceError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn decremental_header_rejects_insert() {
        let mut t = UpdateTrace::new(header(Problem::Stbp, Mode::Decremental));
        t.ops.push(Op::Insert { u: 0, v: 1, w: 5 });
        match t.validate() {
            Err(TraceError::Invariant { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected invariant error, got {other:?}"),
        }
    }

    #[test]
    fn sparsify_identity_and_error() {
        let t = UpdateTrace::new(header(Problem::Stbp, Mode::Incremental));
        let same = sparsify_trace(&t, 4).unwrap();
        assert_eq!(same, t);
        let wider = sparsify_trace(&t, 16).unwrap();
        assert_eq!(wider.header.n, 16);
        assert_eq!(wider.ops, t.ops);
        assert!(sparsify_trace(&t, 2).is_err());
    }

    #[test]
    fn answer_wire_format() {
        assert_eq!(serde_json::to_string(&Answer::scalar(3)).unwrap(), "{\"answer\":3}");
        assert_eq!(serde_json::to_string(&Answer::scalar(INF)).unwrap(), "{\"answer\":null}");
        let v = Answer::vector([1, NEG_INF]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "{\"answer\":[1,null]}");
        let parsed = TraceResult::load("{\"answer\":3}\n{\"answer\":[1,null]}\n").unwrap();
        assert_eq!(parsed.answers, vec![Answer::scalar(3), v]);
    }
}
