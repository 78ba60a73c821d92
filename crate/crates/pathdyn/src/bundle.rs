//! Reduction bundles: a generated update trace plus the bookkeeping needed
//! to decode engine answers back into source-problem answers, together with
//! the brute-force expected answer the decode must reproduce. The decoder is
//! pure data (comparisons and offsets), so a bundle can be saved, reloaded,
//! and replayed through any engine without carrying code around.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{new_engine, run_trace, EngineError};
use crate::graph::{Mode, Vertex, Weight};
use crate::trace::{sparsify_trace, Answer, Op, TraceError, TraceResult, UpdateTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Lt,
    Gt,
    Ge,
    Eq,
}

/// One decodable unit of one query answer. Scalar queries carry one check;
/// vector queries carry one check per entry that is read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryCheck {
    /// Index into the result's answer list.
    pub query: usize,
    /// Outer round and inner slot of the drive loop that issued the query.
    pub round: usize,
    pub slot: usize,
    /// Vector answers: the entry to read. None for scalar answers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entry: Option<Vertex>,
    pub cmp: Cmp,
    pub threshold: Weight,
    /// Subtracted from (or, negated, subtracted by) a passing answer before
    /// value decoding.
    pub base: Weight,
    /// Witness grids: the flat cell a passing check writes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<usize>,
    /// Pass bit enumerated on the source instance, independently of any
    /// engine. None when the generator left it open.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_pass: Option<bool>,
    /// Exact answer value enumerated on the source instance, where the
    /// construction pins one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_value: Option<Weight>,
}

/// How passing checks combine into the decoded answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "combine", rename_all = "snake_case")]
pub enum BundleKind {
    /// Minimum over passing checks of (answer - base) / scale; None when
    /// nothing passes.
    MinOverPassing { scale: Weight },
    /// Single flag: does any check pass.
    AnyPass,
    /// One flag per round.
    RoundFlags { rounds: usize },
    /// Each passing check writes (answer - base) / stride, or with `negate`
    /// (base - answer) / stride, into its cell. Values must land in
    /// [0, witness_bound); cells written twice are decode failures.
    WitnessGrid { cells: usize, stride: Weight, negate: bool, witness_bound: Weight },
}

/// Decoded source-problem answer, and the shape of the expected one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum HarnessAnswer {
    Weight { value: Option<Weight> },
    Flag { value: bool },
    Flags { values: Vec<bool> },
    WitnessGrid { values: Vec<Option<Weight>> },
}

/// Structural counters the trace must satisfy, pinned by the construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditSpec {
    /// Exact number of update ops, when the construction fixes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_updates: Option<usize>,
    /// Cap on update ops inside any one round segment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_update_cap: Option<usize>,
    /// Cap on setw ops touching any single edge over the whole trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_edge_setw_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionBundle {
    pub trace: UpdateTrace,
    pub kind: BundleKind,
    pub checks: Vec<QueryCheck>,
    /// Op index where each round segment begins, in trace order; the last
    /// segment runs to the end of the trace. Empty when rounds are not
    /// audited.
    pub round_starts: Vec<usize>,
    pub audit: AuditSpec,
    pub expected: HarnessAnswer,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("query {query}: no such answer")]
    QueryIndex { query: usize },
    #[error("query {query}: scalar/vector shape mismatch")]
    Shape { query: usize },
    #[error("query {query}: vector entry {entry} out of range")]
    Entry { query: usize, entry: usize },
    #[error("query {query}: residual {residual} not decodable")]
    BadResidual { query: usize, residual: Weight },
    #[error("round {round} outside flag range")]
    RoundIndex { round: usize },
    #[error("cell {cell} out of range")]
    CellIndex { cell: usize },
    #[error("cell {cell} written twice")]
    CellConflict { cell: usize },
    #[error("check without a cell in a witness-grid bundle")]
    MissingCell,
}

/// The answer value a check reads, and whether its comparison holds. A null
/// answer never passes: every construction's pass condition needs a finite
/// value on the relevant side.
fn eval_check(check: &QueryCheck, result: &TraceResult) -> Result<(bool, Option<Weight>), DecodeError> {
    let answer = result
        .answers
        .get(check.query)
        .ok_or(DecodeError::QueryIndex { query: check.query })?;
    let value = match (answer, check.entry) {
        (Answer::Scalar(w), None) => *w,
        (Answer::Vector(v), Some(entry)) => *v
            .get(entry)
            .ok_or(DecodeError::Entry { query: check.query, entry })?,
        _ => return Err(DecodeError::Shape { query: check.query }),
    };
    let pass = match value {
        None => false,
        Some(w) => match check.cmp {
            Cmp::Lt => w < check.threshold,
            Cmp::Gt => w > check.threshold,
            Cmp::Ge => w >= check.threshold,
            Cmp::Eq => w == check.threshold,
        },
    };
    Ok((pass, value))
}

impl ReductionBundle {
    /// Decodes an engine's answers into a source-problem answer.
    pub fn decode(&self, result: &TraceResult) -> Result<HarnessAnswer, DecodeError> {
        match self.kind {
            BundleKind::MinOverPassing { scale } => {
                let mut best: Option<Weight> = None;
                for check in &self.checks {
                    let (pass, value) = eval_check(check, result)?;
                    if !pass {
                        continue;
                    }
                    let residual = value.unwrap() - check.base;
                    if residual < 0 || residual % scale != 0 {
                        return Err(DecodeError::BadResidual { query: check.query, residual });
                    }
                    let decoded = residual / scale;
                    if best.is_none_or(|b| decoded < b) {
                        best = Some(decoded);
                    }
                }
                Ok(HarnessAnswer::Weight { value: best })
            }
            BundleKind::AnyPass => {
                let mut any = false;
                for check in &self.checks {
                    any |= eval_check(check, result)?.0;
                }
                Ok(HarnessAnswer::Flag { value: any })
            }
            BundleKind::RoundFlags { rounds } => {
                let mut values = vec![false; rounds];
                for check in &self.checks {
                    let (pass, _) = eval_check(check, result)?;
                    let flag = values
                        .get_mut(check.round)
                        .ok_or(DecodeError::RoundIndex { round: check.round })?;
                    *flag |= pass;
                }
                Ok(HarnessAnswer::Flags { values })
            }
            BundleKind::WitnessGrid { cells, stride, negate, witness_bound } => {
                let mut values: Vec<Option<Weight>> = vec![None; cells];
                for check in &self.checks {
                    let (pass, value) = eval_check(check, result)?;
                    if !pass {
                        continue;
                    }
                    let cell = check.cell.ok_or(DecodeError::MissingCell)?;
                    if cell >= cells {
                        return Err(DecodeError::CellIndex { cell });
                    }
                    let answer = value.unwrap();
                    let residual = if negate { check.base - answer } else { answer - check.base };
                    if residual < 0 || residual % stride != 0 {
                        return Err(DecodeError::BadResidual { query: check.query, residual });
                    }
                    let witness = residual / stride;
                    if witness >= witness_bound {
                        return Err(DecodeError::BadResidual { query: check.query, residual });
                    }
                    if values[cell].is_some() {
                        return Err(DecodeError::CellConflict { cell });
                    }
                    values[cell] = Some(witness);
                }
                Ok(HarnessAnswer::WitnessGrid { values })
            }
        }
    }

    /// The same bundle driven backwards: deletions undo the forward
    /// insertions, starting from the forward trace's final graph. Query
    /// answers are unchanged (each reversed query sees the graph state its
    /// forward twin saw), so only query indices and round segments move.
    pub fn reversed(&self) -> Result<ReductionBundle, TraceError> {
        let trace = reverse_complement(&self.trace)?;
        let queries = self.trace.query_count();
        let mut checks = self.checks.clone();
        for check in &mut checks {
            check.query = queries - 1 - check.query;
        }
        checks.reverse();
        let len = self.trace.ops.len();
        let mut round_starts: Vec<usize> = self
            .round_starts
            .iter()
            .skip(1)
            .rev()
            .map(|&s| len - s)
            .collect();
        if !self.round_starts.is_empty() {
            round_starts.insert(0, 0);
        }
        Ok(ReductionBundle {
            trace,
            kind: self.kind,
            checks,
            round_starts,
            audit: self.audit.clone(),
            expected: self.expected.clone(),
        })
    }

    /// Same bundle over a padded vertex universe. Padding vertices are
    /// isolated, so decoding is unaffected.
    pub fn sparsified(&self, n_target: usize) -> Result<ReductionBundle, TraceError> {
        let mut out = self.clone();
        out.trace = sparsify_trace(&self.trace, n_target)?;
        Ok(out)
    }

    pub fn save_dir(&self, dir: &Path) -> Result<(), BundleIoError> {
        std::fs::create_dir_all(dir)?;
        self.trace.save_to(&dir.join("trace.jsonl"))?;
        let manifest = Manifest {
            kind: self.kind,
            checks: self.checks.clone(),
            round_starts: self.round_starts.clone(),
            audit: self.audit.clone(),
            expected: self.expected.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(dir.join("expected.json"), text)?;
        Ok(())
    }

    pub fn load_dir(dir: &Path) -> Result<ReductionBundle, BundleIoError> {
        let trace = UpdateTrace::load_from(&dir.join("trace.jsonl"))?;
        let text = std::fs::read_to_string(dir.join("expected.json"))?;
        let manifest: Manifest = serde_json::from_str(&text)?;
        Ok(ReductionBundle {
            trace,
            kind: manifest.kind,
            checks: manifest.checks,
            round_starts: manifest.round_starts,
            audit: manifest.audit,
            expected: manifest.expected,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    kind: BundleKind,
    #[serde(default)]
    round_starts: Vec<usize>,
    #[serde(default)]
    audit: AuditSpec,
    expected: HarnessAnswer,
    checks: Vec<QueryCheck>,
}

#[derive(Debug, Error)]
pub enum BundleIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Why a generator refused its source instance.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("instance must be complete: every cross-part pair needs a weight")]
    NotCompleted,
    #[error("instance weights must be pre-scaled by 4")]
    NotScaled,
    #[error("construction weights would overflow 64-bit arithmetic")]
    OverflowRisk,
}

/// Runs a validated trace backwards: ops are complemented (insert/delete
/// swap, carrying the weight live at deletion; setw restores the prior
/// weight) and replayed in reverse order from the forward final graph. The
/// mode flag flips, and the k-th query from the end sees exactly the state
/// the k-th forward query saw.
pub fn reverse_complement(trace: &UpdateTrace) -> Result<UpdateTrace, TraceError> {
    trace.validate()?;
    let h = &trace.header;
    let canon = |u: Vertex, v: Vertex| if h.directed || u <= v { (u, v) } else { (v, u) };
    let mut weights: BTreeMap<(Vertex, Vertex), Weight> = BTreeMap::new();
    for &(u, v, w) in h.initial_edges.iter().flatten() {
        weights.insert(canon(u, v), w);
    }
    let mut ops = Vec::with_capacity(trace.ops.len());
    for &op in &trace.ops {
        ops.push(match op {
            Op::Insert { u, v, w } => {
                weights.insert(canon(u, v), w);
                Op::Delete { u, v }
            }
            Op::Delete { u, v } => {
                let w = weights.remove(&canon(u, v)).expect("validated delete");
                Op::Insert { u, v, w }
            }
            Op::Setw { u, v, w } => {
                let prev = weights.insert(canon(u, v), w).expect("validated setw");
                Op::Setw { u, v, w: prev }
            }
            query @ Op::Query { .. } => query,
        });
    }
    ops.reverse();
    let mut header = h.clone();
    header.mode = match h.mode {
        Mode::Incremental => Mode::Decremental,
        Mode::Decremental => Mode::Incremental,
        Mode::Dynamic => Mode::Dynamic,
    };
    header.initial_edges = Some(weights.into_iter().map(|((u, v), w)| (u, v, w)).collect());
    let out = UpdateTrace { header, ops };
    out.validate()?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub engine: String,
    /// Decoded answer, or the decode failure rendered as text.
    pub decoded: Result<HarnessAnswer, String>,
    pub matches_expected: bool,
    /// Checks whose engine pass bit differs from the enumerated one.
    pub expect_mismatches: usize,
    /// First query index with a pass-bit mismatch or decode failure.
    pub first_bad_query: Option<usize>,
    pub audit_failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.matches_expected && self.expect_mismatches == 0 && self.audit_failures.is_empty()
    }
}

/// Replays the bundle's trace through the named engine, then checks the
/// decoded answer against the stored expectation, every enumerated pass bit,
/// and the structural audit counters.
pub fn verify_bundle(
    bundle: &ReductionBundle,
    engine_name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<VerifyReport, EngineError> {
    let mut engine = new_engine(engine_name, &bundle.trace, params)?;
    let result = run_trace(engine.as_mut(), &bundle.trace)?;
    Ok(check_result(bundle, engine_name, &result))
}

/// The engine-free half of `verify_bundle`, reusable against stored results.
pub fn check_result(bundle: &ReductionBundle, engine_name: &str, result: &TraceResult) -> VerifyReport {
    let mut expect_mismatches = 0;
    let mut first_bad_query: Option<usize> = None;
    let note_bad = |query: usize, first: &mut Option<usize>| {
        if first.is_none_or(|q| query < q) {
            *first = Some(query);
        }
    };
    for check in &bundle.checks {
        let Ok((pass, value)) = eval_check(check, result) else {
            note_bad(check.query, &mut first_bad_query);
            continue;
        };
        if let Some(expect) = check.expect_pass {
            if pass != expect {
                expect_mismatches += 1;
                note_bad(check.query, &mut first_bad_query);
            }
        }
        if let Some(expect) = check.expect_value {
            if value != Some(expect) {
                expect_mismatches += 1;
                note_bad(check.query, &mut first_bad_query);
            }
        }
    }
    let decoded = bundle.decode(result);
    if let Err(e) = &decoded {
        let query = match *e {
            DecodeError::QueryIndex { query }
            | DecodeError::Shape { query }
            | DecodeError::Entry { query, .. }
            | DecodeError::BadResidual { query, .. } => Some(query),
            _ => None,
        };
        if let Some(q) = query {
            note_bad(q, &mut first_bad_query);
        }
    }
    let matches_expected = decoded.as_ref().is_ok_and(|d| *d == bundle.expected);
    let mut audit_failures = Vec::new();
    let audit = &bundle.audit;
    if let Some(exact) = audit.exact_updates {
        let got = bundle.trace.update_count();
        if got != exact {
            audit_failures.push(format!("expected exactly {exact} update ops, trace has {got}"));
        }
    }
    if let Some(cap) = audit.round_update_cap {
        let len = bundle.trace.ops.len();
        let starts = &bundle.round_starts;
        if starts.windows(2).any(|w| w[0] > w[1]) || starts.last().copied().unwrap_or(0) > len {
            audit_failures.push("round segments out of order".to_string());
        } else {
            for (r, window) in starts.windows(2).enumerate() {
                let count = bundle.trace.ops[window[0]..window[1]]
                    .iter()
                    .filter(|o| o.is_update())
                    .count();
                if count > cap {
                    audit_failures.push(format!("round {r}: {count} updates exceed cap {cap}"));
                }
            }
            if let Some(&last) = starts.last() {
                let r = starts.len() - 1;
                let count =
                    bundle.trace.ops[last..].iter().filter(|o| o.is_update()).count();
                if count > cap {
                    audit_failures.push(format!("round {r}: {count} updates exceed cap {cap}"));
                }
            }
        }
    }
    if let Some(cap) = audit.per_edge_setw_cap {
        let directed = bundle.trace.header.directed;
        let canon = |u: Vertex, v: Vertex| if directed || u <= v { (u, v) } else { (v, u) };
        let mut counts: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        for op in &bundle.trace.ops {
            if let Op::Setw { u, v, .. } = *op {
                *counts.entry(canon(u, v)).or_default() += 1;
            }
        }
        for ((u, v), count) in counts {
            if count > cap {
                audit_failures
                    .push(format!("edge ({u},{v}): {count} setw ops exceed cap {cap}"));
            }
        }
    }
    VerifyReport {
        engine: engine_name.to_string(),
        decoded: decoded.map_err(|e| e.to_string()),
        matches_expected,
        expect_mismatches,
        first_bad_query,
        audit_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::{random_trace, Problem, QueryKind, TraceHeader};

    fn scalar_check(query: usize, cmp: Cmp, threshold: Weight, base: Weight) -> QueryCheck {
        QueryCheck {
            query,
            round: 0,
            slot: query,
            entry: None,
            cmp,
            threshold,
            base,
            cell: None,
            expect_pass: None,
            expect_value: None,
        }
    }

    #[test]
    fn min_over_passing_takes_lightest_passing_residual() {
        let bundle = ReductionBundle {
            trace: UpdateTrace::new(TraceHeader {
                n: 2,
                directed: true,
                problem: Problem::Stsp,
                source: 0,
                target: Some(1),
                mode: Mode::Incremental,
                node_weights: None,
                initial_edges: None,
            }),
            kind: BundleKind::MinOverPassing { scale: 2 },
            checks: vec![
                scalar_check(0, Cmp::Lt, 100, 50),
                scalar_check(1, Cmp::Lt, 100, 50),
                scalar_check(2, Cmp::Lt, 100, 50),
            ],
            round_starts: vec![],
            audit: AuditSpec::default(),
            expected: HarnessAnswer::Weight { value: Some(2) },
        };
        let result = TraceResult {
            answers: vec![Answer::scalar(58), Answer::scalar(54), Answer::Scalar(None)],
        };
        assert_eq!(bundle.decode(&result), Ok(HarnessAnswer::Weight { value: Some(2) }));
        // 120 fails the Lt check, null never passes: nothing decodes.
        let result = TraceResult {
            answers: vec![Answer::scalar(120), Answer::Scalar(None), Answer::Scalar(None)],
        };
        assert_eq!(bundle.decode(&result), Ok(HarnessAnswer::Weight { value: None }));
        // An odd residual cannot come from a scale-2 construction.
        let result = TraceResult {
            answers: vec![Answer::scalar(57), Answer::Scalar(None), Answer::Scalar(None)],
        };
        assert_eq!(
            bundle.decode(&result),
            Err(DecodeError::BadResidual { query: 0, residual: 7 })
        );
    }

    #[test]
    fn round_flags_group_by_round_not_order() {
        let mut checks = Vec::new();
        for (i, round) in [1usize, 0, 1, 0].into_iter().enumerate() {
            let mut c = scalar_check(i, Cmp::Ge, 10, 0);
            c.round = round;
            checks.push(c);
        }
        let bundle = ReductionBundle {
            trace: UpdateTrace::new(TraceHeader {
                n: 2,
                directed: true,
                problem: Problem::Stbp,
                source: 0,
                target: Some(1),
                mode: Mode::Incremental,
                node_weights: None,
                initial_edges: None,
            }),
            kind: BundleKind::RoundFlags { rounds: 2 },
            checks,
            round_starts: vec![],
            audit: AuditSpec::default(),
            expected: HarnessAnswer::Flags { values: vec![false, true] },
        };
        let result = TraceResult {
            answers: vec![
                Answer::scalar(12),
                Answer::scalar(3),
                Answer::Scalar(None),
                Answer::scalar(9),
            ],
        };
        assert_eq!(
            bundle.decode(&result),
            Ok(HarnessAnswer::Flags { values: vec![false, true] })
        );
    }

    #[test]
    fn witness_grid_decodes_strided_residuals() {
        let mut checks = Vec::new();
        for entry in 0..3usize {
            checks.push(QueryCheck {
                query: 0,
                round: 0,
                slot: 0,
                entry: Some(entry),
                cmp: Cmp::Lt,
                threshold: 1000,
                base: 100 + entry as Weight,
                cell: Some(entry),
                expect_pass: None,
                expect_value: None,
            });
        }
        let bundle = ReductionBundle {
            trace: UpdateTrace::new(TraceHeader {
                n: 4,
                directed: true,
                problem: Problem::NwSssp,
                source: 0,
                target: None,
                mode: Mode::Incremental,
                node_weights: Some(vec![0; 4]),
                initial_edges: None,
            }),
            kind: BundleKind::WitnessGrid { cells: 3, stride: 10, negate: false, witness_bound: 4 },
            checks,
            round_starts: vec![],
            audit: AuditSpec::default(),
            expected: HarnessAnswer::WitnessGrid { values: vec![Some(2), None, Some(0)] },
        };
        let result = TraceResult {
            answers: vec![Answer::Vector(vec![Some(120), None, Some(102)])],
        };
        assert_eq!(
            bundle.decode(&result),
            Ok(HarnessAnswer::WitnessGrid { values: vec![Some(2), None, Some(0)] })
        );
        // Witness 5 breaches the bound of 4.
        let result = TraceResult {
            answers: vec![Answer::Vector(vec![Some(150), None, None])],
        };
        assert_eq!(
            bundle.decode(&result),
            Err(DecodeError::BadResidual { query: 0, residual: 50 })
        );
    }

    #[test]
    fn reverse_complement_replays_identically() {
        for seed in 0..12 {
            let trace = random_trace(Problem::Stbp, Mode::Incremental, 8, 40, seed);
            let reversed = reverse_complement(&trace).unwrap();
            assert_eq!(reversed.header.mode, Mode::Decremental);
            assert_eq!(reversed.ops.len(), trace.ops.len());
            let forward = run_trace(
                new_engine("recompute", &trace, &BTreeMap::new()).unwrap().as_mut(),
                &trace,
            )
            .unwrap();
            let mut backward = run_trace(
                new_engine("recompute", &reversed, &BTreeMap::new()).unwrap().as_mut(),
                &reversed,
            )
            .unwrap();
            backward.answers.reverse();
            assert_eq!(forward, backward, "seed {}", seed);
        }
    }

    #[test]
    fn reverse_complement_restores_setw_values() {
        let trace = UpdateTrace {
            header: TraceHeader {
                n: 3,
                directed: true,
                problem: Problem::Ssea,
                source: 0,
                target: Some(2),
                mode: Mode::Incremental,
                node_weights: None,
                initial_edges: Some(vec![(0, 1, 2), (1, 2, 3)]),
            },
            ops: vec![
                Op::Query { kind: QueryKind::StArrival },
                Op::Setw { u: 0, v: 1, w: 5 },
                Op::Query { kind: QueryKind::StArrival },
                Op::Setw { u: 0, v: 1, w: 9 },
                Op::Query { kind: QueryKind::StArrival },
            ],
        };
        let reversed = reverse_complement(&trace).unwrap();
        assert_eq!(reversed.header.mode, Mode::Decremental);
        assert_eq!(
            reversed.header.initial_edges,
            Some(vec![(0, 1, 9), (1, 2, 3)])
        );
        assert_eq!(
            reversed.ops,
            vec![
                Op::Query { kind: QueryKind::StArrival },
                Op::Setw { u: 0, v: 1, w: 5 },
                Op::Query { kind: QueryKind::StArrival },
                Op::Setw { u: 0, v: 1, w: 2 },
                Op::Query { kind: QueryKind::StArrival },
            ]
        );
    }

    fn toy_bundle() -> ReductionBundle {
        let mut trace = UpdateTrace::new(TraceHeader {
            n: 3,
            directed: true,
            problem: Problem::Stbp,
            source: 0,
            target: Some(2),
            mode: Mode::Incremental,
            node_weights: None,
            initial_edges: None,
        });
        trace.ops = vec![
            Op::Insert { u: 0, v: 1, w: 7 },
            Op::Insert { u: 1, v: 2, w: 5 },
            Op::Query { kind: QueryKind::StBottleneck },
            Op::Insert { u: 0, v: 2, w: 9 },
            Op::Query { kind: QueryKind::StBottleneck },
        ];
        let mut first = scalar_check(0, Cmp::Ge, 5, 0);
        first.expect_pass = Some(true);
        let mut second = scalar_check(1, Cmp::Ge, 9, 0);
        second.expect_pass = Some(true);
        ReductionBundle {
            trace,
            kind: BundleKind::AnyPass,
            checks: vec![first, second],
            round_starts: vec![0, 3],
            audit: AuditSpec {
                exact_updates: Some(3),
                round_update_cap: Some(2),
                per_edge_setw_cap: Some(0),
            },
            expected: HarnessAnswer::Flag { value: true },
        }
    }

    #[test]
    fn verify_bundle_passes_on_recompute() {
        let bundle = toy_bundle();
        let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.decoded, Ok(HarnessAnswer::Flag { value: true }));
        assert_eq!(report.first_bad_query, None);
    }

    #[test]
    fn corrupted_result_fails_with_first_query_index() {
        let bundle = toy_bundle();
        let mut engine = new_engine("recompute", &bundle.trace, &BTreeMap::new()).unwrap();
        let mut result = run_trace(engine.as_mut(), &bundle.trace).unwrap();
        result.answers[1] = Answer::scalar(3);
        let report = check_result(&bundle, "recompute", &result);
        assert!(!report.passed());
        assert_eq!(report.expect_mismatches, 1);
        assert_eq!(report.first_bad_query, Some(1));
    }

    #[test]
    fn audits_catch_count_violations() {
        let mut bundle = toy_bundle();
        bundle.audit.exact_updates = Some(5);
        bundle.audit.round_update_cap = Some(1);
        let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
        assert!(!report.passed());
        assert_eq!(report.audit_failures.len(), 2, "{:?}", report.audit_failures);
    }

    #[test]
    fn reversed_bundle_verifies_and_flips_segments() {
        let bundle = toy_bundle();
        let reversed = bundle.reversed().unwrap();
        assert_eq!(reversed.trace.header.mode, Mode::Decremental);
        assert_eq!(reversed.round_starts, vec![0, 2]);
        assert_eq!(reversed.checks[0].query, 0);
        assert_eq!(reversed.checks[0].threshold, 9);
        let report = verify_bundle(&reversed, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn sparsified_bundle_verifies_identically() {
        let bundle = toy_bundle();
        let wide = bundle.sparsified(12).unwrap();
        let a = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
        let b = verify_bundle(&wide, "recompute", &BTreeMap::new()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn save_load_roundtrip() {
        let bundle = toy_bundle();
        let dir = std::env::temp_dir().join(format!("bundle-rt-{}", std::process::id()));
        bundle.save_dir(&dir).unwrap();
        let back = ReductionBundle::load_dir(&dir).unwrap();
        std::fs::remove_dir_all(&dir).ok();
        assert_eq!(back, bundle);
        let report = verify_bundle(&back, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed());
    }
}
