//! Minimum-weight 4-clique driven through incremental s-t shortest paths.
//!
//! The trace builds a 14-layer graph s, A1..A3, B1..B3, C1..C3, Â1..Â3, t.
//! Base edges carry the clique instance's cross-part weights; the dynamic
//! phase walks the D part in decreasing order, wiring each neighborhood into
//! the layer matchings and querying d(s, t) once per (d, a) pair. Every
//! query's answer is base + (lightest clique through that pair), so the
//! minimum over passing queries recovers the global minimum.
//!
//! Weights must be pre-scaled by 4 so the halved and quartered matching
//! weights stay integral; the decoder divides back out. The instance must be
//! complete (filler weight on non-edges) so the minimum decoder is total.

use crate::bundle::{
    AuditSpec, BundleKind, Cmp, HarnessAnswer, QueryCheck, ReduceError, ReductionBundle,
};
use crate::clique::{min_clique_weight_through, oracle_min_weight_4clique, FourPartiteInstance, Pair};
use crate::graph::{Mode, Vertex, Weight};
use crate::trace::{Op, Problem, QueryKind, TraceHeader, UpdateTrace};

/// Vertex layout: s, then three copies each of A, B, C, Â, then t.
pub(crate) struct SpLayout {
    pub(crate) n: usize,
}

impl SpLayout {
    pub(crate) fn a(&self, layer: usize, k: usize) -> Vertex {
        1 + layer * self.n + k
    }
    pub(crate) fn b(&self, layer: usize, j: usize) -> Vertex {
        1 + (3 + layer) * self.n + j
    }
    pub(crate) fn c(&self, layer: usize, l: usize) -> Vertex {
        1 + (6 + layer) * self.n + l
    }
    pub(crate) fn a_hat(&self, layer: usize, k: usize) -> Vertex {
        1 + (9 + layer) * self.n + k
    }
    pub(crate) fn t(&self) -> Vertex {
        12 * self.n + 1
    }
}

/// Builds the incremental trace and its decoder for a complete, 4-scaled
/// instance. Pass `undirected` to add one more base quantum to every edge,
/// which keeps the layer structure forced without edge directions; the
/// decremental twin is `bundle.reversed()`.
pub fn gen_mw4c_to_stsp(
    inst: &FourPartiteInstance,
    undirected: bool,
) -> Result<ReductionBundle, ReduceError> {
    if !inst.is_complete() {
        return Err(ReduceError::NotCompleted);
    }
    let n = inst.n;
    let mut pair_count = 0usize;
    for pair in crate::clique::ALL_PAIRS {
        for i in 0..n {
            for j in 0..n {
                match inst.get(pair, i, j) {
                    Some(w) if w % 4 == 0 => pair_count += 1,
                    _ => return Err(ReduceError::NotScaled),
                }
            }
        }
    }
    debug_assert_eq!(pair_count, 6 * n * n);
    // Clique weights stay strictly below w_gap, so every threshold window of
    // width 4 * w_gap is wide enough and mixed-round paths (which carry at
    // least a 2 * w_gap surcharge on top of some base) never undercut a
    // genuine clique path.
    let w_gap: i128 = 6 * inst.max_pair_weight() as i128 + 1;
    let w0: i128 = 100 * (n as i128) * (n as i128) * w_gap;
    let extra: i128 = if undirected { w0 } else { 0 };
    let n128 = n as i128;
    let max_edge = 2 * w0 + n128 * n128 * w_gap + n128 * w_gap + w_gap + extra;
    if 13 * max_edge > i64::MAX as i128 {
        return Err(ReduceError::OverflowRisk);
    }
    let w_gap = w_gap as Weight;
    let w0 = w0 as Weight;
    let extra = extra as Weight;
    let lay = SpLayout { n };
    let nv = 12 * n + 2;

    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.a(0, k), w0 + extra));
        initial.push((lay.a_hat(2, k), lay.t(), w0 + extra));
    }
    for a in 0..n {
        for b in 0..n {
            let w = inst.get(Pair::AB, a, b).unwrap();
            initial.push((lay.a(2, a), lay.b(0, b), w0 + w + extra));
        }
    }
    for b in 0..n {
        for c in 0..n {
            let w = inst.get(Pair::BC, b, c).unwrap();
            initial.push((lay.b(2, b), lay.c(0, c), w0 + w + extra));
        }
    }
    for c in 0..n {
        for a in 0..n {
            let w = inst.get(Pair::AC, a, c).unwrap();
            initial.push((lay.c(2, c), lay.a_hat(0, a), w0 + w + extra));
        }
    }

    let mut ops = Vec::new();
    let mut checks = Vec::new();
    let mut round_starts = Vec::new();
    let mut query_index = 0usize;
    for i in (0..n).rev() {
        round_starts.push(ops.len());
        for j in 0..n {
            let w = w0 + (i as Weight) * w_gap + inst.get(Pair::BD, j, i).unwrap() / 2 + extra;
            ops.push(Op::Insert { u: lay.b(0, j), v: lay.b(1, (j + i) % n), w });
            ops.push(Op::Insert { u: lay.b(1, (j + i) % n), v: lay.b(2, j), w });
        }
        for l in 0..n {
            let w = w0 + (i as Weight) * w_gap + inst.get(Pair::CD, l, i).unwrap() / 2 + extra;
            ops.push(Op::Insert { u: lay.c(0, l), v: lay.c(1, (l + i) % n), w });
            ops.push(Op::Insert { u: lay.c(1, (l + i) % n), v: lay.c(2, l), w });
        }
        for k in (0..n).rev() {
            let w = w0
                + (i as Weight) * (n as Weight) * w_gap
                + (k as Weight) * w_gap
                + inst.get(Pair::AD, k, i).unwrap() / 4
                + extra;
            ops.push(Op::Insert { u: lay.a(0, k), v: lay.a(1, (k + i) % n), w });
            ops.push(Op::Insert { u: lay.a(1, (k + i) % n), v: lay.a(2, k), w });
            ops.push(Op::Insert { u: lay.a_hat(0, k), v: lay.a_hat(1, (k + i) % n), w });
            ops.push(Op::Insert { u: lay.a_hat(1, (k + i) % n), v: lay.a_hat(2, k), w });

            let base = 13 * (w0 + extra)
                + 4 * (i as Weight) * (n as Weight) * w_gap
                + 4 * (k as Weight + i as Weight) * w_gap;
            let through = min_clique_weight_through(inst, k, i);
            ops.push(Op::Query { kind: QueryKind::StDist });
            checks.push(QueryCheck {
                query: query_index,
                round: i,
                slot: k,
                entry: None,
                cmp: Cmp::Lt,
                threshold: base + 4 * w_gap,
                base,
                cell: None,
                expect_pass: Some(through.is_some()),
                expect_value: through.map(|w| base + w),
            });
            query_index += 1;
        }
    }

    let trace = UpdateTrace {
        header: TraceHeader {
            n: nv,
            directed: !undirected,
            problem: Problem::Stsp,
            source: 0,
            target: Some(lay.t()),
            mode: Mode::Incremental,
            node_weights: None,
            initial_edges: Some(initial),
        },
        ops,
    };
    let expected = HarnessAnswer::Weight {
        value: oracle_min_weight_4clique(inst).map(|w| w / 4),
    };
    Ok(ReductionBundle {
        trace,
        kind: BundleKind::MinOverPassing { scale: 4 },
        checks,
        round_starts,
        audit: AuditSpec {
            exact_updates: Some(8 * n * n),
            round_update_cap: Some(8 * n),
            per_edge_setw_cap: Some(0),
        },
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::verify_bundle;
    use std::collections::BTreeMap;

    fn scaled(n: usize, bound: Weight, density: f64, seed: u64) -> FourPartiteInstance {
        FourPartiteInstance::random(n, bound, density, seed).completed().scaled(4)
    }

    #[test]
    fn rejects_incomplete_unscaled_and_huge_instances() {
        let sparse = FourPartiteInstance::random(3, 5, 0.5, 1);
        assert_eq!(gen_mw4c_to_stsp(&sparse, false), Err(ReduceError::NotCompleted));
        let unscaled = FourPartiteInstance::random(3, 5, 1.0, 2);
        assert_eq!(gen_mw4c_to_stsp(&unscaled, false), Err(ReduceError::NotScaled));
        let mut huge = FourPartiteInstance::empty(2, i64::MAX / 8);
        for pair in crate::clique::ALL_PAIRS {
            for i in 0..2 {
                for j in 0..2 {
                    huge.set(pair, i, j, Some(i64::MAX / 16 / 4 * 4));
                }
            }
        }
        assert_eq!(gen_mw4c_to_stsp(&huge, false), Err(ReduceError::OverflowRisk));
    }

    #[test]
    fn trace_shape_matches_construction() {
        let inst = scaled(3, 7, 0.6, 5);
        let bundle = gen_mw4c_to_stsp(&inst, false).unwrap();
        assert_eq!(bundle.trace.header.n, 12 * 3 + 2);
        assert_eq!(bundle.trace.update_count(), 8 * 9);
        assert_eq!(bundle.trace.query_count(), 9);
        assert_eq!(bundle.round_starts.len(), 3);
        bundle.trace.validate().unwrap();
    }

    #[test]
    fn decoder_matches_oracle_on_recompute() {
        for seed in 0..12 {
            let inst = scaled(4, 9, 0.7, seed);
            let bundle = gen_mw4c_to_stsp(&inst, false).unwrap();
            let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {}: {report:?}", seed);
            assert_eq!(
                bundle.expected,
                HarnessAnswer::Weight {
                    value: oracle_min_weight_4clique(&inst).map(|w| w / 4)
                }
            );
        }
    }

    #[test]
    fn undirected_variant_decodes_identically() {
        for seed in 20..28 {
            let inst = scaled(4, 9, 0.7, seed);
            let directed = gen_mw4c_to_stsp(&inst, false).unwrap();
            let undirected = gen_mw4c_to_stsp(&inst, true).unwrap();
            assert!(!undirected.trace.header.directed);
            let a = verify_bundle(&directed, "recompute", &BTreeMap::new()).unwrap();
            let b = verify_bundle(&undirected, "recompute", &BTreeMap::new()).unwrap();
            assert!(a.passed(), "seed {}: {a:?}", seed);
            assert!(b.passed(), "seed {}: {b:?}", seed);
            assert_eq!(directed.expected, undirected.expected);
        }
    }

    #[test]
    fn reversed_bundle_is_decremental_and_passes() {
        let inst = scaled(4, 9, 0.8, 33);
        let bundle = gen_mw4c_to_stsp(&inst, false).unwrap();
        let rev = bundle.reversed().unwrap();
        assert_eq!(rev.trace.header.mode, Mode::Decremental);
        assert!(rev.trace.ops.iter().all(|o| !matches!(o, Op::Insert { .. })));
        let report = verify_bundle(&rev, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
