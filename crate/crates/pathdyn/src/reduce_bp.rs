//! Clique detection, online triple products, and min-witness products
//! driven through bottleneck path queries.
//!
//! The s-t constructions reuse the three-layer gadget chain from the
//! shortest-path reduction, but encode the round and inner coordinate in
//! edge capacities instead of lengths: the freshest matching edges are the
//! widest, so a query passes its capacity threshold exactly when a path
//! uses the coordinate under test. Skeleton edges stand in for infinite
//! capacity with a sentinel above every real weight. The single-source
//! construction reads a whole min-witness row off one query by grading
//! capacities so wider means smaller witness.

use crate::bundle::{
    AuditSpec, BundleKind, Cmp, HarnessAnswer, QueryCheck, ReduceError, ReductionBundle,
};
use crate::clique::{
    clique_exists_through, oracle_detect_4clique, oracle_triple_product, FourPartiteInstance,
    Pair, TripleProductInstance,
};
use crate::graph::{Mode, Weight};
use crate::matrix::{min_witness, BoolMatrix};
use crate::reduce_sp::SpLayout;
use crate::trace::{Op, Problem, QueryKind, TraceHeader, UpdateTrace};

/// Stands in for infinite capacity: above every graded weight, below none.
fn capacity_sentinel(n: usize) -> Weight {
    (n * n + 1) as Weight
}

/// Clique detection on an unweighted 4-partite instance through incremental
/// s-t bottleneck capacities; pair weights on the instance are ignored. The
/// query for (d, a) passes exactly when its capacity reaches the grade of the
/// a-matching inserted for that pair. The decremental twin is
/// `bundle.reversed()`.
pub fn gen_4c_to_stbp(inst: &FourPartiteInstance) -> Result<ReductionBundle, ReduceError> {
    let n = inst.n;
    let lay = SpLayout { n };
    let sentinel = capacity_sentinel(n);
    let adj = |pair: Pair, x: usize, y: usize| inst.get(pair, x, y).is_some();

    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.a(0, k), sentinel));
        initial.push((lay.a_hat(2, k), lay.t(), sentinel));
    }
    for a in 0..n {
        for b in 0..n {
            if adj(Pair::AB, a, b) {
                initial.push((lay.a(2, a), lay.b(0, b), sentinel));
            }
        }
    }
    for b in 0..n {
        for c in 0..n {
            if adj(Pair::BC, b, c) {
                initial.push((lay.b(2, b), lay.c(0, c), sentinel));
            }
        }
    }
    for c in 0..n {
        for a in 0..n {
            if adj(Pair::AC, a, c) {
                initial.push((lay.c(2, c), lay.a_hat(0, a), sentinel));
            }
        }
    }

    let mut ops = Vec::new();
    let mut checks = Vec::new();
    let mut round_starts = Vec::new();
    let mut updates = 0usize;
    let mut query_index = 0usize;
    for i in 0..n {
        round_starts.push(ops.len());
        let wide = ((i + 1) * n) as Weight;
        for j in 0..n {
            if adj(Pair::BD, j, i) {
                ops.push(Op::Insert { u: lay.b(0, j), v: lay.b(1, (j + i) % n), w: wide });
                ops.push(Op::Insert { u: lay.b(1, (j + i) % n), v: lay.b(2, j), w: wide });
                updates += 2;
            }
        }
        for l in 0..n {
            if adj(Pair::CD, l, i) {
                ops.push(Op::Insert { u: lay.c(0, l), v: lay.c(1, (l + i) % n), w: wide });
                ops.push(Op::Insert { u: lay.c(1, (l + i) % n), v: lay.c(2, l), w: wide });
                updates += 2;
            }
        }
        for k in 0..n {
            let grade = (i * n + k + 1) as Weight;
            if adj(Pair::AD, k, i) {
                ops.push(Op::Insert { u: lay.a(0, k), v: lay.a(1, (k + i) % n), w: grade });
                ops.push(Op::Insert { u: lay.a(1, (k + i) % n), v: lay.a(2, k), w: grade });
                ops.push(Op::Insert { u: lay.a_hat(0, k), v: lay.a_hat(1, (k + i) % n), w: grade });
                ops.push(Op::Insert { u: lay.a_hat(1, (k + i) % n), v: lay.a_hat(2, k), w: grade });
                updates += 4;
            }
            let pass = clique_exists_through(inst, k, i);
            ops.push(Op::Query { kind: QueryKind::StBottleneck });
            checks.push(QueryCheck {
                query: query_index,
                round: i,
                slot: k,
                entry: None,
                cmp: Cmp::Ge,
                threshold: grade,
                base: grade,
                cell: None,
                expect_pass: Some(pass),
                expect_value: pass.then_some(grade),
            });
            query_index += 1;
        }
    }

    let trace = UpdateTrace {
        header: TraceHeader {
            n: 12 * n + 2,
            directed: true,
            problem: Problem::Stbp,
            source: 0,
            target: Some(lay.t()),
            mode: Mode::Incremental,
            node_weights: None,
            initial_edges: Some(initial),
        },
        ops,
    };
    Ok(ReductionBundle {
        trace,
        kind: BundleKind::AnyPass,
        checks,
        round_starts,
        audit: AuditSpec {
            exact_updates: Some(updates),
            round_update_cap: Some(8 * n),
            per_edge_setw_cap: Some(0),
        },
        expected: HarnessAnswer::Flag { value: oracle_detect_4clique(inst) },
    })
}

/// Online triple products through s-t bottleneck capacities. The matrix
/// fixes the skeleton; each query round grades its vector bits into the
/// matchings one capacity band higher than the last. The incremental side
/// climbs bands; the decremental side pre-inserts every band in descending
/// width and tears each round's band down around its queries, touching each
/// dynamic edge exactly once.
pub fn gen_omv3_to_stbp(
    inst: &TripleProductInstance,
    decremental: bool,
) -> Result<ReductionBundle, ReduceError> {
    let n = inst.n;
    let rounds = inst.queries.len();
    assert!(rounds <= n, "at most one query round per matrix dimension");
    let lay = SpLayout { n };
    let sentinel = capacity_sentinel(n);

    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.a(0, k), sentinel));
        initial.push((lay.a_hat(2, k), lay.t(), sentinel));
    }
    for x in 0..n {
        for y in 0..n {
            if inst.a.get(x, y) {
                initial.push((lay.a(2, x), lay.b(0, y), sentinel));
                initial.push((lay.b(2, x), lay.c(0, y), sentinel));
                initial.push((lay.c(2, x), lay.a_hat(0, y), sentinel));
            }
        }
    }
    if decremental {
        // Round r tears down the band at offset n - r; grade bands downward
        // so later rounds sit strictly below every earlier threshold.
        for r in 0..rounds {
            let off = n - r;
            let wide = ((n - r) * n) as Weight;
            for j in 0..n {
                initial.push((lay.b(0, j), lay.b(1, (j + off) % n), wide));
                initial.push((lay.b(1, (j + off) % n), lay.b(2, j), wide));
                initial.push((lay.c(0, j), lay.c(1, (j + off) % n), wide));
                initial.push((lay.c(1, (j + off) % n), lay.c(2, j), wide));
            }
            for k in 0..n {
                let grade = ((n - r - 1) * n + k + 1) as Weight;
                initial.push((lay.a(0, k), lay.a(1, (k + off) % n), grade));
                initial.push((lay.a(1, (k + off) % n), lay.a(2, k), grade));
                initial.push((lay.a_hat(0, k), lay.a_hat(1, (k + off) % n), grade));
                initial.push((lay.a_hat(1, (k + off) % n), lay.a_hat(2, k), grade));
            }
        }
    }

    let mut ops = Vec::new();
    let mut checks = Vec::new();
    let mut round_starts = Vec::new();
    let mut query_index = 0usize;
    for i in 0..rounds {
        round_starts.push(ops.len());
        let q = &inst.queries[i];
        let off = if decremental { n - i } else { i };
        for j in 0..n {
            if q.v[j] != decremental {
                if decremental {
                    ops.push(Op::Delete { u: lay.b(0, j), v: lay.b(1, (j + off) % n) });
                    ops.push(Op::Delete { u: lay.b(1, (j + off) % n), v: lay.b(2, j) });
                } else {
                    let wide = ((i + 1) * n) as Weight;
                    ops.push(Op::Insert { u: lay.b(0, j), v: lay.b(1, (j + off) % n), w: wide });
                    ops.push(Op::Insert { u: lay.b(1, (j + off) % n), v: lay.b(2, j), w: wide });
                }
            }
            if q.w[j] != decremental {
                if decremental {
                    ops.push(Op::Delete { u: lay.c(0, j), v: lay.c(1, (j + off) % n) });
                    ops.push(Op::Delete { u: lay.c(1, (j + off) % n), v: lay.c(2, j) });
                } else {
                    let wide = ((i + 1) * n) as Weight;
                    ops.push(Op::Insert { u: lay.c(0, j), v: lay.c(1, (j + off) % n), w: wide });
                    ops.push(Op::Insert { u: lay.c(1, (j + off) % n), v: lay.c(2, j), w: wide });
                }
            }
        }
        let inner: Vec<usize> =
            if decremental { (0..n).rev().collect() } else { (0..n).collect() };
        for k in inner {
            let grade = if decremental {
                ((n - i - 1) * n + k + 1) as Weight
            } else {
                (i * n + k + 1) as Weight
            };
            if q.u[k] != decremental {
                let op = |u, v, w| {
                    if decremental {
                        Op::Delete { u, v }
                    } else {
                        Op::Insert { u, v, w }
                    }
                };
                ops.push(op(lay.a(0, k), lay.a(1, (k + off) % n), grade));
                ops.push(op(lay.a(1, (k + off) % n), lay.a(2, k), grade));
                ops.push(op(lay.a_hat(0, k), lay.a_hat(1, (k + off) % n), grade));
                ops.push(op(lay.a_hat(1, (k + off) % n), lay.a_hat(2, k), grade));
            }
            let pass = inst.clause(i, k);
            ops.push(Op::Query { kind: QueryKind::StBottleneck });
            checks.push(QueryCheck {
                query: query_index,
                round: i,
                slot: k,
                entry: None,
                cmp: Cmp::Ge,
                threshold: grade,
                base: grade,
                cell: None,
                expect_pass: Some(pass),
                expect_value: pass.then_some(grade),
            });
            query_index += 1;
            if decremental && q.u[k] {
                // Retire the coordinate probed by this query.
                ops.push(Op::Delete { u: lay.a(0, k), v: lay.a(1, (k + off) % n) });
                ops.push(Op::Delete { u: lay.a(1, (k + off) % n), v: lay.a(2, k) });
                ops.push(Op::Delete { u: lay.a_hat(0, k), v: lay.a_hat(1, (k + off) % n) });
                ops.push(Op::Delete { u: lay.a_hat(1, (k + off) % n), v: lay.a_hat(2, k) });
            }
        }
        if decremental {
            for j in 0..n {
                if q.v[j] {
                    ops.push(Op::Delete { u: lay.b(0, j), v: lay.b(1, (j + off) % n) });
                    ops.push(Op::Delete { u: lay.b(1, (j + off) % n), v: lay.b(2, j) });
                }
                if q.w[j] {
                    ops.push(Op::Delete { u: lay.c(0, j), v: lay.c(1, (j + off) % n) });
                    ops.push(Op::Delete { u: lay.c(1, (j + off) % n), v: lay.c(2, j) });
                }
            }
        }
    }

    let exact_updates = if decremental {
        8 * n * rounds
    } else {
        inst.queries
            .iter()
            .map(|q| {
                2 * q.v.iter().filter(|&&b| b).count()
                    + 2 * q.w.iter().filter(|&&b| b).count()
                    + 4 * q.u.iter().filter(|&&b| b).count()
            })
            .sum()
    };
    let trace = UpdateTrace {
        header: TraceHeader {
            n: 12 * n + 2,
            directed: true,
            problem: Problem::Stbp,
            source: 0,
            target: Some(lay.t()),
            mode: if decremental { Mode::Decremental } else { Mode::Incremental },
            node_weights: None,
            initial_edges: Some(initial),
        },
        ops,
    };
    Ok(ReductionBundle {
        trace,
        kind: BundleKind::RoundFlags { rounds },
        checks,
        round_starts,
        audit: AuditSpec {
            exact_updates: Some(exact_updates),
            round_update_cap: Some(8 * n),
            per_edge_setw_cap: Some(0),
        },
        expected: HarnessAnswer::Flags { values: oracle_triple_product(inst) },
    })
}

/// Min-witness Boolean product through single-source bottleneck capacities.
/// Three layers s, U, V, W; the U-V capacities grade witnesses so that wider
/// is smaller. Attaching one source edge per row and querying all targets
/// reads off that row of the product: row i's capacity at w_j is
/// (i + 1) * n - witness. Exactly one update per row. The decremental twin
/// is `bundle.reversed()`.
pub fn gen_mw_to_ssbp(a: &BoolMatrix, b: &BoolMatrix) -> Result<ReductionBundle, ReduceError> {
    let n = a.rows;
    assert!(
        a.cols == n && b.rows == n && b.cols == n,
        "square matrices of one dimension"
    );
    let sentinel = capacity_sentinel(n);
    let u = |i: usize| 1 + i;
    let v = |k: usize| 1 + n + k;
    let w = |j: usize| 1 + 2 * n + j;

    let mut initial = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if a.get(i, k) {
                initial.push((u(i), v(k), ((i + 1) * n - k) as Weight));
            }
        }
    }
    for k in 0..n {
        for j in 0..n {
            if b.get(k, j) {
                initial.push((v(k), w(j), sentinel));
            }
        }
    }

    let witnesses = min_witness(a, b);
    let mut ops = Vec::new();
    let mut checks = Vec::new();
    let mut round_starts = Vec::new();
    for i in 0..n {
        round_starts.push(ops.len());
        ops.push(Op::Insert { u: 0, v: u(i), w: sentinel });
        ops.push(Op::Query { kind: QueryKind::SsbpAll });
        for j in 0..n {
            let wit = witnesses.get(i, j).map(|k| k as Weight);
            checks.push(QueryCheck {
                query: i,
                round: i,
                slot: j,
                entry: Some(w(j)),
                cmp: Cmp::Gt,
                threshold: (i * n) as Weight,
                base: ((i + 1) * n) as Weight,
                cell: Some(i * n + j),
                expect_pass: Some(wit.is_some()),
                expect_value: wit.map(|k| ((i + 1) * n) as Weight - k),
            });
        }
    }

    let expected = HarnessAnswer::WitnessGrid {
        values: (0..n)
            .flat_map(|i| (0..n).map(|j| witnesses.get(i, j).map(|k| k as Weight)).collect::<Vec<_>>())
            .collect(),
    };
    let trace = UpdateTrace {
        header: TraceHeader {
            n: 3 * n + 1,
            directed: true,
            problem: Problem::Ssbp,
            source: 0,
            target: None,
            mode: Mode::Incremental,
            node_weights: None,
            initial_edges: Some(initial),
        },
        ops,
    };
    Ok(ReductionBundle {
        trace,
        kind: BundleKind::WitnessGrid {
            cells: n * n,
            stride: 1,
            negate: true,
            witness_bound: n as Weight,
        },
        checks,
        round_starts,
        audit: AuditSpec {
            exact_updates: Some(n),
            round_update_cap: Some(1),
            per_edge_setw_cap: Some(0),
        },
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::verify_bundle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn clique_detection_matches_oracle() {
        for seed in 0..10 {
            let density = 0.3 + 0.05 * seed as f64;
            let inst = FourPartiteInstance::random(4, 3, density, seed);
            let bundle = gen_4c_to_stbp(&inst).unwrap();
            let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {}: {report:?}", seed);
            assert_eq!(
                bundle.expected,
                HarnessAnswer::Flag { value: oracle_detect_4clique(&inst) }
            );
        }
    }

    #[test]
    fn clique_detection_reversed_passes() {
        for seed in [2, 5] {
            let inst = FourPartiteInstance::random(4, 3, 0.5, seed);
            let rev = gen_4c_to_stbp(&inst).unwrap().reversed().unwrap();
            assert_eq!(rev.trace.header.mode, Mode::Decremental);
            let report = verify_bundle(&rev, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {}: {report:?}", seed);
        }
    }

    #[test]
    fn triple_product_both_modes_match_oracle() {
        for seed in 0..10 {
            let inst = TripleProductInstance::random(5, 5, 0.4, seed);
            let inc = gen_omv3_to_stbp(&inst, false).unwrap();
            let report = verify_bundle(&inc, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {} inc: {report:?}", seed);
            let dec = gen_omv3_to_stbp(&inst, true).unwrap();
            assert_eq!(dec.trace.header.mode, Mode::Decremental);
            assert!(dec.trace.ops.iter().all(|o| !matches!(o, Op::Insert { .. })));
            assert_eq!(dec.trace.update_count(), 8 * 5 * 5);
            let report = verify_bundle(&dec, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {} dec: {report:?}", seed);
            assert_eq!(inc.expected, dec.expected);
            assert_eq!(
                inc.expected,
                HarnessAnswer::Flags { values: oracle_triple_product(&inst) }
            );
        }
    }

    fn random_bool_matrix(n: usize, density: f64, rng: &mut ChaCha8Rng) -> BoolMatrix {
        BoolMatrix::from_fn(n, n, |_, _| rng.random_bool(density))
    }

    #[test]
    fn witness_rows_match_kernel() {
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 6;
            let a = random_bool_matrix(n, 0.5, &mut rng);
            let b = random_bool_matrix(n, 0.5, &mut rng);
            let bundle = gen_mw_to_ssbp(&a, &b).unwrap();
            assert_eq!(bundle.trace.update_count(), n);
            let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
            assert!(report.passed(), "seed {}: {report:?}", seed);
            let wit = min_witness(&a, &b);
            if let HarnessAnswer::WitnessGrid { values } = &bundle.expected {
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(values[i * n + j], wit.get(i, j).map(|k| k as Weight));
                    }
                }
            } else {
                panic!("expected a witness grid");
            }
        }
    }

    #[test]
    fn witness_rows_reversed_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 5;
        let a = random_bool_matrix(n, 0.6, &mut rng);
        let b = random_bool_matrix(n, 0.6, &mut rng);
        let rev = gen_mw_to_ssbp(&a, &b).unwrap().reversed().unwrap();
        assert_eq!(rev.trace.header.mode, Mode::Decremental);
        assert_eq!(rev.trace.update_count(), n);
        let report = verify_bundle(&rev, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn dense_and_empty_witness_grids() {
        let n = 4;
        let full = BoolMatrix::from_fn(n, n, |_, _| true);
        let bundle = gen_mw_to_ssbp(&full, &full).unwrap();
        let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
        if let HarnessAnswer::WitnessGrid { values } = &bundle.expected {
            assert!(values.iter().all(|v| *v == Some(0)));
        }
        let empty = BoolMatrix::zero(n, n);
        let bundle = gen_mw_to_ssbp(&empty, &full).unwrap();
        let report = verify_bundle(&bundle, "recompute", &BTreeMap::new()).unwrap();
        assert!(report.passed(), "{report:?}");
        if let HarnessAnswer::WitnessGrid { values } = &bundle.expected {
            assert!(values.iter().all(|v| v.is_none()));
        }
    }
}
