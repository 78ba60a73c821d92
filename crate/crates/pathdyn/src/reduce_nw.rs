//! Clique detection, online triple products, and min-witness 3-products
//! driven through node-weighted shortest paths.
//!
//! All three constructions share one four-layer gadget per vertex set: two
//! outer matchings pin a path to copies of the same source vertex, and a
//! double-width middle layer lets each round use a fresh diagonal offset.
//! Every vertex carries a large base weight so the layer count of a path is
//! readable off the leading digit of its length; the lower digits spell out
//! the round, the inner coordinate, and the witnessing pair.

use crate::bundle::{
    AuditSpec, BundleKind, Cmp, HarnessAnswer, QueryCheck, ReduceError, ReductionBundle,
};
use crate::clique::{
    oracle_detect_4clique, oracle_triple_product, FourPartiteInstance, Pair, TripleProductInstance,
};
use crate::graph::{Mode, Vertex, Weight};
use crate::matrix::{min_witness3, BoolMatrix};
use crate::trace::{Op, Problem, QueryKind, TraceHeader, UpdateTrace};

/// Gadgets are 5n-vertex blocks after s: layers of width n, n, 2n, n.
struct NwLayout {
    n: usize,
}

impl NwLayout {
    fn l1(&self, gadget: usize, idx: usize) -> Vertex {
        debug_assert!(idx < self.n);
        1 + 5 * self.n * gadget + idx
    }
    fn l2(&self, gadget: usize, idx: usize) -> Vertex {
        debug_assert!(idx < self.n);
        1 + 5 * self.n * gadget + self.n + idx
    }
    fn l3(&self, gadget: usize, idx: usize) -> Vertex {
        debug_assert!(idx < 2 * self.n);
        1 + 5 * self.n * gadget + 2 * self.n + idx
    }
    fn l4(&self, gadget: usize, idx: usize) -> Vertex {
        debug_assert!(idx < self.n);
        1 + 5 * self.n * gadget + 4 * self.n + idx
    }
}

/// Appends the 5n node weights of one gadget. Layer 1 separates vertices at
/// granularity `l1_scale`; the middle layers encode the diagonal offset in
/// multiples of w^3 so only the current round's offset decodes below the
/// threshold.
fn push_gadget_weights(weights: &mut Vec<Weight>, n: usize, w: Weight, l1_scale: Weight) {
    let w4 = w * w * w * w;
    let w3 = w * w * w;
    for idx in 0..n {
        weights.push(w4 + idx as Weight * l1_scale);
    }
    for idx in 0..n {
        weights.push(w4 + idx as Weight * w3);
    }
    for idx in 0..2 * n {
        weights.push(w4 + (4 * n - 2 * idx) as Weight * w3);
    }
    for idx in 0..n {
        weights.push(w4 + idx as Weight * w3);
    }
}

/// Largest sum any query can see: every vertex weight at most once.
fn nw_overflow_guard(nv: usize, n: usize, w: i128) -> Result<(), ReduceError> {
    let max_node = w.pow(4) + 4 * (n as i128) * w.pow(3);
    if (nv as i128) * max_node > i64::MAX as i128 {
        return Err(ReduceError::OverflowRisk);
    }
    Ok(())
}

/// Lightest witnessing pair (b, c) for the fixed (round, inner) coordinates:
/// min of b * w + c over pairs passing all five adjacency tests.
fn min_pair_value(
    n: usize,
    w: Weight,
    b_ok: impl Fn(usize) -> bool,
    c_ok: impl Fn(usize) -> bool,
    ab: impl Fn(usize) -> bool,
    bc: impl Fn(usize, usize) -> bool,
    ca: impl Fn(usize) -> bool,
) -> Option<Weight> {
    let mut best: Option<Weight> = None;
    for j in 0..n {
        if !(b_ok(j) && ab(j)) {
            continue;
        }
        for l in 0..n {
            if c_ok(l) && bc(j, l) && ca(l) {
                let v = j as Weight * w + l as Weight;
                if best.is_none_or(|m| v < m) {
                    best = Some(v);
                }
                break;
            }
        }
    }
    best
}

/// Clique detection on an unweighted 4-partite instance through incremental
/// node-weighted s-t distances; any pair weights on the instance are ignored.
/// One query per (d, a) pair; the disjunction of passes answers detection.
/// The decremental twin is `bundle.reversed()`.
pub fn gen_4c_to_nwstsp(inst: &FourPartiteInstance) -> Result<ReductionBundle, ReduceError> {
    let n = inst.n;
    let w = 100 * n as Weight;
    let nv = 20 * n + 2;
    nw_overflow_guard(nv, n, w as i128)?;
    let lay = NwLayout { n };
    let w4 = w * w * w * w;
    let w3 = w * w * w;
    let w2 = w * w;
    let t = 20 * n + 1;

    let mut node_weights = vec![w4];
    push_gadget_weights(&mut node_weights, n, w, w2); // A
    push_gadget_weights(&mut node_weights, n, w, w); // B
    push_gadget_weights(&mut node_weights, n, w, 1); // C
    push_gadget_weights(&mut node_weights, n, w, w2); // A-hat
    node_weights.push(w4);

    let adj = |pair: Pair, x: usize, y: usize| inst.get(pair, x, y).is_some();
    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.l1(0, k), 0));
        initial.push((lay.l4(3, k), t, 0));
    }
    for g in 0..4 {
        for x in 0..n {
            initial.push((lay.l1(g, x), lay.l2(g, x), 0));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if adj(Pair::AB, a, b) {
                initial.push((lay.l4(0, a), lay.l1(1, b), 0));
            }
        }
    }
    for b in 0..n {
        for c in 0..n {
            if adj(Pair::BC, b, c) {
                initial.push((lay.l4(1, b), lay.l1(2, c), 0));
            }
        }
    }
    for c in 0..n {
        for a in 0..n {
            if adj(Pair::AC, a, c) {
                initial.push((lay.l4(2, c), lay.l1(3, a), 0));
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
        for (gadget, pair) in [(1, Pair::BD), (2, Pair::CD)] {
            for j in 0..n {
                if adj(pair, j, i) {
                    ops.push(Op::Insert { u: lay.l2(gadget, j), v: lay.l3(gadget, j + i), w: 0 });
                    ops.push(Op::Insert { u: lay.l3(gadget, j + i), v: lay.l4(gadget, j), w: 0 });
                    updates += 2;
                }
            }
        }
        for k in (0..n).rev() {
            if adj(Pair::AD, k, i) {
                for g in [0, 3] {
                    ops.push(Op::Insert { u: lay.l2(g, k), v: lay.l3(g, k + i), w: 0 });
                    ops.push(Op::Insert { u: lay.l3(g, k + i), v: lay.l4(g, k), w: 0 });
                }
                updates += 4;
            }
            let base = 18 * w4 + (16 * n - 8 * i) as Weight * w3 + 2 * k as Weight * w2;
            let best = if adj(Pair::AD, k, i) {
                min_pair_value(
                    n,
                    w,
                    |j| adj(Pair::BD, j, i),
                    |l| adj(Pair::CD, l, i),
                    |j| adj(Pair::AB, k, j),
                    |j, l| adj(Pair::BC, j, l),
                    |l| adj(Pair::AC, k, l),
                )
            } else {
                None
            };
            ops.push(Op::Query { kind: QueryKind::StDist });
            checks.push(QueryCheck {
                query: query_index,
                round: i,
                slot: k,
                entry: None,
                cmp: Cmp::Lt,
                threshold: base + w2,
                base,
                cell: None,
                expect_pass: Some(best.is_some()),
                expect_value: best.map(|v| base + v),
            });
            query_index += 1;
        }
    }

    let trace = UpdateTrace {
        header: TraceHeader {
            n: nv,
            directed: false,
            problem: Problem::NwStsp,
            source: 0,
            target: Some(t),
            mode: Mode::Incremental,
            node_weights: Some(node_weights),
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

/// Online triple products through node-weighted s-t distances. The matrix
/// fixes the static graph; each query round wires its three vectors into the
/// matchings at a fresh diagonal offset before one distance probe per inner
/// coordinate. Incremental rounds climb offsets i; decremental rounds start
/// from every offset pre-inserted and tear down offset n - i, retiring used
/// edges after their query so each dynamic edge is touched exactly once.
pub fn gen_omv3_to_nwstsp(
    inst: &TripleProductInstance,
    decremental: bool,
) -> Result<ReductionBundle, ReduceError> {
    let n = inst.n;
    let rounds = inst.queries.len();
    assert!(rounds <= n, "at most one query round per matrix dimension");
    let w = 100 * n as Weight;
    let nv = 20 * n + 2;
    nw_overflow_guard(nv, n, w as i128)?;
    let lay = NwLayout { n };
    let w4 = w * w * w * w;
    let w3 = w * w * w;
    let w2 = w * w;
    let t = 20 * n + 1;

    let mut node_weights = vec![w4];
    push_gadget_weights(&mut node_weights, n, w, w2);
    push_gadget_weights(&mut node_weights, n, w, w);
    push_gadget_weights(&mut node_weights, n, w, 1);
    push_gadget_weights(&mut node_weights, n, w, w2);
    node_weights.push(w4);

    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.l1(0, k), 0));
        initial.push((lay.l4(3, k), t, 0));
    }
    for g in 0..4 {
        for x in 0..n {
            initial.push((lay.l1(g, x), lay.l2(g, x), 0));
        }
    }
    for x in 0..n {
        for y in 0..n {
            if inst.a.get(x, y) {
                initial.push((lay.l4(0, x), lay.l1(1, y), 0));
                initial.push((lay.l4(1, x), lay.l1(2, y), 0));
                initial.push((lay.l4(2, x), lay.l1(3, y), 0));
            }
        }
    }
    if decremental {
        // Every offset any round will tear down, across all four gadgets.
        for i in 0..rounds {
            let off = n - i;
            for g in 0..4 {
                for x in 0..n {
                    initial.push((lay.l2(g, x), lay.l3(g, x + off), 0));
                    initial.push((lay.l3(g, x + off), lay.l4(g, x), 0));
                }
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
        let w3_coeff = if decremental { 8 * n + 8 * i } else { 16 * n - 8 * i };
        for (gadget, bits) in [(1usize, &q.v), (2usize, &q.w)] {
            for j in 0..n {
                if bits[j] != decremental {
                    // Incremental: wire 1-bits in. Decremental: tear 0-bits out.
                    let op = |u, v| {
                        if decremental {
                            Op::Delete { u, v }
                        } else {
                            Op::Insert { u, v, w: 0 }
                        }
                    };
                    ops.push(op(lay.l2(gadget, j), lay.l3(gadget, j + off)));
                    ops.push(op(lay.l3(gadget, j + off), lay.l4(gadget, j)));
                }
            }
        }
        let inner: Vec<usize> =
            if decremental { (0..n).collect() } else { (0..n).rev().collect() };
        for k in inner {
            if q.u[k] != decremental {
                for g in [0usize, 3] {
                    if decremental {
                        ops.push(Op::Delete { u: lay.l2(g, k), v: lay.l3(g, k + off) });
                        ops.push(Op::Delete { u: lay.l3(g, k + off), v: lay.l4(g, k) });
                    } else {
                        ops.push(Op::Insert { u: lay.l2(g, k), v: lay.l3(g, k + off), w: 0 });
                        ops.push(Op::Insert { u: lay.l3(g, k + off), v: lay.l4(g, k), w: 0 });
                    }
                }
            }
            let base = 18 * w4 + w3_coeff as Weight * w3 + 2 * k as Weight * w2;
            let best = if q.u[k] {
                min_pair_value(
                    n,
                    w,
                    |j| q.v[j],
                    |l| q.w[l],
                    |j| inst.a.get(k, j),
                    |j, l| inst.a.get(j, l),
                    |l| inst.a.get(l, k),
                )
            } else {
                None
            };
            ops.push(Op::Query { kind: QueryKind::StDist });
            checks.push(QueryCheck {
                query: query_index,
                round: i,
                slot: k,
                entry: None,
                cmp: Cmp::Lt,
                threshold: base + w2,
                base,
                cell: None,
                expect_pass: Some(best.is_some()),
                expect_value: best.map(|v| base + v),
            });
            query_index += 1;
            if decremental && q.u[k] {
                // Retire the coordinate probed by this query.
                for g in [0usize, 3] {
                    ops.push(Op::Delete { u: lay.l2(g, k), v: lay.l3(g, k + off) });
                    ops.push(Op::Delete { u: lay.l3(g, k + off), v: lay.l4(g, k) });
                }
            }
        }
        if decremental {
            for (gadget, bits) in [(1usize, &q.v), (2usize, &q.w)] {
                for j in 0..n {
                    if bits[j] {
                        ops.push(Op::Delete { u: lay.l2(gadget, j), v: lay.l3(gadget, j + off) });
                        ops.push(Op::Delete { u: lay.l3(gadget, j + off), v: lay.l4(gadget, j) });
                    }
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
            n: nv,
            directed: false,
            problem: Problem::NwStsp,
            source: 0,
            target: Some(t),
            mode: if decremental { Mode::Decremental } else { Mode::Incremental },
            node_weights: Some(node_weights),
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

/// Min-witness 3-product through node-weighted single-source distances. Two
/// gadgets chain the A and C tests; D drives the rounds. Each (round, inner)
/// step issues one all-vertices query, and the C-layer entries decode the
/// minimal witness per output triple. The decremental twin is
/// `bundle.reversed()`.
pub fn gen_mw3p_to_nwsssp(
    a: &BoolMatrix,
    c: &BoolMatrix,
    d: &BoolMatrix,
) -> Result<ReductionBundle, ReduceError> {
    let n = a.rows;
    assert!(
        a.cols == n && c.rows == n && c.cols == n && d.rows == n && d.cols == n,
        "square matrices of one dimension"
    );
    let w = 100 * n as Weight;
    let nv = 11 * n + 1;
    nw_overflow_guard(nv, n, w as i128)?;
    let lay = NwLayout { n };
    let w4 = w * w * w * w;
    let w3 = w * w * w;
    let w2 = w * w;
    let c1 = |l: usize| 10 * n + 1 + l;

    let mut node_weights = vec![w4];
    push_gadget_weights(&mut node_weights, n, w, w2); // A
    push_gadget_weights(&mut node_weights, n, w, w); // B
    for l in 0..n {
        node_weights.push(w4 + l as Weight);
    }

    let mut initial = Vec::new();
    for k in 0..n {
        initial.push((0, lay.l1(0, k), 0));
    }
    for g in 0..2 {
        for x in 0..n {
            initial.push((lay.l1(g, x), lay.l2(g, x), 0));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) {
                initial.push((lay.l4(0, i), lay.l1(1, j), 0));
            }
            if c.get(i, j) {
                initial.push((lay.l4(1, j), c1(i), 0));
            }
        }
    }

    let witnesses = min_witness3(a, c, d);
    let mut ops = Vec::new();
    let mut checks = Vec::new();
    let mut round_starts = Vec::new();
    let mut updates = 0usize;
    let mut query_index = 0usize;
    for i in 0..n {
        round_starts.push(ops.len());
        for j in 0..n {
            if d.get(i, j) {
                ops.push(Op::Insert { u: lay.l2(1, j), v: lay.l3(1, j + i), w: 0 });
                ops.push(Op::Insert { u: lay.l3(1, j + i), v: lay.l4(1, j), w: 0 });
                updates += 2;
            }
        }
        for k in (0..n).rev() {
            ops.push(Op::Insert { u: lay.l2(0, k), v: lay.l3(0, k + i), w: 0 });
            ops.push(Op::Insert { u: lay.l3(0, k + i), v: lay.l4(0, k), w: 0 });
            updates += 2;
            ops.push(Op::Query { kind: QueryKind::SsspAll });
            for l in 0..n {
                let base = 10 * w4 + (8 * n - 4 * i) as Weight * w3 + k as Weight * w2
                    + l as Weight;
                let wit = witnesses.get(k, l, i).map(|j| j as Weight);
                checks.push(QueryCheck {
                    query: query_index,
                    round: i,
                    slot: k,
                    entry: Some(c1(l)),
                    cmp: Cmp::Lt,
                    threshold: base + w2 - l as Weight,
                    base,
                    cell: Some((k * n + l) * n + i),
                    expect_pass: Some(wit.is_some()),
                    expect_value: wit.map(|j| base + j * w),
                });
            }
            query_index += 1;
        }
    }

    let expected = HarnessAnswer::WitnessGrid {
        values: (0..n)
            .flat_map(|k| {
                let witnesses = &witnesses;
                (0..n).flat_map(move |l| {
                    (0..n).map(move |i| witnesses.get(k, l, i).map(|j| j as Weight))
                })
            })
            .collect(),
    };
    let trace = UpdateTrace {
        header: TraceHeader {
            n: nv,
            directed: false,
            problem: Problem::NwSssp,
            source: 0,
            target: None,
            mode: Mode::Incremental,
            node_weights: Some(node_weights),
            initial_edges: Some(initial),
        },
        ops,
    };
    Ok(ReductionBundle {
        trace,
        kind: BundleKind::WitnessGrid {
            cells: n * n * n,
            stride: w,
            negate: false,
            witness_bound: n as Weight,
        },
        checks,
        round_starts,
        audit: AuditSpec {
            exact_updates: Some(updates),
            round_update_cap: Some(4 * n),
            per_edge_setw_cap: Some(0),
        },
        expected,
    })
}
