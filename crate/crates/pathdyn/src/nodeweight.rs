//! Node-weighted shortest paths. A path's length is the sum of node
//! weights over its vertices, endpoints included, so d(v,v) = wt(v) and
//! edge weights play no role. Unreachable pairs sit at +INF.
//!
//! The incremental engines process insertions in batches: distances are
//! snapshotted at batch boundaries, and queries run plain Dijkstra on a
//! small stitched graph whose edges are snapshot distances plus the
//! batch's buffered insertions.

use std::collections::BTreeMap;

use crate::graph::{DynamicGraph, Vertex, Weight, INF};

pub fn static_nw_sssp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    let wt = g.node_weights().expect("node weights required");
    let mut dist = vec![INF; g.n()];
    let mut heap = std::collections::BinaryHeap::new();
    dist[s] = wt[s];
    heap.push(std::cmp::Reverse((wt[s], s)));
    while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, _) in g.out_edges(u) {
            let nd = d.saturating_add(wt[v]);
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(std::cmp::Reverse((nd, v)));
            }
        }
    }
    dist
}

pub fn static_nw_apsp(g: &DynamicGraph) -> Vec<Vec<Weight>> {
    (0..g.n()).map(|s| static_nw_sssp(g, s)).collect()
}

/// Incremental batcher for node-weighted SSSP / (s,t)-SP.
///
/// Current buffer stays below the batch cap; when an insertion fills it,
/// the live graph becomes the new snapshot and the buffer drains. Snapshot
/// distance rows are computed lazily, only for the sources a stitched
/// graph actually references (the query source and buffered edge heads).
pub struct NwBatcher {
    source: Vertex,
    target: Option<Vertex>,
    batch_cap: usize,
    snapshot: DynamicGraph,
    current: DynamicGraph,
    rows: BTreeMap<Vertex, Vec<Weight>>,
    buffer: Vec<(Vertex, Vertex)>,
    rebuilds: u64,
}

impl NwBatcher {
    /// `t` is the batch exponent: cap = ceil(n^t), at least 1.
    pub fn new(initial: DynamicGraph, source: Vertex, target: Option<Vertex>, t: f64) -> Self {
        assert!((0.0..=1.0).contains(&t), "batch exponent out of range");
        assert!(initial.node_weights().is_some(), "node weights required");
        let batch_cap = ((initial.n() as f64).powf(t).ceil() as usize).max(1);
        NwBatcher {
            source,
            target,
            batch_cap,
            snapshot: initial.clone(),
            current: initial,
            rows: BTreeMap::new(),
            buffer: Vec::new(),
            rebuilds: 0,
        }
    }

    pub fn batch_cap(&self) -> usize {
        self.batch_cap
    }

    pub fn rebuilds(&self) -> u64 {
        self.rebuilds
    }

    pub fn buffered(&self) -> usize {
        self.buffer.len()
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex) -> Result<(), crate::graph::GraphError> {
        self.current.insert_edge(u, v, 0)?;
        self.buffer.push((u, v));
        if self.buffer.len() >= self.batch_cap {
            self.snapshot = self.current.clone();
            self.rows.clear();
            self.buffer.clear();
            self.rebuilds += 1;
        }
        Ok(())
    }

    fn row(&mut self, x: Vertex) -> Vec<Weight> {
        if let Some(r) = self.rows.get(&x) {
            return r.clone();
        }
        let r = static_nw_sssp(&self.snapshot, x);
        self.rows.insert(x, r.clone());
        r
    }

    /// Stitched-graph SSSP. Layers: source, buffered tails u_i, buffered
    /// heads v_i, then the requested targets (all of V for single-source,
    /// just {t} for the s-t variant). Snapshot distances already count
    /// both endpoint weights, so the u_i -> v_i stitching edges cost 0.
    /// Undirected buffered edges stitch in both orientations.
    fn stitched(&mut self, layer4: &[Vertex]) -> Vec<Weight> {
        let mut pairs = self.buffer.clone();
        if !self.current.directed() {
            pairs.extend(self.buffer.iter().map(|&(u, v)| (v, u)));
        }
        let k = pairs.len();
        // Node ids: 0 = source node, 1..=k tails, k+1..=2k heads,
        // 2k+1.. the layer-4 targets.
        let nodes = 2 * k + 1 + layer4.len();
        let mut adj: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); nodes];
        let s_row = self.row(self.source);
        for (i, &(u, _)) in pairs.iter().enumerate() {
            if s_row[u] < INF {
                adj[0].push((1 + i, s_row[u]));
            }
            adj[1 + i].push((k + 1 + i, 0));
        }
        for (c, &v) in layer4.iter().enumerate() {
            if s_row[v] < INF {
                adj[0].push((2 * k + 1 + c, s_row[v]));
            }
        }
        for (i, &(_, vi)) in pairs.iter().enumerate() {
            let vi_row = self.row(vi);
            for (j, &(uj, _)) in pairs.iter().enumerate() {
                if vi_row[uj] < INF {
                    adj[k + 1 + i].push((1 + j, vi_row[uj]));
                }
            }
            for (c, &v) in layer4.iter().enumerate() {
                if vi_row[v] < INF {
                    adj[k + 1 + i].push((2 * k + 1 + c, vi_row[v]));
                }
            }
        }

        let mut dist = vec![INF; nodes];
        let mut heap = std::collections::BinaryHeap::new();
        dist[0] = 0;
        heap.push(std::cmp::Reverse((0, 0usize)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d.saturating_add(w);
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(std::cmp::Reverse((nd, v)));
                }
            }
        }
        dist[2 * k + 1..].to_vec()
    }

    /// d(source, v) for all v on the current graph.
    pub fn query_all(&mut self) -> Vec<Weight> {
        let layer4: Vec<Vertex> = (0..self.current.n()).collect();
        self.stitched(&layer4)
    }

    /// d(source, target) on the current graph.
    pub fn query_st(&mut self) -> Weight {
        let t = self.target.expect("batcher built without a target");
        self.stitched(&[t])[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn weighted_graph(n: usize, directed: bool, seed: u64, density: f64) -> DynamicGraph {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g = DynamicGraph::new(n, directed);
        g.set_node_weights((0..n).map(|_| rng.random_range(1..=9)).collect()).unwrap();
        for u in 0..n {
            for v in (if directed { 0 } else { u + 1 })..n {
                if u != v && rng.random_bool(density) {
                    g.insert_edge(u, v, 0).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn single_edge_and_diagonal() {
        let mut g = DynamicGraph::new(2, true);
        g.set_node_weights(vec![2, 3]).unwrap();
        g.insert_edge(0, 1, 0).unwrap();
        let d = static_nw_sssp(&g, 0);
        assert_eq!(d, vec![2, 5]);
        assert_eq!(static_nw_sssp(&g, 1), vec![INF, 3]);
    }

    #[test]
    fn static_matches_enumeration() {
        for seed in 0..15 {
            let g = weighted_graph(10, seed % 2 == 0, seed, 0.25);
            assert_eq!(static_nw_sssp(&g, 0), crate::oracle::enum_nw_sp(&g, 0), "seed {seed}");
        }
    }

    #[test]
    fn triangle_inequality_with_endpoint_correction() {
        let g = weighted_graph(10, true, 77, 0.3);
        let d = static_nw_apsp(&g);
        let wt = g.node_weights().unwrap();
        for u in 0..10 {
            for v in 0..10 {
                for w in 0..10 {
                    if d[u][v] < INF && d[v][w] < INF {
                        assert!(d[u][w] <= d[u][v] + d[v][w] - wt[v]);
                    }
                }
            }
        }
    }

    #[test]
    fn boundary_query_equals_snapshot_row() {
        let mut g = DynamicGraph::new(4, true);
        g.set_node_weights(vec![1, 2, 3, 4]).unwrap();
        // cap = ceil(4^0.5) = 2: two insertions drain the buffer.
        let mut b = NwBatcher::new(g.clone(), 0, None, 0.5);
        assert_eq!(b.batch_cap(), 2);
        b.insert(0, 1).unwrap();
        b.insert(1, 2).unwrap();
        g.insert_edge(0, 1, 0).unwrap();
        g.insert_edge(1, 2, 0).unwrap();
        assert_eq!((b.rebuilds(), b.buffered()), (1, 0));
        assert_eq!(b.query_all(), static_nw_sssp(&g, 0));
    }

    #[test]
    fn stitched_path_uses_two_buffered_edges() {
        // Snapshot holds 0->1, 2->3, 4->5; the batch inserts 1->2 and 3->4.
        // The only s-to-5 path alternates snapshot segments and both
        // buffered edges.
        let mut g = DynamicGraph::new(6, true);
        g.set_node_weights(vec![1, 2, 4, 8, 16, 32]).unwrap();
        g.insert_edge(0, 1, 0).unwrap();
        g.insert_edge(2, 3, 0).unwrap();
        g.insert_edge(4, 5, 0).unwrap();
        let mut b = NwBatcher::new(g, 0, Some(5), 1.0);
        assert_eq!(b.batch_cap(), 6);
        b.insert(1, 2).unwrap();
        b.insert(3, 4).unwrap();
        assert_eq!(b.query_st(), 63);
        assert_eq!(b.query_all()[4], 31);
    }

    #[test]
    fn batched_sssp_matches_recompute() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for round in 0..6 {
            let n = 12;
            let directed = round % 2 == 0;
            let mut g = DynamicGraph::new(n, directed);
            g.set_node_weights((0..n).map(|_| rng.random_range(0..=9)).collect()).unwrap();
            let mut b = NwBatcher::new(g.clone(), 0, None, 0.5);
            let mut done = 0;
            while done < 24 {
                let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
                if u == v || g.has_edge(u, v) {
                    continue;
                }
                g.insert_edge(u, v, 0).unwrap();
                b.insert(u, v).unwrap();
                assert_eq!(b.query_all(), static_nw_sssp(&g, 0), "round {round} op {done}");
                done += 1;
            }
        }
    }

    #[test]
    fn batched_stsp_matches_recompute() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let n = 12;
        let mut g = DynamicGraph::new(n, true);
        g.set_node_weights((0..n).map(|_| rng.random_range(1..=9)).collect()).unwrap();
        let mut b = NwBatcher::new(g.clone(), 0, Some(n - 1), 0.4);
        let mut done = 0;
        while done < 30 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u == v || g.has_edge(u, v) {
                continue;
            }
            g.insert_edge(u, v, 0).unwrap();
            b.insert(u, v).unwrap();
            assert_eq!(b.query_st(), static_nw_sssp(&g, 0)[n - 1], "op {done}");
            done += 1;
        }
    }
}
