//! Bottleneck paths: static oracles plus the two edge-count-bounded
//! dynamic algorithms, the threshold scheme for (s,t) queries and the
//! per-distinct-weight layered scheme for single-source queries.
//!
//! Conventions: b(s,s) = +INF, unreachable = -INF. Both collapse to null
//! at the wire boundary; internally they are distinct semiring values.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{DynamicGraph, Mode, Vertex, Weight, INF, NEG_INF};
use crate::reach::{DecrementalSSR, FullyDynamicStReach, IncrementalSSR, ReachStrategy};

/// (max,min) Dijkstra over an adjacency list. d[s] = +INF; each relaxation
/// caps the path capacity at the new edge and keeps the best per vertex.
pub fn ssbp_on_adj(n: usize, adj: &[Vec<(Vertex, Weight)>], s: Vertex) -> Vec<Weight> {
    let mut cap = vec![NEG_INF; n];
    let mut done = vec![false; n];
    let mut heap = std::collections::BinaryHeap::new();
    cap[s] = INF;
    heap.push((INF, s));
    while let Some((c, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in &adj[u] {
            let cand = c.min(w);
            if cand > cap[v] {
                cap[v] = cand;
                heap.push((cand, v));
            }
        }
    }
    cap
}

pub fn static_ssbp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    let adj: Vec<Vec<_>> = (0..g.n()).map(|u| g.out_edges(u).collect()).collect();
    ssbp_on_adj(g.n(), &adj, s)
}

pub fn static_apbp(g: &DynamicGraph) -> Vec<Vec<Weight>> {
    (0..g.n()).map(|s| static_ssbp(g, s)).collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BottleneckError {
    #[error("weight {0} not in the declared universe")]
    UnknownWeight(Weight),
    #[error("{op} not supported in {mode:?} mode")]
    WrongOp { op: &'static str, mode: Mode },
}

/// Threshold (s,t) bottleneck tracker. Keeps a fully dynamic reachability
/// structure holding a suffix of the weight-sorted edge list; the answer
/// is the weight at which loading/unloading last crossed connectivity.
/// Every edge enters and leaves the structure at most once, so the
/// structure sees at most 2m operations over a whole trace.
pub struct ThresholdStBP {
    mode: Mode,
    theta: Option<Weight>,
    reach: FullyDynamicStReach,
    /// Incremental: edges currently in the structure, ascending, so the
    /// unload cascade pops the lightest first. The structure stays
    /// disconnected between steps.
    loaded: BTreeSet<(Weight, Vertex, Vertex)>,
    /// Decremental: edges not yet loaded, so the load cascade pops the
    /// heaviest first. The structure stays connected while theta is set.
    pending: BTreeSet<(Weight, Vertex, Vertex)>,
    weights: BTreeMap<(Vertex, Vertex), Weight>,
}

impl ThresholdStBP {
    /// Incremental from an empty graph or decremental from `initial`.
    pub fn new(
        n: usize,
        s: Vertex,
        t: Vertex,
        directed: bool,
        mode: Mode,
        initial: impl IntoIterator<Item = (Vertex, Vertex, Weight)>,
    ) -> Result<ThresholdStBP, BottleneckError> {
        if mode == Mode::Dynamic {
            return Err(BottleneckError::WrongOp { op: "fully dynamic trace", mode });
        }
        let mut ds = ThresholdStBP {
            mode,
            theta: None,
            reach: FullyDynamicStReach::new(n, s, t, directed, ReachStrategy::RecomputeOnQuery),
            loaded: BTreeSet::new(),
            pending: BTreeSet::new(),
            weights: BTreeMap::new(),
        };
        match mode {
            Mode::Incremental => {
                for (u, v, w) in initial {
                    ds.insert(u, v, w)?;
                }
            }
            Mode::Decremental => {
                for (u, v, w) in initial {
                    ds.pending.insert((w, u, v));
                    ds.weights.insert((u, v), w);
                }
                ds.extend_until_connected();
            }
            Mode::Dynamic => unreachable!(),
        }
        Ok(ds)
    }

    pub fn answer(&self) -> Option<Weight> {
        self.theta
    }

    /// Insertions plus deletions seen by the reachability structure.
    pub fn structure_ops(&self) -> u64 {
        self.reach.edge_ops()
    }

    /// Decremental load cascade: add pending edges heaviest-first until s
    /// reaches t; the last loaded weight is the new answer.
    fn extend_until_connected(&mut self) {
        if self.reach.query() {
            return;
        }
        self.theta = None;
        while let Some(&(w, u, v)) = self.pending.last() {
            self.pending.remove(&(w, u, v));
            self.loaded.insert((w, u, v));
            self.reach.insert(u, v);
            if self.reach.query() {
                self.theta = Some(w);
                return;
            }
        }
    }

    /// Incremental unload cascade: drop loaded edges lightest-first until
    /// s and t disconnect again; the disconnecting weight is the answer.
    /// Dropped edges sit at or below the new answer, and the answer never
    /// decreases, so they are gone for good.
    fn shrink_until_disconnected(&mut self) {
        while self.reach.query() {
            let &(w, u, v) = self.loaded.first().expect("connected structure has edges");
            self.loaded.remove(&(w, u, v));
            self.reach.delete(u, v);
            self.theta = Some(w);
        }
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), BottleneckError> {
        if self.mode != Mode::Incremental {
            return Err(BottleneckError::WrongOp { op: "insert", mode: self.mode });
        }
        if let Some(theta) = self.theta {
            if w <= theta {
                return Ok(());
            }
        }
        self.loaded.insert((w, u, v));
        self.reach.insert(u, v);
        self.shrink_until_disconnected();
        Ok(())
    }

    pub fn delete(&mut self, u: Vertex, v: Vertex) -> Result<(), BottleneckError> {
        if self.mode != Mode::Decremental {
            return Err(BottleneckError::WrongOp { op: "delete", mode: self.mode });
        }
        let w = self.weights.remove(&(u, v)).expect("deletion of absent edge");
        if self.pending.remove(&(w, u, v)) {
            return Ok(());
        }
        self.loaded.remove(&(w, u, v));
        self.reach.delete(u, v);
        self.extend_until_connected();
        Ok(())
    }
}

enum LayerInstances {
    Inc(Vec<IncrementalSSR<'static>>),
    Dec(Vec<DecrementalSSR<'static>>),
}

/// Single-source bottleneck via one reachability instance per distinct
/// weight: instance i holds exactly the edges of weight >= universe[i].
/// Queries binary search the monotone reachability predicate.
pub struct LayeredSsbp {
    directed: bool,
    /// Distinct weights, ascending.
    universe: Vec<Weight>,
    instances: LayerInstances,
    weights: BTreeMap<(Vertex, Vertex), Weight>,
    last_query_probes: u64,
    max_query_probes: u64,
}

impl LayeredSsbp {
    /// `universe` must contain every weight the trace will ever use;
    /// duplicates are collapsed.
    pub fn new(
        g: &DynamicGraph,
        source: Vertex,
        mode: Mode,
        universe: impl IntoIterator<Item = Weight>,
    ) -> Result<LayeredSsbp, BottleneckError> {
        let mut uni: Vec<Weight> = universe.into_iter().collect();
        uni.sort_unstable();
        uni.dedup();
        let mut weights = BTreeMap::new();
        for (u, v, w) in g.edges() {
            if uni.binary_search(&w).is_err() {
                return Err(BottleneckError::UnknownWeight(w));
            }
            weights.insert((u, v), w);
        }
        let arcs_at_least = |threshold: Weight| {
            let mut arcs = Vec::new();
            for (&(u, v), &w) in &weights {
                if w >= threshold {
                    arcs.push((u, v));
                    if !g.directed() {
                        arcs.push((v, u));
                    }
                }
            }
            arcs
        };
        let instances = match mode {
            Mode::Incremental => {
                let mut insts =
                    uni.iter().map(|_| IncrementalSSR::new(g.n(), source)).collect::<Vec<_>>();
                for (i, &w) in uni.iter().enumerate() {
                    for (u, v) in arcs_at_least(w) {
                        insts[i].insert(u, v);
                    }
                }
                LayerInstances::Inc(insts)
            }
            Mode::Decremental => LayerInstances::Dec(
                uni.iter().map(|&w| DecrementalSSR::new(g.n(), source, arcs_at_least(w))).collect(),
            ),
            Mode::Dynamic => {
                return Err(BottleneckError::WrongOp { op: "fully dynamic trace", mode })
            }
        };
        Ok(LayeredSsbp {
            directed: g.directed(),
            universe: uni,
            instances,
            weights,
            last_query_probes: 0,
            max_query_probes: 0,
        })
    }

    pub fn last_query_probes(&self) -> u64 {
        self.last_query_probes
    }

    pub fn max_query_probes(&self) -> u64 {
        self.max_query_probes
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    fn idx(&self, w: Weight) -> Result<usize, BottleneckError> {
        self.universe.binary_search(&w).map_err(|_| BottleneckError::UnknownWeight(w))
    }

    fn add_arcs(&mut self, u: Vertex, v: Vertex, lo: usize, hi: usize) {
        let LayerInstances::Inc(insts) = &mut self.instances else {
            panic!("arc additions only happen in incremental mode");
        };
        let directed = self.directed;
        for inst in &mut insts[lo..hi] {
            inst.insert(u, v);
            if !directed {
                inst.insert(v, u);
            }
        }
    }

    fn del_arcs(&mut self, u: Vertex, v: Vertex, lo: usize, hi: usize) {
        let LayerInstances::Dec(insts) = &mut self.instances else {
            panic!("arc removals only happen in decremental mode");
        };
        let directed = self.directed;
        for inst in &mut insts[lo..hi] {
            inst.delete(u, v);
            if !directed {
                inst.delete(v, u);
            }
        }
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), BottleneckError> {
        let hi = self.idx(w)? + 1;
        self.weights.insert((u, v), w);
        self.add_arcs(u, v, 0, hi);
        Ok(())
    }

    pub fn delete(&mut self, u: Vertex, v: Vertex) -> Result<(), BottleneckError> {
        let w = self.weights.remove(&(u, v)).expect("deletion of absent edge");
        let hi = self.idx(w)? + 1;
        self.del_arcs(u, v, 0, hi);
        Ok(())
    }

    /// Weight change: touch exactly the instances whose threshold falls in
    /// the half-open weight interval between old and new.
    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), BottleneckError> {
        let old = *self.weights.get(&(u, v)).expect("reweight of absent edge");
        let new_hi = self.idx(w)? + 1;
        let old_hi = self.idx(old)? + 1;
        self.weights.insert((u, v), w);
        match &self.instances {
            LayerInstances::Inc(_) => {
                assert!(w >= old, "incremental weight update must not decrease");
                self.add_arcs(u, v, old_hi, new_hi);
            }
            LayerInstances::Dec(_) => {
                assert!(w <= old, "decremental weight update must not increase");
                self.del_arcs(u, v, new_hi, old_hi);
            }
        }
        Ok(())
    }

    fn probe(&mut self, idx: usize, v: Vertex) -> bool {
        self.last_query_probes += 1;
        match &self.instances {
            LayerInstances::Inc(insts) => insts[idx].reached(v),
            LayerInstances::Dec(insts) => insts[idx].reached(v),
        }
    }

    /// b(s,v): the largest universe weight whose instance still reaches v.
    /// At most 1 + ceil(log2 W) probes.
    pub fn query(&mut self, v: Vertex) -> Weight {
        self.last_query_probes = 0;
        let ans = self.query_inner(v);
        self.max_query_probes = self.max_query_probes.max(self.last_query_probes);
        ans
    }

    fn query_inner(&mut self, v: Vertex) -> Weight {
        if self.universe.is_empty() || !self.probe(0, v) {
            return NEG_INF;
        }
        // Invariant: reachable at lo, unreachable at hi.
        let mut lo = 0usize;
        let mut hi = self.universe.len();
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.probe(mid, v) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.universe[lo]
    }

    pub fn query_all(&mut self, n: usize, source: Vertex) -> Vec<Weight> {
        (0..n).map(|v| if v == source { INF } else { self.query(v) }).collect()
    }
}

/// Path-minimum oracle over a maximum spanning forest; on undirected
/// graphs the bottleneck capacity is the smallest edge on the tree path.
pub struct BottleneckMSTOracle {
    comp: Vec<usize>,
    depth: Vec<usize>,
    /// Binary-lifting tables: up[k][v] and the minimum edge weight along
    /// the 2^k-step ascent.
    up: Vec<Vec<usize>>,
    minw: Vec<Vec<Weight>>,
}

impl BottleneckMSTOracle {
    pub fn build(g: &DynamicGraph) -> BottleneckMSTOracle {
        assert!(!g.directed(), "spanning tree oracle requires an undirected graph");
        let n = g.n();
        let mut edges: Vec<(Weight, Vertex, Vertex)> =
            g.edges().map(|(u, v, w)| (w, u, v)).collect();
        edges.sort_unstable_by(|a, b| b.cmp(a));
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        let mut tree = vec![Vec::new(); n];
        for (w, u, v) in edges {
            let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
            if ru != rv {
                dsu[ru] = rv;
                tree[u].push((v, w));
                tree[v].push((u, w));
            }
        }

        let mut comp = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut parent = vec![usize::MAX; n];
        let mut pw = vec![INF; n];
        let mut order = Vec::with_capacity(n);
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = root;
            parent[root] = root;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                order.push(u);
                for &(v, w) in &tree[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = root;
                        parent[v] = u;
                        pw[v] = w;
                        depth[v] = depth[u] + 1;
                        stack.push(v);
                    }
                }
            }
        }

        let levels = (usize::BITS - n.max(2).leading_zeros()) as usize;
        let mut up = vec![parent.clone()];
        let mut minw = vec![pw.clone()];
        for k in 1..levels {
            let (pu, pm) = (&up[k - 1], &minw[k - 1]);
            let mut nu = vec![0usize; n];
            let mut nm = vec![INF; n];
            for v in 0..n {
                nu[v] = pu[pu[v]];
                nm[v] = pm[v].min(pm[pu[v]]);
            }
            up.push(nu);
            minw.push(nm);
        }
        BottleneckMSTOracle { comp, depth, up, minw }
    }

    /// b(u,v) on the current graph; NEG_INF when u and v are in different
    /// components, INF on the diagonal.
    pub fn query(&self, u: Vertex, v: Vertex) -> Weight {
        if u == v {
            return INF;
        }
        if self.comp[u] != self.comp[v] {
            return NEG_INF;
        }
        let (mut a, mut b) = (u, v);
        let mut best = INF;
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let diff = self.depth[a] - self.depth[b];
        for k in 0..self.up.len() {
            if diff >> k & 1 == 1 {
                best = best.min(self.minw[k][a]);
                a = self.up[k][a];
            }
        }
        if a == b {
            return best;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                best = best.min(self.minw[k][a]).min(self.minw[k][b]);
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        best.min(self.minw[0][a]).min(self.minw[0][b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn chain_graph() -> DynamicGraph {
        // s=0 -> 1 -> 2=t with weights 5,3 plus direct 0->2 weight 4.
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 5).unwrap();
        g.insert_edge(1, 2, 3).unwrap();
        g
    }

    #[test]
    fn static_examples() {
        let mut g = chain_graph();
        assert_eq!(static_ssbp(&g, 0)[2], 3);
        g.insert_edge(0, 2, 4).unwrap();
        assert_eq!(static_ssbp(&g, 0)[2], 4);
        assert_eq!(static_ssbp(&g, 0)[0], INF);
        assert_eq!(static_ssbp(&g, 2)[0], NEG_INF);
    }

    #[test]
    fn static_matches_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = 8;
            let mut g = DynamicGraph::new(n, true);
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.3) {
                        g.insert_edge(u, v, rng.random_range(1..=9)).unwrap();
                    }
                }
            }
            let enumerated = crate::oracle::enum_ssbp(&g, 0);
            assert_eq!(static_ssbp(&g, 0), enumerated);
        }
    }

    #[test]
    fn threshold_decremental_example() {
        let mut g = chain_graph();
        g.insert_edge(0, 2, 4).unwrap();
        let mut ds =
            ThresholdStBP::new(3, 0, 2, true, Mode::Decremental, g.edges()).unwrap();
        assert_eq!(ds.answer(), Some(4));
        ds.delete(0, 2).unwrap();
        assert_eq!(ds.answer(), Some(3));
        ds.delete(1, 2).unwrap();
        assert_eq!(ds.answer(), None);
    }

    #[test]
    fn threshold_incremental_matches_static_with_op_cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let n = 10;
            let mut pool = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.random_bool(0.25) {
                        pool.push((u, v, rng.random_range(1..=6)));
                    }
                }
            }
            let mut ds = ThresholdStBP::new(n, 0, n - 1, true, Mode::Incremental, []).unwrap();
            let mut g = DynamicGraph::new(n, true);
            for &(u, v, w) in &pool {
                g.insert_edge(u, v, w).unwrap();
                ds.insert(u, v, w).unwrap();
                let expect = static_ssbp(&g, 0)[n - 1];
                let expect = if expect == NEG_INF { None } else { Some(expect) };
                assert_eq!(ds.answer(), expect);
            }
            assert!(ds.structure_ops() <= 2 * pool.len() as u64);
        }
    }

    #[test]
    fn threshold_decremental_matches_static_with_op_cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for round in 0..10 {
            let n = 9;
            let directed = round % 2 == 0;
            let mut g = DynamicGraph::new(n, directed);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.35) {
                        g.insert_edge(u, v, rng.random_range(1..=6)).unwrap();
                    }
                }
            }
            let m = g.edges().count();
            let mut ds =
                ThresholdStBP::new(n, 0, n - 1, directed, Mode::Decremental, g.edges()).unwrap();
            let mut order: Vec<(Vertex, Vertex)> = g.edges().map(|(u, v, _)| (u, v)).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            for (u, v) in order {
                g.delete_edge(u, v).unwrap();
                ds.delete(u, v).unwrap();
                let expect = static_ssbp(&g, 0)[n - 1];
                let expect = if expect == NEG_INF { None } else { Some(expect) };
                assert_eq!(ds.answer(), expect);
            }
            assert!(ds.structure_ops() <= 2 * m as u64);
        }
    }

    #[test]
    fn layered_single_weight_universe() {
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 7).unwrap();
        let mut ds = LayeredSsbp::new(&g, 0, Mode::Incremental, [7]).unwrap();
        assert_eq!(ds.query(1), 7);
        assert_eq!(ds.query(2), NEG_INF);
        ds.insert(1, 2, 7).unwrap();
        assert_eq!(ds.query(2), 7);
        assert!(ds.max_query_probes() <= 1);
    }

    #[test]
    fn layered_rejects_unknown_weight() {
        let g = DynamicGraph::new(3, true);
        let mut ds = LayeredSsbp::new(&g, 0, Mode::Incremental, [1, 2, 4]).unwrap();
        assert_eq!(ds.insert(0, 1, 3), Err(BottleneckError::UnknownWeight(3)));
    }

    #[test]
    fn layered_decremental_matches_static_with_probe_cap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let n = 16;
        let universe = [2, 5, 9];
        let mut g = DynamicGraph::new(n, true);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.random_bool(0.2) {
                    g.insert_edge(u, v, universe[rng.random_range(0..3)]).unwrap();
                }
            }
        }
        let mut ds = LayeredSsbp::new(&g, 0, Mode::Decremental, universe).unwrap();
        let mut order: Vec<(Vertex, Vertex)> = g.edges().map(|(u, v, _)| (u, v)).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for (u, v) in order {
            g.delete_edge(u, v).unwrap();
            ds.delete(u, v).unwrap();
            let stat = static_ssbp(&g, 0);
            for v in 0..n {
                assert_eq!(ds.query(v), if v == 0 { universe[2] } else { stat[v] });
                assert!(ds.last_query_probes() <= 3, "probes {}", ds.last_query_probes());
            }
        }
    }

    #[test]
    fn layered_reachability_monotone_in_weight() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        let n = 10;
        let universe: Vec<Weight> = (1..=5).collect();
        let mut g = DynamicGraph::new(n, true);
        let mut ds = LayeredSsbp::new(&g, 0, Mode::Incremental, universe.clone()).unwrap();
        for _ in 0..40 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            let w = universe[rng.random_range(0..universe.len())];
            if u == v || g.has_edge(u, v) {
                continue;
            }
            g.insert_edge(u, v, w).unwrap();
            ds.insert(u, v, w).unwrap();
            for v in 0..n {
                let reach: Vec<bool> =
                    (0..universe.len()).map(|i| ds.probe(i, v)).collect();
                assert!(reach.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn mst_oracle_matches_apbp() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(15);
        for _ in 0..10 {
            let n = 12;
            let mut g = DynamicGraph::new(n, false);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.25) {
                        g.insert_edge(u, v, rng.random_range(1..=9)).unwrap();
                    }
                }
            }
            let oracle = BottleneckMSTOracle::build(&g);
            let apbp = static_apbp(&g);
            for u in 0..n {
                for v in 0..n {
                    assert_eq!(oracle.query(u, v), apbp[u][v], "{u}->{v}");
                }
            }
        }
    }

    #[test]
    fn mst_triangle_example() {
        let mut g = DynamicGraph::new(3, false);
        g.insert_edge(0, 1, 3).unwrap();
        g.insert_edge(1, 2, 4).unwrap();
        g.insert_edge(0, 2, 5).unwrap();
        let oracle = BottleneckMSTOracle::build(&g);
        assert_eq!(oracle.query(0, 1), 4);
    }
}
