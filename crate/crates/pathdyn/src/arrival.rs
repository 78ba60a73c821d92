//! Earliest arrivals. An itinerary is a path whose edge weights never
//! decrease; a(s,v) minimizes the last edge weight over itineraries, with
//! a(s,s) = 0. The dynamic engines run a reachability structure over a chain
//! gadget with one (p,q) vertex pair per original edge: p_e reachable means
//! "some itinerary reaches tail(e) ready to traverse e", and then
//! a(s,v) = min{wt(e) : e into v, p_e reachable}.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::graph::{DynamicGraph, Vertex, Weight, INF};
use crate::reach::{DecrementalSSR, IncrementalSSR};

/// Modified Dijkstra over arrival values: an edge (u,v,w) relaxes to
/// candidate w when w >= a(u). The minimal arrival at u dominates every
/// other itinerary to u for continuation purposes, so one settle per vertex
/// suffices.
pub fn static_ssea(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    let mut a = vec![INF; g.n()];
    a[s] = 0;
    let mut heap = BinaryHeap::new();
    // The empty itinerary at s constrains nothing: first edges are free.
    for (v, w) in g.out_edges(s) {
        if w < a[v] {
            a[v] = w;
            heap.push(Reverse((w, v)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > a[u] {
            continue;
        }
        for (v, w) in g.out_edges(u) {
            if w >= d && w < a[v] {
                a[v] = w;
                heap.push(Reverse((w, v)));
            }
        }
    }
    a
}

const IN_TAG: u8 = 0;
const OUT_TAG: u8 = 1;

type ChainKey = (Weight, u8, usize);

/// Chain gadget over the base graph. Gadget vertex 0 mirrors the source;
/// edge number e owns vertices p_e = 1+2e and q_e = 2+2e. Per base vertex
/// the chain orders q's of in-edges and p's of out-edges by weight, incoming
/// before outgoing on ties, with an edge between consecutive items; insertion
/// splices new items in without ever removing the now-redundant shortcut
/// edges, which are consistent with the order.
pub struct ChainGadget {
    source: Vertex,
    edge_info: Vec<(Vertex, Vertex, Weight)>,
    chains: Vec<BTreeMap<ChainKey, usize>>,
    edge_index: BTreeMap<(Vertex, Vertex), usize>,
    edges_created: u64,
}

pub fn p_vertex(e: usize) -> usize {
    1 + 2 * e
}

pub fn q_vertex(e: usize) -> usize {
    2 + 2 * e
}

/// Gadget vertex id -> the edge number whose p it is.
pub fn as_p_vertex(id: usize) -> Option<usize> {
    (id >= 1 && id % 2 == 1).then(|| (id - 1) / 2)
}

impl ChainGadget {
    pub fn new(base_n: usize, source: Vertex) -> Self {
        ChainGadget {
            source,
            edge_info: Vec::new(),
            chains: vec![BTreeMap::new(); base_n],
            edge_index: BTreeMap::new(),
            edges_created: 0,
        }
    }

    pub fn edge_info(&self, e: usize) -> (Vertex, Vertex, Weight) {
        self.edge_info[e]
    }

    pub fn edge_number(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.edge_index.get(&(u, v)).copied()
    }

    pub fn vertex_count(&self) -> usize {
        1 + 2 * self.edge_info.len()
    }

    /// Gadget edges created so far, over all splices.
    pub fn edges_created(&self) -> u64 {
        self.edges_created
    }

    /// Registers base edge (u,v,w) and returns the gadget edges to add.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex, w: Weight) -> Vec<(usize, usize)> {
        let e = self.edge_info.len();
        self.edge_info.push((u, v, w));
        self.edge_index.insert((u, v), e);
        let mut new_edges = vec![(p_vertex(e), q_vertex(e))];
        self.splice(u, (w, OUT_TAG, e), p_vertex(e), &mut new_edges);
        self.splice(v, (w, IN_TAG, e), q_vertex(e), &mut new_edges);
        if u == self.source {
            new_edges.push((0, p_vertex(e)));
        }
        self.edges_created += new_edges.len() as u64;
        new_edges
    }

    fn splice(
        &mut self,
        base: Vertex,
        key: ChainKey,
        id: usize,
        out: &mut Vec<(usize, usize)>,
    ) {
        let chain = &mut self.chains[base];
        if let Some((_, &pred)) = chain.range(..key).next_back() {
            out.push((pred, id));
        }
        if let Some((_, &succ)) = chain.range(key..).next() {
            out.push((id, succ));
        }
        chain.insert(key, id);
    }
}

/// Builds the complete gadget for a static graph and returns it with the
/// full gadget edge list.
pub fn build_chain_gadget(g: &DynamicGraph, s: Vertex) -> (ChainGadget, Vec<(usize, usize)>) {
    let mut gadget = ChainGadget::new(g.n(), s);
    let mut edges = Vec::new();
    for (u, v, w) in g.edges() {
        edges.extend(gadget.add_edge(u, v, w));
        if !g.directed() {
            edges.extend(gadget.add_edge(v, u, w));
        }
    }
    (gadget, edges)
}

/// Multiset of usable in-edge weights per base vertex; the cached min is the
/// arrival value.
#[derive(Debug, Default, Clone)]
struct ArrivalState {
    weights: Vec<BTreeMap<Weight, usize>>,
}

impl ArrivalState {
    fn new(n: usize) -> Self {
        ArrivalState { weights: vec![BTreeMap::new(); n] }
    }

    fn add(&mut self, v: Vertex, w: Weight) {
        *self.weights[v].entry(w).or_insert(0) += 1;
    }

    fn remove(&mut self, v: Vertex, w: Weight) {
        match self.weights[v].get_mut(&w) {
            Some(c) if *c > 1 => *c -= 1,
            Some(_) => {
                self.weights[v].remove(&w);
            }
            None => panic!("arrival multiset underflow at vertex {v} weight {w}"),
        }
    }

    fn min(&self, v: Vertex) -> Weight {
        self.weights[v].keys().next().copied().unwrap_or(INF)
    }
}

/// Incremental single-source earliest arrivals. `capacity` bounds the number
/// of base edges the trace will ever insert.
pub struct IncrementalSsea {
    base_n: usize,
    source: Vertex,
    gadget: ChainGadget,
    ssr: IncrementalSSR<'static>,
    state: ArrivalState,
}

impl IncrementalSsea {
    pub fn new(base_n: usize, source: Vertex, capacity: usize) -> Self {
        IncrementalSsea {
            base_n,
            source,
            gadget: ChainGadget::new(base_n, source),
            ssr: IncrementalSSR::new(1 + 2 * capacity, 0),
            state: ArrivalState::new(base_n),
        }
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, w: Weight) {
        for (a, b) in self.gadget.add_edge(u, v, w) {
            for id in self.ssr.insert(a, b) {
                if let Some(e) = as_p_vertex(id) {
                    let (_, head, wt) = self.gadget.edge_info(e);
                    self.state.add(head, wt);
                }
            }
        }
    }

    pub fn arrival(&self, v: Vertex) -> Weight {
        if v == self.source {
            0
        } else {
            self.state.min(v)
        }
    }

    pub fn arrivals(&self) -> Vec<Weight> {
        (0..self.base_n).map(|v| self.arrival(v)).collect()
    }

    pub fn gadget_edges_created(&self) -> u64 {
        self.gadget.edges_created()
    }
}

/// Decremental single-source earliest arrivals: the gadget is built once
/// from the initial graph, and deleting base edge e removes only the
/// (p_e, q_e) gadget edge.
pub struct DecrementalSsea {
    base_n: usize,
    source: Vertex,
    gadget: ChainGadget,
    ssr: DecrementalSSR<'static>,
    state: ArrivalState,
    deleted: Vec<bool>,
}

impl DecrementalSsea {
    pub fn new(g: &DynamicGraph, source: Vertex) -> Self {
        let (gadget, edges) = build_chain_gadget(g, source);
        let ssr = DecrementalSSR::new(gadget.vertex_count().max(1), 0, edges);
        let mut state = ArrivalState::new(g.n());
        for e in 0..gadget.vertex_count() / 2 {
            if ssr.reached(p_vertex(e)) {
                let (_, head, w) = gadget.edge_info(e);
                state.add(head, w);
            }
        }
        let deleted = vec![false; gadget.vertex_count() / 2];
        DecrementalSsea { base_n: g.n(), source, gadget, ssr, state, deleted }
    }

    pub fn delete(&mut self, u: Vertex, v: Vertex) {
        let e = self.gadget.edge_number(u, v).expect("deleting unknown edge");
        assert!(!self.deleted[e], "double delete of ({u},{v})");
        self.deleted[e] = true;
        // The deleted edge stops contributing no matter what its p still
        // reaches; the chain items stay behind as harmless stepping stones.
        if self.ssr.reached(p_vertex(e)) {
            let (_, head, w) = self.gadget.edge_info(e);
            self.state.remove(head, w);
        }
        for id in self.ssr.delete(p_vertex(e), q_vertex(e)) {
            if let Some(x) = as_p_vertex(id) {
                if !self.deleted[x] {
                    let (_, head, w) = self.gadget.edge_info(x);
                    self.state.remove(head, w);
                }
            }
        }
    }

    pub fn arrival(&self, v: Vertex) -> Weight {
        if v == self.source {
            0
        } else {
            self.state.min(v)
        }
    }

    pub fn arrivals(&self) -> Vec<Weight> {
        (0..self.base_n).map(|v| self.arrival(v)).collect()
    }
}

/// The claim the gadget rests on, computed directly from a reachability
/// predicate over gadget vertices.
pub fn arrivals_from_gadget(
    gadget: &ChainGadget,
    base_n: usize,
    source: Vertex,
    reached: impl Fn(usize) -> bool,
) -> Vec<Weight> {
    let mut a = vec![INF; base_n];
    a[source] = 0;
    for e in 0..gadget.vertex_count() / 2 {
        let (_, head, w) = gadget.edge_info(e);
        if reached(p_vertex(e)) && w < a[head] {
            a[head] = w;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enum_ssea;

    #[test]
    fn static_matches_enumeration_on_fixture() {
        let mut g = DynamicGraph::new(4, true);
        g.insert_edge(0, 1, 1).unwrap();
        g.insert_edge(1, 3, 2).unwrap();
        g.insert_edge(0, 2, 3).unwrap();
        g.insert_edge(2, 3, 2).unwrap();
        assert_eq!(static_ssea(&g, 0), enum_ssea(&g, 0));
        assert_eq!(static_ssea(&g, 0)[3], 2);
    }

    #[test]
    fn blocked_by_decreasing_weights() {
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 3).unwrap();
        g.insert_edge(1, 2, 2).unwrap();
        let a = static_ssea(&g, 0);
        assert_eq!(a[1], 3);
        assert_eq!(a[2], INF);
    }

    #[test]
    fn equal_weights_may_continue() {
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 2).unwrap();
        g.insert_edge(1, 2, 2).unwrap();
        assert_eq!(static_ssea(&g, 0)[2], 2);
    }

    #[test]
    fn incremental_engine_any_insertion_order() {
        for order in [[(0usize, 1usize, 1i64), (1, 2, 2)], [(1, 2, 2), (0, 1, 1)]] {
            let mut eng = IncrementalSsea::new(3, 0, 2);
            for (u, v, w) in order {
                eng.insert(u, v, w);
            }
            assert_eq!(eng.arrivals(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn decremental_engine_cuts_tail() {
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 1).unwrap();
        g.insert_edge(1, 2, 2).unwrap();
        let mut eng = DecrementalSsea::new(&g, 0);
        assert_eq!(eng.arrivals(), vec![0, 1, 2]);
        eng.delete(1, 2);
        assert_eq!(eng.arrivals(), vec![0, 1, INF]);
        eng.delete(0, 1);
        assert_eq!(eng.arrivals(), vec![0, INF, INF]);
    }

    #[test]
    fn single_edge_gadget_shape() {
        let mut g = DynamicGraph::new(2, true);
        g.insert_edge(0, 1, 7).unwrap();
        let (gadget, edges) = build_chain_gadget(&g, 0);
        assert_eq!(gadget.vertex_count(), 3);
        // s -> p -> q and nothing else.
        assert_eq!(edges, vec![(p_vertex(0), q_vertex(0)), (0, p_vertex(0))]);
    }

    #[test]
    fn tie_break_ranks_incoming_first() {
        // v has in-edge weight 2 and out-edge weight 2: the itinerary may
        // continue, so q must precede p in v's chain.
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 1, 2).unwrap();
        g.insert_edge(1, 2, 2).unwrap();
        let mut eng = IncrementalSsea::new(3, 0, 2);
        eng.insert(0, 1, 2);
        eng.insert(1, 2, 2);
        assert_eq!(eng.arrivals(), vec![0, 2, 2]);
        let _ = g;
    }
}
