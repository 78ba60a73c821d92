//! Static edge-weighted shortest paths and plain BFS reachability.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{DynamicGraph, Vertex, Weight, INF};

/// Dijkstra from s. d[s] = 0, INF = unreachable. Weights must be
/// non-negative; INF-weight edges saturate and never improve anything.
pub fn static_sp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    let mut dist = vec![INF; g.n()];
    let mut done = vec![false; g.n()];
    let mut heap: BinaryHeap<Reverse<(Weight, Vertex)>> = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, w) in g.out_edges(u) {
            let cand = d.saturating_add(w);
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(Reverse((cand, v)));
            }
        }
    }
    dist
}

/// Vertices reachable from s along directed edges.
pub fn bfs_reach(g: &DynamicGraph, s: Vertex) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    let mut queue = std::collections::VecDeque::new();
    seen[s] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for (v, _) in g.out_edges(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dijkstra_prefers_cheap_detour() {
        let mut g = DynamicGraph::new(3, true);
        g.insert_edge(0, 2, 10).unwrap();
        g.insert_edge(0, 1, 3).unwrap();
        g.insert_edge(1, 2, 4).unwrap();
        assert_eq!(static_sp(&g, 0), vec![0, 3, 7]);
    }

    #[test]
    fn unreachable_is_inf() {
        let g = DynamicGraph::new(2, true);
        assert_eq!(static_sp(&g, 0), vec![0, INF]);
        assert_eq!(bfs_reach(&g, 0), vec![true, false]);
    }
}
