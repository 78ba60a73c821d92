//! Exhaustive reference solvers. Everything here enumerates simple paths
//! outright (optimal values for all four path problems are attained on simple
//! paths), so these are only usable at small n, which is exactly their job:
//! they are the ground truth the fast code is tested against.

use crate::graph::{DynamicGraph, Vertex, Weight, INF, NEG_INF};

/// Walks every simple path out of u. `extend(state, w, v)` produces the new
/// path state after appending edge (u,v,w), or None to prune; each extension
/// is reported before recursing.
fn dfs_paths<F: FnMut(Vertex, Weight)>(
    g: &DynamicGraph,
    u: Vertex,
    state: Weight,
    visited: &mut Vec<bool>,
    extend: &dyn Fn(Weight, Weight, Vertex) -> Option<Weight>,
    report: &mut F,
) {
    for (v, w) in g.out_edges(u) {
        if visited[v] {
            continue;
        }
        let Some(next) = extend(state, w, v) else { continue };
        report(v, next);
        visited[v] = true;
        dfs_paths(g, v, next, visited, extend, report);
        visited[v] = false;
    }
}

fn enumerate(
    g: &DynamicGraph,
    s: Vertex,
    start: Weight,
    extend: impl Fn(Weight, Weight, Vertex) -> Option<Weight>,
    better: impl Fn(Weight, Weight) -> bool,
    worst: Weight,
) -> Vec<Weight> {
    let mut best = vec![worst; g.n()];
    best[s] = start;
    let mut visited = vec![false; g.n()];
    visited[s] = true;
    dfs_paths(g, s, start, &mut visited, &extend, &mut |v, value| {
        if better(value, best[v]) {
            best[v] = value;
        }
    });
    best
}

/// Shortest path distances by full enumeration. INF = unreachable.
pub fn enum_sp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    enumerate(g, s, 0, |d, w, _| Some(d.saturating_add(w)), |a, b| a < b, INF)
}

/// Node-weighted distances (sum of node weights on the path, both endpoints
/// included); edge weights are ignored. d(s,s) = wt(s). INF = unreachable.
pub fn enum_nw_sp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    enumerate(
        g,
        s,
        g.node_weight(s),
        |d, _, v| Some(d.saturating_add(g.node_weight(v))),
        |a, b| a < b,
        INF,
    )
}

/// Bottleneck capacities: max over paths of the min edge weight. b(s,s) =
/// INF, NEG_INF = unreachable.
pub fn enum_ssbp(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    enumerate(g, s, INF, |c, w, _| Some(c.min(w)), |a, b| a > b, NEG_INF)
}

/// Earliest arrivals: min over non-decreasing-weight paths of the last edge
/// weight. a(s,s) = 0, INF = unreachable.
pub fn enum_ssea(g: &DynamicGraph, s: Vertex) -> Vec<Weight> {
    let mut best = vec![INF; g.n()];
    best[s] = 0;
    let mut visited = vec![false; g.n()];
    visited[s] = true;
    // The path state is the last edge weight; s starts at NEG_INF so any
    // first edge qualifies, and a(s,s) keeps the 0 convention.
    dfs_paths(
        g,
        s,
        NEG_INF,
        &mut visited,
        &|last, w, _| if w >= last { Some(w) } else { None },
        &mut |v, value| {
            if value < best[v] {
                best[v] = value;
            }
        },
    );
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> DynamicGraph {
        // 0 -> 1 -> 3 with weights 5,3; 0 -> 2 -> 3 with weights 1,2.
        let mut g = DynamicGraph::new(4, true);
        g.insert_edge(0, 1, 5).unwrap();
        g.insert_edge(1, 3, 3).unwrap();
        g.insert_edge(0, 2, 1).unwrap();
        g.insert_edge(2, 3, 2).unwrap();
        g
    }

    #[test]
    fn sp_and_bottleneck_disagree_on_purpose() {
        let g = diamond();
        assert_eq!(enum_sp(&g, 0)[3], 3);
        assert_eq!(enum_ssbp(&g, 0)[3], 3); // via 1: min(5,3)=3; via 2: min(1,2)=1
    }

    #[test]
    fn ssea_blocks_decreasing_itineraries() {
        let g = diamond();
        // via 1: 5 then 3 is decreasing; via 2: 1 then 2 arrives at 2.
        assert_eq!(enum_ssea(&g, 0)[3], 2);
        assert_eq!(enum_ssea(&g, 0)[1], 5);
        assert_eq!(enum_ssea(&g, 0)[0], 0);
    }

    #[test]
    fn nw_accumulates_interior_vertices() {
        let mut g = DynamicGraph::new(3, true);
        g.set_node_weights(vec![2, 7, 3]).unwrap();
        g.insert_edge(0, 1, 0).unwrap();
        g.insert_edge(1, 2, 0).unwrap();
        assert_eq!(enum_nw_sp(&g, 0), vec![2, 9, 12]);
    }
}
