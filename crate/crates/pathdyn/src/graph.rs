use std::collections::BTreeMap;

use thiserror::Error;

pub type Vertex = usize;
pub type Weight = i64;

/// Reserved sentinel for +infinity. Never participates in arithmetic.
pub const INF: Weight = i64::MAX;
/// Reserved sentinel for -infinity (e.g. "no path" in the (max,min) semiring).
pub const NEG_INF: Weight = i64::MIN;

/// Update restriction a graph or trace is flagged with.
///
/// Incremental allows insertions and weight increases, decremental allows
/// deletions and weight decreases, dynamic allows everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Incremental,
    Decremental,
    Dynamic,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(Vertex, usize),
    #[error("self-loop ({0},{0}) rejected")]
    SelfLoop(Vertex),
    #[error("edge ({0},{1}) already present")]
    EdgeExists(Vertex, Vertex),
    #[error("edge ({0},{1}) absent")]
    EdgeAbsent(Vertex, Vertex),
    #[error("update violates {mode:?} monotonicity on edge ({u},{v})")]
    MonotonicityViolation { mode: Mode, u: Vertex, v: Vertex },
    #[error("node weights must have length n = {0}")]
    BadNodeWeights(usize),
}

/// Mutable weighted graph, directed or undirected, no self-loops, no parallel
/// edges. Undirected edges are stored once under the canonical (min,max) key;
/// the adjacency mirror carries both directions.
#[derive(Debug, Clone)]
pub struct DynamicGraph {
    n: usize,
    directed: bool,
    edges: BTreeMap<(Vertex, Vertex), Weight>,
    adj: Vec<BTreeMap<Vertex, Weight>>,
    radj: Vec<BTreeMap<Vertex, Weight>>,
    node_weights: Option<Vec<Weight>>,
    mode: Option<Mode>,
    version: u64,
}

impl DynamicGraph {
    pub fn new(n: usize, directed: bool) -> Self {
        DynamicGraph {
            n,
            directed,
            edges: BTreeMap::new(),
            adj: vec![BTreeMap::new(); n],
            radj: vec![BTreeMap::new(); n],
            node_weights: None,
            mode: None,
            version: 0,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn set_node_weights(&mut self, w: Vec<Weight>) -> Result<(), GraphError> {
        if w.len() != self.n {
            return Err(GraphError::BadNodeWeights(self.n));
        }
        self.node_weights = Some(w);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn node_weights(&self) -> Option<&[Weight]> {
        self.node_weights.as_deref()
    }

    pub fn node_weight(&self, v: Vertex) -> Weight {
        self.node_weights.as_ref().map_or(0, |w| w[v])
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn key(&self, u: Vertex, v: Vertex) -> (Vertex, Vertex) {
        if self.directed || u <= v {
            (u, v)
        } else {
            (v, u)
        }
    }

    fn check_pair(&self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains_key(&self.key(u, v))
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> Option<Weight> {
        self.edges.get(&self.key(u, v)).copied()
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if self.mode == Some(Mode::Decremental) {
            return Err(GraphError::MonotonicityViolation { mode: Mode::Decremental, u, v });
        }
        let key = self.key(u, v);
        if self.edges.contains_key(&key) {
            return Err(GraphError::EdgeExists(u, v));
        }
        self.edges.insert(key, w);
        self.adj[u].insert(v, w);
        self.radj[v].insert(u, w);
        if !self.directed {
            self.adj[v].insert(u, w);
            self.radj[u].insert(v, w);
        }
        self.version += 1;
        Ok(())
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if self.mode == Some(Mode::Incremental) {
            return Err(GraphError::MonotonicityViolation { mode: Mode::Incremental, u, v });
        }
        let key = self.key(u, v);
        if self.edges.remove(&key).is_none() {
            return Err(GraphError::EdgeAbsent(u, v));
        }
        self.adj[u].remove(&v);
        self.radj[v].remove(&u);
        if !self.directed {
            self.adj[v].remove(&u);
            self.radj[u].remove(&v);
        }
        self.version += 1;
        Ok(())
    }

    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        let key = self.key(u, v);
        let old = *self.edges.get(&key).ok_or(GraphError::EdgeAbsent(u, v))?;
        match self.mode {
            Some(Mode::Incremental) if w < old => {
                return Err(GraphError::MonotonicityViolation { mode: Mode::Incremental, u, v })
            }
            Some(Mode::Decremental) if w > old => {
                return Err(GraphError::MonotonicityViolation { mode: Mode::Decremental, u, v })
            }
            _ => {}
        }
        self.edges.insert(key, w);
        self.adj[u].insert(v, w);
        self.radj[v].insert(u, w);
        if !self.directed {
            self.adj[v].insert(u, w);
            self.radj[u].insert(v, w);
        }
        self.version += 1;
        Ok(())
    }

    /// Out-neighbors with weights, ascending by vertex id.
    pub fn out_edges(&self, u: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        self.adj[u].iter().map(|(&v, &w)| (v, w))
    }

    /// In-neighbors with weights, ascending by vertex id. Equals out_edges for
    /// undirected graphs.
    pub fn in_edges(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Weight)> + '_ {
        self.radj[v].iter().map(|(&u, &w)| (u, w))
    }

    /// All edges under their canonical keys, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, Weight)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_then_delete_roundtrip() {
        let mut g = DynamicGraph::new(2, true);
        g.insert_edge(0, 1, 5).unwrap();
        assert_eq!(g.weight(0, 1), Some(5));
        assert_eq!(g.edge_count(), 1);
        g.delete_edge(0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.version(), 2);
    }

    #[test]
    fn incremental_flag_rejects_weight_decrease() {
        let mut g = DynamicGraph::new(2, true).with_mode(Mode::Incremental);
        g.insert_edge(0, 1, 5).unwrap();
        assert_eq!(
            g.set_weight(0, 1, 3),
            Err(GraphError::MonotonicityViolation { mode: Mode::Incremental, u: 0, v: 1 })
        );
        g.set_weight(0, 1, 7).unwrap();
    }

    #[test]
    fn undirected_edge_is_one_edge() {
        let mut g = DynamicGraph::new(3, false);
        g.insert_edge(2, 1, 4).unwrap();
        assert!(g.has_edge(1, 2));
        assert_eq!(g.weight(1, 2), Some(4));
        assert_eq!(g.insert_edge(1, 2, 9), Err(GraphError::EdgeExists(1, 2)));
        assert_eq!(g.out_edges(1).collect::<Vec<_>>(), vec![(2, 4)]);
        assert_eq!(g.in_edges(1).collect::<Vec<_>>(), vec![(2, 4)]);
    }

    #[test]
    fn rejects_self_loop_and_out_of_range() {
        let mut g = DynamicGraph::new(2, true);
        assert_eq!(g.insert_edge(1, 1, 0), Err(GraphError::SelfLoop(1)));
        assert_eq!(g.insert_edge(0, 2, 0), Err(GraphError::VertexOutOfRange(2, 2)));
    }
}
