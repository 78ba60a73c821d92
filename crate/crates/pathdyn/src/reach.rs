//! Single-source and (s,t) reachability maintenance. These are deliberately
//! simple structures standing in for the literature's near-optimal ones; the
//! interfaces and the counters are what the rest of the crate relies on.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::Vertex;

pub type ReachHook<'a> = Box<dyn FnMut(Vertex) + 'a>;

/// Incremental single-source reachability. Total work over a trace is O(m+n)
/// edge scans: an edge is looked at when it is inserted and once more when
/// its tail first becomes reachable.
pub struct IncrementalSSR<'a> {
    source: Vertex,
    reached: Vec<bool>,
    adj: Vec<Vec<Vertex>>,
    scans: u64,
    on_reach: Option<ReachHook<'a>>,
}

impl<'a> IncrementalSSR<'a> {
    pub fn new(n: usize, source: Vertex) -> Self {
        let mut reached = vec![false; n];
        reached[source] = true;
        IncrementalSSR { source, reached, adj: vec![Vec::new(); n], scans: 0, on_reach: None }
    }

    pub fn set_on_reach(&mut self, hook: ReachHook<'a>) {
        self.on_reach = Some(hook);
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn reached(&self, v: Vertex) -> bool {
        self.reached[v]
    }

    pub fn reached_set(&self) -> &[bool] {
        &self.reached
    }

    /// Edge scans so far; bounded by 2(m+n) over any insertion sequence.
    pub fn scans(&self) -> u64 {
        self.scans
    }

    /// Inserts (u,v) and returns the vertices that just became reachable, in
    /// discovery order. For an undirected edge call once per direction.
    pub fn insert(&mut self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        self.adj[u].push(v);
        self.scans += 1;
        if !self.reached[u] || self.reached[v] {
            return Vec::new();
        }
        let mut newly = Vec::new();
        let mut stack = vec![v];
        self.reached[v] = true;
        newly.push(v);
        while let Some(w) = stack.pop() {
            self.scans += self.adj[w].len() as u64;
            for i in 0..self.adj[w].len() {
                let x = self.adj[w][i];
                if !self.reached[x] {
                    self.reached[x] = true;
                    newly.push(x);
                    stack.push(x);
                }
            }
        }
        if let Some(hook) = &mut self.on_reach {
            for &w in &newly {
                hook(w);
            }
        }
        newly
    }
}

const UNREACH: u64 = u64::MAX;

/// Decremental single-source reachability via monotone BFS levels. level(v)
/// is the exact hop distance from the source and never decreases under
/// deletions; total maintenance is O(m n) elementary steps, standing in for
/// the cited near-linear structure.
pub struct DecrementalSSR<'a> {
    source: Vertex,
    level: Vec<u64>,
    out_adj: Vec<BTreeSet<Vertex>>,
    in_adj: Vec<BTreeSet<Vertex>>,
    steps: u64,
    on_unreach: Option<ReachHook<'a>>,
}

impl<'a> DecrementalSSR<'a> {
    pub fn new(n: usize, source: Vertex, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut out_adj = vec![BTreeSet::new(); n];
        let mut in_adj = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            out_adj[u].insert(v);
            in_adj[v].insert(u);
        }
        let mut ds = DecrementalSSR {
            source,
            level: vec![UNREACH; n],
            out_adj,
            in_adj,
            steps: 0,
            on_unreach: None,
        };
        ds.level[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &ds.out_adj[u] {
                if ds.level[v] == UNREACH {
                    ds.level[v] = ds.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        ds
    }

    pub fn set_on_unreach(&mut self, hook: ReachHook<'a>) {
        self.on_unreach = Some(hook);
    }

    pub fn reached(&self, v: Vertex) -> bool {
        self.level[v] != UNREACH
    }

    pub fn level(&self, v: Vertex) -> Option<u64> {
        (self.level[v] != UNREACH).then_some(self.level[v])
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Deletes (u,v) and returns the vertices that just became unreachable.
    /// Levels are repaired by chaotic iteration of level(w) = 1 + min over
    /// in-neighbors; levels only rise, so work per vertex is bounded by its
    /// degree times the number of levels it can climb.
    pub fn delete(&mut self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        self.out_adj[u].remove(&v);
        self.in_adj[v].remove(&u);
        let n = self.level.len() as u64;
        let mut newly = Vec::new();
        if self.level[v] == UNREACH
            || self.level[u] == UNREACH
            || self.level[u] + 1 != self.level[v]
        {
            return newly;
        }
        let mut queue = VecDeque::new();
        queue.push_back(v);
        while let Some(w) = queue.pop_front() {
            if w == self.source || self.level[w] == UNREACH {
                continue;
            }
            let mut best = UNREACH;
            for &x in &self.in_adj[w] {
                self.steps += 1;
                if self.level[x] != UNREACH && self.level[x] + 1 < best {
                    best = self.level[x] + 1;
                }
            }
            // Hop distances in a simple graph are below n; anything at n or
            // beyond has lost every support and is gone.
            if best >= n {
                best = UNREACH;
            }
            if best == self.level[w] {
                continue;
            }
            debug_assert!(best > self.level[w]);
            self.level[w] = best;
            if best == UNREACH {
                newly.push(w);
            }
            for &y in self.out_adj[w].clone().iter() {
                queue.push_back(y);
            }
        }
        if let Some(hook) = &mut self.on_unreach {
            for &w in &newly {
                hook(w);
            }
        }
        newly
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReachStrategy {
    RecomputeOnQuery,
    IncrementalWithRebuild,
}

/// Fully dynamic (s,t)-reachability. The default strategy recomputes a BFS
/// per query; the alternative keeps an IncrementalSSR and rebuilds it on
/// every deletion. Both are exact; callers choose speed trade-offs.
pub struct FullyDynamicStReach {
    n: usize,
    s: Vertex,
    t: Vertex,
    directed: bool,
    strategy: ReachStrategy,
    adj: Vec<BTreeSet<Vertex>>,
    edges: BTreeSet<(Vertex, Vertex)>,
    edge_ops: u64,
    inc: Option<IncrementalSSR<'static>>,
}

impl FullyDynamicStReach {
    pub fn new(n: usize, s: Vertex, t: Vertex, directed: bool, strategy: ReachStrategy) -> Self {
        let mut ds = FullyDynamicStReach {
            n,
            s,
            t,
            directed,
            strategy,
            adj: vec![BTreeSet::new(); n],
            edges: BTreeSet::new(),
            edge_ops: 0,
            inc: None,
        };
        if strategy == ReachStrategy::IncrementalWithRebuild {
            ds.inc = Some(IncrementalSSR::new(n, s));
        }
        ds
    }

    /// Structure insertions plus deletions so far.
    pub fn edge_ops(&self) -> u64 {
        self.edge_ops
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex) {
        self.edge_ops += 1;
        self.edges.insert((u, v));
        self.adj[u].insert(v);
        if !self.directed {
            self.adj[v].insert(u);
        }
        if let Some(inc) = &mut self.inc {
            inc.insert(u, v);
            if !self.directed {
                inc.insert(v, u);
            }
        }
    }

    pub fn delete(&mut self, u: Vertex, v: Vertex) {
        self.edge_ops += 1;
        self.edges.remove(&(u, v));
        self.adj[u].remove(&v);
        if !self.directed {
            self.adj[v].remove(&u);
        }
        if self.inc.is_some() {
            let mut inc = IncrementalSSR::new(self.n, self.s);
            for &(a, b) in &self.edges {
                inc.insert(a, b);
                if !self.directed {
                    inc.insert(b, a);
                }
            }
            self.inc = Some(inc);
        }
    }

    pub fn query(&self) -> bool {
        if self.s == self.t {
            return true;
        }
        match (&self.inc, self.strategy) {
            (Some(inc), ReachStrategy::IncrementalWithRebuild) => inc.reached(self.t),
            _ => {
                let mut seen = vec![false; self.n];
                let mut queue = VecDeque::new();
                seen[self.s] = true;
                queue.push_back(self.s);
                while let Some(u) = queue.pop_front() {
                    if u == self.t {
                        return true;
                    }
                    for &v in &self.adj[u] {
                        if !seen[v] {
                            seen[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_basic() {
        let mut ssr = IncrementalSSR::new(4, 0);
        assert_eq!(ssr.insert(1, 2), Vec::<Vertex>::new());
        assert_eq!(ssr.insert(0, 1), vec![1, 2]);
        assert_eq!(ssr.insert(2, 3), vec![3]);
        assert!(ssr.reached(3));
    }

    #[test]
    fn decremental_tree_cut() {
        let mut ssr = DecrementalSSR::new(4, 0, vec![(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(ssr.level(3), Some(1));
        assert_eq!(ssr.delete(0, 3), Vec::<Vertex>::new());
        assert_eq!(ssr.level(3), Some(3));
        let gone = ssr.delete(1, 2);
        assert_eq!(gone, vec![2, 3]);
        assert!(!ssr.reached(2));
        assert!(ssr.reached(1));
    }

    #[test]
    fn st_reach_mixed() {
        for strategy in [ReachStrategy::RecomputeOnQuery, ReachStrategy::IncrementalWithRebuild] {
            let mut ds = FullyDynamicStReach::new(3, 0, 2, true, strategy);
            assert!(!ds.query());
            ds.insert(0, 1);
            ds.insert(1, 2);
            assert!(ds.query());
            ds.delete(0, 1);
            assert!(!ds.query());
            ds.insert(0, 2);
            assert!(ds.query());
        }
    }
}
