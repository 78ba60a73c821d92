//! Incremental single-source bottleneck paths with sublinear recompute:
//! update indices are carved into dyadic blocks of length ceil(n^t), and
//! each completed block interval gets a preprocessed (max,min) row-query
//! structure answering "best path whose latest inserted edge lies in this
//! interval". A query combines the O(log n) structures covering (0, tau]
//! with a small three-layer graph over the edges inserted after tau.

use std::collections::BTreeMap;

use crate::bottleneck::ssbp_on_adj;
use crate::graph::{Vertex, Weight, INF, NEG_INF};
use crate::matrix::IntMatrix;
use crate::maxmin::{maxmin_product, MaxMinDS, MaxMinError};

/// Build a row-query structure, clamping the bucket exponent to the
/// largest value the matrix shape admits.
fn build_clamped(a: &IntMatrix, b: &IntMatrix, g: f64) -> MaxMinDS {
    match MaxMinDS::build(a, b, g) {
        Ok(ds) => ds,
        Err(MaxMinError::BadParameter { max, .. }) => {
            MaxMinDS::build(a, b, max).expect("clamped exponent is valid")
        }
    }
}

/// Preprocessed product for one interval L of update indices.
///
/// U is the set of endpoints of L's updates. A (V x U), S (U x U) and
/// B (U x V) hold bottleneck values among paths whose latest update is
/// strictly before L; S additionally absorbs L's own edge weights, so
/// A (*) S^closure (*) B ranges over exactly the paths that enter the
/// updated zone, move through it, and leave it.
struct IntervalDS {
    /// Row query at v: b(v, *) among paths with latest update in L.
    fwd: MaxMinDS,
    /// Row query at v: b(*, v) among the same paths (transposed product).
    rev: MaxMinDS,
}

pub struct DyadicSsbp {
    n: usize,
    source: Vertex,
    directed: bool,
    g: f64,
    /// Block length: ceil(n^t) update indices.
    k0: u64,
    /// All updates so far; update index i is updates[i-1].
    updates: Vec<(Vertex, Vertex, Weight)>,
    /// Keyed by (level, block): interval (2^level*(block-1)*k0, 2^level*block*k0].
    structures: BTreeMap<(u32, u64), IntervalDS>,
    /// Cached from-rows b_<=tau(x, *) for the current tau.
    cache_tau: u64,
    from_rows: BTreeMap<Vertex, Vec<Weight>>,
}

impl DyadicSsbp {
    pub fn new(
        n: usize,
        source: Vertex,
        directed: bool,
        t: f64,
        g: f64,
        initial: impl IntoIterator<Item = (Vertex, Vertex, Weight)>,
    ) -> DyadicSsbp {
        assert!((0.0..=1.0).contains(&t), "block exponent out of range");
        let k0 = (n as f64).powf(t).ceil() as u64;
        let mut ds = DyadicSsbp {
            n,
            source,
            directed,
            g,
            k0: k0.max(1),
            updates: Vec::new(),
            structures: BTreeMap::new(),
            cache_tau: 0,
            from_rows: BTreeMap::new(),
        };
        for (u, v, w) in initial {
            ds.insert(u, v, w);
        }
        ds
    }

    pub fn block_len(&self) -> u64 {
        self.k0
    }

    /// Built intervals as (lo, hi] update-index pairs, sorted.
    pub fn intervals(&self) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self
            .structures
            .keys()
            .map(|&(ell, s)| (((s - 1) << ell) * self.k0, (s << ell) * self.k0))
            .collect();
        out.sort_unstable();
        out
    }

    /// Keys of the structures covering (0, tau], tau a multiple of k0:
    /// one interval per set bit of tau/k0, most significant first.
    fn cover(&self, tau: u64) -> Vec<(u32, u64)> {
        let q = tau / self.k0;
        let mut keys = Vec::new();
        let mut prefix = 0u64;
        for ell in (0..64).rev() {
            if q >> ell & 1 == 1 {
                keys.push((ell as u32, (prefix >> ell) + 1));
                prefix += 1 << ell;
            }
        }
        keys
    }

    /// b(x, *) among paths using only updates <= tau; diagonal is +INF.
    fn b_from(&self, tau: u64, x: Vertex) -> Vec<Weight> {
        let mut out = vec![NEG_INF; self.n];
        out[x] = INF;
        for key in self.cover(tau) {
            let row = self.structures[&key].fwd.row(x);
            for (j, w) in row.into_iter().enumerate() {
                if w > out[j] {
                    out[j] = w;
                }
            }
        }
        out
    }

    /// b(*, x) among paths using only updates <= tau.
    fn b_to(&self, tau: u64, x: Vertex) -> Vec<Weight> {
        let mut out = vec![NEG_INF; self.n];
        out[x] = INF;
        for key in self.cover(tau) {
            let col = self.structures[&key].rev.row(x);
            for (i, w) in col.into_iter().enumerate() {
                if w > out[i] {
                    out[i] = w;
                }
            }
        }
        out
    }

    fn build_interval(&mut self, ell: u32, block: u64) {
        let hi = (block << ell) * self.k0;
        let lo = ((block - 1) << ell) * self.k0;
        let lups: Vec<(Vertex, Vertex, Weight)> =
            self.updates[lo as usize..hi as usize].to_vec();
        let mut members: Vec<Vertex> = lups.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        members.sort_unstable();
        members.dedup();
        let p = members.len();
        debug_assert!(p as u64 <= 2 * (hi - lo));

        let mut a = IntMatrix::filled(self.n, p, NEG_INF);
        let mut b = IntMatrix::filled(p, self.n, NEG_INF);
        for (ui, &u) in members.iter().enumerate() {
            for (i, w) in self.b_to(lo, u).into_iter().enumerate() {
                a.set(i, ui, w);
            }
            for (j, w) in self.b_from(lo, u).into_iter().enumerate() {
                b.set(ui, j, w);
            }
        }
        let mut s = IntMatrix::from_fn(p, p, |i, j| b.get(i, members[j]));
        for &(u, v, w) in &lups {
            let iu = members.binary_search(&u).unwrap();
            let iv = members.binary_search(&v).unwrap();
            if w > s.get(iu, iv) {
                s.set(iu, iv, w);
            }
            if !self.directed && w > s.get(iv, iu) {
                s.set(iv, iu, w);
            }
        }

        // Transitive closure of S by repeated squaring; the +INF diagonal
        // makes squaring monotone, and 2^rounds >= n >= |U| hops suffice.
        let rounds = usize::BITS - (self.n.max(2) - 1).leading_zeros();
        let mut star = s;
        for _ in 0..rounds {
            star = maxmin_product(&star, &star);
        }
        let m1 = maxmin_product(&a, &star);

        let fwd = build_clamped(&m1, &b, self.g);
        let rev = build_clamped(&b.transpose(), &m1.transpose(), self.g);
        self.structures.insert((ell, block), IntervalDS { fwd, rev });
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, w: Weight) {
        self.updates.push((u, v, w));
        let j = self.updates.len() as u64;
        if j.is_multiple_of(self.k0) {
            let q = j / self.k0;
            let mut ell = 0u32;
            while q.is_multiple_of(1 << ell) {
                self.build_interval(ell, q >> ell);
                if 1 << (ell + 1) > q {
                    break;
                }
                ell += 1;
            }
        }
        let tau = (j / self.k0) * self.k0;
        if tau != self.cache_tau {
            self.cache_tau = tau;
            self.from_rows.clear();
        }
    }

    fn cached_from_row(&mut self, x: Vertex) -> Vec<Weight> {
        if let Some(row) = self.from_rows.get(&x) {
            return row.clone();
        }
        let row = self.b_from(self.cache_tau, x);
        self.from_rows.insert(x, row.clone());
        row
    }

    /// b(source, *) on the current graph. Combines the covering structures
    /// at tau with a three-layer graph: {s}, endpoints of post-tau updates,
    /// and V, wired with b_<=tau values plus the raw post-tau edges (larger
    /// weight wins when a raw edge parallels a b-value edge).
    pub fn query_all(&mut self) -> Vec<Weight> {
        let tau = self.cache_tau as usize;
        let recent: Vec<(Vertex, Vertex, Weight)> = self.updates[tau..].to_vec();
        let mut hubs: Vec<Vertex> = recent.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        hubs.push(self.source);
        hubs.sort_unstable();
        hubs.dedup();

        let mut best: Vec<BTreeMap<Vertex, Weight>> = vec![BTreeMap::new(); self.n];
        let mut relax = |u: Vertex, v: Vertex, w: Weight| {
            if u != v {
                let slot = best[u].entry(v).or_insert(NEG_INF);
                *slot = (*slot).max(w);
            }
        };
        for &x in &hubs {
            for (j, w) in self.cached_from_row(x).into_iter().enumerate() {
                if w > NEG_INF {
                    relax(x, j, w);
                }
            }
        }
        for &(u, v, w) in &recent {
            relax(u, v, w);
            if !self.directed {
                relax(v, u, w);
            }
        }
        let adj: Vec<Vec<(Vertex, Weight)>> =
            best.into_iter().map(|m| m.into_iter().collect()).collect();
        ssbp_on_adj(self.n, &adj, self.source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bottleneck::static_ssbp;
    use crate::graph::DynamicGraph;
    use rand::{Rng, SeedableRng};

    #[test]
    fn empty_and_first_insertion() {
        let mut ds = DyadicSsbp::new(5, 0, true, 0.5, 0.5, []);
        let q = ds.query_all();
        assert_eq!(q[0], INF);
        assert!(q[1..].iter().all(|&w| w == NEG_INF));
        ds.insert(0, 3, 7);
        let q = ds.query_all();
        assert_eq!((q[3], q[1]), (7, NEG_INF));
    }

    #[test]
    fn interval_bookkeeping_after_two_blocks() {
        // n=16, t=0.5: block length 4. After 8 insertions the built set is
        // exactly the two length-4 intervals plus the one length-8 interval.
        let mut ds = DyadicSsbp::new(16, 0, true, 0.5, 0.5, []);
        assert_eq!(ds.block_len(), 4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut seen = std::collections::BTreeSet::new();
        while ds.updates.len() < 8 {
            let (u, v) = (rng.random_range(0..16), rng.random_range(0..16));
            if u != v && seen.insert((u, v)) {
                ds.insert(u, v, rng.random_range(1..=9));
            }
        }
        assert_eq!(ds.intervals(), vec![(0, 4), (0, 8), (4, 8)]);
    }

    fn random_run(n: usize, directed: bool, ops: usize, t: f64, g: f64, seed: u64) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut g_ref = DynamicGraph::new(n, directed);
        let mut ds = DyadicSsbp::new(n, 0, directed, t, g, []);
        let mut done = 0;
        while done < ops {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u == v || g_ref.has_edge(u, v) {
                continue;
            }
            let w = rng.random_range(1..=12);
            g_ref.insert_edge(u, v, w).unwrap();
            ds.insert(u, v, w);
            assert_eq!(ds.query_all(), static_ssbp(&g_ref, 0), "after {done} inserts");
            done += 1;
        }
    }

    #[test]
    fn matches_static_recompute_directed() {
        random_run(16, true, 32, 0.5, 0.5, 11);
    }

    #[test]
    fn matches_static_recompute_undirected() {
        random_run(12, false, 28, 0.5, 0.25, 12);
    }

    #[test]
    fn matches_static_at_extreme_block_exponents() {
        // t=0: every update completes a block, so queries exercise pure
        // covering-structure composition; t=1: one big block, pure
        // three-layer graph.
        random_run(8, true, 17, 0.0, 0.5, 13);
        random_run(8, true, 17, 1.0, 1.0, 14);
    }

    #[test]
    fn initial_edges_enter_as_updates() {
        let mut g_ref = DynamicGraph::new(6, true);
        let initial = [(0, 1, 5), (1, 2, 3), (2, 3, 8), (0, 3, 2)];
        for &(u, v, w) in &initial {
            g_ref.insert_edge(u, v, w).unwrap();
        }
        let mut ds = DyadicSsbp::new(6, 0, true, 0.0, 0.5, initial);
        assert_eq!(ds.query_all(), static_ssbp(&g_ref, 0));
    }

    #[test]
    fn covering_composition_equals_prefix_bottleneck() {
        // At a block boundary the recent set is empty, so the answer is
        // exactly the max over the covering structures; it must equal the
        // bottleneck array of the prefix graph.
        let n = 9;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut g_ref = DynamicGraph::new(n, true);
        let mut ds = DyadicSsbp::new(n, 0, true, 0.5, 0.5, []);
        let mut done = 0;
        while done < 24 {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u == v || g_ref.has_edge(u, v) {
                continue;
            }
            let w = rng.random_range(1..=9);
            g_ref.insert_edge(u, v, w).unwrap();
            ds.insert(u, v, w);
            done += 1;
            if ds.updates.len() as u64 % ds.block_len() == 0 {
                for x in 0..n {
                    let from = ds.b_from(ds.cache_tau, x);
                    assert_eq!(from, static_ssbp(&g_ref, x), "from {x}");
                }
            }
        }
    }
}
