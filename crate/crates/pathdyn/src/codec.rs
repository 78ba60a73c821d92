//! Path-weight machinery for fully dynamic all-pairs bottleneck paths.
//!
//! Weights are normalized to small integer labels by an order-preserving
//! list labeller, and path weights under the exponential encoding
//! sum_i a_i * M^(2n^2 - i) live in persistent segment trees over the
//! multiplicity array (a_i). Hash-consing gives every distinct subtree a
//! canonical id, so two paths compare in one root-to-leaf descent and
//! concatenating an edge copies a single tree path.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::graph::{DynamicGraph, Vertex, Weight, INF, NEG_INF};
use crate::matrix::IntMatrix;
use crate::maxmin::maxmin_product;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("item already present")]
    Duplicate,
    #[error("item not present")]
    Absent,
    #[error("label {0} outside [1, {1}]")]
    LabelOutOfRange(usize, usize),
    #[error("handles come from different universes")]
    SizeMismatch,
}

/// Order-preserving slot assignment: t items in an array of roughly 2t
/// slots, slot order matching item order. Insertions that land in a full
/// neighborhood redistribute the smallest enclosing power-of-two range
/// whose density stays under a per-level threshold, so items move
/// O(log^2 t) amortized per operation.
pub struct ListLabeller {
    slots: Vec<Option<Weight>>,
    pos: BTreeMap<Weight, usize>,
    moves: u64,
}

impl Default for ListLabeller {
    fn default() -> Self {
        Self::new()
    }
}

impl ListLabeller {
    pub fn new() -> ListLabeller {
        ListLabeller { slots: vec![None; 4], pos: BTreeMap::new(), moves: 0 }
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Total item relocations so far (rebuilds included).
    pub fn moves(&self) -> u64 {
        self.moves
    }

    /// 1-based slot index; the item's current integer label.
    pub fn label_of(&self, item: Weight) -> Option<usize> {
        self.pos.get(&item).map(|&s| s + 1)
    }

    pub fn items_in_order(&self) -> Vec<Weight> {
        self.slots.iter().filter_map(|s| *s).collect()
    }

    /// Inverse of label_of.
    pub fn item_at_label(&self, label: usize) -> Option<Weight> {
        self.slots.get(label.checked_sub(1)?).copied().flatten()
    }

    /// Spread `items` (sorted) evenly across slots [lo, lo+len), counting
    /// every item that lands on a new slot as a move.
    fn spread(&mut self, lo: usize, len: usize, items: &[Weight], fresh: Option<Weight>) {
        for s in &mut self.slots[lo..lo + len] {
            *s = None;
        }
        for (i, &item) in items.iter().enumerate() {
            let slot = lo + i * len / items.len();
            self.slots[slot] = Some(item);
            let prev = self.pos.insert(item, slot);
            if prev != Some(slot) && Some(item) != fresh {
                self.moves += 1;
            }
        }
    }

    fn rebuild(&mut self, fresh: Option<Weight>) {
        let items: Vec<Weight> = self.pos.keys().copied().collect();
        let cap = (2 * items.len().max(2)).next_power_of_two();
        self.slots = vec![None; cap];
        self.pos.clear();
        let lo = 0;
        let len = cap;
        if !items.is_empty() {
            self.spread(lo, len, &items, fresh);
        }
    }

    pub fn insert(&mut self, item: Weight) -> Result<(), CodecError> {
        if self.pos.contains_key(&item) {
            return Err(CodecError::Duplicate);
        }
        let t = self.pos.len() + 1;
        if 2 * t > self.capacity() {
            self.pos.insert(item, usize::MAX);
            self.rebuild(Some(item));
            return Ok(());
        }
        // Target: the first slot after the predecessor.
        let target = match self.pos.range(..item).next_back() {
            Some((_, &p)) => p + 1,
            None => 0,
        };
        let succ = self.pos.range(item..).next().map(|(_, &s)| s);
        let cap = self.capacity();
        if target < cap && self.slots[target].is_none() && succ.is_none_or(|s| target < s) {
            self.slots[target] = Some(item);
            self.pos.insert(item, target);
            return Ok(());
        }
        // Walk up dyadic ranges around the target until the density,
        // with the new item included, drops below the level threshold
        // (1 at leaves, 1/2 at the root). Placement within the range is
        // by value, so clamping the anchor to the last cell is safe.
        let anchor = target.min(cap - 1);
        let height = cap.trailing_zeros();
        let mut h = 1u32;
        loop {
            let len = 1usize << h;
            let lo = anchor / len * len;
            let count =
                self.slots[lo..lo + len].iter().filter(|s| s.is_some()).count() + 1;
            let threshold = 1.0 - 0.5 * h as f64 / height as f64;
            if (count as f64) <= threshold * len as f64 || h == height {
                let mut items: Vec<Weight> =
                    self.slots[lo..lo + len].iter().filter_map(|s| *s).collect();
                let at = items.partition_point(|&x| x < item);
                items.insert(at, item);
                self.spread(lo, len, &items, Some(item));
                return Ok(());
            }
            h += 1;
        }
    }

    pub fn delete(&mut self, item: Weight) -> Result<(), CodecError> {
        let Some(slot) = self.pos.remove(&item) else {
            return Err(CodecError::Absent);
        };
        self.slots[slot] = None;
        if self.capacity() > 4 && 8 * self.pos.len() < self.capacity() {
            self.rebuild(None);
        }
        Ok(())
    }
}

/// Opaque path-weight handle: the root of one version of the multiplicity
/// tree plus the universe size it was built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PwHandle {
    id: u32,
    positions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Leaf(i64),
    Pair(u32, u32),
}

/// Arena of hash-consed segment tree nodes over positions 1..=2n^2.
/// Equal multiplicity arrays always share one root id, so handle equality
/// is multiset equality and comparison descends the first differing child.
pub struct PathWeightArena {
    positions: usize,
    pad: usize,
    nodes: Vec<Node>,
    memo: HashMap<Node, u32>,
    allocs: u64,
    empty_root: u32,
}

impl PathWeightArena {
    pub fn new(n: usize) -> PathWeightArena {
        assert!(n > 0, "empty vertex universe");
        let positions = 2 * n * n;
        let pad = positions.next_power_of_two();
        let mut arena = PathWeightArena {
            positions,
            pad,
            nodes: Vec::new(),
            memo: HashMap::new(),
            allocs: 0,
            empty_root: 0,
        };
        let mut id = arena.intern(Node::Leaf(0));
        for _ in 0..pad.trailing_zeros() {
            id = arena.intern(Node::Pair(id, id));
        }
        arena.empty_root = id;
        arena
    }

    pub fn positions(&self) -> usize {
        self.positions
    }

    /// Total distinct nodes ever created.
    pub fn allocs(&self) -> u64 {
        self.allocs
    }

    fn intern(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.memo.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.memo.insert(node, id);
        self.allocs += 1;
        id
    }

    /// The all-zero array; every call returns the same canonical handle.
    pub fn empty(&self) -> PwHandle {
        PwHandle { id: self.empty_root, positions: self.positions }
    }

    fn bump(&mut self, id: u32, len: usize, offset: usize) -> u32 {
        let next = match self.nodes[id as usize] {
            Node::Leaf(c) => Node::Leaf(c + 1),
            Node::Pair(l, r) => {
                let half = len / 2;
                if offset < half {
                    Node::Pair(self.bump(l, half, offset), r)
                } else {
                    Node::Pair(l, self.bump(r, half, offset - half))
                }
            }
        };
        self.intern(next)
    }

    /// New handle with the multiplicity at `label` incremented; the input
    /// handle keeps its old contents. Copies one root-to-leaf path, so at
    /// most ceil(log2(2n^2)) + 1 fresh nodes.
    pub fn concat_edge(&mut self, h: PwHandle, label: usize) -> Result<PwHandle, CodecError> {
        if h.positions != self.positions {
            return Err(CodecError::SizeMismatch);
        }
        if label < 1 || label > self.positions {
            return Err(CodecError::LabelOutOfRange(label, self.positions));
        }
        let id = self.bump(h.id, self.pad, label - 1);
        Ok(PwHandle { id, positions: self.positions })
    }

    fn cmp_ids(&self, x: u32, y: u32) -> std::cmp::Ordering {
        if x == y {
            return std::cmp::Ordering::Equal;
        }
        match (self.nodes[x as usize], self.nodes[y as usize]) {
            (Node::Leaf(a), Node::Leaf(b)) => a.cmp(&b),
            (Node::Pair(l1, r1), Node::Pair(l2, r2)) => {
                if l1 != l2 {
                    self.cmp_ids(l1, l2)
                } else {
                    self.cmp_ids(r1, r2)
                }
            }
            _ => unreachable!("same-size trees have aligned shapes"),
        }
    }

    /// Order of sum_i a_i * M^(2n^2 - i): position 1 carries the highest
    /// power of M, so the first differing index decides and the larger
    /// multiplicity there wins.
    pub fn compare(&self, a: PwHandle, b: PwHandle) -> Result<std::cmp::Ordering, CodecError> {
        if a.positions != self.positions || b.positions != self.positions {
            return Err(CodecError::SizeMismatch);
        }
        Ok(self.cmp_ids(a.id, b.id))
    }

    /// The full multiplicity array (index 0 = label 1); test oracle aid.
    pub fn multiplicities(&self, h: PwHandle) -> Vec<i64> {
        fn walk(arena: &PathWeightArena, id: u32, out: &mut Vec<i64>) {
            match arena.nodes[id as usize] {
                Node::Leaf(c) => out.push(c),
                Node::Pair(l, r) => {
                    walk(arena, l, out);
                    walk(arena, r, out);
                }
            }
        }
        let mut out = Vec::with_capacity(self.pad);
        walk(self, h.id, &mut out);
        out.truncate(self.positions);
        out
    }
}

/// Reference fully dynamic APBP: weights flow through the labeller so the
/// closure runs on small labels, and each update recomputes the (max,min)
/// closure with the matrix kernels before mapping labels back.
pub struct FdApbp {
    graph: DynamicGraph,
    labeller: ListLabeller,
    refcount: BTreeMap<Weight, usize>,
}

impl FdApbp {
    pub fn new(graph: DynamicGraph) -> FdApbp {
        let mut fd =
            FdApbp { graph: DynamicGraph::new(graph.n(), graph.directed()), labeller: ListLabeller::new(), refcount: BTreeMap::new() };
        let edges: Vec<(Vertex, Vertex, Weight)> = graph.edges().collect();
        for (u, v, w) in edges {
            fd.insert(u, v, w).unwrap();
        }
        fd
    }

    fn acquire(&mut self, w: Weight) {
        let slot = self.refcount.entry(w).or_insert(0);
        *slot += 1;
        if *slot == 1 {
            self.labeller.insert(w).expect("fresh weight");
        }
    }

    fn release(&mut self, w: Weight) {
        let slot = self.refcount.get_mut(&w).expect("weight accounted");
        *slot -= 1;
        if *slot == 0 {
            self.refcount.remove(&w);
            self.labeller.delete(w).expect("tracked weight");
        }
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), crate::graph::GraphError> {
        self.graph.insert_edge(u, v, w)?;
        self.acquire(w);
        Ok(())
    }

    pub fn delete(&mut self, u: Vertex, v: Vertex) -> Result<(), crate::graph::GraphError> {
        let w = self.graph.weight(u, v).unwrap_or(NEG_INF);
        self.graph.delete_edge(u, v)?;
        self.release(w);
        Ok(())
    }

    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: Weight) -> Result<(), crate::graph::GraphError> {
        let old = self.graph.weight(u, v).unwrap_or(NEG_INF);
        self.graph.set_weight(u, v, w)?;
        self.release(old);
        self.acquire(w);
        Ok(())
    }

    /// Current all-pairs bottleneck matrix (raw weights, +INF diagonal).
    pub fn apbp(&self) -> Vec<Vec<Weight>> {
        let n = self.graph.n();
        let mut lab = IntMatrix::filled(n, n, NEG_INF);
        for i in 0..n {
            lab.set(i, i, INF);
        }
        for (u, v, w) in self.graph.edges() {
            let label = self.labeller.label_of(w).expect("edge weight labelled") as Weight;
            if label > lab.get(u, v) {
                lab.set(u, v, label);
                if !self.graph.directed() {
                    lab.set(v, u, label);
                }
            }
        }
        let rounds = usize::BITS - (n.max(2) - 1).leading_zeros();
        let mut closure = lab;
        for _ in 0..rounds {
            closure = maxmin_product(&closure, &closure);
        }
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = closure.get(i, j);
                        if c == INF || c == NEG_INF {
                            c
                        } else {
                            self.labeller.item_at_label(c as usize).expect("label maps back")
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bottleneck::static_apbp;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use std::cmp::Ordering;

    #[test]
    fn labeller_ascending_insert_bound() {
        let mut l = ListLabeller::new();
        let t = 256u32;
        for item in 1..=t {
            l.insert(item as Weight).unwrap();
        }
        assert_eq!(l.items_in_order(), (1..=t as Weight).collect::<Vec<_>>());
        let log2t = 8.0;
        assert!(
            (l.moves() as f64) <= 2.0 * t as f64 * log2t * log2t,
            "moves {} over budget",
            l.moves()
        );
        assert!(l.capacity() >= 2 * t as usize);
    }

    #[test]
    fn labeller_insert_delete_roundtrip() {
        let mut l = ListLabeller::new();
        l.insert(7).unwrap();
        assert_eq!(l.insert(7), Err(CodecError::Duplicate));
        l.delete(7).unwrap();
        assert_eq!(l.delete(7), Err(CodecError::Absent));
        assert!(l.is_empty());
        assert!(l.items_in_order().is_empty());
    }

    #[test]
    fn labeller_random_ops_match_sorted_shadow() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut l = ListLabeller::new();
        let mut shadow = std::collections::BTreeSet::new();
        let ops = 10_000;
        for _ in 0..ops {
            let item = rng.random_range(0..3_000) as Weight;
            if rng.random_bool(0.6) {
                match l.insert(item) {
                    Ok(()) => assert!(shadow.insert(item)),
                    Err(CodecError::Duplicate) => assert!(shadow.contains(&item)),
                    Err(e) => panic!("{e}"),
                }
            } else {
                match l.delete(item) {
                    Ok(()) => assert!(shadow.remove(&item)),
                    Err(CodecError::Absent) => assert!(!shadow.contains(&item)),
                    Err(e) => panic!("{e}"),
                }
            }
            assert_eq!(l.items_in_order(), shadow.iter().copied().collect::<Vec<_>>());
            // Labels are 1-based slot indices in sorted slot order.
            let mut labels: Vec<usize> =
                shadow.iter().map(|&x| l.label_of(x).unwrap()).collect();
            let sorted = {
                let mut s = labels.clone();
                s.sort_unstable();
                s
            };
            assert_eq!(labels, sorted);
            labels.dedup();
            assert_eq!(labels.len(), shadow.len());
        }
        let log2 = (l.len().max(2) as f64).log2();
        assert!((l.moves() as f64) <= 2.0 * ops as f64 * log2 * log2);
    }

    #[test]
    fn empty_handles_are_canonical() {
        let mut arena = PathWeightArena::new(4);
        let a = arena.empty();
        let b = arena.empty();
        assert_eq!(a, b);
        assert_eq!(arena.compare(a, b), Ok(Ordering::Equal));
        let c = arena.concat_edge(a, 3).unwrap();
        assert_ne!(c, a);
        assert_eq!(arena.compare(c, a), Ok(Ordering::Greater));
        assert_eq!(arena.multiplicities(a), vec![0; 32]);
    }

    #[test]
    fn concat_is_multiset_and_persistent() {
        let mut arena = PathWeightArena::new(3);
        let e = arena.empty();
        let ab = {
            let a = arena.concat_edge(e, 5).unwrap();
            arena.concat_edge(a, 11).unwrap()
        };
        let ba = {
            let b = arena.concat_edge(e, 11).unwrap();
            arena.concat_edge(b, 5).unwrap()
        };
        assert_eq!(ab, ba);
        // The intermediate handle kept its own contents.
        let a = arena.concat_edge(e, 5).unwrap();
        let mut want = vec![0i64; 18];
        want[4] = 1;
        assert_eq!(arena.multiplicities(a), want);
        assert_eq!(arena.concat_edge(e, 0), Err(CodecError::LabelOutOfRange(0, 18)));
        assert_eq!(arena.concat_edge(e, 19), Err(CodecError::LabelOutOfRange(19, 18)));
    }

    #[test]
    fn smaller_label_encodes_greater_weight() {
        let mut arena = PathWeightArena::new(2);
        let e = arena.empty();
        let one = arena.concat_edge(e, 1).unwrap();
        let two = arena.concat_edge(e, 2).unwrap();
        assert_eq!(arena.compare(one, two), Ok(Ordering::Greater));
    }

    #[test]
    fn concat_allocation_bound() {
        let mut arena = PathWeightArena::new(8);
        let bound = (2 * 8 * 8usize).next_power_of_two().trailing_zeros() as u64 + 1;
        let mut h = arena.empty();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let before = arena.allocs();
            h = arena.concat_edge(h, rng.random_range(1..=128)).unwrap();
            assert!(arena.allocs() - before <= bound);
        }
    }

    #[test]
    fn compare_matches_bigint_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.random_range(2..=8usize);
            let mut arena = PathWeightArena::new(n);
            let positions = 2 * n * n;
            let m = BigUint::from(n + 1);
            let eval = |labels: &[usize]| {
                let mut sum = BigUint::from(0u32);
                for &l in labels {
                    sum += m.pow((positions - l) as u32);
                }
                sum
            };
            for _ in 0..60 {
                let la: Vec<usize> =
                    (0..rng.random_range(0..=n)).map(|_| rng.random_range(1..=positions)).collect();
                let lb: Vec<usize> =
                    (0..rng.random_range(0..=n)).map(|_| rng.random_range(1..=positions)).collect();
                let mut ha = arena.empty();
                for &l in &la {
                    ha = arena.concat_edge(ha, l).unwrap();
                }
                let mut hb = arena.empty();
                for &l in &lb {
                    hb = arena.concat_edge(hb, l).unwrap();
                }
                assert_eq!(arena.compare(ha, hb).unwrap(), eval(&la).cmp(&eval(&lb)));
            }
        }
    }

    #[test]
    fn fd_apbp_tracks_static_closure() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let n = 10;
        let mut g = DynamicGraph::new(n, true);
        let mut fd = FdApbp::new(g.clone());
        for step in 0..30 {
            // Mixed updates with weights far outside [1, 2n^2].
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            if u == v {
                continue;
            }
            if g.has_edge(u, v) {
                if rng.random_bool(0.5) {
                    g.delete_edge(u, v).unwrap();
                    fd.delete(u, v).unwrap();
                } else {
                    let w = rng.random_range(-1_000_000..1_000_000);
                    g.set_weight(u, v, w).unwrap();
                    fd.set_weight(u, v, w).unwrap();
                }
            } else {
                let w = rng.random_range(-1_000_000..1_000_000);
                g.insert_edge(u, v, w).unwrap();
                fd.insert(u, v, w).unwrap();
            }
            assert_eq!(fd.apbp(), static_apbp(&g), "step {step}");
        }
    }
}
