//! Source problems for the reduction generators: weighted 4-partite clique
//! instances and online triple-vector Boolean products, plus the brute-force
//! solvers the generated traces are checked against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Weight;
use crate::matrix::BoolMatrix;

/// The six unordered part-pairs of a 4-partite graph, in a fixed order so the
/// weight tables can live in one array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    AB,
    AC,
    AD,
    BC,
    BD,
    CD,
}

pub const ALL_PAIRS: [Pair; 6] = [Pair::AB, Pair::AC, Pair::AD, Pair::BC, Pair::BD, Pair::CD];

/// 4-partite graph with parts A, B, C, D of equal size and non-negative
/// integer weights on cross-part edges. `None` means the pair is a non-edge.
/// Weights stay strictly below `bound`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourPartiteInstance {
    pub n: usize,
    pub bound: Weight,
    tables: Vec<Vec<Option<Weight>>>,
}

impl FourPartiteInstance {
    /// All pairs absent.
    pub fn empty(n: usize, bound: Weight) -> Self {
        assert!(bound >= 1);
        FourPartiteInstance { n, bound, tables: vec![vec![None; n * n]; 6] }
    }

    pub fn get(&self, pair: Pair, i: usize, j: usize) -> Option<Weight> {
        self.tables[pair as usize][i * self.n + j]
    }

    pub fn set(&mut self, pair: Pair, i: usize, j: usize, w: Option<Weight>) {
        if let Some(w) = w {
            assert!(0 <= w && w < self.bound, "weight {} outside [0, {})", w, self.bound);
        }
        self.tables[pair as usize][i * self.n + j] = w;
    }

    pub fn is_complete(&self) -> bool {
        self.tables.iter().all(|t| t.iter().all(|c| c.is_some()))
    }

    /// Fills every non-edge with weight 6*bound+1, which exceeds any clique
    /// that avoids filler edges, so minima are preserved while queries become
    /// total. The returned bound covers the filler value.
    pub fn completed(&self) -> FourPartiteInstance {
        let filler = 6 * self.bound + 1;
        let tables = self
            .tables
            .iter()
            .map(|t| t.iter().map(|c| Some(c.unwrap_or(filler))).collect())
            .collect();
        FourPartiteInstance { n: self.n, bound: filler + 1, tables }
    }

    /// Multiplies every weight by `f`. Used to make the halved and quartered
    /// gadget weights integral.
    pub fn scaled(&self, f: Weight) -> FourPartiteInstance {
        assert!(f >= 1);
        let tables = self
            .tables
            .iter()
            .map(|t| t.iter().map(|c| c.map(|w| w * f)).collect())
            .collect();
        FourPartiteInstance { n: self.n, bound: (self.bound - 1) * f + 1, tables }
    }

    pub fn max_pair_weight(&self) -> Weight {
        self.tables.iter().flatten().filter_map(|c| *c).max().unwrap_or(0)
    }

    /// Weight of the 4-clique (a,b,c,d): the sum of its six pair weights, or
    /// None when any pair is missing.
    pub fn clique_weight(&self, a: usize, b: usize, c: usize, d: usize) -> Option<Weight> {
        Some(
            self.get(Pair::AB, a, b)?
                + self.get(Pair::AC, a, c)?
                + self.get(Pair::AD, a, d)?
                + self.get(Pair::BC, b, c)?
                + self.get(Pair::BD, b, d)?
                + self.get(Pair::CD, c, d)?,
        )
    }

    /// Every pair present independently with probability `density`, weights
    /// uniform in [0, bound).
    pub fn random(n: usize, bound: Weight, density: f64, seed: u64) -> FourPartiteInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut inst = FourPartiteInstance::empty(n, bound);
        for pair in ALL_PAIRS {
            for i in 0..n {
                for j in 0..n {
                    if rng.random_bool(density) {
                        inst.set(pair, i, j, Some(rng.random_range(0..bound)));
                    }
                }
            }
        }
        inst
    }
}

/// Minimum 4-clique weight by enumerating quadruples in (a,b,c,d) order.
pub fn oracle_min_weight_4clique(inst: &FourPartiteInstance) -> Option<Weight> {
    let n = inst.n;
    let mut best: Option<Weight> = None;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if let Some(w) = inst.clique_weight(a, b, c, d) {
                        if best.is_none_or(|m| w < m) {
                            best = Some(w);
                        }
                    }
                }
            }
        }
    }
    best
}

/// Whether any 4-clique exists, weights ignored.
pub fn oracle_detect_4clique(inst: &FourPartiteInstance) -> bool {
    let n = inst.n;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if inst.clique_weight(a, b, c, d).is_some() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Minimum clique weight over cliques containing the fixed pair (a, d). The
/// per-query thresholds of the weighted reduction certify exactly this value.
pub fn min_clique_weight_through(
    inst: &FourPartiteInstance,
    a: usize,
    d: usize,
) -> Option<Weight> {
    let n = inst.n;
    let mut best: Option<Weight> = None;
    for b in 0..n {
        for c in 0..n {
            if let Some(w) = inst.clique_weight(a, b, c, d) {
                if best.is_none_or(|m| w < m) {
                    best = Some(w);
                }
            }
        }
    }
    best
}

/// Whether some 4-clique contains the fixed pair (a, d).
pub fn clique_exists_through(inst: &FourPartiteInstance, a: usize, d: usize) -> bool {
    min_clique_weight_through(inst, a, d).is_some()
}

/// Online Boolean triple-product instance: one n-by-n matrix known up front
/// and a batch of query triples (u, v, w) of n-vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleProductInstance {
    pub n: usize,
    pub a: BoolMatrix,
    pub queries: Vec<TripleQuery>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleQuery {
    pub u: Vec<bool>,
    pub v: Vec<bool>,
    pub w: Vec<bool>,
}

impl TripleProductInstance {
    pub fn random(n: usize, queries: usize, density: f64, seed: u64) -> TripleProductInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = BoolMatrix::from_fn(n, n, |_, _| rng.random_bool(density));
        let queries = (0..queries)
            .map(|_| TripleQuery {
                u: (0..n).map(|_| rng.random_bool(density)).collect(),
                v: (0..n).map(|_| rng.random_bool(density)).collect(),
                w: (0..n).map(|_| rng.random_bool(density)).collect(),
            })
            .collect();
        TripleProductInstance { n, a, queries }
    }

    /// The clause family the reductions answer one coordinate at a time:
    /// fixing u's coordinate k, is there (j, l) with v[j], w[l] set and
    /// A[k,j], A[j,l], A[l,k] all true?
    pub fn clause(&self, query: usize, k: usize) -> bool {
        let q = &self.queries[query];
        if !q.u[k] {
            return false;
        }
        for j in 0..self.n {
            if !q.v[j] || !self.a.get(k, j) {
                continue;
            }
            for l in 0..self.n {
                if q.w[l] && self.a.get(j, l) && self.a.get(l, k) {
                    return true;
                }
            }
        }
        false
    }
}

/// One Boolean answer per query: the disjunction over all (k, j, l) of
/// u[k] & v[j] & w[l] & A[k,j] & A[j,l] & A[l,k].
pub fn oracle_triple_product(inst: &TripleProductInstance) -> Vec<bool> {
    (0..inst.queries.len())
        .map(|q| (0..inst.n).any(|k| inst.clause(q, k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Loop order permuted relative to the oracle, and pruned differently, so
    // an indexing slip in one cannot hide in the other.
    fn min_weight_by_inner_pairs(inst: &FourPartiteInstance) -> Option<Weight> {
        let n = inst.n;
        let mut best: Option<Weight> = None;
        for d in 0..n {
            for c in 0..n {
                let Some(cd) = inst.get(Pair::CD, c, d) else { continue };
                for b in 0..n {
                    let (Some(bc), Some(bd)) =
                        (inst.get(Pair::BC, b, c), inst.get(Pair::BD, b, d))
                    else {
                        continue;
                    };
                    for a in 0..n {
                        let (Some(ab), Some(ac), Some(ad)) = (
                            inst.get(Pair::AB, a, b),
                            inst.get(Pair::AC, a, c),
                            inst.get(Pair::AD, a, d),
                        ) else {
                            continue;
                        };
                        let w = ab + ac + ad + bc + bd + cd;
                        if best.is_none_or(|m| w < m) {
                            best = Some(w);
                        }
                    }
                }
            }
        }
        best
    }

    fn triple_product_by_matrix_walk(inst: &TripleProductInstance) -> Vec<bool> {
        inst.queries
            .iter()
            .map(|q| {
                for j in 0..inst.n {
                    for l in 0..inst.n {
                        if !(q.v[j] && q.w[l] && inst.a.get(j, l)) {
                            continue;
                        }
                        if (0..inst.n)
                            .any(|k| q.u[k] && inst.a.get(k, j) && inst.a.get(l, k))
                        {
                            return true;
                        }
                    }
                }
                false
            })
            .collect()
    }

    #[test]
    fn complete_zero_weight_instance_has_zero_clique() {
        let mut inst = FourPartiteInstance::empty(4, 1);
        for pair in ALL_PAIRS {
            for i in 0..4 {
                for j in 0..4 {
                    inst.set(pair, i, j, Some(0));
                }
            }
        }
        assert!(inst.is_complete());
        assert_eq!(oracle_min_weight_4clique(&inst), Some(0));
        assert!(oracle_detect_4clique(&inst));
    }

    #[test]
    fn missing_part_pair_kills_all_cliques() {
        let mut inst = FourPartiteInstance::random(5, 10, 1.0, 7).completed();
        for i in 0..5 {
            for j in 0..5 {
                inst.tables[Pair::BC as usize][i * 5 + j] = None;
            }
        }
        assert_eq!(oracle_min_weight_4clique(&inst), None);
        assert!(!oracle_detect_4clique(&inst));
    }

    #[test]
    fn enumerators_agree_on_random_instances() {
        for seed in 0..40 {
            let inst = FourPartiteInstance::random(6, 12, 0.55, seed);
            assert_eq!(
                oracle_min_weight_4clique(&inst),
                min_weight_by_inner_pairs(&inst),
                "seed {}",
                seed
            );
            assert_eq!(
                oracle_detect_4clique(&inst),
                oracle_min_weight_4clique(&inst).is_some(),
                "seed {}",
                seed
            );
        }
    }

    #[test]
    fn completion_preserves_minimum_when_a_clique_exists() {
        for seed in 100..130 {
            let inst = FourPartiteInstance::random(5, 9, 0.8, seed);
            let completed = inst.completed();
            assert!(completed.is_complete());
            if let Some(w) = oracle_min_weight_4clique(&inst) {
                assert_eq!(oracle_min_weight_4clique(&completed), Some(w), "seed {}", seed);
            } else {
                // Filler cliques only; any quadruple is now a clique.
                assert!(oracle_min_weight_4clique(&completed).is_some());
            }
        }
    }

    #[test]
    fn scaling_multiplies_minima() {
        for seed in 200..220 {
            let inst = FourPartiteInstance::random(5, 11, 0.7, seed).completed();
            let scaled = inst.scaled(4);
            assert_eq!(
                oracle_min_weight_4clique(&scaled),
                oracle_min_weight_4clique(&inst).map(|w| w * 4)
            );
            assert_eq!(scaled.max_pair_weight(), inst.max_pair_weight() * 4);
        }
    }

    #[test]
    fn through_pair_minimum_matches_filtered_enumeration() {
        let inst = FourPartiteInstance::random(5, 10, 0.6, 42);
        let n = inst.n;
        let mut global: Option<Weight> = None;
        for a in 0..n {
            for d in 0..n {
                let through = min_clique_weight_through(&inst, a, d);
                assert_eq!(through.is_some(), clique_exists_through(&inst, a, d));
                let mut expect: Option<Weight> = None;
                for b in 0..n {
                    for c in 0..n {
                        if let Some(w) = inst.clique_weight(a, b, c, d) {
                            if expect.is_none_or(|m| w < m) {
                                expect = Some(w);
                            }
                        }
                    }
                }
                assert_eq!(through, expect);
                if let Some(w) = through {
                    if global.is_none_or(|m| w < m) {
                        global = Some(w);
                    }
                }
            }
        }
        assert_eq!(global, oracle_min_weight_4clique(&inst));
    }

    #[test]
    fn all_ones_triple_product_is_true() {
        let n = 4;
        let inst = TripleProductInstance {
            n,
            a: BoolMatrix::from_fn(n, n, |_, _| true),
            queries: vec![TripleQuery {
                u: vec![true; n],
                v: vec![true; n],
                w: vec![true; n],
            }],
        };
        assert_eq!(oracle_triple_product(&inst), vec![true]);
    }

    #[test]
    fn zero_matrix_triple_product_is_false() {
        let mut inst = TripleProductInstance::random(5, 5, 0.9, 3);
        inst.a = BoolMatrix::zero(5, 5);
        assert_eq!(oracle_triple_product(&inst), vec![false; 5]);
    }

    #[test]
    fn triple_product_agrees_with_permuted_walk() {
        for seed in 0..40 {
            let inst = TripleProductInstance::random(5, 6, 0.45, seed);
            assert_eq!(oracle_triple_product(&inst), triple_product_by_matrix_walk(&inst));
        }
    }

    #[test]
    fn clause_disjunction_equals_query_answer() {
        let inst = TripleProductInstance::random(6, 8, 0.4, 99);
        let answers = oracle_triple_product(&inst);
        for q in 0..inst.queries.len() {
            assert_eq!(answers[q], (0..inst.n).any(|k| inst.clause(q, k)));
        }
    }
}
