//! Sparse dominance product and its column/row query structure.
//!
//! The product counts pairs A[i,k] <= B[k,j] with +INF cells of A and
//! -INF cells of B excluded. Preprocessing balances one operand, turns
//! "entry dominates a whole part" into a Boolean counting product, and
//! leaves two residual cases per query that touch at most 2k entries per
//! participating cell: the in-place last part and the single boundary
//! part the query value lands inside.

use crate::balance::{col_balance, row_balance, BalancedPair, Excluded};
use crate::graph::{Weight, INF, NEG_INF};
use crate::matrix::{count_product, BoolMatrix, IntMatrix};

/// Column-query half: balance A by columns. hat_ab[i,j] counts parts of
/// A-columns k' fully dominated by B[k',j], summed over k'.
struct ColHalf {
    bal: BalancedPair,
    hat_ab: IntMatrix,
    /// Per column j of B: the rows k' with participating B[k',j].
    b_col: Vec<Vec<usize>>,
}

/// Row-query half: balance B by rows. hat_uv[i,j] counts (k', part)
/// pairs where A[i,k'] sits at or below the whole part containing B[k',j].
struct RowHalf {
    bal: BalancedPair,
    hat_uv: IntMatrix,
    /// Per row i of A: the columns k' with participating A[i,k'].
    a_row: Vec<Vec<usize>>,
}

pub struct DominanceDS {
    a: IntMatrix,
    b: IntMatrix,
    col: ColHalf,
    row: RowHalf,
}

fn build_col_half(a: &IntMatrix, b: &IntMatrix) -> ColHalf {
    let bal = col_balance(a, Excluded::PlusInf);
    let p = a.cols;
    // a_hat marks entries of A'' (the relocated parts).
    let a_hat = BoolMatrix::from_fn(a.rows, p, |i, k| bal.dprime.get(i, k) != INF);
    let b_hat = BoolMatrix::from_fn(p, b.cols, |slot, j| match bal.rho[slot] {
        Some((kp, q)) => {
            let w = b.get(kp, j);
            w != NEG_INF && w >= bal.parts[kp][q].max
        }
        None => false,
    });
    let hat_ab = count_product(&a_hat, &b_hat);
    let b_col = (0..b.cols)
        .map(|j| (0..b.rows).filter(|&k| b.get(k, j) != NEG_INF).collect())
        .collect();
    ColHalf { bal, hat_ab, b_col }
}

fn build_row_half(a: &IntMatrix, b: &IntMatrix) -> RowHalf {
    let bal = row_balance(b, Excluded::MinusInf);
    let p = b.rows;
    let u_hat = BoolMatrix::from_fn(a.rows, p, |i, slot| match bal.rho[slot] {
        Some((kp, q)) => {
            let w = a.get(i, kp);
            w != INF && w <= bal.parts[kp][q].min
        }
        None => false,
    });
    let v_hat = BoolMatrix::from_fn(p, b.cols, |slot, j| match bal.rho[slot] {
        Some((kp, q)) => bal.parts[kp][q].entries.iter().any(|&(c, _)| c == j),
        None => false,
    });
    let hat_uv = count_product(&u_hat, &v_hat);
    let a_row = (0..a.rows)
        .map(|i| (0..a.cols).filter(|&k| a.get(i, k) != INF).collect())
        .collect();
    RowHalf { bal, hat_uv, a_row }
}

impl DominanceDS {
    pub fn build(a: &IntMatrix, b: &IntMatrix) -> DominanceDS {
        assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
        DominanceDS {
            col: build_col_half(a, b),
            row: build_row_half(a, b),
            a: a.clone(),
            b: b.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.a.rows
    }

    pub fn cols(&self) -> usize {
        self.b.cols
    }

    /// Part capacity of the column half, ceil(m1 / p).
    pub fn col_part_cap(&self) -> usize {
        self.col.bal.k
    }

    /// Part capacity of the row half, ceil(m2 / p).
    pub fn row_part_cap(&self) -> usize {
        self.row.bal.k
    }

    pub fn b_col_entries(&self, j: usize) -> usize {
        self.col.b_col[j].len()
    }

    pub fn a_row_entries(&self, i: usize) -> usize {
        self.row.a_row[i].len()
    }

    /// Column j of the dominance product plus the number of element
    /// comparisons spent in the two residual scans.
    pub fn col_query(&self, j: usize) -> (Vec<Weight>, u64) {
        assert!(j < self.b.cols, "column {} out of range {}", j, self.b.cols);
        let mut out: Vec<Weight> = (0..self.a.rows).map(|i| self.col.hat_ab.get(i, j)).collect();
        let mut comps = 0u64;
        for &kp in &self.col.b_col[j] {
            let w = self.b.get(kp, j);
            let parts = &self.col.bal.parts[kp];
            if parts.is_empty() {
                continue;
            }
            let last = parts.len() - 1;
            // Last part of column kp of A stays in place: brute force it.
            for &(i, v) in &parts[last].entries {
                comps += 1;
                if v <= w {
                    out[i] += 1;
                }
            }
            // Among relocated parts, only the last with min <= w can be
            // partially dominated; earlier ones are fully counted above.
            let cand = parts[..last].partition_point(|p| p.min <= w);
            if cand > 0 {
                let part = &parts[cand - 1];
                if part.max > w {
                    for &(i, v) in &part.entries {
                        comps += 1;
                        if v <= w {
                            out[i] += 1;
                        }
                    }
                }
            }
        }
        (out, comps)
    }

    /// Row i of the dominance product plus the comparison count.
    pub fn row_query(&self, i: usize) -> (Vec<Weight>, u64) {
        assert!(i < self.a.rows, "row {} out of range {}", i, self.a.rows);
        let mut out: Vec<Weight> = (0..self.b.cols).map(|j| self.row.hat_uv.get(i, j)).collect();
        let mut comps = 0u64;
        for &kp in &self.row.a_row[i] {
            let w = self.a.get(i, kp);
            let parts = &self.row.bal.parts[kp];
            if parts.is_empty() {
                continue;
            }
            let last = parts.len() - 1;
            // Last part of row kp of B: brute force.
            for &(j, v) in &parts[last].entries {
                comps += 1;
                if w <= v {
                    out[j] += 1;
                }
            }
            // The single relocated part with min < w <= max is the only
            // one neither fully above nor fully below w.
            let cand = parts[..last].partition_point(|p| p.min < w);
            if cand > 0 {
                let part = &parts[cand - 1];
                if part.max >= w {
                    for &(j, v) in &part.entries {
                        comps += 1;
                        if w <= v {
                            out[j] += 1;
                        }
                    }
                }
            }
        }
        (out, comps)
    }
}

/// Dominance product via the balanced decomposition; equals the naive
/// count on every input.
pub fn dominance_sparse(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let ds = DominanceDS::build(a, b);
    let mut out = IntMatrix::zero(a.rows, b.cols);
    for j in 0..b.cols {
        let (col, _) = ds.col_query(j);
        for (i, &count) in col.iter().enumerate() {
            out.set(i, j, count);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::dominance_naive;
    use rand::{Rng, SeedableRng};

    fn random_matrix(
        rng: &mut impl Rng,
        rows: usize,
        cols: usize,
        sentinel: Weight,
        p_sent: f64,
    ) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |_, _| {
            if rng.random_bool(p_sent) {
                sentinel
            } else {
                rng.random_range(-6..=6)
            }
        })
    }

    #[test]
    fn sparse_equals_naive_across_regimes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..60 {
            let n = rng.random_range(1..=10);
            let p = rng.random_range(1..=10);
            let m = rng.random_range(1..=10);
            let p_sent = [0.0, 0.5, 0.9][round % 3];
            let a = random_matrix(&mut rng, n, p, INF, p_sent);
            let b = random_matrix(&mut rng, p, m, NEG_INF, p_sent);
            assert_eq!(dominance_sparse(&a, &b), dominance_naive(&a, &b));
        }
    }

    #[test]
    fn queries_equal_naive_with_cost_caps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let n = rng.random_range(1..=8);
            let p = rng.random_range(1..=8);
            let m = rng.random_range(1..=8);
            let a = random_matrix(&mut rng, n, p, INF, 0.4);
            let b = random_matrix(&mut rng, p, m, NEG_INF, 0.4);
            let naive = dominance_naive(&a, &b);
            let ds = DominanceDS::build(&a, &b);
            for j in 0..m {
                let (col, comps) = ds.col_query(j);
                for i in 0..n {
                    assert_eq!(col[i], naive.get(i, j));
                }
                let cap = 2 * ds.b_col_entries(j) as u64 * ds.col_part_cap() as u64;
                assert!(comps <= cap, "col comps {comps} > {cap}");
            }
            for i in 0..n {
                let (row, comps) = ds.row_query(i);
                for j in 0..m {
                    assert_eq!(row[j], naive.get(i, j));
                }
                let cap = 2 * ds.a_row_entries(i) as u64 * ds.row_part_cap() as u64;
                assert!(comps <= cap, "row comps {comps} > {cap}");
            }
        }
    }

    #[test]
    fn all_sentinel_sides_give_zero() {
        let a = IntMatrix::filled(4, 4, INF);
        let b = IntMatrix::filled(4, 4, 0);
        assert_eq!(dominance_sparse(&a, &b), IntMatrix::zero(4, 4));
        let a2 = IntMatrix::filled(4, 4, 0);
        let b2 = IntMatrix::filled(4, 4, NEG_INF);
        assert_eq!(dominance_sparse(&a2, &b2), IntMatrix::zero(4, 4));
    }
}
