//! Bucketed (max,min)-product data structure with row queries.
//!
//! All participating entries of both operands are globally sorted and cut
//! into G value buckets. Per bucket r the left operand restricted to the
//! bucket is row-balanced and three dominance-query structures are built
//! against the bucket-restricted right operand; pairs whose right entry
//! lives in a later bucket are covered by one Boolean counting product
//! (the decomposition A_r vs B splits exactly into "same bucket" plus
//! "later bucket"). A row query walks buckets from the top per output
//! cell, then recovers the witness value by scanning a single part.
//!
//! The (max,min) product itself is the entrywise max of the (max,<=)
//! product of (A,B) and the mirrored one delivering B-side values, plus
//! the pairs where both entries are +INF, which the dominance machinery
//! cannot see because +INF doubles as its left-side sentinel.

use thiserror::Error;

use crate::balance::{row_balance, BalancedPair, Excluded};
use crate::graph::{Weight, INF, NEG_INF};
use crate::matrix::{count_product, BoolMatrix, IntMatrix};
use crate::dominance::DominanceDS;

#[derive(Debug, Error, PartialEq)]
pub enum MaxMinError {
    #[error("bucket exponent {g} outside [0, {max}]")]
    BadParameter { g: f64, max: f64 },
}

/// One bucket of one side: the bucket-restricted left operand balanced by
/// rows, dominance structures against the bucket-restricted right operand,
/// and counting products covering right entries from later buckets.
struct SideBucket {
    bal: BalancedPair,
    ds: DominanceDS,
    ds_p: DominanceDS,
    ds_pp: DominanceDS,
    cp: IntMatrix,
    cp_p: IntMatrix,
    cp_pp: IntMatrix,
}

impl SideBucket {
    /// left: masked left operand (sentinel +INF outside the bucket);
    /// right: masked right operand (sentinel -INF outside the bucket);
    /// later[k][j] true when the right entry's bucket is beyond r.
    fn build(left: &IntMatrix, right: &IntMatrix, later: &BoolMatrix) -> SideBucket {
        let bal = row_balance(left, Excluded::PlusInf);
        let hat = |m: &IntMatrix| BoolMatrix::from_fn(m.rows, m.cols, |i, k| m.get(i, k) != INF);
        let cp = count_product(&hat(left), later);
        let cp_p = count_product(&hat(&bal.prime), later);
        let cp_pp = count_product(&hat(&bal.dprime), later);
        SideBucket {
            ds: DominanceDS::build(left, right),
            ds_p: DominanceDS::build(&bal.prime, right),
            ds_pp: DominanceDS::build(&bal.dprime, right),
            bal,
            cp,
            cp_p,
            cp_pp,
        }
    }
}

pub struct MaxMinDS {
    a: IntMatrix,
    b: IntMatrix,
    num_buckets: usize,
    chunk: usize,
    bucket_sizes: Vec<usize>,
    /// Forward side: (max,<=) of (A, B), row-queried, delivers A values.
    fwd: Vec<SideBucket>,
    /// Mirror side: left Bᵀ, right Aᵀ, column-queried, delivers B values.
    mir: Vec<SideBucket>,
    both_inf: BoolMatrix,
}

impl MaxMinDS {
    pub fn build(a: &IntMatrix, b: &IntMatrix, g: f64) -> Result<MaxMinDS, MaxMinError> {
        assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
        let (nr, p, nc) = (a.rows, a.cols, b.cols);
        let max_g = if nr > 1 && p > 1 { (p as f64).ln() / (nr as f64).ln() } else { f64::MAX };
        if !g.is_finite() || g < 0.0 || g > max_g + 1e-9 {
            return Err(MaxMinError::BadParameter { g, max: max_g });
        }

        // Global sort of all participating entries; ties put A before B so
        // an A-entry never trails an equal B-entry, which makes the
        // per-bucket decomposition on the forward side exact.
        let mut entries: Vec<(Weight, u8, usize, usize)> = Vec::new();
        for i in 0..nr {
            for k in 0..p {
                if a.get(i, k) != INF {
                    entries.push((a.get(i, k), 0, i, k));
                }
            }
        }
        for k in 0..p {
            for j in 0..nc {
                if b.get(k, j) != NEG_INF {
                    entries.push((b.get(k, j), 1, k, j));
                }
            }
        }
        entries.sort_unstable();
        let total = entries.len();
        let num_buckets = ((p as f64) / (nr.max(1) as f64).powf(g)).round().max(1.0) as usize;
        let chunk = total.div_ceil(num_buckets).max(1);

        let mut bucket_a = vec![u32::try_from(num_buckets + 1).unwrap(); nr * p];
        let mut bucket_b = vec![0u32; p * nc];
        let mut bucket_sizes = vec![0usize; num_buckets];
        for (pos, &(_, tag, x, y)) in entries.iter().enumerate() {
            let r = (pos / chunk + 1) as u32;
            bucket_sizes[pos / chunk] += 1;
            if tag == 0 {
                bucket_a[x * p + y] = r;
            } else {
                bucket_b[x * nc + y] = r;
            }
        }

        let mut fwd = Vec::with_capacity(num_buckets);
        let mut mir = Vec::with_capacity(num_buckets);
        for r in 1..=num_buckets as u32 {
            let a_r = IntMatrix::from_fn(nr, p, |i, k| {
                if bucket_a[i * p + k] == r { a.get(i, k) } else { INF }
            });
            let b_r = IntMatrix::from_fn(p, nc, |k, j| {
                if bucket_b[k * nc + j] == r { b.get(k, j) } else { NEG_INF }
            });
            let b_later = BoolMatrix::from_fn(p, nc, |k, j| bucket_b[k * nc + j] > r);
            fwd.push(SideBucket::build(&a_r, &b_r, &b_later));

            let x_r = IntMatrix::from_fn(nc, p, |j, k| {
                let w = b.get(k, j);
                if bucket_b[k * nc + j] == r && w != INF { w } else { INF }
            });
            let y_r = IntMatrix::from_fn(p, nr, |k, i| {
                let w = a.get(i, k);
                if bucket_a[i * p + k] == r && w != NEG_INF { w } else { NEG_INF }
            });
            let a_later = BoolMatrix::from_fn(p, nr, |k, i| bucket_a[i * p + k] > r);
            mir.push(SideBucket::build(&x_r, &y_r, &a_later));
        }

        let a_inf = BoolMatrix::from_fn(nr, p, |i, k| a.get(i, k) == INF);
        let b_inf = BoolMatrix::from_fn(p, nc, |k, j| b.get(k, j) == INF);
        let both_inf = crate::matrix::bool_matmul(&a_inf, &b_inf);

        Ok(MaxMinDS {
            a: a.clone(),
            b: b.clone(),
            num_buckets,
            chunk,
            bucket_sizes,
            fwd,
            mir,
            both_inf,
        })
    }

    pub fn num_buckets(&self) -> usize {
        self.num_buckets
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk
    }

    pub fn bucket_sizes(&self) -> &[usize] {
        &self.bucket_sizes
    }

    /// Row i of the (max,<=) product of (A, B): per j the largest A[i,k]
    /// with A[i,k] <= B[k,j]; NEG_INF when no pair dominates.
    pub fn maxleq_row(&self, i: usize) -> Vec<Weight> {
        let nc = self.b.cols;
        let mut best = vec![NEG_INF; nc];
        if self.num_buckets == 0 {
            return best;
        }
        // Counts of (A_r <=# B)[i, .] for every bucket, with the last-part
        // and per-part counts needed by the two witness cases.
        let mut maxr = vec![0usize; nc];
        let mut fulls: Vec<Vec<Weight>> = Vec::with_capacity(self.num_buckets);
        let mut lasts: Vec<Vec<Weight>> = Vec::with_capacity(self.num_buckets);
        let mut placed: Vec<Vec<Vec<Weight>>> = Vec::with_capacity(self.num_buckets);
        for (ri, sb) in self.fwd.iter().enumerate() {
            let (mut full, _) = sb.ds.row_query(i);
            for (j, f) in full.iter_mut().enumerate() {
                *f += sb.cp.get(i, j);
                if *f > 0 {
                    maxr[j] = ri + 1;
                }
            }
            let (mut lp, _) = sb.ds_p.row_query(i);
            for (j, f) in lp.iter_mut().enumerate() {
                *f += sb.cp_p.get(i, j);
            }
            let parts = &sb.bal.parts[i];
            let mut per_part = Vec::new();
            for part in parts.iter().filter(|p| p.placed.is_some()) {
                let slot = part.placed.unwrap();
                let (mut row, _) = sb.ds_pp.row_query(slot);
                for (j, f) in row.iter_mut().enumerate() {
                    *f += sb.cp_pp.get(slot, j);
                }
                per_part.push(row);
            }
            fulls.push(full);
            lasts.push(lp);
            placed.push(per_part);
        }
        for j in 0..nc {
            if maxr[j] == 0 {
                continue;
            }
            let ri = maxr[j] - 1;
            let sb = &self.fwd[ri];
            let parts = &sb.bal.parts[i];
            let chosen = if lasts[ri][j] > 0 {
                parts.last()
            } else {
                (0..placed[ri].len()).rev().find(|&q| placed[ri][q][j] > 0).map(|q| &parts[q])
            };
            let part = chosen.expect("positive dominance count without a witness part");
            let mut v = NEG_INF;
            for &(k, w) in &part.entries {
                if w <= self.b.get(k, j) && w > v {
                    v = w;
                }
            }
            debug_assert!(v != NEG_INF || part.entries.iter().any(|&(_, w)| w == NEG_INF));
            best[j] = v;
        }
        best
    }

    /// Per j the largest B[k,j] with B[k,j] <= A[i,k], via column queries
    /// of the mirrored structure. May miss equal-value pairs that the
    /// forward side already covers; the (max,min) assembly is exact.
    fn mirror_row(&self, i: usize) -> Vec<Weight> {
        let nc = self.b.cols;
        let mut best = vec![NEG_INF; nc];
        let mut maxr = vec![0usize; nc];
        let mut lasts: Vec<Vec<Weight>> = Vec::with_capacity(self.num_buckets);
        let mut placed_cols: Vec<Vec<Weight>> = Vec::with_capacity(self.num_buckets);
        for (ri, sb) in self.mir.iter().enumerate() {
            let (mut full, _) = sb.ds.col_query(i);
            for (j, f) in full.iter_mut().enumerate() {
                *f += sb.cp.get(j, i);
                if *f > 0 {
                    maxr[j] = ri + 1;
                }
            }
            let (mut lp, _) = sb.ds_p.col_query(i);
            for (j, f) in lp.iter_mut().enumerate() {
                *f += sb.cp_p.get(j, i);
            }
            let (mut pp, _) = sb.ds_pp.col_query(i);
            for (slot, f) in pp.iter_mut().enumerate() {
                *f += sb.cp_pp.get(slot, i);
            }
            lasts.push(lp);
            placed_cols.push(pp);
        }
        for j in 0..nc {
            if maxr[j] == 0 {
                continue;
            }
            let ri = maxr[j] - 1;
            let sb = &self.mir[ri];
            let parts = &sb.bal.parts[j];
            let chosen = if lasts[ri][j] > 0 {
                parts.last()
            } else {
                parts
                    .iter()
                    .rev()
                    .find(|p| p.placed.is_some_and(|slot| placed_cols[ri][slot] > 0))
            };
            // The mirror side may have no witness for ties split across
            // buckets; those pairs are covered by the forward side.
            let Some(part) = chosen else { continue };
            let mut v = NEG_INF;
            for &(k, w) in &part.entries {
                if w <= self.a.get(i, k) && w > v {
                    v = w;
                }
            }
            best[j] = v;
        }
        best
    }

    /// Row i of the (max,min) product of (A, B).
    pub fn row(&self, i: usize) -> Vec<Weight> {
        let fwd = self.maxleq_row(i);
        let mir = self.mirror_row(i);
        (0..self.b.cols)
            .map(|j| {
                if self.both_inf.get(i, j) {
                    INF
                } else {
                    fwd[j].max(mir[j])
                }
            })
            .collect()
    }
}

/// (max,min) product assembled from row queries at a mid-range bucket
/// exponent.
pub fn maxmin_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let max_g =
        if a.rows > 1 && a.cols > 1 { (a.cols as f64).ln() / (a.rows as f64).ln() } else { 1.0 };
    let ds = MaxMinDS::build(a, b, max_g / 2.0).expect("mid-range exponent is always valid");
    let mut out = IntMatrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        let row = ds.row(i);
        for j in 0..b.cols {
            out.set(i, j, row[j]);
        }
    }
    out
}

/// (max,<=) product as a view over the forward side of the structure.
pub fn maxleq_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let max_g =
        if a.rows > 1 && a.cols > 1 { (a.cols as f64).ln() / (a.rows as f64).ln() } else { 1.0 };
    let ds = MaxMinDS::build(a, b, max_g / 2.0).expect("mid-range exponent is always valid");
    let mut out = IntMatrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        let row = ds.maxleq_row(i);
        for j in 0..b.cols {
            out.set(i, j, row[j]);
        }
    }
    out
}

/// Flip INF and NEG_INF across negation; i64::MIN cannot be negated raw.
fn neg(w: Weight) -> Weight {
    if w == INF {
        NEG_INF
    } else if w == NEG_INF {
        INF
    } else {
        -w
    }
}

/// (min,<=) product by duality: min{B[k,j] : A[i,k] <= B[k,j]} equals the
/// negated (max,<=) product of the negated, transposed operands.
pub fn minleq_product(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let nb = b.transpose().map(neg);
    let na = a.transpose().map(neg);
    maxleq_product(&nb, &na).transpose().map(neg)
}
