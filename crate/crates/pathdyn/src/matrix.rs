//! Dense matrices over totally ordered 64-bit integers plus the naive
//! product kernels. The naive triple/quadruple loops double as the oracles
//! every structured kernel in this crate is tested against.
//!
//! Sentinel convention: +INF marks "no entry" on the left operand of the
//! ordered products, -INF marks "no entry" on the right operand. The
//! (max,min) product is the exception: there the infinities are honest
//! extremal values (b(v,v) = +INF lives in that semiring).

use serde::{Deserialize, Serialize};

use crate::graph::{Weight, INF, NEG_INF};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    cells: Vec<Weight>,
}

impl IntMatrix {
    pub fn filled(rows: usize, cols: usize, fill: Weight) -> Self {
        IntMatrix { rows, cols, cells: vec![fill; rows * cols] }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0)
    }

    pub fn from_rows(rows: Vec<Vec<Weight>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, cells: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Weight) -> Self {
        let mut cells = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                cells.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, cells }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Weight {
        self.cells[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, w: Weight) {
        self.cells[i * self.cols + j] = w;
    }

    pub fn row(&self, i: usize) -> &[Weight] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Finite entries in the left-operand sense (below +INF).
    pub fn finite_below_inf(&self) -> usize {
        self.cells.iter().filter(|&&w| w != INF).count()
    }

    /// Finite entries in the right-operand sense (above -INF).
    pub fn finite_above_neg_inf(&self) -> usize {
        self.cells.iter().filter(|&&w| w != NEG_INF).count()
    }

    pub fn map(&self, f: impl Fn(Weight) -> Weight) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|&w| f(w)).collect(),
        }
    }
}

/// Bit-packed Boolean matrix, one u64 word per 64 columns. Serializes as
/// dims plus row-major cell lists, the same shape as [`IntMatrix`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolMatrix {
    pub rows: usize,
    pub cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct BoolMatrixWire {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<bool>>,
}

impl Serialize for BoolMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let cells = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect();
        BoolMatrixWire { rows: self.rows, cols: self.cols, cells }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoolMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = BoolMatrixWire::deserialize(deserializer)?;
        if wire.cells.len() != wire.rows || wire.cells.iter().any(|r| r.len() != wire.cols) {
            return Err(serde::de::Error::custom("cell grid does not match dims"));
        }
        Ok(BoolMatrix::from_fn(wire.rows, wire.cols, |i, j| wire.cells[i][j]))
    }
}

impl BoolMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BoolMatrix { rows, cols, words_per_row, words: vec![0; rows * words_per_row] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.words[i * self.words_per_row + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn transpose(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Counting product of 0/1 matrices: C_ij = |{k : A_ik and B_kj}|. The
/// Boolean product is this with every positive count collapsed to true.
pub fn count_product(a: &BoolMatrix, b: &BoolMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    let bt = b.transpose();
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        a.row_words(i)
            .iter()
            .zip(bt.row_words(j))
            .map(|(&x, &y)| (x & y).count_ones() as Weight)
            .sum()
    })
}

/// Boolean matrix product via word-parallel row accumulation.
pub fn bool_matmul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    let mut c = BoolMatrix::zero(a.rows, b.cols);
    for i in 0..a.rows {
        let base = i * c.words_per_row;
        for k in 0..a.cols {
            if a.get(i, k) {
                for (off, &bw) in b.row_words(k).iter().enumerate() {
                    c.words[base + off] |= bw;
                }
            }
        }
    }
    c
}

/// Dominance product: C_ij = |{k : A_ik <= B_kj}|, skipping +INF entries of
/// A and -INF entries of B.
pub fn dominance_naive(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols)
            .filter(|&k| {
                let x = a.get(i, k);
                let y = b.get(k, j);
                x != INF && y != NEG_INF && x <= y
            })
            .count() as Weight
    })
}

/// Equality product: C_ij = |{k : A_ik = B_kj}|, same sentinel skips.
pub fn equality_naive(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols)
            .filter(|&k| {
                let x = a.get(i, k);
                let y = b.get(k, j);
                x != INF && y != NEG_INF && x == y
            })
            .count() as Weight
    })
}

/// (max,min) product: C_ij = max_k min(A_ik, B_kj); NEG_INF when the inner
/// dimension is empty. Infinities are plain values here.
pub fn maxmin_naive(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).map(|k| a.get(i, k).min(b.get(k, j))).max().unwrap_or(NEG_INF)
    })
}

/// (max,<=) product: C_ij = max{A_ik : A_ik <= B_kj}, NEG_INF if none.
pub fn maxleq_naive(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols)
            .filter_map(|k| {
                let x = a.get(i, k);
                let y = b.get(k, j);
                (x != INF && y != NEG_INF && x <= y).then_some(x)
            })
            .max()
            .unwrap_or(NEG_INF)
    })
}

/// (min,<=) product: C_ij = min{B_kj : A_ik <= B_kj}, INF if none.
pub fn minleq_naive(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    IntMatrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols)
            .filter_map(|k| {
                let x = a.get(i, k);
                let y = b.get(k, j);
                (x != INF && y != NEG_INF && x <= y).then_some(y)
            })
            .min()
            .unwrap_or(INF)
    })
}

/// Witness table: 0-based index per cell, None when no witness exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    pub rows: usize,
    pub cols: usize,
    cells: Vec<Option<u32>>,
}

impl WitnessMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.cells[i * self.cols + j]
    }
}

/// Min-witness product: C_ij = min{k : A_ik and B_kj}, 0-based.
pub fn min_witness(a: &BoolMatrix, b: &BoolMatrix) -> WitnessMatrix {
    assert_eq!(a.cols, b.rows, "shape mismatch: {}x{} * {}x{}", a.rows, a.cols, b.rows, b.cols);
    let mut cells = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            cells.push((0..a.cols).find(|&k| a.get(i, k) && b.get(k, j)).map(|k| k as u32));
        }
    }
    WitnessMatrix { rows: a.rows, cols: b.cols, cells }
}

/// Min-witness 3-product table over index triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness3 {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    cells: Vec<Option<u32>>,
}

impl Witness3 {
    pub fn get(&self, i1: usize, i2: usize, i3: usize) -> Option<u32> {
        self.cells[(i1 * self.n2 + i2) * self.n3 + i3]
    }
}

/// For every (i1,i2,i3): the minimum j with A[i1,j], B[i2,j], C[i3,j] all
/// true; None when no such column exists.
pub fn min_witness3(a: &BoolMatrix, b: &BoolMatrix, c: &BoolMatrix) -> Witness3 {
    assert!(
        a.cols == b.cols && b.cols == c.cols,
        "column counts differ: {} {} {}",
        a.cols,
        b.cols,
        c.cols
    );
    let mut cells = Vec::with_capacity(a.rows * b.rows * c.rows);
    for i1 in 0..a.rows {
        for i2 in 0..b.rows {
            for i3 in 0..c.rows {
                cells.push(
                    (0..a.cols)
                        .find(|&j| a.get(i1, j) && b.get(i2, j) && c.get(i3, j))
                        .map(|j| j as u32),
                );
            }
        }
    }
    Witness3 { n1: a.rows, n2: b.rows, n3: c.rows, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_product_matches_triple_loop() {
        let a = BoolMatrix::from_fn(5, 7, |i, j| (i * 3 + j) % 4 == 0);
        let b = BoolMatrix::from_fn(7, 6, |i, j| (i + j * 5) % 3 == 0);
        let c = count_product(&a, &b);
        for i in 0..5 {
            for j in 0..6 {
                let expect =
                    (0..7).filter(|&k| a.get(i, k) && b.get(k, j)).count() as Weight;
                assert_eq!(c.get(i, j), expect);
            }
        }
        let cb = bool_matmul(&a, &b);
        for i in 0..5 {
            for j in 0..6 {
                assert_eq!(cb.get(i, j), c.get(i, j) > 0);
            }
        }
    }

    #[test]
    fn identity_bool_product() {
        let a = BoolMatrix::from_fn(4, 4, |i, j| (i + j) % 2 == 0);
        assert_eq!(bool_matmul(&BoolMatrix::identity(4), &a), a);
        let z = BoolMatrix::zero(4, 4);
        assert_eq!(bool_matmul(&z, &a), z);
    }

    #[test]
    fn dominance_basics() {
        let one = IntMatrix::from_rows(vec![vec![0]]);
        assert_eq!(dominance_naive(&one, &one).get(0, 0), 1);
        let all_inf = IntMatrix::filled(3, 3, INF);
        let b = IntMatrix::zero(3, 3);
        assert_eq!(dominance_naive(&all_inf, &b), IntMatrix::zero(3, 3));
    }

    #[test]
    fn maxmin_single_cell() {
        let x = IntMatrix::from_rows(vec![vec![42]]);
        assert_eq!(maxmin_naive(&x, &x).get(0, 0), 42);
        let lo = IntMatrix::filled(2, 2, NEG_INF);
        let hi = IntMatrix::filled(2, 2, 7);
        assert_eq!(maxmin_naive(&lo, &hi), lo);
    }

    #[test]
    fn witnesses() {
        let ones = BoolMatrix::from_fn(3, 3, |_, _| true);
        let w = min_witness(&ones, &ones);
        assert!((0..3).all(|i| (0..3).all(|j| w.get(i, j) == Some(0))));
        let zeros = BoolMatrix::zero(3, 3);
        let none = min_witness(&zeros, &ones);
        assert!((0..3).all(|i| (0..3).all(|j| none.get(i, j).is_none())));
        let w3 = min_witness3(&ones, &ones, &ones);
        assert_eq!(w3.get(2, 1, 0), Some(0));
        let n3 = min_witness3(&ones, &zeros, &ones);
        assert_eq!(n3.get(0, 0, 0), None);
    }

    #[test]
    #[should_panic(expected = "shape mismatch")]
    fn shape_mismatch_panics() {
        let a = IntMatrix::zero(2, 3);
        let b = IntMatrix::zero(2, 3);
        let _ = dominance_naive(&a, &b);
    }
}
