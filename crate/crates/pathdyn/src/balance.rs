//! Row/column balancing: split a matrix A into (A', A'') so that no row
//! (resp. column) carries more than ceil(m/n) participating entries, where
//! m counts participating entries of all of A and n is the row (resp.
//! column) count. A' keeps the last sorted part of each line in place; all
//! earlier parts move to lines of A'' assigned by an injective map rho.

use crate::graph::{Weight, INF, NEG_INF};
use crate::matrix::IntMatrix;

/// Which sentinel value marks a non-participating cell. Left operands of
/// the ordered products use +INF, right operands use -INF; the other
/// infinity is an honest value and gets sorted with the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Excluded {
    PlusInf,
    MinusInf,
}

impl Excluded {
    #[inline]
    pub fn sentinel(self) -> Weight {
        match self {
            Excluded::PlusInf => INF,
            Excluded::MinusInf => NEG_INF,
        }
    }

    #[inline]
    pub fn participates(self, w: Weight) -> bool {
        w != self.sentinel()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

/// One sorted part of a line. `entries` are (cross index, value) pairs in
/// ascending value order; for row balancing the cross index is the column,
/// for column balancing the row. `placed` is the A''-line the part was
/// moved to; None marks the in-place last part.
#[derive(Debug, Clone)]
pub struct Part {
    pub entries: Vec<(usize, Weight)>,
    pub placed: Option<usize>,
    pub min: Weight,
    pub max: Weight,
}

#[derive(Debug, Clone)]
pub struct BalancedPair {
    pub axis: Axis,
    pub excluded: Excluded,
    /// Part capacity ceil(m / lines); 0 when the matrix has no entries.
    pub k: usize,
    pub prime: IntMatrix,
    pub dprime: IntMatrix,
    /// parts[line] ascending; the final element is the in-place part.
    pub parts: Vec<Vec<Part>>,
    /// rho inverse: placement line -> (source line, part index).
    pub rho: Vec<Option<(usize, usize)>>,
}

impl BalancedPair {
    pub fn lines(&self) -> usize {
        self.parts.len()
    }

    /// Reassemble the original matrix from the two halves; the union of
    /// parts must reproduce A cell for cell.
    pub fn reassemble(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut m = IntMatrix::filled(rows, cols, self.excluded.sentinel());
        for (line, parts) in self.parts.iter().enumerate() {
            for part in parts {
                for &(cross, w) in &part.entries {
                    match self.axis {
                        Axis::Rows => m.set(line, cross, w),
                        Axis::Cols => m.set(cross, line, w),
                    }
                }
            }
        }
        m
    }
}

/// Row balancing. Sort each row's participating entries ascending, chop
/// into parts of exactly k (the last may be short), keep the last part in
/// A', place every earlier part into its own row of A''.
pub fn row_balance(a: &IntMatrix, excluded: Excluded) -> BalancedPair {
    balance_lines(a, Axis::Rows, excluded)
}

/// Column balancing: row balancing of the transpose, transposed back.
pub fn col_balance(a: &IntMatrix, excluded: Excluded) -> BalancedPair {
    balance_lines(a, Axis::Cols, excluded)
}

fn balance_lines(a: &IntMatrix, axis: Axis, excluded: Excluded) -> BalancedPair {
    let (lines, cross_len) = match axis {
        Axis::Rows => (a.rows, a.cols),
        Axis::Cols => (a.cols, a.rows),
    };
    let at = |line: usize, cross: usize| match axis {
        Axis::Rows => a.get(line, cross),
        Axis::Cols => a.get(cross, line),
    };
    let m: usize = (0..lines)
        .map(|l| (0..cross_len).filter(|&c| excluded.participates(at(l, c))).count())
        .sum();
    let k = if lines == 0 { 0 } else { m.div_ceil(lines) };

    let fill = excluded.sentinel();
    let mut prime = IntMatrix::filled(a.rows, a.cols, fill);
    let mut dprime = IntMatrix::filled(a.rows, a.cols, fill);
    let mut parts: Vec<Vec<Part>> = vec![Vec::new(); lines];
    let mut rho: Vec<Option<(usize, usize)>> = vec![None; lines];
    let mut next_slot = 0usize;

    for line in 0..lines {
        let mut ents: Vec<(usize, Weight)> = (0..cross_len)
            .filter(|&c| excluded.participates(at(line, c)))
            .map(|c| (c, at(line, c)))
            .collect();
        ents.sort_by_key(|&(c, w)| (w, c));
        if ents.is_empty() {
            continue;
        }
        let chunks: Vec<&[(usize, Weight)]> = ents.chunks(k.max(1)).collect();
        let last = chunks.len() - 1;
        for (q, chunk) in chunks.iter().enumerate() {
            let placed = if q == last {
                for &(cross, w) in *chunk {
                    match axis {
                        Axis::Rows => prime.set(line, cross, w),
                        Axis::Cols => prime.set(cross, line, w),
                    }
                }
                None
            } else {
                let slot = next_slot;
                next_slot += 1;
                debug_assert!(slot < lines, "placement overflow: more full parts than lines");
                rho[slot] = Some((line, q));
                for &(cross, w) in *chunk {
                    match axis {
                        Axis::Rows => dprime.set(slot, cross, w),
                        Axis::Cols => dprime.set(cross, slot, w),
                    }
                }
                Some(slot)
            };
            parts[line].push(Part {
                entries: chunk.to_vec(),
                placed,
                min: chunk.first().unwrap().1,
                max: chunk.last().unwrap().1,
            });
        }
    }

    BalancedPair { axis, excluded, k, prime, dprime, parts, rho }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_line(m: &IntMatrix, axis: Axis, line: usize, excluded: Excluded) -> usize {
        match axis {
            Axis::Rows => (0..m.cols).filter(|&j| excluded.participates(m.get(line, j))).count(),
            Axis::Cols => (0..m.rows).filter(|&i| excluded.participates(m.get(i, line))).count(),
        }
    }

    #[test]
    fn sparse_input_leaves_dprime_empty() {
        // Every row already holds <= ceil(m/n) entries, so nothing moves.
        let a = IntMatrix::from_fn(4, 4, |i, j| if i == j { i as Weight } else { INF });
        let b = row_balance(&a, Excluded::PlusInf);
        assert_eq!(b.k, 1);
        assert_eq!(b.dprime.finite_below_inf(), 0);
        assert_eq!(b.prime, a);
    }

    #[test]
    fn dense_row_splits_into_unit_parts() {
        let mut a = IntMatrix::filled(4, 4, INF);
        for j in 0..4 {
            a.set(0, j, 10 + j as Weight);
        }
        let b = row_balance(&a, Excluded::PlusInf);
        assert_eq!(b.k, 1);
        assert_eq!(b.parts[0].len(), 4);
        assert!(b.parts[0].iter().all(|p| p.entries.len() == 1));
        // Three full parts move out, the last stays.
        assert_eq!(b.parts[0].iter().filter(|p| p.placed.is_some()).count(), 3);
        assert_eq!(b.dprime.finite_below_inf(), 3);
        assert_eq!(b.prime.get(0, 3), 13);
    }

    #[test]
    fn reassembly_and_caps_on_random_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let rows = rng.random_range(1..=9);
            let cols = rng.random_range(1..=9);
            let a = IntMatrix::from_fn(rows, cols, |_, _| {
                if rng.random_bool(0.3) {
                    INF
                } else {
                    rng.random_range(-5..=5)
                }
            });
            for axis in [Axis::Rows, Axis::Cols] {
                let b = match axis {
                    Axis::Rows => row_balance(&a, Excluded::PlusInf),
                    Axis::Cols => col_balance(&a, Excluded::PlusInf),
                };
                assert_eq!(b.reassemble(rows, cols), a);
                let lines = b.lines();
                for l in 0..lines {
                    assert!(count_line(&b.prime, axis, l, Excluded::PlusInf) <= b.k);
                    assert!(count_line(&b.dprime, axis, l, Excluded::PlusInf) <= b.k);
                }
                // rho is injective by construction: every slot named once.
                let mut seen = std::collections::HashSet::new();
                for (slot, src) in b.rho.iter().enumerate() {
                    if let Some((line, q)) = src {
                        assert!(seen.insert(slot));
                        assert_eq!(b.parts[*line][*q].placed, Some(slot));
                    }
                }
                // Non-last parts are exactly k; parts ascend.
                for parts in &b.parts {
                    for (q, p) in parts.iter().enumerate() {
                        if q + 1 < parts.len() {
                            assert_eq!(p.entries.len(), b.k);
                            assert!(p.max <= parts[q + 1].min);
                        }
                        assert!(p.entries.windows(2).all(|w| w[0].1 <= w[1].1));
                    }
                }
            }
        }
    }

    #[test]
    fn minus_inf_side_keeps_plus_inf_values() {
        let a = IntMatrix::from_rows(vec![vec![NEG_INF, 3, INF], vec![NEG_INF, NEG_INF, 1]]);
        let b = row_balance(&a, Excluded::MinusInf);
        // +INF participates and sorts last; -INF is the sentinel.
        assert_eq!(b.reassemble(2, 3), a);
        let all: usize = b.parts.iter().flatten().map(|p| p.entries.len()).sum();
        assert_eq!(all, 3);
        assert_eq!(b.parts[0].last().unwrap().max, INF);
    }
}
