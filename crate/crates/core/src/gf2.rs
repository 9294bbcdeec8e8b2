//! Linear algebra over GF(2) on packed bit rows.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Dense matrix over GF(2), each row packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    ncols: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> BitMatrix {
        let words = ncols.div_ceil(64);
        BitMatrix {
            ncols,
            words,
            rows: vec![vec![0; words]; nrows],
        }
    }

    pub fn identity(k: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of booleans; all rows must have the same length.
    pub fn from_bools(rows: &[Vec<bool>]) -> Result<BitMatrix> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = BitMatrix::zeros(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(j < self.ncols, "column {j} out of range");
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(j < self.ncols, "column {j} out of range");
        let w = &mut self.rows[i][j / 64];
        if b {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    /// Row rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            let (w, b) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] & b != 0 {
                    for k in 0..self.words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.ncols)?;
        for i in 0..self.nrows() {
            for j in 0..self.ncols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn rank_gf2(m: &BitMatrix) -> usize {
    m.rank()
}

/// Rank of a family of vectors packed in single words.
pub fn rank_u64<I: IntoIterator<Item = u64>>(vectors: I) -> usize {
    // basis[b] holds a vector whose highest set bit is b.
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for mut v in vectors {
        while v != 0 {
            let b = 63 - v.leading_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = v;
                rank += 1;
                break;
            }
            v ^= basis[b];
        }
    }
    rank
}

/// Inverse of the square matrix whose `i`-th row is `rows[i]` (bit `j` = column `j`).
pub fn inverse_u64(rows: &[u64]) -> Option<Vec<u64>> {
    let n = rows.len();
    assert!(n <= 64, "inverse_u64 supports at most 64 rows");
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, p);
        inv.swap(col, p);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

/// Cut-rank for a position mask `a`: rank of the block Γ[A, V∖A].
pub(crate) fn cut_rank_mask(g: &Graph, a: u64) -> usize {
    let comp = g.full_mask() & !a;
    rank_u64(crate::graph::bits(a).map(|i| g.row(i) & comp))
}

/// GF(2) rank of the adjacency block between `a` and its complement.
pub fn cut_rank(g: &Graph, a: &BTreeSet<Vertex>) -> Result<usize> {
    Ok(cut_rank_mask(g, g.mask_of(a)?))
}

/// The |A|×|V∖A| adjacency block, rows and columns in ascending label order.
pub fn cut_matrix(g: &Graph, a: &BTreeSet<Vertex>) -> Result<BitMatrix> {
    let mask = g.mask_of(a)?;
    let rest: Vec<Vertex> = g.vertices().iter().copied().filter(|v| !a.contains(v)).collect();
    let mut m = BitMatrix::zeros(a.len(), rest.len());
    for (i, &u) in a.iter().enumerate() {
        for (j, &v) in rest.iter().enumerate() {
            m.set(i, j, g.has_edge(u, v));
        }
    }
    debug_assert_eq!(mask.count_ones() as usize, a.len());
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        let ones = BitMatrix::from_bools(&vec![vec![true; 4]; 3]).unwrap();
        assert_eq!(rank_gf2(&ones), 1);
        assert_eq!(rank_gf2(&BitMatrix::identity(5)), 5);
        assert_eq!(rank_gf2(&BitMatrix::zeros(3, 7)), 0);
        assert_eq!(rank_gf2(&BitMatrix::zeros(0, 0)), 0);
        assert_eq!(rank_gf2(&BitMatrix::identity(130)), 130);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(BitMatrix::from_bools(&[vec![true], vec![true, false]]).is_err());
    }

    #[test]
    fn cut_rank_examples() {
        let k5 = Graph::complete(&[0, 1, 2, 3, 4]).unwrap();
        for a in [vec![0], vec![1, 3], vec![0, 2, 4], vec![0, 1, 2, 3]] {
            assert_eq!(cut_rank(&k5, &a.into_iter().collect()).unwrap(), 1);
        }
        assert_eq!(cut_rank(&k5, &BTreeSet::new()).unwrap(), 0);
        assert_eq!(cut_rank(&k5, &k5.vertex_set()).unwrap(), 0);
        // C5 with A = {0, 1}: rows 0 -> {4}, 1 -> {2} are independent.
        let c5 = Graph::cycle(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(cut_rank(&c5, &[0, 1].into_iter().collect()).unwrap(), 2);
        assert!(cut_rank(&c5, &[9].into_iter().collect()).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![0b011u64, 0b110, 0b001];
        let inv = inverse_u64(&m).unwrap();
        for i in 0..3 {
            let mut row = 0u64;
            for (k, &mk) in m.iter().enumerate() {
                if inv[i] >> k & 1 == 1 {
                    row ^= mk;
                }
            }
            assert_eq!(row, 1 << i);
        }
        assert!(inverse_u64(&[0b11, 0b11]).is_none());
    }

    fn graph_and_mask() -> impl Strategy<Value = (Graph, u64)> {
        (1usize..=10).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (0..(1u64 << pairs), 0..(1u64 << n)).prop_map(move |(c, a)| (Graph::from_code(n, c), a))
        })
    }

    proptest! {
        #[test]
        fn cut_rank_symmetric_and_bounded((g, a) in graph_and_mask()) {
            let r = cut_rank_mask(&g, a);
            let comp = g.full_mask() & !a;
            prop_assert_eq!(r, cut_rank_mask(&g, comp));
            prop_assert!(r <= (a.count_ones().min(comp.count_ones())) as usize);
            let m = cut_matrix(&g, &g.labels_of(a)).unwrap();
            prop_assert_eq!(r, m.rank());
        }

        #[test]
        fn word_rank_matches_matrix_rank(vs in proptest::collection::vec(any::<u64>(), 0..12)) {
            let rows: Vec<Vec<bool>> = vs.iter().map(|v| (0..64).map(|j| v >> j & 1 == 1).collect()).collect();
            let m = if rows.is_empty() { BitMatrix::zeros(0, 64) } else { BitMatrix::from_bools(&rows).unwrap() };
            prop_assert_eq!(rank_u64(vs.iter().copied()), m.rank());
        }
    }
}
