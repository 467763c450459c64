//! Packed GF(2) bit vectors and elimination kernels.
//!
//! Everything downstream (Pauli algebra, syndrome maps, check derivation)
//! reduces to word-wise XOR/AND with parity folds on these vectors, so this
//! module is deliberately free of abstraction overhead.

use serde::{Deserialize, Serialize};

const WORD_BITS: usize = 64;

/// Fixed-length bit vector packed into u64 words. Bits past `len` are kept
/// zero so `Eq`/`Hash`/`Ord` can work directly on the words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the AND of two vectors: the inner product over GF(2).
    #[inline]
    pub fn and_parity(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn clear(&mut self) {
        for w in &mut self.words {
            *w = 0;
        }
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + bit)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// surviving row, ascending. Zero rows are dropped. Deterministic: pivots are
/// always the lowest available column, rows scanned top to bottom.
pub fn rref(rows: &mut Vec<BitVec>) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let width = rows[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

/// Basis of {u : r . u = 0 for every row r}, canonical form: one vector per
/// free column, that free column set to 1. Rows must all have length `width`.
pub fn kernel_basis(rows: &[BitVec], width: usize) -> Vec<BitVec> {
    let mut reduced: Vec<BitVec> = rows.to_vec();
    let pivots = rref(&mut reduced);
    let mut is_pivot = vec![false; width];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..width).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(width);
        v.set(free, true);
        for (row, &p) in reduced.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// GF(2) row-space equality via canonical RREF comparison.
pub fn row_space_equal(a: &[BitVec], b: &[BitVec]) -> bool {
    let mut ra = a.to_vec();
    let mut rb = b.to_vec();
    rref(&mut ra);
    rref(&mut rb);
    ra == rb
}

/// Expresses `target` as an XOR of `rows`, if possible. Returns the selector
/// over row indices. Used by the stabilizer oracle to decompose a determinate
/// measurement into recorded generators.
pub fn solve_combination(rows: &[BitVec], target: &BitVec) -> Option<BitVec> {
    let mut work: Vec<BitVec> = rows.to_vec();
    let n_rows = rows.len();
    // Augment each row with its selector tag, then eliminate.
    let mut tags: Vec<BitVec> = (0..n_rows)
        .map(|i| BitVec::from_indices(n_rows, &[i]))
        .collect();
    let width = target.len();
    let mut acc = target.clone();
    let mut sel = BitVec::zeros(n_rows);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot_row) = (rank..n_rows).find(|&r| work[r].get(col)) else {
            if acc.get(col) {
                return None; // target has support no row can reach
            }
            continue;
        };
        work.swap(rank, pivot_row);
        tags.swap(rank, pivot_row);
        let (pivot, pivot_tag) = (work[rank].clone(), tags[rank].clone());
        for r in rank + 1..n_rows {
            if work[r].get(col) {
                work[r].xor_assign(&pivot);
                tags[r].xor_assign(&pivot_tag);
            }
        }
        if acc.get(col) {
            acc.xor_assign(&pivot);
            sel.xor_assign(&pivot_tag);
        }
        rank += 1;
    }
    if acc.is_zero() {
        Some(sel)
    } else {
        None
    }
}
