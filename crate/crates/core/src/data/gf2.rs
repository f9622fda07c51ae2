//! Linear systems over GF(2) with bit-packed rows.

use std::fmt;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
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
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    fn xor_assign(&mut self, other: &BitVector) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVector({s})")
    }
}

/// Row-major bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    cols: usize,
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix {
            rows: Vec::new(),
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVector>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        BitMatrix { rows, cols }
    }

    pub fn identity(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| {
                let mut r = BitVector::zeros(d);
                r.set(i, true);
                r
            })
            .collect();
        BitMatrix { rows, cols: d }
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        let bits: Vec<bool> = self.rows.iter().map(|r| r.dot(v)).collect();
        BitVector::from_bits(&bits)
    }

    pub fn rank(&self) -> usize {
        let zeros = BitVector::zeros(self.nrows());
        let mut aug = augment(self, &zeros);
        eliminate(&mut aug, self.cols).len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Solution {
    /// Full column rank: the only solution.
    Unique(BitVector),
    /// Rank below `d`; `solution` has every free variable set to 0.
    Underdetermined { rank: usize, solution: BitVector },
}

impl Gf2Solution {
    pub fn solution(&self) -> &BitVector {
        match self {
            Gf2Solution::Unique(s) => s,
            Gf2Solution::Underdetermined { solution, .. } => solution,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Gf2Solution::Unique(s) => s.len(),
            Gf2Solution::Underdetermined { rank, .. } => *rank,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("inconsistent system: equation {row} reduces to 0 = 1 (rank {rank})")]
    Inconsistent { row: usize, rank: usize },
    #[error("right-hand side has {got} entries for {rows} equations")]
    LengthMismatch { got: usize, rows: usize },
}

fn augment(x: &BitMatrix, y: &BitVector) -> Vec<BitVector> {
    let d = x.cols;
    x.rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = BitVector::zeros(d + 1);
            a.words[..r.words.len()].copy_from_slice(&r.words);
            a.set(d, y.get(i));
            a
        })
        .collect()
}

/// Reduce to reduced row echelon form in place; returns pivot columns in row order.
fn eliminate(rows: &mut [BitVector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(c) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

/// Solve `X s = y` over GF(2) by Gaussian elimination.
pub fn gf2_solve(x: &BitMatrix, y: &BitVector) -> Result<Gf2Solution, Gf2Error> {
    if y.len() != x.nrows() {
        return Err(Gf2Error::LengthMismatch {
            got: y.len(),
            rows: x.nrows(),
        });
    }
    let d = x.cols;
    let mut rows = augment(x, y);
    let pivots = eliminate(&mut rows, d);
    let rank = pivots.len();
    if let Some(row) = (rank..rows.len()).find(|&r| rows[r].get(d)) {
        return Err(Gf2Error::Inconsistent { row, rank });
    }
    let mut s = BitVector::zeros(d);
    for (r, &c) in pivots.iter().enumerate() {
        s.set(c, rows[r].get(d));
    }
    Ok(if rank == d {
        Gf2Solution::Unique(s)
    } else {
        Gf2Solution::Underdetermined { rank, solution: s }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitVector {
        BitVector::from_bits(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn identity_system() {
        let s = bits("1011");
        let sol = gf2_solve(&BitMatrix::identity(4), &s).unwrap();
        assert_eq!(sol, Gf2Solution::Unique(s));
    }

    #[test]
    fn rank_deficit() {
        let x = BitMatrix::from_rows(vec![bits("110"), bits("011")], 3);
        let y = bits("10");
        match gf2_solve(&x, &y).unwrap() {
            Gf2Solution::Underdetermined { rank, solution } => {
                assert_eq!(rank, 2);
                assert_eq!(x.mul_vec(&solution), y);
                // free variable (column 2) set to 0
                assert!(!solution.get(2));
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_reported() {
        let x = BitMatrix::from_rows(vec![bits("11"), bits("11")], 2);
        assert!(matches!(
            gf2_solve(&x, &bits("10")),
            Err(Gf2Error::Inconsistent { rank: 1, .. })
        ));
    }

    #[test]
    fn random_full_rank_recovers_secret() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 8;
        let secret = BitVector::from_bits(&(0..d).map(|_| rng.random()).collect::<Vec<bool>>());
        // draw rows until the matrix reaches full rank
        let mut x = BitMatrix::new(d);
        while x.rank() < d {
            assert!(x.nrows() < 64, "rank never reached");
            let row: Vec<bool> = (0..d).map(|_| rng.random()).collect();
            x.push_row(BitVector::from_bits(&row));
        }
        let y = x.mul_vec(&secret);
        let sol = gf2_solve(&x, &y).unwrap();
        assert_eq!(sol, Gf2Solution::Unique(secret.clone()));
        assert_eq!(x.mul_vec(sol.solution()), y);
    }

    #[test]
    fn wide_rows_span_multiple_words() {
        let d = 130;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let secret = BitVector::from_bits(&(0..d).map(|_| rng.random()).collect::<Vec<bool>>());
        let mut x = BitMatrix::new(d);
        for _ in 0..d + 20 {
            x.push_row(BitVector::from_bits(
                &(0..d).map(|_| rng.random()).collect::<Vec<bool>>(),
            ));
        }
        let y = x.mul_vec(&secret);
        let sol = gf2_solve(&x, &y).unwrap();
        assert_eq!(x.mul_vec(sol.solution()), y);
    }
}
