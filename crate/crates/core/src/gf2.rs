//! Dense bit vectors over GF(2) and an incremental echelon basis.

use alloc::vec;
use alloc::vec::Vec;

/// A row vector over GF(2), packed 64 columns per word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zero(cols: usize) -> Self {
        BitRow {
            words: vec![0; cols.div_ceil(64)],
        }
    }

    /// Row with ones exactly at `cols` (repeated columns cancel).
    pub fn from_columns(width: usize, cols: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zero(width);
        for c in cols {
            row.flip(c);
        }
        row
    }

    pub fn get(&self, col: usize) -> bool {
        self.words[col / 64] >> (col % 64) & 1 == 1
    }

    pub fn flip(&mut self, col: usize) {
        self.words[col / 64] ^= 1 << (col % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Highest set column.
    pub fn leading(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Parity of the columns selected by `self` in `values`.
    pub fn dot(&self, values: &[bool]) -> bool {
        let mut acc = false;
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                acc ^= values[i * 64 + bit];
                w &= w - 1;
            }
        }
        acc
    }
}

/// Rows kept in echelon form keyed by leading column, each carrying a
/// right-hand-side bit that is XORed along with the row.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<Option<(BitRow, bool)>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: vec![None; width],
            rank: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `row` against the basis. Returns the residue and its right-hand side.
    pub fn reduce(&self, mut row: BitRow, mut rhs: bool) -> (BitRow, bool) {
        while let Some(lead) = row.leading() {
            match &self.rows[lead] {
                Some((pivot, value)) => {
                    row.xor_assign(pivot);
                    rhs ^= value;
                }
                None => break,
            }
        }
        (row, rhs)
    }

    /// Adds `row` if it is independent of the basis. Returns whether the rank grew.
    pub fn insert(&mut self, row: BitRow, rhs: bool) -> bool {
        let (row, rhs) = self.reduce(row, rhs);
        match row.leading() {
            Some(lead) => {
                self.rows[lead] = Some((row, rhs));
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    /// `Some(value)` if `row` lies in the span, where value is the matching
    /// combination of right-hand sides.
    pub fn solve(&self, row: BitRow) -> Option<bool> {
        let (residue, rhs) = self.reduce(row, false);
        residue.is_zero().then_some(rhs)
    }
}

/// Rank over GF(2) of the given rows.
pub fn rank(width: usize, rows: impl IntoIterator<Item = BitRow>) -> usize {
    let mut basis = EchelonBasis::new(width);
    for row in rows {
        basis.insert(row, false);
    }
    basis.rank()
}
