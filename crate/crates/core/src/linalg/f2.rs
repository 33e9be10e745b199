//! Linear systems over F₂ with packed bit rows.

use std::fmt;

use super::LinalgError;

/// Bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "F2[{s}]")
    }
}

/// Matrix over F₂ stored as bit rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::new(size);
        for i in 0..size {
            m.rows.push(F2Vec::unit(size, i));
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vec>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    pub fn push_row(&mut self, row: F2Vec) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i]
    }

    /// `u · A` for `u` over the rows.
    pub fn left_mul(&self, u: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zeros(self.cols);
        for i in u.ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    /// `A · x` for `x` over the columns.
    pub fn mul_vec(&self, x: &F2Vec) -> F2Vec {
        F2Vec::from_bools(&self.rows.iter().map(|r| r.dot(x)).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum F2Solution {
    /// One solution (free variables zero) and a basis of the homogeneous kernel.
    Consistent { x: F2Vec, kernel: Vec<F2Vec> },
    /// Row combination `u` with `u·A = 0` and `u·b = 1`.
    Inconsistent { certificate: F2Vec },
}

struct BasisRow {
    bits: F2Vec,
    rhs: bool,
    source: usize,
    /// Pivot columns of earlier basis rows folded into this one.
    folded: Vec<usize>,
}

/// Solves `A·x = b` over F₂.
///
/// Rows are eliminated one at a time into an echelon basis; row combinations
/// are reconstructed only for basis rows and only when a contradiction needs
/// a certificate, so tall systems stay cheap.
pub fn f2_solve(a: &F2Matrix, b: &F2Vec) -> Result<F2Solution, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let mut basis: Vec<Option<BasisRow>> = (0..a.cols()).map(|_| None).collect();
    for (r, row) in a.rows.iter().enumerate() {
        let mut cur = row.clone();
        let mut rhs = b.get(r);
        let mut folded = Vec::new();
        loop {
            match cur.first_one() {
                None => {
                    if rhs {
                        let certificate = combination(&basis, a.rows(), r, &folded);
                        return Ok(F2Solution::Inconsistent { certificate });
                    }
                    break;
                }
                Some(p) => match &basis[p] {
                    Some(br) => {
                        cur.xor_assign(&br.bits);
                        rhs ^= br.rhs;
                        folded.push(p);
                    }
                    None => {
                        basis[p] = Some(BasisRow {
                            bits: cur,
                            rhs,
                            source: r,
                            folded,
                        });
                        break;
                    }
                },
            }
        }
    }

    let pivots: Vec<usize> = (0..a.cols()).filter(|&p| basis[p].is_some()).collect();
    let back_substitute = |mut x: F2Vec, with_rhs: bool| {
        for &p in pivots.iter().rev() {
            let br = basis[p].as_ref().expect("pivot row");
            // x[p] is still zero here, so the dot product covers the other columns
            let value = br.bits.dot(&x) ^ (with_rhs && br.rhs);
            x.set(p, value);
        }
        x
    };
    let x = back_substitute(F2Vec::zeros(a.cols()), true);
    let kernel = (0..a.cols())
        .filter(|&f| basis[f].is_none())
        .map(|f| back_substitute(F2Vec::unit(a.cols(), f), false))
        .collect();
    Ok(F2Solution::Consistent { x, kernel })
}

fn combination(basis: &[Option<BasisRow>], rows: usize, source: usize, folded: &[usize]) -> F2Vec {
    let mut memo: Vec<Option<F2Vec>> = (0..basis.len()).map(|_| None).collect();
    fn expand(
        p: usize,
        basis: &[Option<BasisRow>],
        rows: usize,
        memo: &mut Vec<Option<F2Vec>>,
    ) -> F2Vec {
        if let Some(v) = &memo[p] {
            return v.clone();
        }
        let br = basis[p].as_ref().expect("folded pivot exists");
        let mut v = F2Vec::unit(rows, br.source);
        for &q in &br.folded {
            let w = expand(q, basis, rows, memo);
            v.xor_assign(&w);
        }
        memo[p] = Some(v.clone());
        v
    }
    let mut out = F2Vec::unit(rows, source);
    for &p in folded {
        let w = expand(p, basis, rows, &mut memo);
        out.xor_assign(&w);
    }
    out
}
