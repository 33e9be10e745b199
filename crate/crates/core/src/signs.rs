//! Diagonal ±1 matrices, stored as a bit mask of negated coordinates.

use std::fmt;

use thiserror::Error;

/// Largest supported dimension (one bit per coordinate in a `u64`).
pub const MAX_DIM: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("entry {index} is {value}; diagonal entries must be +1 or -1")]
    NotASign { index: usize, value: i64 },
    #[error("negation mask {mask:#x} has bits beyond dimension {dim}")]
    MaskOutOfRange { dim: usize, mask: u64 },
}

/// `diag(±1, …, ±1)`; coordinate `k` (0-based) is negated iff bit `k` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    dim: u8,
    neg: u64,
}

pub(crate) fn full_mask(dim: usize) -> u64 {
    if dim >= 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

impl SignVector {
    pub fn identity(dim: usize) -> Result<Self, SignError> {
        Self::from_mask(dim, 0)
    }

    pub fn from_mask(dim: usize, neg: u64) -> Result<Self, SignError> {
        if dim > MAX_DIM {
            return Err(SignError::DimensionTooLarge(dim));
        }
        if neg & !full_mask(dim) != 0 {
            return Err(SignError::MaskOutOfRange { dim, mask: neg });
        }
        Ok(Self { dim: dim as u8, neg })
    }

    pub fn from_signs(signs: &[i64]) -> Result<Self, SignError> {
        if signs.len() > MAX_DIM {
            return Err(SignError::DimensionTooLarge(signs.len()));
        }
        let mut neg = 0;
        for (index, &value) in signs.iter().enumerate() {
            match value {
                1 => {}
                -1 => neg |= 1 << index,
                _ => return Err(SignError::NotASign { index, value }),
            }
        }
        Ok(Self {
            dim: signs.len() as u8,
            neg,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn neg_mask(&self) -> u64 {
        self.neg
    }

    /// Mask of coordinates fixed (+1) by this matrix.
    pub fn fixed_mask(&self) -> u64 {
        !self.neg & full_mask(self.dim())
    }

    pub fn is_negated(&self, k: usize) -> bool {
        self.neg >> k & 1 == 1
    }

    /// Entry `k` as `+1` or `-1`.
    pub fn entry(&self, k: usize) -> i64 {
        if self.is_negated(k) {
            -1
        } else {
            1
        }
    }

    pub fn to_signs(&self) -> Vec<i64> {
        (0..self.dim()).map(|k| self.entry(k)).collect()
    }

    pub fn negated_count(&self) -> u32 {
        self.neg.count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.neg == 0
    }

    /// Determinant +1.
    pub fn is_orientation_preserving(&self) -> bool {
        self.negated_count().is_multiple_of(2)
    }

    /// Matrix product; diagonal matrices commute and multiply entrywise.
    pub fn compose(&self, other: &SignVector) -> SignVector {
        debug_assert_eq!(self.dim, other.dim);
        SignVector {
            dim: self.dim,
            neg: self.neg ^ other.neg,
        }
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diag{self}")
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<&str> = (0..self.dim())
            .map(|k| if self.is_negated(k) { "-1" } else { "1" })
            .collect();
        write!(f, "[{}]", entries.join(","))
    }
}
