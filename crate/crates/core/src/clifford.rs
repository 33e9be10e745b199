//! The finite subgroup `{±e_S}` of `Pin(n)` generated by an orthonormal basis,
//! and its circle extension inside `Spin^c(n) = (Spin(n) × S¹)/{±1}`.
//!
//! Conventions:
//! - `eᵢ² = -1` and `eᵢeⱼ = -eⱼeᵢ` for `i ≠ j`;
//! - `e_S` is the product of `eₖ` over `k ∈ S` in increasing index order, so
//!   `e_S · e_T = (-1)^{m(S,T) + |S∩T|} e_{SΔT}` where `m(S,T)` counts pairs
//!   `(s, t) ∈ S × T` with `s > t`;
//! - circle elements are additive angles `q ∈ [0, 1)` standing for
//!   `exp(2πiq)`, and `[g, z] = [-g, -z]` is stored with the Clifford sign
//!   folded into the angle (`+1/2`).

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::rational::{format_rational, half, mod_one, Rational};
use crate::signs::{full_mask, SignVector, MAX_DIM};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} exceeds the supported maximum {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("e_S with |S| = {0} is odd and does not lie in Spin(n)")]
    NotInSpin(u32),
}

/// `±e_S` in `Pin(n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PinElement {
    dim: u8,
    negative: bool,
    subset: u64,
}

fn above(t: u32) -> u64 {
    if t >= 63 {
        0
    } else {
        !0u64 << (t + 1)
    }
}

/// Parity of `m(S,T) + |S∩T|`.
fn product_sign(s: u64, t: u64) -> bool {
    let mut crossings = (s & t).count_ones();
    let mut rest = t;
    while rest != 0 {
        let k = rest.trailing_zeros();
        crossings += (s & above(k)).count_ones();
        rest &= rest - 1;
    }
    crossings % 2 == 1
}

impl PinElement {
    pub fn new(dim: usize, negative: bool, subset: u64) -> Result<Self, CliffordError> {
        if dim > MAX_DIM {
            return Err(CliffordError::DimensionTooLarge(dim));
        }
        debug_assert_eq!(subset & !full_mask(dim), 0);
        Ok(Self {
            dim: dim as u8,
            negative,
            subset: subset & full_mask(dim),
        })
    }

    pub fn identity(dim: usize) -> Result<Self, CliffordError> {
        Self::new(dim, false, 0)
    }

    pub fn minus_one(dim: usize) -> Result<Self, CliffordError> {
        Self::new(dim, true, 0)
    }

    /// The basis vector `e_{k+1}` (0-based `k`).
    pub fn basis(dim: usize, k: usize) -> Result<Self, CliffordError> {
        Self::new(dim, false, 1 << k)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn subset(&self) -> u64 {
        self.subset
    }

    /// Even subsets make up `Spin(n)`.
    pub fn is_even(&self) -> bool {
        self.subset.count_ones().is_multiple_of(2)
    }

    /// `±1`, the kernel of `λ`.
    pub fn is_scalar(&self) -> bool {
        self.subset == 0
    }

    pub fn negated(&self) -> Self {
        Self {
            negative: !self.negative,
            ..*self
        }
    }

    pub fn try_mul(&self, other: &PinElement) -> Result<PinElement, CliffordError> {
        if self.dim != other.dim {
            return Err(CliffordError::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(PinElement {
            dim: self.dim,
            negative: self.negative ^ other.negative ^ product_sign(self.subset, other.subset),
            subset: self.subset ^ other.subset,
        })
    }

    /// `e_S · e_S = (-1)^{m(S,S)+|S|}`, so the inverse is `e_S` up to that sign.
    pub fn inverse(&self) -> PinElement {
        let square_negative = product_sign(self.subset, self.subset);
        PinElement {
            negative: self.negative ^ square_negative,
            ..*self
        }
    }

    /// Every element has order dividing 4.
    pub fn pow(&self, exp: &BigInt) -> PinElement {
        let e = exp.mod_floor(&BigInt::from(4)).to_u8().expect("reduced mod 4");
        let mut out = PinElement {
            dim: self.dim,
            negative: false,
            subset: 0,
        };
        for _ in 0..e {
            out = out * *self;
        }
        out
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, other: &PinElement) -> Result<PinElement, CliffordError> {
        self.try_mul(other)?
            .try_mul(&self.inverse())?
            .try_mul(&other.inverse())
    }
}

impl Mul for PinElement {
    type Output = PinElement;

    /// Panics on a dimension mismatch; use [`PinElement::try_mul`] to handle it.
    fn mul(self, rhs: PinElement) -> PinElement {
        self.try_mul(&rhs).expect("pin elements of equal dimension")
    }
}

impl fmt::Debug for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = (0..self.dim())
            .filter(|k| self.subset >> k & 1 == 1)
            .map(|k| (k + 1).to_string())
            .collect();
        let sign = if self.negative { "-" } else { "" };
        write!(f, "{sign}e{{{}}}", idx.join(","))
    }
}

pub fn pin_multiply(a: &PinElement, b: &PinElement) -> Result<PinElement, CliffordError> {
    a.try_mul(b)
}

/// Canonical lift `c(B) = e_S` with `S` the negated coordinates of `B`.
/// The lift lies in `Spin(n)` exactly when `B` has determinant +1, which
/// [`PinElement::is_even`] reports.
pub fn lift_diagonal(signs: &SignVector) -> PinElement {
    PinElement {
        dim: signs.dim() as u8,
        negative: false,
        subset: signs.neg_mask(),
    }
}

/// The covering `λ: Spin(n) → SO(n)`. For even `S`, conjugation by `e_S`
/// negates exactly the basis vectors indexed by `S`.
pub fn lambda(g: &PinElement) -> Result<SignVector, CliffordError> {
    if !g.is_even() {
        return Err(CliffordError::NotInSpin(g.subset.count_ones()));
    }
    Ok(SignVector::from_mask(g.dim(), g.subset).expect("subset within dimension"))
}

/// `[g, z]` in `Spin^c(n)`, stored with `g` sign-free.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinCElement {
    pin: PinElement,
    angle: Rational,
}

impl SpinCElement {
    /// `[g, z]`, canonicalized through `[-g, z] = [g, z + 1/2]`.
    pub fn new(pin: PinElement, angle: Rational) -> Self {
        let angle = if pin.negative { angle + half() } else { angle };
        Self {
            pin: PinElement {
                negative: false,
                ..pin
            },
            angle: mod_one(&angle),
        }
    }

    pub fn identity(dim: usize) -> Result<Self, CliffordError> {
        Ok(Self::new(PinElement::identity(dim)?, Rational::zero()))
    }

    /// `i(g) = [g, 1]`
    pub fn from_spin(g: PinElement) -> Self {
        Self::new(g, Rational::zero())
    }

    /// `j(z) = [1, z]`
    pub fn from_circle(dim: usize, angle: Rational) -> Result<Self, CliffordError> {
        Ok(Self::new(PinElement::identity(dim)?, angle))
    }

    pub fn pin(&self) -> &PinElement {
        &self.pin
    }

    pub fn angle(&self) -> &Rational {
        &self.angle
    }

    pub fn dim(&self) -> usize {
        self.pin.dim()
    }

    pub fn try_mul(&self, other: &SpinCElement) -> Result<SpinCElement, CliffordError> {
        let pin = self.pin.try_mul(&other.pin)?;
        Ok(SpinCElement::new(pin, &self.angle + &other.angle))
    }

    pub fn inverse(&self) -> SpinCElement {
        SpinCElement::new(self.pin.inverse(), -&self.angle)
    }

    pub fn pow(&self, exp: &BigInt) -> SpinCElement {
        let pin = self.pin.pow(exp);
        SpinCElement::new(pin, &self.angle * Rational::from_integer(exp.clone()))
    }

    pub fn commutator(&self, other: &SpinCElement) -> Result<SpinCElement, CliffordError> {
        self.try_mul(other)?
            .try_mul(&self.inverse())?
            .try_mul(&other.inverse())
    }

    /// `λ̄[g, z] = λ(g)`
    pub fn lambda_bar(&self) -> Result<SignVector, CliffordError> {
        lambda(&self.pin)
    }

    /// `l[g, z] = z²`, as the angle `2q mod 1`.
    pub fn l(&self) -> Rational {
        mod_one(&(&self.angle * Rational::from_integer(BigInt::from(2))))
    }

    /// `p = λ × l`
    pub fn p(&self) -> Result<(SignVector, Rational), CliffordError> {
        Ok((self.lambda_bar()?, self.l()))
    }
}

impl fmt::Debug for SpinCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.pin, format_rational(&self.angle))
    }
}

pub fn spinc_multiply(a: &SpinCElement, b: &SpinCElement) -> Result<SpinCElement, CliffordError> {
    a.try_mul(b)
}

pub fn spinc_lambda_bar(a: &SpinCElement) -> Result<SignVector, CliffordError> {
    a.lambda_bar()
}

pub fn spinc_l(a: &SpinCElement) -> Rational {
    a.l()
}
