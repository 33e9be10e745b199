use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::CrystalError;
use crate::linalg::rational::{format_rational, is_integral, Rational};
use crate::signs::SignVector;

/// An isometry `x ↦ D·x + c` with `D` diagonal ±1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineElement {
    rotation: SignVector,
    translation: Vec<Rational>,
}

impl AffineElement {
    pub fn new(rotation: SignVector, translation: Vec<Rational>) -> Result<Self, CrystalError> {
        if rotation.dim() != translation.len() {
            return Err(CrystalError::DimensionMismatch {
                expected: rotation.dim(),
                found: translation.len(),
            });
        }
        Ok(Self {
            rotation,
            translation,
        })
    }

    pub fn identity(dim: usize) -> Result<Self, CrystalError> {
        let rotation = SignVector::identity(dim)?;
        Ok(Self {
            rotation,
            translation: vec![Rational::zero(); dim],
        })
    }

    /// Pure translation by an integer vector.
    pub fn lattice(vector: &[BigInt]) -> Result<Self, CrystalError> {
        let rotation = SignVector::identity(vector.len())?;
        Ok(Self {
            rotation,
            translation: vector.iter().cloned().map(Rational::from_integer).collect(),
        })
    }

    /// The lattice basis translation `t_{k+1}`.
    pub fn basis_translation(dim: usize, k: usize) -> Result<Self, CrystalError> {
        let mut v = vec![BigInt::zero(); dim];
        v[k] = BigInt::one();
        Self::lattice(&v)
    }

    pub fn dim(&self) -> usize {
        self.rotation.dim()
    }

    pub fn rotation(&self) -> &SignVector {
        &self.rotation
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        self.rotation.is_identity() && self.translation.iter().all(Zero::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.rotation.is_identity()
    }

    /// The translation as an integer vector, if it is one.
    pub fn integral_translation(&self) -> Option<Vec<BigInt>> {
        self.translation
            .iter()
            .map(|q| is_integral(q).then(|| q.to_integer()))
            .collect()
    }

    /// `D·v`
    pub fn rotate(&self, v: &[Rational]) -> Vec<Rational> {
        v.iter()
            .enumerate()
            .map(|(k, q)| if self.rotation.is_negated(k) { -q } else { q.clone() })
            .collect()
    }

    /// `(A, a)(B, b) = (AB, a + A·b)`
    pub fn compose(&self, other: &AffineElement) -> Result<AffineElement, CrystalError> {
        if self.dim() != other.dim() {
            return Err(CrystalError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let translation = self
            .translation
            .iter()
            .zip(self.rotate(&other.translation))
            .map(|(a, b)| a + b)
            .collect();
        Ok(AffineElement {
            rotation: self.rotation.compose(&other.rotation),
            translation,
        })
    }

    /// `(A, a)⁻¹ = (A, -A·a)`
    pub fn inverse(&self) -> AffineElement {
        AffineElement {
            rotation: self.rotation,
            translation: self.rotate(&self.translation).into_iter().map(|q| -q).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> AffineElement {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = AffineElement {
            rotation: SignVector::identity(self.dim()).expect("valid dimension"),
            translation: vec![Rational::zero(); self.dim()],
        };
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// `a b a⁻¹ b⁻¹`
    pub fn commutator(&self, other: &AffineElement) -> Result<AffineElement, CrystalError> {
        self.compose(other)?
            .compose(&self.inverse())?
            .compose(&other.inverse())
    }
}

impl Mul for &AffineElement {
    type Output = AffineElement;

    /// Panics on a dimension mismatch; [`AffineElement::compose`] reports it instead.
    fn mul(self, rhs: &AffineElement) -> AffineElement {
        self.compose(rhs).expect("affine elements of equal dimension")
    }
}

pub(crate) fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.rotation, format_vector(&self.translation))
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::rat;
    use proptest::prelude::*;

    fn elem(signs: &[i64], t: &[(i64, i64)]) -> AffineElement {
        AffineElement::new(
            SignVector::from_signs(signs).unwrap(),
            t.iter().map(|&(p, q)| rat(p, q)).collect(),
        )
        .unwrap()
    }

    fn cyclic5(i: usize) -> AffineElement {
        let mut signs = vec![-1; 5];
        signs[i - 1] = 1;
        let mut t = vec![(0, 1); 5];
        t[i - 1] = (1, 2);
        t[i % 5] = (1, 2);
        elem(&signs, &t)
    }

    #[test]
    fn identity_is_neutral() {
        let a = cyclic5(2);
        assert_eq!(&AffineElement::identity(5).unwrap() * &a, a);
    }

    #[test]
    fn commutator_of_first_and_third() {
        let c = cyclic5(1).commutator(&cyclic5(3)).unwrap();
        assert_eq!(c, elem(&[1; 5], &[(1, 1), (1, 1), (-1, 1), (-1, 1), (0, 1)]));
    }

    #[test]
    fn inverse_of_first_generator() {
        let inv = cyclic5(1).inverse();
        assert_eq!(
            inv,
            elem(&[1, -1, -1, -1, -1], &[(-1, 2), (1, 2), (0, 1), (0, 1), (0, 1)])
        );
        assert!((&inv * &cyclic5(1)).is_identity());
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(cyclic5(1).compose(&AffineElement::identity(3).unwrap()).is_err());
        assert!(AffineElement::new(SignVector::identity(2).unwrap(), vec![rat(0, 1)]).is_err());
    }

    fn element() -> impl Strategy<Value = AffineElement> {
        (0u64..16, proptest::collection::vec((-4i64..4, 1i64..4), 4)).prop_map(|(mask, t)| {
            AffineElement::new(
                SignVector::from_mask(4, mask).unwrap(),
                t.into_iter().map(|(p, q)| rat(p, q)).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn group_axioms(a in element(), b in element(), c in element()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!((&a * &a.inverse()).is_identity());
            prop_assert!((&a.inverse() * &a).is_identity());
            prop_assert_eq!(a.pow(-2), (&a * &a).inverse());
        }
    }
}
