use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::affine::AffineElement;
use super::presentation::Presentation;
use super::CrystalError;
use crate::linalg::rational::{common_denominator, is_integral, mod_one, Rational};
use crate::signs::{full_mask, SignVector};

/// A subgroup of `E(n)` generated by diagonal isometries together with ℤⁿ.
///
/// The holonomy generators are reduced greedily, lowest index first, to an
/// independent basis `β̂₁ … β̂ₘ` over F₂. Every element of the group is then
/// `t · γ_a` with `t ∈ ℤⁿ` and `γ_a` the product of the `β̂ᵢ` with `aᵢ = 1` in
/// increasing index order. Holonomy classes are encoded as bit masks `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BieberbachGroup {
    dim: usize,
    generators: Vec<AffineElement>,
    independent: Vec<usize>,
    coordinates: Vec<u64>,
    presentation: Presentation,
}

/// Validates generator data and extracts the presentation.
///
/// Dependent generators must equal their normal form up to a lattice
/// translation, and all square and commutator translations must be integral.
/// Torsion is not checked here; see [`BieberbachGroup::is_torsion_free`].
pub fn build_group(dim: usize, generators: Vec<AffineElement>) -> Result<BieberbachGroup, CrystalError> {
    SignVector::identity(dim)?;
    for (index, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(CrystalError::GeneratorDimension {
                index,
                expected: dim,
                found: g.dim(),
            });
        }
    }

    // pivot bit -> (reduced holonomy vector, combination over the independent basis)
    let mut pivots: Vec<Option<(u64, u64)>> = vec![None; dim];
    let mut independent = Vec::new();
    let mut coordinates = Vec::with_capacity(generators.len());
    for (j, g) in generators.iter().enumerate() {
        let mut v = g.rotation().neg_mask();
        let mut combo = 0u64;
        while v != 0 {
            let p = v.trailing_zeros() as usize;
            match pivots[p] {
                Some((row, c)) => {
                    v ^= row;
                    combo ^= c;
                }
                None => break,
            }
        }
        if v == 0 {
            coordinates.push(combo);
        } else {
            let bit = 1u64 << independent.len();
            pivots[v.trailing_zeros() as usize] = Some((v, combo | bit));
            independent.push(j);
            coordinates.push(bit);
        }
    }

    let basis: Vec<AffineElement> = independent.iter().map(|&j| generators[j].clone()).collect();
    let presentation = Presentation::from_basis(dim, &basis)?;
    let group = BieberbachGroup {
        dim,
        generators,
        independent,
        coordinates,
        presentation,
    };
    for (j, g) in group.generators.iter().enumerate() {
        if group.independent.contains(&j) {
            continue;
        }
        let rep = group.representative(group.coordinates[j]);
        let offset: Vec<Rational> = g
            .translation()
            .iter()
            .zip(rep.translation())
            .map(|(a, b)| a - b)
            .collect();
        if !offset.iter().all(is_integral) {
            return Err(CrystalError::InconsistentGenerator { index: j, offset });
        }
    }
    Ok(group)
}

impl BieberbachGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[AffineElement] {
        &self.generators
    }

    /// Input positions of the independent generators `β̂₁ … β̂ₘ`.
    pub fn independent_indices(&self) -> &[usize] {
        &self.independent
    }

    pub fn independent_generator(&self, i: usize) -> &AffineElement {
        &self.generators[self.independent[i]]
    }

    /// Holonomy class of input generator `j` over the independent basis.
    pub fn generator_class(&self, j: usize) -> u64 {
        self.coordinates[j]
    }

    /// `m`, the F₂-rank of the holonomy group.
    pub fn holonomy_rank(&self) -> usize {
        self.independent.len()
    }

    pub fn holonomy_order(&self) -> u128 {
        1u128 << self.holonomy_rank()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Rotation part of the holonomy class `a`.
    pub fn holonomy(&self, a: u64) -> SignVector {
        let mask = bits(a).fold(0, |acc, i| acc ^ self.independent_generator(i).rotation().neg_mask());
        SignVector::from_mask(self.dim, mask).expect("mask within dimension")
    }

    /// All `2^m` holonomy classes with their rotations, in increasing mask order.
    pub fn holonomy_elements(&self) -> impl Iterator<Item = (u64, SignVector)> + '_ {
        assert!(self.holonomy_rank() < 64, "holonomy too large to list");
        (0..1u64 << self.holonomy_rank()).map(move |a| (a, self.holonomy(a)))
    }

    /// `γ_a`, the product of the independent generators selected by `a`.
    pub fn representative(&self, a: u64) -> AffineElement {
        let mut out = AffineElement::identity(self.dim).expect("valid dimension");
        for i in bits(a) {
            out = &out * self.independent_generator(i);
        }
        out
    }

    /// Coordinates negated by at least one holonomy element.
    pub fn negated_coordinates(&self) -> u64 {
        (0..self.holonomy_rank()).fold(0, |acc, i| acc | self.independent_generator(i).rotation().neg_mask())
    }

    pub fn is_orientable(&self) -> bool {
        (0..self.holonomy_rank()).all(|i| self.independent_generator(i).rotation().is_orientation_preserving())
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_witness().is_none()
    }

    /// First element of finite order, scanning holonomy classes in increasing
    /// mask order.
    ///
    /// A class `a ≠ 0` with representative `(D, c)` contains an element of
    /// finite order iff `c` is integral on the coordinates fixed by `D`: the
    /// square of `(D, c + v)` is the translation `(I + D)(c + v)`, which
    /// vanishes exactly when `c + v` is zero on those coordinates. Such an
    /// element has order 2 and is returned with those coordinates cleared.
    /// The scan visits all `2^m` classes.
    pub fn torsion_witness(&self) -> Option<AffineElement> {
        let a = self.first_torsion_class()?;
        let rep = self.representative(a);
        let fixed = rep.rotation().fixed_mask();
        let translation = rep
            .translation()
            .iter()
            .enumerate()
            .map(|(k, q)| if fixed >> k & 1 == 1 { Rational::zero() } else { q.clone() })
            .collect();
        Some(AffineElement::new(*rep.rotation(), translation).expect("same dimension"))
    }

    fn first_torsion_class(&self) -> Option<u64> {
        let m = self.holonomy_rank();
        let basis: Vec<&AffineElement> = (0..m).map(|i| self.independent_generator(i)).collect();
        let full = full_mask(self.dim);
        let denominator = common_denominator(basis.iter().flat_map(|g| g.translation()));
        match denominator.to_i64().filter(|&l| l < 1 << 40) {
            Some(l) => {
                // translations scaled by the common denominator, reduced mod it
                let scaled: Vec<Vec<i64>> = basis
                    .iter()
                    .map(|g| {
                        g.translation()
                            .iter()
                            .map(|q| {
                                let v = q * Rational::from_integer(BigInt::from(l));
                                v.to_integer().mod_floor(&BigInt::from(l)).to_i64().expect("below modulus")
                            })
                            .collect()
                    })
                    .collect();
                let mut acc = vec![0i64; self.dim];
                (1..1u64 << m).find(|&a| {
                    acc.iter_mut().for_each(|x| *x = 0);
                    let mut neg = 0u64;
                    for i in bits(a) {
                        for (k, x) in acc.iter_mut().enumerate() {
                            let v = scaled[i][k];
                            let v = if neg >> k & 1 == 1 { (l - v) % l } else { v };
                            *x = (*x + v) % l;
                        }
                        neg ^= basis[i].rotation().neg_mask();
                    }
                    let fixed = !neg & full;
                    bits(fixed).all(|k| acc[k] == 0)
                })
            }
            None => (1..1u64 << m).find(|&a| {
                let rep = self.representative(a);
                let fixed = rep.rotation().fixed_mask();
                bits(fixed).all(|k| mod_one(&rep.translation()[k]).is_zero())
            }),
        }
    }

    /// Odd dimension, orientable, torsion-free, holonomy of order `2^{n-1}`.
    pub fn is_hw(&self) -> bool {
        self.dim % 2 == 1
            && self.holonomy_rank() + 1 == self.dim
            && self.is_orientable()
            && self.is_torsion_free()
    }

    /// Decomposes `g ∈ Γ` as `t · γ_a`; `None` if `g` is not in the group.
    pub fn normal_form(&self, g: &AffineElement) -> Option<(u64, Vec<BigInt>)> {
        if g.dim() != self.dim {
            return None;
        }
        let a = self.class_of(g.rotation())?;
        let rep = self.representative(a);
        let t: Option<Vec<BigInt>> = g
            .translation()
            .iter()
            .zip(rep.translation())
            .map(|(x, y)| {
                let d = x - y;
                d.denom().is_one().then(|| d.to_integer())
            })
            .collect();
        Some((a, t?))
    }

    /// Holonomy class with the given rotation, if the rotation is in the holonomy group.
    pub fn class_of(&self, rotation: &SignVector) -> Option<u64> {
        let mut v = rotation.neg_mask();
        let mut a = 0u64;
        // the basis is small; reduce against each independent rotation by pivot
        let mut rows: Vec<(u64, u64)> = Vec::with_capacity(self.holonomy_rank());
        for i in 0..self.holonomy_rank() {
            let mut r = self.independent_generator(i).rotation().neg_mask();
            let mut c = 1u64 << i;
            for &(row, combo) in &rows {
                if r >> row.trailing_zeros() & 1 == 1 {
                    r ^= row;
                    c ^= combo;
                }
            }
            for (row, combo) in rows.iter_mut() {
                if *row >> r.trailing_zeros() & 1 == 1 {
                    *row ^= r;
                    *combo ^= c;
                }
            }
            rows.push((r, c));
        }
        for &(row, combo) in &rows {
            if v >> row.trailing_zeros() & 1 == 1 {
                v ^= row;
                a ^= combo;
            }
        }
        (v == 0).then_some(a)
    }
}

/// Set bit positions of `mask` in increasing order.
pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(k)
        }
    })
}
