use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::affine::AffineElement;
use super::group::BieberbachGroup;
use super::CrystalError;

/// Polycyclic presentation over the independent basis `β̂₁ … β̂ₘ` and the
/// lattice basis `t₁ … tₙ`:
///
/// - `β̂ᵢ² = t^{sq(i)}` with `sq(i) = (I + Bᵢ)·bᵢ`;
/// - `β̂ᵢβ̂ⱼβ̂ᵢ⁻¹β̂ⱼ⁻¹ = t^{comm(i,j)}` with `comm(i,j) = (I − Bⱼ)·bᵢ − (I − Bᵢ)·bⱼ`;
/// - `β̂ᵢ t_k β̂ᵢ⁻¹ = t_k^{±1}` according to the sign of `Bᵢ` at `k`;
/// - the `t_k` commute.
///
/// Indices in this API are 0-based; relation names print 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    dim: usize,
    action: Vec<crate::signs::SignVector>,
    square: Vec<Vec<BigInt>>,
    commutator: Vec<Vec<BigInt>>,
}

fn integral(relation: RelationKind, g: &AffineElement) -> Result<Vec<BigInt>, CrystalError> {
    debug_assert!(g.is_translation());
    g.integral_translation()
        .ok_or_else(|| CrystalError::NonIntegralRelation {
            relation: relation.to_string(),
            vector: g.translation().to_vec(),
        })
}

impl Presentation {
    pub(crate) fn from_basis(dim: usize, basis: &[AffineElement]) -> Result<Self, CrystalError> {
        let m = basis.len();
        let mut square = Vec::with_capacity(m);
        for (i, b) in basis.iter().enumerate() {
            square.push(integral(RelationKind::Square(i), &(b * b))?);
        }
        let mut commutator = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                let c = basis[i].commutator(&basis[j])?;
                commutator.push(integral(RelationKind::Commutator(i, j), &c)?);
            }
        }
        Ok(Self {
            dim,
            action: basis.iter().map(|b| *b.rotation()).collect(),
            square,
            commutator,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of independent generators.
    pub fn rank(&self) -> usize {
        self.action.len()
    }

    pub fn t_sq(&self, i: usize) -> &[BigInt] {
        &self.square[i]
    }

    /// Translation of `β̂ᵢβ̂ⱼβ̂ᵢ⁻¹β̂ⱼ⁻¹` for `i < j`.
    pub fn t_comm(&self, i: usize, j: usize) -> &[BigInt] {
        assert!(i < j && j < self.rank(), "commutator index ({i},{j}) must satisfy i < j < {}", self.rank());
        let m = self.rank();
        &self.commutator[i * m - i * (i + 1) / 2 + (j - i - 1)]
    }

    /// Conjugation action of `β̂ᵢ` on the lattice.
    pub fn action(&self, i: usize) -> &crate::signs::SignVector {
        &self.action[i]
    }

    /// Pairs `i < j` in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.rank();
        (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
    }

    /// Every defining relation, grouped as squares, commutators,
    /// conjugations, then lattice commutations.
    pub fn relations(&self) -> Vec<Relation> {
        let m = self.rank();
        let n = self.dim;
        let lattice_word = |v: &[BigInt]| -> Vec<Letter> {
            v.iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(coord, e)| Letter::Lattice { coord, exp: e.clone() })
                .collect()
        };
        let gen = |index, exp| Letter::Generator { index, exp };
        let lat = |coord, exp: i64| Letter::Lattice {
            coord,
            exp: BigInt::from(exp),
        };
        let mut out = Vec::new();
        for i in 0..m {
            out.push(Relation {
                kind: RelationKind::Square(i),
                lhs: vec![gen(i, 2)],
                rhs: lattice_word(self.t_sq(i)),
            });
        }
        for (i, j) in self.pairs() {
            out.push(Relation {
                kind: RelationKind::Commutator(i, j),
                lhs: vec![gen(i, 1), gen(j, 1), gen(i, -1), gen(j, -1)],
                rhs: lattice_word(self.t_comm(i, j)),
            });
        }
        for i in 0..m {
            for k in 0..n {
                out.push(Relation {
                    kind: RelationKind::Conjugation(i, k),
                    lhs: vec![gen(i, 1), lat(k, 1), gen(i, -1)],
                    rhs: vec![lat(k, self.action[i].entry(k))],
                });
            }
        }
        for k in 0..n {
            for l in k + 1..n {
                out.push(Relation {
                    kind: RelationKind::LatticeCommute(k, l),
                    lhs: vec![lat(k, 1), lat(l, 1)],
                    rhs: vec![lat(l, 1), lat(k, 1)],
                });
            }
        }
        out
    }
}

pub fn presentation(g: &BieberbachGroup) -> &Presentation {
    g.presentation()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Square(usize),
    Commutator(usize, usize),
    /// generator, lattice coordinate
    Conjugation(usize, usize),
    LatticeCommute(usize, usize),
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelationKind::Square(i) => write!(f, "sq({})", i + 1),
            RelationKind::Commutator(i, j) => write!(f, "comm({},{})", i + 1, j + 1),
            RelationKind::Conjugation(i, k) => write!(f, "conj({},{})", i + 1, k + 1),
            RelationKind::LatticeCommute(k, l) => write!(f, "lat({},{})", k + 1, l + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    Generator { index: usize, exp: i64 },
    Lattice { coord: usize, exp: BigInt },
}

/// `lhs = rhs` as words in the presentation generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

/// A group in which presentation words can be evaluated, given images of the
/// independent generators and lattice basis vectors.
pub trait RelationGroup {
    type Element: Clone + PartialEq;

    fn identity(&self) -> Self::Element;
    fn generator(&self, index: usize) -> Self::Element;
    fn lattice(&self, coord: usize) -> Self::Element;
    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inverse(&self, a: &Self::Element) -> Self::Element;

    fn power(&self, a: &Self::Element, exp: &BigInt) -> Self::Element {
        let mut base = if exp.is_negative() { self.inverse(a) } else { a.clone() };
        let mut e = exp.abs();
        let mut out = self.identity();
        while !e.is_zero() {
            if e.is_odd() {
                out = self.multiply(&out, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        out
    }

    fn evaluate(&self, word: &[Letter]) -> Self::Element {
        word.iter().fold(self.identity(), |acc, letter| {
            let x = match letter {
                Letter::Generator { index, exp } => self.power(&self.generator(*index), &BigInt::from(*exp)),
                Letter::Lattice { coord, exp } => self.power(&self.lattice(*coord), exp),
            };
            self.multiply(&acc, &x)
        })
    }

    fn holds(&self, relation: &Relation) -> bool {
        self.evaluate(&relation.lhs) == self.evaluate(&relation.rhs)
    }
}

/// The group itself, as affine maps.
#[cfg(test)]
pub(crate) struct AffineModel<'a>(pub &'a BieberbachGroup);

#[cfg(test)]
impl RelationGroup for AffineModel<'_> {
    type Element = AffineElement;

    fn identity(&self) -> AffineElement {
        AffineElement::identity(self.0.dim()).expect("valid dimension")
    }

    fn generator(&self, index: usize) -> AffineElement {
        self.0.independent_generator(index).clone()
    }

    fn lattice(&self, coord: usize) -> AffineElement {
        AffineElement::basis_translation(self.0.dim(), coord).expect("valid dimension")
    }

    fn multiply(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        a * b
    }

    fn inverse(&self, a: &AffineElement) -> AffineElement {
        a.inverse()
    }
}

/// Checks `(βᵢβᵢ₊₂)² = tᵢ₊₁ tᵢ₊₃⁻¹` for every `i` (indices mod `n`) by direct
/// affine multiplication. Expects the cyclic generator list `β₁ … βₙ`;
/// returns `false` for any other shape.
pub fn derived_relation_check(g: &BieberbachGroup) -> bool {
    let n = g.dim();
    let gens = g.generators();
    if n < 3 || gens.len() != n {
        return false;
    }
    (0..n).all(|i| {
        let prod = &gens[i] * &gens[(i + 2) % n];
        let sq = &prod * &prod;
        let mut expected = vec![BigInt::zero(); n];
        expected[(i + 1) % n] += BigInt::one();
        expected[(i + 3) % n] -= BigInt::one();
        sq.is_translation() && sq.integral_translation() == Some(expected)
    })
}
