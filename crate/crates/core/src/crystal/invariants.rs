use num_bigint::BigInt;
use num_traits::One;

use super::group::{bits, BieberbachGroup};
use super::presentation::RelationGroup;
use super::CrystalError;
use crate::linalg::{smith_normal_form, IntMatrix, SparseRow};

/// `b_p`: the number of `p`-subsets `T` of coordinates on which every
/// holonomy generator has an even number of `-1` entries, i.e. the dimension
/// of the holonomy invariants of `Λᵖ ℝⁿ`.
pub fn betti(g: &BieberbachGroup, p: usize) -> Result<u64, CrystalError> {
    let n = g.dim();
    if p > n {
        return Err(CrystalError::DegreeOutOfRange { degree: p, dim: n });
    }
    let negs: Vec<u64> = (0..g.holonomy_rank())
        .map(|i| g.independent_generator(i).rotation().neg_mask())
        .collect();
    let invariant = |t: u64| negs.iter().all(|f| (f & t).count_ones().is_multiple_of(2));
    if p == 0 {
        return Ok(1);
    }
    // Gosper's hack: all n-bit masks with p ones, in increasing order
    let mut t: u64 = (1 << p) - 1;
    let mut count = 0;
    while t >> n == 0 {
        if invariant(t) {
            count += 1;
        }
        let c = t & t.wrapping_neg();
        let r = t + c;
        t = (((r ^ t) >> 2) / c) | r;
    }
    Ok(count)
}

/// `(b_0, …, b_n)`
pub fn betti_profile(g: &BieberbachGroup) -> Vec<u64> {
    (0..=g.dim()).map(|p| betti(g, p).expect("degree in range")).collect()
}

/// `H₁(Γ; ℤ) ≅ ℤ^free_rank ⊕ ⨁ ℤ/dᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Group {
    /// Elementary divisors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

/// Smith normal form of the abelianized presentation. Columns are
/// `β̂₁ … β̂ₘ, t₁ … tₙ`; rows are the squares `2β̂ᵢ − sq(i)·t`, then the
/// commutators `comm(i,j)·t`, then `2t_k` for every coordinate negated by
/// some holonomy element.
pub fn h1_elementary_divisors(g: &BieberbachGroup) -> H1Group {
    let p = g.presentation();
    let (m, n) = (p.rank(), p.dim());
    let lattice = |v: &[BigInt], sign: i64| -> SparseRow {
        v.iter()
            .enumerate()
            .filter(|(_, e)| !num_traits::Zero::is_zero(*e))
            .map(|(k, e)| (m + k, e * sign))
            .collect()
    };
    let mut rows: Vec<SparseRow> = Vec::new();
    for i in 0..m {
        let mut row = vec![(i, BigInt::from(2))];
        row.extend(lattice(p.t_sq(i), -1));
        rows.push(row);
    }
    for (i, j) in p.pairs() {
        rows.push(lattice(p.t_comm(i, j), -1));
    }
    for k in bits(g.negated_coordinates()) {
        rows.push(vec![(m + k, BigInt::from(2))]);
    }
    let matrix = IntMatrix::from_sparse(m + n, &rows).expect("columns in range");
    let snf = smith_normal_form(&matrix);
    let divisors = snf.elementary_divisors();
    H1Group {
        free_rank: m + n - divisors.len(),
        torsion: divisors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}

/// The character `Γ → {±1}` reading the `k`-th diagonal entry of the rotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolonomyCharacter {
    pub coordinate: usize,
    /// Values on the input generators.
    pub generator_values: Vec<i64>,
    /// Values on the lattice basis, always `+1`.
    pub lattice_values: Vec<i64>,
    /// Whether every presentation relation and every dependent generator's
    /// normal form is respected.
    pub is_homomorphism: bool,
}

struct SignTarget<'a> {
    generators: &'a [i64],
    lattice: &'a [i64],
}

impl RelationGroup for SignTarget<'_> {
    type Element = i64;

    fn identity(&self) -> i64 {
        1
    }

    fn generator(&self, index: usize) -> i64 {
        self.generators[index]
    }

    fn lattice(&self, coord: usize) -> i64 {
        self.lattice[coord]
    }

    fn multiply(&self, a: &i64, b: &i64) -> i64 {
        a * b
    }

    fn inverse(&self, a: &i64) -> i64 {
        *a
    }
}

/// The `n` line-bundle characters splitting the flat tangent bundle, each
/// checked against the presentation.
pub fn holonomy_characters(g: &BieberbachGroup) -> Vec<HolonomyCharacter> {
    let n = g.dim();
    let relations = g.presentation().relations();
    (0..n)
        .map(|k| {
            let generator_values: Vec<i64> = g.generators().iter().map(|x| x.rotation().entry(k)).collect();
            let independent: Vec<i64> = g.independent_indices().iter().map(|&j| generator_values[j]).collect();
            let lattice_values = vec![1; n];
            let target = SignTarget {
                generators: &independent,
                lattice: &lattice_values,
            };
            let relations_hold = relations.iter().all(|r| target.holds(r));
            let normal_forms_hold = (0..generator_values.len()).all(|j| {
                let class = g.generator_class(j);
                bits(class).map(|i| independent[i]).product::<i64>() == generator_values[j]
            });
            HolonomyCharacter {
                coordinate: k,
                generator_values,
                lattice_values,
                is_homomorphism: relations_hold && normal_forms_hold,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_hw, hw_5_1, torus};

    fn divisors(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn hw_betti_profile() {
        for g in [cyclic_hw(5).unwrap(), hw_5_1()] {
            assert_eq!(betti_profile(&g), vec![1, 0, 0, 0, 0, 1]);
        }
    }

    #[test]
    fn torus_betti_is_binomial() {
        let g = torus(6).unwrap();
        assert_eq!(betti_profile(&g), vec![1, 6, 15, 20, 15, 6, 1]);
        assert!(betti(&g, 7).is_err());
    }

    #[test]
    fn h1_examples() {
        assert_eq!(
            h1_elementary_divisors(&cyclic_hw(5).unwrap()),
            H1Group {
                torsion: divisors(&[2, 2, 2, 2]),
                free_rank: 0
            }
        );
        assert_eq!(
            h1_elementary_divisors(&torus(4).unwrap()),
            H1Group {
                torsion: vec![],
                free_rank: 4
            }
        );
        assert_eq!(
            h1_elementary_divisors(&cyclic_hw(3).unwrap()),
            H1Group {
                torsion: divisors(&[4, 4]),
                free_rank: 0
            }
        );
    }

    #[test]
    fn characters_on_cyclic_five() {
        let g = cyclic_hw(5).unwrap();
        let chars = holonomy_characters(&g);
        assert_eq!(chars.len(), 5);
        assert_eq!(chars[0].generator_values[0], 1);
        assert_eq!(chars[0].generator_values[1], -1);
        assert!(chars.iter().all(|c| c.is_homomorphism && c.lattice_values.iter().all(|&v| v == 1)));
    }

    #[test]
    fn torus_characters_are_trivial() {
        let chars = holonomy_characters(&torus(3).unwrap());
        assert!(chars.iter().all(|c| c.generator_values.is_empty() && c.is_homomorphism));
        assert!(holonomy_characters(&hw_5_1()).iter().all(|c| c.is_homomorphism));
    }
}
