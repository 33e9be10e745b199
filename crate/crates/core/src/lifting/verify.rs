use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::oracle::{build_oracle_spin_system, build_oracle_spinc_system};
use super::systems::{build_spin_system, build_spinc_system, generator_lifts, require_orientable};
use super::{Answer, LiftingError, Obstruction, RelationName, StructureKind, StructureVerdict, Witness};
use crate::clifford::{lambda, PinElement, SpinCElement};
use crate::crystal::{BieberbachGroup, RelationGroup};
use crate::linalg::rational::{half, is_integral, mod_one, Rational};
use crate::linalg::{F2Vec, SparseRow};
use crate::signs::SignVector;

struct PinImage {
    generators: Vec<PinElement>,
    lattice: Vec<PinElement>,
    dim: usize,
}

impl RelationGroup for PinImage {
    type Element = PinElement;

    fn identity(&self) -> PinElement {
        PinElement::identity(self.dim).expect("valid dimension")
    }

    fn generator(&self, index: usize) -> PinElement {
        self.generators[index]
    }

    fn lattice(&self, coord: usize) -> PinElement {
        self.lattice[coord]
    }

    fn multiply(&self, a: &PinElement, b: &PinElement) -> PinElement {
        *a * *b
    }

    fn inverse(&self, a: &PinElement) -> PinElement {
        a.inverse()
    }

    // every element has order dividing 4
    fn power(&self, a: &PinElement, exp: &BigInt) -> PinElement {
        a.pow(exp)
    }
}

struct SpinCImage {
    generators: Vec<SpinCElement>,
    lattice: Vec<SpinCElement>,
    dim: usize,
}

impl RelationGroup for SpinCImage {
    type Element = SpinCElement;

    fn identity(&self) -> SpinCElement {
        SpinCElement::identity(self.dim).expect("valid dimension")
    }

    fn generator(&self, index: usize) -> SpinCElement {
        self.generators[index].clone()
    }

    fn lattice(&self, coord: usize) -> SpinCElement {
        self.lattice[coord].clone()
    }

    fn multiply(&self, a: &SpinCElement, b: &SpinCElement) -> SpinCElement {
        a.try_mul(b).expect("equal dimensions")
    }

    fn inverse(&self, a: &SpinCElement) -> SpinCElement {
        a.inverse()
    }

    fn power(&self, a: &SpinCElement, exp: &BigInt) -> SpinCElement {
        a.pow(exp)
    }
}

fn check_len(what: &str, found: usize, expected: usize) -> Result<(), LiftingError> {
    if found == expected {
        Ok(())
    } else {
        Err(LiftingError::MalformedWitness(format!(
            "{what} has {found} entries, expected {expected}"
        )))
    }
}

/// Builds `ε` from the witness and checks that it is a homomorphism on every
/// presentation relation and that `λ∘ε` (or `λ̄∘ε`) is the holonomy.
pub fn verify_witness(g: &BieberbachGroup, witness: &Witness) -> Result<bool, LiftingError> {
    require_orientable(g)?;
    let (m, n) = (g.holonomy_rank(), g.dim());
    let lifts = generator_lifts(g);
    let relations = g.presentation().relations();
    let rotations: Vec<SignVector> = (0..m).map(|i| *g.independent_generator(i).rotation()).collect();
    let identity = SignVector::identity(n).expect("valid dimension");
    match witness {
        Witness::Spin { sigma, chi } => {
            check_len("sigma", sigma.len(), m)?;
            check_len("chi", chi.len(), n)?;
            let image = PinImage {
                generators: lifts
                    .iter()
                    .zip(sigma)
                    .map(|(c, &s)| if s { c.negated() } else { *c })
                    .collect(),
                lattice: chi
                    .iter()
                    .map(|&s| PinElement::new(n, s, 0).expect("valid dimension"))
                    .collect(),
                dim: n,
            };
            let covers = image
                .generators
                .iter()
                .zip(&rotations)
                .all(|(e, r)| lambda(e).ok() == Some(*r))
                && image.lattice.iter().all(|e| lambda(e).ok() == Some(identity));
            Ok(covers && relations.iter().all(|r| image.holds(r)))
        }
        Witness::SpinC { z, zeta } => {
            check_len("z", z.len(), m)?;
            check_len("zeta", zeta.len(), n)?;
            let image = SpinCImage {
                generators: lifts
                    .iter()
                    .zip(z)
                    .map(|(c, q)| SpinCElement::new(*c, q.clone()))
                    .collect(),
                lattice: zeta
                    .iter()
                    .map(|q| SpinCElement::from_circle(n, q.clone()).expect("valid dimension"))
                    .collect(),
                dim: n,
            };
            let covers = image
                .generators
                .iter()
                .zip(&rotations)
                .all(|(e, r)| e.lambda_bar().ok() == Some(*r))
                && image.lattice.iter().all(|e| e.lambda_bar().ok() == Some(identity));
            Ok(covers && relations.iter().all(|r| image.holds(r)))
        }
    }
}

enum Rows {
    Binary(Vec<F2Vec>, F2Vec),
    Circle(usize, Vec<SparseRow>, Vec<Rational>),
}

/// Replays an obstruction against a freshly built system: the generator
/// system, or the pairwise system when the certificate names `pair(f,g)` rows.
/// Unknown or duplicate names make the certificate invalid.
pub fn verify_obstruction(
    g: &BieberbachGroup,
    kind: StructureKind,
    obstruction: &Obstruction,
) -> Result<bool, LiftingError> {
    let pairwise = obstruction
        .terms
        .iter()
        .any(|(name, _)| matches!(name, RelationName::Pair(..)));
    let (names, rows) = match (kind, pairwise) {
        (StructureKind::Spin, false) => {
            let s = build_spin_system(g)?;
            let rows = (0..s.matrix.rows()).map(|r| s.matrix.row(r).clone()).collect();
            (s.names, Rows::Binary(rows, s.rhs))
        }
        (StructureKind::Spin, true) => {
            let s = build_oracle_spin_system(g, &|_| false)?;
            let rows = (0..s.matrix.rows()).map(|r| s.matrix.row(r).clone()).collect();
            (s.names, Rows::Binary(rows, s.rhs))
        }
        (StructureKind::SpinC, false) => {
            let s = build_spinc_system(g)?;
            let cols = s.cols();
            (s.names, Rows::Circle(cols, s.rows, s.rhs))
        }
        (StructureKind::SpinC, true) => {
            let s = build_oracle_spinc_system(g, &|_| false)?;
            let cols = s.cols();
            (s.names, Rows::Circle(cols, s.rows, s.rhs))
        }
    };
    let index: HashMap<RelationName, usize> = names.iter().enumerate().map(|(r, n)| (*n, r)).collect();
    let mut used = std::collections::HashSet::new();
    let mut selected = Vec::with_capacity(obstruction.terms.len());
    for (name, coeff) in &obstruction.terms {
        match index.get(name) {
            Some(&r) if used.insert(r) => selected.push((r, coeff)),
            _ => return Ok(false),
        }
    }
    Ok(match rows {
        Rows::Binary(rows, rhs) => {
            let cols = rows.first().map_or(0, F2Vec::len);
            let mut lhs = F2Vec::zeros(cols);
            let mut parity = false;
            for (r, coeff) in selected {
                if coeff.is_odd() {
                    lhs.xor_assign(&rows[r]);
                    parity ^= rhs.get(r);
                }
            }
            lhs.is_zero() && parity && obstruction.pairing == half()
        }
        Rows::Circle(cols, rows, rhs) => {
            let mut lhs = vec![BigInt::zero(); cols];
            let mut pairing = Rational::zero();
            for (r, coeff) in selected {
                for (j, v) in &rows[r] {
                    lhs[*j] += coeff * v;
                }
                pairing += Rational::from_integer(coeff.clone()) * &rhs[r];
            }
            lhs.iter().all(Zero::is_zero) && !is_integral(&pairing) && mod_one(&pairing) == obstruction.pairing
        }
    })
}

/// Checks whichever of witness and obstruction the verdict carries, and that
/// the answer is consistent with it.
pub fn verify_verdict(g: &BieberbachGroup, verdict: &StructureVerdict) -> Result<bool, LiftingError> {
    match (verdict.answer, &verdict.witness, &verdict.obstruction) {
        (Answer::Yes, Some(w), None) => {
            let kind_matches = matches!(
                (verdict.kind, w),
                (StructureKind::Spin, Witness::Spin { .. }) | (StructureKind::SpinC, Witness::SpinC { .. })
            );
            Ok(kind_matches && verify_witness(g, w)?)
        }
        (Answer::No, None, Some(o)) => {
            let allowed = verdict.kind == StructureKind::Spin || super::systems::unsolvable_spinc_answer(g) == Answer::No;
            Ok(allowed && verify_obstruction(g, verdict.kind, o)?)
        }
        (Answer::NoLiftInconclusive, None, Some(o)) => {
            Ok(verdict.kind == StructureKind::SpinC && verify_obstruction(g, verdict.kind, o)?)
        }
        _ => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_hw, hw_5_1, torus};
    use crate::crystal::{build_group, AffineElement};
    use crate::lifting::{decide_spin, decide_spinc};
    use crate::linalg::rational::rat;

    #[test]
    fn torus_witnesses_verify() {
        let t = torus(3).unwrap();
        for v in [decide_spin(&t).unwrap(), decide_spinc(&t).unwrap()] {
            assert!(verify_verdict(&t, &v).unwrap());
        }
    }

    #[test]
    fn perturbed_angle_fails() {
        // a rank-one group whose lifting system is solvable
        let g = build_group(
            3,
            vec![AffineElement::new(SignVector::from_signs(&[1, -1, -1]).unwrap(), vec![rat(1, 2), rat(0, 1), rat(0, 1)]).unwrap()],
        )
        .unwrap();
        let v = decide_spinc(&g).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let Some(Witness::SpinC { z, mut zeta }) = v.witness else { panic!() };
        assert!(verify_witness(&g, &Witness::SpinC { z: z.clone(), zeta: zeta.clone() }).unwrap());
        zeta[1] = mod_one(&(&zeta[1] + rat(1, 3)));
        assert!(!verify_witness(&g, &Witness::SpinC { z, zeta }).unwrap());
    }

    #[test]
    fn malformed_witness() {
        let g = cyclic_hw(5).unwrap();
        let w = Witness::Spin {
            sigma: vec![false; 3],
            chi: vec![false; 5],
        };
        assert!(matches!(verify_witness(&g, &w), Err(LiftingError::MalformedWitness(_))));
    }

    #[test]
    fn obstructions_replay() {
        for g in [hw_5_1(), cyclic_hw(5).unwrap(), cyclic_hw(9).unwrap()] {
            for v in [decide_spin(&g).unwrap(), decide_spinc(&g).unwrap()] {
                assert!(verify_verdict(&g, &v).unwrap());
                let mut o = v.obstruction.clone().unwrap();
                o.terms.pop();
                assert!(!verify_obstruction(&g, v.kind, &o).unwrap());
            }
        }
    }

    #[test]
    fn forged_verdicts_are_rejected() {
        let g = cyclic_hw(5).unwrap();
        let mut v = decide_spinc(&g).unwrap();
        v.answer = Answer::Yes;
        assert!(!verify_verdict(&g, &v).unwrap());
        let t = torus(3).unwrap();
        let mut v = decide_spin(&t).unwrap();
        v.kind = StructureKind::SpinC;
        assert!(!verify_verdict(&t, &v).unwrap());
    }
}
