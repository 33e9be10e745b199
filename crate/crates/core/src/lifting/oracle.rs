//! The lifting criterion checked on the whole group law rather than on a
//! presentation: one unknown per holonomy element `f`, and one equation per
//! ordered pair `(f, g)` from `γ_f γ_g = t(f,g) · γ_{fg}`. With lifts
//! `c(f)` of the rotations and `c(f)c(g) = s(f,g) · c(fg)`:
//!
//! - Spin: `σ_f + σ_g + σ_{fg} + χ·t(f,g) = [s(f,g) = −1]` over F₂;
//! - Spin^c: `z_f + z_g − z_{fg} − ζ·t(f,g) = angle(s(f,g))`, plus `2ζ_k = 0`
//!   for every negated coordinate `k`.
//!
//! The system has `4^m` rows, hence the rank limit.

use num_bigint::BigInt;
use num_traits::Zero;

use super::systems::{require_orientable, spin_verdict, spinc_solution, unsolvable_spinc_answer, LiftingSystem, SpinSystem};
use super::{Answer, LiftingError, RelationName, StructureKind, StructureVerdict, Witness};
use crate::clifford::{lift_diagonal, PinElement};
use crate::crystal::BieberbachGroup;
use crate::linalg::rational::{half, mod_one, sign_angle, Rational};
use crate::linalg::{F2Matrix, F2Vec, SparseRow};

/// Holonomy of order at most `2^12`.
pub const MAX_ORACLE_RANK: usize = 12;

struct PairData {
    f: u64,
    g: u64,
    translation: Vec<BigInt>,
    negative: bool,
}

fn pair_data(group: &BieberbachGroup, flip: &dyn Fn(u64) -> bool) -> Result<Vec<PairData>, LiftingError> {
    require_orientable(group)?;
    let m = group.holonomy_rank();
    if m > MAX_ORACLE_RANK {
        return Err(LiftingError::HolonomyTooLarge { rank: m });
    }
    let size = 1u64 << m;
    let reps: Vec<_> = (0..size).map(|a| group.representative(a)).collect();
    let lifts: Vec<PinElement> = reps
        .iter()
        .enumerate()
        .map(|(a, r)| {
            let c = lift_diagonal(r.rotation());
            if flip(a as u64) {
                c.negated()
            } else {
                c
            }
        })
        .collect();
    // representatives scaled to integers by a common denominator
    let denom = crate::linalg::rational::common_denominator(reps.iter().flat_map(|r| r.translation()));
    let scaled: Vec<Vec<BigInt>> = reps
        .iter()
        .map(|r| {
            r.translation()
                .iter()
                .map(|q| (q * Rational::from_integer(denom.clone())).to_integer())
                .collect()
        })
        .collect();
    let n = group.dim();
    let mut out = Vec::with_capacity((size * size) as usize);
    for f in 0..size {
        let rf = reps[f as usize].rotation();
        for g in 0..size {
            let fg = f ^ g;
            let (cf, cg, cfg) = (&scaled[f as usize], &scaled[g as usize], &scaled[fg as usize]);
            let translation: Vec<BigInt> = (0..n)
                .map(|k| {
                    let moved = if rf.is_negated(k) { -&cg[k] } else { cg[k].clone() };
                    let total = &cf[k] + moved - &cfg[k];
                    debug_assert!((&total % &denom).is_zero());
                    total / &denom
                })
                .collect();
            let product = lifts[f as usize] * lifts[g as usize];
            debug_assert_eq!(product.subset(), lifts[fg as usize].subset());
            out.push(PairData {
                f,
                g,
                translation,
                negative: product.is_negative() != lifts[fg as usize].is_negative(),
            });
        }
    }
    Ok(out)
}

/// The pairwise Spin system; columns are `σ_f` for every class `f`, then `χ`.
/// `flip(f)` negates the lift of class `f`.
pub fn build_oracle_spin_system(group: &BieberbachGroup, flip: &dyn Fn(u64) -> bool) -> Result<SpinSystem, LiftingError> {
    let data = pair_data(group, flip)?;
    let size = 1usize << group.holonomy_rank();
    let cols = size + group.dim();
    let mut matrix = F2Matrix::new(cols);
    let mut rhs = Vec::with_capacity(data.len());
    let mut names = Vec::with_capacity(data.len());
    for d in data {
        let mut row = F2Vec::zeros(cols);
        row.flip(d.f as usize);
        row.flip(d.g as usize);
        row.flip((d.f ^ d.g) as usize);
        for (k, t) in d.translation.iter().enumerate() {
            if t.bit(0) {
                row.flip(size + k);
            }
        }
        matrix.push_row(row)?;
        rhs.push(d.negative);
        names.push(RelationName::Pair(d.f, d.g));
    }
    Ok(SpinSystem {
        matrix,
        rhs: F2Vec::from_bools(&rhs),
        names,
    })
}

/// The pairwise Spin^c system; columns are `z_f` for every class `f`, then `ζ`.
pub fn build_oracle_spinc_system(
    group: &BieberbachGroup,
    flip: &dyn Fn(u64) -> bool,
) -> Result<LiftingSystem, LiftingError> {
    let data = pair_data(group, flip)?;
    let size = 1usize << group.holonomy_rank();
    let n = group.dim();
    let mut rows = Vec::with_capacity(data.len() + n);
    let mut rhs = Vec::with_capacity(data.len() + n);
    let mut names = Vec::with_capacity(data.len() + n);
    for d in data {
        let mut coeffs = std::collections::BTreeMap::<usize, BigInt>::new();
        *coeffs.entry(d.f as usize).or_default() += 1;
        *coeffs.entry(d.g as usize).or_default() += 1;
        *coeffs.entry((d.f ^ d.g) as usize).or_default() -= 1;
        for (k, t) in d.translation.iter().enumerate() {
            if !t.is_zero() {
                *coeffs.entry(size + k).or_default() -= t;
            }
        }
        let row: SparseRow = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        rows.push(row);
        rhs.push(sign_angle(d.negative));
        names.push(RelationName::Pair(d.f, d.g));
    }
    let two_torsion = group.negated_coordinates();
    for k in 0..n {
        if two_torsion >> k & 1 == 1 {
            rows.push(vec![(size + k, BigInt::from(2))]);
            rhs.push(Rational::zero());
            names.push(RelationName::Torsion(k));
        }
    }
    Ok(LiftingSystem {
        generator_vars: size,
        lattice_vars: n,
        two_torsion,
        rows,
        rhs,
        names,
    })
}

pub fn cocycle_oracle_decide(group: &BieberbachGroup, kind: StructureKind) -> Result<StructureVerdict, LiftingError> {
    cocycle_oracle_decide_with_flips(group, kind, &|_| false)
}

/// The oracle with the lifts of the classes selected by `flip` negated.
/// Witnesses are translated back to the canonical lifts on the independent
/// generators, so they can be checked with
/// [`verify_witness`](super::verify_witness).
pub fn cocycle_oracle_decide_with_flips(
    group: &BieberbachGroup,
    kind: StructureKind,
    flip: &dyn Fn(u64) -> bool,
) -> Result<StructureVerdict, LiftingError> {
    let m = group.holonomy_rank();
    let size = 1usize << m.min(MAX_ORACLE_RANK);
    match kind {
        StructureKind::Spin => {
            let system = build_oracle_spin_system(group, flip)?;
            Ok(match spin_verdict(&system.matrix, &system.rhs, &system.names)? {
                Ok(x) => {
                    let sigma = (0..m).map(|i| x[1 << i] ^ flip(1 << i)).collect();
                    StructureVerdict {
                        kind,
                        answer: Answer::Yes,
                        witness: Some(Witness::Spin {
                            sigma,
                            chi: x[size..].to_vec(),
                        }),
                        obstruction: None,
                    }
                }
                Err(obstruction) => StructureVerdict {
                    kind,
                    answer: Answer::No,
                    witness: None,
                    obstruction: Some(obstruction),
                },
            })
        }
        StructureKind::SpinC => {
            let system = build_oracle_spinc_system(group, flip)?;
            Ok(match spinc_solution(&system)? {
                Ok(x) => {
                    let z = (0..m)
                        .map(|i| {
                            let q = &x[1 << i];
                            if flip(1 << i) {
                                mod_one(&(q + half()))
                            } else {
                                q.clone()
                            }
                        })
                        .collect();
                    StructureVerdict {
                        kind,
                        answer: Answer::Yes,
                        witness: Some(Witness::SpinC {
                            z,
                            zeta: x[size..].to_vec(),
                        }),
                        obstruction: None,
                    }
                }
                Err(obstruction) => StructureVerdict {
                    kind,
                    answer: unsolvable_spinc_answer(group),
                    witness: None,
                    obstruction: Some(obstruction),
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_hw, hw_5_1, torus};
    use crate::lifting::{decide, verify_verdict};

    #[test]
    fn torus_oracle_says_yes() {
        let t = torus(3).unwrap();
        for kind in [StructureKind::Spin, StructureKind::SpinC] {
            let v = cocycle_oracle_decide(&t, kind).unwrap();
            assert_eq!(v.answer, Answer::Yes);
            assert!(verify_verdict(&t, &v).unwrap());
        }
    }

    #[test]
    fn oracle_agrees_on_named_groups() {
        for g in [cyclic_hw(3).unwrap(), cyclic_hw(5).unwrap(), hw_5_1()] {
            for kind in [StructureKind::Spin, StructureKind::SpinC] {
                let v = cocycle_oracle_decide(&g, kind).unwrap();
                assert_eq!(v.answer, decide(&g, kind).unwrap().answer);
                assert!(verify_verdict(&g, &v).unwrap());
            }
        }
    }

    #[test]
    fn flipped_lifts_do_not_change_verdicts() {
        let g = hw_5_1();
        for mask in [0b1u64, 0b101, 0b1111_0000_1010] {
            let flip = |f: u64| mask >> f & 1 == 1;
            for kind in [StructureKind::Spin, StructureKind::SpinC] {
                let v = cocycle_oracle_decide_with_flips(&g, kind, &flip).unwrap();
                assert_eq!(v.answer, cocycle_oracle_decide(&g, kind).unwrap().answer);
                assert!(verify_verdict(&g, &v).unwrap());
            }
        }
    }

    #[test]
    fn rank_guard() {
        let g = cyclic_hw(15).unwrap();
        assert_eq!(
            cocycle_oracle_decide(&g, StructureKind::Spin).unwrap_err(),
            LiftingError::HolonomyTooLarge { rank: 14 }
        );
    }
}
