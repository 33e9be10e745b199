use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Answer, LiftingError, Obstruction, RelationName, StructureKind, StructureVerdict, Witness};
use crate::clifford::{lift_diagonal, PinElement};
use crate::crystal::{betti, BieberbachGroup};
use crate::linalg::rational::{sign_angle, Rational};
use crate::linalg::{f2_solve, torus_solve_sparse, F2Matrix, F2Solution, F2Vec, SparseRow, TorusSolution};

/// The Spin system over F₂ in the lattice signs `χ₁ … χₙ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSystem {
    pub matrix: F2Matrix,
    pub rhs: F2Vec,
    pub names: Vec<RelationName>,
}

/// A linear system over ℝ/ℤ. Columns are the generator angles followed by the
/// lattice angles `ζ₁ … ζₙ`; `two_torsion` marks lattice variables
/// constrained by a `tor(k)` row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftingSystem {
    pub generator_vars: usize,
    pub lattice_vars: usize,
    pub two_torsion: u64,
    pub rows: Vec<SparseRow>,
    pub rhs: Vec<Rational>,
    pub names: Vec<RelationName>,
}

impl LiftingSystem {
    pub fn cols(&self) -> usize {
        self.generator_vars + self.lattice_vars
    }
}

pub(super) fn require_orientable(g: &BieberbachGroup) -> Result<(), LiftingError> {
    if g.is_orientable() {
        Ok(())
    } else {
        Err(LiftingError::NotOrientable)
    }
}

/// Canonical lifts `cᵢ = e_{Sᵢ}` of the independent generators.
pub(super) fn generator_lifts(g: &BieberbachGroup) -> Vec<PinElement> {
    (0..g.holonomy_rank())
        .map(|i| lift_diagonal(g.independent_generator(i).rotation()))
        .collect()
}

/// `(name, lattice vector, sign is −1)` for every square and commutator relation.
fn relation_data(g: &BieberbachGroup) -> Vec<(RelationName, Vec<BigInt>, bool)> {
    let p = g.presentation();
    let lifts = generator_lifts(g);
    let mut out = Vec::new();
    for (i, c) in lifts.iter().enumerate() {
        out.push((RelationName::Square(i), p.t_sq(i).to_vec(), (*c * *c).is_negative()));
    }
    for (i, j) in p.pairs() {
        let comm = lifts[i].commutator(&lifts[j]).expect("equal dimensions");
        debug_assert!(comm.is_scalar());
        out.push((RelationName::Commutator(i, j), p.t_comm(i, j).to_vec(), comm.is_negative()));
    }
    out
}

pub fn build_spin_system(g: &BieberbachGroup) -> Result<SpinSystem, LiftingError> {
    require_orientable(g)?;
    let n = g.dim();
    let data = relation_data(g);
    let mut matrix = F2Matrix::new(n);
    let mut rhs = Vec::with_capacity(data.len());
    let mut names = Vec::with_capacity(data.len());
    for (name, t, negative) in data {
        let bits: Vec<bool> = t.iter().map(|x| x.bit(0)).collect();
        matrix.push_row(F2Vec::from_bools(&bits))?;
        rhs.push(negative);
        names.push(name);
    }
    Ok(SpinSystem {
        matrix,
        rhs: F2Vec::from_bools(&rhs),
        names,
    })
}

pub fn build_spinc_system(g: &BieberbachGroup) -> Result<LiftingSystem, LiftingError> {
    require_orientable(g)?;
    let (m, n) = (g.holonomy_rank(), g.dim());
    let lattice = |v: &[BigInt]| -> SparseRow {
        v.iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(k, e)| (m + k, -e))
            .collect()
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut names = Vec::new();
    for (name, t, negative) in relation_data(g) {
        let mut row = lattice(&t);
        if let RelationName::Square(i) = name {
            row.insert(0, (i, BigInt::from(2)));
        }
        rows.push(row);
        rhs.push(sign_angle(negative));
        names.push(name);
    }
    let two_torsion = g.negated_coordinates();
    for k in 0..n {
        if two_torsion >> k & 1 == 1 {
            rows.push(vec![(m + k, BigInt::from(2))]);
            rhs.push(Rational::zero());
            names.push(RelationName::Torsion(k));
        }
    }
    Ok(LiftingSystem {
        generator_vars: m,
        lattice_vars: n,
        two_torsion,
        rows,
        rhs,
        names,
    })
}

pub(super) fn spin_verdict(
    matrix: &F2Matrix,
    rhs: &F2Vec,
    names: &[RelationName],
) -> Result<Result<Vec<bool>, Obstruction>, LiftingError> {
    Ok(match f2_solve(matrix, rhs)? {
        F2Solution::Consistent { x, .. } => Ok(x.to_bools()),
        F2Solution::Inconsistent { certificate } => Err(Obstruction {
            terms: certificate.ones().map(|r| (names[r], BigInt::one())).collect(),
            pairing: sign_angle(true),
        }),
    })
}

pub fn decide_spin(g: &BieberbachGroup) -> Result<StructureVerdict, LiftingError> {
    let system = build_spin_system(g)?;
    Ok(match spin_verdict(&system.matrix, &system.rhs, &system.names)? {
        Ok(chi) => StructureVerdict {
            kind: StructureKind::Spin,
            answer: Answer::Yes,
            witness: Some(Witness::Spin {
                sigma: vec![false; g.holonomy_rank()],
                chi,
            }),
            obstruction: None,
        },
        Err(obstruction) => StructureVerdict {
            kind: StructureKind::Spin,
            answer: Answer::No,
            witness: None,
            obstruction: Some(obstruction),
        },
    })
}

/// Answer for an unsolvable Spin^c system: `No` only when `b₂ = 0`.
pub(super) fn unsolvable_spinc_answer(g: &BieberbachGroup) -> Answer {
    // b₂ is zero by definition below dimension two
    if betti(g, 2).unwrap_or(0) == 0 {
        Answer::No
    } else {
        Answer::NoLiftInconclusive
    }
}

pub(super) fn spinc_solution(system: &LiftingSystem) -> Result<Result<Vec<Rational>, Obstruction>, LiftingError> {
    Ok(match torus_solve_sparse(system.cols(), &system.rows, &system.rhs)? {
        TorusSolution::Solved { x } => Ok(x),
        TorusSolution::Obstructed { certificate, pairing } => Err(Obstruction {
            terms: certificate
                .into_iter()
                .enumerate()
                .filter(|(_, u)| !u.is_zero())
                .map(|(r, u)| (system.names[r], u))
                .collect(),
            pairing,
        }),
    })
}

pub fn decide_spinc(g: &BieberbachGroup) -> Result<StructureVerdict, LiftingError> {
    let system = build_spinc_system(g)?;
    let m = system.generator_vars;
    Ok(match spinc_solution(&system)? {
        Ok(mut x) => {
            let zeta = x.split_off(m);
            StructureVerdict {
                kind: StructureKind::SpinC,
                answer: Answer::Yes,
                witness: Some(Witness::SpinC { z: x, zeta }),
                obstruction: None,
            }
        }
        Err(obstruction) => StructureVerdict {
            kind: StructureKind::SpinC,
            answer: unsolvable_spinc_answer(g),
            witness: None,
            obstruction: Some(obstruction),
        },
    })
}

pub fn decide(g: &BieberbachGroup, kind: StructureKind) -> Result<StructureVerdict, LiftingError> {
    match kind {
        StructureKind::Spin => decide_spin(g),
        StructureKind::SpinC => decide_spinc(g),
    }
}
