//! Existence of Spin and Spin^c structures on flat manifolds with diagonal
//! holonomy, decided by lifting the holonomy representation.
//!
//! A Spin structure is a homomorphism `ε: Γ → Spin(n)` with `λ∘ε` equal to
//! the holonomy; a Spin^c structure is the same into `Spin^c(n)` through
//! `λ̄`. Writing `cᵢ = e_{Sᵢ}` for the canonical lift of the rotation of `β̂ᵢ`,
//! any such lift has the form
//!
//! - Spin: `ε(β̂ᵢ) = ±cᵢ`, `ε(t_k) = χ_k ∈ {±1}`;
//! - Spin^c: `ε(β̂ᵢ) = [cᵢ, zᵢ]`, `ε(t_k) = [1, ζ_k]`;
//!
//! and `ε` is a homomorphism iff every relation of the presentation holds.
//! With angles written additively this is a linear system over ℝ/ℤ (over F₂
//! for Spin):
//!
//! - `sq(i)`: `2zᵢ − sq(i)·ζ = sign(cᵢ²)`;
//! - `comm(i,j)`: `−comm(i,j)·ζ = sign(cᵢcⱼcᵢ⁻¹cⱼ⁻¹)`;
//! - `tor(k)`: `2ζ_k = 0` whenever some generator negates coordinate `k`,
//!   from `β̂ᵢ t_k β̂ᵢ⁻¹ = t_k⁻¹` and centrality of `ε(t_k)`.
//!
//! Right-hand sides are `0` or `1/2` (the angle of `−1`).
//!
//! **Why the generator signs drop out of the Spin system.** Replacing
//! `ε(β̂ᵢ) = cᵢ` by `−cᵢ` multiplies the image of a word by `(−1)^e`, where
//! `e` is the exponent sum of `β̂ᵢ` in the word. Squares contain `β̂ᵢ` twice,
//! commutators contain each generator once with each sign, and conjugations
//! `β̂ᵢ t_k β̂ᵢ⁻¹` have exponent sum zero. So every relation is independent of
//! the signs and only the lattice signs `χ` are unknown; a witness uses
//! `σ = 0`. The same argument shows that the Spin^c system is unchanged when a
//! canonical lift is negated.
//!
//! A `No` verdict for Spin^c is only claimed when `b₂ = 0`; the converse of
//! the lifting criterion is not known without that hypothesis, so an
//! unsolvable system with `b₂ ≠ 0` is reported as `NoLiftInconclusive`.

mod oracle;
mod systems;
mod verify;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::clifford::CliffordError;
use crate::linalg::rational::Rational;
use crate::linalg::LinalgError;

pub use oracle::{build_oracle_spin_system, build_oracle_spinc_system, cocycle_oracle_decide, cocycle_oracle_decide_with_flips, MAX_ORACLE_RANK};
pub use systems::{build_spin_system, build_spinc_system, decide, decide_spin, decide_spinc, LiftingSystem, SpinSystem};
pub use verify::{verify_obstruction, verify_verdict, verify_witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftingError {
    #[error("the group is not orientable, so the holonomy does not lift to Spin(n) or Spin^c(n)")]
    NotOrientable,
    #[error("holonomy of rank {rank} exceeds the pairwise oracle limit of rank {MAX_ORACLE_RANK}")]
    HolonomyTooLarge { rank: usize },
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Spin,
    SpinC,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructureKind::Spin => "spin",
            StructureKind::SpinC => "spinc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    Yes,
    No,
    /// The lifting system is unsolvable but `b₂ ≠ 0`.
    NoLiftInconclusive,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::NoLiftInconclusive => "NO_LIFT_INCONCLUSIVE",
        })
    }
}

impl FromStr for Answer {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "YES" => Ok(Answer::Yes),
            "NO" => Ok(Answer::No),
            "NO_LIFT_INCONCLUSIVE" => Ok(Answer::NoLiftInconclusive),
            _ => Err(format!("unknown answer {s:?}")),
        }
    }
}

/// Name of one equation of a lifting system. Generator and coordinate
/// indices are 0-based here and print 1-based; `Pair` holds holonomy class
/// masks and prints them as they are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationName {
    Square(usize),
    Commutator(usize, usize),
    Torsion(usize),
    Pair(u64, u64),
}

impl fmt::Display for RelationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelationName::Square(i) => write!(f, "sq({})", i + 1),
            RelationName::Commutator(i, j) => write!(f, "comm({},{})", i + 1, j + 1),
            RelationName::Torsion(k) => write!(f, "tor({})", k + 1),
            RelationName::Pair(a, b) => write!(f, "pair({a},{b})"),
        }
    }
}

impl FromStr for RelationName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("malformed relation name {s:?}");
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let args: Vec<u64> = body
            .split(',')
            .map(|x| {
                if x.is_empty() || !x.bytes().all(|c| c.is_ascii_digit()) {
                    Err(bad())
                } else {
                    x.parse::<u64>().map_err(|_| bad())
                }
            })
            .collect::<Result<_, _>>()?;
        let one_based = |v: u64| -> Result<usize, String> {
            if v == 0 {
                Err(bad())
            } else {
                usize::try_from(v - 1).map_err(|_| bad())
            }
        };
        match (head, args.as_slice()) {
            ("sq", [i]) => Ok(RelationName::Square(one_based(*i)?)),
            ("comm", [i, j]) if i < j => Ok(RelationName::Commutator(one_based(*i)?, one_based(*j)?)),
            ("tor", [k]) => Ok(RelationName::Torsion(one_based(*k)?)),
            ("pair", [a, b]) => Ok(RelationName::Pair(*a, *b)),
            _ => Err(bad()),
        }
    }
}

/// An explicit lift on the independent generators and the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `ε(β̂ᵢ) = (−1)^{σᵢ} cᵢ`, `ε(t_k) = (−1)^{χ_k}`.
    Spin { sigma: Vec<bool>, chi: Vec<bool> },
    /// `ε(β̂ᵢ) = [cᵢ, zᵢ]`, `ε(t_k) = [1, ζ_k]`, angles in `[0, 1)`.
    SpinC { z: Vec<Rational>, zeta: Vec<Rational> },
}

/// Integer combination of named equations whose left-hand sides cancel
/// while the right-hand sides add up to `pairing = 1/2`. For Spin systems the
/// arithmetic is mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub terms: Vec<(RelationName, BigInt)>,
    pub pairing: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureVerdict {
    pub kind: StructureKind,
    pub answer: Answer,
    pub witness: Option<Witness>,
    pub obstruction: Option<Obstruction>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_names_round_trip() {
        for name in [
            RelationName::Square(0),
            RelationName::Commutator(1, 2),
            RelationName::Torsion(4),
            RelationName::Pair(5, 3),
        ] {
            assert_eq!(name.to_string().parse::<RelationName>(), Ok(name));
        }
        assert_eq!(RelationName::Commutator(1, 2).to_string(), "comm(2,3)");
        for bad in ["sq(0)", "comm(3,2)", "tor()", "sq(1", "pair(1)", "sq(+1)", "foo(1)"] {
            assert!(bad.parse::<RelationName>().is_err(), "{bad}");
        }
    }

    #[test]
    fn answers_round_trip() {
        for a in [Answer::Yes, Answer::No, Answer::NoLiftInconclusive] {
            assert_eq!(a.to_string().parse::<Answer>(), Ok(a));
        }
    }
}
