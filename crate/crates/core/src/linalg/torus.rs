//! Linear systems over the circle group ℝ/ℤ.
//!
//! `A·x ≡ b (mod 1)` is solvable iff `u·b ∈ ℤ` for every integer `u` with
//! `u·A = 0`. Solving runs in two stages:
//!
//! 1. an incremental integer echelon pass over the rows picks out the rows
//!    that actually change the row lattice (plus the first row that exposes a
//!    contradiction), which keeps tall systems small;
//! 2. a Smith normal form of that subsystem yields either an exact rational
//!    solution or a violating left-kernel vector.
//!
//! Both outcomes are re-checked against the full system before returning.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, SparseRow};
use super::rational::{common_denominator, is_integral, mod_one, Rational};
use super::ring::{ext_gcd, Overflow, Ring};
use super::snf::smith_normal_form;
use super::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusSolution {
    /// Angles in `[0, 1)`; free parameters are zero.
    Solved { x: Vec<Rational> },
    /// `u·A = 0` and `u·b ≡ pairing (mod 1)` with `pairing ≠ 0`.
    Obstructed {
        certificate: Vec<BigInt>,
        pairing: Rational,
    },
}

pub fn torus_solve(a: &IntMatrix, b: &[Rational]) -> Result<TorusSolution, LinalgError> {
    torus_solve_sparse(a.cols(), &a.to_sparse(), b)
}

/// [`torus_solve`] for a row-sparse matrix with `cols` columns.
pub fn torus_solve_sparse(
    cols: usize,
    rows: &[SparseRow],
    b: &[Rational],
) -> Result<TorusSolution, LinalgError> {
    if b.len() != rows.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: rows.len(),
            found: b.len(),
        });
    }
    if let Some(j) = rows.iter().flatten().map(|(j, _)| *j).find(|&j| j >= cols) {
        return Err(LinalgError::DimensionMismatch {
            expected: cols,
            found: j + 1,
        });
    }
    let b: Vec<Rational> = b.iter().map(mod_one).collect();

    // A zero row with a nonzero target is its own certificate.
    if let Some(r) = (0..rows.len()).find(|&r| rows[r].iter().all(|(_, v)| v.is_zero()) && !b[r].is_zero()) {
        let mut certificate = vec![BigInt::zero(); rows.len()];
        certificate[r] = BigInt::one();
        let out = TorusSolution::Obstructed {
            certificate,
            pairing: b[r].clone(),
        };
        return checked(cols, rows, &b, out);
    }

    let selection = select_rows(cols, rows, &b);
    let mut subset = match selection.failing {
        Some(f) => {
            let mut s: Vec<usize> = selection.support.into_iter().filter(|&r| r < f).collect();
            s.push(f);
            s
        }
        None => selection.support,
    };
    subset.sort_unstable();
    subset.dedup();

    let sub_rows: Vec<SparseRow> = subset.iter().map(|&r| rows[r].clone()).collect();
    let sub_b: Vec<Rational> = subset.iter().map(|&r| b[r].clone()).collect();
    let mut out = dense_solve(&IntMatrix::from_sparse(cols, &sub_rows)?, &sub_b);
    if let TorusSolution::Obstructed { certificate, .. } = &mut out {
        let mut full = vec![BigInt::zero(); rows.len()];
        for (k, &r) in subset.iter().enumerate() {
            full[r] = std::mem::take(&mut certificate[k]);
        }
        *certificate = full;
    } else if selection.failing.is_some() {
        // The echelon pass saw a contradiction the subsystem does not carry;
        // fall back to the full dense system rather than trust either stage.
        out = dense_solve(&IntMatrix::from_sparse(cols, rows)?, &b);
    }
    checked(cols, rows, &b, out)
}

fn checked(
    cols: usize,
    rows: &[SparseRow],
    b: &[Rational],
    out: TorusSolution,
) -> Result<TorusSolution, LinalgError> {
    let ok = match &out {
        TorusSolution::Solved { x } => x.len() == cols && rows.iter().zip(b).all(|(row, target)| {
            let lhs: Rational = row
                .iter()
                .map(|(j, v)| &x[*j] * Rational::from_integer(v.clone()))
                .sum();
            is_integral(&(lhs - target))
        }),
        TorusSolution::Obstructed { certificate, pairing } => {
            let mut ua = vec![BigInt::zero(); cols];
            let mut ub = Rational::zero();
            for ((u, row), target) in certificate.iter().zip(rows).zip(b) {
                if u.is_zero() {
                    continue;
                }
                for (j, v) in row {
                    ua[*j] += u * v;
                }
                ub += Rational::from_integer(u.clone()) * target;
            }
            ua.iter().all(Zero::is_zero) && !is_integral(&ub) && mod_one(&ub) == *pairing
        }
    };
    if ok {
        Ok(out)
    } else {
        Err(LinalgError::Internal("circle-group solution failed its own check"))
    }
}

/// Solves through the SNF `U·A·V = D`: with `y = V⁻¹x` the system decouples
/// into `dᵢ·yᵢ = (U·b)ᵢ`, and rows with `dᵢ = 0` demand `(U·b)ᵢ ∈ ℤ`.
fn dense_solve(a: &IntMatrix, b: &[Rational]) -> TorusSolution {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let ub: Vec<Rational> = (0..a.rows())
        .map(|i| {
            snf.u
                .row(i)
                .iter()
                .zip(b)
                .map(|(u, q)| Rational::from_integer(u.clone()) * q)
                .sum()
        })
        .collect();

    let violating = (rank..a.rows()).filter(|&i| !is_integral(&ub[i]));
    // Prefer the sparsest, then smallest, certificate for readability.
    let best = violating.min_by_key(|&i| {
        let row = snf.u.row(i);
        let support = row.iter().filter(|v| !v.is_zero()).count();
        let weight: BigInt = row.iter().map(|v| v.abs()).sum();
        (support, weight, i)
    });
    if let Some(i) = best {
        return TorusSolution::Obstructed {
            certificate: snf.u.row(i).to_vec(),
            pairing: mod_one(&ub[i]),
        };
    }

    let y: Vec<Rational> = (0..a.cols())
        .map(|j| {
            if j < rank {
                &ub[j] / Rational::from_integer(snf.d[(j, j)].clone())
            } else {
                Rational::zero()
            }
        })
        .collect();
    let x = (0..a.cols())
        .map(|i| {
            let xi: Rational = snf
                .v
                .row(i)
                .iter()
                .zip(&y)
                .map(|(v, yj)| Rational::from_integer(v.clone()) * yj)
                .sum();
            mod_one(&xi)
        })
        .collect();
    TorusSolution::Solved { x }
}

struct RowSelection {
    /// Rows that were inserted into, or modified, the echelon basis.
    support: Vec<usize>,
    /// First row that reduced to zero with a non-integral target.
    failing: Option<usize>,
}

fn select_rows(cols: usize, rows: &[SparseRow], b: &[Rational]) -> RowSelection {
    // Targets are tracked as integers modulo the common denominator.
    let modulus = common_denominator(b);
    let scaled: Vec<BigInt> = b
        .iter()
        .map(|q| (q.numer() * (&modulus / q.denom())).mod_floor(&modulus))
        .collect();
    let small = i64::from_big(&modulus).and_then(|m| {
        let rows: Option<Vec<Vec<(usize, i64)>>> = rows
            .iter()
            .map(|r| r.iter().map(|(j, v)| i64::from_big(v).map(|v| (*j, v))).collect())
            .collect();
        let targets: Option<Vec<i64>> = scaled.iter().map(i64::from_big).collect();
        Some((m, rows?, targets?))
    });
    if let Some((m, rows, targets)) = small {
        if let Ok(sel) = Echelon::new(cols, m).run(&rows, &targets) {
            return sel;
        }
    }
    let rows: Vec<Vec<(usize, BigInt)>> = rows.to_vec();
    Echelon::new(cols, modulus)
        .run(&rows, &scaled)
        .expect("arbitrary-precision arithmetic cannot overflow")
}

struct Echelon<T> {
    cols: usize,
    modulus: T,
    /// Basis row per pivot column: dense coefficients plus scaled target.
    basis: Vec<Option<(Vec<T>, T)>>,
}

impl<T: Ring> Echelon<T> {
    fn new(cols: usize, modulus: T) -> Self {
        Self {
            cols,
            modulus,
            basis: (0..cols).map(|_| None).collect(),
        }
    }

    fn run(mut self, rows: &[Vec<(usize, T)>], targets: &[T]) -> Result<RowSelection, Overflow> {
        let mut support = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let mut cur = vec![T::zero(); self.cols];
            for (j, v) in row {
                cur[*j] = cur[*j].add_c(v)?;
            }
            let mut target = targets[r].clone();
            let mut touched = false;
            let mut inserted = false;
            for col in 0..self.cols {
                if cur[col].is_zero() {
                    continue;
                }
                let Some((brow, btarget)) = &mut self.basis[col] else {
                    let row = normalize(std::mem::take(&mut cur), target.clone(), col, &self.modulus)?;
                    self.basis[col] = Some(row);
                    inserted = true;
                    break;
                };
                if cur[col].is_multiple_of(&brow[col]) {
                    let q = cur[col].div_floor(&brow[col]);
                    for j in col..self.cols {
                        cur[j] = cur[j].sub_mul_c(&q, &brow[j])?;
                    }
                    target = target.sub_mul_c(&q, btarget)?.mod_floor(&self.modulus);
                } else {
                    // Unimodular 2×2 step: the basis row takes the gcd pivot,
                    // the incoming row keeps a zero in this column.
                    let (g, x, y) = ext_gcd(&brow[col], &cur[col])?;
                    let bq = brow[col].div_floor(&g);
                    let cq = cur[col].div_floor(&g);
                    let mut new_b = Vec::with_capacity(self.cols);
                    let mut new_c = Vec::with_capacity(self.cols);
                    for j in 0..self.cols {
                        new_b.push(x.mul_c(&brow[j])?.add_c(&y.mul_c(&cur[j])?)?);
                        new_c.push(cq.mul_c(&brow[j])?.sub_c(&bq.mul_c(&cur[j])?)?);
                    }
                    let new_bt = x
                        .mul_c(btarget)?
                        .add_c(&y.mul_c(&target)?)?
                        .mod_floor(&self.modulus);
                    let new_ct = cq
                        .mul_c(btarget)?
                        .sub_c(&bq.mul_c(&target)?)?
                        .mod_floor(&self.modulus);
                    *brow = new_b;
                    *btarget = new_bt;
                    cur = new_c;
                    target = new_ct;
                    touched = true;
                }
            }
            if touched || inserted {
                support.push(r);
            }
            if !inserted && !target.is_zero() {
                return Ok(RowSelection {
                    support,
                    failing: Some(r),
                });
            }
        }
        Ok(RowSelection {
            support,
            failing: None,
        })
    }
}

fn normalize<T: Ring>(row: Vec<T>, target: T, pivot: usize, modulus: &T) -> Result<(Vec<T>, T), Overflow> {
    if row[pivot].is_negative() {
        let row = row.iter().map(Ring::neg_c).collect::<Result<Vec<_>, _>>()?;
        let target = target.neg_c()?.mod_floor(modulus);
        Ok((row, target))
    } else {
        Ok((row, target))
    }
}
