//! Smith normal form over ℤ with explicit unimodular transforms.

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::ring::{lower, raise, Overflow, Ring};

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// all diagonal entries nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `D` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries, the elementary divisors of `A`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    if let Some(small) = lower::<i64>(a.data()) {
        if let Ok(out) = SnfWork::new(a.rows(), a.cols(), small).run() {
            return out;
        }
    }
    SnfWork::new(a.rows(), a.cols(), a.data().to_vec())
        .run()
        .expect("arbitrary-precision arithmetic cannot overflow")
}

struct SnfWork<T> {
    rows: usize,
    cols: usize,
    a: Vec<T>,
    u: Vec<T>,
    v: Vec<T>,
}

fn identity<T: Ring>(n: usize) -> Vec<T> {
    let mut m = vec![T::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = T::one();
    }
    m
}

impl<T: Ring> SnfWork<T> {
    fn new(rows: usize, cols: usize, a: Vec<T>) -> Self {
        Self {
            rows,
            cols,
            a,
            u: identity(rows),
            v: identity(cols),
        }
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(i * self.cols + j, k * self.cols + j);
        }
        for j in 0..self.rows {
            self.u.swap(i * self.rows + j, k * self.rows + j);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + j, i * self.cols + k);
        }
        for i in 0..self.cols {
            self.v.swap(i * self.cols + j, i * self.cols + k);
        }
    }

    /// row_i ← row_i − q·row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &T) -> Result<(), Overflow> {
        for j in 0..self.cols {
            let val = self.a[i * self.cols + j].sub_mul_c(q, &self.a[k * self.cols + j])?;
            self.a[i * self.cols + j] = val;
        }
        for j in 0..self.rows {
            let val = self.u[i * self.rows + j].sub_mul_c(q, &self.u[k * self.rows + j])?;
            self.u[i * self.rows + j] = val;
        }
        Ok(())
    }

    /// col_j ← col_j − q·col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &T) -> Result<(), Overflow> {
        for i in 0..self.rows {
            let val = self.a[i * self.cols + j].sub_mul_c(q, &self.a[i * self.cols + k])?;
            self.a[i * self.cols + j] = val;
        }
        for i in 0..self.cols {
            let val = self.v[i * self.cols + j].sub_mul_c(q, &self.v[i * self.cols + k])?;
            self.v[i * self.cols + j] = val;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<(), Overflow> {
        for j in 0..self.cols {
            self.a[i * self.cols + j] = self.a[i * self.cols + j].neg_c()?;
        }
        for j in 0..self.rows {
            self.u[i * self.rows + j] = self.u[i * self.rows + j].neg_c()?;
        }
        Ok(())
    }

    /// Smallest |entry| in the trailing submatrix, ties by lowest row then column.
    fn pivot(&self, t: usize) -> Result<Option<(usize, usize)>, Overflow> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = self.at(i, j);
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs_c()?;
                if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                    best = Some((ax, i, j));
                }
            }
        }
        Ok(best.map(|(_, i, j)| (i, j)))
    }

    fn run(mut self) -> Result<SnfDecomposition, Overflow> {
        let diag = self.rows.min(self.cols);
        'outer: for t in 0..diag {
            loop {
                let Some((pi, pj)) = self.pivot(t)? else {
                    break 'outer;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.at(t, t).clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if !self.at(i, t).is_zero() {
                        let q = self.at(i, t).div_floor(&p);
                        self.row_sub(i, t, &q)?;
                        clean &= self.at(i, t).is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.at(t, j).is_zero() {
                        let q = self.at(t, j).div_floor(&p);
                        self.col_sub(j, t, &q)?;
                        clean &= self.at(t, j).is_zero();
                    }
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| !self.at(i, j).is_multiple_of(&p)));
                match offender {
                    // row_t ← row_t + row_i exposes the non-multiple in row t
                    Some(i) => self.row_sub(t, i, &T::one().neg_c()?)?,
                    None => break,
                }
            }
            if self.at(t, t).is_negative() {
                self.negate_row(t)?;
            }
        }
        let (r, c) = (self.rows, self.cols);
        Ok(SnfDecomposition {
            u: IntMatrix::from_data(r, r, raise(&self.u)),
            d: IntMatrix::from_data(r, c, raise(&self.a)),
            v: IntMatrix::from_data(c, c, raise(&self.v)),
        })
    }
}

/// ℤ-basis of the left kernel `{u : u·A = 0}`, read off the rows of `U` that
/// map to zero rows of `D`.
pub fn left_kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank()..a.rows())
        .map(|i| snf.u.row(i).to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn diag_i64(snf: &SnfDecomposition) -> Vec<i64> {
        snf.diagonal().iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    /// Fraction-free (Bareiss) determinant, independent of the SNF code path.
    fn det(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        assert_eq!(n, a.cols());
        if n == 0 {
            return BigInt::from(1);
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).to_vec()).collect();
        let mut sign = BigInt::from(1);
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = val / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    fn check(a: &IntMatrix, snf: &SnfDecomposition) {
        let uav = snf.u.mul(a).unwrap().mul(&snf.v).unwrap();
        assert_eq!(uav, snf.d);
        assert_eq!(det(&snf.u).abs(), BigInt::from(1));
        assert_eq!(det(&snf.v).abs(), BigInt::from(1));
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d[(i, j)].is_zero());
                }
            }
        }
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn coprime_diagonal_normalizes() {
        let a = m(2, &[&[3, 0], &[0, 5]]);
        let snf = smith_normal_form(&a);
        check(&a, &snf);
        assert_eq!(diag_i64(&snf), vec![1, 15]);
    }

    #[test]
    fn two_by_two_gcd_and_det() {
        // d₁ = gcd of entries = 2, d₁·d₂ = |det| = 8
        let a = m(2, &[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a);
        check(&a, &snf);
        assert_eq!(diag_i64(&snf), vec![2, 4]);
    }

    #[test]
    fn zero_matrix_keeps_identities() {
        let a = IntMatrix::zeros(2, 3);
        let snf = smith_normal_form(&a);
        assert!(snf.d.is_zero());
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(3));
    }

    #[test]
    fn deterministic() {
        let a = m(3, &[&[4, -6, 2], &[3, 9, -12], &[0, 5, 7]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        let big = i64::MAX / 3;
        let a = m(2, &[&[big, big - 1], &[big - 7, big + 5]]);
        let snf = smith_normal_form(&a);
        check(&a, &snf);
    }

    #[test]
    fn left_kernel_identity_is_empty() {
        assert!(left_kernel_basis(&IntMatrix::identity(3)).is_empty());
    }

    #[test]
    fn left_kernel_of_opposite_rows() {
        let k = left_kernel_basis(&m(1, &[&[2], &[-2]]));
        assert_eq!(k, vec![vec![BigInt::from(1), BigInt::from(1)]]);
    }

    #[test]
    fn left_kernel_of_column() {
        let a = m(1, &[&[2], &[4], &[6]]);
        let k = left_kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for u in &k {
            assert!(a.left_mul_vec(u).unwrap().iter().all(Zero::is_zero));
        }
        // brute force: every kernel vector with entries in [-3, 3] lies in the
        // ℤ-span of the basis, i.e. the basis is saturated, not merely of rank 2
        let basis = IntMatrix::from_rows(
            3,
            &k.iter()
                .map(|u| u.iter().map(|x| i64::try_from(x).unwrap()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let snf = smith_normal_form(&basis);
        assert_eq!(diag_i64(&snf), vec![1, 1]);
    }

    proptest! {
        #[test]
        fn snf_invariants(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 5..i * 5 + cols].to_vec()).collect();
            let a = IntMatrix::from_rows(cols, &data).unwrap();
            let snf = smith_normal_form(&a);
            check(&a, &snf);
            for u in left_kernel_basis(&a) {
                prop_assert!(a.left_mul_vec(&u).unwrap().iter().all(Zero::is_zero));
            }
        }
    }
}
