//! Dense matrices of arbitrary-precision integers with exact determinants,
//! adjugates and rank-minor statistics.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from machine integers, mostly for tests and fixtures.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row_slice(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for t in 0..self.cols {
                    acc += self.get(i, t) * other.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j) * &v[j];
                }
                acc
            })
            .collect())
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.set(i, j, self.get(r, j).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut w = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if w.get(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !w.get(r, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    let a = w.get(k, j).clone();
                    let b = w.get(r, j).clone();
                    w.set(k, j, b);
                    w.set(r, j, a);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = w.get(i, j) * w.get(k, k) - w.get(i, k) * w.get(k, j);
                    debug_assert!((&num % &prev).is_zero());
                    w.set(i, j, num / &prev);
                }
                w.set(i, k, BigInt::zero());
            }
            prev = w.get(k, k).clone();
        }
        let d = w.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// Adjugate matrix: `self * adjugate(self) = det(self) * I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "adjugate of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(IntMatrix::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                // cofactor C_{j,i} goes to position (i, j)
                let minor = self.minor(j, i)?;
                let c = minor.det()?;
                let v = if (i + j) % 2 == 0 { c } else { -c };
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    fn minor(&self, drop_row: usize, drop_col: usize) -> Result<IntMatrix> {
        let mut e = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == drop_row {
                continue;
            }
            for j in 0..self.cols {
                if j == drop_col {
                    continue;
                }
                e.push(self.get(i, j).clone());
            }
        }
        IntMatrix::new(self.rows - 1, self.cols - 1, e)
    }

    /// Maximal absolute value of all `n x n` minors, where `n = cols`.
    ///
    /// Enumerates all row subsets, so it is exponential in `rows - cols`;
    /// intended for the near-square regime.
    pub fn max_rank_minor(&self) -> Result<BigInt> {
        if self.rows < self.cols {
            return Err(Error::Dimension(format!(
                "need at least as many rows as columns, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut best = BigInt::zero();
        for subset in (0..self.rows).combinations(self.cols) {
            let d = self.select_rows(&subset).det()?.abs();
            if d > best {
                best = d;
            }
        }
        if best.is_zero() {
            return Err(Error::RankDeficient);
        }
        Ok(best)
    }

    /// True iff some `n x n` row sub-matrix is singular (`n = cols`).
    /// Fails with a rank error when every rank-order minor vanishes.
    pub fn has_singular_rank_submatrix(&self) -> Result<bool> {
        if self.rows < self.cols {
            return Err(Error::Dimension(format!(
                "need at least as many rows as columns, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut any_nonzero = false;
        let mut any_zero = false;
        for subset in (0..self.rows).combinations(self.cols) {
            if self.select_rows(&subset).det()?.is_zero() {
                any_zero = true;
            } else {
                any_nonzero = true;
            }
        }
        if !any_nonzero {
            return Err(Error::RankDeficient);
        }
        Ok(any_zero)
    }

    /// True iff the matrix has full column rank.
    pub fn has_full_column_rank(&self) -> bool {
        if self.rows < self.cols {
            return false;
        }
        matches!(self.max_rank_minor(), Ok(_))
    }
}

impl std::fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row = self.row_slice(i).iter().map(|e| e.to_string()).join(" ");
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(m(2, 2, &[1, 0, 0, 2]).det().unwrap(), BigInt::from(2));
        assert_eq!(m(2, 2, &[1, 0, 0, 1]).det().unwrap(), BigInt::from(1));
        assert_eq!(m(2, 2, &[2, 1, 1, 2]).det().unwrap(), BigInt::from(3));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(
            m(2, 3, &[1, 0, 0, 0, 1, 0]).det(),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn det_zero_pivot_needs_swap() {
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).det().unwrap(), BigInt::from(-1));
        assert_eq!(
            m(3, 3, &[0, 0, 1, 0, 1, 0, 1, 0, 0]).det().unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn max_rank_minor_examples() {
        assert_eq!(m(2, 2, &[1, 0, 0, 1]).max_rank_minor().unwrap(), BigInt::from(1));
        assert_eq!(
            m(3, 2, &[1, 0, 0, 2, 1, 1]).max_rank_minor().unwrap(),
            BigInt::from(2)
        );
        assert_eq!(m(2, 1, &[2, -1]).max_rank_minor().unwrap(), BigInt::from(2));
    }

    #[test]
    fn max_rank_minor_rank_deficient() {
        assert!(matches!(
            m(3, 2, &[1, 1, 2, 2, 3, 3]).max_rank_minor(),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn singular_submatrix_examples() {
        assert!(m(3, 2, &[1, 0, 0, 1, -1, 0])
            .has_singular_rank_submatrix()
            .unwrap());
        assert!(!m(2, 2, &[2, 1, 1, 2]).has_singular_rank_submatrix().unwrap());
        assert!(!m(3, 2, &[1, 0, 0, 1, 1, 1])
            .has_singular_rank_submatrix()
            .unwrap());
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(
            IntMatrix::identity(3).adjugate().unwrap(),
            IntMatrix::identity(3)
        );
        assert_eq!(
            m(2, 2, &[2, 0, 1, 3]).adjugate().unwrap(),
            m(2, 2, &[3, 0, -1, 2])
        );
        assert_eq!(m(1, 1, &[5]).adjugate().unwrap(), m(1, 1, &[1]));
    }

    #[test]
    fn adjugate_identity_property_random() {
        // B * adj(B) = det(B) * I on random matrices up to 6x6.
        let mut rng = crate::gen::SplitMix64::new(0xadu64);
        for _ in 0..200 {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let e: Vec<i64> = (0..n * n).map(|_| rng.next_range_i64(-9, 9)).collect();
            let b = m(n, n, &e);
            let adj = b.adjugate().unwrap();
            let prod = b.mul(&adj).unwrap();
            let d = b.det().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { d.clone() } else { BigInt::zero() };
                    assert_eq!(*prod.get(i, j), expect);
                }
            }
        }
    }

    /// Permutation-expansion determinant, the independent oracle for Bareiss.
    fn det_by_permutations(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        let mut total = BigInt::zero();
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, a, &mut total, 1);
        return total;

        fn permute(perm: &mut Vec<usize>, k: usize, a: &IntMatrix, total: &mut BigInt, sign: i32) {
            let n = perm.len();
            if k == n {
                let mut term = BigInt::from(sign);
                for i in 0..n {
                    term *= a.get(i, perm[i]);
                }
                *total += term;
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                let s = if i == k { sign } else { -sign };
                permute(perm, k + 1, a, total, s);
                perm.swap(k, i);
            }
        }
    }

    #[test]
    fn det_matches_permutation_expansion() {
        let mut rng = crate::gen::SplitMix64::new(0xdeu64);
        for _ in 0..1000 {
            let n = 1 + (rng.next_u64() % 4) as usize;
            let e: Vec<i64> = (0..n * n).map(|_| rng.next_range_i64(-3, 3)).collect();
            let a = m(n, n, &e);
            assert_eq!(a.det().unwrap(), det_by_permutations(&a));
        }
    }
}
