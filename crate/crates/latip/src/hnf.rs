//! Hermite normal form with unit pivots sorted first.
//!
//! The input `H` (d x n, full column rank) is reduced by unimodular column
//! operations, then rows and columns are permuted so that the result has the
//! block shape
//!
//! ```text
//!   [ I      0    ]   k unit-pivot rows
//!   [ A      B    ]   s rows, B lower triangular with diagonal >= 2
//!   [ Abar   Bbar ]   m = d - k - s extra rows
//! ```
//!
//! with `0 <= a_{ij} <= b_{ii}` and `0 <= b_{ij} <= b_{ii}` for `j <= i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// The permuted Hermite normal form together with its unimodular witness.
#[derive(Clone, Debug)]
pub struct HnfForm {
    /// Number of unit-pivot columns.
    pub k: usize,
    /// Number of pivot entries >= 2.
    pub s: usize,
    /// Number of extra rows below the pivot rows.
    pub m: usize,
    /// s x k block under the identity columns.
    pub block_a: IntMatrix,
    /// s x s lower-triangular block with diagonal >= 2.
    pub block_b: IntMatrix,
    /// m x k block of the extra rows.
    pub block_abar: IntMatrix,
    /// m x s block of the extra rows.
    pub block_bbar: IntMatrix,
    /// `row_perm[i]` is the input row shown at row `i` of the form.
    pub row_perm: Vec<usize>,
    /// `col_perm[j]` is the post-reduction column shown at column `j`.
    pub col_perm: Vec<usize>,
    /// Unimodular n x n witness: permuting the rows of `H * col_transform`
    /// by `row_perm` reproduces the form exactly.
    pub col_transform: IntMatrix,
}

impl HnfForm {
    pub fn n(&self) -> usize {
        self.k + self.s
    }

    pub fn d(&self) -> usize {
        self.k + self.s + self.m
    }

    /// Product of the diagonal of `B` (the paper's small delta).
    pub fn delta_small(&self) -> BigInt {
        let mut p = BigInt::one();
        for i in 0..self.s {
            p *= self.block_b.get(i, i);
        }
        p
    }

    /// The full d x n matrix in block form.
    pub fn form_matrix(&self) -> IntMatrix {
        let (k, s, m) = (self.k, self.s, self.m);
        let n = k + s;
        let mut out = IntMatrix::zeros(k + s + m, n);
        for i in 0..k {
            out.set(i, i, BigInt::one());
        }
        for i in 0..s {
            for j in 0..k {
                out.set(k + i, j, self.block_a.get(i, j).clone());
            }
            for j in 0..s {
                out.set(k + i, k + j, self.block_b.get(i, j).clone());
            }
        }
        for i in 0..m {
            for j in 0..k {
                out.set(k + s + i, j, self.block_abar.get(i, j).clone());
            }
            for j in 0..s {
                out.set(k + s + i, k + j, self.block_bbar.get(i, j).clone());
            }
        }
        out
    }

    /// Maps coefficients in form coordinates back to input coordinates.
    pub fn coeffs_to_input(&self, t: &[BigInt]) -> Result<Vec<BigInt>> {
        self.col_transform.mul_vec(t)
    }

    /// Maps input coefficients into form coordinates by solving
    /// `col_transform * t_form = t` with the adjugate (determinant is +-1).
    pub fn coeffs_to_form(&self, t: &[BigInt]) -> Result<Vec<BigInt>> {
        let det = self.col_transform.det()?;
        let adj = self.col_transform.adjugate()?;
        let mut v = adj.mul_vec(t)?;
        if det < BigInt::zero() {
            for x in &mut v {
                *x = -x.clone();
            }
        }
        Ok(v)
    }
}

/// Reduces `H` to the block form above by unimodular column operations
/// followed by stable row/column permutations.
pub fn hnf_normalize(h: &IntMatrix) -> Result<HnfForm> {
    let (d, n) = (h.rows(), h.cols());
    if d < n {
        return Err(Error::Structure(format!(
            "need d >= n, got {d}x{n}"
        )));
    }

    // Column-style HNF: E = H * U with U unimodular.
    let mut e = h.clone();
    let mut u = IntMatrix::identity(n);
    let mut pivot_rows: Vec<usize> = Vec::with_capacity(n);
    let mut c = 0usize;
    for row in 0..d {
        if c == n {
            break;
        }
        // Collapse all entries of this row in columns c.. into column c.
        for j in c + 1..n {
            if e.get(row, j).is_zero() {
                continue;
            }
            let a = e.get(row, c).clone();
            let b = e.get(row, j).clone();
            let g = a.extended_gcd(&b);
            // [x  -b/g; y  a/g] has determinant 1.
            let nbg = -(&b / &g.gcd);
            let ag = &a / &g.gcd;
            combine_cols(&mut e, c, j, &g.x, &g.y, &nbg, &ag);
            combine_cols(&mut u, c, j, &g.x, &g.y, &nbg, &ag);
        }
        if e.get(row, c).is_zero() {
            continue; // row is dependent on previous pivots
        }
        if e.get(row, c).is_negative() {
            negate_col(&mut e, c);
            negate_col(&mut u, c);
        }
        // Reduce earlier columns at the pivot row into [0, pivot).
        let pivot = e.get(row, c).clone();
        for j in 0..c {
            let q = e.get(row, j).div_floor(&pivot);
            if !q.is_zero() {
                sub_mul_col(&mut e, j, c, &q);
                sub_mul_col(&mut u, j, c, &q);
            }
        }
        pivot_rows.push(row);
        c += 1;
    }
    if c < n {
        return Err(Error::RankDeficient);
    }

    // Classify pivots: unit pivots first, then pivots >= 2, order preserved.
    let mut unit_cols = Vec::new();
    let mut big_cols = Vec::new();
    for (j, &r) in pivot_rows.iter().enumerate() {
        if e.get(r, j).is_one() {
            unit_cols.push(j);
        } else {
            big_cols.push(j);
        }
    }
    let k = unit_cols.len();
    let s = big_cols.len();
    let m = d - n;

    let col_perm: Vec<usize> = unit_cols.iter().chain(big_cols.iter()).copied().collect();
    let mut row_perm: Vec<usize> = col_perm.iter().map(|&j| pivot_rows[j]).collect();
    let pivot_set: std::collections::HashSet<usize> = pivot_rows.iter().copied().collect();
    row_perm.extend((0..d).filter(|r| !pivot_set.contains(r)));

    // Fold the column permutation into the witness.
    let mut col_transform = IntMatrix::zeros(n, n);
    for (new_j, &old_j) in col_perm.iter().enumerate() {
        for i in 0..n {
            col_transform.set(i, new_j, u.get(i, old_j).clone());
        }
    }

    let pick = |ri: usize, cj: usize| e.get(row_perm[ri], col_perm[cj]).clone();
    let block = |r0: usize, c0: usize, nr: usize, nc: usize| -> IntMatrix {
        // blocks may be degenerate (0 rows or columns); consumers iterate
        // over the k/s/m counts, never over the raw block shape
        let mut b = IntMatrix::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                b.set(i, j, pick(r0 + i, c0 + j));
            }
        }
        b
    };

    let form = HnfForm {
        k,
        s,
        m,
        block_a: block(k, 0, s, k),
        block_b: block(k, k, s, s),
        block_abar: block(k + s, 0, m, k),
        block_bbar: block(k + s, k, m, s),
        row_perm,
        col_perm,
        col_transform,
    };
    debug_assert!(form_reconstructs(h, &form));
    Ok(form)
}

fn combine_cols(
    m: &mut IntMatrix,
    c1: usize,
    c2: usize,
    a11: &BigInt,
    a21: &BigInt,
    a12: &BigInt,
    a22: &BigInt,
) {
    for i in 0..m.rows() {
        let x = m.get(i, c1).clone();
        let y = m.get(i, c2).clone();
        m.set(i, c1, &x * a11 + &y * a21);
        m.set(i, c2, &x * a12 + &y * a22);
    }
}

fn negate_col(m: &mut IntMatrix, c: usize) {
    for i in 0..m.rows() {
        let v = -m.get(i, c).clone();
        m.set(i, c, v);
    }
}

fn sub_mul_col(m: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for i in 0..m.rows() {
        let v = m.get(i, target) - q * m.get(i, source);
        m.set(i, target, v);
    }
}

/// Checks that permuting the rows of `H * col_transform` gives the block form.
pub fn form_reconstructs(h: &IntMatrix, form: &HnfForm) -> bool {
    let Ok(hu) = h.mul(&form.col_transform) else {
        return false;
    };
    let fm = form.form_matrix();
    for i in 0..fm.rows() {
        for j in 0..fm.cols() {
            if hu.get(form.row_perm[i], j) != fm.get(i, j) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    #[test]
    fn identity_is_all_unit_pivots() {
        let h = IntMatrix::identity(3);
        let f = hnf_normalize(&h).unwrap();
        assert_eq!((f.k, f.s, f.m), (3, 0, 0));
        assert_eq!(f.col_transform, IntMatrix::identity(3));
        assert_eq!(f.delta_small(), BigInt::one());
    }

    #[test]
    fn diagonal_with_one_big_pivot() {
        let h = m(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2]);
        let f = hnf_normalize(&h).unwrap();
        assert_eq!((f.k, f.s, f.m), (3, 1, 0));
        assert_eq!(*f.block_b.get(0, 0), BigInt::from(2));
        for j in 0..3 {
            assert!(f.block_a.get(0, j).is_zero());
        }
    }

    #[test]
    fn tall_example_with_extra_row() {
        let h = m(3, 2, &[1, 0, 0, 2, 1, 1]);
        let f = hnf_normalize(&h).unwrap();
        assert_eq!((f.k, f.s, f.m), (1, 1, 1));
        assert_eq!(f.delta_small(), BigInt::from(2));
        assert!(form_reconstructs(&h, &f));
        assert_eq!(f.col_transform.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn rank_deficient_rejected() {
        assert!(matches!(
            hnf_normalize(&m(3, 2, &[1, 1, 2, 2, 3, 3])),
            Err(Error::RankDeficient)
        ));
        assert!(matches!(
            hnf_normalize(&m(1, 2, &[1, 0])),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn hnf_entry_ranges_hold() {
        let mut rng = crate::gen::SplitMix64::new(7);
        for _ in 0..100 {
            let n = 1 + (rng.next_u64() % 4) as usize;
            let d = n + (rng.next_u64() % 3) as usize;
            let e: Vec<i64> = (0..d * n).map(|_| rng.next_range_i64(-9, 9)).collect();
            let h = m(d, n, &e);
            let Ok(f) = hnf_normalize(&h) else { continue };
            for i in 0..f.s {
                let bii = f.block_b.get(i, i);
                assert!(*bii >= BigInt::from(2));
                for j in 0..=i {
                    let b = f.block_b.get(i, j);
                    assert!(!b.is_negative() && b <= bii);
                }
                for j in i + 1..f.s {
                    assert!(f.block_b.get(i, j).is_zero());
                }
                for j in 0..f.k {
                    let a = f.block_a.get(i, j);
                    assert!(!a.is_negative() && a <= bii);
                }
            }
            assert!(form_reconstructs(&h, &f));
            assert_eq!(f.col_transform.det().unwrap().abs(), BigInt::one());
        }
    }

    #[test]
    fn coeff_round_trip() {
        let h = m(3, 2, &[1, 0, 0, 2, 1, 1]);
        let f = hnf_normalize(&h).unwrap();
        let t = vec![BigInt::from(3), BigInt::from(-2)];
        let back = f.coeffs_to_input(&f.coeffs_to_form(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }
}
