//! Smith normal form of a nonsingular integer matrix, with unimodular
//! row and column witnesses: `S = P * B * Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `s = p * b * q` with `p`, `q` unimodular and `s` diagonal, positive
/// diagonal entries satisfying `s[0][0] | s[1][1] | ...`.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub s: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

fn swap_rows(w: &mut IntMatrix, p: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = w.cols();
    for j in 0..n {
        let x = w.get(a, j).clone();
        let y = w.get(b, j).clone();
        w.set(a, j, y);
        w.set(b, j, x);
    }
    let pn = p.cols();
    for j in 0..pn {
        let x = p.get(a, j).clone();
        let y = p.get(b, j).clone();
        p.set(a, j, y);
        p.set(b, j, x);
    }
}

fn swap_cols(w: &mut IntMatrix, q: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let n = w.rows();
    for i in 0..n {
        let x = w.get(i, a).clone();
        let y = w.get(i, b).clone();
        w.set(i, a, y);
        w.set(i, b, x);
    }
    let qn = q.rows();
    for i in 0..qn {
        let x = q.get(i, a).clone();
        let y = q.get(i, b).clone();
        q.set(i, a, y);
        q.set(i, b, x);
    }
}

/// row[a] -= f * row[b], mirrored in p.
fn add_row(w: &mut IntMatrix, p: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for j in 0..w.cols() {
        let v = w.get(a, j) - f * w.get(b, j);
        w.set(a, j, v);
    }
    for j in 0..p.cols() {
        let v = p.get(a, j) - f * p.get(b, j);
        p.set(a, j, v);
    }
}

/// col[a] -= f * col[b], mirrored in q.
fn add_col(w: &mut IntMatrix, q: &mut IntMatrix, a: usize, b: usize, f: &BigInt) {
    for i in 0..w.rows() {
        let v = w.get(i, a) - f * w.get(i, b);
        w.set(i, a, v);
    }
    for i in 0..q.rows() {
        let v = q.get(i, a) - f * q.get(i, b);
        q.set(i, a, v);
    }
}

fn negate_row(w: &mut IntMatrix, p: &mut IntMatrix, a: usize) {
    for j in 0..w.cols() {
        let v = -w.get(a, j);
        w.set(a, j, v);
    }
    for j in 0..p.cols() {
        let v = -p.get(a, j);
        p.set(a, j, v);
    }
}

/// Computes the Smith normal form of a square nonsingular matrix.
pub fn snf(b: &IntMatrix) -> Result<SnfDecomposition> {
    if b.rows() != b.cols() {
        return Err(Error::Dimension(format!(
            "snf expects a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let n = b.rows();
    if b.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let mut w = b.clone();
    let mut p = IntMatrix::identity(n);
    let mut q = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            // move the smallest-magnitude nonzero entry of the trailing
            // block to the pivot position
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if w.get(i, j).is_zero() {
                        continue;
                    }
                    match &pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if w.get(i, j).abs() < w.get(*pi, *pj).abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = pivot.ok_or(Error::Singular)?;
            swap_rows(&mut w, &mut p, t, pi);
            swap_cols(&mut w, &mut q, t, pj);
            if w.get(t, t).is_negative() {
                negate_row(&mut w, &mut p, t);
            }
            let d = w.get(t, t).clone();

            // reduce the pivot row and column
            let mut dirty = false;
            for i in (t + 1)..n {
                if !w.get(i, t).is_zero() {
                    let f = w.get(i, t).div_floor(&d);
                    add_row(&mut w, &mut p, i, t, &f);
                    if !w.get(i, t).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..n {
                if !w.get(t, j).is_zero() {
                    let f = w.get(t, j).div_floor(&d);
                    add_col(&mut w, &mut q, j, t, &f);
                    if !w.get(t, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }

            // enforce divisibility: fold any non-divisible trailing entry
            // into the pivot row and restart the reduction
            let mut fixed = true;
            'scan: for i in (t + 1)..n {
                for j in (t + 1)..n {
                    if !w.get(i, j).mod_floor(&d).is_zero() {
                        let minus_one = -BigInt::one();
                        add_row(&mut w, &mut p, t, i, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }

    let decomposition = SnfDecomposition { s: w, p, q };
    verify(b, &decomposition)?;
    Ok(decomposition)
}

fn verify(b: &IntMatrix, d: &SnfDecomposition) -> Result<()> {
    let n = b.rows();
    let recomposed = d.p.mul(b)?.mul(&d.q)?;
    if recomposed != d.s {
        return Err(Error::Internal("snf witnesses do not recompose".into()));
    }
    if d.p.det()?.abs() != BigInt::one() || d.q.det()?.abs() != BigInt::one() {
        return Err(Error::Internal("snf witnesses are not unimodular".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && !d.s.get(i, j).is_zero() {
                return Err(Error::Internal("snf result is not diagonal".into()));
            }
        }
        if !d.s.get(i, i).is_positive() {
            return Err(Error::Internal("snf diagonal must be positive".into()));
        }
        if i + 1 < n && !d.s.get(i + 1, i + 1).mod_floor(d.s.get(i, i)).is_zero() {
            return Err(Error::Internal("snf divisibility chain violated".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::SplitMix64;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn diag_of(s: &IntMatrix) -> Vec<BigInt> {
        (0..s.rows()).map(|i| s.get(i, i).clone()).collect()
    }

    #[test]
    fn snf_diagonal_input() {
        let d = snf(&m(2, 2, &[1, 0, 0, 4])).unwrap();
        assert_eq!(diag_of(&d.s), vec![BigInt::from(1), BigInt::from(4)]);
    }

    #[test]
    fn snf_triangular() {
        let d = snf(&m(2, 2, &[2, 1, 0, 2])).unwrap();
        assert_eq!(diag_of(&d.s), vec![BigInt::from(1), BigInt::from(4)]);
    }

    #[test]
    fn snf_one_by_one() {
        let d = snf(&m(1, 1, &[3])).unwrap();
        assert_eq!(diag_of(&d.s), vec![BigInt::from(3)]);
    }

    #[test]
    fn snf_rejects_singular() {
        assert!(snf(&m(2, 2, &[1, 2, 2, 4])).is_err());
    }

    #[test]
    fn snf_random_roundtrip() {
        let mut rng = SplitMix64::new(0x5eed_0001);
        let mut done = 0;
        while done < 200 {
            let n = 1 + (rng.next_u64() % 3) as usize;
            let e: Vec<i64> = (0..n * n).map(|_| rng.next_range_i64(-6, 6)).collect();
            let b = m(n, n, &e);
            if b.det().unwrap().is_zero() {
                continue;
            }
            // snf() internally verifies recomposition, unimodularity,
            // diagonality, positivity and the divisibility chain
            let d = snf(&b).unwrap();
            let prod: BigInt = diag_of(&d.s).iter().product();
            assert_eq!(prod, b.det().unwrap().abs());
            done += 1;
        }
    }
}
