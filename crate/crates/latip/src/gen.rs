//! Deterministic, seeded instance generators.
//!
//! All randomness flows through a fixed split-mix 64-bit generator so a
//! given seed reproduces the same instance bit-for-bit on any platform.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ilp::IlpInstance;
use crate::matrix::IntMatrix;

/// SplitMix64: the standard 64-bit mixing generator (Steele, Lea, Flood).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from the inclusive range `[lo, hi]`.
    pub fn next_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }
}

/// Parameters for the generators.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub n: usize,
    pub d: usize,
    pub target_delta_max: u64,
    pub require_nonsingular_submatrices: bool,
    pub entry_range: i64,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.d < self.n {
            return Err(Error::Parameter(format!(
                "need d >= n >= 1, got n = {}, d = {}",
                self.n, self.d
            )));
        }
        if self.target_delta_max == 0 {
            return Err(Error::Parameter("targetDeltaMax must be >= 1".into()));
        }
        if self.entry_range < 1 {
            return Err(Error::Parameter("entryRange must be >= 1".into()));
        }
        Ok(())
    }
}

/// A generated lattice basis together with its actual Delta (the maximum
/// absolute value over all n x n minors).
#[derive(Clone, Debug)]
pub struct GeneratedLattice {
    pub matrix: IntMatrix,
    pub delta: BigInt,
}

const GEN_ATTEMPTS: u64 = 2000;

/// One attempt: build a form-(2) style skeleton with pivot product at most
/// `target_delta_max`, then mix it with a few bounded unimodular row and
/// column operations. Returns `None` if the mixed matrix leaves the entry
/// range.
fn gen_attempt(spec: &GenSpec, rng: &mut SplitMix64) -> Option<IntMatrix> {
    let (n, d) = (spec.n, spec.d);
    // choose non-unit pivots with bounded product
    let mut pivots: Vec<i64> = Vec::new();
    let mut remaining = spec.target_delta_max;
    while remaining >= 2 && pivots.len() < n {
        if !pivots.is_empty() && rng.next_u64() % 2 == 0 {
            break;
        }
        let f = rng.next_range_i64(2, remaining as i64);
        pivots.push(f);
        remaining /= f as u64;
    }
    let s = pivots.len();
    let k = n - s;
    let m = d - n;

    let mut h = IntMatrix::zeros(d, n);
    for j in 0..k {
        h.set(j, j, BigInt::from(1));
    }
    for i in 0..s {
        // A row: entries below the pivot value
        for j in 0..k {
            h.set(k + i, j, BigInt::from(rng.next_range_i64(0, pivots[i] - 1)));
        }
        // B row: lower triangular, off-diagonals below the pivot
        for j in 0..i {
            h.set(k + i, k + j, BigInt::from(rng.next_range_i64(0, pivots[i] - 1)));
        }
        h.set(k + i, k + i, BigInt::from(pivots[i]));
    }
    let bar = spec.entry_range.min(2);
    for i in 0..m {
        for j in 0..n {
            h.set(n + i, j, BigInt::from(rng.next_range_i64(-bar, bar)));
        }
    }

    // bounded unimodular mixing: row ops on the left, column ops on the
    // right, with small multipliers, plus occasional swaps
    let ops = (rng.next_u64() % (2 * n as u64 + 1)) as usize;
    for _ in 0..ops {
        match rng.next_u64() % 4 {
            0 if d >= 2 => {
                let i = rng.next_range_i64(0, d as i64 - 1) as usize;
                let mut j = rng.next_range_i64(0, d as i64 - 1) as usize;
                if i == j {
                    j = (j + 1) % d;
                }
                let f = BigInt::from(rng.next_range_i64(-3, 3));
                for col in 0..n {
                    let v = h.get(i, col) + &f * h.get(j, col);
                    h.set(i, col, v);
                }
            }
            1 if n >= 2 => {
                let i = rng.next_range_i64(0, n as i64 - 1) as usize;
                let mut j = rng.next_range_i64(0, n as i64 - 1) as usize;
                if i == j {
                    j = (j + 1) % n;
                }
                let f = BigInt::from(rng.next_range_i64(-3, 3));
                for row in 0..d {
                    let v = h.get(row, i) + &f * h.get(row, j);
                    h.set(row, i, v);
                }
            }
            2 if d >= 2 => {
                let i = rng.next_range_i64(0, d as i64 - 1) as usize;
                let j = rng.next_range_i64(0, d as i64 - 1) as usize;
                for col in 0..n {
                    let a = h.get(i, col).clone();
                    let b = h.get(j, col).clone();
                    h.set(i, col, b);
                    h.set(j, col, a);
                }
            }
            _ if n >= 2 => {
                let i = rng.next_range_i64(0, n as i64 - 1) as usize;
                let j = rng.next_range_i64(0, n as i64 - 1) as usize;
                for row in 0..d {
                    let a = h.get(row, i).clone();
                    let b = h.get(row, j).clone();
                    h.set(row, i, b);
                    h.set(row, j, a);
                }
            }
            _ => {}
        }
    }

    let range = BigInt::from(spec.entry_range);
    if h.max_abs_entry() > range {
        return None;
    }
    Some(h)
}

/// Generates a rank-n integer matrix with controlled determinant structure.
pub fn gen_lattice(spec: &GenSpec) -> Result<GeneratedLattice> {
    spec.validate()?;
    let mut seeder = SplitMix64::new(spec.seed);
    for _ in 0..GEN_ATTEMPTS {
        let mut rng = SplitMix64::new(seeder.next_u64());
        let Some(h) = gen_attempt(spec, &mut rng) else {
            continue;
        };
        match h.max_rank_minor() {
            Ok(delta) if !delta.is_zero() => {
                return Ok(GeneratedLattice {
                    delta: delta.abs(),
                    matrix: h,
                })
            }
            _ => continue,
        }
    }
    Err(Error::Generation(format!(
        "no matrix within entry range {} after {} attempts",
        spec.entry_range, GEN_ATTEMPTS
    )))
}

/// Rejection-samples `gen_lattice` until no n x n submatrix is singular.
pub fn gen_nonsingular(spec: &GenSpec) -> Result<GeneratedLattice> {
    spec.validate()?;
    let mut seeder = SplitMix64::new(spec.seed ^ 0xA5A5_A5A5_5A5A_5A5A);
    for _ in 0..GEN_ATTEMPTS {
        let mut sub = spec.clone();
        sub.seed = seeder.next_u64();
        let Ok(g) = gen_lattice(&sub) else { continue };
        if !g.matrix.has_singular_rank_submatrix()? {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no nonsingular-submatrix instance after {GEN_ATTEMPTS} attempts"
    )))
}

/// Generates a feasible ILP instance: `H` has no singular rank submatrix,
/// `b = H x0 + slack` for a random integer point `x0` (so `x0` is feasible),
/// and `c` is a random objective within the entry range.
pub fn gen_ilp(spec: &GenSpec) -> Result<IlpInstance> {
    let g = gen_nonsingular(spec)?;
    let mut rng = SplitMix64::new(spec.seed ^ 0x1234_5678_9ABC_DEF0);
    let er = spec.entry_range;
    let x0: Vec<BigInt> = (0..spec.n)
        .map(|_| BigInt::from(rng.next_range_i64(-er, er)))
        .collect();
    let hx = g.matrix.mul_vec(&x0)?;
    let b: Vec<BigInt> = hx
        .into_iter()
        .map(|v| v + BigInt::from(rng.next_range_i64(0, er)))
        .collect();
    let c: Vec<BigInt> = (0..spec.n)
        .map(|_| BigInt::from(rng.next_range_i64(-er, er)))
        .collect();
    IlpInstance::new(g.matrix, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn spec(n: usize, d: usize, delta: u64, seed: u64) -> GenSpec {
        GenSpec {
            n,
            d,
            target_delta_max: delta,
            require_nonsingular_submatrices: false,
            entry_range: 10,
            seed,
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // published SplitMix64 test vector for seed 1234567
        let mut rng = SplitMix64::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
    }

    #[test]
    fn determinism() {
        let a = gen_lattice(&spec(3, 4, 6, 42)).unwrap();
        let b = gen_lattice(&spec(3, 4, 6, 42)).unwrap();
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(a.delta, b.delta);
        let c = gen_lattice(&spec(3, 4, 6, 43)).unwrap();
        assert!(a.matrix != c.matrix || a.delta != c.delta);
    }

    #[test]
    fn unimodular_when_delta_one_square() {
        for seed in 0..20 {
            let g = gen_lattice(&spec(3, 3, 1, seed)).unwrap();
            assert_eq!(g.matrix.det().unwrap().abs(), BigInt::one());
            assert!(g.delta.is_one());
        }
    }

    #[test]
    fn full_rank_and_delta_reported() {
        for seed in 0..20 {
            let g = gen_lattice(&spec(2, 4, 8, seed)).unwrap();
            assert_eq!(g.delta, g.matrix.max_rank_minor().unwrap());
            assert!(g.delta >= BigInt::one());
        }
    }

    #[test]
    fn nonsingular_property_holds() {
        for seed in 0..10 {
            let g = gen_nonsingular(&spec(2, 3, 4, seed)).unwrap();
            assert!(!g.matrix.has_singular_rank_submatrix().unwrap());
        }
    }

    #[test]
    fn ilp_instances_are_feasible_by_construction() {
        for seed in 0..5 {
            let inst = gen_ilp(&spec(2, 3, 4, seed)).unwrap();
            assert_eq!(inst.h.rows(), 3);
            assert_eq!(inst.b.len(), 3);
            assert_eq!(inst.c.len(), 2);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(gen_lattice(&spec(0, 3, 4, 1)).is_err());
        assert!(gen_lattice(&spec(3, 2, 4, 1)).is_err());
        let mut s = spec(2, 3, 0, 1);
        s.target_delta_max = 0;
        assert!(gen_lattice(&s).is_err());
    }
}
