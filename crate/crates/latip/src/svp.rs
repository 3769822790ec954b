//! Exact shortest-lattice-vector solver for integral lattices.
//!
//! Three routes share the same certificate-bearing result type: a
//! duplicate-column fast path on the normal form, a two-phase dynamic
//! program over the alpha/beta coefficient split, and a branch-and-bound
//! enumeration used as the independent oracle.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bounds::{lemma2_bounds, m_constant, SvpBounds};
use crate::error::{Error, Result};
use crate::hnf::{hnf_normalize, HnfForm};
use crate::matrix::IntMatrix;

/// An SVP instance: a full-column-rank integer matrix whose columns span the
/// lattice, and a finite norm exponent `p >= 1`.
#[derive(Clone, Debug)]
pub struct SvpInstance {
    pub h: IntMatrix,
    pub p: u32,
}

impl SvpInstance {
    pub fn new(h: IntMatrix, p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::Parameter(
                "norm exponent p must be a positive integer (l_inf is unsupported)".into(),
            ));
        }
        Ok(SvpInstance { h, p })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SvpMethod {
    FastPath,
    Dp,
    Brute,
}

impl SvpMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SvpMethod::FastPath => "fast_path",
            SvpMethod::Dp => "dp",
            SvpMethod::Brute => "brute",
        }
    }
}

/// A shortest-vector certificate: nonzero coefficients `t`, the lattice
/// vector `H t`, and its exact p-th power norm.
#[derive(Clone, Debug)]
pub struct SvpSolution {
    pub coeffs: Vec<BigInt>,
    pub vector: Vec<BigInt>,
    pub norm_p: BigInt,
    pub method: SvpMethod,
}

/// Solve outcome plus solver statistics for reporting.
#[derive(Clone, Debug)]
pub struct SvpReport {
    pub solution: SvpSolution,
    pub delta: BigInt,
    pub states_explored: usize,
}

/// `sum |x_i|^p`, exact.
pub fn norm_p_pow(v: &[BigInt], p: u32) -> BigInt {
    v.iter().map(|x| x.abs().pow(p)).sum()
}

/// Smallest integer `r >= 0` with `r^p >= x` (for `x >= 0`).
fn ceil_root(x: &BigInt, p: u32) -> BigInt {
    if x <= &BigInt::zero() {
        return BigInt::zero();
    }
    let r = x.nth_root(p);
    if &r.clone().pow(p) >= x {
        r
    } else {
        r + 1
    }
}

/// Largest integer `r >= 0` with `r^p <= x`; `None` when `x < 0`.
fn floor_root(x: &BigInt, p: u32) -> Option<BigInt> {
    if x < &BigInt::zero() {
        return None;
    }
    Some(x.nth_root(p))
}

fn checked_solution(
    h: &IntMatrix,
    coeffs: Vec<BigInt>,
    expected_norm: &BigInt,
    p: u32,
    method: SvpMethod,
) -> Result<SvpSolution> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::Internal("solver produced the zero vector".into()));
    }
    let vector = h.mul_vec(&coeffs)?;
    let norm_p = norm_p_pow(&vector, p);
    if &norm_p != expected_norm {
        return Err(Error::Internal(format!(
            "certificate mismatch: recomputed norm^p {norm_p} != claimed {expected_norm}"
        )));
    }
    Ok(SvpSolution {
        coeffs,
        vector,
        norm_p,
        method,
    })
}

/// Theorem-style fast path: a zero column of the stacked `(A over Abar)`
/// block yields a vector of norm^p 1; a duplicate pair yields norm^p 2,
/// optimal because norm 1 occurs iff the stack has a zero column.
pub fn fast_path(form: &HnfForm, h: &IntMatrix, p: u32) -> Result<Option<SvpSolution>> {
    let k = form.k;
    if k == 0 {
        return Ok(None);
    }
    let stack_col = |j: usize| -> Vec<BigInt> {
        let mut col: Vec<BigInt> = (0..form.s).map(|i| form.block_a.get(i, j).clone()).collect();
        col.extend((0..form.m).map(|i| form.block_abar.get(i, j).clone()));
        col
    };
    let n = form.n();
    if let Some(j) = (0..k).find(|&j| stack_col(j).iter().all(|x| x.is_zero())) {
        let mut t_form = vec![BigInt::zero(); n];
        t_form[j] = BigInt::one();
        let coeffs = form.coeffs_to_input(&t_form)?;
        return Ok(Some(checked_solution(
            h,
            coeffs,
            &BigInt::one(),
            p,
            SvpMethod::FastPath,
        )?));
    }
    let mut cols: Vec<(Vec<BigInt>, usize)> = (0..k).map(|j| (stack_col(j), j)).collect();
    cols.sort();
    for w in cols.windows(2) {
        if w[0].0 == w[1].0 {
            let (i, j) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
            let mut t_form = vec![BigInt::zero(); n];
            t_form[i] = BigInt::one();
            t_form[j] = -BigInt::one();
            let coeffs = form.coeffs_to_input(&t_form)?;
            return Ok(Some(checked_solution(
                h,
                coeffs,
                &BigInt::from(2),
                p,
                SvpMethod::FastPath,
            )?));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Alpha,
    Beta,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct DpKey {
    phase: Phase,
    level: usize,
    v: Vec<BigInt>,
    u: Vec<BigInt>,
    budget: BigInt,
}

#[derive(Clone, Debug)]
struct Choice {
    z: BigInt,
    /// True when the level closed with all remaining coefficients zero.
    close: bool,
}

type DpEntry = Option<(BigInt, Choice)>;

const MEMO_CAP: usize = 4_000_000;
const WORK_CAP: u64 = 200_000_000;

/// The two-phase dynamic program over the normal form.
///
/// States are memoized lazily; only reachable shifts are ever touched. The
/// per-level `z` ranges are clipped by the per-coordinate coefficient bounds,
/// re-derived from the tightest certified upper bound on the optimum norm
/// (the smaller of the `M` constant and the best column of the form), which
/// is sound because the bounds hold for any upper estimate of the optimum.
pub struct DpSolver<'a> {
    form: &'a HnfForm,
    p: u32,
    /// Effective `M^p` budget for the alpha phase.
    np: BigInt,
    /// Per-coordinate beta bounds under the effective budget.
    beta_abs: Vec<BigInt>,
    /// Total l1 budget `2 (1 + Delta) M^p` under the effective budget.
    total_l1: BigInt,
    /// Largest useful |alpha coefficient|: floor p-th root of the budget.
    /// Any larger single coefficient already exceeds a known feasible value.
    alpha_abs: BigInt,
    /// fut_alpha[l][i]: max |contribution| of alpha levels 1..=l to shifted
    /// row i (s B-rows followed by m bar rows).
    fut_alpha: Vec<Vec<BigInt>>,
    /// fut_beta[l][i]: same for beta levels 1..=l plus the whole alpha phase.
    fut_beta: Vec<Vec<BigInt>>,
    memo: HashMap<DpKey, DpEntry>,
    work: u64,
}

impl<'a> DpSolver<'a> {
    pub fn new(form: &'a HnfForm, p: u32, delta: &BigInt, bounds: &SvpBounds) -> Result<Self> {
        if p == 0 {
            return Err(Error::Parameter("p must be >= 1".into()));
        }
        // Tightest valid upper bound on the optimum norm^p: the module bound
        // or the best single column of the form, whichever is smaller.
        let fm = form.form_matrix();
        let n = form.n();
        let mut col_best = (0..n)
            .map(|j| norm_p_pow(&fm.col_vec(j), p))
            .min()
            .ok_or_else(|| Error::Internal("empty form".into()))?;
        // cheap probes: single columns and pairwise sums/differences all
        // certify feasible upper bounds on the optimum norm
        for j1 in 0..n {
            let a = fm.col_vec(j1);
            for j2 in (j1 + 1)..n {
                let b = fm.col_vec(j2);
                for sb in [1i64, -1] {
                    let pair: Vec<BigInt> =
                        a.iter().zip(&b).map(|(x, y)| x + y * sb).collect();
                    col_best = col_best.min(norm_p_pow(&pair, p));
                    for j3 in (j2 + 1)..n {
                        let c = fm.col_vec(j3);
                        for sc in [1i64, -1] {
                            let triple: Vec<BigInt> = pair
                                .iter()
                                .zip(&c)
                                .map(|(x, y)| x + y * sc)
                                .collect();
                            col_best = col_best.min(norm_p_pow(&triple, p));
                        }
                    }
                }
            }
        }
        let mut np = bounds.mp.clone().min(col_best);
        if np < BigInt::one() {
            np = BigInt::one();
        }
        let m_half = BigRational::from_integer(ceil_root(&np, p)) / BigInt::from(2);
        let m_half = m_half.min(bounds.m_half.clone());
        let base = BigRational::from_integer(np.clone()) + &m_half;
        let beta_abs: Vec<BigInt> = (0..form.s)
            .map(|i| (BigRational::from_integer(BigInt::one() << i) * &base).ceil().to_integer())
            .collect();
        let total_l1 = BigInt::from(2) * (BigInt::one() + delta) * &np;
        let alpha_abs = floor_root(&np, p).unwrap_or_else(BigInt::zero).max(BigInt::one());

        // per-row future-contribution caps, used to prune states whose
        // shifted residuals can no longer be brought under the norm bound
        let (k, s, m) = (form.k, form.s, form.m);
        let rows = s + m;
        let row_entry = |i: usize, j: usize, from_b: bool| -> BigInt {
            if from_b {
                if i < s {
                    form.block_b.get(i, j).abs()
                } else {
                    form.block_bbar.get(i - s, j).abs()
                }
            } else if i < s {
                form.block_a.get(i, j).abs()
            } else {
                form.block_abar.get(i - s, j).abs()
            }
        };
        let mut fut_alpha = vec![vec![BigInt::zero(); rows]];
        for l in 1..=k {
            let prev = fut_alpha.last().unwrap().clone();
            let next: Vec<BigInt> = (0..rows)
                .map(|i| &prev[i] + row_entry(i, l - 1, false) * &alpha_abs)
                .collect();
            fut_alpha.push(next);
        }
        let mut fut_beta = vec![fut_alpha[k].clone()];
        for l in 1..=s {
            let prev = fut_beta.last().unwrap().clone();
            let next: Vec<BigInt> = (0..rows)
                .map(|i| &prev[i] + row_entry(i, l - 1, true) * &beta_abs[l - 1])
                .collect();
            fut_beta.push(next);
        }

        Ok(DpSolver {
            form,
            p,
            np,
            beta_abs,
            total_l1,
            alpha_abs,
            fut_alpha,
            fut_beta,
            memo: HashMap::new(),
            work: 0,
        })
    }

    /// True when some shifted row already exceeds everything the remaining
    /// levels can cancel plus the certified residual bound; every completion
    /// of such a state costs more than a known feasible solution.
    fn hopeless(&self, phase: Phase, l: usize, v: &[BigInt], u: &[BigInt]) -> bool {
        let fut = match phase {
            Phase::Alpha => &self.fut_alpha[l],
            Phase::Beta => &self.fut_beta[l],
        };
        let mut lower = BigInt::zero();
        for (i, x) in v.iter().chain(u.iter()).enumerate() {
            let slack = x.abs() - &fut[i];
            if slack > BigInt::zero() {
                lower += slack.pow(self.p);
                if lower > self.np {
                    return true;
                }
            }
        }
        false
    }

    /// Canonical alpha-phase budget at level `l`: clamping to the maximum
    /// usable l1 mass (`l` coefficients of magnitude at most `alpha_abs`)
    /// leaves the reachable set unchanged, collapsing equivalent states.
    fn alpha_budget(&self, l: usize, c: &BigInt) -> BigInt {
        c.clone()
            .min(&self.np * 1) // alpha budget never exceeds M^p
            .min(&self.alpha_abs * BigInt::from(l as u64))
    }

    /// Canonical beta-phase budget at level `l`: the budget also covers the
    /// whole alpha phase, so the cap is the beta per-coordinate caps for the
    /// remaining levels plus the alpha cap.
    fn beta_budget(&self, l: usize, c: &BigInt) -> BigInt {
        let mut cap = &self.alpha_abs * BigInt::from(self.form.k as u64);
        for i in 0..l {
            cap += &self.beta_abs[i];
        }
        c.clone().min(cap)
    }

    pub fn states_explored(&self) -> usize {
        self.memo.len()
    }

    fn bump(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > WORK_CAP {
            return Err(Error::Resource(format!(
                "dynamic program exceeded the work budget ({} states live)",
                self.memo.len()
            )));
        }
        if self.memo.len() > MEMO_CAP {
            return Err(Error::Resource(format!(
                "dynamic program exceeded the memo capacity ({} states)",
                self.memo.len()
            )));
        }
        Ok(())
    }

    fn a_col(&self, l: usize) -> (Vec<BigInt>, Vec<BigInt>) {
        let j = l - 1;
        let a = (0..self.form.s).map(|i| self.form.block_a.get(i, j).clone()).collect();
        let abar = (0..self.form.m).map(|i| self.form.block_abar.get(i, j).clone()).collect();
        (a, abar)
    }

    fn b_col(&self, l: usize) -> (Vec<BigInt>, Vec<BigInt>) {
        let j = l - 1;
        let b = (0..self.form.s).map(|i| self.form.block_b.get(i, j).clone()).collect();
        let bbar = (0..self.form.m).map(|i| self.form.block_bbar.get(i, j).clone()).collect();
        (b, bbar)
    }

    fn close_cost(&self, v: &[BigInt], u: &[BigInt]) -> BigInt {
        norm_p_pow(v, self.p) + norm_p_pow(u, self.p)
    }

    fn shifted(col: &[BigInt], base: &[BigInt], z: &BigInt) -> Vec<BigInt> {
        base.iter().zip(col).map(|(b, c)| b + c * z).collect()
    }

    /// `sigma(l, v, u, C)`: minimum of the alpha-phase objective over
    /// `alpha in Z^l \ {0}` with `||alpha||_1 <= C`.
    pub fn sigma(&mut self, l: usize, v: &[BigInt], u: &[BigInt], c: &BigInt) -> Result<Option<BigInt>> {
        if l == 0 || c < &BigInt::one() {
            return Ok(None);
        }
        if self.hopeless(Phase::Alpha, l, v, u) {
            return Ok(None);
        }
        let c_eff = self.alpha_budget(l, c);
        let key = DpKey {
            phase: Phase::Alpha,
            level: l,
            v: v.to_vec(),
            u: u.to_vec(),
            budget: c_eff.clone(),
        };
        if let Some(entry) = self.memo.get(&key) {
            return Ok(entry.as_ref().map(|(val, _)| val.clone()));
        }
        let (a, abar) = self.a_col(l);
        let z_cap = c_eff.clone().min(self.alpha_abs.clone());
        let mut best: Option<(BigInt, Choice)> = None;
        if l == 1 {
            let mut z_abs = BigInt::one();
            while z_abs <= z_cap {
                self.bump()?;
                let zp = z_abs.clone().pow(self.p);
                if let Some((b, _)) = &best {
                    if &zp >= b {
                        break;
                    }
                }
                for z in [z_abs.clone(), -z_abs.clone()] {
                    let val = &zp
                        + self.close_cost(&Self::shifted(&a, v, &z), &Self::shifted(&abar, u, &z));
                    if best.as_ref().map_or(true, |(b, _)| &val < b) {
                        best = Some((val, Choice { z, close: false }));
                    }
                }
                z_abs += 1;
            }
        } else {
            if let Some(sub) = self.sigma(l - 1, v, u, &c_eff)? {
                best = Some((
                    sub,
                    Choice {
                        z: BigInt::zero(),
                        close: false,
                    },
                ));
            }
            let mut z_abs = BigInt::one();
            while z_abs <= z_cap {
                self.bump()?;
                let zp = z_abs.clone().pow(self.p);
                if let Some((b, _)) = &best {
                    if &zp >= b {
                        break;
                    }
                }
                for z in [z_abs.clone(), -z_abs.clone()] {
                    let vb = Self::shifted(&a, v, &z);
                    let ub = Self::shifted(&abar, u, &z);
                    let close_val = &zp + self.close_cost(&vb, &ub);
                    let rem = &c_eff - &z_abs;
                    let sub = if rem >= BigInt::one() {
                        self.sigma(l - 1, &vb, &ub, &rem)?
                    } else {
                        None
                    };
                    let (val, close) = match sub {
                        Some(s) if &zp + &s < close_val => (&zp + s, false),
                        _ => (close_val, true),
                    };
                    if best.as_ref().map_or(true, |(b, _)| &val < b) {
                        best = Some((val, Choice { z, close }));
                    }
                }
                z_abs += 1;
            }
        }
        let entry: DpEntry = best.clone();
        self.memo.insert(key, entry);
        Ok(best.map(|(v, _)| v))
    }

    /// `sigma_bar(l, v, u, C)`: the beta-phase objective, over
    /// `alpha in Z^k`, `beta in Z^l`, `1 <= ||alpha||_1 + ||beta||_1 <= C`.
    /// Beta coefficients carry no direct `|z|^p` cost.
    pub fn sigma_bar(
        &mut self,
        l: usize,
        v: &[BigInt],
        u: &[BigInt],
        c: &BigInt,
    ) -> Result<Option<BigInt>> {
        if l == 0 || c < &BigInt::one() {
            return Ok(None);
        }
        if self.hopeless(Phase::Beta, l, v, u) {
            return Ok(None);
        }
        let c_eff = self.beta_budget(l, c);
        let key = DpKey {
            phase: Phase::Beta,
            level: l,
            v: v.to_vec(),
            u: u.to_vec(),
            budget: c_eff.clone(),
        };
        if let Some(entry) = self.memo.get(&key) {
            return Ok(entry.as_ref().map(|(val, _)| val.clone()));
        }
        let (bcol, bbar) = self.b_col(l);
        let mut best: Option<(BigInt, Choice)> = None;
        // z = 0 branch
        let zero_sub = if l == 1 {
            self.sigma(self.form.k, v, u, &c_eff)?
        } else {
            self.sigma_bar(l - 1, v, u, &c_eff)?
        };
        if let Some(sub) = zero_sub {
            best = Some((
                sub,
                Choice {
                    z: BigInt::zero(),
                    close: false,
                },
            ));
        }
        let z_cap = c_eff.clone().min(self.beta_abs[l - 1].clone());
        let mut z_abs = BigInt::one();
        while z_abs <= z_cap {
            self.bump()?;
            for z in [z_abs.clone(), -z_abs.clone()] {
                let vb = Self::shifted(&bcol, v, &z);
                let ub = Self::shifted(&bbar, u, &z);
                let close_val = self.close_cost(&vb, &ub);
                let rem = &c_eff - &z_abs;
                let sub = if rem >= BigInt::one() {
                    if l == 1 {
                        self.sigma(self.form.k, &vb, &ub, &rem)?
                    } else {
                        self.sigma_bar(l - 1, &vb, &ub, &rem)?
                    }
                } else {
                    None
                };
                let (val, close) = match sub {
                    Some(s) if s < close_val => (s, false),
                    _ => (close_val, true),
                };
                if best.as_ref().map_or(true, |(b, _)| &val < b) {
                    best = Some((val, Choice { z, close }));
                }
            }
            z_abs += 1;
        }
        let entry: DpEntry = best.clone();
        self.memo.insert(key, entry);
        Ok(best.map(|(v, _)| v))
    }

    /// Runs the DP to optimality and returns the form-coordinate coefficients.
    fn solve(&mut self) -> Result<(Vec<BigInt>, BigInt)> {
        let s = self.form.s;
        let k = self.form.k;
        let zero_v = vec![BigInt::zero(); self.form.s];
        let zero_u = vec![BigInt::zero(); self.form.m];
        let value = if s >= 1 {
            let c = self.total_l1.clone().max(BigInt::one());
            self.sigma_bar(s, &zero_v, &zero_u, &c)?
        } else {
            let c = self.np.clone().max(BigInt::one());
            self.sigma(k, &zero_v, &zero_u, &c)?
        };
        let value = value.ok_or_else(|| {
            Error::Internal("dynamic program found no solution (unit vectors must be in range)".into())
        })?;
        let coeffs = self.reconstruct()?;
        Ok((coeffs, value))
    }

    /// Replays the stored choices from the top state.
    fn reconstruct(&self) -> Result<Vec<BigInt>> {
        let (k, s) = (self.form.k, self.form.s);
        let mut alpha = vec![BigInt::zero(); k];
        let mut beta = vec![BigInt::zero(); s];

        let mut phase = Phase::Beta;
        let mut level = s;
        let mut v = vec![BigInt::zero(); s];
        let mut u = vec![BigInt::zero(); self.form.m];
        let mut budget = if s >= 1 {
            self.total_l1.clone().max(BigInt::one())
        } else {
            phase = Phase::Alpha;
            level = k;
            self.np.clone().max(BigInt::one())
        };

        loop {
            // keys are stored under the canonicalized budget
            budget = match phase {
                Phase::Beta => self.beta_budget(level, &budget),
                Phase::Alpha => self.alpha_budget(level, &budget),
            };
            let key = DpKey {
                phase,
                level,
                v: v.clone(),
                u: u.clone(),
                budget: budget.clone(),
            };
            let entry = self
                .memo
                .get(&key)
                .and_then(|e| e.as_ref())
                .ok_or_else(|| Error::Internal("reconstruction reached an unsolved state".into()))?;
            let Choice { z, close } = entry.1.clone();
            match phase {
                Phase::Beta => {
                    beta[level - 1] = z.clone();
                    let (bcol, bbar) = self.b_col(level);
                    if !z.is_zero() {
                        v = Self::shifted(&bcol, &v, &z);
                        u = Self::shifted(&bbar, &u, &z);
                        if close {
                            break;
                        }
                        budget = &budget - z.abs();
                    }
                    if level == 1 {
                        phase = Phase::Alpha;
                        level = k;
                    } else {
                        level -= 1;
                    }
                }
                Phase::Alpha => {
                    alpha[level - 1] = z.clone();
                    if level == 1 {
                        break;
                    }
                    let (acol, abar) = self.a_col(level);
                    if !z.is_zero() {
                        v = Self::shifted(&acol, &v, &z);
                        u = Self::shifted(&abar, &u, &z);
                        if close {
                            break;
                        }
                        budget = &budget - z.abs();
                    }
                    level -= 1;
                }
            }
        }
        let mut t = alpha;
        t.extend(beta);
        Ok(t)
    }
}

/// Solves the instance with the dynamic program and re-verifies the
/// certificate against the original matrix.
pub fn dp_solve(
    form: &HnfForm,
    h: &IntMatrix,
    p: u32,
    delta: &BigInt,
    bounds: &SvpBounds,
) -> Result<(SvpSolution, usize)> {
    let mut solver = DpSolver::new(form, p, delta, bounds)?;
    let (t_form, value) = solver.solve()?;
    let coeffs = form.coeffs_to_input(&t_form)?;
    let solution = checked_solution(h, coeffs, &value, p, SvpMethod::Dp)?;
    Ok((solution, solver.states_explored()))
}

/// Branch-and-bound enumeration of coefficient vectors in form coordinates,
/// exact over the l1 ball of the given radius. Independent of the sigma
/// recursions: it prunes only with the incumbent norm and the triangular
/// structure of the form.
pub fn brute_force_svp(h: &IntMatrix, p: u32, l1_radius: &BigInt) -> Result<SvpSolution> {
    if p == 0 {
        return Err(Error::Parameter("p must be >= 1".into()));
    }
    if l1_radius < &BigInt::one() {
        return Err(Error::Parameter("l1 radius must be >= 1".into()));
    }
    let form = hnf_normalize(h)?;
    let fm = form.form_matrix();
    let (k, s, m) = (form.k, form.s, form.m);
    let n = k + s;

    // Incumbent: best unit coefficient vector. Its l1 norm is 1 <= radius.
    let mut best_norm: Option<BigInt> = None;
    let mut best_t = vec![BigInt::zero(); n];
    for j in 0..n {
        let val = norm_p_pow(&fm.col_vec(j), p);
        if best_norm.as_ref().map_or(true, |b| &val < b) {
            best_norm = Some(val);
            best_t = vec![BigInt::zero(); n];
            best_t[j] = BigInt::one();
        }
    }
    let mut best_norm = best_norm.unwrap();

    struct Search<'a> {
        form: &'a HnfForm,
        p: u32,
        radius: BigInt,
        brow: Vec<BigInt>,
        barrow: Vec<BigInt>,
        t: Vec<BigInt>,
        nodes: u64,
    }

    impl Search<'_> {
        fn apply_alpha(&mut self, j: usize, z: &BigInt, sign: i32) {
            for i in 0..self.form.s {
                let d = self.form.block_a.get(i, j) * z * sign;
                self.brow[i] += d;
            }
            for i in 0..self.form.m {
                let d = self.form.block_abar.get(i, j) * z * sign;
                self.barrow[i] += d;
            }
        }

        fn apply_beta(&mut self, j: usize, z: &BigInt, sign: i32) {
            for i in j..self.form.s {
                let d = self.form.block_b.get(i, j) * z * sign;
                self.brow[i] += d;
            }
            for i in 0..self.form.m {
                let d = self.form.block_bbar.get(i, j) * z * sign;
                self.barrow[i] += d;
            }
        }

        fn alpha_level(
            &mut self,
            j: usize,
            l1_used: &BigInt,
            partial: &BigInt,
            best: &mut BigInt,
            best_t: &mut Vec<BigInt>,
        ) -> Result<()> {
            self.nodes += 1;
            if self.nodes > 500_000_000 {
                return Err(Error::Resource("oracle enumeration budget exceeded".into()));
            }
            if j == self.form.k {
                return self.beta_level(0, l1_used, partial, best, best_t);
            }
            // |alpha_j|^p must leave room for a strict improvement
            let slack = &*best - BigInt::one() - partial;
            let Some(zmax) = floor_root(&slack, self.p) else {
                return Ok(());
            };
            let zmax = zmax.min(&self.radius - l1_used);
            let mut z_abs = BigInt::zero();
            while z_abs <= zmax {
                for z in [z_abs.clone(), -z_abs.clone()] {
                    if z.is_zero() && !z_abs.is_zero() {
                        continue;
                    }
                    self.t[j] = z.clone();
                    self.apply_alpha(j, &z, 1);
                    let next_partial = partial + z_abs.clone().pow(self.p);
                    let next_used = l1_used + &z_abs;
                    self.alpha_level(j + 1, &next_used, &next_partial, best, best_t)?;
                    self.apply_alpha(j, &z, -1);
                    self.t[j] = BigInt::zero();
                    if z_abs.is_zero() {
                        break;
                    }
                }
                z_abs += 1;
            }
            Ok(())
        }

        fn beta_level(
            &mut self,
            j: usize,
            l1_used: &BigInt,
            partial: &BigInt,
            best: &mut BigInt,
            best_t: &mut Vec<BigInt>,
        ) -> Result<()> {
            let (k, s) = (self.form.k, self.form.s);
            if j == s {
                let bar: BigInt = self
                    .barrow
                    .iter()
                    .map(|x| x.abs().pow(self.p))
                    .sum();
                let total = partial + bar;
                if total < *best && self.t.iter().any(|x| !x.is_zero()) {
                    *best = total;
                    *best_t = self.t.clone();
                }
                return Ok(());
            }
            // row k+j becomes final once beta_j is set; clip it by the slack
            let slack = &*best - BigInt::one() - partial;
            let Some(row_max) = floor_root(&slack, self.p) else {
                return Ok(());
            };
            let bjj = self.form.block_b.get(j, j).clone();
            let val = self.brow[j].clone();
            // b_jj beta_j in [-row_max - val, row_max - val]
            let lo_num = -&row_max - &val;
            let hi_num = &row_max - &val;
            let mut lo = num_integer::Integer::div_ceil(&lo_num, &bjj);
            let mut hi = num_integer::Integer::div_floor(&hi_num, &bjj);
            let l1_rem = &self.radius - l1_used;
            lo = lo.max(-l1_rem.clone());
            hi = hi.min(l1_rem);
            let mut z = lo;
            while z <= hi {
                self.t[k + j] = z.clone();
                self.apply_beta(j, &z, 1);
                let row_final = self.brow[j].abs().pow(self.p);
                let next_partial = partial + row_final;
                if next_partial < *best {
                    let next_used = l1_used + z.abs();
                    self.beta_level(j + 1, &next_used, &next_partial, best, best_t)?;
                }
                self.apply_beta(j, &z, -1);
                self.t[k + j] = BigInt::zero();
                z += 1;
            }
            Ok(())
        }
    }

    let mut search = Search {
        form: &form,
        p,
        radius: l1_radius.clone(),
        brow: vec![BigInt::zero(); s],
        barrow: vec![BigInt::zero(); m],
        t: vec![BigInt::zero(); n],
        nodes: 0,
    };
    search.alpha_level(0, &BigInt::zero(), &BigInt::zero(), &mut best_norm, &mut best_t)?;

    let coeffs = form.coeffs_to_input(&best_t)?;
    checked_solution(h, coeffs, &best_norm, p, SvpMethod::Brute)
}

/// Default oracle radius: the total l1 bound of the module bounds.
pub fn default_l1_radius(h: &IntMatrix, p: u32) -> Result<BigInt> {
    let form = hnf_normalize(h)?;
    let delta = h.max_rank_minor()?;
    let mut b = m_constant(&delta, form.m, p, h.rows(), h.cols())?;
    lemma2_bounds(&mut b, &delta, form.s)?;
    Ok(b.total_l1)
}

/// Full dispatch: normalize, try the fast path, fall back to the DP.
pub fn solve(instance: &SvpInstance) -> Result<SvpReport> {
    let h = &instance.h;
    let p = instance.p;
    let form = hnf_normalize(h)?;
    let delta = h.max_rank_minor()?;
    if let Some(solution) = fast_path(&form, h, p)? {
        return Ok(SvpReport {
            solution,
            delta,
            states_explored: 0,
        });
    }
    let mut bounds = m_constant(&delta, form.m, p, h.rows(), h.cols())?;
    lemma2_bounds(&mut bounds, &delta, form.s)?;
    let (solution, states) = dp_solve(&form, h, p, &delta, &bounds)?;
    Ok(SvpReport {
        solution,
        delta,
        states_explored: states,
    })
}

/// Solve with the oracle enumeration instead of the DP.
pub fn solve_brute(instance: &SvpInstance) -> Result<SvpReport> {
    let radius = default_l1_radius(&instance.h, instance.p)?;
    let solution = brute_force_svp(&instance.h, instance.p, &radius)?;
    let delta = instance.h.max_rank_minor()?;
    Ok(SvpReport {
        solution,
        delta,
        states_explored: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn dp_norm(h: &IntMatrix, p: u32) -> BigInt {
        let form = hnf_normalize(h).unwrap();
        let delta = h.max_rank_minor().unwrap();
        let mut bounds = m_constant(&delta, form.m, p, h.rows(), h.cols()).unwrap();
        lemma2_bounds(&mut bounds, &delta, form.s).unwrap();
        dp_solve(&form, h, p, &delta, &bounds).unwrap().0.norm_p
    }

    #[test]
    fn fast_path_identity() {
        let h = IntMatrix::identity(3);
        let form = hnf_normalize(&h).unwrap();
        let sol = fast_path(&form, &h, 2).unwrap().unwrap();
        assert_eq!(sol.norm_p, b(1));
    }

    #[test]
    fn fast_path_zero_column_wins_over_duplicates() {
        let h = m(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2]);
        let form = hnf_normalize(&h).unwrap();
        let sol = fast_path(&form, &h, 2).unwrap().unwrap();
        assert_eq!(sol.norm_p, b(1));
    }

    #[test]
    fn fast_path_duplicate_columns() {
        // form with k = 3, s = 1, A = [1 1 2]: columns 1 and 2 agree
        let h = m(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 1, 2, 3]);
        let form = hnf_normalize(&h).unwrap();
        let sol = fast_path(&form, &h, 2).unwrap().unwrap();
        assert_eq!(sol.norm_p, b(2));
        let brute = brute_force_svp(&h, 2, &b(40)).unwrap();
        assert_eq!(brute.norm_p, b(2));
    }

    #[test]
    fn dp_examples() {
        assert_eq!(dp_norm(&IntMatrix::identity(2), 2), b(1));
        assert_eq!(dp_norm(&m(2, 2, &[1, 0, 0, 2]), 2), b(1));
        assert_eq!(dp_norm(&m(2, 2, &[2, 1, 0, 3]), 2), b(4));
    }

    #[test]
    fn sigma_base_values() {
        // form of [[1,0],[1,2]]: k = 1, s = 1, A = [1], B = [2]
        let h = m(2, 2, &[1, 0, 1, 2]);
        let form = hnf_normalize(&h).unwrap();
        let delta = h.max_rank_minor().unwrap();
        let mut bounds = m_constant(&delta, 0, 1, 2, 2).unwrap();
        lemma2_bounds(&mut bounds, &delta, form.s).unwrap();
        let mut solver = DpSolver::new(&form, 1, &delta, &bounds).unwrap();
        // a = (1), v = (-1), C = 1, p = 1: min(|1| + |0|, |-1| + |-2|) = 1
        let got = solver.sigma(1, &[b(-1)], &[], &b(1)).unwrap().unwrap();
        assert_eq!(got, b(1));
        // zero shift, C = 1: z = +-1 gives 1 + 1 = 2
        let got = solver.sigma(1, &[b(0)], &[], &b(1)).unwrap().unwrap();
        assert_eq!(got, b(2));
    }

    #[test]
    fn sigma_base_p2() {
        // form of [[1,0],[2,3]]: A = [2], B = [3]; a = (2), v = (0), C = 2, p = 2
        let h = m(2, 2, &[1, 0, 2, 3]);
        let form = hnf_normalize(&h).unwrap();
        let delta = h.max_rank_minor().unwrap();
        let mut bounds = m_constant(&delta, 0, 2, 2, 2).unwrap();
        lemma2_bounds(&mut bounds, &delta, form.s).unwrap();
        let mut solver = DpSolver::new(&form, 2, &delta, &bounds).unwrap();
        let got = solver.sigma(1, &[b(0)], &[], &b(2)).unwrap().unwrap();
        assert_eq!(got, b(5));
    }

    #[test]
    fn sigma_step_matches_two_variable_enumeration() {
        // k = 2: H = [I2; a-row] with a lower pivot row; enumerate directly
        let h = m(3, 3, &[1, 0, 0, 0, 1, 0, 1, 2, 3]);
        let form = hnf_normalize(&h).unwrap();
        assert_eq!(form.k, 2);
        let delta = h.max_rank_minor().unwrap();
        for p in [1u32, 2] {
            let mut bounds = m_constant(&delta, 0, p, 3, 3).unwrap();
            lemma2_bounds(&mut bounds, &delta, form.s).unwrap();
            let mut solver = DpSolver::new(&form, p, &delta, &bounds).unwrap();
            for c in 1..=4i64 {
                let got = solver.sigma(2, &[b(0)], &[], &b(c)).unwrap().unwrap();
                // direct enumeration over (a1, a2) with ||alpha||_1 <= c
                let mut best: Option<BigInt> = None;
                for a1 in -c..=c {
                    for a2 in -c..=c {
                        if a1 == 0 && a2 == 0 || a1.abs() + a2.abs() > c {
                            continue;
                        }
                        let row = form.block_a.get(0, 0) * b(a1) + form.block_a.get(0, 1) * b(a2);
                        let val = b(a1).abs().pow(p) + b(a2).abs().pow(p) + row.abs().pow(p);
                        if best.as_ref().map_or(true, |x| &val < x) {
                            best = Some(val);
                        }
                    }
                }
                assert_eq!(got, best.unwrap(), "p = {p}, c = {c}");
            }
        }
    }

    #[test]
    fn sigma_bar_matches_brute() {
        let h = m(2, 2, &[1, 0, 1, 2]);
        assert_eq!(dp_norm(&h, 2), brute_force_svp(&h, 2, &b(60)).unwrap().norm_p);
        // pure-beta optimum: lattice of [[1,0],[3,2]] has (1,1) via t = (1,-1)
        let h = m(2, 2, &[1, 0, 3, 2]);
        let expect = b(2);
        assert_eq!(dp_norm(&h, 2), expect);
        assert_eq!(brute_force_svp(&h, 2, &b(60)).unwrap().norm_p, expect);
    }

    #[test]
    fn brute_examples() {
        assert_eq!(
            brute_force_svp(&IntMatrix::identity(2), 2, &b(8)).unwrap().norm_p,
            b(1)
        );
        assert_eq!(
            brute_force_svp(&m(2, 2, &[2, 1, 0, 3]), 2, &b(40)).unwrap().norm_p,
            b(4)
        );
    }

    #[test]
    fn brute_radius_sufficiency() {
        let h = m(3, 2, &[1, 0, 0, 2, 1, 1]);
        let r = default_l1_radius(&h, 2).unwrap();
        let a = brute_force_svp(&h, 2, &r).unwrap().norm_p;
        let bb = brute_force_svp(&h, 2, &(&r + 5)).unwrap().norm_p;
        assert_eq!(a, bb);
    }

    #[test]
    fn solve_dispatch() {
        // wide identity-ish instance: fast path fires
        let inst = SvpInstance::new(IntMatrix::identity(4), 2).unwrap();
        let r = solve(&inst).unwrap();
        assert_eq!(r.solution.method, SvpMethod::FastPath);
        assert_eq!(r.solution.norm_p, b(1));

        // small dense instance: dp
        let inst = SvpInstance::new(m(2, 2, &[2, 1, 1, 2]), 2).unwrap();
        let r = solve(&inst).unwrap();
        assert_eq!(r.solution.method, SvpMethod::Dp);
        assert_eq!(r.solution.norm_p, b(2));
    }

    #[test]
    fn p_zero_rejected() {
        assert!(SvpInstance::new(IntMatrix::identity(2), 0).is_err());
    }

    #[test]
    fn solution_certificate_consistency() {
        let h = m(3, 2, &[1, 0, 0, 2, 1, 1]);
        let inst = SvpInstance::new(h.clone(), 3).unwrap();
        let r = solve(&inst).unwrap();
        let v = h.mul_vec(&r.solution.coeffs).unwrap();
        assert_eq!(v, r.solution.vector);
        assert_eq!(norm_p_pow(&v, 3), r.solution.norm_p);
    }
}
