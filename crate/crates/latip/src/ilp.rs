//! Integer linear programming for matrices with no singular rank
//! submatrices: `max { c.x : H x <= b, x integer }`.
//!
//! Pipeline: exact LP relaxation by basis enumeration, transformation of
//! the system around the optimal LP basis into a Gomory group-minimization
//! problem (congruences modulo the Smith form of the non-unit pivot block,
//! plus at most one residual inequality), a dynamic program over the group,
//! and inversion of the transform chain. A proximity-box brute force serves
//! as the independent oracle.

use std::collections::HashMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hnf::{hnf_normalize, HnfForm};
use crate::matrix::IntMatrix;
use crate::snf::{snf, SnfDecomposition};

/// `max { c.x : H x <= b, x in Z^n }` with every n x n row submatrix of H
/// nonsingular (checked eagerly).
#[derive(Clone, Debug)]
pub struct IlpInstance {
    pub h: IntMatrix,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
}

impl IlpInstance {
    pub fn new(h: IntMatrix, b: Vec<BigInt>, c: Vec<BigInt>) -> Result<Self> {
        if b.len() != h.rows() {
            return Err(Error::Dimension(format!(
                "b has {} entries for {} constraint rows",
                b.len(),
                h.rows()
            )));
        }
        if c.len() != h.cols() {
            return Err(Error::Dimension(format!(
                "c has {} entries for {} variables",
                c.len(),
                h.cols()
            )));
        }
        if h.rows() < h.cols() {
            return Err(Error::Structure(
                "need at least n constraints for n variables (pointed polyhedron)".into(),
            ));
        }
        if h.has_singular_rank_submatrix()? {
            return Err(Error::Structure(
                "some n x n row submatrix is singular; this solver requires all of them nonsingular"
                    .into(),
            ));
        }
        Ok(IlpInstance { h, b, c })
    }
}

/// An optimal basic solution of the LP relaxation.
#[derive(Clone, Debug)]
pub struct LpVertex {
    pub basis: Vec<usize>,
    pub point: Vec<BigRational>,
    pub objective: BigRational,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(LpVertex),
    Infeasible,
    Unbounded,
}

/// Integer optimum with its feasibility certificate.
#[derive(Clone, Debug)]
pub struct IlpSolution {
    pub x: Vec<BigInt>,
    pub objective: BigInt,
}

#[derive(Clone, Debug)]
pub enum IlpOutcome {
    Optimal(IlpSolution),
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct IlpReport {
    pub outcome: IlpOutcome,
    pub delta: BigInt,
    pub states_explored: usize,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rational_dot(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| BigRational::from_integer(x.clone()) * y)
        .sum()
}

/// Exact solve of `M t = rhs` for square nonsingular `M` via the adjugate.
fn solve_square(m: &IntMatrix, rhs: &[BigInt]) -> Result<Vec<BigRational>> {
    let det = m.det()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let adj = m.adjugate()?;
    let num = adj.mul_vec(rhs)?;
    Ok(num
        .into_iter()
        .map(|x| BigRational::new(x, det.clone()))
        .collect())
}

/// Enumerates all C(d, n) bases (every one nonsingular by the instance
/// invariant), keeps the feasible ones, and maximizes the objective.
///
/// Among objective-maximizing feasible bases the lexicographically smallest
/// *dual-feasible* one is returned; a feasible instance with no dual-feasible
/// basis anywhere is unbounded, and one with no feasible basis is infeasible.
pub fn solve_lp_relaxation(inst: &IlpInstance) -> Result<LpOutcome> {
    let d = inst.h.rows();
    let n = inst.h.cols();
    let mut best: Option<LpVertex> = None;
    let mut any_feasible = false;

    for basis in (0..d).combinations(n) {
        let hb = inst.h.select_rows(&basis);
        let bb: Vec<BigInt> = basis.iter().map(|&i| inst.b[i].clone()).collect();
        let point = solve_square(&hb, &bb)?;
        // primal feasibility: H v <= b on all rows
        let feasible = (0..d).all(|i| {
            let lhs = rational_dot(&inst.h.row_slice(i), &point);
            lhs <= BigRational::from_integer(inst.b[i].clone())
        });
        if !feasible {
            continue;
        }
        any_feasible = true;
        // dual feasibility: y with H_B^T y = c, y >= 0
        let y = solve_square(&hb.transpose(), &inst.c)?;
        if y.iter().any(|v| v < &BigRational::zero()) {
            continue;
        }
        let objective = rational_dot(&inst.c, &point);
        let better = match &best {
            None => true,
            Some(v) => objective > v.objective,
        };
        if better {
            best = Some(LpVertex {
                basis,
                point,
                objective,
            });
        }
    }
    match best {
        Some(v) => Ok(LpOutcome::Optimal(v)),
        None if any_feasible => Ok(LpOutcome::Unbounded),
        None => Ok(LpOutcome::Infeasible),
    }
}

/// The Gomory group-minimization problem produced by the reduction, plus
/// everything needed to invert the transform chain.
#[derive(Clone, Debug)]
pub struct GroupProblem {
    /// Residue matrix, s x (k + s); row i reduced into [0, S_ii).
    pub g_mat: IntMatrix,
    /// Residue right-hand side, length s.
    pub g_rhs: Vec<BigInt>,
    /// Diagonal of the Smith form of the pivot block B.
    pub s_diag: Vec<BigInt>,
    /// Minimization weights over (alpha', y).
    pub w: Vec<BigInt>,
    /// The residual inequality h.x <= h0 (absent when d = n).
    pub h: Option<(Vec<BigInt>, BigInt)>,
    /// Per-coordinate box bound n * Delta.
    pub box_bound: BigInt,
    /// Paper budget clamp n^2 Delta^3 (n + Delta).
    pub eta_cap: BigInt,
    context: ReduceContext,
}

#[derive(Clone, Debug)]
struct ReduceContext {
    form: HnfForm,
    /// Right-hand side in form row order.
    b_form: Vec<BigInt>,
    b_hat: Vec<BigInt>,
    delta_small: BigInt,
    /// delta * objective = obj_const - w . x_g, kept exact.
    obj_const: BigInt,
    /// Original row order: perm[i] = original index of permuted row i.
    row_order: Vec<usize>,
}

fn mod_reduce(x: &BigInt, modulus: &BigInt) -> BigInt {
    x.mod_floor(modulus)
}

/// Transforms the instance around the optimal LP basis into a group
/// problem over the nonnegative slack variables `(alpha', y)`.
pub fn reduce_to_group_problem(inst: &IlpInstance, vertex: &LpVertex) -> Result<GroupProblem> {
    let d = inst.h.rows();
    let n = inst.h.cols();
    let m_extra = d - n;
    if m_extra >= 2 {
        return Err(Error::UnsupportedShape(format!(
            "reduction handles at most one non-basis row, got {m_extra}"
        )));
    }
    // permute the basis rows to the front, preserving their order
    let mut row_order = vertex.basis.clone();
    row_order.extend((0..d).filter(|i| !vertex.basis.contains(i)));
    let h_perm = inst.h.select_rows(&row_order);
    let b_perm: Vec<BigInt> = row_order.iter().map(|&i| inst.b[i].clone()).collect();

    let form = hnf_normalize(&h_perm)?;
    let (k, s, m) = (form.k, form.s, form.m);
    if m != m_extra {
        return Err(Error::Internal(
            "basis rows did not all become pivot rows".into(),
        ));
    }
    if form.row_perm[..n].iter().any(|&r| r >= n) {
        return Err(Error::Internal(
            "pivot rows escaped the basis block".into(),
        ));
    }
    let b_form: Vec<BigInt> = form.row_perm.iter().map(|&r| b_perm[r].clone()).collect();
    let delta_small = form.delta_small();

    // b_hat = b_{k+1:k+s} - A b_{1:k}
    let b_alpha = &b_form[..k];
    let b_hat: Vec<BigInt> = (0..s)
        .map(|i| &b_form[k + i] - dot(&form.block_a.row_slice(i), b_alpha))
        .collect();

    let dec: Option<SnfDecomposition> = if s > 0 {
        Some(snf(&form.block_b)?)
    } else {
        None
    };
    let b_star = if s > 0 {
        form.block_b.adjugate()?
    } else {
        IntMatrix::identity(1) // unused when s = 0
    };

    // G = (-P A mod S | P mod S), g = P b_hat mod S
    let mut g_mat = IntMatrix::zeros(s.max(1), k + s);
    let mut g_rhs = Vec::with_capacity(s);
    let mut s_diag = Vec::with_capacity(s);
    if let Some(dec) = &dec {
        for i in 0..s {
            let si = dec.s.get(i, i).clone();
            for j in 0..k {
                let mut acc = BigInt::zero();
                for t in 0..s {
                    acc += dec.p.get(i, t) * form.block_a.get(t, j);
                }
                g_mat.set(i, j, mod_reduce(&(-acc), &si));
            }
            for j in 0..s {
                g_mat.set(i, k + j, mod_reduce(dec.p.get(i, j), &si));
            }
            let mut acc = BigInt::zero();
            for t in 0..s {
                acc += dec.p.get(i, t) * &b_hat[t];
            }
            g_rhs.push(mod_reduce(&acc, &si));
            s_diag.push(si);
        }
    }

    // objective split c_tilde = U^T c = (c_alpha; c_beta) in form column order
    let c_tilde = form.col_transform.transpose().mul_vec(&inst.c)?;
    let (c_alpha, c_beta) = c_tilde.split_at(k);
    // w = (delta c_alpha - A^T B*^T c_beta, B*^T c_beta)
    let bstar_t_cb: Vec<BigInt> = if s > 0 {
        b_star.transpose().mul_vec(&c_beta.to_vec())?
    } else {
        Vec::new()
    };
    let mut w: Vec<BigInt> = (0..k)
        .map(|j| {
            let mut acc = &delta_small * &c_alpha[j];
            for i in 0..s {
                acc -= form.block_a.get(i, j) * &bstar_t_cb[i];
            }
            acc
        })
        .collect();
    w.extend(bstar_t_cb.iter().cloned());
    if w.iter().any(|x| x.is_negative()) {
        return Err(Error::Internal(
            "negative group weight despite a dual-feasible basis".into(),
        ));
    }

    // residual row: h = (Bbar B* A - delta Abar, -Bbar B*), h0 = delta b_hat_d - Bbar B* b_hat
    let h = if m == 1 {
        let bbar_bstar: Vec<BigInt> = (0..s)
            .map(|j| {
                let mut acc = BigInt::zero();
                for t in 0..s {
                    acc += form.block_bbar.get(0, t) * b_star.get(t, j);
                }
                acc
            })
            .collect();
        let mut hv: Vec<BigInt> = (0..k)
            .map(|j| {
                let mut acc = BigInt::zero();
                for t in 0..s {
                    acc += &bbar_bstar[t] * form.block_a.get(t, j);
                }
                acc - &delta_small * form.block_abar.get(0, j)
            })
            .collect();
        hv.extend(bbar_bstar.iter().map(|x| -x));
        let b_hat_d = &b_form[n] - dot(&form.block_abar.row_slice(0), b_alpha);
        let h0 = &delta_small * b_hat_d - dot(&bbar_bstar, &b_hat);
        Some((hv, h0))
    } else {
        None
    };

    let delta = inst.h.max_rank_minor()?;
    let box_bound = BigInt::from(n as u64) * &delta;
    let eta_cap = BigInt::from((n * n) as u64)
        * delta.clone().pow(3)
        * (BigInt::from(n as u64) + &delta);

    // delta * objective = obj_const - w . x_g
    let obj_const = {
        let mut acc = &delta_small * dot(c_alpha, b_alpha);
        if s > 0 {
            let bstar_bhat = b_star.mul_vec(&b_hat)?;
            acc += dot(c_beta, &bstar_bhat);
        }
        acc
    };

    Ok(GroupProblem {
        g_mat,
        g_rhs,
        s_diag,
        w,
        h,
        box_bound,
        eta_cap,
        context: ReduceContext {
            form,
            b_form,
            b_hat,
            delta_small,
            obj_const,
            row_order,
        },
    })
}

type GroupKey = (usize, Vec<BigInt>, BigInt);

/// Dynamic program over `sigma(l, gamma, eta)`: minimize `w_{1:l} . x` over
/// `x in Z_+^l`, `x_i <= n Delta`, `G_{*,1:l} x = gamma (mod S)`,
/// `h_{1:l} x <= eta`. Returns the minimizing vector or `None` if infeasible.
pub fn group_dp_solve(gp: &GroupProblem) -> Result<(Option<Vec<BigInt>>, usize)> {
    let nv = gp.w.len();
    let s = gp.s_diag.len();
    let (hv, h0): (Vec<BigInt>, BigInt) = match &gp.h {
        Some((hv, h0)) => (hv.clone(), h0.clone().min(gp.eta_cap.clone())),
        None => (vec![BigInt::zero(); nv], BigInt::zero()),
    };
    // prefix extremes of h_{1:l} x over the capped box, for state
    // canonicalization: eta above the max is inactive, below the min is
    // infeasible
    let mut max_lhs = vec![BigInt::zero(); nv + 1];
    let mut min_lhs = vec![BigInt::zero(); nv + 1];
    for l in 1..=nv {
        let pos = hv[l - 1].clone().max(BigInt::zero()) * &gp.box_bound;
        let neg = hv[l - 1].clone().min(BigInt::zero()) * &gp.box_bound;
        max_lhs[l] = &max_lhs[l - 1] + pos;
        min_lhs[l] = &min_lhs[l - 1] + neg;
    }

    struct Dp<'a> {
        gp: &'a GroupProblem,
        hv: Vec<BigInt>,
        max_lhs: Vec<BigInt>,
        min_lhs: Vec<BigInt>,
        memo: HashMap<GroupKey, Option<(BigInt, BigInt)>>, // value, chosen z
    }

    impl Dp<'_> {
        fn sigma(&mut self, l: usize, gamma: &[BigInt], eta: &BigInt) -> Result<Option<BigInt>> {
            if eta < &self.min_lhs[l] {
                return Ok(None);
            }
            let eta_key = eta.clone().min(self.max_lhs[l].clone());
            if l == 0 {
                return Ok(if gamma.iter().all(|g| g.is_zero()) {
                    Some(BigInt::zero())
                } else {
                    None
                });
            }
            let key = (l, gamma.to_vec(), eta_key.clone());
            if let Some(entry) = self.memo.get(&key) {
                return Ok(entry.as_ref().map(|(v, _)| v.clone()));
            }
            if self.memo.len() > 8_000_000 {
                return Err(Error::Resource(format!(
                    "group DP exceeded state capacity ({} states live)",
                    self.memo.len()
                )));
            }
            let mut best: Option<(BigInt, BigInt)> = None;
            let mut z = BigInt::zero();
            while z <= self.gp.box_bound {
                let gamma_sub: Vec<BigInt> = gamma
                    .iter()
                    .enumerate()
                    .map(|(i, g)| mod_reduce(&(g - &z * self.gp.g_mat.get(i, l - 1)), &self.gp.s_diag[i]))
                    .collect();
                let eta_sub = &eta_key - &z * &self.hv[l - 1];
                if let Some(sub) = self.sigma(l - 1, &gamma_sub, &eta_sub)? {
                    let val = sub + &z * &self.gp.w[l - 1];
                    if best.as_ref().map_or(true, |(b, _)| &val < b) {
                        best = Some((val, z.clone()));
                    }
                }
                z += 1;
            }
            self.memo.insert(key, best.clone());
            Ok(best.map(|(v, _)| v))
        }
    }

    let mut dp = Dp {
        gp,
        hv,
        max_lhs,
        min_lhs,
        memo: HashMap::new(),
    };
    let top_gamma = gp.g_rhs.clone();
    let top_eta = h0;
    let value = dp.sigma(nv, &top_gamma, &top_eta)?;
    let states = dp.memo.len();
    let Some(_) = value else {
        return Ok((None, states));
    };
    // replay the stored choices
    let mut x = vec![BigInt::zero(); nv];
    let mut gamma = top_gamma;
    let mut eta = top_eta;
    for l in (1..=nv).rev() {
        let eta_key = eta.clone().min(dp.max_lhs[l].clone());
        let entry = dp
            .memo
            .get(&(l, gamma.clone(), eta_key.clone()))
            .and_then(|e| e.as_ref())
            .ok_or_else(|| Error::Internal("group DP replay missed a state".into()))?;
        let z = entry.1.clone();
        for i in 0..s {
            gamma[i] = mod_reduce(&(&gamma[i] - &z * gp.g_mat.get(i, l - 1)), &gp.s_diag[i]);
        }
        eta = &eta_key - &z * &dp.hv[l - 1];
        x[l - 1] = z;
    }
    Ok((Some(x), states))
}

/// Inverts the transform chain: splits the group solution into
/// `(alpha', y)`, recovers `beta` by exact triangular substitution,
/// un-applies the normal-form coordinate change, and re-verifies
/// feasibility and the objective identity.
pub fn recover_solution(
    inst: &IlpInstance,
    gp: &GroupProblem,
    group_x: &[BigInt],
) -> Result<IlpSolution> {
    let ctx = &gp.context;
    let form = &ctx.form;
    let (k, s) = (form.k, form.s);
    if group_x.len() != k + s {
        return Err(Error::Dimension("group solution has wrong length".into()));
    }
    let (alpha_slack, y) = group_x.split_at(k);
    // alpha = b_{1:k} - alpha'
    let alpha: Vec<BigInt> = (0..k).map(|j| &ctx.b_form[j] - &alpha_slack[j]).collect();
    // B beta = b_hat + A alpha' - y, lower triangular, exact
    let mut beta = vec![BigInt::zero(); s];
    for i in 0..s {
        let mut rhs = ctx.b_hat[i].clone() - &y[i];
        for j in 0..k {
            rhs += form.block_a.get(i, j) * &alpha_slack[j];
        }
        for j in 0..i {
            rhs -= form.block_b.get(i, j) * &beta[j];
        }
        let (q, r) = rhs.div_rem(form.block_b.get(i, i));
        if !r.is_zero() {
            return Err(Error::Internal(
                "beta is fractional: group congruence failed to enforce integrality".into(),
            ));
        }
        beta[i] = q;
    }
    let mut t_form = alpha;
    t_form.extend(beta);
    let x = form.coeffs_to_input(&t_form)?;
    // independent feasibility re-check on the original system
    let hx = inst.h.mul_vec(&x)?;
    for i in 0..inst.h.rows() {
        if hx[i] > inst.b[i] {
            return Err(Error::Internal(format!(
                "recovered point violates constraint {i}"
            )));
        }
    }
    let objective = dot(&inst.c, &x);
    // objective identity: delta * obj = obj_const - w . x_g
    let lhs = &ctx.delta_small * &objective;
    let rhs = &ctx.obj_const - dot(&gp.w, group_x);
    if lhs != rhs {
        return Err(Error::Internal(
            "objective identity broke across the reduction".into(),
        ));
    }
    let _ = &ctx.row_order; // retained for diagnostics
    Ok(IlpSolution { x, objective })
}

/// Proximity-box oracle: enumerates every integer point within `n Delta`
/// of the LP vertex in the sup norm, keeping feasible maximizers. A feasible
/// instance with a bounded LP always has an optimal integer point inside
/// the box, so an empty box certifies integer infeasibility.
pub fn brute_force_ilp(inst: &IlpInstance, vertex: &LpVertex) -> Result<Option<IlpSolution>> {
    let n = inst.h.cols();
    let delta = inst.h.max_rank_minor()?;
    let radius = BigRational::from_integer(BigInt::from(n as u64) * delta);
    let lo: Vec<BigInt> = vertex
        .point
        .iter()
        .map(|v| (v - &radius).ceil().to_integer())
        .collect();
    let hi: Vec<BigInt> = vertex
        .point
        .iter()
        .map(|v| (v + &radius).floor().to_integer())
        .collect();
    let mut count = BigInt::one();
    for j in 0..n {
        count *= &hi[j] - &lo[j] + 1;
    }
    if count > BigInt::from(200_000_000u64) {
        return Err(Error::Resource(format!(
            "oracle box holds {count} points"
        )));
    }

    let mut best: Option<IlpSolution> = None;
    let mut x = lo.clone();
    'scan: loop {
        let hx = inst.h.mul_vec(&x)?;
        let feasible = (0..inst.h.rows()).all(|i| hx[i] <= inst.b[i]);
        if feasible {
            let objective = dot(&inst.c, &x);
            let better = match &best {
                None => true,
                Some(b) => objective > b.objective,
            };
            if better {
                best = Some(IlpSolution {
                    x: x.clone(),
                    objective,
                });
            }
        }
        // odometer increment
        for j in (0..n).rev() {
            if x[j] < hi[j] {
                x[j] += 1;
                continue 'scan;
            }
            x[j] = lo[j].clone();
        }
        break;
    }
    Ok(best)
}

/// Full pipeline with optional oracle cross-check.
pub fn solve_ilp(inst: &IlpInstance, cross_check: bool) -> Result<IlpReport> {
    let delta = inst.h.max_rank_minor()?;
    let vertex = match solve_lp_relaxation(inst)? {
        LpOutcome::Optimal(v) => v,
        LpOutcome::Infeasible => {
            return Ok(IlpReport {
                outcome: IlpOutcome::Infeasible,
                delta,
                states_explored: 0,
            })
        }
        LpOutcome::Unbounded => {
            return Ok(IlpReport {
                outcome: IlpOutcome::Unbounded,
                delta,
                states_explored: 0,
            })
        }
    };
    let gp = reduce_to_group_problem(inst, &vertex)?;
    let (group_x, states) = group_dp_solve(&gp)?;
    let outcome = match group_x {
        Some(xg) => IlpOutcome::Optimal(recover_solution(inst, &gp, &xg)?),
        None => IlpOutcome::Infeasible,
    };
    if cross_check {
        let oracle = brute_force_ilp(inst, &vertex)?;
        match (&outcome, &oracle) {
            (IlpOutcome::Optimal(a), Some(b)) if a.objective == b.objective => {}
            (IlpOutcome::Infeasible, None) => {}
            _ => {
                return Err(Error::Internal(format!(
                    "cross-check mismatch: solver {outcome:?} vs oracle {oracle:?}"
                )))
            }
        }
    }
    Ok(IlpReport {
        outcome,
        delta,
        states_explored: states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn vi(e: &[i64]) -> Vec<BigInt> {
        e.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn inst(h: IntMatrix, b: &[i64], c: &[i64]) -> IlpInstance {
        IlpInstance::new(h, vi(b), vi(c)).unwrap()
    }

    #[test]
    fn lp_one_variable() {
        // 2x <= 3, -x <= 0, max x: vertex 3/2 at basis {0}
        let i = inst(m(2, 1, &[2, -1]), &[3, 0], &[1]);
        match solve_lp_relaxation(&i).unwrap() {
            LpOutcome::Optimal(v) => {
                assert_eq!(v.basis, vec![0]);
                assert_eq!(v.point[0], BigRational::new(BigInt::from(3), BigInt::from(2)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lp_two_variable() {
        let i = inst(
            m(3, 2, &[1, 0, 0, 1, -1, -1]),
            &[5, 5, -3],
            &[1, 1],
        );
        match solve_lp_relaxation(&i).unwrap() {
            LpOutcome::Optimal(v) => {
                assert_eq!(v.objective, BigRational::from_integer(BigInt::from(10)));
                assert_eq!(v.point, vec![
                    BigRational::from_integer(BigInt::from(5)),
                    BigRational::from_integer(BigInt::from(5)),
                ]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lp_infeasible_and_unbounded() {
        // x <= 0 and -x <= -1: infeasible
        let i = inst(m(2, 1, &[1, -1]), &[0, -1], &[1]);
        assert!(matches!(solve_lp_relaxation(&i).unwrap(), LpOutcome::Infeasible));
        // -x <= 0, max x: unbounded (single basis feasible, not dual feasible)
        let i = inst(m(1, 1, &[-1]), &[0], &[1]);
        assert!(matches!(solve_lp_relaxation(&i).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn ilp_one_variable_group_path() {
        // 2x <= 3, -x <= 0, max x -> x = 1
        let i = inst(m(2, 1, &[2, -1]), &[3, 0], &[1]);
        let r = solve_ilp(&i, true).unwrap();
        match r.outcome {
            IlpOutcome::Optimal(sol) => {
                assert_eq!(sol.x, vi(&[1]));
                assert_eq!(sol.objective, BigInt::from(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ilp_two_variable_integral_vertex() {
        let i = inst(m(3, 2, &[1, 0, 0, 1, -1, -1]), &[5, 5, -3], &[1, 1]);
        let r = solve_ilp(&i, true).unwrap();
        match r.outcome {
            IlpOutcome::Optimal(sol) => {
                assert_eq!(sol.x, vi(&[5, 5]));
                assert_eq!(sol.objective, BigInt::from(10));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ilp_square_unimodular() {
        // x <= 4, x + y <= 7 with det 1 basis; vertex integral
        let i = inst(m(2, 2, &[1, 0, 1, 1]), &[4, 7], &[1, 1]);
        let r = solve_ilp(&i, true).unwrap();
        match r.outcome {
            IlpOutcome::Optimal(sol) => assert_eq!(sol.objective, BigInt::from(7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ilp_infeasible_integer_but_feasible_lp() {
        // 2x <= 1, -2x <= -1: only x = 1/2 feasible, no integer point
        let i = inst(m(2, 1, &[2, -2]), &[1, -1], &[1]);
        let r = solve_ilp(&i, true).unwrap();
        assert!(matches!(r.outcome, IlpOutcome::Infeasible));
    }

    #[test]
    fn reduction_bound_checks() {
        let i = inst(m(2, 1, &[2, -1]), &[3, 0], &[1]);
        let LpOutcome::Optimal(v) = solve_lp_relaxation(&i).unwrap() else {
            panic!()
        };
        let gp = reduce_to_group_problem(&i, &v).unwrap();
        let delta = i.h.max_rank_minor().unwrap();
        for r in 0..gp.g_rhs.len() {
            for c in 0..gp.g_mat.cols() {
                assert!(gp.g_mat.get(r, c).abs() <= delta);
            }
            assert!(gp.g_rhs[r].abs() <= delta);
        }
        assert!(gp.w.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn m2_rejected() {
        let i = inst(m(3, 1, &[1, -1, 2]), &[3, 0, 5], &[1]);
        let LpOutcome::Optimal(v) = solve_lp_relaxation(&i).unwrap() else {
            panic!()
        };
        assert!(matches!(
            reduce_to_group_problem(&i, &v),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn brute_examples() {
        let i = inst(m(2, 1, &[2, -1]), &[3, 0], &[1]);
        let LpOutcome::Optimal(v) = solve_lp_relaxation(&i).unwrap() else {
            panic!()
        };
        let sol = brute_force_ilp(&i, &v).unwrap().unwrap();
        assert_eq!(sol.x, vi(&[1]));
    }

    #[test]
    fn instance_invariants() {
        // rows [1,0] and [2,0] and [0,1]: submatrix {[1,0],[2,0]} singular
        assert!(IlpInstance::new(m(3, 2, &[1, 0, 2, 0, 0, 1]), vi(&[1, 2, 3]), vi(&[1, 1])).is_err());
        assert!(IlpInstance::new(m(1, 2, &[1, 1]), vi(&[1]), vi(&[1, 1])).is_err());
    }
}
