//! Command-line front end: parse instances, dispatch solvers, emit
//! machine-readable results.
//!
//! Exit codes: 0 optimal, 2 infeasible/unbounded, 3 unsupported shape,
//! 1 any other error.

use std::io::Read as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;

use latip::bounds::{lemma1_entry_bound, lemma2_bounds, lemma3_threshold, m_constant, theorem1_threshold, verify_lemma1};
use latip::error::Error;
use latip::gen::{gen_ilp, gen_lattice, gen_nonsingular, GenSpec};
use latip::hnf::hnf_normalize;
use latip::ilp::{brute_force_ilp, solve_ilp, solve_lp_relaxation, IlpInstance, IlpOutcome, LpOutcome};
use latip::io::{format_bigint_vec, parse_bigint_vec, InstanceFile, ResultFile, Stats};
use latip::matrix::IntMatrix;
use latip::snf::snf;
use latip::svp::{brute_force_svp, default_l1_radius, fast_path, solve as svp_solve, solve_brute, SvpInstance, SvpMethod};

#[derive(Parser)]
#[command(name = "latip", version, about = "Exact SVP and ILP solvers for bounded-determinant lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SvpMethodArg {
    Auto,
    Dp,
    Fastpath,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IlpMethodArg {
    Auto,
    Group,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a shortest-vector instance
    Svp {
        /// Instance file path, or "-" for stdin
        #[arg(long)]
        input: String,
        /// Norm exponent; overrides the instance's "p" field
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, value_enum, default_value_t = SvpMethodArg::Auto)]
        method: SvpMethodArg,
        /// Also run the brute-force oracle and require agreement
        #[arg(long)]
        cross_check: bool,
        /// Result file path; stdout when omitted
        #[arg(long)]
        output: Option<String>,
    },
    /// Solve an integer linear program
    Ilp {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = IlpMethodArg::Auto)]
        method: IlpMethodArg,
        #[arg(long)]
        cross_check: bool,
        /// Fall back to the proximity-box brute force on shapes the
        /// group reduction rejects (more than one non-basis row)
        #[arg(long)]
        allow_brute_fallback: bool,
        #[arg(long)]
        output: Option<String>,
    },
    /// Print the normal form blocks of an instance matrix
    Hnf {
        #[arg(long)]
        input: String,
    },
    /// Print the Smith normal form of a square instance matrix
    Snf {
        #[arg(long)]
        input: String,
    },
    /// Print the maximum rank-order minor and the singular-submatrix check
    Delta {
        #[arg(long)]
        input: String,
    },
    /// Evaluate the entry/coefficient bounds for given parameters
    Bounds {
        #[arg(long)]
        delta: String,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        p: u32,
        /// Ambient dimension d and rank n for the M constant
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Also check Lemma 1 on an instance matrix
        #[arg(long)]
        input: Option<String>,
    },
    /// Generate a deterministic instance file
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        target_delta_max: u64,
        #[arg(long)]
        nonsingular: bool,
        /// Also attach feasible ILP data (b, c); implies --nonsingular
        #[arg(long)]
        ilp: bool,
        #[arg(long, default_value_t = 10)]
        entry_range: i64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        output: Option<String>,
    },
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn emit(output: &Option<String>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::UnsupportedShape(_) => 3,
        _ => 1,
    }
}

fn run_svp(
    input: &str,
    p_flag: Option<u32>,
    method: SvpMethodArg,
    cross_check: bool,
    output: &Option<String>,
) -> Result<u8, Error> {
    let file = InstanceFile::from_json(&read_input(input)?)?;
    let h = file.matrix()?;
    let p = p_flag
        .or(file.p)
        .ok_or_else(|| Error::Parameter("no norm exponent: set \"p\" in the instance or pass --p".into()))?;
    let inst = SvpInstance::new(h.clone(), p)?;
    let start = Instant::now();
    let report = match method {
        SvpMethodArg::Auto => svp_solve(&inst)?,
        SvpMethodArg::Brute => solve_brute(&inst)?,
        SvpMethodArg::Dp => {
            let report = svp_solve(&inst)?;
            if report.solution.method == SvpMethod::Dp {
                report
            } else {
                // force the DP even where the fast path would fire
                let form = hnf_normalize(&h)?;
                let delta = h.max_rank_minor()?;
                let mut bounds = m_constant(&delta, form.m, p, h.rows(), h.cols())?;
                lemma2_bounds(&mut bounds, &delta, form.s)?;
                let (solution, states) = latip::svp::dp_solve(&form, &h, p, &delta, &bounds)?;
                latip::svp::SvpReport {
                    solution,
                    delta,
                    states_explored: states,
                }
            }
        }
        SvpMethodArg::Fastpath => {
            let form = hnf_normalize(&h)?;
            let delta = h.max_rank_minor()?;
            let solution = fast_path(&form, &h, p)?.ok_or_else(|| {
                Error::UnsupportedShape(
                    "fast path does not fire: no zero or duplicate column in the (A; Abar) stack"
                        .into(),
                )
            })?;
            latip::svp::SvpReport {
                solution,
                delta,
                states_explored: 0,
            }
        }
    };
    if cross_check {
        let radius = default_l1_radius(&h, p)?;
        let oracle = brute_force_svp(&h, p, &radius)?;
        if oracle.norm_p != report.solution.norm_p {
            return Err(Error::Internal(format!(
                "cross-check mismatch: solver norm^p {} (coeffs {:?}) vs oracle norm^p {} (coeffs {:?})",
                report.solution.norm_p, report.solution.coeffs, oracle.norm_p, oracle.coeffs
            )));
        }
    }
    let result = ResultFile {
        problem: "svp".into(),
        method: report.solution.method.as_str().into(),
        status: "optimal".into(),
        objective: Some(report.solution.norm_p.to_string()),
        solution: Some(format_bigint_vec(&report.solution.coeffs)),
        delta: report.delta.to_string(),
        stats: Stats {
            states_explored: report.states_explored,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    };
    emit(output, &result.to_json())?;
    Ok(0)
}

fn run_ilp(
    input: &str,
    method: IlpMethodArg,
    cross_check: bool,
    allow_brute_fallback: bool,
    output: &Option<String>,
) -> Result<u8, Error> {
    let file = InstanceFile::from_json(&read_input(input)?)?;
    let h = file.matrix()?;
    let b = parse_bigint_vec(
        file.b
            .as_ref()
            .ok_or_else(|| Error::Parameter("ILP instance needs \"b\"".into()))?,
    )?;
    let c = parse_bigint_vec(
        file.c
            .as_ref()
            .ok_or_else(|| Error::Parameter("ILP instance needs \"c\"".into()))?,
    )?;
    let inst = IlpInstance::new(h, b, c)?;
    let start = Instant::now();

    let m_extra = inst.h.rows() - inst.h.cols();
    let use_brute = match method {
        IlpMethodArg::Brute => true,
        IlpMethodArg::Auto => m_extra >= 2 && allow_brute_fallback,
        IlpMethodArg::Group => false,
    };

    let (outcome, delta, states, method_name): (IlpOutcome, BigInt, usize, &str) = if use_brute {
        let delta = inst.h.max_rank_minor()?;
        match solve_lp_relaxation(&inst)? {
            LpOutcome::Infeasible => (IlpOutcome::Infeasible, delta, 0, "brute"),
            LpOutcome::Unbounded => (IlpOutcome::Unbounded, delta, 0, "brute"),
            LpOutcome::Optimal(v) => {
                let outcome = match brute_force_ilp(&inst, &v)? {
                    Some(sol) => IlpOutcome::Optimal(sol),
                    None => IlpOutcome::Infeasible,
                };
                (outcome, delta, 0, "brute")
            }
        }
    } else {
        let report = solve_ilp(&inst, cross_check)?;
        (report.outcome, report.delta, report.states_explored, "group")
    };

    let (status, objective, solution, code) = match &outcome {
        IlpOutcome::Optimal(sol) => (
            "optimal",
            Some(sol.objective.to_string()),
            Some(format_bigint_vec(&sol.x)),
            0u8,
        ),
        IlpOutcome::Infeasible => ("infeasible", None, None, 2),
        IlpOutcome::Unbounded => ("unbounded", None, None, 2),
    };
    let result = ResultFile {
        problem: "ilp".into(),
        method: method_name.into(),
        status: status.into(),
        objective,
        solution,
        delta: delta.to_string(),
        stats: Stats {
            states_explored: states,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    };
    emit(output, &result.to_json())?;
    Ok(code)
}

fn matrix_json(m: &IntMatrix) -> serde_json::Value {
    serde_json::json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": format_bigint_vec(m.entries()),
    })
}

fn run_hnf(input: &str) -> Result<u8, Error> {
    let h = InstanceFile::from_json(&read_input(input)?)?.matrix()?;
    let form = hnf_normalize(&h)?;
    let out = serde_json::json!({
        "k": form.k,
        "s": form.s,
        "m": form.m,
        "delta_small": form.delta_small().to_string(),
        "block_a": matrix_json(&form.block_a),
        "block_b": matrix_json(&form.block_b),
        "block_abar": matrix_json(&form.block_abar),
        "block_bbar": matrix_json(&form.block_bbar),
        "row_perm": form.row_perm,
        "col_perm": form.col_perm,
        "col_transform": matrix_json(&form.col_transform),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(0)
}

fn run_snf(input: &str) -> Result<u8, Error> {
    let m = InstanceFile::from_json(&read_input(input)?)?.matrix()?;
    let dec = snf(&m)?;
    let out = serde_json::json!({
        "s": matrix_json(&dec.s),
        "p": matrix_json(&dec.p),
        "q": matrix_json(&dec.q),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(0)
}

fn run_delta(input: &str) -> Result<u8, Error> {
    let m = InstanceFile::from_json(&read_input(input)?)?.matrix()?;
    let delta = m.max_rank_minor()?;
    let singular = m.has_singular_rank_submatrix()?;
    let out = serde_json::json!({
        "delta": delta.to_string(),
        "singular_submatrix": singular,
    });
    println!("{}", serde_json::to_string(&out).unwrap());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_bounds(
    delta: &str,
    s: usize,
    m: usize,
    p: u32,
    d: usize,
    n: usize,
    input: &Option<String>,
) -> Result<u8, Error> {
    let delta: BigInt = delta
        .parse()
        .map_err(|e| Error::Parse(format!("bad --delta: {e}")))?;
    if !delta.is_positive() {
        return Err(Error::Parameter("--delta must be positive".into()));
    }
    let lemma1: Vec<String> = (0..=s)
        .map(|i| lemma1_entry_bound(&delta, s, i).map(|b| b.to_string()))
        .collect::<Result<_, _>>()?;
    let mut svp_bounds = m_constant(&delta, m, p, d, n)?;
    lemma2_bounds(&mut svp_bounds, &delta, s)?;
    let mut out = serde_json::json!({
        "lemma1_bounds": lemma1,
        "mp": svp_bounds.mp.to_string(),
        "beta_abs": format_bigint_vec(&svp_bounds.beta_abs),
        "total_l1": svp_bounds.total_l1.to_string(),
        "lemma3_threshold": lemma3_threshold(&delta)?.to_string(),
        "theorem1_threshold": theorem1_threshold(&delta, m)?.to_string(),
    });
    if let Some(path) = input {
        let h = InstanceFile::from_json(&read_input(path)?)?.matrix()?;
        let form = hnf_normalize(&h)?;
        let true_delta = h.max_rank_minor()?;
        let violation = verify_lemma1(&form, &true_delta)?;
        out["lemma1_verified"] = serde_json::json!(violation.is_none());
    }
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_gen(
    n: usize,
    d: usize,
    target_delta_max: u64,
    nonsingular: bool,
    ilp: bool,
    entry_range: i64,
    seed: u64,
    output: &Option<String>,
) -> Result<u8, Error> {
    let spec = GenSpec {
        n,
        d,
        target_delta_max,
        require_nonsingular_submatrices: nonsingular || ilp,
        entry_range,
        seed,
    };
    let file = if ilp {
        let inst = gen_ilp(&spec)?;
        let mut f = InstanceFile::from_matrix(&inst.h);
        f.b = Some(format_bigint_vec(&inst.b));
        f.c = Some(format_bigint_vec(&inst.c));
        f
    } else {
        let g = if spec.require_nonsingular_submatrices {
            gen_nonsingular(&spec)?
        } else {
            gen_lattice(&spec)?
        };
        InstanceFile::from_matrix(&g.matrix)
    };
    emit(output, &file.to_json())?;
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Svp {
            input,
            p,
            method,
            cross_check,
            output,
        } => run_svp(&input, p, method, cross_check, &output),
        Command::Ilp {
            input,
            method,
            cross_check,
            allow_brute_fallback,
            output,
        } => run_ilp(&input, method, cross_check, allow_brute_fallback, &output),
        Command::Hnf { input } => run_hnf(&input),
        Command::Snf { input } => run_snf(&input),
        Command::Delta { input } => run_delta(&input),
        Command::Bounds {
            delta,
            s,
            m,
            p,
            d,
            n,
            input,
        } => run_bounds(&delta, s, m, p, d, n, &input),
        Command::Gen {
            n,
            d,
            target_delta_max,
            nonsingular,
            ilp,
            entry_range,
            seed,
            output,
        } => run_gen(n, d, target_delta_max, nonsingular, ilp, entry_range, seed, &output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
