//! The `extremal` command-line front end.
//!
//! Every subcommand prints one JSON object: the command's result fields plus
//! a `manifest` recording the inputs, tolerances, seed, version and wall-clock
//! time. Apart from `manifest.duration_ms` the output is a pure function of
//! the inputs. `--format csv` prints a lossy tabular projection instead.
//!
//! Exit codes: 0 on success, 2 when the input violates a mathematical
//! precondition (not PSD, infeasible, ...), 1 for usage, parse and I/O errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::applications::entropy::{min_entropy_rank2, EntropyOptions};
use crate::applications::lambda1::{max_lambda1_lowrank, Lambda1Options};
use crate::applications::pca::{moments_from_entries, pca_cover_constraints, CoverMeasurements, MomentEntry};
use crate::elliptope::{elliptope_extreme_test, hadamard_inequality_check, random_correlation, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::extremality::{
    bp_rank_bound, douglas_factor_with, extremality_rank_test, find_even_perturbation, ExtremalityOptions,
    DEFAULT_WITNESS_FLOOR, WITNESS_NORM,
};
use crate::instances::run_oracle_comparison;
use crate::linalg::{eigh, Field, HermitianMatrix, DEFAULT_TOL, HERMITIAN_REJECT_TOL};
use crate::spectrahedron::{membership, Spectrahedron};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "extremal", about = "Extreme points of spectrahedra", disable_version_flag = true)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Feasibility / PSD tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Absolute singular-value threshold for rank decisions on P.
    #[arg(long = "rank-tol", global = true)]
    rank_tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `real` or `complex`.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gram rank test for extremality.
    CheckExtreme {
        #[arg(long)]
        spectrahedron: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Dimension of the smallest face containing the point.
    FacialDim {
        #[arg(long)]
        spectrahedron: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Even perturbation witness `P +/- H`, if one exists.
    Perturb {
        #[arg(long)]
        spectrahedron: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// `X` with `H = sqrt(P) X sqrt(P)`.
    DouglasFactor {
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        perturbation: PathBuf,
    },
    /// Extremality of a correlation matrix in the elliptope.
    ElliptopeCheck {
        #[arg(long)]
        point: PathBuf,
    },
    /// Rank of the Hadamard square against the rank bounds.
    HadamardCheck {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Seeded random correlation matrix of a given rank.
    RandomCorrelation {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
    },
    /// Largest rank an extreme point can have.
    BpBound {
        #[arg(long)]
        constraints: usize,
    },
    /// Low-rank lower bound for `max lambda_1` over a spectrahedron or an interval-cover problem.
    SolveLambda1 {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long = "rank-bound")]
        rank_bound: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Rank-2 entropy minimization under position moments.
    SolveEntropy {
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Comma-separated `m1,m2,m3`.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        moments: Option<Vec<f64>>,
        #[arg(long = "basis-size")]
        basis_size: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long = "rank-one")]
        rank_one: bool,
    },
    /// Rank test vs. null-space witness on a seeded random suite.
    OracleCompare {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long = "max-n", default_value_t = 8)]
        max_n: usize,
        /// Include per-instance records in the JSON report.
        #[arg(long)]
        records: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckExtreme { .. } => "check-extreme",
            Command::FacialDim { .. } => "facial-dim",
            Command::Perturb { .. } => "perturb",
            Command::DouglasFactor { .. } => "douglas-factor",
            Command::ElliptopeCheck { .. } => "elliptope-check",
            Command::HadamardCheck { .. } => "hadamard-check",
            Command::RandomCorrelation { .. } => "random-correlation",
            Command::BpBound { .. } => "bp-bound",
            Command::SolveLambda1 { .. } => "solve-lambda1",
            Command::SolveEntropy { .. } => "solve-entropy",
            Command::OracleCompare { .. } => "oracle-compare",
        }
    }
}

/// Provenance block embedded in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub tolerances: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    pub field: Option<Field>,
    pub version: String,
    pub duration_ms: f64,
}

/// Problem file for `solve-lambda1`: either an explicit spectrahedron or an interval cover.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lambda1Problem {
    #[serde(default)]
    pub spectrahedron: Option<Spectrahedron>,
    #[serde(default)]
    pub cover: Option<CoverProblem>,
    #[serde(default)]
    pub rank_bound: Option<usize>,
    #[serde(default)]
    pub solver: SolverSettings,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverProblem {
    pub intervals: Vec<(f64, f64)>,
    pub p: usize,
    #[serde(default)]
    pub cell_degree: Option<usize>,
    #[serde(default)]
    pub trace_target: Option<f64>,
    #[serde(default)]
    pub moments: Option<Vec<MomentEntry>>,
    /// Generate `beta` from a covariance kernel instead: `"brownian"` (`min(s,t)`)
    /// or `"exponential"` (`exp(-|s-t|)`).
    #[serde(default)]
    pub planted_kernel: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub step: Option<f64>,
    pub restore_every: Option<usize>,
    pub polish_iters: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyProblem {
    pub moments: [f64; 3],
    pub basis_size: usize,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub outer_rounds: Option<usize>,
    #[serde(default)]
    pub rank_one: Option<bool>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A matrix file, or any report that carries one under `"matrix"`.
fn read_matrix(path: &Path) -> Result<HermitianMatrix> {
    let mut v: Value = read_json(path)?;
    if let Some(inner) = v.get_mut("matrix") {
        v = inner.take();
    }
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn with_field(c: Spectrahedron, field: Option<Field>) -> Result<Spectrahedron> {
    match field {
        Some(f) if f != c.field() => Spectrahedron::new(f, c.n(), c.constraints().to_vec()),
        _ => Ok(c),
    }
}

fn kernel(name: &str) -> Result<fn(f64, f64) -> f64> {
    match name {
        "brownian" => Ok(|s, t| s.min(t)),
        "exponential" => Ok(|s, t| (-(s - t).abs()).exp()),
        other => Err(Error::Parse(format!("unknown planted kernel `{other}`"))),
    }
}

struct Ctx {
    common: Common,
    inputs: BTreeMap<String, String>,
    table: Option<Vec<Value>>,
}

impl Ctx {
    fn tol(&self) -> f64 {
        self.common.tol.unwrap_or(DEFAULT_TOL)
    }

    fn ext_opts(&self) -> ExtremalityOptions {
        ExtremalityOptions { rank_tol: self.common.rank_tol, ..ExtremalityOptions::with_tol(self.tol()) }
    }

    fn input(&mut self, key: &str, path: &Path) -> PathBuf {
        self.inputs.insert(key.into(), path.display().to_string());
        path.to_path_buf()
    }

    fn load_problem(&mut self, s: &Path, p: &Path) -> Result<(Spectrahedron, HermitianMatrix)> {
        let c: Spectrahedron = read_json(&self.input("spectrahedron", s))?;
        let c = with_field(c, self.common.field)?;
        let p = read_matrix(&self.input("point", p))?;
        Ok((c, p))
    }
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<Value> {
    let tol = ctx.tol();
    match cmd {
        Command::CheckExtreme { spectrahedron, point } => {
            let (c, p) = ctx.load_problem(spectrahedron, point)?;
            to_value(&extremality_rank_test(&p, &c, &ctx.ext_opts())?)
        }
        Command::FacialDim { spectrahedron, point } => {
            let (c, p) = ctx.load_problem(spectrahedron, point)?;
            let rep = extremality_rank_test(&p, &c, &ctx.ext_opts())?;
            Ok(json!({
                "facial_dimension": rep.facial_dimension,
                "dim_x": rep.dim_x,
                "gram_rank": rep.gram_rank,
                "rank_p": rep.rank_p,
                "is_extreme": rep.is_extreme,
            }))
        }
        Command::Perturb { spectrahedron, point } => {
            let (c, p) = ctx.load_problem(spectrahedron, point)?;
            let w = find_even_perturbation(&p, &c, &ctx.ext_opts())?;
            let recheck = match &w {
                Some(w) => {
                    let pf = p.with_field(c.field())?;
                    let plus = membership(&c, &pf.add(&w.h)?, tol)?;
                    let minus = membership(&c, &pf.sub(&w.h)?, tol)?;
                    json!({ "plus_feasible": plus.feasible, "minus_feasible": minus.feasible })
                }
                None => Value::Null,
            };
            Ok(json!({ "is_extreme": w.is_none(), "witness": to_value(&w)?, "recheck": recheck }))
        }
        Command::DouglasFactor { point, perturbation } => {
            let p = read_matrix(&ctx.input("point", point))?;
            let h = read_matrix(&ctx.input("perturbation", perturbation))?;
            let field = ctx.common.field.unwrap_or(p.field().join(h.field()));
            let df = douglas_factor_with(&p.with_field(field)?, &h.with_field(field)?, tol, ctx.common.rank_tol)?;
            to_value(&df)
        }
        Command::ElliptopeCheck { point } => {
            let p = read_matrix(&ctx.input("point", point))?;
            let field = ctx.common.field.unwrap_or(p.field());
            let corr = CorrelationMatrix::new(p, tol)?;
            to_value(&elliptope_extreme_test(&corr, field, tol)?)
        }
        Command::HadamardCheck { matrix } => {
            let a = read_matrix(&ctx.input("matrix", matrix))?;
            let field = ctx.common.field.unwrap_or(a.field());
            to_value(&hadamard_inequality_check(&a, field, tol)?)
        }
        Command::RandomCorrelation { n, rank } => {
            let field = ctx.common.field.unwrap_or(Field::Real);
            let corr = random_correlation(*n, *rank, field, ctx.common.seed.unwrap_or(0))?;
            let rep = elliptope_extreme_test(&corr, field, tol)?;
            Ok(json!({ "matrix": to_value(&corr)?, "extremality": to_value(&rep)? }))
        }
        Command::BpBound { constraints } => {
            let field = ctx.common.field.unwrap_or(Field::Real);
            Ok(json!({ "max_rank": bp_rank_bound(*constraints, field), "constraints": constraints, "field": field }))
        }
        Command::SolveLambda1 { problem, rank_bound, restarts } => solve_lambda1(ctx, problem, *rank_bound, *restarts),
        Command::SolveEntropy { problem, moments, basis_size, restarts, rank_one } => {
            let mut prob = match problem {
                Some(path) => read_json::<EntropyProblem>(&ctx.input("problem", path))?,
                None => EntropyProblem {
                    moments: [0.5, 1.0 / 3.0, 0.25],
                    basis_size: 8,
                    restarts: None,
                    outer_rounds: None,
                    rank_one: None,
                },
            };
            if let Some(m) = moments {
                prob.moments = [m[0], m[1], m[2]];
            }
            if let Some(b) = basis_size {
                prob.basis_size = *b;
            }
            let defaults = EntropyOptions::default();
            let opts = EntropyOptions {
                restarts: restarts.or(prob.restarts).unwrap_or(defaults.restarts),
                outer_rounds: prob.outer_rounds.unwrap_or(defaults.outer_rounds),
                seed: ctx.common.seed.unwrap_or(0),
                tol,
                rank_one: *rank_one || prob.rank_one.unwrap_or(false),
                field: ctx.common.field.unwrap_or(Field::Complex),
                ..defaults
            };
            let res = min_entropy_rank2(prob.moments, prob.basis_size, &opts)?;
            ctx.table = Some(res.solve.traces.iter().map(to_value).collect::<Result<_>>()?);
            let mut v = to_value(&res)?;
            v["options"] = to_value(&opts)?;
            v["moments"] = json!(prob.moments);
            v["basis_size"] = json!(prob.basis_size);
            Ok(v)
        }
        Command::OracleCompare { count, max_n, records } => {
            let summary = run_oracle_comparison(*count, ctx.common.seed.unwrap_or(0), *max_n, &ctx.ext_opts())?;
            ctx.table = Some(summary.records.iter().map(to_value).collect::<Result<_>>()?);
            let mut v = to_value(&summary)?;
            if !records {
                v.as_object_mut().expect("summary is an object").remove("records");
            }
            v["max_n"] = json!(max_n);
            Ok(v)
        }
    }
}

fn solve_lambda1(ctx: &mut Ctx, path: &Path, rank_bound: Option<usize>, restarts: Option<usize>) -> Result<Value> {
    let tol = ctx.tol();
    let prob: Lambda1Problem = read_json(&ctx.input("problem", path))?;
    let mut extra = Map::new();
    let (c, default_rank, source) = match (prob.spectrahedron, prob.cover) {
        (Some(c), None) => {
            let c = with_field(c, ctx.common.field)?;
            let bound = bp_rank_bound(c.len(), c.field());
            (c, bound, "bp_rank_bound")
        }
        (None, Some(cover)) => {
            let (trace, moments) = match (&cover.moments, &cover.planted_kernel) {
                (Some(entries), None) => (
                    cover.trace_target.ok_or_else(|| Error::Parse("cover problem needs trace_target".into()))?,
                    moments_from_entries(entries),
                ),
                (None, Some(name)) => {
                    let meas = CoverMeasurements::new(&cover.intervals, cover.p, cover.cell_degree)?;
                    let planted = meas.basis.kernel_matrix(kernel(name)?, meas.basis.per_cell + 8);
                    let lambda = eigh(&HermitianMatrix::from_real(&planted)?)?.max_eigenvalue();
                    extra.insert("planted_lambda1".into(), json!(lambda));
                    let (t, m) = meas.moments_of(&planted);
                    (cover.trace_target.unwrap_or(t), m)
                }
                _ => return Err(Error::Parse("cover problem needs exactly one of moments or planted_kernel".into())),
            };
            let cc = pca_cover_constraints(&cover.intervals, cover.p, trace, &moments, cover.cell_degree)?;
            extra.insert(
                "cover".into(),
                json!({
                    "r": cover.intervals.len(),
                    "p": cover.p,
                    "basis_size": cc.spectrahedron.n(),
                    "constraint_count": cc.constraint_count,
                    "unsymmetrized_count": cc.unsymmetrized_count,
                    "rank_formula": cc.rank_formula,
                    "rank_formula_bound": cc.rank_formula_bound,
                    "count_rank_bound": cc.count_rank_bound,
                }),
            );
            (cc.spectrahedron, cc.rank_formula_bound, "rank_formula_bound")
        }
        _ => return Err(Error::Parse("problem needs exactly one of spectrahedron or cover".into())),
    };
    let (rank, source) = match rank_bound.or(prob.rank_bound) {
        Some(k) => (k, "explicit"),
        None => (default_rank.max(1), source),
    };
    let d = Lambda1Options::default();
    let s = &prob.solver;
    let opts = Lambda1Options {
        restarts: restarts.or(s.restarts).unwrap_or(d.restarts),
        max_iters: s.max_iters.unwrap_or(d.max_iters),
        step: s.step.unwrap_or(d.step),
        restore_every: s.restore_every.unwrap_or(d.restore_every),
        polish_iters: s.polish_iters.unwrap_or(d.polish_iters),
        seed: ctx.common.seed.unwrap_or(0),
        tol,
        ..d
    };
    let res = max_lambda1_lowrank(&c, rank, &opts)?;
    let ext = extremality_rank_test(&res.p_opt, &c, &ctx.ext_opts()).ok();
    ctx.table = Some(res.traces.iter().map(to_value).collect::<Result<_>>()?);
    let mut v = Map::new();
    v.insert("solve".into(), to_value(&res)?);
    v.insert("rank_bound_source".into(), json!(source));
    v.insert("options".into(), to_value(&opts)?);
    v.insert("extremality".into(), to_value(&ext)?);
    v.extend(extra);
    Ok(Value::Object(v))
}

fn manifest(cmd: &Command, ctx: &Ctx, duration_ms: f64) -> RunManifest {
    let opt = |x: Option<f64>| x.map(Value::from).unwrap_or_else(|| json!("default"));
    let mut tolerances = BTreeMap::new();
    tolerances.insert("tol".into(), json!(ctx.tol()));
    tolerances.insert("rank_tol".into(), opt(ctx.common.rank_tol));
    tolerances.insert("gram_tol".into(), json!("default"));
    tolerances.insert("witness_floor".into(), json!(DEFAULT_WITNESS_FLOOR));
    RunManifest {
        command: cmd.name().into(),
        inputs: ctx.inputs.clone(),
        tolerances,
        seed: ctx.common.seed,
        field: ctx.common.field,
        version: VERSION.into(),
        duration_ms,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(_) => {}
        Value::String(s) => {
            out.insert(prefix.into(), s.clone());
        }
        Value::Null => {
            out.insert(prefix.into(), String::new());
        }
        other => {
            out.insert(prefix.into(), other.to_string());
        }
    }
}

fn render_csv(result: &Value, table: Option<&[Value]>) -> Result<String> {
    let rows: Vec<BTreeMap<String, String>> = match table {
        Some(t) if !t.is_empty() => t
            .iter()
            .map(|v| {
                let mut m = BTreeMap::new();
                flatten("", v, &mut m);
                m
            })
            .collect(),
        _ => {
            let mut m = BTreeMap::new();
            flatten("", result, &mut m);
            vec![m]
        }
    };
    let headers: Vec<String> = rows[0].keys().cloned().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let map_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(&headers).map_err(map_err)?;
    for r in &rows {
        w.write_record(headers.iter().map(|h| r.get(h).map(String::as_str).unwrap_or(""))).map_err(map_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn version_text() -> String {
    let rows = [
        ("tol (feasibility, PSD)", format!("{DEFAULT_TOL:e}")),
        ("rank threshold", "n * eps * sigma_max".to_string()),
        ("gram rank threshold", "m * eps * sigma_max(G)".to_string()),
        ("hermitian rejection", format!("{HERMITIAN_REJECT_TOL:e} * ||M||_F")),
        ("witness floor", format!("{DEFAULT_WITNESS_FLOOR:e} * ||P||_F")),
        ("witness operator norm", format!("{WITNESS_NORM}")),
    ];
    let mut s = format!("extremal {VERSION}\ndefault tolerances:\n");
    for (k, v) in rows {
        s.push_str(&format!("  {k:<26} {v}\n"));
    }
    s
}

/// Run the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    if args.len() == 2 && (args[1] == "--version" || args[1] == "-V") {
        let _ = out.write_all(version_text().as_bytes());
        return 0;
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let start = Instant::now();
    let mut ctx = Ctx { common: cli.common.clone(), inputs: BTreeMap::new(), table: None };
    let result = execute(&cli.command, &mut ctx);
    let code = match result {
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                2
            } else {
                1
            }
        }
        Ok(mut value) => {
            let m = manifest(&cli.command, &ctx, start.elapsed().as_secs_f64() * 1e3);
            let text = match cli.common.format {
                Format::Json => {
                    let obj = value.as_object_mut().expect("reports are objects");
                    obj.insert("manifest".into(), serde_json::to_value(&m).expect("manifest serializes"));
                    serde_json::to_string_pretty(&value).map(|s| s + "\n").map_err(Error::from)
                }
                Format::Csv => render_csv(&value, ctx.table.as_deref()),
            };
            match text {
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
                Ok(text) => match &cli.common.out {
                    Some(path) => match std::fs::write(path, text) {
                        Ok(()) => 0,
                        Err(e) => {
                            let _ = writeln!(err, "error: {}: {e}", path.display());
                            1
                        }
                    },
                    None => {
                        let _ = out.write_all(text.as_bytes());
                        0
                    }
                },
            }
        }
    };
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["extremal"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn bp_bound_example() {
        let (code, out, _) = call(&["bp-bound", "--constraints", "4", "--field", "complex"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["max_rank"], 2);
        assert_eq!(v["manifest"]["command"], "bp-bound");
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(call(&[]).0, 1);
    }

    #[test]
    fn version_lists_tolerances() {
        let (code, out, _) = call(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(VERSION) && out.contains("1e-8"));
    }

    #[test]
    fn random_correlation_is_seeded() {
        let a = call(&["random-correlation", "--n", "4", "--rank", "2", "--seed", "9"]);
        let b = call(&["random-correlation", "--n", "4", "--rank", "2", "--seed", "9"]);
        assert_eq!(a.0, 0);
        let strip = |s: &str| {
            let mut v: Value = serde_json::from_str(s).unwrap();
            v["manifest"]["duration_ms"] = json!(0);
            v
        };
        assert_eq!(strip(&a.1), strip(&b.1));
        assert_eq!(call(&["random-correlation", "--n", "3", "--rank", "5"]).0, 2);
    }

    #[test]
    fn csv_projection() {
        let (code, out, _) = call(&["bp-bound", "--constraints", "6", "--format", "csv"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "constraints,field,max_rank");
        assert_eq!(lines.next().unwrap(), "6,real,3");
    }

    #[test]
    fn missing_file_is_io_error() {
        let (code, _, err) = call(&["elliptope-check", "--point", "/nonexistent/p.json"]);
        assert_eq!(code, 1);
        assert!(err.contains("nonexistent"));
    }
}
