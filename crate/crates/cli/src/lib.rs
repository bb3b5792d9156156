//! Library side of the `solvir` command: argument handling, suites and
//! report assembly. `main.rs` only forwards the process arguments to
//! [`run`].
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! and configuration errors.

pub mod config;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use solvir::algebra::{vir_bracket, AlgebraElement};
use solvir::density::DensityParams;
use solvir::gvm::{double_factorial_bound, quotient_dim_level1};
use solvir::verma::{family_lower_bound, weight_space_dim_truncated, TruncationBox};
use solvir::{LatticePoint, Scalar, Var};

use config::RunConfig;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "solvir", version, about = "Exact checks for the solenoidal Virasoro algebra and its modules")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a verification suite and emit a JSON report.
    Verify {
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Two-cochain file checked by the cocycle suite instead of the
        /// canonical cocycle.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Print the bracket of two elements in canonical text form.
    Bracket {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        /// Required rank of both operands.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Weight-space and rank tables as JSON.
    Dims {
        target: Target,
        #[command(flatten)]
        common: Common,
        /// Weight shift for `verma`, e.g. `-1,0`.
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        /// Total shift κ (rank n−1) for `gvm`.
        #[arg(long, allow_hyphen_values = true)]
        kappa: Option<String>,
        /// Level k for `verma`: shift −k·ε₁ in the box N = L = k.
        #[arg(long)]
        level: Option<i64>,
        /// Shorthand for `--spec mu1=<value>`.
        #[arg(long, allow_hyphen_values = true)]
        mu1: Option<String>,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    #[arg(long)]
    n: Option<usize>,
    /// Radius for every suite.
    #[arg(long = "box")]
    radius: Option<i64>,
    /// Radii for tables: `a..b` or a comma list.
    #[arg(long)]
    boxes: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Specializations, e.g. `mu1=2/3,a=1/2`.
    #[arg(long, allow_hyphen_values = true)]
    spec: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Jacobi,
    Cocycle,
    Density,
    Verma,
    Gvm,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Verma,
    Gvm,
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Reports go to `out` unless `--out` names a file.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn build_config(common: &Common, extra: &[(&str, Option<String>)]) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        cfg.apply_file(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let flags: Vec<(&str, Option<String>)> = vec![
        ("n", common.n.map(|v| v.to_string())),
        ("box", common.radius.map(|v| v.to_string())),
        ("boxes", common.boxes.clone()),
        ("seed", common.seed.map(|v| v.to_string())),
        ("out", common.out.as_ref().map(|p| p.display().to_string())),
        ("spec", common.spec.clone()),
        ("threads", common.threads.map(|v| v.to_string())),
    ];
    for (k, v) in flags.iter().chain(extra) {
        if let Some(v) = v {
            cfg.set(k, v).map_err(|e| e.to_string())?;
        }
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, String> {
    match cli.cmd {
        Cmd::Bracket { left, right, n } => {
            let x: AlgebraElement = left.parse().map_err(|e| format!("left operand: {e}"))?;
            let y: AlgebraElement = right.parse().map_err(|e| format!("right operand: {e}"))?;
            for (name, z) in [("left", &x), ("right", &y)] {
                if let (Some(want), Ok(Some(r))) = (n, z.rank()) {
                    if want != r {
                        return Err(format!("{name} operand has rank {r}, expected {want}"));
                    }
                }
            }
            let z = vir_bracket(&x, &y).map_err(|e| e.to_string())?;
            writeln!(out, "{z}").map_err(|e| e.to_string())?;
            Ok(EXIT_PASS)
        }
        Cmd::Verify { suite, common, input } => {
            let cfg = build_config(&common, &[("input", input.map(|p| p.display().to_string()))])?;
            let names: Vec<&str> = match suite {
                Suite::All => suites::SUITES.to_vec(),
                Suite::Jacobi => vec!["jacobi"],
                Suite::Cocycle => vec!["cocycle"],
                Suite::Density => vec!["density"],
                Suite::Verma => vec!["verma"],
                Suite::Gvm => vec!["gvm"],
            };
            let suite_name = if suite == Suite::All { "all" } else { names[0] };
            let checks = with_threads(cfg.threads, || -> Result<_, String> {
                let mut all = Vec::new();
                for s in &names {
                    all.extend(suites::run_suite(s, &cfg)?);
                }
                Ok(all)
            })??;
            let mut checks = checks;
            checks.sort_by(|a, b| a.id.cmp(&b.id));
            let passed = checks.iter().all(suites::Check::passed);
            let report = json!({
                "tool": "solvir",
                "version": env!("CARGO_PKG_VERSION"),
                "command": "verify",
                "suite": suite_name,
                "config": cfg.to_json(),
                "checks": checks.iter().map(suites::Check::to_json).collect::<Vec<_>>(),
                "passed": passed,
            });
            emit(&report, &cfg, out)?;
            Ok(if passed { EXIT_PASS } else { EXIT_FAIL })
        }
        Cmd::Dims { target, common, shift, kappa, level, mu1 } => {
            let mut extra = vec![("shift", shift), ("kappa", kappa), ("level", level.map(|l| l.to_string()))];
            if let Some(m) = mu1 {
                extra.push(("spec", Some(format!("mu1={m}"))));
            }
            let cfg = build_config(&common, &extra)?;
            let table = with_threads(cfg.threads, || match target {
                Target::Verma => dims_verma(&cfg),
                Target::Gvm => dims_gvm(&cfg),
            })??;
            emit(&table, &cfg, out)?;
            Ok(EXIT_PASS)
        }
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, String> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| e.to_string())?;
            Ok(pool.install(f))
        }
    }
}

fn emit(report: &Value, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    text.push('\n');
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn header(cfg: &RunConfig, target: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("solvir"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!("dims"));
    m.insert("target".into(), json!(target));
    m.insert("config".into(), cfg.to_json());
    m.insert("n".into(), json!(cfg.n));
    m
}

/// `{n, shift, boxes: [{N, L, dim}], family_lower_bound}`, with `L = 2N+1`
/// for a shift, or the single box `N = L = k` for `--level k`.
fn dims_verma(cfg: &RunConfig) -> Result<Value, String> {
    let n = cfg.n;
    let (shift, boxes): (LatticePoint, Vec<(i64, usize)>) = match (cfg.level, &cfg.shift) {
        (Some(_), Some(_)) => return Err("give either --level or --shift, not both".into()),
        (Some(k), None) => {
            if k < 0 {
                return Err("level must be non-negative".into());
            }
            let mut c = vec![0; n];
            c[0] = -k;
            let b = k.max(1);
            (LatticePoint::new(&c), vec![(b, b as usize)])
        }
        (None, Some(s)) => {
            if s.len() != n {
                return Err(format!("shift has rank {}, expected {n}", s.len()));
            }
            let radii = cfg.boxes.clone().unwrap_or_else(|| (1..=cfg.radius("verma")).collect());
            (LatticePoint::new(s), radii.into_iter().map(|r| (r, 2 * r as usize + 1)).collect())
        }
        (None, None) => return Err("dims verma needs --shift or --level".into()),
    };
    if shift.is_lex_positive() {
        return Err(format!("shift {shift} is lex-positive"));
    }
    let mut rows = Vec::new();
    let mut fam = 0;
    for (nb, l) in boxes {
        let bx = TruncationBox::new(nb, l).map_err(|e| e.to_string())?;
        rows.push(json!({"N": nb, "L": l, "dim": weight_space_dim_truncated(&shift, bx)}));
        fam = family_lower_bound(&shift, bx);
    }
    let mut m = header(cfg, "verma");
    m.insert("shift".into(), json!(shift.coords()));
    if let Some(k) = cfg.level {
        m.insert("level".into(), json!(k));
    }
    m.insert("boxes".into(), json!(rows));
    m.insert("family_lower_bound".into(), json!(fam));
    Ok(Value::Object(m))
}

/// `{n, kappa, boxes: [{radius, rows, cols, rank}], bound, stabilized}`.
fn dims_gvm(cfg: &RunConfig) -> Result<Value, String> {
    let n = cfg.n;
    if n < 2 {
        return Err("dims gvm needs n ≥ 2".into());
    }
    let kappa = LatticePoint::new(&cfg.kappa.clone().unwrap_or_else(|| vec![0; n - 1]));
    if kappa.rank() != n - 1 {
        return Err(format!("kappa has rank {}, expected {}", kappa.rank(), n - 1));
    }
    let value = |v: Var| cfg.spec.get(&v).map(|q| Scalar::from_rational(q.clone())).unwrap_or_else(|| Scalar::var(v));
    let params = DensityParams::new(value(Var::A), value(Var::B));
    let radii = cfg.boxes.clone().unwrap_or_else(|| (1..=cfg.radius("gvm")).collect());
    let rep = quotient_dim_level1(&kappa, &params, &radii).map_err(|e| e.to_string())?;
    let (bound, _) = double_factorial_bound(1);
    let mut m = header(cfg, "gvm");
    m.insert("kappa".into(), json!(kappa.coords()));
    m.insert("params".into(), json!({"a": params.a().to_string(), "b": params.b().to_string()}));
    m.insert("boxes".into(), json!(rep.boxes.iter().map(|b| json!({"radius": b.radius, "rows": b.rows, "cols": b.cols, "rank": b.rank})).collect::<Vec<_>>()));
    m.insert("bound".into(), json!(bound));
    m.insert("stabilized".into(), json!(rep.stabilized));
    Ok(Value::Object(m))
}
