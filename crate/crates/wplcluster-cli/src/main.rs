use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use wplcluster::characters::{chebyshev, eval_polynomial, line_bundle_char, simple_char, ChebyshevKind};
use wplcluster::mutation::{kronecker_state, run_from_root, seed_char};
use wplcluster::verify::{audit, run_suite, AuditFamily, SuiteParams, SUITES};
use wplcluster::{CompatiblePair, Error, GradeVector, Series, Torus, WeightSpec};

const DEFAULT_PRECISION: i64 = 12;
const DEFAULT_WEIGHTS: &str = "1,1";

#[derive(Parser)]
#[command(name = "wplc", version)]
#[command(about = "Quantum cluster algebras of weighted projective lines")]
struct Cli {
    /// Emit one JSON document on standard output
    #[arg(long, global = true)]
    json: bool,

    /// TOML file supplying defaults for flags (flags take precedence)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print E, B, p̃, B̃, Λ and d for a weight tuple
    Pair {
        #[arg(long)]
        p: Option<String>,
    },
    /// Compute a quantum cluster character
    Char {
        kind: CharKind,
        /// Line bundle O(l·c)
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
        /// Length for ndelta and indec
        #[arg(long)]
        n: Option<i64>,
        /// Degree of the point for torsion
        #[arg(long)]
        deg: Option<i64>,
        /// 1-based root seed index
        #[arg(long)]
        index: Option<usize>,
        #[arg(long)]
        p: Option<String>,
        /// Precision as a bound on ψ
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Run a mutation path from the root seed
    Mutate {
        #[arg(long)]
        p: Option<String>,
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
        #[arg(long)]
        prec: Option<i64>,
    },
    /// Run a mutation path on the Kronecker instance
    Kronecker {
        #[arg(long, value_delimiter = ',')]
        path: Vec<usize>,
    },
    /// Run an identity suite
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long)]
        lmax: Option<i64>,
        /// Field sizes for the brute-force oracle
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<u64>>,
    },
    /// Fit ν-power conventions against printed exponents
    Audit {
        #[arg(long)]
        family: Family,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CharKind {
    Line,
    Torsion,
    Ndelta,
    Indec,
    Seed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Thm32,
    Exchange,
    All,
}

/// Values a config file may supply.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Config {
    p: Option<String>,
    prec: Option<i64>,
    lmax: Option<i64>,
    q: Option<Vec<u64>>,
    json: Option<bool>,
}

enum Failure {
    Usage(String),
    Verification,
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidWeights(_)
            | Error::UnknownSuite(_)
            | Error::IndexOutOfRange { .. }
            | Error::FrozenIndex(_)
            | Error::DimensionMismatch { .. }
            | Error::TooLarge(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other.to_string()),
        }
    }
}

struct Output {
    json: bool,
}

impl Output {
    fn emit(&self, doc: &Value, human: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string(doc).expect("serializable"));
        } else {
            println!("{}", human());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))
}

fn pair_from(p: Option<String>, config: &Config) -> Result<CompatiblePair, Failure> {
    let spec = p
        .or_else(|| config.p.clone())
        .unwrap_or_else(|| DEFAULT_WEIGHTS.to_string());
    let weights: WeightSpec = spec.parse()?;
    Ok(CompatiblePair::new(&weights)?)
}

fn series_doc(pair: &CompatiblePair, f: &Series, kind: &str, params: Value) -> Value {
    let body = f.to_json();
    json!({
        "kind": kind,
        "params": params,
        "pair": pair.header(),
        "precision": body.precision,
        "terms": body.terms,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = load_config(&cli.config)?;
    let out = Output {
        json: cli.json || config.json.unwrap_or(false),
    };
    match cli.command {
        Command::Pair { p } => {
            let pair = pair_from(p, &config)?;
            let summary = pair.summary();
            let doc = serde_json::to_value(&summary).expect("serializable");
            out.emit(&doc, || {
                let show = |name: &str, m: &wplcluster::IntMatrix| -> String {
                    let rows: Vec<String> = m.data.iter().map(|r| format!("  {r:?}")).collect();
                    format!("{name} ({}×{}):\n{}", m.rows, m.cols, rows.join("\n"))
                };
                [
                    format!("p = {:?}, p̃ = {:?}, d = {}", summary.p, summary.p_tilde, summary.d),
                    show("E", &summary.e),
                    show("B", &summary.b),
                    show("B̃", &summary.btilde),
                    show("Λ", &summary.lambda),
                ]
                .join("\n")
            });
            Ok(())
        }
        Command::Char {
            kind,
            l,
            n,
            deg,
            index,
            p,
            prec,
        } => {
            let pair = pair_from(p, &config)?;
            let psi = prec.or(config.prec).unwrap_or(DEFAULT_PRECISION);
            let precision = psi * pair.d;
            let torus: Arc<Torus> = Torus::from_pair(&pair);
            let point = pair.point_class();
            let (name, f, params) = match kind {
                CharKind::Line => {
                    let l = l.unwrap_or(0);
                    let x = GradeVector::multiple_of_c(l, pair.p_tilde.count());
                    (
                        "line",
                        line_bundle_char(&pair, &torus, &x, precision),
                        json!({"l": l, "prec": psi}),
                    )
                }
                CharKind::Torsion => {
                    let deg = deg.unwrap_or(1);
                    if deg < 1 {
                        return Err(Failure::Usage("--deg must be positive".into()));
                    }
                    let class: Vec<i64> = point.iter().map(|x| deg * x).collect();
                    ("torsion", simple_char(&pair, &torus, &class), json!({"deg": deg}))
                }
                CharKind::Ndelta | CharKind::Indec => {
                    let n = n.unwrap_or(1);
                    let first = matches!(kind, CharKind::Ndelta);
                    if n < 0 || (first && n == 0) {
                        return Err(Failure::Usage("--n out of range".into()));
                    }
                    let which = if first {
                        ChebyshevKind::First
                    } else {
                        ChebyshevKind::Second
                    };
                    let delta = simple_char(&pair, &torus, &point);
                    let f = eval_polynomial(&chebyshev(which, n as usize), &delta)?;
                    (if first { "ndelta" } else { "indec" }, f, json!({"n": n}))
                }
                CharKind::Seed => {
                    let index = index.unwrap_or(1);
                    if index == 0 {
                        return Err(Failure::Usage("--index is 1-based".into()));
                    }
                    let f = seed_char(&pair, &torus, index - 1, precision)?;
                    ("seed", f, json!({"index": index, "prec": psi}))
                }
            };
            let doc = series_doc(&pair, &f, name, params);
            out.emit(&doc, || f.to_string());
            Ok(())
        }
        Command::Mutate { p, path, prec } => {
            let pair = pair_from(p, &config)?;
            let psi = prec.or(config.prec).unwrap_or(DEFAULT_PRECISION);
            let state = run_from_root(&pair, &path, psi * pair.d)?;
            let doc = serde_json::to_value(state.to_json()).expect("serializable");
            out.emit(&doc, || {
                let mut lines = vec![format!("path {:?}, quiver {:?}", state.path, state.quiver.r.data)];
                for (i, (d, v)) in state.dims.iter().zip(&state.vars).enumerate() {
                    lines.push(format!("{}: class {d:?}\n   {v}", i + 1));
                }
                lines.join("\n")
            });
            Ok(())
        }
        Command::Kronecker { path } => {
            let state = kronecker_state().run_path(&path, 0)?;
            let doc = serde_json::to_value(state.to_json()).expect("serializable");
            out.emit(&doc, || {
                let mut lines = vec![format!("path {:?}, quiver {:?}", state.path, state.quiver.r.data)];
                for (i, (d, v)) in state.dims.iter().zip(&state.vars).enumerate() {
                    lines.push(format!("{}: class {d:?}\n   {v}", i + 1));
                }
                lines.join("\n")
            });
            Ok(())
        }
        Command::Verify {
            suite,
            prec,
            lmax,
            q,
        } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Failure::Usage(format!(
                    "unknown suite `{suite}`; expected one of {}",
                    SUITES.join(", ")
                )));
            }
            let params = SuiteParams {
                precision: prec.or(config.prec),
                lmax: lmax.or(config.lmax),
                q: q.or_else(|| config.q.clone()),
            };
            let report = run_suite(&suite, &params)?;
            let doc = serde_json::to_value(&report).expect("serializable");
            out.emit(&doc, || {
                let mut lines: Vec<String> = report
                    .cases
                    .iter()
                    .map(|c| format!("{:?} {} :: {}", c.status, c.name, c.detail).to_lowercase_status())
                    .collect();
                let failed = report.failures().count();
                lines.push(format!(
                    "{}: {} ({} cases, {failed} failed)",
                    report.suite,
                    if report.passed { "PASS" } else { "FAIL" },
                    report.cases.len()
                ));
                lines.join("\n")
            });
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Audit { family } => {
            let family = match family {
                Family::Thm32 => AuditFamily::Thm32,
                Family::Exchange => AuditFamily::Exchange,
                Family::All => AuditFamily::All,
            };
            let report = audit(family)?;
            let doc = serde_json::to_value(&report).expect("serializable");
            out.emit(&doc, || {
                let mut lines = vec![
                    format!("instances: {}", report.instances.join("; ")),
                    format!(
                        "fits in [{}, {}]³: {:?}{}",
                        report.search_box[0],
                        report.search_box[1],
                        report.fits,
                        if report.unique { " (unique)" } else { "" }
                    ),
                ];
                for r in &report.rules {
                    let verdict = if r.passes { "passes" } else { "fails" };
                    lines.push(format!("{:?} {}: {verdict}", r.family, r.rule));
                }
                lines.push(if report.passed { "PASS".into() } else { "FAIL".into() });
                lines.join("\n")
            });
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

trait StatusCase {
    fn to_lowercase_status(self) -> String;
}

impl StatusCase for String {
    /// `Pass name` → `pass name`.
    fn to_lowercase_status(self) -> String {
        match self.split_once(' ') {
            Some((status, rest)) => format!("{} {rest}", status.to_lowercase()),
            None => self,
        }
    }
}
