use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyimage::analysis::{is_central, is_identity, span_of_image, verify_witness, CheckConfig, CheckMode};
use polyimage::freealg::{hall_decompose4, parse_poly_in};
use polyimage::json::{
    certificate_doc, certificate_from_doc, check_doc, error_value, hall_doc, matrix_from_value, span_doc,
    CertificateDoc,
};
use polyimage::oracle::{exhaustive_image, linear_slice_search, SearchConfig, BUDGET_ENV, DEFAULT_IMAGE_BUDGET};
use polyimage::selftest::{run_all, SelftestConfig};
use polyimage::witness::{witness, WitnessShape};
use polyimage::{Error, FieldSpec, Matrix, MultilinearPoly, Result, Scalar};

#[derive(Parser)]
#[command(name = "polyimage", version, about = "Exact witnesses for values of multilinear polynomials on matrix algebras")]
struct Cli {
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree, coefficient sum, properness, identity and central checks.
    Classify {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Cap on (n^2)^m for exhaustive checks.
        #[arg(long, default_value_t = polyimage::analysis::DEFAULT_EXHAUSTIVE_BUDGET)]
        tuple_budget: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hall-basis coordinates of a degree-4 proper polynomial.
    Decompose {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Argument tuple on which the polynomial takes the target value.
    Witness {
        #[command(flatten)]
        poly: OptionalPolyArgs,
        /// JSON matrix: array of rows or {"field", "rows"}.
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        shape: ShapeArg,
        /// Parameter of the two-commutator shape.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact span of sampled values.
    Span {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-evaluates a certificate document.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Randomized slice search or exhaustive image enumeration.
    Oracle {
        #[command(subcommand)]
        mode: OracleCommand,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Criteria to run (default: all).
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u8>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = BUDGET_ENV, default_value_t = polyimage::oracle::DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Solve for one slot after fixing the others at random.
    Search {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        target: PathBuf,
        /// Variable placed in each slot, e.g. 0,1,0,2 for f(A,B,A,C).
        #[arg(long, value_delimiter = ',')]
        ties: Vec<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Enumerate the image on M_n(F_p).
    Image {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_IMAGE_BUDGET)]
        tuple_budget: u64,
    },
}

#[derive(Args)]
struct PolyArgs {
    /// Polynomial text, e.g. "[x1,x2][x3,x4]" or "St4".
    #[arg(long, allow_hyphen_values = true, required_unless_present = "poly_file", conflicts_with = "poly_file")]
    poly: Option<String>,
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Coefficient field: Q, Q(sqrt(d)) or Fp.
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args)]
struct OptionalPolyArgs {
    /// Polynomial text; may be omitted with a fixed --shape.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "poly_file")]
    poly: Option<String>,
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Coefficient field: Q, Q(sqrt(d)) or Fp.
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Slice attempts for search-backed branches.
    #[arg(long, env = BUDGET_ENV, default_value_t = polyimage::oracle::DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    /// Route by the degree and structure of --poly.
    Auto,
    /// [[A,B],[A,C]] on a trace-zero target.
    L1,
    /// [A,B][A,C] + lambda [A,C][A,B].
    L2,
    /// [S,B] with S the shift, for a bidiagonal target.
    L3,
    /// [A,[[A,B],[A,C]]], certified as St4(A,A^2,B,C).
    L4,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn field(text: &str) -> Result<FieldSpec> {
    text.parse()
}

fn load_poly(text: Option<&String>, file: Option<&PathBuf>, field_text: &str) -> Result<MultilinearPoly<Scalar>> {
    let spec = field(field_text)?;
    let source = match (text, file) {
        (Some(t), None) => t.clone(),
        (None, Some(f)) => read(f)?.trim().to_string(),
        _ => return Err(Error::InvalidInput("give exactly one of --poly and --poly-file".into())),
    };
    parse_poly_in(&source, &spec)
}

fn load_matrix(path: &Path, spec: &FieldSpec) -> Result<Matrix<Scalar>> {
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let hint = (*spec != FieldSpec::Rationals).then_some(spec);
    matrix_from_value(&value, hint)
}

fn search_config(args: &SearchArgs, spec: FieldSpec) -> SearchConfig {
    SearchConfig { seed: args.seed, budget: args.budget, field: spec, ..SearchConfig::default() }
}

fn to_value<T: serde::Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

/// Runs a command; `Ok((document, success))`.
fn run(command: Command) -> Result<(Value, bool)> {
    match command {
        Command::Classify { poly, n, mode, tuple_budget, samples, seed } => {
            let f = load_poly(poly.poly.as_ref(), poly.poly_file.as_ref(), &poly.field)?;
            let mode = match mode {
                ModeArg::Auto => CheckMode::Auto,
                ModeArg::Exhaustive => CheckMode::Exhaustive,
                ModeArg::Randomized => CheckMode::Randomized,
            };
            let cfg = CheckConfig { mode, budget: tuple_budget, samples, seed, ..CheckConfig::default() };
            let identity = is_identity(&f, n, &cfg)?;
            let central = is_central(&f, n, &cfg)?;
            Ok((
                json!({
                    "poly": f.to_text(),
                    "degree": f.degree(),
                    "n": n,
                    "coefficient_sum": f.coefficient_sum().to_string(),
                    "proper": f.is_proper(),
                    "identity": to_value(&check_doc(&identity)),
                    "central": to_value(&check_doc(&central)),
                }),
                true,
            ))
        }
        Command::Decompose { poly } => {
            let f = load_poly(poly.poly.as_ref(), poly.poly_file.as_ref(), &poly.field)?;
            Ok((to_value(&hall_doc(&hall_decompose4(&f)?)), true))
        }
        Command::Witness { poly, target, n, shape, lambda, search } => {
            let spec = field(&poly.field)?;
            let d = load_matrix(&target, &spec)?;
            if let Some(n) = n {
                if n != d.n() {
                    return Err(Error::DimensionMismatch(format!("--n {n} but the target is {}x{}", d.n(), d.n())));
                }
            }
            let lambda = polyimage::scalar::parse_scalar(&lambda, &spec)?;
            let shape = match shape {
                ShapeArg::Auto => WitnessShape::Auto,
                ShapeArg::L1 => WitnessShape::L1,
                ShapeArg::L2 => WitnessShape::L2,
                ShapeArg::L3 => WitnessShape::L3,
                ShapeArg::L4 => WitnessShape::L4,
            };
            let f = match (&poly.poly, &poly.poly_file, shape) {
                (None, None, WitnessShape::Auto) => {
                    return Err(Error::InvalidInput("--poly is required unless --shape names a construction".into()))
                }
                (None, None, _) => MultilinearPoly::zero(1),
                (p, file, _) => load_poly(p.as_ref(), file.as_ref(), &poly.field)?,
            };
            let cert = witness(&f, &d, shape, &lambda, &search_config(&search, spec))?;
            Ok((to_value(&certificate_doc(&cert)), true))
        }
        Command::Span { poly, n, samples, seed } => {
            let f = load_poly(poly.poly.as_ref(), poly.poly_file.as_ref(), &poly.field)?;
            Ok((to_value(&span_doc(&span_of_image(&f, n, samples, seed)?)), true))
        }
        Command::Verify { certificate } => {
            let doc: CertificateDoc = serde_json::from_str(&read(&certificate)?)
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", certificate.display())))?;
            let cert = certificate_from_doc(&doc)?;
            let ok = verify_witness(&cert);
            Ok((json!({ "verified": ok, "claimed": doc.verified }), true))
        }
        Command::Oracle { mode } => match mode {
            OracleCommand::Search { poly, target, ties, search } => {
                let spec = field(&poly.field)?;
                let f = load_poly(poly.poly.as_ref(), poly.poly_file.as_ref(), &poly.field)?;
                let d = load_matrix(&target, &spec)?;
                let cert = linear_slice_search(&f, &ties, &d, &search_config(&search, spec))?;
                Ok((to_value(&certificate_doc(&cert)), true))
            }
            OracleCommand::Image { poly, n, p, tuple_budget } => {
                let f = load_poly(poly.poly.as_ref(), poly.poly_file.as_ref(), &poly.field)?;
                let rational = f
                    .try_map(|c| c.to_rational())
                    .ok_or_else(|| Error::InvalidInput("image enumeration needs rational coefficients".into()))?;
                Ok((to_value(&exhaustive_image(&rational, n, p, tuple_budget)?), true))
            }
        },
        Command::Selftest { criterion, seed, budget } => {
            let cfg = SelftestConfig { seed, budget };
            let only = (!criterion.is_empty()).then_some(criterion.as_slice());
            let report = run_all(&cfg, only);
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            Ok((to_value(&report), report.passed))
        }
    }
}

fn emit(doc: &Value, output: Option<&Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("json renders");
    match output {
        Some(path) => std::fs::write(path, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let (doc, code) = match run(cli.command) {
        Ok((doc, true)) => (doc, 0),
        Ok((doc, false)) => (doc, 1),
        Err(e) => (error_value(&e), 1),
    };
    if let Err(e) = emit(&doc, output.as_deref()) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
