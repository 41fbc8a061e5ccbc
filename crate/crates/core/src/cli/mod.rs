//! Command-line runner: argument parsing, dispatch, and report output.
//!
//! Exit codes: 0 when every check passed, 1 when findings were reported,
//! 2 on usage or structural errors.

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::group::Group;

pub use report::{Report, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "levelset-lab", version, about = "Convolution level-sets, Bohr sets and witness functions over finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fourier transform of a set's indicator.
    Transform(TransformArgs),
    /// Exact self- or cross-convolution of sets.
    Convolve(PairArgs),
    /// A+B.
    Sumset(PairArgs),
    /// Lower level-set of a convolution.
    Levelset(LevelsetArgs),
    /// Bohr set membership and size bound.
    Bohr(BohrArgs),
    /// Arithmetic progression inside a Bohr set of prime Z_N.
    ApExtract(ApArgs),
    /// Simultaneous Diophantine approximation.
    Dirichlet(DirichletArgs),
    /// Witness-function iteration.
    Witness(WitnessArgs),
    /// Quadratic residues modulo a prime.
    QrDemo(QrArgs),
    /// Interval-dilate construction against seeded probe sets.
    #[command(name = "thm2-construct")]
    Thm2Construct(Thm2Args),
    /// Random probing set search against structured adversaries.
    #[command(name = "thm1-probe")]
    Thm1Probe(Thm1Args),
    /// Fourier-pseudorandom probe set check.
    #[command(name = "thm3-check")]
    Thm3Check(Thm3Args),
    /// Bohr translate inside a lower level-set.
    #[command(name = "thm4-bohr-translate")]
    Thm4BohrTranslate(Thm4Args),
    /// Gap criterion along difference orbits.
    #[command(name = "cor6-gaps")]
    Cor6Gaps(Cor6Args),
    /// Seeded property suites for the auxiliary inequalities.
    VerifyLemmas(LemmaArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Transform(_) => "transform",
            Command::Convolve(_) => "convolve",
            Command::Sumset(_) => "sumset",
            Command::Levelset(_) => "levelset",
            Command::Bohr(_) => "bohr",
            Command::ApExtract(_) => "ap-extract",
            Command::Dirichlet(_) => "dirichlet",
            Command::Witness(_) => "witness",
            Command::QrDemo(_) => "qr-demo",
            Command::Thm2Construct(_) => "thm2-construct",
            Command::Thm1Probe(_) => "thm1-probe",
            Command::Thm3Check(_) => "thm3-check",
            Command::Thm4BohrTranslate(_) => "thm4-bohr-translate",
            Command::Cor6Gaps(_) => "cor6-gaps",
            Command::VerifyLemmas(_) => "verify-lemmas",
        }
    }
}

/// Output locations; not part of the recorded parameters.
#[derive(Args, Debug, Clone, Default)]
struct OutputArgs {
    /// Write the JSON report here (plus `<out>.manifest.json`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct CsvArgs {
    /// Write a CSV dump here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TransformArgs {
    #[arg(long)]
    group: Group,
    /// Set file: one element per line, comma-separated coordinates.
    #[arg(long)]
    set: PathBuf,
    /// Number of leading coefficients to report.
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[command(flatten)]
    #[serde(skip)]
    csv: CsvArgs,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct PairArgs {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    set: PathBuf,
    /// Second set; defaults to the first.
    #[arg(long)]
    with: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    csv: CsvArgs,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct LevelsetArgs {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    with: Option<PathBuf>,
    /// Absolute threshold on the convolution count.
    #[arg(long, conflicts_with = "gamma", required_unless_present = "gamma")]
    threshold: Option<f64>,
    /// Threshold as a fraction of N.
    #[arg(long)]
    gamma: Option<f64>,
    /// Use `<` instead of `≤`.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    #[serde(skip)]
    csv: CsvArgs,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct BohrArgs {
    #[arg(long)]
    group: Group,
    /// Characters separated by `;`, coordinates by `,` (for Z_N, `,` also separates characters).
    #[arg(long)]
    freqs: String,
    #[arg(long)]
    radius: f64,
    #[command(flatten)]
    #[serde(skip)]
    csv: CsvArgs,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct ApArgs {
    /// Prime modulus.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    freqs: String,
    #[arg(long)]
    radius: f64,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct DirichletArgs {
    #[arg(long)]
    n: u64,
    /// Comma-separated residues.
    #[arg(long, allow_hyphen_values = true)]
    xs: String,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyKind {
    Translates,
    Exhaustive,
    Explicit,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum NormKind {
    FourierSup,
    Sup,
}

#[derive(Args, Debug, Serialize)]
struct WitnessArgs {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    set: PathBuf,
    #[arg(long, value_enum, default_value_t = FamilyKind::Translates)]
    family: FamilyKind,
    /// Shifts for the translates family, as element indices separated by `,`.
    #[arg(long, default_value = "0")]
    shifts: String,
    /// Member set files for the explicit family (repeatable).
    #[arg(long)]
    member: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = NormKind::FourierSup)]
    norm: NormKind,
    #[arg(long)]
    delta1: f64,
    #[arg(long)]
    delta2: f64,
    /// `add`, or `lin:a,b` for `T(x, y) = a·x + b·y`.
    #[arg(long, default_value = "add")]
    table: String,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct QrArgs {
    /// Prime modulus.
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct Thm2Args {
    /// Prime modulus.
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Probe set size; defaults to ⌊ln N / 2⌋.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct Thm1Args {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long)]
    seed: u64,
    /// Adversary draws.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Probe set size; defaults to the size formula clamped to N.
    #[arg(long)]
    k: Option<usize>,
    /// Constant in the size formula.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 20)]
    retries: usize,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct Thm3Args {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    theta: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    freqs: String,
    /// Overrides the Bohr radius derived from θ, δ, ε.
    #[arg(long)]
    radius: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct Thm4Args {
    #[arg(long)]
    group: Group,
    /// Set file; without it A is the interval dilate for a seeded probe set.
    #[arg(long)]
    set: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Probe set size for the seeded construction.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    /// Also intersect level-sets over the translate family at this γ.
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct Cor6Args {
    #[arg(long)]
    group: Group,
    #[arg(long)]
    set: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    eps: f64,
    /// Largest allowed gap.
    #[arg(long, conflicts_with = "c", required_unless_present = "c")]
    cap: Option<usize>,
    /// Gap cap as ⌊N^c⌋.
    #[arg(long)]
    c: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct LemmaArgs {
    #[arg(long)]
    group: Group,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    io: OutputArgs,
}

/// Parses `argv` (including the program name), runs the subcommand, prints the
/// JSON report to stdout, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    let name = cli.command.name();
    let started = report::now_ms();
    let result = commands::dispatch(cli.command).and_then(|outcome| report::finish(name, outcome, started, out));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
