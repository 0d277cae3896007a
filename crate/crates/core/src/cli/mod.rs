//! The `floer` command line: argument parsing, input loading and exit codes.

mod commands;
mod structures;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::novikov::Precision;
use crate::rational::Rational;
use crate::text::parse_rational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{what}: {message}")]
    Input { what: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    fn input(what: impl Into<String>, e: impl ToString) -> Self {
        CliError::Input { what: what.into(), message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "floer", version, about = "Exact Novikov, affinoid, Floer-complex and Cech computations")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    group: Group,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// T-adic precision cutoff E (a rational).
    #[arg(long, global = true, default_value = "6")]
    pub prec: String,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub samples: usize,
    /// Exponent window `|α| ≤ W` for pointwise checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub window: i64,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl Flags {
    pub fn precision(&self) -> CliResult<Precision> {
        let e: Rational = parse_rational(&self.prec).map_err(|e| CliError::input("--prec", e))?;
        Ok(Precision::new(e))
    }
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Novikov field arithmetic.
    #[command(subcommand)]
    Nov(NovCmd),
    /// Rational polytopes.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Laurent elements over polytopes.
    #[command(subcommand)]
    Aff(AffCmd),
    /// Finite operators and Floer complexes.
    #[command(subcommand)]
    Op(OpCmd),
    /// Cech complexes and Tate homotopies.
    #[command(subcommand)]
    Cech(CechCmd),
    /// Directed categories and rank-one modules.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Seeded verification suites.
    Verify {
        /// novikov, affinoid, operator, cech, category or all.
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum NovCmd {
    Val { x: String },
    Add { x: String, y: String },
    Mul { x: String, y: String },
    Inv { x: String },
    Trunc { x: String },
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    Vertices { p: String },
    /// Minimum and maximum of `⟨β,·⟩`.
    Support { p: String, beta: String },
    Intersect { p: String, q: String },
    /// The pieces `⟨u,·⟩ ≥ λ`, `≤ λ` and `= λ`.
    Split { p: String, u: String, lambda: String },
    /// Laurent refinement of a cover file.
    Refine { cover: String },
}

#[derive(Subcommand, Debug)]
enum AffCmd {
    Val { ctx: String, f: String },
    Restrict { from: String, to: String, f: String },
    Mul { ctx: String, f: String, g: String },
    Rebase { ctx: String, f: String, q: String },
    /// Convergence certificate; each pair is written `lambda,norm`.
    Cert { delta: String, epsilon: String, pairs: Vec<String> },
}

#[derive(Subcommand, Debug)]
enum OpCmd {
    Apply { psi: String, alpha: String },
    Diff { psi: String },
    Val { psi: String, from: String, to: String },
    Trace { psi: String },
    Eps { psi: String },
    Delta { rho: String },
    Hbar { psi: String },
    /// Inclusion homotopy evaluated at `z^α`.
    HEval { psi: String, alpha: String, from: String, to: String },
    ClassifyHf { p0: String, p1: String },
    DisjointH { psi: String, from: String, to: String },
}

#[derive(Subcommand, Debug)]
enum CechCmd {
    Build { cover: String },
    D { cover: String, cochain: String },
    Augment { cover: String, f: String },
    /// Split along a 1-based axis.
    TateSplit { f: String, axis: usize },
    /// Two-term homotopy: one element on the overlap, or a pair on the two halves.
    TateH { ctx: String, u: String, lambda: String, f: String, g: Option<String> },
    /// Laurent contraction; splits are `[u] >= lambda` separated by `;`.
    LaurentH { ctx: String, splits: String, cochain: String },
    Reconstruct { cover: String, cochain: String },
    Locality { p: String, p1: String, p2: String, nu: String },
}

#[derive(Subcommand, Debug)]
enum CatCmd {
    Build { category: String },
    /// `g ∘ f` for `f ∈ hom(t,s)` and `g ∈ hom(s,r)`.
    Compose { category: String, t: String, s: String, r: String, g: String, f: String },
    TensorWitness { category: String, module: String, sigma: String, aux: String, target: String },
    HomWitness { category: String, module: String, sigma: String, aux: String, tuple: String },
    Locality { category: String, left: String, right: String, sigma: String },
    Perfectness { category: String, module: String },
}

/// Output text and whether a verification failed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub text: String,
    pub failed: bool,
}

impl Outcome {
    fn ok(text: impl Into<String>) -> Self {
        let mut text = text.into();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Outcome { text, failed: false }
    }
}

/// Result of a whole invocation.
#[derive(Debug)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// An argument naming an existing file is read from it; anything else is inline text.
pub fn load(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: arg.into(), message: e.to_string() })
    } else {
        Ok(arg.to_string())
    }
}

/// The Koszul sign convention in force, stated in every header.
pub const CONVENTION: &str = "convention: d(psi) = sum_j (psi - z_j psi z_j^-1) b_j, d'(psi) = sum_j (psi - z_j^-1 psi z_j) b_j\n";

/// The fixed header of every report.
pub fn header(flags: &Flags, randomized: bool) -> String {
    let mut h = format!("floer {VERSION}\nseed: {}\nprec: {}\n", flags.seed, flags.prec);
    if randomized {
        h.push_str(&format!("samples: {}\nwindow: {}\n", flags.samples, flags.window));
    }
    h.push_str(CONVENTION);
    h
}

pub fn run<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Run { code, stdout: text, stderr: String::new() }
            } else {
                Run { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => return Run { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let code = i32::from(outcome.failed);
    match &cli.flags.out {
        Some(path) => match std::fs::write(path, &outcome.text) {
            Ok(()) => Run { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Run { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) },
        },
        None => Run { code, stdout: outcome.text, stderr: String::new() },
    }
}

fn dispatch(cli: &Cli) -> CliResult<Outcome> {
    let f = &cli.flags;
    match &cli.group {
        Group::Nov(c) => commands::nov(c, f),
        Group::Poly(c) => commands::poly(c),
        Group::Aff(c) => commands::aff(c, f),
        Group::Op(c) => commands::op(c, f),
        Group::Cech(c) => commands::cech(c, f),
        Group::Cat(c) => commands::cat(c, f),
        Group::Verify { suite } => commands::verify(suite, f),
    }
}
