//! `kernel-factor` command line front end.
//!
//! Every command reads JSON files and writes one JSON document to `--output`
//! (stdout by default). Exit codes: 0 on success, 1 for invalid input or
//! flags, 2 for numerical failures (window inadequacy, degenerate fits).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeff::{classify, estimate_decay, ClassMode};
use crate::factorize::{factor_chain, factorize, is_positive_hermite_diagonal, verify_pair, Branch, FactorOptions, FactorPair, Verification};
use crate::generate::{mehler, projector_symbol, random_gs, rank_one};
use crate::schatten::{
    decay_fit, embedding_monotonicity_check, holder_check, hs_identity_check, operator_matrix, schatten_norm,
    singular_values, tail_ratio, CheckReport, DecayFit, HermiteWeight, SchattenOrder, SingularSpectrum,
};
use crate::weyl::{
    change_quantization, kernel_to_symbol, sharp, symbol_to_kernel, GridKernel, GridSymbol, PhaseGrid,
    SymbolFactorOptions,
};
use crate::{CoeffTensor, Error, MultiIndex, Result};

#[derive(Debug, Parser)]
#[command(name = "kernel-factor", version, about = "Hermite-spectral kernel factorization and Op_t calculus")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for random generators.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Square phase-space grid "min,max,n".
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_grid)]
    pub grid: Option<PhaseGrid>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a test tensor or symbol.
    Generate(GenerateArgs),
    /// Split a kernel into B ∘ C with C a positive Hermite diagonal.
    Factorize(FactorizeArgs),
    /// Heuristic space classification of a coefficient tensor.
    Classify(ClassifyArgs),
    /// Conservative exponential decay rate of a coefficient tensor.
    Decay(DecayArgs),
    /// Change the quantization parameter of a symbol.
    Quantize(QuantizeArgs),
    /// Map a symbol to its kernel or back.
    Kernel(KernelArgs),
    /// Symbol of the composition Op_t(a) Op_t(b).
    Sharp(SharpArgs),
    /// Split a symbol as a₁ #_t a₂.
    FactorizeSymbol(FactorizeSymbolArgs),
    /// Singular values and Schatten quasi-norms between weighted spaces.
    Schatten(SchattenArgs),
    /// Run one of the inequality or identity checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    Mehler,
    RandomGs,
    RankOne,
    ProjectorSymbol,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenerateKind,
    #[arg(long, default_value_t = 0.5)]
    pub tau: f64,
    /// Per-axis truncation.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Row index of the rank-one kernel, e.g. "0" or "1,2".
    #[arg(long, default_value = "0", value_parser = parse_index)]
    pub alpha: MultiIndex,
    #[arg(long, default_value = "0", value_parser = parse_index)]
    pub beta: MultiIndex,
}

/// Space named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    #[value(name = "schwartz")]
    Schwartz,
    #[value(name = "Ss")]
    Roumieu,
    #[value(name = "Sigmas")]
    Beurling,
}

impl From<Space> for Branch {
    fn from(s: Space) -> Branch {
        match s {
            Space::Schwartz => Branch::Schwartz,
            Space::Roumieu => Branch::Roumieu,
            Space::Beurling => Branch::Beurling,
        }
    }
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Space::Roumieu)]
    pub space: Space,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Decay rate for Ss; defaults to the estimated rate.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Inner dimension.
    #[arg(long)]
    pub d0: Option<usize>,
    /// Factor into this many operators instead of two.
    #[arg(long)]
    pub chain: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = Mode::Roumieu)]
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Schwartz,
    Roumieu,
    Beurling,
    Dual,
}

impl From<Mode> for ClassMode {
    fn from(m: Mode) -> ClassMode {
        match m {
            Mode::Schwartz => ClassMode::Schwartz,
            Mode::Roumieu => ClassMode::Roumieu,
            Mode::Beurling => ClassMode::Beurling,
            Mode::Dual => ClassMode::Dual,
        }
    }
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToKernel,
    ToSymbol,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = Direction::ToKernel)]
    pub direction: Direction,
}

#[derive(Debug, Args)]
pub struct SharpArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
}

#[derive(Debug, Args)]
pub struct FactorizeSymbolArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = Space::Roumieu)]
    pub space: Space,
    /// Hermite truncation of the kernel.
    #[arg(long)]
    pub trunc: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SchattenArgs {
    pub input: PathBuf,
    /// Comma-separated orders, "inf" allowed.
    #[arg(long, default_value = "2", value_delimiter = ',')]
    pub p: Vec<SchattenOrder>,
    /// Weights of the domain space (JSON map, missing indices weigh 1).
    #[arg(long)]
    pub w1: Option<PathBuf>,
    /// Weights of the target space.
    #[arg(long)]
    pub w2: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Hs,
    Hoelder,
    Embed,
    Decay,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: Check,
    /// Second operator, applied after the input (hoelder).
    #[arg(long)]
    pub with: Option<PathBuf>,
    #[arg(long)]
    pub w1: Option<PathBuf>,
    #[arg(long)]
    pub w2: Option<PathBuf>,
    /// Target space of the second operator (hoelder).
    #[arg(long)]
    pub w3: Option<PathBuf>,
    /// Outer domain weights (embed).
    #[arg(long)]
    pub outer_w1: Option<PathBuf>,
    /// Outer target weights (embed).
    #[arg(long)]
    pub outer_w2: Option<PathBuf>,
    #[arg(long, default_value = "2")]
    pub p1: SchattenOrder,
    #[arg(long, default_value = "2")]
    pub p2: SchattenOrder,
    /// Gelfand-Shilov index of the fitted decay (decay).
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Order whose partial sums are tested (decay).
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
}

fn parse_grid(s: &str) -> std::result::Result<PhaseGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected \"min,max,n\", got {s:?}"));
    }
    let min: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
    let max: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
    PhaseGrid::square(min, max, n).map_err(|e| e.to_string())
}

fn parse_index(s: &str) -> std::result::Result<MultiIndex, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(MultiIndex::new)
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn read_tensor(path: &Path) -> Result<CoeffTensor> {
    CoeffTensor::from_json(&read(path)?)
}

fn read_weight(path: Option<&PathBuf>, dim: usize) -> Result<HermiteWeight> {
    match path {
        Some(p) => HermiteWeight::from_json(&read(p)?, dim),
        None => HermiteWeight::unit(dim),
    }
}

#[derive(Serialize)]
struct FactorOutput {
    #[serde(flatten)]
    pair: FactorPair,
    verification: Verification,
}

#[derive(Serialize)]
struct ChainOutput {
    #[serde(flatten)]
    chain: crate::factorize::FactorChain,
    verification: Verification,
}

#[derive(Serialize)]
struct SymbolFactorOutput {
    a1: GridSymbol,
    a2: GridSymbol,
    trunc: usize,
    reconstruction_error: f64,
}

#[derive(Serialize)]
struct NormEntry {
    p: String,
    value: f64,
}

#[derive(Serialize)]
struct SchattenOutput {
    #[serde(flatten)]
    spectrum: SingularSpectrum,
    norms: Vec<NormEntry>,
}

#[derive(Serialize)]
struct DecayReport {
    #[serde(flatten)]
    report: CheckReport,
    fit: DecayFit,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)?)
}

fn cmd_generate(args: &GenerateArgs, cli: &Cli) -> Result<String> {
    match args.kind {
        GenerateKind::Mehler => mehler(args.tau, args.n)?.to_json(),
        GenerateKind::RandomGs => {
            let seed = cli
                .seed
                .ok_or_else(|| Error::InvalidParameter("random-gs requires --seed".into()))?;
            random_gs(args.dim, args.n, args.s, args.r, seed)?.to_json()
        }
        GenerateKind::RankOne => {
            let top = args.alpha.entries().iter().chain(args.beta.entries()).copied().max().unwrap_or(0);
            if args.alpha.dim() == 0 || args.beta.dim() == 0 {
                return Err(Error::InvalidParameter("rank-one indices must be non-empty".into()));
            }
            rank_one(args.alpha.clone(), args.beta.clone(), top)?.to_json()
        }
        GenerateKind::ProjectorSymbol => projector_symbol(cli.grid.unwrap_or_default()).to_json(),
    }
}

fn cmd_factorize(args: &FactorizeArgs) -> Result<String> {
    if args.r.is_some() && args.space != Space::Roumieu {
        return Err(Error::InvalidParameter("--r applies to --space Ss only".into()));
    }
    let a = read_tensor(&args.input)?;
    let branch = Branch::from(args.space);
    if let Some(n) = args.chain {
        if args.d0.is_some() || args.r.is_some() {
            return Err(Error::InvalidParameter("--chain cannot be combined with --d0 or --r".into()));
        }
        let chain = factor_chain(&a, args.s, n, branch)?;
        let product = chain.product()?;
        let mut decay = std::collections::BTreeMap::new();
        for (k, d) in chain.decay.iter().enumerate() {
            if let Some(d) = d {
                decay.insert(format!("K{}", chain.factors.len() - k), d.clone());
            }
        }
        let verification = Verification {
            reconstruction_error: crate::coeff::reconstruction_error(&a, &product),
            positive_diagonal: chain.factors[1..].iter().all(|c| is_positive_hermite_diagonal(c).0),
            decay,
        };
        return to_json(&ChainOutput { chain, verification });
    }
    let opts = FactorOptions {
        branch,
        s: args.s,
        r: args.r,
        jmax: args.jmax,
        d0: args.d0,
    };
    let pair = factorize(&a, &opts)?;
    let verification = verify_pair(&a, &pair, args.s)?;
    to_json(&FactorOutput { pair, verification })
}

fn cmd_schatten(args: &SchattenArgs) -> Result<String> {
    let a = read_tensor(&args.input)?;
    let w1 = read_weight(args.w1.as_ref(), a.d_right())?;
    let w2 = read_weight(args.w2.as_ref(), a.d_left())?;
    let spectrum = singular_values(&operator_matrix(&a, &w1, &w2)?);
    let norms = args
        .p
        .iter()
        .map(|p| NormEntry {
            p: p.to_string(),
            value: schatten_norm(&spectrum, *p),
        })
        .collect();
    to_json(&SchattenOutput { spectrum, norms })
}

fn cmd_verify(args: &VerifyArgs) -> Result<String> {
    let a = read_tensor(&args.input)?;
    match args.check {
        Check::Hs => {
            let w1 = read_weight(args.w1.as_ref(), a.d_right())?;
            let w2 = read_weight(args.w2.as_ref(), a.d_left())?;
            to_json(&hs_identity_check(&a, &w1, &w2)?)
        }
        Check::Hoelder => {
            let path = args
                .with
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("hoelder needs --with <second operator>".into()))?;
            let a2 = read_tensor(path)?;
            let w1 = read_weight(args.w1.as_ref(), a.d_right())?;
            let w2 = read_weight(args.w2.as_ref(), a.d_left())?;
            let w3 = read_weight(args.w3.as_ref(), a2.d_left())?;
            to_json(&holder_check(&a, &a2, (&w1, &w2, &w3), args.p1, args.p2)?)
        }
        Check::Embed => {
            let b1 = read_weight(args.w1.as_ref(), a.d_right())?;
            let b2 = read_weight(args.w2.as_ref(), a.d_left())?;
            let c1 = read_weight(args.outer_w1.as_ref(), a.d_right())?;
            let c2 = read_weight(args.outer_w2.as_ref(), a.d_left())?;
            to_json(&embedding_monotonicity_check(&a, (&b1, &b2), (&c1, &c2))?)
        }
        Check::Decay => {
            let w1 = read_weight(args.w1.as_ref(), a.d_right())?;
            let w2 = read_weight(args.w2.as_ref(), a.d_left())?;
            let spectrum = singular_values(&operator_matrix(&a, &w1, &w2)?);
            let fit = decay_fit(&spectrum, args.s)?;
            let ratio = tail_ratio(&spectrum, args.p)?;
            let inputs = serde_json::json!({ "sigma": spectrum.sigma, "s": args.s, "p": args.p });
            let report = CheckReport {
                check: "decay".into(),
                inputs_digest: {
                    use sha2::{Digest, Sha256};
                    hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
                },
                lhs: ratio,
                rhs: 1.0,
                constant: fit.rho,
                pass: ratio < 1.0,
            };
            to_json(&DecayReport { report, fit })
        }
    }
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args, cli),
        Command::Factorize(args) => cmd_factorize(args),
        Command::Classify(args) => to_json(&classify(&read_tensor(&args.input)?, args.s, args.mode.into())?),
        Command::Decay(args) => to_json(&estimate_decay(&read_tensor(&args.input)?, args.s)?),
        Command::Quantize(args) => {
            let a = GridSymbol::from_json(&read(&args.input)?)?;
            change_quantization(&a, args.from, args.to)?.to_json()
        }
        Command::Kernel(args) => match args.direction {
            Direction::ToKernel => symbol_to_kernel(&GridSymbol::from_json(&read(&args.input)?)?, args.t)?.to_json(),
            Direction::ToSymbol => kernel_to_symbol(&GridKernel::from_json(&read(&args.input)?)?, args.t)?.to_json(),
        },
        Command::Sharp(args) => {
            let a = GridSymbol::from_json(&read(&args.a)?)?;
            let b = GridSymbol::from_json(&read(&args.b)?)?;
            sharp(&a, &b, args.t)?.to_json()
        }
        Command::FactorizeSymbol(args) => {
            let a = GridSymbol::from_json(&read(&args.input)?)?;
            let mut opts = SymbolFactorOptions::new(args.t, args.s, args.space.into());
            opts.trunc = args.trunc;
            let f = crate::weyl::factorize_symbol_with(&a, &opts)?;
            let back = sharp(&f.a1, &f.a2, args.t)?;
            let out = SymbolFactorOutput {
                trunc: f.coeffs.trunc_left()[0].max(f.coeffs.trunc_right()[0]),
                reconstruction_error: back.max_diff(&a)?,
                a1: f.a1,
                a2: f.a2,
            };
            to_json(&out)
        }
        Command::Schatten(args) => cmd_schatten(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let text = match execute(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, format!("{text}\n")),
        None => writeln!(std::io::stdout().lock(), "{text}"),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    0
}

pub fn run() -> i32 {
    run_from(std::env::args_os())
}
