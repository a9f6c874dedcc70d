//! Command-line surface for the loop factorization library: synthesize loops
//! from root subgroup data, factor and classify them, evaluate the
//! determinant identities, and run the seeded acceptance suites.
//!
//! All files are JSON in the schemas of the library types; reports are
//! deterministic for fixed inputs and seed. Exit codes: 0 ok, 2 invalid
//! input, 3 mathematical precondition failed, 4 numerical breakdown.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use loopfact::birkhoff::{
    birkhoff_factorization, counterexample_loop, stratum, triangular_factorization,
    tricondition_residual, WeylElement,
};
use loopfact::dets::det_report;
use loopfact::laurent::LaurentSeries;
use loopfact::loop2::{polar_su11, sup_distance, winding_component, GroupKind, LoopMatrix};
use loopfact::rootsub::{partial_rsf, synth_full, RootSubgroupData, NEAR_UNIT};
use loopfact::toeplitz::{injectivity_section, singular_values_ascending, triangular_family};
use loopfact::verify;
use loopfact::Error;

#[derive(Parser)]
#[command(
    name = "loopfact",
    version,
    about = "Triangular/Birkhoff factorization and determinant identities for 2x2 loops"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize a loop from root subgroup parameters.
    Synth(SynthArgs),
    /// Factor a loop and report l, w, m0, a0, u.
    Factor(FactorArgs),
    /// Report which Birkhoff stratum a loop lies in.
    Stratum(StratumArgs),
    /// Evaluate the determinant product identities for root subgroup data.
    Det(DetArgs),
    /// Pointwise polar decomposition of an SU(1,1) loop.
    Polar(PolarArgs),
    /// Partial root subgroup factorization of an SU(1,1) loop.
    PartialRsf(PartialRsfArgs),
    /// Emit the loop without a triangular factorization and its diagnostics.
    Counterexample(CounterexampleArgs),
    /// Run the seeded acceptance suites and print PASS/FAIL lines.
    Verify(VerifyArgs),
}

/// Root subgroup parameters shared by `synth` and `det`.
#[derive(Args)]
struct DataArgs {
    /// Comma-separated η₀,η₁,… (complex, |η| < 1), e.g. "0.5,-0.2+0.3i".
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    etas: Vec<Complex64>,

    /// Comma-separated ζ₁,ζ₂,… (complex, |ζ| < 1).
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    zetas: Vec<Complex64>,

    /// Positive modes of χ as deg:coeff pairs, e.g. "1:0.1+0.05i,3:-0.02i";
    /// the negative modes are forced by star-antisymmetry.
    #[arg(long, value_delimiter = ',', value_parser = parse_chi_term, allow_hyphen_values = true)]
    chi: Vec<ChiTerm>,

    /// Imaginary zero mode of χ (radians, reduced to (-π, π]).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    chi0: f64,
}

impl DataArgs {
    fn build(&self) -> Result<RootSubgroupData, CliError> {
        let mut pairs = Vec::new();
        for t in &self.chi {
            pairs.push((t.deg, t.coeff));
            pairs.push((-t.deg, -t.coeff.conj()));
        }
        let chi = LaurentSeries::from_pairs(&pairs);
        let data =
            RootSubgroupData::new(self.etas.clone(), self.zetas.clone(), chi, self.chi0)?;
        if data.is_near_unit() {
            eprintln!(
                "warning: a chain parameter exceeds {NEAR_UNIT} in modulus; \
                 conditioning degrades like {:.3e}",
                data.condition_factor()
            );
        }
        Ok(data)
    }
}

/// A loop given either as a JSON file or as the triangular family shorthand.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Loop file (JSON LoopMatrix schema).
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,

    /// Coefficients c_{-n+1},…,c_n of [[z⁻ⁿ,0],[c(z),zⁿ]] (2n values).
    #[arg(long, value_delimiter = ',', value_parser = parse_complex, allow_hyphen_values = true)]
    tri: Option<Vec<Complex64>>,
}

impl InputArgs {
    fn load(&self) -> Result<LoopMatrix, CliError> {
        if let Some(path) = &self.input {
            return read_json(path);
        }
        let c = self.tri.as_ref().expect("clap enforces exactly one input");
        if c.len() % 2 != 0 {
            return Err(Error::WrongLength { expected: c.len() + 1, got: c.len() }.into());
        }
        Ok(triangular_family(c, c.len() / 2)?)
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Truncation degree for the exponential factor.
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Output file; the loop JSON goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FactorMode {
    /// Full stratum scan.
    Birkhoff,
    /// Require w = 1; fails with exit 3 off the top stratum.
    Triangular,
}

#[derive(Args)]
struct FactorArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = FactorMode::Birkhoff)]
    mode: FactorMode,
    /// Output file for the factor data (JSON BirkhoffFactors schema).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StratumArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct DetArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Truncation degree for the synthesized loop.
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Output file for the full report (JSON DetReport schema).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolarArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Circle samples for the pointwise decomposition.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Degree window of the refit factors.
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Output file (JSON PolarPair schema).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PartialRsfArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Truncation degree for the recovered χ and the factor windows.
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Circle samples (at least 4·trunc).
    #[arg(long, default_value_t = 256)]
    samples: usize,
    /// Output file (JSON PartialRsf schema).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CounterexampleArgs {
    /// Truncation degree of e^{1/z − z} inside the loop.
    #[arg(long, default_value_t = 32)]
    trunc: i64,
    /// Section size for the near-kernel diagnostic.
    #[arg(long, default_value_t = 64)]
    section_n: i64,
    /// Output file; the loop JSON goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite (products, dets, ratio, lemma, strata, dichotomy,
    /// counterexample, partial-rsf, properties); all of them when omitted.
    #[arg(long)]
    suite: Option<String>,
    /// Master seed for the randomized draws.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// One positive mode of χ on the command line.
#[derive(Clone)]
struct ChiTerm {
    deg: i64,
    coeff: Complex64,
}

fn parse_chi_term(s: &str) -> Result<ChiTerm, String> {
    let (d, c) = s
        .split_once(':')
        .ok_or_else(|| format!("chi term `{s}` must have the form deg:coeff"))?;
    let deg: i64 = d.trim().parse().map_err(|e| format!("bad degree `{d}`: {e}"))?;
    if deg < 1 {
        return Err(format!("chi degree {deg} must be >= 1 (negative modes are implied)"));
    }
    Ok(ChiTerm { deg, coeff: parse_complex(c)? })
}

/// Parses "a", "bi", "a+bi", "a-bi" with optional exponents, and "i"/"-i".
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let body = t
        .strip_suffix(['i', 'I'])
        .ok_or_else(|| format!("cannot parse `{t}` as a complex number"))?;
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let imag = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => part.parse().map_err(|e| format!("bad imaginary part `{part}`: {e}")),
        }
    };
    match split {
        None => Ok(Complex64::new(0.0, imag(body)?)),
        Some(k) => {
            let re: f64 =
                body[..k].parse().map_err(|e| format!("bad real part `{}`: {e}", &body[..k]))?;
            Ok(Complex64::new(re, imag(&body[k..])?))
        }
    }
}

enum CliError {
    Lib(Error),
    /// File/JSON/flag-level problems; always exit code 2.
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) => e.exit_code() as u8,
            CliError::Input(_) => 2,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Lib(e) => format!("error[{}]: {e}", variant_name(e)),
            CliError::Input(msg) => format!("error[InvalidInput]: {msg}"),
        }
    }
}

fn variant_name(e: &Error) -> &'static str {
    use Error::*;
    match e {
        WindingNonzero { .. } => "WindingNonzero",
        VanishesOnCircle { .. } => "VanishesOnCircle",
        DetNotOne { .. } => "DetNotOne",
        NotSU11 { .. } => "NotSU11",
        E11Vanishes { .. } => "E11Vanishes",
        NotInBigCell { .. } => "NotInBigCell",
        TruncationTooSmall { .. } => "TruncationTooSmall",
        NotInverse { .. } => "NotInverse",
        NonrealDeterminant { .. } => "NonrealDeterminant",
        WrongLength { .. } => "WrongLength",
        WrongShape { .. } => "WrongShape",
        NotInTopStratum { .. } => "NotInTopStratum",
        NumericalBreakdown { .. } => "NumericalBreakdown",
        SearchExhausted { .. } => "SearchExhausted",
        ParameterOnOrOutsideDisk { .. } => "ParameterOnOrOutsideDisk",
        NotInImage { .. } => "NotInImage",
        BoundaryConditionFails { .. } => "BoundaryConditionFails",
        NotIdentityComponent { .. } => "NotIdentityComponent",
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("cannot parse {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes the value as pretty JSON (byte-identical across runs), or prints
/// it to stdout when no path is given.
fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let s = to_json(value)?;
    match out {
        Some(path) => {
            fs::write(path, s)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn fmt_c(c: Complex64) -> String {
    format!("{:+.6}{:+.6}i", c.re, c.im)
}

/// Reduced word of a Weyl element in the generators r0, r1.
fn weyl_word(w: WeylElement) -> String {
    let (start, len) = match (w.n, w.flip) {
        (0, false) => return "1".to_string(),
        (n, false) if n < 0 => ("r0", 2 * (-n)),
        (n, false) => ("r1", 2 * n),
        (n, true) if n < 0 => ("r0", 2 * (-n) - 1),
        (n, true) => ("r1", 2 * n + 1),
    };
    let mut letters = Vec::with_capacity(len as usize);
    for k in 0..len {
        let even = k % 2 == 0;
        letters.push(match (start, even) {
            ("r0", true) | ("r1", false) => "r0",
            _ => "r1",
        });
    }
    letters.join("·")
}

fn sup_norm(g: &LoopMatrix, samples: usize) -> f64 {
    g.eval_circle(samples).iter().map(|m| m.norm()).fold(0.0, f64::max)
}

fn run_synth(args: &SynthArgs) -> Result<(), CliError> {
    let data = args.data.build()?;
    let g = synth_full(&data, args.trunc)?;
    emit_json(&g, args.out.as_deref())
}

fn run_factor(args: &FactorArgs) -> Result<(), CliError> {
    let g = args.input.load()?;
    let factors = match args.mode {
        FactorMode::Triangular => triangular_factorization(&g)?,
        FactorMode::Birkhoff => birkhoff_factorization(&g)?,
    };
    let defect = sup_distance(&factors.reconstruct(), &g, 256);
    let condition = sup_norm(&factors.l, 128)
        * sup_norm(&factors.u, 128)
        * (factors.a0.max(1.0 / factors.a0)).powi(2);
    println!("w: {} (translation {}, flip {})", weyl_word(factors.w), factors.w.n, factors.w.flip);
    println!("m0: {}", fmt_c(factors.m0));
    println!("a0: {:.12}", factors.a0);
    println!("condition: {condition:.3e}");
    println!("reconstruction defect: {defect:.3e}");
    if let Some(path) = &args.out {
        emit_json(&factors, Some(path))?;
    }
    Ok(())
}

fn run_stratum(args: &StratumArgs) -> Result<(), CliError> {
    let g = args.input.load()?;
    let w = stratum(&g)?;
    println!("w: {} (translation {}, flip {})", weyl_word(w), w.n, w.flip);
    Ok(())
}

fn run_det(args: &DetArgs) -> Result<(), CliError> {
    let data = args.data.build()?;
    let report = det_report(&data, args.trunc)?;
    println!(
        "unshifted: formula {:.12} operator {:.12} rel {:.3e}",
        report.formula_value, report.operator_value, report.rel_err_unshifted
    );
    println!(
        "shifted:   formula {:.12} operator {:.12} rel {:.3e}",
        report.shifted_formula, report.shifted_operator, report.rel_err_shifted
    );
    println!(
        "a0^2:      formula {:.12} factorization {:.12} rel {:.3e}",
        report.a0_sq_formula, report.a0_sq_factorization, report.rel_err_a0
    );
    if let Some(path) = &args.out {
        emit_json(&report, Some(path))?;
    }
    Ok(())
}

fn run_polar(args: &PolarArgs) -> Result<(), CliError> {
    let g = args.input.load()?;
    let pair = polar_su11(&g, args.samples, args.trunc)?;
    let defect = sup_distance(&pair.reconstruct(), &g, args.samples);
    let winding = winding_component(&g, args.samples)?;
    println!(
        "lambda: degrees [{}, {}], winding {winding}",
        pair.lambda.min_deg(),
        pair.lambda.max_deg()
    );
    println!("core b sup: {:.6}", pair.core.e12.sup_circle(args.samples));
    println!("reconstruction defect: {defect:.3e}");
    if let Some(path) = &args.out {
        emit_json(&pair, Some(path))?;
    }
    Ok(())
}

fn run_partial_rsf(args: &PartialRsfArgs) -> Result<(), CliError> {
    let g = args.input.load()?;
    let rsf = partial_rsf(&g, args.trunc, args.samples)?;
    println!(
        "chains recovered: {} ({} etas, {} zetas)",
        rsf.chains_recovered,
        rsf.data.etas.len(),
        rsf.data.zetas.len()
    );
    println!("sup |l21/l11|: {:.6}", rsf.sup_l);
    println!("sup |u21/u22|: {:.6}", rsf.sup_u);
    println!("chi sup: {:.3e}, chi0: {:.6}", rsf.data.chi.sup_circle(args.samples), rsf.data.chi0_im);
    println!("reconstruction defect: {:.3e}", rsf.defect);
    if let Some(path) = &args.out {
        emit_json(&rsf, Some(path))?;
    }
    Ok(())
}

fn run_counterexample(args: &CounterexampleArgs) -> Result<(), CliError> {
    let g = counterexample_loop(args.trunc)?;
    let defect = g.membership_defect(GroupKind::SU11, 512);
    let winding = winding_component(&g, 512)?;
    let residual = tricondition_residual(args.trunc);
    let sv = singular_values_ascending(&injectivity_section(&g, args.section_n, false));
    eprintln!("SU(1,1) membership defect: {defect:.3e}");
    eprintln!("winding component: {winding}");
    eprintln!("tricondition residual: {residual:.3e}");
    eprintln!("smallest section singular value (N = {}): {:.3e}", args.section_n, sv[0]);
    emit_json(&g, args.out.as_deref())
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let lines = match &args.suite {
        Some(name) => vec![verify::run_suite(name, args.seed)?],
        None => verify::run_all(args.seed),
    };
    for (i, line) in lines.iter().enumerate() {
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        if args.suite.is_some() {
            println!("{verdict} [{}] {}", line.name, line.detail);
        } else {
            println!("{verdict} criterion {} [{}] {}", i + 1, line.name, line.detail);
        }
    }
    if let Some(first) = lines.iter().find(|l| !l.pass) {
        eprintln!("error: first failure: [{}] {}", first.name, first.detail);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    match &cli.cmd {
        Cmd::Synth(a) => run_synth(a).map(|()| ExitCode::SUCCESS),
        Cmd::Factor(a) => run_factor(a).map(|()| ExitCode::SUCCESS),
        Cmd::Stratum(a) => run_stratum(a).map(|()| ExitCode::SUCCESS),
        Cmd::Det(a) => run_det(a).map(|()| ExitCode::SUCCESS),
        Cmd::Polar(a) => run_polar(a).map(|()| ExitCode::SUCCESS),
        Cmd::PartialRsf(a) => run_partial_rsf(a).map(|()| ExitCode::SUCCESS),
        Cmd::Counterexample(a) => run_counterexample(a).map(|()| ExitCode::SUCCESS),
        Cmd::Verify(a) => run_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}
