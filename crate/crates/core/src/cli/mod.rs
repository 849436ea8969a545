//! Command-line front end: `generate`, `verify`, `rotate`, `info`.
//!
//! Exit codes: 0 success, 2 parse or configuration error, 3 empty mesh,
//! 4 I/O failure, 5 verification failure.

pub mod export;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::expr::{ComplexExpr, ParseError, RealExpr};
use crate::geometry::REGULARITY_EPS;
use crate::surface::{sample_mesh, sample_rotation_mesh, Method, SurfaceError, SurfaceMesh, SurfaceSpec};
use crate::verify::{self, CheckKind, CheckStatus, Tolerances, VerifyOptions};

pub use export::Format;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_EMPTY: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

/// Relative spread below which `C` counts as constant in `info`.
const C_CONSTANT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "grt", version, about = "Build and verify surfaces given by two holomorphic functions and a profile")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a surface from f, g and ℓ and write a mesh.
    Generate(GenerateArgs),
    /// Run the residual checks and print a JSON report.
    Verify(VerifyArgs),
    /// Sample a rotational surface from a, b and ℓ.
    Rotate(RotateArgs),
    /// Report ℓ′, ℓ″ and the behaviour of C = ℓℓ″/ℓ′².
    Info(InfoArgs),
}

/// Figure families: ℓ with either `f = g = z` or the rotation constants `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

/// What a preset or a set of flags describes.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    General { f: String, g: String, ell: String },
    Rotation { a: f64, b: f64, ell: String },
}

impl Preset {
    pub fn source(self) -> Source {
        let general = |ell: &str| Source::General { f: "z".into(), g: "z".into(), ell: ell.into() };
        let rotation = |a, b, ell: &str| Source::Rotation { a, b, ell: ell.into() };
        match self {
            Preset::Fig1 => general("t^2+t+1"),
            Preset::Fig2 => general("cos(t)"),
            Preset::Fig3 => rotation(1.0, 0.0, "t^2+t+1"),
            Preset::Fig4 => rotation(0.0, 1.0, "t^2+t+1"),
            Preset::Fig5 => rotation(1.0, 0.0, "cos(t)"),
            Preset::Fig6 => rotation(1.0, 0.0, "sinh(t)"),
        }
    }

    /// Default `(u1, u2)` domain: the unit square for `f = g = z`, a full turn
    /// in `u2` for the rotational families.
    pub fn domain(self) -> ((f64, f64), (f64, f64)) {
        match self.source() {
            Source::General { .. } => ((-1.0, 1.0), (-1.0, 1.0)),
            Source::Rotation { .. } => ((-1.0, 1.0), (-PI, PI)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Direct,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Direct => Method::Direct,
        }
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("range `{s}` must satisfy lo < hi"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Args)]
struct DomainArgs {
    /// u1 range as lo:hi
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    u1: Option<(f64, f64)>,
    /// u2 range as lo:hi
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    u2: Option<(f64, f64)>,
    /// Grid points per direction
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    nu1: Option<usize>,
    #[arg(long)]
    nu2: Option<usize>,
    /// Point formula
    #[arg(long, value_enum, default_value = "closed-form")]
    method: MethodArg,
    /// Regularity threshold for |g′| and det V
    #[arg(long, default_value_t = REGULARITY_EPS)]
    eps: f64,
}

#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Holomorphic f(z)
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// Holomorphic g(z) (the Gauss map)
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Profile ℓ(t)
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; inferred from the extension, else obj
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct RotationParams {
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    rotation: RotationParams,
    #[command(flatten)]
    domain: DomainArgs,
    /// Central-difference step
    #[arg(long, default_value_t = verify::FD_STEP)]
    fd_step: f64,
    /// Tolerance for algebraic identities
    #[arg(long, default_value_t = verify::ALGEBRAIC_TOL)]
    tol_alg: f64,
    /// Tolerance for finite-difference checks
    #[arg(long, default_value_t = verify::FD_TOL)]
    tol_fd: f64,
    /// Comma-separated subset of checks
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Report file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RotateArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[command(flatten)]
    rotation: RotationParams,
    /// Profile ℓ(t)
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
    /// Rejected: rotational surfaces fix f = az + b
    #[arg(long, hide = true, allow_hyphen_values = true)]
    f: Option<String>,
    /// Rejected: rotational surfaces fix g = exp(z)
    #[arg(long, hide = true, allow_hyphen_values = true)]
    g: Option<String>,
    #[command(flatten)]
    domain: DomainArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Also compare every point with the general formula for f = az + b, g = exp(z)
    #[arg(long)]
    cross_check: bool,
}

#[derive(Debug, Args)]
struct InfoArgs {
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Profile ℓ(t)
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
    /// Optional f(z); μ is then sampled as Re f over the grid
    #[arg(long, allow_hyphen_values = true)]
    f: Option<String>,
    /// μ range as lo:hi when f is not given
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "0.5:1.5")]
    mu: (f64, f64),
    /// Number of μ samples when f is not given
    #[arg(long, default_value_t = 201)]
    samples: usize,
    #[command(flatten)]
    domain: DomainArgs,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
}

/// A failure mapped onto an exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: EXIT_CONFIG, message: message.into() }
    }

    fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("cannot write {}: {err}", path.display()) }
    }
}

impl From<SurfaceError> for Failure {
    fn from(err: SurfaceError) -> Self {
        let code = match err {
            SurfaceError::EmptyMesh => EXIT_EMPTY,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: err.to_string() }
    }
}

fn parse_failure(flag: &str, source: &str, err: ParseError) -> Failure {
    // The offset is into the trimmed source, as stored by the parser.
    let trimmed = source.trim();
    let caret = " ".repeat(trimmed[..err.offset().min(trimmed.len())].chars().count());
    Failure::config(format!("cannot parse --{flag}: {err}\n  {trimmed}\n  {caret}^"))
}

fn parse_complex(flag: &str, source: &str) -> Result<ComplexExpr, Failure> {
    ComplexExpr::parse(source).map_err(|e| parse_failure(flag, source, e))
}

fn parse_real(flag: &str, source: &str) -> Result<RealExpr, Failure> {
    RealExpr::parse(source).map_err(|e| parse_failure(flag, source, e))
}

fn resolve_source(source: &SourceArgs, rotation: Option<&RotationParams>) -> Result<(Source, Option<Preset>), Failure> {
    let (a, b) = rotation.map_or((None, None), |r| (r.a, r.b));
    if let Some(preset) = source.preset {
        if source.f.is_some() || source.g.is_some() || source.ell.is_some() || a.is_some() || b.is_some() {
            return Err(Failure::config("--preset cannot be combined with --f, --g, --ell, --a or --b"));
        }
        return Ok((preset.source(), Some(preset)));
    }
    let ell = source.ell.clone().ok_or_else(|| Failure::config("--ell is required (or use --preset)"))?;
    match (a, b) {
        (Some(a), Some(b)) => {
            if source.f.is_some() || source.g.is_some() {
                return Err(Failure::config("--a/--b describe a rotational surface; do not pass --f or --g"));
            }
            Ok((Source::Rotation { a, b, ell }, None))
        }
        (None, None) => match (&source.f, &source.g) {
            (Some(f), Some(g)) => Ok((Source::General { f: f.clone(), g: g.clone(), ell }, None)),
            _ => Err(Failure::config("--f and --g are both required (or use --preset)")),
        },
        _ => Err(Failure::config("--a and --b must be given together")),
    }
}

fn build_spec(
    source: &Source,
    preset: Option<Preset>,
    domain: &DomainArgs,
    default_domain: ((f64, f64), (f64, f64)),
    default_n: usize,
) -> Result<SurfaceSpec, Failure> {
    let spec = match source {
        Source::General { f, g, ell } => {
            SurfaceSpec::new(parse_complex("f", f)?, parse_complex("g", g)?, parse_real("ell", ell)?)
        }
        Source::Rotation { a, b, ell } => SurfaceSpec::rotation(*a, *b, parse_real("ell", ell)?),
    };
    let (du1, du2) = preset.map_or(default_domain, Preset::domain);
    let n = domain.n.unwrap_or(default_n);
    let mut spec = spec
        .with_domain(domain.u1.unwrap_or(du1), domain.u2.unwrap_or(du2))
        .with_resolution(domain.nu1.unwrap_or(n), domain.nu2.unwrap_or(n))
        .with_method(domain.method.into());
    spec.regularity_eps = domain.eps;
    spec.validate()?;
    Ok(spec)
}

fn describe(source: &Source, spec: &SurfaceSpec) -> String {
    let what = match source {
        Source::General { .. } => format!("f = {}, g = {}, ell = {}", spec.f, spec.g, spec.ell),
        Source::Rotation { a, b, .. } => format!("rotational a = {a}, b = {b}, ell = {}", spec.ell),
    };
    format!(
        "{what}\nu1 in [{}, {}], u2 in [{}, {}], {}x{} grid",
        spec.u1_range.0, spec.u1_range.1, spec.u2_range.0, spec.u2_range.1, spec.nu1, spec.nu2
    )
}

fn summary_text(mesh: &SurfaceMesh) -> String {
    let s = mesh.summary();
    format!(
        "vertices: {} ({} valid)\nfaces: {}\nregular: {:.2}%\nmin |det V|: {:e}\n",
        s.vertices,
        s.valid_vertices,
        s.faces,
        100.0 * s.regular_fraction,
        s.min_abs_det_v
    )
}

/// Writes `content` to `out`, or to stdout when `out` is `None`.
fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| Failure::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure { code: EXIT_IO, message: format!("cannot write to stdout: {e}") })
        }
    }
}

/// Summary goes to stdout when the payload went to a file, else to stderr.
fn report(out: Option<&PathBuf>, text: &str) {
    if out.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

fn output_format(output: &OutputArgs) -> Format {
    output
        .format
        .or_else(|| output.out.as_deref().and_then(Format::from_extension))
        .unwrap_or(Format::Obj)
}

fn cmd_generate(args: GenerateArgs) -> Result<u8, Failure> {
    let (source, preset) = resolve_source(&args.source, None)?;
    let spec = build_spec(&source, preset, &args.domain, ((-1.0, 1.0), (-1.0, 1.0)), 128)?;
    let mesh = sample_mesh(&spec)?;
    let header = describe(&source, &spec);
    emit(args.output.out.as_ref(), &export::render(&mesh, output_format(&args.output), &header))?;
    report(args.output.out.as_ref(), &summary_text(&mesh));
    Ok(EXIT_OK)
}

fn cmd_rotate(args: RotateArgs) -> Result<u8, Failure> {
    if args.f.is_some() || args.g.is_some() {
        return Err(Failure::config("rotate takes --a, --b and --ell; --f and --g are fixed to az+b and exp(z)"));
    }
    let source_args = SourceArgs { preset: args.preset, f: None, g: None, ell: args.ell.clone() };
    let (source, preset) = resolve_source(&source_args, Some(&args.rotation))?;
    let Source::Rotation { a, b, .. } = source else {
        return Err(Failure::config("rotate needs --a, --b and --ell, or a rotational preset (fig3 to fig6)"));
    };
    let spec = build_spec(&source, preset, &args.domain, ((-1.0, 1.0), (-PI, PI)), 128)?;
    let mesh = sample_rotation_mesh(a, b, &spec)?;
    let header = describe(&source, &spec);
    emit(args.output.out.as_ref(), &export::render(&mesh, output_format(&args.output), &header))?;

    let mut text = summary_text(&mesh);
    if a == 0.0 {
        let radius = spec.ell.eval(b).map(f64::abs);
        match radius {
            Ok(r) => text.push_str(&format!("a = 0: the surface is the sphere of radius |ell(b)| = {r}\n")),
            Err(e) => text.push_str(&format!("a = 0: degenerate to a sphere, but ell(b) fails: {e}\n")),
        }
    }
    let mut code = EXIT_OK;
    if args.cross_check {
        let opts = VerifyOptions::default().only(&[]).with_rotation(a, b);
        let result = verify::run_checks(&spec, &opts).map_err(|e| Failure::config(e.to_string()))?;
        let check = result.check(CheckKind::RotationMatch).expect("requested check is present");
        text.push_str(&format!(
            "cross-check against the general formula: max rel {:e} over {} points, {}\n",
            check.max_rel,
            check.count,
            if check.pass { "pass" } else { "FAIL" }
        ));
        if !check.pass {
            code = EXIT_VERIFY;
        }
    }
    report(args.output.out.as_ref(), &text);
    Ok(code)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let (source, preset) = resolve_source(&args.source, Some(&args.rotation))?;
    let spec = build_spec(&source, preset, &args.domain, ((-1.0, 1.0), (-1.0, 1.0)), 64)?;
    let mut checks = Vec::new();
    for name in &args.checks {
        let kind = CheckKind::from_name(name.trim()).ok_or_else(|| {
            let known: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            Failure::config(format!("unknown check `{name}`; known: {}", known.join(", ")))
        })?;
        checks.push(kind);
    }
    let mut opts = VerifyOptions {
        step: args.fd_step,
        tolerances: Tolerances { algebraic: args.tol_alg, finite_difference: args.tol_fd, ..Tolerances::default() },
        ..VerifyOptions::default()
    };
    if !checks.is_empty() {
        opts.checks = checks;
    }
    if let Source::Rotation { a, b, .. } = source {
        opts = opts.with_rotation(a, b);
    }
    let report_json = verify::run_checks(&spec, &opts).map_err(|e| match e {
        verify::VerifyError::EmptyDomain => Failure { code: EXIT_EMPTY, message: e.to_string() },
        other => Failure::config(other.to_string()),
    })?;
    let mut json = report_json.to_json();
    json.push('\n');
    emit(args.out.as_ref(), &json)?;

    let mut text = String::new();
    for c in &report_json.checks {
        let status = match c.status {
            CheckStatus::Passed => "pass",
            CheckStatus::Failed => "FAIL",
            CheckStatus::InsufficientCoverage => "FAIL (coverage)",
        };
        text.push_str(&format!(
            "{:<20} {:<16} max rel {:.3e} ({} points, {} excluded)\n",
            c.name.name(),
            status,
            c.max_rel,
            c.count,
            c.excluded
        ));
        if let Some(note) = &c.note {
            text.push_str(&format!("{:<20} {note}\n", ""));
        }
    }
    report(args.out.as_ref(), &text);
    Ok(if report_json.pass { EXIT_OK } else { EXIT_VERIFY })
}

/// How `C = ℓℓ″/ℓ′²` behaves over a set of μ samples.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ProfileInfo {
    pub ell: String,
    pub ell_prime: String,
    pub ell_second: String,
    pub mu_range: [f64; 2],
    pub samples: usize,
    /// Samples dropped because ℓ′ vanished or ℓ failed to evaluate.
    pub skipped: usize,
    pub c_min: f64,
    pub c_max: f64,
    pub c_constant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'static str>,
}

/// Sample `C` at each `μ` and classify it.
pub fn profile_info(ell: &RealExpr, mus: &[f64]) -> Option<ProfileInfo> {
    let mut cs = Vec::with_capacity(mus.len());
    for &mu in mus {
        if let Ok(jet) = ell.jet(mu) {
            if jet.d1 != 0.0 {
                cs.push(jet.value * jet.d2 / (jet.d1 * jet.d1));
            }
        }
    }
    let c_min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let c_max = cs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if cs.is_empty() || !c_min.is_finite() || !c_max.is_finite() {
        return None;
    }
    let c_constant = c_max - c_min < C_CONSTANT_TOL;
    let label = if !c_constant {
        None
    } else if c_max.abs() < C_CONSTANT_TOL && c_min.abs() < C_CONSTANT_TOL {
        Some("Appell")
    } else if (c_min - 1.0).abs() < C_CONSTANT_TOL && (c_max - 1.0).abs() < C_CONSTANT_TOL {
        Some("TR-surface")
    } else {
        None
    };
    let mu_lo = mus.iter().copied().fold(f64::INFINITY, f64::min);
    let mu_hi = mus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(ProfileInfo {
        ell: ell.source().to_string(),
        ell_prime: ell.derivative().unparse(RealExpr::VAR),
        ell_second: ell.second_derivative().unparse(RealExpr::VAR),
        mu_range: [mu_lo, mu_hi],
        samples: mus.len(),
        skipped: mus.len() - cs.len(),
        c_min,
        c_max,
        c_constant,
        label,
    })
}

fn cmd_info(args: InfoArgs) -> Result<u8, Failure> {
    let (ell_src, f_src, preset) = match args.preset {
        Some(preset) => {
            if args.ell.is_some() || args.f.is_some() {
                return Err(Failure::config("--preset cannot be combined with --ell or --f"));
            }
            match preset.source() {
                Source::General { f, ell, .. } => (ell, Some(f), Some(preset)),
                Source::Rotation { a, b, ell } => (ell, Some(format!("{a}*z + {b}")), Some(preset)),
            }
        }
        None => {
            let ell = args.ell.clone().ok_or_else(|| Failure::config("--ell is required (or use --preset)"))?;
            (ell, args.f.clone(), None)
        }
    };
    let ell = parse_real("ell", &ell_src)?;
    let mus: Vec<f64> = match &f_src {
        Some(f_src) => {
            let f = parse_complex("f", f_src)?;
            let (du1, du2) = preset.map_or(((-1.0, 1.0), (-1.0, 1.0)), Preset::domain);
            let n = args.domain.n.unwrap_or(64);
            let spec = SurfaceSpec::new(f.clone(), f, ell.clone())
                .with_domain(args.domain.u1.unwrap_or(du1), args.domain.u2.unwrap_or(du2))
                .with_resolution(args.domain.nu1.unwrap_or(n), args.domain.nu2.unwrap_or(n));
            spec.validate()?;
            (0..spec.nu1 * spec.nu2)
                .filter_map(|k| spec.f.eval(spec.grid_point(k % spec.nu1, k / spec.nu1)).ok())
                .map(|w| w.re)
                .collect()
        }
        None => {
            if args.samples < 2 {
                return Err(Failure::config("--samples must be at least 2"));
            }
            let (lo, hi) = args.mu;
            let n = args.samples;
            (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
        }
    };
    let info = profile_info(&ell, &mus)
        .ok_or_else(|| Failure::config("C = ℓℓ″/ℓ′² is undefined at every sampled μ"))?;
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&info).expect("info serializes");
        s.push('\n');
        s
    } else {
        let mut s = format!(
            "ell(t)   = {}\nell'(t)  = {}\nell''(t) = {}\nmu in [{}, {}], {} samples ({} skipped)\nC in [{}, {}]\n",
            info.ell, info.ell_prime, info.ell_second, info.mu_range[0], info.mu_range[1], info.samples,
            info.skipped, info.c_min, info.c_max
        );
        if info.c_constant {
            s.push_str(&format!("C is constant: {}\n", 0.5 * (info.c_min + info.c_max)));
        } else {
            s.push_str("C is not constant\n");
        }
        if let Some(label) = info.label {
            s.push_str(&format!("label: {label}\n"));
        }
        s
    };
    emit(None, &text)?;
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Rotate(a) => cmd_rotate(a),
        Command::Info(a) => cmd_info(a),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1:1"), Ok((-1.0, 1.0)));
        assert_eq!(parse_range(" -3.5 : 2e-1"), Ok((-3.5, 0.2)));
        assert!(parse_range("1:1").is_err());
        assert!(parse_range("1").is_err());
        assert!(parse_range("a:2").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn presets_follow_the_figure_captions() {
        assert_eq!(
            Preset::Fig2.source(),
            Source::General { f: "z".into(), g: "z".into(), ell: "cos(t)".into() }
        );
        assert_eq!(Preset::Fig4.source(), Source::Rotation { a: 0.0, b: 1.0, ell: "t^2+t+1".into() });
        assert_eq!(Preset::Fig6.source(), Source::Rotation { a: 1.0, b: 0.0, ell: "sinh(t)".into() });
    }

    #[test]
    fn info_labels() {
        let mus: Vec<f64> = (0..50).map(|k| 0.5 + k as f64 / 49.0).collect();
        let label = |src: &str| profile_info(&RealExpr::parse(src).unwrap(), &mus).unwrap();
        assert_eq!(label("t").label, Some("Appell"));
        assert_eq!(label("exp(t)").label, Some("TR-surface"));
        let sq = label("t^2");
        assert!(sq.c_constant && sq.label.is_none());
        assert!((sq.c_min - 0.5).abs() < 1e-12);
        assert!(!label("t^2+t+1").c_constant);
        assert!(profile_info(&RealExpr::parse("3").unwrap(), &mus).is_none());
    }

    #[test]
    fn caret_points_at_offset() {
        let f = parse_complex("f", "2*+z").unwrap_err();
        assert_eq!(f.code, EXIT_CONFIG);
        assert!(f.message.ends_with("  2*+z\n    ^"), "{}", f.message);
    }
}
