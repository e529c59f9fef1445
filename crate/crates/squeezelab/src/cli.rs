//! Command-line front end: builds states, runs trajectories and
//! verification suites, renders wavefunctions, and serializes everything
//! as CSV or JSON.
//!
//! Output is deterministic: floats are printed with 17 significant digits
//! (`{:.16e}`), lines end in `\n`, and identical invocations produce
//! byte-identical files. CSV carries metadata as `#`-prefixed comment
//! lines; JSON carries it as a top-level `metadata` object next to `rows`.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 for
//! usage, envelope, or truncation errors.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use squeezelab::dynamics::{evenly_spaced_times, kennard_product, kennard_var_p, kennard_var_x, trajectory};
use squeezelab::error::{Error, Result};
use squeezelab::fock::ToleranceConfig;
use squeezelab::grid::{fock_to_position, psi_ss_closed_form, Grid};
use squeezelab::state::{displaced_squeezed, CoherentParams, SqueezeParams, TAIL_COMPONENTS};
use squeezelab::verify::{run_all, run_suite, CheckResult};

#[derive(Parser)]
#[command(
    name = "squeezelab",
    version,
    about = "Coherent and squeezed oscillator states in a truncated Fock basis",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the Fock amplitudes of a displaced squeezed state.
    State(StateArgs),
    /// Evolve a state and tabulate quadrature moments against the
    /// closed-form oscillating widths.
    Evolve(EvolveArgs),
    /// Run verification suites and report each invariant.
    Verify(VerifyArgs),
    /// Render a state on a position grid next to its closed-form Gaussian.
    Grid(GridArgs),
}

#[derive(Args)]
struct StateParams {
    /// Real part of the displacement label alpha.
    #[arg(long = "alpha-re", default_value_t = 0.0, value_name = "F")]
    alpha_re: f64,
    /// Imaginary part of the displacement label alpha.
    #[arg(long = "alpha-im", default_value_t = 0.0, value_name = "F")]
    alpha_im: f64,
    /// Squeeze magnitude r.
    #[arg(long, default_value_t = 0.0, value_name = "F")]
    r: f64,
    /// Squeeze phase phi in radians.
    #[arg(long, default_value_t = 0.0, value_name = "F")]
    phi: f64,
    /// Fock-space dimension.
    #[arg(long, default_value_t = 128, value_name = "N")]
    dim: usize,
}

impl StateParams {
    fn coherent(&self) -> Result<CoherentParams> {
        CoherentParams::new(Complex64::new(self.alpha_re, self.alpha_im))
    }

    fn squeeze(&self) -> Result<SqueezeParams> {
        SqueezeParams::new(self.r, self.phi)
    }
}

#[derive(Args)]
struct OutputOptions {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; standard output when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Tolerance override, repeatable; keys: exp, tail, compare.
    #[arg(long = "tol", value_name = "KEY=VAL")]
    tol: Vec<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct StateArgs {
    #[command(flatten)]
    params: StateParams,
    #[command(flatten)]
    output: OutputOptions,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    params: StateParams,
    /// End of the time span (the span is [0, t-max] inclusive).
    #[arg(long = "t-max", default_value_t = std::f64::consts::TAU, value_name = "F")]
    t_max: f64,
    /// Number of evenly spaced samples across the span.
    #[arg(long, default_value_t = 128, value_name = "N")]
    steps: usize,
    #[command(flatten)]
    output: OutputOptions,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single suite instead of all of them.
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,
    #[command(flatten)]
    output: OutputOptions,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    params: StateParams,
    /// Left edge of the position grid.
    #[arg(long = "x-min", default_value_t = -12.0, value_name = "F", allow_hyphen_values = true)]
    x_min: f64,
    /// Right edge of the position grid.
    #[arg(long = "x-max", default_value_t = 12.0, value_name = "F", allow_hyphen_values = true)]
    x_max: f64,
    /// Number of grid points including both edges.
    #[arg(long, default_value_t = 2048, value_name = "N")]
    points: usize,
    #[command(flatten)]
    output: OutputOptions,
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::State(args) => cmd_state(args),
        Command::Evolve(args) => cmd_evolve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Grid(args) => cmd_grid(args),
    }
}

fn parse_tolerances(entries: &[String]) -> Result<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    for entry in entries {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("tolerance override '{entry}' is not KEY=VAL"))
        })?;
        let parsed: f64 = value.parse().map_err(|_| {
            Error::InvalidParameter(format!("tolerance value '{value}' is not a number"))
        })?;
        match key {
            "exp" => cfg.exp_tol = parsed,
            "tail" => cfg.tail_tol = parsed,
            "compare" => cfg.compare_tol = parsed,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown tolerance key '{other}'; expected exp, tail, or compare"
                )))
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// 17 significant digits: enough to reproduce any f64 exactly on re-parse.
fn fmt_f(value: f64) -> String {
    format!("{value:.16e}")
}

fn write_output(out: &Option<PathBuf>, content: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Document<M: Serialize, R: Serialize> {
    metadata: M,
    rows: Vec<R>,
}

/// serde_json formatter pinning floats to `{:.16e}` so JSON output is
/// byte-stable and round-trips exactly.
struct FixedFloatFormatter;

impl serde_json::ser::Formatter for FixedFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

fn to_json<M: Serialize, R: Serialize>(doc: &Document<M, R>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buf, FixedFloatFormatter);
    doc.serialize(&mut serializer)
        .map_err(|err| Error::NumericalError(format!("serialization failed: {err}")))?;
    buf.push(b'\n');
    Ok(buf)
}

/// CSV rendering hooks: metadata keys mirror the JSON metadata fields.
trait CsvDocument {
    fn header_lines(&self) -> Vec<(String, String)>;
    fn footer_lines(&self) -> Vec<(String, String)> {
        Vec::new()
    }
    fn column_names(&self) -> &'static str;
    fn row_lines(&self) -> Vec<String>;
}

fn to_csv(doc: &dyn CsvDocument) -> Vec<u8> {
    let mut text = String::new();
    for (key, value) in doc.header_lines() {
        text.push_str(&format!("# {key} = {value}\n"));
    }
    text.push_str(doc.column_names());
    text.push('\n');
    for row in doc.row_lines() {
        text.push_str(&row);
        text.push('\n');
    }
    for (key, value) in doc.footer_lines() {
        text.push_str(&format!("# {key} = {value}\n"));
    }
    text.into_bytes()
}

// ---- state ----------------------------------------------------------------

#[derive(Serialize)]
struct StateMetadata {
    alpha_re: f64,
    alpha_im: f64,
    r: f64,
    phi: f64,
    dim: usize,
    norm: f64,
    tail_mass: f64,
}

#[derive(Serialize)]
struct StateRow {
    n: usize,
    re: f64,
    im: f64,
    prob: f64,
}

struct StateDocument(Document<StateMetadata, StateRow>);

impl CsvDocument for StateDocument {
    fn header_lines(&self) -> Vec<(String, String)> {
        let m = &self.0.metadata;
        vec![
            ("alpha_re".into(), fmt_f(m.alpha_re)),
            ("alpha_im".into(), fmt_f(m.alpha_im)),
            ("r".into(), fmt_f(m.r)),
            ("phi".into(), fmt_f(m.phi)),
            ("dim".into(), m.dim.to_string()),
            ("norm".into(), fmt_f(m.norm)),
            ("tail_mass".into(), fmt_f(m.tail_mass)),
        ]
    }

    fn column_names(&self) -> &'static str {
        "n,re,im,prob"
    }

    fn row_lines(&self) -> Vec<String> {
        self.0
            .rows
            .iter()
            .map(|row| format!("{},{},{},{}", row.n, fmt_f(row.re), fmt_f(row.im), fmt_f(row.prob)))
            .collect()
    }
}

fn cmd_state(args: StateArgs) -> Result<i32> {
    let cfg = parse_tolerances(&args.output.tol)?;
    let p = args.params.coherent()?;
    let z = args.params.squeeze()?;
    let state = displaced_squeezed(&p, &z, args.params.dim, &cfg)?;

    let amps = state.amplitudes();
    let mut last = amps.len();
    while last > 1 && amps[last - 1] == Complex64::new(0.0, 0.0) {
        last -= 1;
    }
    let rows = (0..last)
        .map(|n| StateRow {
            n,
            re: amps[n].re,
            im: amps[n].im,
            prob: amps[n].norm_sqr(),
        })
        .collect();
    let doc = Document {
        metadata: StateMetadata {
            alpha_re: args.params.alpha_re,
            alpha_im: args.params.alpha_im,
            r: args.params.r,
            phi: args.params.phi,
            dim: args.params.dim,
            norm: state.norm(),
            tail_mass: state.tail_mass(TAIL_COMPONENTS),
        },
        rows,
    };
    let bytes = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(&StateDocument(doc)),
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---- evolve ---------------------------------------------------------------

#[derive(Serialize)]
struct EvolveMetadata {
    alpha_re: f64,
    alpha_im: f64,
    r: f64,
    phi: f64,
    dim: usize,
    t_max: f64,
    steps: usize,
    max_kennard_x_deviation: f64,
}

#[derive(Serialize)]
struct EvolveRow {
    t: f64,
    mean_x: f64,
    mean_p: f64,
    var_x: f64,
    var_p: f64,
    cov_xp: f64,
    product4: f64,
    kennard_vx: f64,
    kennard_vp: f64,
    kennard_prod: f64,
}

struct EvolveDocument(Document<EvolveMetadata, EvolveRow>);

impl CsvDocument for EvolveDocument {
    fn header_lines(&self) -> Vec<(String, String)> {
        let m = &self.0.metadata;
        vec![
            ("alpha_re".into(), fmt_f(m.alpha_re)),
            ("alpha_im".into(), fmt_f(m.alpha_im)),
            ("r".into(), fmt_f(m.r)),
            ("phi".into(), fmt_f(m.phi)),
            ("dim".into(), m.dim.to_string()),
            ("t_max".into(), fmt_f(m.t_max)),
            ("steps".into(), m.steps.to_string()),
        ]
    }

    fn footer_lines(&self) -> Vec<(String, String)> {
        vec![(
            "max_kennard_x_deviation".into(),
            fmt_f(self.0.metadata.max_kennard_x_deviation),
        )]
    }

    fn column_names(&self) -> &'static str {
        "t,mean_x,mean_p,var_x,var_p,cov_xp,product4,kennard_vx,kennard_vp,kennard_prod"
    }

    fn row_lines(&self) -> Vec<String> {
        self.0
            .rows
            .iter()
            .map(|row| {
                [
                    fmt_f(row.t),
                    fmt_f(row.mean_x),
                    fmt_f(row.mean_p),
                    fmt_f(row.var_x),
                    fmt_f(row.var_p),
                    fmt_f(row.cov_xp),
                    fmt_f(row.product4),
                    fmt_f(row.kennard_vx),
                    fmt_f(row.kennard_vp),
                    fmt_f(row.kennard_prod),
                ]
                .join(",")
            })
            .collect()
    }
}

fn cmd_evolve(args: EvolveArgs) -> Result<i32> {
    let cfg = parse_tolerances(&args.output.tol)?;
    let p = args.params.coherent()?;
    let z = args.params.squeeze()?;
    let times = evenly_spaced_times(args.t_max, args.steps)?;
    let traj = trajectory(&p, &z, &times, args.params.dim, &cfg)?;

    let mut max_deviation = 0.0f64;
    let rows: Vec<EvolveRow> = traj
        .samples()
        .iter()
        .map(|sample| {
            let kennard_vx = kennard_var_x(&z, sample.t);
            max_deviation = max_deviation.max((2.0 * sample.var_x - kennard_vx).abs());
            EvolveRow {
                t: sample.t,
                mean_x: sample.mean_x,
                mean_p: sample.mean_p,
                var_x: sample.var_x,
                var_p: sample.var_p,
                cov_xp: sample.cov_xp,
                product4: sample.product4(),
                kennard_vx,
                kennard_vp: kennard_var_p(&z, sample.t),
                kennard_prod: kennard_product(&z, sample.t),
            }
        })
        .collect();
    let doc = Document {
        metadata: EvolveMetadata {
            alpha_re: args.params.alpha_re,
            alpha_im: args.params.alpha_im,
            r: args.params.r,
            phi: args.params.phi,
            dim: args.params.dim,
            t_max: args.t_max,
            steps: args.steps,
            max_kennard_x_deviation: max_deviation,
        },
        rows,
    };
    let bytes = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(&EvolveDocument(doc)),
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}

// ---- verify ---------------------------------------------------------------

#[derive(Serialize)]
struct VerifyMetadata {
    suites: Vec<String>,
    checks: usize,
    failures: usize,
}

struct VerifyDocument(Document<VerifyMetadata, CheckResult>);

impl CsvDocument for VerifyDocument {
    fn header_lines(&self) -> Vec<(String, String)> {
        let m = &self.0.metadata;
        vec![
            ("suites".into(), m.suites.join(" ")),
            ("checks".into(), m.checks.to_string()),
            ("failures".into(), m.failures.to_string()),
        ]
    }

    fn column_names(&self) -> &'static str {
        "suite,name,measured,tolerance,passed"
    }

    fn row_lines(&self) -> Vec<String> {
        self.0
            .rows
            .iter()
            .map(|row| {
                format!(
                    "{},{},{},{},{}",
                    row.suite,
                    row.name,
                    fmt_f(row.measured),
                    fmt_f(row.tolerance),
                    row.passed
                )
            })
            .collect()
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let cfg = parse_tolerances(&args.output.tol)?;
    let (suites, results) = match &args.suite {
        Some(name) => (vec![name.clone()], run_suite(name, &cfg)?),
        None => (
            squeezelab::verify::SUITES.iter().map(|s| s.to_string()).collect(),
            run_all(&cfg)?,
        ),
    };
    let failures = results.iter().filter(|r| !r.passed).count();
    let doc = Document {
        metadata: VerifyMetadata {
            suites,
            checks: results.len(),
            failures,
        },
        rows: results,
    };
    let exit = if doc.metadata.failures == 0 { 0 } else { 1 };
    let bytes = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(&VerifyDocument(doc)),
    };
    write_output(&args.output.out, &bytes)?;
    Ok(exit)
}

// ---- grid -----------------------------------------------------------------

#[derive(Serialize)]
struct GridMetadata {
    alpha_re: f64,
    alpha_im: f64,
    r: f64,
    phi: f64,
    dim: usize,
    x_min: f64,
    x_max: f64,
    points: usize,
    alignment_phase: f64,
    max_deviation: f64,
}

#[derive(Serialize)]
struct GridRow {
    x: f64,
    fock_re: f64,
    fock_im: f64,
    fock_prob: f64,
    closed_re: f64,
    closed_im: f64,
    closed_prob: f64,
    deviation: f64,
}

struct GridDocument(Document<GridMetadata, GridRow>);

impl CsvDocument for GridDocument {
    fn header_lines(&self) -> Vec<(String, String)> {
        let m = &self.0.metadata;
        vec![
            ("alpha_re".into(), fmt_f(m.alpha_re)),
            ("alpha_im".into(), fmt_f(m.alpha_im)),
            ("r".into(), fmt_f(m.r)),
            ("phi".into(), fmt_f(m.phi)),
            ("dim".into(), m.dim.to_string()),
            ("x_min".into(), fmt_f(m.x_min)),
            ("x_max".into(), fmt_f(m.x_max)),
            ("points".into(), m.points.to_string()),
            ("alignment_phase".into(), fmt_f(m.alignment_phase)),
        ]
    }

    fn footer_lines(&self) -> Vec<(String, String)> {
        vec![("max_deviation".into(), fmt_f(self.0.metadata.max_deviation))]
    }

    fn column_names(&self) -> &'static str {
        "x,fock_re,fock_im,fock_prob,closed_re,closed_im,closed_prob,deviation"
    }

    fn row_lines(&self) -> Vec<String> {
        self.0
            .rows
            .iter()
            .map(|row| {
                [
                    fmt_f(row.x),
                    fmt_f(row.fock_re),
                    fmt_f(row.fock_im),
                    fmt_f(row.fock_prob),
                    fmt_f(row.closed_re),
                    fmt_f(row.closed_im),
                    fmt_f(row.closed_prob),
                    fmt_f(row.deviation),
                ]
                .join(",")
            })
            .collect()
    }
}

fn cmd_grid(args: GridArgs) -> Result<i32> {
    let cfg = parse_tolerances(&args.output.tol)?;
    let p = args.params.coherent()?;
    let z = args.params.squeeze()?;
    let grid = Grid::new(args.x_min, args.x_max, args.points)?;
    let state = displaced_squeezed(&p, &z, args.params.dim, &cfg)?;
    let rendered = fock_to_position(&state, &grid)?;
    let closed = psi_ss_closed_form(p.x0(), p.p0(), &z, &grid)?;

    // The two representations agree only up to a global phase; align the
    // closed form for the deviation column and record the angle used.
    let theta = -rendered.inner(&closed)?.arg();
    let rotation = Complex64::from_polar(1.0, theta);

    let pts = grid.points();
    let mut max_deviation = 0.0f64;
    let rows: Vec<GridRow> = (0..grid.n_points())
        .map(|j| {
            let fock = rendered.values()[j];
            let closed_value = closed.values()[j];
            let deviation = (fock - rotation * closed_value).norm();
            max_deviation = max_deviation.max(deviation);
            GridRow {
                x: pts[j],
                fock_re: fock.re,
                fock_im: fock.im,
                fock_prob: fock.norm_sqr(),
                closed_re: closed_value.re,
                closed_im: closed_value.im,
                closed_prob: closed_value.norm_sqr(),
                deviation,
            }
        })
        .collect();
    let doc = Document {
        metadata: GridMetadata {
            alpha_re: args.params.alpha_re,
            alpha_im: args.params.alpha_im,
            r: args.params.r,
            phi: args.params.phi,
            dim: args.params.dim,
            x_min: args.x_min,
            x_max: args.x_max,
            points: args.points,
            alignment_phase: theta,
            max_deviation,
        },
        rows,
    };
    let bytes = match args.output.format {
        Format::Json => to_json(&doc)?,
        Format::Csv => to_csv(&GridDocument(doc)),
    };
    write_output(&args.output.out, &bytes)?;
    Ok(0)
}
