//! Command-line front end: series evaluation, coefficient listings, boundary
//! and accuracy data behind the figures, the branch `-1` table, the identity
//! report and the constants.

mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::real::Precision;
use crate::series::Variant;

#[derive(Debug, Parser)]
#[command(name = "lambert-series", version, about = "Series expansions of the Lambert W function")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one partial sum and compare it with the iterative oracle.
    Eval(EvalArgs),
    /// List expansion coefficients.
    Coeffs(CoeffsArgs),
    /// Emit a boundary curve or threshold curve as `param,re_z,im_z,residual`.
    Boundary(BoundaryArgs),
    /// Sweep the accuracy of a partial sum over `z` or `p`.
    Accuracy(AccuracyArgs),
    /// Compare the two leading-order approximants of `W_{-1}`.
    BranchTable(BranchTableArgs),
    /// Run the exact identity suites.
    Identities(IdentitiesArgs),
    /// Print the computed constants.
    Constants(OutputArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesArg {
    Comtet,
    Improved,
    Eulerian,
    WrightLn,
}

impl From<SeriesArg> for Variant {
    fn from(s: SeriesArg) -> Variant {
        match s {
            SeriesArg::Comtet => Variant::Comtet,
            SeriesArg::Improved => Variant::ImprovedStirling,
            SeriesArg::Eulerian => Variant::ImprovedEulerian,
            SeriesArg::WrightLn => Variant::WrightLn,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PrecisionArg {
    Standard,
    Elevated,
}

impl PrecisionArg {
    fn resolve(self) -> Result<Precision> {
        match self {
            PrecisionArg::Standard => Ok(Precision::Standard),
            PrecisionArg::Elevated => Precision::elevated_from_env(),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct OutputArgs {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, value_enum, default_value = "improved")]
    pub series: SeriesArg,
    /// Truncation order.
    #[arg(long = "N", default_value_t = 40)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub precision: PrecisionArg,
}

/// `start:stop:count`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        crate::exec::linspace(self.start, self.stop, self.count)
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Grid, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid {s:?} must be start:stop:count"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let count: usize = parts[2].trim().parse().map_err(|e| format!("{:?}: {e}", parts[2]))?;
        let g = Grid { start: num(parts[0])?, stop: num(parts[1])?, count };
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if !g.start.is_finite() || !g.stop.is_finite() {
            return Err("grid ends must be finite".into());
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Real argument; uses the `α` form of the series.
    #[arg(long, conflicts_with_all = ["z_re", "z_im"])]
    pub x: Option<f64>,
    #[arg(long = "z-re", allow_hyphen_values = true)]
    pub z_re: Option<f64>,
    #[arg(long = "z-im", allow_hyphen_values = true)]
    pub z_im: Option<f64>,
    #[arg(long, conflicts_with_all = ["p_re", "p_im"])]
    pub alpha: Option<f64>,
    #[arg(long = "p-re", allow_hyphen_values = true)]
    pub p_re: Option<f64>,
    #[arg(long = "p-im", allow_hyphen_values = true)]
    pub p_im: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Eulerian,
    D,
    #[value(name = "2assoc")]
    TwoAssoc,
    Recurrence,
}

#[derive(Clone, Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// `σ` for the Comtet and improved coefficients.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long = "sigma-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub sigma_im: f64,
    /// Representation used for the Wright coefficients.
    #[arg(long, value_enum, default_value = "recurrence")]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    /// Complex-plane boundary of the Comtet domain (optionally `p`-transformed).
    ComtetComplex,
    /// Complex-plane boundary of the improved domain (optionally `p`-transformed).
    ImprovedComplex,
    /// `x_α` of the Comtet series over an `α` grid.
    ComtetAlpha,
    /// Lower end `e^(-|α|)` of the sure-divergence interval.
    DivergenceLower,
    /// Upper end `e^(b|α|)` of the sure-divergence interval.
    DivergenceUpper,
    /// `x_α` of the improved series over `α ∈ (0, e)`.
    ImprovedAlpha,
    /// `z_p` of the transformed Comtet series over a `p` grid.
    TransformedComtet,
    /// `z_p` of the transformed improved series (exact) over a `p` grid.
    TransformedImproved,
    /// The approximation `e^(-p) x₁^(e^(-p))` of the improved `z_p`.
    TransformedImprovedApprox,
}

#[derive(Clone, Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long, value_enum)]
    pub curve: CurveArg,
    /// Parameter grid for the threshold curves.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Samples per half-plane for the complex curves.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    /// Real `p` for the complex curves.
    #[arg(long = "p-re", default_value_t = 0.0, allow_hyphen_values = true)]
    pub p_re: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    Z,
    P,
}

#[derive(Clone, Debug, Args)]
pub struct AccuracyArgs {
    #[arg(long, value_enum, default_value = "improved")]
    pub series: SeriesArg,
    /// Truncation orders, comma separated.
    #[arg(long = "N", value_delimiter = ',', default_values_t = [10usize, 20, 40])]
    pub n: Vec<usize>,
    #[arg(long, value_enum, default_value = "standard")]
    pub precision: PrecisionArg,
    /// Which variable the grid runs over.
    #[arg(long, value_enum, default_value = "z")]
    pub sweep: SweepArg,
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Fixed real `z` for a `p` sweep.
    #[arg(long = "z-re", default_value_t = 10.0, allow_hyphen_values = true)]
    pub z_re: f64,
    /// Fixed `p` for a `z` sweep.
    #[arg(long = "p-re", default_value_t = 0.0, allow_hyphen_values = true)]
    pub p_re: f64,
    #[arg(long = "p-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub p_im: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct BranchTableArgs {
    /// Error sweep over `(-1/e, 0)` instead of the five-row table.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long = "max-n", default_value_t = 20)]
    pub max_n: usize,
    /// Overwrite one triangle entry, `family:n:k:value` (test hook).
    #[arg(long, hide = true)]
    pub corrupt: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// What a command produced: rows for CSV/JSON, lines for text, metadata, and
/// the exit code it asks for.
pub(crate) struct Report {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    text: Vec<String>,
    metadata: Value,
    exit_code: i32,
}

#[derive(Clone, Debug)]
pub(crate) enum Cell {
    Num(f64),
    Int(i64),
    Str(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::from(*x),
            Cell::Num(x) => Value::from(x.to_string()),
            Cell::Int(i) => Value::from(*i),
            Cell::Str(s) => Value::from(s.clone()),
        }
    }
}

impl Report {
    fn new(headers: Vec<&'static str>, metadata: Value) -> Report {
        Report { headers, rows: Vec::new(), text: Vec::new(), metadata, exit_code: 0 }
    }

    fn write(&self, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
        match format {
            Format::Text => {
                for line in &self.text {
                    writeln!(out, "{line}")?;
                }
            }
            Format::Csv => {
                writeln!(err, "{}", self.metadata)?;
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(self.headers.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect())
                    })
                    .collect();
                let doc = serde_json::json!({ "metadata": self.metadata, "rows": rows });
                let s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
                writeln!(out, "{s}")?;
            }
        }
        Ok(())
    }
}

fn dispatch(cli: &Cli) -> Result<(Report, &OutputArgs, Format)> {
    Ok(match &cli.command {
        Command::Eval(a) => (commands::eval(a)?, &a.output, Format::Text),
        Command::Coeffs(a) => (commands::coeffs(a)?, &a.output, Format::Csv),
        Command::Boundary(a) => (commands::boundary(a)?, &a.output, Format::Csv),
        Command::Accuracy(a) => (commands::accuracy(a)?, &a.output, Format::Csv),
        Command::BranchTable(a) => {
            let default = if a.grid.is_some() { Format::Csv } else { Format::Text };
            (commands::branch_table(a)?, &a.output, default)
        }
        Command::Identities(a) => (commands::identities(a)?, &a.output, Format::Text),
        Command::Constants(a) => (commands::constants()?, a, Format::Text),
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Identity(_) => 1,
        _ => 2,
    }
}

/// Runs a parsed command line; returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = dispatch(cli).and_then(|(report, output, default)| {
        let format = output.format.unwrap_or(default);
        match &output.out {
            Some(path) => {
                let mut f = BufWriter::new(File::create(path)?);
                report.write(format, &mut f, err)?;
                f.flush()?;
            }
            None => report.write(format, out, err)?,
        }
        Ok(report.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(Error::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    execute(&cli, &mut io::stdout().lock(), &mut io::stderr().lock())
}

fn complex_of(re: Option<f64>, im: Option<f64>) -> Option<Complex64> {
    match (re, im) {
        (None, None) => None,
        (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
    }
}
