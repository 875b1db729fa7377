//! Command-line front end: argument and config-file parsing, table caching,
//! and one runner per subcommand.

mod commands;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::Convention;
use crate::error::{Error, Result};
use crate::numeric::{parse_complex, Abscissa};
use crate::products::{EulerProductSpec, ProductFile};
use crate::report::{Format, Report};

pub use commands::run_command;

/// Environment variable naming the table cache directory.
pub const CACHE_ENV: &str = "ASSOC_TOTIENT_CACHE";

#[derive(Parser, Debug)]
#[command(name = "assoc-totient", version, about = "Associated Euler totients, their error terms and the Volterra equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// C(F), A1 and, for characters, L(1) and L(2).
    Constants,
    /// alpha(n), phi(n,F) and cumulative sums for n <= N.
    Table,
    /// E(x,F) or E2(x,F).
    ErrorTerm,
    /// E2 = x f1 + g1/2 at each x.
    Decompose,
    /// The constant-free reduced identity, exactly.
    VerifyIdentity,
    /// Residuals, solver and homogeneous probe for the integral equation.
    Volterra,
    /// sup |E(x)| / (x (log 2x)^d).
    Growth,
    /// sum phi(n)/n^s against zeta(s-1) sum alpha(n)/n^s.
    SeriesCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Table => "table",
            Command::ErrorTerm => "error-term",
            Command::Decompose => "decompose",
            Command::VerifyIdentity => "verify-identity",
            Command::Volterra => "volterra",
            Command::Growth => "growth",
            Command::SeriesCheck => "series-check",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProductChoice {
    Zeta,
    Dirichlet,
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VolterraTask {
    Residual,
    Solve,
    Probe,
}

/// Every flag is optional here; values missing from both the command line
/// and the config file fall back to defaults in [`RunConfig::resolve`].
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct Options {
    /// JSON config file mirroring these options; flags override it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub product: Option<ProductChoice>,
    /// Discriminant D of the real character (D|.) of modulus |D|.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub kronecker: Option<i64>,
    /// JSON product specification.
    #[arg(long, global = true)]
    pub product_file: Option<PathBuf>,
    /// Inline product specification (config file only).
    #[arg(skip)]
    pub product_spec: Option<ProductFile>,
    /// Table size N.
    #[arg(long = "n", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
    /// Single value, comma list, or range a:b:step.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub convention: Option<Convention>,
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Right endpoint X.
    #[arg(long = "X", global = true)]
    #[serde(rename = "X")]
    pub x_max: Option<f64>,
    /// Grid step h (reciprocal of an integer).
    #[arg(long, global = true)]
    pub h: Option<f64>,
    /// x0=auto or x0=value.
    #[arg(long, global = true)]
    pub anchor: Option<String>,
    /// Family parameter A for volterra residuals.
    #[arg(long = "A", global = true, allow_hyphen_values = true)]
    #[serde(rename = "A")]
    pub a: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub task: Option<VolterraTask>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub prime_cutoff: Option<u64>,
    #[arg(long, global = true)]
    pub a1_cutoff: Option<u64>,
    /// Pass threshold for volterra residuals.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl Options {
    /// Fields set here win; unset ones come from `base`.
    fn over(self, base: Options) -> Options {
        Options {
            config: self.config.or(base.config),
            product: self.product.or(base.product),
            kronecker: self.kronecker.or(base.kronecker),
            product_file: self.product_file.or(base.product_file),
            product_spec: self.product_spec.or(base.product_spec),
            n: self.n.or(base.n),
            mode: self.mode.or(base.mode),
            x: self.x.or(base.x),
            convention: self.convention.or(base.convention),
            s: self.s.or(base.s),
            x_max: self.x_max.or(base.x_max),
            h: self.h.or(base.h),
            anchor: self.anchor.or(base.anchor),
            a: self.a.or(base.a),
            task: self.task.or(base.task),
            samples: self.samples.or(base.samples),
            prime_cutoff: self.prime_cutoff.or(base.prime_cutoff),
            a1_cutoff: self.a1_cutoff.or(base.a1_cutoff),
            tolerance: self.tolerance.or(base.tolerance),
            format: self.format.or(base.format),
            output: self.output.or(base.output),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Anchor {
    Auto(f64),
    Value(f64, Complex64),
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub spec: EulerProductSpec,
    pub n: Option<usize>,
    pub mode: Mode,
    pub xs: Vec<Abscissa>,
    pub convention: Convention,
    pub s: f64,
    pub x_max: Option<f64>,
    pub h: f64,
    pub anchor: Anchor,
    pub a: Complex64,
    pub task: VolterraTask,
    pub samples: usize,
    pub prime_cutoff: u64,
    pub a1_cutoff: u64,
    pub tolerance: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// `a:b:step` (inclusive, exact arithmetic), `a,b,c`, or a single value.
pub fn parse_x_list(text: &str) -> Result<Vec<Abscissa>> {
    let bad = |what: &str| usage(format!("--x {text}: {what}"));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (Abscissa::parse(a)?, Abscissa::parse(b)?, Abscissa::parse(step)?);
            if step.numer() <= 0 {
                return Err(bad("step must be positive"));
            }
            let count = (b.ratio() - a.ratio()) / step.ratio();
            if count < num_rational::Ratio::from_integer(0) {
                return Err(bad("empty range"));
            }
            let count = count.floor().to_integer();
            if count > 10_000_000 {
                return Err(bad("range too long"));
            }
            (0..=count)
                .map(|i| {
                    let v = a.ratio() + step.ratio() * i;
                    Abscissa::new(*v.numer(), *v.denom())
                })
                .collect()
        }
        [single] => single.split(',').map(|v| Abscissa::parse(v).map_err(|_| bad("not a number"))).collect(),
        _ => Err(bad("expected a value, a comma list or a:b:step")),
    }
}

fn parse_anchor(text: &str) -> Result<Anchor> {
    let (x0, v) = text.split_once('=').ok_or_else(|| usage(format!("--anchor {text}: expected x0=auto or x0=value")))?;
    let x0: f64 = x0.trim().parse().map_err(|_| usage(format!("--anchor {text}: bad x0")))?;
    match v.trim() {
        "auto" => Ok(Anchor::Auto(x0)),
        value => Ok(Anchor::Value(x0, parse_complex(value).map_err(|_| usage(format!("--anchor {text}: bad value")))?)),
    }
}

fn load_spec(opts: &Options) -> Result<EulerProductSpec> {
    if let Some(path) = &opts.product_file {
        let text = std::fs::read_to_string(path)?;
        return EulerProductSpec::from_json(&text);
    }
    if let Some(file) = &opts.product_spec {
        return file.clone().into_spec();
    }
    match opts.product.unwrap_or(ProductChoice::Zeta) {
        ProductChoice::Zeta => Ok(EulerProductSpec::zeta()),
        ProductChoice::Dirichlet => {
            let d = opts.kronecker.ok_or_else(|| usage("--product dirichlet needs --kronecker D or --product-file"))?;
            EulerProductSpec::kronecker(d)
        }
        ProductChoice::Custom => Err(usage("--product custom needs --product-file")),
    }
}

impl RunConfig {
    pub fn resolve(command: Command, opts: Options) -> Result<Self> {
        let spec = load_spec(&opts)?;
        let default_mode = if command == Command::VerifyIdentity { Mode::Exact } else { Mode::Float };
        let xs = match &opts.x {
            Some(t) => parse_x_list(t)?,
            None => Vec::new(),
        };
        if let Some(n) = opts.n {
            if n == 0 {
                return Err(usage("--n must be at least 1"));
            }
        }
        let h = opts.h.unwrap_or(1e-3);
        if !(h > 0.0) {
            return Err(usage("--h must be positive"));
        }
        let anchor = match &opts.anchor {
            Some(t) => parse_anchor(t)?,
            None => Anchor::Auto(1.5),
        };
        let a = match &opts.a {
            Some(t) => parse_complex(t).map_err(|_| usage(format!("--A {t}: not a number")))?,
            None => Complex64::new(0.0, 0.0),
        };
        Ok(Self {
            command,
            spec,
            n: opts.n,
            mode: opts.mode.unwrap_or(default_mode),
            xs,
            convention: opts.convention.unwrap_or(Convention::Plain),
            s: opts.s.unwrap_or(3.0),
            x_max: opts.x_max,
            h,
            anchor,
            a,
            task: opts.task.unwrap_or(VolterraTask::Residual),
            samples: opts.samples.unwrap_or(100),
            prime_cutoff: opts.prime_cutoff.unwrap_or(1_000_000),
            a1_cutoff: opts.a1_cutoff.unwrap_or(1_000_000),
            tolerance: opts.tolerance.unwrap_or(1e-5),
            format: opts.format.unwrap_or(Format::Csv),
            output: opts.output,
        })
    }

    /// Largest x requested, used to size tables when `--n` is absent.
    pub fn max_x(&self) -> Option<f64> {
        self.xs.iter().map(|x| x.to_f64()).fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))))
    }
}

fn read_config(path: &Path) -> Result<Options> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

/// Parses argv plus the optional config file into a validated [`RunConfig`].
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string()))?;
    let file = match &cli.opts.config {
        Some(path) => read_config(path)?,
        None => Options::default(),
    };
    RunConfig::resolve(cli.command, cli.opts.over(file))
}

/// Result of a command: the report and whether every verification passed.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

/// Full CLI entry: parse, run, write, and map the result to an exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // help and version go to stdout with status 0
    if let Err(e) = Cli::try_parse_from(&argv) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            print!("{e}");
            return 0;
        }
    }
    match parse_config(argv).and_then(|cfg| execute(&cfg)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the command and writes its report; returns whether it passed.
pub fn execute(cfg: &RunConfig) -> Result<bool> {
    let outcome = run_command(cfg)?;
    match &cfg.output {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            crate::report::emit_report(&outcome.report, cfg.format, std::io::BufWriter::new(file))?;
        }
        None => {
            let stdout = std::io::stdout();
            crate::report::emit_report(&outcome.report, cfg.format, stdout.lock())?;
        }
    }
    Ok(outcome.passed)
}
