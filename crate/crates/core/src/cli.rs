//! Command-line front end.
//!
//! Exit codes: `0` success, `1` numerical or internal failure, `2` the input was
//! rejected, `3` some verdict is indeterminate (or a residue fit is unavailable),
//! `64` malformed command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::family::{sweep, Family, RangeSpec};
use crate::poly::Weights;
use crate::quadrature::Tolerances;
use crate::report;
use crate::{parse_poly, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "BSPOLE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "bspole", version, about = "Pole detection for real zeta functions of weighted homogeneous f(x, y)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,

    /// Quadrature error target relative to the integrand's L1 mass.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_rel: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub zero_abs: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub zero_rel: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Polynomial in x, y with rational coefficients, e.g. "x^4 + y^3".
    #[arg(long)]
    pub poly: String,

    /// Override the inferred type as a,b,m.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every Bernstein-Sato root in (-1, 0).
    Analyze {
        #[arg(long, required_unless_present = "family", conflicts_with = "family")]
        poly: Option<String>,

        #[arg(long, conflicts_with = "family")]
        weights: Option<String>,

        /// Sweep a family instead: xn+ym, xm+xyn or xny+xym.
        #[arg(long, requires = "range")]
        family: Option<String>,

        /// Parameter ranges for --family: "lo..hi" for both n and m, or "lo..hi,lo..hi".
        #[arg(long, requires = "family")]
        range: Option<String>,
    },
    /// List roots without classifying them (both lists by default).
    Roots {
        #[command(flatten)]
        input: Input,

        #[arg(long)]
        window: bool,

        #[arg(long)]
        full: bool,
    },
    /// Evaluate one criterion integral for d = (j+1)a + (k+1)b.
    Integral {
        #[command(flatten)]
        input: Input,

        #[arg(long)]
        d: u64,

        #[arg(long)]
        j: u32,

        #[arg(long)]
        k: u32,
    },
    /// Residue at -d/m by the closed form and by fitting the continuation.
    Residue {
        #[command(flatten)]
        input: Input,

        #[arg(long)]
        d: u64,

        /// Derivative indices of the bump test function (default: first representation of d).
        #[arg(long, requires = "j")]
        i: Option<u32>,

        #[arg(long, requires = "i")]
        j: Option<u32>,
    },
}

impl Cli {
    pub fn tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(v) = self.tol_rel {
            tol.rel_err = v;
        }
        if let Some(v) = self.zero_abs {
            tol.zero_abs = v;
        }
        if let Some(v) = self.zero_rel {
            tol.zero_rel = v;
        }
        tol
    }
}

fn parse_weights(text: Option<&str>) -> Result<Option<Weights>, Error> {
    text.map(|t| t.parse::<Weights>().map_err(Error::from)).transpose()
}

struct Rendered {
    body: String,
    code: i32,
}

fn render<T>(format: Format, value: &T, json: fn(&T) -> String, csv: fn(&T) -> Result<String, Error>, text: fn(&T) -> String) -> Result<String, Error> {
    match format {
        Format::Json => Ok(json(value)),
        Format::Csv => csv(value),
        Format::Text => Ok(text(value)),
    }
}

fn execute(cli: &Cli) -> Result<Rendered, Error> {
    let tol = cli.tolerances();
    let format = cli.format;
    match &cli.command {
        Command::Analyze {
            poly,
            weights,
            family,
            range,
        } => {
            if let (Some(family), Some(range)) = (family, range) {
                let family: Family = family.parse()?;
                let range: RangeSpec = range.parse()?;
                let result = sweep(family, &range, &tol)?;
                let body = render(format, &result, |r| r.to_json(), |r| r.to_csv(), |r| r.to_text())?;
                let code = if result.has_indeterminate() { EXIT_INDETERMINATE } else { EXIT_OK };
                return Ok(Rendered { body, code });
            }
            let text = poly.as_deref().expect("clap requires --poly without --family");
            let f = parse_poly(text)?;
            let r = report::analyze(&f, parse_weights(weights.as_deref())?, &tol)?;
            let body = render(format, &r, |r| r.to_json(), |r| r.to_csv(), |r| r.to_text())?;
            let code = if r.has_indeterminate() { EXIT_INDETERMINATE } else { EXIT_OK };
            Ok(Rendered { body, code })
        }
        Command::Roots { input, window, full } => {
            let f = parse_poly(&input.poly)?;
            let (window, full) = if !window && !full { (true, true) } else { (*window, *full) };
            let r = report::roots(&f, parse_weights(input.weights.as_deref())?, window, full)?;
            let body = render(format, &r, |r| r.to_json(), |r| r.to_csv(), |r| r.to_text())?;
            Ok(Rendered { body, code: EXIT_OK })
        }
        Command::Integral { input, d, j, k } => {
            let f = parse_poly(&input.poly)?;
            let r = report::integral(&f, parse_weights(input.weights.as_deref())?, *d, *j, *k, &tol)?;
            let body = render(format, &r, |r| r.to_json(), |r| r.to_csv(), |r| r.to_text())?;
            Ok(Rendered { body, code: EXIT_OK })
        }
        Command::Residue { input, d, i, j } => {
            let f = parse_poly(&input.poly)?;
            let ij = i.zip(*j);
            let r = report::residue(&f, parse_weights(input.weights.as_deref())?, *d, ij, &tol)?;
            let body = render(format, &r, |r| r.to_json(), |r| r.to_csv(), |r| r.to_text())?;
            let code = if r.numeric_fit.is_some() { EXIT_OK } else { EXIT_INDETERMINATE };
            Ok(Rendered { body, code })
        }
    }
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got `{v}`")),
        },
        Err(_) => Ok(None),
    }
}

/// Runs the command line, writing the report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let threads = match thread_cap() {
        Ok(n) => n,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_FAILURE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(rendered) => {
            let _ = write!(out, "{}", rendered.body);
            rendered.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_FAILURE
            }
        }
    }
}
