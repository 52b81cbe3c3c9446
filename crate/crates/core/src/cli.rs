//! Command-line front end.
//!
//! Exit codes: `0` when every check passes, `1` when a tolerance or
//! certificate fails (or a computation breaks down), `2` for invalid
//! arguments. Every flag can also be set through a `SHARPGRAD_*`
//! environment variable.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    certify_convexity, certify_radial_max, constant_row, ConstantQuery, ConstantRow,
    ConvexityReport, RadialMaxReport, RadialPoint,
};
use crate::identities::{run_suite, IdentityCheck, IdentityReport, SuiteConfig};
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::series::SeriesControl;

#[derive(Debug, Parser)]
#[command(name = "sharpgrad", version, about = "Sharp gradient constants for bounded harmonic functions on the unit ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate C(ρe₁, ℓ_α) by the series and double-integral routes.
    Constant(ConstantArgs),
    /// Run the convexity and radial-maximality certificates.
    Certify(CertifyArgs),
    /// Run the polynomial identity suite.
    Identities(IdentityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Numerics {
    /// Dimension n ≥ 3.
    #[arg(long, env = "SHARPGRAD_DIM")]
    pub dim: u32,
    /// Comma-separated radii in [0, 1).
    #[arg(long, env = "SHARPGRAD_RHO", value_delimiter = ',', required = true, num_args = 1..)]
    pub rho: Vec<f64>,
    /// Cap on the number of series terms.
    #[arg(long, env = "SHARPGRAD_MAX_TERMS", default_value_t = SeriesControl::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Tail tolerance of the series truncation rule.
    #[arg(long, env = "SHARPGRAD_TAIL_TOL", default_value_t = SeriesControl::DEFAULT_TAIL_TOL)]
    pub tail_tol: f64,
    /// Gauss-Legendre order for every fixed-order integral.
    #[arg(long, env = "SHARPGRAD_QUAD_ORDER", default_value_t = 128)]
    pub quad_order: usize,
    /// Relative tolerance for cross-route agreement.
    #[arg(long, env = "SHARPGRAD_TOL", default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, env = "SHARPGRAD_FORMAT", value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, env = "SHARPGRAD_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub numerics: Numerics,
    /// Comma-separated angles: numbers, `pi`, `pi/12`, `3pi/4`, or `grid:N`
    /// for N equispaced angles from 0 to π.
    #[arg(long, env = "SHARPGRAD_ALPHA", value_delimiter = ',', default_value = "grid:13")]
    pub alpha: Vec<AlphaSpec>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub numerics: Numerics,
    /// Angle grid for the radial-maximality scan; must contain 0 and π.
    #[arg(long, env = "SHARPGRAD_ALPHA", value_delimiter = ',', default_value = "grid:181")]
    pub alpha: Vec<AlphaSpec>,
    /// Number of points of the t grid on [-0.999, 0.999].
    #[arg(long, env = "SHARPGRAD_T_GRID", default_value_t = 201)]
    pub t_grid: usize,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// Comma-separated λ values; the built-in sweep is used when absent.
    #[arg(long, env = "SHARPGRAD_LAMBDA", value_delimiter = ',')]
    pub lambda: Option<Vec<f64>>,
    /// Comma-separated check names; all checks when absent.
    #[arg(long, env = "SHARPGRAD_CHECK", value_delimiter = ',')]
    pub check: Option<Vec<IdentityCheck>>,
    #[arg(long, env = "SHARPGRAD_MAX_DEGREE", default_value_t = 12)]
    pub max_degree: usize,
    #[arg(long, env = "SHARPGRAD_SAMPLES", default_value_t = 20)]
    pub samples: usize,
    #[arg(long, env = "SHARPGRAD_SEED", default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, env = "SHARPGRAD_QUAD_ORDER", default_value_t = 128)]
    pub quad_order: usize,
    #[arg(long, env = "SHARPGRAD_FORMAT", value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, env = "SHARPGRAD_OUT")]
    pub out: Option<PathBuf>,
}

/// One token of an `--alpha` list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Value(f64),
    Grid(usize),
}

impl FromStr for AlphaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("grid:") {
            let n: usize = n.parse().map_err(|_| format!("bad grid size in `{s}`"))?;
            if n < 2 {
                return Err(format!("grid needs at least 2 points, got {n}"));
            }
            return Ok(AlphaSpec::Grid(n));
        }
        parse_angle(s).map(AlphaSpec::Value)
    }
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let bad = || format!("cannot parse angle `{s}`");
    let Some(pos) = s.find("pi") else {
        return s.parse().map_err(|_| bad());
    };
    let head = s[..pos].trim_end_matches('*');
    let tail = &s[pos + 2..];
    let coef: f64 = if head.is_empty() { 1.0 } else { head.parse().map_err(|_| bad())? };
    let div: f64 = if tail.is_empty() {
        1.0
    } else {
        tail.strip_prefix('/').ok_or_else(bad)?.parse().map_err(|_| bad())?
    };
    Ok(coef * PI / div)
}

/// Expand grid tokens and sort; duplicates are removed.
pub fn expand_alphas(specs: &[AlphaSpec]) -> Vec<f64> {
    let mut out = Vec::new();
    for spec in specs {
        match *spec {
            AlphaSpec::Value(a) => out.push(a),
            AlphaSpec::Grid(n) => out.extend(crate::constants::default_alpha_grid(n - 1)),
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage<T>(r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

/// Parse `args` and run; the returned code follows the module contract.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Constant(a) => cmd_constant(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Identities(a) => cmd_identities(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Setup {
    points: Vec<RadialPoint>,
    ctl: SeriesControl,
    rule: QuadratureRule,
}

fn setup(num: &Numerics) -> Result<Setup, Failure> {
    if num.rho.is_empty() {
        return Err(Failure::Usage("--rho needs at least one value".into()));
    }
    if !(num.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", num.tol)));
    }
    let points = num
        .rho
        .iter()
        .map(|&rho| usage(RadialPoint::new(num.dim, rho)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Setup {
        points,
        ctl: usage(SeriesControl::new(num.max_terms, num.tail_tol))?,
        rule: usage(gauss_legendre(num.quad_order))?,
    })
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// 17 significant digits.
fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct ConstantOutput<'a> {
    tol: f64,
    pass: bool,
    rows: &'a [ConstantRow],
}

fn cmd_constant(a: &ConstantArgs) -> Result<bool, Failure> {
    let s = setup(&a.numerics)?;
    let alphas = expand_alphas(&a.alpha);
    let queries = s
        .points
        .iter()
        .flat_map(|p| alphas.iter().map(move |&al| usage(ConstantQuery::at(*p, al))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = queries
        .par_iter()
        .map(|q| constant_row(q, &s.ctl, &s.rule))
        .collect::<crate::Result<Vec<_>>>()?;
    let tol = a.numerics.tol;
    let pass = rows
        .iter()
        .all(|r| r.abs_diff <= tol * r.c_series.abs().max(1.0));

    let mut w = sink(&a.numerics.out)?;
    match a.numerics.format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(["n", "rho", "alpha", "c_series", "c_melen", "abs_diff"])
                .map_err(csv_err)?;
            for r in &rows {
                csv.write_record([
                    r.n.to_string(),
                    sig17(r.rho),
                    sig17(r.alpha),
                    sig17(r.c_series),
                    sig17(r.c_melen),
                    sig17(r.abs_diff),
                ])
                .map_err(csv_err)?;
            }
            csv.flush()?;
        }
        Format::Json => write_json(&mut w, &ConstantOutput { tol, pass, rows: &rows })?,
    }
    Ok(pass)
}

#[derive(Serialize)]
struct CertifyEntry {
    convexity: ConvexityReport,
    radial_max: RadialMaxReport,
    pass: bool,
}

#[derive(Serialize)]
struct CertifyOutput<'a> {
    pass: bool,
    reports: &'a [CertifyEntry],
}

fn cmd_certify(a: &CertifyArgs) -> Result<bool, Failure> {
    let s = setup(&a.numerics)?;
    if a.t_grid < 3 {
        return Err(Failure::Usage(format!("--t-grid must be at least 3, got {}", a.t_grid)));
    }
    let alphas = expand_alphas(&a.alpha);
    if alphas.first() != Some(&0.0) || alphas.last() != Some(&PI) || alphas.len() < 2 {
        return Err(Failure::Usage("--alpha grid must contain 0 and pi".into()));
    }
    let mut entries = Vec::with_capacity(s.points.len());
    for p in &s.points {
        let convexity = certify_convexity(p, a.t_grid, &s.ctl, &s.rule)?;
        let radial_max = certify_radial_max(p, &alphas, &s.ctl, &s.rule)?;
        let pass = convexity.pass && radial_max.pass;
        entries.push(CertifyEntry {
            convexity,
            radial_max,
            pass,
        });
    }
    let pass = entries.iter().all(|e| e.pass);

    let mut w = sink(&a.numerics.out)?;
    match a.numerics.format {
        Format::Json => write_json(&mut w, &CertifyOutput { pass, reports: &entries })?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record([
                "n",
                "rho",
                "min_second_derivative",
                "argmin_t",
                "convexity_discrepancy",
                "argmax_alpha",
                "radial_gap",
                "radial_discrepancy",
                "truncation_order",
                "quad_order",
                "pass",
            ])
            .map_err(csv_err)?;
            for e in &entries {
                let (c, r) = (&e.convexity, &e.radial_max);
                let argmax = r.argmax_alpha.iter().map(|&x| sig17(x)).collect::<Vec<_>>().join(";");
                csv.write_record([
                    c.n.to_string(),
                    sig17(c.rho),
                    sig17(c.min_second_derivative),
                    sig17(c.argmin_t),
                    sig17(c.max_cross_route_discrepancy),
                    argmax,
                    sig17(r.radial_gap),
                    sig17(r.radial_discrepancy),
                    c.truncation_order.max(r.truncation_order).to_string(),
                    c.quad_order.to_string(),
                    e.pass.to_string(),
                ])
                .map_err(csv_err)?;
            }
            csv.flush()?;
        }
    }
    Ok(pass)
}

#[derive(Serialize)]
struct IdentityOutput<'a> {
    pass: bool,
    reports: &'a [IdentityReport],
}

fn cmd_identities(a: &IdentityArgs) -> Result<bool, Failure> {
    let cfg = SuiteConfig {
        lambdas: a.lambda.clone(),
        max_degree: a.max_degree,
        samples: a.samples,
        seed: a.seed,
        quad_order: a.quad_order,
        checks: a.check.clone().unwrap_or_else(|| IdentityCheck::ALL.to_vec()),
    };
    let reports = usage(run_suite(&cfg))?;
    let pass = reports.iter().all(|r| r.pass);

    let mut w = sink(&a.out)?;
    match a.format {
        Format::Json => write_json(&mut w, &IdentityOutput { pass, reports: &reports })?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record([
                "check",
                "variant",
                "lambda",
                "cases",
                "max_abs_residual",
                "worst_ratio",
                "pass",
            ])
            .map_err(csv_err)?;
            for r in &reports {
                csv.write_record([
                    r.check.name().to_string(),
                    r.variant.to_string(),
                    sig17(r.lambda),
                    r.cases.to_string(),
                    sig17(r.max_abs_residual),
                    sig17(r.worst_ratio),
                    r.pass.to_string(),
                ])
                .map_err(csv_err)?;
            }
            csv.flush()?;
        }
    }
    Ok(pass)
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Failure::Runtime(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Runtime(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_tokens() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/12").unwrap(), PI / 12.0);
        assert_eq!(parse_angle("3pi/4").unwrap(), 3.0 * PI / 4.0);
        assert_eq!(parse_angle("3*pi/4").unwrap(), 3.0 * PI / 4.0);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("x").is_err());
        assert!("grid:1".parse::<AlphaSpec>().is_err());
    }

    #[test]
    fn grid_expansion() {
        let a = expand_alphas(&[AlphaSpec::Grid(13), AlphaSpec::Value(PI)]);
        assert_eq!(a.len(), 13);
        assert_eq!(a[0], 0.0);
        assert_eq!(a[12], PI);
        assert!((a[1] - PI / 12.0).abs() < 1e-15);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig17(1.5), "1.5000000000000000e0");
        let v = 0.1 + 0.2;
        assert_eq!(sig17(v).parse::<f64>().unwrap(), v);
    }
}
