//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::chow::ChowClass;
use crate::contact::{self, ConditionProfile, CurveInvariants};
use crate::error::{Error, Result};
use crate::expr::parse_class;
use crate::recursion::{compute_up_to, compute_with_cache, InvariantTable};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "semple-gw",
    version,
    about = "Second-order Gromov-Witten invariants and triple-contact counts for rational plane curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Z,
    I,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the table of invariants for degrees 1..=D.
    Table {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
        /// JSON cache to resume from and update.
        #[arg(long, env = "SEMPLE_GW_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Triple-contact formula for degree d, evaluated on a curve if given.
    Contact {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        /// Degree of the contact curve.
        #[arg(long)]
        c: Option<u64>,
        /// Class of the contact curve.
        #[arg(long, requires = "c", conflicts_with_all = ["nodes", "cusps"])]
        class: Option<u64>,
        /// Number of cusps of the contact curve.
        #[arg(long, requires = "class")]
        kappa: Option<u64>,
        /// Nodes of the contact curve; the class follows from the Plücker formula.
        #[arg(long, requires = "c")]
        nodes: Option<u64>,
        #[arg(long, requires = "c")]
        cusps: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
        #[arg(long, env = "SEMPLE_GW_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Count curves through points with tangency and triple-contact conditions.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        degree: u32,
        #[arg(long, default_value_t = 0)]
        points: u32,
        /// Tangency to a curve, as c,class,kappa.
        #[arg(long, value_parser = parse_curve)]
        tangent: Vec<CurveInvariants>,
        /// Tangency to a curve, as c,nodes,cusps.
        #[arg(long, value_parser = parse_plucker)]
        tangent_plucker: Vec<CurveInvariants>,
        /// Triple contact with a curve, as c,class,kappa.
        #[arg(long, value_parser = parse_curve)]
        osculate: Vec<CurveInvariants>,
        /// Triple contact with a curve, as c,nodes,cusps.
        #[arg(long, value_parser = parse_plucker)]
        osculate_plucker: Vec<CurveInvariants>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
        #[arg(long, env = "SEMPLE_GW_CACHE")]
        cache: Option<PathBuf>,
    },
    /// Reduce an expression in h, hd, i, z to normal form.
    ChowEval {
        expr: String,
        #[arg(long, value_enum, default_value_t = Basis::Z)]
        basis: Basis,
        /// Print the degree-4 integral instead of the normal form.
        #[arg(long)]
        integrate: bool,
    },
    /// Run the self-test suite.
    Verify {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
        format: OutputFormat,
        #[arg(long, env = "SEMPLE_GW_CACHE")]
        cache: Option<PathBuf>,
    },
}

fn parse_triple(s: &str) -> std::result::Result<[u64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated integers, got {s:?}"
        ));
    }
    let mut out = [0u64; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse()
            .map_err(|_| format!("{p:?} is not a nonnegative integer"))?;
    }
    Ok(out)
}

fn parse_curve(s: &str) -> std::result::Result<CurveInvariants, String> {
    let [c, cd, k] = parse_triple(s)?;
    Ok(CurveInvariants::new(c, cd, k))
}

fn parse_plucker(s: &str) -> std::result::Result<CurveInvariants, String> {
    let [c, n, k] = parse_triple(s)?;
    contact::plucker_class(c, n, k).map_err(|e| e.to_string())
}

fn load_table(dmax: u32, cache: Option<&PathBuf>) -> Result<InvariantTable> {
    match cache {
        Some(p) => compute_with_cache(dmax, p),
        None => compute_up_to(dmax),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnsupportedProfile { .. } => EXIT_UNSUPPORTED,
        Error::DimensionMismatch { .. }
        | Error::InvalidCurve(_)
        | Error::Parse { .. }
        | Error::ZeroDegree => EXIT_USAGE,
        Error::Cache(_) => EXIT_VERIFY,
        _ => EXIT_FAILURE,
    }
}

fn print_result(
    out: &mut dyn Write,
    r: &contact::ContactResult,
    format: OutputFormat,
) -> Result<()> {
    match format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(r)?)?,
        OutputFormat::Csv => writeln!(
            out,
            "degree,profile,count,formula\n{},{},{},{}",
            r.degree,
            r.profile,
            r.count,
            r.formula.as_deref().unwrap_or("")
        )?,
        OutputFormat::Pretty => {
            writeln!(out, "{}", r.count)?;
            if let Some(f) = &r.formula {
                writeln!(out, "formula: {f}")?;
            }
        }
    }
    Ok(())
}

fn run_command(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Table {
            max_degree,
            format,
            cache,
        } => {
            let table = load_table(max_degree, cache.as_ref())?;
            match format {
                OutputFormat::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&table.to_json())?)?
                }
                OutputFormat::Csv => write!(out, "{}", table.to_csv())?,
                OutputFormat::Pretty => write!(out, "{}", table.to_pretty())?,
            }
            Ok(EXIT_OK)
        }
        Command::Contact {
            degree,
            c,
            class,
            kappa,
            nodes,
            cusps,
            format,
            cache,
        } => {
            let table = load_table(degree, cache.as_ref())?;
            let curve = match (c, class) {
                (None, _) => None,
                (Some(c), Some(cd)) => Some(CurveInvariants::new(c, cd, kappa.unwrap_or(0))),
                (Some(c), None) => Some(contact::plucker_class(
                    c,
                    nodes.unwrap_or(0),
                    cusps.unwrap_or(0),
                )?),
            };
            let result = match curve {
                Some(k) => contact::evaluate(&contact::triple_contact_profile(degree, k), &table)?,
                None => contact::ContactResult {
                    degree,
                    profile: format!("r={},s=0,t=1", 3 * degree - 3),
                    count: String::new(),
                    formula: Some(contact::contact_formula(degree, &table)?),
                    warnings: Vec::new(),
                },
            };
            for w in &result.warnings {
                writeln!(err, "warning: {w}")?;
            }
            if curve.is_none() && format == OutputFormat::Pretty {
                writeln!(out, "{}", result.formula.as_deref().unwrap_or_default())?;
            } else {
                print_result(out, &result, format)?;
            }
            Ok(EXIT_OK)
        }
        Command::Count {
            degree,
            points,
            mut tangent,
            tangent_plucker,
            mut osculate,
            osculate_plucker,
            format,
            cache,
        } => {
            tangent.extend(tangent_plucker);
            osculate.extend(osculate_plucker);
            let profile = ConditionProfile {
                degree,
                points,
                tangent,
                osculate,
            };
            profile.validate()?;
            let table = load_table(degree, cache.as_ref())?;
            let result = contact::evaluate(&profile, &table)?;
            for w in &result.warnings {
                writeln!(err, "warning: {w}")?;
            }
            print_result(out, &result, format)?;
            Ok(EXIT_OK)
        }
        Command::ChowEval {
            expr,
            basis,
            integrate,
        } => {
            let class: ChowClass = parse_class(&expr)?;
            if integrate {
                writeln!(out, "{}", class.integrate())?;
            } else {
                match basis {
                    Basis::Z => writeln!(out, "{class}")?,
                    Basis::I => writeln!(out, "{}", class.to_i_basis())?,
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify {
            max_degree,
            format,
            cache,
        } => {
            let reports = match cache {
                Some(p) => verify::run_selftest_cached(max_degree, &p)?,
                None => verify::run_selftest(max_degree)?,
            };
            match format {
                OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
                _ => {
                    for r in &reports {
                        let status = if r.passed() { "PASS" } else { "FAIL" };
                        let range = r
                            .degrees
                            .map(|(a, b)| format!(" d={a}..{b}"))
                            .unwrap_or_default();
                        writeln!(out, "{status} {}{range}", r.check)?;
                        if let Some(detail) = &r.detail {
                            writeln!(
                                out,
                                "     {detail}: expected {}, got {}",
                                r.expected.as_deref().unwrap_or("?"),
                                r.actual.as_deref().unwrap_or("?")
                            )?;
                        }
                    }
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
    }
}

/// Run a parsed command, writing data to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_command(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}
