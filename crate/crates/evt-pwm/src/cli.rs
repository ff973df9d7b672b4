//! Command-line surface: block construction, fitting, asymptotic
//! comparison, figure-grid regeneration and simulation.

use std::fs;
use std::io::{self, Read, Write};

use clap::{Args, Parser, Subcommand};

use crate::asymptotics::{
    bm_asymp, format_g17, grid_eval, k0_ratio, minmse_ratio, pot_asymp, write_grid_csv,
    GridMetric, Method, PotTarget, Target, DEFAULT_GAMMA_STEP, DEFAULT_RHO_STEP,
};
use crate::bm_pwm::{block_maxima, bm_fit, bm_quantile, pwm_betas, BlockMaximaSample, BlockSpec, PartialPolicy};
use crate::error::{EvtError, Result};
use crate::evt_math::SecondOrderParams;
use crate::pot_pwm::{pot_fit, pot_quantile, PotSample};
use crate::sim::{mc_bm_study, mc_pot_study, write_mc_csv, DistSpec, McConfig, McEstimand};

#[derive(Parser)]
#[command(
    name = "evt-pwm",
    about = "Block-maxima and peaks-over-threshold PWM estimation and comparison",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input CSV path, or '-' for stdin (header row required)
    #[arg(long, default_value = "-")]
    input: String,
    /// Value column name (default: first numeric column)
    #[arg(long)]
    column: Option<String>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<String>,
    /// Output format (csv is the only supported format)
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build per-block maxima from a raw series
    Blocks {
        #[command(flatten)]
        io: IoArgs,
        /// Block size m
        #[arg(long = "block-size")]
        block_size: usize,
        /// Trailing partial block handling
        #[arg(long, default_value = "discard")]
        partial: String,
    },
    /// Fit the GEV PWM estimators to block maxima
    BmFit {
        #[command(flatten)]
        io: IoArgs,
        /// Block size m the maxima were built with
        #[arg(long = "block-size")]
        block_size: usize,
        /// Also estimate the quantile exceeded with probability p per
        /// observation (requires m*p < 1)
        #[arg(long)]
        quantile: Option<f64>,
    },
    /// Fit the GPD PWM estimators to the top k order statistics
    PotFit {
        #[command(flatten)]
        io: IoArgs,
        /// Number of top order statistics
        #[arg(short, long)]
        k: usize,
        /// Also estimate the quantile exceeded with probability p
        /// (requires p < k/n)
        #[arg(long)]
        quantile: Option<f64>,
    },
    /// Asymptotic variance/bias summary at one (gamma, rho, method, target)
    Asymp {
        /// Extreme value index
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// Second-order index (<= 0)
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        /// Bias scale lambda = lim sqrt(k) A(m)
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        lambda: f64,
        /// bm or pot
        #[arg(long)]
        method: String,
        /// gamma, scale, location or quantile
        #[arg(long, default_value = "gamma")]
        target: String,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<String>,
    },
    /// Tabulate a comparison metric over a (gamma, rho) grid
    CompareGrid {
        /// Metric name (var-bm, var-pot, bias-ratio, minmse-ratio,
        /// k0-ratio, or their quantile-* variants)
        #[arg(long)]
        metric: String,
        #[arg(long = "gamma-min", default_value_t = -1.0, allow_negative_numbers = true)]
        gamma_min: f64,
        #[arg(long = "gamma-max", default_value_t = 0.45, allow_negative_numbers = true)]
        gamma_max: f64,
        /// Single rho value (shorthand for equal --rho-min/--rho-max)
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<f64>,
        #[arg(long = "rho-min", default_value_t = -1.0, allow_negative_numbers = true)]
        rho_min: f64,
        #[arg(long = "rho-max", default_value_t = 0.0, allow_negative_numbers = true)]
        rho_max: f64,
        /// Gamma step
        #[arg(long, default_value_t = DEFAULT_GAMMA_STEP)]
        step: f64,
        /// Rho step
        #[arg(long = "rho-step", default_value_t = DEFAULT_RHO_STEP)]
        rho_step: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a Monte Carlo study of the normalized estimator statistics
    Simulate {
        /// gev, gpd, frechet, uniform, exponential or burr
        #[arg(long)]
        dist: String,
        /// Tail index for gev/gpd
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        /// Frechet shape
        #[arg(long)]
        alpha: Option<f64>,
        /// Burr parameters
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Number of blocks (BM) / top order statistics (POT)
        #[arg(short, long)]
        k: usize,
        /// Block size (BM) / oversampling factor n = k*m (POT)
        #[arg(short, long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        reps: usize,
        /// 64-bit master seed
        #[arg(long)]
        seed: u64,
        /// gamma, scale or location
        #[arg(long, default_value = "gamma")]
        estimand: String,
        /// bm or pot
        #[arg(long, default_value = "bm")]
        method: String,
        #[arg(long)]
        out: Option<String>,
    },
}

/// Entry point used by the binary; returns the process exit code:
/// 0 on success, 2 on usage errors, 1 on domain/model errors (with one
/// machine-parsable line on stderr).
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path with status 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(tol) = std::env::var("EVT_QUAD_TOL") {
        match tol.parse::<f64>().map_err(|_| ()).and_then(|t| {
            crate::asymptotics::cov::set_quad_tolerance(t).map_err(|_| ())
        }) {
            Ok(()) => {}
            Err(()) => {
                eprintln!("error kind=invalid_parameter msg=\"EVT_QUAD_TOL must be a positive float\"");
                return 1;
            }
        }
    }
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error kind={} msg=\"{}\"", e.kind_tag(), e);
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Blocks {
            io,
            block_size,
            partial,
        } => {
            check_format(&io.format)?;
            let policy = match partial.as_str() {
                "discard" => PartialPolicy::Discard,
                "error" => PartialPolicy::Error,
                other => {
                    return Err(EvtError::InvalidParameter(format!(
                        "unknown partial policy '{other}' (expected discard or error)"
                    )))
                }
            };
            let series = read_input_column(&io)?;
            let spec = BlockSpec::new(block_size)?.with_policy(policy);
            let maxima = block_maxima(&series, spec)?;
            let mut out = open_output(&io.out)?;
            writeln!(out, "maximum")?;
            for v in maxima.values() {
                writeln!(out, "{}", format_g17(*v))?;
            }
            Ok(())
        }
        Command::BmFit {
            io,
            block_size,
            quantile,
        } => {
            check_format(&io.format)?;
            let maxima = read_input_column(&io)?;
            let sample = BlockMaximaSample::new(maxima, block_size)?;
            let fit = bm_fit(&pwm_betas(&sample)?)?;
            let mut out = open_output(&io.out)?;
            match quantile {
                Some(p) => {
                    let x = bm_quantile(&fit, p)?;
                    writeln!(out, "gamma_hat,a_hat,b_hat,quantile")?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        format_g17(fit.gamma_hat),
                        format_g17(fit.a_hat),
                        format_g17(fit.b_hat),
                        format_g17(x)
                    )?;
                }
                None => {
                    writeln!(out, "gamma_hat,a_hat,b_hat")?;
                    writeln!(
                        out,
                        "{},{},{}",
                        format_g17(fit.gamma_hat),
                        format_g17(fit.a_hat),
                        format_g17(fit.b_hat)
                    )?;
                }
            }
            Ok(())
        }
        Command::PotFit { io, k, quantile } => {
            check_format(&io.format)?;
            let data = read_input_column(&io)?;
            let sample = PotSample::new(data, k)?;
            let fit = pot_fit(&sample)?;
            let mut out = open_output(&io.out)?;
            match quantile {
                Some(p) => {
                    let x = pot_quantile(&fit, p)?;
                    writeln!(out, "gamma_hat,a_hat,threshold,quantile")?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        format_g17(fit.gamma_hat),
                        format_g17(fit.a_hat),
                        format_g17(fit.threshold),
                        format_g17(x)
                    )?;
                }
                None => {
                    writeln!(out, "gamma_hat,a_hat,threshold")?;
                    writeln!(
                        out,
                        "{},{},{}",
                        format_g17(fit.gamma_hat),
                        format_g17(fit.a_hat),
                        format_g17(fit.threshold)
                    )?;
                }
            }
            Ok(())
        }
        Command::Asymp {
            gamma,
            rho,
            lambda,
            method,
            target,
            out,
        } => {
            let p = SecondOrderParams::new(gamma, rho, lambda)?;
            let target_e = parse_target(&target)?;
            let (summary, pot_target) = match method.as_str() {
                "bm" => (bm_asymp(&p, target_e)?, comparison_target(target_e)),
                "pot" => {
                    let t = comparison_target(target_e).ok_or_else(|| {
                        EvtError::InvalidParameter(format!(
                            "pot asymptotics cover targets gamma and quantile, got {target}"
                        ))
                    })?;
                    (pot_asymp(&p, t)?, Some(t))
                }
                other => {
                    return Err(EvtError::InvalidParameter(format!(
                        "unknown method '{other}' (expected bm or pot)"
                    )))
                }
            };
            let (mr, kr) = match (p.rho < 0.0, pot_target) {
                (true, Some(t)) => (
                    Some(minmse_ratio(&p, t)?),
                    Some(k0_ratio(&p, t)?),
                ),
                _ => (None, None),
            };
            let mut o = open_output(&out)?;
            writeln!(
                o,
                "method,target,gamma,rho,lambda,sigma2,unit_bias,minmse_ratio,k0_ratio"
            )?;
            writeln!(
                o,
                "{},{},{},{},{},{},{},{},{}",
                match summary.method {
                    Method::Bm => "bm",
                    Method::Pot => "pot",
                },
                target,
                format_g17(gamma),
                format_g17(rho),
                format_g17(lambda),
                format_g17(summary.sigma2),
                format_g17(summary.unit_bias),
                mr.map(format_g17).unwrap_or_default(),
                kr.map(format_g17).unwrap_or_default(),
            )?;
            Ok(())
        }
        Command::CompareGrid {
            metric,
            gamma_min,
            gamma_max,
            rho,
            rho_min,
            rho_max,
            step,
            rho_step,
            out,
        } => {
            let metric = GridMetric::parse(&metric).ok_or_else(|| {
                EvtError::InvalidParameter(format!("unknown metric '{metric}'"))
            })?;
            let (rmin, rmax) = match rho {
                Some(r) => (r, r),
                None => (rho_min, rho_max),
            };
            let table = grid_eval(metric, (gamma_min, gamma_max), (rmin, rmax), (step, rho_step))?;
            let mut o = open_output(&out)?;
            write_grid_csv(&table, &mut o)?;
            Ok(())
        }
        Command::Simulate {
            dist,
            gamma,
            alpha,
            beta,
            tau,
            lambda,
            k,
            m,
            reps,
            seed,
            estimand,
            method,
            out,
        } => {
            let need = |o: Option<f64>, what: &str| {
                o.ok_or_else(|| {
                    EvtError::InvalidParameter(format!("--{what} is required for --dist {dist}"))
                })
            };
            let spec = match dist.as_str() {
                "gev" => DistSpec::gev_exact(need(gamma, "gamma")?)?,
                "gpd" => DistSpec::gpd(need(gamma, "gamma")?)?,
                "frechet" => DistSpec::frechet(need(alpha, "alpha")?)?,
                "uniform" => DistSpec::uniform(),
                "exponential" => DistSpec::exponential(),
                "burr" => DistSpec::burr(need(beta, "beta")?, need(tau, "tau")?, need(lambda, "lambda")?)?,
                other => {
                    return Err(EvtError::InvalidParameter(format!(
                        "unknown distribution '{other}'"
                    )))
                }
            };
            let estimand = McEstimand::parse(&estimand).ok_or_else(|| {
                EvtError::InvalidParameter(format!("unknown estimand '{estimand}'"))
            })?;
            let cfg = McConfig {
                dist: spec,
                k,
                m,
                reps,
                seed,
                estimand,
            };
            let res = match method.as_str() {
                "bm" => mc_bm_study(&cfg)?,
                "pot" => mc_pot_study(&cfg)?,
                other => {
                    return Err(EvtError::InvalidParameter(format!(
                        "unknown method '{other}' (expected bm or pot)"
                    )))
                }
            };
            let mut o = open_output(&out)?;
            write_mc_csv(&cfg, &res, &mut o)?;
            Ok(())
        }
    }
}

fn check_format(fmt: &str) -> Result<()> {
    if fmt != "csv" {
        return Err(EvtError::InvalidParameter(format!(
            "unsupported format '{fmt}' (only csv)"
        )));
    }
    Ok(())
}

fn parse_target(name: &str) -> Result<Target> {
    Ok(match name {
        "gamma" => Target::Gamma,
        "scale" => Target::Scale,
        "location" => Target::Location,
        "quantile" => Target::Quantile,
        other => {
            return Err(EvtError::InvalidParameter(format!(
                "unknown target '{other}'"
            )))
        }
    })
}

fn comparison_target(t: Target) -> Option<PotTarget> {
    match t {
        Target::Gamma => Some(PotTarget::Gamma),
        Target::Quantile => Some(PotTarget::Quantile),
        _ => None,
    }
}

fn open_output(path: &Option<String>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn read_input_column(io_args: &IoArgs) -> Result<Vec<f64>> {
    let raw = if io_args.input == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(&io_args.input)?
    };
    parse_csv_column(&raw, io_args.column.as_deref())
}

/// Parse one numeric column out of a CSV document: header row required,
/// '.' decimal, `#`-prefixed lines ignored. Without an explicit column
/// name, the first column whose first data cell parses as a float wins.
pub fn parse_csv_column(text: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| EvtError::Csv("empty input: header row required".into()))?;
    let names: Vec<&str> = header.split(',').map(|s| s.trim()).collect();
    let rows: Vec<Vec<&str>> = lines
        .map(|l| l.split(',').map(|s| s.trim()).collect())
        .collect();
    if rows.is_empty() {
        return Err(EvtError::Csv("no data rows".into()));
    }
    let idx = match column {
        Some(name) => names
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| EvtError::Csv(format!("column '{name}' not found in header")))?,
        None => {
            let first = &rows[0];
            (0..first.len())
                .find(|&i| first[i].parse::<f64>().is_ok())
                .ok_or_else(|| EvtError::Csv("no numeric column detected".into()))?
        }
    };
    let mut out = Vec::with_capacity(rows.len());
    for (rowno, row) in rows.iter().enumerate() {
        let cell = row.get(idx).ok_or_else(|| {
            EvtError::Csv(format!("row {} has no column {}", rowno + 2, idx + 1))
        })?;
        let v: f64 = cell.parse().map_err(|_| {
            EvtError::Csv(format!("row {}: '{}' is not a number", rowno + 2, cell))
        })?;
        if !v.is_finite() {
            return Err(EvtError::Csv(format!("row {}: non-finite value", rowno + 2)));
        }
        out.push(v);
    }
    Ok(out)
}
