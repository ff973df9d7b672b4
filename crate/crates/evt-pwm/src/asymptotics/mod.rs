//! Asymptotic variance/bias summaries for both methods and the comparison
//! metrics behind the variance curves, bias-ratio, MINMSE-ratio and
//! optimal-k-ratio surfaces.

pub mod coeffs;
pub mod cov;
pub mod pot;

pub use coeffs::{bm_limit_coeffs, LimitCoeffs, Target};
pub use cov::{cov_q, cov_q_with_tol, CovQ, DEFAULT_QUAD_TOL};
pub use pot::{ExtrapolationTerm, PotAsympProvider, PotTarget, PwmPotFormulas};

use crate::error::{EvtError, Result};
use crate::evt_math::{i_r, EvalBranch, SecondOrderParams};
use rayon::prelude::*;

/// Which method a summary refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bm,
    Pot,
}

/// Asymptotic variance σ² and bias-per-unit-λ of one estimand under one
/// method: the limit of √k(est − truth) is N(λ·unit_bias, sigma2).
#[derive(Debug, Clone, Copy)]
pub struct AsympSummary {
    pub method: Method,
    pub target: Target,
    pub sigma2: f64,
    pub unit_bias: f64,
}

fn quantile_extra_term(gamma: f64, rho: f64) -> Result<f64> {
    let gm = gamma.min(0.0);
    if gm == 0.0 {
        if rho.abs() < EvalBranch::DEFAULT_THRESHOLD {
            // γ₋ + ρ = 0: excluded by the quantile limit theorem
            return Err(EvtError::QuantilePole);
        }
        return Ok(0.0);
    }
    Ok(-gm / (gm + rho))
}

/// Block-maxima asymptotics: σ² = c²·kᵀΣk with Σ from `cov_q`, and
/// unit bias c·Σᵢ kᵢ I_i(γ,ρ), plus −λγ₋/(γ₋+ρ) per unit λ for the
/// quantile target.
pub fn bm_asymp(p: &SecondOrderParams, target: Target) -> Result<AsympSummary> {
    p.check_comparison_range()?;
    let lc = bm_limit_coeffs(p.gamma, target)?;
    let k = lc.scaled();
    let cov = cov_q(p.gamma)?;
    let sigma2 = cov.quad_form3(&k);
    let mut unit_bias = 0.0;
    for (r, kr) in k.iter().enumerate() {
        unit_bias += kr * i_r(r as u32, p)?;
    }
    if target == Target::Quantile {
        unit_bias += quantile_extra_term(p.gamma, p.rho)?;
    }
    Ok(AsympSummary {
        method: Method::Bm,
        target,
        sigma2,
        unit_bias,
    })
}

/// POT asymptotics via the default provider.
pub fn pot_asymp(p: &SecondOrderParams, target: PotTarget) -> Result<AsympSummary> {
    pot_asymp_with(&PwmPotFormulas::default(), p, target)
}

/// POT asymptotics via an explicit provider.
pub fn pot_asymp_with(
    provider: &dyn PotAsympProvider,
    p: &SecondOrderParams,
    target: PotTarget,
) -> Result<AsympSummary> {
    p.check_comparison_range()?;
    let sigma2 = provider.variance(p.gamma, target)?;
    let unit_bias = provider.unit_bias(p, target)?;
    Ok(AsympSummary {
        method: Method::Pot,
        target: match target {
            PotTarget::Gamma => Target::Gamma,
            PotTarget::Quantile => Target::Quantile,
        },
        sigma2,
        unit_bias,
    })
}

fn comparison_pair(p: &SecondOrderParams, target: PotTarget) -> Result<(AsympSummary, AsympSummary)> {
    let bm_target = match target {
        PotTarget::Gamma => Target::Gamma,
        PotTarget::Quantile => Target::Quantile,
    };
    Ok((bm_asymp(p, bm_target)?, pot_asymp(p, target)?))
}

/// MINMSE(BM)/MINMSE(POT) ≈ (B₁²/B₂²)^{1/(1−2ρ)} (σ₁²/σ₂²)^{−2ρ/(1−2ρ)};
/// a pure function of (γ, ρ), independent of λ and n. Requires ρ < 0.
pub fn minmse_ratio(p: &SecondOrderParams, target: PotTarget) -> Result<f64> {
    if !(p.rho < 0.0) {
        return Err(EvtError::Domain(format!(
            "minmse_ratio requires rho < 0, got {}",
            p.rho
        )));
    }
    let (bm, pot) = comparison_pair(p, target)?;
    let e = 1.0 / (1.0 - 2.0 * p.rho);
    let b_ratio2 = (bm.unit_bias / pot.unit_bias).powi(2);
    let v_ratio = bm.sigma2 / pot.sigma2;
    Ok(b_ratio2.powf(e) * v_ratio.powf(-2.0 * p.rho * e))
}

/// Ratio of the optimal numbers of selected observations,
/// ((σ₁²/B₁²)/(σ₂²/B₂²))^{1/(1−2ρ)}; the n-dependent factor is common to
/// both methods and cancels. Requires ρ < 0 and nonzero unit biases.
pub fn k0_ratio(p: &SecondOrderParams, target: PotTarget) -> Result<f64> {
    if !(p.rho < 0.0) {
        return Err(EvtError::Domain(format!(
            "k0_ratio requires rho < 0, got {}",
            p.rho
        )));
    }
    let (bm, pot) = comparison_pair(p, target)?;
    if bm.unit_bias == 0.0 || pot.unit_bias == 0.0 {
        return Err(EvtError::Domain("zero unit bias in k0_ratio".into()));
    }
    let e = 1.0 / (1.0 - 2.0 * p.rho);
    let r1 = bm.sigma2 / (bm.unit_bias * bm.unit_bias);
    let r2 = pot.sigma2 / (pot.unit_bias * pot.unit_bias);
    Ok((r1 / r2).powf(e))
}

/// Metrics the comparison grids can tabulate (the data behind the
/// published variance, bias and MINMSE surfaces).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMetric {
    /// σ₁²(γ), extreme-value-index target.
    VarBm,
    /// σ₂²(γ), extreme-value-index target.
    VarPot,
    /// B₁/B₂, extreme-value-index target.
    BiasRatio,
    /// MINMSE(BM)/MINMSE(POT), extreme-value-index target.
    MinmseRatio,
    /// Optimal-k ratio, extreme-value-index target.
    K0Ratio,
    /// Quantile-target variants of the five metrics above.
    QuantVarBm,
    QuantVarPot,
    QuantBiasBm,
    QuantBiasPot,
    QuantMinmseRatio,
    QuantK0Ratio,
}

impl GridMetric {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "var-bm" => Self::VarBm,
            "var-pot" => Self::VarPot,
            "bias-ratio" => Self::BiasRatio,
            "minmse-ratio" => Self::MinmseRatio,
            "k0-ratio" => Self::K0Ratio,
            "quantile-var-bm" => Self::QuantVarBm,
            "quantile-var-pot" => Self::QuantVarPot,
            "quantile-bias-bm" => Self::QuantBiasBm,
            "quantile-bias-pot" => Self::QuantBiasPot,
            "quantile-minmse-ratio" => Self::QuantMinmseRatio,
            "quantile-k0-ratio" => Self::QuantK0Ratio,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::VarBm => "var-bm",
            Self::VarPot => "var-pot",
            Self::BiasRatio => "bias-ratio",
            Self::MinmseRatio => "minmse-ratio",
            Self::K0Ratio => "k0-ratio",
            Self::QuantVarBm => "quantile-var-bm",
            Self::QuantVarPot => "quantile-var-pot",
            Self::QuantBiasBm => "quantile-bias-bm",
            Self::QuantBiasPot => "quantile-bias-pot",
            Self::QuantMinmseRatio => "quantile-minmse-ratio",
            Self::QuantK0Ratio => "quantile-k0-ratio",
        }
    }
}

/// Per-cell warning flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFlag {
    None,
    /// At ρ = −1 the second-order functions of the two methods may differ
    /// asymptotically, so a common λ is not guaranteed; values are
    /// reported unadjusted.
    RhoComparability,
}

#[derive(Debug, Clone, Copy)]
pub struct GridCell {
    pub gamma: f64,
    pub rho: f64,
    pub value: f64,
    pub flag: GridFlag,
}

#[derive(Debug, Clone)]
pub struct GridTable {
    pub metric: GridMetric,
    pub cells: Vec<GridCell>,
}

fn cell_value(metric: GridMetric, gamma: f64, rho: f64) -> Result<f64> {
    let p = SecondOrderParams::new(gamma, rho, 1.0)?;
    match metric {
        GridMetric::VarBm => Ok(bm_asymp(&p, Target::Gamma)?.sigma2),
        GridMetric::VarPot => Ok(pot_asymp(&p, PotTarget::Gamma)?.sigma2),
        GridMetric::BiasRatio => {
            let (bm, pot) = comparison_pair(&p, PotTarget::Gamma)?;
            Ok(bm.unit_bias / pot.unit_bias)
        }
        GridMetric::MinmseRatio => minmse_ratio(&p, PotTarget::Gamma),
        GridMetric::K0Ratio => k0_ratio(&p, PotTarget::Gamma),
        GridMetric::QuantVarBm => Ok(bm_asymp(&p, Target::Quantile)?.sigma2),
        GridMetric::QuantVarPot => Ok(pot_asymp(&p, PotTarget::Quantile)?.sigma2),
        GridMetric::QuantBiasBm => Ok(bm_asymp(&p, Target::Quantile)?.unit_bias),
        GridMetric::QuantBiasPot => Ok(pot_asymp(&p, PotTarget::Quantile)?.unit_bias),
        GridMetric::QuantMinmseRatio => minmse_ratio(&p, PotTarget::Quantile),
        GridMetric::QuantK0Ratio => k0_ratio(&p, PotTarget::Quantile),
    }
}

/// Default γ and ρ grid steps for figure regeneration.
pub const DEFAULT_GAMMA_STEP: f64 = 0.01;
pub const DEFAULT_RHO_STEP: f64 = 0.02;

/// Tabulate `metric` over a rectangular (γ, ρ) grid, row-major with γ as
/// the outer coordinate. Cells on documented pole lines hold NaN; cells at
/// ρ = −1 carry a comparability warning flag. Evaluation is data-parallel
/// and the table is identical regardless of thread count.
pub fn grid_eval(
    metric: GridMetric,
    gamma_range: (f64, f64),
    rho_range: (f64, f64),
    steps: (f64, f64),
) -> Result<GridTable> {
    let (gmin, gmax) = gamma_range;
    let (rmin, rmax) = rho_range;
    let (gstep, rstep) = steps;
    if !(gstep > 0.0 && rstep > 0.0) {
        return Err(EvtError::InvalidParameter("grid steps must be positive".into()));
    }
    if gmin > gmax || rmin > rmax {
        return Err(EvtError::InvalidParameter("empty grid range".into()));
    }
    if gmin < -1.0 || gmax >= 0.5 || rmin < -1.0 || rmax > 0.0 {
        return Err(EvtError::InvalidParameter(format!(
            "grid must lie inside gamma in [-1, 0.5), rho in [-1, 0]; \
             got gamma [{gmin}, {gmax}], rho [{rmin}, {rmax}]"
        )));
    }
    let ng = ((gmax - gmin) / gstep + 1e-9).floor() as usize + 1;
    let nr = ((rmax - rmin) / rstep + 1e-9).floor() as usize + 1;
    let cells: Result<Vec<GridCell>> = (0..ng * nr)
        .into_par_iter()
        .map(|idx| {
            let i = idx / nr;
            let j = idx % nr;
            let gamma = gmin + i as f64 * gstep;
            let rho = rmin + j as f64 * rstep;
            let value = match cell_value(metric, gamma, rho) {
                Ok(v) => v,
                // documented poles: the quantile-bias pole line and the
                // ρ = 0 rows of the ρ<0-only ratio metrics
                Err(EvtError::QuantilePole) | Err(EvtError::Domain(_)) => f64::NAN,
                Err(e) => return Err(e),
            };
            let flag = if (rho + 1.0).abs() < 1e-12 {
                GridFlag::RhoComparability
            } else {
                GridFlag::None
            };
            Ok(GridCell {
                gamma,
                rho,
                value,
                flag,
            })
        })
        .collect();
    Ok(GridTable {
        metric,
        cells: cells?,
    })
}

/// 17-significant-digit formatting: round-trip exact for f64.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{:.16e}", x)
    }
}

/// Write a grid as CSV: header `gamma,rho,value,flag`, UTF-8, '.' decimal,
/// row-major with γ outer.
pub fn write_grid_csv<W: std::io::Write>(table: &GridTable, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "gamma,rho,value,flag")?;
    for c in &table.cells {
        let flag = match c.flag {
            GridFlag::None => "",
            GridFlag::RhoComparability => "rho_comparability",
        };
        writeln!(
            out,
            "{},{},{},{}",
            format_g17(c.gamma),
            format_g17(c.rho),
            format_g17(c.value),
            flag
        )?;
    }
    Ok(())
}
