//! Block-maxima construction and the Hosking–Wallis–Wood PWM estimators
//! γ̂, γ̂*, â, b̂ together with the high-quantile estimator.

use crate::error::{EvtError, Result};
use crate::evt_math::special::EULER_GAMMA;
use crate::evt_math::{gamma_fn, pow_m1, EvalBranch};

/// What to do with a trailing block shorter than `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PartialPolicy {
    /// Drop the trailing observations (standard practice).
    #[default]
    Discard,
    /// Refuse the input when the block size does not divide the length.
    Error,
}

/// Block size and partial-block handling for maxima construction.
#[derive(Debug, Clone, Copy)]
pub struct BlockSpec {
    pub m: usize,
    pub partial_policy: PartialPolicy,
}

impl BlockSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(EvtError::InvalidParameter("block size m must be >= 1".into()));
        }
        Ok(Self {
            m,
            partial_policy: PartialPolicy::Discard,
        })
    }

    pub fn with_policy(mut self, policy: PartialPolicy) -> Self {
        self.partial_policy = policy;
        self
    }
}

/// Ascending-sorted block maxima X_{1,k} ≤ … ≤ X_{k,k} with their
/// (k, m) provenance.
#[derive(Debug, Clone)]
pub struct BlockMaximaSample {
    values: Vec<f64>,
    pub k: usize,
    pub m: usize,
}

impl BlockMaximaSample {
    /// Sorts the maxima ascending (ties kept stable by the sort).
    pub fn new(mut maxima: Vec<f64>, m: usize) -> Result<Self> {
        if maxima.is_empty() {
            return Err(EvtError::InsufficientData("no block maxima".into()));
        }
        if m < 1 {
            return Err(EvtError::InvalidParameter("block size m must be >= 1".into()));
        }
        if maxima.iter().any(|v| !v.is_finite()) {
            return Err(EvtError::InvalidParameter(
                "block maxima must be finite".into(),
            ));
        }
        maxima.sort_by(|a, b| a.total_cmp(b));
        let k = maxima.len();
        Ok(Self { values: maxima, k, m })
    }

    /// The order statistics, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Split `series` into consecutive blocks of `spec.m` observations and
/// return the per-block maxima, sorted ascending.
pub fn block_maxima(series: &[f64], spec: BlockSpec) -> Result<BlockMaximaSample> {
    if series.is_empty() {
        return Err(EvtError::InsufficientData("empty series".into()));
    }
    if series.len() < spec.m {
        return Err(EvtError::InsufficientData(format!(
            "series length {} is shorter than one block of size {}",
            series.len(),
            spec.m
        )));
    }
    if spec.partial_policy == PartialPolicy::Error && series.len() % spec.m != 0 {
        return Err(EvtError::InvalidParameter(format!(
            "block size {} does not divide series length {}",
            spec.m,
            series.len()
        )));
    }
    let maxima: Vec<f64> = series
        .chunks_exact(spec.m)
        .map(|block| block.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    BlockMaximaSample::new(maxima, spec.m)
}

/// The probability weighted moments β₀..β₃ of a sorted maxima sample.
#[derive(Debug, Clone, Copy)]
pub struct PwmBetas {
    pub beta: [f64; 4],
    pub k: usize,
    pub m: usize,
}

/// β_r = (1/k) Σ_i [(i−1)⋯(i−r)] / [(k−1)⋯(k−r)] · X_{i,k}, exact
/// falling-factorial weights. Requires k > r.
pub fn beta_r(sample: &BlockMaximaSample, r: u32) -> Result<f64> {
    let k = sample.k;
    if k <= r as usize {
        return Err(EvtError::InsufficientData(format!(
            "beta_{r} requires k > {r}, got k = {k}"
        )));
    }
    let mut acc = 0.0;
    for (idx, &x) in sample.values().iter().enumerate() {
        let i = (idx + 1) as f64;
        let mut w = 1.0;
        for j in 1..=r {
            w *= (i - j as f64) / (k - j as usize) as f64;
        }
        acc += w * x;
    }
    Ok(acc / k as f64)
}

/// All four PWMs at once; requires k > 3.
pub fn pwm_betas(sample: &BlockMaximaSample) -> Result<PwmBetas> {
    if sample.k <= 3 {
        return Err(EvtError::InsufficientData(format!(
            "pwm_betas requires k > 3, got k = {}",
            sample.k
        )));
    }
    let beta = [
        beta_r(sample, 0)?,
        beta_r(sample, 1)?,
        beta_r(sample, 2)?,
        beta_r(sample, 3)?,
    ];
    Ok(PwmBetas {
        beta,
        k: sample.k,
        m: sample.m,
    })
}

/// (3^g − 1)/(2^g − 1), extended through g = 0 by continuity (log3/log2).
pub fn gamma_ratio_forward(g: f64) -> f64 {
    if g.abs() < EvalBranch::DEFAULT_THRESHOLD {
        return 3f64.ln() / 2f64.ln();
    }
    (g * 3f64.ln()).exp_m1() / (g * 2f64.ln()).exp_m1()
}

/// Invert g ↦ (3^g−1)/(2^g−1) for a given spread ratio.
///
/// Works on the log of the forward map (which is close to linear in g)
/// with a bracketed secant/bisection hybrid over an expanding bracket.
pub fn solve_gamma(ratio: f64) -> Result<f64> {
    if !(ratio > 1.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "spread ratio (3b2-b0)/(2b1-b0) = {ratio} is not > 1"
        )));
    }
    let target = ratio.ln();
    let h = |g: f64| gamma_ratio_forward(g).ln() - target;
    let (mut lo, mut hi) = (-8.0, 8.0);
    let mut flo = h(lo);
    let mut fhi = h(hi);
    let mut grow = 0;
    while flo > 0.0 {
        lo *= 2.0;
        flo = h(lo);
        grow += 1;
        if grow > 60 {
            return Err(EvtError::NonIdentifiable(format!(
                "ratio {ratio} could not be bracketed from below"
            )));
        }
    }
    while fhi < 0.0 {
        hi *= 2.0;
        fhi = h(hi);
        grow += 1;
        if grow > 60 {
            return Err(EvtError::NonIdentifiable(format!(
                "ratio {ratio} could not be bracketed from above"
            )));
        }
    }
    // alternate bisection with secant: bisection guarantees bracket
    // shrinkage (the secant step stagnates against the flat band around
    // g = 0), secant gives the usual fast tail
    for it in 0..240 {
        let mid = if it % 2 == 0 || (fhi - flo).abs() == 0.0 {
            0.5 * (lo + hi)
        } else {
            let s = lo - flo * (hi - lo) / (fhi - flo);
            if s > lo && s < hi {
                s
            } else {
                0.5 * (lo + hi)
            }
        };
        let fm = h(mid);
        if fm == 0.0 || hi - lo < 1e-15 * (1.0 + mid.abs()) {
            return Ok(mid);
        }
        if fm < 0.0 {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
}

/// Fitted GEV parameters for block maxima at block size m.
#[derive(Debug, Clone, Copy)]
pub struct BmFit {
    pub gamma_hat: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub k: usize,
    pub m: usize,
}

/// γ̂ from the spread-ratio equation, then
/// â = γ̂/(2^γ̂−1) · (2β₁−β₀)/Γ(1−γ̂) and b̂ = β₀ + â(1−Γ(1−γ̂))/γ̂,
/// with the γ̂ = 0 limits â = (2β₁−β₀)/log 2 and b̂ = β₀ + Γ′(1)·â.
pub fn bm_fit(betas: &PwmBetas) -> Result<BmFit> {
    let [b0, b1, b2, _] = betas.beta;
    let s2 = 2.0 * b1 - b0;
    let s3 = 3.0 * b2 - b0;
    if !(s2 > 0.0) || !(s3 > 0.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "spread statistics must be positive: 2b1-b0 = {s2}, 3b2-b0 = {s3}"
        )));
    }
    let gamma_hat = solve_gamma(s3 / s2)?;
    if gamma_hat >= 1.0 {
        return Err(EvtError::ModelBoundary { gamma_hat });
    }
    let (a_hat, b_hat) = if gamma_hat.abs() < EvalBranch::DEFAULT_THRESHOLD {
        let a = s2 / std::f64::consts::LN_2;
        (a, b0 - EULER_GAMMA * a)
    } else {
        let g1 = gamma_fn(1.0 - gamma_hat)?;
        let a = gamma_hat / (gamma_hat * std::f64::consts::LN_2).exp_m1() * s2 / g1;
        (a, b0 + a * (1.0 - g1) / gamma_hat)
    };
    if !(a_hat > 0.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "fitted scale must be positive, got {a_hat}"
        )));
    }
    Ok(BmFit {
        gamma_hat,
        a_hat,
        b_hat,
        k: betas.k,
        m: betas.m,
    })
}

/// The explicit estimator γ̂* = log₂((4β₃−β₀)/(2β₁−β₀) − 1); no solver.
pub fn gamma_star(betas: &PwmBetas) -> Result<f64> {
    let [b0, b1, _, b3] = betas.beta;
    let s2 = 2.0 * b1 - b0;
    if !(s2 > 0.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "spread statistic 2b1-b0 = {s2} is not positive"
        )));
    }
    let arg = (4.0 * b3 - b0) / s2 - 1.0;
    if !(arg > 0.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "(4b3-b0)/(2b1-b0) - 1 = {arg} is not positive"
        )));
    }
    Ok(arg.ln() / std::f64::consts::LN_2)
}

/// High-quantile estimator x̂ = b̂ + â((m·p)^{−γ̂}−1)/γ̂ for exceedance
/// probability p per observation; requires m·p < 1.
pub fn bm_quantile(fit: &BmFit, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(EvtError::InvalidParameter(format!(
            "exceedance probability must be positive, got {p}"
        )));
    }
    let mp = fit.m as f64 * p;
    if mp >= 1.0 {
        return Err(EvtError::ExtrapolationDomain(format!(
            "m*p = {mp} must be < 1"
        )));
    }
    if fit.gamma_hat.abs() < EvalBranch::DEFAULT_THRESHOLD {
        Ok(fit.b_hat - fit.a_hat * mp.ln())
    } else {
        Ok(fit.b_hat + fit.a_hat * pow_m1(mp, -fit.gamma_hat) / fit.gamma_hat)
    }
}
