//! Peaks-over-threshold PWM estimators built from the statistics
//! P_n = (1/k)Σ(X_{n−i,n} − X_{n−k,n}) and
//! Q_n = (1/k)Σ(i/k)(X_{n−i,n} − X_{n−k,n}), i = 0..k−1.

use crate::error::{EvtError, Result};
use crate::evt_math::{pow_m1, EvalBranch};

/// Full-sample order statistics with the number k of top order statistics
/// selected for tail estimation.
#[derive(Debug, Clone)]
pub struct PotSample {
    values: Vec<f64>,
    pub n: usize,
    pub k: usize,
}

impl PotSample {
    pub fn new(mut values: Vec<f64>, k: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(EvtError::InsufficientData(
                "POT needs at least two observations".into(),
            ));
        }
        if k < 1 || k >= n {
            return Err(EvtError::InvalidParameter(format!(
                "k must satisfy 1 <= k < n, got k = {k}, n = {n}"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EvtError::InvalidParameter("observations must be finite".into()));
        }
        values.sort_by(|a, b| a.total_cmp(b));
        Ok(Self { values, n, k })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The threshold X_{n−k,n}.
    pub fn threshold(&self) -> f64 {
        self.values[self.n - self.k - 1]
    }
}

/// Fitted GPD-type tail parameters: γ̂, â(n/k) and the threshold used.
#[derive(Debug, Clone, Copy)]
pub struct PotFit {
    pub gamma_hat: f64,
    pub a_hat: f64,
    pub threshold: f64,
    pub k: usize,
    pub n: usize,
}

/// The pair (P_n, Q_n); requires k ≥ 2 and a non-degenerate top of the
/// sample.
pub fn pot_pq(sample: &PotSample) -> Result<(f64, f64)> {
    let (n, k) = (sample.n, sample.k);
    if k < 2 {
        return Err(EvtError::InvalidParameter(format!(
            "pot_pq requires k >= 2, got {k}"
        )));
    }
    let thr = sample.threshold();
    let vals = sample.values();
    let mut p = 0.0;
    let mut q = 0.0;
    for i in 0..k {
        // X_{n-i,n} is the (i+1)-th largest value
        let excess = vals[n - 1 - i] - thr;
        p += excess;
        q += (i as f64 / k as f64) * excess;
    }
    if p == 0.0 {
        return Err(EvtError::DegenerateExcesses);
    }
    Ok((p / k as f64, q / k as f64))
}

/// γ̂ = 1 − (P/(2Q) − 1)^{−1} and â = P(P/(2Q) − 1)^{−1}.
pub fn pot_fit(sample: &PotSample) -> Result<PotFit> {
    let (p, q) = pot_pq(sample)?;
    let y = p / (2.0 * q);
    if !(y > 1.0) {
        return Err(EvtError::NonIdentifiable(format!(
            "P/(2Q) = {y} is not > 1"
        )));
    }
    let inv = 1.0 / (y - 1.0);
    let gamma_hat = 1.0 - inv;
    let a_hat = p * inv;
    if gamma_hat >= 1.0 {
        return Err(EvtError::ModelBoundary { gamma_hat });
    }
    Ok(PotFit {
        gamma_hat,
        a_hat,
        threshold: sample.threshold(),
        k: sample.k,
        n: sample.n,
    })
}

/// x̂ = threshold + â·((k/(np))^γ̂ − 1)/γ̂ for exceedance probability p;
/// requires 0 < p < k/n. At p = k/n exactly the increment is zero, so the
/// boundary is excluded rather than clamped.
pub fn pot_quantile(fit: &PotFit, p: f64) -> Result<f64> {
    let ratio = fit.k as f64 / (fit.n as f64 * p);
    if !(p > 0.0) || !(ratio > 1.0) {
        return Err(EvtError::ExtrapolationDomain(format!(
            "requires 0 < p < k/n, got p = {p}, k/n = {}",
            fit.k as f64 / fit.n as f64
        )));
    }
    if fit.gamma_hat.abs() < EvalBranch::DEFAULT_THRESHOLD {
        Ok(fit.threshold + fit.a_hat * ratio.ln())
    } else {
        Ok(fit.threshold + fit.a_hat * pow_m1(ratio, fit.gamma_hat) / fit.gamma_hat)
    }
}
