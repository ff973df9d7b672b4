//! The extreme value distribution G_γ(x) = exp(−(1+γx)^{−1/γ}).

use crate::error::{EvtError, Result};

const GAMMA_ZERO_TOL: f64 = 1e-8;

/// G_γ(x); requires 1 + γx > 0 (γ = 0 branch uses exp(−e^{−x})).
pub fn gev_cdf(x: f64, gamma: f64) -> Result<f64> {
    if gamma.abs() < GAMMA_ZERO_TOL {
        return Ok((-(-x).exp()).exp());
    }
    let t = 1.0 + gamma * x;
    if !(t > 0.0) {
        return Err(EvtError::Domain(format!(
            "gev_cdf: x = {x} outside the support of G_gamma (1 + gamma x = {t})"
        )));
    }
    // (1+γx)^{−1/γ} via logs for accuracy deep in the tail
    Ok((-(-(gamma * x).ln_1p() / gamma).exp()).exp())
}

/// G_γ^{-1}(u) = ((−log u)^{−γ} − 1)/γ for u ∈ (0,1).
pub fn gev_quantile(u: f64, gamma: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(EvtError::Domain(format!(
            "gev_quantile requires u in (0,1), got {u}"
        )));
    }
    let w = -u.ln(); // > 0
    if gamma.abs() < GAMMA_ZERO_TOL {
        return Ok(-w.ln());
    }
    Ok((-gamma * w.ln()).exp_m1() / gamma)
}
