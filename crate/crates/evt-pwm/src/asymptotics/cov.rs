//! Covariance matrix of the limit variables Q_r (stochastic part).
//!
//! Cov(Q_r,Q_m) = (r+1)(m+1) ∫∫ s^{r−1}u^{m−1}(−log s)^{−1−γ}(−log u)^{−1−γ}
//! (min(s,u)−su) ds du. The min-split gives two iterated integrals; in log
//! coordinates (s = e^{−t}, u = e^{−τ}) each becomes an integral over the
//! wedge t > τ of e^{−mτ}(1−e^{−τ})τ^{−1−γ}·e^{−(r+1)t}t^{−1−γ}. The radial
//! substitution (t, τ) = (R, wR) makes the R-integral a Frullani-type
//! integral with closed form Γ(−2γ)(a^{2γ}−b^{2γ}), leaving one
//! well-behaved 1-D integral in w per entry.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, OnceLock};

use crate::error::{EvtError, Result};
use crate::evt_math::special::gamma_unchecked;
use crate::evt_math::EvalBranch;
use crate::quad::integrate;

pub const DEFAULT_QUAD_TOL: f64 = 1e-8;

static QUAD_TOL_BITS: AtomicU64 = AtomicU64::new(f64::to_bits(DEFAULT_QUAD_TOL));

/// Current absolute quadrature tolerance (process-wide; the CLI seeds it
/// from the EVT_QUAD_TOL environment variable).
pub fn quad_tolerance() -> f64 {
    f64::from_bits(QUAD_TOL_BITS.load(Ordering::Relaxed))
}

pub fn set_quad_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(EvtError::InvalidParameter(format!(
            "quadrature tolerance must be positive and finite, got {tol}"
        )));
    }
    QUAD_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
    Ok(())
}

/// 4×4 covariance matrix of (Q₀..Q₃), stochastic part only; defined for
/// γ < 1/2.
#[derive(Debug, Clone, Copy)]
pub struct CovQ {
    pub gamma: f64,
    matrix: [[f64; 4]; 4],
    /// Absolute quadrature tolerance the entries were computed to.
    pub tol: f64,
}

impl CovQ {
    pub fn entry(&self, r: usize, m: usize) -> f64 {
        self.matrix[r][m]
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.matrix
    }

    /// Quadratic form kᵀΣk over the leading 3×3 block.
    pub fn quad_form3(&self, k: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for r in 0..3 {
            for m in 0..3 {
                acc += k[r] * self.matrix[r][m] * k[m];
            }
        }
        acc
    }
}

/// One wedge integral T1(p, q) with outer index p and inner index q:
/// ∫₀¹ w^{−1−γ} Γ(−2γ) [(pw+q+1)^{2γ} − ((p+1)w+q+1)^{2γ}] dw,
/// with the γ = 0 limit ∫₀¹ w^{−1} log(((p+1)w+q+1)/(pw+q+1)) dw.
fn wedge_t1(p: usize, q: usize, gamma: f64, tol: f64) -> Result<f64> {
    let pf = p as f64;
    let qf = q as f64 + 1.0;
    let gamma_zero = gamma.abs() < EvalBranch::DEFAULT_THRESHOLD;
    let gneg2 = if gamma_zero {
        0.0
    } else {
        gamma_unchecked(-2.0 * gamma)
    };
    // substitute w = z^pw with pw(1−γ) − 1 ≥ 3 so the integrand is C³ at
    // the w → 0 endpoint (the plain w^{−γ} cusp defeats the error
    // estimate near γ = 1/2)
    let pw = (4.0 / (1.0 - gamma)).ceil();
    let f = |z: f64| {
        if z <= 0.0 {
            return 0.0;
        }
        let w = z.powf(pw);
        let a = pf * w + qf;
        let log_ba = (w / a).ln_1p(); // log(b/a), b = a + w
        let jac = pw * z.powf(pw - 1.0);
        if gamma_zero {
            jac / w * log_ba
        } else {
            // Γ(−2γ)(a^{2γ} − b^{2γ}) = −Γ(−2γ)·a^{2γ}·expm1(2γ log(b/a))
            let bracket = -a.powf(2.0 * gamma) * (2.0 * gamma * log_ba).exp_m1();
            jac * w.powf(-1.0 - gamma) * gneg2 * bracket
        }
    };
    integrate(f, 0.0, 1.0, tol)
}

fn cov_entry(r: usize, m: usize, gamma: f64, tol: f64) -> Result<f64> {
    let v = wedge_t1(m, r, gamma, 0.25 * tol)? + wedge_t1(r, m, gamma, 0.25 * tol)?;
    Ok((r + 1) as f64 * (m + 1) as f64 * v)
}

fn cov_memo() -> &'static Mutex<HashMap<(u64, u64), CovQ>> {
    static MEMO: OnceLock<Mutex<HashMap<(u64, u64), CovQ>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cov(Q_r,Q_m) for r,m = 0..3 at the current tolerance; memoized per γ
/// since grid evaluation revisits the same γ column for many ρ values.
pub fn cov_q(gamma: f64) -> Result<CovQ> {
    cov_q_with_tol(gamma, quad_tolerance())
}

pub fn cov_q_with_tol(gamma: f64, tol: f64) -> Result<CovQ> {
    if !(gamma < 0.5) {
        return Err(EvtError::Domain(format!(
            "cov_q requires gamma < 1/2, got {gamma}"
        )));
    }
    if !(tol > 0.0) {
        return Err(EvtError::InvalidParameter("tolerance must be positive".into()));
    }
    let key = (gamma.to_bits(), tol.to_bits());
    if let Some(c) = cov_memo().lock().unwrap().get(&key) {
        return Ok(*c);
    }
    let mut matrix = [[0.0; 4]; 4];
    for r in 0..4 {
        for m in r..4 {
            let v = cov_entry(r, m, gamma, tol)?;
            matrix[r][m] = v;
            matrix[m][r] = v; // symmetry by construction
        }
    }
    let out = CovQ { gamma, matrix, tol };
    cov_memo().lock().unwrap().insert(key, out);
    Ok(out)
}
