//! Special functions and analytic functionals for the PWM limit theory.

pub mod functionals;
pub mod gev;
pub mod special;

pub use functionals::{d_r, h_gamma_rho, i_r, q_gamma};
pub use gev::{gev_cdf, gev_quantile};
pub use special::{gamma_derivs_at, gamma_fn, EULER_GAMMA, GAMMA_DDOT_ONE};

use crate::error::{EvtError, Result};

/// Second-order tail parameters: the extreme value index γ, the rate index
/// ρ ≤ 0 of the auxiliary function A, and λ = lim √k·A(m), the bias scale
/// of the limit laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondOrderParams {
    pub gamma: f64,
    pub rho: f64,
    pub lambda: f64,
}

impl SecondOrderParams {
    pub fn new(gamma: f64, rho: f64, lambda: f64) -> Result<Self> {
        if !gamma.is_finite() || !rho.is_finite() || !lambda.is_finite() {
            return Err(EvtError::InvalidParameter(
                "second-order parameters must be finite".into(),
            ));
        }
        if rho > 0.0 {
            return Err(EvtError::InvalidParameter(format!(
                "rho must be <= 0, got {rho}"
            )));
        }
        Ok(Self { gamma, rho, lambda })
    }

    /// The range over which the method comparison is carried out:
    /// γ ∈ [−1, 1/2) and ρ ∈ [−1, 0].
    pub fn check_comparison_range(&self) -> Result<()> {
        if !(-1.0..0.5).contains(&self.gamma) {
            return Err(EvtError::InvalidParameter(format!(
                "comparison requires gamma in [-1, 0.5), got {}",
                self.gamma
            )));
        }
        if !(-1.0..=0.0).contains(&self.rho) {
            return Err(EvtError::InvalidParameter(format!(
                "comparison requires rho in [-1, 0], got {}",
                self.rho
            )));
        }
        Ok(())
    }
}

/// Which degenerate branch applies at (γ, ρ), decided by a fixed tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    GeneralCase,
    GammaZero,
    RhoZero,
    BothZero,
}

/// Branch selection for the continuity-defined cases. Selection is a pure
/// function of (|γ| < threshold, |ρ| < threshold).
#[derive(Debug, Clone, Copy)]
pub struct EvalBranch {
    pub kind: BranchKind,
    pub threshold: f64,
    pub(crate) gamma_is_zero: bool,
    pub(crate) rho_is_zero: bool,
}

impl EvalBranch {
    /// Cancellation in (x^γ−1)/γ-type expressions degrades before 1e−8,
    /// so the continuity formulas take over there.
    pub const DEFAULT_THRESHOLD: f64 = 1e-8;

    pub fn classify(gamma: f64, rho: f64) -> Self {
        Self::classify_with(gamma, rho, Self::DEFAULT_THRESHOLD)
            .expect("default threshold is valid")
    }

    pub fn classify_with(gamma: f64, rho: f64, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold <= 1e-6) {
            return Err(EvtError::InvalidParameter(format!(
                "branch threshold must lie in (0, 1e-6], got {threshold}"
            )));
        }
        let gz = gamma.abs() < threshold;
        let rz = rho.abs() < threshold;
        let kind = match (gz, rz) {
            (true, true) => BranchKind::BothZero,
            (true, false) => BranchKind::GammaZero,
            (false, true) => BranchKind::RhoZero,
            (false, false) => BranchKind::GeneralCase,
        };
        Ok(Self {
            kind,
            threshold,
            gamma_is_zero: gz,
            rho_is_zero: rz,
        })
    }
}

/// x^c − 1 evaluated as expm1(c·log x); exact through the c → 0 limit.
#[inline]
pub(crate) fn pow_m1(x: f64, c: f64) -> f64 {
    (c * x.ln()).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_classification() {
        assert_eq!(EvalBranch::classify(0.0, 0.0).kind, BranchKind::BothZero);
        assert_eq!(EvalBranch::classify(1e-9, -0.5).kind, BranchKind::GammaZero);
        assert_eq!(EvalBranch::classify(0.3, -1e-12).kind, BranchKind::RhoZero);
        assert_eq!(EvalBranch::classify(0.3, -0.5).kind, BranchKind::GeneralCase);
    }

    #[test]
    fn branch_threshold_validation() {
        assert!(EvalBranch::classify_with(0.1, 0.0, 0.0).is_err());
        assert!(EvalBranch::classify_with(0.1, 0.0, 1e-5).is_err());
        assert!(EvalBranch::classify_with(0.1, 0.0, 1e-8).is_ok());
    }

    #[test]
    fn params_validation() {
        assert!(SecondOrderParams::new(0.2, 0.1, 0.0).is_err());
        assert!(SecondOrderParams::new(0.2, -0.5, 1.0).is_ok());
        let p = SecondOrderParams::new(0.7, -0.5, 0.0).unwrap();
        assert!(p.check_comparison_range().is_err());
        let p = SecondOrderParams::new(0.2, -1.5, 0.0).unwrap();
        assert!(p.check_comparison_range().is_err());
    }
}
