//! Coefficients of the limit laws: the estimator limits Δ, Λ, Ξ and the
//! quantile limit are linear combinations c·(k₀Q₀ + k₁Q₁ + k₂Q₂); this
//! module evaluates the coefficient chain C_γ, C_a, C_b, k_{γ,i}, k_{a,i},
//! k_{b,i}, k_{x,i} with continuity-safe γ = 0 handling.

use crate::error::{EvtError, Result};
use crate::evt_math::special::{
    digamma, gamma_unchecked, EULER_GAMMA, GAMMA_3_ONE, GAMMA_4_ONE, GAMMA_DDOT_ONE,
};
use crate::evt_math::EvalBranch;

/// Which estimand a summary refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Gamma,
    Scale,
    Location,
    Quantile,
}

/// Coefficients of Q₀, Q₁, Q₂ in a limit law, with prefactor `c`
/// (C_γ for the γ target, 1 otherwise).
#[derive(Debug, Clone, Copy)]
pub struct LimitCoeffs {
    pub target: Target,
    pub c: f64,
    pub k: [f64; 3],
}

impl LimitCoeffs {
    /// The coefficients with the prefactor folded in.
    pub fn scaled(&self) -> [f64; 3] {
        [self.c * self.k[0], self.c * self.k[1], self.c * self.k[2]]
    }
}

pub(crate) struct CoeffChain {
    pub c_gamma: f64,
    pub k_gamma: [f64; 3],
    pub k_a: [f64; 3],
    pub k_b: [f64; 3],
}

/// Evaluate the whole chain at γ. Requires γ < 1/2.
pub(crate) fn chain(gamma: f64) -> Result<CoeffChain> {
    if !(gamma < 0.5) {
        return Err(EvtError::Domain(format!(
            "limit coefficients require gamma < 1/2, got {gamma}"
        )));
    }
    let ln2 = std::f64::consts::LN_2;
    let ln3 = 3f64.ln();
    let (c_gamma, k_gamma, c_a, c_b, f, h);
    if gamma.abs() < EvalBranch::DEFAULT_THRESHOLD {
        c_gamma = 2.0 / (1.5f64).ln();
        k_gamma = [1.0 / ln2 - 1.0 / ln3, -1.0 / ln2, 1.0 / ln3];
        c_a = -0.5 * ln2 - EULER_GAMMA;
        c_b = -0.5 * GAMMA_DDOT_ONE;
        f = 1.0 / ln2;
        h = -EULER_GAMMA;
    } else {
        let g = gamma;
        let g1 = gamma_unchecked(1.0 - g);
        let psi = digamma(1.0 - g);
        let e2 = (g * ln2).exp_m1(); // 2^γ − 1
        let e3 = (g * ln3).exp_m1(); // 3^γ − 1
        c_gamma = (1.0 / g1) / (ln3 * (1.0 + e3) / e3 - ln2 * (1.0 + e2) / e2);
        k_gamma = [g * (e3 - e2) / (e3 * e2), -g / e2, g / e3];
        c_a = 1.0 / g - ln2 * (1.0 + e2) / e2 + psi;
        c_b = if g.abs() < 1e-3 {
            // the closed form (γΓ′(1−γ) − 1 + Γ(1−γ))/γ² cancels to
            // O(γ²); switch to its Taylor series in this band
            -0.5 * GAMMA_DDOT_ONE + g * (GAMMA_3_ONE / 3.0 - g * GAMMA_4_ONE / 8.0)
        } else {
            (g * (g1 * psi) - 1.0 + g1) / (g * g)
        };
        f = g / (e2 * g1);
        h = (1.0 - g1) / g;
    }
    let k_a = [
        c_gamma * k_gamma[0] * c_a - f,
        c_gamma * k_gamma[1] * c_a + f,
        c_gamma * k_gamma[2] * c_a,
    ];
    let k_b = [
        1.0 + c_gamma * k_gamma[0] * c_b + h * k_a[0],
        c_gamma * k_gamma[1] * c_b + h * k_a[1],
        c_gamma * k_gamma[2] * c_b + h * k_a[2],
    ];
    Ok(CoeffChain {
        c_gamma,
        k_gamma,
        k_a,
        k_b,
    })
}

/// Limit coefficients of the chosen estimand at γ, with
/// γ₋ = min(0, γ) weighting the location/scale parts of the quantile law.
pub fn bm_limit_coeffs(gamma: f64, target: Target) -> Result<LimitCoeffs> {
    let ch = chain(gamma)?;
    let out = match target {
        Target::Gamma => LimitCoeffs {
            target,
            c: ch.c_gamma,
            k: ch.k_gamma,
        },
        Target::Scale => LimitCoeffs {
            target,
            c: 1.0,
            k: ch.k_a,
        },
        Target::Location => LimitCoeffs {
            target,
            c: 1.0,
            k: ch.k_b,
        },
        Target::Quantile => {
            let gm = gamma.min(0.0);
            let mut k = [0.0; 3];
            for i in 0..3 {
                k[i] = ch.c_gamma * ch.k_gamma[i] + gm * gm * ch.k_b[i] - gm * ch.k_a[i];
            }
            LimitCoeffs { target, c: 1.0, k }
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_zero_block() {
        let lc = bm_limit_coeffs(0.0, Target::Gamma).unwrap();
        assert!((lc.c - 4.9326).abs() < 1e-4);
        assert!((lc.c - 2.0 / 1.5f64.ln()).abs() < 1e-12);
        let ln2 = std::f64::consts::LN_2;
        let ln3 = 3f64.ln();
        assert!((lc.k[0] - (1.0 / ln2 - 1.0 / ln3)).abs() < 1e-14);
        assert!((lc.k[1] + 1.0 / ln2).abs() < 1e-14);
        assert!((lc.k[2] - 1.0 / ln3).abs() < 1e-14);
    }

    #[test]
    fn gamma_weights_sum_to_zero() {
        // location invariance of γ̂ in the limit
        let mut s = 0x243f6a8885a308d3u64;
        let mut unif = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..100 {
            let g = -1.0 + 1.4999 * unif();
            let lc = bm_limit_coeffs(g, Target::Gamma).unwrap();
            let sum = lc.k[0] + lc.k[1] + lc.k[2];
            assert!(sum.abs() < 1e-12, "g={g}: sum={sum}");
        }
    }

    #[test]
    fn quantile_reduces_to_gamma_for_nonnegative_gamma() {
        for &g in &[0.0, 0.1, 0.3, 0.45] {
            let kx = bm_limit_coeffs(g, Target::Quantile).unwrap();
            let kg = bm_limit_coeffs(g, Target::Gamma).unwrap();
            let s = kg.scaled();
            for i in 0..3 {
                assert!((kx.k[i] - s[i]).abs() < 1e-13, "g={g} i={i}");
            }
        }
    }

    #[test]
    fn branch_continuity_at_gamma_zero() {
        for target in [Target::Gamma, Target::Scale, Target::Location, Target::Quantile] {
            let z = bm_limit_coeffs(0.0, target).unwrap();
            for &g in &[1e-7, -1e-7] {
                let n = bm_limit_coeffs(g, target).unwrap();
                let (zs, ns) = (z.scaled(), n.scaled());
                for i in 0..3 {
                    assert!(
                        (zs[i] - ns[i]).abs() < 1e-4,
                        "{target:?} g={g} i={i}: {} vs {}",
                        ns[i],
                        zs[i]
                    );
                }
            }
        }
    }

    #[test]
    fn scale_location_regression_at_zero() {
        // frozen from the continuity limits of the Λ and Ξ expansions
        let ka = bm_limit_coeffs(0.0, Target::Scale).unwrap().k;
        let kb = bm_limit_coeffs(0.0, Target::Location).unwrap().k;
        let want_a = [-3.868930740277702, 8.016608063862744, -4.147677323585042];
        let want_b = [0.635555474892527, 2.411055548734482, -2.046611023627009];
        for i in 0..3 {
            assert!((ka[i] - want_a[i]).abs() < 1e-11, "ka[{i}] = {}", ka[i]);
            assert!((kb[i] - want_b[i]).abs() < 1e-11, "kb[{i}] = {}", kb[i]);
        }
    }

    #[test]
    fn rejects_gamma_above_half() {
        assert!(bm_limit_coeffs(0.5, Target::Gamma).is_err());
    }
}
