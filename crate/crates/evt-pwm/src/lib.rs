//! Extreme value estimation with probability weighted moments, two ways:
//! fitting block maxima to the GEV family and fitting threshold excesses
//! to the generalized Pareto family, plus the asymptotic
//! variance/bias/MINMSE machinery that compares the two methods on equal
//! footing (equal numbers of selected observations, common second-order
//! parameters).
//!
//! The crate is organized around six pieces:
//!
//! - [`evt_math`]: Γ and its derivatives, the functionals H_{γ,ρ}, D_r,
//!   I_r, q_γ and the GEV distribution, all continuity-safe at γ = 0,
//!   ρ = 0.
//! - [`bm_pwm`]: block construction and the GEV PWM fit (γ̂, â, b̂),
//!   the explicit γ̂* variant, and high-quantile estimation.
//! - [`pot_pwm`]: the peaks-over-threshold PWM fit from the top k order
//!   statistics and its quantile estimator.
//! - [`asymptotics`]: Cov(Q_r,Q_m) quadrature, the limit-law coefficient
//!   chain, POT formulas behind a swappable provider, and the comparison
//!   metrics (variance curves, bias ratio, MINMSE ratio, optimal-k ratio)
//!   with grid tabulation.
//! - [`sim`]: samplers with known (γ, ρ) and a deterministic, seedable
//!   Monte Carlo harness validating the limit laws.
//! - [`cli`]: the `evt-pwm` command-line wrapper.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod asymptotics;
pub mod bm_pwm;
pub mod cli;
pub mod error;
pub mod evt_math;
pub mod pot_pwm;
pub mod quad;
pub mod sim;

pub use asymptotics::{bm_asymp, minmse_ratio, pot_asymp, AsympSummary, Target};
pub use bm_pwm::{block_maxima, bm_fit, bm_quantile, gamma_star, pwm_betas, BlockSpec, BmFit};
pub use error::{EvtError, Result};
pub use evt_math::SecondOrderParams;
pub use pot_pwm::{pot_fit, pot_quantile, PotFit, PotSample};
