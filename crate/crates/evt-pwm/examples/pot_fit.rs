//! Peaks-over-threshold fit on the same kind of data as the block-maxima
//! example, with the two methods' return levels side by side.
//!
//! ```bash
//! cargo run --release --example pot_fit
//! ```

use evt_pwm::bm_pwm::{block_maxima, bm_fit, bm_quantile, pwm_betas, BlockSpec};
use evt_pwm::pot_pwm::{pot_fit, pot_quantile, PotSample};
use evt_pwm::sim::{sample, DistSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dist = DistSpec::burr(1.0, 2.0, 2.0)?;
    let years = 80;
    let m = 365;
    let n = years * m;
    let daily = sample(&dist, n, 20240901)?;
    let p = 1.0 / (100.0 * m as f64); // 100-year event, per observation

    // POT: select as many top order statistics as there are blocks
    let k = years;
    let sample_pot = PotSample::new(daily.clone(), k)?;
    let fit = pot_fit(&sample_pot)?;
    println!(
        "POT fit (k = {k}): gamma = {:+.4} (true {:.4}), a(n/k) = {:.4}, threshold = {:.4}",
        fit.gamma_hat, dist.known_gamma, fit.a_hat, fit.threshold
    );
    let pot_level = pot_quantile(&fit, p)?;

    // BM on the same data for comparison
    let maxima = block_maxima(&daily, BlockSpec::new(m)?)?;
    let bm = bm_fit(&pwm_betas(&maxima)?)?;
    let bm_level = bm_quantile(&bm, p)?;

    let truth = dist.quantile(1.0 - p);
    println!("100-year level: POT {pot_level:.3} | BM {bm_level:.3} | true {truth:.3}");

    // POT with a richer exceedance set
    let k2 = 3 * years;
    let fit2 = pot_fit(&PotSample::new(daily, k2)?)?;
    println!(
        "POT fit (k = {k2}): gamma = {:+.4}, 100-year level {:.3}",
        fit2.gamma_hat,
        pot_quantile(&fit2, p)?
    );
    Ok(())
}
