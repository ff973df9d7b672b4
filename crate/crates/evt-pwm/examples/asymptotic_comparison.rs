//! Asymptotic comparison of the two methods at selected second-order
//! parameters: variances, unit biases, MINMSE ratio and optimal-k ratio.
//!
//! ```bash
//! cargo run --release --example asymptotic_comparison
//! ```

use evt_pwm::asymptotics::{
    bm_asymp, k0_ratio, minmse_ratio, pot_asymp, PotAsympProvider, PotTarget, PwmPotFormulas,
    Target,
};
use evt_pwm::evt_math::SecondOrderParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("POT formula source: {}", PwmPotFormulas::default().source());
    println!();
    println!(
        "{:>6} {:>6} | {:>9} {:>9} | {:>8} {:>8} | {:>7} {:>7}",
        "gamma", "rho", "var BM", "var POT", "bias BM", "biasPOT", "minmse", "k0"
    );
    for &(g, rho) in &[
        (-0.75, -0.75),
        (-0.5, -0.5),
        (-0.25, -0.5),
        (0.0, -0.5),
        (0.1, -0.25),
        (0.25, -1.0),
        (0.4, -0.5),
    ] {
        let p = SecondOrderParams::new(g, rho, 1.0)?;
        let bm = bm_asymp(&p, Target::Gamma)?;
        let pot = pot_asymp(&p, PotTarget::Gamma)?;
        let mr = minmse_ratio(&p, PotTarget::Gamma)?;
        let kr = k0_ratio(&p, PotTarget::Gamma)?;
        println!(
            "{:>6.2} {:>6.2} | {:>9.4} {:>9.4} | {:>8.4} {:>8.4} | {:>7.4} {:>7.4}",
            g, rho, bm.sigma2, pot.sigma2, bm.unit_bias, pot.unit_bias, mr, kr
        );
    }

    println!();
    println!("quantile target (same layout):");
    for &(g, rho) in &[(-0.5, -0.5), (-0.2, -0.5), (0.0, -0.5), (0.25, -0.5)] {
        let p = SecondOrderParams::new(g, rho, 1.0)?;
        let bm = bm_asymp(&p, Target::Quantile)?;
        let pot = pot_asymp(&p, PotTarget::Quantile)?;
        let mr = minmse_ratio(&p, PotTarget::Quantile)?;
        let kr = k0_ratio(&p, PotTarget::Quantile)?;
        println!(
            "{:>6.2} {:>6.2} | {:>9.4} {:>9.4} | {:>8.4} {:>8.4} | {:>7.4} {:>7.4}",
            g, rho, bm.sigma2, pot.sigma2, bm.unit_bias, pot.unit_bias, mr, kr
        );
    }
    println!();
    println!("(MINMSE and k0 ratios are BM/POT; values below 1 favour BM.)");
    Ok(())
}
