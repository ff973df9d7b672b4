//! Validation against an exact second-order tail model: every asymptotic
//! unit-bias constant is recomputed by driving the estimator formulas with
//! deterministic large-m (large-t) inputs and dividing by A₀. This route
//! never touches the coefficient chain or the bias functionals, so it
//! detects sign and assembly mistakes in them. Also goodness-of-fit
//! invariants of the simulation harness.

mod common;

use common::TailModel;
use evt_pwm::asymptotics::pot::pot_scale_variance;
use evt_pwm::asymptotics::{
    bm_asymp, pot_asymp_with, ExtrapolationTerm, PotAsympProvider, PotTarget, PwmPotFormulas,
    Target,
};
use evt_pwm::bm_pwm::{bm_fit, pwm_betas, solve_gamma, BlockMaximaSample, PwmBetas};
use evt_pwm::evt_math::{gamma_fn, q_gamma, SecondOrderParams, EULER_GAMMA};
use evt_pwm::sim::{mc_bm_study, mc_pot_study, DistSpec, McConfig, McEstimand};

fn sop(g: f64, r: f64) -> SecondOrderParams {
    SecondOrderParams::new(g, r, 0.0).unwrap()
}

/// Deterministic BM bias constants from the tail model at block size m:
/// (estimate − truth)/A₀(m) for each estimand.
fn bm_det_bias(model: &TailModel, m: f64, mp: f64) -> (f64, f64, f64, f64) {
    let mm = model.bm_centered_moments(m, 2);
    let ratio = (mm[2] - mm[0]) / (mm[1] - mm[0]);
    let gh = solve_gamma(ratio).unwrap();
    let g1 = gamma_fn(1.0 - gh).unwrap();
    let fa = gh / (gh * std::f64::consts::LN_2).exp_m1() / g1;
    let ah_rel = fa * (mm[1] - mm[0]); // a-hat / a0(m)
    let hg = if gh.abs() > 1e-12 {
        (1.0 - g1) / gh
    } else {
        -EULER_GAMMA
    };
    let bh_rel = mm[0] + ah_rel * hg; // (b-hat − b_m)/a0(m)
    let a = model.a0_bias(m);
    // quantile: exceedance probability p = mp/m per raw observation
    let p = mp / m;
    let t_over_m = 1.0 / (m * (-(-p).ln_1p()));
    let xtrue_rel = model.v_centered(t_over_m, m);
    let xq_rel = bh_rel + ah_rel * ((-gh * mp.ln()).exp_m1()) / gh;
    let q = q_gamma(1.0 / mp, model.gamma).unwrap();
    (
        (gh - model.gamma) / a,
        (ah_rel - 1.0) / a,
        bh_rel / a,
        (xq_rel - xtrue_rel) / (q * a),
    )
}

#[test]
fn bm_coefficient_chain_matches_tail_model() {
    for &(g, rho) in &[
        (0.25, -0.5),
        (-0.4, -0.5),
        (0.1, -0.25),
        (-0.8, -0.75),
        (-0.2, -1.0),
    ] {
        let model = TailModel { gamma: g, rho, d: 0.2 };
        let m = 1e8;
        let (dg, da, db, dx1) = bm_det_bias(&model, m, 1e-40);
        let p = sop(g, rho);
        let fg = bm_asymp(&p, Target::Gamma).unwrap().unit_bias;
        let fa = bm_asymp(&p, Target::Scale).unwrap().unit_bias;
        let fb = bm_asymp(&p, Target::Location).unwrap().unit_bias;
        let fx = bm_asymp(&p, Target::Quantile).unwrap().unit_bias;
        assert!((dg - fg).abs() < 5e-3, "gamma bias at ({g},{rho}): {dg} vs {fg}");
        assert!((da - fa).abs() < 5e-3, "scale bias at ({g},{rho}): {da} vs {fa}");
        assert!((db - fb).abs() < 5e-3, "location bias at ({g},{rho}): {db} vs {fb}");
        // for γ > 0 the quantile constant converges like 1/log d;
        // extrapolate linearly in 1/log d over d = 1e40, 1e80
        let dx = if g > 0.0 {
            let (_, _, _, dx2) = bm_det_bias(&model, m, 1e-80);
            let (l1, l2) = (1e40f64.ln(), 1e80f64.ln());
            (dx2 * l2 - dx1 * l1) / (l2 - l1)
        } else {
            dx1
        };
        let tol = if g > 0.0 { 1e-2 } else { 5e-3 };
        assert!((dx - fx).abs() < tol, "quantile bias at ({g},{rho}): {dx} vs {fx}");
    }
}

#[test]
fn pot_provider_matches_tail_model() {
    let plain = PwmPotFormulas {
        extrapolation_term: ExtrapolationTerm::Plain,
    };
    for &(g, rho) in &[(0.25, -0.5), (-0.4, -0.5), (0.1, -0.25), (-0.8, -0.75)] {
        let model = TailModel { gamma: g, rho, d: 0.2 };
        let t = 1e10;
        let a = model.a0_bias(t);
        let (p_det, q_det) = model.pot_centered_pq(t);
        let y = p_det / (2.0 * q_det);
        let gh = 1.0 - 1.0 / (y - 1.0);
        let ah = p_det / (y - 1.0);
        let det_g = (gh - g) / a;
        let det_a = (ah - 1.0) / a;
        let f_g = plain.unit_bias(&sop(g, rho), PotTarget::Gamma).unwrap();
        assert!((det_g - f_g).abs() < 1e-4, "POT gamma bias at ({g},{rho}): {det_g} vs {f_g}");
        let f_a = -(1.0 - g) / (1.0 - g - rho) + (2.0 - g) / (2.0 - g - rho);
        assert!((det_a - f_a).abs() < 1e-4, "POT scale bias at ({g},{rho}): {det_a} vs {f_a}");

        // quantile, plain extrapolation-term convention
        let det_quantile = |d: f64| {
            let xq_rel = ah * ((gh * d.ln()).exp_m1()) / gh;
            let lead = if g == 0.0 { d.ln() } else { ((g * d.ln()).exp_m1()) / g };
            let trho = t.powf(rho);
            let xtrue_rel = (lead + model.d * trho * ((g + rho) * d.ln()).exp_m1())
                / (1.0 + model.d * (g + rho) * trho);
            (xq_rel - xtrue_rel) / (q_gamma(d, g).unwrap() * a)
        };
        let det_x = if g > 0.0 {
            let (v1, v2) = (det_quantile(1e40), det_quantile(1e80));
            let (l1, l2) = (1e40f64.ln(), 1e80f64.ln());
            (v2 * l2 - v1 * l1) / (l2 - l1)
        } else {
            det_quantile(1e40)
        };
        let f_x = plain.unit_bias(&sop(g, rho), PotTarget::Quantile).unwrap();
        let tol = if g > 0.0 { 1e-2 } else { 1e-4 };
        assert!((det_x - f_x).abs() < tol, "POT quantile bias at ({g},{rho}): {det_x} vs {f_x}");
    }
}

#[test]
fn pot_quantile_variant_disagreement_is_the_extrapolation_term() {
    // the two conventions differ exactly by γ₋/(ρ(γ₋+ρ)) + γ₋/(γ₋+ρ)
    let ratio_scaled = PwmPotFormulas::default();
    let plain = PwmPotFormulas {
        extrapolation_term: ExtrapolationTerm::Plain,
    };
    for &(g, rho) in &[(-0.3, -0.5), (-0.7, -0.25)] {
        let p = sop(g, rho);
        let b1 = ratio_scaled.unit_bias(&p, PotTarget::Quantile).unwrap();
        let b2 = plain.unit_bias(&p, PotTarget::Quantile).unwrap();
        let gm = g.min(0.0);
        let want = gm / (rho * (gm + rho)) + gm / (gm + rho);
        assert!(((b1 - b2) - want).abs() < 1e-12);
        // variances agree regardless of the bias convention
        assert_eq!(
            ratio_scaled.variance(g, PotTarget::Quantile).unwrap(),
            plain.variance(g, PotTarget::Quantile).unwrap()
        );
    }
}

#[test]
fn bm_scale_and_location_variances_match_simulation() {
    for (estimand, target) in [
        (McEstimand::Scale, Target::Scale),
        (McEstimand::Location, Target::Location),
    ] {
        let cfg = McConfig {
            dist: DistSpec::gev_exact(0.25).unwrap(),
            k: 2000,
            m: 1,
            reps: 1500,
            seed: 0xabcd_0001,
            estimand,
        };
        let res = mc_bm_study(&cfg).unwrap();
        let pred = bm_asymp(&sop(0.25, -0.5), target).unwrap().sigma2;
        let rel = (res.empirical_var / pred - 1.0).abs();
        assert!(rel < 0.15, "{target:?}: {} vs {pred}", res.empirical_var);
    }
}

#[test]
fn pot_scale_variance_matches_simulation() {
    // discriminates the threshold-coupled scale variance from the plain
    // iid-GPD table value (2.625 vs 2.375 at gamma = -1/2)
    let cfg = McConfig {
        dist: DistSpec::gpd(-0.5).unwrap(),
        k: 2000,
        m: 10,
        reps: 1500,
        seed: 0xabcd_0002,
        estimand: McEstimand::Scale,
    };
    let res = mc_pot_study(&cfg).unwrap();
    let pred = pot_scale_variance(-0.5).unwrap();
    assert!((pred - 2.625).abs() < 1e-12);
    let rel = (res.empirical_var / pred - 1.0).abs();
    assert!(rel < 0.10, "POT scale var {} vs {pred}", res.empirical_var);
    assert!((res.empirical_var / 2.375 - 1.0).abs() > rel);
}

#[test]
fn pot_quantile_variance_matches_simulation() {
    use evt_pwm::pot_pwm::{pot_fit, pot_quantile, PotSample};
    use evt_pwm::sim::{replication_seed, sample};
    // exact GPD(-0.5) data, finite-d corrections decay like d^gamma
    let (g, k, m, reps) = (-0.5f64, 2000usize, 10usize, 1200usize);
    let n = k * m;
    let d = 1e6;
    let p_exc = k as f64 / (n as f64 * d);
    let dist = DistSpec::gpd(g).unwrap();
    let t = m as f64;
    let a_t = t.powf(g);
    let x_true = ((t * d).powf(g) - 1.0) / g;
    let qn = q_gamma(d, g).unwrap();
    let mut stats = Vec::with_capacity(reps);
    for rep in 0..reps {
        let xs = sample(&dist, n, replication_seed(0xabcd_0003, rep as u64)).unwrap();
        let fit = pot_fit(&PotSample::new(xs, k).unwrap()).unwrap();
        let xq = pot_quantile(&fit, p_exc).unwrap();
        stats.push((k as f64).sqrt() * (xq - x_true) / (a_t * qn));
    }
    let nf = stats.len() as f64;
    let mean = stats.iter().sum::<f64>() / nf;
    let var = stats.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (nf - 1.0);
    let pred = pot_asymp_with(&PwmPotFormulas::default(), &sop(g, -0.5), PotTarget::Quantile)
        .unwrap()
        .sigma2;
    let rel = (var / pred - 1.0).abs();
    assert!(rel < 0.20, "POT quantile var {var} vs {pred} ({rel:.3})");
}

#[test]
fn normalized_gamma_statistic_is_gaussian() {
    // Anderson–Darling with estimated parameters, 1% critical value 1.035
    let cfg = McConfig {
        dist: DistSpec::gev_exact(0.25).unwrap(),
        k: 2000,
        m: 1,
        reps: 1000,
        seed: 0xabcd_0004,
        estimand: McEstimand::Gamma,
    };
    let res = mc_bm_study(&cfg).unwrap();
    let values: Vec<f64> = res.values.iter().map(|&(_, v)| v).collect();
    let a2 = common::anderson_darling_normal(&values);
    assert!(a2 < 1.035, "AD statistic {a2} rejects normality at 1%");
}

#[test]
fn max_stability_makes_block_size_irrelevant() {
    // GevExact: fits at m = 10 and m = 1000 are equal in distribution
    let run = |m: usize, seed: u64| {
        let cfg = McConfig {
            dist: DistSpec::gev_exact(-0.25).unwrap(),
            k: 200,
            m,
            reps: 400,
            seed,
            estimand: McEstimand::Gamma,
        };
        mc_bm_study(&cfg)
            .unwrap()
            .values
            .iter()
            .map(|&(_, v)| v)
            .collect::<Vec<f64>>()
    };
    let a = run(10, 0xabcd_0005);
    let b = run(1000, 0xabcd_0006);
    let p = common::ks_two_sample_pvalue(&a, &b);
    assert!(p > 0.01, "KS p-value {p} rejects max-stability");
}

#[test]
fn gumbel_consistency_at_scale() {
    // 1e5 exact standard-Gumbel maxima: gamma within 0.01 of 0,
    // location within 0.01 of 0, scale within 0.01 of 1
    let xs = evt_pwm::sim::sample(&DistSpec::gev_exact(0.0).unwrap(), 100_000, 77).unwrap();
    let s = BlockMaximaSample::new(xs, 1).unwrap();
    let fit = bm_fit(&pwm_betas(&s).unwrap()).unwrap();
    assert!(fit.gamma_hat.abs() < 0.01, "gamma {}", fit.gamma_hat);
    assert!(fit.b_hat.abs() < 0.01, "b {}", fit.b_hat);
    assert!((fit.a_hat - 1.0).abs() < 0.01, "a {}", fit.a_hat);
}

#[test]
fn gamma_star_consistency_on_gumbel() {
    let xs = evt_pwm::sim::sample(&DistSpec::gev_exact(0.0).unwrap(), 100_000, 78).unwrap();
    let s = BlockMaximaSample::new(xs, 1).unwrap();
    let gs = evt_pwm::bm_pwm::gamma_star(&pwm_betas(&s).unwrap()).unwrap();
    assert!(gs.abs() < 0.02, "gamma_star {gs}");
}

#[test]
fn bm_quantile_recovers_gev_far_tail() {
    // fit exact model parameters and require the plug-in quantile to hit
    // the true far quantile; then a sampled fit to hit it within noise
    let g = -0.3;
    let p = 1e-5;
    let exact = evt_pwm::bm_pwm::BmFit {
        gamma_hat: g,
        a_hat: 1.0,
        b_hat: 0.0,
        k: 1000,
        m: 1,
    };
    let x_plug = evt_pwm::bm_pwm::bm_quantile(&exact, p).unwrap();
    let x_true = evt_pwm::evt_math::gev_quantile(1.0 - p, g).unwrap();
    // (mp)^{-g} vs (-log(1-p))^{-g}: equal to O(p)
    assert!((x_plug - x_true).abs() < 1e-4, "{x_plug} vs {x_true}");

    let xs = evt_pwm::sim::sample(&DistSpec::gev_exact(g).unwrap(), 20_000, 79).unwrap();
    let fit = bm_fit(&pwm_betas(&BlockMaximaSample::new(xs, 1).unwrap()).unwrap()).unwrap();
    let xq = evt_pwm::bm_pwm::bm_quantile(&fit, p).unwrap();
    assert!((xq - x_true).abs() / x_true.abs() < 0.05, "{xq} vs {x_true}");
}

#[test]
fn beta_spread_statistics_positive_on_nonconstant_samples() {
    // 2β₁−β₀ > 0 and 3β₂−β₀ > 0 for non-constant sorted samples
    let mut state = 0x1157u64;
    for _ in 0..200 {
        let xs: Vec<f64> = (0..25)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                ((state >> 11) as f64) / ((1u64 << 53) as f64) * 10.0 - 3.0
            })
            .collect();
        let betas: PwmBetas = pwm_betas(&BlockMaximaSample::new(xs, 1).unwrap()).unwrap();
        let [b0, b1, b2, _] = betas.beta;
        assert!(2.0 * b1 - b0 > 0.0);
        assert!(3.0 * b2 - b0 > 0.0);
    }
}
