//! Shared oracle machinery for the integration tests: an independent 2-D
//! quadrature of the covariance double integral, symmetric eigenvalues,
//! goodness-of-fit helpers, and an exact second-order tail model whose
//! asymptotic constants are computable without simulation.

#![allow(dead_code)]

use evt_pwm::quad::{integrate, integrate_rel};

/// Direct 2-D adaptive quadrature of the original (pre-split) double
/// integral behind Cov(Q_r,Q_m), in log coordinates with per-axis power
/// maps. Completely independent of the closed-form reduction used by the
/// library.
pub fn cov_2d_oracle(r: usize, m: usize, gamma: f64) -> f64 {
    // corner exponent c(1−2γ)−1 ≥ 2 keeps the mapped integrand C² there
    let c: f64 = (3.0 / (1.0 - 2.0 * gamma)).ceil();
    let rf = r as f64;
    let mf = m as f64;
    // log of s^{r-1}u^{m-1}w(s)w(u)(min(s,u)-su) after s=e^{-t}, u=e^{-tau}
    let f_log = move |t: f64, tau: f64| -> f64 {
        let (mx, mn) = if t >= tau { (t, tau) } else { (tau, t) };
        -rf * t - mf * tau - mx + (-1.0 - gamma) * (t.ln() + tau.ln())
            + (-(-mn).exp_m1()).ln()
    };
    let z_hi = 45.0f64.powf(1.0 / c);
    let inner = move |tau: f64| -> f64 {
        let fz = move |z: f64| -> f64 {
            if z <= 0.0 {
                return 0.0;
            }
            let t = z.powf(c);
            if t <= 0.0 {
                return 0.0;
            }
            let lg = f_log(t, tau) + c.ln() + (c - 1.0) * z.ln();
            if lg > -700.0 {
                lg.exp()
            } else {
                0.0
            }
        };
        let z_split = tau.powf(1.0 / c).min(z_hi);
        let p1 = integrate_rel(fz, 0.0, z_split, 1e-12, 1e-300).unwrap_or(0.0);
        let p2 = integrate_rel(fz, z_split, z_hi, 1e-12, 1e-300).unwrap_or(0.0);
        p1 + p2
    };
    let outer = move |w: f64| -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        let tau = w.powf(c);
        inner(tau) * c * w.powf(c - 1.0)
    };
    let v = integrate_rel(outer, 0.0, z_hi, 1e-10, 1e-13).unwrap();
    ((r + 1) * (m + 1)) as f64 * v
}

/// Eigenvalues of a symmetric 4×4 matrix by cyclic Jacobi rotations.
pub fn sym_eigenvalues4(mut a: [[f64; 4]; 4]) -> [f64; 4] {
    for _ in 0..200 {
        let (mut p, mut q, mut mx) = (0usize, 1usize, 0.0f64);
        for i in 0..4 {
            for j in (i + 1)..4 {
                if a[i][j].abs() > mx {
                    mx = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if mx < 1e-13 {
            break;
        }
        let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let co = 1.0 / (t * t + 1.0).sqrt();
        let si = t * co;
        for k in 0..4 {
            let akp = a[k][p];
            let akq = a[k][q];
            a[k][p] = co * akp - si * akq;
            a[k][q] = si * akp + co * akq;
        }
        for k in 0..4 {
            let apk = a[p][k];
            let aqk = a[q][k];
            a[p][k] = co * apk - si * aqk;
            a[q][k] = si * apk + co * aqk;
        }
    }
    [a[0][0], a[1][1], a[2][2], a[3][3]]
}

/// Standard normal CDF via the Abramowitz–Stegun 7.1.26 erf
/// approximation (abs error < 1.5e-7; plenty for goodness-of-fit tests).
pub fn std_normal_cdf(x: f64) -> f64 {
    let z = x / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.3275911 * z.abs());
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let erf = 1.0 - poly * (-z * z).exp();
    let erf = if z >= 0.0 { erf } else { -erf };
    0.5 * (1.0 + erf)
}

/// Anderson–Darling statistic against a normal with estimated mean and
/// variance, with the D'Agostino–Stephens small-sample adjustment.
/// The 1%-level critical value for this case is 1.035.
pub fn anderson_darling_normal(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    let nf = n as f64;
    let mean = v.iter().sum::<f64>() / nf;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    let sd = var.sqrt();
    let mut a2 = 0.0;
    for i in 0..n {
        let zi = std_normal_cdf((v[i] - mean) / sd).clamp(1e-12, 1.0 - 1e-12);
        let zni = std_normal_cdf((v[n - 1 - i] - mean) / sd).clamp(1e-12, 1.0 - 1e-12);
        a2 += (2.0 * i as f64 + 1.0) * (zi.ln() + (1.0 - zni).ln());
    }
    let a2 = -nf - a2 / nf;
    a2 * (1.0 + 0.75 / nf + 2.25 / (nf * nf))
}

/// Two-sample Kolmogorov–Smirnov p-value (asymptotic).
pub fn ks_two_sample_pvalue(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.total_cmp(y));
    b.sort_by(|x, y| x.total_cmp(y));
    let (n1, n2) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 as f64 * n2 as f64 / (n1 + n2) as f64).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-1.0f64).powi(k as i32 - 1) * (-2.0 * kf * kf * lambda * lambda).exp();
        p += term;
    }
    p.clamp(0.0, 1.0)
}

/// An exact second-order tail model: V(t) = (t^γ − 1)/γ + D·t^{γ+ρ},
/// for which a₀(t) = t^γ(1 + D(γ+ρ)t^ρ) and A₀(t) = Dρ(γ+ρ)t^ρ. All
/// estimator biases admit a deterministic large-m evaluation, so the
/// asymptotic unit-bias constants can be verified without simulation.
#[derive(Clone, Copy)]
pub struct TailModel {
    pub gamma: f64,
    pub rho: f64,
    pub d: f64,
}

fn pow_m1(x: f64, c: f64) -> f64 {
    (c * x.ln()).exp_m1()
}

impl TailModel {
    /// (V(m·x) − V(m))/a₀(m), numerically centered.
    pub fn v_centered(&self, x: f64, m: f64) -> f64 {
        let lead = if self.gamma == 0.0 {
            x.ln()
        } else {
            pow_m1(x, self.gamma) / self.gamma
        };
        let mrho = m.powf(self.rho);
        (lead + self.d * mrho * pow_m1(x, self.gamma + self.rho))
            / (1.0 + self.d * (self.gamma + self.rho) * mrho)
    }

    pub fn a0_bias(&self, m: f64) -> f64 {
        self.d * self.rho * (self.gamma + self.rho) * m.powf(self.rho)
    }

    /// Deterministic centered moments M_r = [(r+1)Eβ_r − b_m]/a₀(m) of the
    /// block-maxima PWMs at block size m (k → ∞ limit).
    pub fn bm_centered_moments(&self, m: f64, rmax: usize) -> Vec<f64> {
        (0..=rmax)
            .map(|r| {
                let rf = r as f64;
                integrate(
                    |u: f64| {
                        if u <= 0.0 || u >= 1.0 {
                            return 0.0;
                        }
                        let x = 1.0 / (-(u.ln()));
                        (rf + 1.0) * self.v_centered(x, m) * u.powf(rf)
                    },
                    0.0,
                    1.0,
                    1e-12,
                )
                .unwrap()
            })
            .collect()
    }

    /// Deterministic POT moments (P(t)/a₀(t), Q(t)/a₀(t)) at threshold
    /// level t = n/k, in closed form.
    pub fn pot_centered_pq(&self, t: f64) -> (f64, f64) {
        let (g, rho, d) = (self.gamma, self.rho, self.d);
        let trho = t.powf(rho);
        let denom = 1.0 + d * (g + rho) * trho;
        let p = (1.0 / (1.0 - g) + d * trho * (g + rho) / (1.0 - g - rho)) / denom;
        let q = (0.5 / (2.0 - g) + d * trho * (g + rho) / (2.0 * (2.0 - g - rho))) / denom;
        (p, q)
    }
}
