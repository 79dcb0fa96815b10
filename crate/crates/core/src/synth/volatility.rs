//! Volatility processes: GARCH(1,1), leverage, constant and increasing.
//!
//! The emitted series is the absolute value of the simulated returns, so
//! every volatility sample is non-negative.

use rand::Rng;

use super::{normal, normals, uniform, Draft};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GarchParams {
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for GarchParams {
    fn default() -> Self {
        Self {
            omega: 0.1,
            alpha: 0.2,
            beta: 0.7,
        }
    }
}

impl GarchParams {
    /// `omega / (1 - alpha - beta)`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.alpha - self.beta)
    }
}

#[derive(Debug, Clone)]
pub struct GarchPath {
    pub returns: Vec<f64>,
    /// Conditional variance `sigma_t^2` for every step.
    pub variances: Vec<f64>,
}

/// Run the GARCH(1,1) recursion on given innovations:
/// `sigma_t^2 = omega + alpha * r_{t-1}^2 + beta * sigma_{t-1}^2`, `r_t = sigma_t * eps_t`.
pub fn garch_with_innovations(params: GarchParams, initial_variance: f64, eps: &[f64]) -> GarchPath {
    let mut returns = Vec::with_capacity(eps.len());
    let mut variances = Vec::with_capacity(eps.len());
    let mut var = initial_variance;
    for (t, e) in eps.iter().enumerate() {
        if t > 0 {
            let r_prev: f64 = returns[t - 1];
            var = params.omega + params.alpha * r_prev * r_prev + params.beta * var;
        }
        variances.push(var);
        returns.push(var.sqrt() * e);
    }
    GarchPath { returns, variances }
}

/// GARCH(1,1) with standard normal innovations, started at the
/// unconditional variance.
pub fn simulate_garch<R: Rng + ?Sized>(params: GarchParams, n: usize, rng: &mut R) -> GarchPath {
    let eps = normals(rng, n);
    garch_with_innovations(params, params.unconditional_variance(), &eps)
}

pub const LEVERAGE_BASE: f64 = 0.1;
pub const LEVERAGE_STRENGTH: f64 = 0.3;
pub const LEVERAGE_FLOOR: f64 = 0.01;

/// One leverage update: volatility grows after a negative return and
/// decays (down to a floor) otherwise.
pub fn leverage_step(sigma_prev: f64, r: f64, strength: f64) -> f64 {
    if r < 0.0 {
        sigma_prev * (1.0 + strength)
    } else {
        (sigma_prev * (1.0 - strength)).max(LEVERAGE_FLOOR)
    }
}

#[derive(Debug, Clone)]
pub struct LeveragePath {
    pub returns: Vec<f64>,
    /// `sigmas[0]` is the base volatility; `sigmas[t]` follows `returns[t - 1]`.
    pub sigmas: Vec<f64>,
}

/// `r_t = sigma_{t-1} * eps_t`, then `sigma_t = leverage_step(sigma_{t-1}, r_t)`.
pub fn simulate_leverage<R: Rng + ?Sized>(base: f64, strength: f64, n: usize, rng: &mut R) -> LeveragePath {
    let mut sigmas = Vec::with_capacity(n + 1);
    let mut returns = Vec::with_capacity(n);
    sigmas.push(base);
    for _ in 0..n {
        let prev = *sigmas.last().unwrap();
        let r = prev * normal(rng);
        returns.push(r);
        sigmas.push(leverage_step(prev, r, strength));
    }
    LeveragePath { returns, sigmas }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolatilityMode {
    /// Control: smooth series with no dispersion.
    None,
    Constant,
    Increasing,
    ClusteredGarch,
    Leverage,
}

impl VolatilityMode {
    pub fn variant(self) -> &'static str {
        match self {
            VolatilityMode::None => "none",
            VolatilityMode::Constant => "constant",
            VolatilityMode::Increasing => "increasing",
            VolatilityMode::ClusteredGarch => "garch",
            VolatilityMode::Leverage => "leverage",
        }
    }

    fn sub_feature(self) -> SubFeature {
        match self {
            VolatilityMode::None => SubFeature::None,
            VolatilityMode::Constant => SubFeature::Constant,
            VolatilityMode::Increasing => SubFeature::Trending,
            VolatilityMode::ClusteredGarch => SubFeature::Clustered,
            VolatilityMode::Leverage => SubFeature::Dynamic,
        }
    }
}

/// Increasing-volatility returns: `sigma_t = sigma0 * (1 + 5 t / n)`, `r_t = eps_t * sigma_t`.
pub fn increasing_returns<R: Rng + ?Sized>(sigma0: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|t| {
            let sigma = sigma0 * (1.0 + 5.0 * t as f64 / n as f64);
            normal(rng) * sigma
        })
        .collect()
}

pub fn gen_volatility<R: Rng + ?Sized>(mode: VolatilityMode, n: usize, rng: &mut R) -> Draft {
    let mut label = FeatureLabel::new(Feature::Volatility, mode.sub_feature(), mode.variant());
    let raw: Vec<f64> = match mode {
        VolatilityMode::None => {
            let level = uniform(rng, 0.5, 2.0);
            let slope = uniform(rng, -0.005, 0.005);
            label.set("level", level);
            label.set("slope", slope);
            (0..n).map(|t| level + slope * t as f64).collect()
        }
        VolatilityMode::Constant => {
            // r_t = sum_{i<=t} eps_i + eta_t
            let mut walk = 0.0;
            (0..n)
                .map(|_| {
                    walk += normal(rng);
                    walk + normal(rng)
                })
                .collect()
        }
        VolatilityMode::Increasing => {
            let sigma0 = 1.0;
            label.set("sigma0", sigma0);
            label.set("scale_max", 5.0);
            increasing_returns(sigma0, n, rng)
        }
        VolatilityMode::ClusteredGarch => {
            let p = GarchParams::default();
            label.set("omega", p.omega);
            label.set("alpha", p.alpha);
            label.set("beta", p.beta);
            label.set("initial_variance", p.unconditional_variance());
            simulate_garch(p, n, rng).returns
        }
        VolatilityMode::Leverage => {
            label.set("base_volatility", LEVERAGE_BASE);
            label.set("leverage_strength", LEVERAGE_STRENGTH);
            simulate_leverage(LEVERAGE_BASE, LEVERAGE_STRENGTH, n, rng).returns
        }
    };
    let values = if mode == VolatilityMode::None {
        raw
    } else {
        raw.into_iter().map(f64::abs).collect()
    };
    Draft::dense(values, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::std_dev;
    use crate::seed::rng_from;

    #[test]
    fn garch_zero_innovation_recursion() {
        let p = GarchParams::default();
        let path = garch_with_innovations(p, 1.0, &[0.0; 3]);
        assert_eq!(path.variances[0], 1.0);
        assert!((path.variances[1] - 0.8).abs() < 1e-12);
        assert!((path.variances[2] - 0.66).abs() < 1e-12);
        assert!(path.returns.iter().all(|r| *r == 0.0));
    }

    #[test]
    fn garch_variance_never_below_omega() {
        let mut rng = rng_from(42);
        let p = GarchParams::default();
        let path = simulate_garch(p, 20_000, &mut rng);
        assert!(path.variances.iter().all(|v| *v >= p.omega));
    }

    #[test]
    fn leverage_single_steps() {
        assert!((leverage_step(0.1, -0.05, 0.3) - 0.13).abs() < 1e-15);
        assert!((leverage_step(0.1, 0.05, 0.3) - 0.07).abs() < 1e-15);
        let mut s = 0.1;
        for _ in 0..50 {
            s = leverage_step(s, 1.0, 0.3);
            assert!(s >= LEVERAGE_FLOOR);
        }
        assert_eq!(s, LEVERAGE_FLOOR);
    }

    #[test]
    fn increasing_volatility_grows() {
        let mut wins = 0;
        let trials = 200;
        for seed in 0..trials {
            let mut rng = rng_from(seed);
            let n = 120;
            let r = increasing_returns(1.0, n, &mut rng);
            let q = n / 4;
            if std_dev(&r[n - q..]) / std_dev(&r[..q]) > 2.0 {
                wins += 1;
            }
        }
        assert!(wins as f64 >= 0.95 * trials as f64, "{wins}/{trials}");
    }

    #[test]
    fn emitted_values_are_non_negative() {
        let mut rng = rng_from(7);
        for mode in [
            VolatilityMode::Constant,
            VolatilityMode::Increasing,
            VolatilityMode::ClusteredGarch,
            VolatilityMode::Leverage,
        ] {
            let d = gen_volatility(mode, 100, &mut rng);
            assert!(d.observed().iter().all(|v| *v >= 0.0), "{mode:?}");
        }
    }
}
