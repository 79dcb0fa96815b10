//! Structural breaks: parameter shifts and regime shifts at an index `k`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::volatility::{garch_with_innovations, GarchParams};
use super::{normal, normals, sign, uniform, Draft};
use crate::error::{Error, Result};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakKind {
    None,
    // parameter shifts
    Mean,
    Variance,
    MeanVariance,
    SeasonalAmplitude,
    Autocorrelation,
    // regime shifts
    Distribution,
    Stationarity,
    Linearity,
    Frequency,
    NoiseTrend,
    ErrorCorrelation,
    VarianceType,
}

impl BreakKind {
    pub const PARAMETER_SHIFTS: [BreakKind; 5] = [
        BreakKind::Mean,
        BreakKind::Variance,
        BreakKind::MeanVariance,
        BreakKind::SeasonalAmplitude,
        BreakKind::Autocorrelation,
    ];

    pub const REGIME_SHIFTS: [BreakKind; 7] = [
        BreakKind::Distribution,
        BreakKind::Stationarity,
        BreakKind::Linearity,
        BreakKind::Frequency,
        BreakKind::NoiseTrend,
        BreakKind::ErrorCorrelation,
        BreakKind::VarianceType,
    ];

    pub fn variant(self) -> &'static str {
        match self {
            BreakKind::None => "none",
            BreakKind::Mean => "mean",
            BreakKind::Variance => "variance",
            BreakKind::MeanVariance => "mean_variance",
            BreakKind::SeasonalAmplitude => "seasonal_amplitude",
            BreakKind::Autocorrelation => "autocorrelation",
            BreakKind::Distribution => "distribution",
            BreakKind::Stationarity => "stationarity",
            BreakKind::Linearity => "linearity",
            BreakKind::Frequency => "frequency",
            BreakKind::NoiseTrend => "noise_trend",
            BreakKind::ErrorCorrelation => "error_correlation",
            BreakKind::VarianceType => "variance_type",
        }
    }

    pub fn sub_feature(self) -> SubFeature {
        if self == BreakKind::None {
            SubFeature::None
        } else if BreakKind::PARAMETER_SHIFTS.contains(&self) {
            SubFeature::ParameterShift
        } else {
            SubFeature::RegimeChange
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BreakOverrides {
    pub k: Option<usize>,
    /// Noise standard deviation before the break.
    pub sigma: Option<f64>,
    /// Mean offset for mean shifts; std ratio for variance shifts.
    pub magnitude: Option<f64>,
    pub level: Option<f64>,
}

fn ar1<R: Rng + ?Sized>(phi: f64, sigma: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x = phi * x + sigma * normal(rng);
            x
        })
        .collect()
}

pub fn gen_structural_break<R: Rng + ?Sized>(
    kind: BreakKind,
    n: usize,
    overrides: BreakOverrides,
    rng: &mut R,
) -> Result<Draft> {
    if n < 20 {
        return Err(Error::Generation(format!("structural break needs n >= 20, got {n}")));
    }
    let k = overrides.k.unwrap_or_else(|| rng.random_range(n / 4..=3 * n / 4));
    if k == 0 || k >= n {
        return Err(Error::Generation(format!("break index {k} out of range for length {n}")));
    }
    let level = overrides.level.unwrap_or_else(|| uniform(rng, 50.0, 150.0));
    let sigma = overrides.sigma.unwrap_or_else(|| uniform(rng, 1.0, 3.0));
    let mut label = FeatureLabel::new(Feature::StructuralBreak, kind.sub_feature(), kind.variant())
        .with("level", level)
        .with("sigma", sigma);
    if kind != BreakKind::None {
        label.set("k", k as f64);
    }
    let t_of = |t: usize| t as f64;

    let body: Vec<f64> = match kind {
        BreakKind::None => normals(rng, n).into_iter().map(|e| sigma * e).collect(),
        BreakKind::Mean | BreakKind::MeanVariance | BreakKind::Variance => {
            let shift = match kind {
                BreakKind::Variance => 0.0,
                _ => overrides
                    .magnitude
                    .filter(|_| kind == BreakKind::Mean)
                    .unwrap_or_else(|| sign(rng) * uniform(rng, 4.0, 8.0) * sigma),
            };
            let ratio = match kind {
                BreakKind::Mean => 1.0,
                BreakKind::Variance => overrides.magnitude.unwrap_or_else(|| grow_or_shrink(rng)),
                _ => grow_or_shrink(rng),
            };
            label.set("mean_shift", shift);
            label.set("std_ratio", ratio);
            (0..n)
                .map(|t| {
                    let e = normal(rng);
                    if t < k {
                        sigma * e
                    } else {
                        shift + ratio * sigma * e
                    }
                })
                .collect()
        }
        BreakKind::SeasonalAmplitude => {
            let period = 7.0;
            let amp = uniform(rng, 3.0, 6.0) * sigma;
            let ratio = overrides.magnitude.unwrap_or_else(|| grow_or_shrink(rng));
            label.set("period", period);
            label.set("amplitude", amp);
            label.set("amplitude_ratio", ratio);
            (0..n)
                .map(|t| {
                    let a = if t < k { amp } else { amp * ratio };
                    a * (std::f64::consts::TAU * t_of(t) / period).sin() + 0.3 * sigma * normal(rng)
                })
                .collect()
        }
        BreakKind::Autocorrelation => {
            let (phi1, phi2) = if rng.random_bool(0.5) { (0.1, 0.9) } else { (0.9, 0.1) };
            label.set("phi_before", phi1);
            label.set("phi_after", phi2);
            let mut x = 0.0;
            (0..n)
                .map(|t| {
                    let phi = if t < k { phi1 } else { phi2 };
                    x = phi * x + sigma * normal(rng);
                    x
                })
                .collect()
        }
        BreakKind::Distribution => {
            // normal before, centred exponential with a larger scale after
            let scale = uniform(rng, 2.0, 4.0) * sigma;
            label.set("exp_scale", scale);
            (0..n)
                .map(|t| {
                    if t < k {
                        sigma * normal(rng)
                    } else {
                        let e: f64 = Exp1.sample(rng);
                        scale * e
                    }
                })
                .collect()
        }
        BreakKind::Stationarity => {
            // white noise, then a random walk with drift
            let drift = sign(rng) * uniform(rng, 0.3, 0.8) * sigma;
            label.set("drift", drift);
            let mut walk = 0.0;
            (0..n)
                .map(|t| {
                    if t < k {
                        sigma * normal(rng)
                    } else {
                        walk += drift + sigma * normal(rng);
                        walk
                    }
                })
                .collect()
        }
        BreakKind::Linearity => {
            // linear trend, then a quadratic continuation
            let slope = sign(rng) * uniform(rng, 0.05, 0.2) * sigma;
            let curv = sign(rng) * uniform(rng, 0.02, 0.06) * sigma;
            label.set("slope", slope);
            label.set("curvature", curv);
            (0..n)
                .map(|t| {
                    let x = t_of(t);
                    let extra = if t < k { 0.0 } else { curv * (x - k as f64).powi(2) };
                    slope * x + extra + 0.5 * sigma * normal(rng)
                })
                .collect()
        }
        BreakKind::Frequency => {
            let (p1, p2) = if rng.random_bool(0.5) { (7.0, 20.0) } else { (20.0, 7.0) };
            let amp = uniform(rng, 3.0, 6.0) * sigma;
            label.set("period_before", p1);
            label.set("period_after", p2);
            label.set("amplitude", amp);
            let mut angle = 0.0;
            (0..n)
                .map(|t| {
                    let v = amp * f64::sin(angle);
                    angle += std::f64::consts::TAU / if t < k { p1 } else { p2 };
                    v + 0.3 * sigma * normal(rng)
                })
                .collect()
        }
        BreakKind::NoiseTrend => {
            // noise std grows linearly after the break
            let growth = uniform(rng, 3.0, 6.0);
            label.set("noise_growth", growth);
            (0..n)
                .map(|t| {
                    let s = if t < k {
                        sigma
                    } else {
                        sigma * (1.0 + growth * (t - k) as f64 / (n - k) as f64)
                    };
                    s * normal(rng)
                })
                .collect()
        }
        BreakKind::ErrorCorrelation => {
            let phi = uniform(rng, 0.85, 0.95);
            label.set("phi_after", phi);
            let correlated = ar1(phi, sigma, n, rng);
            (0..n)
                .map(|t| if t < k { sigma * normal(rng) } else { correlated[t] })
                .collect()
        }
        BreakKind::VarianceType => {
            // homoskedastic noise, then GARCH(1,1) errors
            let p = GarchParams {
                omega: 0.1,
                alpha: 0.3,
                beta: 0.65,
            };
            label.set("omega", p.omega);
            label.set("alpha", p.alpha);
            label.set("beta", p.beta);
            let scale = sigma / p.unconditional_variance().sqrt();
            let eps = normals(rng, n - k);
            let path = garch_with_innovations(p, p.unconditional_variance(), &eps);
            (0..n)
                .map(|t| {
                    if t < k {
                        sigma * normal(rng)
                    } else {
                        scale * path.returns[t - k] * 2.0
                    }
                })
                .collect()
        }
    };
    let values = body.into_iter().map(|x| level + x).collect();
    Ok(Draft::dense(values, label))
}

/// Std ratio in [2.5, 4] or its reciprocal.
fn grow_or_shrink<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let r = uniform(rng, 2.5, 4.0);
    if rng.random_bool(0.5) {
        r
    } else {
        1.0 / r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{mean, std_dev, variance};
    use crate::seed::rng_from;

    /// Index minimising the two-segment sum of squared errors.
    fn sse_change_point(v: &[f64], min_seg: usize) -> usize {
        let sse = |s: &[f64]| {
            let m = mean(s);
            s.iter().map(|x| (x - m).powi(2)).sum::<f64>()
        };
        (min_seg..v.len() - min_seg)
            .min_by(|&a, &b| {
                let fa = sse(&v[..a]) + sse(&v[a..]);
                let fb = sse(&v[..b]) + sse(&v[b..]);
                fa.total_cmp(&fb)
            })
            .unwrap()
    }

    #[test]
    fn variance_shift_ratio() {
        let over = BreakOverrides {
            k: Some(500),
            sigma: Some(1.0),
            magnitude: Some(4.0),
            ..Default::default()
        };
        let mut rng = rng_from(3);
        let d = gen_structural_break(BreakKind::Variance, 1000, over, &mut rng).unwrap();
        let v = d.observed();
        let ratio = std_dev(&v[500..]) / std_dev(&v[..500]);
        assert!((ratio - 4.0).abs() < 1.0, "{ratio}");
    }

    #[test]
    fn mean_shift_located_by_sse() {
        for seed in 0..20 {
            let mut rng = rng_from(seed);
            let over = BreakOverrides {
                k: Some(60),
                sigma: Some(1.0),
                magnitude: Some(10.0),
                ..Default::default()
            };
            let d = gen_structural_break(BreakKind::Mean, 150, over, &mut rng).unwrap();
            assert_eq!(sse_change_point(&d.observed(), 5), 60, "seed {seed}");
        }
    }

    #[test]
    fn no_break_has_no_significant_mean_split() {
        let mut flagged = 0;
        for seed in 0..50 {
            let mut rng = rng_from(seed);
            let d = gen_structural_break(BreakKind::None, 120, Default::default(), &mut rng).unwrap();
            let v = d.observed();
            let worst = (10..v.len() - 10)
                .map(|k| {
                    let (a, b) = v.split_at(k);
                    let pooled = ((variance(a) / a.len() as f64) + (variance(b) / b.len() as f64)).sqrt();
                    (mean(a) - mean(b)).abs() / pooled
                })
                .fold(0.0, f64::max);
            if worst > 3.0 {
                flagged += 1;
            }
        }
        // a maximum over ~100 correlated splits exceeds 3 only occasionally
        assert!(flagged <= 10, "{flagged}");
    }

    #[test]
    fn break_index_in_middle_half() {
        for seed in 0..200 {
            let mut rng = rng_from(seed);
            let kind = BreakKind::REGIME_SHIFTS[seed as usize % 7];
            let n = 30 + seed as usize % 121;
            let d = gen_structural_break(kind, n, Default::default(), &mut rng).unwrap();
            let k = d.label.param("k").unwrap() as usize;
            assert!((n / 4..=3 * n / 4).contains(&k));
            assert_eq!(d.label.sub_feature, SubFeature::RegimeChange);
            assert!(d.observed().iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn short_series_rejected() {
        let mut rng = rng_from(0);
        assert!(gen_structural_break(BreakKind::Mean, 19, Default::default(), &mut rng).is_err());
    }
}
