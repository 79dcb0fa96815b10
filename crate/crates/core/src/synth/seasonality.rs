//! Sinusoidal seasonal patterns.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{normal, sign, sine_wave, uniform, Draft};
use crate::error::{Error, Result};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeasonalPattern {
    Fixed,
    /// Amplitude changes linearly over time. Labeled as fixed-period.
    VaryingAmplitude,
    ShiftingPeriod,
    Multiple,
}

impl SeasonalPattern {
    fn variant(self) -> &'static str {
        match self {
            SeasonalPattern::Fixed => "fixed",
            SeasonalPattern::VaryingAmplitude => "varying_amplitude",
            SeasonalPattern::ShiftingPeriod => "shifting_period",
            SeasonalPattern::Multiple => "multiple",
        }
    }

    fn sub_feature(self) -> SubFeature {
        match self {
            SeasonalPattern::Fixed | SeasonalPattern::VaryingAmplitude => SubFeature::FixedPeriod,
            SeasonalPattern::ShiftingPeriod => SubFeature::ShiftingPeriod,
            SeasonalPattern::Multiple => SubFeature::Multiple,
        }
    }
}

/// Human name of a period in days.
pub fn period_name(period: f64) -> String {
    match period.round() as i64 {
        7 => "weekly".into(),
        14 => "biweekly".into(),
        30 => "monthly".into(),
        p => format!("{p}-day"),
    }
}

/// Periods from {7, 30} that fit at least twice into `n`.
fn feasible_periods(n: usize) -> Vec<f64> {
    let p: Vec<f64> = [7.0, 30.0]
        .into_iter()
        .filter(|p| n as f64 >= 2.0 * p)
        .collect();
    if p.is_empty() {
        vec![7.0]
    } else {
        p
    }
}

/// Noise standard deviation relative to amplitude when none is configured.
pub const DEFAULT_RELATIVE_NOISE: f64 = 0.05;

pub fn gen_seasonality<R: Rng + ?Sized>(
    pattern: SeasonalPattern,
    n: usize,
    noise_std: Option<f64>,
    rng: &mut R,
) -> Result<Draft> {
    let offset = uniform(rng, 50.0, 150.0);
    let amplitude = uniform(rng, 5.0, 30.0);
    let phase = uniform(rng, 0.0, std::f64::consts::TAU);
    let noise = noise_std.unwrap_or(DEFAULT_RELATIVE_NOISE * amplitude);
    let mut label = FeatureLabel::new(Feature::Seasonality, pattern.sub_feature(), pattern.variant())
        .with("offset", offset)
        .with("amplitude", amplitude)
        .with("phase", phase)
        .with("noise_std", noise);

    let periods = feasible_periods(n);
    let seasonal: Vec<f64> = match pattern {
        SeasonalPattern::Fixed => {
            let p = *periods.choose(rng).unwrap();
            check_period(n, p)?;
            label.set("period", p);
            sine_wave(n, p, amplitude, phase)
        }
        SeasonalPattern::VaryingAmplitude => {
            let p = *periods.choose(rng).unwrap();
            check_period(n, p)?;
            let end_ratio = if rng.random_bool(0.5) {
                uniform(rng, 2.0, 4.0)
            } else {
                uniform(rng, 0.2, 0.5)
            };
            label.set("period", p);
            label.set("amplitude_end_ratio", end_ratio);
            (0..n)
                .map(|t| {
                    let a = amplitude * (1.0 + (end_ratio - 1.0) * t as f64 / n as f64);
                    a * (std::f64::consts::TAU * t as f64 / p + phase).sin()
                })
                .collect()
        }
        SeasonalPattern::ShiftingPeriod => {
            let p0 = *periods.choose(rng).unwrap();
            check_period(n, p0)?;
            let drift = sign(rng) * uniform(rng, 0.3, 0.6);
            label.set("period", p0);
            label.set("period_drift", drift);
            let mut angle = phase;
            (0..n)
                .map(|t| {
                    let v = amplitude * angle.sin();
                    let p = p0 * (1.0 + drift * t as f64 / n as f64);
                    angle += std::f64::consts::TAU / p;
                    v
                })
                .collect()
        }
        SeasonalPattern::Multiple => {
            let (p1, p2) = if n >= 60 { (7.0, 30.0) } else { (7.0, 14.0) };
            check_period(n, p2)?;
            let amplitude2 = uniform(rng, 5.0, 30.0);
            label.set("period", p1);
            label.set("period2", p2);
            label.set("amplitude2", amplitude2);
            let a = sine_wave(n, p1, amplitude, phase);
            let b = sine_wave(n, p2, amplitude2, phase);
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        }
    };
    let values = seasonal
        .into_iter()
        .map(|s| offset + s + noise * normal(rng))
        .collect();
    Ok(Draft::dense(values, label))
}

fn check_period(n: usize, period: f64) -> Result<()> {
    if (n as f64) < period {
        return Err(Error::Generation(format!(
            "length {n} shorter than one full period {period}"
        )));
    }
    Ok(())
}

/// Control series: a level plus Gaussian noise, no periodic component.
pub fn gen_no_seasonality<R: Rng + ?Sized>(n: usize, noise_std: Option<f64>, rng: &mut R) -> Draft {
    let offset = uniform(rng, 50.0, 150.0);
    let noise = noise_std.unwrap_or_else(|| uniform(rng, 1.0, 5.0));
    let values = (0..n).map(|_| offset + noise * normal(rng)).collect();
    let label = FeatureLabel::new(Feature::Seasonality, SubFeature::None, "noise")
        .with("offset", offset)
        .with("noise_std", noise);
    Draft::dense(values, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{autocorrelation, mean, moving_average3, strict_extrema};
    use crate::seed::rng_from;

    #[test]
    fn fixed_pattern_peaks_once_per_period() {
        for seed in 0..50 {
            let mut rng = rng_from(seed);
            let d = gen_seasonality(SeasonalPattern::Fixed, 150, Some(0.0), &mut rng).unwrap();
            let p = d.label.param("period").unwrap();
            let smooth = moving_average3(&d.observed());
            let (peaks, _) = strict_extrema(&smooth);
            let expected = 148.0 / p;
            assert!(
                (peaks.len() as f64 - expected).abs() <= 1.5,
                "{} peaks for period {p}",
                peaks.len()
            );
        }
    }

    #[test]
    fn multiple_pattern_has_energy_at_both_periods() {
        let mut rng = rng_from(11);
        let d = gen_seasonality(SeasonalPattern::Multiple, 150, None, &mut rng).unwrap();
        let v = d.observed();
        let m = mean(&v);
        let centred: Vec<f64> = v.iter().map(|x| x - m).collect();
        let r7 = autocorrelation(&centred, 7);
        let r30 = autocorrelation(&centred, 30);
        let others = [3usize, 4, 10, 11, 18, 25];
        for lag in others {
            let r = autocorrelation(&centred, lag);
            assert!(r < r7.max(r30), "lag {lag}: {r} vs {r7}/{r30}");
        }
        assert_eq!(d.label.param("period2"), Some(30.0));
    }

    #[test]
    fn short_series_use_short_periods() {
        let mut rng = rng_from(2);
        let d = gen_seasonality(SeasonalPattern::Multiple, 40, None, &mut rng).unwrap();
        assert_eq!(d.label.param("period2"), Some(14.0));
        let d = gen_seasonality(SeasonalPattern::Fixed, 40, None, &mut rng).unwrap();
        assert_eq!(d.label.param("period"), Some(7.0));
    }

    #[test]
    fn varying_amplitude_maps_to_fixed_period() {
        let mut rng = rng_from(5);
        let d = gen_seasonality(SeasonalPattern::VaryingAmplitude, 100, None, &mut rng).unwrap();
        assert_eq!(d.label.sub_feature, SubFeature::FixedPeriod);
        assert_eq!(d.label.variant, "varying_amplitude");
    }

    #[test]
    fn too_short_for_period_errors() {
        assert!(check_period(5, 7.0).is_err());
        assert!(check_period(7, 7.0).is_ok());
    }
}
