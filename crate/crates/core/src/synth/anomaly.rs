//! Spikes, step spikes, level shifts and gaps injected into a smooth baseline.

use rand::Rng;

use super::{sign, uniform, Draft};
use crate::error::{Error, Result};
use crate::numeric::std_dev;
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalyKind {
    None,
    Spike1,
    Spike2,
    Spike3,
    StepSpike,
    LevelShift,
    TemporalDisruption,
}

impl AnomalyKind {
    pub const ALL: [AnomalyKind; 7] = [
        AnomalyKind::None,
        AnomalyKind::Spike1,
        AnomalyKind::Spike2,
        AnomalyKind::Spike3,
        AnomalyKind::StepSpike,
        AnomalyKind::LevelShift,
        AnomalyKind::TemporalDisruption,
    ];

    pub fn variant(self) -> &'static str {
        match self {
            AnomalyKind::None => "none",
            AnomalyKind::Spike1 => "spike1",
            AnomalyKind::Spike2 => "spike2",
            AnomalyKind::Spike3 => "spike3",
            AnomalyKind::StepSpike => "step_spike",
            AnomalyKind::LevelShift => "level_shift",
            AnomalyKind::TemporalDisruption => "temporal_disruption",
        }
    }

    pub fn sub_feature(self) -> SubFeature {
        match self {
            AnomalyKind::None => SubFeature::None,
            AnomalyKind::Spike1 | AnomalyKind::Spike2 | AnomalyKind::Spike3 => SubFeature::Spike,
            AnomalyKind::StepSpike | AnomalyKind::LevelShift => SubFeature::LevelShift,
            AnomalyKind::TemporalDisruption => SubFeature::TemporalDisruption,
        }
    }
}

/// Optional fixed placement for the injected anomaly.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnomalyOverrides {
    pub position: Option<usize>,
    /// Signed magnitude of spikes, step spikes and level shifts.
    pub magnitude: Option<f64>,
    pub width: Option<usize>,
}

/// Level + slow sine + bounded uniform noise.
///
/// Noise is uniform so the first differences of an anomaly-free series
/// stay within three standard deviations.
fn baseline<R: Rng + ?Sized>(n: usize, rng: &mut R, label: &mut FeatureLabel) -> Vec<f64> {
    let level = uniform(rng, 50.0, 150.0);
    let half_width = uniform(rng, 0.5, 2.0);
    let wave_amp = 0.5 * half_width;
    let wave_period = uniform(rng, 30.0, 60.0);
    let phase = uniform(rng, 0.0, std::f64::consts::TAU);
    label.set("level", level);
    label.set("noise_half_width", half_width);
    label.set("wave_amplitude", wave_amp);
    label.set("wave_period", wave_period);
    (0..n)
        .map(|t| {
            let wave = wave_amp * (std::f64::consts::TAU * t as f64 / wave_period + phase).sin();
            level + wave + uniform(rng, -half_width, half_width)
        })
        .collect()
}

/// Magnitude that makes an injected deviation dominate the baseline:
/// at least five baseline standard deviations and 1.2 times its range.
fn dominant_magnitude<R: Rng + ?Sized>(base: &[f64], rng: &mut R) -> f64 {
    let sd = std_dev(base);
    let lo = base.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = base.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = uniform(rng, 5.0, 10.0);
    sign(rng) * (k * sd).max(1.2 * (hi - lo))
}

pub fn gen_anomaly<R: Rng + ?Sized>(
    kind: AnomalyKind,
    n: usize,
    overrides: AnomalyOverrides,
    rng: &mut R,
) -> Result<Draft> {
    if n < 10 {
        return Err(Error::Generation(format!("anomaly series needs n >= 10, got {n}")));
    }
    let mut label = FeatureLabel::new(Feature::Anomaly, kind.sub_feature(), kind.variant());
    let base = baseline(n, rng, &mut label);
    let mut values: Vec<Option<f64>> = base.iter().copied().map(Some).collect();

    let max_window = (n / 5).max(3);
    let window = |rng: &mut R| -> Result<usize> {
        let w = overrides.width.unwrap_or_else(|| rng.random_range(3..=max_window));
        if w >= n {
            return Err(Error::Generation(format!("window {w} longer than series {n}")));
        }
        Ok(w)
    };

    match kind {
        AnomalyKind::None => {}
        AnomalyKind::Spike1 | AnomalyKind::Spike2 | AnomalyKind::Spike3 => {
            let count = match kind {
                AnomalyKind::Spike1 => 1,
                AnomalyKind::Spike2 => 2,
                _ => 3,
            };
            let m = overrides.magnitude.unwrap_or_else(|| dominant_magnitude(&base, rng));
            let pos = overrides
                .position
                .unwrap_or_else(|| rng.random_range(1..n - count));
            if pos + count > n {
                return Err(Error::Generation("spike beyond series end".into()));
            }
            for k in 0..count {
                values[pos + k] = Some(base[pos + k] + m);
                label.set(&format!("position_{k}"), (pos + k) as f64);
            }
            label.set("magnitude", m);
        }
        AnomalyKind::StepSpike => {
            let w = window(rng)?;
            let m = overrides.magnitude.unwrap_or_else(|| dominant_magnitude(&base, rng));
            let start = overrides
                .position
                .unwrap_or_else(|| rng.random_range(1..n - w));
            if start + w > n {
                return Err(Error::Generation("step spike beyond series end".into()));
            }
            for v in &mut values[start..start + w] {
                *v = v.map(|x| x + m);
            }
            label.set("start", start as f64);
            label.set("width", w as f64);
            label.set("magnitude", m);
        }
        AnomalyKind::LevelShift => {
            let k = overrides
                .position
                .unwrap_or_else(|| rng.random_range(n / 4..=3 * n / 4));
            if k == 0 || k >= n {
                return Err(Error::Generation(format!("shift index {k} out of range")));
            }
            let d = overrides.magnitude.unwrap_or_else(|| dominant_magnitude(&base, rng));
            for v in &mut values[k..] {
                *v = v.map(|x| x + d);
            }
            label.set("start", k as f64);
            label.set("magnitude", d);
        }
        AnomalyKind::TemporalDisruption => {
            let w = window(rng)?;
            let start = overrides
                .position
                .unwrap_or_else(|| rng.random_range(1..n - w));
            if start + w > n {
                return Err(Error::Generation("disruption beyond series end".into()));
            }
            for v in &mut values[start..start + w] {
                *v = None;
            }
            label.set("start", start as f64);
            label.set("width", w as f64);
        }
    }
    Ok(Draft {
        values,
        values2: None,
        label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{argmax, diff, mean, z_scores};
    use crate::seed::rng_from;

    #[test]
    fn clean_baseline_has_no_large_jumps() {
        for seed in 0..300 {
            let mut rng = rng_from(seed);
            let n = 30 + (seed as usize % 121);
            let d = gen_anomaly(AnomalyKind::None, n, Default::default(), &mut rng).unwrap();
            let z = z_scores(&diff(&d.observed()));
            let max = z.iter().fold(0.0f64, |m, z| m.max(z.abs()));
            assert!(max < 3.0, "seed {seed}: max |z| {max}");
        }
    }

    #[test]
    fn single_positive_spike_is_argmax() {
        let mut rng = rng_from(4);
        let over = AnomalyOverrides {
            position: Some(17),
            ..Default::default()
        };
        let mut found = false;
        for _ in 0..20 {
            let d = gen_anomaly(AnomalyKind::Spike1, 60, over, &mut rng).unwrap();
            if d.label.param("magnitude").unwrap() > 0.0 {
                assert_eq!(argmax(&d.observed()), Some(17));
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn level_shift_moves_segment_mean() {
        let mut rng = rng_from(9);
        let over = AnomalyOverrides {
            position: Some(50),
            magnitude: Some(12.0),
            ..Default::default()
        };
        let d = gen_anomaly(AnomalyKind::LevelShift, 120, over, &mut rng).unwrap();
        let v = d.observed();
        let delta = mean(&v[50..]) - mean(&v[..50]);
        // baseline wave and noise bounded by 1.5 * half width <= 3
        assert!((delta - 12.0).abs() < 3.0, "{delta}");
    }

    #[test]
    fn disruption_leaves_gap() {
        let mut rng = rng_from(2);
        let d = gen_anomaly(AnomalyKind::TemporalDisruption, 80, Default::default(), &mut rng).unwrap();
        let start = d.label.param("start").unwrap() as usize;
        let width = d.label.param("width").unwrap() as usize;
        assert!(d.values[start..start + width].iter().all(Option::is_none));
        assert_eq!(d.values.iter().filter(|v| v.is_none()).count(), width);
    }

    #[test]
    fn oversized_window_errors() {
        let mut rng = rng_from(2);
        let over = AnomalyOverrides {
            width: Some(40),
            ..Default::default()
        };
        assert!(gen_anomaly(AnomalyKind::TemporalDisruption, 30, over, &mut rng).is_err());
        assert!(gen_anomaly(AnomalyKind::Spike1, 9, Default::default(), &mut rng).is_err());
    }

    #[test]
    fn spikes_dominate_baseline() {
        for seed in 0..200 {
            let mut rng = rng_from(seed);
            for kind in [AnomalyKind::Spike1, AnomalyKind::Spike2, AnomalyKind::Spike3] {
                let d = gen_anomaly(kind, 30 + seed as usize % 100, Default::default(), &mut rng).unwrap();
                let v = d.observed();
                let pos = d.label.param("position_0").unwrap() as usize;
                let m = d.label.param("magnitude").unwrap();
                let extreme = if m > 0.0 {
                    crate::numeric::argmax(&v)
                } else {
                    crate::numeric::argmin(&v)
                }
                .unwrap();
                let count = match kind {
                    AnomalyKind::Spike1 => 1,
                    AnomalyKind::Spike2 => 2,
                    _ => 3,
                };
                assert!((pos..pos + count).contains(&extreme), "seed {seed} {kind:?}");
            }
        }
    }
}
