//! Distribution and stationarity properties: fat tails, stationary noise,
//! and four kinds of non-stationarity.

use rand::Rng;
use rand_distr::{Distribution, StudentT};

use super::{normal, sign, uniform, Draft};
use crate::error::{Error, Result};
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    FatTailed,
    ThinTailed,
    Stationary,
    NonstatMean,
    NonstatVariance,
    NonstatSeasonal,
    NonstatTrendSeasonal,
}

impl StatKind {
    pub const FAT_TAILS: [StatKind; 2] = [StatKind::FatTailed, StatKind::ThinTailed];
    pub const STATIONARITY: [StatKind; 5] = [
        StatKind::Stationary,
        StatKind::NonstatMean,
        StatKind::NonstatVariance,
        StatKind::NonstatSeasonal,
        StatKind::NonstatTrendSeasonal,
    ];

    pub fn variant(self) -> &'static str {
        match self {
            StatKind::FatTailed => "fat_tailed",
            StatKind::ThinTailed => "thin_tailed",
            StatKind::Stationary => "stationary",
            StatKind::NonstatMean => "nonstat_mean",
            StatKind::NonstatVariance => "nonstat_variance",
            StatKind::NonstatSeasonal => "nonstat_seasonal",
            StatKind::NonstatTrendSeasonal => "nonstat_trend_seasonal",
        }
    }

    pub fn feature(self) -> Feature {
        match self {
            StatKind::FatTailed | StatKind::ThinTailed => Feature::FatTails,
            _ => Feature::Stationarity,
        }
    }

    pub fn sub_feature(self) -> SubFeature {
        match self {
            StatKind::FatTailed => SubFeature::FatTailed,
            StatKind::ThinTailed => SubFeature::ThinTailed,
            StatKind::Stationary => SubFeature::Stationary,
            StatKind::NonstatMean => SubFeature::TrendChange,
            StatKind::NonstatVariance => SubFeature::VarianceChange,
            StatKind::NonstatSeasonal => SubFeature::Seasonal,
            StatKind::NonstatTrendSeasonal => SubFeature::TrendAndSeasonal,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StatOverrides {
    /// Student-t degrees of freedom for fat-tailed draws.
    pub nu: Option<f64>,
}

pub fn gen_stat_properties<R: Rng + ?Sized>(
    kind: StatKind,
    n: usize,
    overrides: StatOverrides,
    rng: &mut R,
) -> Result<Draft> {
    let mut label = FeatureLabel::new(kind.feature(), kind.sub_feature(), kind.variant());
    let values: Vec<f64> = match kind {
        StatKind::FatTailed => {
            let nu = overrides.nu.unwrap_or_else(|| uniform(rng, 2.5, 4.0));
            let dist = StudentT::new(nu)
                .map_err(|e| Error::Domain(format!("degrees of freedom {nu}: {e}")))?;
            label.set("nu", nu);
            (0..n).map(|_| dist.sample(rng)).collect()
        }
        StatKind::ThinTailed | StatKind::Stationary => (0..n).map(|_| normal(rng)).collect(),
        StatKind::NonstatMean => {
            let drift = sign(rng) * uniform(rng, 5.0, 10.0);
            label.set("total_drift", drift);
            (0..n)
                .map(|t| drift * t as f64 / n as f64 + normal(rng))
                .collect()
        }
        StatKind::NonstatVariance => {
            let growth = uniform(rng, 3.0, 6.0);
            label.set("std_growth", growth);
            (0..n)
                .map(|t| (1.0 + growth * t as f64 / n as f64) * normal(rng))
                .collect()
        }
        StatKind::NonstatSeasonal | StatKind::NonstatTrendSeasonal => {
            let period = if n >= 60 && rng.random_bool(0.5) { 30.0 } else { 7.0 };
            let amp = uniform(rng, 2.0, 5.0);
            let drift = if kind == StatKind::NonstatTrendSeasonal {
                sign(rng) * uniform(rng, 5.0, 10.0)
            } else {
                0.0
            };
            label.set("period", period);
            label.set("amplitude", amp);
            if kind == StatKind::NonstatTrendSeasonal {
                label.set("total_drift", drift);
            }
            (0..n)
                .map(|t| {
                    let x = t as f64;
                    drift * x / n as f64
                        + amp * (std::f64::consts::TAU * x / period).sin()
                        + 0.5 * normal(rng)
                })
                .collect()
        }
    };
    Ok(Draft::dense(values, label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{excess_kurtosis, mean, variance};
    use crate::seed::rng_from;

    #[test]
    fn stationary_mean_near_zero() {
        for seed in 0..50 {
            let mut rng = rng_from(seed);
            let n = 150;
            let d = gen_stat_properties(StatKind::Stationary, n, Default::default(), &mut rng).unwrap();
            assert!(mean(&d.observed()).abs() < 4.0 / (n as f64).sqrt());
        }
    }

    #[test]
    fn student_t_three_has_heavy_tails() {
        let mut rng = rng_from(99);
        let over = StatOverrides { nu: Some(3.0) };
        let d = gen_stat_properties(StatKind::FatTailed, 5000, over, &mut rng).unwrap();
        assert!(excess_kurtosis(&d.observed()) > 1.0);
    }

    #[test]
    fn changing_mean_halves_differ() {
        for seed in 0..50 {
            let mut rng = rng_from(seed);
            let d = gen_stat_properties(StatKind::NonstatMean, 100, Default::default(), &mut rng).unwrap();
            let v = d.observed();
            let (a, b) = v.split_at(50);
            let se = (variance(a) / 50.0 + variance(b) / 50.0).sqrt();
            assert!((mean(a) - mean(b)).abs() > 3.0 * se, "seed {seed}");
        }
    }

    #[test]
    fn invalid_nu_is_domain_error() {
        let mut rng = rng_from(1);
        let over = StatOverrides { nu: Some(-1.0) };
        assert!(matches!(
            gen_stat_properties(StatKind::FatTailed, 50, over, &mut rng),
            Err(Error::Domain(_))
        ));
    }
}
