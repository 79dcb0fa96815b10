//! Whole-dataset generation with per-sample seeds and class balancing.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::anomaly::{gen_anomaly, AnomalyKind};
use super::breaks::{gen_structural_break, BreakKind};
use super::multi::{draw_rho, gen_correlated_pair, gen_cross_correlated_pair, gen_dcc_pair, Regime};
use super::positional::{gen_positional, POSITIONAL_SAMPLES};
use super::seasonality::{gen_no_seasonality, gen_seasonality, SeasonalPattern};
use super::stationarity::{gen_stat_properties, StatKind};
use super::trend::{gen_no_trend, gen_trend, Direction, TrendShape};
use super::volatility::{gen_volatility, VolatilityMode};
use super::{draw_start_date, uniform, Draft};
use crate::describe::{qualitative_description, quantitative_description};
use crate::error::{Error, Result};
use crate::sample::AnnotatedSample;
use crate::seed::sample_rng;
use crate::taxonomy::{DatasetKind, Split};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    /// Inclusive bounds on series length.
    pub length_range: (usize, usize),
    pub base_seed: u64,
    /// Overrides the family default noise level where a family has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_std: Option<f64>,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            length_range: (30, 150),
            base_seed: 0,
            noise_std: None,
        }
    }
}

impl GenConfig {
    pub fn check(&self) -> Result<()> {
        let (lo, hi) = self.length_range;
        if lo < 4 || lo > hi {
            return Err(Error::Domain(format!("invalid length range [{lo}, {hi}]")));
        }
        if let Some(s) = self.noise_std {
            if !(s >= 0.0) {
                return Err(Error::Domain(format!("noise_std must be >= 0, got {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl Default for SplitSizes {
    fn default() -> Self {
        Self {
            train: 5000,
            validation: 2000,
            test: 200,
        }
    }
}

impl SplitSizes {
    pub fn get(&self, split: Split) -> usize {
        match split {
            Split::Train => self.train,
            Split::Validation => self.validation,
            Split::Test => self.test,
        }
    }

    pub fn only(split: Split, count: usize) -> Self {
        let mut s = Self {
            train: 0,
            validation: 0,
            test: 0,
        };
        match split {
            Split::Train => s.train = count,
            Split::Validation => s.validation = count,
            Split::Test => s.test = count,
        }
        s
    }
}

/// One generator configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Recipe {
    Trend(Option<(Direction, TrendShape)>),
    Seasonal(Option<SeasonalPattern>),
    Anomaly(AnomalyKind),
    Volatility(VolatilityMode),
    Break(BreakKind),
    Stat(StatKind),
    /// Sign of rho; 0 for the uncorrelated control.
    Correlation(i8),
    Cross { sign: i8, lagged: bool },
    Dcc(Regime),
}

/// Recipes grouped by class. Sample `i` uses class `i % classes` and,
/// within it, variant `(i / classes) % variants`.
fn recipe_groups(kind: DatasetKind) -> Vec<Vec<Recipe>> {
    use Recipe::*;
    match kind {
        DatasetKind::Trend => vec![
            vec![
                Trend(Some((Direction::Up, TrendShape::Linear))),
                Trend(Some((Direction::Up, TrendShape::Quadratic))),
            ],
            vec![
                Trend(Some((Direction::Down, TrendShape::Linear))),
                Trend(Some((Direction::Down, TrendShape::Quadratic))),
            ],
            vec![Trend(None)],
        ],
        DatasetKind::Seasonality => vec![
            vec![
                Seasonal(Some(SeasonalPattern::Fixed)),
                Seasonal(Some(SeasonalPattern::VaryingAmplitude)),
            ],
            vec![Seasonal(Some(SeasonalPattern::ShiftingPeriod))],
            vec![Seasonal(Some(SeasonalPattern::Multiple))],
            vec![Seasonal(None)],
        ],
        // every kind equally often
        DatasetKind::Anomaly => AnomalyKind::ALL.iter().map(|k| vec![Anomaly(*k)]).collect(),
        DatasetKind::Volatility => vec![
            vec![Volatility(VolatilityMode::Constant)],
            vec![Volatility(VolatilityMode::Increasing)],
            vec![Volatility(VolatilityMode::ClusteredGarch)],
            vec![Volatility(VolatilityMode::Leverage)],
            vec![Volatility(VolatilityMode::None)],
        ],
        DatasetKind::StructuralBreak => vec![
            BreakKind::REGIME_SHIFTS.iter().map(|k| Break(*k)).collect(),
            BreakKind::PARAMETER_SHIFTS.iter().map(|k| Break(*k)).collect(),
            vec![Break(BreakKind::None)],
        ],
        DatasetKind::Stationarity => StatKind::STATIONARITY.iter().map(|k| vec![Stat(*k)]).collect(),
        DatasetKind::FatTails => StatKind::FAT_TAILS.iter().map(|k| vec![Stat(*k)]).collect(),
        DatasetKind::Correlation => vec![vec![Correlation(1)], vec![Correlation(-1)], vec![Correlation(0)]],
        DatasetKind::CrossCorrelation => vec![
            vec![Cross { sign: 1, lagged: false }],
            vec![Cross { sign: 1, lagged: true }],
            vec![Cross { sign: -1, lagged: false }],
            vec![Cross { sign: -1, lagged: true }],
            vec![Cross { sign: 0, lagged: false }],
        ],
        DatasetKind::DynamicCorrelation => vec![vec![Dcc(Regime::FirstHalf)], vec![Dcc(Regime::SecondHalf)]],
        _ => Vec::new(),
    }
}

fn recipe_for(kind: DatasetKind, index: usize) -> Recipe {
    let groups = recipe_groups(kind);
    let group = &groups[index % groups.len()];
    group[(index / groups.len()) % group.len()]
}

/// Minimum length a recipe can be generated at.
fn min_length(kind: DatasetKind) -> usize {
    match kind {
        DatasetKind::DynamicCorrelation => 40,
        DatasetKind::StructuralBreak => 20,
        DatasetKind::Anomaly => 10,
        _ => 4,
    }
}

fn run_recipe<R: Rng + ?Sized>(recipe: Recipe, n: usize, noise: Option<f64>, rng: &mut R) -> Result<Draft> {
    match recipe {
        Recipe::Trend(Some((dir, shape))) => Ok(gen_trend(
            dir,
            shape,
            n,
            Default::default(),
            noise.unwrap_or(0.0),
            rng,
        )),
        Recipe::Trend(None) => {
            let sd = noise.unwrap_or_else(|| uniform(rng, 1.0, 5.0));
            Ok(gen_no_trend(n, sd, rng))
        }
        Recipe::Seasonal(Some(p)) => gen_seasonality(p, n, noise, rng),
        Recipe::Seasonal(None) => Ok(gen_no_seasonality(n, noise, rng)),
        Recipe::Anomaly(k) => gen_anomaly(k, n, Default::default(), rng),
        Recipe::Volatility(m) => Ok(gen_volatility(m, n, rng)),
        Recipe::Break(k) => gen_structural_break(k, n, Default::default(), rng),
        Recipe::Stat(k) => gen_stat_properties(k, n, Default::default(), rng),
        Recipe::Correlation(sign) => {
            let rho = draw_rho(rng).abs() * sign as f64;
            gen_correlated_pair(rho, n, rng)
        }
        Recipe::Cross { sign, lagged } => {
            let rho = draw_rho(rng).abs() * sign as f64;
            let lag = if lagged {
                let max = ((n - 1) / 4).clamp(1, 10);
                rng.random_range(1..=max)
            } else {
                0
            };
            gen_cross_correlated_pair(rho, lag, n, rng)
        }
        Recipe::Dcc(regime) => {
            let rho = draw_rho(rng);
            gen_dcc_pair(regime, rho, n, rng)
        }
    }
}

/// Seed index of sample `i` in `split`; splits never share seeds.
fn seed_index(split: Split, i: usize) -> u64 {
    ((split as u64) << 32) | i as u64
}

fn assemble(
    kind: DatasetKind,
    split: Split,
    index: usize,
    draft: Draft,
    rng: &mut impl Rng,
) -> Result<AnnotatedSample> {
    let start = draw_start_date(rng);
    let (series, label) = draft.into_series(start);
    let mut sample = AnnotatedSample {
        id: format!("{kind}-{split}-{index:05}"),
        dataset_kind: kind,
        split,
        series,
        label,
        qualitative: String::new(),
        quantitative: String::new(),
    };
    sample.qualitative = qualitative_description(&sample, rng.random())?;
    sample.quantitative = quantitative_description(&sample);
    Ok(sample)
}

/// Sample `index` of `split` for a feature dataset.
pub fn gen_sample(kind: DatasetKind, split: Split, index: usize, config: &GenConfig) -> Result<AnnotatedSample> {
    if kind.is_positional() {
        return gen_positional_sample(kind, index, config.base_seed);
    }
    let mut rng = sample_rng(config.base_seed, kind, seed_index(split, index));
    let (lo, hi) = config.length_range;
    let lo = lo.max(min_length(kind));
    if lo > hi {
        return Err(Error::Domain(format!(
            "{kind} needs series of at least {lo} points, length range ends at {hi}"
        )));
    }
    let n = rng.random_range(lo..=hi);
    let draft = run_recipe(recipe_for(kind, index), n, config.noise_std, &mut rng)?;
    assemble(kind, split, index, draft, &mut rng)
}

fn gen_positional_sample(kind: DatasetKind, index: usize, base_seed: u64) -> Result<AnnotatedSample> {
    let mut rng = sample_rng(base_seed, kind, seed_index(Split::Test, index));
    let draft = gen_positional(kind, index, &mut rng)?;
    assemble(kind, Split::Test, index, draft, &mut rng)
}

/// All samples of one split, in index order.
pub fn gen_split(kind: DatasetKind, split: Split, count: usize, config: &GenConfig) -> Result<Vec<AnnotatedSample>> {
    config.check()?;
    (0..count)
        .into_par_iter()
        .map(|i| gen_sample(kind, split, i, config))
        .collect()
}

/// Every split of a dataset: train, then validation, then test.
///
/// Positional datasets ignore `sizes` and return their fixed 400 samples,
/// all in the test split.
pub fn gen_dataset(kind: DatasetKind, sizes: SplitSizes, config: &GenConfig) -> Result<Vec<AnnotatedSample>> {
    config.check()?;
    if kind.is_positional() {
        return (0..POSITIONAL_SAMPLES)
            .into_par_iter()
            .map(|i| gen_positional_sample(kind, i, config.base_seed))
            .collect();
    }
    let mut out = Vec::with_capacity(sizes.train + sizes.validation + sizes.test);
    for split in Split::ALL {
        out.extend(gen_split(kind, split, sizes.get(split), config)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::validate;
    use crate::taxonomy::SubFeature;
    use std::collections::HashMap;

    #[test]
    fn anomaly_kinds_balanced() {
        let cfg = GenConfig::default();
        let test = gen_split(DatasetKind::Anomaly, Split::Test, 200, &cfg).unwrap();
        let mut counts: HashMap<String, usize> = HashMap::new();
        for s in &test {
            *counts.entry(s.label.variant.clone()).or_default() += 1;
        }
        assert_eq!(counts.len(), 7);
        assert!(counts.values().all(|c| *c == 28 || *c == 29), "{counts:?}");
    }

    #[test]
    fn lengths_in_range_and_samples_valid() {
        let cfg = GenConfig {
            base_seed: 3,
            ..Default::default()
        };
        for kind in DatasetKind::FEATURE_DATASETS {
            let samples = gen_split(kind, Split::Test, 40, &cfg).unwrap();
            for s in &samples {
                assert!((30..=150).contains(&s.series.len()), "{}", s.id);
                assert!(validate(s).is_empty(), "{}: {:?}", s.id, validate(s));
                assert_eq!(s.label.feature, kind.feature());
            }
        }
    }

    #[test]
    fn control_class_included() {
        let cfg = GenConfig::default();
        let test = gen_split(DatasetKind::Trend, Split::Test, 30, &cfg).unwrap();
        let none = test.iter().filter(|s| s.label.sub_feature == SubFeature::None).count();
        assert_eq!(none, 10);
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig {
            base_seed: 11,
            ..Default::default()
        };
        let a = gen_split(DatasetKind::Volatility, Split::Validation, 25, &cfg).unwrap();
        let b = gen_split(DatasetKind::Volatility, Split::Validation, 25, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = GenConfig {
            length_range: (3, 10),
            ..Default::default()
        };
        assert!(gen_split(DatasetKind::Trend, Split::Test, 1, &cfg).is_err());
        let cfg = GenConfig {
            length_range: (30, 35),
            ..Default::default()
        };
        assert!(gen_split(DatasetKind::DynamicCorrelation, Split::Test, 1, &cfg).is_err());
    }
}
