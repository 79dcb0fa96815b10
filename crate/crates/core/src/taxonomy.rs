//! Feature taxonomy: features, their sub-categories, and the datasets that carry them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Trend,
    Seasonality,
    Anomaly,
    Volatility,
    StructuralBreak,
    Stationarity,
    FatTails,
    Correlation,
    CrossCorrelation,
    DynamicCorrelation,
    /// Position-controlled series used for position-bias runs.
    Position,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubFeature {
    /// Control class: the feature is absent.
    None,
    Up,
    Down,
    FixedPeriod,
    ShiftingPeriod,
    Multiple,
    Spike,
    LevelShift,
    TemporalDisruption,
    Constant,
    Trending,
    Clustered,
    Dynamic,
    RegimeChange,
    ParameterShift,
    Stationary,
    TrendChange,
    VarianceChange,
    Seasonal,
    TrendAndSeasonal,
    FatTailed,
    ThinTailed,
    Positive,
    Negative,
    Direct,
    DirectLagged,
    Inverse,
    InverseLagged,
    FirstHalf,
    SecondHalf,
    MaxTarget,
    MinTarget,
}

impl Feature {
    pub const ALL: [Feature; 11] = [
        Feature::Trend,
        Feature::Seasonality,
        Feature::Anomaly,
        Feature::Volatility,
        Feature::StructuralBreak,
        Feature::Stationarity,
        Feature::FatTails,
        Feature::Correlation,
        Feature::CrossCorrelation,
        Feature::DynamicCorrelation,
        Feature::Position,
    ];

    /// Every sub-category a label of this feature may carry.
    pub fn sub_features(self) -> &'static [SubFeature] {
        use SubFeature::*;
        match self {
            Feature::Trend => &[Up, Down, None],
            Feature::Seasonality => &[FixedPeriod, ShiftingPeriod, Multiple, None],
            Feature::Anomaly => &[Spike, LevelShift, TemporalDisruption, None],
            Feature::Volatility => &[Constant, Trending, Clustered, Dynamic, None],
            Feature::StructuralBreak => &[RegimeChange, ParameterShift, None],
            Feature::Stationarity => &[
                Stationary,
                TrendChange,
                VarianceChange,
                Seasonal,
                TrendAndSeasonal,
            ],
            Feature::FatTails => &[FatTailed, ThinTailed],
            Feature::Correlation => &[Positive, Negative, None],
            Feature::CrossCorrelation => &[Direct, DirectLagged, Inverse, InverseLagged, None],
            Feature::DynamicCorrelation => &[FirstHalf, SecondHalf],
            Feature::Position => &[MaxTarget, MinTarget],
        }
    }

    /// Classification options in the fixed order presented to solvers.
    /// Empty when the feature has no classification question.
    pub fn class_options(self) -> &'static [SubFeature] {
        use SubFeature::*;
        match self {
            Feature::Trend => &[Up, Down],
            Feature::Seasonality => &[FixedPeriod, ShiftingPeriod, Multiple],
            Feature::Anomaly => &[Spike, LevelShift, TemporalDisruption],
            Feature::Volatility => &[Constant, Trending, Clustered, Dynamic],
            Feature::StructuralBreak => &[RegimeChange, ParameterShift],
            Feature::Stationarity => &[TrendChange, VarianceChange, Seasonal, TrendAndSeasonal],
            Feature::Correlation => &[Positive, Negative],
            Feature::CrossCorrelation => &[Direct, DirectLagged, Inverse, InverseLagged],
            Feature::FatTails | Feature::DynamicCorrelation | Feature::Position => &[],
        }
    }

    pub fn has_detection(self) -> bool {
        !matches!(self, Feature::DynamicCorrelation | Feature::Position)
    }

    pub fn is_multivariate(self) -> bool {
        matches!(
            self,
            Feature::Correlation | Feature::CrossCorrelation | Feature::DynamicCorrelation
        )
    }

    /// The literal yes/no answer to this feature's detection question.
    ///
    /// Most questions ask whether the feature is present. The stationarity
    /// question asks whether the series *is* stationary, and the fat-tails
    /// question whether tails are fat, so their "yes" classes differ.
    pub fn detection_answer(self, sub: SubFeature) -> bool {
        match self {
            Feature::Stationarity => sub == SubFeature::Stationary,
            Feature::FatTails => sub == SubFeature::FatTailed,
            _ => sub != SubFeature::None,
        }
    }

    /// Detection answer after which the classification follow-up is issued.
    pub fn follow_up_answer(self) -> bool {
        !matches!(self, Feature::Stationarity)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Trend => "trend",
            Feature::Seasonality => "seasonality",
            Feature::Anomaly => "anomaly",
            Feature::Volatility => "volatility",
            Feature::StructuralBreak => "structural_break",
            Feature::Stationarity => "stationarity",
            Feature::FatTails => "fat_tails",
            Feature::Correlation => "correlation",
            Feature::CrossCorrelation => "cross_correlation",
            Feature::DynamicCorrelation => "dynamic_correlation",
            Feature::Position => "position",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl SubFeature {
    pub fn as_str(self) -> &'static str {
        use SubFeature::*;
        match self {
            None => "none",
            Up => "up",
            Down => "down",
            FixedPeriod => "fixed_period",
            ShiftingPeriod => "shifting_period",
            Multiple => "multiple",
            Spike => "spike",
            LevelShift => "level_shift",
            TemporalDisruption => "temporal_disruption",
            Constant => "constant",
            Trending => "trending",
            Clustered => "clustered",
            Dynamic => "dynamic",
            RegimeChange => "regime_change",
            ParameterShift => "parameter_shift",
            Stationary => "stationary",
            TrendChange => "trend_change",
            VarianceChange => "variance_change",
            Seasonal => "seasonal",
            TrendAndSeasonal => "trend_and_seasonal",
            FatTailed => "fat_tailed",
            ThinTailed => "thin_tailed",
            Positive => "positive",
            Negative => "negative",
            Direct => "direct",
            DirectLagged => "direct_lagged",
            Inverse => "inverse",
            InverseLagged => "inverse_lagged",
            FirstHalf => "first_half",
            SecondHalf => "second_half",
            MaxTarget => "max_target",
            MinTarget => "min_target",
        }
    }
}

impl fmt::Display for SubFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The benchmark datasets. The first ten carry one taxonomy feature each;
/// the rest are the position-controlled series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Trend,
    Seasonality,
    Anomaly,
    Volatility,
    StructuralBreak,
    Stationarity,
    FatTails,
    Correlation,
    CrossCorrelation,
    DynamicCorrelation,
    Brownian,
    Outlier,
    Monotone,
    MonotoneNoise,
    Sinusoidal,
}

impl DatasetKind {
    pub const FEATURE_DATASETS: [DatasetKind; 10] = [
        DatasetKind::Trend,
        DatasetKind::Seasonality,
        DatasetKind::Anomaly,
        DatasetKind::Volatility,
        DatasetKind::StructuralBreak,
        DatasetKind::Stationarity,
        DatasetKind::FatTails,
        DatasetKind::Correlation,
        DatasetKind::CrossCorrelation,
        DatasetKind::DynamicCorrelation,
    ];

    pub const POSITIONAL: [DatasetKind; 5] = [
        DatasetKind::Brownian,
        DatasetKind::Outlier,
        DatasetKind::Monotone,
        DatasetKind::MonotoneNoise,
        DatasetKind::Sinusoidal,
    ];

    pub fn feature(self) -> Feature {
        match self {
            DatasetKind::Trend => Feature::Trend,
            DatasetKind::Seasonality => Feature::Seasonality,
            DatasetKind::Anomaly => Feature::Anomaly,
            DatasetKind::Volatility => Feature::Volatility,
            DatasetKind::StructuralBreak => Feature::StructuralBreak,
            DatasetKind::Stationarity => Feature::Stationarity,
            DatasetKind::FatTails => Feature::FatTails,
            DatasetKind::Correlation => Feature::Correlation,
            DatasetKind::CrossCorrelation => Feature::CrossCorrelation,
            DatasetKind::DynamicCorrelation => Feature::DynamicCorrelation,
            _ => Feature::Position,
        }
    }

    pub fn is_positional(self) -> bool {
        self.feature() == Feature::Position
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Trend => "trend",
            DatasetKind::Seasonality => "seasonality",
            DatasetKind::Anomaly => "anomaly",
            DatasetKind::Volatility => "volatility",
            DatasetKind::StructuralBreak => "structural_break",
            DatasetKind::Stationarity => "stationarity",
            DatasetKind::FatTails => "fat_tails",
            DatasetKind::Correlation => "correlation",
            DatasetKind::CrossCorrelation => "cross_correlation",
            DatasetKind::DynamicCorrelation => "dynamic_correlation",
            DatasetKind::Brownian => "brownian",
            DatasetKind::Outlier => "outlier",
            DatasetKind::Monotone => "monotone",
            DatasetKind::MonotoneNoise => "monotone_noise",
            DatasetKind::Sinusoidal => "sinusoidal",
        }
    }

    /// Small stable tag mixed into per-sample seeds.
    pub(crate) fn seed_tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DatasetKind::FEATURE_DATASETS
            .iter()
            .chain(DatasetKind::POSITIONAL.iter())
            .copied()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown dataset kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Validation, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Split::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown split `{s}`")))
    }
}

/// Ground-truth label attached to every generated sample.
///
/// `variant` names the concrete generator recipe (e.g. `quadratic`,
/// `spike2`, `variance`) and `params` every value that recipe drew.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLabel {
    pub feature: Feature,
    pub sub_feature: SubFeature,
    pub variant: String,
    pub params: BTreeMap<String, f64>,
}

impl FeatureLabel {
    pub fn new(feature: Feature, sub_feature: SubFeature, variant: impl Into<String>) -> Self {
        Self {
            feature,
            sub_feature,
            variant: variant.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn set(&mut self, key: &str, value: f64) {
        self.params.insert(key.to_string(), value);
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn is_consistent(&self) -> bool {
        self.feature.sub_features().contains(&self.sub_feature)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_options_are_sub_features() {
        for f in Feature::ALL {
            for s in f.class_options() {
                assert!(f.sub_features().contains(s), "{f} / {s}");
                assert_ne!(*s, SubFeature::None);
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in DatasetKind::FEATURE_DATASETS.iter().chain(&DatasetKind::POSITIONAL) {
            assert_eq!(k.as_str().parse::<DatasetKind>().unwrap(), *k);
            let json = serde_json::to_string(k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert!("weather".parse::<DatasetKind>().is_err());
    }

    #[test]
    fn detection_polarity() {
        assert!(Feature::Trend.detection_answer(SubFeature::Up));
        assert!(!Feature::Trend.detection_answer(SubFeature::None));
        assert!(Feature::Stationarity.detection_answer(SubFeature::Stationary));
        assert!(!Feature::Stationarity.detection_answer(SubFeature::TrendChange));
        assert!(!Feature::FatTails.detection_answer(SubFeature::ThinTailed));
    }
}
