use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formats::format_value;
use crate::series::TimeSeries;
use crate::taxonomy::{DatasetKind, FeatureLabel, Split};

/// A generated series with its label and textual descriptions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedSample {
    pub id: String,
    pub dataset_kind: DatasetKind,
    pub split: Split,
    #[serde(flatten)]
    pub series: TimeSeries,
    pub label: FeatureLabel,
    pub qualitative: String,
    pub quantitative: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptySeries,
    NonFiniteValue { channel: u8, index: usize },
    NoObservedValues,
    ChannelLengthMismatch { first: usize, second: usize },
    LabelMismatch,
    QuantitativeIncomplete(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySeries => write!(f, "empty series"),
            Violation::NonFiniteValue { channel, index } => {
                write!(f, "non-finite value (channel {channel}, index {index})")
            }
            Violation::NoObservedValues => write!(f, "no observed values"),
            Violation::ChannelLengthMismatch { first, second } => {
                write!(f, "channel length mismatch ({first} vs {second})")
            }
            Violation::LabelMismatch => write!(f, "sub-feature does not belong to feature"),
            Violation::QuantitativeIncomplete(what) => {
                write!(f, "quantitative description missing {what}")
            }
        }
    }
}

/// Check every sample invariant. An empty list means the sample is valid.
pub fn validate(sample: &AnnotatedSample) -> Vec<Violation> {
    let mut out = validate_series(&sample.series);
    if !sample.label.is_consistent() {
        out.push(Violation::LabelMismatch);
    }
    if out.is_empty() {
        let s = &sample.series;
        let q = &sample.quantitative;
        if !q.contains(&s.start_date.to_string()) || !q.contains(&s.end_date().to_string()) {
            out.push(Violation::QuantitativeIncomplete("date range"));
        }
        let (min, max) = s
            .observed()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| {
                (lo.min(v), hi.max(v))
            });
        if !q.contains(&format_value(min)) {
            out.push(Violation::QuantitativeIncomplete("minimum"));
        }
        if !q.contains(&format_value(max)) {
            out.push(Violation::QuantitativeIncomplete("maximum"));
        }
    }
    out
}

pub fn validate_series(s: &TimeSeries) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.is_empty() {
        out.push(Violation::EmptySeries);
        return out;
    }
    for (index, v) in s.values.iter().enumerate() {
        if matches!(v, Some(x) if !x.is_finite()) {
            out.push(Violation::NonFiniteValue { channel: 1, index });
        }
    }
    if s.observed().next().is_none() {
        out.push(Violation::NoObservedValues);
    }
    if let Some(second) = &s.values2 {
        if second.len() != s.len() {
            out.push(Violation::ChannelLengthMismatch {
                first: s.len(),
                second: second.len(),
            });
        }
        for (index, x) in second.iter().enumerate() {
            if !x.is_finite() {
                out.push(Violation::NonFiniteValue { channel: 2, index });
            }
        }
    }
    out
}
