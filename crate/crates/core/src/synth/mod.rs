//! Labeled series generators.
//!
//! Each generator returns a [`Draft`]: the raw channel values plus the
//! ground-truth label. [`dataset`] turns drafts into dated, described
//! [`AnnotatedSample`](crate::AnnotatedSample)s.

pub mod anomaly;
pub mod breaks;
pub mod dataset;
pub mod multi;
pub mod positional;
pub mod seasonality;
pub mod stationarity;
pub mod trend;
pub mod volatility;

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::series::{offset_date, TimeSeries};
use crate::taxonomy::FeatureLabel;

pub use dataset::{gen_dataset, gen_sample, gen_split, GenConfig, SplitSizes};

/// Generator output before dates and descriptions are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Draft {
    pub values: Vec<Option<f64>>,
    pub values2: Option<Vec<f64>>,
    pub label: FeatureLabel,
}

impl Draft {
    pub fn dense(values: Vec<f64>, label: FeatureLabel) -> Self {
        Self {
            values: values.into_iter().map(Some).collect(),
            values2: None,
            label,
        }
    }

    pub fn pair(first: Vec<f64>, second: Vec<f64>, label: FeatureLabel) -> Self {
        Self {
            values: first.into_iter().map(Some).collect(),
            values2: Some(second),
            label,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Primary channel, gaps dropped.
    pub fn observed(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn into_series(self, start: NaiveDate) -> (TimeSeries, FeatureLabel) {
        let series = TimeSeries {
            start_date: start,
            frequency: Default::default(),
            values: self.values,
            values2: self.values2,
        };
        (series, self.label)
    }
}

pub(crate) fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub(crate) fn normals<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| normal(rng)).collect()
}

pub(crate) fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

pub(crate) fn sign<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    if rng.random_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Uniform start date in calendar years 2020 through 2024.
pub fn draw_start_date<R: Rng + ?Sized>(rng: &mut R) -> NaiveDate {
    let first = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    let last = NaiveDate::from_ymd_opt(2024, 12, 31).unwrap();
    let span = (last - first).num_days() as usize;
    offset_date(first, rng.random_range(0..=span))
}

/// `A * sin(2*pi*t/period + phase)` for `t = 0..n`.
pub fn sine_wave(n: usize, period: f64, amplitude: f64, phase: f64) -> Vec<f64> {
    (0..n)
        .map(|t| amplitude * (std::f64::consts::TAU * t as f64 / period + phase).sin())
        .collect()
}
