//! Dated numeric series and the quadrant partition used for position analysis.

use std::fmt;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling frequency. Only daily series are produced or accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Frequency {
    #[default]
    Daily,
}

impl Frequency {
    pub fn as_str(self) -> &'static str {
        match self {
            Frequency::Daily => "daily",
        }
    }
}

/// A daily series with one or two channels.
///
/// The primary channel may contain gaps (`None`) for samples that model
/// missing observations. The optional second channel is always dense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub start_date: NaiveDate,
    pub frequency: Frequency,
    pub values: Vec<Option<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values2: Option<Vec<f64>>,
}

impl TimeSeries {
    pub fn new(start_date: NaiveDate, values: Vec<f64>) -> Self {
        Self {
            start_date,
            frequency: Frequency::Daily,
            values: values.into_iter().map(Some).collect(),
            values2: None,
        }
    }

    pub fn with_gaps(start_date: NaiveDate, values: Vec<Option<f64>>) -> Self {
        Self {
            start_date,
            frequency: Frequency::Daily,
            values,
            values2: None,
        }
    }

    pub fn pair(start_date: NaiveDate, first: Vec<f64>, second: Vec<f64>) -> Self {
        let mut series = Self::new(start_date, first);
        series.values2 = Some(second);
        series
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_pair(&self) -> bool {
        self.values2.is_some()
    }

    /// Present observations of the primary channel with their indices.
    pub fn observed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
    }

    /// Primary channel with gaps dropped.
    pub fn dense(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }

    pub fn has_gaps(&self) -> bool {
        self.values.iter().any(Option::is_none)
    }

    pub fn end_date(&self) -> NaiveDate {
        offset_date(self.start_date, self.len().saturating_sub(1))
    }

    pub fn date_at(&self, i: usize) -> Result<NaiveDate> {
        date_at(self, i)
    }

    /// Second channel as a standalone single-channel series.
    pub fn second_channel(&self) -> Option<TimeSeries> {
        self.values2
            .as_ref()
            .map(|v| TimeSeries::new(self.start_date, v.clone()))
    }

    /// Primary channel only.
    pub fn first_channel(&self) -> TimeSeries {
        TimeSeries::with_gaps(self.start_date, self.values.clone())
    }
}

pub(crate) fn offset_date(start: NaiveDate, i: usize) -> NaiveDate {
    start
        .checked_add_days(Days::new(i as u64))
        .expect("date overflow")
}

/// Calendar date of index `i`: `start_date + i` days.
pub fn date_at(series: &TimeSeries, i: usize) -> Result<NaiveDate> {
    if i >= series.len() {
        return Err(Error::Domain(format!(
            "index {i} out of range for series of length {}",
            series.len()
        )));
    }
    Ok(offset_date(series.start_date, i))
}

/// Index of `date` within the series, if it falls inside the date range.
pub fn index_of_date(series: &TimeSeries, date: NaiveDate) -> Option<usize> {
    let offset = (date - series.start_date).num_days();
    (offset >= 0 && (offset as usize) < series.len()).then_some(offset as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    Q1,
    Q2,
    Q3,
    Q4,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::Q1, Quadrant::Q2, Quadrant::Q3, Quadrant::Q4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Quadrant> {
        Self::ALL.get(i).copied()
    }

    /// Half-open index range `[lo, hi)` covered by this quadrant for length `n`.
    pub fn bounds(self, n: usize) -> (usize, usize) {
        let q = self.index();
        // smallest i with floor(4i/n) >= q
        let lo = (q * n).div_ceil(4);
        let hi = if q == 3 { n } else { ((q + 1) * n).div_ceil(4) };
        (lo, hi)
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", self.index() + 1)
    }
}

/// Quadrant of zero-based position `i` in a series of length `n`:
/// `min(3, floor(4i / n))`.
pub fn quadrant_of(i: usize, n: usize) -> Result<Quadrant> {
    if n < 4 {
        return Err(Error::Domain(format!("length {n} too short for quadrants")));
    }
    if i >= n {
        return Err(Error::Domain(format!("index {i} out of range for length {n}")));
    }
    let q = ((4 * i) / n).min(3);
    Ok(Quadrant::from_index(q).expect("q < 4"))
}
