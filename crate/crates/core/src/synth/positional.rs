//! Position-controlled series for position-bias runs.
//!
//! Brownian and outlier samples place their extremum in a prescribed
//! quadrant by rejection sampling: sample `i` of 400 targets the maximum
//! for `i < 200` and the minimum otherwise, with 50 samples per quadrant.

use rand::Rng;

use super::{normal, normals, uniform, Draft};
use crate::error::{Error, Result};
use crate::formats::rendered;
use crate::numeric::{argmax, argmin};
use crate::series::{quadrant_of, Quadrant, TimeSeries};
use crate::taxonomy::{DatasetKind, Feature, FeatureLabel, SubFeature};

pub const POSITIONAL_SAMPLES: usize = 400;
pub const POSITIONAL_LENGTH: usize = 175;
pub const REJECTION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Max,
    Min,
}

impl Extremum {
    pub fn sub_feature(self) -> SubFeature {
        match self {
            Extremum::Max => SubFeature::MaxTarget,
            Extremum::Min => SubFeature::MinTarget,
        }
    }

    /// First index of the extremum of the two-decimal rendered values.
    fn locate(self, v: &[f64]) -> usize {
        let r: Vec<f64> = v.iter().map(|x| rendered(*x)).collect();
        match self {
            Extremum::Max => argmax(&r),
            Extremum::Min => argmin(&r),
        }
        .expect("non-empty series")
    }
}

/// Extremum and quadrant assigned to sample `index` of a quadrant-controlled dataset.
pub fn quadrant_target(index: usize) -> (Extremum, Quadrant) {
    let half = POSITIONAL_SAMPLES / 2;
    let i = index % POSITIONAL_SAMPLES;
    let ext = if i < half { Extremum::Max } else { Extremum::Min };
    let q = Quadrant::from_index((i % half) / (half / 4)).expect("quadrant index below 4");
    (ext, q)
}

fn brownian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let start = uniform(rng, 50.0, 150.0);
    let mut x = start;
    normals(rng, n)
        .into_iter()
        .map(|e| {
            let v = x;
            x += e;
            v
        })
        .collect()
}

fn label_for(ext: Extremum, target: usize, n: usize, variant: &str) -> FeatureLabel {
    let q = quadrant_of(target, n).expect("target inside series");
    FeatureLabel::new(Feature::Position, ext.sub_feature(), variant)
        .with("target_index", target as f64)
        .with("quadrant", (q.index() + 1) as f64)
}

/// Sample `index` of positional dataset `kind`.
pub fn gen_positional<R: Rng + ?Sized>(kind: DatasetKind, index: usize, rng: &mut R) -> Result<Draft> {
    let n = POSITIONAL_LENGTH;
    match kind {
        DatasetKind::Brownian => {
            let (ext, q) = quadrant_target(index);
            for _ in 0..REJECTION_BUDGET {
                let v = brownian(n, rng);
                let at = ext.locate(&v);
                if quadrant_of(at, n)? == q {
                    let label = label_for(ext, at, n, "brownian");
                    return Ok(Draft::dense(v, label));
                }
            }
            Err(budget_exceeded(kind, index))
        }
        DatasetKind::Outlier => {
            let (ext, q) = quadrant_target(index);
            let (lo, hi) = q.bounds(n);
            for _ in 0..REJECTION_BUDGET {
                let level = uniform(rng, 50.0, 150.0);
                let sd = uniform(rng, 1.0, 3.0);
                let mut v: Vec<f64> = (0..n).map(|_| level + sd * normal(rng)).collect();
                let pos = rng.random_range(lo..hi);
                let k = uniform(rng, 5.0, 10.0);
                let m = match ext {
                    Extremum::Max => k * sd,
                    Extremum::Min => -k * sd,
                };
                v[pos] += m;
                // the injected point must be the unique global extremum, also after rounding
                let r: Vec<f64> = v.iter().map(|x| rendered(*x)).collect();
                let unique = r.iter().enumerate().all(|(i, x)| {
                    i == pos
                        || match ext {
                            Extremum::Max => *x < r[pos],
                            Extremum::Min => *x > r[pos],
                        }
                });
                if unique {
                    let label = label_for(ext, pos, n, "outlier")
                        .with("magnitude", m)
                        .with("base_std", sd);
                    return Ok(Draft::dense(v, label));
                }
            }
            Err(budget_exceeded(kind, index))
        }
        DatasetKind::Monotone => {
            let increasing = index % POSITIONAL_SAMPLES < POSITIONAL_SAMPLES / 2;
            let start = uniform(rng, 50.0, 150.0);
            let mut x = start;
            let v: Vec<f64> = (0..n)
                .map(|t| {
                    if t > 0 {
                        // steps of at least 0.05 stay strict after two-decimal rounding
                        let step = uniform(rng, 0.05, 2.0);
                        x += if increasing { step } else { -step };
                    }
                    x
                })
                .collect();
            let (ext, variant) = if increasing {
                (Extremum::Max, "increasing")
            } else {
                (Extremum::Min, "decreasing")
            };
            Ok(Draft::dense(v, label_for(ext, n - 1, n, variant)))
        }
        DatasetKind::MonotoneNoise => {
            let increasing = index % POSITIONAL_SAMPLES < POSITIONAL_SAMPLES / 2;
            let slope = if increasing { 0.5 } else { -0.5 };
            let start = uniform(rng, 50.0, 150.0);
            loop {
                let v: Vec<f64> = (0..n)
                    .map(|t| start + slope * t as f64 + normal(rng))
                    .collect();
                let strict = v.windows(2).all(|w| (w[1] > w[0]) == increasing);
                if !strict {
                    let ext = if increasing { Extremum::Max } else { Extremum::Min };
                    let at = ext.locate(&v);
                    let variant = if increasing { "increasing" } else { "decreasing" };
                    let label = label_for(ext, at, n, variant).with("slope", slope);
                    return Ok(Draft::dense(v, label));
                }
            }
        }
        DatasetKind::Sinusoidal => {
            let periods = [7.0, 14.0, 30.0];
            let period = periods[rng.random_range(0..periods.len())];
            let amp = uniform(rng, 5.0, 30.0);
            let offset = uniform(rng, 50.0, 150.0);
            let phase = uniform(rng, 0.0, std::f64::consts::TAU);
            let v: Vec<f64> = (0..n)
                .map(|t| offset + amp * (std::f64::consts::TAU * t as f64 / period + phase).sin())
                .collect();
            let at = Extremum::Max.locate(&v);
            let label = label_for(Extremum::Max, at, n, "sinusoidal")
                .with("period", period)
                .with("amplitude", amp);
            Ok(Draft::dense(v, label))
        }
        other => Err(Error::Domain(format!("`{other}` is not a positional dataset"))),
    }
}

fn budget_exceeded(kind: DatasetKind, index: usize) -> Error {
    Error::Generation(format!(
        "rejection budget of {REJECTION_BUDGET} draws exceeded for {kind} sample {index}"
    ))
}

/// A value to search for in a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchTarget {
    /// Rounded to two decimals, as it appears in a rendered series.
    pub value: f64,
    pub present: bool,
    /// Index of the value when present.
    pub index: Option<usize>,
}

/// Pick a search value tied to `quadrant`.
///
/// Present targets are the rendered value at a random index of the
/// quadrant. Absent targets lie strictly between a quadrant value and the
/// next larger rendered value of the whole series, so they never occur.
pub fn target_for_search<R: Rng + ?Sized>(
    series: &TimeSeries,
    quadrant: Quadrant,
    present: bool,
    rng: &mut R,
) -> Result<SearchTarget> {
    let n = series.len();
    if n < 4 {
        return Err(Error::Domain(format!("search needs at least 4 points, got {n}")));
    }
    let (lo, hi) = quadrant.bounds(n);
    let observed: Vec<usize> = (lo..hi).filter(|&i| series.values[i].is_some()).collect();
    if observed.is_empty() {
        return Err(Error::Domain(format!("no observed values in {quadrant}")));
    }
    if present {
        let i = observed[rng.random_range(0..observed.len())];
        return Ok(SearchTarget {
            value: rendered(series.values[i].unwrap()),
            present: true,
            index: Some(i),
        });
    }
    // work in hundredths so membership is exact
    let mut all: Vec<i64> = series
        .values
        .iter()
        .flatten()
        .map(|v| (rendered(*v) * 100.0).round() as i64)
        .collect();
    all.sort_unstable();
    all.dedup();
    let mut candidates: Vec<i64> = observed
        .iter()
        .filter_map(|&i| {
            let c = (rendered(series.values[i].unwrap()) * 100.0).round() as i64;
            let pos = all.partition_point(|x| *x <= c);
            match all.get(pos) {
                Some(next) if next - c >= 2 => Some(c + (next - c) / 2),
                Some(_) => None,
                None => Some(c + 1 + rng.random_range(0..100)),
            }
        })
        .collect();
    if candidates.is_empty() {
        candidates.push(all.last().unwrap() + 100);
    }
    let pick = candidates[rng.random_range(0..candidates.len())];
    Ok(SearchTarget {
        value: pick as f64 / 100.0,
        present: false,
        index: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;
    use chrono::NaiveDate;

    #[test]
    fn targets_cover_quadrants_evenly() {
        let mut counts = std::collections::HashMap::new();
        for i in 0..POSITIONAL_SAMPLES {
            *counts.entry(quadrant_target(i)).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 8);
        assert!(counts.values().all(|c| *c == 50));
    }

    #[test]
    fn brownian_extremum_lands_in_target() {
        for i in [0usize, 60, 120, 180, 210, 270, 330, 399] {
            let mut rng = rng_from(i as u64);
            let d = gen_positional(DatasetKind::Brownian, i, &mut rng).unwrap();
            let (ext, q) = quadrant_target(i);
            let at = ext.locate(&d.observed());
            assert_eq!(quadrant_of(at, POSITIONAL_LENGTH).unwrap(), q);
        }
    }

    #[test]
    fn monotone_increasing_peaks_last() {
        let mut rng = rng_from(0);
        let d = gen_positional(DatasetKind::Monotone, 3, &mut rng).unwrap();
        let v: Vec<f64> = d.observed().iter().map(|x| rendered(*x)).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(argmax(&v), Some(POSITIONAL_LENGTH - 1));
        let d = gen_positional(DatasetKind::Monotone, 250, &mut rng).unwrap();
        assert!(d.observed().windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn search_targets() {
        let mut rng = rng_from(5);
        let d = gen_positional(DatasetKind::Monotone, 1, &mut rng).unwrap();
        let (s, _) = d.into_series(NaiveDate::from_ymd_opt(2020, 1, 1).unwrap());
        let rendered_vals: Vec<f64> = s.values.iter().flatten().map(|v| rendered(*v)).collect();
        for q in Quadrant::ALL {
            let t = target_for_search(&s, q, true, &mut rng).unwrap();
            let i = t.index.unwrap();
            assert_eq!(quadrant_of(i, s.len()).unwrap(), q);
            assert_eq!(rendered_vals[i], t.value);
            let miss = target_for_search(&s, q, false, &mut rng).unwrap();
            assert!(!rendered_vals.contains(&miss.value));
        }
        let (q1_lo, q1_hi) = Quadrant::Q1.bounds(s.len());
        let t = target_for_search(&s, Quadrant::Q4, true, &mut rng).unwrap();
        assert!(rendered_vals[q1_lo..q1_hi].iter().all(|v| *v < t.value));
    }

    #[test]
    fn non_positional_kind_rejected() {
        let mut rng = rng_from(5);
        assert!(gen_positional(DatasetKind::Trend, 0, &mut rng).is_err());
    }
}
