//! Deterministic non-LLM baselines.

use std::sync::LazyLock;

use regex::Regex;

use super::{choice, format_retrieval, yes_no, Message, Solver, SolverError};
use crate::formats::format_value;
use crate::numeric::{autocorrelation, diff, excess_kurtosis, lagged_correlation, linear_fit, mean, pearson, variance, z_scores};
use crate::series::TimeSeries;
use crate::tasks::{contains_value, extract_series, letter, retrieval_key, TaskInstance, TaskKind};
use crate::taxonomy::Feature;

static QUERY_DATE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"value_on_date (\d{4}-\d{2}-\d{2})").unwrap());
static SEARCH_VALUE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"value (-?[0-9.]+) appear").unwrap());
static OPTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?m)^\(([a-d])\) (.*)$").unwrap());

/// Decision thresholds. Defaults are conventional choices, not fitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// |t| of the OLS slope.
    pub trend_t: f64,
    /// Share of variance the linear fit must explain, so that a borderline
    /// t-statistic on pure noise is not read as a trend.
    pub trend_r2: f64,
    /// Peak autocorrelation of the detrended series at lag >= 2.
    pub seasonal_acf: f64,
    /// |z| on the differenced series.
    pub anomaly_z: f64,
    /// Ratio of the larger to the smaller half variance.
    pub variance_ratio: f64,
    /// Welch t of a mean shift between two segments.
    pub mean_shift_t: f64,
    /// Excess kurtosis above which tails count as fat.
    pub kurtosis: f64,
    /// |t| of a correlation coefficient.
    pub correlation_t: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            trend_t: 2.0,
            trend_r2: 0.5,
            seasonal_acf: 0.3,
            anomaly_z: 3.0,
            variance_ratio: 3.0,
            mean_shift_t: 6.0,
            kurtosis: 1.0,
            correlation_t: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StatisticalSolver {
    pub thresholds: Thresholds,
}

fn r_squared(ys: &[f64]) -> f64 {
    let fit = linear_fit(ys);
    let my = mean(ys);
    let sst: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sst == 0.0 {
        return 0.0;
    }
    let sse: f64 = ys
        .iter()
        .enumerate()
        .map(|(t, y)| (y - fit.intercept - fit.slope * t as f64).powi(2))
        .sum();
    1.0 - sse / sst
}

fn detrend(ys: &[f64]) -> Vec<f64> {
    let fit = linear_fit(ys);
    ys.iter()
        .enumerate()
        .map(|(t, y)| y - fit.intercept - fit.slope * t as f64)
        .collect()
}

/// Highest autocorrelation over lags 2..=n/2.
fn acf_peak(xs: &[f64]) -> (usize, f64) {
    (2..=xs.len() / 2)
        .map(|l| (l, autocorrelation(xs, l)))
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
}

fn half_variance_ratio(xs: &[f64]) -> (f64, f64) {
    let d = diff(xs);
    let h = d.len() / 2;
    let (a, b) = (variance(&d[..h]), variance(&d[h..]));
    let ratio = if a.min(b) == 0.0 {
        if a.max(b) == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        a.max(b) / a.min(b)
    };
    (ratio, b / a)
}

/// Largest Welch t of a mean shift at a split in the middle half.
fn max_mean_shift(xs: &[f64]) -> f64 {
    let n = xs.len();
    (n / 4..=3 * n / 4)
        .filter(|&k| k >= 2 && n - k >= 2)
        .map(|k| {
            let (a, b) = xs.split_at(k);
            let se = (variance(a) / a.len() as f64 + variance(b) / b.len() as f64).sqrt();
            if se == 0.0 {
                if mean(a) == mean(b) {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (mean(a) - mean(b)).abs() / se
            }
        })
        .fold(0.0, f64::max)
}

fn correlation_t(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return f64::INFINITY;
    }
    r.abs() * ((n as f64 - 2.0) / (1.0 - r * r)).sqrt()
}

/// Answers for one feature of one series.
struct Verdict {
    /// Literal answer to the detection question.
    answer: bool,
    /// Index into the feature's classification options.
    class: usize,
}

impl StatisticalSolver {
    fn trend(&self, v: &[f64]) -> Option<f64> {
        let fit = linear_fit(v);
        (fit.t_stat().abs() > self.thresholds.trend_t && r_squared(v) >= self.thresholds.trend_r2).then_some(fit.slope)
    }

    fn seasonal(&self, v: &[f64]) -> Option<usize> {
        let (lag, peak) = acf_peak(&detrend(v));
        (peak > self.thresholds.seasonal_acf).then_some(lag)
    }

    fn verdict(&self, feature: Feature, s: &TimeSeries) -> Result<Verdict, SolverError> {
        let t = &self.thresholds;
        let v = s.dense();
        if v.len() < 4 {
            return Err(SolverError::Input("series shorter than 4 points".into()));
        }
        let verdict = |answer: bool, class: usize| Ok(Verdict { answer, class });
        match feature {
            Feature::Trend => {
                let slope = self.trend(&v);
                let up = slope.unwrap_or_else(|| linear_fit(&v).slope) >= 0.0;
                verdict(slope.is_some(), if up { 0 } else { 1 })
            }
            Feature::Seasonality => match self.seasonal(&v) {
                None => verdict(false, 0),
                Some(lag) => {
                    let h = v.len() / 2;
                    let first = acf_peak(&detrend(&v[..h])).0 as f64;
                    let second = acf_peak(&detrend(&v[h..])).0 as f64;
                    let shifting = (first - second).abs() > 0.2 * first.max(second);
                    let r = detrend(&v);
                    let multiple = (2..=v.len() / 2)
                        .filter(|l| l % lag != 0 && lag % l != 0)
                        .any(|l| autocorrelation(&r, l) > t.seasonal_acf && autocorrelation(&r, l) > autocorrelation(&r, l - 1));
                    verdict(true, if shifting { 1 } else if multiple { 2 } else { 0 })
                }
            },
            Feature::Anomaly => {
                if s.has_gaps() {
                    return verdict(true, 2);
                }
                let z = z_scores(&diff(&v));
                let hits: Vec<usize> = (0..z.len()).filter(|&i| z[i].abs() > t.anomaly_z).collect();
                let Some(&first) = hits.first() else {
                    return verdict(false, 0);
                };
                // a spike jumps and returns: a large difference of the other sign follows shortly
                let spike = (first + 1..(first + 4).min(z.len())).any(|j| z[j].abs() > t.anomaly_z && z[j].signum() != z[first].signum());
                verdict(true, if spike { 0 } else { 1 })
            }
            Feature::Volatility => {
                let (ratio, later_over_earlier) = half_variance_ratio(&v);
                let r = detrend(&v);
                let sq: Vec<f64> = r.iter().map(|x| x * x).collect();
                let clustered = autocorrelation(&sq, 1) > 0.2;
                let present = ratio > t.variance_ratio || clustered || excess_kurtosis(&diff(&v)) > t.kurtosis;
                let class = if ratio > t.variance_ratio && later_over_earlier > 1.0 {
                    1
                } else if clustered {
                    2
                } else if ratio > t.variance_ratio {
                    3
                } else {
                    0
                };
                verdict(present, class)
            }
            Feature::StructuralBreak => {
                let (ratio, _) = half_variance_ratio(&v);
                let shift = max_mean_shift(&v);
                let present = ratio > t.variance_ratio || shift > t.mean_shift_t;
                verdict(present, if shift > t.mean_shift_t { 1 } else { 0 })
            }
            Feature::Stationarity => {
                let trend = self.trend(&v).is_some();
                let seasonal = self.seasonal(&v).is_some();
                let (ratio, _) = half_variance_ratio(&v);
                let persistent = autocorrelation(&v, 1) > 0.9;
                let stationary = !trend && !seasonal && ratio <= t.variance_ratio && !persistent;
                let class = match (trend || persistent, seasonal) {
                    (true, true) => 3,
                    (true, false) => 0,
                    (false, true) => 2,
                    (false, false) => 1,
                };
                verdict(stationary, class)
            }
            Feature::FatTails => verdict(excess_kurtosis(&v) > t.kurtosis, 0),
            Feature::Correlation => {
                let w = second(s)?;
                let r = pearson(&v, &w);
                verdict(correlation_t(r, v.len()) > t.correlation_t, if r >= 0.0 { 0 } else { 1 })
            }
            Feature::CrossCorrelation => {
                let w = second(s)?;
                let max_lag = (v.len() / 4).clamp(1, 10);
                let (lag, r) = (0..=max_lag)
                    .map(|l| (l, lagged_correlation(&v, &w, l)))
                    .fold((0, 0.0), |best, c| if c.1.abs() > f64::abs(best.1) { c } else { best });
                let present = correlation_t(r, v.len() - lag) > t.correlation_t;
                let class = match (r >= 0.0, lag > 0) {
                    (true, false) => 0,
                    (true, true) => 1,
                    (false, false) => 2,
                    (false, true) => 3,
                };
                verdict(present, class)
            }
            Feature::DynamicCorrelation | Feature::Position => verdict(false, 0),
        }
    }

    fn text_match(&self, task: &TaskInstance, s: &TimeSeries) -> String {
        // intra options carry the date range and extremes; pick the best overlap
        let (lo, hi) = s
            .observed()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| (lo.min(v), hi.max(v)));
        let needles = [
            s.start_date.to_string(),
            s.end_date().to_string(),
            format!("minimum value is {}", format_value(lo)),
            format!("maximum value is {}", format_value(hi)),
        ];
        let best = OPTION
            .captures_iter(&task.question)
            .map(|c| {
                let score = needles.iter().filter(|n| c[2].contains(n.as_str())).count();
                (score, c[1].chars().next().unwrap())
            })
            .fold((0, 'a'), |best, c| if c.0 > best.0 { c } else { best });
        choice(best.1)
    }
}

fn second(s: &TimeSeries) -> Result<Vec<f64>, SolverError> {
    s.values2
        .clone()
        .ok_or_else(|| SolverError::Input("second series missing".into()))
}

impl Solver for StatisticalSolver {
    fn name(&self) -> &str {
        "statistical"
    }

    fn solve(&self, task: &TaskInstance, _messages: &[Message]) -> Result<String, SolverError> {
        let s = extract_series(task).map_err(|e| SolverError::Input(e.to_string()))?;
        match task.task_kind {
            TaskKind::Detection => Ok(yes_no(self.verdict(task.feature, &s)?.answer)),
            TaskKind::Classification => Ok(choice(letter(self.verdict(task.feature, &s)?.class))),
            TaskKind::RetrievalBundle => {
                let date = QUERY_DATE
                    .captures(&task.question)
                    .and_then(|c| c[1].parse().ok())
                    .ok_or_else(|| SolverError::Input("no query date in question".into()))?;
                let key = retrieval_key(&s, date).map_err(|e| SolverError::Input(e.to_string()))?;
                Ok(format_retrieval(&key))
            }
            TaskKind::Search => {
                let value: f64 = SEARCH_VALUE
                    .captures(&task.question)
                    .and_then(|c| c[1].parse().ok())
                    .ok_or_else(|| SolverError::Input("no search value in question".into()))?;
                Ok(yes_no(contains_value(&s, value)))
            }
            TaskKind::TextMatchIntra | TaskKind::TextMatchCross => Ok(self.text_match(task, &s)),
        }
    }
}
