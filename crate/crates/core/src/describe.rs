//! Qualitative and quantitative descriptions attached to samples.
//!
//! Qualitative text names the feature in words only and never contains a
//! digit. Quantitative text states numbers that can be recomputed from the
//! series at two-decimal precision.

use crate::error::{Error, Result};
use crate::formats::{format_value, rendered};
use crate::numeric::{lagged_correlation, linear_fit, mean, moving_average3, pearson, std_dev, strict_extrema};
use crate::sample::AnnotatedSample;
use crate::series::{offset_date, TimeSeries};
use crate::synth::seasonality::period_name;
use crate::taxonomy::{Feature, FeatureLabel, SubFeature};

fn rising(up: bool) -> (&'static str, &'static str, &'static str) {
    if up {
        ("upward", "lower", "rising")
    } else {
        ("downward", "higher", "falling")
    }
}

fn sign_word(label: &FeatureLabel) -> &'static str {
    if label.param("rho").unwrap_or(0.0) < 0.0 {
        "negatively"
    } else {
        "positively"
    }
}

/// Every surface variant for a label; at least three per class.
fn qualitative_templates(label: &FeatureLabel) -> Vec<String> {
    use SubFeature as S;
    let v = label.variant.as_str();
    let t = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match (label.feature, label.sub_feature) {
        (Feature::Trend, S::Up | S::Down) => {
            let (dir, start, motion) = rising(label.sub_feature == S::Up);
            let shape = if v == "quadratic" { "quadratic" } else { "linear" };
            vec![
                format!(
                    "This time series exhibits a {dir} {shape} trend, commencing with {start} figures and {motion} gradually."
                ),
                format!("The values follow a {dir} {shape} path, {motion} over the whole period."),
                format!("A clear {dir} trend of {shape} shape dominates this series."),
            ]
        }
        (Feature::Trend, S::None) => t(&[
            "This time series shows no clear trend, fluctuating around a stable level.",
            "The values move sideways without any lasting upward or downward drift.",
            "No trend is visible: the series hovers around the same level throughout.",
        ]),
        (Feature::Seasonality, S::FixedPeriod) => {
            let mut out = t(&[
                "This time series exhibits a regular seasonal pattern that repeats with a fixed period.",
                "The series rises and falls in cycles of constant length.",
                "A fixed-period seasonal cycle is clearly visible throughout the series.",
            ]);
            if v == "varying_amplitude" {
                for s in &mut out {
                    s.pop();
                    s.push_str(", although the size of the swings changes over time.");
                }
            }
            out
        }
        (Feature::Seasonality, S::ShiftingPeriod) => t(&[
            "This time series shows a seasonal pattern whose period drifts over time.",
            "The series cycles up and down, but the length of each cycle gradually changes.",
            "A seasonal cycle with a shifting period runs through this series.",
        ]),
        (Feature::Seasonality, S::Multiple) => t(&[
            "This time series combines several seasonal cycles of different lengths.",
            "Multiple overlapping seasonal patterns shape the movements of this series.",
            "The series carries both a short and a long seasonal cycle at once.",
        ]),
        (Feature::Seasonality, S::None) => t(&[
            "This time series shows no seasonal pattern, only irregular fluctuations around a constant level.",
            "No repeating cycle is present; the values vary randomly around their mean.",
            "The series lacks any seasonality and looks like noise around a fixed level.",
        ]),
        (Feature::Anomaly, S::Spike) => t(&[
            "This time series contains a sudden spike that departs sharply from its usual behaviour.",
            "An isolated burst of extreme values interrupts an otherwise calm series.",
            "The series is smooth except for a brief, sharp spike.",
        ]),
        (Feature::Anomaly, S::LevelShift) if v == "step_spike" => t(&[
            "This time series jumps to a different level for a short stretch and then returns.",
            "A temporary shift in level interrupts the series before it reverts to normal.",
            "The values step away from their usual level for a while, then come back.",
        ]),
        (Feature::Anomaly, S::LevelShift) => t(&[
            "This time series shifts abruptly to a new level and stays there.",
            "Part way through, the series moves to a different level that persists.",
            "A sudden and lasting level shift splits this series into two plateaus.",
        ]),
        (Feature::Anomaly, S::TemporalDisruption) => t(&[
            "This time series has a stretch of missing observations where recording was interrupted.",
            "Some consecutive values are missing, leaving a gap in the series.",
            "The series is disrupted by a period with no recorded data.",
        ]),
        (Feature::Anomaly, S::None) => t(&[
            "This time series behaves normally throughout, with no anomalies.",
            "The values evolve smoothly without spikes, shifts or gaps.",
            "No unusual observations appear anywhere in this series.",
        ]),
        (Feature::Volatility, S::Constant) => t(&[
            "This time series shows volatility that remains roughly constant over time.",
            "The size of the fluctuations is stable across the whole series.",
            "Volatility neither grows nor fades: the spread of values stays about the same.",
        ]),
        (Feature::Volatility, S::Trending) => t(&[
            "This time series shows volatility that increases steadily over time.",
            "The fluctuations grow larger as the series progresses.",
            "Volatility trends upward, with calm early values and wild late ones.",
        ]),
        (Feature::Volatility, S::Clustered) => t(&[
            "This time series shows clustered volatility, with calm periods alternating with bursts of large moves.",
            "Large fluctuations tend to follow large ones, forming clusters of high volatility.",
            "Volatility comes in clusters: turbulent stretches are separated by quiet ones.",
        ]),
        (Feature::Volatility, S::Dynamic) => t(&[
            "This time series shows volatility that reacts to past moves, rising after declines and easing after gains.",
            "The spread of the values changes dynamically in response to negative shocks.",
            "Volatility in this series is driven by a leverage effect, growing after drops.",
        ]),
        (Feature::Volatility, S::None) => t(&[
            "This time series is smooth with no visible volatility.",
            "The values change gently, without random fluctuations.",
            "There is no volatility here: the series follows a calm, steady path.",
        ]),
        (Feature::StructuralBreak, S::RegimeChange) => t(&[
            "This time series switches to a different generating regime part way through.",
            "The underlying process changes its nature at some point, creating a new regime.",
            "After a certain point the series behaves according to a different model.",
        ]),
        (Feature::StructuralBreak, S::ParameterShift) => t(&[
            "This time series experiences a shift in one of its parameters, such as its mean or variance.",
            "At some point a key property of the series, like its level or spread, changes.",
            "The series keeps its form but one of its parameters shifts abruptly.",
        ]),
        (Feature::StructuralBreak, S::None) => t(&[
            "This time series shows no structural break; its behaviour is consistent throughout.",
            "The same process generates the whole series, with no breaks.",
            "No shift in regime or parameters appears anywhere in the series.",
        ]),
        (Feature::Stationarity, S::Stationary) => t(&[
            "This time series is stationary: its mean and variance do not change over time.",
            "The statistical properties of the series stay stable throughout.",
            "A stationary series whose values fluctuate around a fixed mean with constant spread.",
        ]),
        (Feature::Stationarity, S::TrendChange) => t(&[
            "This time series is non-stationary, with a mean that drifts over time.",
            "The level of the series evolves steadily, so its mean is not constant.",
            "A trend makes this series non-stationary in its mean.",
        ]),
        (Feature::Stationarity, S::VarianceChange) => t(&[
            "This time series is non-stationary because its variance changes over time.",
            "The spread of the values widens as the series progresses.",
            "The series keeps its level but its variability is not constant.",
        ]),
        (Feature::Stationarity, S::Seasonal) => t(&[
            "This time series is non-stationary because of a recurring seasonal cycle.",
            "Regular seasonal swings make the series non-stationary.",
            "A repeating seasonal pattern drives the movements of this series.",
        ]),
        (Feature::Stationarity, S::TrendAndSeasonal) => t(&[
            "This time series combines a drifting mean with a seasonal cycle.",
            "Both a trend and a seasonal pattern make this series non-stationary.",
            "The series follows a trend while also cycling seasonally.",
        ]),
        (Feature::FatTails, S::FatTailed) => t(&[
            "This time series has fat tails: extreme values occur far more often than under a normal distribution.",
            "Occasional very large deviations reveal a heavy-tailed distribution.",
            "The distribution of the values is fat-tailed, with frequent outliers.",
        ]),
        (Feature::FatTails, S::ThinTailed) => t(&[
            "This time series has thin tails: values stay close to the centre and extremes are rare.",
            "The values follow a bell-shaped distribution without unusual outliers.",
            "Extreme values are as rare as in a normal distribution.",
        ]),
        (Feature::Correlation, S::Positive) => t(&[
            "The two time series are positively correlated and tend to move together.",
            "When one series rises the other usually rises too: they are positively related.",
            "These series are positively linked, moving in the same direction.",
        ]),
        (Feature::Correlation, S::Negative) => t(&[
            "The two time series are negatively correlated and tend to move in opposite directions.",
            "When one series rises the other usually falls: they are negatively related.",
            "These series are negatively linked, mirroring each other.",
        ]),
        (Feature::Correlation | Feature::CrossCorrelation, S::None) => t(&[
            "The two time series are uncorrelated and move independently.",
            "No linear relationship links the two series.",
            "The movements of one series say nothing about the other.",
        ]),
        (Feature::CrossCorrelation, S::Direct) => t(&[
            "The two time series move together at the same time, with no lag.",
            "The second series tracks the first directly and without delay.",
            "A direct, simultaneous relationship links the two series.",
        ]),
        (Feature::CrossCorrelation, S::DirectLagged) => t(&[
            "The second time series follows the first with a delay, moving in the same direction.",
            "Moves in the first series reappear in the second after a lag.",
            "The first series leads the second, which echoes it in the same direction later.",
        ]),
        (Feature::CrossCorrelation, S::Inverse) => t(&[
            "The two time series move in opposite directions at the same time.",
            "The second series mirrors the first inversely, without delay.",
            "An inverse, simultaneous relationship links the two series.",
        ]),
        (Feature::CrossCorrelation, S::InverseLagged) => t(&[
            "The second time series moves opposite to the first after a delay.",
            "Moves in the first series reappear reversed in the second after a lag.",
            "The first series leads the second, which responds in the opposite direction later.",
        ]),
        (Feature::DynamicCorrelation, S::FirstHalf | S::SecondHalf) => {
            let s = sign_word(label);
            let (on, off) = if label.sub_feature == S::FirstHalf {
                ("first", "second")
            } else {
                ("second", "first")
            };
            vec![
                format!("The two time series are {s} correlated in the {on} half, but the relationship fades in the {off} half."),
                format!("The link between the series is dynamic: they move {s} together only during the {on} half."),
                format!("A {s} correlation appears in the {on} half and vanishes in the {off} half."),
            ]
        }
        (Feature::Position, S::MaxTarget | S::MinTarget) => match v {
            "increasing" | "decreasing" => {
                let (dir, _, motion) = rising(v == "increasing");
                vec![
                    format!("This time series follows an {dir} path, {motion} over time."),
                    format!("The values keep {motion} from start to end."),
                    format!("A steadily {motion} series."),
                ]
            }
            "outlier" => t(&[
                "This time series is calm apart from a single outlier.",
                "One value stands far away from all the others.",
                "A noisy series with one extreme observation.",
            ]),
            "sinusoidal" => t(&[
                "This time series oscillates smoothly like a sine wave.",
                "The values rise and fall in regular smooth cycles.",
                "A periodic, wave-like series.",
            ]),
            _ => t(&[
                "This time series wanders randomly like a Brownian motion.",
                "The values drift up and down as a random walk.",
                "A random-walk series without a fixed level.",
            ]),
        },
        _ => Vec::new(),
    }
}

/// Seeded choice among the surface variants for the sample's label.
pub fn qualitative_description(sample: &AnnotatedSample, choice: u64) -> Result<String> {
    let label = &sample.label;
    if !label.is_consistent() {
        return Err(Error::Domain(format!(
            "no description for {} / {}",
            label.feature, label.sub_feature
        )));
    }
    let options = qualitative_templates(label);
    if options.is_empty() {
        return Err(Error::Domain(format!(
            "no description for {} / {}",
            label.feature, label.sub_feature
        )));
    }
    Ok(options[(choice % options.len() as u64) as usize].clone())
}

/// Number of qualitative variants available for a label.
pub fn qualitative_variant_count(label: &FeatureLabel) -> usize {
    qualitative_templates(label).len()
}

/// Peak and trough counts plus average amplitude, on the window-3 moving
/// average of the rendered values. Amplitude is half the gap between mean
/// peak value and mean trough value.
pub fn seasonal_stats(values: &[f64]) -> (usize, usize, f64) {
    let r: Vec<f64> = values.iter().map(|v| rendered(*v)).collect();
    let smooth = moving_average3(&r);
    let (peaks, troughs) = strict_extrema(&smooth);
    let amplitude = if peaks.is_empty() || troughs.is_empty() {
        0.0
    } else {
        let p: Vec<f64> = peaks.iter().map(|&i| smooth[i]).collect();
        let t: Vec<f64> = troughs.iter().map(|&i| smooth[i]).collect();
        (mean(&p) - mean(&t)) / 2.0
    };
    (peaks.len(), troughs.len(), amplitude)
}

/// The feature sentence for a seasonal series.
pub fn seasonality_sentence(label: &FeatureLabel, peaks: usize, troughs: usize, amplitude: f64) -> String {
    let counts = format!(
        "with {peaks} peaks and {troughs} troughs, and an average amplitude of {}",
        format_value(amplitude)
    );
    let period = |key: &str| label.param(key).map(period_name);
    match label.sub_feature {
        SubFeature::Multiple => {
            let name = period("period2").or_else(|| period("period")).unwrap_or_default();
            format!("It exhibits multiple seasonal patterns with {name} seasonality, {counts}.")
        }
        SubFeature::ShiftingPeriod => format!("It exhibits seasonality with a shifting period, {counts}."),
        SubFeature::FixedPeriod => {
            let name = period("period").unwrap_or_default();
            format!("It exhibits {name} seasonality, {counts}.")
        }
        _ => format!("After smoothing it shows {peaks} peaks and {troughs} troughs."),
    }
}

fn rendered_values(s: &TimeSeries) -> Vec<(usize, f64)> {
    s.observed().map(|(i, v)| (i, rendered(v))).collect()
}

/// First index of the rendered minimum and maximum.
fn extremes(points: &[(usize, f64)]) -> ((usize, f64), (usize, f64)) {
    let mut lo = points[0];
    let mut hi = points[0];
    for &p in &points[1..] {
        if p.1 < lo.1 {
            lo = p;
        }
        if p.1 > hi.1 {
            hi = p;
        }
    }
    (lo, hi)
}

fn mean_std_sentence(values: &[f64]) -> String {
    format!(
        "It has a mean of {} and a standard deviation of {}.",
        format_value(mean(values)),
        format_value(std_dev(values))
    )
}

fn feature_sentence(sample: &AnnotatedSample) -> String {
    let s = &sample.series;
    let label = &sample.label;
    let v = s.dense();
    let date = |i: usize| offset_date(s.start_date, i);
    match label.feature {
        Feature::Trend => {
            format!(
                "Its fitted linear slope is {} per day.",
                format_value(linear_fit(&v).slope)
            )
        }
        Feature::Seasonality => {
            let (p, t, a) = seasonal_stats(&v);
            seasonality_sentence(label, p, t, a)
        }
        Feature::Anomaly => match label.sub_feature {
            SubFeature::Spike => {
                let i = label.param("position_0").unwrap_or(0.0) as usize;
                format!(
                    "It reaches {} on {}, far from its usual range.",
                    format_value(s.values[i].unwrap_or(0.0)),
                    date(i)
                )
            }
            SubFeature::LevelShift => {
                let k = label.param("start").unwrap_or(0.0) as usize;
                format!("Its level changes on {}.", date(k))
            }
            SubFeature::TemporalDisruption => {
                let k = label.param("start").unwrap_or(0.0) as usize;
                let w = label.param("width").unwrap_or(1.0) as usize;
                format!("Values are missing from {} to {}.", date(k), date(k + w - 1))
            }
            _ => mean_std_sentence(&v),
        },
        Feature::StructuralBreak => match label.param("k") {
            Some(k) => {
                let k = k as usize;
                format!(
                    "The behaviour changes on {}; the mean is {} before and {} after.",
                    date(k),
                    format_value(mean(&v[..k])),
                    format_value(mean(&v[k..]))
                )
            }
            None => mean_std_sentence(&v),
        },
        Feature::Volatility => {
            let half = v.len() / 2;
            format!(
                "The standard deviation is {} in the first half and {} in the second half.",
                format_value(std_dev(&v[..half])),
                format_value(std_dev(&v[half..]))
            )
        }
        Feature::Stationarity | Feature::FatTails => mean_std_sentence(&v),
        Feature::Correlation => format!(
            "The sample correlation between the two series is {}.",
            format_value(pearson(&v, s.values2.as_deref().unwrap_or(&[])))
        ),
        Feature::CrossCorrelation => {
            let second = s.values2.as_deref().unwrap_or(&[]);
            let max_lag = (v.len().saturating_sub(1) / 4).min(10);
            let (lag, r) = (0..=max_lag)
                .map(|l| (l, lagged_correlation(&v, second, l)))
                .fold((0, f64::NEG_INFINITY), |best, c| if c.1.abs() > best.1.abs() { c } else { best });
            format!(
                "The strongest cross-correlation, {}, occurs at a lag of {lag} days.",
                format_value(r)
            )
        }
        Feature::DynamicCorrelation => {
            let second = s.values2.as_deref().unwrap_or(&[]);
            let k = label.param("k").unwrap_or((v.len() / 2) as f64) as usize;
            format!(
                "The correlation is {} before {} and {} from then on.",
                format_value(pearson(&v[..k], &second[..k])),
                date(k),
                format_value(pearson(&v[k..], &second[k..]))
            )
        }
        Feature::Position => format!("It spans {} days.", s.len()),
    }
}

/// Date range, frequency, extremes and feature-specific numbers.
pub fn quantitative_description(sample: &AnnotatedSample) -> String {
    let s = &sample.series;
    let points = rendered_values(s);
    let mut out = format!(
        "This {} time series covers the period from {} to {}.",
        s.frequency.as_str(),
        s.start_date,
        s.end_date()
    );
    if points.is_empty() {
        return out;
    }
    out.push(' ');
    out.push_str(&feature_sentence(sample));
    let ((lo_i, lo), (hi_i, hi)) = extremes(&points);
    out.push_str(&format!(
        " The minimum value is {} on {} and the maximum value is {} on {}.",
        format_value(lo),
        offset_date(s.start_date, lo_i),
        format_value(hi),
        offset_date(s.start_date, hi_i)
    ));
    if let Some(second) = &s.values2 {
        let pts: Vec<(usize, f64)> = second.iter().map(|v| rendered(*v)).enumerate().collect();
        if !pts.is_empty() {
            let ((_, lo2), (_, hi2)) = extremes(&pts);
            out.push_str(&format!(
                " The second series ranges from {} to {}.",
                format_value(lo2),
                format_value(hi2)
            ));
        }
    }
    out
}
