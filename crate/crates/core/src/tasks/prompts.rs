//! Prompt texts.
//!
//! Line breaks follow the published templates; wrapped source lines are
//! joined with a single space.

use crate::taxonomy::Feature;

use super::PromptStyle;

pub const COT_SUFFIX: &str = " Let's think step by step.";

const TREND_DETECT: &str =
    "Question: can you detect a general upward or downward trend in this time series? Answer yes or no only.";
const TREND_CLASSIFY: &str = "Select one of the following answers: (a) the time series has a positive trend, (b) the time series has a negative trend. Provide your answer as either (a) or (b).";
const TREND_DETECT_COT: &str = "Question: Question: Can you detect a general upward or downward trend in this time series? Provide your reasoning and then answer 'Yes' or 'No'.
Let's think step by step. First, observe the overall pattern of the data points. Do they generally increase or decrease over time?
Consider the starting and ending points of the series. If the ending point is significantly higher or lower than the starting point, this might indicate a trend.
Also, look at the intermediate points: do they show a consistent direction of movement, or are there major fluctuations that disrupt the trend?
Now, based on these observations, determine if there is a consistent pattern indicating a trend. Finally, provide your answer as 'Yes' or 'No'.";
const TREND_CLASSIFY_COT: &str = "Select one of the following answers:
(a) The time series has a positive trend, (b) The time series has a negative trend. Provide your answer as either (a) or (b).
Let's think step by step. First, identify the general direction of the data points. Do they appear to be moving upward or downward overall?
Consider the slope of the line that could be drawn through the data points. A positive slope indicates an upward trend, while a negative slope indicates a downward trend.
Check for consistency in the movement. Are most of the data points following this direction, or are there significant deviations?
If the overall pattern is increasing, select (a). If it is decreasing, select (b).";

const SEASONALITY_DETECT: &str =
    "Question: can you detect any cyclic or periodic patterns in this time series? Only answer 'Yes' or 'No'.";
const SEASONALITY_CLASSIFY: &str = "Given the following definitions:
Fixed-period: Regular, predictable seasonal patterns occurring at fixed intervals (e.g., daily, weekly, monthly).
Shifting Period: Seasonal patterns where the length of the period shifts over time.
Multiple seasonality: Presence of multiple overlapping seasonal patterns (e.g., both weekly and monthly seasonality)
Select one of the following answers:
(a) The time series has fixed-period seasonality, (b) The time series has a shift in seasonal pattern, (c) The time series has multiple seasonal patterns.
Only answer (a), (b) or (c).";
const SEASONALITY_DETECT_COT: &str = "Question: Can you detect any cyclic or periodic patterns in this time series? Provide your reasoning and then answer 'Yes' or 'No'.
Let's think step by step. First, observe the overall shape of the time series. Look for repeating patterns or cycles.
Identify the peaks (high points) and troughs (low points) in the series. Are these peaks and troughs occurring at regular intervals?
Measure the distance between these repeating points. If the intervals between them are consistent, it suggests a cyclic pattern.
Also, consider the amplitude (height) of these peaks and troughs. Is the amplitude consistent or does it vary over time?
Now, based on these observations, determine if there is a consistent cyclic or periodic pattern in the time series. Finally, provide your answer as 'Yes' or 'No'.";
const SEASONALITY_CLASSIFY_COT: &str = "Given the following definitions:
Fixed-Period: Seasonality with a constant, unchanging period (e.g., monthly seasonality).
Shifting Period: Seasonality where the length of the period shifts over time (e.g., a seasonal pattern that shifts slightly each year).
Multiple Seasonality: Presence of multiple overlapping seasonal patterns (e.g., both weekly and monthly seasonality).
Select one of the following answers:
(a) The time series has a fixed-period seasonality, (b) The time series has a shifting-period seasonality, (c) The time series has multiple seasonality.
Let's think step by step. First, identify if there is a repeating pattern at fixed intervals, which would indicate a fixed-period seasonality. If the timing of the pattern shifts, it's a shifting-period seasonality. Finally, if there are two or more overlapping seasonal patterns, identify it as multiple seasonality. Compare the intervals and magnitudes of the peaks and troughs carefully to determine the correct pattern. Now, provide your final answer as either (a), (b), or (c).";

const ANOMALY_DETECT: &str =
    "Question: can you detect any irregularities in this time series? Only answer 'Yes' or 'No'.";
const ANOMALY_CLASSIFY: &str = "Given the following definitions:
Spike: a sudden and brief deviation from the overall pattern of the data.
Level shift: a sudden and lasting change in the average value of the series.
Temporal disruption: an interval where data is missing or not recorded.
Select one of the following answers that best describes the provided time series:
(a) The time series has one or more spikes, (b) The time series has a level shift, (c) The time series has a temporal disruption.
Only answer (a), (b), or (c).";
const ANOMALY_DETECT_COT: &str = "Question: Can you detect any irregularities in this time series? Provide your reasoning and then answer 'Yes' or 'No'.
Let's think step by step. First, observe the overall pattern of the time series. Identify the general trend or pattern.
Next, look for any points that deviate significantly from this overall pattern. These deviations could be much higher or lower than the rest of the data points.
Consider the context of these deviations: are they isolated points, or do they occur in a sequence?
Are there sudden jumps or drops that are not consistent with the trend? After examining these factors, determine if there are any significant irregularities. Finally, provide your answer as 'Yes' or 'No'.";
const ANOMALY_CLASSIFY_COT: &str = "Given the following definitions:
Spike: a sudden and brief deviation from the overall pattern of the data.
Level shift: a sudden and lasting change in the average value of the series.
Temporal disruption: an interval where data is missing or not recorded.
Select one of the following answers that best describes the provided time series:
(a) The time series has one or more spikes, (b) The time series has a level shift,
(c) The time series has a temporal disruption.
Let's think step by step. First, identify if there are any points that stand out sharply from the rest of the data, which would indicate spikes.
If there is a lasting change in the average value of the series, identify it as a level shift.
If there are intervals where data appears to be missing or not recorded, classify it as a temporal disruption.
Based on your observations, determine the type of irregularity present. Now, provide your final answer as either (a), (b), or (c).";

const VOLATILITY_DETECT: &str =
    "Question: can you detect any volatility in this time series? Only answer 'Yes' or 'No'.";
const VOLATILITY_CLASSIFY: &str = "Given the following definitions:
Constant Volatility: The degree of variation in the time series remains consistent and predictable over time.
Trending Volatility: The level of variation in the time series shows a clear increasing or decreasing trend over time.
Clustered Volatility: The time series exhibits periods where volatility is significantly higher or lower, with these periods tending to cluster together.
Dynamic Volatility: The volatility of the time series changes over time in response to external factors (e.g., leverage effect where the volatility of the time series tends to increase when the series experiences negative returns).
Select one of the following answers:
(a) The time series has constant volatility, (b) The time series has trending volatility, (c) The time series has clustered volatility, (d) The time series has dynamic volatility.
Only answer (a), (b), (c), or (d).";

const BREAK_DETECT: &str = "Question: can you detect any regime switches or structural breaks in this time series? Only answer 'Yes' or 'No'.";
const BREAK_CLASSIFY: &str = "Given the following definitions:
Regime Change: A shift in the time series data's statistical properties, such as mean, variance, or auto-correlation, that persists over time. This change is often gradual and represents a new phase or 'regime' in the data.
Structural Break: An abrupt change in the time series data that leads to a new level or trend. This change is typically sudden and can be linked to specific events or shifts in the underlying process.
Examine the provided time series data and select the correct option:
(a) The time series data exhibits a Regime Change. (b) The time series data exhibits a Structural Break.
Provide your answer as either (a) or (b).";

const FAT_TAILS_DETECT: &str = "Question: Considering the data provided, does the time series exhibit fat tails? Fat tails refer to a higher likelihood of extreme values compared to a normal distribution, indicating a higher probability of observing significant positive or negative deviations. Only answer 'Yes' or 'No'.";

const STATIONARITY_DETECT: &str =
    "Question: Considering the data provided, is the time series stationary? Only answer 'Yes' or 'No'.";
const STATIONARITY_CLASSIFY: &str = "Given the following definitions of non-stationary types in time series data:
(a) Trend Change: The time series exhibits a significant shift in its underlying trend, indicating a change in the mean over time.
(b) Variance Change: The time series shows a change in its variability or spread.
(c) Seasonality: The time series displays regular and predictable patterns that repeat over a certain period.
(d) Trend and Seasonality: The time series exhibits both a significant underlying trend and seasonal patterns. This type combines elements of both trend changes and predictable seasonal fluctuations.
Select one of the following answers based on your analysis of the time series:
(a) The time series has a trend change, (b) The time series has a variance change, (c) The time series has seasonality, (d) The time series has both trend and seasonality.
Only answer (a), (b), (c) or (d).";

const CORRELATION_DETECT: &str =
    "Question: Considering the data provided, is there a correlation between the time series? Only answer 'Yes' or 'No'";
const CORRELATION_CLASSIFY: &str = "Select one of the following answers:
(a) The time series are positively correlated or (b) The time series are negatively correlated.
Provide your answer as either (a) or (b).";

const CROSS_DETECT: &str = "Question: Considering the data provided, is there a correlation (direct or lagged) between the two time series? Only answer 'Yes' or 'No'.";
const CROSS_CLASSIFY: &str = "Given the following definitions:
Direct Correlation: The two time series show a direct, immediate relationship between their values, where changes in one series directly influence the other in a straightforward manner.
Direct Lagged Correlation: The two time series demonstrate a delayed relationship, where changes in one series influence the other after a certain lag period.
Inverse Correlation: The two time series exhibit an inverse or negative relationship between their values, where an increase in one series typically leads to a decrease in the other, and vice versa.
Inverse Lagged Correlation: The two time series show a relationship where changes in one series negatively influence the other after a certain lag period, suggesting that past increases in one series lead to future decreases in the other, and vice versa.
Select one of the following answers that best describes the relationship between the two time series:
(a) The two time series exhibit direct correlation, (b) The two time series exhibit direct lagged correlation, (c) The two time series exhibit inverse correlation, (d) The two time series exhibit inverse lagged correlation.
Only answer (a), (b), (c), or (d).";

const RETRIEVAL: &str = "Given the input time series, please answer the following questions and format your responses in a dictionary with the structure shown below:
{'max_value': {'value':value, 'date':date}, 'min_value': {'value':value, 'date':date}, 'value_on_date <date>': {'value':value}}.
Only provide the numerical value and/or the date as the answer for each question. Format the reply as a dictionary following the instruction.";
const RETRIEVAL_COT: &str = "Given the input time series, please provide concise and precise answers to the following questions and format your responses in a dictionary:
{'max_value': {'value':value, 'date':date}, 'min_value': {'value':value, 'date':date}, 'value_on_date <date>': {'value':value}}.
To ensure accuracy, let's follow these steps:
1. Identify the maximum value and its date.
2. Identify the minimum value and its date.
3. Find the value on the specified date <date>.
Note: Only provide the numerical value and/or the date as the answer for each question. Format the reply as a dictionary following the instruction.
Let's think step by step.";

/// Zero-shot text plus, where one exists, the dedicated step-by-step text.
fn pick(style: PromptStyle, zero_shot: &str, cot: Option<&str>) -> String {
    match (style, cot) {
        (PromptStyle::ZeroShot, _) => zero_shot.to_string(),
        (PromptStyle::Cot, Some(c)) => c.to_string(),
        (PromptStyle::Cot, None) => format!("{zero_shot}{COT_SUFFIX}"),
    }
}

/// Detection question, or `None` for features without one.
pub fn detection_question(feature: Feature, style: PromptStyle) -> Option<String> {
    let (zs, cot) = match feature {
        Feature::Trend => (TREND_DETECT, Some(TREND_DETECT_COT)),
        Feature::Seasonality => (SEASONALITY_DETECT, Some(SEASONALITY_DETECT_COT)),
        Feature::Anomaly => (ANOMALY_DETECT, Some(ANOMALY_DETECT_COT)),
        Feature::Volatility => (VOLATILITY_DETECT, None),
        Feature::StructuralBreak => (BREAK_DETECT, None),
        Feature::FatTails => (FAT_TAILS_DETECT, None),
        Feature::Stationarity => (STATIONARITY_DETECT, None),
        Feature::Correlation => (CORRELATION_DETECT, None),
        Feature::CrossCorrelation => (CROSS_DETECT, None),
        Feature::DynamicCorrelation | Feature::Position => return None,
    };
    Some(pick(style, zs, cot))
}

/// Classification question with its definitions block, or `None`.
pub fn classification_question(feature: Feature, style: PromptStyle) -> Option<String> {
    let (zs, cot) = match feature {
        Feature::Trend => (TREND_CLASSIFY, Some(TREND_CLASSIFY_COT)),
        Feature::Seasonality => (SEASONALITY_CLASSIFY, Some(SEASONALITY_CLASSIFY_COT)),
        Feature::Anomaly => (ANOMALY_CLASSIFY, Some(ANOMALY_CLASSIFY_COT)),
        Feature::Volatility => (VOLATILITY_CLASSIFY, None),
        Feature::StructuralBreak => (BREAK_CLASSIFY, None),
        Feature::Stationarity => (STATIONARITY_CLASSIFY, None),
        Feature::Correlation => (CORRELATION_CLASSIFY, None),
        Feature::CrossCorrelation => (CROSS_CLASSIFY, None),
        Feature::FatTails | Feature::DynamicCorrelation | Feature::Position => return None,
    };
    Some(pick(style, zs, cot))
}

/// Retrieval question with `<date>` filled in.
pub fn retrieval_question(style: PromptStyle, query_date: &str) -> String {
    let text = match style {
        PromptStyle::ZeroShot => RETRIEVAL,
        PromptStyle::Cot => RETRIEVAL_COT,
    };
    text.replace("<date>", query_date)
}

pub fn search_question(value: &str, style: PromptStyle) -> String {
    pick(
        style,
        &format!("Question: does the value {value} appear in this time series? Only answer 'Yes' or 'No'."),
        None,
    )
}

pub fn text_matching_question(options: &[String], style: PromptStyle) -> String {
    let mut s = String::from("Question: which of the following descriptions best matches this time series?\n");
    for (i, o) in options.iter().enumerate() {
        s.push_str(&format!("({}) {o}\n", (b'a' + i as u8) as char));
    }
    s.push_str("Only answer (a), (b), (c), or (d).");
    match style {
        PromptStyle::ZeroShot => s,
        PromptStyle::Cot => s + COT_SUFFIX,
    }
}
