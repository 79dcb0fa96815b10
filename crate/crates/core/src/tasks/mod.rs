//! Task construction: prompts plus machine-checkable answer keys.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{format_value, parse, render, rendered, WireFormat};
use crate::sample::AnnotatedSample;
use crate::series::{index_of_date, quadrant_of, Quadrant, TimeSeries};
use crate::taxonomy::{DatasetKind, Feature};

mod plan;
pub mod prompts;

pub use plan::{build_tasks, pick_query_date, TaskPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Detection,
    Classification,
    RetrievalBundle,
    TextMatchIntra,
    TextMatchCross,
    Search,
}

impl TaskKind {
    pub const ALL: [TaskKind; 6] = [
        TaskKind::Detection,
        TaskKind::Classification,
        TaskKind::RetrievalBundle,
        TaskKind::TextMatchIntra,
        TaskKind::TextMatchCross,
        TaskKind::Search,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskKind::Detection => "detection",
            TaskKind::Classification => "classification",
            TaskKind::RetrievalBundle => "retrieval_bundle",
            TaskKind::TextMatchIntra => "text_match_intra",
            TaskKind::TextMatchCross => "text_match_cross",
            TaskKind::Search => "search",
        }
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.replace('-', "_");
        TaskKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown task kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptStyle {
    #[default]
    ZeroShot,
    Cot,
}

impl FromStr for PromptStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-shot" | "zero_shot" => Ok(PromptStyle::ZeroShot),
            "cot" => Ok(PromptStyle::Cot),
            other => Err(Error::Domain(format!("unknown prompt style `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    Intra,
    Cross,
}

/// A value with the date it occurs on, at rendered precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatedValue {
    pub value: f64,
    pub date: NaiveDate,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetrievalKey {
    pub max: DatedValue,
    pub min: DatedValue,
    pub value_on_date: DatedValue,
}

/// Answer key. Exactly one field is set for a given task kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yes_no: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retrieval: Option<RetrievalKey>,
    #[serde(default, rename = "match", skip_serializing_if = "Option::is_none")]
    pub matched: Option<char>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskInstance {
    pub id: String,
    pub sample_id: String,
    pub dataset_kind: DatasetKind,
    pub feature: Feature,
    pub task_kind: TaskKind,
    pub fmt: WireFormat,
    pub style: PromptStyle,
    /// Complete first-turn prompt.
    pub prompt: String,
    /// The question part of `prompt`, also used alone as a follow-up turn.
    pub question: String,
    pub key: GroundTruth,
    pub series_len: usize,
    /// Quadrant of the queried point, when the task has one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrant: Option<Quadrant>,
}

pub fn letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

const INPUT: &str = "Input:";
const SERIES_1: &str = "Time series 1:\n";
const SERIES_2: &str = "Time series 2:\n";

/// The series block of a prompt. Pairs are shown as two labeled blocks.
pub fn render_input(series: &TimeSeries, fmt: WireFormat) -> String {
    match series.second_channel() {
        None => render(series, fmt),
        Some(second) => {
            let a = render(series, fmt);
            let sep = if a.ends_with('\n') { "" } else { "\n" };
            format!("{SERIES_1}{a}{sep}{SERIES_2}{}", render(&second, fmt))
        }
    }
}

fn compose(input: &str, question: &str) -> String {
    format!("{INPUT}{input}.\n{question}")
}

/// Recover the series embedded in a task prompt.
pub fn extract_series(task: &TaskInstance) -> Result<TimeSeries> {
    let body = task
        .prompt
        .strip_prefix(INPUT)
        .and_then(|p| p.strip_suffix(&task.question))
        .and_then(|p| p.strip_suffix(".\n"))
        .ok_or_else(|| Error::Task(format!("task {}: prompt does not embed a series", task.id)))?;
    let parse_block = |s: &str| {
        parse(s, task.fmt).or_else(|e| match s.strip_suffix('\n') {
            Some(t) => parse(t, task.fmt),
            None => Err(e),
        })
    };
    match body.strip_prefix(SERIES_1) {
        None => parse_block(body),
        Some(rest) => {
            let (a, b) = rest
                .split_once(SERIES_2)
                .ok_or_else(|| Error::Task(format!("task {}: second series missing", task.id)))?;
            let first = parse_block(a)?;
            let second = parse_block(b)?;
            let mut out = first;
            out.values2 = Some(second.values.iter().map(|v| v.unwrap_or(f64::NAN)).collect());
            Ok(out)
        }
    }
}

fn base_task(
    sample: &AnnotatedSample,
    task_kind: TaskKind,
    id_suffix: &str,
    fmt: WireFormat,
    style: PromptStyle,
    input: &str,
    question: String,
    key: GroundTruth,
) -> TaskInstance {
    let mut id = format!("{}/{}", sample.id, task_kind);
    if !id_suffix.is_empty() {
        id.push('/');
        id.push_str(id_suffix);
    }
    TaskInstance {
        id,
        sample_id: sample.id.clone(),
        dataset_kind: sample.dataset_kind,
        feature: sample.label.feature,
        task_kind,
        fmt,
        style,
        prompt: compose(input, &question),
        question,
        key,
        series_len: sample.series.len(),
        quadrant: None,
    }
}

pub fn build_detection_task(sample: &AnnotatedSample, fmt: WireFormat, style: PromptStyle) -> Result<TaskInstance> {
    let feature = sample.label.feature;
    let question = prompts::detection_question(feature, style)
        .ok_or_else(|| Error::Task(format!("{feature} has no detection question")))?;
    let key = GroundTruth {
        yes_no: Some(feature.detection_answer(sample.label.sub_feature)),
        ..Default::default()
    };
    let input = render_input(&sample.series, fmt);
    Ok(base_task(sample, TaskKind::Detection, "", fmt, style, &input, question, key))
}

pub fn build_classification_task(
    sample: &AnnotatedSample,
    fmt: WireFormat,
    style: PromptStyle,
) -> Result<TaskInstance> {
    let feature = sample.label.feature;
    let sub = sample.label.sub_feature;
    let question = prompts::classification_question(feature, style)
        .ok_or_else(|| Error::Task(format!("{feature} has no classification question")))?;
    let pos = feature
        .class_options()
        .iter()
        .position(|s| *s == sub)
        .ok_or_else(|| Error::Task(format!("sample {}: {feature}/{sub} is not a classifiable class", sample.id)))?;
    let key = GroundTruth {
        choice: Some(letter(pos)),
        ..Default::default()
    };
    let input = render_input(&sample.series, fmt);
    Ok(base_task(sample, TaskKind::Classification, "", fmt, style, &input, question, key))
}

/// Max, min (earliest on ties) and the value on `query_date`, all on rendered values.
pub fn retrieval_key(series: &TimeSeries, query_date: NaiveDate) -> Result<RetrievalKey> {
    let at = |i: usize, v: f64| -> Result<DatedValue> {
        Ok(DatedValue {
            value: rendered(v),
            date: series.date_at(i)?,
            index: i,
        })
    };
    let mut max: Option<(usize, f64)> = None;
    let mut min: Option<(usize, f64)> = None;
    for (i, v) in series.observed() {
        let r = rendered(v);
        if max.is_none_or(|(_, m)| r > m) {
            max = Some((i, r));
        }
        if min.is_none_or(|(_, m)| r < m) {
            min = Some((i, r));
        }
    }
    let (max, min) = match (max, min) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Empty("series has no observed values")),
    };
    let q = index_of_date(series, query_date)
        .ok_or_else(|| Error::Task(format!("query date {query_date} outside the series")))?;
    let v = series.values[q].ok_or_else(|| Error::Task(format!("no observation on {query_date}")))?;
    Ok(RetrievalKey {
        max: at(max.0, max.1)?,
        min: at(min.0, min.1)?,
        value_on_date: at(q, v)?,
    })
}

/// Retrieval bundle on the primary channel.
pub fn build_retrieval_bundle(
    sample: &AnnotatedSample,
    fmt: WireFormat,
    style: PromptStyle,
    query_date: NaiveDate,
) -> Result<TaskInstance> {
    let series = sample.series.first_channel();
    let key = retrieval_key(&series, query_date)?;
    let question = prompts::retrieval_question(style, &query_date.to_string());
    let input = render(&series, fmt);
    let mut task = base_task(
        sample,
        TaskKind::RetrievalBundle,
        &query_date.to_string(),
        fmt,
        style,
        &input,
        question,
        GroundTruth {
            retrieval: Some(key),
            ..Default::default()
        },
    );
    task.quadrant = Some(quadrant_of(key.value_on_date.index, series.len())?);
    Ok(task)
}

/// Text-matching option for `sample`.
pub fn match_description(sample: &AnnotatedSample, mode: MatchMode) -> String {
    match mode {
        MatchMode::Intra => format!("{} {}", sample.qualitative, sample.quantitative),
        MatchMode::Cross => sample.qualitative.clone(),
    }
}

pub fn build_text_matching_task<R: Rng + ?Sized>(
    target: &AnnotatedSample,
    pool: &[&AnnotatedSample; 3],
    mode: MatchMode,
    fmt: WireFormat,
    style: PromptStyle,
    rng: &mut R,
) -> Result<TaskInstance> {
    let mut kinds: Vec<DatasetKind> = pool.iter().map(|s| s.dataset_kind).collect();
    kinds.push(target.dataset_kind);
    match mode {
        MatchMode::Intra if kinds.iter().any(|k| *k != target.dataset_kind) => {
            return Err(Error::Task("intra matching needs four samples of one dataset".into()))
        }
        MatchMode::Cross => {
            kinds.sort();
            kinds.dedup();
            if kinds.len() != 4 {
                return Err(Error::Task("cross matching needs four distinct datasets".into()));
            }
        }
        _ => {}
    }
    let mut options: Vec<(bool, String)> = std::iter::once((true, match_description(target, mode)))
        .chain(pool.iter().map(|s| (false, match_description(s, mode))))
        .collect();
    for i in 0..options.len() {
        for j in i + 1..options.len() {
            if options[i].1 == options[j].1 {
                return Err(Error::Task(format!(
                    "duplicate description in text-matching pool for {}",
                    target.id
                )));
            }
        }
    }
    options.shuffle(rng);
    let slot = options.iter().position(|o| o.0).expect("target among options");
    let texts: Vec<String> = options.into_iter().map(|o| o.1).collect();
    let (kind, suffix) = match mode {
        MatchMode::Intra => (TaskKind::TextMatchIntra, ""),
        MatchMode::Cross => (TaskKind::TextMatchCross, ""),
    };
    let question = prompts::text_matching_question(&texts, style);
    let input = render_input(&target.series, fmt);
    Ok(base_task(
        target,
        kind,
        suffix,
        fmt,
        style,
        &input,
        question,
        GroundTruth {
            matched: Some(letter(slot)),
            ..Default::default()
        },
    ))
}

/// Does `value` appear in the primary channel at rendered precision?
pub fn contains_value(series: &TimeSeries, value: f64) -> bool {
    let target = format_value(value);
    series.observed().any(|(_, v)| format_value(v) == target)
}

pub fn build_search_task(
    sample: &AnnotatedSample,
    target_value: f64,
    fmt: WireFormat,
    style: PromptStyle,
    quadrant: Option<Quadrant>,
) -> Result<TaskInstance> {
    let series = sample.series.first_channel();
    let shown = format_value(target_value);
    let key = GroundTruth {
        yes_no: Some(contains_value(&series, target_value)),
        ..Default::default()
    };
    let question = prompts::search_question(&shown, style);
    let suffix = match quadrant {
        Some(q) => format!("{q}/{shown}"),
        None => shown.clone(),
    };
    let input = render(&series, fmt);
    let mut task = base_task(sample, TaskKind::Search, &suffix, fmt, style, &input, question, key);
    task.quadrant = quadrant;
    Ok(task)
}
