//! Scoring of solver responses.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::WireFormat;
use crate::series::{quadrant_of, Quadrant};
use crate::tasks::{letter, GroundTruth, PromptStyle, TaskInstance, TaskKind};
use crate::taxonomy::DatasetKind;

mod metrics;
mod parse;

pub use metrics::{
    accuracy, accuracy_and_mape, bias_from_accuracies, confusion_matrix, date_correct, f1_score,
    position_bias_report, value_correct, BiasReport, ConfusionMatrix, FieldScore, RetrievalScores,
    BIAS_THRESHOLD,
};
pub use parse::{parse_choice, parse_retrieval, parse_yes_no, ParsedPoint, ParsedRetrieval};

/// Outcome of one task in a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskResult {
    pub task_id: String,
    pub dataset_kind: DatasetKind,
    pub task_kind: TaskKind,
    pub fmt: WireFormat,
    pub style: PromptStyle,
    pub key: GroundTruth,
    pub series_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrant: Option<Quadrant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Classification not asked because detection was answered negatively.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
}

impl TaskResult {
    pub fn new(task: &TaskInstance, response: std::result::Result<String, String>) -> Self {
        let (response, error) = match response {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e)),
        };
        Self {
            task_id: task.id.clone(),
            dataset_kind: task.dataset_kind,
            task_kind: task.task_kind,
            fmt: task.fmt,
            style: task.style,
            key: task.key.clone(),
            series_len: task.series_len,
            quadrant: task.quadrant,
            response,
            error,
            skipped: false,
        }
    }

    pub fn skipped(task: &TaskInstance) -> Self {
        Self {
            skipped: true,
            ..Self::new(task, Err("not asked".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupScore {
    pub task_kind: TaskKind,
    pub dataset_kind: DatasetKind,
    /// Tasks scored (skipped tasks excluded).
    pub n: usize,
    pub f1: Option<f64>,
    pub accuracy: f64,
    pub mape: Option<f64>,
    pub parse_failures: usize,
    pub solver_errors: usize,
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retrieval: Option<RetrievalScores>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedBias {
    pub name: String,
    #[serde(flatten)]
    pub report: BiasReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub groups: Vec<GroupScore>,
    pub position: Vec<NamedBias>,
    /// True when any position report is flagged.
    pub bias_flag: bool,
}

fn yes_no_str(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn score_group(task_kind: TaskKind, dataset_kind: DatasetKind, results: &[&TaskResult]) -> Result<GroupScore> {
    let skipped = results.iter().filter(|r| r.skipped).count();
    let live: Vec<&&TaskResult> = results.iter().filter(|r| !r.skipped).collect();
    let solver_errors = live.iter().filter(|r| r.response.is_none()).count();
    let text = |r: &TaskResult| r.response.clone().unwrap_or_default();
    let mut g = GroupScore {
        task_kind,
        dataset_kind,
        n: live.len(),
        f1: None,
        accuracy: 0.0,
        mape: None,
        parse_failures: 0,
        solver_errors,
        skipped,
        retrieval: None,
        confusion: None,
    };
    if live.is_empty() {
        return Ok(g);
    }
    let missing = |what: &str| Error::Task(format!("{task_kind} result without a {what} key"));
    match task_kind {
        TaskKind::Detection | TaskKind::Search => {
            let truths: Vec<&str> = live
                .iter()
                .map(|r| r.key.yes_no.map(yes_no_str).ok_or_else(|| missing("yes/no")))
                .collect::<Result<_>>()?;
            let preds: Vec<Option<&str>> = live.iter().map(|r| parse_yes_no(&text(r)).map(yes_no_str)).collect();
            g.parse_failures = preds.iter().zip(&live).filter(|(p, r)| p.is_none() && r.response.is_some()).count();
            g.f1 = Some(f1_score(&preds, &truths)?);
            g.accuracy = accuracy(&preds, &truths)?;
            g.confusion = Some(confusion_matrix(&preds, &truths, &["yes", "no"]));
        }
        TaskKind::Classification | TaskKind::TextMatchIntra | TaskKind::TextMatchCross => {
            let truths: Vec<char> = live
                .iter()
                .map(|r| r.key.choice.or(r.key.matched).ok_or_else(|| missing("choice")))
                .collect::<Result<_>>()?;
            let preds: Vec<Option<char>> = live.iter().map(|r| parse_choice(&text(r))).collect();
            g.parse_failures = preds.iter().zip(&live).filter(|(p, r)| p.is_none() && r.response.is_some()).count();
            let options = match task_kind {
                TaskKind::Classification => dataset_kind.feature().class_options().len(),
                _ => 4,
            };
            let classes: Vec<char> = (0..options).map(letter).collect();
            g.f1 = Some(f1_score(&preds, &truths)?);
            g.accuracy = accuracy(&preds, &truths)?;
            g.confusion = Some(confusion_matrix(&preds, &truths, &classes));
        }
        TaskKind::RetrievalBundle => {
            let keys: Vec<_> = live
                .iter()
                .map(|r| r.key.retrieval.ok_or_else(|| missing("retrieval")))
                .collect::<Result<_>>()?;
            let preds: Vec<ParsedRetrieval> = live.iter().map(|r| parse_retrieval(&text(r))).collect();
            g.parse_failures = preds
                .iter()
                .zip(&live)
                .filter(|(p, r)| {
                    r.response.is_some()
                        && (p.max.value.is_none()
                            || p.max.date.is_none()
                            || p.min.value.is_none()
                            || p.min.date.is_none()
                            || p.value_on_date.is_none())
                })
                .count();
            let s = accuracy_and_mape(&preds, &keys)?;
            g.accuracy = s.accuracy();
            g.mape = s.mape;
            g.retrieval = Some(s);
        }
    }
    Ok(g)
}

/// Quadrant outcomes of every task that targets a position.
fn position_outcomes(results: &[&TaskResult]) -> Result<BTreeMap<String, Vec<(Quadrant, bool)>>> {
    let mut out: BTreeMap<String, Vec<(Quadrant, bool)>> = BTreeMap::new();
    for r in results.iter().filter(|r| !r.skipped) {
        let text = r.response.clone().unwrap_or_default();
        let mut push = |field: &str, q: Quadrant, ok: bool| {
            out.entry(format!("{}/{}{field}", r.dataset_kind, r.task_kind))
                .or_default()
                .push((q, ok));
        };
        match (r.task_kind, r.key.retrieval, r.key.yes_no) {
            (TaskKind::RetrievalBundle, Some(k), _) => {
                let p = parse_retrieval(&text);
                push(
                    "/max",
                    quadrant_of(k.max.index, r.series_len)?,
                    value_correct(p.max.value, k.max.value) && date_correct(p.max.date.as_deref(), &k.max.date),
                );
                push(
                    "/min",
                    quadrant_of(k.min.index, r.series_len)?,
                    value_correct(p.min.value, k.min.value) && date_correct(p.min.date.as_deref(), &k.min.date),
                );
                push(
                    "/value_on_date",
                    quadrant_of(k.value_on_date.index, r.series_len)?,
                    value_correct(p.value_on_date, k.value_on_date.value),
                );
            }
            (TaskKind::Search, _, Some(truth)) => {
                if let Some(q) = r.quadrant {
                    push("", q, parse_yes_no(&text) == Some(truth));
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Score a finished run. Results are sorted by task id first, so the report
/// does not depend on completion order.
pub fn score(results: &[TaskResult]) -> Result<EvalReport> {
    if results.is_empty() {
        return Err(Error::Empty("no results to score"));
    }
    let mut sorted: Vec<&TaskResult> = results.iter().collect();
    sorted.sort_by(|a, b| a.task_id.cmp(&b.task_id));
    let mut groups: BTreeMap<(TaskKind, DatasetKind), Vec<&TaskResult>> = BTreeMap::new();
    for r in &sorted {
        groups.entry((r.task_kind, r.dataset_kind)).or_default().push(r);
    }
    let groups = groups
        .into_iter()
        .map(|((t, d), rs)| score_group(t, d, &rs))
        .collect::<Result<Vec<_>>>()?;
    let position: Vec<NamedBias> = position_outcomes(&sorted)?
        .into_iter()
        .map(|(name, o)| NamedBias {
            name,
            report: position_bias_report(&o),
        })
        .collect();
    Ok(EvalReport {
        bias_flag: position.iter().any(|b| b.report.bias_flag),
        groups,
        position,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or("-".into(), |v| format!("{v:.4}"))
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
    out
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Aligned plain-text tables.
    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .groups
            .iter()
            .map(|g| {
                vec![
                    g.task_kind.to_string(),
                    g.dataset_kind.to_string(),
                    g.n.to_string(),
                    opt(g.f1),
                    format!("{:.4}", g.accuracy),
                    opt(g.mape),
                    g.parse_failures.to_string(),
                    g.solver_errors.to_string(),
                    g.skipped.to_string(),
                ]
            })
            .collect();
        let mut out = table(
            &["task", "dataset", "n", "f1", "accuracy", "mape", "unparsed", "errors", "skipped"],
            &rows,
        );
        if !self.position.is_empty() {
            let rows: Vec<Vec<String>> = self
                .position
                .iter()
                .map(|b| {
                    let mut row = vec![b.name.clone()];
                    for q in Quadrant::ALL {
                        row.push(opt(b.report.per_quadrant.get(&q).copied()));
                    }
                    row.push(format!("{:.4}", b.report.gap));
                    row.push(if b.report.bias_flag { "yes".into() } else { "no".into() });
                    row
                })
                .collect();
            out.push('\n');
            out.push_str(&table(&["position", "Q1", "Q2", "Q3", "Q4", "gap", "biased"], &rows));
        }
        out
    }

    /// Every confusion matrix as CSV, each block preceded by a `# name` line.
    pub fn confusion_csv(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            if let Some(m) = &g.confusion {
                let _ = writeln!(out, "# {}/{}", g.dataset_kind, g.task_kind);
                out.push_str(&m.to_csv());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::{DatedValue, RetrievalKey};

    fn result(id: &str, kind: TaskKind, key: GroundTruth, response: Option<&str>) -> TaskResult {
        TaskResult {
            task_id: id.into(),
            dataset_kind: DatasetKind::Trend,
            task_kind: kind,
            fmt: WireFormat::Csv,
            style: PromptStyle::ZeroShot,
            key,
            series_len: 8,
            quadrant: None,
            response: response.map(String::from),
            error: response.is_none().then(|| "timeout".to_string()),
            skipped: false,
        }
    }

    fn yes(b: bool) -> GroundTruth {
        GroundTruth {
            yes_no: Some(b),
            ..Default::default()
        }
    }

    #[test]
    fn detection_group() {
        let rs = vec![
            result("1", TaskKind::Detection, yes(true), Some("Yes")),
            result("2", TaskKind::Detection, yes(false), Some("No.")),
            result("3", TaskKind::Detection, yes(true), Some("maybe")),
            result("4", TaskKind::Detection, yes(false), None),
        ];
        let r = score(&rs).unwrap();
        let g = &r.groups[0];
        assert_eq!((g.n, g.parse_failures, g.solver_errors), (4, 1, 1));
        assert_eq!(g.accuracy, 0.5);
        assert_eq!(g.confusion.as_ref().unwrap().total(), 4);
        assert!(r.to_text().lines().next().unwrap().starts_with("task"));
        assert!(r.confusion_csv().starts_with("# trend/detection\ntruth,yes,no,unparsed\n"));
    }

    #[test]
    fn retrieval_positions() {
        let d = |i: usize, v: f64| DatedValue {
            value: v,
            date: crate::series::TimeSeries::new("2020-01-01".parse().unwrap(), vec![0.0; 8])
                .date_at(i)
                .unwrap(),
            index: i,
        };
        let key = GroundTruth {
            retrieval: Some(RetrievalKey {
                max: d(7, 9.0),
                min: d(0, 1.0),
                value_on_date: d(3, 4.0),
            }),
            ..Default::default()
        };
        let reply = "{'max_value': {'value': 9, 'date': '2020-01-08'}, 'min_value': {'value': 2, 'date': '2020-01-01'}, 'value_on_date 2020-01-04': {'value': 4}}";
        let r = score(&[result("1", TaskKind::RetrievalBundle, key, Some(reply))]).unwrap();
        let max = r.position.iter().find(|b| b.name.ends_with("/max")).unwrap();
        assert_eq!(max.report.per_quadrant[&Quadrant::Q4], 1.0);
        let min = r.position.iter().find(|b| b.name.ends_with("/min")).unwrap();
        assert_eq!(min.report.per_quadrant[&Quadrant::Q1], 0.0);
        let s = r.groups[0].retrieval.as_ref().unwrap();
        assert_eq!(s.min_value.accuracy, 0.0);
        assert_eq!(s.min_date.accuracy, 1.0);
    }
}
