use std::collections::BTreeMap;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use super::parse::ParsedRetrieval;
use crate::error::{Error, Result};
use crate::formats::rendered;
use crate::series::Quadrant;
use crate::tasks::RetrievalKey;

/// Largest quadrant accuracy gap that is not flagged as position bias.
pub const BIAS_THRESHOLD: f64 = 0.10;
/// Slack for floating-point accuracy differences at the threshold.
const BIAS_EPSILON: f64 = 1e-9;
const VALUE_TOLERANCE: f64 = 1e-6;
const MAPE_FLOOR: f64 = 1e-9;

/// Macro-averaged F1 over the classes present in `truths`.
/// A `None` prediction (parse failure) is wrong for every class.
pub fn f1_score<C: Ord + Clone>(preds: &[Option<C>], truths: &[C]) -> Result<f64> {
    if truths.is_empty() {
        return Err(Error::Empty("f1 needs at least one prediction"));
    }
    if preds.len() != truths.len() {
        return Err(Error::Domain(format!(
            "{} predictions for {} truths",
            preds.len(),
            truths.len()
        )));
    }
    // class -> (tp, fp, fn)
    let mut counts: BTreeMap<&C, (usize, usize, usize)> = truths.iter().map(|t| (t, (0, 0, 0))).collect();
    for (p, t) in preds.iter().zip(truths) {
        match p {
            Some(p) if p == t => counts.get_mut(t).unwrap().0 += 1,
            _ => {
                counts.get_mut(t).unwrap().2 += 1;
                if let Some(c) = p.as_ref().and_then(|p| counts.get_mut(p)) {
                    c.1 += 1;
                }
            }
        }
    }
    let sum: f64 = counts
        .values()
        .map(|&(tp, fp, fn_)| 2.0 * tp as f64 / (2 * tp + fp + fn_) as f64)
        .sum();
    Ok(sum / counts.len() as f64)
}

/// Fraction of `Some(true)`-matching outcomes; parse failures are wrong.
pub fn accuracy<C: PartialEq>(preds: &[Option<C>], truths: &[C]) -> Result<f64> {
    if truths.is_empty() {
        return Err(Error::Empty("accuracy needs at least one prediction"));
    }
    let hits = preds
        .iter()
        .zip(truths)
        .filter(|(p, t)| p.as_ref() == Some(*t))
        .count();
    Ok(hits as f64 / truths.len() as f64)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldScore {
    pub accuracy: f64,
    /// `None` when no value of this field parsed.
    pub mape: Option<f64>,
    /// Parse failures, counted wrong for accuracy and left out of MAPE.
    pub excluded: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RetrievalScores {
    pub n: usize,
    pub max_value: FieldScore,
    pub max_date: FieldScore,
    pub min_value: FieldScore,
    pub min_date: FieldScore,
    pub value_on_date: FieldScore,
    /// MAPE pooled over every parsed value field.
    pub mape: Option<f64>,
}

impl RetrievalScores {
    /// Mean of the five field accuracies.
    pub fn accuracy(&self) -> f64 {
        [
            &self.max_value,
            &self.max_date,
            &self.min_value,
            &self.min_date,
            &self.value_on_date,
        ]
        .iter()
        .map(|f| f.accuracy)
        .sum::<f64>()
            / 5.0
    }

    pub fn excluded(&self) -> usize {
        self.max_value.excluded + self.min_value.excluded + self.value_on_date.excluded
    }
}

pub fn value_correct(pred: Option<f64>, truth: f64) -> bool {
    pred.is_some_and(|p| p.is_finite() && (rendered(p) - rendered(truth)).abs() <= VALUE_TOLERANCE)
}

pub fn date_correct(pred: Option<&str>, truth: &chrono::NaiveDate) -> bool {
    pred == Some(truth.to_string().as_str())
}

fn value_field(pairs: &[(Option<f64>, f64)], pooled: &mut Vec<f64>) -> FieldScore {
    let hits = pairs.iter().filter(|(p, t)| value_correct(*p, *t)).count();
    let errs: Vec<f64> = pairs
        .iter()
        .filter_map(|(p, t)| p.filter(|p| p.is_finite()).map(|p| (p - t).abs() / t.abs().max(MAPE_FLOOR)))
        .collect();
    pooled.extend(&errs);
    FieldScore {
        accuracy: hits as f64 / pairs.len() as f64,
        mape: (!errs.is_empty()).then(|| errs.iter().sum::<f64>() / errs.len() as f64),
        excluded: pairs.len() - errs.len(),
    }
}

fn date_field(hits: usize, n: usize) -> FieldScore {
    FieldScore {
        accuracy: hits as f64 / n as f64,
        mape: None,
        excluded: 0,
    }
}

pub fn accuracy_and_mape(preds: &[ParsedRetrieval], keys: &[RetrievalKey]) -> Result<RetrievalScores> {
    if keys.is_empty() {
        return Err(Error::Empty("retrieval scoring needs at least one task"));
    }
    if preds.len() != keys.len() {
        return Err(Error::Domain(format!("{} predictions for {} keys", preds.len(), keys.len())));
    }
    let n = keys.len();
    let mut pooled = Vec::new();
    let pairs = |f: &dyn Fn(&ParsedRetrieval, &RetrievalKey) -> (Option<f64>, f64)| -> Vec<(Option<f64>, f64)> {
        preds.iter().zip(keys).map(|(p, k)| f(p, k)).collect()
    };
    let max_value = value_field(&pairs(&|p, k| (p.max.value, k.max.value)), &mut pooled);
    let min_value = value_field(&pairs(&|p, k| (p.min.value, k.min.value)), &mut pooled);
    let value_on_date = value_field(&pairs(&|p, k| (p.value_on_date, k.value_on_date.value)), &mut pooled);
    let date_hits = |f: &dyn Fn(&ParsedRetrieval, &RetrievalKey) -> bool| preds.iter().zip(keys).filter(|(p, k)| f(p, k)).count();
    let max_date = date_field(date_hits(&|p, k| date_correct(p.max.date.as_deref(), &k.max.date)), n);
    let min_date = date_field(date_hits(&|p, k| date_correct(p.min.date.as_deref(), &k.min.date)), n);
    Ok(RetrievalScores {
        n,
        max_value,
        max_date,
        min_value,
        min_date,
        value_on_date,
        mape: (!pooled.is_empty()).then(|| pooled.iter().sum::<f64>() / pooled.len() as f64),
    })
}

/// Counts of (truth, prediction) with a trailing "unparsed" column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    /// `counts[i][j]`: truth `classes[i]`, prediction `classes[j]`;
    /// column `classes.len()` holds failed or out-of-set predictions.
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("truth");
        for c in &self.classes {
            out.push(',');
            out.push_str(c);
        }
        out.push_str(",unparsed\n");
        for (c, row) in self.classes.iter().zip(&self.counts) {
            out.push_str(c);
            for x in row {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Truth classes missing from `classes` are appended in order of appearance.
pub fn confusion_matrix<C: PartialEq + Clone + Display>(
    preds: &[Option<C>],
    truths: &[C],
    classes: &[C],
) -> ConfusionMatrix {
    let mut classes = classes.to_vec();
    for t in truths {
        if !classes.contains(t) {
            classes.push(t.clone());
        }
    }
    let k = classes.len();
    let mut counts = vec![vec![0; k + 1]; k];
    for (p, t) in preds.iter().zip(truths) {
        let i = classes.iter().position(|c| c == t).unwrap();
        let j = p
            .as_ref()
            .and_then(|p| classes.iter().position(|c| c == p))
            .unwrap_or(k);
        counts[i][j] += 1;
    }
    ConfusionMatrix {
        classes: classes.iter().map(|c| c.to_string()).collect(),
        counts,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub per_quadrant: BTreeMap<Quadrant, f64>,
    pub counts: BTreeMap<Quadrant, usize>,
    /// Quadrants without any task; omitted from the gap.
    pub missing: Vec<Quadrant>,
    pub gap: f64,
    pub bias_flag: bool,
}

/// Per-quadrant accuracy; flags a gap above [`BIAS_THRESHOLD`].
pub fn position_bias_report(outcomes: &[(Quadrant, bool)]) -> BiasReport {
    let mut hits: BTreeMap<Quadrant, (usize, usize)> = BTreeMap::new();
    for (q, ok) in outcomes {
        let e = hits.entry(*q).or_default();
        e.0 += *ok as usize;
        e.1 += 1;
    }
    let per_quadrant: BTreeMap<Quadrant, f64> =
        hits.iter().map(|(q, (h, n))| (*q, *h as f64 / *n as f64)).collect();
    bias_from_accuracies(per_quadrant, hits.iter().map(|(q, (_, n))| (*q, *n)).collect())
}

/// Bias verdict for precomputed quadrant accuracies.
pub fn bias_from_accuracies(per_quadrant: BTreeMap<Quadrant, f64>, counts: BTreeMap<Quadrant, usize>) -> BiasReport {
    let missing = Quadrant::ALL
        .into_iter()
        .filter(|q| !per_quadrant.contains_key(q))
        .collect();
    let (lo, hi) = per_quadrant
        .values()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| (lo.min(*a), hi.max(*a)));
    let gap = if per_quadrant.is_empty() { 0.0 } else { hi - lo };
    BiasReport {
        per_quadrant,
        counts,
        missing,
        gap,
        bias_flag: gap > BIAS_THRESHOLD + BIAS_EPSILON,
    }
}
