//! Building task sets over whole datasets.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::*;
use crate::seed::{rng_from, sample_seed};
use crate::synth::positional::target_for_search;

/// Which tasks to build and how to render them.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskPlan {
    pub kinds: Vec<TaskKind>,
    pub fmt: WireFormat,
    pub style: PromptStyle,
    pub seed: u64,
    /// Cycle query points through the four quadrants instead of drawing
    /// them uniformly.
    pub stratify: bool,
}

impl Default for TaskPlan {
    fn default() -> Self {
        Self {
            kinds: vec![TaskKind::Detection, TaskKind::Classification, TaskKind::RetrievalBundle],
            fmt: WireFormat::Csv,
            style: PromptStyle::ZeroShot,
            seed: 0,
            stratify: false,
        }
    }
}

/// A date with an observation, uniformly within `quadrant` or the whole series.
pub fn pick_query_date<R: Rng + ?Sized>(
    series: &TimeSeries,
    quadrant: Option<Quadrant>,
    rng: &mut R,
) -> Result<NaiveDate> {
    let (lo, hi) = match quadrant {
        Some(q) => q.bounds(series.len()),
        None => (0, series.len()),
    };
    let candidates: Vec<usize> = (lo..hi).filter(|&i| series.values[i].is_some()).collect();
    if candidates.is_empty() {
        return Err(Error::Task("no observed date to query".into()));
    }
    series.date_at(candidates[rng.random_range(0..candidates.len())])
}

/// Tasks of every kind in `plan` for `samples`.
///
/// Cross-dataset matching draws its distractors from `others`, one sample
/// from each of three datasets other than the target's.
pub fn build_tasks(samples: &[AnnotatedSample], others: &[AnnotatedSample], plan: &TaskPlan) -> Result<Vec<TaskInstance>> {
    let mut out = Vec::new();
    let by_kind: BTreeMap<DatasetKind, Vec<&AnnotatedSample>> =
        others.iter().fold(BTreeMap::new(), |mut m, s| {
            m.entry(s.dataset_kind).or_insert_with(Vec::new).push(s);
            m
        });
    for kind in &plan.kinds {
        for (i, sample) in samples.iter().enumerate() {
            let mut rng = rng_from(sample_seed(plan.seed, sample.dataset_kind, ((*kind as u64) << 32) | i as u64));
            let quadrant = plan.stratify.then(|| Quadrant::from_index(i % 4).expect("index below 4"));
            let task = match kind {
                TaskKind::Detection => {
                    if !sample.label.feature.has_detection() {
                        continue;
                    }
                    build_detection_task(sample, plan.fmt, plan.style)?
                }
                TaskKind::Classification => {
                    let f = sample.label.feature;
                    if !f.class_options().contains(&sample.label.sub_feature) {
                        continue;
                    }
                    build_classification_task(sample, plan.fmt, plan.style)?
                }
                TaskKind::RetrievalBundle => {
                    let date = pick_query_date(&sample.series, quadrant, &mut rng)?;
                    build_retrieval_bundle(sample, plan.fmt, plan.style, date)?
                }
                TaskKind::Search => {
                    let q = quadrant.unwrap_or_else(|| {
                        Quadrant::from_index(rng.random_range(0..4)).expect("index below 4")
                    });
                    let present = if plan.stratify { (i / 4) % 2 == 0 } else { rng.random_bool(0.5) };
                    let target = target_for_search(&sample.series.first_channel(), q, present, &mut rng)?;
                    build_search_task(sample, target.value, plan.fmt, plan.style, Some(q))?
                }
                TaskKind::TextMatchIntra => {
                    let pool = intra_pool(samples, i, &mut rng)?;
                    build_text_matching_task(sample, &pool, MatchMode::Intra, plan.fmt, plan.style, &mut rng)?
                }
                TaskKind::TextMatchCross => {
                    let pool = cross_pool(sample, &by_kind, &mut rng)?;
                    build_text_matching_task(sample, &pool, MatchMode::Cross, plan.fmt, plan.style, &mut rng)?
                }
            };
            out.push(task);
        }
    }
    Ok(out)
}

const POOL_ATTEMPTS: usize = 100;

fn distinct(target: &AnnotatedSample, pool: &[&AnnotatedSample; 3], mode: MatchMode) -> bool {
    let mut seen = vec![match_description(target, mode)];
    for s in pool {
        let d = match_description(s, mode);
        if seen.contains(&d) {
            return false;
        }
        seen.push(d);
    }
    true
}

/// Three other samples of the same dataset, uniformly without replacement.
fn intra_pool<'a, R: Rng + ?Sized>(
    samples: &'a [AnnotatedSample],
    target: usize,
    rng: &mut R,
) -> Result<[&'a AnnotatedSample; 3]> {
    let t = &samples[target];
    let same: Vec<&AnnotatedSample> = samples
        .iter()
        .enumerate()
        .filter(|(j, s)| *j != target && s.dataset_kind == t.dataset_kind)
        .map(|(_, s)| s)
        .collect();
    if same.len() < 3 {
        return Err(Error::Task(format!("intra matching for {} needs three other samples", t.id)));
    }
    for _ in 0..POOL_ATTEMPTS {
        let idx = sample_indices(rng, same.len(), 3);
        let pool = [same[idx.index(0)], same[idx.index(1)], same[idx.index(2)]];
        if distinct(t, &pool, MatchMode::Intra) {
            return Ok(pool);
        }
    }
    Err(Error::Task(format!("no distinct distractors found for {}", t.id)))
}

/// One sample from each of three other datasets.
fn cross_pool<'a, R: Rng + ?Sized>(
    target: &AnnotatedSample,
    by_kind: &BTreeMap<DatasetKind, Vec<&'a AnnotatedSample>>,
    rng: &mut R,
) -> Result<[&'a AnnotatedSample; 3]> {
    let kinds: Vec<DatasetKind> = by_kind.keys().copied().filter(|k| *k != target.dataset_kind).collect();
    if kinds.len() < 3 {
        return Err(Error::Task(format!(
            "cross matching for {} needs three other datasets, got {}",
            target.id,
            kinds.len()
        )));
    }
    for _ in 0..POOL_ATTEMPTS {
        let idx = sample_indices(rng, kinds.len(), 3);
        let pick = |j: usize, rng: &mut R| {
            let v = &by_kind[&kinds[idx.index(j)]];
            v[rng.random_range(0..v.len())]
        };
        let pool = [pick(0, rng), pick(1, rng), pick(2, rng)];
        if distinct(target, &pool, MatchMode::Cross) {
            return Ok(pool);
        }
    }
    Err(Error::Task(format!("no distinct distractors found for {}", target.id)))
}
