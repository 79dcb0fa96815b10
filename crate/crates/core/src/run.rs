//! Running task sets through a solver.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::{parse_yes_no, TaskResult};
use crate::solvers::{Message, Solver};
use crate::tasks::{TaskInstance, TaskKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Ask classification as a follow-up to the same sample's detection
    /// question, and only after the answer that leads to it.
    pub adaptive: bool,
    /// Worker threads issuing solver calls.
    pub workers: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            adaptive: true,
            workers: 4,
        }
    }
}

fn call(solver: &dyn Solver, task: &TaskInstance, messages: &[Message]) -> TaskResult {
    let outcome = solver.solve(task, messages).map_err(|e| {
        log::warn!("task {}: {e}", task.id);
        e.to_string()
    });
    TaskResult::new(task, outcome)
}

/// Run every task; results come back in task order. Solver failures are
/// recorded per task and do not stop the run.
pub fn run_tasks(tasks: &[TaskInstance], solver: &dyn Solver, opts: RunOptions) -> Result<Vec<TaskResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::Task(format!("cannot start workers: {e}")))?;
    let detection: HashMap<&str, &TaskInstance> = tasks
        .iter()
        .filter(|t| t.task_kind == TaskKind::Detection)
        .map(|t| (t.sample_id.as_str(), t))
        .collect();
    let follows = |t: &TaskInstance| opts.adaptive && t.task_kind == TaskKind::Classification && detection.contains_key(t.sample_id.as_str());

    // first turns
    let mut results: Vec<Option<TaskResult>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| (!follows(t)).then(|| call(solver, t, &[Message::user(&t.prompt)])))
            .collect()
    });
    let answers: HashMap<&str, (&TaskInstance, Option<String>)> = tasks
        .iter()
        .zip(&results)
        .filter(|(t, _)| t.task_kind == TaskKind::Detection)
        .map(|(t, r)| (t.sample_id.as_str(), (t, r.as_ref().and_then(|r| r.response.clone()))))
        .collect();

    // follow-up turns
    let second: Vec<(usize, TaskResult)> = pool.install(|| {
        tasks
            .par_iter()
            .enumerate()
            .filter(|(_, t)| follows(t))
            .map(|(i, t)| {
                let (det, reply) = &answers[t.sample_id.as_str()];
                let go_on = reply
                    .as_deref()
                    .and_then(parse_yes_no)
                    .is_some_and(|a| a == t.feature.follow_up_answer());
                if !go_on {
                    return (i, TaskResult::skipped(t));
                }
                let messages = [
                    Message::user(&det.prompt),
                    Message::assistant(reply.clone().unwrap_or_default()),
                    Message::user(&t.question),
                ];
                (i, call(solver, t, &messages))
            })
            .collect()
    });
    for (i, r) in second {
        results[i] = Some(r);
    }
    Ok(results.into_iter().map(|r| r.expect("every task answered")).collect())
}

/// Results as JSONL, one per line.
pub fn results_to_jsonl(results: &[TaskResult]) -> Result<String> {
    let mut out = String::new();
    for r in results {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn results_from_jsonl(text: &str) -> Result<Vec<TaskResult>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{OracleSolver, SolverError};
    use crate::synth::{gen_split, GenConfig};
    use crate::tasks::{build_tasks, TaskPlan};
    use crate::taxonomy::{DatasetKind, Split};
    use std::sync::Mutex;

    /// Always answers "No" and records every conversation.
    struct Naysayer(Mutex<Vec<usize>>);

    impl Solver for Naysayer {
        fn name(&self) -> &str {
            "naysayer"
        }

        fn solve(&self, _task: &TaskInstance, messages: &[Message]) -> std::result::Result<String, SolverError> {
            self.0.lock().unwrap().push(messages.len());
            Ok("No".into())
        }
    }

    fn tasks() -> Vec<TaskInstance> {
        let samples = gen_split(DatasetKind::Trend, Split::Test, 12, &GenConfig::default()).unwrap();
        build_tasks(&samples, &[], &TaskPlan::default()).unwrap()
    }

    #[test]
    fn adaptive_flow_skips_after_no() {
        let tasks = tasks();
        let solver = Naysayer(Mutex::new(Vec::new()));
        let results = run_tasks(&tasks, &solver, RunOptions::default()).unwrap();
        let calls = solver.0.lock().unwrap();
        assert!(calls.iter().all(|n| *n == 1), "no classification turn may be sent");
        assert!(results
            .iter()
            .filter(|r| r.task_kind == TaskKind::Classification)
            .all(|r| r.skipped));
    }

    #[test]
    fn oracle_follow_ups_are_multi_turn() {
        let tasks = tasks();
        let results = run_tasks(&tasks, &OracleSolver, RunOptions::default()).unwrap();
        assert_eq!(results.len(), tasks.len());
        let cls: Vec<_> = results.iter().filter(|r| r.task_kind == TaskKind::Classification).collect();
        assert!(!cls.is_empty());
        assert!(cls.iter().all(|r| !r.skipped && r.response.is_some()));
        let text = results_to_jsonl(&results).unwrap();
        assert_eq!(results_from_jsonl(&text).unwrap(), results);
    }
}
