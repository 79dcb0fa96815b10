use super::{choice, format_retrieval, yes_no, Message, Solver, SolverError};
use crate::tasks::TaskInstance;

/// Answers from the task's key, in the form the parsers expect.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleSolver;

impl Solver for OracleSolver {
    fn name(&self) -> &str {
        "oracle"
    }

    fn solve(&self, task: &TaskInstance, _messages: &[Message]) -> Result<String, SolverError> {
        let k = &task.key;
        if let Some(b) = k.yes_no {
            Ok(yes_no(b))
        } else if let Some(c) = k.choice.or(k.matched) {
            Ok(choice(c))
        } else if let Some(r) = &k.retrieval {
            Ok(format_retrieval(r))
        } else {
            Err(SolverError::Input(format!("task {} has an empty key", task.id)))
        }
    }
}
