use rand::Rng;
use sha2::{Digest, Sha256};

use super::{choice, yes_no, Message, Solver, SolverError};
use crate::seed::rng_from;
use crate::tasks::{letter, TaskInstance, TaskKind};

/// Uniform guesses, reproducible per task id and seed.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomSolver {
    seed: u64,
}

impl RandomSolver {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }
}

impl Solver for RandomSolver {
    fn name(&self) -> &str {
        "random"
    }

    fn solve(&self, task: &TaskInstance, _messages: &[Message]) -> Result<String, SolverError> {
        let digest = Sha256::new()
            .chain_update(self.seed.to_le_bytes())
            .chain_update(task.id.as_bytes())
            .finalize();
        let mut rng = rng_from(u64::from_le_bytes(digest[..8].try_into().expect("8 bytes")));
        Ok(match task.task_kind {
            TaskKind::Detection | TaskKind::Search => yes_no(rng.random_bool(0.5)),
            TaskKind::Classification => {
                let n = task.feature.class_options().len().max(1);
                choice(letter(rng.random_range(0..n)))
            }
            TaskKind::TextMatchIntra | TaskKind::TextMatchCross => choice(letter(rng.random_range(0..4))),
            TaskKind::RetrievalBundle => "{}".to_string(),
        })
    }
}
