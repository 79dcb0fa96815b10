use tsbench_core::eval::score;
use tsbench_core::run::{results_to_jsonl, run_tasks, RunOptions};
use tsbench_core::solvers::{OracleSolver, RandomSolver};
use tsbench_core::synth::{gen_dataset, GenConfig, SplitSizes};
use tsbench_core::tasks::{build_tasks, TaskPlan};
use tsbench_core::{DatasetKind, PromptStyle, TaskKind, WireFormat};

fn sizes() -> SplitSizes {
    SplitSizes {
        train: 10,
        validation: 5,
        test: 40,
    }
}

fn run_once(seed: u64, fmt: WireFormat) -> String {
    let cfg = GenConfig {
        base_seed: seed,
        ..Default::default()
    };
    let samples = gen_dataset(DatasetKind::Seasonality, sizes(), &cfg).unwrap();
    let plan = TaskPlan {
        kinds: vec![TaskKind::Detection, TaskKind::Classification, TaskKind::RetrievalBundle, TaskKind::Search],
        fmt,
        style: PromptStyle::Cot,
        seed,
        stratify: true,
    };
    let tasks = build_tasks(&samples, &[], &plan).unwrap();
    let results = run_tasks(&tasks, &RandomSolver::new(seed), RunOptions::default()).unwrap();
    results_to_jsonl(&results).unwrap()
}

#[test]
fn whole_pipeline_is_deterministic() {
    for fmt in WireFormat::ALL {
        assert_eq!(run_once(5, fmt), run_once(5, fmt), "{fmt}");
    }
    assert_ne!(run_once(5, WireFormat::Csv), run_once(6, WireFormat::Csv));
}

#[test]
fn oracle_is_perfect_everywhere() {
    for kind in DatasetKind::FEATURE_DATASETS {
        let samples = gen_dataset(kind, sizes(), &GenConfig::default()).unwrap();
        let plan = TaskPlan {
            kinds: vec![TaskKind::Detection, TaskKind::Classification, TaskKind::RetrievalBundle, TaskKind::Search],
            ..Default::default()
        };
        let tasks = build_tasks(&samples, &[], &plan).unwrap();
        let results = run_tasks(&tasks, &OracleSolver, RunOptions::default()).unwrap();
        let report = score(&results).unwrap();
        assert!(!report.bias_flag, "{kind}");
        for g in &report.groups {
            assert_eq!(g.parse_failures, 0, "{kind} {:?}", g.task_kind);
            assert_eq!(g.accuracy, 1.0, "{kind} {:?}", g.task_kind);
            if let Some(f1) = g.f1 {
                assert_eq!(f1, 1.0, "{kind} {:?}", g.task_kind);
            }
        }
    }
}
