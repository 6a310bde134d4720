use super::*;
use crate::household::{self, Size};
use crate::provider::MockProvider;

fn small_tasks(n: usize, seed: u64) -> (Domain, Vec<TaskRecord>) {
    let d = household::domain(Size::Small);
    let tasks = generate_dataset(
        &d,
        &SceneSource::Household(Size::Small),
        n,
        Difficulty::Medium,
        seed,
        &DatasetOptions::household(),
    )
    .unwrap();
    (d, tasks)
}

#[test]
fn oracle_runs_agree_on_cost() {
    let (d, tasks) = small_tasks(20, 11);
    let rows = run_benchmark(&d, &tasks, &BenchConfig::default()).unwrap();
    assert_eq!(rows.len(), 20 * 4);
    for t in &tasks {
        let cost = |a| {
            rows.iter()
                .find(|r| r.task == t.id && r.algorithm == a)
                .unwrap()
                .executed_cost
                .unwrap()
        };
        assert_eq!(cost(Algorithm::Obtea), t.optimal_cost, "{}", t.id);
        assert_eq!(cost(Algorithm::HbtpOptimal), t.optimal_cost, "{}", t.id);
    }
    assert!(rows.iter().all(|r| r.executed == Some(true)));
    let rep = report(&rows);
    assert_eq!(rep.len(), 4);
    assert!(rep.iter().all(|r| r.execution_failures == 0 && r.errors == 0));
}

#[test]
fn pruned_oracle_runs_solve_without_feedback() {
    let (d, tasks) = small_tasks(10, 12);
    let cfg = BenchConfig {
        algorithms: vec![Algorithm::HbtpSatisficing],
        mode: SpaceMode::Pruned,
        ..BenchConfig::default()
    };
    let rows = run_benchmark(&d, &tasks, &cfg).unwrap();
    for r in &rows {
        assert_eq!(r.solved_round, Some(0), "{}", r.task);
        assert!(r.space_actions < d.actions().len() / 4);
    }
    let rep = report(&rows);
    assert_eq!((rep[0].sr_nf, rep[0].sr_1f, rep[0].sr_3f), (1.0, 1.0, 1.0));
}

#[test]
fn outputs_are_reproducible() {
    let (d, tasks) = small_tasks(8, 13);
    let cfg = BenchConfig {
        provider: ProviderConfig::Mock(
            MockProvider::new(0.6, 0.2, 3)
                .unwrap()
                .with_oracle(OracleProvider::with_scope(OracleScope::GoalObjects)),
        ),
        mode: SpaceMode::Pruned,
        repetitions: 2,
        ..BenchConfig::default()
    };
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    write_outputs(&a, &d, &run_benchmark(&d, &tasks, &cfg).unwrap()).unwrap();
    let serial = BenchConfig { serial: true, ..cfg };
    write_outputs(&b, &d, &run_benchmark(&d, &tasks, &serial).unwrap()).unwrap();
    for f in ["runs.jsonl", "trees.jsonl", "report.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let rep = report(&dataset_free_rows(&a));
    for r in rep.iter().filter(|r| r.algorithm.uses_heuristic()) {
        assert!(r.sr_nf <= r.sr_1f && r.sr_1f <= r.sr_3f);
    }
}

fn dataset_free_rows(dir: &Path) -> Vec<RunRow> {
    std::fs::read_to_string(dir.join("runs.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn sweep_cells() {
    let (d, tasks) = small_tasks(6, 14);
    let cfg = SweepConfig {
        correct_rates: vec![0.0, 1.0],
        error_rates: vec![0.0],
        ..SweepConfig::default()
    };
    let rows = run_sweep(&d, &tasks, &cfg).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.solved, 6);
    }
    let s_exact = rows
        .iter()
        .find(|r| r.algorithm == Algorithm::HbtpSatisficing && r.correct_rate == 1.0)
        .unwrap();
    let s_none = rows
        .iter()
        .find(|r| r.algorithm == Algorithm::HbtpSatisficing && r.correct_rate == 0.0)
        .unwrap();
    assert!(s_exact.mean_explored < s_none.mean_explored);
    assert!(sweep_csv(&rows).starts_with("algorithm,correct_rate,error_rate,"));
}

