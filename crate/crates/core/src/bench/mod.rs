//! Benchmark domain families, problem generators and the experiment
//! runner.

mod gen;
mod run;

pub use gen::{
    five_walls, fixture_task, gen_brushes, gen_dms1, gen_painting_colors, gen_random_goals,
    gen_rollers, gen_tiny, gen_use_once, GoalFamily, TinyShape, FIXTURE_DOMAIN, FIXTURE_PROBLEM,
    ROLLERS_DOMAIN,
};
pub use run::{
    aggregate, problem_seed, run_suite, suite_problems, write_csv, AggregateRow, Family,
    RunRecord, SuiteProblem, SuiteSpec,
};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("cannot draw {k} goals from {m}")]
    GoalCount { k: usize, m: usize },
    #[error("problems per point must be at least 1")]
    PerPoint,
    #[error("{0}")]
    Strategy(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(String),
}
