use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{Domain, ProblemDef, Task};
use crate::engine::{search, Outcome, SearchConfig};
use crate::oracle::validate_plan;
use crate::strategy::Registry;

use super::gen::{five_walls, fixture_task, gen_dms1, gen_random_goals, gen_use_once, GoalFamily};
use super::BenchError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `m` operators; goal counts drawn from `1..=m`.
    Dms1 { m: usize },
    /// `ops` single-use operators and `goals` goal objects.
    UseOnce { ops: usize, goals: usize },
    /// The five-wall, two-roller problem.
    Rollers,
    /// The seven-goal worked example.
    Fixture,
}

impl Family {
    pub fn label(&self) -> &'static str {
        match self {
            Family::Dms1 { .. } => "dms1",
            Family::UseOnce { .. } => "use-once",
            Family::Rollers => "rollers",
            Family::Fixture => "fixture",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub family: Family,
    /// Goal counts to sweep; ignored by the single-problem families.
    pub goal_counts: Vec<usize>,
    pub per_point: usize,
    pub seed: u64,
    /// Goal policy name used for every strategy.
    pub goal_policy: String,
}

impl SuiteSpec {
    pub fn new(family: Family, goal_counts: Vec<usize>, per_point: usize, seed: u64) -> Self {
        SuiteSpec {
            family,
            goal_counts,
            per_point,
            seed,
            goal_policy: "statement".into(),
        }
    }
}

/// One generated problem of a suite.
#[derive(Debug, Clone)]
pub struct SuiteProblem {
    pub size: usize,
    pub problem_id: usize,
    pub seed: u64,
    pub domain: Domain,
    pub problem: ProblemDef,
}

/// Per-problem seed: fixed function of suite seed, size and index.
pub fn problem_seed(seed: u64, size: usize, id: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        .wrapping_add((size as u64) << 20)
        .wrapping_add(id as u64)
}

/// Expands a suite into its problems, ordered by (size, problem id).
pub fn suite_problems(spec: &SuiteSpec) -> Result<Vec<SuiteProblem>, BenchError> {
    if spec.per_point == 0 {
        return Err(BenchError::PerPoint);
    }
    let mut out = Vec::new();
    match &spec.family {
        Family::Dms1 { m } | Family::UseOnce { goals: m, .. } => {
            let (gf, domain, ops) = match spec.family {
                Family::Dms1 { m } => (GoalFamily::Dms1, gen_dms1(m), m),
                Family::UseOnce { ops, .. } => (GoalFamily::UseOnce, gen_use_once(ops), ops),
                _ => unreachable!(),
            };
            for &k in &spec.goal_counts {
                for id in 0..spec.per_point {
                    let seed = problem_seed(spec.seed, k, id);
                    let problem = gen_random_goals(gf, *m, ops, k, seed)?;
                    out.push(SuiteProblem {
                        size: k,
                        problem_id: id,
                        seed,
                        domain: domain.clone(),
                        problem,
                    });
                }
            }
        }
        Family::Rollers => {
            let (domain, problem) = five_walls();
            out.push(SuiteProblem {
                size: problem.goal.len(),
                problem_id: 0,
                seed: spec.seed,
                domain,
                problem,
            });
        }
        Family::Fixture => {
            let t = fixture_task();
            out.push(SuiteProblem {
                size: t.goal().len(),
                problem_id: 0,
                seed: spec.seed,
                domain: t.domain().clone(),
                problem: t.problem().clone(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub family: String,
    pub size: usize,
    pub problem_id: usize,
    pub strategy: String,
    pub seed: u64,
    /// Search outcome label, or `invalid-plan` if a returned plan failed
    /// validation.
    pub outcome: String,
    pub plan_length: usize,
    pub nodes: u64,
    pub backtracks: u64,
    pub subgoal_steps: u64,
    pub apply_steps: u64,
    pub elapsed_ms: u64,
    #[serde(skip)]
    pub invariant_violations: u64,
}

/// Runs every problem under every strategy selector. Runs are independent
/// and execute in parallel; output is ordered by (size, problem id,
/// strategy position).
pub fn run_suite(
    spec: &SuiteSpec,
    strategies: &[String],
    config: &SearchConfig,
    registry: &Registry,
) -> Result<Vec<RunRecord>, BenchError> {
    let problems = suite_problems(spec)?;
    // Build every strategy once up front so selector errors surface before
    // any search starts.
    for s in strategies {
        registry
            .strategy(s, &spec.goal_policy, "conspiracy", "threat")
            .map_err(|e| BenchError::Strategy(e.to_string()))?;
    }
    let jobs: Vec<(&SuiteProblem, &String)> = problems
        .iter()
        .flat_map(|p| strategies.iter().map(move |s| (p, s)))
        .collect();
    let family = spec.family.label();
    let records = jobs
        .par_iter()
        .map(|(p, selector)| {
            let task = Task::new(p.domain.clone(), p.problem.clone());
            let mut strategy = registry
                .strategy(selector, &spec.goal_policy, "conspiracy", "threat")
                .expect("validated above");
            let started = Instant::now();
            let result = search(&task, &mut strategy, config);
            let elapsed_ms = started.elapsed().as_millis() as u64;
            let outcome = if result.outcome == Outcome::Solved
                && !validate_plan(&task, &result.plan).valid
            {
                "invalid-plan".to_string()
            } else {
                result.outcome.label().to_string()
            };
            RunRecord {
                family: family.to_string(),
                size: p.size,
                problem_id: p.problem_id,
                strategy: (*selector).clone(),
                seed: p.seed,
                outcome,
                plan_length: result.plan.len(),
                nodes: result.stats.nodes,
                backtracks: result.stats.backtracks,
                subgoal_steps: result.stats.subgoal_steps,
                apply_steps: result.stats.apply_steps,
                elapsed_ms,
                invariant_violations: result.stats.invariant_violations,
            }
        })
        .collect();
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub size: usize,
    pub strategy: String,
    pub runs: usize,
    pub solved: usize,
    pub mean_nodes: f64,
    pub min_nodes: u64,
    pub max_nodes: u64,
    pub mean_backtracks: f64,
}

/// Per (size, strategy) summary, sizes ascending, strategies in first-seen
/// order.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        let si = match order.iter().position(|s| *s == r.strategy) {
            Some(i) => i,
            None => {
                order.push(r.strategy.clone());
                order.len() - 1
            }
        };
        groups.entry((r.size, si)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((size, si), rs)| {
            let n = rs.len();
            AggregateRow {
                size,
                strategy: order[si].clone(),
                runs: n,
                solved: rs.iter().filter(|r| r.outcome == "solved").count(),
                mean_nodes: rs.iter().map(|r| r.nodes as f64).sum::<f64>() / n as f64,
                min_nodes: rs.iter().map(|r| r.nodes).min().unwrap_or(0),
                max_nodes: rs.iter().map(|r| r.nodes).max().unwrap_or(0),
                mean_backtracks: rs.iter().map(|r| r.backtracks as f64).sum::<f64>() / n as f64,
            }
        })
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| BenchError::Io(e.to_string()))?;
    Ok(())
}
