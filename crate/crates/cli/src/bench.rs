use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use flecs::bench::{
    aggregate, fixture_task, gen_brushes, gen_dms1, gen_painting_colors, gen_random_goals,
    gen_rollers, gen_use_once, run_suite, write_csv, Family, GoalFamily, SuiteSpec,
};
use flecs::domain::{write_domain, write_problem};
use flecs::engine::SearchConfig;
use flecs::strategy::Registry;

use crate::common::{self, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Dms1,
    UseOnce,
    Rollers,
    Fixture,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Goal counts: a range `1..15` or a list `2,4,8`.
    #[arg(long, default_value = "1..15", value_parser = parse_counts)]
    goals: Counts,
    #[arg(long, default_value_t = 10)]
    per_point: usize,
    /// Comma-separated toggle selectors.
    #[arg(long, default_value = "saba,savta", value_delimiter = ',')]
    strategies: Vec<String>,
    /// Operators in the dms1 domain.
    #[arg(long, default_value_t = 15)]
    m: usize,
    /// Operators in the use-once domain; goal objects come from --m.
    #[arg(long)]
    ops: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "statement")]
    goal_policy: String,
    #[arg(long, default_value_t = 256)]
    depth_init: usize,
    #[arg(long, default_value_t = 8)]
    depth_increment: usize,
    #[arg(long, default_value_t = 1_000_000)]
    node_budget: u64,
    #[arg(long)]
    no_goal_loop: bool,
    #[arg(long)]
    no_state_loop: bool,
    #[arg(long)]
    no_independence: bool,
    /// Output directory for `<suite>-raw.csv` and `<suite>-aggregate.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone)]
struct Counts(Vec<usize>);

fn parse_counts(s: &str) -> Result<Counts, String> {
    parse_count_list(s).map(Counts)
}

fn parse_count_list(s: &str) -> Result<Vec<usize>, String> {
    let bad = || format!("expected a range like 1..15 or a list like 2,4,8, got '{s}'");
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

fn suite_label(s: Suite) -> &'static str {
    match s {
        Suite::Dms1 => "dms1",
        Suite::UseOnce => "use-once",
        Suite::Rollers => "rollers",
        Suite::Fixture => "fixture",
    }
}

pub fn run(a: BenchArgs) -> Result<u8, Failure> {
    if a.per_point == 0 {
        return Err(Failure::usage(anyhow!("--per-point must be at least 1")));
    }
    if a.goals.0.iter().any(|&k| k == 0 || k > a.m) {
        return Err(Failure::usage(anyhow!("goal counts must lie in 1..={}", a.m)));
    }
    let family = match a.suite {
        Suite::Dms1 => Family::Dms1 { m: a.m },
        Suite::UseOnce => Family::UseOnce {
            ops: a.ops.unwrap_or(a.m),
            goals: a.m,
        },
        Suite::Rollers => Family::Rollers,
        Suite::Fixture => Family::Fixture,
    };
    let mut spec = SuiteSpec::new(family, a.goals.0.clone(), a.per_point, a.seed);
    spec.goal_policy = a.goal_policy.clone();
    let config = SearchConfig {
        depth_init: a.depth_init,
        depth_increment: a.depth_increment,
        node_budget: a.node_budget,
        goal_loop_pruning: !a.no_goal_loop,
        state_loop_pruning: !a.no_state_loop,
        independence_pruning: !a.no_independence,
        ..SearchConfig::default()
    };
    std::fs::create_dir_all(&a.out)
        .map_err(|e| Failure::usage(anyhow!("creating {}: {e}", a.out.display())))?;
    let label = suite_label(a.suite);
    let raw_path = a.out.join(format!("{label}-raw.csv"));
    let agg_path = a.out.join(format!("{label}-aggregate.csv"));
    // Open both outputs before running so an unwritable path fails fast.
    let raw = common::create(&raw_path)?;
    let agg = common::create(&agg_path)?;
    let records = run_suite(&spec, &a.strategies, &config, &Registry::builtin())
        .map_err(|e| Failure::usage(e.into()))?;
    write_csv(&records, raw).map_err(|e| Failure::usage(e.into()))?;
    let rows = aggregate(&records);
    write_csv(&rows, agg).map_err(|e| Failure::usage(e.into()))?;
    for r in &rows {
        println!(
            "size {:>3}  {:<24} solved {:>3}/{:<3} mean nodes {:>12.1}  mean backtracks {:>12.1}",
            r.size, r.strategy, r.solved, r.runs, r.mean_nodes, r.mean_backtracks
        );
    }
    println!("wrote {} and {}", raw_path.display(), agg_path.display());
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenFamily {
    Dms1,
    UseOnce,
    Rollers,
    Fixture,
    /// Painting domain with one brush and a colour per operator.
    Painting,
    /// Painting domain with single-use brushes.
    Brushes,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    family: GenFamily,
    /// Operators (dms1, use-once, brushes) or colours (painting).
    #[arg(long, default_value_t = 15)]
    m: usize,
    /// Goals to draw for dms1 and use-once problems; all when omitted.
    #[arg(long)]
    goals: Option<usize>,
    /// Walls as `wall:color` pairs, for rollers.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "wallA:red,wallB:red,wallC:red,wallD:green,wallE:green"
    )]
    walls: Vec<String>,
    #[arg(long, default_value_t = 2)]
    rollers: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::usage(anyhow!("writing {}: {e}", path.display())))
}

pub fn gen(a: GenArgs) -> Result<u8, Failure> {
    if a.m == 0 {
        return Err(Failure::usage(anyhow!("--m must be at least 1")));
    }
    let k = a.goals.unwrap_or(a.m);
    let drawn = |family, domain: flecs::domain::Domain| -> Result<_, Failure> {
        let p = gen_random_goals(family, a.m, a.m, k, a.seed).map_err(|e| Failure::usage(e.into()))?;
        Ok((domain, Some(p)))
    };
    let (domain, problem) = match a.family {
        GenFamily::Dms1 => drawn(GoalFamily::Dms1, gen_dms1(a.m))?,
        GenFamily::UseOnce => drawn(GoalFamily::UseOnce, gen_use_once(a.m))?,
        GenFamily::Rollers => {
            let mut walls = Vec::new();
            for w in &a.walls {
                let (wall, color) = w
                    .split_once(':')
                    .ok_or_else(|| Failure::usage(anyhow!("expected wall:color, got '{w}'")))?;
                walls.push((wall.trim(), color.trim()));
            }
            if walls.is_empty() || a.rollers == 0 {
                return Err(Failure::usage(anyhow!("need at least one wall and one roller")));
            }
            let (d, p) = gen_rollers(&walls, a.rollers);
            (d, Some(p))
        }
        GenFamily::Fixture => {
            let t = fixture_task();
            (t.domain().clone(), Some(t.problem().clone()))
        }
        GenFamily::Painting => {
            let colors: Vec<String> = (1..=a.m).map(|i| format!("color{i}")).collect();
            let refs: Vec<&str> = colors.iter().map(String::as_str).collect();
            (gen_painting_colors(&refs), None)
        }
        GenFamily::Brushes => (gen_brushes(a.m), None),
    };
    std::fs::create_dir_all(&a.out)
        .map_err(|e| Failure::usage(anyhow!("creating {}: {e}", a.out.display())))?;
    let dpath = a.out.join(format!("{}.domain", domain.name));
    write(&dpath, &write_domain(&domain))?;
    println!("{}", dpath.display());
    if let Some(p) = problem {
        let ppath = a.out.join(format!("{}.problem", p.name));
        write(&ppath, &write_problem(&p))?;
        println!("{}", ppath.display());
    }
    Ok(0)
}
