mod bench;
mod common;
mod step;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use common::Failure;

/// Flexible-commitment planner.
#[derive(Debug, Parser)]
#[command(name = "flecs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a plan.
    Solve(SolveArgs),
    /// Run a benchmark suite and write raw and aggregate CSV.
    Bench(bench::BenchArgs),
    /// Check a plan file against a problem.
    Validate(ValidateArgs),
    /// Make the planner's decisions by hand.
    Step(step::StepArgs),
    /// Write a generated domain and problem.
    Gen(bench::GenArgs),
}

#[derive(Debug, Args)]
pub struct SearchFlags {
    /// Toggle policy: saba, savta, schedule:PATH, script:PATH, interactive.
    #[arg(long, default_value = "saba")]
    pub strategy: String,
    /// Toggle schedule file; shorthand for --strategy schedule:PATH.
    #[arg(long, value_name = "PATH", conflicts_with = "strategy")]
    pub schedule: Option<PathBuf>,
    /// Goal selection policy: statement or depth-first.
    #[arg(long, default_value = "statement")]
    pub goal_policy: String,
    #[arg(long, default_value_t = 8)]
    pub depth_init: usize,
    #[arg(long, default_value_t = 8)]
    pub depth_increment: usize,
    /// Maximum committed decisions; 0 for no limit.
    #[arg(long, default_value_t = 1_000_000)]
    pub node_budget: u64,
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
    #[arg(long)]
    pub no_goal_loop: bool,
    #[arg(long)]
    pub no_state_loop: bool,
    #[arg(long)]
    pub no_independence: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    search: SearchFlags,
    /// Write the trace as JSON lines.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Also print the plan relaxed to a partial order.
    #[arg(long)]
    partial_order: bool,
    /// Also write the plan to this file.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    plan: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench::run(a),
        Command::Validate(a) => validate(a),
        Command::Step(a) => step::run(a),
        Command::Gen(a) => bench::gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("flecs: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn solve(a: SolveArgs) -> Result<u8, Failure> {
    let task = common::load_task(&a.domain, &a.problem)?;
    let mut strategy = common::strategy(&a.search)?;
    let config = common::config(&a.search);
    let result = match &a.trace {
        None => flecs::engine::search(&task, &mut strategy, &config),
        Some(path) => {
            let file = common::create(path)?;
            let mut sink = flecs::engine::JsonLinesSink::new(std::io::BufWriter::new(file));
            let result = flecs::engine::search_traced(&task, &mut strategy, &config, &mut sink);
            sink.finish()
                .map_err(|e| Failure::usage(anyhow::anyhow!("writing {}: {e}", path.display())))?;
            result
        }
    };
    let plan_text = common::plan_text(&task, &result.plan);
    if result.outcome.is_solved() {
        print!("{plan_text}");
        if let Some(out) = &a.out {
            std::fs::write(out, &plan_text)
                .map_err(|e| Failure::usage(anyhow::anyhow!("writing {}: {e}", out.display())))?;
        }
        if a.partial_order {
            let po = flecs::oracle::to_partial_order(&task, &result.plan)
                .map_err(|e| Failure::new(1, anyhow::anyhow!(e)))?;
            for line in po.render(&task).lines() {
                println!("; {line}");
            }
        }
    }
    print!("{}", common::stats_text(&strategy.describe(), &result));
    Ok(common::outcome_code(&result.outcome))
}

fn validate(a: ValidateArgs) -> Result<u8, Failure> {
    let task = common::load_task(&a.domain, &a.problem)?;
    let text = common::read(&a.plan)?;
    let steps = flecs::domain::parse_plan(&text).map_err(|e| {
        Failure::usage(anyhow::anyhow!("{}: {e}", a.plan.display()))
    })?;
    let (ops, report) = flecs::oracle::validate_steps(&task, &steps);
    println!("{}", report.describe(&task, &ops));
    Ok(if report.valid { 0 } else { 1 })
}
