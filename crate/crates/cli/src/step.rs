use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use flecs::domain::{Lit, Task};
use flecs::engine::{JsonLinesSink, Phase, Prompt, SearchResult, Stepper, TraceEvent, TraceSink};
use flecs::strategy::{Answer, ChoiceScript};

use crate::common::{self, Failure};
use crate::SearchFlags;

#[derive(Debug, Args)]
pub struct StepArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    search: SearchFlags,
    /// Trace file for the search run by `auto` or at the end of the walk.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Save the recorded decision script here instead of asking.
    #[arg(long, value_name = "PATH")]
    save: Option<PathBuf>,
}

const HELP: &str = "\
answers:  sub | app          at a subgoal-or-apply prompt
          N | name(args)     pick a candidate by position or by name
commands: auto               let the strategy finish from here
          undo               take back the last answer
          script             show the answers recorded so far
          quit               stop without a plan";

pub fn run(a: StepArgs) -> Result<u8, Failure> {
    let task = common::load_task(&a.domain, &a.problem)?;
    let strategy = common::strategy(&a.search)?;
    let config = common::config(&a.search);
    let mut stepper = Stepper::new(&task, strategy, config);
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut shown = None;
    loop {
        if shown != Some(stepper.depth()) {
            show(&task, &stepper);
            shown = Some(stepper.depth());
        }
        let prompt = stepper.prompt();
        match &prompt {
            Prompt::Terminal => {
                println!("goal statement satisfied");
                let result = finish(&task, &a, &mut stepper, false)?;
                return save(&a, &mut input, &result.0).map(|_| common::outcome_code(&result.1.outcome));
            }
            Prompt::DeadEnd(why) => println!("dead end: {why}; undo to continue"),
            Prompt::Phase { suggested } => {
                println!("subgoal or apply? the toggle suggests {}", answer_word(*suggested));
            }
            Prompt::Choose {
                candidates,
                forced: true,
                phase,
                ..
            } => {
                println!("{} (forced): {}", phase.as_str(), task.op_name(candidates[0]));
                stepper.answer(&Answer::Index(1)).map_err(|e| Failure::new(1, anyhow!(e)))?;
                continue;
            }
            Prompt::Choose {
                phase,
                goal,
                candidates,
                ..
            } => {
                match goal {
                    Some(g) => println!("{} for {}:", phase.as_str(), task.lit_name(*g)),
                    None => println!("{}:", phase.as_str()),
                }
                for (i, &o) in candidates.iter().enumerate() {
                    println!("  {}) {}", i + 1, task.op_name(o));
                }
            }
        }
        let Some(line) = read_line(&mut input, "> ")? else {
            eprintln!("end of input");
            return Ok(2);
        };
        match line.as_str() {
            "" => {}
            "help" | "?" => println!("{HELP}"),
            "quit" | "q" => return Ok(2),
            "script" => print!("{}", stepper.script().render()),
            "undo" => {
                if stepper.undo() {
                    // Forced choices would be replayed at once; back out
                    // through them to the last real decision.
                    while matches!(stepper.prompt(), Prompt::Choose { forced: true, .. }) {
                        if !stepper.undo() {
                            break;
                        }
                    }
                    shown = None;
                } else {
                    println!("nothing to undo");
                }
            }
            "auto" => {
                let result = finish(&task, &a, &mut stepper, true)?;
                return save(&a, &mut input, &result.0).map(|_| common::outcome_code(&result.1.outcome));
            }
            text => match text.parse::<Answer>() {
                Ok(Answer::Auto) => unreachable!("handled above"),
                Ok(ans) => {
                    if let Err(e) = stepper.answer(&ans) {
                        println!("{e}");
                    }
                }
                Err(e) => println!("{e}; type help for the commands"),
            },
        }
    }
}

fn answer_word(p: Phase) -> &'static str {
    match p {
        Phase::Subgoal => "sub",
        Phase::Apply => "app",
    }
}

fn read_line(input: &mut impl BufRead, prompt: &str) -> Result<Option<String>, Failure> {
    print!("{prompt}");
    io::stdout().flush().ok();
    let mut line = String::new();
    let n = input
        .read_line(&mut line)
        .map_err(|e| Failure::usage(anyhow!("reading input: {e}")))?;
    if n == 0 {
        println!();
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

fn names(task: &Task, lits: impl IntoIterator<Item = Lit>) -> String {
    let v: Vec<String> = lits.into_iter().map(|l| task.lit_name(l)).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(" ")
    }
}

fn show(task: &Task, stepper: &Stepper) {
    let ps = stepper.state();
    let now: BTreeSet<_> = ps.current.iter().collect();
    println!("-- depth {}", stepper.depth());
    match stepper.previous_state() {
        None => println!("C:  {}", names(task, now.iter().map(|&a| Lit::pos(a)))),
        Some(prev) => {
            let before: BTreeSet<_> = prev.current.iter().collect();
            let added = now.difference(&before).map(|&a| format!("+{}", task.lit_name(Lit::pos(a))));
            let removed = before.difference(&now).map(|&a| format!("-{}", task.lit_name(Lit::pos(a))));
            let delta: Vec<String> = added.chain(removed).collect();
            println!("C:  {}", if delta.is_empty() { "unchanged".into() } else { delta.join(" ") });
        }
    }
    let agenda = stepper.agenda();
    println!("P:  {}", names(task, agenda.pending.iter().copied()));
    let apps: Vec<String> = agenda.applicable.iter().map(|&o| task.op_name(o)).collect();
    println!("A:  {}", if apps.is_empty() { "-".into() } else { apps.join(" ") });
    let head: Vec<String> = ps.head.iter().map(|&o| task.op_name(o)).collect();
    println!("plan so far: {}", if head.is_empty() { "-".into() } else { head.join(", ") });
}

/// Replays the recorded walk through the search, writing the trace if one
/// was asked for, and prints the resulting plan.
fn finish(
    task: &Task,
    a: &StepArgs,
    stepper: &mut Stepper,
    hand_over: bool,
) -> Result<(ChoiceScript, SearchResult), Failure> {
    let (script, result) = match &a.trace {
        Some(path) => {
            let file = common::create(path)?;
            let mut sink = JsonLinesSink::new(io::BufWriter::new(file));
            let r = stepper.run(hand_over, &mut sink);
            sink.finish()
                .map_err(|e| Failure::usage(anyhow!("writing {}: {e}", path.display())))?;
            r
        }
        None => {
            let mut sink: Vec<TraceEvent> = Vec::new();
            stepper.run(hand_over, &mut sink as &mut dyn TraceSink)
        }
    };
    if result.outcome.is_solved() {
        print!("{}", common::plan_text(task, &result.plan));
    }
    print!("{}", common::stats_text(&common::selector(&a.search), &result));
    Ok((script, result))
}

fn save(a: &StepArgs, input: &mut impl BufRead, script: &ChoiceScript) -> Result<(), Failure> {
    let path = match &a.save {
        Some(p) => p.clone(),
        None => match read_line(input, "save decision script to (blank to skip): ")? {
            Some(p) if !p.is_empty() => PathBuf::from(p),
            _ => return Ok(()),
        },
    };
    std::fs::write(&path, script.render())
        .map_err(|e| Failure::usage(anyhow!("writing {}: {e}", path.display())))?;
    println!("saved {}", path.display());
    Ok(())
}
