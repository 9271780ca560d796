mod commands;
mod schema;
mod session;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{check_refs, execute, expectation_holds, parse_step, Step};
use session::{InputError, Session};

const DEFAULT_SEED: u64 = 7;

#[derive(Parser)]
#[command(name = "flagforge", version, about = "Exact computations with generalized flags and finitary Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command of a session file and report the results.
    Run {
        session: PathBuf,
        /// Seed for randomized routines.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run commands on several threads; results keep their order.
        #[arg(long)]
        parallel: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

struct Outcome {
    result: Value,
    passed: Option<bool>,
    failed_run: bool,
    millis: f64,
}

fn run_step(index: usize, step: &Step, s: &Session, seed: u64) -> Outcome {
    let start = Instant::now();
    let out = execute(&step.command, s, seed);
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let passed = step.expect.as_ref().map(|e| expectation_holds(e, &out));
    let status = match (&out, passed) {
        (_, Some(true)) => "pass",
        (_, Some(false)) => "fail",
        (Err(_), None) => "error",
        (Ok(_), None) => "ok",
    };
    let (output, error) = match &out {
        Ok(v) => (v.clone(), Value::Null),
        Err(e) => (Value::Null, json!(e)),
    };
    let result = json!({
        "index": index,
        "cmd": step.name,
        "status": status,
        "output": output,
        "expect": step.expect.clone().unwrap_or(Value::Null),
        "error": error,
    });
    Outcome { result, failed_run: status == "fail" || status == "error", passed, millis }
}

fn load(path: &PathBuf) -> Result<(Session, Vec<Step>), InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    let file = session::parse(&text)?;
    let steps = file.commands.iter().enumerate().map(|(i, c)| parse_step(i, c)).collect::<Result<Vec<_>, _>>()?;
    let s = session::build(&file)?;
    for step in &steps {
        check_refs(&step.command, &s)?;
    }
    Ok((s, steps))
}

fn run(path: &PathBuf, seed: u64, parallel: bool) -> Result<(Value, bool), InputError> {
    let (s, steps) = load(path)?;
    let outcomes: Vec<Outcome> = if parallel && steps.len() > 1 {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<Outcome>>> = Mutex::new((0..steps.len()).map(|_| None).collect());
        let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).min(steps.len());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= steps.len() {
                        break;
                    }
                    let o = run_step(i, &steps[i], &s, seed);
                    slots.lock().unwrap()[i] = Some(o);
                });
            }
        });
        slots.into_inner().unwrap().into_iter().map(Option::unwrap).collect()
    } else {
        steps.iter().enumerate().map(|(i, st)| run_step(i, st, &s, seed)).collect()
    };
    let count = |f: &dyn Fn(&Outcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
    let summary = json!({
        "commands": outcomes.len(),
        "passed": count(&|o| o.passed == Some(true)),
        "failed": count(&|o| o.passed == Some(false)),
        "errors": count(&|o| o.passed.is_none() && o.result["status"] == "error"),
        "unchecked": count(&|o| o.passed.is_none() && o.result["status"] == "ok"),
    });
    let ok = outcomes.iter().all(|o| !o.failed_run);
    let report = json!({
        "seed": seed,
        "summary": summary,
        "results": outcomes.iter().map(|o| o.result.clone()).collect::<Vec<_>>(),
        "timing": outcomes.iter().enumerate().map(|(i, o)| json!({ "index": i, "millis": o.millis })).collect::<Vec<_>>(),
    });
    Ok((report, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Cmd::Run { session, seed, parallel, report } = cli.command;
    match run(&session, seed, parallel) {
        Ok((value, ok)) => {
            let text = serde_json::to_string_pretty(&value).expect("report serializes");
            match report {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            let s = &value["summary"];
            eprintln!(
                "{} commands: {} passed, {} failed, {} errors, {} unchecked",
                s["commands"], s["passed"], s["failed"], s["errors"], s["unchecked"]
            );
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.kind());
            ExitCode::from(2)
        }
    }
}
