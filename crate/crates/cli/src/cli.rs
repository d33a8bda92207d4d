//! The `lff` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use lff_core::eval::Evaluator;
use lff_core::learner::{Learner, LearnerConfig};
use lff_core::musp::find_musps;

use crate::bench::{run_benchmark, BenchConfig, BenchTask};
use crate::clock::InstantClock;
use crate::corpus::{self, TASKS};
use crate::stats::StatsDoc;
use crate::syntax::print_clause;
use crate::task::{parse_program, TaskBundle};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
/// Bad command-line usage, as reported by clap.
pub const EXIT_USAGE: i32 = 2;
/// A task, program or example file failed to read, parse or validate.
pub const EXIT_INPUT: i32 = 3;
/// The search finished or timed out without a solution.
pub const EXIT_NO_SOLUTION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "lff", version, about = "Learn logic programs from examples by learning from failures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Learn a program for a task.
    Learn(LearnArgs),
    /// Run tasks with and without MUSP pruning and compare.
    Bench(BenchArgs),
    /// Print the minimal unsatisfiable subprograms of a program.
    Musps(MuspArgs),
}

#[derive(Args, Debug)]
struct TaskFiles {
    #[arg(long, required_unless_present = "task")]
    bias: Option<PathBuf>,
    #[arg(long, required_unless_present = "task")]
    bk: Option<PathBuf>,
    #[arg(long, required_unless_present = "task")]
    exs: Option<PathBuf>,
    /// A bundled task instead of files.
    #[arg(long, conflicts_with_all = ["bias", "bk", "exs"])]
    task: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct Budgets {
    #[arg(long)]
    eval_timeout_ms: Option<u64>,
    /// Resolution steps per query.
    #[arg(long)]
    eval_steps: Option<u64>,
    /// Overall time limit in seconds.
    #[arg(long)]
    timeout_s: Option<f64>,
}

#[derive(Args, Debug)]
struct LearnArgs {
    #[command(flatten)]
    files: TaskFiles,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    no_musp: bool,
    #[command(flatten)]
    budgets: Budgets,
    /// Write statistics here: JSON for `.json`, key/value lines otherwise.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Bundled task names. All of them by default.
    #[arg(long, num_args = 1..)]
    tasks: Vec<String>,
    /// Write the report here: JSON for `.json`, the text table otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Args, Debug)]
struct MuspArgs {
    #[arg(long)]
    prog: PathBuf,
    #[command(flatten)]
    files: TaskFiles,
    #[command(flatten)]
    budgets: Budgets,
}

struct Failure(i32, String);

fn input(msg: impl ToString) -> Failure {
    Failure(EXIT_INPUT, msg.to_string())
}

fn read(p: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))
}

impl TaskFiles {
    fn load(&self) -> Result<TaskBundle, Failure> {
        if let Some(name) = &self.task {
            let t = corpus::find(name).ok_or_else(|| input(format!("no bundled task `{name}`")))?;
            return t.bundle().map_err(input);
        }
        let (Some(b), Some(k), Some(e)) = (&self.bias, &self.bk, &self.exs) else {
            return Err(Failure(EXIT_USAGE, "--bias, --bk and --exs are required".into()));
        };
        let name = e.file_stem().map_or("task".into(), |s| s.to_string_lossy().into_owned());
        TaskBundle::parse(&name, &read(b)?, &read(k)?, &read(e)?).map_err(input)
    }
}

impl Budgets {
    fn apply(&self, cfg: &mut LearnerConfig) {
        if let Some(ms) = self.eval_timeout_ms {
            cfg.eval.per_example_timeout = Duration::from_millis(ms);
        }
        if let Some(n) = self.eval_steps {
            cfg.eval.step_budget = n;
        }
        if let Some(s) = self.timeout_s {
            cfg.timeout = Some(Duration::from_secs_f64(s.max(0.0)));
        }
    }
}

fn learn(a: &LearnArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = a.files.load()?;
    let mut cfg = LearnerConfig { max_size: a.max_size, musp_enabled: !a.no_musp, ..LearnerConfig::default() };
    a.budgets.apply(&mut cfg);
    let learner = Learner::new(&b.bias, &b.bk, &b.examples, cfg).with_clock(Arc::new(InstantClock::new()));
    let (h, stats) = learner.run().map_err(input)?;
    if let Some(p) = &a.stats {
        let doc = StatsDoc::new(&b.name, !a.no_musp, &stats);
        std::fs::write(p, doc.render_for(p)).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", p.display())))?;
    }
    match h {
        Some(h) => {
            for c in h.clauses() {
                writeln!(out, "{}", print_clause(c)).ok();
            }
            Ok(EXIT_OK)
        }
        None if stats.timed_out => Err(Failure(EXIT_NO_SOLUTION, "no solution found before the time limit".into())),
        None => Err(Failure(EXIT_NO_SOLUTION, format!("no solution up to size {}", stats.last_size))),
    }
}

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let chosen: Vec<_> = if a.tasks.is_empty() {
        TASKS.iter().collect()
    } else {
        a.tasks
            .iter()
            .map(|n| corpus::find(n).ok_or_else(|| input(format!("no bundled task `{n}`"))))
            .collect::<Result<_, _>>()?
    };
    let tasks = chosen.into_iter().map(BenchTask::from_corpus).collect::<Result<Vec<_>, _>>().map_err(input)?;
    let mut cfg = BenchConfig::default();
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    a.budgets.apply(&mut cfg.learner);
    let report = run_benchmark(&tasks, &cfg);
    let table = report.table();
    write!(out, "{table}").ok();
    if let Some(p) = &a.out {
        let text = if p.extension().is_some_and(|e| e == "json") { report.to_json() + "\n" } else { table };
        std::fs::write(p, text).map_err(|e| Failure(EXIT_FAILURE, format!("{}: {e}", p.display())))?;
    }
    Ok(EXIT_OK)
}

fn musps(a: &MuspArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let b = a.files.load()?;
    let h = parse_program(&read(&a.prog)?).map_err(input)?;
    let mut cfg = LearnerConfig::default();
    a.budgets.apply(&mut cfg);
    let ev = Evaluator::new(&b.bk, cfg.eval).with_modes(b.bias.modes()).with_clock(Arc::new(InstantClock::new()));
    for m in find_musps(&h, &b.examples.pos, &ev) {
        let text: Vec<String> = m.clauses().iter().map(print_clause).collect();
        writeln!(out, "{}", text.join(" ")).ok();
    }
    Ok(EXIT_OK)
}

/// Runs the command line and returns the exit status.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            if e.use_stderr() {
                write!(err, "{e}").ok();
            } else {
                write!(out, "{e}").ok();
            }
            return code;
        }
    };
    let r = match &cli.cmd {
        Cmd::Learn(a) => learn(a, out),
        Cmd::Bench(a) => bench(a, out),
        Cmd::Musps(a) => musps(a, out),
    };
    match r {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            writeln!(err, "lff: {msg}").ok();
            code
        }
    }
}
