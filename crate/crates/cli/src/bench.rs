//! Runs tasks with and without MUSP pruning and compares the two.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use lff_core::eval::{Evaluator, ExampleSet, Truth};
use lff_core::learner::{Learner, LearnerConfig, RunStats};
use lff_core::term::Program;
use serde::{Deserialize, Serialize};

use crate::clock::InstantClock;
use crate::corpus::CorpusTask;
use crate::stats::SCHEMA;
use crate::task::TaskBundle;

pub struct BenchTask {
    pub bundle: TaskBundle,
    pub held_out: Option<ExampleSet>,
}

impl BenchTask {
    pub fn from_corpus(t: &CorpusTask) -> Result<BenchTask, String> {
        let bundle = t.bundle().map_err(|e| format!("{}: {e}", t.name))?;
        let held_out = t.held_out().map_err(|e| format!("{}: {e}", t.name))?;
        Ok(BenchTask { bundle, held_out: Some(held_out) })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Config {
    MuspOn,
    MuspOff,
}

impl Config {
    pub const BOTH: [Config; 2] = [Config::MuspOn, Config::MuspOff];

    pub fn name(self) -> &'static str {
        match self {
            Config::MuspOn => "musp_on",
            Config::MuspOff => "musp_off",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub task: String,
    pub config: Config,
    pub solved: bool,
    /// Fraction of held-out examples classified correctly.
    pub accuracy: Option<f64>,
    pub programs_generated: usize,
    pub total_time: f64,
    pub musp_time: f64,
    pub solution_size: Option<usize>,
    pub rules: Option<usize>,
    pub solution: Option<String>,
    pub timed_out: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub schema: u32,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub learner: LearnerConfig,
    /// Worker threads. Tasks and configurations are spread over them.
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
        BenchConfig { learner: LearnerConfig::default(), workers }
    }
}

/// Share of `exs` the program classifies correctly.
pub fn accuracy(ev: &Evaluator, h: &Program, exs: &ExampleSet) -> f64 {
    let total = exs.pos.len() + exs.neg.len();
    if total == 0 {
        return 1.0;
    }
    let tp = ev.entailment(h, &exs.pos).iter().filter(|t| **t == Truth::Proved).count();
    let fp = ev.entailment(h, &exs.neg).iter().filter(|t| **t == Truth::Proved).count();
    (tp + exs.neg.len() - fp) as f64 / total as f64
}

pub fn run_one(task: &BenchTask, config: Config, cfg: &LearnerConfig) -> (Row, RunStats) {
    let b = &task.bundle;
    let cfg = LearnerConfig { musp_enabled: config == Config::MuspOn, ..cfg.clone() };
    let learner = Learner::new(&b.bias, &b.bk, &b.examples, cfg).with_clock(Arc::new(InstantClock::new()));
    let mut row = Row {
        task: b.name.clone(),
        config,
        solved: false,
        accuracy: None,
        programs_generated: 0,
        total_time: 0.0,
        musp_time: 0.0,
        solution_size: None,
        rules: None,
        solution: None,
        timed_out: false,
        error: None,
    };
    match learner.run() {
        Ok((h, s)) => {
            row.solved = h.is_some();
            row.programs_generated = s.programs_generated;
            row.total_time = s.total_time.as_secs_f64();
            row.musp_time = s.musp_time.as_secs_f64();
            row.solution_size = s.solution_size;
            row.timed_out = s.timed_out;
            if let Some(h) = h {
                row.rules = Some(h.len());
                row.accuracy = task.held_out.as_ref().map(|t| accuracy(learner.evaluator(), &h, t));
                row.solution = Some(h.clauses().iter().map(crate::syntax::print_clause).collect::<Vec<_>>().join("\n"));
            }
            (row, s)
        }
        Err(e) => {
            row.error = Some(e.to_string());
            (row, RunStats::default())
        }
    }
}

/// Runs every task in both configurations. Rows come back ordered by task,
/// then configuration.
pub fn run_benchmark(tasks: &[BenchTask], cfg: &BenchConfig) -> BenchmarkReport {
    let jobs: Vec<(usize, Config)> = (0..tasks.len()).flat_map(|t| Config::BOTH.map(|c| (t, c))).collect();
    let next = AtomicUsize::new(0);
    let rows = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|s| {
        for _ in 0..cfg.workers.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let j = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(t, c)) = jobs.get(j) else { break };
                let (row, _) = run_one(&tasks[t], c, &cfg.learner);
                rows.lock().expect("no worker panics holding the lock").push((j, row));
            });
        }
    });
    let mut rows = rows.into_inner().expect("workers joined");
    rows.sort_by_key(|r| r.0);
    BenchmarkReport { schema: SCHEMA, rows: rows.into_iter().map(|r| r.1).collect() }
}

fn change(on: f64, off: f64) -> String {
    if off == 0.0 {
        "-".into()
    } else {
        format!("{:+.0}%", (on - off) / off * 100.0)
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

impl BenchmarkReport {
    pub fn row(&self, task: &str, config: Config) -> Option<&Row> {
        self.rows.iter().find(|r| r.task == task && r.config == config)
    }

    pub fn tasks(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.task.as_str()) {
                out.push(&r.task);
            }
        }
        out
    }

    /// One line per task comparing the configurations.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>5} {:>9} {:>9} {:>7} {:>9} {:>9} {:>7} {:>8} {:>6}",
            "task", "size", "progs on", "progs off", "change", "time on", "time off", "change", "musp", "acc"
        );
        for t in self.tasks() {
            let (Some(on), Some(off)) = (self.row(t, Config::MuspOn), self.row(t, Config::MuspOff)) else {
                continue;
            };
            if let Some(e) = on.error.as_ref().or(off.error.as_ref()) {
                let _ = writeln!(out, "{t:<14} error: {e}");
                continue;
            }
            let size = if on.solution_size == off.solution_size {
                opt(on.solution_size)
            } else {
                format!("{}/{}", opt(on.solution_size), opt(off.solution_size))
            };
            let _ = writeln!(
                out,
                "{:<14} {:>5} {:>9} {:>9} {:>7} {:>8.2}s {:>8.2}s {:>7} {:>7.0}% {:>6}",
                t,
                size,
                on.programs_generated,
                off.programs_generated,
                change(on.programs_generated as f64, off.programs_generated as f64),
                on.total_time,
                off.total_time,
                change(on.total_time, off.total_time),
                if on.total_time > 0.0 { on.musp_time / on.total_time * 100.0 } else { 0.0 },
                opt(on.accuracy.map(|a| format!("{:.2}", a))),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
