//! The generate, test and constrain loop.

use alloc::sync::Arc;
use core::fmt;
use core::time::Duration;

use crate::bias::Bias;
use crate::constraints::{constrain, ConstraintKind, ConstraintStore};
use crate::eval::{Clock, EvalConfig, Evaluator, ExampleSet, KnowledgeBase, NoClock, Outcome};
use crate::generator::Generator;
use crate::musp::{unsat_constraints, DEFAULT_SIZE_CAP};
use crate::term::Program;

#[derive(Clone, Debug)]
pub struct LearnerConfig {
    /// Largest program size tried. `None` means the largest the bias allows.
    pub max_size: Option<usize>,
    pub eval: EvalConfig,
    pub musp_enabled: bool,
    /// Hypotheses larger than this get no MUSP search.
    pub musp_size_cap: usize,
    /// Overall limit, measured with the learner's clock.
    pub timeout: Option<Duration>,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            max_size: None,
            eval: EvalConfig::default(),
            musp_enabled: true,
            musp_size_cap: DEFAULT_SIZE_CAP,
            timeout: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub programs_generated: usize,
    pub specialisation_constraints: usize,
    pub generalisation_constraints: usize,
    pub redundancy_constraints: usize,
    pub musps_found: usize,
    /// Hypotheses skipped by the MUSP size cap.
    pub musp_capped: usize,
    pub total_time: Duration,
    pub musp_time: Duration,
    pub generate_time: Duration,
    pub test_time: Duration,
    pub solution_size: Option<usize>,
    /// Largest size fully or partially searched.
    pub last_size: usize,
    pub timed_out: bool,
}

impl RunStats {
    pub fn constraints(&self, kind: ConstraintKind) -> usize {
        match kind {
            ConstraintKind::Specialisation => self.specialisation_constraints,
            ConstraintKind::Generalisation => self.generalisation_constraints,
            ConstraintKind::Redundancy => self.redundancy_constraints,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnError {
    ZeroMaxSize,
    /// The examples are about a different predicate than the bias head.
    TargetMismatch { bias: crate::term::PredSig, examples: crate::term::PredSig },
    NoPositives,
}

impl fmt::Display for LearnError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnError::ZeroMaxSize => f.write_str("max size must be at least 1"),
            LearnError::TargetMismatch { bias, examples } => {
                write!(f, "examples are for {examples} but the bias head is {bias}")
            }
            LearnError::NoPositives => f.write_str("no positive examples"),
        }
    }
}

/// What the learner reports back for each tested candidate.
pub trait Observer {
    fn tested(&mut self, _h: &Program, _outcome: &Outcome) {}
}

impl Observer for () {}

pub struct Learner<'a> {
    bias: &'a Bias,
    examples: &'a ExampleSet,
    cfg: LearnerConfig,
    ev: Evaluator,
    clock: Arc<dyn Clock>,
}

impl<'a> Learner<'a> {
    pub fn new(bias: &'a Bias, bk: &KnowledgeBase, examples: &'a ExampleSet, cfg: LearnerConfig) -> Self {
        let clock: Arc<dyn Clock> = Arc::new(NoClock);
        let ev = Evaluator::new(bk, cfg.eval).with_modes(bias.modes());
        Learner { bias, examples, cfg, ev, clock }
    }

    /// Uses `clock` for statistics, the overall timeout and evaluation
    /// timeouts.
    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.ev = self.ev.with_clock(clock.clone());
        self.clock = clock;
        self
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    pub fn run(&self) -> Result<(Option<Program>, RunStats), LearnError> {
        self.run_observed(&mut ())
    }

    pub fn run_observed(&self, obs: &mut dyn Observer) -> Result<(Option<Program>, RunStats), LearnError> {
        if self.cfg.max_size == Some(0) {
            return Err(LearnError::ZeroMaxSize);
        }
        if self.examples.pos.is_empty() {
            return Err(LearnError::NoPositives);
        }
        if let Some(t) = self.examples.target() {
            if t != self.bias.head {
                return Err(LearnError::TargetMismatch { bias: self.bias.head.clone(), examples: t });
            }
        }
        let start = self.clock.now();
        let elapsed = || self.clock.now().saturating_sub(start);
        let mut stats = RunStats::default();
        let mut store = ConstraintStore::new();
        let mut generator = Generator::new(self.bias);
        let limit = generator.max_program_size();
        let max_size = self.cfg.max_size.map_or(limit, |m| m.min(limit));
        let target = &self.bias.head;
        let mut solution = None;
        'sizes: for size in 1..=max_size {
            stats.last_size = size;
            generator.start(size);
            loop {
                if self.cfg.timeout.is_some_and(|t| elapsed() > t) {
                    stats.timed_out = true;
                    break 'sizes;
                }
                let t0 = self.clock.now();
                let next = generator.next(&store);
                stats.generate_time += self.clock.now().saturating_sub(t0);
                let Some(h) = next else { break };
                stats.programs_generated += 1;
                let t1 = self.clock.now();
                let outcome = self.ev.test(&h, self.examples);
                stats.test_time += self.clock.now().saturating_sub(t1);
                obs.tested(&h, &outcome);
                if outcome.is_solution() {
                    stats.solution_size = Some(h.size());
                    solution = Some(h);
                    break 'sizes;
                }
                if self.cfg.musp_enabled && outcome.is_totally_incomplete() {
                    let t2 = self.clock.now();
                    let report = unsat_constraints(&h, &self.examples.pos, &self.ev, target, self.cfg.musp_size_cap);
                    stats.musp_time += self.clock.now().saturating_sub(t2);
                    stats.musps_found += report.musps.len();
                    stats.musp_capped += usize::from(report.capped);
                    store.extend(report.constraints);
                }
                store.extend(constrain(&h, &outcome, target));
            }
        }
        stats.specialisation_constraints = store.count(ConstraintKind::Specialisation);
        stats.generalisation_constraints = store.count(ConstraintKind::Generalisation);
        stats.redundancy_constraints = store.count(ConstraintKind::Redundancy);
        stats.total_time = elapsed();
        Ok((solution, stats))
    }
}

/// Runs the loop with a clock that never advances.
pub fn learn(
    bias: &Bias,
    bk: &KnowledgeBase,
    examples: &ExampleSet,
    cfg: LearnerConfig,
) -> Result<(Option<Program>, RunStats), LearnError> {
    Learner::new(bias, bk, examples, cfg).run()
}

#[cfg(test)]
mod tests;
