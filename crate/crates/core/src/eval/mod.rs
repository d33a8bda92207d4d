//! Hypothesis testing by bounded SLD resolution.

mod clock;
mod listbk;
mod machine;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

pub use clock::{Clock, NoClock};
pub use listbk::list_clauses;
pub use machine::Truth;

use crate::bias::Direction;
use crate::term::{Clause, Literal, PredSig, Program, Sym, Term, CONS, NIL};
use machine::{Builtin, CClause, CGoal, Database, Def, Limits, Machine, PredId, Tmpl};

/// Background knowledge: definite clauses plus the native arithmetic
/// predicates.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    program: Program,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KbError {
    NotDefinite(Clause),
    RedefinesBuiltin(PredSig),
}

impl fmt::Display for KbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbError::NotDefinite(c) => write!(f, "background clause has no head: {c}"),
            KbError::RedefinesBuiltin(p) => write!(f, "background clause redefines builtin {p}"),
        }
    }
}

impl KnowledgeBase {
    /// Just the given clauses and the builtins, without the list relations.
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Result<Self, KbError> {
        let clauses: Vec<Clause> = clauses.into_iter().collect();
        for c in &clauses {
            let Some(h) = &c.head else {
                return Err(KbError::NotDefinite(c.clone()));
            };
            if is_builtin(&h.sig()) {
                return Err(KbError::RedefinesBuiltin(h.sig()));
            }
        }
        Ok(KnowledgeBase { program: Program::new(clauses) })
    }

    /// The list relations and the builtins.
    pub fn standard() -> Self {
        KnowledgeBase { program: Program::new(list_clauses()) }
    }

    /// The list relations, the builtins and `extra`.
    pub fn standard_with(extra: impl IntoIterator<Item = Clause>) -> Result<Self, KbError> {
        KnowledgeBase::new(list_clauses().into_iter().chain(extra))
    }

    pub fn clauses(&self) -> &Program {
        &self.program
    }

    pub fn builtins() -> impl Iterator<Item = PredSig> {
        Builtin::ALL.iter().map(|(n, a, _)| PredSig::new(n, *a))
    }

    /// True for builtins and for predicates with at least one clause.
    pub fn defines(&self, sig: &PredSig) -> bool {
        is_builtin(sig) || self.program.clauses().iter().any(|c| c.head.as_ref().is_some_and(|h| h.sig() == *sig))
    }
}

fn is_builtin(sig: &PredSig) -> bool {
    Builtin::ALL.iter().any(|(n, a, _)| sig.name.as_str() == *n && sig.arity == *a)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExampleSet {
    pub pos: Vec<Literal>,
    pub neg: Vec<Literal>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExampleError {
    NotGround(Literal),
    BothSigns(Literal),
    MixedPredicates(PredSig, PredSig),
}

impl fmt::Display for ExampleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExampleError::NotGround(l) => write!(f, "example is not ground: {l}"),
            ExampleError::BothSigns(l) => write!(f, "example is both positive and negative: {l}"),
            ExampleError::MixedPredicates(a, b) => write!(f, "examples use both {a} and {b}"),
        }
    }
}

impl ExampleSet {
    pub fn new(pos: Vec<Literal>, neg: Vec<Literal>) -> Result<Self, ExampleError> {
        let mut sig: Option<PredSig> = None;
        for e in pos.iter().chain(&neg) {
            if !e.is_ground() {
                return Err(ExampleError::NotGround(e.clone()));
            }
            match &sig {
                None => sig = Some(e.sig()),
                Some(s) if *s != e.sig() => return Err(ExampleError::MixedPredicates(s.clone(), e.sig())),
                Some(_) => {}
            }
        }
        let pset: BTreeSet<&Literal> = pos.iter().collect();
        if let Some(both) = neg.iter().find(|n| pset.contains(n)) {
            return Err(ExampleError::BothSigns(both.clone()));
        }
        Ok(ExampleSet { pos, neg })
    }

    pub fn target(&self) -> Option<PredSig> {
        self.pos.iter().chain(&self.neg).next().map(Literal::sig)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Completeness {
    Complete,
    PartiallyComplete,
    TotallyIncomplete,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Outcome {
    pub completeness: Completeness,
    pub consistency: Consistency,
}

impl Outcome {
    /// Classification from entailment counts. With no positive examples a
    /// program counts as complete.
    pub fn classify(pos_entailed: usize, pos_total: usize, neg_entailed: usize) -> Outcome {
        let completeness = if pos_entailed == pos_total {
            Completeness::Complete
        } else if pos_entailed == 0 {
            Completeness::TotallyIncomplete
        } else {
            Completeness::PartiallyComplete
        };
        let consistency = if neg_entailed == 0 { Consistency::Consistent } else { Consistency::Inconsistent };
        Outcome { completeness, consistency }
    }

    pub fn from_vectors(pos: &[bool], neg: &[bool]) -> Outcome {
        let count = |v: &[bool]| v.iter().filter(|b| **b).count();
        Outcome::classify(count(pos), pos.len(), count(neg))
    }

    pub fn is_solution(&self) -> bool {
        self.completeness == Completeness::Complete && self.consistency == Consistency::Consistent
    }

    pub fn is_complete(&self) -> bool {
        self.completeness == Completeness::Complete
    }

    pub fn is_totally_incomplete(&self) -> bool {
        self.completeness == Completeness::TotallyIncomplete
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency == Consistency::Consistent
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct EvalConfig {
    /// Wall-clock limit per query; only enforced with a real [`Clock`].
    pub per_example_timeout: Duration,
    /// Deepest goal depth explored.
    pub max_depth: u32,
    /// Resolution steps per query.
    pub step_budget: u64,
    /// Occurs check during resolution. Satisfiability checks always use it.
    pub occurs_check: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            per_example_timeout: Duration::from_millis(10),
            max_depth: 50,
            step_budget: 5_000,
            occurs_check: false,
        }
    }
}

impl EvalConfig {
    /// Double every budget.
    pub fn doubled(&self) -> EvalConfig {
        EvalConfig {
            per_example_timeout: self.per_example_timeout * 2,
            max_depth: self.max_depth.saturating_mul(2),
            step_budget: self.step_budget.saturating_mul(2),
            occurs_check: self.occurs_check,
        }
    }
}

enum BaseDef {
    Builtin(Builtin),
    Clauses(Vec<CClause>),
}

/// A compiled knowledge base together with budgets and a clock.
pub struct Evaluator {
    syms: BTreeMap<Sym, u32>,
    preds: BTreeMap<PredSig, PredId>,
    defs: Vec<BaseDef>,
    cfg: EvalConfig,
    clock: Arc<dyn Clock>,
    modes: BTreeMap<PredSig, Vec<Direction>>,
}

impl fmt::Debug for Evaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Evaluator").field("preds", &self.preds.len()).field("cfg", &self.cfg).finish()
    }
}

impl Evaluator {
    pub fn new(kb: &KnowledgeBase, cfg: EvalConfig) -> Self {
        let mut ev = Evaluator {
            syms: BTreeMap::new(),
            preds: BTreeMap::new(),
            defs: Vec::new(),
            cfg,
            clock: Arc::new(NoClock),
            modes: BTreeMap::new(),
        };
        for s in [NIL, CONS] {
            let n = ev.syms.len() as u32;
            ev.syms.insert(Sym::new(s), n);
        }
        for (name, arity, b) in Builtin::ALL {
            ev.preds.insert(PredSig::new(name, arity), ev.defs.len() as PredId);
            ev.defs.push(BaseDef::Builtin(b));
        }
        for c in kb.clauses().clauses() {
            if let Some(h) = &c.head {
                if !ev.preds.contains_key(&h.sig()) {
                    ev.preds.insert(h.sig(), ev.defs.len() as PredId);
                    ev.defs.push(BaseDef::Clauses(Vec::new()));
                }
            }
        }
        for c in kb.clauses().clauses() {
            for l in c.literals() {
                if !ev.preds.contains_key(&l.sig()) {
                    ev.preds.insert(l.sig(), ev.defs.len() as PredId);
                    ev.defs.push(BaseDef::Clauses(Vec::new()));
                }
                intern_all(&mut ev.syms, l);
            }
        }
        let compiled: Vec<(PredId, CClause)> = {
            let mut scope = Scope::new(&ev);
            kb.clauses()
                .clauses()
                .iter()
                .filter_map(|c| {
                    let h = c.head.as_ref()?;
                    let id = ev.preds[&h.sig()];
                    Some((id, scope.compile_clause(c, false)))
                })
                .collect()
        };
        for (id, cc) in compiled {
            if let BaseDef::Clauses(v) = &mut ev.defs[id as usize] {
                v.push(cc);
            }
        }
        ev
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    /// Argument directions used to order hypothesis bodies so that inputs
    /// are bound before use.
    pub fn with_modes(mut self, modes: BTreeMap<PredSig, Vec<Direction>>) -> Self {
        self.modes = modes;
        self
    }

    pub fn config(&self) -> &EvalConfig {
        &self.cfg
    }

    pub fn with_config(mut self, cfg: EvalConfig) -> Self {
        self.cfg = cfg;
        self
    }

    fn limits(&self, occurs_check: bool) -> Limits<'_> {
        Limits {
            max_depth: self.cfg.max_depth,
            steps: self.cfg.step_budget,
            occurs_check: occurs_check || self.cfg.occurs_check,
            clock: &*self.clock,
            timeout: self.cfg.per_example_timeout,
        }
    }

    /// Attempts to prove the conjunction `query` from the knowledge base and
    /// the definite clauses of `program`.
    pub fn solve(&self, program: &Program, query: &[Literal]) -> Truth {
        let mut scope = Scope::new(self);
        scope.load(program);
        let (goals, nvars) = scope.compile_query(query);
        Machine::new(&scope, self.limits(false)).prove(&goals, nvars)
    }

    /// Proof status of each goal under `program`.
    pub fn entailment(&self, program: &Program, goals: &[Literal]) -> Vec<Truth> {
        let mut scope = Scope::new(self);
        scope.load(program);
        let compiled: Vec<_> = goals.iter().map(|g| scope.compile_query(core::slice::from_ref(g))).collect();
        let mut m = Machine::new(&scope, self.limits(false));
        compiled.iter().map(|(q, n)| m.prove(q, *n)).collect()
    }

    /// A goal counts as entailed only when it is proved within budget.
    pub fn entails(&self, program: &Program, goal: &Literal) -> bool {
        self.solve(program, core::slice::from_ref(goal)) == Truth::Proved
    }

    /// Completeness and consistency of `h`. Stops early once the
    /// classification is fixed.
    pub fn test(&self, h: &Program, examples: &ExampleSet) -> Outcome {
        let mut scope = Scope::new(self);
        scope.load(h);
        let pos: Vec<_> = examples.pos.iter().map(|g| scope.compile_query(core::slice::from_ref(g))).collect();
        let neg: Vec<_> = examples.neg.iter().map(|g| scope.compile_query(core::slice::from_ref(g))).collect();
        let mut m = Machine::new(&scope, self.limits(false));
        let (mut hit, mut miss) = (0usize, 0usize);
        for (q, n) in &pos {
            if m.prove(q, *n) == Truth::Proved {
                hit += 1;
            } else {
                miss += 1;
            }
            if hit > 0 && miss > 0 {
                break;
            }
        }
        let completeness = if miss == 0 {
            Completeness::Complete
        } else if hit == 0 {
            Completeness::TotallyIncomplete
        } else {
            Completeness::PartiallyComplete
        };
        let consistency = if neg.iter().any(|(q, n)| m.prove(q, *n) == Truth::Proved) {
            Consistency::Inconsistent
        } else {
            Consistency::Consistent
        };
        Outcome { completeness, consistency }
    }

    /// Whether a subprogram can still succeed.
    ///
    /// Headed clauses count as satisfiable when they may entail a positive
    /// example. Each goal clause `:- body` counts as satisfiable when its
    /// body may be derivable from the knowledge base and the headed
    /// clauses. The subprogram is unsatisfiable only when neither holds.
    /// Budget exhaustion is treated as satisfiable. The occurs check is
    /// always on.
    pub fn is_satisfiable(&self, s: &Program, pos: &[Literal]) -> bool {
        let headed = Program::new(s.clauses().iter().filter(|c| !c.is_goal()).cloned());
        let mut scope = Scope::new(self);
        scope.load(&headed);
        let mut queries: Vec<(Vec<CGoal>, u32)> = Vec::new();
        if !headed.is_empty() {
            queries.extend(pos.iter().map(|g| scope.compile_query(core::slice::from_ref(g))));
        }
        for g in s.clauses().iter().filter(|c| c.is_goal()) {
            queries.push(scope.compile_goal_clause(&g.body));
        }
        let mut m = Machine::new(&scope, self.limits(true));
        queries.iter().any(|(q, n)| m.prove(q, *n) != Truth::Failed)
    }
}

fn intern_all(syms: &mut BTreeMap<Sym, u32>, l: &Literal) {
    fn go(syms: &mut BTreeMap<Sym, u32>, t: &Term) {
        match t {
            Term::Atom(a) | Term::Compound(a, _) => {
                if !syms.contains_key(a) {
                    let n = syms.len() as u32;
                    syms.insert(a.clone(), n);
                }
                if let Term::Compound(_, args) = t {
                    args.iter().for_each(|x| go(syms, x));
                }
            }
            Term::Var(_) | Term::Int(_) => {}
        }
    }
    l.args.iter().for_each(|a| go(syms, a));
}

/// Per-query view: the compiled knowledge base plus the clauses of the
/// program under test and any new symbols.
struct Scope<'e> {
    ev: &'e Evaluator,
    syms: BTreeMap<Sym, u32>,
    preds: BTreeMap<PredSig, PredId>,
    extra: Vec<Vec<CClause>>,
}

impl<'e> Scope<'e> {
    fn new(ev: &'e Evaluator) -> Self {
        Scope { ev, syms: BTreeMap::new(), preds: BTreeMap::new(), extra: Vec::new() }
    }

    fn sym(&mut self, s: &Sym) -> u32 {
        if let Some(id) = self.ev.syms.get(s) {
            return *id;
        }
        let next = (self.ev.syms.len() + self.syms.len()) as u32;
        *self.syms.entry(s.clone()).or_insert(next)
    }

    fn pred(&mut self, sig: PredSig) -> PredId {
        if let Some(id) = self.ev.preds.get(&sig) {
            return *id;
        }
        let next = (self.ev.defs.len() + self.preds.len()) as PredId;
        *self.preds.entry(sig).or_insert(next)
    }

    fn load(&mut self, program: &Program) {
        for c in program.clauses() {
            let Some(h) = &c.head else { continue };
            let id = self.pred(h.sig()) as usize;
            let cc = self.compile_clause(c, true);
            if self.extra.len() <= id {
                self.extra.resize_with(id + 1, Vec::new);
            }
            self.extra[id].push(cc);
        }
    }

    fn compile_clause(&mut self, c: &Clause, reorder: bool) -> CClause {
        let mut vars = Vec::new();
        let head: alloc::boxed::Box<[Tmpl]> = match &c.head {
            Some(h) => h.args.iter().map(|a| self.tmpl(a, &mut vars)).collect(),
            None => alloc::boxed::Box::new([]),
        };
        let order = if reorder { self.body_order(c.head.as_ref(), &c.body) } else { (0..c.body.len()).collect() };
        let body = order.into_iter().map(|i| self.goal(&c.body[i], &mut vars)).collect();
        CClause { head, body, nvars: vars.len() as u32 }
    }

    fn compile_query(&mut self, query: &[Literal]) -> (Vec<CGoal>, u32) {
        let mut vars = Vec::new();
        let goals = query.iter().map(|l| self.goal(l, &mut vars)).collect();
        (goals, vars.len() as u32)
    }

    fn compile_goal_clause(&mut self, body: &[Literal]) -> (Vec<CGoal>, u32) {
        let order = self.body_order(None, body);
        let mut vars = Vec::new();
        let goals = order.into_iter().map(|i| self.goal(&body[i], &mut vars)).collect();
        (goals, vars.len() as u32)
    }

    fn goal(&mut self, l: &Literal, vars: &mut Vec<Sym>) -> CGoal {
        let pred = self.pred(l.sig());
        let args = l.args.iter().map(|a| self.tmpl(a, vars)).collect();
        CGoal { pred, args }
    }

    fn tmpl(&mut self, t: &Term, vars: &mut Vec<Sym>) -> Tmpl {
        match t {
            Term::Var(v) => {
                let i = vars.iter().position(|x| x == v).unwrap_or_else(|| {
                    vars.push(v.clone());
                    vars.len() - 1
                });
                Tmpl::Var(i as u32)
            }
            Term::Atom(a) => Tmpl::Atom(self.sym(a)),
            Term::Int(i) => Tmpl::Int(*i),
            Term::Compound(f, args) => {
                let id = self.sym(f);
                Tmpl::Str(id, args.iter().map(|a| self.tmpl(a, vars)).collect())
            }
        }
    }

    /// Greedy reordering: repeatedly take the first literal whose declared
    /// inputs are bound; if none is ready take the first remaining one.
    fn body_order(&self, head: Option<&Literal>, body: &[Literal]) -> Vec<usize> {
        let modes = &self.ev.modes;
        if modes.is_empty() {
            return (0..body.len()).collect();
        }
        let mut bound: BTreeSet<&Sym> = BTreeSet::new();
        if let Some(h) = head {
            match modes.get(&h.sig()) {
                Some(ds) => {
                    for (a, d) in h.args.iter().zip(ds) {
                        if *d == Direction::In {
                            a.for_each_var(&mut |v| {
                                bound.insert(v);
                            });
                        }
                    }
                }
                None => h.for_each_var(&mut |v| {
                    bound.insert(v);
                }),
            }
        }
        let ready = |l: &Literal, bound: &BTreeSet<&Sym>| match modes.get(&l.sig()) {
            None => true,
            Some(ds) => l.args.iter().zip(ds).all(|(a, d)| {
                let mut ok = true;
                if *d == Direction::In {
                    a.for_each_var(&mut |v| ok &= bound.contains(v));
                }
                ok
            }),
        };
        let mut left: Vec<usize> = (0..body.len()).collect();
        let mut out = Vec::with_capacity(body.len());
        while !left.is_empty() {
            let k = left.iter().position(|&i| ready(&body[i], &bound)).unwrap_or(0);
            let i = left.remove(k);
            body[i].for_each_var(&mut |v| {
                bound.insert(v);
            });
            out.push(i);
        }
        out
    }
}

impl Database for Scope<'_> {
    fn def(&self, pred: PredId) -> Def<'_> {
        let extra: &[CClause] = self.extra.get(pred as usize).map_or(&[], |v| v.as_slice());
        match self.ev.defs.get(pred as usize) {
            Some(BaseDef::Builtin(b)) => Def::Builtin(*b),
            Some(BaseDef::Clauses(v)) => Def::Clauses(v, extra),
            None if extra.is_empty() => Def::Undefined,
            None => Def::Clauses(&[], extra),
        }
    }
}

/// Entailment with a fresh evaluator.
pub fn entails(bk: &KnowledgeBase, h: &Program, goal: &Literal, cfg: &EvalConfig) -> bool {
    Evaluator::new(bk, *cfg).entails(h, goal)
}

/// Outcome of `h` with a fresh evaluator.
pub fn test(pos: &[Literal], neg: &[Literal], bk: &KnowledgeBase, h: &Program, cfg: &EvalConfig) -> Outcome {
    let ex = ExampleSet { pos: pos.to_vec(), neg: neg.to_vec() };
    Evaluator::new(bk, *cfg).test(h, &ex)
}

/// Satisfiability of a subprogram with a fresh evaluator.
pub fn is_satisfiable(s: &Program, pos: &[Literal], bk: &KnowledgeBase, cfg: &EvalConfig) -> bool {
    Evaluator::new(bk, *cfg).is_satisfiable(s, pos)
}
