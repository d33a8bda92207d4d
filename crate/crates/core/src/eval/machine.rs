//! A small SLD engine over a cell heap with a trail and a choicepoint stack.

use alloc::boxed::Box;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::time::Duration;

use super::clock::Clock;

pub(crate) type PredId = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Cell {
    /// Unbound when it points at itself.
    Ref(u32),
    Atom(u32),
    Int(i64),
    /// Points at a `Fun` header followed by its arguments.
    Str(u32),
    Fun(u32, u32),
}

#[derive(Clone, Debug)]
pub(crate) enum Tmpl {
    Var(u32),
    Atom(u32),
    Int(i64),
    Str(u32, Box<[Tmpl]>),
}

#[derive(Clone, Debug)]
pub(crate) struct CGoal {
    pub pred: PredId,
    pub args: Box<[Tmpl]>,
}

#[derive(Clone, Debug)]
pub(crate) struct CClause {
    pub head: Box<[Tmpl]>,
    pub body: Box<[CGoal]>,
    pub nvars: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Builtin {
    Decrement,
    Increment,
    Geq,
    Zero,
    One,
    Even,
    Odd,
    Sum,
}

impl Builtin {
    pub(crate) const ALL: [(&'static str, usize, Builtin); 8] = [
        ("decrement", 2, Builtin::Decrement),
        ("increment", 2, Builtin::Increment),
        ("geq", 2, Builtin::Geq),
        ("zero", 1, Builtin::Zero),
        ("one", 1, Builtin::One),
        ("even", 1, Builtin::Even),
        ("odd", 1, Builtin::Odd),
        ("sum", 3, Builtin::Sum),
    ];
}

pub(crate) enum Def<'a> {
    Builtin(Builtin),
    Clauses(&'a [CClause], &'a [CClause]),
    Undefined,
}

/// Predicate lookup for the machine.
pub(crate) trait Database {
    fn def(&self, pred: PredId) -> Def<'_>;
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Truth {
    Proved,
    Failed,
    /// Budget exhausted, depth cut off or an arithmetic goal with unbound
    /// inputs.
    Unknown,
}

pub(crate) struct Limits<'a> {
    pub max_depth: u32,
    pub steps: u64,
    pub occurs_check: bool,
    pub clock: &'a dyn Clock,
    pub timeout: Duration,
}

struct Goal {
    pred: PredId,
    args: Box<[Cell]>,
    depth: u32,
    next: Goals,
}

type Goals = Option<Rc<Goal>>;

struct Choice {
    goal: Rc<Goal>,
    alt: usize,
    trail_len: usize,
    heap_len: usize,
}

enum Step {
    Next(Goals),
    Fail,
    Abort,
}

enum Run {
    Proved,
    Failed,
    Aborted,
}

pub(crate) struct Machine<'a, D: Database> {
    db: &'a D,
    limits: Limits<'a>,
    heap: Vec<Cell>,
    trail: Vec<u32>,
    choices: Vec<Choice>,
    steps: u64,
    depth_limit: u32,
    cutoff: bool,
    floundered: bool,
    /// Set when a unification ran past its bound, as happens between
    /// cyclic terms.
    overflow: bool,
    deadline: Option<Duration>,
}

impl<'a, D: Database> Machine<'a, D> {
    pub(crate) fn new(db: &'a D, limits: Limits<'a>) -> Self {
        Machine {
            db,
            limits,
            heap: Vec::with_capacity(256),
            trail: Vec::with_capacity(64),
            choices: Vec::new(),
            steps: 0,
            depth_limit: 0,
            cutoff: false,
            floundered: false,
            overflow: false,
            deadline: None,
        }
    }

    /// Proves the conjunction `query` whose variables are numbered below
    /// `nvars`. Iterative deepening on goal depth.
    pub(crate) fn prove(&mut self, query: &[CGoal], nvars: u32) -> Truth {
        self.steps = 0;
        self.floundered = false;
        self.overflow = false;
        self.deadline = if self.limits.timeout.is_zero() {
            None
        } else {
            Some(self.limits.clock.now() + self.limits.timeout)
        };
        let max = self.limits.max_depth.max(1);
        let mut limit = max.min(8);
        loop {
            self.heap.clear();
            self.trail.clear();
            self.choices.clear();
            self.cutoff = false;
            self.depth_limit = limit;
            let base = self.alloc_vars(nvars);
            let goals = self.push_goals(query, base, 0, None);
            match self.run(goals) {
                Run::Proved => return Truth::Proved,
                Run::Aborted => return Truth::Unknown,
                Run::Failed if self.overflow => return Truth::Unknown,
                Run::Failed if !self.cutoff => {
                    return if self.floundered { Truth::Unknown } else { Truth::Failed };
                }
                Run::Failed if limit >= max => return Truth::Unknown,
                Run::Failed => limit = limit.saturating_mul(2).min(max),
            }
        }
    }

    fn run(&mut self, mut goals: Goals) -> Run {
        let mut pending: Option<(Rc<Goal>, usize)> = None;
        loop {
            let (goal, alt) = match pending.take() {
                Some(p) => p,
                None => match goals.take() {
                    None => return Run::Proved,
                    Some(g) => (g, 0),
                },
            };
            match self.step(&goal, alt) {
                Step::Next(g) => goals = g,
                Step::Abort => return Run::Aborted,
                Step::Fail => match self.choices.pop() {
                    None => return Run::Failed,
                    Some(c) => {
                        self.undo(c.trail_len);
                        self.heap.truncate(c.heap_len);
                        pending = Some((c.goal, c.alt));
                    }
                },
            }
        }
    }

    fn step(&mut self, g: &Rc<Goal>, start: usize) -> Step {
        self.steps += 1;
        if self.steps > self.limits.steps || self.overflow {
            return Step::Abort;
        }
        if self.steps & 255 == 0 {
            if let Some(dl) = self.deadline {
                if self.limits.clock.now() >= dl {
                    return Step::Abort;
                }
            }
        }
        if g.depth > self.depth_limit {
            self.cutoff = true;
            return Step::Fail;
        }
        let db = self.db;
        match db.def(g.pred) {
            Def::Undefined => Step::Fail,
            Def::Builtin(b) => {
                let trail_len = self.trail.len();
                match self.builtin(b, &g.args) {
                    Some(true) => Step::Next(g.next.clone()),
                    Some(false) => {
                        self.undo(trail_len);
                        Step::Fail
                    }
                    None => {
                        self.floundered = true;
                        self.undo(trail_len);
                        Step::Fail
                    }
                }
            }
            Def::Clauses(kb, extra) => {
                let total = kb.len() + extra.len();
                let pick = |i: usize| if i < kb.len() { &kb[i] } else { &extra[i - kb.len()] };
                let mut i = start;
                while i < total {
                    let cl = pick(i);
                    if !self.may_match(cl, &g.args) {
                        i += 1;
                        continue;
                    }
                    // Before unification binds the goal's arguments.
                    let mut j = i + 1;
                    while j < total && !self.may_match(pick(j), &g.args) {
                        j += 1;
                    }
                    let heap_len = self.heap.len();
                    let trail_len = self.trail.len();
                    let base = self.alloc_vars(cl.nvars);
                    let ok = cl
                        .head
                        .iter()
                        .zip(g.args.iter())
                        .all(|(t, c)| self.unify_tmpl(t, *c, base));
                    if ok {
                        if j < total {
                            self.choices.push(Choice { goal: g.clone(), alt: j, trail_len, heap_len });
                        }
                        let next = self.push_goals(&cl.body, base, g.depth + 1, g.next.clone());
                        return Step::Next(next);
                    }
                    self.undo(trail_len);
                    self.heap.truncate(heap_len);
                    i += 1;
                }
                Step::Fail
            }
        }
    }

    /// First-argument indexing.
    fn may_match(&self, cl: &CClause, args: &[Cell]) -> bool {
        let (Some(t), Some(c)) = (cl.head.first(), args.first()) else {
            return true;
        };
        match (t, self.deref(*c)) {
            (Tmpl::Var(_), _) | (_, Cell::Ref(_)) => true,
            (Tmpl::Atom(a), Cell::Atom(b)) => *a == b,
            (Tmpl::Int(a), Cell::Int(b)) => *a == b,
            (Tmpl::Str(f, xs), Cell::Str(p)) => {
                self.heap[p as usize] == Cell::Fun(*f, xs.len() as u32)
            }
            _ => false,
        }
    }

    fn alloc_vars(&mut self, n: u32) -> u32 {
        let base = self.heap.len() as u32;
        for i in 0..n {
            self.heap.push(Cell::Ref(base + i));
        }
        base
    }

    fn push_goals(&mut self, body: &[CGoal], base: u32, depth: u32, mut next: Goals) -> Goals {
        for g in body.iter().rev() {
            let args: Box<[Cell]> = g.args.iter().map(|t| self.build(t, base)).collect();
            next = Some(Rc::new(Goal { pred: g.pred, args, depth, next }));
        }
        next
    }

    fn build(&mut self, t: &Tmpl, base: u32) -> Cell {
        match t {
            Tmpl::Var(v) => Cell::Ref(base + v),
            Tmpl::Atom(a) => Cell::Atom(*a),
            Tmpl::Int(i) => Cell::Int(*i),
            Tmpl::Str(f, args) => {
                let p = self.heap.len();
                self.heap.push(Cell::Fun(*f, args.len() as u32));
                for _ in 0..args.len() {
                    self.heap.push(Cell::Int(0));
                }
                for (i, a) in args.iter().enumerate() {
                    let c = self.build(a, base);
                    self.heap[p + 1 + i] = c;
                }
                Cell::Str(p as u32)
            }
        }
    }

    fn deref(&self, mut c: Cell) -> Cell {
        while let Cell::Ref(a) = c {
            let next = self.heap[a as usize];
            if next == c {
                return c;
            }
            c = next;
        }
        c
    }

    fn bind(&mut self, var: u32, value: Cell) {
        self.heap[var as usize] = value;
        self.trail.push(var);
    }

    fn undo(&mut self, trail_len: usize) {
        while self.trail.len() > trail_len {
            let a = self.trail.pop().unwrap_or_default();
            if (a as usize) < self.heap.len() {
                self.heap[a as usize] = Cell::Ref(a);
            }
        }
    }

    fn occurs(&self, var: u32, c: Cell) -> bool {
        let mut stack = alloc::vec![c];
        while let Some(c) = stack.pop() {
            match self.deref(c) {
                Cell::Ref(a) if a == var => return true,
                Cell::Str(p) => {
                    if let Cell::Fun(_, n) = self.heap[p as usize] {
                        for i in 0..n {
                            stack.push(self.heap[(p + 1 + i) as usize]);
                        }
                    }
                }
                _ => {}
            }
        }
        false
    }

    fn bind_checked(&mut self, var: u32, value: Cell) -> bool {
        if self.limits.occurs_check && matches!(value, Cell::Str(_)) && self.occurs(var, value) {
            return false;
        }
        self.bind(var, value);
        true
    }

    fn unify(&mut self, a: Cell, b: Cell) -> bool {
        let mut work = alloc::vec![(a, b)];
        let mut budget = 4 * self.heap.len() + 64;
        while let Some((a, b)) = work.pop() {
            if budget == 0 {
                self.overflow = true;
                return false;
            }
            budget -= 1;
            let a = self.deref(a);
            let b = self.deref(b);
            match (a, b) {
                (Cell::Ref(x), Cell::Ref(y)) => {
                    if x != y {
                        if x < y {
                            self.bind(y, a);
                        } else {
                            self.bind(x, b);
                        }
                    }
                }
                (Cell::Ref(x), t) | (t, Cell::Ref(x)) => {
                    if !self.bind_checked(x, t) {
                        return false;
                    }
                }
                (Cell::Atom(p), Cell::Atom(q)) if p == q => {}
                (Cell::Int(p), Cell::Int(q)) if p == q => {}
                (Cell::Str(p), Cell::Str(q)) => {
                    if p == q {
                        continue;
                    }
                    let (fp, fq) = (self.heap[p as usize], self.heap[q as usize]);
                    let Cell::Fun(_, n) = fp else { return false };
                    if fp != fq {
                        return false;
                    }
                    for i in 1..=n {
                        work.push((self.heap[(p + i) as usize], self.heap[(q + i) as usize]));
                    }
                }
                _ => return false,
            }
        }
        true
    }

    fn unify_tmpl(&mut self, t: &Tmpl, c: Cell, base: u32) -> bool {
        match t {
            Tmpl::Var(v) => self.unify(Cell::Ref(base + v), c),
            Tmpl::Atom(a) => match self.deref(c) {
                Cell::Ref(x) => {
                    self.bind(x, Cell::Atom(*a));
                    true
                }
                Cell::Atom(b) => *a == b,
                _ => false,
            },
            Tmpl::Int(i) => match self.deref(c) {
                Cell::Ref(x) => {
                    self.bind(x, Cell::Int(*i));
                    true
                }
                Cell::Int(j) => *i == j,
                _ => false,
            },
            Tmpl::Str(f, args) => match self.deref(c) {
                Cell::Ref(x) => {
                    let built = self.build(t, base);
                    self.bind_checked(x, built)
                }
                Cell::Str(p) => {
                    if self.heap[p as usize] != Cell::Fun(*f, args.len() as u32) {
                        return false;
                    }
                    for (i, a) in args.iter().enumerate() {
                        let arg = self.heap[p as usize + 1 + i];
                        if !self.unify_tmpl(a, arg, base) {
                            return false;
                        }
                    }
                    true
                }
                _ => false,
            },
        }
    }

    fn int_arg(&self, c: Cell) -> Arg {
        match self.deref(c) {
            Cell::Int(i) => Arg::Int(i),
            Cell::Ref(_) => Arg::Free,
            _ => Arg::Other,
        }
    }

    /// `Some(true)` on success, `Some(false)` on failure and `None` when a
    /// required input is unbound.
    fn builtin(&mut self, b: Builtin, args: &[Cell]) -> Option<bool> {
        use Arg::*;
        let a: Vec<Arg> = args.iter().map(|c| self.int_arg(*c)).collect();
        if a.contains(&Other) {
            return Some(false);
        }
        let set = |m: &mut Self, c: Cell, v: i64| Some(m.unify(c, Cell::Int(v)));
        match b {
            Builtin::Decrement => match (a[0], a[1]) {
                (Int(x), _) if x > 0 => set(self, args[1], x - 1),
                (Int(_), _) => Some(false),
                (Free, Int(y)) if y >= 0 => set(self, args[0], y + 1),
                (Free, Int(_)) => Some(false),
                _ => None,
            },
            Builtin::Increment => match (a[0], a[1]) {
                (Int(x), _) => set(self, args[1], x + 1),
                (Free, Int(y)) if y > 0 => set(self, args[0], y - 1),
                (Free, Int(_)) => Some(false),
                _ => None,
            },
            Builtin::Geq => match (a[0], a[1]) {
                (Int(x), Int(y)) => Some(x >= y),
                _ => None,
            },
            Builtin::Zero => set(self, args[0], 0),
            Builtin::One => set(self, args[0], 1),
            Builtin::Even => match a[0] {
                Int(x) => Some(x.rem_euclid(2) == 0),
                _ => None,
            },
            Builtin::Odd => match a[0] {
                Int(x) => Some(x.rem_euclid(2) == 1),
                _ => None,
            },
            Builtin::Sum => match (a[0], a[1], a[2]) {
                (Int(x), Int(y), _) => set(self, args[2], x.wrapping_add(y)),
                (Int(x), Free, Int(z)) => set(self, args[1], z.wrapping_sub(x)),
                (Free, Int(y), Int(z)) => set(self, args[0], z.wrapping_sub(y)),
                _ => None,
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arg {
    Int(i64),
    Free,
    Other,
}
