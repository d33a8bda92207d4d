//! Terms, literals, clauses and programs.
//!
//! Hypotheses are sets of definite clauses. Subprograms extracted during
//! failure analysis may additionally contain goal clauses (clauses without a
//! head), so [`Clause::head`] is optional.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{self, ProgramKey};

/// Functor used for list cells.
pub const CONS: &str = ".";
/// Constant terminating a list.
pub const NIL: &str = "[]";

/// An immutable, cheaply clonable symbol.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Sym),
    Atom(Sym),
    Int(i64),
    Compound(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Sym::new(name))
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(Sym::new(name))
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Compound(Sym::new(CONS), alloc::vec![head, tail])
    }

    /// Builds a proper list from `items`.
    pub fn list<I>(items: I) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Term::nil(), |tail, head| Term::cons(head, tail))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Int(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::Atom(_) | Term::Int(_))
    }

    /// Visits every variable occurrence, left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a Sym)) {
        match self {
            Term::Var(v) => f(v),
            Term::Atom(_) | Term::Int(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }

    pub fn occurs(&self, var: &Sym) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Atom(_) | Term::Int(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    /// Head and tail of a list cell.
    pub fn as_list_cell(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::Compound(f, args) if f.as_str() == CONS && args.len() == 2 => {
                Some((&args[0], &args[1]))
            }
            _ => None,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Atom(v) => write!(f, "{v}"),
            Term::Int(i) => write!(f, "{i}"),
            Term::Compound(..) if self.as_list_cell().is_some() => {
                f.write_str("[")?;
                let mut cur = self;
                let mut first = true;
                while let Some((h, t)) = cur.as_list_cell() {
                    if !first {
                        f.write_str(",")?;
                    }
                    write!(f, "{h}")?;
                    first = false;
                    cur = t;
                }
                match cur {
                    Term::Atom(a) if a.as_str() == NIL => {}
                    rest => write!(f, "|{rest}")?,
                }
                f.write_str("]")
            }
            Term::Compound(functor, args) => {
                write!(f, "{functor}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// A predicate symbol together with its arity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PredSig {
    pub name: Sym,
    pub arity: usize,
}

impl PredSig {
    pub fn new(name: &str, arity: usize) -> Self {
        PredSig { name: Sym::new(name), arity }
    }
}

impl fmt::Display for PredSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// An atom `p(t1, ..., tn)`; the arity is the length of `args`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Literal { pred: Sym::new(pred), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn sig(&self) -> PredSig {
        PredSig { name: self.pred.clone(), arity: self.args.len() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a Sym)) {
        self.args.iter().for_each(|a| a.for_each_var(f));
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    pub fn same_sig(&self, other: &Literal) -> bool {
        self.pred == other.pred && self.args.len() == other.args.len()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A definite clause (`head` present) or a goal clause (`head` absent).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub head: Option<Literal>,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn rule(head: Literal, body: Vec<Literal>) -> Self {
        Clause { head: Some(head), body }
    }

    pub fn goal(body: Vec<Literal>) -> Self {
        Clause { head: None, body }
    }

    pub fn is_goal(&self) -> bool {
        self.head.is_none()
    }

    /// Number of literals, counting the head.
    pub fn size(&self) -> usize {
        self.body.len() + usize::from(self.head.is_some())
    }

    /// All literals, head first.
    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.head.iter().chain(self.body.iter())
    }

    /// A clause is recursive when its head predicate occurs in its body.
    pub fn is_recursive(&self) -> bool {
        match &self.head {
            Some(h) => self.body.iter().any(|b| b.same_sig(h)),
            None => false,
        }
    }

    /// True when some body literal uses predicate `sig`.
    pub fn calls(&self, sig: &PredSig) -> bool {
        self.body
            .iter()
            .any(|b| b.pred == sig.name && b.args.len() == sig.arity)
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for lit in self.literals() {
            lit.for_each_var(&mut |v| {
                out.insert(v.clone());
            });
        }
        out
    }

    /// True iff the literals cannot be split into two nonempty groups with
    /// disjoint variables. Variable-free literals do not split a clause.
    pub fn is_connected(&self) -> bool {
        let lits: Vec<BTreeSet<Sym>> = self
            .literals()
            .map(Literal::vars)
            .filter(|vs| !vs.is_empty())
            .collect();
        if lits.len() <= 1 {
            return true;
        }
        let mut reached = alloc::vec![false; lits.len()];
        let mut frontier: BTreeSet<Sym> = lits[0].clone();
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (i, vs) in lits.iter().enumerate() {
                if !reached[i] && vs.iter().any(|v| frontier.contains(v)) {
                    reached[i] = true;
                    frontier.extend(vs.iter().cloned());
                    changed = true;
                }
            }
        }
        reached.into_iter().all(|r| r)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = &self.head {
            write!(f, "{h}")?;
            if !self.body.is_empty() {
                f.write_str(" :- ")?;
            }
        } else {
            f.write_str(":- ")?;
        }
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str(".")
    }
}

/// A set of clauses. Clause order carries no meaning and no two clauses
/// share a canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    clauses: Vec<Clause>,
}

impl Program {
    pub fn empty() -> Self {
        Program::default()
    }

    /// Builds a program, dropping clauses that are variants of earlier ones.
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in clauses {
            if seen.insert(canon::clause_key(&c)) {
                out.push(c);
            }
        }
        Program { clauses: out }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Total number of literals, heads included.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(Clause::size).sum()
    }

    pub fn has_recursion(&self) -> bool {
        self.clauses.iter().any(Clause::is_recursive)
    }

    pub fn has_goal_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_goal)
    }

    pub fn is_definite(&self) -> bool {
        !self.has_goal_clause()
    }

    /// True when some clause body uses one of the predicates defined by the
    /// heads of this program, or `extra` when given.
    pub fn calls_defined(&self, extra: Option<&PredSig>) -> bool {
        let mut defined: BTreeSet<PredSig> =
            self.clauses.iter().filter_map(|c| c.head.as_ref().map(Literal::sig)).collect();
        if let Some(sig) = extra {
            defined.insert(sig.clone());
        }
        self.clauses
            .iter()
            .flat_map(|c| c.body.iter())
            .any(|b| defined.contains(&b.sig()))
    }

    pub fn key(&self) -> ProgramKey {
        canon::program_key(self)
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Shorthand used heavily in tests: `lit("head", &["A", "B"])`, where names
/// starting with an uppercase letter or `_` are variables and everything else
/// is an atom or an integer.
pub fn lit(pred: &str, args: &[&str]) -> Literal {
    Literal::new(pred, args.iter().map(|a| simple_term(a)).collect())
}

fn simple_term(s: &str) -> Term {
    let first = s.chars().next().unwrap_or('a');
    if first.is_ascii_uppercase() || first == '_' {
        Term::var(s)
    } else if let Ok(i) = s.parse::<i64>() {
        Term::Int(i)
    } else {
        Term::atom(s)
    }
}
