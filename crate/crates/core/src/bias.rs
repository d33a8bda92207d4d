//! Hypothesis-space declarations and clause well-formedness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::subsume::clause_subsumes;
use crate::term::{Clause, PredSig, Program, Sym, Term};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Direction {
    In,
    Out,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::In => "in",
            Direction::Out => "out",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bias {
    pub head: PredSig,
    pub body: Vec<PredSig>,
    pub types: BTreeMap<PredSig, Vec<Sym>>,
    pub directions: BTreeMap<PredSig, Vec<Direction>>,
    pub max_vars: usize,
    pub max_body: usize,
    pub max_clauses: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BiasError {
    MissingTypes(PredSig),
    MissingDirections(PredSig),
    ZeroLimit(&'static str),
    HeadInBody(PredSig),
}

impl fmt::Display for BiasError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiasError::MissingTypes(p) => write!(f, "no type declaration for {p}"),
            BiasError::MissingDirections(p) => write!(f, "no direction declaration for {p}"),
            BiasError::ZeroLimit(name) => write!(f, "{name} must be at least 1"),
            BiasError::HeadInBody(p) => write!(f, "head predicate {p} is also declared as a body predicate"),
        }
    }
}

impl Bias {
    /// Checks the declaration invariants. `body` is sorted and deduplicated.
    pub fn new(
        head: PredSig,
        body: Vec<PredSig>,
        types: BTreeMap<PredSig, Vec<Sym>>,
        directions: BTreeMap<PredSig, Vec<Direction>>,
        max_vars: usize,
        max_body: usize,
        max_clauses: usize,
    ) -> Result<Bias, BiasError> {
        let mut body = body;
        body.sort();
        body.dedup();
        for (name, v) in [("max_vars", max_vars), ("max_body", max_body), ("max_clauses", max_clauses)] {
            if v == 0 {
                return Err(BiasError::ZeroLimit(name));
            }
        }
        if body.contains(&head) {
            return Err(BiasError::HeadInBody(head));
        }
        for p in core::iter::once(&head).chain(body.iter()) {
            if types.get(p).is_none() {
                return Err(BiasError::MissingTypes(p.clone()));
            }
            if directions.get(p).is_none() {
                return Err(BiasError::MissingDirections(p.clone()));
            }
        }
        Ok(Bias { head, body, types, directions, max_vars, max_body, max_clauses })
    }

    /// Largest clause size, head included.
    pub fn max_clause_size(&self) -> usize {
        self.max_body + 1
    }

    /// Body predicates plus the head predicate, in a fixed order.
    pub fn callable(&self) -> Vec<PredSig> {
        let mut v = self.body.clone();
        v.push(self.head.clone());
        v.sort();
        v
    }

    pub fn modes(&self) -> BTreeMap<PredSig, Vec<Direction>> {
        self.directions.clone()
    }

    /// Clause-level well-formedness. See the crate README for the list of
    /// rules.
    pub fn well_formed(&self, c: &Clause) -> bool {
        let Some(head) = &c.head else { return false };
        if head.sig() != self.head || c.body.is_empty() || c.body.len() > self.max_body {
            return false;
        }
        let mut head_vars = BTreeSet::new();
        for a in &head.args {
            match a {
                Term::Var(v) if head_vars.insert(v.clone()) => {}
                _ => return false,
            }
        }
        let mut seen = BTreeSet::new();
        for b in &c.body {
            let sig = b.sig();
            if sig != self.head && self.body.binary_search(&sig).is_err() {
                return false;
            }
            if !b.args.iter().all(Term::is_var) || !seen.insert(b) || b == head {
                return false;
            }
        }
        if c.vars().len() > self.max_vars {
            return false;
        }
        no_singletons(c) && self.typed(c) && self.safe(c) && c.is_connected()
    }

    fn typed(&self, c: &Clause) -> bool {
        let mut ty: BTreeMap<&Sym, &Sym> = BTreeMap::new();
        for l in c.literals() {
            let Some(tys) = self.types.get(&l.sig()) else { return false };
            for (a, t) in l.args.iter().zip(tys) {
                if let Term::Var(v) = a {
                    if *ty.entry(v).or_insert(t) != t {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every input of a body literal is a head input or an output of another
    /// body literal.
    fn safe(&self, c: &Clause) -> bool {
        let Some(head) = &c.head else { return false };
        let dirs = |sig: &PredSig| self.directions.get(sig);
        let mut head_in = BTreeSet::new();
        if let Some(ds) = dirs(&head.sig()) {
            for (a, d) in head.args.iter().zip(ds) {
                if let (Term::Var(v), Direction::In) = (a, d) {
                    head_in.insert(v);
                }
            }
        }
        for (i, b) in c.body.iter().enumerate() {
            let Some(ds) = dirs(&b.sig()) else { return false };
            for (a, d) in b.args.iter().zip(ds) {
                let Term::Var(v) = a else { continue };
                if *d != Direction::In || head_in.contains(v) {
                    continue;
                }
                let produced = c.body.iter().enumerate().any(|(j, o)| {
                    j != i
                        && dirs(&o.sig()).is_some_and(|ods| {
                            o.args.iter().zip(ods).any(|(oa, od)| *od == Direction::Out && oa == a)
                        })
                });
                if !produced {
                    return false;
                }
            }
        }
        true
    }

    /// Program-level rules on top of [`Bias::well_formed`]: clause count, a
    /// base case for recursive programs, and no clause subsuming another.
    pub fn program_well_formed(&self, p: &Program) -> bool {
        if p.is_empty() || p.len() > self.max_clauses {
            return false;
        }
        if !p.clauses().iter().all(|c| self.well_formed(c)) {
            return false;
        }
        if p.has_recursion() && p.clauses().iter().all(Clause::is_recursive) {
            return false;
        }
        let cs = p.clauses();
        for (i, a) in cs.iter().enumerate() {
            for (j, b) in cs.iter().enumerate() {
                if i != j && clause_subsumes(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Renders the bias in the directive syntax used by task files.
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = writeln!(s, "max_clause({}).", self.max_clauses);
        let _ = writeln!(s, "max_vars({}).", self.max_vars);
        let _ = writeln!(s, "max_body({}).", self.max_body);
        let _ = writeln!(s, "head_pred({},{}).", self.head.name, self.head.arity);
        for b in &self.body {
            let _ = writeln!(s, "body_pred({},{}).", b.name, b.arity);
        }
        for (p, ts) in &self.types {
            let _ = writeln!(s, "type({},{}).", p.name, tuple(ts.iter().map(Sym::as_str)));
        }
        for (p, ds) in &self.directions {
            let _ = writeln!(s, "direction({},{}).", p.name, tuple(ds.iter().map(|d| d.as_str())));
        }
        s
    }
}

fn no_singletons(c: &Clause) -> bool {
    let mut count: BTreeMap<&Sym, usize> = BTreeMap::new();
    for l in c.literals() {
        for a in &l.args {
            a.for_each_var(&mut |v| *count.entry(v).or_default() += 1);
        }
    }
    count.values().all(|n| *n >= 2)
}

fn tuple<'a>(items: impl Iterator<Item = &'a str>) -> String {
    let items: Vec<&str> = items.collect();
    let mut s = String::from("(");
    s.push_str(&items.join(","));
    if items.len() == 1 {
        s.push(',');
    }
    s.push(')');
    s
}
