//! Canonical keys for clauses and programs.
//!
//! Two clauses get the same key iff they are equal up to variable renaming
//! and body order. Program keys are sorted sets of clause keys.
//!
//! The head is encoded first. The body is then emitted one literal at a
//! time, always choosing a literal whose encoding is smallest under the
//! variable numbering built so far. Variables are numbered by first
//! appearance. Literal encodings are prefix-free, so the greedy choice with
//! branching on ties yields the lexicographically least encoding over all
//! body orders.

use alloc::vec::Vec;
use core::fmt;

use crate::term::{Clause, Literal, Program, Sym, Term};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tok {
    Goal,
    Rule,
    Pred(Sym, usize),
    Var(u32),
    Atom(Sym),
    Int(i64),
    Fun(Sym, usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseKey(Vec<Tok>);

impl ClauseKey {
    pub fn tokens(&self) -> &[Tok] {
        &self.0
    }
}

impl fmt::Debug for ClauseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            match t {
                Tok::Goal => f.write_str(":-")?,
                Tok::Rule => f.write_str("<-")?,
                Tok::Pred(p, n) => write!(f, " {p}/{n}")?,
                Tok::Var(v) => write!(f, " _{v}")?,
                Tok::Atom(a) => write!(f, " {a}")?,
                Tok::Int(i) => write!(f, " {i}")?,
                Tok::Fun(g, n) => write!(f, " {g}/{n}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProgramKey(Vec<ClauseKey>);

impl ProgramKey {
    pub fn clauses(&self) -> &[ClauseKey] {
        &self.0
    }
}

#[derive(Clone, Default)]
struct Numbering {
    names: Vec<Sym>,
}

impl Numbering {
    fn get(&self, v: &Sym) -> Option<u32> {
        self.names.iter().position(|n| n == v).map(|i| i as u32)
    }

    fn encode_literal(&mut self, l: &Literal, out: &mut Vec<Tok>) {
        out.push(Tok::Pred(l.pred.clone(), l.args.len()));
        for a in &l.args {
            self.encode_term(a, out);
        }
    }

    fn encode_term(&mut self, t: &Term, out: &mut Vec<Tok>) {
        match t {
            Term::Var(v) => {
                let id = match self.get(v) {
                    Some(id) => id,
                    None => {
                        self.names.push(v.clone());
                        (self.names.len() - 1) as u32
                    }
                };
                out.push(Tok::Var(id));
            }
            Term::Atom(a) => out.push(Tok::Atom(a.clone())),
            Term::Int(i) => out.push(Tok::Int(*i)),
            Term::Compound(f, args) => {
                out.push(Tok::Fun(f.clone(), args.len()));
                for a in args {
                    self.encode_term(a, out);
                }
            }
        }
    }
}

pub fn clause_key(c: &Clause) -> ClauseKey {
    let mut numbering = Numbering::default();
    let mut prefix = Vec::new();
    match &c.head {
        Some(h) => {
            prefix.push(Tok::Rule);
            numbering.encode_literal(h, &mut prefix);
        }
        None => prefix.push(Tok::Goal),
    }
    let mut body: Vec<&Literal> = Vec::with_capacity(c.body.len());
    for l in &c.body {
        if !body.contains(&l) {
            body.push(l);
        }
    }
    let mut best: Option<Vec<Tok>> = None;
    extend(&body, &mut alloc::vec![false; body.len()], numbering, prefix, &mut best);
    ClauseKey(best.unwrap_or_default())
}

fn extend(
    body: &[&Literal],
    used: &mut Vec<bool>,
    numbering: Numbering,
    prefix: Vec<Tok>,
    best: &mut Option<Vec<Tok>>,
) {
    if let Some(b) = best.as_ref() {
        let n = prefix.len().min(b.len());
        if prefix[..n] > b[..n] {
            return;
        }
    }
    let mut candidates: Vec<(usize, Vec<Tok>, Numbering)> = Vec::new();
    for (i, l) in body.iter().enumerate() {
        if used[i] {
            continue;
        }
        let mut nb = numbering.clone();
        let mut enc = Vec::new();
        nb.encode_literal(l, &mut enc);
        match candidates.first() {
            Some((_, e, _)) if enc > *e => {}
            Some((_, e, _)) if enc == *e => candidates.push((i, enc, nb)),
            _ => {
                candidates.clear();
                candidates.push((i, enc, nb));
            }
        }
    }
    if candidates.is_empty() {
        if best.as_ref().is_none_or(|b| prefix < *b) {
            *best = Some(prefix);
        }
        return;
    }
    for (i, enc, nb) in candidates {
        used[i] = true;
        let mut next = prefix.clone();
        next.extend(enc);
        extend(body, used, nb, next, best);
        used[i] = false;
    }
}

pub fn program_key(p: &Program) -> ProgramKey {
    let mut keys: Vec<ClauseKey> = p.clauses().iter().map(clause_key).collect();
    keys.sort();
    keys.dedup();
    ProgramKey(keys)
}

/// Rewrites a clause into its canonical representative: head first, body in
/// canonical order, variables renamed `A`, `B`, ... by first appearance.
pub fn canonical_clause(c: &Clause) -> Clause {
    let key = clause_key(c);
    decode(&key)
}

/// Rebuilds a clause from its key.
pub fn decode(key: &ClauseKey) -> Clause {
    let toks = key.tokens();
    let mut pos = 1;
    let head = match toks.first() {
        Some(Tok::Rule) => Some(decode_literal(toks, &mut pos)),
        _ => None,
    };
    let mut body = Vec::new();
    while pos < toks.len() {
        body.push(decode_literal(toks, &mut pos));
    }
    Clause { head, body }
}

fn decode_literal(toks: &[Tok], pos: &mut usize) -> Literal {
    let Tok::Pred(p, n) = &toks[*pos] else {
        panic!("malformed clause key");
    };
    *pos += 1;
    let args = (0..*n).map(|_| decode_term(toks, pos)).collect();
    Literal { pred: p.clone(), args }
}

fn decode_term(toks: &[Tok], pos: &mut usize) -> Term {
    let t = &toks[*pos];
    *pos += 1;
    match t {
        Tok::Var(v) => Term::Var(var_name(*v)),
        Tok::Atom(a) => Term::Atom(a.clone()),
        Tok::Int(i) => Term::Int(*i),
        Tok::Fun(f, n) => Term::Compound(f.clone(), (0..*n).map(|_| decode_term(toks, pos)).collect()),
        Tok::Goal | Tok::Rule | Tok::Pred(..) => panic!("malformed clause key"),
    }
}

/// `A`..`Z`, then `V26`, `V27`, ...
pub fn var_name(i: u32) -> Sym {
    if i < 26 {
        let c = (b'A' + i as u8) as char;
        let mut buf = [0u8; 4];
        Sym::new(c.encode_utf8(&mut buf))
    } else {
        Sym::from(alloc::format!("V{i}"))
    }
}
