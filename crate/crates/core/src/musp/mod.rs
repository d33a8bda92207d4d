//! Minimal unsatisfiable subprograms of a totally incomplete hypothesis.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::canon::ProgramKey;
use crate::constraints::{redundancy_admissible, Constraint, ConstraintKind};
use crate::eval::Evaluator;
use crate::subsume::theory_subsumes;
use crate::term::{Clause, Literal, PredSig, Program};

/// Hypotheses larger than this are not searched for MUSPs.
pub const DEFAULT_SIZE_CAP: usize = 12;

/// Every program obtained from `h` by deleting one literal that still
/// subsumes `h`, has only connected clauses and is nonempty. Deleting a head
/// leaves a goal clause; deleting the only literal of a clause removes it.
pub fn subprogs(h: &Program) -> Vec<Program> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let own = h.key();
    for (ci, c) in h.clauses().iter().enumerate() {
        for pos in 0..c.size() {
            let reduced = delete_literal(c, pos);
            if reduced.as_ref().is_some_and(|r| !r.is_connected()) {
                continue;
            }
            let clauses = h
                .clauses()
                .iter()
                .enumerate()
                .filter_map(|(i, o)| if i == ci { reduced.clone() } else { Some(o.clone()) });
            let g = Program::new(clauses);
            if g.is_empty() || g.size() >= h.size() || !theory_subsumes(&g, h) {
                continue;
            }
            let key = g.key();
            // Deleting a repeated literal changes nothing.
            if key != own && seen.insert(key) {
                out.push(g);
            }
        }
    }
    out
}

/// Literal `pos` counts the head first when there is one.
fn delete_literal(c: &Clause, pos: usize) -> Option<Clause> {
    let (head, body): (Option<Literal>, Vec<Literal>) = match (&c.head, pos) {
        (Some(_), 0) => (None, c.body.clone()),
        (Some(h), p) => (Some(h.clone()), without(&c.body, p - 1)),
        (None, p) => (None, without(&c.body, p)),
    };
    if head.is_none() && body.is_empty() {
        None
    } else {
        Some(Clause { head, body })
    }
}

fn without(body: &[Literal], i: usize) -> Vec<Literal> {
    body.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()).collect()
}

struct Search<'a> {
    ev: &'a Evaluator,
    pos: &'a [Literal],
    sat: BTreeMap<ProgramKey, bool>,
    visited: BTreeSet<ProgramKey>,
    found: BTreeMap<ProgramKey, Program>,
    checks: usize,
}

impl Search<'_> {
    fn is_sat(&mut self, p: &Program) -> bool {
        let key = p.key();
        if let Some(s) = self.sat.get(&key) {
            return *s;
        }
        self.checks += 1;
        let s = self.ev.is_satisfiable(p, self.pos);
        self.sat.insert(key, s);
        s
    }

    fn descend(&mut self, h: &Program) {
        if !self.visited.insert(h.key()) {
            return;
        }
        let mut has_unsat_subprog = false;
        for s in subprogs(h) {
            if !self.is_sat(&s) {
                has_unsat_subprog = true;
                self.descend(&s);
            }
        }
        if !has_unsat_subprog {
            self.found.insert(h.key(), h.clone());
        }
    }
}

/// Deletion-minimal unsatisfiable subprograms reached by descending from
/// `h` through unsatisfiable one-literal deletions. `h` itself is returned
/// when none of its deletions is unsatisfiable.
pub fn find_musps_raw(h: &Program, pos: &[Literal], ev: &Evaluator) -> Vec<Program> {
    find_with_stats(h, pos, ev).0
}

/// Like [`find_musps_raw`], also reporting how many satisfiability checks
/// ran.
pub fn find_with_stats(h: &Program, pos: &[Literal], ev: &Evaluator) -> (Vec<Program>, usize) {
    let mut s = Search {
        ev,
        pos,
        sat: BTreeMap::new(),
        visited: BTreeSet::new(),
        found: BTreeMap::new(),
        checks: 0,
    };
    s.descend(h);
    (s.found.into_values().collect(), s.checks)
}

/// The smallest of the deletion-minimal unsatisfiable subprograms.
pub fn find_musps(h: &Program, pos: &[Literal], ev: &Evaluator) -> Vec<Program> {
    minimum_size(find_musps_raw(h, pos, ev))
}

pub fn minimum_size(ms: Vec<Program>) -> Vec<Program> {
    let Some(min) = ms.iter().map(Program::size).min() else { return ms };
    ms.into_iter().filter(|m| m.size() == min).collect()
}

/// MUSPs of `h` and the constraints built from them.
#[derive(Clone, Debug, Default)]
pub struct UnsatReport {
    pub musps: Vec<Program>,
    pub constraints: Vec<Constraint>,
    /// Set when `h` exceeded the size cap and was not searched.
    pub capped: bool,
}

/// A specialisation and a redundancy constraint per MUSP. Redundancy
/// constraints whose payload calls `target` are withheld.
pub fn unsat_constraints(
    h: &Program,
    pos: &[Literal],
    ev: &Evaluator,
    target: &PredSig,
    size_cap: usize,
) -> UnsatReport {
    if h.size() > size_cap {
        return UnsatReport { capped: true, ..UnsatReport::default() };
    }
    let musps = find_musps(h, pos, ev);
    let mut constraints = Vec::new();
    for m in &musps {
        constraints.push(Constraint::new(ConstraintKind::Specialisation, m));
        if redundancy_admissible(m, target) {
            constraints.push(Constraint::new(ConstraintKind::Redundancy, m));
        }
    }
    UnsatReport { musps, constraints, capped: false }
}
