//! Failure-derived constraints and the pruning test.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::{canonical_clause, clause_key, ProgramKey};
use crate::eval::Outcome;
use crate::subsume::{clause_subsumes, theory_subsumes};
use crate::term::{PredSig, Program};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ConstraintKind {
    /// Prunes programs the payload subsumes.
    Specialisation,
    /// Prunes programs that subsume the payload.
    Generalisation,
    /// Prunes programs redundant with respect to the payload.
    Redundancy,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 3] =
        [ConstraintKind::Specialisation, ConstraintKind::Generalisation, ConstraintKind::Redundancy];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Specialisation => "specialisation",
            ConstraintKind::Generalisation => "generalisation",
            ConstraintKind::Redundancy => "redundancy",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub payload: Program,
}

impl Constraint {
    /// Stores the payload with every clause in canonical form.
    pub fn new(kind: ConstraintKind, payload: &Program) -> Constraint {
        let mut clauses: Vec<_> = payload.clauses().iter().map(canonical_clause).collect();
        clauses.sort_by_key(clause_key);
        Constraint { kind, payload: Program::new(clauses) }
    }

    pub fn prunes(&self, candidate: &Program) -> bool {
        match self.kind {
            ConstraintKind::Specialisation => theory_subsumes(&self.payload, candidate),
            ConstraintKind::Generalisation => theory_subsumes(candidate, &self.payload),
            ConstraintKind::Redundancy => redundant(candidate, &self.payload),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.kind.as_str())?;
        for (i, c) in self.payload.clauses().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `p` contains a specialisation of every clause of `q`, and every
/// recursive rule of `p` specialises some clause of `q`.
pub fn redundant(p: &Program, q: &Program) -> bool {
    let covers = q.clauses().iter().all(|c| p.clauses().iter().any(|c2| clause_subsumes(c, c2)));
    covers
        && p
            .clauses()
            .iter()
            .filter(|r| r.is_recursive())
            .all(|r| q.clauses().iter().any(|c| clause_subsumes(c, r)))
}

/// Whether a redundancy constraint on `m` may be kept. Payloads whose bodies
/// call the target predicate can prune optimal solutions: `{:- f(C,B)}` is
/// unsatisfiable without a definition of `f`, yet its clause subsumes the
/// recursive rule of every recursive solution.
pub fn redundancy_admissible(m: &Program, target: &PredSig) -> bool {
    !m.clauses().iter().any(|c| c.calls(target))
}

/// Constraints learned from a failed hypothesis.
pub fn constrain(h: &Program, outcome: &Outcome, target: &PredSig) -> Vec<Constraint> {
    let mut out = Vec::new();
    if !outcome.is_complete() {
        out.push(Constraint::new(ConstraintKind::Specialisation, h));
    }
    if !outcome.is_consistent() {
        out.push(Constraint::new(ConstraintKind::Generalisation, h));
    }
    if outcome.is_totally_incomplete() && redundancy_admissible(h, target) {
        out.push(Constraint::new(ConstraintKind::Redundancy, h));
    }
    out
}

/// An append-only set of constraints.
#[derive(Clone, Debug, Default)]
pub struct ConstraintStore {
    list: Vec<Constraint>,
    seen: BTreeSet<(ConstraintKind, ProgramKey)>,
    counts: [usize; 3],
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c` unless an identical constraint is present. Returns whether it
    /// was new.
    pub fn add(&mut self, c: Constraint) -> bool {
        if !self.seen.insert((c.kind, c.payload.key())) {
            return false;
        }
        self.counts[c.kind as usize] += 1;
        self.list.push(c);
        true
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Constraint>) -> usize {
        cs.into_iter().filter(|c| self.add(c.clone())).count()
    }

    /// Constraints in insertion order. Indices are stable.
    pub fn constraints(&self) -> &[Constraint] {
        &self.list
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn count(&self, kind: ConstraintKind) -> usize {
        self.counts[kind as usize]
    }

    /// Reference pruning test: checks every stored constraint.
    pub fn violates(&self, candidate: &Program) -> bool {
        self.list.iter().any(|c| c.prunes(candidate))
    }
}
