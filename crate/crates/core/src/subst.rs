//! Substitutions and syntactic unification.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::term::{Clause, Literal, Sym, Term};

/// A finite map from variables to terms. Identity bindings are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Substitution {
    bindings: BTreeMap<Sym, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Sym, Term)>>(pairs: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.bind(v, t);
        }
        s
    }

    /// Adds `var -> term`, replacing any earlier binding. A binding of a
    /// variable to itself is dropped.
    pub fn bind(&mut self, var: Sym, term: Term) {
        if matches!(&term, Term::Var(v) if *v == var) {
            self.bindings.remove(&var);
        } else {
            self.bindings.insert(var, term);
        }
    }

    pub fn get(&self, var: &Sym) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.bindings.iter()
    }

    /// Simultaneous replacement: each variable is replaced once, without
    /// looking at the replacement again.
    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Atom(_) | Term::Int(_) => t.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { pred: l.pred.clone(), args: l.args.iter().map(|a| self.apply_term(a)).collect() }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause {
            head: c.head.as_ref().map(|h| self.apply_literal(h)),
            body: c.body.iter().map(|b| self.apply_literal(b)).collect(),
        }
    }

    /// Fully dereferenced form: every binding is rewritten until no bound
    /// variable remains on a right-hand side. Returns `None` when the
    /// bindings are cyclic.
    pub fn closure(&self) -> Option<Substitution> {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            let mut visiting = Vec::new();
            let resolved = self.resolve(t, &mut visiting)?;
            out.bind(v.clone(), resolved);
        }
        Some(out)
    }

    fn resolve(&self, t: &Term, visiting: &mut Vec<Sym>) -> Option<Term> {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                None => Some(t.clone()),
                Some(next) => {
                    if visiting.contains(v) {
                        return None;
                    }
                    visiting.push(v.clone());
                    let r = self.resolve(next, visiting);
                    visiting.pop();
                    r
                }
            },
            Term::Atom(_) | Term::Int(_) => Some(t.clone()),
            Term::Compound(f, args) => {
                let mut out = Vec::with_capacity(args.len());
                for a in args {
                    out.push(self.resolve(a, visiting)?);
                }
                Some(Term::Compound(f.clone(), out))
            }
        }
    }

    /// Composition `self` then `other`: applying the result equals applying
    /// `self` and then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.bind(v.clone(), other.apply_term(t));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}->{t}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two literals, with occurs check.
///
/// The result is idempotent: no variable bound by it occurs in any of its
/// right-hand sides.
pub fn unify(a: &Literal, b: &Literal) -> Option<Substitution> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a.args.iter().zip(&b.args) {
        unify_terms(x, y, &mut s)?;
    }
    Some(s)
}

/// Unifies two terms under `s`, extending it in place. `s` is kept
/// idempotent throughout.
pub fn unify_terms(x: &Term, y: &Term, s: &mut Substitution) -> Option<()> {
    let x = s.apply_term(x);
    let y = s.apply_term(y);
    match (&x, &y) {
        (Term::Var(a), Term::Var(b)) if a == b => Some(()),
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if t.occurs(v) {
                return None;
            }
            let single = Substitution::from_pairs([(v.clone(), t.clone())]);
            let mut next = Substitution::new();
            for (k, old) in s.iter() {
                next.bind(k.clone(), single.apply_term(old));
            }
            next.bind(v.clone(), t.clone());
            *s = next;
            Some(())
        }
        (Term::Atom(a), Term::Atom(b)) if a == b => Some(()),
        (Term::Int(a), Term::Int(b)) if a == b => Some(()),
        (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
            for (p, q) in xs.iter().zip(ys) {
                unify_terms(p, q, s)?;
            }
            Some(())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::lit;
    use alloc::vec;

    #[test]
    fn empty_substitution_is_identity() {
        let l = lit("f", &["A", "B"]);
        assert_eq!(Substitution::new().apply_literal(&l), l);
    }

    #[test]
    fn direct_replacement() {
        let s = Substitution::from_pairs([
            (Sym::new("A"), Term::list([Term::atom("x")])),
            (Sym::new("B"), Term::atom("y")),
        ]);
        let got = s.apply_literal(&lit("head", &["A", "B"]));
        assert_eq!(got, Literal::new("head", vec![Term::list([Term::atom("x")]), Term::atom("y")]));
    }

    #[test]
    fn replacement_is_simultaneous() {
        let s = Substitution::from_pairs([(Sym::new("A"), Term::var("C")), (Sym::new("C"), Term::atom("d"))]);
        assert_eq!(s.apply_literal(&lit("p", &["A", "C"])), lit("p", &["C", "d"]));
    }

    #[test]
    fn closure_dereferences_chains() {
        let s = Substitution::from_pairs([(Sym::new("A"), Term::var("C")), (Sym::new("C"), Term::atom("d"))]);
        let c = s.closure().unwrap();
        let l = lit("p", &["A", "C"]);
        let once = c.apply_literal(&l);
        assert_eq!(once, lit("p", &["d", "d"]));
        assert_eq!(c.apply_literal(&once), once);
        let cyclic = Substitution::from_pairs([(Sym::new("A"), Term::var("B")), (Sym::new("B"), Term::var("A"))]);
        assert!(cyclic.closure().is_none());
    }

    #[test]
    fn identity_bindings_are_dropped() {
        let s = Substitution::from_pairs([(Sym::new("A"), Term::var("A"))]);
        assert!(s.is_empty());
    }

    #[test]
    fn unify_identical() {
        assert_eq!(unify(&lit("p", &["X"]), &lit("p", &["X"])), Some(Substitution::new()));
    }

    #[test]
    fn unify_forced_bindings() {
        let target = Literal::new("head", vec![Term::list([Term::atom("x")]), Term::atom("x")]);
        let s = unify(&lit("head", &["A", "B"]), &target).unwrap();
        assert_eq!(s.get(&Sym::new("A")), Some(&Term::list([Term::atom("x")])));
        assert_eq!(s.get(&Sym::new("B")), Some(&Term::atom("x")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn unify_failures() {
        assert!(unify(&lit("p", &["a"]), &lit("p", &["b"])).is_none());
        assert!(unify(&lit("p", &["X"]), &lit("q", &["X"])).is_none());
        assert!(unify(&lit("p", &["X"]), &lit("p", &["X", "Y"])).is_none());
        let cyc = Literal::new("p", vec![Term::var("X"), Term::cons(Term::atom("a"), Term::var("X"))]);
        assert!(unify(&lit("p", &["Y", "Y"]), &cyc).is_none());
    }

    #[test]
    fn unify_chains_to_idempotent_result() {
        let a = lit("p", &["X", "Y", "Z"]);
        let b = lit("p", &["Y", "Z", "c"]);
        let s = unify(&a, &b).unwrap();
        assert_eq!(s.apply_literal(&a), s.apply_literal(&b));
        assert_eq!(s.apply_literal(&a), lit("p", &["c", "c", "c"]));
    }

    #[test]
    fn compose_matches_sequential_application() {
        let s1 = Substitution::from_pairs([(Sym::new("A"), Term::var("B"))]);
        let s2 = Substitution::from_pairs([(Sym::new("B"), Term::atom("k")), (Sym::new("C"), Term::Int(2))]);
        let l = lit("p", &["A", "B", "C"]);
        assert_eq!(s1.compose(&s2).apply_literal(&l), s2.apply_literal(&s1.apply_literal(&l)));
    }
}
