use std::collections::BTreeMap;

use lff_core::bias::{Bias, Direction};
use lff_core::eval::{EvalConfig, Evaluator, KnowledgeBase};
use lff_core::term::{Clause, Literal, PredSig, Sym, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Target f/2 over lists with the usual list relations.
pub fn list_bias(max_vars: usize, max_body: usize, max_clauses: usize) -> Bias {
    let sig = PredSig::new;
    let mut types = BTreeMap::new();
    let mut dirs = BTreeMap::new();
    let (i, o) = (Direction::In, Direction::Out);
    for (p, n, ts, ds) in [
        ("f", 2, vec!["list", "element"], vec![i, o]),
        ("head", 2, vec!["list", "element"], vec![i, o]),
        ("tail", 2, vec!["list", "list"], vec![i, o]),
        ("empty", 1, vec!["list"], vec![i]),
        ("zero", 1, vec!["element"], vec![o]),
        ("geq", 2, vec!["element", "element"], vec![i, i]),
    ] {
        types.insert(sig(p, n), ts.into_iter().map(Sym::new).collect());
        dirs.insert(sig(p, n), ds);
    }
    let body = vec![sig("head", 2), sig("tail", 2), sig("empty", 1), sig("zero", 1), sig("geq", 2)];
    Bias::new(sig("f", 2), body, types, dirs, max_vars, max_body, max_clauses).unwrap()
}

pub fn list_evaluator(bias: &Bias) -> Evaluator {
    Evaluator::new(&KnowledgeBase::standard(), EvalConfig::default()).with_modes(bias.modes())
}

pub fn ints(xs: &[i64]) -> Term {
    Term::list(xs.iter().map(|i| Term::Int(*i)))
}

pub fn f(list: Term, x: Term) -> Literal {
    Literal::new("f", vec![list, x])
}

pub fn rule(head: Literal, body: Vec<Literal>) -> Clause {
    Clause::rule(head, body)
}
