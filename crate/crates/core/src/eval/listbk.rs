//! List relations shipped with every knowledge base.

use alloc::vec;
use alloc::vec::Vec;

use crate::term::{Clause, Literal, Term};

fn v(name: &str) -> Term {
    Term::var(name)
}

fn l(pred: &str, args: Vec<Term>) -> Literal {
    Literal::new(pred, args)
}

/// `head/2`, `tail/2`, `empty/1`, `element/2`, `cons/3`, `append/3` (which
/// appends a single element) and `eq/2`.
pub fn list_clauses() -> Vec<Clause> {
    let cell = |h: &str, t: &str| Term::cons(v(h), v(t));
    vec![
        Clause::rule(l("head", vec![cell("H", "_T"), v("H")]), vec![]),
        Clause::rule(l("tail", vec![cell("_H", "T"), v("T")]), vec![]),
        Clause::rule(l("empty", vec![Term::nil()]), vec![]),
        Clause::rule(l("element", vec![cell("X", "_T"), v("X")]), vec![]),
        Clause::rule(
            l("element", vec![cell("_H", "T"), v("X")]),
            vec![l("element", vec![v("T"), v("X")])],
        ),
        Clause::rule(l("cons", vec![v("H"), v("T"), cell("H", "T")]), vec![]),
        Clause::rule(l("append", vec![Term::nil(), v("X"), Term::list([v("X")])]), vec![]),
        Clause::rule(
            l("append", vec![cell("H", "T"), v("X"), cell("H", "R")]),
            vec![l("append", vec![v("T"), v("X"), v("R")])],
        ),
        Clause::rule(l("eq", vec![v("X"), v("X")]), vec![]),
    ]
}
