//! θ-subsumption between clauses and between programs.
//!
//! `c1` subsumes `c2` when some substitution maps every literal of `c1` onto
//! a literal of `c2` of the same polarity. The mapping need not be
//! injective. Variables of `c2` are treated as constants.

use alloc::vec::Vec;

use crate::term::{Clause, Literal, Program, Sym, Term};

type Bindings<'a> = Vec<(&'a Sym, &'a Term)>;

pub fn clause_subsumes(c1: &Clause, c2: &Clause) -> bool {
    let mut env: Bindings = Vec::new();
    match (&c1.head, &c2.head) {
        (Some(h1), Some(h2)) => {
            if !match_literal(h1, h2, &mut env) {
                return false;
            }
        }
        (Some(_), None) => return false,
        (None, _) => {}
    }
    // Candidate targets per body literal, most constrained first.
    let mut order: Vec<(usize, Vec<&Literal>)> = c1
        .body
        .iter()
        .enumerate()
        .map(|(i, l)| (i, c2.body.iter().filter(|m| m.same_sig(l)).collect()))
        .collect();
    if order.iter().any(|(_, cands)| cands.is_empty()) {
        return false;
    }
    order.sort_by_key(|(_, cands)| cands.len());
    search(&c1.body, &order, 0, &mut env)
}

fn search<'a>(
    body: &'a [Literal],
    order: &[(usize, Vec<&'a Literal>)],
    k: usize,
    env: &mut Bindings<'a>,
) -> bool {
    let Some((i, cands)) = order.get(k) else {
        return true;
    };
    for target in cands {
        let mark = env.len();
        if match_literal(&body[*i], target, env) && search(body, order, k + 1, env) {
            return true;
        }
        env.truncate(mark);
    }
    false
}

fn match_literal<'a>(pattern: &'a Literal, target: &'a Literal, env: &mut Bindings<'a>) -> bool {
    if !pattern.same_sig(target) {
        return false;
    }
    let mark = env.len();
    for (p, t) in pattern.args.iter().zip(&target.args) {
        if !match_term(p, t, env) {
            env.truncate(mark);
            return false;
        }
    }
    true
}

fn match_term<'a>(p: &'a Term, t: &'a Term, env: &mut Bindings<'a>) -> bool {
    match p {
        Term::Var(v) => match env.iter().find(|(k, _)| *k == v) {
            Some((_, bound)) => *bound == t,
            None => {
                env.push((v, t));
                true
            }
        },
        Term::Atom(_) | Term::Int(_) => p == t,
        Term::Compound(f, ps) => match t {
            Term::Compound(g, ts) if f == g && ps.len() == ts.len() => {
                ps.iter().zip(ts).all(|(a, b)| match_term(a, b, env))
            }
            _ => false,
        },
    }
}

/// `t1` subsumes `t2` when every clause of `t2` is subsumed by a clause of
/// `t1`.
pub fn theory_subsumes(t1: &Program, t2: &Program) -> bool {
    t2.clauses()
        .iter()
        .all(|c2| t1.clauses().iter().any(|c1| clause_subsumes(c1, c2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::lit;
    use alloc::vec;

    fn rule(head: Literal, body: Vec<Literal>) -> Clause {
        Clause::rule(head, body)
    }

    fn example1_rule() -> Clause {
        rule(
            lit("f", &["A", "B"]),
            vec![lit("tail", &["A", "C"]), lit("empty", &["C"]), lit("head", &["A", "B"])],
        )
    }

    fn example2_rule() -> Clause {
        rule(
            lit("f", &["A", "B"]),
            vec![
                lit("empty", &["A"]),
                lit("head", &["A", "B"]),
                lit("tail", &["A", "C"]),
                lit("head", &["C", "B"]),
            ],
        )
    }

    #[test]
    fn dropping_a_literal_generalises() {
        let c1 = rule(lit("f", &["A", "B"]), vec![lit("tail", &["A", "C"]), lit("head", &["A", "B"])]);
        assert!(clause_subsumes(&c1, &example1_rule()));
        assert!(!clause_subsumes(&example1_rule(), &c1));
    }

    #[test]
    fn reflexive() {
        assert!(clause_subsumes(&example1_rule(), &example1_rule()));
        assert!(clause_subsumes(&example2_rule(), &example2_rule()));
    }

    #[test]
    fn no_mapping_for_empty_of_head_var() {
        let c1 = rule(lit("f", &["A", "B"]), vec![lit("empty", &["A"]), lit("tail", &["A", "C"])]);
        assert!(!clause_subsumes(&c1, &example1_rule()));
    }

    #[test]
    fn non_injective_mapping() {
        let c1 = Clause::goal(vec![lit("head", &["X", "Y"]), lit("head", &["Z", "Y"])]);
        let c2 = Clause::goal(vec![lit("head", &["A", "B"])]);
        assert!(clause_subsumes(&c1, &c2));
    }

    #[test]
    fn goal_clauses_ignore_heads() {
        let g = Clause::goal(vec![lit("tail", &["A", "C"]), lit("tail", &["C", "A"])]);
        let r = rule(lit("f", &["A", "B"]), vec![lit("tail", &["A", "C"]), lit("tail", &["C", "A"])]);
        assert!(clause_subsumes(&g, &r));
        assert!(!clause_subsumes(&r, &g));
        let longer = Clause::goal(vec![
            lit("tail", &["A", "C"]),
            lit("tail", &["C", "A"]),
            lit("head", &["A", "D"]),
        ]);
        assert!(clause_subsumes(&g, &longer));
    }

    #[test]
    fn head_variables_must_match_consistently() {
        let c1 = rule(lit("f", &["A", "A"]), vec![lit("head", &["A", "A"])]);
        let c2 = rule(lit("f", &["A", "B"]), vec![lit("head", &["A", "B"])]);
        assert!(!clause_subsumes(&c1, &c2));
        assert!(clause_subsumes(&c2, &c1));
    }

    #[test]
    fn theory_level() {
        let last = Program::new([
            example1_rule(),
            rule(lit("f", &["A", "B"]), vec![lit("tail", &["A", "C"]), lit("f", &["C", "B"])]),
        ]);
        assert!(theory_subsumes(&last, &last));
        let g = Program::new([
            rule(lit("f", &["A", "B"]), vec![lit("tail", &["A", "C"]), lit("empty", &["C"])]),
            rule(lit("f", &["A", "B"]), vec![lit("f", &["C", "B"])]),
        ]);
        assert!(theory_subsumes(&g, &last));
        assert!(!theory_subsumes(&last, &g));
        let single = Program::new([rule(lit("f", &["A", "B"]), vec![lit("empty", &["A"]), lit("head", &["A", "B"])])]);
        assert!(theory_subsumes(&single, &Program::new([example2_rule()])));
        assert!(theory_subsumes(&single, &Program::empty()));
    }
}
