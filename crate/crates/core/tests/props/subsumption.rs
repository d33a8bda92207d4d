//! θ-subsumption against brute-force enumeration of substitutions.

use std::collections::BTreeSet;

use lff_core::subst::Substitution;
use lff_core::subsume::{clause_subsumes, theory_subsumes};
use lff_core::term::{Clause, Literal, Program, Sym, Term};
use rand::seq::SliceRandom;
use rand::Rng;

const CASES: usize = 600;
const PREDS: [(&str, usize); 4] = [("p", 1), ("q", 2), ("r", 2), ("s", 3)];
const VARS: [&str; 4] = ["A", "B", "C", "D"];
const CONSTS: [&str; 2] = ["a", "b"];

fn term(rng: &mut impl Rng) -> Term {
    if rng.gen_bool(0.85) {
        Term::var(VARS[rng.gen_range(0..VARS.len())])
    } else {
        Term::atom(CONSTS[rng.gen_range(0..CONSTS.len())])
    }
}

fn literal(rng: &mut impl Rng) -> Literal {
    let (p, n) = PREDS[rng.gen_range(0..PREDS.len())];
    Literal::new(p, (0..n).map(|_| term(rng)).collect())
}

fn clause(rng: &mut impl Rng, max_body: usize) -> Clause {
    let body = (0..rng.gen_range(1..=max_body)).map(|_| literal(rng)).collect();
    if rng.gen_bool(0.7) {
        Clause::rule(Literal::new("f", vec![term(rng), term(rng)]), body)
    } else {
        Clause::goal(body)
    }
}

/// A clause `c` subsumes: a random instance with extra literals, shuffled.
fn specialise(rng: &mut impl Rng, c: &Clause) -> Clause {
    let mut s = Substitution::new();
    for v in c.vars() {
        if rng.gen_bool(0.5) {
            s.bind(v, term(rng));
        }
    }
    let mut out = s.apply_clause(c);
    for _ in 0..rng.gen_range(0..3) {
        out.body.push(literal(rng));
    }
    out.body.shuffle(rng);
    if out.head.is_none() && rng.gen_bool(0.5) {
        out.head = Some(Literal::new("f", vec![term(rng), term(rng)]));
    }
    out
}

fn arg_terms(c: &Clause, out: &mut BTreeSet<Term>) {
    for l in c.literals() {
        out.extend(l.args.iter().cloned());
    }
}

/// Tries every map from the variables of `c1` into the argument terms of
/// `c2`.
fn oracle(c1: &Clause, c2: &Clause) -> bool {
    if c1.head.is_some() && c2.head.is_none() {
        return false;
    }
    let vars: Vec<Sym> = c1.vars().into_iter().collect();
    let mut pool = BTreeSet::new();
    arg_terms(c2, &mut pool);
    let pool: Vec<Term> = pool.into_iter().collect();
    if pool.is_empty() {
        return vars.is_empty() && c1.body.is_empty();
    }
    let body2: BTreeSet<&Literal> = c2.body.iter().collect();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let s = Substitution::from_pairs(vars.iter().cloned().zip(digits.iter().map(|d| pool[*d].clone())));
        let heads_ok = match (&c1.head, &c2.head) {
            (Some(h1), Some(h2)) => s.apply_literal(h1) == *h2,
            _ => true,
        };
        if heads_ok && c1.body.iter().all(|l| body2.contains(&s.apply_literal(l))) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return false;
            }
            digits[i] += 1;
            if digits[i] < pool.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

pub fn clause_subsumption_matches_exhaustive_substitution() {
    let mut rng = super::common::rng(0x5u64);
    let (mut yes, mut no) = (0, 0);
    for case in 0..CASES {
        let c1 = clause(&mut rng, 3);
        let c2 = if rng.gen_bool(0.5) { specialise(&mut rng, &c1) } else { clause(&mut rng, 4) };
        let want = oracle(&c1, &c2);
        assert_eq!(clause_subsumes(&c1, &c2), want, "case {case}: {c1} vs {c2}");
        if want {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > CASES / 5 && no > CASES / 5, "{yes} subsumed, {no} not");
}

pub fn theory_subsumption_matches_clausewise_oracle() {
    let mut rng = super::common::rng(0x51u64);
    let mut yes = 0;
    for case in 0..CASES {
        let t1: Vec<Clause> = (0..rng.gen_range(1..=3)).map(|_| clause(&mut rng, 3)).collect();
        let t2: Vec<Clause> = (0..rng.gen_range(1..=3))
            .map(|_| {
                if rng.gen_bool(0.7) {
                    let c = t1.choose(&mut rng).unwrap().clone();
                    specialise(&mut rng, &c)
                } else {
                    clause(&mut rng, 3)
                }
            })
            .collect();
        let want = t2.iter().all(|c2| t1.iter().any(|c1| oracle(c1, c2)));
        let (p1, p2) = (Program::new(t1), Program::new(t2));
        assert_eq!(theory_subsumes(&p1, &p2), want, "case {case}: {p1} vs {p2}");
        yes += usize::from(want);
    }
    assert!(yes > CASES / 5 && yes < CASES * 4 / 5, "{yes} of {CASES} subsumed");
}

pub fn subsumption_is_reflexive_and_transitive() {
    let mut rng = super::common::rng(0x52u64);
    for _ in 0..CASES {
        let a = clause(&mut rng, 3);
        let b = specialise(&mut rng, &a);
        let c = specialise(&mut rng, &b);
        assert!(clause_subsumes(&a, &a));
        assert!(clause_subsumes(&a, &b), "{a} vs {b}");
        assert!(clause_subsumes(&a, &c), "{a} vs {c}");
    }
}
