//! MUSP search against the whole deletion lattice.

use std::collections::{BTreeMap, BTreeSet};

use lff_core::canon::ProgramKey;
use lff_core::eval::Evaluator;
use lff_core::musp::{find_musps, find_musps_raw, minimum_size, subprogs};
use lff_core::term::{Clause, Literal, Program, Term};
use rand::Rng;

const CASES: usize = 250;
const VARS: [&str; 4] = ["A", "B", "C", "D"];

fn var(rng: &mut impl Rng) -> Term {
    Term::var(VARS[rng.gen_range(0..VARS.len())])
}

fn body_literal(rng: &mut impl Rng) -> Literal {
    let (a, b) = (var(rng), var(rng));
    match rng.gen_range(0..6) {
        0 | 1 => Literal::new("tail", vec![a, b]),
        2 | 3 => Literal::new("head", vec![a, b]),
        4 => Literal::new("empty", vec![a]),
        _ => Literal::new("zero", vec![a]),
    }
}

/// One or two clauses, at most six literals in all.
fn program(rng: &mut impl Rng) -> Program {
    let two = rng.gen_bool(0.3);
    let budget = rng.gen_range(3..=6);
    let sizes = if two { vec![budget / 2, budget - budget / 2] } else { vec![budget] };
    Program::new(sizes.into_iter().map(|n| {
        let head = rng.gen_bool(0.8);
        let body_len = if head { n - 1 } else { n };
        let body = (0..body_len.max(1)).map(|_| body_literal(rng)).collect();
        if head {
            Clause::rule(Literal::new("f", vec![Term::var("A"), Term::var("B")]), body)
        } else {
            Clause::goal(body)
        }
    }))
}

fn examples(rng: &mut impl Rng) -> Vec<Literal> {
    (0..rng.gen_range(1..=3))
        .map(|_| {
            let xs: Vec<i64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect();
            super::common::f(super::common::ints(&xs), Term::Int(rng.gen_range(0..3)))
        })
        .collect()
}

/// Every program reachable from `h` by deletions, `h` included.
fn lattice(h: &Program) -> BTreeMap<ProgramKey, Program> {
    let mut all = BTreeMap::new();
    let mut todo = vec![h.clone()];
    while let Some(p) = todo.pop() {
        if all.insert(p.key(), p.clone()).is_none() {
            todo.extend(subprogs(&p));
        }
    }
    all
}

/// Unsatisfiable members of the lattice with no unsatisfiable member below
/// them.
fn oracle(h: &Program, pos: &[Literal], ev: &Evaluator) -> Vec<Program> {
    let all = lattice(h);
    let unsat: BTreeSet<ProgramKey> =
        all.iter().filter(|(_, p)| !ev.is_satisfiable(p, pos)).map(|(k, _)| k.clone()).collect();
    unsat
        .iter()
        .filter(|k| {
            let below = lattice(&all[*k]);
            !below.keys().any(|b| b != *k && unsat.contains(b))
        })
        .map(|k| all[k].clone())
        .collect()
}

fn keys(ps: &[Program]) -> BTreeSet<ProgramKey> {
    ps.iter().map(Program::key).collect()
}

pub fn musps_match_the_deletion_lattice() {
    let bias = super::common::list_bias(5, 5, 2);
    let ev = super::common::list_evaluator(&bias);
    let mut rng = super::common::rng(0xa5);
    let (mut cases, mut strict, mut several) = (0, 0, 0);
    while cases < CASES {
        let h = program(&mut rng);
        if h.size() > 6 || !h.clauses().iter().all(Clause::is_connected) {
            continue;
        }
        let pos = examples(&mut rng);
        if ev.is_satisfiable(&h, &pos) {
            continue;
        }
        cases += 1;
        let want = oracle(&h, &pos, &ev);
        assert_eq!(keys(&find_musps_raw(&h, &pos, &ev)), keys(&want), "{h} on {pos:?}");
        let got = find_musps(&h, &pos, &ev);
        assert_eq!(keys(&got), keys(&minimum_size(want)), "{h} on {pos:?}");
        for m in &got {
            assert!(!ev.is_satisfiable(m, &pos));
            assert!(subprogs(m).iter().all(|s| ev.is_satisfiable(s, &pos)), "{m} is not minimal");
        }
        strict += usize::from(got.iter().all(|m| m.size() < h.size()));
        several += usize::from(got.len() > 1);
    }
    assert!(strict > CASES / 2, "only {strict} cases shrink");
    assert!(several > 10, "only {several} cases have several MUSPs");
}
