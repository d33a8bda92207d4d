//! MUSP constraints over small, fully enumerated hypothesis spaces.

use std::collections::BTreeSet;

use lff_core::bias::Bias;
use lff_core::canon::ProgramKey;
use lff_core::constraints::{constrain, Constraint, ConstraintKind, ConstraintStore};
use lff_core::eval::{EvalConfig, Evaluator, ExampleSet, KnowledgeBase};
use lff_core::generator::Generator;
use lff_core::learner::{learn, LearnerConfig};
use lff_core::musp::{find_musps, subprogs, unsat_constraints, DEFAULT_SIZE_CAP};
use lff_core::subsume::theory_subsumes;
use lff_core::term::{Program, Term};
use rand::seq::SliceRandom;
use rand::Rng;

const CASES: usize = 200;

fn space(bias: &Bias, max_size: usize) -> Vec<Program> {
    let mut g = Generator::new(bias);
    let store = ConstraintStore::new();
    let mut out = Vec::new();
    for size in 1..=max_size.min(g.max_program_size()) {
        g.start(size);
        while let Some(p) = g.next(&store) {
            out.push(p);
        }
    }
    out
}

fn lattice(h: &Program) -> Vec<Program> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut todo = vec![h.clone()];
    while let Some(p) = todo.pop() {
        if seen.insert(p.key()) {
            todo.extend(subprogs(&p));
            out.push(p);
        }
    }
    out
}

fn random_list(rng: &mut impl Rng) -> Term {
    let xs: Vec<i64> = (0..rng.gen_range(0..5)).map(|_| rng.gen_range(0..4)).collect();
    super::common::ints(&xs)
}

/// Up to three positive and three negative examples labelled by `target`.
fn label(rng: &mut impl Rng, ev: &Evaluator, target: &Program) -> Option<ExampleSet> {
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for _ in 0..40 {
        let e = super::common::f(random_list(rng), Term::Int(rng.gen_range(0..4)));
        if pos.contains(&e) || neg.contains(&e) {
            continue;
        }
        let side = if ev.entails(target, &e) { &mut pos } else { &mut neg };
        if side.len() < 3 {
            side.push(e);
        }
    }
    if pos.is_empty() {
        return None;
    }
    ExampleSet::new(pos, neg).ok()
}

fn pruned(c: &Constraint, candidates: &[Program]) -> BTreeSet<ProgramKey> {
    candidates.iter().filter(|p| c.prunes(p)).map(Program::key).collect()
}

pub fn musp_constraints_prune_strict_supersets() {
    let bias = super::common::list_bias(4, 3, 2);
    let ev = super::common::list_evaluator(&bias);
    let base = space(&bias, 5);
    let mut rng = super::common::rng(0x34);
    let (mut cases, mut equivalent) = (0, 0);
    let hs: Vec<Program> = space(&bias, 7).into_iter().filter(|h| h.size() >= 3).collect();
    while cases < CASES {
        let h = hs.choose(&mut rng).unwrap().clone();
        let t = base.choose(&mut rng).unwrap();
        let Some(exs) = label(&mut rng, &ev, t) else { continue };
        if ev.is_satisfiable(&h, &exs.pos) {
            continue;
        }
        let musps = find_musps(&h, &exs.pos, &ev);
        let Some(m) = musps.iter().find(|m| m.key() != h.key()) else { continue };
        if theory_subsumes(&h, m) {
            // Deleting a literal of a non-reduced clause gives an equivalent
            // program, which prunes exactly the same candidates.
            equivalent += 1;
            continue;
        }
        cases += 1;
        let mut candidates = base.clone();
        candidates.extend(lattice(&h));
        for kind in [ConstraintKind::Specialisation, ConstraintKind::Redundancy] {
            let by_h = pruned(&Constraint::new(kind, &h), &candidates);
            let by_m = pruned(&Constraint::new(kind, m), &candidates);
            assert!(by_h.is_subset(&by_m), "{kind:?}: {m} misses candidates pruned by {h}");
            assert!(by_m.len() > by_h.len(), "{kind:?}: {m} prunes nothing beyond {h}");
        }
    }
    assert!(equivalent < CASES, "{equivalent} equivalent pairs skipped");
}

pub fn musp_constraints_keep_every_solution_of_small_spaces() {
    let bias = super::common::list_bias(4, 3, 2);
    let ev = super::common::list_evaluator(&bias);
    let target = bias.head.clone();
    let hspace = space(&bias, 4);
    let sspace = space(&bias, 7);
    let targets = &sspace;
    let mut rng = super::common::rng(0x12);
    let (mut cases, mut checked_spec, mut checked_red, mut with_solution) = (0, 0, 0, 0);
    while cases < CASES {
        let t = targets.choose(&mut rng).unwrap();
        let Some(exs) = label(&mut rng, &ev, t) else { continue };
        let h = hspace.choose(&mut rng).unwrap();
        let outcome = ev.test(h, &exs);
        if !outcome.is_totally_incomplete() {
            continue;
        }
        cases += 1;
        let solutions: Vec<&Program> = sspace.iter().filter(|p| ev.test(p, &exs).is_solution()).collect();
        let best = solutions.iter().map(|p| p.size()).min();
        let report = unsat_constraints(h, &exs.pos, &ev, &target, DEFAULT_SIZE_CAP);
        let mut all = report.constraints.clone();
        all.extend(constrain(h, &outcome, &target));
        for c in &all {
            for p in &solutions {
                match c.kind {
                    ConstraintKind::Specialisation | ConstraintKind::Generalisation => {
                        assert!(!c.prunes(p), "{c} prunes solution {p} (from {h})");
                        checked_spec += 1;
                    }
                    ConstraintKind::Redundancy => {
                        if Some(p.size()) == best {
                            assert!(!c.prunes(p), "{c} prunes optimal solution {p} (from {h})");
                            checked_red += 1;
                        }
                    }
                }
            }
        }
        with_solution += usize::from(best.is_some());
    }
    assert!(with_solution > CASES / 4, "only {with_solution} tasks have a solution");
    assert!(checked_spec > 0 && checked_red > 0, "{checked_spec} / {checked_red} checks");
}

pub fn learner_finds_the_brute_force_optimum() {
    let bias = super::common::list_bias(4, 3, 2);
    let ev = super::common::list_evaluator(&bias);
    let kb = KnowledgeBase::standard();
    let hspace = space(&bias, 7);
    let targets = &hspace;
    let mut rng = super::common::rng(0x0b);
    let mut solved = 0;
    for case in 0..60 {
        let t = targets.choose(&mut rng).unwrap();
        let Some(exs) = label(&mut rng, &ev, t) else { continue };
        let best = hspace.iter().filter(|p| ev.test(p, &exs).is_solution()).map(|p| p.size()).min();
        for musp_enabled in [true, false] {
            let cfg = LearnerConfig { max_size: Some(7), musp_enabled, eval: EvalConfig::default(), ..LearnerConfig::default() };
            let (h, stats) = learn(&bias, &kb, &exs, cfg).unwrap();
            assert_eq!(stats.solution_size, best, "case {case}, musps {musp_enabled}: {exs:?}");
            if let Some(h) = h {
                assert!(ev.test(&h, &exs).is_solution());
            }
        }
        solved += usize::from(best.is_some());
    }
    assert!(solved > 10, "only {solved} tasks solvable");
}
