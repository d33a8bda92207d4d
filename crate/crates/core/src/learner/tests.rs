use super::*;
use crate::bias::tests::list_bias;
use crate::canon::ProgramKey;
use crate::term::{lit, Clause, Literal, Term};
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

fn chars(s: &str) -> Term {
    Term::list(s.chars().map(|c| Term::atom(c.encode_utf8(&mut [0; 4]))))
}

fn f(list: Term, x: &str) -> Literal {
    Literal::new("f", vec![list, Term::atom(x)])
}

fn last_examples() -> ExampleSet {
    ExampleSet::new(
        vec![f(chars("mac"), "c"), f(chars("math"), "h"), f(chars("icing"), "g"), f(chars("a"), "a")],
        vec![f(chars("mac"), "m"), f(chars("icing"), "i"), f(chars("ilp"), "i"), f(chars("ab"), "a")],
    )
    .unwrap()
}

#[derive(Default)]
struct Seen(Vec<ProgramKey>);

impl Observer for Seen {
    fn tested(&mut self, h: &Program, _: &Outcome) {
        self.0.push(h.key());
    }
}

#[test]
fn learns_last() {
    let b = list_bias();
    let kb = KnowledgeBase::standard();
    let ex = last_examples();
    for musp in [true, false] {
        let cfg = LearnerConfig { musp_enabled: musp, ..LearnerConfig::default() };
        let mut seen = Seen::default();
        let (sol, stats) = Learner::new(&b, &kb, &ex, cfg).run_observed(&mut seen).unwrap();
        let sol = sol.expect("a solution");
        assert_eq!(sol.size(), 7, "{sol}");
        assert_eq!(sol.len(), 2);
        assert_eq!(stats.solution_size, Some(7));
        assert_eq!(stats.programs_generated, seen.0.len());
        let distinct: BTreeSet<_> = seen.0.iter().collect();
        assert_eq!(distinct.len(), seen.0.len(), "a candidate was tested twice");
        let again = Evaluator::new(&kb, EvalConfig::default().doubled()).with_modes(b.modes());
        assert!(again.test(&sol, &ex).is_solution());
    }
}

#[test]
fn musps_never_increase_the_candidate_count() {
    let b = list_bias();
    let kb = KnowledgeBase::standard();
    let ex = last_examples();
    let run = |musp| {
        learn(&b, &kb, &ex, LearnerConfig { musp_enabled: musp, ..LearnerConfig::default() }).unwrap()
    };
    let (on, off) = (run(true), run(false));
    assert_eq!(on.0.map(|p| p.size()), off.0.map(|p| p.size()));
    assert!(on.1.programs_generated <= off.1.programs_generated, "{} > {}", on.1.programs_generated, off.1.programs_generated);
    assert!(on.1.musps_found > 0);
}

#[test]
fn single_rule_task() {
    let b = list_bias();
    let ex = ExampleSet::new(vec![f(chars("ab"), "a"), f(chars("c"), "c")], vec![]).unwrap();
    let (sol, _) = learn(&b, &KnowledgeBase::standard(), &ex, LearnerConfig::default()).unwrap();
    let want = Program::new([Clause::rule(lit("f", &["A", "B"]), vec![lit("head", &["A", "B"])])]);
    assert_eq!(sol.map(|p| p.key()), Some(want.key()));
}

#[test]
fn exhausted_search_reports_no_solution() {
    let b = list_bias();
    let cfg = LearnerConfig { max_size: Some(1), ..LearnerConfig::default() };
    let (sol, stats) = learn(&b, &KnowledgeBase::standard(), &last_examples(), cfg).unwrap();
    assert!(sol.is_none());
    assert_eq!(stats.solution_size, None);
    assert_eq!(stats.programs_generated, 0);
}

#[test]
fn configuration_errors() {
    let b = list_bias();
    let kb = KnowledgeBase::standard();
    let cfg = LearnerConfig { max_size: Some(0), ..LearnerConfig::default() };
    assert_eq!(learn(&b, &kb, &last_examples(), cfg).unwrap_err(), LearnError::ZeroMaxSize);
    let other = ExampleSet::new(vec![lit("g", &["a"])], vec![]).unwrap();
    assert!(matches!(
        learn(&b, &kb, &other, LearnerConfig::default()),
        Err(LearnError::TargetMismatch { .. })
    ));
    let none = ExampleSet::new(vec![], vec![f(chars("a"), "b")]).unwrap();
    assert_eq!(learn(&b, &kb, &none, LearnerConfig::default()).unwrap_err(), LearnError::NoPositives);
}

#[test]
fn runs_are_deterministic() {
    let b = list_bias();
    let kb = KnowledgeBase::standard();
    let go = || {
        let mut seen = Seen::default();
        let (_, s) = Learner::new(&b, &kb, &last_examples(), LearnerConfig::default()).run_observed(&mut seen).unwrap();
        (seen.0, s.programs_generated, s.musps_found, s.specialisation_constraints)
    };
    assert_eq!(go(), go());
}
