use std::collections::BTreeSet;

use forensic_dl::datagen::{plant_learning_scenario, LearningScenarioConfig, Xorshift64Star};
use forensic_dl::learner::{
    exhaustive_search, learn_gci, loo_cv, score, LearnerConfig, LearningProblem, Refiner, LENGTH_PENALTY,
};
use forensic_dl::metrics::TrueMap;
use forensic_dl::model::{normalize_kb, Axiom, ConceptExpr, KnowledgeBase, RoleExpr};
use forensic_dl::ontology::ingest_annotations;
use forensic_dl::reasoner::materialize;
use forensic_dl::Error;
use proptest::prelude::*;

/// Events linked to one filler each; positives mostly get a `Car`.
fn small_problem(seed: u64, events: usize) -> LearningProblem {
    let mut rng = Xorshift64Star::new(seed);
    let mut kb = KnowledgeBase::new();
    for c in ["Perdurant", "Vehicle", "Car", "Arm", "Target"] {
        kb.declare_class(c);
    }
    kb.declare_role("immediateRelation").declare_role("participant");
    kb.add_axiom(Axiom::gci(ConceptExpr::atomic("Car"), ConceptExpr::atomic("Vehicle")));
    let mut facts = Vec::new();
    let mut gold = TrueMap::new();
    gold.insert("Target".into(), BTreeSet::new());
    for i in 0..events {
        let e = format!("e{i}");
        facts.push(Axiom::member(e.as_str(), ConceptExpr::atomic("Perdurant")));
        let positive = i < 2 || rng.below(3) == 0;
        let filler = if positive && rng.below(5) > 0 { "Car" } else { *rng.pick(&["Vehicle", "Arm", "Car"]) };
        let role = *rng.pick(&["immediateRelation", "immediateRelation", "participant"]);
        facts.push(Axiom::related(role, e.as_str(), format!("x{i}")));
        facts.push(Axiom::member(format!("x{i}"), ConceptExpr::atomic(filler)));
        if positive {
            gold.get_mut("Target").unwrap().insert(e);
        }
    }
    LearningProblem::new(&kb, &facts, &gold, "Target").unwrap()
}

/// Accuracy of `expr ⊑ target` by materializing the background with the
/// GCI added and counting over the population.
fn accuracy_by_materialization(expr: &ConceptExpr, p: &LearningProblem) -> f64 {
    let mut kb = p.background.clone();
    kb.add_axiom(Axiom::gci(expr.clone(), ConceptExpr::atomic(p.target.as_str())));
    let closure = materialize(&normalize_kb(&kb).unwrap(), &p.facts).unwrap();
    let predicted = closure.instances_of_class(&p.target);
    let correct = p.population.iter().filter(|x| predicted.contains(*x) == p.positives.contains(*x)).count();
    correct as f64 / p.population.len() as f64
}

fn some_expressions(p: &LearningProblem, seed: u64) -> Vec<ConceptExpr> {
    let refiner = Refiner::new(&p.background, &[p.target.as_str()], 4);
    let mut rng = Xorshift64Star::new(seed);
    let mut out = vec![ConceptExpr::Top];
    let mut cur = ConceptExpr::Top;
    for _ in 0..4 {
        let next = refiner.refine(&cur);
        if next.is_empty() {
            break;
        }
        cur = next[rng.below(next.len())].clone();
        out.push(cur.clone());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn score_is_accuracy_minus_length_penalty(seed in any::<u64>()) {
        let p = small_problem(seed, 12);
        for expr in some_expressions(&p, seed) {
            let want = accuracy_by_materialization(&expr, &p) - LENGTH_PENALTY * expr.length() as f64;
            prop_assert!((score(&expr, &p).unwrap() - want).abs() < 1e-12, "{}", expr);
        }
    }

    #[test]
    fn best_first_agrees_with_exhaustive_enumeration(seed in any::<u64>()) {
        let p = small_problem(seed, 10);
        let config = LearnerConfig { max_hypotheses: 5, max_length: 3, max_expansions: 100_000 };
        let oracle = exhaustive_search(&p, &config, 500);
        let got = learn_gci(&p, &config);
        match (oracle, got) {
            (Ok(o), Ok(g)) => {
                prop_assert!((o[0].score - g[0].score).abs() < 1e-12);
                prop_assert_eq!(&o[0].expr, &g[0].expr);
            }
            (Err(Error::NoHypothesis(_)), Err(Error::NoHypothesis(_))) => {}
            (Err(Error::InvalidConfig(_)), _) => prop_assume!(false),
            (o, g) => prop_assert!(false, "oracle {:?} vs search {:?}", o.map(|h| h.len()), g.map(|h| h.len())),
        }
    }
}

#[test]
fn exhaustive_space_stays_within_limit() {
    let p = small_problem(3, 10);
    let config = LearnerConfig { max_hypotheses: 5, max_length: 3, max_expansions: 100_000 };
    assert!(exhaustive_search(&p, &config, 500).is_ok());
}

#[test]
fn folds_do_not_depend_on_each_other() {
    let p = small_problem(11, 14);
    let config = LearnerConfig::default();
    let summary = loo_cv(&p, &config).unwrap();
    assert_eq!(summary.folds.len(), p.positives.len());
    for f in &summary.folds {
        let mut alone = p.clone();
        alone.positives.remove(&f.held_out);
        alone.population.remove(&f.held_out);
        let best = learn_gci(&alone, &config).ok().map(|h| h[0].expr.clone());
        assert_eq!(f.hypothesis.as_ref().map(|h| h.expr.clone()), best, "fold {}", f.fold);
    }
    let mean_p = summary.folds.iter().map(|f| f.precision).sum::<f64>() / summary.folds.len() as f64;
    assert!((summary.precision - mean_p).abs() < 1e-12);
}

#[test]
fn folds_are_deterministic_and_sorted_by_individual() {
    let p = small_problem(5, 14);
    let a = loo_cv(&p, &LearnerConfig::default()).unwrap();
    let b = loo_cv(&p, &LearnerConfig::default()).unwrap();
    assert_eq!(a, b);
    let held: Vec<&String> = a.folds.iter().map(|f| &f.held_out).collect();
    let sorted: Vec<&String> = p.positives.iter().collect();
    assert_eq!(held, sorted);
}

#[test]
fn label_noise_costs_recall() {
    let mut cfg = LearningScenarioConfig::damage_vehicle(2);
    cfg.label_noise = 0.3;
    let s = plant_learning_scenario(&cfg).unwrap();
    let facts = ingest_annotations(&s.records).unwrap();
    let p = LearningProblem::new(&s.kb, &facts, &s.gold, "DamageVehicle").unwrap();
    let summary = loo_cv(&p, &LearnerConfig::default()).unwrap();
    assert!(summary.recall < 1.0, "recall {}", summary.recall);
}

#[test]
fn single_positive_cannot_be_cross_validated() {
    let mut cfg = LearningScenarioConfig::damage_vehicle(2);
    cfg.positives = 1;
    let s = plant_learning_scenario(&cfg).unwrap();
    let facts = ingest_annotations(&s.records).unwrap();
    let p = LearningProblem::new(&s.kb, &facts, &s.gold, "DamageVehicle").unwrap();
    assert!(matches!(loo_cv(&p, &LearnerConfig::default()), Err(Error::InvalidConfig(_))));
}

#[test]
fn planted_body_is_recovered() {
    let s = plant_learning_scenario(&LearningScenarioConfig::damage_vehicle(1)).unwrap();
    let facts = ingest_annotations(&s.records).unwrap();
    let p = LearningProblem::new(&s.kb, &facts, &s.gold, "DamageVehicle").unwrap();
    let hs = learn_gci(&p, &LearnerConfig::default()).unwrap();
    let planted = ConceptExpr::some(RoleExpr::atomic("immediateRelation"), ConceptExpr::atomic("Vehicle"));
    assert_eq!(hs[0].expr, planted);
}
