mod common;

use common::read_fixture;
use forensic_dl::model::{normalize_kb, Axiom, ConceptExpr, RoleExpr};
use forensic_dl::ontology::{builtin_ontology, ingest_annotations, parse_annotations, OntologyOptions};
use forensic_dl::reasoner::{explain, is_consistent, is_subsumed, materialize, ClosureABox, Fact};
use forensic_dl::Error;

fn closure_of(fixture: &str) -> ClosureABox {
    let kb = builtin_ontology(OntologyOptions::default());
    let facts = ingest_annotations(&parse_annotations(&read_fixture(fixture)).unwrap()).unwrap();
    materialize(&normalize_kb(&kb).unwrap(), &facts).unwrap()
}

#[test]
fn example_one_ingests_to_the_printed_fact_pattern() {
    let facts = ingest_annotations(&parse_annotations(&read_fixture("example1.jsonl")).unwrap()).unwrap();
    let rendered: Vec<String> = facts.iter().map(|f| f.to_string()).collect();
    for want in [
        "Related(participateIn, personA, throwing5)",
        "Member(Throwing, throwing5)",
        "Member(NaturalPerson, personA)",
        "Related(isFrom, throwing5, endurant6)",
        "Member(Resource, endurant6)",
        "Related(hasVideoId, endurant6, video6)",
        "Member(Source, endurant7)",
        "Related(hasCameraId, endurant7, cameraC004)",
        "Related(has, endurant7, endurant6)",
    ] {
        assert!(rendered.iter().any(|r| r == want), "missing {want} in {rendered:?}");
    }
    assert_eq!(facts.len(), 9);
}

#[test]
fn transitive_is_from_has_a_derivation() {
    let closure = closure_of("example1.jsonl");
    let fact = Fact::role("throwing5", "isFrom", "endurant7");
    assert!(closure.contains(&fact));
    let tree = explain(&closure, &fact).unwrap();
    let leaves: Vec<String> = tree.leaves().iter().map(|f| f.to_string()).collect();
    assert!(leaves.contains(&"(throwing5, endurant6) : isFrom".to_string()), "{leaves:?}");
    assert!(leaves.contains(&"(endurant7, endurant6) : has".to_string()), "{leaves:?}");
}

#[test]
fn underived_facts_cannot_be_explained() {
    let closure = closure_of("example2.jsonl");
    assert!(matches!(explain(&closure, &Fact::class("Endurant1", "DamageVehicle")), Err(Error::NotDerived(_))));
}

#[test]
fn located_same_as_only_links_equal_streets() {
    let closure = closure_of("vandalism_lsa.jsonl");
    assert!(closure.has_role("crowding1", "locatedSameAs", "explosion1"));
    assert!(!closure.has_role("crowding1", "locatedSameAs", "explosion2"));
    assert!(closure.has_class("riot1", "Vandalism"));
    assert!(!closure.has_class("crowding1", "Vandalism"));
}

#[test]
fn hierarchy_sanity() {
    let kb = builtin_ontology(OntologyOptions::default());
    for (c, d) in [("Throwing", "Process"), ("Vandalism", "Accomplishment"), ("Blaming", "State")] {
        assert!(is_subsumed(&kb, &ConceptExpr::atomic(c), d).unwrap(), "{c} ⊑ {d}");
    }
    assert!(!is_subsumed(&kb, &ConceptExpr::atomic("Process"), "Throwing").unwrap());
}

/// Facts making `x` an instance of `c`, with a fresh individual per
/// existential and the first disjunct of every union.
fn witness(x: &str, c: &ConceptExpr, next: &mut usize, out: &mut Vec<Axiom>) {
    match c {
        ConceptExpr::Atomic(n) => out.push(Axiom::member(x, ConceptExpr::atomic(n.as_str()))),
        ConceptExpr::And(ms) => ms.iter().for_each(|m| witness(x, m, next, out)),
        ConceptExpr::Or(ms) => witness(x, &ms[0], next, out),
        ConceptExpr::Exists(r, f) => {
            *next += 1;
            let y = format!("w{next}");
            match r {
                RoleExpr::Atomic(n) => out.push(Axiom::related(n.as_str(), x, y.as_str())),
                RoleExpr::Inverse(inner) => out.push(Axiom::related(inner.as_atomic().unwrap(), y.as_str(), x)),
                RoleExpr::Compose(_) => panic!("composition in a concept"),
            }
            witness(&y, f, next, out);
        }
        ConceptExpr::Top => {}
        other => panic!("no witness for {other}"),
    }
}

#[test]
fn each_gci_body_witness_is_classified() {
    let kb = builtin_ontology(OntologyOptions::default());
    let program = normalize_kb(&kb).unwrap();
    let mut checked = 0;
    for ax in kb.axioms() {
        let Axiom::Gci { lhs, rhs } = ax else { continue };
        let (None, Some(head)) = (lhs.as_atomic(), rhs.as_atomic()) else { continue };
        if !matches!(lhs, ConceptExpr::And(_)) {
            continue;
        }
        let mut facts = Vec::new();
        witness("root", lhs, &mut 0, &mut facts);
        let closure = materialize(&program, &facts).unwrap();
        assert!(closure.has_class("root", head), "{ax}");
        checked += 1;
    }
    assert_eq!(checked, 11);
}

#[test]
fn dangling_links_name_the_record() {
    let text = r#"{"kind":"event","id":"e1","type":"Throwing","links":[{"role":"isFrom","target":"nowhere"}]}"#;
    match ingest_annotations(&parse_annotations(text).unwrap()) {
        Err(Error::DanglingReference { record, target }) => {
            assert!(record.contains("e1"));
            assert_eq!(target, "nowhere");
        }
        other => panic!("expected DanglingReference, got {other:?}"),
    }
}

#[test]
fn disjointness_counterexamples_are_detected() {
    for (fixture, who) in [("disjoint_perdurant_endurant.jsonl", "clash1"), ("disjoint_kicking_vehicle.jsonl", "kick1")] {
        let report = is_consistent(&closure_of(fixture));
        assert!(!report.consistent, "{fixture}");
        assert!(report.violations.iter().all(|v| v.individual == who));
    }
    assert!(is_consistent(&closure_of("example1.jsonl")).consistent);
}
