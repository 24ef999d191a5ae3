mod common;

use common::{random_kb, Shape};
use forensic_dl::model::validate_kb;
use forensic_dl::text::{parse_kb, parse_kb_lenient, serialize_kb, SourceDocument};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>()) {
        let r = random_kb(seed, &Shape::default());
        let text = serialize_kb(&r.kb);
        let back = parse_kb(&SourceDocument::new(text.clone(), "random.fkb")).unwrap();
        prop_assert_eq!(serialize_kb(&back), text);
        prop_assert_eq!(back, r.kb);
    }
}

#[test]
fn shipped_ontology_has_no_diagnostics() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/forensic.fkb");
    let doc = SourceDocument::read(path).unwrap();
    let outcome = parse_kb_lenient(&doc);
    assert!(outcome.diagnostics.is_empty(), "{:?}", outcome.diagnostics);
    assert!(validate_kb(&outcome.kb).is_empty());
}

#[test]
fn parse_errors_carry_positions() {
    let doc = SourceDocument::new("Class(A)\nSub(A, (some r B)\n", "broken.fkb");
    let outcome = parse_kb_lenient(&doc);
    assert!(outcome.has_errors());
    assert_eq!(outcome.diagnostics[0].line, 2);
}
