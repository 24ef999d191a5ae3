use forensic_dl::metrics::{aggregate, prf, ClassReport, ContingencyTable};
use proptest::prelude::*;

fn table() -> impl Strategy<Value = ContingencyTable> {
    (0u64..200, 0u64..200, 0u64..200, 0u64..500).prop_map(|(tp, fp, fn_, tn)| ContingencyTable::new(tp, fp, fn_, tn))
}

proptest! {
    #[test]
    fn scores_are_scale_invariant(t in table(), k in 1u64..50) {
        let scaled = ContingencyTable::new(t.tp * k, t.fp * k, t.fn_ * k, t.tn * k);
        let (a, b) = (prf(&t), prf(&scaled));
        prop_assert!((a.precision - b.precision).abs() < 1e-12);
        prop_assert!((a.recall - b.recall).abs() < 1e-12);
        prop_assert!((a.f1 - b.f1).abs() < 1e-12);
    }

    #[test]
    fn scores_lie_in_unit_interval(t in table()) {
        let s = prf(&t);
        for v in [s.precision, s.recall, s.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(s.f1 <= s.precision.max(s.recall) + 1e-12);
    }

    #[test]
    fn single_class_micro_equals_macro(t in table()) {
        let agg = aggregate(&[ClassReport::new("C", t)]);
        prop_assert!((agg.micro.precision - agg.macro_.precision).abs() < 1e-12);
        prop_assert!((agg.micro.recall - agg.macro_.recall).abs() < 1e-12);
        prop_assert!((agg.micro.f1 - agg.macro_.f1).abs() < 1e-12);
    }

    #[test]
    fn identical_classes_give_micro_equal_macro(t in table(), n in 1usize..8) {
        let reports: Vec<ClassReport> = (0..n).map(|i| ClassReport::new(format!("C{i}"), t)).collect();
        let agg = aggregate(&reports);
        prop_assert!((agg.micro.precision - agg.macro_.precision).abs() < 1e-12);
        prop_assert!((agg.micro.recall - agg.macro_.recall).abs() < 1e-12);
    }

    #[test]
    fn micro_uses_summed_counts(ts in prop::collection::vec(table(), 1..8)) {
        let reports: Vec<ClassReport> = ts.iter().enumerate().map(|(i, t)| ClassReport::new(format!("C{i}"), *t)).collect();
        let sum = ts.iter().fold(ContingencyTable::default(), |a, b| a + *b);
        let agg = aggregate(&reports);
        prop_assert_eq!(agg.micro, prf(&sum));
    }
}

#[test]
fn degenerate_tables_follow_conventions() {
    let empty = prf(&ContingencyTable::new(0, 0, 0, 10));
    assert_eq!((empty.precision, empty.recall, empty.f1), (1.0, 1.0, 1.0));
    let nothing_predicted = prf(&ContingencyTable::new(0, 0, 5, 10));
    assert_eq!((nothing_predicted.precision, nothing_predicted.recall, nothing_predicted.f1), (0.0, 0.0, 0.0));
    let all_wrong = prf(&ContingencyTable::new(0, 3, 0, 10));
    assert_eq!((all_wrong.precision, all_wrong.recall, all_wrong.f1), (0.0, 0.0, 0.0));
}
