use std::fmt::Write;

use super::{AggregateReport, ContingencyTable, Prf};

pub const TSV_HEADER: &str = "class\ttp\tfp\tfn\ttn\tprecision\trecall\tf1";

fn row(out: &mut String, label: &str, counts: Option<ContingencyTable>, s: Prf) {
    let counts = match counts {
        Some(t) => format!("{}\t{}\t{}\t{}", t.tp, t.fp, t.fn_, t.tn),
        None => "-\t-\t-\t-".to_string(),
    };
    let _ = writeln!(out, "{label}\t{counts}\t{:.6}\t{:.6}\t{:.6}", s.precision, s.recall, s.f1);
}

/// One line per class, then `#micro` (with summed counts) and `#macro`.
pub fn report_tsv(report: &AggregateReport) -> String {
    let mut out = String::from(TSV_HEADER);
    out.push('\n');
    let mut total = ContingencyTable::default();
    for c in &report.classes {
        total = total + c.table;
        row(&mut out, &c.class, Some(c.table), c.scores());
    }
    row(&mut out, "#micro", Some(total), report.micro);
    row(&mut out, "#macro", None, report.macro_);
    out
}

pub fn report_json(report: &AggregateReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{aggregate, ClassReport};

    #[test]
    fn tsv_layout() {
        let agg = aggregate(&[ClassReport::new("Throwing", ContingencyTable::new(30, 0, 0, 195))]);
        let tsv = report_tsv(&agg);
        let lines: Vec<_> = tsv.lines().collect();
        assert_eq!(lines[0], TSV_HEADER);
        assert_eq!(lines[1], "Throwing\t30\t0\t0\t195\t1.000000\t1.000000\t1.000000");
        assert!(lines[2].starts_with("#micro\t30\t0\t0\t195\t"));
        assert!(lines[3].starts_with("#macro\t-\t-\t-\t-\t"));
    }

    #[test]
    fn json_mirrors_fields() {
        let agg = aggregate(&[ClassReport::new("A", ContingencyTable::new(1, 0, 1, 2))]);
        let v: serde_json::Value = serde_json::from_str(&report_json(&agg)).unwrap();
        assert_eq!(v["classes"][0]["table"]["fn"], 1);
        assert_eq!(v["macro"]["recall"], 0.5);
    }
}
