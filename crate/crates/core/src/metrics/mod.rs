//! Contingency tables and micro/macro precision, recall and F1.

mod report;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{normalize_kb, Axiom, ConceptExpr, KnowledgeBase};
use crate::reasoner::{materialize, ClosureABox};

pub use report::{report_json, report_tsv};

/// `true(C)`: the gold instances of each class.
pub type TrueMap = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ContingencyTable {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ContingencyTable { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// `|C|`, the number of predicted instances.
    pub fn predicted(&self) -> u64 {
        self.tp + self.fp
    }

    /// `|true(C)|`.
    pub fn actual(&self) -> u64 {
        self.tp + self.fn_
    }
}

impl std::ops::Add for ContingencyTable {
    type Output = ContingencyTable;

    fn add(self, o: Self) -> Self {
        ContingencyTable::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_, self.tn + o.tn)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    /// Combines precision and recall with their harmonic mean.
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
        Prf { precision, recall, f1 }
    }
}

/// Precision, recall and F1 of one table.
///
/// With no predictions and no gold instances all three are 1. Otherwise an
/// empty denominator gives 0.
pub fn prf(t: &ContingencyTable) -> Prf {
    if t.predicted() == 0 && t.actual() == 0 {
        return Prf { precision: 1.0, recall: 1.0, f1: 1.0 };
    }
    let ratio = |n: u64, d: u64| if d == 0 { 0.0 } else { n as f64 / d as f64 };
    Prf::from_pr(ratio(t.tp, t.predicted()), ratio(t.tp, t.actual()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: String,
    pub table: ContingencyTable,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ClassReport {
    pub fn new(class: impl Into<String>, table: ContingencyTable) -> Self {
        let Prf { precision, recall, f1 } = prf(&table);
        ClassReport { class: class.into(), table, precision, recall, f1 }
    }

    /// A report with given scores, e.g. a class for which nothing was learned.
    pub fn with_scores(class: impl Into<String>, table: ContingencyTable, scores: Prf) -> Self {
        ClassReport { class: class.into(), table, precision: scores.precision, recall: scores.recall, f1: scores.f1 }
    }

    pub fn scores(&self) -> Prf {
        Prf { precision: self.precision, recall: self.recall, f1: self.f1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub classes: Vec<ClassReport>,
    pub micro: Prf,
    #[serde(rename = "macro")]
    pub macro_: Prf,
}

impl AggregateReport {
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn class(&self, name: &str) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.class == name)
    }
}

/// Micro averages come from the summed tables. Macro precision and recall
/// are arithmetic means of the per-class values; macro F1 is their harmonic
/// mean. With no reports every average is 1.
pub fn aggregate(reports: &[ClassReport]) -> AggregateReport {
    let total = reports.iter().fold(ContingencyTable::default(), |acc, r| acc + r.table);
    let micro = prf(&total);
    let macro_ = if reports.is_empty() {
        micro
    } else {
        let n = reports.len() as f64;
        let p = reports.iter().map(|r| r.precision).sum::<f64>() / n;
        let r = reports.iter().map(|r| r.recall).sum::<f64>() / n;
        Prf::from_pr(p, r)
    };
    AggregateReport { classes: reports.to_vec(), micro, macro_ }
}

/// Counts one class over `population`; predictions are the closure's
/// instances of `class`.
pub fn contingency(
    closure: &ClosureABox,
    gold: &TrueMap,
    class: &str,
    population: &BTreeSet<String>,
) -> Result<ContingencyTable> {
    let truth = gold.get(class).ok_or_else(|| Error::UnknownClass(class.to_string()))?;
    let predicted = closure.instances_of_class(class);
    let mut t = ContingencyTable::default();
    for e in population {
        match (predicted.contains(e), truth.contains(e)) {
            (true, true) => t.tp += 1,
            (true, false) => t.fp += 1,
            (false, true) => t.fn_ += 1,
            (false, false) => t.tn += 1,
        }
    }
    Ok(t)
}

/// Removes assertions `a : C` for every class `C` in `classes`.
pub fn strip_gold_assertions<'a>(assertions: impl IntoIterator<Item = &'a Axiom>, classes: &BTreeSet<&str>) -> Vec<Axiom> {
    assertions
        .into_iter()
        .filter(|ax| match ax {
            Axiom::ConceptAssertion { concept: ConceptExpr::Atomic(c), .. } => !classes.contains(c.as_str()),
            _ => true,
        })
        .cloned()
        .collect()
}

/// Individuals in the event subtree plus every gold individual.
pub fn evaluation_population(closure: &ClosureABox, gold: &TrueMap) -> BTreeSet<String> {
    let mut population = closure.instances_of_class("Perdurant");
    for members in gold.values() {
        population.extend(members.iter().cloned());
    }
    population
}

/// Drops explicit gold-class assertions, materializes and evaluates every
/// gold class. `kb` may carry assertions of its own; they are stripped the
/// same way.
pub fn run_manual_experiment(kb: &KnowledgeBase, assertions: &[Axiom], gold: &TrueMap) -> Result<AggregateReport> {
    let (closure, population) = experiment_closure(kb, assertions, gold)?;
    evaluate_closure(&closure, gold, &population)
}

/// The stripped closure and its evaluation population.
pub fn experiment_closure(
    kb: &KnowledgeBase,
    assertions: &[Axiom],
    gold: &TrueMap,
) -> Result<(ClosureABox, BTreeSet<String>)> {
    let classes: BTreeSet<&str> = gold.keys().map(String::as_str).collect();
    let program = normalize_kb(kb)?;
    let facts = strip_gold_assertions(kb.assertions().chain(assertions), &classes);
    let closure = materialize(&program, &facts)?;
    let population = evaluation_population(&closure, gold);
    Ok((closure, population))
}

pub fn evaluate_closure(closure: &ClosureABox, gold: &TrueMap, population: &BTreeSet<String>) -> Result<AggregateReport> {
    let reports = gold
        .keys()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| Ok(ClassReport::new(c.as_str(), contingency(closure, gold, c, population)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(&reports))
}
