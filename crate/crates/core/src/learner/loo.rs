use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{search, Evaluator, Hypothesis, LearnerConfig, LearningProblem};
use crate::error::{Error, Result};
use crate::metrics::Prf;

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub fold: usize,
    pub held_out: String,
    pub trainset: BTreeSet<String>,
    /// Best hypothesis of the fold, if any scored above Top.
    pub hypothesis: Option<Hypothesis>,
    pub resultset: BTreeSet<String>,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LooSummary {
    pub folds: Vec<FoldResult>,
    pub precision: f64,
    pub recall: f64,
}

/// Leave-one-out cross-validation with one fold per positive.
///
/// Fold `i` learns on the positives minus the held-out one, with the
/// held-out individual removed from the training population. Its result set
/// is every population member entailed by the best hypothesis that is not in
/// the training set. An empty result set scores precision 1 and recall 0, as
/// does a fold where learning fails.
pub fn loo_cv(problem: &LearningProblem, config: &LearnerConfig) -> Result<LooSummary> {
    if problem.positives.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "leave-one-out needs at least 2 positives for `{}`",
            problem.target
        )));
    }
    let ev = Evaluator::new(problem)?;
    let refiner = ev.refiner(problem, config);
    let positives: Vec<&String> = problem.positives.iter().collect();
    let folds = positives
        .par_iter()
        .enumerate()
        .map(|(i, held)| {
            let mut trainset = problem.positives.clone();
            trainset.remove(*held);
            let mut train_population = problem.population.clone();
            train_population.remove(*held);
            let view = ev.view(&trainset, &train_population);
            let hypothesis = match search(problem, config, &ev, &view, &refiner) {
                Ok(hs) => hs.into_iter().next(),
                Err(Error::NoHypothesis(_)) | Err(Error::InvalidConfig(_)) => None,
                Err(e) => return Err(e),
            };
            let resultset: BTreeSet<String> = match &hypothesis {
                Some(h) => {
                    let predicted = ev.predict(&h.expr)?;
                    predicted
                        .ones()
                        .map(|id| ev.closure.individual_name(id).to_string())
                        .filter(|n| problem.population.contains(n) && !trainset.contains(n))
                        .collect()
                }
                None => BTreeSet::new(),
            };
            let fp = resultset.iter().filter(|e| !problem.positives.contains(*e)).count();
            let tp = resultset.len() - fp;
            let fn_ = usize::from(!resultset.contains(*held));
            let precision = if resultset.is_empty() { 1.0 } else { tp as f64 / (tp + fp) as f64 };
            let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
            Ok(FoldResult {
                fold: i,
                held_out: (*held).clone(),
                trainset,
                hypothesis,
                resultset,
                tp,
                fp,
                fn_,
                precision,
                recall,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let k = folds.len() as f64;
    let precision = folds.iter().map(|f| f.precision).sum::<f64>() / k;
    let recall = folds.iter().map(|f| f.recall).sum::<f64>() / k;
    Ok(LooSummary { folds, precision, recall })
}

/// Macro averages over a class list; classes where learning failed (`None`)
/// contribute precision and recall 0.
pub fn macro_average(per_class: &[Option<(f64, f64)>]) -> Prf {
    if per_class.is_empty() {
        return Prf { precision: 0.0, recall: 0.0, f1: 0.0 };
    }
    let n = per_class.len() as f64;
    let p = per_class.iter().map(|c| c.map_or(0.0, |(p, _)| p)).sum::<f64>() / n;
    let r = per_class.iter().map(|c| c.map_or(0.0, |(_, r)| r)).sum::<f64>() / n;
    Prf::from_pr(p, r)
}
