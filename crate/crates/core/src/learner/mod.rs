//! Top-down refinement learning of GCIs for a target class, and
//! leave-one-out cross-validation of the learned GCIs.

mod loo;
mod refine;

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::sync::Mutex;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::metrics::{evaluation_population, strip_gold_assertions, TrueMap};
use crate::model::normalize::normalize_axiom;
use crate::model::{normalize_kb, Axiom, ConceptExpr, KnowledgeBase, NormalizedProgram, PAtom, Pred};
use crate::reasoner::{assertion_atoms, materialize_atoms, ClosureABox, MaterializeOptions};

pub use loo::{loo_cv, macro_average, FoldResult, LooSummary};
pub use refine::{canonical_key, refine, Refiner};

/// Score deducted per expression node.
pub const LENGTH_PENALTY: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnerConfig {
    pub max_hypotheses: usize,
    pub max_length: usize,
    /// Number of nodes the search may expand.
    pub max_expansions: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig { max_hypotheses: 10, max_length: 5, max_expansions: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub expr: ConceptExpr,
    pub score: f64,
    pub accuracy: f64,
    pub length: usize,
}

impl Hypothesis {
    /// The hypothesis as a GCI `expr ⊑ target`.
    pub fn to_axiom(&self, target: &str) -> Axiom {
        Axiom::gci(self.expr.clone(), ConceptExpr::atomic(target))
    }
}

#[derive(Debug, Clone)]
pub struct LearningProblem {
    pub target: String,
    pub positives: BTreeSet<String>,
    /// Terminology without GCIs concluding a gold class.
    pub background: KnowledgeBase,
    /// ABox with explicit gold-class memberships removed.
    pub facts: Vec<Axiom>,
    pub population: BTreeSet<String>,
}

fn concludes_any(rhs: &ConceptExpr, classes: &BTreeSet<&str>) -> bool {
    match rhs {
        ConceptExpr::Atomic(c) => classes.contains(c.as_str()),
        ConceptExpr::And(ms) => ms.iter().any(|m| concludes_any(m, classes)),
        _ => false,
    }
}

impl LearningProblem {
    /// Builds the problem for `target` from a knowledge base, annotation
    /// assertions and gold labels. Every gold class is hidden from the
    /// background: its explicit memberships are dropped, and so are the
    /// complex GCIs concluding it. The population is the event subtree of
    /// the background closure plus all gold individuals.
    pub fn new(kb: &KnowledgeBase, assertions: &[Axiom], gold: &TrueMap, target: &str) -> Result<Self> {
        let positives = gold.get(target).ok_or_else(|| Error::UnknownClass(target.to_string()))?.clone();
        let classes: BTreeSet<&str> = gold.keys().map(String::as_str).collect();
        let mut background = kb.tbox();
        background.retain_axioms(|ax| match ax {
            Axiom::Gci { lhs, rhs } => lhs.as_atomic().is_some() || !concludes_any(rhs, &classes),
            _ => true,
        });
        let facts = strip_gold_assertions(kb.assertions().chain(assertions), &classes);
        let program = normalize_kb(&background)?;
        let closure = materialize_atoms(&program, &assertion_atoms(&facts)?, &MaterializeOptions::from_env())?;
        let population = evaluation_population(&closure, gold);
        Ok(LearningProblem { target: target.to_string(), positives, background, facts, population })
    }
}

/// Accuracy of `expr ⊑ target` over the population minus the length penalty.
pub fn score(expr: &ConceptExpr, problem: &LearningProblem) -> Result<f64> {
    let ev = Evaluator::new(problem)?;
    let view = ev.view(&problem.positives, &problem.population);
    Ok(view.measure(&ev.predict(expr)?, expr.length()).score)
}

/// Materialized background shared by all candidate evaluations.
pub(crate) struct Evaluator {
    target: String,
    program: NormalizedProgram,
    seeds: Vec<PAtom>,
    closure: ClosureABox,
    baseline: FixedBitSet,
    /// Predicates whose extension may grow once the target does.
    affected: HashSet<Pred>,
    options: MaterializeOptions,
    /// Re-materialized predictions by canonical key, shared across folds.
    cache: Mutex<HashMap<String, FixedBitSet>>,
}

/// Positives and population of one (possibly reduced) problem as bitsets.
pub(crate) struct View {
    positives: FixedBitSet,
    population: FixedBitSet,
    n: usize,
    p: usize,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Measure {
    pub tp: usize,
    pub accuracy: f64,
    pub score: f64,
}

impl View {
    pub fn measure(&self, predicted: &FixedBitSet, length: usize) -> Measure {
        let mut hit = predicted.clone();
        hit.intersect_with(&self.population);
        let tp = hit.intersection(&self.positives).count();
        let fp = hit.count_ones(..) - tp;
        let tn = self.n - self.p - fp;
        let accuracy = if self.n == 0 { 0.0 } else { (tp + tn) as f64 / self.n as f64 };
        Measure { tp, accuracy, score: accuracy - LENGTH_PENALTY * length as f64 }
    }

    /// Best score any downward refinement of a node could reach.
    pub fn bound(&self, m: &Measure, length: usize) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (m.tp + self.n - self.p) as f64 / self.n as f64 - LENGTH_PENALTY * length as f64
    }
}

impl Evaluator {
    pub fn new(problem: &LearningProblem) -> Result<Self> {
        let program = normalize_kb(&problem.background)?;
        let seeds = assertion_atoms(&problem.facts)?;
        let options = MaterializeOptions::from_env();
        let closure = materialize_atoms(&program, &seeds, &options)?;
        let baseline = closure.class_extension(&problem.target);

        let target = Pred::Class(problem.target.clone());
        let mut affected: HashSet<Pred> = HashSet::from([target]);
        loop {
            let before = affected.len();
            for rule in &program.rules {
                if rule.body.iter().any(|a| affected.contains(&a.pred)) {
                    affected.insert(rule.head.pred.clone());
                }
            }
            if affected.len() == before {
                break;
            }
        }
        Ok(Evaluator {
            target: problem.target.clone(),
            program,
            seeds,
            closure,
            baseline,
            affected,
            options,
            cache: Mutex::default(),
        })
    }

    pub fn view(&self, positives: &BTreeSet<String>, population: &BTreeSet<String>) -> View {
        let k = self.closure.num_individuals();
        let mut pos = FixedBitSet::with_capacity(k);
        let mut pop = FixedBitSet::with_capacity(k);
        for name in population {
            if let Some(i) = self.closure.individual_id(name) {
                pop.insert(i);
                if positives.contains(name) {
                    pos.insert(i);
                }
            }
        }
        View { positives: pos, population: pop, n: population.len(), p: positives.intersection(population).count() }
    }

    fn is_affected(&self, expr: &ConceptExpr) -> bool {
        let mut classes = Vec::new();
        let mut roles = Vec::new();
        expr.concept_names(&mut classes);
        expr.role_names(&mut roles);
        classes.iter().any(|c| self.affected.contains(&Pred::Class(c.to_string())))
            || roles.iter().any(|r| self.affected.contains(&Pred::Role(r.to_string())))
    }

    /// Target instances entailed once `expr ⊑ target` joins the background.
    pub fn predict(&self, expr: &ConceptExpr) -> Result<FixedBitSet> {
        if !self.is_affected(expr) {
            let mut ext = self.closure.extension(expr)?;
            ext.union_with(&self.baseline);
            return Ok(ext);
        }
        let key = canonical_key(expr);
        if let Some(hit) = self.cache.lock().expect("prediction cache").get(&key) {
            return Ok(hit.clone());
        }
        let mut program = self.program.clone();
        let axiom = Axiom::gci(expr.clone(), ConceptExpr::atomic(self.target.as_str()));
        normalize_axiom(usize::MAX, &axiom, &mut program)?;
        let closure = materialize_atoms(&program, &self.seeds, &self.options)?;
        let mut out = FixedBitSet::with_capacity(self.closure.num_individuals());
        for name in closure.instances_of_class(&self.target) {
            if let Some(i) = self.closure.individual_id(&name) {
                out.insert(i);
            }
        }
        self.cache.lock().expect("prediction cache").insert(key, out.clone());
        Ok(out)
    }

    pub fn refiner(&self, problem: &LearningProblem, config: &LearnerConfig) -> Refiner {
        Refiner::new(&problem.background, &[problem.target.as_str()], config.max_length)
    }
}

struct Candidate {
    expr: ConceptExpr,
    measure: Measure,
    length: usize,
    generation: usize,
}

/// Orders by score, then by generation order (earlier first).
fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.measure.score.total_cmp(&a.measure.score).then(a.generation.cmp(&b.generation))
}

struct Open(f64, usize);

impl PartialEq for Open {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Open {}
impl PartialOrd for Open {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Open {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

fn finish(problem: &LearningProblem, config: &LearnerConfig, mut all: Vec<Candidate>) -> Result<Vec<Hypothesis>> {
    let top_score = all[0].measure.score;
    all.sort_by(rank);
    let out: Vec<Hypothesis> = all
        .into_iter()
        .filter(|c| c.measure.score > top_score)
        .take(config.max_hypotheses)
        .map(|c| Hypothesis { expr: c.expr, score: c.measure.score, accuracy: c.measure.accuracy, length: c.length })
        .collect();
    if out.is_empty() {
        return Err(Error::NoHypothesis(problem.target.clone()));
    }
    Ok(out)
}

pub(crate) fn search(
    problem: &LearningProblem,
    config: &LearnerConfig,
    ev: &Evaluator,
    view: &View,
    refiner: &Refiner,
) -> Result<Vec<Hypothesis>> {
    if view.p == 0 {
        return Err(Error::InvalidConfig(format!("no positives for `{}` in the population", problem.target)));
    }
    let k = config.max_hypotheses.max(1);
    let root = ConceptExpr::Top;
    let measure = view.measure(&ev.predict(&root)?, 1);
    let mut all = vec![Candidate { expr: root.clone(), measure, length: 1, generation: 0 }];
    let mut seen: HashSet<String> = HashSet::from([canonical_key(&root)]);
    let mut open = BinaryHeap::from([Open(measure.score, 0)]);
    // Scores of the best k candidates other than Top, ascending.
    let mut best: Vec<f64> = Vec::new();
    let mut expansions = 0;

    while let Some(Open(_, id)) = open.pop() {
        if expansions >= config.max_expansions {
            break;
        }
        let (expr, m, len) = (all[id].expr.clone(), all[id].measure, all[id].length);
        if best.len() >= k && view.bound(&m, len) <= best[0] {
            continue;
        }
        expansions += 1;
        for child in refiner.refine(&expr) {
            if !seen.insert(canonical_key(&child)) {
                continue;
            }
            let length = child.length();
            let measure = view.measure(&ev.predict(&child)?, length);
            let generation = all.len();
            best.push(measure.score);
            best.sort_by(f64::total_cmp);
            if best.len() > k {
                best.remove(0);
            }
            let promising = measure.tp > 0 && !(best.len() >= k && view.bound(&measure, length) <= best[0]);
            if promising {
                open.push(Open(measure.score, generation));
            }
            all.push(Candidate { expr: child, measure, length, generation });
        }
    }
    finish(problem, config, all)
}

/// Best-first search over refinements of Top. Returns at most
/// `max_hypotheses` expressions scoring above Top, best first; ties keep
/// generation order.
pub fn learn_gci(problem: &LearningProblem, config: &LearnerConfig) -> Result<Vec<Hypothesis>> {
    let ev = Evaluator::new(problem)?;
    let view = ev.view(&problem.positives, &problem.population);
    search(problem, config, &ev, &view, &ev.refiner(problem, config))
}

/// Scores every expression reachable from Top within the length limit,
/// breadth first. Fails with `InvalidConfig` past `limit` expressions.
pub fn exhaustive_search(problem: &LearningProblem, config: &LearnerConfig, limit: usize) -> Result<Vec<Hypothesis>> {
    let ev = Evaluator::new(problem)?;
    let view = ev.view(&problem.positives, &problem.population);
    let refiner = ev.refiner(problem, config);
    let root = ConceptExpr::Top;
    let mut seen: HashSet<String> = HashSet::from([canonical_key(&root)]);
    let mut all = vec![Candidate { measure: view.measure(&ev.predict(&root)?, 1), expr: root, length: 1, generation: 0 }];
    let mut next = 0;
    while next < all.len() {
        let expr = all[next].expr.clone();
        next += 1;
        for child in refiner.refine(&expr) {
            if !seen.insert(canonical_key(&child)) {
                continue;
            }
            if all.len() >= limit {
                return Err(Error::InvalidConfig(format!("hypothesis space exceeds {limit} expressions")));
            }
            let length = child.length();
            let measure = view.measure(&ev.predict(&child)?, length);
            let generation = all.len();
            all.push(Candidate { expr: child, measure, length, generation });
        }
    }
    finish(problem, config, all)
}
