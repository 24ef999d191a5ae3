//! Materialization, consistency, instance and subsumption checking.

mod engine;
mod explain;
mod query;

use std::collections::BTreeSet;
use std::fmt;

pub use engine::{MaterializeOptions, DEFAULT_FACT_CAP, FACT_CAP_ENV};
pub use explain::{explain, DerivationTree, Justification};
pub use query::{all_instances, check_query, instance_of};

use engine::{Store, Value};

use crate::error::{Error, Result};
use crate::model::{normalize::translate_lhs, Axiom, ConceptExpr, KnowledgeBase, NormalizedProgram, PAtom, PTerm, Pred};
use crate::model::{normalize_kb, ProgramRule};

/// A ground fact as seen from outside the engine. Membership in `Thing` is
/// reported as a class fact with class `Thing`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Class { individual: String, class: String },
    Role { subject: String, role: String, object: String },
    Data { subject: String, property: String, value: String },
    Violation { individual: String, axiom: usize },
}

impl Fact {
    pub fn class(individual: impl Into<String>, class: impl Into<String>) -> Self {
        Fact::Class { individual: individual.into(), class: class.into() }
    }

    pub fn role(subject: impl Into<String>, role: impl Into<String>, object: impl Into<String>) -> Self {
        Fact::Role { subject: subject.into(), role: role.into(), object: object.into() }
    }

    pub fn data(subject: impl Into<String>, property: impl Into<String>, value: impl Into<String>) -> Self {
        Fact::Data { subject: subject.into(), property: property.into(), value: value.into() }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Class { individual, class } => write!(f, "{individual} : {class}"),
            Fact::Role { subject, role, object } => write!(f, "({subject}, {object}) : {role}"),
            Fact::Data { subject, property, value } => {
                write!(f, "({subject}, {}) : {property}", crate::model::quote(value))
            }
            Fact::Violation { individual, axiom } => write!(f, "{individual} violates axiom #{axiom}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub individual: String,
    pub axiom: usize,
    /// The violated axiom in `.fkb` syntax.
    pub description: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violates {}", self.individual, self.description)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

/// The deductive closure of a set of assertions under a program.
///
/// Immutable once built; queries take `&self` and may run concurrently.
#[derive(Debug, Clone)]
pub struct ClosureABox {
    store: Store,
    rules: Vec<ProgramRule>,
    constraints: std::collections::BTreeMap<usize, String>,
}

/// Converts assertion axioms into seed atoms.
pub fn assertion_atoms(assertions: &[Axiom]) -> Result<Vec<PAtom>> {
    let mut out = Vec::new();
    for ax in assertions {
        match ax {
            Axiom::ConceptAssertion { individual, concept } => {
                concept_atoms(ax, individual, concept, &mut out)?;
            }
            Axiom::RoleAssertion { subject, role, object } => out.push(PAtom {
                pred: Pred::Role(role.clone()),
                args: vec![PTerm::Individual(subject.clone()), PTerm::Individual(object.clone())],
            }),
            Axiom::DataAssertion { subject, property, value } => out.push(PAtom {
                pred: Pred::Data(property.clone()),
                args: vec![PTerm::Individual(subject.clone()), PTerm::Literal(value.clone())],
            }),
            other => {
                return Err(Error::UnsupportedConstruct {
                    axiom: other.to_string(),
                    construct: "terminological axiom in an assertion list".into(),
                })
            }
        }
    }
    Ok(out)
}

fn concept_atoms(ax: &Axiom, a: &str, c: &ConceptExpr, out: &mut Vec<PAtom>) -> Result<()> {
    let ind = || PTerm::Individual(a.to_string());
    match c {
        ConceptExpr::Atomic(n) => out.push(PAtom { pred: Pred::Class(n.clone()), args: vec![ind()] }),
        ConceptExpr::Top => out.push(PAtom { pred: Pred::Top, args: vec![ind()] }),
        ConceptExpr::And(ms) => {
            for m in ms {
                concept_atoms(ax, a, m, out)?;
            }
        }
        ConceptExpr::Exists(r, filler) => match (r.direction(), filler.as_ref()) {
            (Some((name, inverse)), ConceptExpr::Nominal(b)) => {
                let (s, o) = if inverse { (b.as_str(), a) } else { (a, b.as_str()) };
                out.push(PAtom {
                    pred: Pred::Role(name.to_string()),
                    args: vec![PTerm::Individual(s.to_string()), PTerm::Individual(o.to_string())],
                });
            }
            _ => {
                return Err(Error::UnsupportedConstruct {
                    axiom: ax.to_string(),
                    construct: format!("asserted existential {c} without a named filler"),
                })
            }
        },
        other => {
            return Err(Error::UnsupportedConstruct {
                axiom: ax.to_string(),
                construct: format!("asserted concept {other}"),
            })
        }
    }
    Ok(())
}

/// Least fixpoint of `program` over `assertions`, with the fact cap taken
/// from the environment.
pub fn materialize(program: &NormalizedProgram, assertions: &[Axiom]) -> Result<ClosureABox> {
    materialize_with(program, assertions, &MaterializeOptions::from_env())
}

pub fn materialize_with(
    program: &NormalizedProgram,
    assertions: &[Axiom],
    options: &MaterializeOptions,
) -> Result<ClosureABox> {
    materialize_atoms(program, &assertion_atoms(assertions)?, options)
}

/// Materializes from ground seed atoms (constants only).
pub fn materialize_atoms(program: &NormalizedProgram, seeds: &[PAtom], options: &MaterializeOptions) -> Result<ClosureABox> {
    let mut store = Store::default();
    // Rule constants are named individuals too.
    for rule in &program.rules {
        for atom in rule.body.iter().chain(std::iter::once(&rule.head)) {
            for t in &atom.args {
                if let PTerm::Individual(a) = t {
                    store.individuals.intern(a);
                }
            }
        }
    }
    let mut tuples = Vec::with_capacity(seeds.len());
    for atom in seeds {
        let pred = store.pred_id(&atom.pred);
        let mut vals = [Value::Ind(0); 2];
        for (k, t) in atom.args.iter().enumerate().take(2) {
            vals[k] = match t {
                PTerm::Individual(a) => Value::Ind(store.individuals.intern(a)),
                PTerm::Literal(s) => Value::Lit(store.literals.intern(s)),
                PTerm::Var(_) => {
                    return Err(Error::UnsupportedConstruct {
                        axiom: atom.to_string(),
                        construct: "variable in a ground fact".into(),
                    })
                }
            };
        }
        if atom.args.len() == 1 {
            vals[1] = vals[0];
        }
        tuples.push((pred, vals));
    }
    engine::run(&mut store, program, tuples, options.fact_cap)?;
    Ok(ClosureABox { store, rules: program.rules.clone(), constraints: program.constraints.clone() })
}

impl ClosureABox {
    /// Number of stored facts, `Thing` memberships included.
    pub fn len(&self) -> usize {
        self.store.total
    }

    pub fn is_empty(&self) -> bool {
        self.store.total == 0
    }

    pub fn individuals(&self) -> impl Iterator<Item = &str> {
        (0..self.store.individuals.len() as u32).map(|i| self.store.individuals.name(i))
    }

    pub fn num_individuals(&self) -> usize {
        self.store.individuals.len()
    }

    pub fn individual_id(&self, name: &str) -> Option<usize> {
        self.store.individuals.get(name).map(|i| i as usize)
    }

    pub fn individual_name(&self, id: usize) -> &str {
        self.store.individuals.name(id as u32)
    }

    fn to_fact(&self, pred: &Pred, t: [Value; 2]) -> Fact {
        let s = |v| self.store.render_value(v).to_string();
        match pred {
            Pred::Top => Fact::class(s(t[0]), "Thing"),
            Pred::Class(c) => Fact::class(s(t[0]), c.clone()),
            Pred::Role(r) => Fact::role(s(t[0]), r.clone(), s(t[1])),
            Pred::Data(p) => Fact::data(s(t[0]), p.clone(), s(t[1])),
            Pred::Violation(i) => Fact::Violation { individual: s(t[0]), axiom: *i },
        }
    }

    /// Locates a fact as (predicate id, tuple id).
    fn locate(&self, fact: &Fact) -> Option<(usize, u32)> {
        let ind = |n: &str| self.store.individuals.get(n).map(Value::Ind);
        let (pred, t) = match fact {
            Fact::Class { individual, class } => {
                let p = if class == "Thing" { Pred::Top } else { Pred::Class(class.clone()) };
                let v = ind(individual)?;
                (p, [v, v])
            }
            Fact::Role { subject, role, object } => (Pred::Role(role.clone()), [ind(subject)?, ind(object)?]),
            Fact::Data { subject, property, value } => (
                Pred::Data(property.clone()),
                [ind(subject)?, Value::Lit(self.store.literals.get(value)?)],
            ),
            Fact::Violation { individual, axiom } => {
                let v = ind(individual)?;
                (Pred::Violation(*axiom), [v, v])
            }
        };
        let pid = *self.store.pred_ids.get(&pred)?;
        self.store.relations[pid].find(&t).map(|id| (pid, id))
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.locate(fact).is_some()
    }

    pub fn has_class(&self, individual: &str, class: &str) -> bool {
        self.contains(&Fact::class(individual, class))
    }

    pub fn has_role(&self, subject: &str, role: &str, object: &str) -> bool {
        self.contains(&Fact::role(subject, role, object))
    }

    /// Every fact, sorted.
    pub fn facts(&self) -> Vec<Fact> {
        let mut out: Vec<Fact> = self
            .store
            .preds
            .iter()
            .zip(&self.store.relations)
            .flat_map(|(p, rel)| rel.tuples.iter().map(move |&t| self.to_fact(p, t)))
            .collect();
        out.sort();
        out
    }

    /// `(individual, class)` memberships for named classes, sorted.
    pub fn class_memberships(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (p, rel) in self.store.preds.iter().zip(&self.store.relations) {
            if let Pred::Class(c) = p {
                for t in &rel.tuples {
                    out.push((self.store.render_value(t[0]).to_string(), c.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Individuals asserted or inferred to be in the named class.
    pub fn instances_of_class(&self, class: &str) -> BTreeSet<String> {
        self.store
            .relation(&Pred::Class(class.to_string()))
            .map(|rel| rel.tuples.iter().map(|t| self.store.render_value(t[0]).to_string()).collect())
            .unwrap_or_default()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (p, rel) in self.store.preds.iter().zip(&self.store.relations) {
            if let Pred::Violation(i) = p {
                for t in &rel.tuples {
                    out.push(Violation {
                        individual: self.store.render_value(t[0]).to_string(),
                        axiom: *i,
                        description: self.constraints.get(i).cloned().unwrap_or_default(),
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub(crate) fn store(&self) -> &Store {
        &self.store
    }
}

pub fn is_consistent(closure: &ClosureABox) -> ConsistencyReport {
    let violations = closure.violations();
    ConsistencyReport { consistent: violations.is_empty(), violations }
}

/// Decides `kb ⊨ c ⊑ d` for a positive existential `c` and a class name `d`.
///
/// Each disjunct of `c` is realised by fresh individuals; `c` is subsumed iff
/// every disjunct's root is classified under `d` (or the extended ABox is
/// inconsistent, making the inclusion hold vacuously).
pub fn is_subsumed(kb: &KnowledgeBase, c: &ConceptExpr, d: &str) -> Result<bool> {
    let program = normalize_kb(kb)?;
    let probe = Axiom::gci(c.clone(), ConceptExpr::atomic(d));
    let mut fresh_var = 1;
    let disjuncts = translate_lhs(c, 0, &mut fresh_var, &probe)?;
    let base = assertion_atoms(&kb.assertions().cloned().collect::<Vec<_>>())?;

    let mut used: BTreeSet<&str> = kb.declarations.individuals.iter().map(String::as_str).collect();
    for atom in &base {
        for t in &atom.args {
            if let PTerm::Individual(a) = t {
                used.insert(a);
            }
        }
    }
    let mut prefix = String::from("__fresh");
    while used.iter().any(|u| u.starts_with(&prefix)) {
        prefix.push('_');
    }

    let options = MaterializeOptions::from_env();
    for conj in disjuncts {
        let ground = |t: &PTerm| match t {
            PTerm::Var(v) => PTerm::Individual(format!("{prefix}{v}")),
            other => other.clone(),
        };
        let mut seeds = base.clone();
        seeds.extend(conj.iter().map(|a| PAtom { pred: a.pred.clone(), args: a.args.iter().map(ground).collect() }));
        let closure = materialize_atoms(&program, &seeds, &options)?;
        let root = format!("{prefix}0");
        if !closure.has_class(&root, d) && closure.violations().is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConceptExpr as C, RoleExpr as R};

    fn a(n: &str) -> C {
        C::atomic(n)
    }

    #[test]
    fn empty_inputs() {
        let closure = materialize(&NormalizedProgram::default(), &[]).unwrap();
        assert!(closure.is_empty());
        assert!(is_consistent(&closure).consistent);
    }

    #[test]
    fn transitive_inverse_chain() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::transitive("has"));
        for ax in Axiom::inverse_of("isFrom", "has") {
            kb.add_axiom(ax);
        }
        let program = normalize_kb(&kb).unwrap();
        let facts = [Axiom::related("has", "e7", "r3"), Axiom::related("has", "r3", "t5")];
        let closure = materialize(&program, &facts).unwrap();
        assert!(closure.has_role("e7", "has", "t5"));
        assert!(closure.has_role("t5", "isFrom", "e7"));
        assert!(closure.has_class("t5", "Thing"));
    }

    #[test]
    fn disjointness_detected() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::gci(a("Perdurant"), C::complement(a("Endurant"))));
        let program = normalize_kb(&kb).unwrap();
        let closure =
            materialize(&program, &[Axiom::member("x", a("Perdurant")), Axiom::member("x", a("Endurant"))]).unwrap();
        let report = is_consistent(&closure);
        assert!(!report.consistent);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].individual, "x");
    }

    #[test]
    fn fact_cap_is_enforced() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::transitive("r"));
        let program = normalize_kb(&kb).unwrap();
        let facts: Vec<Axiom> = (0..20).map(|i| Axiom::related("r", format!("n{i}"), format!("n{}", i + 1))).collect();
        let err = materialize_with(&program, &facts, &MaterializeOptions { fact_cap: 50 }).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { cap: 50 }));
    }

    #[test]
    fn subsumption_via_fresh_individuals() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::gci(a("Throwing"), a("ActivePhysicalAggression")));
        kb.add_axiom(Axiom::gci(a("ActivePhysicalAggression"), a("PhysicalAggression")));
        kb.add_axiom(Axiom::gci(a("PhysicalAggression"), a("Process")));
        assert!(is_subsumed(&kb, &a("Throwing"), "Process").unwrap());
        assert!(!is_subsumed(&kb, &a("Process"), "Throwing").unwrap());
        assert!(is_subsumed(&kb, &a("Zebra"), "Zebra").unwrap());
        let either = C::or([a("Throwing"), a("PhysicalAggression")]);
        assert!(is_subsumed(&kb, &either, "Process").unwrap());
        let mixed = C::or([a("Throwing"), a("Other")]);
        assert!(!is_subsumed(&kb, &mixed, "Process").unwrap());
        let nested = C::some(R::atomic("part"), a("Throwing"));
        assert!(!is_subsumed(&kb, &nested, "Process").unwrap());
    }
}
