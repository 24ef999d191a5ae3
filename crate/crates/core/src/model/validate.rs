use std::fmt;

use super::axiom::{Atom, Axiom, Term};
use super::concept::ConceptExpr;
use super::kb::KnowledgeBase;
use super::normalize::{compile_rule, normalize_axiom, NormalizedProgram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueKind {
    UndeclaredName,
    UnsafeRule,
    UnsupportedConstruct,
}

/// Which part of the knowledge base an issue belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Axiom(usize),
    Rule(usize),
    Traits(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValidationIssue {
    pub kind: IssueKind,
    pub subject: Subject,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks declarations, rule safety and membership in the executable
/// fragment. The result is empty iff `normalize_kb` succeeds and every name
/// is declared.
pub fn validate_kb(kb: &KnowledgeBase) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let decl = &kb.declarations;
    let mut undeclared = |subject: &Subject, what: &str, name: &str, ok: bool, issues: &mut Vec<ValidationIssue>| {
        if !ok {
            issues.push(ValidationIssue {
                kind: IssueKind::UndeclaredName,
                subject: subject.clone(),
                message: format!("undeclared {what} `{name}`"),
            });
        }
    };

    for (i, axiom) in kb.axioms().iter().enumerate() {
        let subject = Subject::Axiom(i);
        let mut concepts: Vec<&str> = Vec::new();
        let mut roles: Vec<&str> = Vec::new();
        let mut individuals: Vec<&str> = Vec::new();
        let mut data_props: Vec<&str> = Vec::new();
        match axiom {
            Axiom::Gci { lhs, rhs } | Axiom::Disjoint { a: lhs, b: rhs } => {
                for c in [lhs, rhs] {
                    c.concept_names(&mut concepts);
                    c.role_names(&mut roles);
                    c.individual_names(&mut individuals);
                }
            }
            Axiom::RoleInclusion { lhs, rhs } => {
                lhs.role_names(&mut roles);
                roles.push(rhs.as_str());
            }
            Axiom::ConceptAssertion { individual, concept } => {
                individuals.push(individual.as_str());
                concept.concept_names(&mut concepts);
                concept.role_names(&mut roles);
                concept.individual_names(&mut individuals);
            }
            Axiom::RoleAssertion { subject, role, object } => {
                individuals.extend([subject.as_str(), object.as_str()]);
                roles.push(role.as_str());
            }
            Axiom::DataAssertion { subject, property, .. } => {
                individuals.push(subject.as_str());
                data_props.push(property.as_str());
            }
        }
        report_names(&subject, &mut undeclared, &mut issues, kb, &concepts, &roles, &individuals, &data_props);

        let nominal = match axiom {
            Axiom::Gci { lhs, rhs } | Axiom::Disjoint { a: lhs, b: rhs } => {
                lhs.misplaced_nominal().or_else(|| rhs.misplaced_nominal())
            }
            Axiom::ConceptAssertion { concept, .. } => concept.misplaced_nominal(),
            _ => None,
        };
        if let Some(n) = nominal {
            issues.push(ValidationIssue {
                kind: IssueKind::UnsupportedConstruct,
                subject: subject.clone(),
                message: format!("nominal {n} outside an existential filler in {axiom}"),
            });
            continue;
        }
        if let Axiom::ConceptAssertion { concept, .. } = axiom {
            if !is_assertable(concept) {
                issues.push(ValidationIssue {
                    kind: IssueKind::UnsupportedConstruct,
                    subject: subject.clone(),
                    message: format!("concept {concept} cannot be asserted in {axiom}"),
                });
            }
        }
        if let Err(e) = normalize_axiom(i, axiom, &mut NormalizedProgram::default()) {
            issues.push(ValidationIssue {
                kind: IssueKind::UnsupportedConstruct,
                subject,
                message: e.to_string(),
            });
        }
    }

    for (i, rule) in kb.rules().iter().enumerate() {
        let subject = Subject::Rule(i);
        for atom in rule.body.iter().chain(std::iter::once(&rule.head)) {
            let (what, name, ok) = match atom {
                Atom::Class(c, _) => ("class", c.as_str(), decl.classes.contains(c)),
                Atom::Object(r, ..) => ("role", r.as_str(), decl.roles.contains(r)),
                Atom::Data(p, ..) => ("data property", p.as_str(), decl.data_properties.contains(p)),
                Atom::SameAs(..) => ("", "", true),
            };
            undeclared(&subject, what, name, ok, &mut issues);
            for t in atom.terms() {
                if let Term::Individual(a) = t {
                    undeclared(&subject, "individual", a, decl.individuals.contains(a), &mut issues);
                }
            }
        }
        if let Err(e) = compile_rule(i, rule) {
            let kind = match e {
                crate::Error::UnsafeRule { .. } => IssueKind::UnsafeRule,
                _ => IssueKind::UnsupportedConstruct,
            };
            issues.push(ValidationIssue { kind, subject, message: e.to_string() });
        }
    }

    for name in kb.traits.keys() {
        undeclared(&Subject::Traits(name.clone()), "class", name, decl.classes.contains(name), &mut issues);
    }
    issues
}

#[allow(clippy::too_many_arguments)]
fn report_names(
    subject: &Subject,
    undeclared: &mut impl FnMut(&Subject, &str, &str, bool, &mut Vec<ValidationIssue>),
    issues: &mut Vec<ValidationIssue>,
    kb: &KnowledgeBase,
    concepts: &[&str],
    roles: &[&str],
    individuals: &[&str],
    data_props: &[&str],
) {
    let d = &kb.declarations;
    let mut seen = std::collections::BTreeSet::new();
    for c in concepts {
        if seen.insert(("class", *c)) {
            undeclared(subject, "class", c, d.classes.contains(*c), issues);
        }
    }
    for r in roles {
        if seen.insert(("role", *r)) {
            undeclared(subject, "role", r, d.roles.contains(*r), issues);
        }
    }
    for a in individuals {
        if seen.insert(("individual", *a)) {
            undeclared(subject, "individual", a, d.individuals.contains(*a), issues);
        }
    }
    for p in data_props {
        if seen.insert(("data property", *p)) {
            undeclared(subject, "data property", p, d.data_properties.contains(*p), issues);
        }
    }
}

/// Concepts that map onto plain facts when asserted: names, Thing,
/// conjunctions of those, and `(value r a)`.
pub fn is_assertable(c: &ConceptExpr) -> bool {
    match c {
        ConceptExpr::Atomic(_) | ConceptExpr::Top => true,
        ConceptExpr::And(ms) => ms.iter().all(is_assertable),
        ConceptExpr::Exists(r, f) => r.direction().is_some() && matches!(**f, ConceptExpr::Nominal(_)),
        _ => false,
    }
}
