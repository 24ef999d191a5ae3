use std::fmt;

use super::concept::{ConceptExpr, RoleExpr};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    /// `lhs ⊑ rhs`.
    Gci { lhs: ConceptExpr, rhs: ConceptExpr },
    /// `lhs ⊑ rhs` over roles; `rhs` is always atomic.
    RoleInclusion { lhs: RoleExpr, rhs: String },
    ConceptAssertion { individual: String, concept: ConceptExpr },
    RoleAssertion { subject: String, role: String, object: String },
    DataAssertion { subject: String, property: String, value: String },
    /// Sugar for `a ⊓ b ⊑ ⊥`. Operands are stored in sorted order.
    Disjoint { a: ConceptExpr, b: ConceptExpr },
}

impl Axiom {
    pub fn gci(lhs: ConceptExpr, rhs: ConceptExpr) -> Self {
        Axiom::Gci { lhs, rhs }
    }

    pub fn sub_role(lhs: RoleExpr, rhs: impl Into<String>) -> Self {
        Axiom::RoleInclusion { lhs, rhs: rhs.into() }
    }

    pub fn disjoint(a: ConceptExpr, b: ConceptExpr) -> Self {
        if b < a {
            Axiom::Disjoint { a: b, b: a }
        } else {
            Axiom::Disjoint { a, b }
        }
    }

    pub fn member(individual: impl Into<String>, concept: ConceptExpr) -> Self {
        Axiom::ConceptAssertion { individual: individual.into(), concept }
    }

    pub fn related(role: impl Into<String>, subject: impl Into<String>, object: impl Into<String>) -> Self {
        Axiom::RoleAssertion { subject: subject.into(), role: role.into(), object: object.into() }
    }

    pub fn data(property: impl Into<String>, subject: impl Into<String>, value: impl Into<String>) -> Self {
        Axiom::DataAssertion { subject: subject.into(), property: property.into(), value: value.into() }
    }

    /// `r∘r ⊑ r`.
    pub fn transitive(role: &str) -> Self {
        Axiom::sub_role(RoleExpr::compose(vec![RoleExpr::atomic(role), RoleExpr::atomic(role)]), role)
    }

    /// `r⁻ ⊑ r`.
    pub fn symmetric(role: &str) -> Self {
        Axiom::sub_role(RoleExpr::inverse(RoleExpr::atomic(role)), role)
    }

    /// `r = s⁻`, as the pair `s⁻ ⊑ r` and `r⁻ ⊑ s`.
    pub fn inverse_of(r: &str, s: &str) -> [Axiom; 2] {
        [
            Axiom::sub_role(RoleExpr::inverse(RoleExpr::atomic(s)), r),
            Axiom::sub_role(RoleExpr::inverse(RoleExpr::atomic(r)), s),
        ]
    }

    pub fn is_assertion(&self) -> bool {
        matches!(
            self,
            Axiom::ConceptAssertion { .. } | Axiom::RoleAssertion { .. } | Axiom::DataAssertion { .. }
        )
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Gci { lhs, rhs } => write!(f, "Sub({lhs}, {rhs})"),
            Axiom::RoleInclusion { lhs, rhs } => write!(f, "SubRole({lhs}, {rhs})"),
            Axiom::ConceptAssertion { individual, concept } => write!(f, "Member({concept}, {individual})"),
            Axiom::RoleAssertion { subject, role, object } => write!(f, "Related({role}, {subject}, {object})"),
            Axiom::DataAssertion { subject, property, value } => {
                write!(f, "Data({property}, {subject}, {})", quote(value))
            }
            Axiom::Disjoint { a, b } => write!(f, "Disjoint({a}, {b})"),
        }
    }
}

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Individual(String),
    Literal(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Individual(a) => f.write_str(a),
            Term::Literal(s) => f.write_str(&quote(s)),
        }
    }
}

/// A rule atom over atomic names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Class(String, Term),
    Object(String, Term, Term),
    Data(String, Term, Term),
    SameAs(Term, Term),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Class(_, t) => vec![t],
            Atom::Object(_, a, b) | Atom::Data(_, a, b) | Atom::SameAs(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class(c, t) => write!(f, "{c}({t})"),
            Atom::Object(r, a, b) | Atom::Data(r, a, b) => write!(f, "{r}({a}, {b})"),
            Atom::SameAs(a, b) => write!(f, "SameAs({a}, {b})"),
        }
    }
}

/// A SWRL-style rule `body → head`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub body: Vec<Atom>,
    pub head: Atom,
}

impl Rule {
    pub fn new(body: Vec<Atom>, head: Atom) -> Self {
        Rule { body, head }
    }

    /// Head variables missing from the body.
    pub fn unsafe_variables(&self) -> Vec<&str> {
        let bound: Vec<&str> = self.body.iter().flat_map(|a| a.terms()).filter_map(Term::as_var).collect();
        let mut missing: Vec<&str> =
            self.head.terms().into_iter().filter_map(Term::as_var).filter(|v| !bound.contains(v)).collect();
        missing.dedup();
        missing
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Rule: ")?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " -> {}", self.head)
    }
}
