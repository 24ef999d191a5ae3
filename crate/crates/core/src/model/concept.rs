use std::fmt;

/// A role expression: an atomic role, its inverse, or a composition (chain).
///
/// Chains only appear on the left of role inclusions. Construct inverses
/// through [`RoleExpr::inverse`] so that `(r⁻)⁻` collapses to `r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoleExpr {
    Atomic(String),
    Inverse(Box<RoleExpr>),
    Compose(Vec<RoleExpr>),
}

impl RoleExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        RoleExpr::Atomic(name.into())
    }

    pub fn inverse(inner: RoleExpr) -> Self {
        match inner {
            RoleExpr::Inverse(r) => *r,
            other => RoleExpr::Inverse(Box::new(other)),
        }
    }

    /// Chain of two or more roles; nested chains are spliced in.
    pub fn compose(parts: Vec<RoleExpr>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                RoleExpr::Compose(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            RoleExpr::Compose(flat)
        }
    }

    pub fn as_atomic(&self) -> Option<&str> {
        match self {
            RoleExpr::Atomic(n) => Some(n),
            _ => None,
        }
    }

    /// The underlying atomic name and whether it is traversed backwards.
    /// `None` for chains.
    pub fn direction(&self) -> Option<(&str, bool)> {
        match self {
            RoleExpr::Atomic(n) => Some((n, false)),
            RoleExpr::Inverse(inner) => inner.direction().map(|(n, inv)| (n, !inv)),
            RoleExpr::Compose(_) => None,
        }
    }

    pub fn role_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            RoleExpr::Atomic(n) => out.push(n),
            RoleExpr::Inverse(inner) => inner.role_names(out),
            RoleExpr::Compose(parts) => parts.iter().for_each(|p| p.role_names(out)),
        }
    }
}

/// Concept expressions of ALC extended with nominal fillers (`∃r.{a}`).
///
/// `And`/`Or` are kept canonical: nested members are flattened, members are
/// sorted and deduplicated, and a single surviving member replaces the
/// connective. Use the smart constructors to preserve that invariant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptExpr {
    Atomic(String),
    Top,
    Bottom,
    And(Vec<ConceptExpr>),
    Or(Vec<ConceptExpr>),
    Not(Box<ConceptExpr>),
    Exists(RoleExpr, Box<ConceptExpr>),
    Forall(RoleExpr, Box<ConceptExpr>),
    Nominal(String),
}

impl ConceptExpr {
    pub fn atomic(name: impl Into<String>) -> Self {
        ConceptExpr::Atomic(name.into())
    }

    pub fn and(members: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let mut flat = Vec::new();
        for m in members {
            match m {
                ConceptExpr::And(inner) => flat.extend(inner),
                ConceptExpr::Top => {}
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => ConceptExpr::Top,
            1 => flat.pop().unwrap(),
            _ => ConceptExpr::And(flat),
        }
    }

    pub fn or(members: impl IntoIterator<Item = ConceptExpr>) -> Self {
        let mut flat = Vec::new();
        for m in members {
            match m {
                ConceptExpr::Or(inner) => flat.extend(inner),
                ConceptExpr::Bottom => {}
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => ConceptExpr::Bottom,
            1 => flat.pop().unwrap(),
            _ => ConceptExpr::Or(flat),
        }
    }

    pub fn complement(inner: ConceptExpr) -> Self {
        ConceptExpr::Not(Box::new(inner))
    }

    pub fn some(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Exists(role, Box::new(filler))
    }

    pub fn all(role: RoleExpr, filler: ConceptExpr) -> Self {
        ConceptExpr::Forall(role, Box::new(filler))
    }

    /// `∃r.{a}`.
    pub fn value(role: RoleExpr, individual: impl Into<String>) -> Self {
        ConceptExpr::Exists(role, Box::new(ConceptExpr::Nominal(individual.into())))
    }

    pub fn as_atomic(&self) -> Option<&str> {
        match self {
            ConceptExpr::Atomic(n) => Some(n),
            _ => None,
        }
    }

    /// Node count of the expression tree. An existential or universal
    /// restriction counts as one node plus its filler.
    pub fn length(&self) -> usize {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Nominal(_) => 1,
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => 1 + ms.iter().map(ConceptExpr::length).sum::<usize>(),
            ConceptExpr::Not(inner) => 1 + inner.length(),
            ConceptExpr::Exists(_, f) | ConceptExpr::Forall(_, f) => 1 + f.length(),
        }
    }

    /// True when the expression only uses Top, atomic names, And, Or,
    /// existential restrictions and nominal fillers.
    pub fn is_positive_existential(&self) -> bool {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top => true,
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => ms.iter().all(ConceptExpr::is_positive_existential),
            ConceptExpr::Exists(r, f) => {
                r.direction().is_some()
                    && (matches!(**f, ConceptExpr::Nominal(_)) || f.is_positive_existential())
            }
            _ => false,
        }
    }

    pub fn concept_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ConceptExpr::Atomic(n) => out.push(n),
            ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Nominal(_) => {}
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => ms.iter().for_each(|m| m.concept_names(out)),
            ConceptExpr::Not(inner) => inner.concept_names(out),
            ConceptExpr::Exists(_, f) | ConceptExpr::Forall(_, f) => f.concept_names(out),
        }
    }

    pub fn role_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Nominal(_) => {}
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => ms.iter().for_each(|m| m.role_names(out)),
            ConceptExpr::Not(inner) => inner.role_names(out),
            ConceptExpr::Exists(r, f) | ConceptExpr::Forall(r, f) => {
                r.role_names(out);
                f.role_names(out);
            }
        }
    }

    pub fn individual_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ConceptExpr::Nominal(a) => out.push(a),
            ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom => {}
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => ms.iter().for_each(|m| m.individual_names(out)),
            ConceptExpr::Not(inner) => inner.individual_names(out),
            ConceptExpr::Exists(_, f) | ConceptExpr::Forall(_, f) => f.individual_names(out),
        }
    }

    /// Nominal only allowed directly under an existential; returns the first
    /// offending sub-expression otherwise.
    pub fn misplaced_nominal(&self) -> Option<&ConceptExpr> {
        fn walk(c: &ConceptExpr, under_exists: bool) -> Option<&ConceptExpr> {
            match c {
                ConceptExpr::Nominal(_) if !under_exists => Some(c),
                ConceptExpr::Atomic(_) | ConceptExpr::Top | ConceptExpr::Bottom | ConceptExpr::Nominal(_) => None,
                ConceptExpr::And(ms) | ConceptExpr::Or(ms) => ms.iter().find_map(|m| walk(m, false)),
                ConceptExpr::Not(inner) => walk(inner, false),
                ConceptExpr::Exists(_, f) => walk(f, true),
                ConceptExpr::Forall(_, f) => walk(f, false),
            }
        }
        walk(self, false)
    }
}

// Rendering uses the `.fkb` surface syntax so error messages and hypotheses
// can be pasted straight back into a knowledge base file.
impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleExpr::Atomic(n) => f.write_str(n),
            RoleExpr::Inverse(inner) => write!(f, "(inv {inner})"),
            RoleExpr::Compose(parts) => {
                f.write_str("(chain")?;
                for p in parts {
                    write!(f, " {p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for ConceptExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConceptExpr::Atomic(n) => f.write_str(n),
            ConceptExpr::Top => f.write_str("Thing"),
            ConceptExpr::Bottom => f.write_str("Nothing"),
            ConceptExpr::And(ms) | ConceptExpr::Or(ms) => {
                f.write_str(if matches!(self, ConceptExpr::And(_)) { "(and" } else { "(or" })?;
                for m in ms {
                    write!(f, " {m}")?;
                }
                f.write_str(")")
            }
            ConceptExpr::Not(inner) => write!(f, "(not {inner})"),
            ConceptExpr::Exists(r, filler) => match filler.as_ref() {
                ConceptExpr::Nominal(a) => write!(f, "(value {r} {a})"),
                other => write!(f, "(some {r} {other})"),
            },
            ConceptExpr::Forall(r, filler) => write!(f, "(all {r} {filler})"),
            // Only reachable for a malformed tree; rendered in set notation.
            ConceptExpr::Nominal(a) => write!(f, "{{{a}}}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> ConceptExpr {
        ConceptExpr::atomic(n)
    }

    #[test]
    fn and_flattens_sorts_and_dedups() {
        let c = ConceptExpr::and([a("B"), ConceptExpr::and([a("C"), a("A")]), a("B")]);
        assert_eq!(c, ConceptExpr::And(vec![a("A"), a("B"), a("C")]));
        assert_eq!(ConceptExpr::and([a("A"), ConceptExpr::Top]), a("A"));
        assert_eq!(ConceptExpr::and([]), ConceptExpr::Top);
    }

    #[test]
    fn or_drops_bottom() {
        assert_eq!(ConceptExpr::or([a("X"), ConceptExpr::Bottom]), a("X"));
        assert_eq!(ConceptExpr::or([a("Y"), a("X")]), ConceptExpr::Or(vec![a("X"), a("Y")]));
    }

    #[test]
    fn double_inverse_collapses() {
        let r = RoleExpr::inverse(RoleExpr::inverse(RoleExpr::atomic("has")));
        assert_eq!(r, RoleExpr::atomic("has"));
        assert_eq!(RoleExpr::inverse(RoleExpr::atomic("has")).direction(), Some(("has", true)));
    }

    #[test]
    fn length_counts_nodes() {
        let e = ConceptExpr::some(RoleExpr::atomic("immediateRelation"), a("Vehicle"));
        assert_eq!(e.length(), 2);
        assert_eq!(ConceptExpr::Top.length(), 1);
        let pa = ConceptExpr::and([a("PhysicalAggression"), ConceptExpr::some(RoleExpr::atomic("r"), a("Structure"))]);
        assert_eq!(pa.length(), 4);
    }

    #[test]
    fn nominal_placement() {
        let ok = ConceptExpr::value(RoleExpr::atomic("hasCameraId"), "cameraC004");
        assert!(ok.misplaced_nominal().is_none());
        let bad = ConceptExpr::and([a("A"), ConceptExpr::Nominal("x".into())]);
        assert!(bad.misplaced_nominal().is_some());
    }

    #[test]
    fn display_uses_surface_syntax() {
        let e = ConceptExpr::and([
            a("Perdurant"),
            ConceptExpr::some(RoleExpr::inverse(RoleExpr::atomic("participant")), a("Vehicle")),
        ]);
        assert_eq!(e.to_string(), "(and Perdurant (some (inv participant) Vehicle))");
    }
}
