use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::axiom::{Axiom, Rule};
use super::concept::ConceptExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cumulativity {
    Cumulative,
    NotCumulative,
    Unspecified,
}

impl Cumulativity {
    pub fn keyword(self) -> &'static str {
        match self {
            Cumulativity::Cumulative => "cumulative",
            Cumulativity::NotCumulative => "noncumulative",
            Cumulativity::Unspecified => "unspecified",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "cumulative" => Some(Cumulativity::Cumulative),
            "noncumulative" => Some(Cumulativity::NotCumulative),
            "unspecified" => Some(Cumulativity::Unspecified),
            _ => None,
        }
    }
}

/// Aspectual traits (telicity, staging, cumulativity) of an event category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventTraits {
    pub telic: Sign,
    pub stage: Sign,
    pub cumulative: Cumulativity,
}

impl fmt::Display for EventTraits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}telic, {}stage, {}", self.telic.symbol(), self.stage.symbol(), self.cumulative.keyword())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    pub classes: BTreeSet<String>,
    pub roles: BTreeSet<String>,
    pub data_properties: BTreeSet<String>,
    pub individuals: BTreeSet<String>,
}

/// A finite set of axioms and rules together with the vocabulary they use.
///
/// Axioms keep insertion order; adding a structurally equal axiom twice is a
/// no-op. Axiom indices are stable and are what violations and program
/// provenance refer to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub declarations: Declarations,
    pub traits: BTreeMap<String, EventTraits>,
    axioms: Vec<Axiom>,
    rules: Vec<Rule>,
    invented: BTreeSet<usize>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
            && self.rules.is_empty()
            && self.traits.is_empty()
            && self.declarations == Declarations::default()
    }

    pub fn declare_class(&mut self, name: impl Into<String>) -> &mut Self {
        self.declarations.classes.insert(name.into());
        self
    }

    pub fn declare_role(&mut self, name: impl Into<String>) -> &mut Self {
        self.declarations.roles.insert(name.into());
        self
    }

    pub fn declare_data_property(&mut self, name: impl Into<String>) -> &mut Self {
        self.declarations.data_properties.insert(name.into());
        self
    }

    pub fn declare_individual(&mut self, name: impl Into<String>) -> &mut Self {
        self.declarations.individuals.insert(name.into());
        self
    }

    /// Appends an axiom unless an equal one is present. Returns its index.
    pub fn add_axiom(&mut self, axiom: Axiom) -> usize {
        if let Some(i) = self.axioms.iter().position(|a| *a == axiom) {
            return i;
        }
        self.axioms.push(axiom);
        self.axioms.len() - 1
    }

    /// Like [`add_axiom`](Self::add_axiom) but tags the axiom as invented
    /// content (serialized with an `# INVENTED` marker).
    pub fn add_invented_axiom(&mut self, axiom: Axiom) -> usize {
        let i = self.add_axiom(axiom);
        self.invented.insert(i);
        i
    }

    pub fn is_invented(&self, index: usize) -> bool {
        self.invented.contains(&index)
    }

    pub fn add_rule(&mut self, rule: Rule) -> usize {
        if let Some(i) = self.rules.iter().position(|r| *r == rule) {
            return i;
        }
        self.rules.push(rule);
        self.rules.len() - 1
    }

    /// Keeps the axioms for which `keep` returns true; invented markers
    /// follow their axioms.
    pub fn retain_axioms(&mut self, mut keep: impl FnMut(&Axiom) -> bool) {
        let mut kept = Vec::with_capacity(self.axioms.len());
        let mut invented = BTreeSet::new();
        for (i, ax) in std::mem::take(&mut self.axioms).into_iter().enumerate() {
            if keep(&ax) {
                if self.invented.contains(&i) {
                    invented.insert(kept.len());
                }
                kept.push(ax);
            }
        }
        self.axioms = kept;
        self.invented = invented;
    }

    /// Terminological part only (assertions removed).
    pub fn tbox(&self) -> KnowledgeBase {
        let mut kb = self.clone();
        kb.retain_axioms(|a| !a.is_assertion());
        kb
    }

    pub fn assertions(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.is_assertion())
    }

    /// Told direct subclasses of `name`: atomic `A ⊑ name` axioms, plus the
    /// atomic conjuncts-free case `A ⊑ (and name ...)`.
    pub fn direct_subclasses(&self, name: &str) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .axioms
            .iter()
            .filter_map(|ax| match ax {
                Axiom::Gci { lhs: ConceptExpr::Atomic(sub), rhs } if rhs_mentions(rhs, name) => Some(sub.as_str()),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Told atomic superclasses of `name` (direct).
    pub fn direct_superclasses(&self, name: &str) -> Vec<&str> {
        let mut out = Vec::new();
        for ax in &self.axioms {
            if let Axiom::Gci { lhs: ConceptExpr::Atomic(sub), rhs } = ax {
                if sub == name {
                    match rhs {
                        ConceptExpr::Atomic(sup) => out.push(sup.as_str()),
                        ConceptExpr::And(ms) => out.extend(ms.iter().filter_map(ConceptExpr::as_atomic)),
                        _ => {}
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Pairs `(r, s)` with `r = s⁻` declared in both directions.
    pub fn inverse_pairs(&self) -> Vec<(String, String)> {
        let mut one_way = BTreeSet::new();
        for ax in &self.axioms {
            if let Axiom::RoleInclusion { lhs: super::RoleExpr::Inverse(inner), rhs } = ax {
                if let Some(s) = inner.as_atomic() {
                    one_way.insert((s.to_string(), rhs.clone()));
                }
            }
        }
        one_way
            .iter()
            .filter(|(s, r)| one_way.contains(&(r.clone(), s.clone())))
            .map(|(s, r)| (r.clone(), s.clone()))
            .collect()
    }
}

fn rhs_mentions(rhs: &ConceptExpr, name: &str) -> bool {
    match rhs {
        ConceptExpr::Atomic(n) => n == name,
        ConceptExpr::And(ms) => ms.iter().any(|m| m.as_atomic() == Some(name)),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_axioms_are_ignored() {
        let mut kb = KnowledgeBase::new();
        let ax = Axiom::gci(ConceptExpr::atomic("Throwing"), ConceptExpr::atomic("ActivePhysicalAggression"));
        assert_eq!(kb.add_axiom(ax.clone()), 0);
        assert_eq!(kb.add_axiom(ax), 0);
        assert_eq!(kb.axioms().len(), 1);
    }

    #[test]
    fn retain_keeps_invented_markers_aligned() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::member("a", ConceptExpr::atomic("A")));
        kb.add_invented_axiom(Axiom::gci(ConceptExpr::atomic("B"), ConceptExpr::atomic("C")));
        kb.retain_axioms(|a| !a.is_assertion());
        assert!(kb.is_invented(0));
    }

    #[test]
    fn told_hierarchy_lookups() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::gci(ConceptExpr::atomic("B"), ConceptExpr::atomic("A")));
        kb.add_axiom(Axiom::gci(
            ConceptExpr::atomic("C"),
            ConceptExpr::and([ConceptExpr::atomic("A"), ConceptExpr::atomic("D")]),
        ));
        assert_eq!(kb.direct_subclasses("A"), vec!["B", "C"]);
        assert_eq!(kb.direct_superclasses("C"), vec!["A", "D"]);
    }

    #[test]
    fn inverse_pairs_need_both_directions() {
        let mut kb = KnowledgeBase::new();
        for ax in Axiom::inverse_of("isFrom", "has") {
            kb.add_axiom(ax);
        }
        kb.add_axiom(Axiom::symmetric("near"));
        let pairs = kb.inverse_pairs();
        assert!(pairs.contains(&("isFrom".into(), "has".into())));
        assert!(pairs.contains(&("has".into(), "isFrom".into())));
        assert!(pairs.contains(&("near".into(), "near".into())));
    }
}
