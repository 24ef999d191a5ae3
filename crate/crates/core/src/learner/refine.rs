use std::collections::HashSet;

use crate::model::{ConceptExpr, KnowledgeBase, RoleExpr};

/// Downward refinement over a fixed vocabulary of class and role names.
#[derive(Debug, Clone)]
pub struct Refiner {
    classes: Vec<String>,
    roles: Vec<String>,
    subclasses: std::collections::HashMap<String, Vec<String>>,
    max_length: usize,
}

impl Refiner {
    /// Vocabulary = declared classes and roles of `kb` minus `excluded`.
    pub fn new(kb: &KnowledgeBase, excluded: &[&str], max_length: usize) -> Self {
        let classes: Vec<String> =
            kb.declarations.classes.iter().filter(|c| !excluded.contains(&c.as_str())).cloned().collect();
        let roles: Vec<String> =
            kb.declarations.roles.iter().filter(|r| !excluded.contains(&r.as_str())).cloned().collect();
        let subclasses = classes
            .iter()
            .map(|c| {
                let subs = kb
                    .direct_subclasses(c)
                    .into_iter()
                    .filter(|s| *s != c && !excluded.contains(s))
                    .map(String::from)
                    .collect();
                (c.clone(), subs)
            })
            .collect();
        Refiner { classes, roles, subclasses, max_length }
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    /// Distinct refinements of `expr` no longer than the length limit, in
    /// generation order.
    pub fn refine(&self, expr: &ConceptExpr) -> Vec<ConceptExpr> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for c in self.raw(expr) {
            if c.length() <= self.max_length && seen.insert(canonical_key(&c)) {
                out.push(c);
            }
        }
        out
    }

    fn raw(&self, expr: &ConceptExpr) -> Vec<ConceptExpr> {
        let mut out = Vec::new();
        match expr {
            ConceptExpr::Top => {
                out.extend(self.classes.iter().map(|c| ConceptExpr::atomic(c.as_str())));
                out.extend(self.roles.iter().map(|r| ConceptExpr::some(RoleExpr::atomic(r.as_str()), ConceptExpr::Top)));
                return out;
            }
            ConceptExpr::Atomic(a) => {
                if let Some(subs) = self.subclasses.get(a) {
                    out.extend(subs.iter().map(|s| ConceptExpr::atomic(s.as_str())));
                }
            }
            ConceptExpr::Exists(r, f) => {
                out.extend(self.raw(f).into_iter().map(|g| ConceptExpr::some(r.clone(), g)));
            }
            ConceptExpr::And(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    for g in self.raw(m) {
                        let mut next = ms.clone();
                        next[i] = g;
                        out.push(ConceptExpr::and(next));
                    }
                }
            }
            _ => return out,
        }
        let conjuncts: Vec<&ConceptExpr> = match expr {
            ConceptExpr::And(ms) => ms.iter().collect(),
            other => vec![other],
        };
        for c in &self.classes {
            let name = ConceptExpr::atomic(c.as_str());
            if !conjuncts.contains(&&name) {
                let mut next: Vec<ConceptExpr> = conjuncts.iter().map(|m| (*m).clone()).collect();
                next.push(name);
                out.push(ConceptExpr::and(next));
            }
        }
        out
    }
}

/// Text of `expr` with nested conjunctions flattened and conjuncts sorted,
/// so that reordered conjunctions share a key.
pub fn canonical_key(expr: &ConceptExpr) -> String {
    canonical(expr).to_string()
}

fn canonical(expr: &ConceptExpr) -> ConceptExpr {
    match expr {
        ConceptExpr::And(ms) => {
            let mut parts: Vec<ConceptExpr> = Vec::new();
            for m in ms {
                match canonical(m) {
                    ConceptExpr::And(inner) => parts.extend(inner),
                    other => parts.push(other),
                }
            }
            parts.sort_by_cached_key(|p| p.to_string());
            parts.dedup();
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                ConceptExpr::And(parts)
            }
        }
        ConceptExpr::Exists(r, f) => ConceptExpr::some(r.clone(), canonical(f)),
        other => other.clone(),
    }
}

/// Refinements of `expr` over every declared class and role of `kb`.
pub fn refine(expr: &ConceptExpr, kb: &KnowledgeBase, config: &super::LearnerConfig) -> Vec<ConceptExpr> {
    Refiner::new(kb, &[], config.max_length).refine(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Axiom;

    fn kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.declare_class("Vehicle").declare_class("Arm").declare_class("Car").declare_role("immediateRelation");
        kb.add_axiom(Axiom::gci(ConceptExpr::atomic("Car"), ConceptExpr::atomic("Vehicle")));
        kb
    }

    #[test]
    fn top_refines_to_names_and_existentials() {
        let r = Refiner::new(&kb(), &["Car"], 5);
        let got: Vec<String> = r.refine(&ConceptExpr::Top).iter().map(|c| c.to_string()).collect();
        assert_eq!(got, vec!["Arm", "Vehicle", "(some immediateRelation Thing)"]);
    }

    #[test]
    fn existential_filler_and_subclass_steps() {
        let r = Refiner::new(&kb(), &[], 5);
        let ir = RoleExpr::atomic("immediateRelation");
        let out = r.refine(&ConceptExpr::some(ir.clone(), ConceptExpr::Top));
        assert!(out.contains(&ConceptExpr::some(ir, ConceptExpr::atomic("Vehicle"))));
        let out = r.refine(&ConceptExpr::atomic("Vehicle"));
        assert_eq!(out[0], ConceptExpr::atomic("Car"));
        assert!(out.contains(&ConceptExpr::and([ConceptExpr::atomic("Vehicle"), ConceptExpr::atomic("Arm")])));
    }

    #[test]
    fn length_limit_truncates() {
        let r = Refiner::new(&kb(), &[], 2);
        assert!(r.refine(&ConceptExpr::atomic("Arm")).iter().all(|c| c.length() <= 2));
    }

    #[test]
    fn canonical_keys_ignore_conjunct_order() {
        let a = ConceptExpr::and([ConceptExpr::atomic("B"), ConceptExpr::atomic("A")]);
        let b = ConceptExpr::and([ConceptExpr::atomic("A"), ConceptExpr::and([ConceptExpr::atomic("B")])]);
        assert_eq!(canonical_key(&a), canonical_key(&b));
    }
}
