use std::fmt;

use super::engine::Provenance;
use super::{ClosureABox, Fact};
use crate::error::{Error, Result};
use crate::model::Origin;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Asserted,
    /// Every named individual is an instance of `Thing`.
    Domain,
    Rule { origin: Origin, rule: String },
}

/// First derivation found for a fact; leaves are asserted (or domain) facts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub fact: Fact,
    pub justification: Justification,
    pub premises: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn is_leaf(&self) -> bool {
        self.premises.is_empty()
    }

    /// Rule texts from the root downwards in pre-order.
    pub fn rules(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Justification::Rule { rule, .. } = &t.justification {
                out.push(rule.as_str());
            }
        });
        out
    }

    pub fn leaves(&self) -> Vec<&Fact> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if t.is_leaf() {
                out.push(&t.fact);
            }
        });
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a DerivationTree)) {
        f(self);
        for p in &self.premises {
            p.walk(f);
        }
    }

    fn render(&self, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let how = match &self.justification {
            Justification::Asserted => "asserted".to_string(),
            Justification::Domain => "named individual".to_string(),
            Justification::Rule { rule, .. } => rule.clone(),
        };
        writeln!(f, "{:indent$}{}  [{how}]", "", self.fact, indent = depth * 2)?;
        for p in &self.premises {
            p.render(depth + 1, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(0, f)
    }
}

pub fn explain(closure: &ClosureABox, fact: &Fact) -> Result<DerivationTree> {
    let (pred, id) = closure.locate(fact).ok_or_else(|| Error::NotDerived(fact.to_string()))?;
    Ok(build(closure, pred, id))
}

fn build(closure: &ClosureABox, pred: usize, id: u32) -> DerivationTree {
    let store = closure.store();
    let rel = &store.relations[pred];
    let fact = closure.to_fact(&store.preds[pred], rel.tuples[id as usize]);
    match &rel.provenance[id as usize] {
        Provenance::Asserted => DerivationTree { fact, justification: Justification::Asserted, premises: Vec::new() },
        Provenance::Domain => DerivationTree { fact, justification: Justification::Domain, premises: Vec::new() },
        Provenance::Derived { rule, premises } => {
            let r = &closure.rules[*rule as usize];
            DerivationTree {
                fact,
                justification: Justification::Rule { origin: r.origin, rule: r.to_string() },
                premises: premises.iter().map(|&(p, t)| build(closure, p as usize, t)).collect(),
            }
        }
    }
}
