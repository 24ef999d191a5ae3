use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use super::engine::Value;
use super::ClosureABox;
use crate::error::{Error, Result};
use crate::model::{ConceptExpr, Pred};

/// Accepts concepts built from Thing, names, `and`, `or` and `some`/`value`
/// over atomic or inverse roles.
pub fn check_query(q: &ConceptExpr) -> Result<()> {
    let ok = match q {
        ConceptExpr::Atomic(_) | ConceptExpr::Top => true,
        ConceptExpr::And(ms) | ConceptExpr::Or(ms) => return ms.iter().try_for_each(check_query),
        ConceptExpr::Exists(r, f) => {
            if r.direction().is_none() {
                false
            } else if matches!(**f, ConceptExpr::Nominal(_)) {
                true
            } else {
                return check_query(f).map_err(|_| Error::UnsupportedQuery(q.to_string()));
            }
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedQuery(q.to_string()))
    }
}

pub fn instance_of(closure: &ClosureABox, a: &str, q: &ConceptExpr) -> Result<bool> {
    check_query(q)?;
    Ok(match closure.store().individuals.get(a) {
        Some(id) => matches(closure, id, q),
        None => matches!(q, ConceptExpr::Top),
    })
}

fn matches(closure: &ClosureABox, id: u32, q: &ConceptExpr) -> bool {
    let store = closure.store();
    let v = Value::Ind(id);
    match q {
        ConceptExpr::Top => true,
        ConceptExpr::Atomic(n) => store.relation(&Pred::Class(n.clone())).is_some_and(|r| r.find(&[v, v]).is_some()),
        ConceptExpr::And(ms) => ms.iter().all(|m| matches(closure, id, m)),
        ConceptExpr::Or(ms) => ms.iter().any(|m| matches(closure, id, m)),
        ConceptExpr::Exists(r, f) => {
            let (name, inverse) = r.direction().expect("checked query");
            let Some(rel) = store.relation(&Pred::Role(name.to_string())) else {
                return false;
            };
            let ids = if inverse { rel.with_second(v) } else { rel.with_first(v) };
            ids.iter().any(|&t| {
                let other = rel.tuples[t as usize][if inverse { 0 } else { 1 }];
                match (other, f.as_ref()) {
                    (Value::Ind(o), ConceptExpr::Nominal(c)) => store.individuals.name(o) == c,
                    (Value::Ind(o), filler) => matches(closure, o, filler),
                    (Value::Lit(_), _) => false,
                }
            })
        }
        _ => false,
    }
}

pub fn all_instances(closure: &ClosureABox, q: &ConceptExpr) -> Result<BTreeSet<String>> {
    let ext = closure.extension(q)?;
    Ok(ext.ones().map(|i| closure.individual_name(i).to_string()).collect())
}

impl ClosureABox {
    /// Bitset over individual ids of every individual matching `q`.
    pub fn extension(&self, q: &ConceptExpr) -> Result<FixedBitSet> {
        check_query(q)?;
        Ok(self.ext(q))
    }

    /// Bitset of the individuals in a named class.
    pub fn class_extension(&self, class: &str) -> FixedBitSet {
        self.ext(&ConceptExpr::atomic(class))
    }

    fn ext(&self, q: &ConceptExpr) -> FixedBitSet {
        let store = self.store();
        let n = store.individuals.len();
        let mut out = FixedBitSet::with_capacity(n);
        match q {
            ConceptExpr::Top => out.insert_range(..),
            ConceptExpr::Atomic(c) => {
                if let Some(rel) = store.relation(&Pred::Class(c.clone())) {
                    for t in &rel.tuples {
                        if let Value::Ind(i) = t[0] {
                            out.insert(i as usize);
                        }
                    }
                }
            }
            ConceptExpr::And(ms) => {
                out.insert_range(..);
                for m in ms {
                    out.intersect_with(&self.ext(m));
                }
            }
            ConceptExpr::Or(ms) => {
                for m in ms {
                    out.union_with(&self.ext(m));
                }
            }
            ConceptExpr::Exists(r, f) => {
                let (name, inverse) = r.direction().expect("checked query");
                let Some(rel) = store.relation(&Pred::Role(name.to_string())) else {
                    return out;
                };
                let (from, to) = if inverse { (1, 0) } else { (0, 1) };
                match f.as_ref() {
                    ConceptExpr::Nominal(c) => {
                        if let Some(cid) = store.individuals.get(c) {
                            let ids = if inverse { rel.with_first(Value::Ind(cid)) } else { rel.with_second(Value::Ind(cid)) };
                            for &t in ids {
                                if let Value::Ind(s) = rel.tuples[t as usize][from] {
                                    out.insert(s as usize);
                                }
                            }
                        }
                    }
                    filler => {
                        let inner = self.ext(filler);
                        for t in &rel.tuples {
                            if let (Value::Ind(s), Value::Ind(o)) = (t[from], t[to]) {
                                if inner.contains(o as usize) {
                                    out.insert(s as usize);
                                }
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}
