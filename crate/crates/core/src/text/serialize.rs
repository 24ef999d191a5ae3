use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::model::{Axiom, KnowledgeBase, RoleExpr};

pub const HEADER: &str = "# forensic-dl knowledge base\n";

/// Renders a knowledge base in the `.fkb` grammar. Output is deterministic:
/// sorted declarations, traits, axioms in index order, then rules.
pub fn serialize_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::from(HEADER);
    let d = &kb.declarations;
    for (kw, names) in [
        ("Class", &d.classes),
        ("Role", &d.roles),
        ("DataProp", &d.data_properties),
        ("Individual", &d.individuals),
    ] {
        for n in names {
            let _ = writeln!(out, "{kw}({n})");
        }
    }
    for (name, t) in &kb.traits {
        let _ = writeln!(out, "Traits({name}, {t})");
    }
    for (i, ax) in kb.axioms().iter().enumerate() {
        out.push_str(&render_axiom(ax));
        if kb.is_invented(i) {
            out.push_str("  # INVENTED");
        }
        out.push('\n');
    }
    for r in kb.rules() {
        let _ = writeln!(out, "{r}");
    }
    out
}

/// Like `Display`, but prints transitivity and symmetry with their sugar.
fn render_axiom(ax: &Axiom) -> String {
    if let Axiom::RoleInclusion { lhs, rhs } = ax {
        match lhs {
            RoleExpr::Compose(parts)
                if parts.len() == 2 && parts.iter().all(|p| p.as_atomic() == Some(rhs.as_str())) =>
            {
                return format!("Trans({rhs})");
            }
            RoleExpr::Inverse(inner) if inner.as_atomic() == Some(rhs.as_str()) => return format!("Sym({rhs})"),
            _ => {}
        }
    }
    ax.to_string()
}

pub fn serialize_gold(gold: &BTreeMap<String, BTreeSet<String>>) -> String {
    let mut out = String::new();
    for (class, members) in gold {
        for m in members {
            let _ = writeln!(out, "Gold({class}, {m})");
        }
    }
    out
}
