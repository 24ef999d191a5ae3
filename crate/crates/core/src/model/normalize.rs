//! Compilation of the Horn fragment into range-restricted datalog rules.
//!
//! Supported shapes:
//!
//! * `C ⊑ D` with `C` positive existential (Top, names, `⊓`, `⊔`, `∃r.C`,
//!   `∃r.{a}`) and `D` a conjunction of names, `⊥`, `¬E` (integrity
//!   constraint) or existential restrictions (kept check-only, never
//!   materialized).
//! * Role inclusions with atomic, inverse or chain left-hand sides.
//! * SWRL-style rules; `SameAs` is compiled away by unifying its terms.

use std::collections::BTreeMap;
use std::fmt;

use super::axiom::{Atom, Axiom, Rule, Term};
use super::concept::{ConceptExpr, RoleExpr};
use super::kb::KnowledgeBase;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pred {
    /// Holds for every individual.
    Top,
    Class(String),
    Role(String),
    Data(String),
    /// Integrity violation of the axiom at this index.
    Violation(usize),
}

impl Pred {
    pub fn arity(&self) -> usize {
        match self {
            Pred::Top | Pred::Class(_) | Pred::Violation(_) => 1,
            Pred::Role(_) | Pred::Data(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PTerm {
    Var(u32),
    Individual(String),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PAtom {
    pub pred: Pred,
    pub args: Vec<PTerm>,
}

impl PAtom {
    fn unary(pred: Pred, t: PTerm) -> Self {
        PAtom { pred, args: vec![t] }
    }

    fn binary(pred: Pred, a: PTerm, b: PTerm) -> Self {
        PAtom { pred, args: vec![a, b] }
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.args.iter().filter_map(|t| match t {
            PTerm::Var(v) => Some(*v),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    Axiom(usize),
    Rule(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProgramRule {
    pub head: PAtom,
    pub body: Vec<PAtom>,
    pub origin: Origin,
}

impl ProgramRule {
    pub fn is_range_restricted(&self) -> bool {
        self.head.vars().all(|v| self.body.iter().any(|b| b.vars().any(|w| w == v)))
    }
}

/// An existential right-hand side that is validated but not materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOnly {
    pub axiom: usize,
    pub lhs: ConceptExpr,
    pub rhs: ConceptExpr,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizedProgram {
    pub rules: Vec<ProgramRule>,
    pub check_only: Vec<CheckOnly>,
    /// Rendered source axiom for each integrity constraint.
    pub constraints: BTreeMap<usize, String>,
}

impl NormalizedProgram {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty() && self.check_only.is_empty()
    }

    pub fn rules_from(&self, origin: Origin) -> impl Iterator<Item = &ProgramRule> {
        self.rules.iter().filter(move |r| r.origin == origin)
    }
}

pub fn normalize_kb(kb: &KnowledgeBase) -> Result<NormalizedProgram> {
    let mut program = NormalizedProgram::default();
    for (i, axiom) in kb.axioms().iter().enumerate() {
        normalize_axiom(i, axiom, &mut program)?;
    }
    for (i, rule) in kb.rules().iter().enumerate() {
        program.rules.push(compile_rule(i, rule)?);
    }
    debug_assert!(program.rules.iter().all(ProgramRule::is_range_restricted));
    Ok(program)
}

/// Normalizes a single axiom; used by validation to attribute failures.
pub(crate) fn normalize_axiom(index: usize, axiom: &Axiom, program: &mut NormalizedProgram) -> Result<()> {
    let origin = Origin::Axiom(index);
    match axiom {
        Axiom::Gci { lhs, rhs } => compile_gci(index, axiom, lhs, rhs, program),
        Axiom::Disjoint { a, b } => {
            let lhs = ConceptExpr::and([a.clone(), b.clone()]);
            compile_gci(index, axiom, &lhs, &ConceptExpr::Bottom, program)
        }
        Axiom::RoleInclusion { lhs, rhs } => {
            let mut fresh = 0;
            let x = next_var(&mut fresh);
            let (body, end) = role_path(lhs, x, &mut fresh, axiom)?;
            program.rules.push(ProgramRule {
                head: PAtom::binary(Pred::Role(rhs.clone()), PTerm::Var(x), PTerm::Var(end)),
                body,
                origin,
            });
            Ok(())
        }
        // Assertions are facts, not rules.
        Axiom::ConceptAssertion { .. } | Axiom::RoleAssertion { .. } | Axiom::DataAssertion { .. } => Ok(()),
    }
}

fn unsupported(axiom: &Axiom, construct: impl Into<String>) -> Error {
    Error::UnsupportedConstruct { axiom: axiom.to_string(), construct: construct.into() }
}

fn next_var(fresh: &mut u32) -> u32 {
    let v = *fresh;
    *fresh += 1;
    v
}

/// Body atoms for a role path from `start`; returns the end variable.
fn role_path(role: &RoleExpr, start: u32, fresh: &mut u32, axiom: &Axiom) -> Result<(Vec<PAtom>, u32)> {
    let parts: Vec<&RoleExpr> = match role {
        RoleExpr::Compose(parts) => parts.iter().collect(),
        other => vec![other],
    };
    let mut body = Vec::with_capacity(parts.len());
    let mut cur = start;
    for part in parts {
        let (name, inverse) = part.direction().ok_or_else(|| unsupported(axiom, format!("nested chain {part}")))?;
        let next = next_var(fresh);
        body.push(role_atom(name, inverse, PTerm::Var(cur), PTerm::Var(next)));
        cur = next;
    }
    Ok((body, cur))
}

fn role_atom(name: &str, inverse: bool, from: PTerm, to: PTerm) -> PAtom {
    if inverse {
        PAtom::binary(Pred::Role(name.to_string()), to, from)
    } else {
        PAtom::binary(Pred::Role(name.to_string()), from, to)
    }
}

/// Disjunctive normal form of a positive existential concept evaluated at
/// `v`: each inner vector is one conjunctive body.
pub(crate) fn translate_lhs(c: &ConceptExpr, v: u32, fresh: &mut u32, axiom: &Axiom) -> Result<Vec<Vec<PAtom>>> {
    match c {
        ConceptExpr::Atomic(n) => Ok(vec![vec![PAtom::unary(Pred::Class(n.clone()), PTerm::Var(v))]]),
        ConceptExpr::Top => Ok(vec![vec![PAtom::unary(Pred::Top, PTerm::Var(v))]]),
        ConceptExpr::Bottom => Ok(Vec::new()),
        ConceptExpr::And(ms) => {
            let mut acc: Vec<Vec<PAtom>> = vec![Vec::new()];
            for m in ms {
                let alts = translate_lhs(m, v, fresh, axiom)?;
                let mut next = Vec::with_capacity(acc.len() * alts.len());
                for prefix in &acc {
                    for alt in &alts {
                        let mut conj = prefix.clone();
                        conj.extend(alt.iter().cloned());
                        next.push(conj);
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        ConceptExpr::Or(ms) => {
            let mut out = Vec::new();
            for m in ms {
                out.extend(translate_lhs(m, v, fresh, axiom)?);
            }
            Ok(out)
        }
        ConceptExpr::Exists(role, filler) => {
            let (name, inverse) =
                role.direction().ok_or_else(|| unsupported(axiom, format!("role chain {role} in a restriction")))?;
            if let ConceptExpr::Nominal(a) = filler.as_ref() {
                return Ok(vec![vec![role_atom(name, inverse, PTerm::Var(v), PTerm::Individual(a.clone()))]]);
            }
            let w = next_var(fresh);
            let edge = role_atom(name, inverse, PTerm::Var(v), PTerm::Var(w));
            let inner = translate_lhs(filler, w, fresh, axiom)?;
            Ok(inner
                .into_iter()
                .map(|conj| std::iter::once(edge.clone()).chain(conj).collect())
                .collect())
        }
        ConceptExpr::Not(_) => Err(unsupported(axiom, format!("negation {c} on the left-hand side"))),
        ConceptExpr::Forall(..) => Err(unsupported(axiom, format!("universal restriction {c} on the left-hand side"))),
        ConceptExpr::Nominal(a) => Err(unsupported(axiom, format!("bare nominal {{{a}}}"))),
    }
}

enum Head {
    Class(String),
    Violation(Vec<Vec<PAtom>>),
    CheckOnly(ConceptExpr),
}

fn rhs_heads(rhs: &ConceptExpr, fresh: &mut u32, axiom: &Axiom, out: &mut Vec<Head>) -> Result<()> {
    match rhs {
        ConceptExpr::Atomic(n) => out.push(Head::Class(n.clone())),
        ConceptExpr::Top => {}
        ConceptExpr::Bottom => out.push(Head::Violation(vec![Vec::new()])),
        ConceptExpr::And(ms) => {
            for m in ms {
                rhs_heads(m, fresh, axiom, out)?;
            }
        }
        ConceptExpr::Not(inner) => {
            let excluded = translate_lhs(inner, 0, fresh, axiom)
                .map_err(|_| unsupported(axiom, format!("negation of non-positive concept {inner}")))?;
            out.push(Head::Violation(excluded));
        }
        ConceptExpr::Exists(..) => out.push(Head::CheckOnly(rhs.clone())),
        ConceptExpr::Or(_) => return Err(unsupported(axiom, format!("disjunction {rhs} on the right-hand side"))),
        ConceptExpr::Forall(..) => {
            return Err(unsupported(axiom, format!("universal restriction {rhs} on the right-hand side")))
        }
        ConceptExpr::Nominal(a) => return Err(unsupported(axiom, format!("bare nominal {{{a}}}"))),
    }
    Ok(())
}

fn compile_gci(
    index: usize,
    axiom: &Axiom,
    lhs: &ConceptExpr,
    rhs: &ConceptExpr,
    program: &mut NormalizedProgram,
) -> Result<()> {
    let mut fresh = 1;
    let bodies = translate_lhs(lhs, 0, &mut fresh, axiom)?;
    let mut heads = Vec::new();
    rhs_heads(rhs, &mut fresh, axiom, &mut heads)?;
    let origin = Origin::Axiom(index);
    for head in heads {
        match head {
            Head::Class(name) => {
                for body in &bodies {
                    program.rules.push(ProgramRule {
                        head: PAtom::unary(Pred::Class(name.clone()), PTerm::Var(0)),
                        body: body.clone(),
                        origin,
                    });
                }
            }
            Head::Violation(extra) => {
                program.constraints.insert(index, axiom.to_string());
                for body in &bodies {
                    for more in &extra {
                        let mut full = body.clone();
                        full.extend(more.iter().cloned());
                        program.rules.push(ProgramRule {
                            head: PAtom::unary(Pred::Violation(index), PTerm::Var(0)),
                            body: full,
                            origin,
                        });
                    }
                }
            }
            Head::CheckOnly(expr) => program.check_only.push(CheckOnly { axiom: index, lhs: lhs.clone(), rhs: expr }),
        }
    }
    Ok(())
}

pub(crate) fn compile_rule(index: usize, rule: &Rule) -> Result<ProgramRule> {
    if let Some(v) = rule.unsafe_variables().first() {
        return Err(Error::UnsafeRule { rule: rule.to_string(), variable: v.to_string() });
    }
    if !matches!(rule.head, Atom::Class(..) | Atom::Object(..)) {
        return Err(Error::UnsupportedConstruct {
            axiom: rule.to_string(),
            construct: format!("rule head {}", rule.head),
        });
    }

    // SameAs(u, w) is resolved by substituting w := u throughout.
    let mut subst: BTreeMap<String, Term> = BTreeMap::new();
    fn resolve(t: &Term, subst: &BTreeMap<String, Term>) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = &cur {
            match subst.get(v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }
    let mut contradictory = false;
    for atom in &rule.body {
        if let Atom::SameAs(a, b) = atom {
            let (a, b) = (resolve(a, &subst), resolve(b, &subst));
            match (&a, &b) {
                _ if a == b => {}
                (_, Term::Var(w)) => {
                    subst.insert(w.clone(), a.clone());
                }
                (Term::Var(u), _) => {
                    subst.insert(u.clone(), b.clone());
                }
                _ => contradictory = true,
            }
        }
    }

    let mut vars: Vec<String> = Vec::new();
    let mut term = |t: &Term| -> PTerm {
        match resolve(t, &subst) {
            Term::Var(v) => {
                let idx = vars.iter().position(|x| *x == v).unwrap_or_else(|| {
                    vars.push(v.clone());
                    vars.len() - 1
                });
                PTerm::Var(idx as u32)
            }
            Term::Individual(a) => PTerm::Individual(a),
            Term::Literal(s) => PTerm::Literal(s),
        }
    };
    let mut body = Vec::new();
    for atom in &rule.body {
        match atom {
            Atom::Class(c, t) => body.push(PAtom::unary(Pred::Class(c.clone()), term(t))),
            Atom::Object(r, a, b) => body.push(PAtom::binary(Pred::Role(r.clone()), term(a), term(b))),
            Atom::Data(p, a, b) => body.push(PAtom::binary(Pred::Data(p.clone()), term(a), term(b))),
            Atom::SameAs(..) => {}
        }
    }
    if contradictory {
        // Two distinct constants can never be equal; keep the rule inert.
        body.push(PAtom::unary(Pred::Class(String::new()), PTerm::Individual(String::new())));
    }
    let head = match &rule.head {
        Atom::Class(c, t) => PAtom::unary(Pred::Class(c.clone()), term(t)),
        Atom::Object(r, a, b) => PAtom::binary(Pred::Role(r.clone()), term(a), term(b)),
        _ => unreachable!(),
    };
    Ok(ProgramRule { head, body, origin: Origin::Rule(index) })
}

fn var_name(v: u32) -> String {
    match v {
        0 => "x".into(),
        1 => "y".into(),
        2 => "z".into(),
        n => format!("v{n}"),
    }
}

impl fmt::Display for PTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PTerm::Var(v) => f.write_str(&var_name(*v)),
            PTerm::Individual(a) => f.write_str(a),
            PTerm::Literal(s) => f.write_str(&super::axiom::quote(s)),
        }
    }
}

impl fmt::Display for PAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pred {
            Pred::Top => f.write_str("Thing")?,
            Pred::Class(n) | Pred::Role(n) | Pred::Data(n) => f.write_str(n)?,
            Pred::Violation(i) => write!(f, "violation#{i}")?,
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for ProgramRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ←", self.head)?;
        for (i, b) in self.body.iter().enumerate() {
            write!(f, "{}{b}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}
