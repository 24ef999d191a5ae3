//! Shared test support: a seeded random KB generator and a naive
//! model-checking fixpoint that works on concept expressions directly.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use forensic_dl::datagen::Xorshift64Star;
use forensic_dl::model::{Atom, Axiom, ConceptExpr, KnowledgeBase, RoleExpr, Rule, Term};
use forensic_dl::reasoner::Fact;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture")
}

/// Shape limits for random knowledge bases.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub classes: usize,
    pub roles: usize,
    pub individuals: usize,
    pub axioms: usize,
    pub rules: usize,
    pub assertions: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { classes: 6, roles: 4, individuals: 12, axioms: 10, rules: 8, assertions: 24 }
    }
}

pub struct RandomKb {
    pub kb: KnowledgeBase,
    pub assertions: Vec<Axiom>,
}

struct Gen<'a> {
    rng: Xorshift64Star,
    shape: &'a Shape,
}

impl Gen<'_> {
    fn class(&mut self) -> String {
        format!("C{}", self.rng.below(self.shape.classes))
    }

    fn role(&mut self) -> String {
        format!("r{}", self.rng.below(self.shape.roles))
    }

    fn individual(&mut self) -> String {
        format!("a{}", self.rng.below(self.shape.individuals))
    }

    fn role_expr(&mut self) -> RoleExpr {
        let r = RoleExpr::atomic(self.role());
        if self.rng.below(4) == 0 {
            RoleExpr::inverse(r)
        } else {
            r
        }
    }

    fn lhs(&mut self, depth: usize) -> ConceptExpr {
        match self.rng.below(if depth == 0 { 2 } else { 5 }) {
            0 => ConceptExpr::atomic(self.class()),
            1 if depth == 0 => ConceptExpr::Top,
            1 | 2 => {
                let r = self.role_expr();
                ConceptExpr::some(r, self.lhs(depth - 1))
            }
            3 => ConceptExpr::and([self.lhs(depth - 1), self.lhs(depth - 1)]),
            _ => ConceptExpr::atomic(self.class()),
        }
    }

    fn rhs(&mut self) -> ConceptExpr {
        if self.rng.below(4) == 0 {
            ConceptExpr::and([ConceptExpr::atomic(self.class()), ConceptExpr::atomic(self.class())])
        } else {
            ConceptExpr::atomic(self.class())
        }
    }

    fn role_axiom(&mut self) -> Axiom {
        let target = self.role();
        match self.rng.below(4) {
            0 => Axiom::transitive(&target),
            1 => Axiom::sub_role(RoleExpr::inverse(RoleExpr::atomic(self.role())), target),
            2 => Axiom::sub_role(
                RoleExpr::compose(vec![RoleExpr::atomic(self.role()), RoleExpr::atomic(self.role())]),
                target,
            ),
            _ => Axiom::sub_role(RoleExpr::atomic(self.role()), target),
        }
    }

    fn var(&mut self, vars: &[&str]) -> Term {
        Term::var(vars[self.rng.below(vars.len())])
    }

    fn rule(&mut self) -> Rule {
        let vars = ["x", "y", "z"];
        let n = 1 + self.rng.below(3);
        let mut body = Vec::new();
        for _ in 0..n {
            if self.rng.below(2) == 0 {
                let c = self.class();
                body.push(Atom::Class(c, self.var(&vars)));
            } else {
                let r = self.role();
                let (a, b) = (self.var(&vars), self.var(&vars));
                body.push(Atom::Object(r, a, b));
            }
        }
        let bound: Vec<&str> = body.iter().flat_map(|a| a.terms()).filter_map(|t| t.as_var()).collect();
        let bound: Vec<&str> = vars.iter().copied().filter(|v| bound.contains(v)).collect();
        let head = if self.rng.below(2) == 0 {
            Atom::Class(self.class(), self.var(&bound))
        } else {
            let r = self.role();
            Atom::Object(r, self.var(&bound), self.var(&bound))
        };
        Rule::new(body, head)
    }
}

/// A Horn KB of GCIs, role inclusions (plain, inverse, transitive,
/// composition) and rules, plus an ABox, all over declared names.
pub fn random_kb(seed: u64, shape: &Shape) -> RandomKb {
    let mut g = Gen { rng: Xorshift64Star::new(seed), shape };
    let mut kb = KnowledgeBase::new();
    for i in 0..shape.classes {
        kb.declare_class(format!("C{i}"));
    }
    for i in 0..shape.roles {
        kb.declare_role(format!("r{i}"));
    }
    for i in 0..shape.individuals {
        kb.declare_individual(format!("a{i}"));
    }
    let n_axioms = g.rng.below(shape.axioms + 1);
    for _ in 0..n_axioms {
        let ax = if g.rng.below(3) == 0 {
            g.role_axiom()
        } else {
            let lhs = g.lhs(2);
            Axiom::gci(lhs, g.rhs())
        };
        kb.add_axiom(ax);
    }
    let n_rules = g.rng.below(shape.rules + 1);
    for _ in 0..n_rules {
        let r = g.rule();
        kb.add_rule(r);
    }
    let mut assertions = Vec::new();
    for _ in 0..shape.assertions {
        if g.rng.below(2) == 0 {
            let (a, c) = (g.individual(), g.class());
            assertions.push(Axiom::member(a, ConceptExpr::atomic(c)));
        } else {
            let (r, a, b) = (g.role(), g.individual(), g.individual());
            assertions.push(Axiom::related(r, a, b));
        }
    }
    RandomKb { kb, assertions }
}

/// Ground facts of a naive fixpoint.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Model {
    pub classes: BTreeSet<(String, String)>,
    pub roles: BTreeSet<(String, String, String)>,
    pub data: BTreeSet<(String, String, String)>,
}

impl Model {
    pub fn facts(&self) -> BTreeSet<Fact> {
        let mut out = BTreeSet::new();
        out.extend(self.classes.iter().map(|(a, c)| Fact::class(a.as_str(), c.as_str())));
        out.extend(self.roles.iter().map(|(a, r, b)| Fact::role(a.as_str(), r.as_str(), b.as_str())));
        out.extend(self.data.iter().map(|(a, p, v)| Fact::data(a.as_str(), p.as_str(), v.as_str())));
        out
    }

    fn related(&self, x: &str, r: &RoleExpr, y: &str) -> bool {
        match r {
            RoleExpr::Atomic(n) => self.roles.contains(&(x.into(), n.clone(), y.into())),
            RoleExpr::Inverse(inner) => self.related(y, inner, x),
            RoleExpr::Compose(_) => unreachable!("compositions only occur in role inclusions"),
        }
    }

    fn holds(&self, x: &str, c: &ConceptExpr, domain: &[String]) -> bool {
        match c {
            ConceptExpr::Top => true,
            ConceptExpr::Atomic(n) => self.classes.contains(&(x.into(), n.clone())),
            ConceptExpr::And(ms) => ms.iter().all(|m| self.holds(x, m, domain)),
            ConceptExpr::Exists(r, f) => domain.iter().any(|y| self.related(x, r, y) && self.holds(y, f, domain)),
            other => panic!("oracle does not evaluate {other}"),
        }
    }

    fn pairs(&self, r: &RoleExpr, domain: &[String]) -> Vec<(String, String)> {
        match r {
            RoleExpr::Compose(parts) => {
                let mut cur: BTreeSet<(String, String)> = self.pairs(&parts[0], domain).into_iter().collect();
                for p in &parts[1..] {
                    let step = self.pairs(p, domain);
                    cur = cur
                        .iter()
                        .flat_map(|(x, z)| step.iter().filter(move |(z2, _)| z2 == z).map(move |(_, y)| (x.clone(), y.clone())))
                        .collect();
                }
                cur.into_iter().collect()
            }
            _ => domain
                .iter()
                .flat_map(|x| domain.iter().filter(move |y| self.related(x, r, y)).map(move |y| (x.clone(), y.clone())))
                .collect(),
        }
    }
}

fn term_value<'a>(t: &'a Term, env: &'a [(&str, String)]) -> &'a str {
    match t {
        Term::Var(v) => env.iter().find(|(n, _)| n == v).map(|(_, x)| x.as_str()).expect("bound variable"),
        Term::Individual(a) | Term::Literal(a) => a,
    }
}

fn atom_holds(m: &Model, a: &Atom, env: &[(&str, String)]) -> bool {
    match a {
        Atom::Class(c, t) => m.classes.contains(&(term_value(t, env).into(), c.clone())),
        Atom::Object(r, s, o) => m.roles.contains(&(term_value(s, env).into(), r.clone(), term_value(o, env).into())),
        Atom::Data(p, s, o) => m.data.contains(&(term_value(s, env).into(), p.clone(), term_value(o, env).into())),
        Atom::SameAs(s, o) => term_value(s, env) == term_value(o, env),
    }
}

/// Naive fixpoint: every round re-checks every axiom and every rule under
/// every variable assignment over the individuals and literals present.
pub fn naive_closure(kb: &KnowledgeBase, assertions: &[Axiom]) -> Model {
    let mut m = Model::default();
    for ax in kb.assertions().chain(assertions) {
        match ax {
            Axiom::ConceptAssertion { individual, concept } => {
                let ConceptExpr::Atomic(c) = concept else { panic!("oracle takes atomic assertions") };
                m.classes.insert((individual.clone(), c.clone()));
            }
            Axiom::RoleAssertion { subject, role, object } => {
                m.roles.insert((subject.clone(), role.clone(), object.clone()));
            }
            Axiom::DataAssertion { subject, property, value } => {
                m.data.insert((subject.clone(), property.clone(), value.clone()));
            }
            _ => {}
        }
    }
    let mut individuals: BTreeSet<String> = BTreeSet::new();
    for (a, _) in &m.classes {
        individuals.insert(a.clone());
    }
    for (a, _, b) in &m.roles {
        individuals.insert(a.clone());
        individuals.insert(b.clone());
    }
    for (a, _, _) in &m.data {
        individuals.insert(a.clone());
    }
    let domain: Vec<String> = individuals.into_iter().collect();
    let mut values: Vec<String> = domain.clone();
    values.extend(m.data.iter().map(|(_, _, v)| v.clone()));
    values.sort();
    values.dedup();

    loop {
        let mut next = m.clone();
        for ax in kb.axioms() {
            match ax {
                Axiom::Gci { lhs, rhs } => {
                    let heads: Vec<&str> = match rhs {
                        ConceptExpr::Atomic(c) => vec![c.as_str()],
                        ConceptExpr::And(ms) => ms.iter().filter_map(|c| c.as_atomic()).collect(),
                        _ => Vec::new(),
                    };
                    for x in &domain {
                        if m.holds(x, lhs, &domain) {
                            for h in &heads {
                                next.classes.insert((x.clone(), h.to_string()));
                            }
                        }
                    }
                }
                Axiom::RoleInclusion { lhs, rhs } => {
                    for (x, y) in m.pairs(lhs, &domain) {
                        next.roles.insert((x, rhs.clone(), y));
                    }
                }
                _ => {}
            }
        }
        for rule in kb.rules() {
            let mut vars: Vec<&str> = rule.body.iter().flat_map(|a| a.terms()).filter_map(Term::as_var).collect();
            vars.sort();
            vars.dedup();
            if values.is_empty() && !vars.is_empty() {
                continue;
            }
            let mut idx = vec![0usize; vars.len()];
            'assign: loop {
                let env: Vec<(&str, String)> = vars.iter().zip(&idx).map(|(v, &i)| (*v, values[i].clone())).collect();
                if rule.body.iter().all(|a| atom_holds(&m, a, &env)) {
                    match &rule.head {
                        Atom::Class(c, t) => {
                            next.classes.insert((term_value(t, &env).into(), c.clone()));
                        }
                        Atom::Object(r, s, o) => {
                            next.roles.insert((term_value(s, &env).into(), r.clone(), term_value(o, &env).into()));
                        }
                        Atom::Data(p, s, o) => {
                            next.data.insert((term_value(s, &env).into(), p.clone(), term_value(o, &env).into()));
                        }
                        Atom::SameAs(..) => {}
                    }
                }
                for slot in idx.iter_mut() {
                    *slot += 1;
                    if *slot < values.len() {
                        continue 'assign;
                    }
                    *slot = 0;
                }
                break;
            }
        }
        if next == m {
            return m;
        }
        m = next;
    }
}

/// Closure facts comparable with [`Model::facts`]: no `Thing` memberships
/// and no violation markers.
pub fn comparable(facts: Vec<Fact>) -> BTreeSet<Fact> {
    facts
        .into_iter()
        .filter(|f| match f {
            Fact::Class { class, .. } => class != "Thing",
            Fact::Violation { .. } => false,
            _ => true,
        })
        .collect()
}
