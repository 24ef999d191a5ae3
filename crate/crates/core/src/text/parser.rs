use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex_line, LexedLine, Spanned, Tok};
use super::{Diagnostic, Severity, SourceDocument};
use crate::error::{Error, Result};
use crate::model::{Atom, Axiom, ConceptExpr, Cumulativity, EventTraits, KnowledgeBase, RoleExpr, Rule, Sign, Term};

/// Result of a lenient parse: the knowledge base built from every
/// well-formed statement, the source line of each axiom and rule, and all
/// diagnostics.
#[derive(Debug, Clone, Default)]
pub struct ParseOutcome {
    pub kb: KnowledgeBase,
    pub axiom_lines: Vec<usize>,
    pub rule_lines: Vec<usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseOutcome {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

/// Parses a knowledge base, failing if any error diagnostic is produced.
pub fn parse_kb(doc: &SourceDocument) -> Result<KnowledgeBase> {
    let outcome = parse_kb_lenient(doc);
    if outcome.has_errors() {
        return Err(Error::Parse { origin: doc.origin.clone(), diagnostics: outcome.diagnostics });
    }
    Ok(outcome.kb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RefKind {
    Class,
    Role,
    Individual,
    DataProp,
}

impl RefKind {
    fn noun(self) -> &'static str {
        match self {
            RefKind::Class => "class",
            RefKind::Role => "role",
            RefKind::Individual => "individual",
            RefKind::DataProp => "data property",
        }
    }
}

struct NameRef {
    kind: RefKind,
    name: String,
    line: usize,
    col: usize,
}

struct PendingAtom {
    name: String,
    line: usize,
    col: usize,
    terms: Vec<Term>,
}

struct PendingRule {
    line: usize,
    body: Vec<PendingAtom>,
    head: PendingAtom,
}

type PResult<T> = std::result::Result<T, (usize, String)>;

struct Cursor<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    width: usize,
    refs: &'a mut Vec<NameRef>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    /// Column of the next token, or the last character of the line.
    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.width.max(1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err((self.col(), msg.into()))
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {}", t.describe())),
            None => self.err(format!("expected {wanted}, found end of line")),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<(String, usize)> {
        match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(s), col }) => {
                let out = (s.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => self.unexpected(wanted),
        }
    }

    fn name(&mut self, kind: RefKind) -> PResult<String> {
        let (name, col) = self.ident(kind.noun())?;
        if kind == RefKind::Class && (name == "Thing" || name == "Nothing") {
            return Err((col, format!("`{name}` is reserved and cannot be used as a class name")));
        }
        self.refs.push(NameRef { kind, name: name.clone(), line: self.line, col });
        Ok(name)
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            return self.unexpected("end of statement");
        }
        Ok(())
    }

    fn concept(&mut self) -> PResult<ConceptExpr> {
        match self.peek() {
            Some(Tok::Ident(n)) if n == "Thing" => {
                self.pos += 1;
                Ok(ConceptExpr::Top)
            }
            Some(Tok::Ident(n)) if n == "Nothing" => {
                self.pos += 1;
                Ok(ConceptExpr::Bottom)
            }
            Some(Tok::Ident(_)) => Ok(ConceptExpr::Atomic(self.name(RefKind::Class)?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let (op, op_col) = self.ident("concept constructor")?;
                let c = match op.as_str() {
                    "and" | "or" => {
                        let mut members = Vec::new();
                        while self.peek() != Some(&Tok::RParen) {
                            if self.peek().is_none() {
                                return self.unexpected("`)`");
                            }
                            members.push(self.concept()?);
                        }
                        if members.is_empty() {
                            return Err((op_col, format!("`{op}` needs at least one operand")));
                        }
                        if op == "and" {
                            ConceptExpr::and(members)
                        } else {
                            ConceptExpr::or(members)
                        }
                    }
                    "not" => ConceptExpr::complement(self.concept()?),
                    "some" | "all" => {
                        let role = self.restriction_role()?;
                        let filler = self.concept()?;
                        if op == "some" {
                            ConceptExpr::some(role, filler)
                        } else {
                            ConceptExpr::all(role, filler)
                        }
                    }
                    "value" => {
                        let role = self.restriction_role()?;
                        ConceptExpr::value(role, self.name(RefKind::Individual)?)
                    }
                    other => return Err((op_col, format!("unknown concept constructor `{other}`"))),
                };
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            _ => self.unexpected("concept"),
        }
    }

    fn restriction_role(&mut self) -> PResult<RoleExpr> {
        let col = self.col();
        let role = self.role()?;
        if role.direction().is_none() {
            return Err((col, "role chains are only allowed on the left of SubRole".into()));
        }
        Ok(role)
    }

    fn role(&mut self) -> PResult<RoleExpr> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(RoleExpr::Atomic(self.name(RefKind::Role)?)),
            Some(Tok::LParen) => {
                self.pos += 1;
                let (op, op_col) = self.ident("`inv` or `chain`")?;
                let r = match op.as_str() {
                    "inv" => RoleExpr::inverse(self.role()?),
                    "chain" => {
                        let mut parts = vec![self.role()?];
                        while self.peek() != Some(&Tok::RParen) {
                            if self.peek().is_none() {
                                return self.unexpected("`)`");
                            }
                            parts.push(self.role()?);
                        }
                        if parts.len() < 2 {
                            return Err((op_col, "`chain` needs at least two roles".into()));
                        }
                        RoleExpr::compose(parts)
                    }
                    other => return Err((op_col, format!("unknown role constructor `{other}`"))),
                };
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            _ => self.unexpected("role"),
        }
    }

    fn comma(&mut self) -> PResult<()> {
        self.expect(Tok::Comma)
    }

    fn sign(&mut self, word: &str) -> PResult<Sign> {
        let s = match self.peek() {
            Some(Tok::Plus) => Sign::Plus,
            Some(Tok::Minus) => Sign::Minus,
            _ => return self.unexpected(&format!("`+{word}` or `-{word}`")),
        };
        self.pos += 1;
        let (w, col) = self.ident(&format!("`{word}`"))?;
        if w != word {
            return Err((col, format!("expected `{word}`, found `{w}`")));
        }
        Ok(s)
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::Literal(s))
            }
            Some(Tok::Ident(_)) => Ok(Term::Individual(self.name(RefKind::Individual)?)),
            _ => self.unexpected("variable, individual or string literal"),
        }
    }

    fn atom(&mut self) -> PResult<PendingAtom> {
        let (name, col) = self.ident("rule atom")?;
        self.expect(Tok::LParen)?;
        let mut terms = vec![self.term()?];
        if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        if name == "SameAs" && terms.len() != 2 {
            return Err((col, "SameAs takes two terms".into()));
        }
        Ok(PendingAtom { name, line: self.line, col, terms })
    }
}

enum Statement {
    Declare(RefKind, String),
    Axioms(Vec<Axiom>),
    Traits(String, EventTraits),
    Rule(PendingRule),
    Gold(String, String),
}

fn statement(c: &mut Cursor<'_>, gold_only: bool) -> PResult<Option<Statement>> {
    if c.peek().is_none() {
        return Ok(None);
    }
    let (kw, kw_col) = c.ident("statement keyword")?;
    if kw == "Rule" && !gold_only {
        c.expect(Tok::Colon)?;
        let mut body = vec![c.atom()?];
        while c.peek() == Some(&Tok::Comma) {
            c.pos += 1;
            body.push(c.atom()?);
        }
        c.expect(Tok::Arrow)?;
        let head = c.atom()?;
        c.end()?;
        return Ok(Some(Statement::Rule(PendingRule { line: c.line, body, head })));
    }
    c.expect(Tok::LParen)?;
    let st = match (kw.as_str(), gold_only) {
        ("Gold", true) => {
            let (class, _) = c.ident("class")?;
            c.comma()?;
            let (ind, _) = c.ident("individual")?;
            Statement::Gold(class, ind)
        }
        (_, true) => return Err((kw_col, format!("expected `Gold`, found `{kw}`"))),
        ("Class" | "Role" | "DataProp" | "Individual", _) => {
            let kind = match kw.as_str() {
                "Class" => RefKind::Class,
                "Role" => RefKind::Role,
                "DataProp" => RefKind::DataProp,
                _ => RefKind::Individual,
            };
            let (name, col) = c.ident(kind.noun())?;
            if kind == RefKind::Class && (name == "Thing" || name == "Nothing") {
                return Err((col, format!("`{name}` is reserved and cannot be declared")));
            }
            Statement::Declare(kind, name)
        }
        ("Sub", _) => {
            let lhs = c.concept()?;
            c.comma()?;
            let rhs = c.concept()?;
            Statement::Axioms(vec![Axiom::gci(lhs, rhs)])
        }
        ("Disjoint", _) => {
            let a = c.concept()?;
            c.comma()?;
            let b = c.concept()?;
            Statement::Axioms(vec![Axiom::disjoint(a, b)])
        }
        ("SubRole", _) => {
            let lhs = c.role()?;
            c.comma()?;
            let rhs = c.name(RefKind::Role)?;
            Statement::Axioms(vec![Axiom::sub_role(lhs, rhs)])
        }
        ("Member", _) => {
            let concept = c.concept()?;
            c.comma()?;
            let ind = c.name(RefKind::Individual)?;
            Statement::Axioms(vec![Axiom::member(ind, concept)])
        }
        ("Related", _) => {
            let role = c.name(RefKind::Role)?;
            c.comma()?;
            let a = c.name(RefKind::Individual)?;
            c.comma()?;
            let b = c.name(RefKind::Individual)?;
            Statement::Axioms(vec![Axiom::related(role, a, b)])
        }
        ("Data", _) => {
            let prop = c.name(RefKind::DataProp)?;
            c.comma()?;
            let a = c.name(RefKind::Individual)?;
            c.comma()?;
            let v = match c.peek().cloned() {
                Some(Tok::Str(s)) => {
                    c.pos += 1;
                    s
                }
                _ => return c.unexpected("string literal"),
            };
            Statement::Axioms(vec![Axiom::data(prop, a, v)])
        }
        ("Trans", _) => Statement::Axioms(vec![Axiom::transitive(&c.name(RefKind::Role)?)]),
        ("Sym", _) => Statement::Axioms(vec![Axiom::symmetric(&c.name(RefKind::Role)?)]),
        ("InverseOf", _) => {
            let r = c.name(RefKind::Role)?;
            c.comma()?;
            let s = c.name(RefKind::Role)?;
            Statement::Axioms(Axiom::inverse_of(&r, &s).to_vec())
        }
        ("Traits", _) => {
            let name = c.name(RefKind::Class)?;
            c.comma()?;
            let telic = c.sign("telic")?;
            c.comma()?;
            let stage = c.sign("stage")?;
            c.comma()?;
            let (kw, col) = c.ident("cumulativity")?;
            let cumulative = Cumulativity::from_keyword(&kw).ok_or_else(|| {
                (col, format!("expected `cumulative`, `noncumulative` or `unspecified`, found `{kw}`"))
            })?;
            Statement::Traits(name, EventTraits { telic, stage, cumulative })
        }
        (other, _) => return Err((kw_col, format!("unknown statement `{other}`"))),
    };
    c.expect(Tok::RParen)?;
    c.end()?;
    Ok(Some(st))
}

fn error(line: usize, col: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic { line, column: col, message: message.into(), severity: Severity::Error }
}

fn lex(doc: &SourceDocument) -> Vec<(usize, std::result::Result<LexedLine, Diagnostic>)> {
    doc.text
        .lines()
        .enumerate()
        .map(|(i, text)| (i + 1, lex_line(text).map_err(|e| error(i + 1, e.col, e.message))))
        .collect()
}

pub fn parse_kb_lenient(doc: &SourceDocument) -> ParseOutcome {
    let mut out = ParseOutcome::default();
    let mut refs = Vec::new();
    let mut pending = Vec::new();
    for (line, lexed) in lex(doc) {
        let lexed = match lexed {
            Ok(l) => l,
            Err(d) => {
                out.diagnostics.push(d);
                continue;
            }
        };
        let invented = lexed.comment.as_deref() == Some("INVENTED");
        let mut c = Cursor { toks: &lexed.tokens, pos: 0, line, width: lexed.width, refs: &mut refs };
        let start = c.refs.len();
        match statement(&mut c, false) {
            Ok(None) => {}
            Ok(Some(st)) => match st {
                Statement::Declare(kind, name) => {
                    let d = &mut out.kb.declarations;
                    match kind {
                        RefKind::Class => d.classes.insert(name),
                        RefKind::Role => d.roles.insert(name),
                        RefKind::DataProp => d.data_properties.insert(name),
                        RefKind::Individual => d.individuals.insert(name),
                    };
                }
                Statement::Axioms(axioms) => {
                    for ax in axioms {
                        let before = out.kb.axioms().len();
                        let idx = if invented { out.kb.add_invented_axiom(ax) } else { out.kb.add_axiom(ax) };
                        if idx == before {
                            out.axiom_lines.push(line);
                        }
                    }
                }
                Statement::Traits(name, traits) => {
                    out.kb.traits.insert(name, traits);
                }
                Statement::Rule(rule) => pending.push(rule),
                Statement::Gold(..) => unreachable!(),
            },
            Err((col, message)) => {
                refs.truncate(start);
                out.diagnostics.push(error(line, col, message));
            }
        }
    }

    let decl = out.kb.declarations.clone();
    for r in &refs {
        let known = match r.kind {
            RefKind::Class => decl.classes.contains(&r.name),
            RefKind::Role => decl.roles.contains(&r.name),
            RefKind::DataProp => decl.data_properties.contains(&r.name),
            RefKind::Individual => decl.individuals.contains(&r.name),
        };
        if !known {
            out.diagnostics.push(error(r.line, r.col, format!("undeclared {} `{}`", r.kind.noun(), r.name)));
        }
    }

    for rule in pending {
        let resolve = |a: PendingAtom, diags: &mut Vec<Diagnostic>| -> Option<Atom> {
            let mut terms = a.terms.into_iter();
            let t1 = terms.next().unwrap();
            match terms.next() {
                None => {
                    if !decl.classes.contains(&a.name) {
                        diags.push(error(a.line, a.col, format!("undeclared class `{}`", a.name)));
                        return None;
                    }
                    Some(Atom::Class(a.name, t1))
                }
                Some(t2) if a.name == "SameAs" => Some(Atom::SameAs(t1, t2)),
                Some(t2) if decl.roles.contains(&a.name) => Some(Atom::Object(a.name, t1, t2)),
                Some(t2) if decl.data_properties.contains(&a.name) => Some(Atom::Data(a.name, t1, t2)),
                Some(_) => {
                    diags.push(error(a.line, a.col, format!("undeclared role or data property `{}`", a.name)));
                    None
                }
            }
        };
        let line = rule.line;
        let body: Vec<Option<Atom>> = rule.body.into_iter().map(|a| resolve(a, &mut out.diagnostics)).collect();
        let head = resolve(rule.head, &mut out.diagnostics);
        if let (Some(body), Some(head)) = (body.into_iter().collect::<Option<Vec<_>>>(), head) {
            let before = out.kb.rules().len();
            if out.kb.add_rule(Rule::new(body, head)) == before {
                out.rule_lines.push(line);
            }
        }
    }
    out.diagnostics.sort_by_key(|d| (d.line, d.column));
    out
}

/// Parses `Gold(C, a)` lines into the `true(C)` map.
pub fn parse_gold_labels(doc: &SourceDocument) -> Result<BTreeMap<String, BTreeSet<String>>> {
    let mut gold: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut diagnostics = Vec::new();
    let mut refs = Vec::new();
    for (line, lexed) in lex(doc) {
        let lexed = match lexed {
            Ok(l) => l,
            Err(d) => {
                diagnostics.push(d);
                continue;
            }
        };
        let mut c = Cursor { toks: &lexed.tokens, pos: 0, line, width: lexed.width, refs: &mut refs };
        match statement(&mut c, true) {
            Ok(Some(Statement::Gold(class, ind))) => {
                gold.entry(class).or_default().insert(ind);
            }
            Ok(_) => {}
            Err((col, message)) => diagnostics.push(error(line, col, message)),
        }
    }
    if diagnostics.is_empty() {
        Ok(gold)
    } else {
        Err(Error::Parse { origin: doc.origin.clone(), diagnostics })
    }
}

/// Parses a single concept term; every name must be declared in `kb`.
pub fn parse_concept(text: &str, kb: &KnowledgeBase) -> Result<ConceptExpr> {
    let fail = |d: Vec<Diagnostic>| Error::Parse { origin: "concept".into(), diagnostics: d };
    let lexed = lex_line(text).map_err(|e| fail(vec![error(1, e.col, e.message)]))?;
    let mut refs = Vec::new();
    let mut c = Cursor { toks: &lexed.tokens, pos: 0, line: 1, width: lexed.width, refs: &mut refs };
    let concept = c.concept().and_then(|x| c.end().map(|_| x)).map_err(|(col, m)| fail(vec![error(1, col, m)]))?;
    let d = &kb.declarations;
    let missing: Vec<Diagnostic> = refs
        .iter()
        .filter(|r| match r.kind {
            RefKind::Class => !d.classes.contains(&r.name),
            RefKind::Role => !d.roles.contains(&r.name),
            RefKind::Individual => !d.individuals.contains(&r.name),
            RefKind::DataProp => !d.data_properties.contains(&r.name),
        })
        .map(|r| error(1, r.col, format!("undeclared {} `{}`", r.kind.noun(), r.name)))
        .collect();
    if missing.is_empty() {
        Ok(concept)
    } else {
        Err(fail(missing))
    }
}
