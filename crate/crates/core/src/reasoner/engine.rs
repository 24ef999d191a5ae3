//! Semi-naive bottom-up evaluation of a [`NormalizedProgram`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{NormalizedProgram, PAtom, PTerm, Pred, ProgramRule};

pub const DEFAULT_FACT_CAP: usize = 10_000_000;
pub const FACT_CAP_ENV: &str = "FORENSIC_DL_FACT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaterializeOptions {
    /// Maximum number of facts (asserted plus derived) in a closure.
    pub fact_cap: usize,
}

impl Default for MaterializeOptions {
    fn default() -> Self {
        MaterializeOptions { fact_cap: DEFAULT_FACT_CAP }
    }
}

impl MaterializeOptions {
    /// Default options, with the cap overridden by `FORENSIC_DL_FACT_CAP`
    /// when it holds a valid number.
    pub fn from_env() -> Self {
        let fact_cap = std::env::var(FACT_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_FACT_CAP);
        MaterializeOptions { fact_cap }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Value {
    Ind(u32),
    Lit(u32),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    pub fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(s.to_string());
        self.ids.insert(s.to_string(), id);
        id
    }

    pub fn get(&self, s: &str) -> Option<u32> {
        self.ids.get(s).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
}

/// How a stored tuple entered the closure. Only the first derivation is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Provenance {
    Asserted,
    /// `Thing(a)` for a named individual.
    Domain,
    Derived { rule: u32, premises: Box<[(u32, u32)]> },
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Relation {
    pub tuples: Vec<[Value; 2]>,
    pub provenance: Vec<Provenance>,
    set: HashMap<[Value; 2], u32>,
    by_first: HashMap<Value, Vec<u32>>,
    by_second: HashMap<Value, Vec<u32>>,
    binary: bool,
}

impl Relation {
    fn new(binary: bool) -> Self {
        Relation { binary, ..Default::default() }
    }

    pub fn find(&self, t: &[Value; 2]) -> Option<u32> {
        self.set.get(t).copied()
    }

    pub fn with_first(&self, v: Value) -> &[u32] {
        self.by_first.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn with_second(&self, v: Value) -> &[u32] {
        if self.binary {
            self.by_second.get(&v).map(Vec::as_slice).unwrap_or(&[])
        } else {
            self.with_first(v)
        }
    }

    fn insert(&mut self, t: [Value; 2], prov: Provenance) -> bool {
        if self.set.contains_key(&t) {
            return false;
        }
        let id = self.tuples.len() as u32;
        self.tuples.push(t);
        self.provenance.push(prov);
        self.set.insert(t, id);
        self.by_first.entry(t[0]).or_default().push(id);
        if self.binary {
            self.by_second.entry(t[1]).or_default().push(id);
        }
        true
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Var(u32),
    Const(Value),
}

#[derive(Debug, Clone)]
struct CompiledRule {
    head_pred: usize,
    head: [Slot; 2],
    body: Vec<(usize, [Slot; 2])>,
    nvars: usize,
    /// Join order for each choice of delta position (the delta atom first).
    plans: Vec<Vec<usize>>,
}

/// Predicate/value tables plus every stored tuple.
#[derive(Debug, Clone, Default)]
pub(crate) struct Store {
    pub individuals: Interner,
    pub literals: Interner,
    pub preds: Vec<Pred>,
    pub pred_ids: HashMap<Pred, usize>,
    pub relations: Vec<Relation>,
    pub total: usize,
}

impl Store {
    pub fn pred_id(&mut self, p: &Pred) -> usize {
        if let Some(&id) = self.pred_ids.get(p) {
            return id;
        }
        let id = self.preds.len();
        self.preds.push(p.clone());
        self.pred_ids.insert(p.clone(), id);
        self.relations.push(Relation::new(p.arity() == 2));
        id
    }

    pub fn relation(&self, p: &Pred) -> Option<&Relation> {
        self.pred_ids.get(p).map(|&i| &self.relations[i])
    }

    fn constant(&mut self, t: &PTerm) -> Option<Value> {
        match t {
            PTerm::Var(_) => None,
            PTerm::Individual(a) => Some(Value::Ind(self.individuals.intern(a))),
            PTerm::Literal(s) => Some(Value::Lit(self.literals.intern(s))),
        }
    }

    fn slot(&mut self, t: &PTerm) -> Slot {
        match t {
            PTerm::Var(v) => Slot::Var(*v),
            other => Slot::Const(self.constant(other).unwrap()),
        }
    }

    fn slots(&mut self, atom: &PAtom) -> [Slot; 2] {
        let a = self.slot(&atom.args[0]);
        let b = if atom.args.len() > 1 { self.slot(&atom.args[1]) } else { a };
        [a, b]
    }

    fn insert(&mut self, pred: usize, t: [Value; 2], prov: Provenance, cap: usize) -> Result<bool> {
        if self.relations[pred].insert(t, prov) {
            self.total += 1;
            if self.total > cap {
                return Err(Error::ResourceLimit { cap });
            }
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn render_value(&self, v: Value) -> &str {
        match v {
            Value::Ind(i) => self.individuals.name(i),
            Value::Lit(i) => self.literals.name(i),
        }
    }
}

fn plan(body: &[(usize, [Slot; 2])], first: usize) -> Vec<usize> {
    let mut order = vec![first];
    let mut bound: Vec<u32> = Vec::new();
    let bind = |slots: &[Slot; 2], bound: &mut Vec<u32>| {
        for s in slots {
            if let Slot::Var(v) = s {
                if !bound.contains(v) {
                    bound.push(*v);
                }
            }
        }
    };
    bind(&body[first].1, &mut bound);
    let mut rest: Vec<usize> = (0..body.len()).filter(|&i| i != first).collect();
    while !rest.is_empty() {
        let pick = rest
            .iter()
            .position(|&i| {
                body[i].1.iter().any(|s| match s {
                    Slot::Var(v) => bound.contains(v),
                    Slot::Const(_) => true,
                })
            })
            .unwrap_or(0);
        let i = rest.remove(pick);
        bind(&body[i].1, &mut bound);
        order.push(i);
    }
    order
}

struct Ranges<'a> {
    /// Per body position: (lo, hi) tuple-id window.
    windows: &'a [(u32, u32)],
}

/// A head tuple with the `(predicate, tuple)` ids of its premises.
type Derived = ([Value; 2], Box<[(u32, u32)]>);

/// Semi-naive fixpoint. `facts` are the seed tuples; the store must already
/// contain their predicates and values.
pub(crate) fn run(
    store: &mut Store,
    program: &NormalizedProgram,
    seeds: Vec<(usize, [Value; 2])>,
    cap: usize,
) -> Result<()> {
    let top = store.pred_id(&Pred::Top);
    let rules: Vec<CompiledRule> = program.rules.iter().map(|r| compile(store, r)).collect();

    for (pred, t) in seeds {
        store.insert(pred, t, Provenance::Asserted, cap)?;
    }
    let domain: Vec<u32> = (0..store.individuals.len() as u32).collect();
    for i in domain {
        let v = Value::Ind(i);
        store.insert(top, [v, v], Provenance::Domain, cap)?;
    }

    let npreds = store.relations.len();
    let mut old = vec![0u32; npreds];
    let mut new: Vec<u32> = store.relations.iter().map(|r| r.len() as u32).collect();
    let mut out: Vec<Derived> = Vec::new();
    loop {
        let mut any = false;
        for (ri, rule) in rules.iter().enumerate() {
            for (pos, &(pred, _)) in rule.body.iter().enumerate() {
                if old[pred] == new[pred] {
                    continue;
                }
                let windows: Vec<(u32, u32)> = rule
                    .body
                    .iter()
                    .enumerate()
                    .map(|(j, &(p, _))| match j.cmp(&pos) {
                        std::cmp::Ordering::Less => (0, old[p]),
                        std::cmp::Ordering::Equal => (old[p], new[p]),
                        std::cmp::Ordering::Greater => (0, new[p]),
                    })
                    .collect();
                let mut binding = vec![None; rule.nvars];
                let mut premises = vec![(0u32, 0u32); rule.body.len()];
                join(store, rule, &rule.plans[pos], 0, &Ranges { windows: &windows }, &mut binding, &mut premises, &mut out);
                for (t, prem) in out.drain(..) {
                    if store.insert(rule.head_pred, t, Provenance::Derived { rule: ri as u32, premises: prem }, cap)? {
                        any = true;
                    }
                }
            }
        }
        for p in 0..npreds {
            old[p] = new[p];
            new[p] = store.relations[p].len() as u32;
        }
        if !any {
            break;
        }
    }
    Ok(())
}

fn compile(store: &mut Store, rule: &ProgramRule) -> CompiledRule {
    let head_pred = store.pred_id(&rule.head.pred);
    let head = store.slots(&rule.head);
    let body: Vec<(usize, [Slot; 2])> = rule.body.iter().map(|a| (store.pred_id(&a.pred), store.slots(a))).collect();
    let nvars = rule
        .body
        .iter()
        .chain(std::iter::once(&rule.head))
        .flat_map(|a| a.vars().collect::<Vec<_>>())
        .max()
        .map_or(0, |m| m as usize + 1);
    let plans = (0..body.len()).map(|i| plan(&body, i)).collect();
    CompiledRule { head_pred, head, body, nvars, plans }
}

fn resolve(s: Slot, binding: &[Option<Value>]) -> Option<Value> {
    match s {
        Slot::Const(v) => Some(v),
        Slot::Var(v) => binding[v as usize],
    }
}

#[allow(clippy::too_many_arguments)]
fn join(
    store: &Store,
    rule: &CompiledRule,
    order: &[usize],
    step: usize,
    ranges: &Ranges<'_>,
    binding: &mut Vec<Option<Value>>,
    premises: &mut Vec<(u32, u32)>,
    out: &mut Vec<Derived>,
) {
    if step == order.len() {
        let h0 = resolve(rule.head[0], binding).expect("range-restricted head");
        let h1 = resolve(rule.head[1], binding).expect("range-restricted head");
        out.push(([h0, h1], premises.clone().into_boxed_slice()));
        return;
    }
    let pos = order[step];
    let (pred, slots) = rule.body[pos];
    let rel = &store.relations[pred];
    let (lo, hi) = ranges.windows[pos];
    if lo >= hi {
        return;
    }
    let b0 = resolve(slots[0], binding);
    let b1 = resolve(slots[1], binding);

    let mut visit = |id: u32, binding: &mut Vec<Option<Value>>, premises: &mut Vec<(u32, u32)>| {
        let t = rel.tuples[id as usize];
        let mut assign: [Option<(u32, Value)>; 2] = [None, None];
        for k in 0..2 {
            match slots[k] {
                Slot::Const(v) => {
                    if t[k] != v {
                        return;
                    }
                }
                Slot::Var(v) => {
                    let current = binding[v as usize]
                        .or_else(|| assign.iter().flatten().find(|(x, _)| *x == v).map(|&(_, val)| val));
                    match current {
                        Some(b) if b != t[k] => return,
                        Some(_) => {}
                        None => assign[k] = Some((v, t[k])),
                    }
                }
            }
        }
        for &(v, val) in assign.iter().flatten() {
            binding[v as usize] = Some(val);
        }
        premises[pos] = (pred as u32, id);
        join(store, rule, order, step + 1, ranges, binding, premises, out);
        for &(v, _) in assign.iter().flatten() {
            binding[v as usize] = None;
        }
    };

    let ids: Option<&[u32]> = match (b0, b1) {
        (Some(v), _) => Some(rel.with_first(v)),
        (None, Some(v)) => Some(rel.with_second(v)),
        (None, None) => None,
    };
    match ids {
        Some(ids) => {
            let start = ids.partition_point(|&i| i < lo);
            let end = ids.partition_point(|&i| i < hi);
            for &id in &ids[start..end] {
                visit(id, binding, premises);
            }
        }
        None => {
            for id in lo..hi {
                visit(id, binding, premises);
            }
        }
    }
}
