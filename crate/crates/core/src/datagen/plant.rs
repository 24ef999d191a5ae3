use std::collections::{BTreeSet, HashMap, HashSet};

use super::rng::Xorshift64Star;
use crate::error::{Error, Result};
use crate::metrics::TrueMap;
use crate::model::{Axiom, ConceptExpr, KnowledgeBase};
use crate::ontology::{AnnotationRecord, CameraCatalog, CameraEntry, RecordKind};

/// Disjunctive normal form: a list of Or-free expressions.
pub(crate) fn dnf(c: &ConceptExpr) -> Vec<ConceptExpr> {
    match c {
        ConceptExpr::And(ms) => {
            let mut acc: Vec<Vec<ConceptExpr>> = vec![Vec::new()];
            for m in ms {
                let options = dnf(m);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |o| {
                            let mut p = prefix.clone();
                            p.push(o.clone());
                            p
                        })
                    })
                    .collect();
            }
            acc.into_iter().map(ConceptExpr::And).collect()
        }
        ConceptExpr::Or(ms) => ms.iter().flat_map(dnf).collect(),
        ConceptExpr::Exists(r, f) => dnf(f).into_iter().map(|g| ConceptExpr::some(r.clone(), g)).collect(),
        other => vec![other.clone()],
    }
}

/// Or-free bodies of the complex GCIs concluding `class`, in axiom order.
pub(crate) fn class_bodies(kb: &KnowledgeBase, class: &str) -> Vec<ConceptExpr> {
    kb.axioms()
        .iter()
        .filter_map(|ax| match ax {
            Axiom::Gci { lhs, rhs: ConceptExpr::Atomic(c) } if c == class && lhs.as_atomic().is_none() => Some(lhs),
            _ => None,
        })
        .flat_map(dnf)
        .collect()
}

fn top_atomics(c: &ConceptExpr) -> Vec<&str> {
    match c {
        ConceptExpr::Atomic(a) => vec![a.as_str()],
        ConceptExpr::And(ms) => ms.iter().flat_map(top_atomics).collect(),
        _ => Vec::new(),
    }
}

fn has_exists(c: &ConceptExpr) -> bool {
    match c {
        ConceptExpr::Exists(..) => true,
        ConceptExpr::And(ms) => ms.iter().any(has_exists),
        _ => false,
    }
}

/// The root-level part of a body: its top-level names only.
pub(crate) fn root_only(c: &ConceptExpr) -> ConceptExpr {
    ConceptExpr::and(top_atomics(c).into_iter().map(ConceptExpr::atomic))
}

#[derive(Debug)]
struct Pending {
    kind: RecordKind,
    id: String,
    types: Vec<String>,
    links: Vec<(String, String)>,
    data: Vec<(String, String)>,
    labels: Vec<String>,
    street: Option<String>,
}

impl Pending {
    fn add_type(&mut self, t: &str) {
        if !self.types.iter().any(|x| x == t) {
            self.types.push(t.to_string());
        }
    }
}

/// Shared generation state: emitted records, gold labels, matched-slot
/// accounting and the helper memo.
pub(crate) struct Builder<'a> {
    kb: &'a KnowledgeBase,
    pub rng: Xorshift64Star,
    pub records: Vec<AnnotationRecord>,
    pub gold: TrueMap,
    pub catalog: CameraCatalog,
    resources: Vec<String>,
    counter: usize,
    inverses: HashSet<(String, String)>,
    perdurant: HashMap<String, bool>,
    /// Classes whose memberships are labeled and planted when they occur
    /// inside a body.
    labeled: BTreeSet<String>,
    bodies: HashMap<String, Vec<ConceptExpr>>,
    cursor: HashMap<String, usize>,
    pub used: HashMap<String, usize>,
    pub quota: HashMap<String, usize>,
    helpers: HashMap<String, String>,
    streets: Vec<String>,
    next_street: usize,
}

pub(crate) const PERDURANT_DECOY: &str = "Gathering";
pub(crate) const ENDURANT_DECOY: &str = "Debris";
const LOCATED_SAME_AS: &str = "locatedSameAs";
const PART: &str = "part";
const MAX_DEPTH: usize = 8;

impl<'a> Builder<'a> {
    pub fn new(kb: &'a KnowledgeBase, seed: u64, labeled: BTreeSet<String>, streets: Vec<String>) -> Self {
        let mut inverses = HashSet::new();
        for (r, s) in kb.inverse_pairs() {
            inverses.insert((s.clone(), r.clone()));
            inverses.insert((r, s));
        }
        let bodies = labeled.iter().map(|c| (c.clone(), class_bodies(kb, c))).collect();
        Builder {
            kb,
            rng: Xorshift64Star::new(seed),
            records: Vec::new(),
            gold: TrueMap::new(),
            catalog: CameraCatalog::default(),
            resources: Vec::new(),
            counter: 0,
            inverses,
            perdurant: HashMap::new(),
            labeled,
            bodies,
            cursor: HashMap::new(),
            used: HashMap::new(),
            quota: HashMap::new(),
            helpers: HashMap::new(),
            streets,
            next_street: 0,
        }
    }

    pub fn bodies(&self, class: &str) -> &[ConceptExpr] {
        self.bodies.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Gold classes mentioned inside the bodies of `class`.
    pub fn dependencies(&self, class: &str) -> BTreeSet<String> {
        let mut names = Vec::new();
        for b in self.bodies(class) {
            b.concept_names(&mut names);
        }
        names.into_iter().filter(|n| *n != class && self.labeled.contains(*n)).map(String::from).collect()
    }

    pub fn is_perdurant_class(&mut self, class: &str) -> bool {
        if let Some(&v) = self.perdurant.get(class) {
            return v;
        }
        let mut stack = vec![class.to_string()];
        let mut seen = HashSet::new();
        let mut found = false;
        while let Some(c) = stack.pop() {
            if c == "Perdurant" {
                found = true;
                break;
            }
            if seen.insert(c.clone()) {
                stack.extend(self.kb.direct_superclasses(&c).into_iter().map(String::from));
            }
        }
        self.perdurant.insert(class.to_string(), found);
        found
    }

    fn kind_of(&mut self, c: &ConceptExpr) -> RecordKind {
        match top_atomics(c).first() {
            Some(a) if self.is_perdurant_class(a) => RecordKind::Event,
            _ => RecordKind::Endurant,
        }
    }

    fn fresh(&mut self, kind: RecordKind) -> Pending {
        self.counter += 1;
        let prefix = if kind == RecordKind::Event { "event" } else { "endurant" };
        Pending {
            kind,
            id: format!("{prefix}{}", self.counter),
            types: Vec::new(),
            links: Vec::new(),
            data: Vec::new(),
            labels: Vec::new(),
            street: None,
        }
    }

    /// Emits resources and camera sources; every later event is attached to
    /// one of the resources.
    pub fn media(&mut self, cameras: usize, videos_per_camera: usize, streets: &[String]) -> Result<()> {
        let mut entries = Vec::new();
        let mut video = 0;
        for cam in 1..=cameras {
            let mut resources = Vec::new();
            for _ in 0..videos_per_camera {
                video += 1;
                let id = format!("resource{video}");
                let mut r = AnnotationRecord::new(RecordKind::Resource, id.as_str());
                r.video_id = Some(format!("video{video}"));
                self.records.push(r);
                resources.push(id);
            }
            let mut s = AnnotationRecord::new(RecordKind::Source, format!("source{cam}"));
            for r in &resources {
                s = s.with_link("has", r.as_str());
            }
            let hour = 18 + self.rng.below(5);
            let entry = CameraEntry {
                camera_id: format!("cameraC{cam:03}"),
                latitude: format!("{:.6}", self.rng.range(51.48, 51.56)),
                longitude: format!("{:.6}", self.rng.range(-0.20, -0.02)),
                location_name: self.rng.pick(streets).clone(),
                start_time: format!("2011-08-08T{hour:02}:00:00"),
                end_time: format!("2011-08-08T{:02}:00:00", hour + 1),
            };
            s.camera_id = Some(entry.camera_id.clone());
            s.latitude = Some(entry.latitude.clone());
            s.longitude = Some(entry.longitude.clone());
            s.location_name = Some(entry.location_name.clone());
            s.start_time = Some(entry.start_time.clone());
            s.end_time = Some(entry.end_time.clone());
            self.records.push(s);
            self.resources.extend(resources);
            entries.push(entry);
        }
        self.catalog = CameraCatalog::new(entries)?;
        Ok(())
    }

    fn emit(&mut self, p: Pending) {
        let mut r = AnnotationRecord::new(p.kind, p.id.as_str());
        r.types = p.types;
        for (role, target) in p.links {
            r = r.with_link(role, target);
        }
        if p.kind == RecordKind::Event && !self.resources.is_empty() {
            let res = self.rng.pick(&self.resources).clone();
            r = r.with_link("isFrom", res);
        }
        for (prop, value) in p.data {
            r = r.with_data(prop, value);
        }
        for l in &p.labels {
            self.gold.entry(l.clone()).or_default().insert(p.id.clone());
        }
        self.records.push(r);
    }

    fn next_body(&mut self, class: &str) -> Result<ConceptExpr> {
        let bodies = self.bodies.get(class).map(Vec::as_slice).unwrap_or(&[]);
        if bodies.is_empty() {
            return Err(Error::NoGciForClass(class.to_string()));
        }
        let i = self.cursor.entry(class.to_string()).or_insert(0);
        let body = bodies[*i % bodies.len()].clone();
        *i += 1;
        Ok(body)
    }

    fn consume(&mut self, class: &str) -> Result<()> {
        let used = self.used.entry(class.to_string()).or_insert(0);
        *used += 1;
        let quota = self.quota.get(class).copied().unwrap_or(0);
        if *used > quota {
            return Err(Error::InvalidConfig(format!(
                "class `{class}` needs {used} matched instances as helpers but only {quota} are planned"
            )));
        }
        Ok(())
    }

    /// A gold instance of `class` whose low-level facts match one body.
    pub fn matched_root(&mut self, class: &str) -> Result<()> {
        let body = self.next_body(class)?;
        self.consume(class)?;
        let mut root = self.fresh(RecordKind::Event);
        root.labels.push(class.to_string());
        root.add_type(class);
        self.plant(&mut root, &body, None, &mut Vec::new(), 0)?;
        self.emit(root);
        Ok(())
    }

    /// A gold instance of `class` that matches none of its bodies.
    pub fn missed_root(&mut self, class: &str, decoy: bool) -> Result<()> {
        let body = match self.next_body(class) {
            Ok(b) => b,
            Err(_) => ConceptExpr::atomic("Perdurant"),
        };
        let shape = if decoy { self.decoy(&body, true) } else { root_only(&body) };
        let mut root = self.fresh(RecordKind::Event);
        root.labels.push(class.to_string());
        root.add_type(class);
        root.add_type("Perdurant");
        self.plant(&mut root, &shape, None, &mut Vec::new(), 0)?;
        self.emit(root);
        Ok(())
    }

    /// A root that is not a gold instance of `class` but matches one body.
    pub fn noise_root(&mut self, class: &str) -> Result<()> {
        let body = self.next_body(class)?;
        let mut root = self.fresh(RecordKind::Event);
        self.plant(&mut root, &body, None, &mut Vec::new(), 0)?;
        self.emit(root);
        Ok(())
    }

    /// An event of class `event_class` with one fresh participant of class
    /// `participant`, or none.
    pub fn simple_event(&mut self, event_class: &str, extra: Option<&ConceptExpr>, labels: &[&str]) -> Result<()> {
        let mut root = self.fresh(RecordKind::Event);
        root.add_type(event_class);
        root.labels.extend(labels.iter().map(|l| l.to_string()));
        if let Some(e) = extra {
            self.plant(&mut root, e, None, &mut Vec::new(), 0)?;
        }
        self.emit(root);
        Ok(())
    }

    /// Replaces every name inside an existential filler with a decoy of the
    /// same top-level category and drops `locatedSameAs` edges.
    fn decoy(&mut self, c: &ConceptExpr, at_root: bool) -> ConceptExpr {
        match c {
            ConceptExpr::Atomic(a) if !at_root => {
                let d = if self.is_perdurant_class(a) { PERDURANT_DECOY } else { ENDURANT_DECOY };
                ConceptExpr::atomic(d)
            }
            ConceptExpr::And(ms) => {
                let parts: Vec<_> = ms.iter().map(|m| self.decoy(m, at_root)).collect();
                ConceptExpr::and(parts)
            }
            ConceptExpr::Exists(r, _) if r.as_atomic() == Some(LOCATED_SAME_AS) => ConceptExpr::Top,
            ConceptExpr::Exists(r, f) => ConceptExpr::some(r.clone(), self.decoy(f, false)),
            other => other.clone(),
        }
    }

    fn street(&mut self) -> Result<String> {
        let s = self.streets.get(self.next_street).cloned().ok_or_else(|| {
            Error::InvalidConfig(format!("location-name pool of {} exhausted", self.streets.len()))
        })?;
        self.next_street += 1;
        Ok(s)
    }

    /// Adds facts under `node` that make it satisfy `c`. `via` is the role
    /// that led from the parent to `node`; names reachable back through its
    /// inverse are collected in `parent_types` instead of creating a node.
    fn plant(
        &mut self,
        node: &mut Pending,
        c: &ConceptExpr,
        via: Option<&str>,
        parent_types: &mut Vec<String>,
        depth: usize,
    ) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(Error::InvalidConfig("GCI bodies nest too deeply to plant".into()));
        }
        match c {
            ConceptExpr::Top => Ok(()),
            ConceptExpr::Atomic(a) => {
                node.add_type(a);
                if self.labeled.contains(a) && !node.labels.contains(a) {
                    self.consume(a)?;
                    node.labels.push(a.clone());
                    let body = self.next_body(a)?;
                    self.plant(node, &body, via, parent_types, depth + 1)?;
                }
                Ok(())
            }
            ConceptExpr::And(ms) => {
                for m in ms {
                    self.plant(node, m, via, parent_types, depth)?;
                }
                Ok(())
            }
            ConceptExpr::Exists(r, f) => {
                let role = r.as_atomic().ok_or_else(|| {
                    Error::InvalidConfig(format!("cannot plant a witness for the role expression {r}"))
                })?;
                let names = top_atomics(f);
                let flat = !has_exists(f) && names.iter().all(|n| !self.labeled.contains(*n));
                if let Some(v) = via {
                    if flat && self.inverses.contains(&(role.to_string(), v.to_string())) {
                        parent_types.extend(names.into_iter().map(String::from));
                        return Ok(());
                    }
                }
                if role == LOCATED_SAME_AS {
                    let street = match &node.street {
                        Some(s) => s.clone(),
                        None => {
                            let s = self.street()?;
                            node.street = Some(s.clone());
                            node.data.push(("hasLocationName".into(), s.clone()));
                            s
                        }
                    };
                    let kind = self.kind_of(f);
                    let mut partner = self.fresh(kind);
                    partner.street = Some(street.clone());
                    partner.data.push(("hasLocationName".into(), street));
                    self.plant(&mut partner, f, None, &mut Vec::new(), depth + 1)?;
                    self.emit(partner);
                    return Ok(());
                }
                if role == PART && names.iter().any(|n| self.labeled.contains(*n)) {
                    let key = f.to_string();
                    let helper = match self.helpers.get(&key) {
                        Some(h) => h.clone(),
                        None => {
                            let kind = self.kind_of(f);
                            let mut h = self.fresh(kind);
                            self.plant(&mut h, f, Some(role), &mut Vec::new(), depth + 1)?;
                            let id = h.id.clone();
                            self.emit(h);
                            self.helpers.insert(key, id.clone());
                            id
                        }
                    };
                    node.links.push((role.to_string(), helper));
                    return Ok(());
                }
                let kind = self.kind_of(f);
                let mut child = self.fresh(kind);
                let mut back = Vec::new();
                self.plant(&mut child, f, Some(role), &mut back, depth + 1)?;
                let id = child.id.clone();
                self.emit(child);
                for t in back {
                    node.add_type(&t);
                }
                node.links.push((role.to_string(), id));
                Ok(())
            }
            other => Err(Error::InvalidConfig(format!("cannot plant a witness for {other}"))),
        }
    }
}
