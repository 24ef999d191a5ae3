//! Seeded synthetic surveillance scenarios with planted classifications.

mod plant;
mod rng;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::TrueMap;
use crate::model::{ConceptExpr, KnowledgeBase, RoleExpr};
use crate::ontology::{builtin_ontology, write_annotations, AnnotationRecord, CameraCatalog, OntologyOptions};
use crate::text::{serialize_gold, serialize_kb};

use plant::Builder;
pub use rng::Xorshift64Star;

/// Street names shared by cameras and same-location event pairs.
pub const LONDON_STREETS: [&str; 12] = [
    "Mare Street",
    "Tottenham High Road",
    "Clapham Junction",
    "Brixton Road",
    "Peckham High Street",
    "Croydon London Road",
    "Ealing Broadway",
    "Enfield Town",
    "Wood Green High Road",
    "Hackney Central",
    "Lewisham High Street",
    "Camden High Street",
];

/// Event classes used for distractors; none of them occurs in a GCI body.
pub const DISTRACTOR_EVENTS: [&str; 5] = ["Dancing", "Greeting", "Hugging", "Saying", "Seeing"];

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSpec {
    pub name: String,
    /// Gold instances of the class.
    pub count: usize,
    /// Fraction of gold instances that match one of the class's bodies.
    pub match_fraction: f64,
    /// Non-gold events that nevertheless match a body (false positives).
    pub noise: usize,
}

impl ClassSpec {
    pub fn new(name: &str, count: usize, match_fraction: f64) -> Self {
        ClassSpec { name: name.to_string(), count, match_fraction, noise: 0 }
    }

    pub fn matched(&self) -> usize {
        (self.match_fraction * self.count as f64).round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub classes: Vec<ClassSpec>,
    pub cameras: usize,
    pub videos_per_camera: usize,
    pub distractors: usize,
    pub location_names: Vec<String>,
}

/// Instance counts per crime class.
pub const TABLE2_COUNTS: [(&str, usize); 7] = [
    ("Vandalism", 57),
    ("Riot", 21),
    ("AbnormalBehavior", 80),
    ("Crowding", 64),
    ("DamageStructure", 9),
    ("DamageVehicle", 16),
    ("Throwing", 30),
];

/// Matched instances and false positives per class for the Table-4 profile.
pub const TABLE4_PLAN: [(&str, usize, usize); 7] = [
    ("Vandalism", 42, 0),
    ("Riot", 5, 0),
    ("AbnormalBehavior", 70, 22),
    ("Crowding", 60, 1),
    ("DamageStructure", 9, 0),
    ("DamageVehicle", 11, 0),
    ("Throwing", 30, 0),
];

impl ScenarioConfig {
    fn base(seed: u64, classes: Vec<ClassSpec>) -> Self {
        ScenarioConfig {
            seed,
            classes,
            cameras: 35,
            videos_per_camera: 4,
            distractors: 40,
            location_names: LONDON_STREETS.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Reference per-class instance counts, every instance matched, no noise.
    pub fn table2(seed: u64) -> Self {
        Self::base(seed, TABLE2_COUNTS.iter().map(|(c, n)| ClassSpec::new(c, *n, 1.0)).collect())
    }

    /// Reference per-class counts with the match fractions and
    /// false-positive noise of the reference evaluation.
    pub fn table4(seed: u64) -> Self {
        let classes = TABLE2_COUNTS
            .iter()
            .map(|(c, n)| {
                let (_, m, noise) = TABLE4_PLAN.iter().find(|(k, ..)| k == c).copied().unwrap_or((c, *n, 0));
                ClassSpec { name: c.to_string(), count: *n, match_fraction: m as f64 / *n as f64, noise }
            })
            .collect();
        Self::base(seed, classes)
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.classes {
            if !(0.0..=1.0).contains(&c.match_fraction) || c.match_fraction.is_nan() {
                return Err(Error::InvalidConfig(format!("match fraction of `{}` is outside [0, 1]", c.name)));
            }
        }
        let mut names = BTreeSet::new();
        if let Some(c) = self.classes.iter().find(|c| !names.insert(c.name.as_str())) {
            return Err(Error::InvalidConfig(format!("class `{}` listed twice", c.name)));
        }
        if self.location_names.is_empty() && self.cameras > 0 {
            return Err(Error::InvalidConfig("cameras need at least one location name".into()));
        }
        Ok(())
    }
}

/// Generated annotations, gold labels, camera catalog and the KB whose
/// bodies were planted.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub records: Vec<AnnotationRecord>,
    pub gold: TrueMap,
    pub catalog: CameraCatalog,
    pub kb: KnowledgeBase,
}

impl Scenario {
    /// Writes `annotations.jsonl`, `labels.gold`, `cameras.tsv` and `kb.fkb`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("annotations.jsonl"), write_annotations(&self.records))?;
        fs::write(dir.join("labels.gold"), serialize_gold(&self.gold))?;
        fs::write(dir.join("cameras.tsv"), self.catalog.to_tsv())?;
        fs::write(dir.join("kb.fkb"), serialize_kb(&self.kb))?;
        Ok(())
    }
}

/// Generates a scenario against the built-in ontology with the invented
/// placeholder GCIs.
pub fn generate(config: &ScenarioConfig) -> Result<Scenario> {
    let kb = builtin_ontology(OntologyOptions { include_learned_gcis: false, include_invented_gcis: true });
    generate_with(&kb, config)
}

/// Gold instances of a class are planted either as matches (cycling through
/// the Or-free bodies of its GCIs) or as misses (alternately a bare root and
/// a decoy with substituted filler classes). Gold classes occurring in a
/// `part` filler are shared helper events that count as matched instances;
/// `locatedSameAs` edges become a partner event on a street of its own.
pub fn generate_with(kb: &KnowledgeBase, config: &ScenarioConfig) -> Result<Scenario> {
    config.validate()?;
    let labeled: BTreeSet<String> = config.classes.iter().filter(|c| c.count > 0).map(|c| c.name.clone()).collect();
    let mut b = Builder::new(kb, config.seed, labeled, config.location_names.clone());
    for c in &config.classes {
        if c.count > 0 && b.bodies(&c.name).is_empty() && (c.matched() > 0 || c.noise > 0) {
            return Err(Error::NoGciForClass(c.name.clone()));
        }
        b.quota.insert(c.name.clone(), c.matched());
    }
    if config.classes.iter().all(|c| c.count == 0 && c.noise == 0) && config.distractors == 0 {
        return Ok(Scenario { records: Vec::new(), gold: TrueMap::new(), catalog: CameraCatalog::default(), kb: kb.clone() });
    }
    b.media(config.cameras, config.videos_per_camera, &config.location_names)?;

    for c in planting_order(&b, &config.classes) {
        let used = b.used.get(&c.name).copied().unwrap_or(0);
        for _ in used..c.matched() {
            b.matched_root(&c.name)?;
        }
        for i in 0..c.count - c.matched() {
            b.missed_root(&c.name, i % 2 == 1)?;
        }
        for _ in 0..c.noise {
            b.noise_root(&c.name)?;
        }
    }
    for i in 0..config.distractors {
        let event = DISTRACTOR_EVENTS[i % DISTRACTOR_EVENTS.len()];
        let person = ConceptExpr::some(RoleExpr::atomic("participant"), ConceptExpr::atomic("NaturalPerson"));
        b.simple_event(event, Some(&person), &[])?;
    }
    Ok(Scenario { records: b.records, gold: b.gold, catalog: b.catalog, kb: kb.clone() })
}

/// Classes whose bodies mention other gold classes come first, so helper
/// instances are counted before the dependency plants its own roots.
fn planting_order<'c>(b: &Builder, classes: &'c [ClassSpec]) -> Vec<&'c ClassSpec> {
    let by_name: BTreeMap<&str, &ClassSpec> = classes.iter().map(|c| (c.name.as_str(), c)).collect();
    let mut done = BTreeSet::new();
    let mut post = Vec::new();
    fn visit<'c>(
        name: &str,
        b: &Builder,
        by_name: &BTreeMap<&str, &'c ClassSpec>,
        done: &mut BTreeSet<String>,
        post: &mut Vec<&'c ClassSpec>,
    ) {
        if !done.insert(name.to_string()) {
            return;
        }
        for d in b.dependencies(name) {
            visit(&d, b, by_name, done, post);
        }
        if let Some(c) = by_name.get(name) {
            post.push(c);
        }
    }
    for c in classes {
        visit(&c.name, b, &by_name, &mut done, &mut post);
    }
    post.reverse();
    post
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningScenarioConfig {
    pub seed: u64,
    pub target: String,
    pub body: ConceptExpr,
    pub positives: usize,
    pub distractors: usize,
    /// Probability that a positive is planted without the body.
    pub label_noise: f64,
    pub cameras: usize,
}

impl LearningScenarioConfig {
    /// `∃immediateRelation.Vehicle ⊑ DamageVehicle` with 16 positives and
    /// 50 distractors.
    pub fn damage_vehicle(seed: u64) -> Self {
        LearningScenarioConfig {
            seed,
            target: "DamageVehicle".into(),
            body: ConceptExpr::some(RoleExpr::atomic("immediateRelation"), ConceptExpr::atomic("Vehicle")),
            positives: 16,
            distractors: 50,
            label_noise: 0.0,
            cameras: 5,
        }
    }
}

/// Event classes shared by positives and distractors so that event type
/// alone never separates them.
pub const LEARNING_EVENT_POOL: [&str; 6] = ["Gathering", "Dancing", "Greeting", "Hugging", "Saying", "Seeing"];

const WRONG_FILLERS: [&str; 4] = ["Structure", "Debris", "Shop", "NaturalPerson"];

/// Plants positives satisfying `body` and distractors that miss it in
/// rotation: a wrong filler class, the filler reached through `participant`
/// instead, or no edge at all. The KB is the built-in ontology.
pub fn plant_learning_scenario(config: &LearningScenarioConfig) -> Result<Scenario> {
    if !(0.0..=1.0).contains(&config.label_noise) {
        return Err(Error::InvalidConfig("label noise must lie in [0, 1]".into()));
    }
    let kb = builtin_ontology(OntologyOptions::default());
    let mut b = Builder::new(&kb, config.seed, BTreeSet::new(), LONDON_STREETS.iter().map(|s| s.to_string()).collect());
    let streets: Vec<String> = LONDON_STREETS.iter().map(|s| s.to_string()).collect();
    b.media(config.cameras, 4, &streets)?;
    let wrong = |b: &mut Builder, c: &ConceptExpr| -> ConceptExpr { swap_fillers(c, b.rng.pick(&WRONG_FILLERS)) };
    let target = config.target.as_str();
    for _ in 0..config.positives {
        let event = *b.rng.pick(&LEARNING_EVENT_POOL);
        let noisy = config.label_noise > 0.0 && b.rng.next_f64() < config.label_noise;
        let shape = if noisy { wrong(&mut b, &config.body) } else { config.body.clone() };
        b.simple_event(event, Some(&shape), &[target])?;
    }
    for i in 0..config.distractors {
        let event = *b.rng.pick(&LEARNING_EVENT_POOL);
        let shape = match i % 3 {
            0 => Some(wrong(&mut b, &config.body)),
            1 => Some(swap_roles(&config.body, "participant")),
            _ => None,
        };
        b.simple_event(event, shape.as_ref(), &[])?;
    }
    let mut gold = b.gold;
    gold.entry(config.target.clone()).or_default();
    Ok(Scenario { records: b.records, gold, catalog: b.catalog, kb })
}

fn swap_fillers(c: &ConceptExpr, name: &str) -> ConceptExpr {
    match c {
        ConceptExpr::Exists(r, f) => ConceptExpr::some(r.clone(), swap_inner(f, name)),
        ConceptExpr::And(ms) => ConceptExpr::and(ms.iter().map(|m| swap_fillers(m, name))),
        other => other.clone(),
    }
}

fn swap_inner(c: &ConceptExpr, name: &str) -> ConceptExpr {
    match c {
        ConceptExpr::Atomic(_) => ConceptExpr::atomic(name),
        ConceptExpr::And(ms) => ConceptExpr::and(ms.iter().map(|m| swap_inner(m, name))),
        ConceptExpr::Exists(r, f) => ConceptExpr::some(r.clone(), swap_inner(f, name)),
        other => other.clone(),
    }
}

fn swap_roles(c: &ConceptExpr, role: &str) -> ConceptExpr {
    match c {
        ConceptExpr::Exists(_, f) => ConceptExpr::some(RoleExpr::atomic(role), (**f).clone()),
        ConceptExpr::And(ms) => ConceptExpr::and(ms.iter().map(|m| swap_roles(m, role))),
        other => other.clone(),
    }
}

/// Named generation profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Table2,
    Table4,
    Learning,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "table2" => Some(Profile::Table2),
            "table4" => Some(Profile::Table4),
            "learning" => Some(Profile::Learning),
            _ => None,
        }
    }

    pub fn generate(self, seed: u64) -> Result<Scenario> {
        match self {
            Profile::Table2 => generate(&ScenarioConfig::table2(seed)),
            Profile::Table4 => generate(&ScenarioConfig::table4(seed)),
            Profile::Learning => plant_learning_scenario(&LearningScenarioConfig::damage_vehicle(seed)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::run_manual_experiment;
    use crate::ontology::ingest_annotations;

    #[test]
    fn all_zero_counts_give_empty_outputs() {
        let mut cfg = ScenarioConfig::table2(1);
        for c in &mut cfg.classes {
            c.count = 0;
        }
        cfg.distractors = 0;
        let s = generate(&cfg).unwrap();
        assert!(s.records.is_empty() && s.gold.is_empty() && s.catalog.is_empty());
    }

    #[test]
    fn class_without_bodies_fails() {
        let mut cfg = ScenarioConfig::table2(1);
        cfg.classes = vec![ClassSpec::new("CyberCrime", 3, 0.5)];
        assert!(matches!(generate(&cfg), Err(Error::NoGciForClass(c)) if c == "CyberCrime"));
    }

    #[test]
    fn table2_profile_is_fully_recalled() {
        let s = generate(&ScenarioConfig::table2(3)).unwrap();
        let facts = ingest_annotations(&s.records).unwrap();
        let report = run_manual_experiment(&s.kb, &facts, &s.gold).unwrap();
        for c in &report.classes {
            assert_eq!(c.table.fp, 0, "{}", c.class);
            assert_eq!(c.table.fn_, 0, "{}", c.class);
            assert_eq!(c.table.tp as usize, TABLE2_COUNTS.iter().find(|(n, _)| *n == c.class).unwrap().1);
        }
    }

    #[test]
    fn table4_profile_plants_the_row_counts() {
        let s = generate(&ScenarioConfig::table4(1)).unwrap();
        let facts = ingest_annotations(&s.records).unwrap();
        let report = run_manual_experiment(&s.kb, &facts, &s.gold).unwrap();
        for (class, m, noise) in TABLE4_PLAN {
            let r = report.class(class).unwrap();
            let n = TABLE2_COUNTS.iter().find(|(c, _)| *c == class).unwrap().1;
            assert_eq!((r.table.tp as usize, r.table.fp as usize, r.table.fn_ as usize), (m, noise, n - m), "{class}");
        }
    }

    #[test]
    fn learning_positives_carry_the_body() {
        let s = plant_learning_scenario(&LearningScenarioConfig::damage_vehicle(5)).unwrap();
        assert_eq!(s.gold["DamageVehicle"].len(), 16);
        let with_ir = s.records.iter().filter(|r| r.links.iter().any(|l| l.role == "immediateRelation")).count();
        assert_eq!(with_ir, 16 + 17);
    }
}
