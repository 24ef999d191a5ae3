use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Axiom, ConceptExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Event,
    Endurant,
    Resource,
    Source,
    /// Adds links to an already declared identifier.
    RoleLink,
    /// Adds data values to an already declared identifier.
    DataValue,
}

impl RecordKind {
    fn declares(self) -> bool {
        !matches!(self, RecordKind::RoleLink | RecordKind::DataValue)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub role: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataValue {
    pub prop: String,
    pub value: String,
}

/// `type` may be written as a single string or as a list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum TypeField {
    One(String),
    Many(Vec<String>),
}

fn de_types<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<String>, D::Error> {
    Ok(match Option::<TypeField>::deserialize(d)? {
        None => Vec::new(),
        Some(TypeField::One(t)) => vec![t],
        Some(TypeField::Many(ts)) => ts,
    })
}

/// One line of `annotations.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub kind: RecordKind,
    pub id: String,
    #[serde(rename = "type", default, deserialize_with = "de_types", skip_serializing_if = "Vec::is_empty")]
    pub types: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub links: Vec<Link>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub data: Vec<DataValue>,
    #[serde(rename = "cameraId", default, skip_serializing_if = "Option::is_none")]
    pub camera_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latitude: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude: Option<String>,
    #[serde(rename = "locationName", default, skip_serializing_if = "Option::is_none")]
    pub location_name: Option<String>,
    #[serde(rename = "startTime", default, skip_serializing_if = "Option::is_none")]
    pub start_time: Option<String>,
    #[serde(rename = "endTime", default, skip_serializing_if = "Option::is_none")]
    pub end_time: Option<String>,
    #[serde(rename = "videoId", default, skip_serializing_if = "Option::is_none")]
    pub video_id: Option<String>,
}

impl AnnotationRecord {
    pub fn new(kind: RecordKind, id: impl Into<String>) -> Self {
        AnnotationRecord {
            kind,
            id: id.into(),
            types: Vec::new(),
            links: Vec::new(),
            data: Vec::new(),
            camera_id: None,
            latitude: None,
            longitude: None,
            location_name: None,
            start_time: None,
            end_time: None,
            video_id: None,
        }
    }

    pub fn with_type(mut self, class: impl Into<String>) -> Self {
        self.types.push(class.into());
        self
    }

    pub fn with_link(mut self, role: impl Into<String>, target: impl Into<String>) -> Self {
        self.links.push(Link { role: role.into(), target: target.into() });
        self
    }

    pub fn with_data(mut self, prop: impl Into<String>, value: impl Into<String>) -> Self {
        self.data.push(DataValue { prop: prop.into(), value: value.into() });
        self
    }
}

pub fn parse_annotations(text: &str) -> Result<Vec<AnnotationRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(line).map_err(|e| Error::Annotation { line: i + 1, message: e.to_string() })?;
        out.push(record);
    }
    Ok(out)
}

pub fn write_annotations(records: &[AnnotationRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Turns records into ABox assertions.
///
/// Sources contribute `Source`, `hasCameraId`, coordinates, street name and
/// time span; resources contribute `Resource` and `hasVideoId`. Link targets
/// and the subjects of `role-link`/`data-value` records must be declared by
/// an earlier record. Duplicate assertions are emitted once.
pub fn ingest_annotations(records: &[AnnotationRecord]) -> Result<Vec<Axiom>> {
    let mut declared: HashSet<&str> = HashSet::new();
    let mut seen: BTreeSet<Axiom> = BTreeSet::new();
    let mut out = Vec::new();
    let mut emit = |ax: Axiom| {
        if seen.insert(ax.clone()) {
            out.push(ax);
        }
    };

    for (i, r) in records.iter().enumerate() {
        let record = format!("record {} (`{}`)", i + 1, r.id);
        if r.kind.declares() {
            if !declared.insert(r.id.as_str()) {
                return Err(Error::DuplicateRecord(r.id.clone()));
            }
        } else if !declared.contains(r.id.as_str()) {
            return Err(Error::DanglingReference { record, target: r.id.clone() });
        }
        for l in &r.links {
            if !declared.contains(l.target.as_str()) {
                return Err(Error::DanglingReference { record, target: l.target.clone() });
            }
        }

        let implicit = match r.kind {
            RecordKind::Resource => Some("Resource"),
            RecordKind::Source => Some("Source"),
            _ => None,
        };
        for class in implicit.into_iter().chain(r.types.iter().map(String::as_str)) {
            emit(Axiom::member(r.id.as_str(), ConceptExpr::atomic(class)));
        }
        for l in &r.links {
            emit(Axiom::related(l.role.as_str(), r.id.as_str(), l.target.as_str()));
        }
        if let Some(v) = &r.video_id {
            emit(Axiom::related("hasVideoId", r.id.as_str(), v.as_str()));
        }
        if let Some(c) = &r.camera_id {
            emit(Axiom::related("hasCameraId", r.id.as_str(), c.as_str()));
        }
        let fields = [
            ("hasLatitude", &r.latitude),
            ("hasLongitude", &r.longitude),
            ("hasLocationName", &r.location_name),
            ("hasStartTime", &r.start_time),
            ("hasEndTime", &r.end_time),
        ];
        for (prop, value) in fields {
            if let Some(v) = value {
                emit(Axiom::data(prop, r.id.as_str(), v.as_str()));
            }
        }
        for d in &r.data {
            emit(Axiom::data(d.prop.as_str(), r.id.as_str(), d.value.as_str()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_accepts_string_or_list() {
        let rs = parse_annotations(
            "{\"kind\":\"event\",\"id\":\"e\",\"type\":\"Kicking\"}\n\n{\"kind\":\"endurant\",\"id\":\"p\",\"type\":[\"A\",\"B\"]}\n",
        )
        .unwrap();
        assert_eq!(rs[0].types, vec!["Kicking"]);
        assert_eq!(rs[1].types, vec!["A", "B"]);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let e = parse_annotations("{\"kind\":\"event\",\"id\":\"e\"}\n{\"kind\":\"blob\",\"id\":\"x\"}").unwrap_err();
        assert!(matches!(e, Error::Annotation { line: 2, .. }));
    }

    #[test]
    fn jsonl_round_trip() {
        let rs = vec![
            AnnotationRecord::new(RecordKind::Event, "e1").with_type("Kicking").with_data("hasLocationName", "Mare St"),
            AnnotationRecord::new(RecordKind::Endurant, "s1").with_type("Structure").with_link("participantIn", "e1"),
        ];
        assert_eq!(parse_annotations(&write_annotations(&rs)).unwrap(), rs);
    }

    #[test]
    fn forward_reference_is_dangling() {
        let rs = vec![AnnotationRecord::new(RecordKind::Event, "e1").with_link("participant", "p1")];
        match ingest_annotations(&rs).unwrap_err() {
            Error::DanglingReference { target, record } => {
                assert_eq!(target, "p1");
                assert!(record.contains("e1"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redeclaration_is_rejected() {
        let rs = vec![AnnotationRecord::new(RecordKind::Event, "e1"), AnnotationRecord::new(RecordKind::Endurant, "e1")];
        assert!(matches!(ingest_annotations(&rs), Err(Error::DuplicateRecord(id)) if id == "e1"));
    }

    #[test]
    fn role_link_record_extends_declared_subject() {
        let rs = vec![
            AnnotationRecord::new(RecordKind::Event, "e1"),
            AnnotationRecord::new(RecordKind::Event, "e2"),
            AnnotationRecord::new(RecordKind::RoleLink, "e1").with_link("part", "e2"),
        ];
        assert_eq!(ingest_annotations(&rs).unwrap(), vec![Axiom::related("part", "e1", "e2")]);
        let bad = vec![AnnotationRecord::new(RecordKind::DataValue, "zz").with_data("hasLocationName", "x")];
        assert!(matches!(ingest_annotations(&bad), Err(Error::DanglingReference { .. })));
    }
}
