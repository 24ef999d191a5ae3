use std::collections::HashSet;

use crate::error::{Error, Result};

use super::annotation::{AnnotationRecord, RecordKind};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CameraEntry {
    pub camera_id: String,
    pub latitude: String,
    pub longitude: String,
    pub location_name: String,
    pub start_time: String,
    pub end_time: String,
}

/// Camera metadata keyed by unique camera id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CameraCatalog {
    entries: Vec<CameraEntry>,
}

pub const CATALOG_HEADER: &str = "id\tlat\tlon\tstreet\tstart\tend";

impl CameraCatalog {
    pub fn new(entries: Vec<CameraEntry>) -> Result<Self> {
        let mut ids = HashSet::new();
        for e in &entries {
            if !ids.insert(e.camera_id.as_str()) {
                return Err(Error::DuplicateRecord(e.camera_id.clone()));
            }
        }
        Ok(CameraCatalog { entries })
    }

    pub fn entries(&self) -> &[CameraEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Collects the camera metadata carried by `source` records.
    pub fn from_records(records: &[AnnotationRecord]) -> Result<Self> {
        let entries = records
            .iter()
            .filter(|r| r.kind == RecordKind::Source)
            .filter_map(|r| {
                let field = |v: &Option<String>| v.clone().unwrap_or_default();
                r.camera_id.as_ref().map(|id| CameraEntry {
                    camera_id: id.clone(),
                    latitude: field(&r.latitude),
                    longitude: field(&r.longitude),
                    location_name: field(&r.location_name),
                    start_time: field(&r.start_time),
                    end_time: field(&r.end_time),
                })
            })
            .collect();
        Self::new(entries)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(CATALOG_HEADER);
        out.push('\n');
        for e in &self.entries {
            let row = [&e.camera_id, &e.latitude, &e.longitude, &e.location_name, &e.start_time, &e.end_time];
            out.push_str(&row.map(|s| s.as_str()).join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() || (i == 0 && line == CATALOG_HEADER) {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(Error::Annotation { line: i + 1, message: format!("expected 6 columns, found {}", cols.len()) });
            }
            entries.push(CameraEntry {
                camera_id: cols[0].into(),
                latitude: cols[1].into(),
                longitude: cols[2].into(),
                location_name: cols[3].into(),
                start_time: cols[4].into(),
                end_time: cols[5].into(),
            });
        }
        Self::new(entries)
    }
}

/// Great-circle distance in meters between two points in decimal degrees.
pub fn haversine(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * a.sqrt().min(1.0).asin()
}

fn coordinate(camera: &str, text: &str, limit: f64) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v.abs() <= limit => Ok(v),
        _ => Err(Error::MalformedCoordinate(format!("camera `{camera}`: `{text}`"))),
    }
}

/// Pairwise haversine distances in catalog order.
pub fn camera_distances(catalog: &CameraCatalog) -> Result<Vec<Vec<f64>>> {
    let points = catalog
        .entries
        .iter()
        .map(|e| Ok((coordinate(&e.camera_id, &e.latitude, 90.0)?, coordinate(&e.camera_id, &e.longitude, 180.0)?)))
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = haversine(points[i].0, points[i].1, points[j].0, points[j].1);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    Ok(m)
}
