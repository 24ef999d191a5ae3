//! The forensic event ontology and the media annotation data model.

mod annotation;
mod builtin;
mod camera;

pub use annotation::{
    ingest_annotations, parse_annotations, write_annotations, AnnotationRecord, DataValue, Link, RecordKind,
};
pub use builtin::{builtin_ontology, OntologyOptions, CRIME_CLASSES};
pub use camera::{camera_distances, haversine, CameraCatalog, CameraEntry, CATALOG_HEADER, EARTH_RADIUS_M};
