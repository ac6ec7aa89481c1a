//! Versioned JSON artifacts: instance files (a range family plus an optional
//! point set) and report files tied to an instance by its SHA-256 digest.
//! Floats are written as shortest round-trip decimals, so parse → write
//! reproduces a file byte for byte.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::constructions::{AnnulusFamily, PointSet, SlabFamily};
use crate::frameworks::{AfshaniReport, BoundKind, ChazelleReport, DerandReport, Lemma42Report};
use crate::geom::Rect;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Fs { path: String, source: std::io::Error },
    #[error("{path}: malformed JSON: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: schema version {found}, expected {SCHEMA_VERSION}")]
    Schema { path: String, found: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    SlabReport(SlabFamily),
    SlabStab(SlabFamily),
    AnnulusReport(AnnulusFamily),
    AnnulusStab(AnnulusFamily),
}

impl Family {
    pub fn kind(&self) -> BoundKind {
        match self {
            Family::SlabReport(_) => BoundKind::SlabReport,
            Family::SlabStab(_) => BoundKind::SlabStab,
            Family::AnnulusReport(_) => BoundKind::AnnulusReport,
            Family::AnnulusStab(_) => BoundKind::AnnulusStab,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Family::SlabReport(f) | Family::SlabStab(f) => f.len(),
            Family::AnnulusReport(f) | Family::AnnulusStab(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn square(&self) -> Rect {
        match self {
            Family::SlabReport(f) | Family::SlabStab(f) => f.square,
            Family::AnnulusReport(f) | Family::AnnulusStab(f) => f.square,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    pub seed: u64,
    pub family: Family,
    pub points: Option<PointSet>,
}

impl InstanceFile {
    pub fn new(seed: u64, family: Family, points: Option<PointSet>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            seed,
            family,
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "kebab-case")]
pub enum ReportPayload {
    Chazelle(ChazelleReport),
    Afshani(AfshaniReport),
    Derand(DerandReport),
    Lemma42(Lemma42Report),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub kind: BoundKind,
    pub formula: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub instance_digest: String,
    pub command: String,
    pub seed: u64,
    pub payload: ReportPayload,
    pub space_bound: Option<BoundRecord>,
    /// Only written on request; wall-clock time differs run to run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Hex SHA-256 of the given bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn to_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("artifacts contain only finite numbers");
    out.push(b'\n');
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<Vec<u8>, IoError> {
    let bytes = to_bytes(value);
    fs::write(path, &bytes).map_err(|source| IoError::Fs {
        path: path.display().to_string(),
        source,
    })?;
    Ok(bytes)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, IoError> {
    fs::read(path).map_err(|source| IoError::Fs {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, IoError> {
    serde_json::from_slice(bytes).map_err(|source| IoError::Json {
        path: path.display().to_string(),
        source,
    })
}

/// Reads an instance file and returns it with the digest of its bytes.
pub fn read_instance(path: &Path) -> Result<(InstanceFile, String), IoError> {
    let bytes = read_bytes(path)?;
    let inst: InstanceFile = parse(path, &bytes)?;
    if inst.schema_version != SCHEMA_VERSION {
        return Err(IoError::Schema {
            path: path.display().to_string(),
            found: inst.schema_version,
        });
    }
    Ok((inst, digest(&bytes)))
}

pub fn read_report(path: &Path) -> Result<ReportFile, IoError> {
    let bytes = read_bytes(path)?;
    let rep: ReportFile = parse(path, &bytes)?;
    if rep.schema_version != SCHEMA_VERSION {
        return Err(IoError::Schema {
            path: path.display().to_string(),
            found: rep.schema_version,
        });
    }
    Ok(rep)
}
