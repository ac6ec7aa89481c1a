//! Generators for the four hard-instance families and the uniform point
//! sampler. Every formula-derived parameter can be overridden, and each
//! family echoes the values it was built from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod annulus_report;
mod annulus_stab;
mod points;
mod slab_report;
mod slab_stab;

pub use annulus_report::{gen_annulus_report, AnnulusReportParams, AnnulusReportResolved};
pub use annulus_stab::{gen_annulus_stab, AnnulusStabParams, AnnulusStabResolved, STAB_SPAN};
pub use points::{sample_points, PointSet};
pub use slab_report::{gen_slab_report, SlabReportParams, SlabReportResolved};
pub use slab_stab::{gen_slab_stab, tune_c2, SlabStabParams, SlabStabResolved};

use crate::geom::{Annulus, Rect};
use crate::poly::PolySlab;

/// Families larger than this are refused rather than materialized.
pub const DEFAULT_MAX_FAMILY: u64 = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },
}

pub(crate) fn config_err(field: impl Into<String>, message: impl Into<String>) -> ConstructionError {
    ConstructionError::Config {
        field: field.into(),
        message: message.into(),
    }
}

/// Formula identifier or `"override"` for each derived quantity.
pub type Provenance = BTreeMap<String, String>;

/// `sqrt(log_base n)`.
pub fn sqrt_log(n: f64, base: f64) -> f64 {
    (n.ln() / base.ln()).sqrt()
}

pub(crate) fn check_log_base(base: f64) -> Result<(), ConstructionError> {
    if !(base.is_finite() && base > 1.0) {
        return Err(config_err("log_base", format!("must exceed 1, got {base}")));
    }
    Ok(())
}

pub(crate) fn check_positive(field: &str, v: f64) -> Result<(), ConstructionError> {
    if !(v.is_finite() && v > 0.0) {
        return Err(config_err(field, format!("must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Inclusive integer range `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl IndexRange {
    pub fn len(&self) -> u64 {
        (self.hi - self.lo + 1).max(0) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

pub(crate) fn checked_product(sizes: impl IntoIterator<Item = u64>, max_family: u64) -> Result<u64, ConstructionError> {
    let mut total: u64 = 1;
    for s in sizes {
        total = total
            .checked_mul(s)
            .filter(|&t| t <= max_family)
            .ok_or_else(|| config_err("family_size", format!("exceeds the limit of {max_family} ranges")))?;
    }
    Ok(total)
}

/// Index tuple `(j_1, ..., j_Δ, k)` a slab was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlabIndex {
    pub j: Vec<i64>,
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum SlabParamsEcho {
    Report(SlabReportResolved),
    Stab(SlabStabResolved),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabFamily {
    pub params: SlabParamsEcho,
    /// Square the points (reporting) or probes (stabbing) live in.
    pub square: Rect,
    pub slabs: Vec<PolySlab>,
    pub indices: Vec<SlabIndex>,
}

impl SlabFamily {
    pub fn len(&self) -> usize {
        self.slabs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slabs.is_empty()
    }

    pub fn width(&self) -> f64 {
        match &self.params {
            SlabParamsEcho::Report(p) => p.w,
            SlabParamsEcho::Stab(p) => p.w,
        }
    }

    /// Per-degree scales `d_i` (index 0 is degree 1).
    pub fn scales(&self) -> &[f64] {
        match &self.params {
            SlabParamsEcho::Report(p) => &p.d,
            SlabParamsEcho::Stab(p) => &p.d,
        }
    }

    /// Magnitude of the degree-`i` coefficient step between neighbouring
    /// indices: `d_i / n^i` for reporting families, `d_i` for stabbing.
    pub fn coeff_step(&self, i: usize) -> f64 {
        match &self.params {
            SlabParamsEcho::Report(p) => p.d[i - 1] / (p.n as f64).powi(i as i32),
            SlabParamsEcho::Stab(p) => p.d[i - 1],
        }
    }
}

/// Grid point `(a, b)` and ring number `k` an annulus was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusIndex {
    pub grid: (u32, u32),
    pub k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum AnnulusParamsEcho {
    Report(AnnulusReportResolved),
    Stab(AnnulusStabResolved),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusFamily {
    pub params: AnnulusParamsEcho,
    /// The square `S₂` the annuli are aimed at.
    pub square: Rect,
    pub annuli: Vec<Annulus>,
    pub indices: Vec<AnnulusIndex>,
}

impl AnnulusFamily {
    pub fn len(&self) -> usize {
        self.annuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annuli.is_empty()
    }

    pub fn width(&self) -> f64 {
        match &self.params {
            AnnulusParamsEcho::Report(p) => p.w,
            AnnulusParamsEcho::Stab(p) => p.w,
        }
    }

    pub fn grid_side(&self) -> f64 {
        match &self.params {
            AnnulusParamsEcho::Report(p) => p.t_side,
            AnnulusParamsEcho::Stab(p) => p.t_side,
        }
    }
}

/// Grid coordinates `0, T, 2T, ...` not exceeding `side`, counted robustly
/// against `side / T` landing a hair below an integer.
pub(crate) fn grid_steps(side: f64, t: f64) -> u32 {
    let ratio = side / t;
    let r = ratio.round();
    let steps = if (ratio - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        ratio.floor()
    };
    steps as u32
}
