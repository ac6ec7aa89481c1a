use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{invalid, FrameworkError};
use crate::constructions::sqrt_log;

/// `m·Q / (α·2^(β·c))`.
pub fn chazelle_bound(m: u64, q: f64, alpha: u32, c: u32, beta: f64) -> f64 {
    m as f64 * q / (f64::from(alpha) * 2f64.powf(beta * f64::from(c)))
}

/// `t / (v·2^(β·α))`; `None` when `v = 0` leaves the bound unbounded.
pub fn afshani_bound(t: f64, v: f64, alpha: u32, beta: f64) -> Option<f64> {
    (v > 0.0).then(|| t / (v * 2f64.powf(beta * f64::from(alpha))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    SlabReport,
    SlabStab,
    AnnulusReport,
    AnnulusStab,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] = [
        BoundKind::SlabReport,
        BoundKind::SlabStab,
        BoundKind::AnnulusReport,
        BoundKind::AnnulusStab,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::SlabReport => "slab-report",
            BoundKind::SlabStab => "slab-stab",
            BoundKind::AnnulusReport => "annulus-report",
            BoundKind::AnnulusStab => "annulus-stab",
        }
    }

    /// Identifier of the closed form evaluated by [`implied_bound`].
    pub fn formula(self) -> &'static str {
        match self {
            BoundKind::SlabReport => "slab-report:n^(delta+1)/q^((delta+3)*delta/2)",
            BoundKind::SlabStab => "slab-stab:n^(1+2/(delta+1))/q^(2/delta)",
            BoundKind::AnnulusReport => "annulus-report:n^3/q^5",
            BoundKind::AnnulusStab => "annulus-stab:n^(3/2)/q^(3/4)",
        }
    }

    fn is_report(self) -> bool {
        matches!(self, BoundKind::SlabReport | BoundKind::AnnulusReport)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = FrameworkError;
    fn from_str(s: &str) -> Result<Self, FrameworkError> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("kind", format!("unknown instance kind {s:?}")))
    }
}

/// Inputs to a space-bound evaluation. Reporting bounds hide factors of
/// `2^O(sqrt(log n))`; `subpoly_beta` makes that divisor explicit as
/// `2^(subpoly_beta·sqrt(log n))` (0 drops it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub kind: BoundKind,
    pub n: f64,
    pub q: f64,
    pub delta: u32,
    pub constant: f64,
    pub subpoly_beta: f64,
    pub log_base: f64,
}

impl BoundQuery {
    pub fn new(kind: BoundKind, n: f64, q: f64) -> Self {
        Self {
            kind,
            n,
            q,
            delta: 2,
            constant: 1.0,
            subpoly_beta: 0.0,
            log_base: 2.0,
        }
    }
}

pub fn implied_bound(b: &BoundQuery) -> Result<f64, FrameworkError> {
    if !(b.n.is_finite() && b.n >= 2.0) {
        return Err(invalid("n", format!("must be at least 2, got {}", b.n)));
    }
    if !(b.q.is_finite() && b.q > 0.0) {
        return Err(invalid("q", format!("must be positive, got {}", b.q)));
    }
    if matches!(b.kind, BoundKind::SlabReport | BoundKind::SlabStab) && b.delta == 0 {
        return Err(invalid("delta", "degree must be at least 1"));
    }
    if !(b.log_base.is_finite() && b.log_base > 1.0) {
        return Err(invalid("log_base", format!("must exceed 1, got {}", b.log_base)));
    }
    let (n, q, d) = (b.n, b.q, f64::from(b.delta));
    let core = match b.kind {
        BoundKind::SlabReport => n.powf(d + 1.0) / q.powf((d + 3.0) * d / 2.0),
        BoundKind::SlabStab => n.powf(1.0 + 2.0 / (d + 1.0)) / q.powf(2.0 / d),
        BoundKind::AnnulusReport => n.powi(3) / q.powi(5),
        BoundKind::AnnulusStab => n.powf(1.5) / q.powf(0.75),
    };
    let slack = if b.kind.is_report() {
        2f64.powf(b.subpoly_beta * sqrt_log(n, b.log_base))
    } else {
        1.0
    };
    Ok(b.constant * core / slack)
}
