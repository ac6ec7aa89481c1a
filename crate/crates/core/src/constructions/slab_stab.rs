use serde::{Deserialize, Serialize};

use super::slab_report::index_tuples;
use super::{
    check_positive, checked_product, config_err, ConstructionError, IndexRange, Provenance, SlabFamily, SlabIndex,
    SlabParamsEcho, DEFAULT_MAX_FAMILY,
};
use crate::geom::Rect;
use crate::poly::{PolySlab, UniPoly};

/// Inputs for the stabbing slab family over the unit square. `n` is the
/// target family size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabStabParams {
    pub n: u64,
    pub delta: u32,
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
    /// Allowed relative deviation of the family size from `n`.
    pub slack: f64,
    /// Replaces `w = c₂·Q/n`.
    pub w: Option<f64>,
    /// Replaces the per-degree scales.
    pub d: Option<Vec<f64>>,
    pub max_family: u64,
}

impl SlabStabParams {
    pub fn new(n: u64, delta: u32, q: f64) -> Self {
        Self {
            n,
            delta,
            q,
            c1: 1.0,
            c2: 1.0,
            slack: 0.25,
            w: None,
            d: None,
            max_family: DEFAULT_MAX_FAMILY,
        }
    }

    /// Everything except the family-size check.
    fn layout(&self) -> Result<SlabStabResolved, ConstructionError> {
        if self.n == 0 {
            return Err(config_err("n", "must be at least 1"));
        }
        if self.delta == 0 {
            return Err(config_err("delta", "degree must be at least 1"));
        }
        check_positive("q", self.q)?;
        check_positive("c1", self.c1)?;
        check_positive("c2", self.c2)?;
        let n = self.n as f64;
        let delta = self.delta;
        let dl = f64::from(delta);
        let mut provenance = Provenance::new();

        let w = match self.w {
            Some(w) => {
                provenance.insert("w".into(), "override".into());
                w
            }
            None => {
                provenance.insert("w".into(), "slab-stab:w=c2*q/n".into());
                self.c2 * self.q / n
            }
        };
        check_positive("w", w)?;

        let d = match &self.d {
            Some(d) => {
                if d.len() != delta as usize {
                    return Err(config_err(
                        "d",
                        format!("expected {delta} per-degree scales, got {}", d.len()),
                    ));
                }
                provenance.insert("d".into(), "override".into());
                d.clone()
            }
            None => {
                provenance.insert(
                    "d".into(),
                    "slab-stab:d_i=c1*(q^(-2/(delta(delta+1)))*w^(-2/(delta+1)))^i*w".into(),
                );
                let unit = self.q.powf(-2.0 / (dl * (dl + 1.0))) * w.powf(-2.0 / (dl + 1.0));
                (1..=delta as i32).map(|i| self.c1 * unit.powi(i) * w).collect()
            }
        };
        for (i, &di) in d.iter().enumerate() {
            check_positive(&format!("d_{}", i + 1), di)?;
        }
        let j_ranges: Vec<IndexRange> = d
            .iter()
            .enumerate()
            .map(|(i, &di)| {
                let r = IndexRange {
                    lo: (1.0 / (2.0 * di)).floor() as i64,
                    hi: (1.0 / di).floor() as i64,
                };
                if r.hi == 0 {
                    Err(config_err(
                        format!("d_{}", i + 1),
                        format!("d_{} = {di} exceeds 1, leaving no positive index j_{}", i + 1, i + 1),
                    ))
                } else {
                    Ok(r)
                }
            })
            .collect::<Result<_, _>>()?;
        provenance.insert(
            "j_range".into(),
            "slab-stab:j_i in [floor(1/(2d_i)), floor(1/d_i)]".into(),
        );
        let big_k = (dl / w).ceil() as i64;
        let k_range = IndexRange { lo: -big_k, hi: big_k };
        provenance.insert(
            "k_range".into(),
            "slab-stab:k in [-ceil(delta/w), ceil(delta/w)]".into(),
        );

        let coverage = checked_product(j_ranges.iter().map(IndexRange::len), u64::MAX)?;
        provenance.insert("coverage".into(), "slab-stab:t=prod(j range sizes)".into());
        let family_size = checked_product([coverage, k_range.len()], self.max_family)?;
        Ok(SlabStabResolved {
            n: self.n,
            delta,
            q: self.q,
            c1: self.c1,
            c2: self.c2,
            slack: self.slack,
            w,
            d,
            j_ranges,
            k_range,
            coverage,
            family_size,
            provenance,
        })
    }

    pub fn resolve(&self) -> Result<SlabStabResolved, ConstructionError> {
        if !(self.slack >= 0.0) {
            return Err(config_err("slack", format!("must be nonnegative, got {}", self.slack)));
        }
        let r = self.layout()?;
        let target = self.n as f64;
        let dev = (r.family_size as f64 - target).abs();
        if dev > self.slack * target {
            return Err(config_err(
                "family_size",
                format!(
                    "{} ranges is not within {} of the target n = {}; tune c2",
                    r.family_size, self.slack, self.n
                ),
            ));
        }
        Ok(r)
    }

    /// Family size for these inputs, ignoring the slack check.
    pub fn family_size(&self) -> Result<u64, ConstructionError> {
        self.layout().map(|r| r.family_size)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabStabResolved {
    pub n: u64,
    pub delta: u32,
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
    pub slack: f64,
    pub w: f64,
    pub d: Vec<f64>,
    pub j_ranges: Vec<IndexRange>,
    pub k_range: IndexRange,
    /// Number of slabs covering each interior point of the unit square.
    pub coverage: u64,
    pub family_size: u64,
    pub provenance: Provenance,
}

/// Picks `c₂` from a log-spaced grid on `[lo, hi]` so the family size lands
/// as close to `n` as possible. Returns `(c₂, achieved size)`.
pub fn tune_c2(params: &SlabStabParams, lo: f64, hi: f64, steps: u32) -> Option<(f64, u64)> {
    let target = params.n as f64;
    let mut best: Option<(f64, u64)> = None;
    for s in 0..=steps {
        let c2 = lo * (hi / lo).powf(f64::from(s) / f64::from(steps.max(1)));
        let trial = SlabStabParams { c2, ..params.clone() };
        if let Ok(size) = trial.family_size() {
            let better = match best {
                None => true,
                Some((_, b)) => (size as f64 - target).abs() < (b as f64 - target).abs(),
            };
            if better {
                best = Some((c2, size));
            }
        }
    }
    best
}

/// Bases `Σ j_i d_i x^i + k·w`; every interior point of the unit square is
/// covered by exactly `Π |j-range|` slabs.
pub fn gen_slab_stab(params: &SlabStabParams) -> Result<SlabFamily, ConstructionError> {
    let r = params.resolve()?;
    let mut slabs = Vec::with_capacity(r.family_size as usize);
    let mut indices = Vec::with_capacity(r.family_size as usize);
    for j in index_tuples(&r.j_ranges) {
        for k in r.k_range.lo..=r.k_range.hi {
            let mut coeffs = vec![k as f64 * r.w];
            coeffs.extend(j.iter().zip(&r.d).map(|(&ji, &di)| ji as f64 * di));
            let base = UniPoly::new(coeffs).map_err(|e| config_err("base", e.to_string()))?;
            slabs.push(PolySlab::new(base, r.w).map_err(|e| config_err("w", e.to_string()))?);
            indices.push(SlabIndex { j: j.clone(), k });
        }
    }
    Ok(SlabFamily {
        params: SlabParamsEcho::Stab(r),
        square: Rect::square(0.0, 0.0, 1.0).expect("unit square"),
        slabs,
        indices,
    })
}
