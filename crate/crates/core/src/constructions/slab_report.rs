use serde::{Deserialize, Serialize};

use super::{
    check_log_base, check_positive, checked_product, config_err, sqrt_log, ConstructionError, IndexRange, Provenance,
    SlabFamily, SlabIndex, SlabParamsEcho, DEFAULT_MAX_FAMILY,
};
use crate::geom::Rect;
use crate::poly::{PolySlab, UniPoly};

/// Inputs for the reporting slab family on `S = [0, n]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabReportParams {
    pub n: u64,
    pub delta: u32,
    pub q: f64,
    pub c: f64,
    pub log_base: f64,
    /// Replaces `w = 16·Δ·Q`.
    pub w: Option<f64>,
    /// Replaces the per-degree scales `d_1, ..., d_Δ`.
    pub d: Option<Vec<f64>>,
    pub max_family: u64,
}

impl SlabReportParams {
    pub fn new(n: u64, delta: u32, q: f64) -> Self {
        Self {
            n,
            delta,
            q,
            c: 1.0,
            log_base: 2.0,
            w: None,
            d: None,
            max_family: DEFAULT_MAX_FAMILY,
        }
    }

    pub fn resolve(&self) -> Result<SlabReportResolved, ConstructionError> {
        if self.n < 2 {
            return Err(config_err("n", "must be at least 2"));
        }
        if self.delta == 0 {
            return Err(config_err("delta", "degree must be at least 1"));
        }
        check_positive("q", self.q)?;
        check_positive("c", self.c)?;
        check_log_base(self.log_base)?;
        let n = self.n as f64;
        let delta = self.delta;
        let mut provenance = Provenance::new();

        let w = match self.w {
            Some(w) => {
                provenance.insert("w".into(), "override".into());
                w
            }
            None => {
                provenance.insert("w".into(), "slab-report:w=16*delta*q".into());
                16.0 * f64::from(delta) * self.q
            }
        };
        check_positive("w", w)?;
        if w >= n / 6.0 {
            return Err(config_err("w", format!("w = {w} must be below n/6 = {}", n / 6.0)));
        }

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
                    "slab-report:d_i=c*delta^(3i)*w^(i+1)*2^(i*sqrt(log n))".into(),
                );
                let s = sqrt_log(n, self.log_base);
                let dl = f64::from(delta);
                (1..=delta as i32)
                    .map(|i| self.c * dl.powi(3 * i) * w.powi(i + 1) * 2f64.powf(f64::from(i) * s))
                    .collect()
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
                    lo: (n / (2.0 * di)).floor() as i64,
                    hi: (n / di).floor() as i64,
                };
                if r.hi == 0 {
                    Err(config_err(
                        format!("d_{}", i + 1),
                        format!(
                            "d_{} = {di} exceeds n = {n}, leaving no positive index j_{}",
                            i + 1,
                            i + 1
                        ),
                    ))
                } else {
                    Ok(r)
                }
            })
            .collect::<Result<_, _>>()?;
        provenance.insert(
            "j_range".into(),
            "slab-report:j_i in [floor(n/(2d_i)), floor(n/d_i)]".into(),
        );
        let k_range = IndexRange {
            lo: (n / (4.0 * w)).floor() as i64,
            hi: (n / (2.0 * w)).floor() as i64,
        };
        provenance.insert(
            "k_range".into(),
            "slab-report:k in [floor(n/(4w)), floor(n/(2w))]".into(),
        );

        // Highest base on the quarter strip x ∈ [0, n/4] must stay below 5n/6.
        let top = j_ranges
            .iter()
            .zip(&d)
            .enumerate()
            .map(|(i, (r, &di))| r.hi as f64 * di * 0.25f64.powi(i as i32 + 1))
            .sum::<f64>()
            + k_range.hi as f64 * w;
        if top >= 5.0 * n / 6.0 {
            return Err(config_err(
                "containment",
                format!(
                    "highest base reaches {top} at x = n/4, not below 5n/6 = {}",
                    5.0 * n / 6.0
                ),
            ));
        }

        let family_size = checked_product(
            j_ranges.iter().map(IndexRange::len).chain([k_range.len()]),
            self.max_family,
        )?;
        provenance.insert("family_size".into(), "slab-report:prod(range sizes)".into());

        Ok(SlabReportResolved {
            n: self.n,
            delta,
            q: self.q,
            c: self.c,
            log_base: self.log_base,
            w,
            d,
            j_ranges,
            k_range,
            family_size,
            provenance,
        })
    }
}

/// Every value [`gen_slab_report`] used, with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabReportResolved {
    pub n: u64,
    pub delta: u32,
    pub q: f64,
    pub c: f64,
    pub log_base: f64,
    pub w: f64,
    pub d: Vec<f64>,
    pub j_ranges: Vec<IndexRange>,
    pub k_range: IndexRange,
    pub family_size: u64,
    pub provenance: Provenance,
}

/// One slab per index tuple with base `Σ j_i d_i x^i / n^i + k·w`, ordered
/// lexicographically by `(j_1, ..., j_Δ, k)`.
pub fn gen_slab_report(params: &SlabReportParams) -> Result<SlabFamily, ConstructionError> {
    let r = params.resolve()?;
    let n = r.n as f64;
    let steps: Vec<f64> =
        r.d.iter()
            .enumerate()
            .map(|(i, &di)| di / n.powi(i as i32 + 1))
            .collect();
    let mut slabs = Vec::with_capacity(r.family_size as usize);
    let mut indices = Vec::with_capacity(r.family_size as usize);
    for j in index_tuples(&r.j_ranges) {
        for k in r.k_range.lo..=r.k_range.hi {
            let mut coeffs = vec![k as f64 * r.w];
            coeffs.extend(j.iter().zip(&steps).map(|(&ji, &s)| ji as f64 * s));
            let base = UniPoly::new(coeffs).map_err(|e| config_err("base", e.to_string()))?;
            slabs.push(PolySlab::new(base, r.w).map_err(|e| config_err("w", e.to_string()))?);
            indices.push(SlabIndex { j: j.clone(), k });
        }
    }
    let square = Rect::square(0.0, 0.0, n).map_err(|e| config_err("n", e.to_string()))?;
    Ok(SlabFamily {
        params: SlabParamsEcho::Report(r),
        square,
        slabs,
        indices,
    })
}

/// Cartesian product of the ranges in lexicographic order.
pub(crate) fn index_tuples(ranges: &[IndexRange]) -> Vec<Vec<i64>> {
    ranges.iter().fold(vec![Vec::new()], |acc, r| {
        acc.into_iter()
            .flat_map(|prefix| {
                (r.lo..=r.hi).map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect()
    })
}
