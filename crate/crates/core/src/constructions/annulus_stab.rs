use serde::{Deserialize, Serialize};

use super::{
    check_positive, config_err, grid_steps, AnnulusFamily, AnnulusIndex, AnnulusParamsEcho, ConstructionError,
    Provenance, DEFAULT_MAX_FAMILY,
};
use crate::geom::{Annulus, Point2, Rect};

/// Radial span each grid point's rings must cover: `√122 − 9`.
pub const STAB_SPAN: f64 = 2.045_361_017_187_261;

/// Inputs for the stabbing annulus family: centers on a grid over
/// `S₁ = [11, 12] × [0, 1]`, rings covering `S₂ = [0, 1]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusStabParams {
    pub n: u64,
    pub q: f64,
    /// Replaces `T = 1/(2√Q − 1)`.
    pub t_side: Option<f64>,
    /// Replaces `w = 4(√122 − 9)·Q/n`.
    pub w: Option<f64>,
    pub max_family: u64,
}

impl AnnulusStabParams {
    pub fn new(n: u64, q: f64) -> Self {
        Self {
            n,
            q,
            t_side: None,
            w: None,
            max_family: DEFAULT_MAX_FAMILY,
        }
    }

    pub fn resolve(&self) -> Result<AnnulusStabResolved, ConstructionError> {
        if self.n == 0 {
            return Err(config_err("n", "must be at least 1"));
        }
        check_positive("q", self.q)?;
        let n = self.n as f64;
        let mut provenance = Provenance::new();
        let t_side = match self.t_side {
            Some(t) => {
                provenance.insert("t_side".into(), "override".into());
                t
            }
            None => {
                if self.q <= 0.25 {
                    return Err(config_err("q", "grid side 1/(2√Q − 1) needs Q > 1/4"));
                }
                provenance.insert("t_side".into(), "annulus-stab:T=1/(2*sqrt(q)-1)".into());
                1.0 / (2.0 * self.q.sqrt() - 1.0)
            }
        };
        check_positive("t_side", t_side)?;
        let w = match self.w {
            Some(w) => {
                provenance.insert("w".into(), "override".into());
                w
            }
            None => {
                provenance.insert("w".into(), "annulus-stab:w=4*(sqrt(122)-9)*q/n".into());
                4.0 * STAB_SPAN * self.q / n
            }
        };
        check_positive("w", w)?;
        if w > t_side {
            return Err(config_err(
                "q",
                format!("ring width w = {w} exceeds the grid side T = {t_side}; Q is too large for n"),
            ));
        }
        let ratio = STAB_SPAN / w;
        // A ratio within rounding of an integer counts as that integer.
        let rings = if (ratio - ratio.round()).abs() <= 1e-9 * ratio {
            ratio.round()
        } else {
            ratio.ceil()
        };
        let rings = rings as u64;
        provenance.insert("rings".into(), "annulus-stab:K=ceil((sqrt(122)-9)/w)".into());
        let steps = grid_steps(1.0, t_side);
        let points = (u64::from(steps) + 1).pow(2);
        provenance.insert("coverage".into(), "annulus-stab:t=(floor(1/T)+1)^2".into());
        let family_size = points
            .checked_mul(rings)
            .filter(|&s| s <= self.max_family)
            .ok_or_else(|| {
                config_err(
                    "family_size",
                    format!("exceeds the limit of {} ranges", self.max_family),
                )
            })?;
        Ok(AnnulusStabResolved {
            n: self.n,
            q: self.q,
            t_side,
            w,
            grid_steps: steps,
            rings_per_point: rings as u32,
            coverage: points,
            family_size,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusStabResolved {
    pub n: u64,
    pub q: f64,
    pub t_side: f64,
    pub w: f64,
    pub grid_steps: u32,
    pub rings_per_point: u32,
    /// Number of annuli covering each interior point of `S₂`.
    pub coverage: u64,
    pub family_size: u64,
    pub provenance: Provenance,
}

impl AnnulusStabResolved {
    pub fn grid_point(&self, a: u32, b: u32) -> Point2 {
        Point2::new(11.0 + f64::from(a) * self.t_side, f64::from(b) * self.t_side)
    }
}

/// Per grid point, rings `[r₀ + k·w, r₀ + (k+1)·w]` for `k < K`, where `r₀`
/// is the distance to the right side of `S₂`.
pub fn gen_annulus_stab(params: &AnnulusStabParams) -> Result<AnnulusFamily, ConstructionError> {
    let r = params.resolve()?;
    let mut annuli = Vec::with_capacity(r.family_size as usize);
    let mut indices = Vec::with_capacity(r.family_size as usize);
    for a in 0..=r.grid_steps {
        for b in 0..=r.grid_steps {
            let o = r.grid_point(a, b);
            let r0 = o.x - 1.0;
            for k in 0..r.rings_per_point {
                let radius = r0 + f64::from(k) * r.w;
                annuli.push(Annulus::new(o, radius, r.w).map_err(|e| config_err("w", e.to_string()))?);
                indices.push(AnnulusIndex { grid: (a, b), k });
            }
        }
    }
    Ok(AnnulusFamily {
        params: AnnulusParamsEcho::Stab(r),
        square: Rect::square(0.0, 0.0, 1.0).expect("unit square"),
        annuli,
        indices,
    })
}
