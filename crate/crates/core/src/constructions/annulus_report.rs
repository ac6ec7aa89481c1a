use serde::{Deserialize, Serialize};

use super::{
    check_log_base, check_positive, config_err, grid_steps, sqrt_log, AnnulusFamily, AnnulusIndex, AnnulusParamsEcho,
    ConstructionError, Provenance, DEFAULT_MAX_FAMILY,
};
use crate::geom::{Annulus, Point2, Rect};

/// Inputs for the reporting annulus family: centers on a grid over
/// `S₁ = [11n, 12n] × [0, n]`, rings sweeping `S₂ = [0, n]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusReportParams {
    pub n: u64,
    pub q: f64,
    pub c_prime: f64,
    pub log_base: f64,
    /// Replaces `w = c′·Q`.
    pub w: Option<f64>,
    /// Replaces the grid side `T = w²·2^(2·sqrt(log n))`.
    pub t_side: Option<f64>,
    pub max_family: u64,
}

impl AnnulusReportParams {
    pub fn new(n: u64, q: f64) -> Self {
        Self {
            n,
            q,
            c_prime: 1.0,
            log_base: 2.0,
            w: None,
            t_side: None,
            max_family: DEFAULT_MAX_FAMILY,
        }
    }

    pub fn resolve(&self) -> Result<AnnulusReportResolved, ConstructionError> {
        if self.n < 2 {
            return Err(config_err("n", "must be at least 2"));
        }
        check_positive("q", self.q)?;
        check_positive("c_prime", self.c_prime)?;
        check_log_base(self.log_base)?;
        let n = self.n as f64;
        let mut provenance = Provenance::new();
        let w = match self.w {
            Some(w) => {
                provenance.insert("w".into(), "override".into());
                w
            }
            None => {
                provenance.insert("w".into(), "annulus-report:w=c'*q".into());
                self.c_prime * self.q
            }
        };
        check_positive("w", w)?;
        let t_side = match self.t_side {
            Some(t) => {
                provenance.insert("t_side".into(), "override".into());
                t
            }
            None => {
                provenance.insert("t_side".into(), "annulus-report:T=w^2*2^(2*sqrt(log n))".into());
                w * w * 2f64.powf(2.0 * sqrt_log(n, self.log_base))
            }
        };
        check_positive("t_side", t_side)?;
        if w >= t_side {
            return Err(config_err(
                "w",
                format!("w = {w} must be below the grid side T = {t_side}"),
            ));
        }
        let steps = grid_steps(n, t_side);
        provenance.insert("grid".into(), "annulus-report:(floor(n/T)+1)^2 points".into());
        Ok(AnnulusReportResolved {
            n: self.n,
            q: self.q,
            c_prime: self.c_prime,
            log_base: self.log_base,
            w,
            t_side,
            grid_steps: steps,
            max_family: self.max_family,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnulusReportResolved {
    pub n: u64,
    pub q: f64,
    pub c_prime: f64,
    pub log_base: f64,
    pub w: f64,
    pub t_side: f64,
    /// Grid points per axis minus one.
    pub grid_steps: u32,
    pub max_family: u64,
    pub provenance: Provenance,
}

impl AnnulusReportResolved {
    pub fn grid_point(&self, a: u32, b: u32) -> Point2 {
        let n = self.n as f64;
        Point2::new(11.0 * n + f64::from(a) * self.t_side, f64::from(b) * self.t_side)
    }

    /// Corners of `S₂` by increasing distance from `o`, ties broken by `(x, y)`.
    pub fn sorted_corners(&self, o: Point2) -> [Point2; 4] {
        let mut c = Rect::square(0.0, 0.0, self.n as f64).expect("n ≥ 2").corners();
        c.sort_by(|p, q| {
            o.distance_squared(*p)
                .total_cmp(&o.distance_squared(*q))
                .then(p.x.total_cmp(&q.x))
                .then(p.y.total_cmp(&q.y))
        });
        c
    }

    /// Inner radii for grid point `o`: start at `|OC₂|`, step by `w`, and keep
    /// a ring while its outer circle stays strictly inside `|OC₃|`.
    pub fn radii(&self, o: Point2) -> Vec<f64> {
        let c = self.sorted_corners(o);
        let (r0, stop) = (o.distance(c[1]), o.distance(c[2]));
        (0u64..)
            .map(|k| r0 + k as f64 * self.w)
            .take_while(|r| stop > r + self.w)
            .collect()
    }
}

pub fn gen_annulus_report(params: &AnnulusReportParams) -> Result<AnnulusFamily, ConstructionError> {
    let r = params.resolve()?;
    let mut annuli = Vec::new();
    let mut indices = Vec::new();
    for a in 0..=r.grid_steps {
        for b in 0..=r.grid_steps {
            let o = r.grid_point(a, b);
            for (k, radius) in r.radii(o).into_iter().enumerate() {
                if annuli.len() as u64 >= r.max_family {
                    return Err(config_err(
                        "family_size",
                        format!("exceeds the limit of {} ranges", r.max_family),
                    ));
                }
                annuli.push(Annulus::new(o, radius, r.w).map_err(|e| config_err("w", e.to_string()))?);
                indices.push(AnnulusIndex {
                    grid: (a, b),
                    k: k as u32,
                });
            }
        }
    }
    let square = Rect::square(0.0, 0.0, r.n as f64).expect("n ≥ 2");
    Ok(AnnulusFamily {
        params: AnnulusParamsEcho::Report(r),
        square,
        annuli,
        indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk() -> AnnulusReportParams {
        AnnulusReportParams {
            w: Some(8.0),
            t_side: Some(128.0),
            ..AnnulusReportParams::new(2048, 1.0)
        }
    }

    #[test]
    fn rejects_wide_rings() {
        let p = AnnulusReportParams {
            w: Some(200.0),
            t_side: Some(100.0),
            ..desk()
        };
        assert!(matches!(p.resolve(), Err(ConstructionError::Config { field, .. }) if field == "w"));
    }

    #[test]
    fn per_point_counts_follow_the_stepping_rule() {
        let fam = gen_annulus_report(&desk()).unwrap();
        let AnnulusParamsEcho::Report(r) = &fam.params else {
            unreachable!()
        };
        assert_eq!(r.grid_steps, 16);
        let mut total = 0usize;
        for a in 0..=r.grid_steps {
            for b in 0..=r.grid_steps {
                let o = r.grid_point(a, b);
                let c = r.sorted_corners(o);
                let span = (o.distance(c[2]) - o.distance(c[1])) / r.w;
                let count = fam.indices.iter().filter(|i| i.grid == (a, b)).count();
                assert!(count as f64 >= span.floor() - 1.0 && count as f64 <= span.ceil());
                total += count;
            }
        }
        assert_eq!(total, fam.len());
    }

    #[test]
    fn rings_sit_between_second_and_third_corner() {
        let fam = gen_annulus_report(&desk()).unwrap();
        let AnnulusParamsEcho::Report(r) = &fam.params else {
            unreachable!()
        };
        for a in &fam.annuli {
            let c = r.sorted_corners(a.center());
            assert!(a.inner_radius() >= a.center().distance(c[1]) - 1e-9);
            assert!(a.outer_radius() < a.center().distance(c[2]));
            // The nearest corners are the right-hand ones; the ring never
            // reaches back across the right side.
            assert_eq!(c[0].x, 2048.0);
            assert_eq!(c[1].x, 2048.0);
        }
    }

    #[test]
    fn consecutive_radii_differ_by_w() {
        let fam = gen_annulus_report(&desk()).unwrap();
        for pair in fam.annuli.windows(2) {
            if pair[0].center() == pair[1].center() {
                let gap = pair[1].inner_radius() - pair[0].inner_radius();
                assert!((gap - 8.0).abs() <= 1e-9, "{gap}");
            }
        }
    }

    #[test]
    fn size_tracks_cubic_formula() {
        let fam = gen_annulus_report(&desk()).unwrap();
        let formula = 2048f64.powi(3) / (128.0 * 128.0 * 8.0);
        let ratio = fam.len() as f64 / formula;
        assert!(ratio > 0.25 && ratio < 4.0, "ratio {ratio}");
    }

    #[test]
    fn corner_tie_break_is_lexicographic() {
        let r = desk().resolve().unwrap();
        // On the horizontal midline both right corners are equidistant.
        let c = r.sorted_corners(Point2::new(11.0 * 2048.0, 1024.0));
        assert_eq!(c[0], Point2::new(2048.0, 0.0));
        assert_eq!(c[1], Point2::new(2048.0, 2048.0));
    }
}
