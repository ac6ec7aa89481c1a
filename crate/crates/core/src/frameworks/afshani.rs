use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::afshani_bound;
use super::pairs::max_pair_area;
use super::{invalid, BoundParams, FrameworkError, RangeShape};
use crate::geom::{Point2, Rect};

/// Probes stay this far inside the square; coverage is only guaranteed in
/// the interior.
pub const PROBE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AfshaniOptions {
    /// Cells per side of the probe grid; probes sit at cell centers.
    pub probe_grid: u32,
    pub random_probes: u32,
    pub max_pairs: u64,
    pub seed: u64,
}

impl Default for AfshaniOptions {
    fn default() -> Self {
        Self {
            probe_grid: 128,
            random_probes: 1000,
            max_pairs: 20_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfshaniReport {
    pub m: u64,
    pub params: BoundParams,
    pub probes: u64,
    /// Smallest number of ranges containing a probe.
    pub min_coverage: u64,
    pub max_coverage: u64,
    pub max_pair_area: f64,
    pub max_pair: Option<(usize, usize)>,
    pub pairs_checked: u64,
    pub pairs_exhaustive: bool,
    /// `None` when no pair overlaps, leaving the bound unbounded.
    pub implied_bound: Option<f64>,
    pub implied_bound_formula: String,
}

impl AfshaniReport {
    /// Coverage below `q` is the only framework condition that can fail on
    /// a concrete instance.
    pub fn violated(&self, q: f64) -> bool {
        (self.min_coverage as f64) < q
    }
}

/// Cell centers of a `grid × grid` probe grid plus `random` seeded interior
/// points.
pub fn probe_points(square: &Rect, grid: u32, random: u32, seed: u64) -> Vec<Point2> {
    let (min, w, h) = (square.min(), square.width(), square.height());
    let mut out = Vec::with_capacity((grid * grid + random) as usize);
    for a in 0..grid {
        for b in 0..grid {
            out.push(Point2::new(
                min.x + w * (f64::from(a) + 0.5) / f64::from(grid),
                min.y + h * (f64::from(b) + 0.5) / f64::from(grid),
            ));
        }
    }
    let inner = Rect::new(
        Point2::new(min.x + PROBE_MARGIN * w, min.y + PROBE_MARGIN * h),
        Point2::new(square.max().x - PROBE_MARGIN * w, square.max().y - PROBE_MARGIN * h),
    )
    .expect("margin smaller than the square");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.extend((0..random).map(|_| inner.sample(&mut rng)));
    out
}

/// Number of ranges containing each probe.
pub fn coverage_counts<R: RangeShape>(ranges: &[R], probes: &[Point2]) -> Vec<u64> {
    probes
        .par_iter()
        .map(|&p| ranges.iter().filter(|r| r.contains(p)).count() as u64)
        .collect()
}

/// Measures the coverage and pairwise-area conditions of the
/// area-based framework over `square`.
pub fn verify_afshani<R: RangeShape>(
    ranges: &[R],
    square: &Rect,
    params: BoundParams,
    opts: AfshaniOptions,
) -> Result<AfshaniReport, FrameworkError> {
    if opts.probe_grid < 10 {
        return Err(invalid(
            "probe_grid",
            format!("need at least 10×10 probes, got {}", opts.probe_grid),
        ));
    }
    let probes = probe_points(square, opts.probe_grid, opts.random_probes, opts.seed);
    let cov = coverage_counts(ranges, &probes);
    let min_coverage = cov.iter().copied().min().unwrap_or(0);
    let max_coverage = cov.iter().copied().max().unwrap_or(0);
    let pairs = max_pair_area(ranges, square, opts.max_pairs, opts.seed);
    Ok(AfshaniReport {
        m: ranges.len() as u64,
        params,
        probes: probes.len() as u64,
        min_coverage,
        max_coverage,
        max_pair_area: pairs.max_area,
        max_pair: pairs.argmax,
        pairs_checked: pairs.pairs_checked,
        pairs_exhaustive: pairs.exhaustive,
        implied_bound: afshani_bound(min_coverage as f64, pairs.max_area, params.alpha, params.beta),
        implied_bound_formula: "framework:t/(v*2^(beta*alpha))".into(),
    })
}
