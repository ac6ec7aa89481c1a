use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairs::max_pair_area;
use super::{invalid, output_sets, Bitset, FrameworkError, RangeShape};
use crate::constructions::{sample_points, sqrt_log};
use crate::geom::{Point2, Rect};

/// Where each trial's point set comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PointSource {
    /// Fresh uniform points in the square on every trial.
    Uniform { count: usize },
    /// The same points on every trial.
    Fixed(Vec<Point2>),
}

impl PointSource {
    fn len(&self) -> usize {
        match self {
            PointSource::Uniform { count } => *count,
            PointSource::Fixed(p) => p.len(),
        }
    }

    fn draw(&self, square: &Rect, seed: u64) -> Vec<Point2> {
        match self {
            PointSource::Uniform { count } => sample_points(*count, square, seed).points,
            PointSource::Fixed(p) => p.clone(),
        }
    }
}

/// A hypothesis of the lemma being exercised, as measured on the instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub quantity: String,
    pub measured: f64,
    pub required: f64,
    pub holds: bool,
    /// Range indices witnessing a failure.
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerandReport {
    pub experiment: String,
    pub n_points: u64,
    pub trials: u32,
    pub failures: u32,
    pub failure_rate: f64,
    pub threshold: f64,
    pub threshold_formula: String,
    pub regions_per_trial: u64,
    /// Per trial: the largest region count (intersection experiment) or the
    /// smallest range count (coverage experiment).
    pub extreme_counts: Vec<u64>,
    pub precondition: Option<Precondition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerandIntConfig {
    /// Exponent `k` in the threshold `3k·sqrt(log n)`.
    pub k: f64,
    pub trials: u32,
    pub seed: u64,
    /// Replaces `3k·sqrt(log n)`.
    pub threshold: Option<f64>,
    /// Above this many pairs, a fixed seeded sample of pairs is checked.
    pub max_pairs: u64,
    /// Size of deeper regions to sample (0 or 2 disables them).
    pub tuple_depth: u32,
    pub tuple_samples: u64,
    /// Constant `c` in the region-area hypothesis `area ≤ c·n/2^sqrt(log n)`.
    pub area_constant: Option<f64>,
    pub log_base: f64,
}

impl DerandIntConfig {
    pub fn new(k: f64, trials: u32, seed: u64) -> Self {
        Self {
            k,
            trials,
            seed,
            threshold: None,
            max_pairs: 5_000_000,
            tuple_depth: 0,
            tuple_samples: 0,
            area_constant: None,
            log_base: 2.0,
        }
    }
}

fn trial_seeds(seed: u64, trials: u32) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.random()).collect()
}

fn rate(failures: u32, trials: u32) -> f64 {
    f64::from(failures) / f64::from(trials)
}

/// Resamples the point set each trial and records whether some checked
/// intersection region holds at least the threshold number of points.
///
/// Areas scale with the square: for `n` points in `[0, n]²` the hypothesis
/// cap `c·|S|/(n·2^sqrt(log n))` is `c·n/2^sqrt(log n)`.
pub fn derand_int_experiment<R: RangeShape>(
    ranges: &[R],
    square: &Rect,
    source: &PointSource,
    cfg: &DerandIntConfig,
) -> Result<DerandReport, FrameworkError> {
    if cfg.trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let n_points = source.len();
    if n_points == 0 {
        return Err(invalid("points", "need at least one point"));
    }
    let n = n_points as f64;
    let (threshold, threshold_formula) = match cfg.threshold {
        Some(t) => (t, "override".to_string()),
        None => (
            3.0 * cfg.k * sqrt_log(n.max(2.0), cfg.log_base),
            "derand-int:3*k*sqrt(log n)".to_string(),
        ),
    };

    let m = ranges.len();
    let total = (m as u64) * (m as u64).saturating_sub(1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5851_f42d_4c95_7f2d);
    let pairs: Vec<(usize, usize)> = if total <= cfg.max_pairs {
        (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
    } else {
        (0..cfg.max_pairs)
            .map(|_| {
                let v = sample(&mut rng, m, 2);
                (v.index(0), v.index(1))
            })
            .collect()
    };
    let depth = cfg.tuple_depth as usize;
    let tuples: Vec<Vec<usize>> = if depth > 2 && m >= depth {
        (0..cfg.tuple_samples)
            .map(|_| sample(&mut rng, m, depth).into_vec())
            .collect()
    } else {
        Vec::new()
    };

    let mut failures = 0;
    let mut extreme_counts = Vec::with_capacity(cfg.trials as usize);
    for s in trial_seeds(cfg.seed, cfg.trials) {
        let pts = source.draw(square, s);
        let sets = output_sets(&pts, ranges);
        let pair_max = pairs
            .par_iter()
            .map(|&(i, j)| sets[i].and_count(&sets[j]))
            .max()
            .unwrap_or(0);
        let tuple_max = tuples
            .par_iter()
            .map(|t| Bitset::and_count_many(&t.iter().map(|&i| &sets[i]).collect::<Vec<_>>()))
            .max()
            .unwrap_or(0);
        let worst = pair_max.max(tuple_max);
        let checked_any = !pairs.is_empty() || !tuples.is_empty();
        if checked_any && worst as f64 >= threshold {
            failures += 1;
        }
        extreme_counts.push(worst);
    }

    let precondition = cfg.area_constant.map(|c| {
        let pm = max_pair_area(ranges, square, cfg.max_pairs, cfg.seed);
        let cap = c * square.area() / (n * 2f64.powf(sqrt_log(n.max(2.0), cfg.log_base)));
        let holds = pm.max_area <= cap;
        Precondition {
            quantity: "max pairwise region area".into(),
            measured: pm.max_area,
            required: cap,
            holds,
            offending: match (holds, pm.argmax) {
                (false, Some((i, j))) => vec![i, j],
                _ => Vec::new(),
            },
        }
    });

    Ok(DerandReport {
        experiment: "derand-int".into(),
        n_points: n_points as u64,
        trials: cfg.trials,
        failures,
        failure_rate: rate(failures, cfg.trials),
        threshold,
        threshold_formula,
        regions_per_trial: (pairs.len() + tuples.len()) as u64,
        extreme_counts,
        precondition,
    })
}

/// Resamples the point set each trial and records whether some range holds
/// fewer than `t` points. The area hypothesis `area(R ∩ S) ≥ c·n·t` is
/// measured exactly and reported, not enforced.
pub fn derand_ring_experiment<R: RangeShape>(
    ranges: &[R],
    square: &Rect,
    source: &PointSource,
    c: f64,
    t: f64,
    trials: u32,
    seed: u64,
) -> Result<DerandReport, FrameworkError> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let n_points = source.len();
    if n_points == 0 {
        return Err(invalid("points", "need at least one point"));
    }
    let required = c * t * square.area() / n_points as f64;
    let areas: Vec<f64> = ranges.par_iter().map(|r| r.area_in_rect(square)).collect();
    let min_area = areas.iter().copied().fold(f64::INFINITY, f64::min);
    let offending: Vec<usize> = areas
        .iter()
        .enumerate()
        .filter(|(_, &a)| a < required)
        .map(|(i, _)| i)
        .collect();
    let precondition = Precondition {
        quantity: "min in-square range area".into(),
        measured: if ranges.is_empty() { 0.0 } else { min_area },
        required,
        holds: offending.is_empty(),
        offending,
    };

    let mut failures = 0;
    let mut extreme_counts = Vec::with_capacity(trials as usize);
    for s in trial_seeds(seed, trials) {
        let pts = source.draw(square, s);
        let least = output_sets(&pts, ranges)
            .iter()
            .map(Bitset::count)
            .min()
            .unwrap_or(u64::MAX);
        if (least as f64) < t {
            failures += 1;
        }
        extreme_counts.push(least);
    }

    Ok(DerandReport {
        experiment: "derand-ring".into(),
        n_points: n_points as u64,
        trials,
        failures,
        failure_rate: rate(failures, trials),
        threshold: t,
        threshold_formula: "input:t".into(),
        regions_per_trial: ranges.len() as u64,
        extreme_counts,
        precondition: Some(precondition),
    })
}
