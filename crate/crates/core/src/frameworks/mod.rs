//! Precondition checks for the two pointer-machine lower-bound frameworks,
//! the derandomization and subset experiments, and the closed-form space
//! bounds they imply.

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod afshani;
mod bounds;
mod chazelle;
mod derand;
mod lemma42;
mod pairs;

pub use afshani::{coverage_counts, probe_points, verify_afshani, AfshaniOptions, AfshaniReport};
pub use bounds::{afshani_bound, chazelle_bound, implied_bound, BoundKind, BoundQuery};
pub use chazelle::{verify_chazelle, ChazelleOptions, ChazelleReport, OutputStats};
pub use derand::{
    derand_int_experiment, derand_ring_experiment, DerandIntConfig, DerandReport, PointSource, Precondition,
};
pub use lemma42::{lemma42_experiment, Lemma42Report};
pub use pairs::{max_pair_area, slab_cap_check, PairMax, SlabCapCheck};

use crate::geom::{annulus_intersection_area, annulus_rect_area, Annulus, Point2, Rect};
use crate::poly::{slab_intersection_area, slab_rect_area, value_range, Interval, PolySlab};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameworkError {
    #[error("invalid {field}: {message}")]
    Invalid { field: &'static str, message: String },
}

pub(crate) fn invalid(field: &'static str, message: impl Into<String>) -> FrameworkError {
    FrameworkError::Invalid {
        field,
        message: message.into(),
    }
}

/// A query range the frameworks can count points in and intersect pairwise.
pub trait RangeShape: Sync {
    fn contains(&self, p: Point2) -> bool;

    /// Exact area of the range inside `rect`.
    fn area_in_rect(&self, rect: &Rect) -> f64;

    /// Exact intersection area of two ranges, restricted for slabs to the
    /// vertical strip above `square`.
    fn pair_area(&self, other: &Self, square: &Rect) -> f64;

    /// A coordinate interval such that two ranges with disjoint keys have
    /// zero intersection area over `square`.
    fn sweep_key(&self, square: &Rect) -> (f64, f64);
}

fn strip(square: &Rect) -> Interval {
    Interval::new(square.min().x, square.max().x).expect("valid rect")
}

impl RangeShape for PolySlab {
    fn contains(&self, p: Point2) -> bool {
        PolySlab::contains(self, p)
    }

    fn area_in_rect(&self, rect: &Rect) -> f64 {
        slab_rect_area(self, rect)
    }

    fn pair_area(&self, other: &Self, square: &Rect) -> f64 {
        slab_intersection_area(self, other, strip(square))
    }

    fn sweep_key(&self, square: &Rect) -> (f64, f64) {
        let (lo, hi) = value_range(self.base(), strip(square));
        (lo, hi + self.width())
    }
}

impl RangeShape for Annulus {
    fn contains(&self, p: Point2) -> bool {
        Annulus::contains(self, p)
    }

    fn area_in_rect(&self, rect: &Rect) -> f64 {
        annulus_rect_area(self, rect)
    }

    fn pair_area(&self, other: &Self, _square: &Rect) -> f64 {
        let d = self.center().distance(other.center());
        let (r1, o1) = (self.inner_radius(), self.outer_radius());
        let (r2, o2) = (other.inner_radius(), other.outer_radius());
        // Disjoint outer disks, or one ring inside the other's hole.
        if d >= o1 + o2 || d + o1 <= r2 || d + o2 <= r1 {
            return 0.0;
        }
        annulus_intersection_area(self, other)
    }

    fn sweep_key(&self, _square: &Rect) -> (f64, f64) {
        let c = self.center().x;
        (c - self.outer_radius(), c + self.outer_radius())
    }
}

/// Fixed-size bit set over point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn and_count(&self, other: &Bitset) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a & b).count_ones()))
            .sum()
    }

    /// Size of the intersection of all given sets.
    pub fn and_count_many(sets: &[&Bitset]) -> u64 {
        let Some(first) = sets.first() else { return 0 };
        (0..first.words.len())
            .map(|k| u64::from(sets.iter().fold(u64::MAX, |acc, s| acc & s.words[k]).count_ones()))
            .sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(k, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| 64 * k + b))
    }
}

/// Indices of the points inside `range`.
pub fn brute_force_report<R: RangeShape + ?Sized>(points: &[Point2], range: &R) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| range.contains(**p))
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn output_sets<R: RangeShape>(points: &[Point2], ranges: &[R]) -> Vec<Bitset> {
    use rayon::prelude::*;
    ranges
        .par_iter()
        .map(|r| {
            let mut set = Bitset::new(points.len());
            for (i, p) in points.iter().enumerate() {
                if r.contains(*p) {
                    set.insert(i);
                }
            }
            set
        })
        .collect()
}

/// Framework parameters: subset size `α`, intersection cap `c`, and the
/// exponent `β` standing in for the unspecified constants in `2^O(c)` and
/// `2^O(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: u32,
    pub c: u32,
    pub beta: f64,
}

impl BoundParams {
    pub fn new(alpha: u32, c: u32, beta: f64) -> Result<Self, FrameworkError> {
        if alpha < 2 {
            return Err(invalid("alpha", format!("must be at least 2, got {alpha}")));
        }
        if c < 2 {
            return Err(invalid("c", format!("must be at least 2, got {c}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", format!("must be positive, got {beta}")));
        }
        Ok(Self { alpha, c, beta })
    }
}
