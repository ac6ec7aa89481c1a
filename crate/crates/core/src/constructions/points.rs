use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{Point2, Rect};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub seed: u64,
    pub square: Rect,
    pub points: Vec<Point2>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `n` independent uniform points in `square`.
pub fn sample_points(n: usize, square: &Rect, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PointSet {
        seed,
        square: *square,
        points: (0..n).map(|_| square.sample(&mut rng)).collect(),
    }
}
