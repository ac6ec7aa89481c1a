use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RangeShape;
use crate::constructions::SlabFamily;
use crate::geom::Rect;
use crate::poly::{poly_int_bound, slab_overlap_runs, slab_pair_area_cap, Interval};

/// Folds `visit(i, j)` over every pair whose sweep keys overlap; all other
/// pairs have zero intersection area. The combine must be associative and
/// commutative so the result does not depend on scheduling.
pub(crate) fn sweep_pairs<R, A, V, C>(ranges: &[R], square: &Rect, identity: A, visit: V, combine: C) -> A
where
    R: RangeShape,
    A: Clone + Send + Sync,
    V: Fn(&mut A, usize, usize) + Sync,
    C: Fn(A, A) -> A + Sync,
{
    let keys: Vec<(f64, f64)> = ranges.par_iter().map(|r| r.sweep_key(square)).collect();
    let mut order: Vec<usize> = (0..ranges.len()).collect();
    order.sort_by(|&a, &b| keys[a].0.total_cmp(&keys[b].0).then(a.cmp(&b)));
    order
        .par_iter()
        .enumerate()
        .map(|(p, &i)| {
            let mut acc = identity.clone();
            for &j in &order[p + 1..] {
                if keys[j].0 > keys[i].1 {
                    break;
                }
                visit(&mut acc, i.min(j), i.max(j));
            }
            acc
        })
        .reduce(|| identity.clone(), &combine)
}

/// Largest pairwise intersection area found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMax {
    pub max_area: f64,
    pub argmax: Option<(usize, usize)>,
    /// Pairs covered: every pair when exhaustive, otherwise the sample size.
    pub pairs_checked: u64,
    pub exhaustive: bool,
}

impl PairMax {
    fn empty(exhaustive: bool) -> Self {
        Self {
            max_area: 0.0,
            argmax: None,
            pairs_checked: 0,
            exhaustive,
        }
    }

    fn offer(&mut self, area: f64, pair: (usize, usize)) {
        let better = match self.argmax {
            None => true,
            Some(cur) => area > self.max_area || (area == self.max_area && pair < cur),
        };
        if better {
            self.max_area = area;
            self.argmax = Some(pair);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if let Some(pair) = other.argmax {
            self.offer(other.max_area, pair);
        }
        self.pairs_checked += other.pairs_checked;
        self.exhaustive &= other.exhaustive;
        self
    }
}

/// Maximum pairwise intersection area: exhaustive when the family has at
/// most `max_pairs` pairs, otherwise over `max_pairs` seeded random pairs.
pub fn max_pair_area<R: RangeShape>(ranges: &[R], square: &Rect, max_pairs: u64, seed: u64) -> PairMax {
    let m = ranges.len() as u64;
    let total = m * m.saturating_sub(1) / 2;
    if total <= max_pairs {
        let mut out = sweep_pairs(
            ranges,
            square,
            PairMax::empty(true),
            |acc, i, j| acc.offer(ranges[i].pair_area(&ranges[j], square), (i, j)),
            PairMax::merge,
        );
        out.pairs_checked = total;
        // Pairs pruned by the sweep have zero area; report one if nothing overlapped.
        if out.argmax.is_none() && total > 0 {
            out.argmax = Some((0, 1));
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..max_pairs)
        .map(|_| loop {
            let i = rng.random_range(0..ranges.len());
            let j = rng.random_range(0..ranges.len());
            if i != j {
                break (i.min(j), i.max(j));
            }
        })
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = PairMax::empty(false);
            acc.offer(ranges[i].pair_area(&ranges[j], square), (i, j));
            acc.pairs_checked = 1;
            acc
        })
        .reduce(|| PairMax::empty(false), PairMax::merge)
}

/// Exhaustive comparison of every slab pair's overlap against the cap from
/// the bounded-interval lemma.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabCapCheck {
    pub pairs: u64,
    /// Pairs whose overlap exceeds `(i+1)·w·(i+1)³(w/step_i)^(1/i)`.
    pub area_violations: u64,
    /// Overlap pieces wider than `(i+1)³(w/step_i)^(1/i)`.
    pub extent_violations: u64,
    pub max_area: f64,
    /// Largest area/cap ratio over pairs with a positive cap.
    pub worst_ratio: f64,
    /// Most connected overlap pieces seen for one pair.
    pub max_regions: usize,
}

impl SlabCapCheck {
    fn empty() -> Self {
        Self {
            pairs: 0,
            area_violations: 0,
            extent_violations: 0,
            max_area: 0.0,
            worst_ratio: 0.0,
            max_regions: 0,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            pairs: self.pairs + o.pairs,
            area_violations: self.area_violations + o.area_violations,
            extent_violations: self.extent_violations + o.extent_violations,
            max_area: self.max_area.max(o.max_area),
            worst_ratio: self.worst_ratio.max(o.worst_ratio),
            max_regions: self.max_regions.max(o.max_regions),
        }
    }
}

pub fn slab_cap_check(family: &SlabFamily) -> SlabCapCheck {
    let square = family.square;
    let dom = Interval::new(square.min().x, square.max().x).expect("valid square");
    let w = family.width();
    // Vertical translates meet only along a curve; allow for rounding in k·w.
    let zero_tol = 1e-12 * w * dom.len();
    let m = family.len() as u64;
    let mut out = sweep_pairs(
        &family.slabs,
        &square,
        SlabCapCheck::empty(),
        |acc, a, b| {
            let (ia, ib) = (&family.indices[a], &family.indices[b]);
            let (sa, sb) = (&family.slabs[a], &family.slabs[b]);
            let area = sa.pair_area(sb, &square);
            acc.max_area = acc.max_area.max(area);
            match (0..ia.j.len()).rev().find(|&i| ia.j[i] != ib.j[i]) {
                None => {
                    if area > zero_tol {
                        acc.area_violations += 1;
                    }
                }
                Some(i) => {
                    let deg = i as u32 + 1;
                    let step = family.coeff_step(i + 1);
                    let cap = slab_pair_area_cap(deg, w, step);
                    if area > cap {
                        acc.area_violations += 1;
                    }
                    acc.worst_ratio = acc.worst_ratio.max(area / cap);
                    if area > 0.0 {
                        let runs = slab_overlap_runs(sa, sb, dom);
                        let extent = poly_int_bound(deg, w, step);
                        acc.extent_violations += runs.iter().filter(|r| r.len() > extent + 1e-9).count() as u64;
                        acc.max_regions = acc.max_regions.max(runs.len());
                    }
                }
            }
        },
        SlabCapCheck::merge,
    );
    out.pairs = m * m.saturating_sub(1) / 2;
    out
}
