use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::chazelle_bound;
use super::{output_sets, Bitset, BoundParams, RangeShape};
use crate::geom::Point2;

/// Per-query output statistics; merging partial results over disjoint query
/// subsets gives the same values as one pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputStats {
    pub m: u64,
    pub min_output: u64,
    pub max_output: u64,
    pub cond1_violations: u64,
    /// Indices of queries with fewer than `Q` points, ascending.
    pub violating: Vec<usize>,
}

impl OutputStats {
    pub fn empty() -> Self {
        Self {
            m: 0,
            min_output: u64::MAX,
            max_output: 0,
            cond1_violations: 0,
            violating: Vec::new(),
        }
    }

    pub fn single(index: usize, size: u64, q: f64) -> Self {
        let bad = (size as f64) < q;
        Self {
            m: 1,
            min_output: size,
            max_output: size,
            cond1_violations: u64::from(bad),
            violating: if bad { vec![index] } else { Vec::new() },
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.m += other.m;
        self.min_output = self.min_output.min(other.min_output);
        self.max_output = self.max_output.max(other.max_output);
        self.cond1_violations += other.cond1_violations;
        self.violating.extend(other.violating);
        self.violating.sort_unstable();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChazelleOptions {
    /// Seeded α-tuples to sample when `α > 2`.
    pub tuple_samples: u64,
    /// Above this many pairs, pairs are sampled instead of enumerated.
    pub max_pairs: u64,
    pub seed: u64,
}

impl Default for ChazelleOptions {
    fn default() -> Self {
        Self {
            tuple_samples: 0,
            max_pairs: 20_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChazelleReport {
    pub n_points: u64,
    pub q: f64,
    pub params: BoundParams,
    #[serde(flatten)]
    pub outputs: OutputStats,
    pub max_pair_intersection: u64,
    pub max_pair: Option<(usize, usize)>,
    pub pairs_checked: u64,
    pub pairs_exhaustive: bool,
    pub tuples_sampled: u64,
    /// Largest `α`-wise output intersection over the sampled tuples.
    pub sampled_alpha_max: Option<u64>,
    /// Largest, over sampled tuples, of the smallest pairwise intersection
    /// inside the tuple; an upper bound on that tuple's `α`-wise count.
    pub sampled_alpha_pair_bound: Option<u64>,
    /// Whether the measured `α`-wise intersections stay within `c`.
    pub cond2_holds: bool,
    pub implied_bound: f64,
    pub implied_bound_formula: String,
}

impl ChazelleReport {
    pub fn violated(&self) -> bool {
        self.outputs.cond1_violations > 0 || !self.cond2_holds
    }
}

#[derive(Clone)]
struct PairCount {
    best: u64,
    arg: Option<(usize, usize)>,
    checked: u64,
}

impl PairCount {
    fn offer(&mut self, count: u64, pair: (usize, usize)) {
        let better = match self.arg {
            None => true,
            Some(cur) => count > self.best || (count == self.best && pair < cur),
        };
        if better {
            self.best = count;
            self.arg = Some(pair);
        }
        self.checked += 1;
    }

    fn merge(mut self, o: Self) -> Self {
        let checked = self.checked + o.checked;
        if let Some(pair) = o.arg {
            self.offer(o.best, pair);
        }
        self.checked = checked;
        self
    }
}

fn max_pair_count(sets: &[Bitset], max_pairs: u64, seed: u64) -> (PairCount, bool) {
    let m = sets.len();
    let total = (m as u64) * (m as u64).saturating_sub(1) / 2;
    let empty = PairCount {
        best: 0,
        arg: None,
        checked: 0,
    };
    if total <= max_pairs {
        let out = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut acc = empty.clone();
                for j in i + 1..m {
                    acc.offer(sets[i].and_count(&sets[j]), (i, j));
                }
                acc
            })
            .reduce(|| empty.clone(), PairCount::merge);
        return (out, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..max_pairs)
        .map(|_| {
            let v = sample(&mut rng, m, 2);
            let (i, j) = (v.index(0), v.index(1));
            (i.min(j), i.max(j))
        })
        .collect();
    let out = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = empty.clone();
            acc.offer(sets[i].and_count(&sets[j]), (i, j));
            acc
        })
        .reduce(|| empty.clone(), PairCount::merge);
    (out, false)
}

/// Measures both conditions of the output-size framework on concrete
/// points and queries: every query reports at least `Q` points, and no `α`
/// queries share more than `c` points.
pub fn verify_chazelle<R: RangeShape>(
    points: &[Point2],
    ranges: &[R],
    q: f64,
    params: BoundParams,
    opts: ChazelleOptions,
) -> ChazelleReport {
    let sets = output_sets(points, ranges);
    let outputs = sets
        .par_iter()
        .enumerate()
        .map(|(i, s)| OutputStats::single(i, s.count(), q))
        .reduce(OutputStats::empty, OutputStats::merge);
    let (pairs, exhaustive) = max_pair_count(&sets, opts.max_pairs, opts.seed);

    let alpha = params.alpha as usize;
    let mut tuples_sampled = 0;
    let (mut alpha_max, mut alpha_pair) = (None, None);
    if alpha > 2 && opts.tuple_samples > 0 && sets.len() >= alpha {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        let tuples: Vec<Vec<usize>> = (0..opts.tuple_samples)
            .map(|_| sample(&mut rng, sets.len(), alpha).into_vec())
            .collect();
        let (am, ap) = tuples
            .par_iter()
            .map(|t| {
                let refs: Vec<&Bitset> = t.iter().map(|&i| &sets[i]).collect();
                let all = Bitset::and_count_many(&refs);
                let mut min_pair = u64::MAX;
                for a in 0..t.len() {
                    for b in a + 1..t.len() {
                        min_pair = min_pair.min(sets[t[a]].and_count(&sets[t[b]]));
                    }
                }
                (all, min_pair)
            })
            .reduce(|| (0, 0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
        tuples_sampled = opts.tuple_samples;
        alpha_max = Some(am);
        alpha_pair = Some(ap);
    }
    let c = u64::from(params.c);
    let cond2_holds = if alpha == 2 {
        pairs.best <= c
    } else {
        alpha_max.is_none_or(|v| v <= c)
    };
    ChazelleReport {
        n_points: points.len() as u64,
        q,
        params,
        max_pair_intersection: pairs.best,
        max_pair: pairs.arg,
        pairs_checked: if exhaustive { pairs.checked } else { opts.max_pairs },
        pairs_exhaustive: exhaustive,
        tuples_sampled,
        sampled_alpha_max: alpha_max,
        sampled_alpha_pair_bound: alpha_pair,
        cond2_holds,
        implied_bound: chazelle_bound(outputs.m, q, params.alpha, params.c, params.beta),
        implied_bound_formula: "framework:m*q/(alpha*2^(beta*c))".into(),
        outputs,
    }
}
