use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{invalid, FrameworkError, RangeShape};
use crate::constructions::{AnnulusFamily, AnnulusParamsEcho};
use crate::geom::Point2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma42Report {
    pub ell: usize,
    pub ell_formula: String,
    pub subsets: u64,
    pub uniform_subsets: u64,
    pub adversarial_subsets: u64,
    /// Maximum over subsets of the smallest pairwise intersection area.
    pub worst_min_pair_area: f64,
    pub worst_uniform: f64,
    pub worst_adversarial: f64,
    /// `n·w·sqrt(1/T)`.
    pub bound: f64,
    pub ratio: f64,
}

fn min_pair_area(family: &AnnulusFamily, subset: &[usize]) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..subset.len() {
        for b in a + 1..subset.len() {
            let area = family.annuli[subset[a]].pair_area(&family.annuli[subset[b]], &family.square);
            best = best.min(area);
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// `ℓ` annuli from the grid points nearest a random grid point, each chosen
/// to contain (or pass nearest to) one random point of the square, so the
/// rings overlap as much as the family allows.
fn adversarial_subset(
    family: &AnnulusFamily,
    groups: &[(Point2, Vec<usize>)],
    ell: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let seed_point = groups[rng.random_range(0..groups.len())].0;
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        groups[a]
            .0
            .distance_squared(seed_point)
            .total_cmp(&groups[b].0.distance_squared(seed_point))
            .then(a.cmp(&b))
    });
    let target = family.square.sample(rng);
    let mut out: Vec<usize> = order
        .iter()
        .take(ell)
        .map(|&g| {
            let (center, members) = &groups[g];
            let dist = center.distance(target);
            *members
                .iter()
                .min_by(|&&a, &&b| {
                    let ga = &family.annuli[a];
                    let gb = &family.annuli[b];
                    let da = (ga.inner_radius() + 0.5 * ga.width() - dist).abs();
                    let db = (gb.inner_radius() + 0.5 * gb.width() - dist).abs();
                    da.total_cmp(&db).then(a.cmp(&b))
                })
                .expect("nonempty group")
        })
        .collect();
    // Fewer grid points than ℓ: pad with other annuli.
    while out.len() < ell {
        let extra = rng.random_range(0..family.len());
        if !out.contains(&extra) {
            out.push(extra);
        }
    }
    out
}

/// Samples `ℓ`-subsets of a reporting annulus family, half uniformly and
/// half adversarially, and records the worst case of the smallest pairwise
/// intersection area inside a subset. `ℓ` defaults to `⌈c·w²/√T⌉`.
pub fn lemma42_experiment(
    family: &AnnulusFamily,
    ell: Option<usize>,
    c: f64,
    subset_samples: u64,
    seed: u64,
) -> Result<Lemma42Report, FrameworkError> {
    let AnnulusParamsEcho::Report(p) = &family.params else {
        return Err(invalid("family", "needs a reporting annulus family"));
    };
    let (n, w, t) = (p.n as f64, p.w, p.t_side);
    let (ell, ell_formula) = match ell {
        Some(l) => (l, "override".to_string()),
        None => (
            (c * w * w / t.sqrt()).ceil() as usize,
            "lemma42:ell=ceil(c*w^2/sqrt(T))".to_string(),
        ),
    };
    if ell < 2 {
        return Err(invalid("ell", format!("subset size must be at least 2, got {ell}")));
    }
    if ell > family.len() {
        return Err(invalid(
            "ell",
            format!("subset size {ell} exceeds the family size {}", family.len()),
        ));
    }

    let mut groups: Vec<(Point2, Vec<usize>)> = Vec::new();
    for (i, a) in family.annuli.iter().enumerate() {
        match groups.last_mut() {
            Some((c, members)) if *c == a.center() => members.push(i),
            _ => groups.push((a.center(), vec![i])),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = subset_samples.div_ceil(2);
    let adversarial = subset_samples - uniform;
    let mut subsets: Vec<(bool, Vec<usize>)> = Vec::with_capacity(subset_samples as usize);
    for _ in 0..uniform {
        subsets.push((false, sample(&mut rng, family.len(), ell).into_vec()));
    }
    for _ in 0..adversarial {
        subsets.push((true, adversarial_subset(family, &groups, ell, &mut rng)));
    }
    let (worst_uniform, worst_adversarial) = subsets
        .par_iter()
        .map(|(adv, s)| {
            let v = min_pair_area(family, s);
            if *adv {
                (0.0, v)
            } else {
                (v, 0.0)
            }
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let worst = worst_uniform.max(worst_adversarial);
    let bound = n * w * (1.0 / t).sqrt();
    Ok(Lemma42Report {
        ell,
        ell_formula,
        subsets: subset_samples,
        uniform_subsets: uniform,
        adversarial_subsets: adversarial,
        worst_min_pair_area: worst,
        worst_uniform,
        worst_adversarial,
        bound,
        ratio: worst / bound,
    })
}
