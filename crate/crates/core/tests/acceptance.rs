//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! show up in the output.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rangelb::calibration::annulus_report_desk;
use rangelb::calibration::{
    annulus_ring_desk, annulus_stab_desk, ring_bound_sweep, slab_report_desk, slab_sparse, slab_stab_desk,
    LEMMA42_CONSTANT, LEMMA42_SUBSETS, RING_BOUND_CONSTANT, RING_SWEEP_STEPS, RING_SWEEP_TRIPLES, SLAB_REPORT_DESK_Q,
    SLAB_SPARSE_AREA_CONSTANT,
};
use rangelb::constructions::{
    gen_annulus_report, gen_annulus_stab, gen_slab_report, gen_slab_stab, sample_points, AnnulusParamsEcho, IndexRange,
    SlabParamsEcho,
};
use rangelb::frameworks::{
    derand_int_experiment, derand_ring_experiment, lemma42_experiment, slab_cap_check, DerandIntConfig, PointSource,
};
use rangelb::geom::{
    annulus_intersection_area, mc_area, radial_corner_gap, Annulus, AnnulusPairGeometry, Point2, Rect,
};
use rangelb::io;
use rangelb::poly::{max_bounded_interval_length, poly_int_bound, slab_intersection_area, Interval, PolySlab, UniPoly};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

// 1. x_D − x_B = w(r1 + r2 + w)/d.
fn corner_gap_identity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let r1: f64 = rng.random_range(1.0..100.0);
        let w = rng.random_range(0.01 * r1..0.49 * r1);
        let r2 = rng.random_range(r1 + w..r1 + w + 100.0);
        let lo = r2 - r1 + 2.0 * w;
        let d = lo + (r2 - lo) * rng.random_range(1e-6..1.0 - 1e-6);
        let g = AnnulusPairGeometry::new(r1, r2, w, d).map_err(|e| e.to_string())?;
        let (x_b, x_d) = radial_corner_gap(&g).map_err(|e| e.to_string())?;
        worst = worst.max(rel_err(x_d - x_b, w * (r1 + r2 + w) / d));
    }
    check(
        worst <= 1e-9,
        format!("1000 cases, max relative error {worst:.2e} (tolerance 1e-9)"),
    )
}

fn in_ring(c: Point2, r: f64, w: f64, p: Point2) -> bool {
    let d2 = (p.x - c.x).powi(2) + (p.y - c.y).powi(2);
    r * r <= d2 && d2 <= (r + w) * (r + w)
}

// 2. Closed-form annulus intersection against Monte Carlo.
fn annulus_area_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_z: f64 = 0.0;
    for case in 0..100 {
        let r1: f64 = rng.random_range(1.0..10.0);
        let w1 = rng.random_range(0.05 * r1..r1);
        let r2: f64 = rng.random_range(1.0..10.0);
        let w2 = rng.random_range(0.05 * r2..r2);
        let reach = r1 + w1 + r2 + w2;
        let dist = rng.random_range(0.0..0.95 * reach);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let c1 = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let c2 = Point2::new(c1.x + dist * theta.cos(), c1.y + dist * theta.sin());
        let a1 = Annulus::new(c1, r1, w1).map_err(|e| e.to_string())?;
        let a2 = Annulus::new(c2, r2, w2).map_err(|e| e.to_string())?;
        let exact = annulus_intersection_area(&a1, &a2);
        let Some(bbox) = a1.bounding_box().intersection(&a2.bounding_box()) else {
            if exact != 0.0 {
                return Err(format!("case {case}: disjoint boxes but area {exact}"));
            }
            continue;
        };
        let mc = mc_area(
            |p| in_ring(c1, r1, w1, p) && in_ring(c2, r2, w2, p),
            &bbox,
            1_000_000,
            case,
        )
        .map_err(|e| e.to_string())?;
        let z = if mc.std_err > 0.0 {
            (mc.estimate - exact).abs() / mc.std_err
        } else if exact <= 1e-9 * bbox.area() {
            0.0
        } else {
            f64::INFINITY
        };
        worst_z = worst_z.max(z);
    }
    check(
        worst_z <= 4.0,
        format!("100 pairs, 1e6 samples each, worst deviation {worst_z:.2} standard errors (limit 4)"),
    )
}

// 3. Longest interval where |P| ≤ w, for |a_Δ| ≥ d.
fn bounded_interval_lemma() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut violations = 0;
    let mut worst_ratio: f64 = 0.0;
    for delta in 1..=4u32 {
        for _ in 0..1000 {
            let d: f64 = 10f64.powf(rng.random_range(-2.0..2.0));
            let w: f64 = 10f64.powf(rng.random_range(-2.0..2.0));
            let lead = d * rng.random_range(1.0..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            // Clustered roots make the polynomial flat over a long stretch.
            let centre = rng.random_range(-5.0..5.0);
            let spread = 4.0 * (w / d).powf(1.0 / f64::from(delta)) * rng.random_range(0.0..1.0);
            let roots: Vec<f64> = (0..delta)
                .map(|_| centre + spread * rng.random_range(-0.5..0.5))
                .collect();
            let monic = UniPoly::from_roots(&roots);
            let mut c: Vec<f64> = monic.coeffs().iter().map(|x| x * lead).collect();
            c[0] += w * rng.random_range(-1.0..1.0);
            let p = UniPoly::new(c).map_err(|e| e.to_string())?;
            let bound = poly_int_bound(delta, w, d);
            let span = 10.0 * bound + 20.0;
            let dom = Interval::new(centre - span, centre + span).map_err(|e| e.to_string())?;
            let len = max_bounded_interval_length(&p, w, dom).map_err(|e| e.to_string())?;
            worst_ratio = worst_ratio.max(len / bound);
            if len > bound {
                violations += 1;
            }
        }
    }
    // Chebyshev polynomials attain the true extremal length 4(w/(2d))^(1/Δ).
    let mut cheb_err: f64 = 0.0;
    for delta in 1..=4u32 {
        let (w, d): (f64, f64) = (0.7, 3.0);
        let len = 4.0 * (w / (2.0 * d)).powf(1.0 / f64::from(delta));
        let s = 2.0 / len;
        let c: Vec<f64> = chebyshev(delta as usize)
            .iter()
            .enumerate()
            .map(|(i, a)| w * a * s.powi(i as i32))
            .collect();
        let p = UniPoly::new(c).unwrap();
        let got = max_bounded_interval_length(&p, w, Interval::new(-10.0, 10.0).unwrap()).unwrap();
        cheb_err = cheb_err.max(rel_err(got, len));
        if got > poly_int_bound(delta, w, d) {
            violations += 1;
        }
    }
    check(
        violations == 0 && cheb_err <= 1e-6,
        format!(
            "4000 random polynomials, {violations} violations, worst length/bound {worst_ratio:.3}; Chebyshev extremal length reproduced to {cheb_err:.1e}"
        ),
    )
}

/// Coefficients of the Chebyshev polynomial `T_k`, lowest degree first.
fn chebyshev(k: usize) -> Vec<f64> {
    let (mut prev, mut cur) = (vec![1.0], vec![0.0, 1.0]);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        (prev, cur) = (cur, next);
    }
    cur
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// Sign changes of `f` on a fine grid, refined by bisection.
fn kinks<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, out: &mut Vec<f64>) {
    let steps = 4000;
    let mut x0 = a;
    let mut f0 = f(a);
    for i in 1..=steps {
        let x1 = a + (b - a) * i as f64 / steps as f64;
        let f1 = f(x1);
        if f0 == 0.0 {
            out.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid) * flo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
}

fn quadrature_area(s1: &PolySlab, s2: &PolySlab, a: f64, b: f64) -> f64 {
    let (w1, w2) = (s1.width(), s2.width());
    let diff = |x: f64| s1.base().eval(x) - s2.base().eval(x);
    let height = |x: f64| {
        let (p1, p2) = (s1.base().eval(x), s2.base().eval(x));
        ((p1 + w1).min(p2 + w2) - p1.max(p2)).max(0.0)
    };
    let mut cuts = vec![a, b];
    kinks(diff, a, b, &mut cuts);
    kinks(|x| diff(x) + w1, a, b, &mut cuts);
    kinks(|x| diff(x) - w2, a, b, &mut cuts);
    kinks(|x| diff(x) + w1 - w2, a, b, &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| simpson(&height, p[0], p[1], 1e-15))
        .sum()
}

// 4. Self-intersection identity and quadrature agreement.
fn slab_area_identity_and_quadrature() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst_self: f64 = 0.0;
    for _ in 0..1000 {
        let deg = rng.random_range(1..=4);
        let c: Vec<f64> = (0..=deg).map(|_| rng.random_range(-10.0..10.0)).collect();
        let w = 10f64.powf(rng.random_range(-3.0..2.0));
        let s = PolySlab::new(UniPoly::new(c).unwrap(), w).unwrap();
        let a = rng.random_range(-5.0..5.0);
        let b = a + rng.random_range(0.01..10.0);
        let got = slab_intersection_area(&s, &s, Interval::new(a, b).unwrap());
        worst_self = worst_self.max(rel_err(got, (b - a) * w));
    }
    let mut worst_quad: f64 = 0.0;
    for case in 0..100 {
        let deg = rng.random_range(1..=4);
        let c1: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
        // Half the pairs are small perturbations so the overlap is substantial.
        let c2: Vec<f64> = if case % 2 == 0 {
            c1.iter().map(|x| x + rng.random_range(-0.2..0.2)).collect()
        } else {
            (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect()
        };
        let s1 = PolySlab::new(UniPoly::new(c1).unwrap(), rng.random_range(0.2..1.5)).unwrap();
        let s2 = PolySlab::new(UniPoly::new(c2).unwrap(), rng.random_range(0.2..1.5)).unwrap();
        let (a, b) = (-2.0, 2.0);
        let exact = slab_intersection_area(&s1, &s2, Interval::new(a, b).unwrap());
        let quad = quadrature_area(&s1, &s2, a, b);
        let err = if quad == 0.0 && exact == 0.0 {
            0.0
        } else {
            rel_err(exact, quad)
        };
        worst_quad = worst_quad.max(err);
    }
    check(
        worst_self <= 1e-9 && worst_quad <= 1e-9,
        format!("self-intersection max relative error {worst_self:.2e} over 1000; quadrature max relative error {worst_quad:.2e} over 100 (tolerance 1e-9)"),
    )
}

// 5. Exact area over the ring bound stays under a fitted constant.
fn ring_bound_shape() -> Verdict {
    let limit = 2.0 * RING_BOUND_CONSTANT;
    let seeds = [20_261_019u64, 77, 4242];
    let ratios: Vec<f64> = seeds
        .iter()
        .map(|&s| ring_bound_sweep(s, RING_SWEEP_TRIPLES, RING_SWEEP_STEPS))
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    check(
        worst <= limit,
        format!("fitted {RING_BOUND_CONSTANT:.4}; fresh seeds give {ratios:.4?}; limit {limit:.4}"),
    )
}

fn probes(square: &Rect, count: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (square.min(), square.max());
    let m = 1e-9 * square.width();
    (0..count)
        .map(|_| {
            Point2::new(
                rng.random_range(lo.x + m..hi.x - m),
                rng.random_range(lo.y + m..hi.y - m),
            )
        })
        .collect()
}

// 6. Stabbing families cover every probe exactly t times.
fn stabbing_coverage() -> Verdict {
    let slabs = gen_slab_stab(&slab_stab_desk()).map_err(|e| e.to_string())?;
    let SlabParamsEcho::Stab(sp) = &slabs.params else {
        return Err("slab-stab family has report parameters".into());
    };
    let t_slab: u64 =
        sp.d.iter()
            .map(|&d| ((1.0 / d).floor() - (1.0 / (2.0 * d)).floor() + 1.0) as u64)
            .product();
    let mut slab_bad = 0;
    for p in probes(&slabs.square, 10_000, 606) {
        let hits = slabs.slabs.iter().filter(|s| s.contains(p)).count() as u64;
        if hits != t_slab {
            slab_bad += 1;
        }
    }

    let annuli = gen_annulus_stab(&annulus_stab_desk()).map_err(|e| e.to_string())?;
    let AnnulusParamsEcho::Stab(ap) = &annuli.params else {
        return Err("annulus-stab family has report parameters".into());
    };
    let side = ((1.0 / ap.t_side) + 1e-9).floor() + 1.0;
    let t_ann = (side * side) as u64;
    let mut ann_bad = 0;
    for p in probes(&annuli.square, 10_000, 607) {
        let hits = annuli
            .annuli
            .iter()
            .filter(|a| in_ring(a.center(), a.inner_radius(), a.width(), p))
            .count() as u64;
        if hits != t_ann {
            ann_bad += 1;
        }
    }
    check(
        slab_bad == 0 && ann_bad == 0 && sp.coverage == t_slab && ap.coverage == t_ann,
        format!(
            "slabs ({} ranges): t = {t_slab}, {slab_bad}/10000 probes off; annuli ({} ranges): t = {t_ann}, {ann_bad}/10000 probes off",
            slabs.len(),
            annuli.len()
        ),
    )
}

// 7. Reporting slab desk instance.
fn slab_desk_instance() -> Verdict {
    let fam = gen_slab_report(&slab_report_desk()).map_err(|e| e.to_string())?;
    let SlabParamsEcho::Report(p) = &fam.params else {
        return Err("slab-report family has stab parameters".into());
    };
    let product: u64 = p.j_ranges.iter().map(IndexRange::len).product::<u64>() * p.k_range.len();
    let size_ok = product == fam.len() as u64;

    let q = SLAB_REPORT_DESK_Q;
    let mut worst_frac: f64 = 1.0;
    for seed in 1000..1020 {
        let pts = sample_points(p.n as usize, &fam.square, seed);
        let full = fam
            .slabs
            .iter()
            .filter(|s| pts.points.iter().filter(|&&pt| s.contains(pt)).count() as f64 >= q)
            .count();
        worst_frac = worst_frac.min(full as f64 / fam.len() as f64);
    }

    let cap = slab_cap_check(&fam);
    let all_pairs = (fam.len() * (fam.len() - 1) / 2) as u64;
    check(
        size_ok && worst_frac >= 0.95 && cap.area_violations == 0 && cap.extent_violations == 0 && cap.pairs == all_pairs,
        format!(
            "(a) {} slabs, index product {product}; (b) worst seed has {:.1}% of slabs with >= {q} points; (c) {} pairs, {} area and {} extent violations, worst area/cap {:.4}",
            fam.len(),
            100.0 * worst_frac,
            cap.pairs,
            cap.area_violations,
            cap.extent_violations,
            cap.worst_ratio
        ),
    )
}

// 8. Both derandomization experiments under their hypotheses.
fn derandomization() -> Verdict {
    let sparse = gen_slab_report(&slab_sparse()).map_err(|e| e.to_string())?;
    let n = sparse.square.width() as usize;
    let cfg = DerandIntConfig {
        area_constant: Some(SLAB_SPARSE_AREA_CONSTANT),
        ..DerandIntConfig::new(3.0, 20, 8080)
    };
    let int = derand_int_experiment(&sparse.slabs, &sparse.square, &PointSource::Uniform { count: n }, &cfg)
        .map_err(|e| e.to_string())?;
    let int_pre = int.precondition.as_ref().is_some_and(|p| p.holds);

    let ring = gen_annulus_report(&annulus_ring_desk()).map_err(|e| e.to_string())?;
    let AnnulusParamsEcho::Report(rp) = &ring.params else {
        return Err("ring family has stab parameters".into());
    };
    let (k, c, t) = (2.0, 8.0, rp.q);
    let hyp = c >= 4.0 * k && t >= (rp.n as f64).log2();
    let rr = derand_ring_experiment(
        &ring.annuli,
        &ring.square,
        &PointSource::Uniform { count: rp.n as usize },
        c,
        t,
        20,
        8081,
    )
    .map_err(|e| e.to_string())?;
    let ring_pre = rr.precondition.as_ref().is_some_and(|p| p.holds);
    check(
        int_pre && ring_pre && hyp && int.failure_rate < 0.5 && rr.failure_rate < 0.5,
        format!(
            "intersection: {} slabs, area hypothesis {}, bad rate {}/20 (threshold {:.1}); coverage: {} annuli, c = {c}, t = {t}, area hypothesis {}, bad rate {}/20",
            sparse.len(),
            if int_pre { "holds" } else { "fails" },
            int.failures,
            int.threshold,
            ring.len(),
            if ring_pre { "holds" } else { "fails" },
            rr.failures
        ),
    )
}

// 9. Small pairwise overlap inside every ℓ-subset.
fn subset_pair_area() -> Verdict {
    let fam = gen_annulus_report(&annulus_report_desk()).map_err(|e| e.to_string())?;
    let AnnulusParamsEcho::Report(p) = &fam.params else {
        return Err("annulus family has stab parameters".into());
    };
    let ell = (4.0 * p.w * p.w / p.t_side.sqrt()).ceil() as usize;
    let mut ratios = Vec::new();
    for seed in [909u64, 910, 911] {
        let r = lemma42_experiment(&fam, None, 4.0, LEMMA42_SUBSETS, seed).map_err(|e| e.to_string())?;
        if r.ell != ell {
            return Err(format!("subset size {} differs from ceil(4w^2/sqrt(T)) = {ell}", r.ell));
        }
        ratios.push(r.ratio);
    }
    let (lo, hi) = (LEMMA42_CONSTANT / 2.0, 2.0 * LEMMA42_CONSTANT);
    check(
        ratios.iter().all(|&r| lo <= r && r <= hi),
        format!("{} annuli, l = {ell}, fitted {LEMMA42_CONSTANT:.3}; fresh seeds give {ratios:.3?}; band [{lo:.3}, {hi:.3}]", fam.len()),
    )
}

#[derive(Default)]
struct Tally {
    compared: usize,
    failures: Vec<String>,
}

impl Tally {
    fn same(&mut self, label: &str, a: &[u8], b: &[u8]) {
        self.compared += 1;
        if a.is_empty() || a != b {
            self.failures.push(label.to_string());
        }
    }
}

fn rangelb(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_rangelb"))
        .args(args)
        .env_remove("RANGELB_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_default()
}

// 10. Byte-identical reruns, thread-count independence, round trips.
fn determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let f = |name: &str| dir.path().join(name);
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let mut t = Tally::default();

    let gens: [(&str, Vec<&str>); 4] = [
        (
            "slab-report",
            vec!["--n", "16384", "--qn", "1", "--w", "32", "--d", "8192,8192"],
        ),
        (
            "slab-stab",
            vec!["--n", "2000", "--qn", "8", "--c1", "0.25", "--tune-c2"],
        ),
        (
            "annulus-report",
            vec!["--n", "2048", "--qn", "1", "--w", "8", "--t-side", "128"],
        ),
        ("annulus-stab", vec!["--n", "2000", "--qn", "16"]),
    ];
    for (kind, extra) in &gens {
        let (a, b) = (f(&format!("{kind}-a.json")), f(&format!("{kind}-b.json")));
        for out in [&a, &b] {
            let mut args = vec!["gen", kind, "--seed", "5", "--out"];
            let o = s(out);
            args.push(&o);
            args.extend(extra.iter().copied());
            let (code, _) = rangelb(&args);
            if code != 0 {
                t.failures.push(format!("gen {kind} exit {code}"));
            }
        }
        t.same(&format!("gen {kind}"), &read(&a), &read(&b));
        if let Ok((inst, _)) = io::read_instance(&a) {
            t.same(&format!("round trip {kind}"), &read(&a), &io::to_bytes(&inst));
        }
    }

    let runs: [(&str, Vec<String>); 5] = [
        (
            "verify chazelle",
            vec![
                "verify".into(),
                "chazelle".into(),
                "--inst".into(),
                s(&f("slab-report-a.json")),
            ],
        ),
        (
            "verify afshani",
            vec![
                "verify".into(),
                "afshani".into(),
                "--inst".into(),
                s(&f("annulus-stab-a.json")),
                "--probe-grid".into(),
                "32".into(),
            ],
        ),
        (
            "verify afshani slabs",
            vec![
                "verify".into(),
                "afshani".into(),
                "--inst".into(),
                s(&f("slab-stab-a.json")),
            ],
        ),
        (
            "experiment derand-int",
            vec![
                "experiment".into(),
                "derand-int".into(),
                "--inst".into(),
                s(&f("slab-report-a.json")),
                "--c".into(),
                "48".into(),
            ],
        ),
        (
            "experiment lemma42",
            vec![
                "experiment".into(),
                "lemma42".into(),
                "--inst".into(),
                s(&f("annulus-report-a.json")),
            ],
        ),
    ];
    for (label, base) in &runs {
        let mut outputs = Vec::new();
        for (i, threads) in ["1", "4", "4"].iter().enumerate() {
            let rep = f(&format!("{}-{i}.json", label.replace(' ', "-")));
            let mut args: Vec<String> = base.clone();
            args.extend([
                "--seed".into(),
                "9".into(),
                "--threads".into(),
                threads.to_string(),
                "--report".into(),
                s(&rep),
            ]);
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, stdout) = rangelb(&argv);
            if code == 2 {
                t.failures.push(format!("{label} exit 2"));
            }
            outputs.push((read(&rep), stdout));
        }
        t.same(&format!("{label} rerun"), &outputs[1].0, &outputs[2].0);
        t.same(&format!("{label} threads 1 vs 4"), &outputs[0].0, &outputs[1].0);
        t.same(&format!("{label} stdout"), &outputs[0].1, &outputs[1].1);
    }

    for args in [
        vec![
            "area",
            "annulus-int",
            "--r1",
            "100",
            "--r2",
            "120",
            "--w",
            "5",
            "--d",
            "60",
            "--mc",
            "100000",
            "--seed",
            "3",
        ],
        vec!["bound", "--kind", "annulus-stab", "--n", "1e6", "--qn", "1e4"],
        vec![
            "sweep",
            "ring-bound",
            "--r1",
            "100",
            "--r2",
            "150",
            "--w",
            "4",
            "--steps",
            "20",
        ],
    ] {
        let (a, b) = (rangelb(&args), rangelb(&args));
        t.same(&args[..2].join(" "), &a.1, &b.1);
    }

    check(
        t.failures.is_empty(),
        format!(
            "{} byte comparisons across gen/verify/experiment/area/bound/sweep; mismatches: {:?}",
            t.compared, t.failures
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("corner gap identity", corner_gap_identity),
        ("annulus area vs Monte Carlo", annulus_area_oracle),
        ("bounded-interval length", bounded_interval_lemma),
        ("slab area identity and quadrature", slab_area_identity_and_quadrature),
        ("ring bound shape", ring_bound_shape),
        ("stabbing coverage exactness", stabbing_coverage),
        ("slab desk instance", slab_desk_instance),
        ("derandomization experiments", derandomization),
        ("subset pair area", subset_pair_area),
        ("determinism and format", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = run();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail} [{secs:.2} s]", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
