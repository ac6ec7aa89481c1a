mod args;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

use args::{
    AreaArgs, BoundArgs, Cli, Command, Experiment, ExperimentArgs, Framework, GenArgs, Kind, Shape, SweepArgs, Table,
    VerifyArgs,
};
use rangelb::calibration::calibrate;
use rangelb::constructions::{
    gen_annulus_report, gen_annulus_stab, gen_slab_report, gen_slab_stab, sample_points, sqrt_log, tune_c2,
    AnnulusParamsEcho, AnnulusReportParams, AnnulusStabParams, SlabParamsEcho, SlabReportParams, SlabStabParams,
};
use rangelb::frameworks::{
    derand_int_experiment, derand_ring_experiment, implied_bound, lemma42_experiment, verify_afshani, verify_chazelle,
    AfshaniOptions, BoundKind, BoundParams, BoundQuery, ChazelleOptions, DerandIntConfig, PointSource,
};
use rangelb::geom::{
    annulus_pair_area, lens_area, mc_area, radial_corner_gap, ring_int_bound, Annulus, AnnulusPairGeometry, Circle,
    McEstimate, Point2, Rect,
};
use rangelb::io::{self, BoundRecord, Family, InstanceFile, ReportFile, ReportPayload, Timings, SCHEMA_VERSION};

/// Usage or input error; maps to exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

type Outcome = Result<bool, Usage>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Area(a) => cmd_area(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn print_record<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string(v).expect("records hold finite numbers"));
}

fn need(v: Option<f64>, field: &str) -> Result<f64, Usage> {
    v.ok_or_else(|| Usage(format!("{field}: flag --{field} is required here")))
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let family = match a.kind {
        Kind::SlabReport => {
            let p = SlabReportParams {
                c: a.c,
                log_base: a.log_base,
                w: a.w,
                d: a.d.clone(),
                max_family: a.max_family,
                ..SlabReportParams::new(a.n, a.delta, a.q)
            };
            Family::SlabReport(gen_slab_report(&p)?)
        }
        Kind::SlabStab => {
            let mut p = SlabStabParams {
                c1: a.c1,
                c2: a.c2,
                slack: a.slack,
                w: a.w,
                d: a.d.clone(),
                max_family: a.max_family,
                ..SlabStabParams::new(a.n, a.delta, a.q)
            };
            if a.tune_c2 {
                let (c2, _) = tune_c2(&p, 1e-3, 1e3, 4000)
                    .ok_or_else(|| Usage("c2: no value in [1e-3, 1e3] gives a valid family".into()))?;
                p.c2 = c2;
            }
            Family::SlabStab(gen_slab_stab(&p)?)
        }
        Kind::AnnulusReport => {
            let p = AnnulusReportParams {
                c_prime: a.c_prime,
                log_base: a.log_base,
                w: a.w,
                t_side: a.t_side,
                max_family: a.max_family,
                ..AnnulusReportParams::new(a.n, a.q)
            };
            Family::AnnulusReport(gen_annulus_report(&p)?)
        }
        Kind::AnnulusStab => {
            let p = AnnulusStabParams {
                t_side: a.t_side,
                w: a.w,
                max_family: a.max_family,
                ..AnnulusStabParams::new(a.n, a.q)
            };
            Family::AnnulusStab(gen_annulus_stab(&p)?)
        }
    };
    let count = match (a.points, a.kind) {
        (Some(p), _) => Some(p),
        (None, Kind::SlabReport | Kind::AnnulusReport) => Some(a.n),
        (None, _) => None,
    };
    let points = match count {
        Some(c) => {
            let c = usize::try_from(c).map_err(|_| Usage(format!("points: {c} does not fit in memory")))?;
            Some(sample_points(c, &family.square(), a.seed.seed))
        }
        None => None,
    };
    let params = match &family {
        Family::SlabReport(f) | Family::SlabStab(f) => serde_json::to_value(&f.params)?,
        Family::AnnulusReport(f) | Family::AnnulusStab(f) => serde_json::to_value(&f.params)?,
    };
    let size = family.len();
    let kind = family.kind();
    // Enumerated count over n³/(T²w); the constant is not known in closed form.
    let count_ratio = match &family {
        Family::AnnulusReport(f) => match &f.params {
            AnnulusParamsEcho::Report(r) => Some(size as f64 / ((r.n as f64).powi(3) / (r.t_side * r.t_side * r.w))),
            AnnulusParamsEcho::Stab(_) => None,
        },
        _ => None,
    };
    let inst = InstanceFile::new(a.seed.seed, family, points);
    let bytes = io::write_json(&a.out, &inst)?;
    print_record(&json!({
        "kind": kind,
        "family_size": size,
        "points": inst.points.as_ref().map_or(0, |p| p.len()),
        "params": params,
        "count_ratio": count_ratio,
        "digest": io::digest(&bytes),
    }));
    Ok(false)
}

struct FamilyInfo {
    n: u64,
    q: f64,
    delta: u32,
}

fn family_info(f: &Family) -> FamilyInfo {
    match f {
        Family::SlabReport(s) | Family::SlabStab(s) => match &s.params {
            SlabParamsEcho::Report(p) => FamilyInfo {
                n: p.n,
                q: p.q,
                delta: p.delta,
            },
            SlabParamsEcho::Stab(p) => FamilyInfo {
                n: p.n,
                q: p.q,
                delta: p.delta,
            },
        },
        Family::AnnulusReport(s) | Family::AnnulusStab(s) => match &s.params {
            AnnulusParamsEcho::Report(p) => FamilyInfo {
                n: p.n,
                q: p.q,
                delta: 2,
            },
            AnnulusParamsEcho::Stab(p) => FamilyInfo {
                n: p.n,
                q: p.q,
                delta: 2,
            },
        },
    }
}

fn space_bound(f: &Family) -> Result<BoundRecord, Usage> {
    let info = family_info(f);
    let kind = f.kind();
    let query = BoundQuery {
        delta: info.delta,
        ..BoundQuery::new(kind, info.n as f64, info.q)
    };
    Ok(BoundRecord {
        kind,
        formula: kind.formula().to_string(),
        value: implied_bound(&query)?,
    })
}

fn write_report(
    path: &Path,
    digest: String,
    command: &str,
    seed: u64,
    payload: ReportPayload,
    space_bound: Option<BoundRecord>,
    started: Option<Instant>,
) -> Result<(), Usage> {
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        instance_digest: digest,
        command: command.to_string(),
        seed,
        payload,
        space_bound,
        timings: started.map(|t| Timings {
            wall_seconds: t.elapsed().as_secs_f64(),
        }),
    };
    io::write_json(path, &report)?;
    Ok(())
}

/// Default intersection cap: `3k·sqrt(log n)` with `k = Δ+1` for slabs and
/// the annulus family's `9·sqrt(log n)`.
fn default_cap(f: &Family, n_points: usize) -> u32 {
    let s = sqrt_log((n_points as f64).max(2.0), 2.0);
    let c = match f {
        Family::SlabReport(_) | Family::SlabStab(_) => 3.0 * f64::from(family_info(f).delta + 1) * s,
        Family::AnnulusReport(_) | Family::AnnulusStab(_) => 9.0 * s,
    };
    (c.ceil() as u32).max(2)
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let started = Instant::now();
    let (inst, digest) = io::read_instance(&a.inst)?;
    let q = a.q.unwrap_or_else(|| family_info(&inst.family).q);
    let square = inst.family.square();
    let seed = a.seed.seed;
    let (violated, payload, summary) = match a.framework {
        Framework::Chazelle => {
            let points = inst
                .points
                .as_ref()
                .ok_or_else(|| Usage(format!("{}: instance has no point set", a.inst.display())))?;
            let cap = a.cap.unwrap_or_else(|| default_cap(&inst.family, points.len()));
            let params = BoundParams::new(a.alpha, cap, a.beta)?;
            let opts = ChazelleOptions {
                tuple_samples: a.tuples,
                max_pairs: a.max_pairs,
                seed,
            };
            let r = match &inst.family {
                Family::SlabReport(f) | Family::SlabStab(f) => {
                    verify_chazelle(&points.points, &f.slabs, q, params, opts)
                }
                Family::AnnulusReport(f) | Family::AnnulusStab(f) => {
                    verify_chazelle(&points.points, &f.annuli, q, params, opts)
                }
            };
            let summary = format!(
                "chazelle: min output {} (Q = {q}), {} below Q, max pair intersection {} (c = {cap}), implied bound {:.6e} [{}]",
                r.outputs.min_output,
                r.outputs.cond1_violations,
                r.max_pair_intersection,
                r.implied_bound,
                r.implied_bound_formula
            );
            (r.violated(), ReportPayload::Chazelle(r), summary)
        }
        Framework::Afshani => {
            let cap = a.cap.unwrap_or(2);
            let params = BoundParams::new(a.alpha, cap, a.beta)?;
            let opts = AfshaniOptions {
                probe_grid: a.probe_grid,
                random_probes: a.random_probes,
                max_pairs: a.max_pairs,
                seed,
            };
            let r = match &inst.family {
                Family::SlabReport(f) | Family::SlabStab(f) => verify_afshani(&f.slabs, &square, params, opts)?,
                Family::AnnulusReport(f) | Family::AnnulusStab(f) => verify_afshani(&f.annuli, &square, params, opts)?,
            };
            let bound = r.implied_bound.map_or("unbounded".to_string(), |b| format!("{b:.6e}"));
            let summary = format!(
                "afshani: coverage {}..{} over {} probes (Q = {q}), max pair area {:.6e}, implied bound {bound} [{}]",
                r.min_coverage, r.max_coverage, r.probes, r.max_pair_area, r.implied_bound_formula
            );
            (r.violated(q), ReportPayload::Afshani(r), summary)
        }
    };
    let command = match a.framework {
        Framework::Chazelle => "verify chazelle",
        Framework::Afshani => "verify afshani",
    };
    let bound = space_bound(&inst.family)?;
    write_report(
        &a.report,
        digest,
        command,
        seed,
        payload,
        Some(bound),
        a.timings.then_some(started),
    )?;
    println!("{summary}{}", if violated { " VIOLATED" } else { "" });
    Ok(violated)
}

fn with_mc(area: f64, mc: Option<McEstimate>) -> serde_json::Value {
    match mc {
        Some(m) => json!({
            "area": area,
            "mc": m,
            "mc_z": if m.std_err > 0.0 { (m.estimate - area) / m.std_err } else { 0.0 },
        }),
        None => json!({ "area": area }),
    }
}

fn cmd_area(a: AreaArgs) -> Outcome {
    let seed = a.seed.seed;
    let record = match a.shape {
        Shape::Lens => {
            let (r1, r2, d) = (need(a.r1, "r1")?, need(a.r2, "r2")?, need(a.d, "d")?);
            let c1 = Circle::new(Point2::new(0.0, 0.0), r1)?;
            let c2 = Circle::new(Point2::new(d, 0.0), r2)?;
            let area = lens_area(&c1, &c2);
            let mc = match a.mc {
                Some(s) => {
                    let r = r1.min(r2);
                    let c = if r1 <= r2 { c1.center() } else { c2.center() };
                    let bbox = Rect::square(c.x - r, c.y - r, 2.0 * r)?;
                    Some(mc_area(|p| c1.contains(p) && c2.contains(p), &bbox, s, seed)?)
                }
                None => None,
            };
            json!({ "shape": "lens", "r1": r1, "r2": r2, "d": d, "result": with_mc(area, mc) })
        }
        Shape::Annulus => {
            let (r, w) = (need(a.r1, "r1")?, need(a.w, "w")?);
            let ann = Annulus::new(Point2::new(0.0, 0.0), r, w)?;
            let mc = match a.mc {
                Some(s) => Some(mc_area(|p| ann.contains(p), &ann.bounding_box(), s, seed)?),
                None => None,
            };
            json!({ "shape": "annulus", "r": r, "w": w, "result": with_mc(ann.area(), mc) })
        }
        Shape::AnnulusInt => {
            let (r1, r2, w, d) = (need(a.r1, "r1")?, need(a.r2, "r2")?, need(a.w, "w")?, need(a.d, "d")?);
            let g = AnnulusPairGeometry::new(r1, r2, w, d)?;
            let area = annulus_pair_area(&g);
            let mc = match a.mc {
                Some(s) => {
                    let (a1, a2) = g.annuli();
                    match a1.bounding_box().intersection(&a2.bounding_box()) {
                        Some(bbox) => Some(mc_area(|p| a1.contains(p) && a2.contains(p), &bbox, s, seed)?),
                        None => Some(McEstimate::ZERO),
                    }
                }
                None => None,
            };
            json!({ "shape": "annulus-int", "r1": r1, "r2": r2, "w": w, "d": d, "result": with_mc(area, mc) })
        }
        Shape::RingBound => {
            let (r1, r2, w, d) = (need(a.r1, "r1")?, need(a.r2, "r2")?, need(a.w, "w")?, need(a.d, "d")?);
            let n = a.n.unwrap_or(r1);
            let g = AnnulusPairGeometry::new(r1, r2, w, d)?;
            let bound = ring_int_bound(&g, n)?;
            let area = annulus_pair_area(&g);
            json!({
                "shape": "ring-bound", "r1": r1, "r2": r2, "w": w, "d": d, "n": n,
                "bound": bound, "formula": "ring:w*n*sqrt(w^2/((g+w)*d))",
                "area": area, "ratio": area / bound,
            })
        }
        Shape::CornerGap => {
            let (r1, r2, w, d) = (need(a.r1, "r1")?, need(a.r2, "r2")?, need(a.w, "w")?, need(a.d, "d")?);
            let g = AnnulusPairGeometry::new(r1, r2, w, d)?;
            let (x_b, x_d) = radial_corner_gap(&g)?;
            json!({
                "shape": "corner-gap", "r1": r1, "r2": r2, "w": w, "d": d,
                "x_b": x_b, "x_d": x_d, "gap": x_d - x_b,
                "closed_form": w * (r1 + r2 + w) / d, "formula": "gap:w*(r1+r2+w)/d",
            })
        }
    };
    print_record(&record);
    Ok(false)
}

fn point_count(a: &ExperimentArgs, inst: &InstanceFile) -> Result<usize, Usage> {
    let c = a
        .points
        .or_else(|| inst.points.as_ref().map(|p| p.len() as u64))
        .unwrap_or(family_info(&inst.family).n);
    usize::try_from(c).map_err(|_| Usage(format!("points: {c} does not fit in memory")))
}

fn load(a: &ExperimentArgs) -> Result<(InstanceFile, String), Usage> {
    let path = a
        .inst
        .as_ref()
        .ok_or_else(|| Usage("inst: flag --inst is required here".into()))?;
    Ok(io::read_instance(path)?)
}

fn cmd_experiment(a: ExperimentArgs) -> Outcome {
    let started = Instant::now();
    let seed = a.seed.seed;
    let (payload, digest, violated, command) = match a.name {
        Experiment::Calibrate => {
            print_record(&calibrate(seed));
            return Ok(false);
        }
        Experiment::DerandInt => {
            let (inst, digest) = load(&a)?;
            let source = PointSource::Uniform {
                count: point_count(&a, &inst)?,
            };
            let k = a.k.unwrap_or(match &inst.family {
                Family::SlabReport(_) | Family::SlabStab(_) => f64::from(family_info(&inst.family).delta + 1),
                Family::AnnulusReport(_) | Family::AnnulusStab(_) => 3.0,
            });
            let cfg = DerandIntConfig {
                threshold: a.threshold,
                max_pairs: a.max_pairs,
                area_constant: a.c,
                ..DerandIntConfig::new(k, a.trials, seed)
            };
            let square = inst.family.square();
            let r = match &inst.family {
                Family::SlabReport(f) | Family::SlabStab(f) => derand_int_experiment(&f.slabs, &square, &source, &cfg)?,
                Family::AnnulusReport(f) | Family::AnnulusStab(f) => {
                    derand_int_experiment(&f.annuli, &square, &source, &cfg)?
                }
            };
            let bad = r.failure_rate >= 0.5 || r.precondition.as_ref().is_some_and(|p| !p.holds);
            (ReportPayload::Derand(r), digest, bad, "experiment derand-int")
        }
        Experiment::DerandRing => {
            let (inst, digest) = load(&a)?;
            let source = PointSource::Uniform {
                count: point_count(&a, &inst)?,
            };
            let t = a.t.unwrap_or_else(|| family_info(&inst.family).q);
            let c = a.c.unwrap_or(8.0);
            let square = inst.family.square();
            let r = match &inst.family {
                Family::SlabReport(f) | Family::SlabStab(f) => {
                    derand_ring_experiment(&f.slabs, &square, &source, c, t, a.trials, seed)?
                }
                Family::AnnulusReport(f) | Family::AnnulusStab(f) => {
                    derand_ring_experiment(&f.annuli, &square, &source, c, t, a.trials, seed)?
                }
            };
            let bad = r.failure_rate >= 0.5 || r.precondition.as_ref().is_some_and(|p| !p.holds);
            (ReportPayload::Derand(r), digest, bad, "experiment derand-ring")
        }
        Experiment::Lemma42 => {
            let (inst, digest) = load(&a)?;
            let Family::AnnulusReport(f) = &inst.family else {
                return Err(Usage("inst: lemma42 needs an annulus-report instance".into()));
            };
            let r = lemma42_experiment(f, a.ell, a.ell_c, a.subsets, seed)?;
            (ReportPayload::Lemma42(r), digest, false, "experiment lemma42")
        }
    };
    print_record(&payload);
    if let Some(path) = &a.report {
        write_report(path, digest, command, seed, payload, None, a.timings.then_some(started))?;
    }
    Ok(violated)
}

fn cmd_bound(a: BoundArgs) -> Outcome {
    let kind: BoundKind = a.kind.parse()?;
    let query = BoundQuery {
        delta: a.delta,
        constant: a.constant,
        subpoly_beta: a.subpoly_beta,
        log_base: a.log_base,
        ..BoundQuery::new(kind, a.n as f64, a.q)
    };
    let value = implied_bound(&query)?;
    print_record(&json!({
        "kind": kind,
        "formula": kind.formula(),
        "n": a.n,
        "q": a.q,
        "delta": a.delta,
        "constant": a.constant,
        "subpoly_beta": a.subpoly_beta,
        "value": value,
    }));
    Ok(false)
}

fn cmd_sweep(a: SweepArgs) -> Outcome {
    if a.steps == 0 {
        return Err(Usage("steps: need at least one step".into()));
    }
    match a.table {
        Table::RingBound => {
            let (r1, r2, w) = (need(a.r1, "r1")?, need(a.r2, "r2")?, need(a.w, "w")?);
            AnnulusPairGeometry::new(r1, r2, w, w)?;
            println!("d,g,area,bound,ratio");
            for s in 0..a.steps {
                let d = w + (r2 - w) * s as f64 / a.steps as f64;
                let g = AnnulusPairGeometry::new(r1, r2, w, d)?;
                let area = annulus_pair_area(&g);
                let bound = ring_int_bound(&g, r1)?;
                println!("{d},{},{area},{bound},{}", g.g(), area / bound);
            }
        }
        Table::Bound => {
            let kind: BoundKind = a
                .kind
                .as_deref()
                .ok_or_else(|| Usage("kind: flag --kind is required here".into()))?
                .parse()?;
            let q = need(a.q, "qn")?;
            let lo = a
                .n_min
                .ok_or_else(|| Usage("n-min: flag --n-min is required here".into()))? as f64;
            let hi = a
                .n_max
                .ok_or_else(|| Usage("n-max: flag --n-max is required here".into()))? as f64;
            if !(lo >= 2.0 && hi >= lo) {
                return Err(Usage(format!("n-min: need 2 <= n-min <= n-max, got {lo} and {hi}")));
            }
            println!("n,value");
            let last = (a.steps - 1).max(1) as f64;
            for s in 0..a.steps {
                let n = (lo.ln() + (hi.ln() - lo.ln()) * s as f64 / last).exp().round();
                let query = BoundQuery {
                    delta: a.delta,
                    ..BoundQuery::new(kind, n, q)
                };
                println!("{n},{}", implied_bound(&query)?);
            }
        }
    }
    Ok(false)
}
