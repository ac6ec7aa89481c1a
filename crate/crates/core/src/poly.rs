//! Univariate polynomials, polynomial slabs `{(x, y) : P(x) <= y <= P(x) + w}`,
//! real root isolation, and exact slab–slab intersection areas.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point2, Rect};

/// Default absolute tolerance for root isolation.
pub const ROOT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid slab width {0}")]
    InvalidWidth(f64),
    #[error("root tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
}

/// Polynomial `a0 + a1 x + ... + aΔ x^Δ`, stored with trailing zeros removed.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct UniPoly {
    coeffs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for UniPoly {
    type Error = PolyError;
    fn try_from(v: Vec<f64>) -> Result<Self, PolyError> {
        UniPoly::new(v)
    }
}

impl From<UniPoly> for Vec<f64> {
    fn from(p: UniPoly) -> Self {
        p.coeffs
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(PolyError::InvalidPoly(format!("non-finite coefficient {bad}")));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c]).expect("finite constant")
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut coeffs = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= r * c;
            }
            coeffs = next;
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Self::new(coeffs).expect("finite")
    }

    /// `∫_a^b P(x) dx` from the exact antiderivative.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let prim = |x: f64| {
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (i, &c)| acc * x + c / (i as f64 + 1.0))
                * x
        };
        prim(b) - prim(a)
    }

    /// The polynomial `x ↦ P(x + s)`.
    pub fn shift(&self, s: f64) -> Self {
        let mut out: Vec<f64> = Vec::with_capacity(self.coeffs.len());
        for &c in self.coeffs.iter().rev() {
            // out ← out·(x + s) + c
            let mut next = vec![0.0; out.len() + 1];
            for (i, &o) in out.iter().enumerate() {
                next[i + 1] += o;
                next[i] += s * o;
            }
            next[0] += c;
            out = next;
        }
        Self::new(out).expect("finite")
    }

    pub fn add_constant(&self, c: f64) -> Self {
        self + &Self::constant(c)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect()).expect("finite")
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect()).expect("finite")
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, PolyError> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(PolyError::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// All real roots of `p` in `iv`, sorted, each to absolute precision `tol`.
///
/// The interval is cut at the (recursively isolated) critical points so that
/// `p` is monotone on every piece, then each sign change is bisected. Roots
/// of even multiplicity are reported only when they are hit exactly.
pub fn real_roots_in(p: &UniPoly, iv: Interval, tol: f64) -> Result<Vec<f64>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Degenerate("root isolation of the zero polynomial"));
    }
    if !(tol > 0.0) {
        return Err(PolyError::InvalidTolerance(tol));
    }
    let mut roots = roots_on(p, iv.lo, iv.hi, tol);
    roots.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        match out.last() {
            Some(&prev) if r - prev <= tol => {}
            _ => out.push(r),
        }
    }
    Ok(out)
}

fn roots_on(p: &UniPoly, lo: f64, hi: f64, tol: f64) -> Vec<f64> {
    match p.degree() {
        0 => Vec::new(),
        1 => {
            let r = -p.coeff(0) / p.coeff(1);
            if lo <= r && r <= hi {
                vec![r]
            } else {
                Vec::new()
            }
        }
        _ => {
            let mut knots = vec![lo];
            knots.extend(roots_on(&p.derivative(), lo, hi, tol));
            knots.push(hi);
            let mut roots = Vec::new();
            for pair in knots.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let (fa, fb) = (p.eval(a), p.eval(b));
                if fa == 0.0 {
                    roots.push(a);
                }
                if fa != 0.0 && fb != 0.0 && (fa < 0.0) != (fb < 0.0) {
                    roots.push(bisect(p, a, b, fa, tol));
                }
            }
            if p.eval(hi) == 0.0 {
                roots.push(hi);
            }
            roots
        }
    }
}

fn bisect(p: &UniPoly, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = p.eval(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Roots of `p` in `iv`, or none when `p` vanishes identically (no sign change
/// anywhere, so nothing to cut at).
fn cuts_of(p: &UniPoly, iv: Interval, out: &mut Vec<f64>) {
    if !p.is_zero() {
        out.extend(real_roots_in(p, iv, ROOT_TOL).expect("nonzero polynomial, positive tol"));
    }
}

/// Sorted, deduplicated breakpoints including the interval ends.
fn pieces(iv: Interval, mut cuts: Vec<f64>) -> Vec<Interval> {
    cuts.push(iv.lo);
    cuts.push(iv.hi);
    cuts.retain(|&c| iv.contains(c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| Interval { lo: p[0], hi: p[1] })
        .collect()
}

/// Merges adjacent intervals that share an endpoint.
fn merge_runs(parts: impl IntoIterator<Item = Interval>) -> Vec<Interval> {
    let mut runs: Vec<Interval> = Vec::new();
    for part in parts {
        match runs.last_mut() {
            Some(last) if last.hi == part.lo => last.hi = part.hi,
            _ => runs.push(part),
        }
    }
    runs
}

/// Length of the longest sub-interval of `domain` on which `|P(x)| <= w`.
pub fn max_bounded_interval_length(p: &UniPoly, w: f64, domain: Interval) -> Result<f64, PolyError> {
    if p.degree() == 0 {
        return Err(PolyError::Degenerate(
            "bounded-interval length of a constant polynomial",
        ));
    }
    if !(w > 0.0) {
        return Err(PolyError::InvalidWidth(w));
    }
    let mut cuts = Vec::new();
    cuts_of(&p.add_constant(-w), domain, &mut cuts);
    cuts_of(&p.add_constant(w), domain, &mut cuts);
    let good = pieces(domain, cuts)
        .into_iter()
        .filter(|piece| p.eval(piece.mid()).abs() <= w);
    Ok(merge_runs(good).iter().map(Interval::len).fold(0.0, f64::max))
}

/// Minimum and maximum of `p` over `domain`.
pub fn value_range(p: &UniPoly, domain: Interval) -> (f64, f64) {
    let mut xs = vec![domain.lo, domain.hi];
    if p.degree() >= 2 {
        cuts_of(&p.derivative(), domain, &mut xs);
    }
    xs.iter()
        .map(|&x| p.eval(x))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// `(Δ + 1)³ (w / d)^(1/Δ)`: the longest interval on which a degree-Δ
/// polynomial with leading coefficient of magnitude at least `d` can stay
/// within `[-w, w]`.
pub fn poly_int_bound(degree: u32, w: f64, d: f64) -> f64 {
    debug_assert!(degree >= 1 && w > 0.0 && d > 0.0);
    let k = f64::from(degree);
    (k + 1.0).powi(3) * (w / d).powf(1.0 / k)
}

/// Upper bound on the overlap area of two width-`w` slabs whose base
/// difference has degree `i` and leading coefficient of magnitude at least
/// `lead_gap`: at most `i + 1` connected pieces, each of height at most `w`
/// and x-extent at most [`poly_int_bound`].
pub fn slab_pair_area_cap(i: u32, w: f64, lead_gap: f64) -> f64 {
    f64::from(i + 1) * w * poly_int_bound(i, w, lead_gap)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolySlabRepr", into = "PolySlabRepr")]
pub struct PolySlab {
    base: UniPoly,
    width: f64,
}

#[derive(Serialize, Deserialize)]
struct PolySlabRepr {
    base: UniPoly,
    w: f64,
}

impl TryFrom<PolySlabRepr> for PolySlab {
    type Error = PolyError;
    fn try_from(r: PolySlabRepr) -> Result<Self, PolyError> {
        PolySlab::new(r.base, r.w)
    }
}

impl From<PolySlab> for PolySlabRepr {
    fn from(s: PolySlab) -> Self {
        Self {
            base: s.base,
            w: s.width,
        }
    }
}

impl PolySlab {
    pub fn new(base: UniPoly, width: f64) -> Result<Self, PolyError> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(PolyError::InvalidWidth(width));
        }
        Ok(Self { base, width })
    }

    pub fn base(&self) -> &UniPoly {
        &self.base
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn contains(&self, p: Point2) -> bool {
        slab_contains(self, p)
    }
}

pub fn slab_contains(s: &PolySlab, p: Point2) -> bool {
    let lo = s.base.eval(p.x);
    lo <= p.y && p.y <= lo + s.width
}

/// Area of the slab over `a <= x <= b`, which is `(b − a)·w` for any base.
pub fn slab_area_on_interval(s: &PolySlab, a: f64, b: f64) -> Result<f64, PolyError> {
    let iv = Interval::new(a, b)?;
    Ok(iv.len() * s.width)
}

/// Which expression realizes the overlap height
/// `max(0, min(w1, w2, w1 + D, w2 − D))` with `D = P1 − P2` on a piece.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Height {
    Empty,
    First,
    Second,
    FirstPlusDiff,
    SecondMinusDiff,
}

fn height_kind(w1: f64, w2: f64, diff: f64) -> Height {
    let cands = [
        (w1, Height::First),
        (w2, Height::Second),
        (w1 + diff, Height::FirstPlusDiff),
        (w2 - diff, Height::SecondMinusDiff),
    ];
    let (v, kind) = cands.into_iter().min_by(|a, b| a.0.total_cmp(&b.0)).expect("nonempty");
    if v <= 0.0 {
        Height::Empty
    } else {
        kind
    }
}

/// Pieces of `domain` on which the overlap height is a single polynomial,
/// tagged with that expression.
fn overlap_pieces(s1: &PolySlab, s2: &PolySlab, domain: Interval) -> (UniPoly, Vec<(Interval, Height)>) {
    let diff = &s1.base - &s2.base;
    let (w1, w2) = (s1.width, s2.width);
    let mut cuts = Vec::new();
    for shift in [0.0, w1, -w2, w1 - w2] {
        cuts_of(&diff.add_constant(shift), domain, &mut cuts);
    }
    let tagged = pieces(domain, cuts)
        .into_iter()
        .map(|piece| (piece, height_kind(w1, w2, diff.eval(piece.mid()))))
        .collect();
    (diff, tagged)
}

/// Exact `∫_domain max(0, min(P1 + w1, P2 + w2) − max(P1, P2)) dx`.
///
/// The domain is cut where the active expression can change (roots of
/// `D`, `D + w1`, `D − w2` and `D + w1 − w2`) and each piece is integrated
/// through the antiderivative of `D`.
pub fn slab_intersection_area(s1: &PolySlab, s2: &PolySlab, domain: Interval) -> f64 {
    let (w1, w2) = (s1.width, s2.width);
    let diff = &s1.base - &s2.base;
    if diff.is_zero() {
        return domain.len() * w1.min(w2);
    }
    let (diff, tagged) = overlap_pieces(s1, s2, domain);
    tagged
        .into_iter()
        .map(|(iv, kind)| {
            let len = iv.len();
            match kind {
                Height::Empty => 0.0,
                Height::First => w1 * len,
                Height::Second => w2 * len,
                Height::FirstPlusDiff => w1 * len + diff.integral(iv.lo, iv.hi),
                Height::SecondMinusDiff => w2 * len - diff.integral(iv.lo, iv.hi),
            }
        })
        .sum::<f64>()
        .max(0.0)
}

/// Maximal x-runs of `domain` over which the two slabs overlap with positive
/// height. Each run is the x-projection of one connected overlap region.
pub fn slab_overlap_runs(s1: &PolySlab, s2: &PolySlab, domain: Interval) -> Vec<Interval> {
    if (&s1.base - &s2.base).is_zero() {
        return if domain.is_empty() { Vec::new() } else { vec![domain] };
    }
    let (_, tagged) = overlap_pieces(s1, s2, domain);
    merge_runs(
        tagged
            .into_iter()
            .filter(|(_, kind)| *kind != Height::Empty)
            .map(|(iv, _)| iv),
    )
}

/// Exact area of `slab ∩ rect`.
pub fn slab_rect_area(s: &PolySlab, rect: &Rect) -> f64 {
    if rect.height() <= 0.0 || rect.width() <= 0.0 {
        return 0.0;
    }
    let band = PolySlab::new(UniPoly::constant(rect.min().y), rect.height()).expect("positive height");
    let xs = Interval::new(rect.min().x, rect.max().x).expect("valid rect");
    slab_intersection_area(s, &band, xs)
}
