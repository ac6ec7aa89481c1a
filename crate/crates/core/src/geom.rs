//! Planar primitives: circles, annuli, rectangles, exact lens and annulus
//! intersection areas, the radial corner gap of two annuli, and a seeded
//! Monte Carlo area estimator used as an oracle for all closed forms.
//!
//! Annuli are closed sets: a point on either boundary circle is contained.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid {shape}: {reason}")]
    InvalidShape { shape: &'static str, reason: String },
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },
}

fn invalid(shape: &'static str, reason: impl Into<String>) -> GeomError {
    GeomError::InvalidShape {
        shape,
        reason: reason.into(),
    }
}

fn domain(op: &'static str, reason: impl Into<String>) -> GeomError {
    GeomError::Domain {
        op,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance_squared(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircleRepr", into = "CircleRepr")]
pub struct Circle {
    center: Point2,
    radius: f64,
}

#[derive(Serialize, Deserialize)]
struct CircleRepr {
    center: Point2,
    radius: f64,
}

impl TryFrom<CircleRepr> for Circle {
    type Error = GeomError;
    fn try_from(r: CircleRepr) -> Result<Self, GeomError> {
        Circle::new(r.center, r.radius)
    }
}

impl From<Circle> for CircleRepr {
    fn from(c: Circle) -> Self {
        Self {
            center: c.center,
            radius: c.radius,
        }
    }
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self, GeomError> {
        if !center.is_finite() {
            return Err(invalid("circle", "center must be finite"));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid("circle", format!("radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// Closed-disk membership.
    pub fn contains(&self, p: Point2) -> bool {
        self.center.distance_squared(p) <= self.radius * self.radius
    }
}

/// Region between two concentric circles of radii `r` and `r + w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AnnulusRepr", into = "AnnulusRepr")]
pub struct Annulus {
    center: Point2,
    inner_radius: f64,
    width: f64,
}

#[derive(Serialize, Deserialize)]
struct AnnulusRepr {
    center: Point2,
    r: f64,
    w: f64,
}

impl TryFrom<AnnulusRepr> for Annulus {
    type Error = GeomError;
    fn try_from(a: AnnulusRepr) -> Result<Self, GeomError> {
        Annulus::new(a.center, a.r, a.w)
    }
}

impl From<Annulus> for AnnulusRepr {
    fn from(a: Annulus) -> Self {
        Self {
            center: a.center,
            r: a.inner_radius,
            w: a.width,
        }
    }
}

impl Annulus {
    pub fn new(center: Point2, inner_radius: f64, width: f64) -> Result<Self, GeomError> {
        if !center.is_finite() {
            return Err(invalid("annulus", "center must be finite"));
        }
        if !(inner_radius > 0.0 && inner_radius.is_finite()) {
            return Err(invalid(
                "annulus",
                format!("inner radius must be positive, got {inner_radius}"),
            ));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid("annulus", format!("width must be positive, got {width}")));
        }
        Ok(Self {
            center,
            inner_radius,
            width,
        })
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn outer_radius(&self) -> f64 {
        self.inner_radius + self.width
    }

    pub fn area(&self) -> f64 {
        annulus_area(self)
    }

    pub fn contains(&self, p: Point2) -> bool {
        annulus_contains(self, p)
    }

    /// Axis-aligned bounding box of the outer disk.
    pub fn bounding_box(&self) -> Rect {
        let r = self.outer_radius();
        Rect {
            min: Point2::new(self.center.x - r, self.center.y - r),
            max: Point2::new(self.center.x + r, self.center.y + r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RectRepr", into = "RectRepr")]
pub struct Rect {
    min: Point2,
    max: Point2,
}

#[derive(Serialize, Deserialize)]
struct RectRepr {
    min: Point2,
    max: Point2,
}

impl TryFrom<RectRepr> for Rect {
    type Error = GeomError;
    fn try_from(r: RectRepr) -> Result<Self, GeomError> {
        Rect::new(r.min, r.max)
    }
}

impl From<Rect> for RectRepr {
    fn from(r: Rect) -> Self {
        Self { min: r.min, max: r.max }
    }
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Result<Self, GeomError> {
        if !min.is_finite() || !max.is_finite() {
            return Err(invalid("rect", "corners must be finite"));
        }
        if min.x > max.x || min.y > max.y {
            return Err(invalid("rect", "min corner must not exceed max corner"));
        }
        Ok(Self { min, max })
    }

    /// Axis-aligned square with lower-left corner `(x, y)`.
    pub fn square(x: f64, y: f64, side: f64) -> Result<Self, GeomError> {
        Self::new(Point2::new(x, y), Point2::new(x + side, y + side))
    }

    pub fn min(&self) -> Point2 {
        self.min
    }

    pub fn max(&self) -> Point2 {
        self.max
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.min.x <= p.x && p.x <= self.max.x && self.min.y <= p.y && p.y <= self.max.y
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let min = Point2::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y));
        let max = Point2::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y));
        (min.x <= max.x && min.y <= max.y).then_some(Rect { min, max })
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    /// Uniform point in the rectangle.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        Point2::new(self.min.x + self.width() * u, self.min.y + self.height() * v)
    }
}

/// Two annuli of common width in the canonical frame: the first centered at
/// the origin with inner radius `r1`, the second at `(d, 0)` with inner
/// radius `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPairGeometry {
    r1: f64,
    r2: f64,
    w: f64,
    d: f64,
}

impl AnnulusPairGeometry {
    pub fn new(r1: f64, r2: f64, w: f64, d: f64) -> Result<Self, GeomError> {
        if ![r1, r2, w, d].iter().all(|v| v.is_finite()) {
            return Err(invalid("annulus pair", "all parameters must be finite"));
        }
        if !(w > 0.0) {
            return Err(invalid("annulus pair", "w must be positive"));
        }
        if !(w < r1) {
            return Err(invalid("annulus pair", format!("need w < r1, got w={w}, r1={r1}")));
        }
        if !(r1 + w <= r2) {
            return Err(invalid(
                "annulus pair",
                format!("need r1 + w <= r2, got r1={r1}, w={w}, r2={r2}"),
            ));
        }
        if !(d >= 0.0) {
            return Err(invalid("annulus pair", "d must be nonnegative"));
        }
        Ok(Self { r1, r2, w, d })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// Gap between the two inner circles along the center line, floored at 0.
    pub fn g(&self) -> f64 {
        (self.r1 - self.r2 + self.d).max(0.0)
    }

    /// The pair realized as concrete annuli.
    pub fn annuli(&self) -> (Annulus, Annulus) {
        let a1 = Annulus::new(Point2::new(0.0, 0.0), self.r1, self.w).expect("validated");
        let a2 = Annulus::new(Point2::new(self.d, 0.0), self.r2, self.w).expect("validated");
        (a1, a2)
    }
}

/// Area of the circular segment with central angle `x` in a circle of radius `r`.
fn segment_area(r: f64, x: f64) -> f64 {
    // x - sin x loses everything to cancellation for small angles.
    let f = if x < 1e-2 {
        let x2 = x * x;
        x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0))
    } else {
        x - x.sin()
    };
    0.5 * r * r * f
}

/// Area of the intersection of two disks with radii `r1`, `r2` whose centers
/// are `d` apart.
pub fn disk_overlap_area(r1: f64, r2: f64, d: f64) -> f64 {
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return PI * r * r;
    }
    let prod = (r1 + r2 - d) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    let chord_half = prod.max(0.0).sqrt() / (2.0 * d);
    let a1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let a2 = (d * d + r2 * r2 - r1 * r1) / (2.0 * d);
    let t1 = chord_half.atan2(a1);
    let t2 = chord_half.atan2(a2);
    segment_area(r1, 2.0 * t1) + segment_area(r2, 2.0 * t2)
}

/// Area of `disk(c1) ∩ disk(c2)`.
pub fn lens_area(c1: &Circle, c2: &Circle) -> f64 {
    disk_overlap_area(c1.radius, c2.radius, c1.center.distance(c2.center))
}

pub fn annulus_area(a: &Annulus) -> f64 {
    PI * a.width * (2.0 * a.inner_radius + a.width)
}

pub fn annulus_contains(a: &Annulus, p: Point2) -> bool {
    let d2 = a.center.distance_squared(p);
    let r = a.inner_radius;
    let big = a.outer_radius();
    r * r <= d2 && d2 <= big * big
}

/// Exact area of `a1 ∩ a2` by inclusion–exclusion over the four disk pairs.
pub fn annulus_intersection_area(a1: &Annulus, a2: &Annulus) -> f64 {
    let d = a1.center.distance(a2.center);
    annulus_overlap_at_distance(a1.inner_radius, a1.width, a2.inner_radius, a2.width, d)
        .clamp(0.0, annulus_area(a1).min(annulus_area(a2)))
}

fn annulus_overlap_at_distance(r1: f64, w1: f64, r2: f64, w2: f64, d: f64) -> f64 {
    let (o1, o2) = (r1 + w1, r2 + w2);
    disk_overlap_area(o1, o2, d) - disk_overlap_area(o1, r2, d) - disk_overlap_area(r1, o2, d)
        + disk_overlap_area(r1, r2, d)
}

/// Exact intersection area of the canonical annulus pair.
pub fn annulus_pair_area(geom: &AnnulusPairGeometry) -> f64 {
    let (a1, a2) = geom.annuli();
    annulus_intersection_area(&a1, &a2)
}

/// The bare upper-bound expression `w·n·sqrt(w² / ((g + w)·d))` for the
/// intersection area of two annuli of width `w`, valid for `w <= d < r2`.
/// Carries no hidden constant.
pub fn ring_int_bound(geom: &AnnulusPairGeometry, n: f64) -> Result<f64, GeomError> {
    let AnnulusPairGeometry { r2, w, d, .. } = *geom;
    if !(w <= d && d < r2) {
        return Err(domain(
            "ring_int_bound",
            format!("center distance d={d} outside [w, r2) = [{w}, {r2})"),
        ));
    }
    if !(n > 0.0 && n.is_finite()) {
        return Err(domain("ring_int_bound", format!("n must be positive, got {n}")));
    }
    Ok(w * n * (w * w / ((geom.g() + w) * d)).sqrt())
}

/// X-coordinates of the corners `B = C(O1, r1) ∩ C(O2, r2 + w)` and
/// `D = C(O1, r1 + w) ∩ C(O2, r2)` of the quadrilateral-like overlap, in the
/// frame with `O1` at the origin and `O2 = (d, 0)`.
///
/// Only defined in the regime `r2 − r1 + 2w < d < r2`. There
/// `x_D − x_B = w (r1 + r2 + w) / d`.
pub fn radial_corner_gap(geom: &AnnulusPairGeometry) -> Result<(f64, f64), GeomError> {
    let AnnulusPairGeometry { r1, r2, w, d } = *geom;
    if !(r2 - r1 + 2.0 * w < d && d < r2) {
        return Err(domain(
            "radial_corner_gap",
            format!("d={d} outside the quadrilateral regime ({}, {r2})", r2 - r1 + 2.0 * w),
        ));
    }
    let x_b = (r1 * r1 - (r2 + w) * (r2 + w) + d * d) / (2.0 * d);
    let x_d = ((r1 + w) * (r1 + w) - r2 * r2 + d * d) / (2.0 * d);
    Ok((x_b, x_d))
}

/// Monte Carlo area estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_err: f64,
}

impl McEstimate {
    pub const ZERO: McEstimate = McEstimate {
        estimate: 0.0,
        std_err: 0.0,
    };

    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.estimate - value).abs() <= k * self.std_err
    }
}

/// Estimates `area(bbox) · P[inside(U)]` for `U` uniform on `bbox`.
pub fn mc_area<F>(inside: F, bbox: &Rect, samples: u64, seed: u64) -> Result<McEstimate, GeomError>
where
    F: Fn(Point2) -> bool,
{
    if samples == 0 {
        return Err(domain("mc_area", "need at least one sample"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples).filter(|_| inside(bbox.sample(&mut rng))).count() as f64;
    let n = samples as f64;
    let p = hits / n;
    let a = bbox.area();
    Ok(McEstimate {
        estimate: a * p,
        std_err: a * (p * (1.0 - p) / n).sqrt(),
    })
}

/// Monte Carlo estimate of `area(a ∩ rect)`, sampling only the part of the
/// rectangle that can meet the annulus.
pub fn annulus_area_in_rect(a: &Annulus, rect: &Rect, samples: u64, seed: u64) -> Result<McEstimate, GeomError> {
    match rect.intersection(&a.bounding_box()) {
        None => {
            if samples == 0 {
                return Err(domain("annulus_area_in_rect", "need at least one sample"));
            }
            Ok(McEstimate::ZERO)
        }
        Some(bbox) => mc_area(|p| a.contains(p) && rect.contains(p), &bbox, samples, seed),
    }
}

/// Exact area of `disk(center, r) ∩ rect`.
pub fn disk_rect_area(center: Point2, r: f64, rect: &Rect) -> f64 {
    let (x0, x1) = (rect.min.x - center.x, rect.max.x - center.x);
    let (y0, y1) = (rect.min.y - center.y, rect.max.y - center.y);
    let xa = x0.max(-r);
    let xb = x1.min(r);
    if xa >= xb || y0 >= r || y1 <= -r {
        return 0.0;
    }
    let half_chord = |x: f64| (r * r - x * x).max(0.0).sqrt();
    // Antiderivative of the half chord length.
    let prim = |x: f64| {
        let x = x.clamp(-r, r);
        0.5 * (x * half_chord(x) + r * r * (x / r).clamp(-1.0, 1.0).asin())
    };
    let mut cuts = vec![xa, xb];
    for y in [y0, y1] {
        if y.abs() < r {
            let x = (r * r - y * y).sqrt();
            for c in [-x, x] {
                if xa < c && c < xb {
                    cuts.push(c);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .filter(|p| p[1] > p[0])
        .map(|p| {
            let (a, b) = (p[0], p[1]);
            let s = half_chord(0.5 * (a + b));
            let top_is_arc = s < y1;
            let bottom_is_arc = -s > y0;
            let top_mid = if top_is_arc { s } else { y1 };
            let bottom_mid = if bottom_is_arc { -s } else { y0 };
            if top_mid <= bottom_mid {
                return 0.0;
            }
            let arc = prim(b) - prim(a);
            let len = b - a;
            let top = if top_is_arc { arc } else { y1 * len };
            let bottom = if bottom_is_arc { -arc } else { y0 * len };
            top - bottom
        })
        .sum::<f64>()
        .max(0.0)
}

/// Exact area of `a ∩ rect`.
pub fn annulus_rect_area(a: &Annulus, rect: &Rect) -> f64 {
    (disk_rect_area(a.center, a.outer_radius(), rect) - disk_rect_area(a.center, a.inner_radius, rect)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn origin() -> Point2 {
        Point2::new(0.0, 0.0)
    }

    fn unit(x: f64) -> Circle {
        Circle::new(Point2::new(x, 0.0), 1.0).unwrap()
    }

    #[test]
    fn lens_identical_and_disjoint() {
        assert!((lens_area(&unit(0.0), &unit(0.0)) - PI).abs() < 1e-15);
        assert_eq!(lens_area(&unit(0.0), &unit(3.0)), 0.0);
        assert_eq!(lens_area(&unit(0.0), &unit(2.0)), 0.0);
    }

    #[test]
    fn lens_unit_circles_at_unit_distance() {
        // Textbook value 2π/3 − √3/2 for the overlap of two unit disks one
        // radius apart, checked against sampling as well.
        let exact = lens_area(&unit(0.0), &unit(1.0));
        assert!((exact - (2.0 * PI / 3.0 - 3f64.sqrt() / 2.0)).abs() < 1e-14);
        let (a, b) = (unit(0.0), unit(1.0));
        let bbox = Rect::new(Point2::new(0.0, -1.0), Point2::new(1.0, 1.0)).unwrap();
        let mc = mc_area(|p| a.contains(p) && b.contains(p), &bbox, 1_000_000, 11).unwrap();
        assert!(mc.agrees_with(exact, 4.0), "{mc:?} vs {exact}");
    }

    #[test]
    fn lens_containment_branch() {
        let big = Circle::new(origin(), 5.0).unwrap();
        let small = Circle::new(Point2::new(1.0, 1.0), 2.0).unwrap();
        assert!((lens_area(&big, &small) - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn lens_near_tangent_is_small_and_nonnegative() {
        let a = Circle::new(origin(), 100.0).unwrap();
        let b = Circle::new(Point2::new(199.999_999, 0.0), 100.0).unwrap();
        let v = lens_area(&a, &b);
        assert!((0.0..1e-6).contains(&v), "{v}");
        // Internal tangency from inside.
        let c = Circle::new(Point2::new(1e-9, 0.0), 99.0).unwrap();
        let v = lens_area(&a, &Circle::new(Point2::new(1.0 - 1e-12, 0.0), 99.0).unwrap());
        assert!((v - c.area()).abs() / c.area() < 1e-9);
    }

    #[test]
    fn circle_and_annulus_reject_bad_radii() {
        assert!(Circle::new(origin(), 0.0).is_err());
        assert!(Circle::new(origin(), -1.0).is_err());
        assert!(Annulus::new(origin(), 2.0, 0.0).is_err());
        assert!(Annulus::new(origin(), 0.0, 1.0).is_err());
        assert!(Annulus::new(Point2::new(f64::NAN, 0.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn annulus_area_formula() {
        let a = Annulus::new(origin(), 1.0, 1.0).unwrap();
        assert!((annulus_area(&a) - 3.0 * PI).abs() < 1e-15);
        let b = Annulus::new(origin(), 3.0, 0.5).unwrap();
        let bbox = b.bounding_box();
        let mc = mc_area(|p| b.contains(p), &bbox, 1_000_000, 5).unwrap();
        assert!(mc.agrees_with(annulus_area(&b), 4.0));
    }

    #[test]
    fn annulus_membership_is_closed() {
        let a = Annulus::new(origin(), 1.0, 1.0).unwrap();
        assert!(annulus_contains(&a, Point2::new(1.5, 0.0)));
        assert!(!annulus_contains(&a, Point2::new(0.5, 0.0)));
        assert!(annulus_contains(&a, Point2::new(1.0, 0.0)));
        assert!(annulus_contains(&a, Point2::new(0.0, -2.0)));
        assert!(!annulus_contains(&a, Point2::new(2.0, 0.1)));
    }

    #[test]
    fn annulus_self_and_nested_intersection() {
        let a = Annulus::new(Point2::new(3.0, -2.0), 4.0, 1.5).unwrap();
        assert!((annulus_intersection_area(&a, &a) - a.area()).abs() < 1e-12 * a.area());
        let inner = Annulus::new(origin(), 1.0, 1.0).unwrap();
        let outer = Annulus::new(origin(), 2.0, 1.0).unwrap();
        assert_eq!(annulus_intersection_area(&inner, &outer), 0.0);
        let far = Annulus::new(origin(), 5.0, 1.0).unwrap();
        assert_eq!(annulus_intersection_area(&inner, &far), 0.0);
    }

    #[test]
    fn annulus_intersection_against_sampling() {
        let g = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 60.0).unwrap();
        let (a1, a2) = g.annuli();
        let exact = annulus_intersection_area(&a1, &a2);
        let bbox = a1.bounding_box().intersection(&a2.bounding_box()).unwrap();
        let mc = mc_area(|p| a1.contains(p) && a2.contains(p), &bbox, 1_000_000, 3).unwrap();
        assert!(exact > 0.0);
        assert!(mc.agrees_with(exact, 4.0), "{mc:?} vs {exact}");
    }

    #[test]
    fn ring_bound_direct_values() {
        let g = AnnulusPairGeometry::new(100.0, 110.0, 1.0, 25.0).unwrap();
        assert_eq!(g.g(), 15.0);
        // g = 0 case: r2 - r1 >= d.
        let g0 = AnnulusPairGeometry::new(100.0, 130.0, 1.0, 25.0).unwrap();
        assert_eq!(g0.g(), 0.0);
        assert!((ring_int_bound(&g0, 100.0).unwrap() - 20.0).abs() < 1e-12);
        // w=2, d=50, g=6: r1 - r2 + 50 = 6.
        let g6 = AnnulusPairGeometry::new(100.0, 144.0, 2.0, 50.0).unwrap();
        assert_eq!(g6.g(), 6.0);
        assert!((ring_int_bound(&g6, 100.0).unwrap() - 20.0).abs() < 1e-12);
        assert!(ring_int_bound(&g, 100.0).is_ok());
    }

    #[test]
    fn ring_bound_domain_errors() {
        let small_d = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 4.0).unwrap();
        assert!(matches!(ring_int_bound(&small_d, 100.0), Err(GeomError::Domain { .. })));
        let big_d = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 120.0).unwrap();
        assert!(ring_int_bound(&big_d, 100.0).is_err());
    }

    #[test]
    fn pair_geometry_invariants() {
        assert!(AnnulusPairGeometry::new(100.0, 104.0, 5.0, 10.0).is_err());
        assert!(AnnulusPairGeometry::new(4.0, 20.0, 5.0, 10.0).is_err());
        assert!(AnnulusPairGeometry::new(100.0, 120.0, 5.0, -1.0).is_err());
    }

    #[test]
    fn corner_gap_identity_example() {
        let g = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 35.0).unwrap();
        let (xb, xd) = radial_corner_gap(&g).unwrap();
        assert!(xb < xd);
        assert!(((xd - xb) - 5.0 * 225.0 / 35.0).abs() < 1e-12);
        assert!(((xd - xb) - 32.142_857_142_857_146).abs() < 1e-12);
    }

    #[test]
    fn corner_gap_regime() {
        let low = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 30.0).unwrap();
        assert!(radial_corner_gap(&low).is_err());
        let high = AnnulusPairGeometry::new(100.0, 120.0, 5.0, 120.0).unwrap();
        assert!(radial_corner_gap(&high).is_err());
    }

    /// Intersection points of two circles centered on the x-axis, solved by
    /// Newton iteration on the polynomial system, independent of the closed form.
    fn newton_corner(r_a: f64, r_b: f64, d: f64) -> f64 {
        // Unknowns (x, y) with x² + y² = r_a², (x − d)² + y² = r_b².
        let (mut x, mut y) = (d / 2.0, r_a);
        for _ in 0..200 {
            let f1 = x * x + y * y - r_a * r_a;
            let f2 = (x - d) * (x - d) + y * y - r_b * r_b;
            let (j11, j12, j21, j22) = (2.0 * x, 2.0 * y, 2.0 * (x - d), 2.0 * y);
            let det = j11 * j22 - j12 * j21;
            let dx = (f1 * j22 - f2 * j12) / det;
            let dy = (j11 * f2 - j21 * f1) / det;
            x -= dx;
            y -= dy;
            if dx.abs() + dy.abs() < 1e-15 * (x.abs() + y.abs()) {
                break;
            }
        }
        x
    }

    #[test]
    fn corner_gap_matches_numeric_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let r1 = rng.random_range(50.0..200.0);
            let w = rng.random_range(0.5..r1 / 10.0);
            let r2 = r1 + w + rng.random_range(0.0..r1);
            let lo = r2 - r1 + 2.0 * w;
            let d = rng.random_range(lo + 1e-6 * r2..r2);
            let g = AnnulusPairGeometry::new(r1, r2, w, d).unwrap();
            let (xb, xd) = radial_corner_gap(&g).unwrap();
            let nb = newton_corner(r1, r2 + w, d);
            let nd = newton_corner(r1 + w, r2, d);
            assert!((xb - nb).abs() <= 1e-9 * xb.abs().max(1.0), "{xb} vs {nb}");
            assert!((xd - nd).abs() <= 1e-9 * xd.abs().max(1.0), "{xd} vs {nd}");
        }
    }

    #[test]
    fn mc_trivial_predicates() {
        let r = Rect::new(Point2::new(-1.0, 0.0), Point2::new(2.0, 2.0)).unwrap();
        assert_eq!(mc_area(|_| false, &r, 1000, 1).unwrap(), McEstimate::ZERO);
        let all = mc_area(|_| true, &r, 1000, 1).unwrap();
        assert_eq!(all.estimate, 6.0);
        assert_eq!(all.std_err, 0.0);
        assert!(mc_area(|_| true, &r, 0, 1).is_err());
    }

    #[test]
    fn mc_unit_disk_and_determinism() {
        let r = Rect::square(-1.0, -1.0, 2.0).unwrap();
        let disk = Circle::new(origin(), 1.0).unwrap();
        let a = mc_area(|p| disk.contains(p), &r, 1_000_000, 42).unwrap();
        assert!(a.agrees_with(PI, 4.0));
        let b = mc_area(|p| disk.contains(p), &r, 1_000_000, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn annulus_in_rect_cases() {
        let a = Annulus::new(Point2::new(5.0, 5.0), 1.0, 1.0).unwrap();
        let inside = Rect::square(0.0, 0.0, 10.0).unwrap();
        let est = annulus_area_in_rect(&a, &inside, 200_000, 1).unwrap();
        assert!(est.agrees_with(a.area(), 4.0));
        let disjoint = Rect::square(20.0, 20.0, 1.0).unwrap();
        assert_eq!(annulus_area_in_rect(&a, &disjoint, 1000, 1).unwrap(), McEstimate::ZERO);
        assert!((annulus_rect_area(&a, &inside) - a.area()).abs() < 1e-12);
        assert_eq!(annulus_rect_area(&a, &disjoint), 0.0);
    }

    #[test]
    fn exact_rect_area_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for i in 0..20 {
            let a = Annulus::new(
                Point2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)),
                rng.random_range(0.5..3.0),
                rng.random_range(0.1..2.0),
            )
            .unwrap();
            let rect = Rect::new(
                Point2::new(rng.random_range(-4.0..0.0), rng.random_range(-4.0..0.0)),
                Point2::new(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0)),
            )
            .unwrap();
            let exact = annulus_rect_area(&a, &rect);
            let est = annulus_area_in_rect(&a, &rect, 400_000, i).unwrap();
            assert!(est.agrees_with(exact, 4.0), "{est:?} vs {exact}");
        }
    }

    #[test]
    fn disk_rect_quarter_and_half() {
        let r = Rect::square(0.0, 0.0, 10.0).unwrap();
        assert!((disk_rect_area(origin(), 2.0, &r) - PI).abs() < 1e-12);
        let h = Rect::new(Point2::new(-5.0, 0.0), Point2::new(5.0, 5.0)).unwrap();
        assert!((disk_rect_area(origin(), 2.0, &h) - 2.0 * PI).abs() < 1e-12);
    }

    fn arb_pair() -> impl Strategy<Value = (Annulus, Annulus)> {
        (
            -50.0..50.0f64,
            -50.0..50.0f64,
            1.0..40.0f64,
            0.1..20.0f64,
            -50.0..50.0f64,
            -50.0..50.0f64,
            1.0..40.0f64,
            0.1..20.0f64,
        )
            .prop_map(|(x1, y1, r1, w1, x2, y2, r2, w2)| {
                (
                    Annulus::new(Point2::new(x1, y1), r1, w1).unwrap(),
                    Annulus::new(Point2::new(x2, y2), r2, w2).unwrap(),
                )
            })
    }

    proptest! {
        #[test]
        fn lens_symmetric_and_bounded(r1 in 0.1..10.0f64, r2 in 0.1..10.0f64, d in 0.0..25.0f64) {
            let c1 = Circle::new(origin(), r1).unwrap();
            let c2 = Circle::new(Point2::new(d, 0.0), r2).unwrap();
            let a = lens_area(&c1, &c2);
            let b = lens_area(&c2, &c1);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            prop_assert!(a >= 0.0);
            prop_assert!(a <= PI * r1.min(r2).powi(2) * (1.0 + 1e-12));
        }

        #[test]
        fn annulus_intersection_symmetric_and_bounded((a1, a2) in arb_pair()) {
            let x = annulus_intersection_area(&a1, &a2);
            let y = annulus_intersection_area(&a2, &a1);
            prop_assert!((x - y).abs() <= 1e-9 * x.max(1.0));
            prop_assert!(x >= 0.0 && x <= a1.area().min(a2.area()));
        }

        #[test]
        fn annulus_intersection_rigid_motion_invariant(
            (a1, a2) in arb_pair(),
            theta in 0.0..std::f64::consts::TAU,
            tx in -1e3..1e3f64,
            ty in -1e3..1e3f64,
        ) {
            let base = annulus_intersection_area(&a1, &a2);
            let m = |a: &Annulus| {
                let c = a.center();
                let (s, co) = theta.sin_cos();
                Annulus::new(
                    Point2::new(co * c.x - s * c.y + tx, s * c.x + co * c.y + ty),
                    a.inner_radius(),
                    a.width(),
                )
                .unwrap()
            };
            let moved = annulus_intersection_area(&m(&a1), &m(&a2));
            // Inclusion–exclusion works with whole-disk areas, so relative
            // error is measured against the largest disk involved.
            let scale = PI * a1.outer_radius().max(a2.outer_radius()).powi(2);
            prop_assert!((base - moved).abs() <= 1e-12 * scale, "{base} vs {moved}");
        }

        #[test]
        fn membership_matches_distance_oracle(px in -10.0..10.0f64, py in -10.0..10.0f64,
                                               r in 0.5..5.0f64, w in 0.1..3.0f64) {
            let a = Annulus::new(Point2::new(0.3, -0.2), r, w).unwrap();
            let dist = ((px - 0.3).powi(2) + (py + 0.2).powi(2)).sqrt();
            let oracle = r <= dist && dist <= r + w;
            // The sqrt oracle can disagree only within an ulp of a boundary.
            let near = (dist - r).abs() < 1e-12 || (dist - r - w).abs() < 1e-12;
            prop_assert!(near || annulus_contains(&a, Point2::new(px, py)) == oracle);
        }
    }
}
