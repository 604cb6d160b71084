//! Gauss linking integrals for closed polygonal curves in R^3.
//!
//! The double line integral of the Gauss kernel over a pair of straight
//! segments has a closed form: the signed solid angle of the spherical
//! quadrilateral swept by the normalized difference vector. Summing those
//! per-pair angles gives the linking number of two disjoint curves and the
//! writhe of one curve with no quadrature error at all; the only
//! approximation anywhere is the polygonal discretization itself.

use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Segments shorter than this are treated as zero length and rejected.
const ZERO_SEGMENT: f64 = 1e-12;
/// Curves closer than this are considered touching.
const MIN_SEPARATION: f64 = 1e-9;

/// A closed polygonal curve: the last point connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    points: Vec<Vector3<f64>>,
}

impl PolyCurve {
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        PolyCurve::from_vectors(points.into_iter().map(Vector3::from).collect())
    }

    pub fn from_vectors(points: Vec<Vector3<f64>>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidCurve(format!(
                "closed curve needs at least 3 points, got {}",
                points.len()
            )));
        }
        for p in &points {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::InvalidCurve("non-finite coordinate".into()));
            }
        }
        for i in 0..points.len() {
            let j = (i + 1) % points.len();
            if (points[j] - points[i]).norm() <= ZERO_SEGMENT {
                return Err(Error::InvalidCurve(format!(
                    "zero-length segment between points {i} and {j}"
                )));
            }
        }
        Ok(PolyCurve { points })
    }

    /// Regular n-gon discretization of the circle
    /// center + radius (u cos t + v sin t); u, v should be orthonormal.
    pub fn circle(
        center: Vector3<f64>,
        radius: f64,
        u: Vector3<f64>,
        v: Vector3<f64>,
        n: usize,
    ) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) || n < 3 {
            return Err(Error::InvalidCurve(
                "circle needs positive radius and at least 3 points".into(),
            ));
        }
        let points = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                center + radius * (u * t.cos() + v * t.sin())
            })
            .collect();
        PolyCurve::from_vectors(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> &[Vector3<f64>] {
        &self.points
    }

    /// Segment i runs from point i to point i+1 (mod n).
    pub fn segment(&self, i: usize) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.points.len();
        (self.points[i % n], self.points[(i + 1) % n])
    }

    /// Applies an arbitrary point map; the result is revalidated.
    pub fn map_points(&self, f: impl Fn(Vector3<f64>) -> Vector3<f64>) -> Result<PolyCurve> {
        PolyCurve::from_vectors(self.points.iter().map(|&p| f(p)).collect())
    }

    /// Minimum distance between any segment of self and any segment of other.
    pub fn min_distance(&self, other: &PolyCurve) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            let (a0, a1) = self.segment(i);
            for j in 0..other.len() {
                let (b0, b1) = other.segment(j);
                best = best.min(segment_distance(a0, a1, b0, b1));
            }
        }
        best
    }

    /// Minimum distance between non-adjacent segments of the same curve.
    pub fn min_self_distance(&self) -> f64 {
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let (a0, a1) = self.segment(i);
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (b0, b1) = self.segment(j);
                best = best.min(segment_distance(a0, a1, b0, b1));
            }
        }
        best
    }
}

/// Closest distance between segments [p0, p1] and [q0, q1].
fn segment_distance(
    p0: Vector3<f64>,
    p1: Vector3<f64>,
    q0: Vector3<f64>,
    q1: Vector3<f64>,
) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;
    let mut s = if denom.abs() > f64::EPSILON * a * e {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = if e > 0.0 { (b * s + f) / e } else { 0.0 };
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

fn unit(v: Vector3<f64>) -> Option<Vector3<f64>> {
    let n = v.norm();
    if n <= ZERO_SEGMENT {
        None
    } else {
        Some(v / n)
    }
}

/// One evaluation of the Gauss 2-form kernel contracted with two tangents:
/// (x - y) . (t_x cross t_y) / (4 pi |x - y|^3).
///
/// Swapping x and y alone flips the sign; swapping the tangents alone flips
/// it too, so the combined swap leaves the value fixed. That symmetry is what
/// makes the linking number independent of which curve is called first.
#[derive(Debug, Clone, Copy)]
pub struct GaussKernelSample {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub tangent_x: Vector3<f64>,
    pub tangent_y: Vector3<f64>,
    pub value: f64,
}

impl GaussKernelSample {
    pub fn evaluate(
        x: Vector3<f64>,
        y: Vector3<f64>,
        tangent_x: Vector3<f64>,
        tangent_y: Vector3<f64>,
    ) -> Result<Self> {
        let r = x - y;
        let dist = r.norm();
        if dist <= MIN_SEPARATION {
            return Err(Error::CurvesTouch { sep: dist });
        }
        let value = r.dot(&tangent_x.cross(&tangent_y))
            / (4.0 * std::f64::consts::PI * dist.powi(3));
        if !value.is_finite() {
            return Err(Error::NonFinite("gauss kernel".into()));
        }
        Ok(GaussKernelSample {
            x,
            y,
            tangent_x,
            tangent_y,
            value,
        })
    }
}

/// Signed solid angle of the spherical triangle (a, b, c), by the
/// Van Oosterom-Strackee formula. The boolean is false when the triangle is
/// too close to a great circle for the two-argument arctangent to be trusted.
fn triangle_solid_angle(
    a: Vector3<f64>,
    b: Vector3<f64>,
    c: Vector3<f64>,
) -> (f64, bool) {
    let num = a.dot(&b.cross(&c));
    let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
    (2.0 * num.atan2(den), den > 1e-9)
}

/// Signed solid angle swept by the normalized difference of two segments:
/// the exact value of the double Gauss integral over the pair, times 4 pi.
///
/// The quadrilateral is split along a diagonal; if either triangle is
/// unreliable the other diagonal is tried, then the segments are halved and
/// the four sub-pairs summed. Corners on a common great circle (planar
/// configurations) resolve to exactly zero this way.
fn pair_solid_angle(
    a0: Vector3<f64>,
    a1: Vector3<f64>,
    b0: Vector3<f64>,
    b1: Vector3<f64>,
    depth: u32,
) -> Result<f64> {
    let corner = |p: Vector3<f64>, q: Vector3<f64>| {
        unit(p - q).ok_or(Error::CurvesTouch { sep: (p - q).norm() })
    };
    // Boundary of the Gauss-map image. The map (s, t) -> unit(x(s) - y(t))
    // reverses orientation in t, so the parameter square's counterclockwise
    // boundary is traversed with the b-endpoints swapped.
    let ca = corner(a0, b0)?;
    let cb = corner(a0, b1)?;
    let cc = corner(a1, b1)?;
    let cd = corner(a1, b0)?;

    let (t1, ok1) = triangle_solid_angle(ca, cb, cc);
    let (t2, ok2) = triangle_solid_angle(ca, cc, cd);
    if ok1 && ok2 {
        return Ok(t1 + t2);
    }
    let (u1, ok3) = triangle_solid_angle(cb, cc, cd);
    let (u2, ok4) = triangle_solid_angle(cb, cd, ca);
    if ok3 && ok4 {
        return Ok(u1 + u2);
    }
    if depth >= 48 {
        return Err(Error::ParameterDomain(
            "solid angle subdivision did not stabilize".into(),
        ));
    }
    let am = 0.5 * (a0 + a1);
    let bm = 0.5 * (b0 + b1);
    let mut total = 0.0;
    for (p0, p1) in [(a0, am), (am, a1)] {
        for (q0, q1) in [(b0, bm), (bm, b1)] {
            total += pair_solid_angle(p0, p1, q0, q1, depth + 1)?;
        }
    }
    Ok(total)
}

/// Compensated accumulator; pair sums must not depend on order beyond 1e-12.
#[derive(Debug, Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Linking number as returned by the integral route.
#[derive(Debug, Clone, Copy)]
pub struct LinkingResult {
    pub value: f64,
    pub nearest_integer: i64,
    /// Distance from the value to the nearest integer.
    pub estimate_error: f64,
    /// Whether the estimate error is within the tolerance that was passed in.
    pub within_tol: bool,
}

/// Gauss linking number of two disjoint closed curves by exact summation of
/// per-segment-pair solid angles.
pub fn linking_number(c1: &PolyCurve, c2: &PolyCurve, tol: f64) -> Result<LinkingResult> {
    let sep = c1.min_distance(c2);
    if sep <= MIN_SEPARATION {
        return Err(Error::CurvesTouch { sep });
    }
    let mut acc = Kahan::default();
    for i in 0..c1.len() {
        let (a0, a1) = c1.segment(i);
        for j in 0..c2.len() {
            let (b0, b1) = c2.segment(j);
            acc.add(pair_solid_angle(a0, a1, b0, b1, 0)?);
        }
    }
    let value = acc.sum / (4.0 * std::f64::consts::PI);
    let nearest_integer = value.round() as i64;
    let estimate_error = (value - value.round()).abs();
    Ok(LinkingResult {
        value,
        nearest_integer,
        estimate_error,
        within_tol: estimate_error <= tol,
    })
}

/// Writhe: the same double integral over ordered pairs of distinct segments
/// of a single simple curve. Pairs sharing an endpoint contribute exactly
/// zero (the difference vector stays in the plane of the two tangents), so
/// only non-adjacent pairs are summed.
pub fn writhe(c: &PolyCurve) -> Result<f64> {
    let sep = c.min_self_distance();
    if sep <= MIN_SEPARATION {
        return Err(Error::SelfIntersecting { sep });
    }
    let n = c.len();
    let mut acc = Kahan::default();
    for i in 0..n {
        let (a0, a1) = c.segment(i);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b0, b1) = c.segment(j);
            acc.add(pair_solid_angle(a0, a1, b0, b1, 0)?);
        }
    }
    // Ordered pairs double the i < j sum.
    Ok(2.0 * acc.sum / (4.0 * std::f64::consts::PI))
}

/// Projects `v` onto the plane orthogonal to `d` (unit), as 2D coordinates.
fn plane_basis(d: Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let pick = if d.x.abs() <= d.y.abs() && d.x.abs() <= d.z.abs() {
        Vector3::x()
    } else if d.y.abs() <= d.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let e1 = unit(pick.cross(&d)).expect("pick is not parallel to d");
    let e2 = d.cross(&e1);
    (e1, e2)
}

fn cross2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Sum of crossing signs between the projections of the two segment lists
/// along direction d. `None` means the direction is not generic enough.
/// `adjacency` gives the curve length when both lists are the same curve, so
/// segment pairs sharing an endpoint are skipped.
fn signed_crossing_sum(
    segs_a: &[(Vector3<f64>, Vector3<f64>)],
    segs_b: &[(Vector3<f64>, Vector3<f64>)],
    d: Vector3<f64>,
    same_curve: bool,
) -> Option<i64> {
    const PARAM_MARGIN: f64 = 1e-9;
    let (e1, e2) = plane_basis(d);
    let project = |v: Vector3<f64>| (v.dot(&e1), v.dot(&e2));
    let mut total = 0i64;
    let n = segs_a.len();
    for (i, &(a0, a1)) in segs_a.iter().enumerate() {
        let p0 = project(a0);
        let ta = a1 - a0;
        let u = project(ta);
        let j_range: Box<dyn Iterator<Item = usize>> = if same_curve {
            Box::new((i + 2)..n)
        } else {
            Box::new(0..segs_b.len())
        };
        for j in j_range {
            if same_curve && i == 0 && j == n - 1 {
                continue;
            }
            let (b0, b1) = segs_b[j];
            let q0 = project(b0);
            let tb = b1 - b0;
            let v = project(tb);
            let w = (q0.0 - p0.0, q0.1 - p0.1);
            let det = cross2(u, v);
            let scale = (u.0.hypot(u.1)) * (v.0.hypot(v.1));
            if det.abs() <= 1e-12 * scale.max(1e-300) {
                // Parallel in projection: only a problem if they overlap.
                let d00 = segment_distance_2d(p0, u, q0, v);
                if d00 <= PARAM_MARGIN {
                    return None;
                }
                continue;
            }
            let s = cross2(w, v) / det;
            let t = cross2(w, u) / det;
            let near = |x: f64| (x - 0.0).abs() <= PARAM_MARGIN || (x - 1.0).abs() <= PARAM_MARGIN;
            if near(s) || near(t) {
                return None;
            }
            if s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0 {
                let pa = a0 + ta * s;
                let pb = b0 + tb * t;
                let signed = ta.cross(&tb).dot(&(pa - pb));
                let tolerance = 1e-12 * ta.norm() * tb.norm() * (pa - pb).norm().max(1e-300);
                if signed.abs() <= tolerance {
                    return None;
                }
                total += if signed > 0.0 { 1 } else { -1 };
            }
        }
    }
    Some(total)
}

/// Distance between 2D segments p0 + s u and q0 + t v for s, t in [0, 1].
fn segment_distance_2d(p0: (f64, f64), u: (f64, f64), q0: (f64, f64), v: (f64, f64)) -> f64 {
    let lift = |p: (f64, f64)| Vector3::new(p.0, p.1, 0.0);
    segment_distance(
        lift(p0),
        lift((p0.0 + u.0, p0.1 + u.1)),
        lift(q0),
        lift((q0.0 + v.0, q0.1 + v.1)),
    )
}

fn segments_of(c: &PolyCurve) -> Vec<(Vector3<f64>, Vector3<f64>)> {
    (0..c.len()).map(|i| c.segment(i)).collect()
}

fn sphere_point(z: f64, phi: f64) -> Vector3<f64> {
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vector3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Combinatorial linking number: half the sum of crossing signs between the
/// two curves in a generic planar projection. Directions come from a fixed
/// deterministic sequence with up to 32 attempts.
pub fn linking_number_exact(c1: &PolyCurve, c2: &PolyCurve) -> Result<i64> {
    let sep = c1.min_distance(c2);
    if sep <= MIN_SEPARATION {
        return Err(Error::CurvesTouch { sep });
    }
    let segs_a = segments_of(c1);
    let segs_b = segments_of(c2);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6C69_6E6B);
    for attempt in 0..32 {
        let d = if attempt == 0 {
            unit(Vector3::new(0.2287, -0.5941, 0.7712)).unwrap()
        } else {
            sphere_point(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.0..2.0 * std::f64::consts::PI),
            )
        };
        if let Some(sum) = signed_crossing_sum(&segs_a, &segs_b, d, false) {
            if sum % 2 != 0 {
                // A closed-curve pair always has an even crossing sum;
                // an odd one means the direction was secretly degenerate.
                continue;
            }
            return Ok(sum / 2);
        }
    }
    Err(Error::NoGenericProjection(32))
}

/// Directional average of the self-crossing sign sum: an independent route
/// to the writhe. Stratified sampling over the sphere with a fixed seed.
pub fn writhe_projection_average(c: &PolyCurve, strata: usize, seed: u64) -> Result<f64> {
    let sep = c.min_self_distance();
    if sep <= MIN_SEPARATION {
        return Err(Error::SelfIntersecting { sep });
    }
    if strata < 2 {
        return Err(Error::ParameterDomain(
            "projection average needs at least 2 strata per axis".into(),
        ));
    }
    let segs = segments_of(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Kahan::default();
    let mut count = 0u64;
    for iz in 0..strata {
        for ip in 0..strata {
            let mut sample = None;
            for _ in 0..8 {
                let z = -1.0 + 2.0 * (iz as f64 + rng.random_range(0.0..1.0)) / strata as f64;
                let phi = 2.0 * std::f64::consts::PI * (ip as f64 + rng.random_range(0.0..1.0))
                    / strata as f64;
                let d = sphere_point(z.clamp(-1.0, 1.0), phi);
                if let Some(sum) = signed_crossing_sum(&segs, &segs, d, true) {
                    sample = Some(sum);
                    break;
                }
            }
            match sample {
                Some(sum) => {
                    acc.add(sum as f64);
                    count += 1;
                }
                None => return Err(Error::NoGenericProjection(8)),
            }
        }
    }
    Ok(acc.sum / count as f64)
}

/// Parallel copy: each vertex moves by `offset` along the unit turn normal
/// t_{i-1} x t_i of its corner. Fails on straight corners, where that normal
/// is undefined, and when the offset curve touches the original.
pub fn parallel_curve(c: &PolyCurve, offset: f64) -> Result<PolyCurve> {
    if !(offset.is_finite() && offset != 0.0) {
        return Err(Error::ParameterDomain(format!(
            "framing offset must be finite and nonzero, got {offset}"
        )));
    }
    // The ribbon between curve and parallel is only embedded when the offset
    // stays well below the curve's own feature size.
    let seg_min = (0..c.len())
        .map(|i| {
            let (a, b) = c.segment(i);
            (b - a).norm()
        })
        .fold(f64::INFINITY, f64::min);
    let limit = 0.5 * seg_min.min(c.min_self_distance());
    if offset.abs() >= limit {
        return Err(Error::OffsetTooLarge { offset });
    }
    let n = c.len();
    let mut moved = Vec::with_capacity(n);
    for i in 0..n {
        let prev = c.points()[(i + n - 1) % n];
        let here = c.points()[i];
        let next = c.points()[(i + 1) % n];
        let t_in = unit(here - prev).expect("validated segment");
        let t_out = unit(next - here).expect("validated segment");
        let normal = unit(t_in.cross(&t_out)).ok_or_else(|| {
            Error::ParameterDomain(format!(
                "turn normal undefined at vertex {i}: segments are collinear"
            ))
        })?;
        moved.push(here + offset * normal);
    }
    let parallel = PolyCurve::from_vectors(moved)?;
    let sep = c.min_distance(&parallel);
    if sep <= MIN_SEPARATION {
        return Err(Error::OffsetTooLarge { offset });
    }
    Ok(parallel)
}

/// Self-linking number: the linking number of the curve with its parallel.
pub fn self_linking(c: &PolyCurve, offset: f64, tol: f64) -> Result<LinkingResult> {
    let parallel = parallel_curve(c, offset)?;
    linking_number(c, &parallel, tol)
}

/// The standard symmetric trefoil polygon used across the tests:
/// samples of (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t).
pub fn trefoil(n: usize) -> Result<PolyCurve> {
    let points = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Vector3::new(
                t.sin() + 2.0 * (2.0 * t).sin(),
                t.cos() - 2.0 * (2.0 * t).cos(),
                -(3.0 * t).sin(),
            )
        })
        .collect();
    PolyCurve::from_vectors(points)
}

/// The Hopf pair used in the examples: unit circle in the xy-plane at the
/// origin and unit circle in the xz-plane centered at (1, 0, 0).
pub fn hopf_pair(n: usize) -> Result<(PolyCurve, PolyCurve)> {
    let c1 = PolyCurve::circle(Vector3::zeros(), 1.0, Vector3::x(), Vector3::y(), n)?;
    let c2 = PolyCurve::circle(Vector3::x(), 1.0, Vector3::x(), Vector3::z(), n)?;
    Ok((c1, c2))
}

/// Two-component (2, 4) torus link: each component winds once around the
/// torus and twice around its core, linking the other component twice.
pub fn torus_link_pair(n: usize) -> Result<(PolyCurve, PolyCurve)> {
    let component = |phase: f64| {
        let points = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                let pol = 2.0 * t + phase;
                let radial = 2.0 + 0.5 * pol.cos();
                Vector3::new(radial * t.cos(), radial * t.sin(), 0.5 * pol.sin())
            })
            .collect();
        PolyCurve::from_vectors(points)
    };
    Ok((component(0.0)?, component(std::f64::consts::PI)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;
    use nalgebra::Rotation3;

    fn planar_square() -> PolyCurve {
        PolyCurve::new(vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn curve_validation_rejects_degenerate_input() {
        assert!(matches!(
            PolyCurve::new(vec![[0.0; 3], [1.0, 0.0, 0.0]]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            PolyCurve::new(vec![[0.0; 3], [0.0; 3], [1.0, 0.0, 0.0]]),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            PolyCurve::new(vec![[0.0; 3], [f64::NAN, 0.0, 0.0], [1.0, 0.0, 0.0]]),
            Err(Error::InvalidCurve(_))
        ));
        // Closing segment is checked too.
        assert!(matches!(
            PolyCurve::new(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn kernel_sample_sign_symmetries() {
        let x = Vector3::new(0.3, -0.2, 1.1);
        let y = Vector3::new(-0.6, 0.4, 0.2);
        let tx = Vector3::new(1.0, 0.5, -0.3);
        let ty = Vector3::new(-0.2, 0.9, 0.4);
        let base = GaussKernelSample::evaluate(x, y, tx, ty).unwrap().value;
        assert!(base.abs() > 1e-6);
        let swap_points = GaussKernelSample::evaluate(y, x, tx, ty).unwrap().value;
        assert!((swap_points + base).abs() < 1e-15);
        let swap_tangents = GaussKernelSample::evaluate(x, y, ty, tx).unwrap().value;
        assert!((swap_tangents + base).abs() < 1e-15);
        let swap_both = GaussKernelSample::evaluate(y, x, ty, tx).unwrap().value;
        assert!((swap_both - base).abs() < 1e-15);
        assert!(matches!(
            GaussKernelSample::evaluate(x, x, tx, ty),
            Err(Error::CurvesTouch { .. })
        ));
    }

    #[test]
    fn pair_solid_angle_matches_direct_quadrature() {
        // The closed form against 2D Gauss-Legendre on well-separated pairs.
        let (nodes, weights) = gauss_legendre(24);
        let cases = [
            (
                Vector3::new(0.0, 0.0, 0.0),
                Vector3::new(1.0, 0.2, 0.0),
                Vector3::new(0.3, 0.8, 0.9),
                Vector3::new(-0.4, 1.1, 1.2),
            ),
            (
                Vector3::new(-0.5, 0.4, 0.1),
                Vector3::new(0.6, 0.5, -0.2),
                Vector3::new(0.2, -0.9, 0.8),
                Vector3::new(-0.3, -0.7, 1.4),
            ),
            (
                Vector3::new(0.0, 0.0, 1.0),
                Vector3::new(0.4, 0.1, 1.3),
                Vector3::new(0.2, 0.3, -0.6),
                Vector3::new(-0.2, 0.8, -0.9),
            ),
        ];
        for (a0, a1, b0, b1) in cases {
            let exact = pair_solid_angle(a0, a1, b0, b1, 0).unwrap()
                / (4.0 * std::f64::consts::PI);
            let ta = a1 - a0;
            let tb = b1 - b0;
            let mut quad = 0.0;
            for (si, &ws) in weights.iter().enumerate() {
                let s = 0.5 * (nodes[si] + 1.0);
                for (ti, &wt) in weights.iter().enumerate() {
                    let t = 0.5 * (nodes[ti] + 1.0);
                    let sample =
                        GaussKernelSample::evaluate(a0 + ta * s, b0 + tb * t, ta, tb)
                            .unwrap();
                    quad += 0.25 * ws * wt * sample.value;
                }
            }
            assert!(
                (exact - quad).abs() < 1e-10,
                "closed form {exact} vs quadrature {quad}"
            );
        }
    }

    #[test]
    fn hopf_link_has_linking_number_one() {
        let (c1, c2) = hopf_pair(64).unwrap();
        let result = linking_number(&c1, &c2, 1e-3).unwrap();
        assert_eq!(result.nearest_integer.abs(), 1);
        assert!(result.estimate_error < 1e-3, "{result:?}");
        assert!(result.within_tol);
        let exact = linking_number_exact(&c1, &c2).unwrap();
        assert_eq!(exact, result.nearest_integer);
    }

    #[test]
    fn distant_unknots_do_not_link() {
        let c1 = PolyCurve::circle(Vector3::zeros(), 1.0, Vector3::x(), Vector3::y(), 32)
            .unwrap();
        let c2 = PolyCurve::circle(
            Vector3::new(10.0, 0.0, 0.0),
            1.0,
            Vector3::x(),
            Vector3::z(),
            32,
        )
        .unwrap();
        let result = linking_number(&c1, &c2, 1e-6).unwrap();
        assert_eq!(result.nearest_integer, 0);
        assert!(result.value.abs() < 1e-6);
        assert_eq!(linking_number_exact(&c1, &c2).unwrap(), 0);
    }

    #[test]
    fn torus_link_links_twice() {
        let (c1, c2) = torus_link_pair(48).unwrap();
        let result = linking_number(&c1, &c2, 1e-2).unwrap();
        assert_eq!(result.nearest_integer.abs(), 2);
        assert!(result.estimate_error < 1e-2, "{result:?}");
        assert_eq!(
            linking_number_exact(&c1, &c2).unwrap(),
            result.nearest_integer
        );
    }

    #[test]
    fn linking_is_symmetric_and_rigid_motion_invariant() {
        let (c1, c2) = hopf_pair(40).unwrap();
        let forward = linking_number(&c1, &c2, 1e-3).unwrap().value;
        let backward = linking_number(&c2, &c1, 1e-3).unwrap().value;
        assert!((forward - backward).abs() < 1e-10);

        let rot = Rotation3::from_euler_angles(0.4, -1.1, 2.3);
        let shift = Vector3::new(3.0, -2.0, 5.0);
        let scale = 2.7;
        let move_it = |c: &PolyCurve| c.map_points(|p| rot * (p * scale) + shift).unwrap();
        let moved = linking_number(&move_it(&c1), &move_it(&c2), 1e-3)
            .unwrap()
            .value;
        assert!((forward - moved).abs() < 1e-9);
    }

    #[test]
    fn reversing_one_component_negates_linking() {
        let (c1, c2) = hopf_pair(40).unwrap();
        let reversed = PolyCurve::from_vectors(
            c2.points().iter().rev().copied().collect(),
        )
        .unwrap();
        let plain = linking_number(&c1, &c2, 1e-3).unwrap().value;
        let flipped = linking_number(&c1, &reversed, 1e-3).unwrap().value;
        assert!((plain + flipped).abs() < 1e-10);
        assert_eq!(
            linking_number_exact(&c1, &c2).unwrap(),
            -linking_number_exact(&c1, &reversed).unwrap()
        );
    }

    #[test]
    fn linking_value_is_exactly_integer_at_any_discretization() {
        // The pair sum is the degree of the Gauss map of the polygons
        // themselves, so refining the discretization never moves the value:
        // only floating-point noise remains.
        for n in [16usize, 32, 64] {
            let (c1, c2) = hopf_pair(n).unwrap();
            let result = linking_number(&c1, &c2, 1e-11).unwrap();
            assert!(result.estimate_error < 1e-12, "{result:?}");
        }
    }

    #[test]
    fn touching_curves_are_rejected() {
        let c1 = planar_square();
        let c2 = c1
            .map_points(|p| p + Vector3::new(0.5, 0.5, 0.0))
            .unwrap();
        assert!(matches!(
            linking_number(&c1, &c2, 1e-3),
            Err(Error::CurvesTouch { .. })
        ));
    }

    #[test]
    fn planar_polygons_have_exactly_zero_writhe() {
        let square = planar_square();
        assert_eq!(writhe(&square).unwrap(), 0.0);
        let hexagon = PolyCurve::circle(
            Vector3::new(2.0, -1.0, 0.5),
            1.5,
            Vector3::x(),
            Vector3::y(),
            6,
        )
        .unwrap();
        assert!(writhe(&hexagon).unwrap().abs() < 1e-10);
    }

    #[test]
    fn mirror_image_negates_writhe() {
        let knot = trefoil(16).unwrap();
        let mirrored = knot
            .map_points(|p| Vector3::new(p.x, p.y, -p.z))
            .unwrap();
        let w = writhe(&knot).unwrap();
        let wm = writhe(&mirrored).unwrap();
        assert!(w.abs() > 1.0);
        assert!((w + wm).abs() < 1e-10, "{w} vs {wm}");
    }

    #[test]
    fn writhe_is_rigid_motion_invariant_and_refines_quadratically() {
        let knot = trefoil(24).unwrap();
        let w = writhe(&knot).unwrap();
        let rot = Rotation3::from_euler_angles(-0.3, 0.9, 1.7);
        let moved = knot
            .map_points(|p| rot * (p * 1.9) + Vector3::new(-1.0, 4.0, 2.0))
            .unwrap();
        assert!((writhe(&moved).unwrap() - w).abs() < 1e-9);

        // Smooth-curve discretization error drops by ~4x when n doubles.
        let wr = |n: usize| writhe(&trefoil(n).unwrap()).unwrap();
        let (w1, w2, w3, w4) = (wr(48), wr(96), wr(192), wr(384));
        let e1 = (w1 - w4).abs();
        let e2 = (w2 - w4).abs();
        let _ = w3;
        let ratio = e1 / e2;
        assert!((3.0..6.0).contains(&ratio), "refinement ratio {ratio}");
    }

    #[test]
    fn self_intersecting_curve_is_rejected_for_writhe() {
        let bowtie = PolyCurve::new(vec![
            [0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(writhe(&bowtie), Err(Error::SelfIntersecting { .. })));
    }

    #[test]
    fn trefoil_writhe_matches_projection_average() {
        let knot = trefoil(12).unwrap();
        let exact = writhe(&knot).unwrap();
        let averaged = writhe_projection_average(&knot, 192, 0x00C0_FFEE).unwrap();
        assert!(
            (exact - averaged).abs() < 1e-3,
            "solid angle {exact} vs projection average {averaged}"
        );
    }

    #[test]
    fn planar_parallel_has_zero_self_linking() {
        let hexagon = PolyCurve::circle(
            Vector3::zeros(),
            1.0,
            Vector3::x(),
            Vector3::y(),
            6,
        )
        .unwrap();
        let result = self_linking(&hexagon, 0.05, 1e-3).unwrap();
        assert_eq!(result.nearest_integer, 0);
        assert!(result.estimate_error < 1e-3);
    }

    #[test]
    fn trefoil_self_linking_is_stable_and_matches_oracle() {
        let knot = trefoil(12).unwrap();
        let mut integers = Vec::new();
        for offset in [0.08, 0.04, 0.02] {
            let result = self_linking(&knot, offset, 1e-3).unwrap();
            assert!(result.estimate_error < 1e-3, "{result:?}");
            integers.push(result.nearest_integer);
            let parallel = parallel_curve(&knot, offset).unwrap();
            assert_eq!(
                linking_number_exact(&knot, &parallel).unwrap(),
                result.nearest_integer
            );
        }
        assert_eq!(integers[0], integers[1]);
        assert_eq!(integers[1], integers[2]);
    }

    #[test]
    fn oversized_offset_is_rejected() {
        let knot = trefoil(12).unwrap();
        assert!(matches!(
            self_linking(&knot, 40.0, 1e-3),
            Err(Error::OffsetTooLarge { .. })
        ));
        assert!(matches!(
            parallel_curve(&knot, 0.0),
            Err(Error::ParameterDomain(_))
        ));
        // Square corners have well-defined turn normals; a mild offset works.
        assert!(parallel_curve(&planar_square(), 0.1).is_ok());
    }
}
