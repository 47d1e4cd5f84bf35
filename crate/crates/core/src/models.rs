//! Projective models of S², E² and H² on the affine patch of ℝP².
//!
//! Each model is the standard one conjugated by `C = diag(α, β, 1)`: a point
//! `p` of the conjugated model corresponds to `C⁻¹p` in the standard model,
//! and a transformation `G` of the standard model to `C G C⁻¹`. The standard
//! models are
//!
//! - H²: the Klein disk `x² + y² < 1`, with form `J = diag(1, 1, −1)`;
//! - S²: the upper hemisphere of rays with positive last coordinate, seen
//!   through the affine chart, with form `J = I`;
//! - E²: the affine plane with the Euclidean metric.
//!
//! Geodesics are affine segments in every model, so only distances and
//! angles depend on the kind.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::ProjMat;
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryKind {
    Sph,
    Euc,
    Hyp,
}

impl GeometryKind {
    /// Sign of the curvature.
    pub fn curvature_sign(self) -> i8 {
        match self {
            GeometryKind::Sph => 1,
            GeometryKind::Euc => 0,
            GeometryKind::Hyp => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Sph => "sph",
            GeometryKind::Euc => "euc",
            GeometryKind::Hyp => "hyp",
        }
    }

    fn form(self) -> Matrix3<f64> {
        match self {
            GeometryKind::Hyp => Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)),
            _ => Matrix3::identity(),
        }
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for GeometryKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sph" => Ok(GeometryKind::Sph),
            "euc" => Ok(GeometryKind::Euc),
            "hyp" => Ok(GeometryKind::Hyp),
            other => Err(format!("unknown geometry {other:?}, expected sph, euc or hyp")),
        }
    }
}

/// A constant-curvature model conjugated by `diag(α, β, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryModel {
    pub kind: GeometryKind,
    alpha: f64,
    beta: f64,
}

/// An oriented geodesic segment, given by its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedSegment {
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl OrientedSegment {
    pub fn new(start: [f64; 2], end: [f64; 2]) -> Self {
        OrientedSegment { start, end }
    }

    pub fn reversed(&self) -> Self {
        OrientedSegment::new(self.end, self.start)
    }

    pub fn point_at(&self, s: f64) -> [f64; 2] {
        lerp(self.start, self.end, s)
    }
}

fn lerp(p: [f64; 2], q: [f64; 2], s: f64) -> [f64; 2] {
    [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]
}

fn wedge(a: Vector2<f64>, b: Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

impl GeometryModel {
    pub fn new(kind: GeometryKind, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= beta && beta >= 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidConjugator { alpha, beta });
        }
        Ok(GeometryModel { kind, alpha, beta })
    }

    pub fn standard(kind: GeometryKind) -> Self {
        GeometryModel { kind, alpha: 1.0, beta: 1.0 }
    }

    /// The model conjugated by `diag(t^pe, t^qe, 1)`.
    pub fn along_path(kind: GeometryKind, pe: f64, qe: f64, t: f64) -> Result<Self> {
        GeometryModel::new(kind, t.powf(pe), t.powf(qe))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn conjugator(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(self.alpha, self.beta, 1.0))
    }

    fn conjugator_inv(&self) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(1.0 / self.alpha, 1.0 / self.beta, 1.0))
    }

    /// `C⁻ᵀ J C⁻¹`, absent for the Euclidean plane.
    pub fn form(&self) -> Option<Matrix3<f64>> {
        match self.kind {
            GeometryKind::Euc => None,
            k => {
                let ci = self.conjugator_inv();
                Some(ci * k.form() * ci)
            }
        }
    }

    /// The point of the standard model corresponding to `p`.
    pub fn to_standard(&self, p: [f64; 2]) -> Vector2<f64> {
        Vector2::new(p[0] / self.alpha, p[1] / self.beta)
    }

    fn standard_to_model(&self, p: Vector2<f64>) -> [f64; 2] {
        [p.x * self.alpha, p.y * self.beta]
    }

    /// `C G C⁻¹` for a transformation `G` of the standard model.
    fn conjugate(&self, g: &Matrix3<f64>) -> ProjMat {
        ProjMat::new(self.conjugator() * g * self.conjugator_inv())
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        if !(p[0].is_finite() && p[1].is_finite()) {
            return false;
        }
        match self.kind {
            GeometryKind::Hyp => self.to_standard(p).norm_squared() < 1.0,
            _ => true,
        }
    }

    fn check(&self, p: [f64; 2]) -> Result<Vector2<f64>> {
        if self.contains(p) {
            Ok(self.to_standard(p))
        } else {
            Err(Error::OutsideDomain { x: p[0], y: p[1] })
        }
    }

    /// Distance in the standard model, written so that nearby points do not
    /// lose precision to cancellation.
    fn standard_dist(&self, p: Vector2<f64>, q: Vector2<f64>) -> f64 {
        let d = q - p;
        let pd = wedge(p, d);
        match self.kind {
            GeometryKind::Hyp => {
                let num = (d.norm_squared() - pd * pd).max(0.0).sqrt();
                let den = ((1.0 - p.norm_squared()) * (1.0 - q.norm_squared())).sqrt();
                (num / den).asinh()
            }
            GeometryKind::Sph => {
                let cross = (d.norm_squared() + pd * pd).sqrt();
                cross.atan2(1.0 + p.dot(&q))
            }
            GeometryKind::Euc => d.norm(),
        }
    }

    pub fn dist(&self, p: [f64; 2], q: [f64; 2]) -> Result<f64> {
        let (ps, qs) = (self.check(p)?, self.check(q)?);
        Ok(self.standard_dist(ps, qs))
    }

    pub fn segment_length(&self, s: &OrientedSegment) -> Result<f64> {
        self.dist(s.start, s.end)
    }

    /// Midpoint of the segment `pq`, closed form on E², bisection along the
    /// segment otherwise, to a relative residual of `1e-12`.
    pub fn midpoint(&self, p: [f64; 2], q: [f64; 2]) -> Result<[f64; 2]> {
        let (ps, qs) = (self.check(p)?, self.check(q)?);
        let total = self.standard_dist(ps, qs);
        if self.kind == GeometryKind::Sph && total >= PI * (1.0 - DEFAULT_TOL) {
            return Err(Error::AntipodalAmbiguity { dist: total });
        }
        if self.kind == GeometryKind::Euc {
            return Ok([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
        }
        if total == 0.0 {
            return Ok(p);
        }
        let residual = |s: f64| {
            let m = ps + (qs - ps) * s;
            self.standard_dist(ps, m) - self.standard_dist(m, qs)
        };
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut s = 0.5;
        for _ in 0..200 {
            s = 0.5 * (lo + hi);
            let f = residual(s);
            if f.abs() < 1e-12 * total {
                break;
            }
            if f < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            if hi - lo <= f64::EPSILON * s {
                break;
            }
        }
        Ok(self.standard_to_model(ps + (qs - ps) * s))
    }

    /// Inner product of two tangent vectors at `v` (standard model), up to a
    /// positive factor depending only on `v`.
    fn tangent_inner(&self, v: Vector2<f64>, a: Vector2<f64>, b: Vector2<f64>) -> f64 {
        match self.kind {
            GeometryKind::Hyp => a.dot(&b) + a.dot(&v) * b.dot(&v) / (1.0 - v.norm_squared()),
            GeometryKind::Sph => a.dot(&b) - a.dot(&v) * b.dot(&v) / (1.0 + v.norm_squared()),
            GeometryKind::Euc => a.dot(&b),
        }
    }

    /// Angle at `vertex` between the segments towards `p` and `q`.
    pub fn angle(&self, vertex: [f64; 2], p: [f64; 2], q: [f64; 2]) -> Result<f64> {
        let v = self.check(vertex)?;
        let (a, b) = (self.check(p)? - v, self.check(q)? - v);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return Err(Error::DegenerateSegment);
        }
        let gaa = self.tangent_inner(v, a, a);
        let gbb = self.tangent_inner(v, b, b);
        let gab = self.tangent_inner(v, a, b);
        Ok((gaa * gbb - gab * gab).max(0.0).sqrt().atan2(gab))
    }

    /// Lift of a standard-model point, normalized to unit norm under the form.
    fn lift(&self, p: Vector2<f64>) -> Vector3<f64> {
        let s = Vector3::new(p.x, p.y, 1.0);
        let j = self.kind.form();
        s / (s.dot(&(j * s))).abs().sqrt()
    }

    /// Orthonormal frame `[e1 e2 e0]` at the start of a segment, with `e0`
    /// the point and `e1` the unit tangent towards the end.
    fn frame(&self, start: Vector2<f64>, end: Vector2<f64>) -> Matrix3<f64> {
        let j = self.kind.form();
        let ip = |x: &Vector3<f64>, y: &Vector3<f64>| x.dot(&(j * y));
        let e0 = self.lift(start);
        let d = end - start;
        let delta = Vector3::new(d.x, d.y, 0.0);
        let t = delta - e0 * (ip(&delta, &e0) / ip(&e0, &e0));
        let e1 = t / ip(&t, &t).sqrt();
        let e2 = match self.kind {
            GeometryKind::Hyp => j * e0.cross(&e1),
            _ => e0.cross(&e1),
        };
        Matrix3::from_columns(&[e1, e2, e0])
    }

    /// The orientation-preserving isometry carrying `s1` onto `s2`.
    pub fn segment_isometry(&self, s1: &OrientedSegment, s2: &OrientedSegment) -> Result<ProjMat> {
        let (a0, a1) = (self.check(s1.start)?, self.check(s1.end)?);
        let (b0, b1) = (self.check(s2.start)?, self.check(s2.end)?);
        let (len_a, len_b) = (self.standard_dist(a0, a1), self.standard_dist(b0, b1));
        if len_a == 0.0 || len_b == 0.0 {
            return Err(Error::DegenerateSegment);
        }
        if (len_a - len_b).abs() > DEFAULT_TOL * len_a.max(1.0) {
            return Err(Error::LengthMismatch { len_a, len_b });
        }
        match self.kind {
            GeometryKind::Euc => Ok(self.euclidean_isometry(a0, a1, b0, b1, s1, s2)),
            kind => {
                let f1 = self.frame(a0, a1);
                let f2 = self.frame(b0, b1);
                let f1_inv = match kind {
                    GeometryKind::Hyp => {
                        let j = kind.form();
                        j * f1.transpose() * j
                    }
                    _ => f1.transpose(),
                };
                Ok(self.conjugate(&(f2 * f1_inv)))
            }
        }
    }

    fn euclidean_isometry(
        &self,
        a0: Vector2<f64>,
        a1: Vector2<f64>,
        b0: Vector2<f64>,
        b1: Vector2<f64>,
        s1: &OrientedSegment,
        s2: &OrientedSegment,
    ) -> ProjMat {
        let (da, db) = (a1 - a0, b1 - b0);
        let psi = wedge(da, db).atan2(da.dot(&db));
        if psi.abs() <= 4.0 * f64::EPSILON {
            // Pure translation, taken in the given coordinates to avoid
            // rescaling round-off.
            let t = [s2.start[0] - s1.start[0], s2.start[1] - s1.start[1]];
            return ProjMat::new(Matrix3::new(1.0, 0.0, t[0], 0.0, 1.0, t[1], 0.0, 0.0, 1.0));
        }
        let rot = Matrix2::new(psi.cos(), -psi.sin(), psi.sin(), psi.cos());
        let t = b0 - rot * a0;
        let g = Matrix3::new(rot[(0, 0)], rot[(0, 1)], t.x, rot[(1, 0)], rot[(1, 1)], t.y, 0.0, 0.0, 1.0);
        self.conjugate(&g)
    }

    /// The order-two rotation about `center`.
    pub fn pi_rotation(&self, center: [f64; 2]) -> Result<ProjMat> {
        let c = self.check(center)?;
        if c.x == 0.0 && c.y == 0.0 {
            return Ok(ProjMat::diagonal([-1.0, -1.0, 1.0]));
        }
        let g = match self.kind {
            GeometryKind::Euc => Matrix3::new(-1.0, 0.0, 2.0 * c.x, 0.0, -1.0, 2.0 * c.y, 0.0, 0.0, 1.0),
            kind => {
                let j = kind.form();
                let s = Vector3::new(c.x, c.y, 1.0);
                s * (j * s).transpose() * (2.0 / s.dot(&(j * s))) - Matrix3::identity()
            }
        };
        Ok(self.conjugate(&g))
    }

    /// Whether `g` is an isometry of the model, up to relative `tol`.
    pub fn is_isometry(&self, g: &ProjMat, tol: f64) -> bool {
        let m = g.matrix();
        match self.form() {
            Some(q) => {
                let pulled = m.transpose() * q * m;
                let mu = pulled[(2, 2)] / q[(2, 2)];
                mu > 0.0 && (pulled - q * mu).amax() <= tol * pulled.amax()
            }
            None => {
                let scale = m[(2, 2)];
                let affine = m[(2, 0)].abs().max(m[(2, 1)].abs()) <= tol * scale.abs();
                let standard = self.conjugator_inv() * m * self.conjugator() / scale;
                let lin = standard.fixed_view::<2, 2>(0, 0);
                affine && (lin.transpose() * lin - Matrix2::identity()).amax() <= tol
            }
        }
    }
}

/// A transvection of length `tau` along the geodesic through the origin in
/// direction `psi`, in the standard model (`C = I`). Euclidean translations
/// are not covered.
pub fn transvection(kind: GeometryKind, tau: f64, psi: f64) -> ProjMat {
    let (c, s) = match kind {
        GeometryKind::Hyp => (tau.cosh(), tau.sinh()),
        _ => (tau.cos(), tau.sin()),
    };
    let sign = if kind == GeometryKind::Hyp { 1.0 } else { -1.0 };
    let along = Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, sign * s, 0.0, c);
    let (sp, cp) = psi.sin_cos();
    let rot = Matrix3::new(cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0);
    ProjMat::new(rot * along * rot.transpose())
}

/// Euclidean area of an affine triangle, signed by orientation.
pub fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn hyp() -> GeometryModel {
        GeometryModel::standard(GeometryKind::Hyp)
    }

    fn sph() -> GeometryModel {
        GeometryModel::standard(GeometryKind::Sph)
    }

    #[test]
    fn containment() {
        assert!(hyp().contains([0.0, 0.0]));
        assert!(!hyp().contains([2.0, 0.0]));
        let m = GeometryModel::new(GeometryKind::Hyp, 10.0, 2.0).unwrap();
        let q = m.form().unwrap();
        let v = Vector3::new(5.0, 0.0, 1.0);
        assert!(v.dot(&(q * v)) < 0.0);
        assert!(m.contains([5.0, 0.0]));
        assert!(GeometryModel::new(GeometryKind::Sph, 1.0, 2.0).is_err());
    }

    #[test]
    fn klein_distance_along_diameter() {
        for x in [0.1, 0.5, 0.9, 0.999] {
            // cross ratio with the ideal endpoints -1 and 1
            let oracle = 0.5 * (((1.0 + x) * 1.0) / ((1.0 - x) * 1.0f64)).ln();
            let d = hyp().dist([0.0, 0.0], [x, 0.0]).unwrap();
            assert!((d - oracle).abs() < 1e-12, "{x}");
        }
        assert_eq!(hyp().dist([0.3, 0.2], [0.3, 0.2]).unwrap(), 0.0);
        assert_eq!(hyp().dist([0.0, 0.0], [1.0, 0.0]).unwrap_err().kind(), "OutsideDomain");
    }

    #[test]
    fn spherical_distance_is_ray_angle() {
        let d = sph().dist([0.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((d - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn midpoints() {
        let m = hyp().midpoint([-0.5, 0.0], [0.5, 0.0]).unwrap();
        assert!(m[0].abs() < 1e-12 && m[1] == 0.0);
        let m = hyp().midpoint([0.0, 0.0], [0.5, 0.0]).unwrap();
        assert!((m[0] - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        let m = sph().midpoint([0.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((m[0] - FRAC_PI_8.tan()).abs() < 1e-12);
        let e = GeometryModel::standard(GeometryKind::Euc);
        assert_eq!(e.midpoint([1.0, 2.0], [3.0, 6.0]).unwrap(), [2.0, 4.0]);
        assert_eq!(sph().midpoint([-1e20, 0.0], [1e20, 0.0]).unwrap_err().kind(), "AntipodalAmbiguity");
    }

    #[test]
    fn angles() {
        let e = GeometryModel::standard(GeometryKind::Euc);
        assert!((e.angle([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((hyp().angle([0.0, 0.0], [0.5, 0.0], [0.0, 0.3]).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let (a, b, c) = ([0.1, 0.1], [0.6, 0.0], [0.2, 0.7]);
        let sum = hyp().angle(a, b, c).unwrap() + hyp().angle(b, c, a).unwrap() + hyp().angle(c, a, b).unwrap();
        assert!(sum < PI);
        let sum = sph().angle(a, b, c).unwrap() + sph().angle(b, c, a).unwrap() + sph().angle(c, a, b).unwrap();
        assert!(sum > PI);
        assert_eq!(hyp().angle(a, a, b).unwrap_err().kind(), "DegenerateSegment");
    }

    #[test]
    fn euclidean_segment_isometry_is_translation() {
        let e = GeometryModel::standard(GeometryKind::Euc);
        let g = e
            .segment_isometry(
                &OrientedSegment::new([0.0, 0.0], [1.0, 0.0]),
                &OrientedSegment::new([2.0, 3.0], [3.0, 3.0]),
            )
            .unwrap();
        let expected = ProjMat::from_row_slice(&[1.0, 0.0, 2.0, 0.0, 1.0, 3.0, 0.0, 0.0, 1.0]);
        assert!(crate::pgl_distance(&g, &expected).unwrap() < 1e-15);
    }

    #[test]
    fn hyperbolic_segment_isometry_preserves_form() {
        let m = hyp();
        let s1 = OrientedSegment::new([-0.3, 0.0], [0.3, 0.0]);
        let len = m.segment_length(&s1).unwrap();
        // a congruent segment starting off-center, along a line through it
        let start = [0.2, 0.1];
        let dir = Vector2::new(0.6, 0.8);
        let mut lo = 0.0;
        let mut hi = 0.5;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let end = [start[0] + mid * dir.x, start[1] + mid * dir.y];
            if m.dist(start, end).unwrap() < len {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s2 = OrientedSegment::new(start, [start[0] + lo * dir.x, start[1] + lo * dir.y]);
        let g = m.segment_isometry(&s1, &s2).unwrap();
        let j = GeometryKind::Hyp.form();
        let gm = g.matrix();
        let pulled = gm.transpose() * j * gm;
        assert!((pulled - j * pulled[(2, 2)] / j[(2, 2)]).amax() < 1e-10);
        assert!(m.is_isometry(&g, 1e-10));
        for s in [0.0, 0.25, 0.5, 1.0] {
            let img = g.apply_point(s1.point_at(s), 1e-12).unwrap();
            let target = s2.point_at(s);
            // images stay on the target line
            let off = (img[0] - target[0]) * dir.y - (img[1] - target[1]) * dir.x;
            assert!(off.abs() < 1e-10);
        }
        let end = g.apply_point(s1.end, 1e-12).unwrap();
        assert!((end[0] - s2.end[0]).abs() < 1e-9 && (end[1] - s2.end[1]).abs() < 1e-9);
    }

    #[test]
    fn identity_segment_gives_identity() {
        for kind in [GeometryKind::Hyp, GeometryKind::Sph, GeometryKind::Euc] {
            let m = GeometryModel::new(kind, 3.0, 2.0).unwrap();
            let s = OrientedSegment::new([0.4, -0.3], [-0.5, 0.6]);
            let g = m.segment_isometry(&s, &s).unwrap();
            assert!(crate::pgl_distance(&g, &ProjMat::identity()).unwrap() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn pi_rotations() {
        for kind in [GeometryKind::Hyp, GeometryKind::Sph, GeometryKind::Euc] {
            let m = GeometryModel::new(kind, 7.0, 3.0).unwrap();
            let r = m.pi_rotation([0.0, 0.0]).unwrap();
            assert_eq!(*r.matrix(), Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 1.0)));
            let c = [1.2, -0.5];
            let r = m.pi_rotation(c).unwrap();
            assert!(crate::pgl_distance(&(r * r), &ProjMat::identity()).unwrap() < 1e-12);
            let fixed = r.apply_point(c, 1e-12).unwrap();
            assert!((fixed[0] - c[0]).abs() < 1e-12 && (fixed[1] - c[1]).abs() < 1e-12);
            assert!(m.is_isometry(&r, 1e-12));
        }
    }

    #[test]
    fn transvection_moves_origin_by_tau() {
        let g = transvection(GeometryKind::Hyp, 0.4, 0.7);
        let p = g.apply_point([0.0, 0.0], 1e-12).unwrap();
        assert!((hyp().dist([0.0, 0.0], p).unwrap() - 0.4).abs() < 1e-14);
        let g = transvection(GeometryKind::Sph, 0.4, 0.7);
        let p = g.apply_point([0.0, 0.0], 1e-12).unwrap();
        assert!((sph().dist([0.0, 0.0], p).unwrap() - 0.4).abs() < 1e-14);
        assert!(sph().is_isometry(&g, 1e-14));
    }
}
