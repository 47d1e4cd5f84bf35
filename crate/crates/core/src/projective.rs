//! Projective transformations of ℝP², stored as 3×3 matrices up to scale.

use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries below this magnitude are skipped when fixing the sign of a
/// normalized representative.
pub const SIGN_THRESHOLD: f64 = 1e-12;

/// Relative determinant threshold below which a matrix counts as singular.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// An element of PGL(3, ℝ), carried by any nonzero matrix representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjMat {
    m: Matrix3<f64>,
    normalized: bool,
}

impl ProjMat {
    pub fn new(m: Matrix3<f64>) -> Self {
        ProjMat { m, normalized: false }
    }

    pub fn identity() -> Self {
        ProjMat::new(Matrix3::identity())
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        ProjMat::new(Matrix3::from_diagonal(&Vector3::from(d)))
    }

    pub fn from_row_slice(entries: &[f64; 9]) -> Self {
        ProjMat::new(Matrix3::from_row_slice(entries))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Entries in row-major order.
    pub fn rows(&self) -> [[f64; 3]; 3] {
        let m = &self.m;
        [
            [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
            [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
            [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        ]
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    /// Fails unless `|det| > 1e-12·‖M‖³`, a scale-free singularity test.
    pub fn check_invertible(&self) -> Result<()> {
        let det = self.det();
        let scale = self.m.norm().powi(3);
        if !(det.abs() > SINGULAR_THRESHOLD * scale) {
            return Err(Error::SingularMatrix { det });
        }
        Ok(())
    }

    /// Unit Frobenius norm, first entry above [`SIGN_THRESHOLD`] positive.
    pub fn normalize(&self) -> Result<ProjMat> {
        if self.normalized {
            return Ok(*self);
        }
        self.check_invertible()?;
        let mut m = self.m / self.m.norm();
        let lead = self
            .rows()
            .into_iter()
            .flatten()
            .find(|x| x.abs() > SIGN_THRESHOLD)
            .unwrap_or(1.0);
        if lead < 0.0 {
            m = -m;
        }
        Ok(ProjMat { m, normalized: true })
    }

    pub fn inverse(&self) -> Result<ProjMat> {
        self.check_invertible()?;
        let inv = self.m.try_inverse().ok_or(Error::SingularMatrix { det: self.det() })?;
        Ok(ProjMat::new(inv))
    }

    /// Action on the affine point `[x : y : 1]`.
    pub fn apply_point(&self, p: [f64; 2], tol: f64) -> Result<[f64; 2]> {
        let h = self.m * Vector3::new(p[0], p[1], 1.0);
        let scale = h.amax().max(1.0);
        if h.z.abs() <= tol * scale {
            return Err(Error::AtInfinity { w: h.z });
        }
        Ok([h.x / h.z, h.y / h.z])
    }

    pub fn apply_homogeneous(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m * v
    }

    /// Action on a line given by its homogeneous coefficient vector.
    pub fn apply_line(&self, line: &Vector3<f64>) -> Result<Vector3<f64>> {
        let inv = self.inverse()?;
        Ok(inv.m.transpose() * line)
    }

    pub fn scaled(&self, s: f64) -> ProjMat {
        ProjMat::new(self.m * s)
    }
}

/// Distance between normalized representatives, minimized over the sign
/// ambiguity, so projectively equal matrices are at distance zero.
pub fn pgl_distance(m: &ProjMat, n: &ProjMat) -> Result<f64> {
    let a = m.normalize()?;
    let b = n.normalize()?;
    let minus = (a.m - b.m).norm();
    let plus = (a.m + b.m).norm();
    Ok(minus.min(plus))
}

impl Mul for ProjMat {
    type Output = ProjMat;
    fn mul(self, o: ProjMat) -> ProjMat {
        ProjMat::new(self.m * o.m)
    }
}

impl From<Matrix3<f64>> for ProjMat {
    fn from(m: Matrix3<f64>) -> Self {
        ProjMat::new(m)
    }
}

impl fmt::Display for ProjMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rows();
        write!(f, "{r:?}")
    }
}

/// Angle between two projective points (or lines) as unoriented rays.
pub fn projective_angle(x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
    let cross = x.cross(y).norm();
    let dot = x.dot(y).abs();
    cross.atan2(dot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::HeisElem;

    #[test]
    fn translation_and_shear_act_affinely() {
        let t = HeisElem::translation(3.0, 0.0).to_projmat();
        assert_eq!(t.apply_point([1.0, 1.0], 1e-12).unwrap(), [4.0, 1.0]);
        let s = HeisElem::unipotent(1.0, 0.0, 0.0).to_projmat();
        let oracle = s.matrix() * Vector3::new(0.0, 2.0, 1.0);
        assert_eq!(s.apply_point([0.0, 2.0], 1e-12).unwrap(), [oracle.x, oracle.y]);
        assert_eq!(oracle.xy(), nalgebra::Vector2::new(2.0, 2.0));
    }

    #[test]
    fn point_sent_to_infinity() {
        let m = ProjMat::diagonal([1.0, 1.0, 1e-15]);
        assert_eq!(m.apply_point([1.0, 1.0], 1e-12).unwrap_err().kind(), "AtInfinity");
    }

    #[test]
    fn pgl_distance_ignores_scale() {
        let m = ProjMat::from_row_slice(&[1.0, 2.0, 0.0, -1.0, 3.0, 1.0, 0.5, 0.0, 2.0]);
        assert_eq!(pgl_distance(&m, &m).unwrap(), 0.0);
        assert!(pgl_distance(&m, &m.scaled(2.0)).unwrap() < 1e-15);
        assert!(pgl_distance(&m, &m.scaled(-0.3)).unwrap() < 1e-15);
    }

    #[test]
    fn pgl_distance_identity_vs_diag_112() {
        let d = pgl_distance(&ProjMat::identity(), &ProjMat::diagonal([1.0, 1.0, 2.0])).unwrap();
        let a = [1.0, 1.0, 1.0].map(|x: f64| x / 3f64.sqrt());
        let b = [1.0, 1.0, 2.0].map(|x: f64| x / 6f64.sqrt());
        let oracle = a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        assert!((d - oracle).abs() < 1e-15);
    }

    #[test]
    fn singular_matrices_rejected() {
        let s = ProjMat::diagonal([1.0, 1.0, 0.0]);
        assert_eq!(pgl_distance(&s, &ProjMat::identity()).unwrap_err().kind(), "SingularMatrix");
    }

    #[test]
    fn normalization_is_idempotent() {
        let m = ProjMat::from_row_slice(&[0.0, -2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 3.0]);
        let n = m.normalize().unwrap();
        assert!(n.matrix()[(0, 1)] > 0.0);
        assert!((n.matrix().norm() - 1.0).abs() < 1e-15);
        let nn = ProjMat::new(*n.matrix()).normalize().unwrap();
        assert_eq!(nn.matrix(), n.matrix());
    }

    #[test]
    fn line_action_is_contragredient() {
        let m = HeisElem::unipotent(0.5, 1.0, 2.0).to_projmat();
        let line = Vector3::new(1.0, -1.0, 0.5);
        let image = m.apply_line(&line).unwrap();
        let p = [0.3, 0.8];
        let q = m.apply_point(p, 1e-12).unwrap();
        let before = line.dot(&Vector3::new(p[0], p[1], 1.0));
        let after = image.dot(&Vector3::new(q[0], q[1], 1.0));
        assert!((before - after).abs() < 1e-12);
    }
}
