//! Constant-curvature cone tori converging to translation tori.
//!
//! A translation torus has an origin-centered fundamental parallelogram `Q`
//! whose opposite sides are paired by the translations `A = ρ(a)` and
//! `B = ρ(b)`. Conjugating S² or H² by `C_t = diag(t^pe, t^qe, 1)` with
//! `pe > qe > 0` produces models 𝕏_t whose domains exhaust the affine patch
//! and whose isometries collapse onto `Heis`. For large `t` the same `Q` is
//! an 𝕏_t-parallelogram: the half-turn about the origin swaps opposite sides,
//! so they are congruent, and pairing them by 𝕏_t-isometries gives a cone
//! torus with pairings `A_t → A`, `B_t → B`.
//!
//! Vertices are labelled `v0..v3` with edges `e1 = v0v1`, `e2 = v1v2`,
//! `e3 = v2v3`, `e4 = v3v0`. The pairing `A` sends `e1` onto `e3` reversed
//! (`v0 ↦ v3`, `v1 ↦ v2`) and `B` sends `e2` onto `e4` reversed
//! (`v1 ↦ v0`, `v2 ↦ v3`).

use serde::{Deserialize, Serialize};

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::heis::HeisElem;
use crate::models::{GeometryKind, GeometryModel, OrientedSegment};
use crate::projective::{pgl_distance, projective_angle, ProjMat};
use crate::rep::{HolonomyClass, RepParams};
use crate::tori::{closed_geodesic_classes, GeodesicClass};
use crate::DEFAULT_TOL;

/// A quadrilateral with marked vertices `v0..v3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkedParallelogram {
    pub vertices: [[f64; 2]; 4],
    pub centroid: [f64; 2],
}

impl MarkedParallelogram {
    pub fn new(vertices: [[f64; 2]; 4]) -> Self {
        let cx = vertices.iter().map(|v| v[0]).sum::<f64>() / 4.0;
        let cy = vertices.iter().map(|v| v[1]).sum::<f64>() / 4.0;
        MarkedParallelogram { vertices, centroid: [cx, cy] }
    }

    /// Origin-centered square of the given side, counterclockwise.
    pub fn square(side: f64) -> Self {
        let h = side / 2.0;
        MarkedParallelogram::new([[-h, -h], [h, -h], [h, h], [-h, h]])
    }

    /// Edge `e_k` for `k ∈ 1..=4`.
    pub fn edge(&self, k: usize) -> OrientedSegment {
        let i = (k + 3) % 4;
        OrientedSegment::new(self.vertices[i], self.vertices[(i + 1) % 4])
    }

    /// Sign of the shoelace area.
    pub fn is_counterclockwise(&self) -> bool {
        let v = &self.vertices;
        let twice_area: f64 = (0..4)
            .map(|i| {
                let (p, q) = (v[i], v[(i + 1) % 4]);
                p[0] * q[1] - p[1] * q[0]
            })
            .sum();
        twice_area > 0.0
    }

    /// Whether opposite edges are parallel translates of each other.
    pub fn is_affine_parallelogram(&self, tol: f64) -> bool {
        let v = &self.vertices;
        let d = [v[0][0] + v[2][0] - v[1][0] - v[3][0], v[0][1] + v[2][1] - v[1][1] - v[3][1]];
        d[0].abs().max(d[1].abs()) <= tol
    }
}

/// A cone torus: `Q` with its side pairings in a model geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeTorusData {
    pub q: MarkedParallelogram,
    pub a: ProjMat,
    pub b: ProjMat,
    /// Total angle at the cone point.
    pub cone_angle: f64,
    pub geometry: GeometryModel,
}

/// Fundamental parallelogram of a translation torus together with its side
/// pairings, which are the holonomy translations themselves.
pub fn translation_fundamental_domain(
    p: &RepParams,
) -> Result<(MarkedParallelogram, HeisElem, HeisElem)> {
    let class = p.classify();
    if class != HolonomyClass::CompleteTranslation {
        return Err(Error::NotTranslation { tag: class.name().to_string() });
    }
    let rho = p.to_rep();
    let pv = rho.rho_a().translation_vector();
    let qv = rho.rho_b().translation_vector();
    let half = |sp: f64, sq: f64| [(sp * pv[0] + sq * qv[0]) / 2.0, (sp * pv[1] + sq * qv[1]) / 2.0];
    let q = MarkedParallelogram::new([half(-1.0, 1.0), half(-1.0, -1.0), half(1.0, -1.0), half(1.0, 1.0)]);
    // Read the translations back off the vertices so that they pair the
    // sides of the rounded Q exactly.
    let v = &q.vertices;
    let a = HeisElem::translation(v[3][0] - v[0][0], v[3][1] - v[0][1]);
    let b = HeisElem::translation(v[0][0] - v[1][0], v[0][1] - v[1][1]);
    Ok((q, a, b))
}

pub fn cone_torus_from_parallelogram(
    m: &GeometryModel,
    q: &MarkedParallelogram,
) -> Result<ConeTorusData> {
    for v in &q.vertices {
        if !m.contains(*v) {
            return Err(Error::OutsideDomain { x: v[0], y: v[1] });
        }
    }
    let pair = |from: OrientedSegment, to: OrientedSegment| {
        m.segment_isometry(&from, &to).map_err(|e| match e {
            Error::LengthMismatch { len_a, len_b } => Error::SideMismatch { len_a, len_b },
            other => other,
        })
    };
    let a = pair(q.edge(1), q.edge(3).reversed())?;
    let b = pair(q.edge(2), q.edge(4).reversed())?;
    let v = &q.vertices;
    let mut cone_angle = 0.0;
    for i in 0..4 {
        cone_angle += m.angle(v[i], v[(i + 3) % 4], v[(i + 1) % 4])?;
    }
    Ok(ConeTorusData { q: *q, a, b, cone_angle, geometry: *m })
}

/// The two midlines of a cone torus and where they cross.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Midlines {
    /// Line through the midpoints of the `A`-paired edges.
    pub alpha: [f64; 3],
    /// Line through the midpoints of the `B`-paired edges.
    pub beta: [f64; 3],
    pub intersection: [f64; 2],
    /// Angle between `α` and `A·α`, and between `β` and `B·β`.
    pub residual_a: f64,
    pub residual_b: f64,
}

fn line_through(p: [f64; 2], q: [f64; 2]) -> Vector3<f64> {
    let l = Vector3::new(p[0], p[1], 1.0).cross(&Vector3::new(q[0], q[1], 1.0));
    l / l.norm()
}

pub fn midlines(ct: &ConeTorusData) -> Result<Midlines> {
    midlines_with_tol(ct, DEFAULT_TOL)
}

pub fn midlines_with_tol(ct: &ConeTorusData, tol: f64) -> Result<Midlines> {
    let m = &ct.geometry;
    let mid = |k: usize| {
        let e = ct.q.edge(k);
        m.midpoint(e.start, e.end)
    };
    let alpha = line_through(mid(1)?, mid(3)?);
    let beta = line_through(mid(2)?, mid(4)?);
    let residual_a = projective_angle(&alpha, &ct.a.apply_line(&alpha)?);
    let residual_b = projective_angle(&beta, &ct.b.apply_line(&beta)?);
    let residual = residual_a.max(residual_b);
    if !(residual <= tol) {
        return Err(Error::InvarianceViolation { residual });
    }
    let x = alpha.cross(&beta);
    if x.z.abs() <= tol * x.norm() {
        return Err(Error::AtInfinity { w: x.z });
    }
    Ok(Midlines {
        alpha: alpha.into(),
        beta: beta.into(),
        intersection: [x.x / x.z, x.y / x.z],
        residual_a,
        residual_b,
    })
}

/// Measurements for one time of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowMetrics {
    pub dist_a: f64,
    pub dist_b: f64,
    /// Largest distance between a model midpoint of an edge of `Q` and its
    /// affine midpoint.
    pub midpoint_drift: f64,
    pub cone_angle: f64,
    /// `pgl_distance(A B A⁻¹ B⁻¹, I)`.
    pub commutator_residual: f64,
    pub midline_residual: f64,
    /// Distance from the midline crossing to the centroid of `Q`.
    pub midline_center_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t: f64,
    /// `None` when `Q` does not fit in the domain at this time.
    pub metrics: Option<RowMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub kind: GeometryKind,
    pub exponents: [f64; 2],
    pub parallelogram: MarkedParallelogram,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Rows that produced a cone torus.
    pub fn metrics(&self) -> impl Iterator<Item = (f64, &RowMetrics)> {
        self.rows.iter().filter_map(|r| r.metrics.as_ref().map(|m| (r.t, m)))
    }
}

fn validate_schedule(exponents: (f64, f64), times: &[f64]) -> Result<()> {
    let (pe, qe) = exponents;
    if !(pe >= qe && qe >= 0.0) {
        return Err(Error::InvalidPath { pe, qe });
    }
    if times.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if let Some(t) = times.iter().find(|t| !(**t >= 1.0 && t.is_finite())) {
        return Err(Error::InvalidSchedule(format!("time {t} is not a finite value >= 1")));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSchedule("times must be strictly increasing".into()));
    }
    Ok(())
}

/// Cone tori on the fixed fundamental parallelogram of `p` in the models
/// conjugated by `diag(t^pe, t^qe, 1)`, compared with the Heisenberg side
/// pairings.
pub fn regenerate_sequence(
    p: &RepParams,
    kind: GeometryKind,
    exponents: (f64, f64),
    times: &[f64],
) -> Result<ConvergenceReport> {
    let (q, a, b) = translation_fundamental_domain(p)?;
    validate_schedule(exponents, times)?;
    let (a_inf, b_inf) = (a.to_projmat(), b.to_projmat());
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let m = GeometryModel::along_path(kind, exponents.0, exponents.1, t)?;
        if !q.vertices.iter().all(|v| m.contains(*v)) {
            rows.push(ConvergenceRow { t, metrics: None });
            continue;
        }
        let ct = cone_torus_from_parallelogram(&m, &q)?;
        rows.push(ConvergenceRow { t, metrics: Some(row_metrics(&ct, &a_inf, &b_inf)?) });
    }
    Ok(ConvergenceReport { kind, exponents: [exponents.0, exponents.1], parallelogram: q, rows })
}

fn row_metrics(ct: &ConeTorusData, a_inf: &ProjMat, b_inf: &ProjMat) -> Result<RowMetrics> {
    let m = &ct.geometry;
    let mut drift: f64 = 0.0;
    for k in 1..=4 {
        let e = ct.q.edge(k);
        let mm = m.midpoint(e.start, e.end)?;
        let affine = [0.5 * (e.start[0] + e.end[0]), 0.5 * (e.start[1] + e.end[1])];
        drift = drift.max((mm[0] - affine[0]).hypot(mm[1] - affine[1]));
    }
    let comm = ct.a * ct.b * ct.a.inverse()? * ct.b.inverse()?;
    let lines = midlines(ct)?;
    let c = ct.q.centroid;
    Ok(RowMetrics {
        dist_a: pgl_distance(&ct.a, a_inf)?,
        dist_b: pgl_distance(&ct.b, b_inf)?,
        midpoint_drift: drift,
        cone_angle: ct.cone_angle,
        commutator_residual: pgl_distance(&comm, &ProjMat::identity())?,
        midline_residual: lines.residual_a.max(lines.residual_b),
        midline_center_error: (lines.intersection[0] - c[0]).hypot(lines.intersection[1] - c[1]),
    })
}

/// Evidence that a shear torus is not a limit of cone tori.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShearObstruction {
    /// The closed classes of the shear torus, all horizontal.
    pub closed_classes: Vec<GeodesicClass>,
    pub all_parallel: bool,
    /// A reference cone torus, whose midlines are closed geodesics in
    /// distinct classes that cross at its center.
    pub reference: ConeTorusData,
    /// Angle at which the reference midlines cross.
    pub midline_crossing_angle: f64,
}

pub fn shear_limit_obstruction(p: &RepParams, max_class: u32) -> Result<ShearObstruction> {
    let class = p.classify();
    if class != HolonomyClass::CompleteShear {
        return Err(Error::NotShear { tag: class.name().to_string() });
    }
    let closed_classes: Vec<_> = closed_geodesic_classes(p, max_class)?
        .into_iter()
        .filter(|c| c.closed)
        .collect();
    let all_parallel = closed_classes
        .iter()
        .all(|c| closed_classes.iter().all(|d| c.is_parallel_to(d, DEFAULT_TOL)));
    let reference = cone_torus_from_parallelogram(
        &GeometryModel::standard(GeometryKind::Hyp),
        &MarkedParallelogram::square(0.2),
    )?;
    let lines = midlines(&reference)?;
    let (al, be) = (Vector3::from(lines.alpha), Vector3::from(lines.beta));
    let crossing = {
        let da = [al.y, -al.x];
        let db = [be.y, -be.x];
        let cross = da[0] * db[1] - da[1] * db[0];
        let dot = da[0] * db[0] + da[1] * db[1];
        cross.abs().atan2(dot.abs())
    };
    Ok(ShearObstruction { closed_classes, all_parallel, reference, midline_crossing_angle: crossing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

    fn torus() -> RepParams {
        RepParams::new(2.0, 0.0, FRAC_PI_2, 1.0)
    }

    #[test]
    fn fundamental_domain_of_example_torus() {
        let (q, a, b) = translation_fundamental_domain(&torus()).unwrap();
        let expected = [[0.5, -1.0], [-0.5, -1.0], [-0.5, 1.0], [0.5, 1.0]];
        for (v, e) in q.vertices.iter().zip(&expected) {
            assert!((v[0] - e[0]).abs() < 1e-15 && (v[1] - e[1]).abs() < 1e-15);
        }
        assert!(q.centroid[0].abs() < 1e-15 && q.centroid[1].abs() < 1e-15);
        assert!(q.is_affine_parallelogram(1e-15));
        assert!(!q.is_counterclockwise());
        assert!(a.is_translation(0.0) && b.is_translation(0.0));
        let shear = RepParams::new(1.0, 0.0, FRAC_PI_4, 1.0);
        assert_eq!(translation_fundamental_domain(&shear).unwrap_err().kind(), "NotTranslation");
    }

    #[test]
    fn euclidean_unit_square() {
        let m = GeometryModel::standard(GeometryKind::Euc);
        let ct = cone_torus_from_parallelogram(&m, &MarkedParallelogram::square(1.0)).unwrap();
        assert!((ct.cone_angle - TAU).abs() < 1e-15);
        let a = ct.a.apply_point([-0.5, -0.5], 1e-12).unwrap();
        assert!((a[0] + 0.5).abs() < 1e-15 && (a[1] - 0.5).abs() < 1e-15);
        let lines = midlines(&ct).unwrap();
        assert!(lines.intersection[0].abs() < 1e-15 && lines.intersection[1].abs() < 1e-15);
    }

    #[test]
    fn hyperbolic_square_has_angle_deficit() {
        let m = GeometryModel::standard(GeometryKind::Hyp);
        let q = MarkedParallelogram::square(0.2);
        let ct = cone_torus_from_parallelogram(&m, &q).unwrap();
        let v = &q.vertices;
        let oracle: f64 = (0..4).map(|i| m.angle(v[i], v[(i + 1) % 4], v[(i + 3) % 4]).unwrap()).sum();
        assert!((ct.cone_angle - oracle).abs() < 1e-14);
        assert!(ct.cone_angle < TAU);
        let lines = midlines(&ct).unwrap();
        assert_ne!(lines.alpha, lines.beta);
        assert!(lines.intersection[0].abs() < 1e-12 && lines.intersection[1].abs() < 1e-12);
    }

    #[test]
    fn vertex_outside_domain() {
        let m = GeometryModel::standard(GeometryKind::Hyp);
        let err = cone_torus_from_parallelogram(&m, &MarkedParallelogram::square(1.6)).unwrap_err();
        assert_eq!(err.kind(), "OutsideDomain");
    }

    #[test]
    fn half_turn_symmetry_of_centered_parallelogram() {
        let (q, _, _) = translation_fundamental_domain(&torus()).unwrap();
        let m = GeometryModel::along_path(GeometryKind::Hyp, 2.0, 1.0, 10.0).unwrap();
        let ct = cone_torus_from_parallelogram(&m, &q).unwrap();
        let r = m.pi_rotation([0.0, 0.0]).unwrap();
        for v in &q.vertices {
            let w = r.apply_point(*v, 1e-12).unwrap();
            assert!(q.vertices.iter().any(|u| (u[0] - w[0]).abs() < 1e-12 && (u[1] - w[1]).abs() < 1e-12));
        }
        let conj = r * ct.a * r;
        assert!(pgl_distance(&conj, &ct.a.inverse().unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn schedule_validation() {
        let p = torus();
        assert_eq!(regenerate_sequence(&p, GeometryKind::Hyp, (2.0, 1.0), &[]).unwrap_err().kind(), "EmptySchedule");
        assert_eq!(
            regenerate_sequence(&p, GeometryKind::Hyp, (2.0, 1.0), &[10.0, 5.0]).unwrap_err().kind(),
            "InvalidSchedule"
        );
        assert_eq!(regenerate_sequence(&p, GeometryKind::Hyp, (1.0, 2.0), &[10.0]).unwrap_err().kind(), "InvalidPath");
    }

    #[test]
    fn small_times_are_flagged() {
        let report = regenerate_sequence(&torus(), GeometryKind::Hyp, (2.0, 1.0), &[1.0, 10.0]).unwrap();
        assert!(report.rows[0].metrics.is_none());
        assert!(report.rows[1].metrics.is_some());
    }

    #[test]
    fn shear_obstruction_example() {
        let w = shear_limit_obstruction(&RepParams::new(1.0, 0.0, FRAC_PI_4, 1.0), 5).unwrap();
        assert!(w.all_parallel && !w.closed_classes.is_empty());
        assert!(w.closed_classes.iter().all(|c| c.is_horizontal(1e-12)));
        assert!(w.midline_crossing_angle > 1.0);
        assert_eq!(shear_limit_obstruction(&torus(), 5).unwrap_err().kind(), "NotShear");
    }
}
