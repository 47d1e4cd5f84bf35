//! Conjugacy limits of 3-dimensional matrix Lie algebras along diagonal
//! paths `A_t = diag(t^pe, t^qe, 1)`.
//!
//! Conjugation by `A_t` multiplies entry `(i, j)` by `t^(e_i − e_j)` with
//! `e = (pe, qe, 0)`, so each conjugated algebra is a point of the
//! Grassmannian Gr(3, 9) and its limit can be read off from growth rates:
//! eliminate in order of decreasing growth and keep the fastest-growing part
//! of each remaining row.

use std::fmt;

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closure and rank tolerance.
pub const STRUCTURE_TOL: f64 = 1e-9;

type Basis9 = SMatrix<f64, 9, 3>;

fn unit(i: usize, j: usize) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m[(i, j)] = 1.0;
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseAlgebra {
    So3,
    So21,
    Euc2,
    Heis,
}

impl BaseAlgebra {
    pub fn name(self) -> &'static str {
        match self {
            BaseAlgebra::So3 => "so3",
            BaseAlgebra::So21 => "so21",
            BaseAlgebra::Euc2 => "euc2",
            BaseAlgebra::Heis => "heis",
        }
    }

    /// The standard generators: rotations `E_ij − E_ji`, boosts
    /// `E_i3 + E_3i`, translations `E_i3`.
    pub fn basis(self) -> Subalgebra3 {
        let rot = |i, j| unit(i, j) - unit(j, i);
        let boost = |i, j| unit(i, j) + unit(j, i);
        let b = match self {
            BaseAlgebra::So3 => [rot(0, 1), rot(0, 2), rot(1, 2)],
            BaseAlgebra::So21 => [rot(0, 1), boost(0, 2), boost(1, 2)],
            BaseAlgebra::Euc2 => [rot(0, 1), unit(0, 2), unit(1, 2)],
            BaseAlgebra::Heis => [unit(0, 1), unit(0, 2), unit(1, 2)],
        };
        Subalgebra3::new(b)
    }
}

impl std::str::FromStr for BaseAlgebra {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "so3" => Ok(BaseAlgebra::So3),
            "so21" => Ok(BaseAlgebra::So21),
            "euc2" => Ok(BaseAlgebra::Euc2),
            "heis" => Ok(BaseAlgebra::Heis),
            other => Err(format!("unknown algebra {other:?}, expected so3, so21, euc2 or heis")),
        }
    }
}

impl fmt::Display for BaseAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A diagonal path `diag(t^pe, t^qe, 1)` with `pe ≥ qe ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagPath {
    pe: f64,
    qe: f64,
}

impl DiagPath {
    pub fn new(pe: f64, qe: f64) -> Result<Self> {
        if !(pe >= qe && qe >= 0.0) || !pe.is_finite() {
            return Err(Error::InvalidPath { pe, qe });
        }
        Ok(DiagPath { pe, qe })
    }

    pub fn exponents(&self) -> [f64; 3] {
        [self.pe, self.qe, 0.0]
    }

    /// Growth exponent of entry `(i, j)` under conjugation.
    pub fn growth(&self, i: usize, j: usize) -> f64 {
        let e = self.exponents();
        e[i] - e[j]
    }
}

/// A 3-dimensional subspace of the 3×3 matrices, given by a basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subalgebra3 {
    pub basis: [Matrix3<f64>; 3],
}

impl Subalgebra3 {
    pub fn new(basis: [Matrix3<f64>; 3]) -> Self {
        Subalgebra3 { basis }
    }

    fn as_columns(&self) -> Basis9 {
        let cols: Vec<SVector<f64, 9>> = self.basis.iter().map(flatten).collect();
        Basis9::from_columns(&cols)
    }

    /// Orthonormal basis of the span, as columns in ℝ⁹.
    fn orthonormal(&self) -> Result<Basis9> {
        let mut cols = self.as_columns();
        for mut c in cols.column_iter_mut() {
            let n = c.norm();
            if n == 0.0 {
                return Err(Error::DegenerateBasis);
            }
            c /= n;
        }
        let sv = cols.singular_values();
        if sv.min() <= STRUCTURE_TOL * sv.max() {
            return Err(Error::DegenerateBasis);
        }
        // Gram-Schmidt applied twice, which leaves already orthonormal
        // columns untouched.
        for k in 0..3 {
            for _ in 0..2 {
                for i in 0..k {
                    let proj = cols.column(i).dot(&cols.column(k));
                    let ci = cols.column(i).into_owned();
                    let mut ck = cols.column_mut(k);
                    ck -= ci * proj;
                }
            }
            let n = cols.column(k).norm();
            cols.column_mut(k).unscale_mut(n);
        }
        Ok(cols)
    }

    /// Largest norm of the part of a bracket that leaves the span,
    /// relative to the bracket's size.
    pub fn closure_residual(&self) -> Result<f64> {
        let q = self.orthonormal()?;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let v = flatten(&bracket(&self.basis[i], &self.basis[j]));
                let scale = self.basis[i].norm() * self.basis[j].norm();
                let off = v - q * (q.transpose() * v);
                worst = worst.max(off.norm() / scale);
            }
        }
        Ok(worst)
    }

    pub fn is_closed(&self) -> bool {
        self.closure_residual().is_ok_and(|r| r <= STRUCTURE_TOL)
    }
}

fn flatten(m: &Matrix3<f64>) -> SVector<f64, 9> {
    SVector::<f64, 9>::from_iterator((0..3).flat_map(|i| (0..3).map(move |j| m[(i, j)])))
}

fn unflatten(v: &SVector<f64, 9>) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| v[3 * i + j])
}

pub fn bracket(x: &Matrix3<f64>, y: &Matrix3<f64>) -> Matrix3<f64> {
    x * y - y * x
}

pub fn conjugated_algebra_at(base: BaseAlgebra, path: &DiagPath, t: f64) -> Subalgebra3 {
    conjugate_subalgebra(&base.basis(), path, t)
}

pub fn conjugate_subalgebra(s: &Subalgebra3, path: &DiagPath, t: f64) -> Subalgebra3 {
    let scaled = s
        .basis
        .map(|x| Matrix3::from_fn(|i, j| x[(i, j)] * t.powf(path.growth(i, j))));
    Subalgebra3::new(scaled)
}

pub fn limit_algebra(base: BaseAlgebra, path: &DiagPath) -> Subalgebra3 {
    limit_of_subalgebra(&base.basis(), path).expect("standard bases are independent")
}

/// Limit of `A_t S A_t⁻¹` as `t → ∞`.
pub fn limit_of_subalgebra(s: &Subalgebra3, path: &DiagPath) -> Result<Subalgebra3> {
    let mut order: Vec<usize> = (0..9).collect();
    let growth = |k: usize| path.growth(k / 3, k % 3);
    order.sort_by(|&a, &b| growth(b).total_cmp(&growth(a)).then(a.cmp(&b)));

    let mut rows: Vec<SVector<f64, 9>> = s.basis.iter().map(flatten).collect();
    let mut pivots = Vec::with_capacity(3);
    let mut next = 0;
    for &col in &order {
        if next == rows.len() {
            break;
        }
        let scale = rows.iter().map(|r| r.amax()).fold(0.0, f64::max);
        let best = (next..rows.len())
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        if rows[best][col].abs() <= 1e-12 * scale {
            continue;
        }
        rows.swap(next, best);
        let p = rows[next] / rows[next][col];
        rows[next] = p;
        for k in 0..rows.len() {
            if k != next {
                let f = rows[k][col];
                rows[k] -= p * f;
            }
        }
        pivots.push(col);
        next += 1;
    }
    if pivots.len() < 3 {
        return Err(Error::DegenerateBasis);
    }

    let lead: Vec<Matrix3<f64>> = rows
        .iter()
        .zip(&pivots)
        .map(|(row, &pivot)| {
            let g = growth(pivot);
            let mut v = *row;
            for k in 0..9 {
                if growth(k) != g || v[k].abs() <= 1e-12 {
                    v[k] = 0.0;
                }
            }
            unflatten(&v)
        })
        .collect();
    Ok(Subalgebra3::new([lead[0], lead[1], lead[2]]))
}

/// Largest principal angle between the spans.
pub fn subspace_distance(s1: &Subalgebra3, s2: &Subalgebra3) -> Result<f64> {
    let (q1, q2) = (s1.orthonormal()?, s2.orthonormal()?);
    let off = q2 - q1 * (q1.transpose() * q2);
    let sigma = off.singular_values().max();
    Ok(sigma.min(1.0).asin())
}

/// Isomorphism types recognized by [`classify_algebra`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraType {
    So3,
    So21,
    Euc2,
    Heis,
    HalfPipe,
    Other,
}

impl AlgebraType {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraType::So3 => "so3",
            AlgebraType::So21 => "so21",
            AlgebraType::Euc2 => "euc2",
            AlgebraType::Heis => "heis",
            AlgebraType::HalfPipe => "halfpipe",
            AlgebraType::Other => "other",
        }
    }
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structure constants `c[i][j]`: coordinates of `[X_i, X_j]` in the basis.
fn structure_constants(s: &Subalgebra3) -> Result<[[Vector3<f64>; 3]; 3]> {
    let residual = s.closure_residual()?;
    if residual > STRUCTURE_TOL {
        return Err(Error::NotClosed { residual });
    }
    let b = s.as_columns();
    let svd = b.svd(true, true);
    let mut c = [[Vector3::zeros(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v = flatten(&bracket(&s.basis[i], &s.basis[j]));
            let x = svd.solve(&v, 0.0).map_err(|_| Error::DegenerateBasis)?;
            c[i][j] = Vector3::new(x[0], x[1], x[2]);
        }
    }
    Ok(c)
}

fn ad(c: &[[Vector3<f64>; 3]; 3], z: &Vector3<f64>) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for j in 0..3 {
        let col: Vector3<f64> = (0..3).map(|i| c[i][j] * z[i]).sum();
        m.set_column(j, &col);
    }
    m
}

fn rank(m: &Matrix3<f64>, scale: f64) -> usize {
    m.singular_values().iter().filter(|s| **s > STRUCTURE_TOL * scale).count()
}

/// Recognizes the isomorphism type from the derived algebra, the center,
/// the Killing form and, for solvable algebras with 2-dimensional derived
/// ideal, the spectrum of the remaining generator acting on that ideal.
pub fn classify_algebra(s: &Subalgebra3) -> Result<AlgebraType> {
    let c = structure_constants(s)?;
    let scale = c
        .iter()
        .flatten()
        .map(|v| v.amax())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let derived = Matrix3::from_columns(&[c[0][1], c[0][2], c[1][2]]);
    let dim_derived = rank(&derived, scale);
    let ads = [0, 1, 2].map(|i| ad(&c, &Vector3::ith(i, 1.0)));

    Ok(match dim_derived {
        0 => AlgebraType::Other,
        3 => {
            let killing = Matrix3::from_fn(|i, j| (ads[i] * ads[j]).trace());
            let ev = killing.symmetric_eigen().eigenvalues;
            let kscale = ev.amax();
            let pos = ev.iter().filter(|e| **e > STRUCTURE_TOL * kscale).count();
            let neg = ev.iter().filter(|e| **e < -STRUCTURE_TOL * kscale).count();
            match (pos, neg) {
                (0, 3) => AlgebraType::So3,
                (2, 1) | (1, 2) => AlgebraType::So21,
                _ => AlgebraType::Other,
            }
        }
        1 => {
            // z is central iff ad_z vanishes
            let stacked = SMatrix::<f64, 9, 3>::from_fn(|r, i| {
                let (j, k) = (r / 3, r % 3);
                c[i][j][k]
            });
            let center_dim = 3 - stacked.singular_values().iter().filter(|x| **x > STRUCTURE_TOL * scale).count();
            let d = derived.column_iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap().into_owned();
            let d_central = ad(&c, &d).amax() <= STRUCTURE_TOL * scale * d.norm();
            if center_dim == 1 && d_central {
                AlgebraType::Heis
            } else {
                AlgebraType::Other
            }
        }
        _ => classify_two_dim_derived(&c, &derived, scale),
    })
}

fn classify_two_dim_derived(c: &[[Vector3<f64>; 3]; 3], derived: &Matrix3<f64>, scale: f64) -> AlgebraType {
    let svd = derived.svd(true, false);
    let u = svd.u.unwrap();
    let mut idx = [0, 1, 2];
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let (d1, d2, z) = (u.column(idx[0]).into_owned(), u.column(idx[1]).into_owned(), u.column(idx[2]).into_owned());
    let bracket_coords = |x: &Vector3<f64>, y: &Vector3<f64>| ad(c, x) * y;
    if bracket_coords(&d1, &d2).amax() > STRUCTURE_TOL * scale {
        return AlgebraType::Other;
    }
    // ad_z on the derived ideal in the orthonormal basis (d1, d2)
    let img1 = bracket_coords(&z, &d1);
    let img2 = bracket_coords(&z, &d2);
    let m = nalgebra::Matrix2::new(d1.dot(&img1), d1.dot(&img2), d2.dot(&img1), d2.dot(&img2));
    let mscale = m.amax().max(f64::MIN_POSITIVE);
    if m.trace().abs() > STRUCTURE_TOL * mscale {
        return AlgebraType::Other;
    }
    let det = m.determinant();
    if det > STRUCTURE_TOL * mscale * mscale {
        AlgebraType::Euc2
    } else if det < -STRUCTURE_TOL * mscale * mscale {
        AlgebraType::HalfPipe
    } else {
        AlgebraType::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(p: f64, q: f64) -> DiagPath {
        DiagPath::new(p, q).unwrap()
    }

    #[test]
    fn identity_path_fixes_so3() {
        let s = conjugated_algebra_at(BaseAlgebra::So3, &path(0.0, 0.0), 7.0);
        assert_eq!(s, BaseAlgebra::So3.basis());
    }

    #[test]
    fn conjugation_scales_entries() {
        let s = conjugated_algebra_at(BaseAlgebra::So3, &path(2.0, 1.0), 10.0);
        let a = Matrix3::from_diagonal(&Vector3::new(100.0, 10.0, 1.0));
        let ai = a.try_inverse().unwrap();
        for (x, y) in s.basis.iter().zip(BaseAlgebra::So3.basis().basis.iter()) {
            assert!((x - a * y * ai).amax() < 1e-12);
        }
        assert!((s.basis[0][(0, 1)] / -s.basis[0][(1, 0)] - 100.0).abs() < 1e-12);
        assert!((s.basis[1][(0, 2)] / -s.basis[1][(2, 0)] - 1e4).abs() < 1e-9);
        let h = conjugated_algebra_at(BaseAlgebra::So21, &path(1.0, 0.0), 3.0);
        assert!(h.basis[1][(2, 0)] > 0.0 && h.basis[2][(2, 1)] > 0.0);
    }

    #[test]
    fn heisenberg_bracket_table() {
        let h = BaseAlgebra::Heis.basis();
        assert_eq!(bracket(&h.basis[0], &h.basis[2]), h.basis[1]);
        assert_eq!(bracket(&h.basis[0], &h.basis[1]), Matrix3::zeros());
        assert_eq!(classify_algebra(&h).unwrap(), AlgebraType::Heis);
    }

    #[test]
    fn standard_types() {
        assert_eq!(classify_algebra(&BaseAlgebra::So3.basis()).unwrap(), AlgebraType::So3);
        assert_eq!(classify_algebra(&BaseAlgebra::So21.basis()).unwrap(), AlgebraType::So21);
        assert_eq!(classify_algebra(&BaseAlgebra::Euc2.basis()).unwrap(), AlgebraType::Euc2);
    }

    #[test]
    fn limits_of_the_three_geometries() {
        let heis = BaseAlgebra::Heis.basis();
        for base in [BaseAlgebra::So3, BaseAlgebra::So21, BaseAlgebra::Euc2] {
            let l = limit_algebra(base, &path(2.0, 1.0));
            assert!(subspace_distance(&l, &heis).unwrap() < 1e-15, "{base}");
            assert_eq!(classify_algebra(&l).unwrap(), AlgebraType::Heis);
        }
        let e = limit_algebra(BaseAlgebra::So3, &path(1.0, 1.0));
        assert!(subspace_distance(&e, &BaseAlgebra::Euc2.basis()).unwrap() < 1e-15);
        let hp = limit_algebra(BaseAlgebra::So21, &path(1.0, 0.0));
        assert_eq!(classify_algebra(&hp).unwrap(), AlgebraType::HalfPipe);
        let dual = limit_algebra(BaseAlgebra::So3, &path(1.0, 0.0));
        assert_eq!(classify_algebra(&dual).unwrap(), AlgebraType::Euc2);
    }

    #[test]
    fn subspace_distance_is_basis_independent() {
        let s = BaseAlgebra::So21.basis();
        let r = Subalgebra3::new([s.basis[0] * 3.0, s.basis[1] + s.basis[2], s.basis[2] * -0.5]);
        assert!(subspace_distance(&s, &r).unwrap() < 1e-15);
        assert!(subspace_distance(&s, &s).unwrap() < 1e-14);
    }

    #[test]
    fn non_closed_and_degenerate_bases() {
        let s = Subalgebra3::new([unit(0, 1), unit(1, 0), unit(0, 2)]);
        assert_eq!(classify_algebra(&s).unwrap_err().kind(), "NotClosed");
        let d = Subalgebra3::new([unit(0, 1), unit(0, 1) * 2.0, unit(0, 2)]);
        assert_eq!(classify_algebra(&d).unwrap_err().kind(), "DegenerateBasis");
    }

    #[test]
    fn invalid_paths() {
        assert!(DiagPath::new(1.0, 2.0).is_err());
        assert!(DiagPath::new(1.0, -1.0).is_err());
    }
}
