//! Representations of ℤ² (equivalently ℝ²) into `Heis₀`.
//!
//! A representation is determined by the logarithms `Xa, Xb` of the images of
//! the generators. They commute exactly when the 4-vector
//! `(Xa.u, Xa.v, Xb.u, Xb.v)` lies on the quadric `V(uy − vx)`, which is the
//! cone over the torus
//!
//! ```text
//! Ψ(φ, θ) = (cos φ cos θ, cos φ sin θ, sin φ cos θ, sin φ sin θ).
//! ```
//!
//! Conjugation by `Heis₀` moves the central part `(Xa.w, Xb.w)` along
//! `v_φ = (cos φ, sin φ)` and fixes everything else, so the class of a
//! noncentral representation is recorded by `(r, φ, θ)` and the component
//! `λ` of the central part along `v_φ^⊥ = (−sin φ, cos φ)`.
//!
//! # Normal form chart
//!
//! The identities `(φ, θ, λ) ~ (φ + π, θ + π, −λ)` (the 2:1 cover by Ψ) and
//! `(φ, θ, λ) ~ (φ, −θ, −λ)` (conjugation by the half-turn) are used to land
//! in `φ ∈ [0, π)`, `θ ∈ [0, 2π)`, `λ ≥ 0`. Every conjugacy class under
//! `Heis₊` with `r > 0` has exactly one representative there when `λ > 0`.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::heis::{HeisAlgVec, HeisElem};
use crate::DEFAULT_TOL;

/// A representation ℤ² → `Heis₀`, stored by the logarithms of the images of
/// the generators `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepZ2 {
    pub xa: HeisAlgVec,
    pub xb: HeisAlgVec,
}

impl RepZ2 {
    pub fn new(xa: HeisAlgVec, xb: HeisAlgVec) -> Self {
        RepZ2 { xa, xb }
    }

    /// `(Xa.u, Xa.v, Xb.u, Xb.v)`.
    pub fn four_vector(&self) -> [f64; 4] {
        [self.xa.u, self.xa.v, self.xb.u, self.xb.v]
    }

    pub fn rho_a(&self) -> HeisElem {
        self.xa.exp()
    }

    pub fn rho_b(&self) -> HeisElem {
        self.xb.exp()
    }

    /// Image of `(s, t) ∈ ℝ²` under the extension `exp(s·Xa + t·Xb)`.
    /// On integer points this is `ρ(a)^s ρ(b)^t` when the pair commutes.
    pub fn rho_hat(&self, s: f64, t: f64) -> HeisElem {
        (self.xa.scale(s) + self.xb.scale(t)).exp()
    }

    pub fn rho(&self, m: i64, n: i64) -> HeisElem {
        self.rho_hat(m as f64, n as f64)
    }

    /// The representation `g ρ g⁻¹`.
    pub fn conjugate_by(&self, g: &HeisElem) -> RepZ2 {
        RepZ2::new(g.adjoint(&self.xa), g.adjoint(&self.xb))
    }

    pub fn in_variety(&self) -> bool {
        in_variety(&self.xa, &self.xb)
    }
}

/// Conjugacy coordinates `(r, φ, θ, λ)`.
///
/// When `uvec` is present the central part is taken verbatim rather than
/// from `λ`, which describes representations off the canonical section
/// (central ones in particular).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepParams {
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
    pub lambda: f64,
    pub uvec: Option<[f64; 2]>,
}

impl RepParams {
    pub fn new(r: f64, phi: f64, theta: f64, lambda: f64) -> Self {
        RepParams { r, phi, theta, lambda, uvec: None }
    }

    pub fn with_uvec(r: f64, phi: f64, theta: f64, uvec: [f64; 2]) -> Self {
        let lambda = -uvec[0] * phi.sin() + uvec[1] * phi.cos();
        RepParams { r, phi, theta, lambda, uvec: Some(uvec) }
    }

    pub fn to_rep(&self) -> RepZ2 {
        match self.uvec {
            Some(u) => params_to_rep(self.r, self.phi, self.theta, u),
            None => canonical_rep(self.r, self.phi, self.theta, self.lambda),
        }
    }

    /// Image under conjugation by the half-turn `diag(−1, −1, 1)`.
    pub fn d_action(&self) -> RepParams {
        RepParams {
            theta: -self.theta,
            lambda: -self.lambda,
            uvec: self.uvec.map(|[w, z]| [-w, -z]),
            ..*self
        }
    }

    pub fn classify(&self) -> HolonomyClass {
        classify(&self.to_rep())
    }

    /// Largest coordinate difference, with angles compared on the circle.
    pub fn max_diff(&self, other: &RepParams) -> f64 {
        let ang = |x: f64, y: f64| {
            let d = (x - y).rem_euclid(TAU);
            d.min(TAU - d)
        };
        (self.r - other.r)
            .abs()
            .max(ang(self.phi, other.phi))
            .max(ang(self.theta, other.theta))
            .max((self.lambda - other.lambda).abs())
    }
}

impl fmt::Display for RepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(r={}, phi={}, theta={}, lambda={})",
            self.r, self.phi, self.theta, self.lambda
        )
    }
}

pub fn psi(phi: f64, theta: f64) -> [f64; 4] {
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    [cp * ct, cp * st, sp * ct, sp * st]
}

pub fn params_to_rep(r: f64, phi: f64, theta: f64, uvec: [f64; 2]) -> RepZ2 {
    let [p0, p1, p2, p3] = psi(phi, theta);
    RepZ2::new(
        HeisAlgVec::new(r * p0, r * p1, uvec[0]),
        HeisAlgVec::new(r * p2, r * p3, uvec[1]),
    )
}

/// The section of the quotient map: central part `λ·(−sin φ, cos φ)`.
pub fn canonical_rep(r: f64, phi: f64, theta: f64, lambda: f64) -> RepZ2 {
    let (sp, cp) = phi.sin_cos();
    params_to_rep(r, phi, theta, [-lambda * sp, lambda * cp])
}

pub fn in_variety(xa: &HeisAlgVec, xb: &HeisAlgVec) -> bool {
    in_variety_with_tol(xa, xb, DEFAULT_TOL)
}

pub fn in_variety_with_tol(xa: &HeisAlgVec, xb: &HeisAlgVec, tol: f64) -> bool {
    xa.bracket(xb).w.abs() <= tol
}

/// Coordinates of `ρ` in the normal form chart (see the module docs).
///
/// Central representations come back with `r = 0`, zero angles and the raw
/// central part in `uvec`.
pub fn normal_form(rho: &RepZ2) -> RepParams {
    let [au, av, bu, bv] = rho.four_vector();
    let r = (au * au + av * av + bu * bu + bv * bv).sqrt();
    if r == 0.0 {
        return RepParams {
            r: 0.0,
            phi: 0.0,
            theta: 0.0,
            lambda: 0.0,
            uvec: Some([rho.xa.w, rho.xb.w]),
        };
    }

    // Both rows are multiples of (cos θ, sin θ); read the direction off the
    // better conditioned one.
    let (na, nb) = (au.hypot(av), bu.hypot(bv));
    let e = if na >= nb { [au / na, av / na] } else { [bu / nb, bv / nb] };
    let mu_a = au * e[0] + av * e[1];
    let mu_b = bu * e[0] + bv * e[1];
    let mut phi = mu_b.atan2(mu_a);
    let mut theta = e[1].atan2(e[0]);
    if phi < 0.0 {
        phi += PI;
        theta += PI;
    } else if phi >= PI {
        phi -= PI;
        theta += PI;
    }

    let (sp, cp) = phi.sin_cos();
    let mut lambda = -rho.xa.w * sp + rho.xb.w * cp;
    if lambda < 0.0 {
        lambda = -lambda;
        theta = -theta;
    }
    RepParams::new(r, phi, wrap_tau(theta), lambda)
}

fn wrap_tau(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Holonomy types of Heisenberg tori.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HolonomyClass {
    /// Complete, every element a translation.
    CompleteTranslation,
    /// Complete, with a nontrivial shear.
    CompleteShear,
    /// `r = 0`: acts by horizontal translations.
    Central,
    /// `sin θ = 0`: preserves the leaves of the horizontal foliation.
    ShearDegenerate,
    /// `λ = 0`: not injective on ℝ².
    NonFaithful,
}

impl HolonomyClass {
    pub fn is_complete(self) -> bool {
        matches!(self, HolonomyClass::CompleteTranslation | HolonomyClass::CompleteShear)
    }

    pub fn name(self) -> &'static str {
        match self {
            HolonomyClass::CompleteTranslation => "CompleteTranslation",
            HolonomyClass::CompleteShear => "CompleteShear",
            HolonomyClass::Central => "Central",
            HolonomyClass::ShearDegenerate => "ShearDegenerate",
            HolonomyClass::NonFaithful => "NonFaithful",
        }
    }
}

impl fmt::Display for HolonomyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(rho: &RepZ2) -> HolonomyClass {
    classify_with_tol(rho, DEFAULT_TOL)
}

/// Checks `r`, then `λ` (relative to `max(r, 1)`), then `sin θ`, each
/// against `tol`; the first that vanishes decides the class.
pub fn classify_with_tol(rho: &RepZ2, tol: f64) -> HolonomyClass {
    classify_params_with_tol(&normal_form(rho), tol)
}

/// Classification of coordinates already in normal form.
pub fn classify_params_with_tol(p: &RepParams, tol: f64) -> HolonomyClass {
    if p.r <= tol {
        HolonomyClass::Central
    } else if p.lambda.abs() <= tol * p.r.max(1.0) {
        HolonomyClass::NonFaithful
    } else if p.theta.sin().abs() <= tol {
        HolonomyClass::ShearDegenerate
    } else if p.theta.cos().abs() <= tol {
        HolonomyClass::CompleteTranslation
    } else {
        HolonomyClass::CompleteShear
    }
}
