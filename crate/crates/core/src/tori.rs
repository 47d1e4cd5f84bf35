//! Complete Heisenberg tori: developing maps and closed geodesics.
//!
//! A complete structure is the quotient of 𝔸² by the image of ℤ², and its
//! developing map is the orbit map `(s, t) ↦ ρ̂(s, t)·q` of the extension to
//! ℝ². The unit square of ℝ² develops onto a fundamental domain whose edges
//! are orbits of one-parameter subgroups, straight for translations and
//! parabolic once a shear is present.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heis::HeisElem;
use crate::rep::{HolonomyClass, RepParams, RepZ2};
use crate::DEFAULT_TOL;

/// Samples per tile edge, endpoints included.
pub const EDGE_SAMPLES: usize = 32;

/// Free homotopy class `(m, n)` and the direction of its invariant line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicClass {
    pub m: i64,
    pub n: i64,
    /// Unit vector with first nonzero component positive.
    pub direction: Option<[f64; 2]>,
    pub closed: bool,
}

impl GeodesicClass {
    pub fn is_parallel_to(&self, other: &GeodesicClass, tol: f64) -> bool {
        match (self.direction, other.direction) {
            (Some(d), Some(e)) => (d[0] * e[1] - d[1] * e[0]).abs() <= tol,
            _ => false,
        }
    }

    pub fn is_horizontal(&self, tol: f64) -> bool {
        self.direction.is_some_and(|d| d[1].abs() <= tol)
    }
}

/// Image of the unit square `[m, m+1] × [n, n+1]` under the developing map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilePatch {
    pub m: i64,
    pub n: i64,
    /// Bottom, right, top and left edges, traversed so that the boundary
    /// is one closed loop.
    pub edges: [Vec<[f64; 2]>; 4],
}

impl TilePatch {
    /// Corners at `(m, n)`, `(m+1, n)`, `(m+1, n+1)`, `(m, n+1)`.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        [self.edges[0][0], self.edges[1][0], self.edges[2][0], self.edges[3][0]]
    }

    /// Closed boundary polyline without repeated corners.
    pub fn boundary(&self) -> Vec<[f64; 2]> {
        self.edges
            .iter()
            .flat_map(|e| e[..e.len() - 1].iter().copied())
            .collect()
    }
}

fn require_complete(p: &RepParams) -> Result<RepZ2> {
    let class = p.classify();
    if !class.is_complete() {
        return Err(Error::IncompleteHolonomy { tag: class.name().to_string() });
    }
    Ok(p.to_rep())
}

/// Developing map `(s, t) ↦ ρ̂(s, t)·q`.
pub fn develop_point(rho: &RepZ2, basepoint: [f64; 2], s: f64, t: f64) -> [f64; 2] {
    rho.rho_hat(s, t).apply(basepoint)
}

pub fn develop_tiling(p: &RepParams, basepoint: [f64; 2], range: u32) -> Result<Vec<TilePatch>> {
    develop_tiling_with_samples(p, basepoint, range, EDGE_SAMPLES)
}

/// Tiles for `m, n ∈ −N..=N`. Shared edges of neighbouring tiles are the
/// same samples, so the tiles fit together exactly.
pub fn develop_tiling_with_samples(
    p: &RepParams,
    basepoint: [f64; 2],
    range: u32,
    samples: usize,
) -> Result<Vec<TilePatch>> {
    let rho = require_complete(p)?;
    let k = samples.max(2);
    let step = |i: usize| i as f64 / (k - 1) as f64;
    let horizontal = |m: i64, n: i64| -> Vec<[f64; 2]> {
        (0..k)
            .map(|i| develop_point(&rho, basepoint, m as f64 + step(i), n as f64))
            .collect()
    };
    let vertical = |m: i64, n: i64| -> Vec<[f64; 2]> {
        (0..k)
            .map(|i| develop_point(&rho, basepoint, m as f64, n as f64 + step(i)))
            .collect()
    };
    let big_n = range as i64;
    let mut tiles = Vec::with_capacity(((2 * big_n + 1) * (2 * big_n + 1)) as usize);
    for m in -big_n..=big_n {
        for n in -big_n..=big_n {
            let bottom = horizontal(m, n);
            let right = vertical(m + 1, n);
            let mut top = horizontal(m, n + 1);
            top.reverse();
            let mut left = vertical(m, n);
            left.reverse();
            tiles.push(TilePatch { m, n, edges: [bottom, right, top, left] });
        }
    }
    Ok(tiles)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Invariant-line test for an element of `Heis₀`: a translation (`a = 0`)
/// moves along `(c, b)`, a shear fixing the horizontal (`b = 0`) slides
/// along horizontal lines, and anything else has no invariant line.
pub fn invariant_direction(g: &HeisElem, tol: f64) -> Option<[f64; 2]> {
    let scale = 1.0_f64.max(g.b.abs()).max(g.c.abs());
    if g.a.abs() <= tol * scale {
        let norm = g.c.hypot(g.b);
        if norm <= tol {
            return None;
        }
        let mut d = [g.c / norm, g.b / norm];
        let lead = if d[0].abs() > tol { d[0] } else { d[1] };
        if lead < 0.0 {
            d = [-d[0], -d[1]];
        }
        Some(d)
    } else if g.b.abs() <= tol * scale {
        Some([1.0, 0.0])
    } else {
        None
    }
}

pub fn closed_geodesic_classes(p: &RepParams, max_class: u32) -> Result<Vec<GeodesicClass>> {
    closed_geodesic_classes_with_tol(p, max_class, DEFAULT_TOL)
}

/// Every primitive class `(m, n)` with `|m|, |n| ≤ N`, closed or not.
pub fn closed_geodesic_classes_with_tol(
    p: &RepParams,
    max_class: u32,
    tol: f64,
) -> Result<Vec<GeodesicClass>> {
    let rho = require_complete(p)?;
    let big_n = max_class as i64;
    let mut out = Vec::new();
    for m in -big_n..=big_n {
        for n in -big_n..=big_n {
            if gcd(m, n) != 1 {
                continue;
            }
            let direction = invariant_direction(&rho.rho(m, n), tol);
            out.push(GeodesicClass { m, n, direction, closed: direction.is_some() });
        }
    }
    Ok(out)
}

/// Shear tori have only parallel (horizontal) closed geodesics, translation
/// tori have two independent ones. Checks whichever half applies to `p` on
/// the classes up to `N`.
pub fn dichotomy_check(p: &RepParams, max_class: u32) -> Result<bool> {
    let tol = DEFAULT_TOL;
    let classes = closed_geodesic_classes_with_tol(p, max_class, tol)?;
    let closed: Vec<_> = classes.iter().filter(|c| c.closed).collect();
    if closed.is_empty() {
        return Ok(max_class == 0);
    }
    Ok(match p.classify() {
        HolonomyClass::CompleteTranslation => closed
            .iter()
            .any(|c| closed.iter().any(|d| !c.is_parallel_to(d, tol))),
        _ => closed.iter().all(|c| c.is_horizontal(tol)),
    })
}
