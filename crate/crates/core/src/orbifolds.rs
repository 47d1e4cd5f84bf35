//! The nine closed Heisenberg orbifolds and explicit holonomy extensions.
//!
//! Each orbifold is a quotient of a complete torus, so its structures are
//! torus holonomies `ρ` that extend to the larger orbifold group. Membership
//! is a condition on the normal form `(r, φ, θ, λ)` of `ρ` and the extension,
//! when it exists, is unique up to conjugacy fixing `ρ`; one representative
//! is built for each.
//!
//! Two families of tori carry orientation-reversing symmetries:
//!
//! - horizontal: `cos φ = 0`, so `ρ(a)` is the horizontal translation by
//!   `Xa.w` and `Xb` has no central part;
//! - axis-aligned: `sin φ = 0, cos θ = 0`, so `ρ(a)` is vertical and `ρ(b)`
//!   horizontal.
//!
//! In the notation below `R = diag(−1, −1, 1)`, `Rx = diag(−1, 1, 1)` and
//! `Ry = diag(1, −1, 1)`; `H` and `V` are the horizontal and vertical
//! generators of an axis-aligned translation torus, translating by `h` and
//! `k`.
//!
//! | orbifold          | extra generators | relations                                   |
//! |-------------------|------------------|---------------------------------------------|
//! | `Torus`           |                  | `ab = ba`                                   |
//! | `Pillowcase`      | `r = R`          | `r² = 1`, `rar = a⁻¹`, `rbr = b⁻¹`          |
//! | `KleinBottle`     | `x`              | `x² = a`, `xbx⁻¹ = b⁻¹`                     |
//! | `Annulus`         | `f`              | `f² = 1`, `faf = a`, `fbf = b⁻¹`            |
//! | `MobiusBand`      | `x`, `f`         | Klein bottle and annulus, `fx = xf`         |
//! | `DiskFourCorners` | `r = R`, `f = Ry`| pillowcase, `f² = 1`, `fHf = H`, `fVf = V⁻¹`, `(fr)² = 1` |
//! | `DiskTwoCones`    | `r = R`, `f`     | as above with `(fr)² = V`                   |
//! | `RP2TwoCones`     | `x`, `y`         | `x² = V`, `y² = H`, `(xy)² = 1`, `xHx⁻¹ = H⁻¹`, `yVy⁻¹ = V⁻¹` |
//! | `DiskConeCorners` | `r = R`, `f`     | pillowcase, `f² = 1`, `faf = b`, `fbf = a`, `frf = r` |

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heis::{HeisElem, Sign};
use crate::rep::{normal_form, RepParams};
use crate::DEFAULT_TOL;

/// Largest entrywise residual accepted by [`check_relations`].
pub const RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbifoldType {
    Torus,
    KleinBottle,
    Annulus,
    MobiusBand,
    Pillowcase,
    DiskTwoCones,
    DiskFourCorners,
    DiskConeCorners,
    RP2TwoCones,
}

impl OrbifoldType {
    pub const ALL: [OrbifoldType; 9] = [
        OrbifoldType::Torus,
        OrbifoldType::KleinBottle,
        OrbifoldType::Annulus,
        OrbifoldType::MobiusBand,
        OrbifoldType::Pillowcase,
        OrbifoldType::DiskTwoCones,
        OrbifoldType::DiskFourCorners,
        OrbifoldType::DiskConeCorners,
        OrbifoldType::RP2TwoCones,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OrbifoldType::Torus => "Torus",
            OrbifoldType::KleinBottle => "KleinBottle",
            OrbifoldType::Annulus => "Annulus",
            OrbifoldType::MobiusBand => "MobiusBand",
            OrbifoldType::Pillowcase => "Pillowcase",
            OrbifoldType::DiskTwoCones => "DiskTwoCones",
            OrbifoldType::DiskFourCorners => "DiskFourCorners",
            OrbifoldType::DiskConeCorners => "DiskConeCorners",
            OrbifoldType::RP2TwoCones => "RP2TwoCones",
        }
    }
}

impl fmt::Display for OrbifoldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OrbifoldType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OrbifoldType::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownOrbifold(s.to_string()))
    }
}

/// Images of the orbifold generators: the torus generators `a`, `b` and the
/// extra generators by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldExtension {
    pub orbifold: OrbifoldType,
    /// Normal form of the torus holonomy.
    pub base: RepParams,
    pub a: HeisElem,
    pub b: HeisElem,
    pub extras: BTreeMap<String, HeisElem>,
}

impl OrbifoldExtension {
    pub fn extra(&self, name: &str) -> Option<&HeisElem> {
        self.extras.get(name)
    }
}

fn near_zero(x: f64) -> bool {
    x.abs() <= DEFAULT_TOL
}

fn is_horizontal_family(p: &RepParams) -> bool {
    near_zero(p.phi.cos())
}

fn is_axis_family(p: &RepParams) -> bool {
    near_zero(p.phi.sin()) && near_zero(p.theta.cos())
}

/// Whether the torus holonomy `p` lies in the image of the deformation space
/// of `o`. The test is made on the normal form of `p`, so it depends only on
/// the conjugacy class.
pub fn deformation_membership(o: OrbifoldType, p: &RepParams) -> bool {
    let nf = normal_form(&p.to_rep());
    membership_of_normal_form(o, &nf)
}

fn membership_of_normal_form(o: OrbifoldType, p: &RepParams) -> bool {
    let faithful = p.r > DEFAULT_TOL && p.lambda.abs() > DEFAULT_TOL * p.r.max(1.0);
    if !faithful || near_zero(p.theta.sin()) {
        return false;
    }
    let translation = near_zero(p.theta.cos());
    let axis_aligned = translation && near_zero(p.phi.sin() * p.phi.cos());
    match o {
        OrbifoldType::Torus => true,
        OrbifoldType::KleinBottle | OrbifoldType::Annulus | OrbifoldType::MobiusBand => {
            is_horizontal_family(p) || is_axis_family(p)
        }
        OrbifoldType::Pillowcase => translation,
        OrbifoldType::DiskTwoCones | OrbifoldType::DiskFourCorners | OrbifoldType::RP2TwoCones => axis_aligned,
        OrbifoldType::DiskConeCorners => {
            translation && near_zero(p.phi.cos().abs() - p.phi.sin().abs())
        }
    }
}

/// Component `k ∈ {0, 1, 2, 3}` of a cone-corner disk holonomy written with
/// `φ = (2k + 1)π/4`, read from the raw (not normalized) coordinates.
pub fn cone_corner_component(p: &RepParams) -> Option<u8> {
    let x = p.phi.rem_euclid(std::f64::consts::TAU) / FRAC_PI_4;
    let k = ((x - 1.0) / 2.0).round();
    let ok = (x - (2.0 * k + 1.0)).abs() * FRAC_PI_4 <= DEFAULT_TOL;
    (ok && (0.0..4.0).contains(&k)).then_some(k as u8)
}

fn heis(sx: i8, sy: i8, a: f64, b: f64, c: f64) -> HeisElem {
    let s = |x: i8| if x > 0 { Sign::Plus } else { Sign::Minus };
    HeisElem { sx: s(sx), sy: s(sy), a, b, c }
}

/// `(horizontal generator, vertical generator, h, k)` of an axis-aligned
/// translation torus.
fn axis_generators(p: &RepParams, a: HeisElem, b: HeisElem) -> (HeisElem, HeisElem, f64, f64) {
    if near_zero(p.phi.sin()) {
        (b, a, b.c, a.b)
    } else {
        (a, b, a.c, b.b)
    }
}

/// Builds the extension of `p` to the orbifold group of `o`.
pub fn extend_holonomy(o: OrbifoldType, p: &RepParams) -> Result<OrbifoldExtension> {
    let nf = normal_form(&p.to_rep());
    if !membership_of_normal_form(o, &nf) {
        return Err(Error::NotExtendable {
            orbifold: o.name().to_string(),
            detail: format!("torus holonomy {nf} is outside the deformation space"),
        });
    }
    let rho = nf.to_rep();
    let (a, b) = (rho.rho_a(), rho.rho_b());
    let rot = HeisElem::half_turn();
    let rx = heis(-1, 1, 0.0, 0.0, 0.0);
    let ry = heis(1, -1, 0.0, 0.0, 0.0);
    let mut extras = BTreeMap::new();
    let horizontal = is_horizontal_family(&nf);

    // glide reflection squaring to a, and the reflection commuting with it
    let klein = || {
        if horizontal {
            heis(1, -1, 0.0, 0.0, a.c / 2.0)
        } else {
            heis(-1, 1, 0.0, a.b / 2.0, 0.0)
        }
    };
    let mirror = if horizontal { ry } else { rx };

    match o {
        OrbifoldType::Torus => {}
        OrbifoldType::Pillowcase => {
            extras.insert("r".into(), rot);
        }
        OrbifoldType::KleinBottle => {
            extras.insert("x".into(), klein());
        }
        OrbifoldType::Annulus => {
            extras.insert("f".into(), mirror);
        }
        OrbifoldType::MobiusBand => {
            extras.insert("x".into(), klein());
            extras.insert("f".into(), mirror);
        }
        OrbifoldType::DiskFourCorners => {
            extras.insert("r".into(), rot);
            extras.insert("f".into(), ry);
        }
        OrbifoldType::DiskTwoCones => {
            let (_, _, _, k) = axis_generators(&nf, a, b);
            extras.insert("r".into(), rot);
            extras.insert("f".into(), heis(1, -1, 0.0, k / 2.0, 0.0));
        }
        OrbifoldType::RP2TwoCones => {
            let (_, _, h, k) = axis_generators(&nf, a, b);
            extras.insert("x".into(), heis(-1, 1, 0.0, k / 2.0, 0.0));
            extras.insert("y".into(), heis(1, -1, 0.0, 0.0, h / 2.0));
        }
        OrbifoldType::DiskConeCorners => {
            let s = if nf.phi.sin() * nf.phi.cos() > 0.0 { -1 } else { 1 };
            extras.insert("r".into(), rot);
            extras.insert("f".into(), heis(s, -s, 0.0, 0.0, 0.0));
        }
    }
    let ext = OrbifoldExtension { orbifold: o, base: nf, a, b, extras };
    let worst = relation_residuals(&ext)
        .into_iter()
        .fold(0.0_f64, |m, (_, r)| m.max(r));
    if !(worst < RELATION_TOL) {
        return Err(Error::NotExtendable {
            orbifold: o.name().to_string(),
            detail: format!("relations fail with residual {worst:e}"),
        });
    }
    Ok(ext)
}

struct Relations(Vec<(String, f64)>);

impl Relations {
    fn rel(&mut self, name: &str, lhs: HeisElem, rhs: HeisElem) {
        self.0.push((name.to_string(), lhs.max_abs_diff(&rhs)));
    }

    fn missing(&mut self, generators: &str) {
        self.0.push((format!("missing {generators}"), f64::INFINITY));
    }

    fn pillowcase(&mut self, r: HeisElem, a: HeisElem, b: HeisElem) {
        self.rel("r^2 = 1", r * r, HeisElem::IDENTITY);
        self.rel("rar = a^-1", r * a * r, a.inverse());
        self.rel("rbr = b^-1", r * b * r, b.inverse());
    }
}

/// Entrywise residual of every defining relation, by name.
pub fn relation_residuals(e: &OrbifoldExtension) -> Vec<(String, f64)> {
    let id = HeisElem::IDENTITY;
    let (a, b) = (e.a, e.b);
    let get = |n: &str| e.extras.get(n).copied();
    let mut out = Relations(Vec::new());

    out.rel("ab = ba", a * b, b * a);
    match e.orbifold {
        OrbifoldType::Torus => {}
        OrbifoldType::Pillowcase => match get("r") {
            Some(r) => out.pillowcase(r, a, b),
            None => out.missing("r"),
        },
        OrbifoldType::KleinBottle | OrbifoldType::Annulus | OrbifoldType::MobiusBand => {
            let o = e.orbifold;
            if o != OrbifoldType::Annulus {
                match get("x") {
                    Some(x) => {
                        out.rel("x^2 = a", x * x, a);
                        out.rel("xbx^-1 = b^-1", x * b * x.inverse(), b.inverse());
                    }
                    None => out.missing("x"),
                }
            }
            if o != OrbifoldType::KleinBottle {
                match get("f") {
                    Some(f) => {
                        out.rel("f^2 = 1", f * f, id);
                        out.rel("faf = a", f * a * f, a);
                        out.rel("fbf = b^-1", f * b * f, b.inverse());
                    }
                    None => out.missing("f"),
                }
            }
            if o == OrbifoldType::MobiusBand {
                if let (Some(f), Some(x)) = (get("f"), get("x")) {
                    out.rel("fx = xf", f * x, x * f);
                }
            }
        }
        OrbifoldType::DiskFourCorners | OrbifoldType::DiskTwoCones => match (get("r"), get("f")) {
            (Some(r), Some(f)) => {
                let (hh, vv, _, _) = axis_generators(&e.base, a, b);
                out.pillowcase(r, a, b);
                out.rel("f^2 = 1", f * f, id);
                out.rel("fHf = H", f * hh * f, hh);
                out.rel("fVf = V^-1", f * vv * f, vv.inverse());
                if e.orbifold == OrbifoldType::DiskFourCorners {
                    out.rel("(fr)^2 = 1", f * r * f * r, id);
                } else {
                    out.rel("(fr)^2 = V", f * r * f * r, vv);
                }
            }
            _ => out.missing("r, f"),
        },
        OrbifoldType::RP2TwoCones => match (get("x"), get("y")) {
            (Some(x), Some(y)) => {
                let (hh, vv, _, _) = axis_generators(&e.base, a, b);
                out.rel("x^2 = V", x * x, vv);
                out.rel("y^2 = H", y * y, hh);
                out.rel("(xy)^2 = 1", x * y * x * y, id);
                out.rel("xHx^-1 = H^-1", x * hh * x.inverse(), hh.inverse());
                out.rel("yVy^-1 = V^-1", y * vv * y.inverse(), vv.inverse());
            }
            _ => out.missing("x, y"),
        },
        OrbifoldType::DiskConeCorners => match (get("r"), get("f")) {
            (Some(r), Some(f)) => {
                out.pillowcase(r, a, b);
                out.rel("f^2 = 1", f * f, id);
                out.rel("faf = b", f * a * f, b);
                out.rel("fbf = a", f * b * f, a);
                out.rel("frf = r", f * r * f, r);
            }
            _ => out.missing("r, f"),
        },
    }
    out.0
}

/// Whether every relation of `o` holds on the stored images to
/// [`RELATION_TOL`].
pub fn check_relations(o: OrbifoldType, e: &OrbifoldExtension) -> bool {
    o == e.orbifold && relation_residuals(e).iter().all(|(_, r)| *r < RELATION_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn membership_predicates() {
        let p = RepParams::new(1.0, FRAC_PI_3, FRAC_PI_2, 1.0);
        assert!(deformation_membership(OrbifoldType::Pillowcase, &p));
        assert!(!deformation_membership(OrbifoldType::Pillowcase, &RepParams::new(1.0, FRAC_PI_3, FRAC_PI_4, 1.0)));
        assert!(deformation_membership(OrbifoldType::DiskConeCorners, &RepParams::new(1.0, FRAC_PI_4, FRAC_PI_2, 1.0)));
        assert!(!deformation_membership(OrbifoldType::DiskConeCorners, &p));
        assert!(deformation_membership(OrbifoldType::KleinBottle, &RepParams::new(1.0, FRAC_PI_2, 0.7, 1.0)));
        assert!(!deformation_membership(OrbifoldType::Torus, &RepParams::new(1.0, 0.3, 0.0, 1.0)));
    }

    #[test]
    fn pillowcase_rotation() {
        let e = extend_holonomy(OrbifoldType::Pillowcase, &RepParams::new(1.0, FRAC_PI_3, FRAC_PI_2, 1.0)).unwrap();
        assert_eq!(e.extra("r").unwrap().matrix(), HeisElem::half_turn().matrix());
        assert!(check_relations(OrbifoldType::Pillowcase, &e));
        let err = extend_holonomy(OrbifoldType::Pillowcase, &RepParams::new(1.0, 0.0, FRAC_PI_4, 1.0)).unwrap_err();
        assert_eq!(err.kind(), "NotExtendable");
    }

    #[test]
    fn klein_glide_matrices() {
        let (r, lambda) = (1.6, 0.9);
        let e = extend_holonomy(OrbifoldType::KleinBottle, &RepParams::new(r, 0.0, FRAC_PI_2, lambda)).unwrap();
        let x = e.extra("x").unwrap().matrix();
        let expected = nalgebra::Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, r / 2.0, 0.0, 0.0, 1.0);
        assert_eq!(x, expected);
        let e = extend_holonomy(OrbifoldType::KleinBottle, &RepParams::new(r, FRAC_PI_2, 1.1, lambda)).unwrap();
        let x = e.extra("x").unwrap();
        assert_eq!(x.c, -lambda / 2.0);
        assert!((*x * *x).max_abs_diff(&e.a) < 1e-15);
    }

    #[test]
    fn mobius_generators_commute() {
        let e = extend_holonomy(OrbifoldType::MobiusBand, &RepParams::new(1.0, FRAC_PI_2, 2.0, 0.5)).unwrap();
        let (f, x) = (e.extra("f").unwrap().matrix(), e.extra("x").unwrap().matrix());
        assert_eq!(f * x, x * f);
        assert!(check_relations(OrbifoldType::MobiusBand, &e));
    }

    #[test]
    fn perturbed_generator_breaks_relations() {
        let mut e = extend_holonomy(OrbifoldType::Pillowcase, &RepParams::new(1.0, 0.4, FRAC_PI_2, 1.0)).unwrap();
        e.extras.get_mut("r").unwrap().a += 1e-3;
        assert!(!check_relations(OrbifoldType::Pillowcase, &e));
    }

    #[test]
    fn all_nine_on_their_coordinates() {
        let axis = RepParams::new(1.3, 0.0, FRAC_PI_2, 0.7);
        let axis_h = RepParams::new(1.3, FRAC_PI_2, FRAC_PI_2, 0.7);
        for o in [OrbifoldType::DiskTwoCones, OrbifoldType::DiskFourCorners, OrbifoldType::RP2TwoCones] {
            for p in [axis, axis_h] {
                let e = extend_holonomy(o, &p).unwrap();
                assert!(check_relations(o, &e), "{o} {p}");
            }
        }
        for k in 0..4 {
            let p = RepParams::new(1.0, (2 * k + 1) as f64 * FRAC_PI_4, FRAC_PI_2, 2.0);
            assert_eq!(cone_corner_component(&p), Some(k as u8));
            let e = extend_holonomy(OrbifoldType::DiskConeCorners, &p).unwrap();
            assert!(check_relations(OrbifoldType::DiskConeCorners, &e));
        }
        assert_eq!(cone_corner_component(&RepParams::new(1.0, PI / 3.0, FRAC_PI_2, 1.0)), None);
    }

    #[test]
    fn tags_parse() {
        assert_eq!("pillowcase".parse::<OrbifoldType>().unwrap(), OrbifoldType::Pillowcase);
        assert_eq!("Sphere".parse::<OrbifoldType>().unwrap_err().kind(), "UnknownOrbifold");
    }
}
