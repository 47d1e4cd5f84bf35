//! SVG drawings. The y axis is flipped so pictures read in the usual
//! orientation, and the viewBox is the bounding box of everything drawn plus
//! a margin.

use std::fmt::Write;

use heisplane::regeneration::{ConeTorusData, Midlines};
use heisplane::tori::TilePatch;

const FILLS: [&str; 2] = ["#dfe7f2", "#f6e3c8"];

struct Bounds {
    min: [f64; 2],
    max: [f64; 2],
}

impl Bounds {
    fn of<'a>(points: impl IntoIterator<Item = &'a [f64; 2]>) -> Bounds {
        let mut b = Bounds { min: [f64::INFINITY; 2], max: [f64::NEG_INFINITY; 2] };
        for p in points {
            let q = flip(*p);
            b.min = [b.min[0].min(q[0]), b.min[1].min(q[1])];
            b.max = [b.max[0].max(q[0]), b.max[1].max(q[1])];
        }
        if !b.min[0].is_finite() {
            b = Bounds { min: [-1.0; 2], max: [1.0; 2] };
        }
        b
    }

    fn span(&self) -> f64 {
        (self.max[0] - self.min[0]).max(self.max[1] - self.min[1]).max(1e-9)
    }

    fn header(&self) -> String {
        let pad = 0.05 * self.span();
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
            self.min[0] - pad,
            self.min[1] - pad,
            self.max[0] - self.min[0] + 2.0 * pad,
            self.max[1] - self.min[1] + 2.0 * pad,
        )
    }
}

fn flip(p: [f64; 2]) -> [f64; 2] {
    [p[0], -p[1]]
}

fn points_attr(points: &[[f64; 2]]) -> String {
    points
        .iter()
        .map(|p| {
            let q = flip(*p);
            format!("{:.6},{:.6}", q[0], q[1])
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn tiling(tiles: &[TilePatch]) -> String {
    let boundaries: Vec<Vec<[f64; 2]>> = tiles.iter().map(|t| t.boundary()).collect();
    let bounds = Bounds::of(boundaries.iter().flatten());
    let stroke = 0.002 * bounds.span();
    let mut s = bounds.header();
    for (t, b) in tiles.iter().zip(&boundaries) {
        let fill = FILLS[(t.m + t.n).rem_euclid(2) as usize];
        writeln!(
            s,
            "  <polygon data-m=\"{}\" data-n=\"{}\" points=\"{}\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"{stroke:.6}\"/>",
            t.m,
            t.n,
            points_attr(b)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// The parallelogram `Q` with its two midlines and their crossing.
pub fn cone_torus(ct: &ConeTorusData, lines: &Midlines) -> heisplane::Result<String> {
    let v = ct.q.vertices;
    let m = &ct.geometry;
    let mid = |k: usize| {
        let e = ct.q.edge(k);
        m.midpoint(e.start, e.end)
    };
    let alpha = [mid(1)?, mid(3)?];
    let beta = [mid(2)?, mid(4)?];
    let bounds = Bounds::of(v.iter());
    let stroke = 0.004 * bounds.span();
    let mut s = bounds.header();
    writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"{stroke:.6}\"/>",
        points_attr(&v),
        FILLS[0]
    )
    .unwrap();
    for (seg, color) in [(alpha, "#c0392b"), (beta, "#2471a3")] {
        writeln!(
            s,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke:.6}\" stroke-dasharray=\"{:.6}\"/>",
            points_attr(&seg),
            4.0 * stroke
        )
        .unwrap();
    }
    let c = flip(lines.intersection);
    writeln!(s, "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"#000000\"/>", c[0], c[1], 2.0 * stroke).unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}
