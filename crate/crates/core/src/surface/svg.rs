//! Plain SVG rendering of a triangulated surface with optional trajectories.
//! Glued edge pairs share a colour; the palette is fixed, so output is
//! byte-for-byte reproducible.

use std::fmt::Write as _;

use super::trace::Segment;
use super::{EdgeRef, SurfaceComplex};

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#637939",
];

/// Render at `scale` pixels per unit. Triangles are drawn at their own planar
/// coordinates.
pub fn render(s: &SurfaceComplex, segments: &[Segment], scale: f64) -> String {
    let mut minx = f64::INFINITY;
    let mut miny = f64::INFINITY;
    let mut maxx = f64::NEG_INFINITY;
    let mut maxy = f64::NEG_INFINITY;
    for t in 0..s.num_triangles() {
        for k in 0..3 {
            let (x, y) = s.vertex(t, k).to_f64();
            minx = minx.min(x);
            miny = miny.min(y);
            maxx = maxx.max(x);
            maxy = maxy.max(y);
        }
    }
    let pad = 0.05 * (maxx - minx).max(maxy - miny).max(1e-9);
    let w = (maxx - minx + 2.0 * pad) * scale;
    let h = (maxy - miny + 2.0 * pad) * scale;
    let px = |x: f64| (x - minx + pad) * scale;
    let py = |y: f64| (maxy + pad - y) * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    // pair index for each glued edge, numbered in first-seen order
    let mut pair = vec![[usize::MAX; 3]; s.num_triangles()];
    let mut next = 0usize;
    for t in 0..s.num_triangles() {
        for e in 0..3 {
            if pair[t][e] != usize::MAX {
                continue;
            }
            pair[t][e] = next;
            if let Some(p) = s.gluings[t][e] {
                pair[p.tri][p.edge] = next;
            }
            next += 1;
        }
    }
    for t in 0..s.num_triangles() {
        let pts: Vec<(f64, f64)> = (0..3).map(|k| s.vertex(t, k).to_f64()).collect();
        let _ = writeln!(
            out,
            r##"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#f4f4f4" stroke="none"/>"##,
            px(pts[0].0),
            py(pts[0].1),
            px(pts[1].0),
            py(pts[1].1),
            px(pts[2].0),
            py(pts[2].1)
        );
        for e in 0..3 {
            let glued = s.gluings[t][e].is_some_and(|p| s.partner(p) == EdgeRef::new(t, e));
            let colour = if glued {
                PALETTE[pair[t][e] % PALETTE.len()]
            } else {
                "#000000"
            };
            let (a, b) = (pts[e], pts[(e + 1) % 3]);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1"/>"#,
                px(a.0),
                py(a.1),
                px(b.0),
                py(b.1)
            );
        }
    }
    for seg in segments {
        let (a, b) = (seg.from.to_f64(), seg.to.to_f64());
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="1.5"/>"##,
            px(a.0),
            py(a.1),
            px(b.0),
            py(b.1)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::tests::unit_torus;

    #[test]
    fn deterministic_output() {
        let s = unit_torus();
        let a = render(&s, &[], 100.0);
        assert_eq!(a, render(&s, &[], 100.0));
        assert!(a.starts_with("<svg"));
        assert_eq!(a.matches("<polygon").count(), 2);
    }
}
