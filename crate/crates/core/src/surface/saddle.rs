//! Enumeration of saddle connections up to a length bound by unfolding
//! wedges of triangles around every corner.

use serde::Serialize;

use super::{cross, dot, EdgeRef, Point, SurfaceComplex, SurfaceError};
use crate::numfield::NFElem;
use crate::par::{self, Mode};

/// Default cap on the number of unfolded triangles per corner.
pub const WEDGE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaddleConnection {
    pub start_class: usize,
    pub end_class: usize,
    pub start_corner: EdgeRef,
    pub vector: Point,
    pub length2: NFElem,
}

fn dist2_to_segment(p: &Point, a: &Point, b: &Point) -> NFElem {
    let ab = b.sub(a);
    let ap = p.sub(a);
    let den = ab.norm2();
    let u = dot(&ap, &ab).checked_div(&den).expect("nondegenerate edge");
    let f = u.field().clone();
    let u = u.max(NFElem::zero(&f)).min(NFElem::one(&f));
    p.sub(&a.add(&ab.scale(&u))).norm2()
}

struct Wedge {
    tri: usize,
    edge: usize,
    origin: Point,
    d1: Point,
    d2: Point,
}

fn from_corner(
    s: &SurfaceComplex,
    corner_class: &[[usize; 3]],
    c: EdgeRef,
    lmax2: &NFElem,
    budget: usize,
) -> Result<Vec<SaddleConnection>, SurfaceError> {
    let o = s.vertex(c.tri, c.edge).clone();
    let start_class = corner_class[c.tri][c.edge];
    let mut out = Vec::new();
    let e_out = s.edge_vector(c);
    if e_out.norm2() <= *lmax2 {
        let nxt = s.partner(c);
        out.push(SaddleConnection {
            start_class,
            end_class: corner_class[nxt.tri][nxt.edge],
            start_corner: c,
            length2: e_out.norm2(),
            vector: e_out.clone(),
        });
    }
    let far = s.vertex(c.tri, c.edge + 2).sub(&o);
    let mut stack = vec![Wedge {
        tri: c.tri,
        edge: (c.edge + 1) % 3,
        origin: o,
        d1: e_out,
        d2: far,
    }];
    let mut steps = 0usize;
    while let Some(w) = stack.pop() {
        let a = s.vertex(w.tri, w.edge);
        let b = s.vertex(w.tri, w.edge + 1);
        if dist2_to_segment(&w.origin, a, b) > *lmax2 {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(SurfaceError::Budget(budget));
        }
        let r = EdgeRef::new(w.tri, w.edge);
        let p = s.partner(r);
        let origin = w.origin.add(&s.gluing_translation(r));
        let k = (p.edge + 2) % 3;
        let v = s.vertex(p.tri, k).sub(&origin);
        let left = cross(&w.d1, &v).sign() > 0;
        let right = cross(&v, &w.d2).sign() > 0;
        if left && right {
            let l2 = v.norm2();
            if l2 <= *lmax2 {
                out.push(SaddleConnection {
                    start_class,
                    end_class: corner_class[p.tri][k],
                    start_corner: c,
                    vector: v.clone(),
                    length2: l2,
                });
            }
            stack.push(Wedge {
                tri: p.tri,
                edge: (p.edge + 1) % 3,
                origin: origin.clone(),
                d1: w.d1,
                d2: v.clone(),
            });
            stack.push(Wedge {
                tri: p.tri,
                edge: (p.edge + 2) % 3,
                origin,
                d1: v,
                d2: w.d2,
            });
        } else if !left {
            stack.push(Wedge {
                tri: p.tri,
                edge: (p.edge + 2) % 3,
                origin,
                d1: w.d1,
                d2: w.d2,
            });
        } else {
            stack.push(Wedge {
                tri: p.tri,
                edge: (p.edge + 1) % 3,
                origin,
                d1: w.d1,
                d2: w.d2,
            });
        }
    }
    Ok(out)
}

/// All oriented saddle connections of squared length at most `lmax2`, every
/// vertex of the triangulation counting as a marked point. Each unoriented
/// connection appears once from each endpoint, with opposite vectors.
pub fn saddle_connections(
    s: &SurfaceComplex,
    lmax2: &NFElem,
    budget: usize,
    mode: Mode,
) -> Result<Vec<SaddleConnection>, SurfaceError> {
    let classes = s.vertex_classes()?;
    let cc = s.corner_class(&classes);
    let n = s.num_triangles() * 3;
    let parts = par::map_range(mode, n, |i| {
        from_corner(s, &cc, EdgeRef::new(i / 3, i % 3), lmax2, budget)
    });
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Number of unoriented connections with holonomy `v` or `-v`.
pub fn count_with_holonomy(conns: &[SaddleConnection], v: &Point) -> usize {
    let w = v.neg();
    conns
        .iter()
        .filter(|c| c.vector == *v || c.vector == w)
        .count()
        / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::tests::unit_torus;

    #[test]
    fn torus_connections_are_primitive_vectors() {
        let s = unit_torus();
        let f = s.field().clone();
        let c = saddle_connections(&s, &NFElem::from_int(&f, 5), 10_000, Mode::Sequential).unwrap();
        let p = |x: i64, y: i64| Point::new(NFElem::from_int(&f, x), NFElem::from_int(&f, y));
        // primitive vectors with x^2 + y^2 <= 5: 4 axis, 4 diagonal, 8 of type (1,2)
        assert_eq!(c.len(), 16);
        assert_eq!(count_with_holonomy(&c, &p(1, 2)), 1);
        assert_eq!(count_with_holonomy(&c, &p(2, 2)), 0);
        let par = saddle_connections(&s, &NFElem::from_int(&f, 5), 10_000, Mode::Auto).unwrap();
        assert_eq!(par, c);
    }
}
