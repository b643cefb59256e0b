//! The presentation by 4g triangles T_i = P_0 Q_i Q_(i-1),
//! T_(g+i) = P_i Q_(i-1) Q_i and their mirror images T'_i.

use std::collections::{BTreeMap, HashMap};

use super::BuildError;
use crate::numfield::{NFElem, NumberField};
use crate::par::Mode;
use crate::surface::saddle::{saddle_connections, WEDGE_BUDGET};
use crate::surface::trace::TraceContext;
use crate::surface::{cross, EdgeRef, Point, SurfaceComplex, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationVertices {
    pub g: u32,
    /// P_0, ..., P_g.
    pub p: Vec<Point>,
    /// Q_0, ..., Q_g.
    pub q: Vec<Point>,
}

pub fn triangulation_vertices(g: u32) -> Result<TriangulationVertices, BuildError> {
    if g < 3 {
        return Err(BuildError::Genus(g));
    }
    let f = NumberField::get(g)?;
    let gu = g as usize;
    let one = NFElem::one(&f);
    let a = NFElem::alpha(&f);
    let ap = |k: usize| NFElem::alpha_pow(&f, k);
    let inv = (&one - &a).recip()?;
    let mut p = Vec::with_capacity(gu + 1);
    p.push(Point::new((&one - &ap(gu)).half(), &ap(2) * &inv));
    p.push(Point::new(
        -(&ap(gu - 1) + &ap(gu)).half(),
        &(&(&a - &ap(2)) + &ap(3)) * &inv,
    ));
    for i in 2..gu {
        p.push(Point::new(&(&a - &ap(i)) * &inv, &a * &inv));
    }
    let three_a = &(&a + &a) + &a;
    p.push(Point::new(
        &one + &(&a - &ap(gu)).half(),
        &(&(&three_a - &one) - &ap(2)) * &inv,
    ));
    let mut q = Vec::with_capacity(gu + 1);
    q.push(Point::new(-ap(gu).half(), a.clone()));
    for i in 1..=gu {
        let x = &(&(&(&a + &a) - &ap(i)) - &ap(i + 1)) * &inv;
        q.push(Point::new(x.half(), &(&a - &ap(gu - i + 2)) * &inv));
    }
    Ok(TriangulationVertices { g, p, q })
}

fn ccw(mut t: [(Point, String); 3]) -> [(Point, String); 3] {
    if cross(&t[1].0.sub(&t[0].0), &t[2].0.sub(&t[0].0)).sign() < 0 {
        t.swap(1, 2);
    }
    t
}

/// Build the 4g-triangle surface, unprimed triangles first. Vertex labels
/// are kept on the complex.
pub fn build_triangulation(g: u32) -> Result<SurfaceComplex, BuildError> {
    let v = triangulation_vertices(g)?;
    let f = NumberField::get(g)?;
    let gu = g as usize;
    let mut tris: Vec<[(Point, String); 3]> = Vec::with_capacity(4 * gu);
    for prime in [false, true] {
        let mark = if prime { "'" } else { "" };
        let pt = |pt: &Point| {
            if prime {
                Point::new(pt.x.clone(), -&pt.y)
            } else {
                pt.clone()
            }
        };
        let lp = |i: usize| (pt(&v.p[i]), format!("P{i}{mark}"));
        let lq = |i: usize| (pt(&v.q[i]), format!("Q{i}{mark}"));
        for i in 1..=gu {
            tris.push(ccw([lp(0), lq(i), lq(i - 1)]));
        }
        for i in 1..=gu {
            tris.push(ccw([lp(i), lq(i - 1), lq(i)]));
        }
    }
    let mut by_label: HashMap<(String, String), Vec<EdgeRef>> = HashMap::new();
    for (t, tri) in tris.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (tri[e].1.clone(), tri[(e + 1) % 3].1.clone());
            let key = if a < b { (a, b) } else { (b, a) };
            by_label.entry(key).or_default().push(EdgeRef::new(t, e));
        }
    }
    let mut gluings = vec![[None; 3]; tris.len()];
    let mut glue = |x: EdgeRef, y: EdgeRef| {
        gluings[x.tri][x.edge] = Some(y);
        gluings[y.tri][y.edge] = Some(x);
    };
    for refs in by_label.values() {
        if refs.len() == 2 {
            glue(refs[0], refs[1]);
        }
    }
    let key = |a: String, b: String| if a < b { (a, b) } else { (b, a) };
    let pq = |i: usize, j: usize, pm: &str| key(format!("P{i}{pm}"), format!("Q{j}{pm}"));
    let mut free = vec![
        (pq(0, 0, ""), pq(0, gu, "'")),
        (pq(0, 0, "'"), pq(0, gu, "")),
        (pq(1, 1, ""), pq(gu, gu - 1, "'")),
        (pq(1, 1, "'"), pq(gu, gu - 1, "")),
    ];
    for pm in ["", "'"] {
        free.push((pq(1, 0, pm), pq(gu - 1, gu - 1, pm)));
        free.push((pq(gu, gu, pm), pq(2, 1, pm)));
    }
    for i in 2..=gu - 2 {
        free.push((pq(i, i, ""), pq(i + 1, i, "'")));
        free.push((pq(i, i, "'"), pq(i + 1, i, "")));
    }
    for (x, y) in free {
        let ex = by_label.get(&x).filter(|r| r.len() == 1);
        let ey = by_label.get(&y).filter(|r| r.len() == 1);
        match (ex, ey) {
            (Some(ex), Some(ey)) => glue(ex[0], ey[0]),
            _ => {
                return Err(SurfaceError::Invalid(format!("free edge {x:?} or {y:?} missing")).into())
            }
        }
    }
    let labels = tris
        .iter()
        .map(|t| [t[0].1.clone(), t[1].1.clone(), t[2].1.clone()])
        .collect();
    let triangles = tris
        .into_iter()
        .map(|t| {
            let [a, b, c] = t;
            [a.0, b.0, c.0]
        })
        .collect();
    let mut s = SurfaceComplex::new(f, triangles, gluings);
    s.labels = Some(labels);
    let report = s.validate();
    if !report.is_valid() {
        return Err(SurfaceError::Invalid(format!(
            "{} gluing violations, first: {:?}",
            report.violations.len(),
            report.violations.first()
        ))
        .into());
    }
    Ok(s)
}

/// Holonomy of the segment P_(g-1) Q_(g-1).
pub fn witness_vector(g: u32) -> Result<Point, BuildError> {
    let v = triangulation_vertices(g)?;
    let gu = g as usize;
    Ok(v.q[gu - 1].sub(&v.p[gu - 1]))
}

/// Multiset of holonomy vectors of saddle connections joining cone points,
/// with squared length at most `lmax2`. Regular marked points are ignored, so
/// a segment through one is not listed.
pub fn cone_saddle_vectors(
    s: &SurfaceComplex,
    lmax2: &NFElem,
    mode: Mode,
) -> Result<BTreeMap<Point, usize>, BuildError> {
    let ctx = TraceContext::new(s)?;
    let mut out = BTreeMap::new();
    for c in saddle_connections(s, lmax2, WEDGE_BUDGET, mode)? {
        if ctx.windings[c.start_class] > 1 && ctx.windings[c.end_class] > 1 {
            *out.entry(c.vector).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// Do the staircase and the triangle presentation of genus g have the same
/// cone-to-cone saddle connections up to squared length `lmax2`? The
/// staircase may list fewer, since its slit feet are marked points that cut
/// segments passing through them.
pub fn presentations_agree(g: u32, lmax2: &NFElem, mode: Mode) -> Result<bool, BuildError> {
    let st = cone_saddle_vectors(&super::build_staircase(g)?, lmax2, mode)?;
    let tr = cone_saddle_vectors(&build_triangulation(g)?, lmax2, mode)?;
    let within = st.iter().all(|(v, n)| tr.get(v).is_some_and(|m| m >= n));
    let total = |m: &BTreeMap<Point, usize>| m.values().sum::<usize>();
    Ok(within && total(&st) <= total(&tr))
}
