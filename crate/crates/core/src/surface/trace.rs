//! Straight-line flow on a triangulated translation surface with exact
//! incidence tests, horizontal cross-sections and the vertical first-return map.

use serde::Serialize;

use super::{cross, dot, EdgeRef, Point, SurfaceComplex, SurfaceError};
use crate::iet::{IetPiece, IntervalExchange};
use crate::numfield::NFElem;

/// Cap on strip refinements when inducing the first-return map.
pub const STRIP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    HitsSingularity,
    ReturnsToSection,
    ExceedsBudget,
    ReachedLength,
    /// Came back to the starting point: a closed regular geodesic.
    Periodic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub tri: usize,
    pub from: Point,
    pub to: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceResult {
    pub kind: TraceKind,
    /// Sum of the segment parameters; equals Euclidean length for a unit direction.
    pub length: NFElem,
    pub crossings: Vec<EdgeRef>,
    pub segments: Vec<Segment>,
    pub end_tri: usize,
    pub endpoint: Point,
    /// Vertex class reached, when the trace stops at a singularity.
    pub end_class: Option<usize>,
    /// Section chord reached, when the trace returns.
    pub end_chord: Option<usize>,
}

/// A horizontal segment y = `y`, `xl <= x < xr`, inside triangle `tri`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chord {
    pub tri: usize,
    pub y: NFElem,
    pub xl: NFElem,
    pub xr: NFElem,
}

/// A horizontal cross-section made of chords, parametrised by arc length in
/// chord order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub chords: Vec<Chord>,
    pub starts: Vec<NFElem>,
    pub length: NFElem,
}

impl Section {
    pub fn new(chords: Vec<Chord>) -> Result<Self, SurfaceError> {
        let first = chords
            .first()
            .ok_or_else(|| SurfaceError::BadSection("no chords".into()))?;
        let mut u = NFElem::zero(first.y.field());
        let mut starts = Vec::with_capacity(chords.len());
        for c in &chords {
            if c.xl >= c.xr {
                return Err(SurfaceError::BadSection("empty chord".into()));
            }
            starts.push(u.clone());
            u = &u + &(&c.xr - &c.xl);
        }
        Ok(Section {
            chords,
            starts,
            length: u,
        })
    }

    /// Chord index and surface point at section coordinate `u`.
    pub fn point_at(&self, u: &NFElem) -> Option<(usize, Point)> {
        if u.sign() < 0 || u >= &self.length {
            return None;
        }
        let i = self.starts.partition_point(|s| s <= u) - 1;
        let c = &self.chords[i];
        Some((i, Point::new(&c.xl + &(u - &self.starts[i]), c.y.clone())))
    }

    pub fn coordinate(&self, chord: usize, x: &NFElem) -> NFElem {
        &self.starts[chord] + &(x - &self.chords[chord].xl)
    }
}

/// Where a trace begins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// In the closed triangle, not at one of its vertices.
    Interior(usize),
    /// At a vertex: the corner whose sector contains the direction.
    Corner(EdgeRef),
}

#[derive(Debug, Clone, Default)]
pub struct TraceOptions<'a> {
    /// Maximum number of edge or vertex crossings.
    pub budget: usize,
    pub section: Option<&'a Section>,
    pub max_length: Option<NFElem>,
    /// Allow a start at a singular vertex instead of stopping there.
    pub from_vertex: bool,
    /// Continue through singular vertices: at the i-th one met, keep a half
    /// turn on the left of the path if `turns[i]`, on the right otherwise.
    /// The trace stops at singular vertices beyond the sequence.
    pub turns: &'a [bool],
}

/// Precomputed vertex data for repeated traces on one surface.
pub struct TraceContext<'s> {
    pub surface: &'s SurfaceComplex,
    pub corner_class: Vec<[usize; 3]>,
    pub windings: Vec<usize>,
    pub class_corners: Vec<Vec<EdgeRef>>,
}

fn sector_contains(s: &SurfaceComplex, c: EdgeRef, d: &Point) -> bool {
    let out = s.edge_vector(c);
    let inn = s
        .vertex(c.tri, c.edge + 2)
        .sub(s.vertex(c.tri, c.edge));
    let a = cross(&out, d).sign();
    let b = cross(d, &inn).sign();
    (a > 0 || (a == 0 && super::dot(&out, d).sign() > 0)) && b > 0
}

impl<'s> TraceContext<'s> {
    pub fn new(surface: &'s SurfaceComplex) -> Result<Self, SurfaceError> {
        let classes = surface.vertex_classes()?;
        Ok(TraceContext {
            corner_class: surface.corner_class(&classes),
            windings: classes.iter().map(|c| c.winding).collect(),
            class_corners: classes.into_iter().map(|c| c.corners).collect(),
            surface,
        })
    }

    /// Does the sector at corner `c` (closed on its outgoing edge) contain `d`?
    pub fn sector_contains(&self, c: EdgeRef, d: &Point) -> bool {
        sector_contains(self.surface, c, d)
    }

    /// The corner reached from `c` by continuing straight in direction `d`
    /// with a half turn on the left: the first corner clockwise from `c`
    /// whose sector contains `d`.
    pub fn left_half_turn(&self, c: EdgeRef, d: &Point) -> Option<EdgeRef> {
        let s = self.surface;
        let mut k = c;
        for _ in 0..3 * s.num_triangles() {
            if sector_contains(s, k, d) {
                return Some(k);
            }
            let p = s.partner(k);
            k = EdgeRef::new(p.tri, (p.edge + 1) % 3);
        }
        None
    }

    /// As `left_half_turn`, turning counter-clockwise instead.
    pub fn right_half_turn(&self, c: EdgeRef, d: &Point) -> Option<EdgeRef> {
        let s = self.surface;
        let mut k = c;
        for _ in 0..3 * s.num_triangles() {
            if sector_contains(s, k, d) {
                return Some(k);
            }
            k = s.next_corner(k);
        }
        None
    }

    pub fn is_singular(&self, c: EdgeRef) -> bool {
        self.windings[self.corner_class[c.tri][c.edge]] != 1
    }

    /// The corner of the same vertex class whose sector contains `d`.
    pub fn outgoing_corner(&self, c: EdgeRef, d: &Point) -> Option<EdgeRef> {
        let cls = self.corner_class[c.tri][c.edge];
        self.class_corners[cls]
            .iter()
            .copied()
            .find(|&k| sector_contains(self.surface, k, d))
    }

    /// Find where a ray from planar point `p` in direction `d` starts.
    pub fn locate(&self, p: &Point, d: &Point) -> Result<Start, SurfaceError> {
        let s = self.surface;
        for t in 0..s.num_triangles() {
            for k in 0..3 {
                if s.vertex(t, k) == p && sector_contains(s, EdgeRef::new(t, k), d) {
                    return Ok(Start::Corner(EdgeRef::new(t, k)));
                }
            }
        }
        for t in 0..s.num_triangles() {
            let mut inside = true;
            for e in 0..3 {
                let a = s.vertex(t, e);
                let ev = s.edge_vector(EdgeRef::new(t, e));
                let c = cross(&ev, &p.sub(a)).sign();
                if c < 0 || (c == 0 && cross(&ev, d).sign() < 0) {
                    inside = false;
                    break;
                }
            }
            if inside && (0..3).all(|k| s.vertex(t, k) != p) {
                return Ok(Start::Interior(t));
            }
        }
        Err(SurfaceError::StartNotFound)
    }

    pub fn trace(
        &self,
        start: Start,
        p: &Point,
        d: &Point,
        opts: &TraceOptions,
    ) -> Result<TraceResult, SurfaceError> {
        if d.is_zero() {
            return Err(SurfaceError::ZeroDirection);
        }
        let s = self.surface;
        let f = s.field().clone();
        let mut length = NFElem::zero(&f);
        let mut crossings = Vec::new();
        let mut segments = Vec::new();
        let mut turned = 0;
        let (mut t, mut p) = match start {
            Start::Interior(t) => (t, p.clone()),
            Start::Corner(c) => {
                if self.is_singular(c) && !opts.from_vertex {
                    return Ok(TraceResult {
                        kind: TraceKind::HitsSingularity,
                        length,
                        crossings,
                        segments,
                        end_tri: c.tri,
                        endpoint: s.vertex(c.tri, c.edge).clone(),
                        end_class: Some(self.corner_class[c.tri][c.edge]),
                        end_chord: None,
                    });
                }
                (c.tri, s.vertex(c.tri, c.edge).clone())
            }
        };
        // loops are only detected on unbounded traces from an interior point
        let origin = match start {
            Start::Interior(t0) if opts.section.is_none() && opts.max_length.is_none() => Some((t0, p.clone())),
            _ => None,
        };
        let mut first = true;
        loop {
            // exit parameter from the closed triangle
            let mut best: Option<NFElem> = None;
            for e in 0..3 {
                let ev = s.edge_vector(EdgeRef::new(t, e));
                let cd = cross(&ev, d);
                if cd.sign() >= 0 {
                    continue;
                }
                let num = cross(&ev, &p.sub(s.vertex(t, e)));
                let se = num.checked_div(&(-&cd)).expect("nonzero");
                if best.as_ref().is_none_or(|b| &se < b) {
                    best = Some(se);
                }
            }
            let sx = best.ok_or_else(|| SurfaceError::Invalid("ray does not leave triangle".into()))?;
            // section hits inside this triangle
            if let Some(sec) = opts.section {
                if !d.y.is_zero() {
                    let mut hit: Option<(NFElem, usize)> = None;
                    for (i, c) in sec.chords.iter().enumerate() {
                        if c.tri != t {
                            continue;
                        }
                        let sc = (&c.y - &p.y).checked_div(&d.y).expect("nonzero");
                        let ok_start = if first { sc.sign() > 0 } else { sc.sign() >= 0 };
                        if !ok_start || sc > sx {
                            continue;
                        }
                        let x = &p.x + &(&sc * &d.x);
                        if x < c.xl || x >= c.xr {
                            continue;
                        }
                        if hit.as_ref().is_none_or(|(h, _)| &sc < h) {
                            hit = Some((sc, i));
                        }
                    }
                    if let Some((sc, i)) = hit {
                        let q = p.add(&d.scale(&sc));
                        segments.push(Segment {
                            tri: t,
                            from: p.clone(),
                            to: q.clone(),
                        });
                        return Ok(TraceResult {
                            kind: TraceKind::ReturnsToSection,
                            length: &length + &sc,
                            crossings,
                            segments,
                            end_tri: t,
                            endpoint: q,
                            end_class: None,
                            end_chord: Some(i),
                        });
                    }
                }
            }
            if let Some(ml) = &opts.max_length {
                let rest = ml - &length;
                if rest <= sx {
                    let q = p.add(&d.scale(&rest));
                    segments.push(Segment {
                        tri: t,
                        from: p.clone(),
                        to: q.clone(),
                    });
                    return Ok(TraceResult {
                        kind: TraceKind::ReachedLength,
                        length: ml.clone(),
                        crossings,
                        segments,
                        end_tri: t,
                        endpoint: q,
                        end_class: None,
                        end_chord: None,
                    });
                }
            }
            if let Some((t0, p0)) = origin.as_ref().filter(|(t0, _)| !first && *t0 == t) {
                let w = p0.sub(&p);
                if cross(d, &w).is_zero() {
                    let sc = dot(d, &w).checked_div(&dot(d, d)).expect("nonzero");
                    if sc.sign() >= 0 && sc < sx {
                        segments.push(Segment {
                            tri: t,
                            from: p.clone(),
                            to: p0.clone(),
                        });
                        return Ok(TraceResult {
                            kind: TraceKind::Periodic,
                            length: &length + &sc,
                            crossings,
                            segments,
                            end_tri: *t0,
                            endpoint: p0.clone(),
                            end_class: None,
                            end_chord: None,
                        });
                    }
                }
            }
            let q = p.add(&d.scale(&sx));
            length = &length + &sx;
            segments.push(Segment {
                tri: t,
                from: p.clone(),
                to: q.clone(),
            });
            first = false;
            if crossings.len() >= opts.budget {
                return Ok(TraceResult {
                    kind: TraceKind::ExceedsBudget,
                    length,
                    crossings,
                    segments,
                    end_tri: t,
                    endpoint: q,
                    end_class: None,
                    end_chord: None,
                });
            }
            if let Some(k) = (0..3).find(|&k| s.vertex(t, k) == &q) {
                let c = EdgeRef::new(t, k);
                if self.is_singular(c) && turned < opts.turns.len() {
                    let nc = if opts.turns[turned] {
                        self.left_half_turn(c, d)
                    } else {
                        self.right_half_turn(c, d)
                    }
                    .ok_or_else(|| SurfaceError::Invalid("no straight continuation".into()))?;
                    turned += 1;
                    crossings.push(nc);
                    t = nc.tri;
                    p = s.vertex(nc.tri, nc.edge).clone();
                    continue;
                }
                if self.is_singular(c) {
                    return Ok(TraceResult {
                        kind: TraceKind::HitsSingularity,
                        length,
                        crossings,
                        segments,
                        end_tri: t,
                        endpoint: q,
                        end_class: Some(self.corner_class[t][k]),
                        end_chord: None,
                    });
                }
                let nc = self
                    .outgoing_corner(c, d)
                    .ok_or_else(|| SurfaceError::Invalid("no outgoing sector at a regular vertex".into()))?;
                crossings.push(nc);
                t = nc.tri;
                p = s.vertex(nc.tri, nc.edge).clone();
                continue;
            }
            let e = (0..3)
                .find(|&e| {
                    let ev = s.edge_vector(EdgeRef::new(t, e));
                    cross(&ev, d).sign() < 0 && cross(&ev, &q.sub(s.vertex(t, e))).is_zero()
                })
                .expect("exit point lies on an exit edge");
            let r = EdgeRef::new(t, e);
            let tau = s.gluing_translation(r);
            crossings.push(r);
            t = s.partner(r).tri;
            p = q.add(&tau);
        }
    }
}

/// Cap on cone points crossed by one horizontal development.
pub const TURN_CAP: usize = 12;

/// Develop a horizontal segment of the given length from `p` (rightwards)
/// into chords, assigning chords that run along an edge to the triangle
/// lying above that edge. Cone points are crossed according to `turns` (see
/// `TraceOptions::turns`); `Ok(None)` means a cone point was met after the
/// sequence ran out.
pub fn develop_horizontal(
    ctx: &TraceContext,
    start: Start,
    p: &Point,
    length: &NFElem,
    turns: &[bool],
) -> Result<Option<Section>, SurfaceError> {
    let s = ctx.surface;
    let f = s.field().clone();
    let d = Point::new(NFElem::one(&f), NFElem::zero(&f));
    let r = ctx.trace(
        start,
        p,
        &d,
        &TraceOptions {
            budget: 100_000,
            section: None,
            max_length: Some(length.clone()),
            from_vertex: true,
            turns,
        },
    )?;
    match r.kind {
        TraceKind::ReachedLength => {}
        TraceKind::HitsSingularity => return Ok(None),
        k => {
            return Err(SurfaceError::BadSection(format!(
                "horizontal development stopped early: {k:?}"
            )))
        }
    }
    let mut chords = Vec::new();
    for seg in r.segments {
        if seg.from.x == seg.to.x {
            continue;
        }
        let mut chord = Chord {
            tri: seg.tri,
            y: seg.from.y.clone(),
            xl: seg.from.x.clone(),
            xr: seg.to.x.clone(),
        };
        for e in 0..3 {
            let er = EdgeRef::new(seg.tri, e);
            let ev = s.edge_vector(er);
            let a = s.vertex(seg.tri, e);
            let on = cross(&ev, &seg.from.sub(a)).is_zero() && cross(&ev, &seg.to.sub(a)).is_zero();
            if on && ev.x.sign() < 0 {
                let tau = s.gluing_translation(er);
                chord = Chord {
                    tri: s.partner(er).tri,
                    y: &chord.y + &tau.y,
                    xl: &chord.xl + &tau.x,
                    xr: &chord.xr + &tau.x,
                };
                break;
            }
        }
        chords.push(chord);
    }
    Section::new(chords).map(Some)
}

/// Every horizontal development of the given length from `p`, one per
/// choice of turning side at the cone points crossed, in lexicographic order
/// of the choices (left first).
pub fn horizontal_developments(
    ctx: &TraceContext,
    start: Start,
    p: &Point,
    length: &NFElem,
) -> Result<Vec<(Vec<bool>, Section)>, SurfaceError> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(turns) = stack.pop() {
        match develop_horizontal(ctx, start, p, length, &turns)? {
            Some(sec) => out.push((turns, sec)),
            None if turns.len() < TURN_CAP => {
                for side in [false, true] {
                    let mut t = turns.clone();
                    t.push(side);
                    stack.push(t);
                }
            }
            None => return Err(SurfaceError::Budget(TURN_CAP)),
        }
    }
    Ok(out)
}

struct Strip {
    u0: NFElem,
    len: NFElem,
    tri: usize,
    x: NFElem,
    from_chord: Option<usize>,
}

/// The map induced on the section by upward vertical flow, built by
/// following vertical strips exactly.
pub fn first_return_iet(
    surface: &SurfaceComplex,
    section: &Section,
) -> Result<IntervalExchange, SurfaceError> {
    let s = surface;
    let mut by_tri: Vec<Vec<usize>> = vec![Vec::new(); s.num_triangles()];
    for (i, c) in section.chords.iter().enumerate() {
        by_tri[c.tri].push(i);
    }
    let mut work: Vec<Strip> = section
        .chords
        .iter()
        .enumerate()
        .map(|(i, c)| Strip {
            u0: section.starts[i].clone(),
            len: &c.xr - &c.xl,
            tri: c.tri,
            x: c.xl.clone(),
            from_chord: Some(i),
        })
        .collect();
    let mut done: Vec<(NFElem, NFElem)> = Vec::new();
    let mut steps = 0usize;
    while let Some(st) = work.pop() {
        steps += 1;
        if steps > STRIP_CAP {
            return Err(SurfaceError::Budget(STRIP_CAP));
        }
        let t = st.tri;
        let end = &st.x + &st.len;
        let mut cuts: Vec<NFElem> = (0..3).map(|k| s.vertex(t, k).x.clone()).collect();
        for &ci in &by_tri[t] {
            cuts.push(section.chords[ci].xl.clone());
            cuts.push(section.chords[ci].xr.clone());
        }
        let mut inner: Vec<NFElem> = cuts.into_iter().filter(|c| c > &st.x && c < &end).collect();
        if !inner.is_empty() {
            inner.sort();
            inner.dedup();
            let mut lo = st.x.clone();
            for c in inner.into_iter().chain(std::iter::once(end.clone())) {
                work.push(Strip {
                    u0: &st.u0 + &(&lo - &st.x),
                    len: &c - &lo,
                    tri: t,
                    x: lo.clone(),
                    from_chord: st.from_chord,
                });
                lo = c;
            }
            continue;
        }
        let floor = st.from_chord.map(|c| section.chords[c].y.clone());
        let mut best: Option<usize> = None;
        for &ci in &by_tri[t] {
            let c = &section.chords[ci];
            if c.xl > st.x || c.xr < end {
                continue;
            }
            if floor.as_ref().is_some_and(|fy| &c.y <= fy) {
                continue;
            }
            if best.is_none_or(|b| c.y < section.chords[b].y) {
                best = Some(ci);
            }
        }
        if let Some(ci) = best {
            let target = section.coordinate(ci, &st.x);
            done.push((st.u0.clone(), &target - &st.u0));
            continue;
        }
        let e = (0..3)
            .find(|&e| {
                let a = s.vertex(t, e);
                let b = s.vertex(t, e + 1);
                a.x > b.x && b.x <= st.x && end <= a.x
            })
            .ok_or_else(|| SurfaceError::Invalid("strip has no upper edge".into()))?;
        let r = EdgeRef::new(t, e);
        let tau = s.gluing_translation(r);
        work.push(Strip {
            u0: st.u0,
            len: st.len,
            tri: s.partner(r).tri,
            x: &st.x + &tau.x,
            from_chord: None,
        });
    }
    done.sort_by(|a, b| a.0.cmp(&b.0));
    let pieces = done
        .into_iter()
        .map(|(left, translation)| IetPiece { left, translation })
        .collect();
    let t = IntervalExchange::new(section.length.clone(), pieces)
        .map_err(|e| SurfaceError::BadSection(e.to_string()))?;
    Ok(t.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::tests::unit_torus;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn torus_vertical_return() {
        let s = unit_torus();
        let f = s.field().clone();
        let q = |p: i64, d: i64| NFElem::from_rational(&f, BigRational::new(BigInt::from(p), BigInt::from(d)));
        let ctx = TraceContext::new(&s).unwrap();
        let sec = Section::new(vec![Chord {
            tri: 0,
            y: q(0, 1),
            xl: q(0, 1),
            xr: q(1, 1),
        }])
        .unwrap();
        let p = Point::new(q(1, 4), q(0, 1));
        let d = Point::new(q(0, 1), q(1, 1));
        let st = ctx.locate(&p, &d).unwrap();
        let r = ctx
            .trace(
                st,
                &p,
                &d,
                &TraceOptions {
                    budget: 10,
                    section: Some(&sec),
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(r.kind, TraceKind::ReturnsToSection);
        assert_eq!(r.length, q(1, 1));
        assert_eq!(r.endpoint, p);
        let again = ctx
            .trace(st, &p, &d, &TraceOptions { budget: 10, section: Some(&sec), ..Default::default() })
            .unwrap();
        assert_eq!(again.crossings, r.crossings);
        let t = first_return_iet(&s, &sec).unwrap();
        assert!(t.equal(&IntervalExchange::identity(q(1, 1))));
    }

    #[test]
    fn torus_vertical_line_is_periodic() {
        let s = unit_torus();
        let f = s.field().clone();
        let q = |p: i64, d: i64| NFElem::from_rational(&f, BigRational::new(BigInt::from(p), BigInt::from(d)));
        let ctx = TraceContext::new(&s).unwrap();
        let p = Point::new(q(1, 3), q(1, 5));
        let d = Point::new(q(0, 1), q(1, 1));
        let st = ctx.locate(&p, &d).unwrap();
        let r = ctx.trace(st, &p, &d, &TraceOptions { budget: 100, ..Default::default() }).unwrap();
        assert_eq!(r.kind, TraceKind::Periodic);
        assert_eq!(r.length, q(1, 1));
        assert_eq!(r.endpoint, p);
        let slope = Point::new(q(1, 1), q(2, 1));
        let st = ctx.locate(&p, &slope).unwrap();
        let r = ctx.trace(st, &p, &slope, &TraceOptions { budget: 100, ..Default::default() }).unwrap();
        assert_eq!(r.kind, TraceKind::Periodic);
        assert_eq!(r.length, q(1, 1));
    }

    #[test]
    fn start_at_vertex_is_critical() {
        let s = unit_torus();
        let f = s.field().clone();
        let ctx = TraceContext::new(&s).unwrap();
        let p = Point::new(NFElem::zero(&f), NFElem::zero(&f));
        let d = Point::new(NFElem::one(&f), NFElem::from_int(&f, 2));
        let st = ctx.locate(&p, &d).unwrap();
        assert!(matches!(st, Start::Corner(_)));
        // the torus vertex is regular, so the trace continues until the budget
        let r = ctx.trace(st, &p, &d, &TraceOptions { budget: 3, ..Default::default() }).unwrap();
        assert_eq!(r.kind, TraceKind::ExceedsBudget);
    }

    #[test]
    fn torus_bottom_edge_develops_to_a_closed_section() {
        let s = unit_torus();
        let f = s.field().clone();
        let ctx = TraceContext::new(&s).unwrap();
        let o = Point::new(NFElem::zero(&f), NFElem::zero(&f));
        let d = Point::new(NFElem::one(&f), NFElem::zero(&f));
        let st = ctx.locate(&o, &d).unwrap();
        let devs = horizontal_developments(&ctx, st, &o, &NFElem::one(&f)).unwrap();
        // no cone points on the torus, so exactly one development
        assert_eq!(devs.len(), 1);
        assert!(devs[0].0.is_empty());
        let sec = &devs[0].1;
        assert_eq!(sec.length, NFElem::one(&f));
        let t = first_return_iet(&s, sec).unwrap();
        assert!(t.equal(&IntervalExchange::identity(NFElem::one(&f))));
    }
}

