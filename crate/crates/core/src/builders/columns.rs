//! Surfaces assembled from vertical columns standing on a common base line.
//! Column tops are glued to the base by an interval exchange, and free
//! vertical sides (slit faces, drops, outer sides) by explicit translation
//! rules. Each column polygon is refined at every point that some gluing
//! needs and then ear-clipped.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::iet::IntervalExchange;
use crate::numfield::{NFElem, NumberField};
use crate::surface::trace::{Chord, Section};
use crate::surface::triangulate::ear_clip;
use crate::surface::{EdgeRef, Point, SurfaceComplex, SurfaceError};

const REFINE_CAP: usize = 10_000;

/// A vertical segment `x = x, lo <= y <= hi` seen from one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VSeg {
    pub x: NFElem,
    pub lo: NFElem,
    pub hi: NFElem,
    /// True when the surface lies to the right of the segment.
    pub interior_right: bool,
}

impl VSeg {
    pub fn new(x: NFElem, lo: NFElem, hi: NFElem, interior_right: bool) -> Self {
        VSeg {
            x,
            lo,
            hi,
            interior_right,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ColumnSpec {
    pub field: Arc<NumberField>,
    /// Column boundaries, increasing, from 0 to the base width.
    pub cuts: Vec<NFElem>,
    /// Height of each column.
    pub tops: Vec<NFElem>,
    /// Slits rising from the base at a column boundary: (x, height).
    pub slits: Vec<(NFElem, NFElem)>,
    /// Pairs of free vertical sides identified by translation.
    pub rules: Vec<(VSeg, VSeg)>,
    /// Top point x is glued to base point `top_map(x)`.
    pub top_map: IntervalExchange,
}

impl ColumnSpec {
    fn column_at(&self, x: &NFElem) -> usize {
        self.cuts.partition_point(|c| c <= x).saturating_sub(1).min(self.tops.len() - 1)
    }

    fn face_of(&self, s: &VSeg) -> Result<(usize, usize), SurfaceError> {
        let n = self.tops.len();
        let found = if s.interior_right {
            (0..n).find(|&c| self.cuts[c] == s.x).map(|c| (c, 0))
        } else {
            (0..n).find(|&c| self.cuts[c + 1] == s.x).map(|c| (c, 1))
        };
        let (c, side) = found.ok_or_else(|| SurfaceError::Invalid("rule side is not on a column face".into()))?;
        if s.lo.sign() < 0 || s.hi > self.tops[c] || s.lo >= s.hi {
            return Err(SurfaceError::Invalid("rule side exceeds its column".into()));
        }
        Ok((c, side))
    }

    fn slit_height(&self, x: &NFElem) -> NFElem {
        self.slits
            .iter()
            .find(|(sx, _)| sx == x)
            .map(|(_, h)| h.clone())
            .unwrap_or_else(|| NFElem::zero(&self.field))
    }
}

fn insert_range(dst: &mut BTreeSet<NFElem>, src: &BTreeSet<NFElem>, lo: &NFElem, hi: &NFElem, shift: &NFElem) -> bool {
    let mut changed = false;
    for y in src.range(lo.clone()..=hi.clone()) {
        changed |= dst.insert(y + shift);
    }
    changed
}

/// Build the triangulated surface described by `spec`.
pub fn build_columns(spec: &ColumnSpec) -> Result<SurfaceComplex, SurfaceError> {
    let f = &spec.field;
    let n = spec.tops.len();
    if spec.cuts.len() != n + 1 || n == 0 {
        return Err(SurfaceError::Invalid("cuts and tops disagree".into()));
    }
    let zero = NFElem::zero(f);
    let mut breaks: Vec<[BTreeSet<NFElem>; 2]> = spec
        .tops
        .iter()
        .map(|t| {
            let s: BTreeSet<NFElem> = [zero.clone(), t.clone()].into_iter().collect();
            [s.clone(), s]
        })
        .collect();
    let mut internal = Vec::new();
    for c in 0..n - 1 {
        let s = spec.slit_height(&spec.cuts[c + 1]);
        let m = spec.tops[c].clone().min(spec.tops[c + 1].clone());
        for y in [&s, &m] {
            breaks[c][1].insert(y.clone());
            breaks[c + 1][0].insert(y.clone());
        }
        if s < m {
            internal.push((c, s, m));
        }
    }
    let mut rules = Vec::new();
    for (a, b) in &spec.rules {
        if &a.hi - &a.lo != &b.hi - &b.lo || a.interior_right == b.interior_right {
            return Err(SurfaceError::Invalid("rule sides do not match".into()));
        }
        let fa = spec.face_of(a)?;
        let fb = spec.face_of(b)?;
        for (fc, s) in [(fa, a), (fb, b)] {
            breaks[fc.0][fc.1].insert(s.lo.clone());
            breaks[fc.0][fc.1].insert(s.hi.clone());
        }
        rules.push((fa, fb));
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > REFINE_CAP {
            return Err(SurfaceError::Budget(REFINE_CAP));
        }
        let mut changed = false;
        for (c, s, m) in &internal {
            let l = breaks[*c][1].clone();
            let r = breaks[c + 1][0].clone();
            changed |= insert_range(&mut breaks[c + 1][0], &l, s, m, &zero);
            changed |= insert_range(&mut breaks[*c][1], &r, s, m, &zero);
        }
        for ((a, b), (fa, fb)) in spec.rules.iter().zip(&rules) {
            let src = breaks[fa.0][fa.1].clone();
            changed |= insert_range(&mut breaks[fb.0][fb.1], &src, &a.lo, &a.hi, &(&b.lo - &a.lo));
            let src = breaks[fb.0][fb.1].clone();
            changed |= insert_range(&mut breaks[fa.0][fa.1], &src, &b.lo, &b.hi, &(&a.lo - &b.lo));
        }
        if !changed {
            break;
        }
    }

    // horizontal refinement: tops split where the top map or the columns
    // change, the base at the images of those points
    let t = &spec.top_map;
    let w = t.domain_length.clone();
    let inv = t.inverse().map_err(|e| SurfaceError::Invalid(e.to_string()))?;
    let mut tp: BTreeSet<NFElem> = spec.cuts.iter().cloned().collect();
    for p in &t.pieces {
        tp.insert(p.left.clone());
    }
    for c in &spec.cuts[..n] {
        tp.insert(inv.apply(c).map_err(|e| SurfaceError::Invalid(e.to_string()))?);
    }
    let mut bp: BTreeSet<NFElem> = BTreeSet::new();
    bp.insert(w.clone());
    for x in tp.iter().filter(|x| **x < w) {
        bp.insert(t.apply(x).map_err(|e| SurfaceError::Invalid(e.to_string()))?);
    }

    let mut triangles = Vec::new();
    for c in 0..n {
        let (xl, xr, top) = (&spec.cuts[c], &spec.cuts[c + 1], &spec.tops[c]);
        let bottom: Vec<&NFElem> = bp.range(xl.clone()..=xr.clone()).collect();
        let upper: Vec<&NFElem> = tp.range(xl.clone()..=xr.clone()).collect();
        let mut pts = Vec::new();
        for bx in &bottom[..bottom.len() - 1] {
            pts.push(Point::new((*bx).clone(), zero.clone()));
        }
        for y in &breaks[c][1] {
            pts.push(Point::new(xr.clone(), y.clone()));
        }
        for tx in upper.iter().rev().skip(1) {
            pts.push(Point::new((*tx).clone(), top.clone()));
        }
        let left: Vec<&NFElem> = breaks[c][0].iter().rev().collect();
        for y in &left[1..left.len() - 1] {
            pts.push(Point::new(xl.clone(), (*y).clone()));
        }
        for tri in ear_clip(&pts)? {
            triangles.push([pts[tri[0]].clone(), pts[tri[1]].clone(), pts[tri[2]].clone()]);
        }
    }
    let m = triangles.len();
    let mut s = SurfaceComplex::new(f.clone(), triangles, vec![[None; 3]; m]);
    s.glue_by_translation(|_, a, b| edge_translation(spec, &inv, a, b));
    let report = s.validate();
    if let Some(v) = report.violations.first() {
        let at: Vec<String> = v
            .edges
            .iter()
            .map(|r| {
                let (a, b) = (s.vertex(r.tri, r.edge).to_f64(), s.vertex(r.tri, r.edge + 1).to_f64());
                format!("({:.4},{:.4})->({:.4},{:.4})", a.0, a.1, b.0, b.1)
            })
            .collect();
        return Err(SurfaceError::Invalid(format!(
            "{} gluing violations, first: {} at {}",
            report.violations.len(),
            v.detail,
            at.join(", ")
        )));
    }
    Ok(s)
}

fn edge_translation(spec: &ColumnSpec, inv: &IntervalExchange, a: &Point, b: &Point) -> Point {
    let f = &spec.field;
    let zero = NFElem::zero(f);
    if a.y == b.y {
        if a.y.is_zero() && a.x < b.x {
            let Ok(pre) = inv.apply(&a.x) else {
                return Point::new(zero.clone(), zero);
            };
            let h = spec.tops[spec.column_at(&pre)].clone();
            return Point::new(&pre - &a.x, h);
        }
        if a.x > b.x && a.y == spec.tops[spec.column_at(&b.x)] {
            if let Ok(k) = spec.top_map.locate(&b.x) {
                return Point::new(spec.top_map.pieces[k].translation.clone(), -&a.y);
            }
        }
        return Point::new(zero.clone(), zero);
    }
    if a.x == b.x {
        let right = b.y < a.y;
        let (lo, hi) = if right { (&b.y, &a.y) } else { (&a.y, &b.y) };
        let within = |s: &VSeg| s.x == a.x && s.interior_right == right && &s.lo <= lo && hi <= &s.hi;
        for (p, q) in &spec.rules {
            if within(p) {
                return Point::new(&q.x - &p.x, &q.lo - &p.lo);
            }
            if within(q) {
                return Point::new(&p.x - &q.x, &p.lo - &q.lo);
            }
        }
    }
    Point::new(zero.clone(), zero)
}

/// The base line [0, width) as a section, one chord per triangle edge on it.
pub fn base_section(s: &SurfaceComplex) -> Result<Section, SurfaceError> {
    let mut chords = Vec::new();
    for t in 0..s.num_triangles() {
        for e in 0..3 {
            let (a, b) = (s.vertex(t, e), s.vertex(t, e + 1));
            if a.y.is_zero() && b.y.is_zero() && a.x < b.x {
                chords.push(Chord {
                    tri: t,
                    y: a.y.clone(),
                    xl: a.x.clone(),
                    xr: b.x.clone(),
                });
            }
        }
    }
    chords.sort_by(|p, q| p.xl.cmp(&q.xl));
    Section::new(chords)
}

/// Corner of the triangulation at planar point `p` whose sector contains `d`.
pub fn corner_at(s: &SurfaceComplex, p: &Point) -> Vec<EdgeRef> {
    let mut out = Vec::new();
    for t in 0..s.num_triangles() {
        for k in 0..3 {
            if s.vertex(t, k) == p {
                out.push(EdgeRef::new(t, k));
            }
        }
    }
    out
}
