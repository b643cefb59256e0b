//! Translation surfaces presented as triangles in the plane with edge gluings.
//!
//! Triangles are stored counter-clockwise. Edge `e` of a triangle runs from
//! vertex `e` to vertex `e + 1`. A gluing pairs two edges whose vectors are
//! exact negatives of each other.

pub mod saddle;
pub mod svg;
pub mod trace;
pub mod triangulate;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfield::{MinPoly, NFElem, NumberField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("surface is invalid: {0}")]
    Invalid(String),
    #[error("no triangle contains the start point with the given direction")]
    StartNotFound,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("search budget of {0} steps exceeded")]
    Budget(usize),
    #[error("section is malformed: {0}")]
    BadSection(String),
    #[error("mixed number fields")]
    FieldMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: NFElem,
    pub y: NFElem,
}

impl Point {
    pub fn new(x: NFElem, y: NFElem) -> Self {
        Point { x, y }
    }

    pub fn add(&self, v: &Point) -> Point {
        Point::new(&self.x + &v.x, &self.y + &v.y)
    }

    pub fn sub(&self, v: &Point) -> Point {
        Point::new(&self.x - &v.x, &self.y - &v.y)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, s: &NFElem) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn norm2(&self) -> NFElem {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

pub fn cross(a: &Point, b: &Point) -> NFElem {
    &(&a.x * &b.y) - &(&a.y * &b.x)
}

pub fn dot(a: &Point, b: &Point) -> NFElem {
    &(&a.x * &b.x) + &(&a.y * &b.y)
}

/// Reference to edge `edge` of triangle `tri`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub tri: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(tri: usize, edge: usize) -> Self {
        EdgeRef { tri, edge }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceComplex {
    field: Arc<NumberField>,
    pub triangles: Vec<[Point; 3]>,
    pub gluings: Vec<[Option<EdgeRef>; 3]>,
    pub labels: Option<Vec<[String; 3]>>,
}

/// One finding of `validate`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub edges: Vec<EdgeRef>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub triangles: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexClass {
    pub corners: Vec<EdgeRef>,
    pub winding: usize,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentData {
    pub triangles: usize,
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub chi: i64,
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Topology {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub chi: i64,
    pub components: Vec<ComponentData>,
    pub vertex_classes: Vec<VertexClass>,
    /// genus when connected
    pub genus: Option<i64>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Angle order starting at `u0`: half-plane index, then cross-product order.
fn angle_less_eq(u0: &Point, a: &Point, b: &Point) -> bool {
    let half = |v: &Point| {
        let c = cross(u0, v).sign();
        if c > 0 || (c == 0 && dot(u0, v).sign() > 0) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha < hb;
    }
    cross(a, b).sign() >= 0
}

impl SurfaceComplex {
    pub fn new(
        field: Arc<NumberField>,
        triangles: Vec<[Point; 3]>,
        gluings: Vec<[Option<EdgeRef>; 3]>,
    ) -> Self {
        SurfaceComplex {
            field,
            triangles,
            gluings,
            labels: None,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex(&self, t: usize, k: usize) -> &Point {
        &self.triangles[t][k % 3]
    }

    /// Vector of edge `e` of triangle `t`.
    pub fn edge_vector(&self, r: EdgeRef) -> Point {
        self.vertex(r.tri, r.edge + 1).sub(self.vertex(r.tri, r.edge))
    }

    pub fn partner(&self, r: EdgeRef) -> EdgeRef {
        self.gluings[r.tri][r.edge].expect("validated surface has total gluings")
    }

    /// Translation carrying edge `r` onto its partner.
    pub fn gluing_translation(&self, r: EdgeRef) -> Point {
        let p = self.partner(r);
        self.vertex(p.tri, p.edge + 1).sub(self.vertex(r.tri, r.edge))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let n = self.triangles.len();
        if self.gluings.len() != n {
            v.push(Violation {
                kind: "shape".into(),
                edges: vec![],
                detail: format!("{} triangles but {} gluing rows", n, self.gluings.len()),
            });
            return ValidationReport {
                triangles: n,
                violations: v,
            };
        }
        for t in 0..n {
            let a = self.edge_vector(EdgeRef::new(t, 0));
            let b = self.edge_vector(EdgeRef::new(t, 1));
            if cross(&a, &b).sign() <= 0 {
                v.push(Violation {
                    kind: "orientation".into(),
                    edges: vec![EdgeRef::new(t, 0)],
                    detail: format!("triangle {t} is degenerate or clockwise"),
                });
            }
            for e in 0..3 {
                let r = EdgeRef::new(t, e);
                let Some(p) = self.gluings[t][e] else {
                    v.push(Violation {
                        kind: "unglued".into(),
                        edges: vec![r],
                        detail: format!("edge ({t},{e}) has no partner"),
                    });
                    continue;
                };
                if p.tri >= n || p.edge >= 3 {
                    v.push(Violation {
                        kind: "range".into(),
                        edges: vec![r],
                        detail: format!("edge ({t},{e}) points outside the complex"),
                    });
                    continue;
                }
                if p == r {
                    v.push(Violation {
                        kind: "self".into(),
                        edges: vec![r],
                        detail: format!("edge ({t},{e}) glued to itself"),
                    });
                    continue;
                }
                if self.gluings[p.tri][p.edge] != Some(r) {
                    v.push(Violation {
                        kind: "involution".into(),
                        edges: vec![r, p],
                        detail: format!(
                            "edge ({t},{e}) -> ({},{}) is not reciprocated",
                            p.tri, p.edge
                        ),
                    });
                    continue;
                }
                if r < p {
                    let s = self.edge_vector(r).add(&self.edge_vector(p));
                    if !s.is_zero() {
                        v.push(Violation {
                            kind: "vector".into(),
                            edges: vec![r, p],
                            detail: format!(
                                "edges ({t},{e}) and ({},{}) are not opposite translates",
                                p.tri, p.edge
                            ),
                        });
                    }
                }
            }
        }
        ValidationReport {
            triangles: n,
            violations: v,
        }
    }

    fn require_valid(&self) -> Result<(), SurfaceError> {
        let r = self.validate();
        match r.violations.first() {
            None => Ok(()),
            Some(x) => Err(SurfaceError::Invalid(x.detail.clone())),
        }
    }

    /// Next corner counter-clockwise around the same vertex.
    pub fn next_corner(&self, c: EdgeRef) -> EdgeRef {
        self.partner(EdgeRef::new(c.tri, (c.edge + 2) % 3))
    }

    /// Winding of a cyclic list of corners, counted in full turns.
    fn winding_of(&self, corners: &[EdgeRef]) -> usize {
        let out = |c: &EdgeRef| self.edge_vector(*c);
        let u0 = out(&corners[0]);
        let mut wraps = 0;
        for i in 0..corners.len() {
            let a = out(&corners[i]);
            let b = out(&corners[(i + 1) % corners.len()]);
            // the step a -> b turns counter-clockwise by less than a half turn
            if angle_less_eq(&u0, &b, &a) {
                wraps += 1;
            }
        }
        wraps
    }

    pub fn components(&self) -> Vec<usize> {
        let n = self.triangles.len();
        let mut uf = UnionFind::new(n);
        for t in 0..n {
            for e in 0..3 {
                if let Some(p) = self.gluings[t][e] {
                    uf.union(t, p.tri);
                }
            }
        }
        let mut ids = BTreeMap::new();
        (0..n)
            .map(|t| {
                let r = uf.find(t);
                let k = ids.len();
                *ids.entry(r).or_insert(k)
            })
            .collect()
    }

    pub fn vertex_classes(&self) -> Result<Vec<VertexClass>, SurfaceError> {
        self.require_valid()?;
        let comp = self.components();
        let n = self.triangles.len();
        let mut seen = vec![[false; 3]; n];
        let mut out = Vec::new();
        for t in 0..n {
            for k in 0..3 {
                if seen[t][k] {
                    continue;
                }
                let start = EdgeRef::new(t, k);
                let mut corners = vec![start];
                seen[t][k] = true;
                let mut c = self.next_corner(start);
                while c != start {
                    seen[c.tri][c.edge] = true;
                    corners.push(c);
                    c = self.next_corner(c);
                }
                let winding = self.winding_of(&corners);
                out.push(VertexClass {
                    corners,
                    winding,
                    component: comp[t],
                });
            }
        }
        Ok(out)
    }

    /// Map from corner to the index of its vertex class.
    pub fn corner_class(&self, classes: &[VertexClass]) -> Vec<[usize; 3]> {
        let mut m = vec![[0; 3]; self.triangles.len()];
        for (i, c) in classes.iter().enumerate() {
            for r in &c.corners {
                m[r.tri][r.edge] = i;
            }
        }
        m
    }

    pub fn topology(&self) -> Result<Topology, SurfaceError> {
        let classes = self.vertex_classes()?;
        let comp = self.components();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps: Vec<ComponentData> = (0..ncomp)
            .map(|_| ComponentData {
                triangles: 0,
                v: 0,
                e: 0,
                f: 0,
                chi: 0,
                genus: 0,
            })
            .collect();
        for &c in &comp {
            comps[c].f += 1;
            comps[c].triangles += 1;
        }
        for c in &mut comps {
            c.e = 3 * c.f / 2;
        }
        for vc in &classes {
            comps[vc.component].v += 1;
        }
        for c in &mut comps {
            c.chi = c.v as i64 - c.e as i64 + c.f as i64;
            c.genus = (2 - c.chi) / 2;
        }
        let f = self.triangles.len();
        let e = 3 * f / 2;
        let v = classes.len();
        let chi = v as i64 - e as i64 + f as i64;
        Ok(Topology {
            v,
            e,
            f,
            chi,
            genus: (ncomp == 1).then_some((2 - chi) / 2),
            components: comps,
            vertex_classes: classes,
        })
    }

    pub fn cone_windings(&self) -> Result<Vec<usize>, SurfaceError> {
        Ok(self.vertex_classes()?.iter().map(|c| c.winding).collect())
    }

    pub fn area(&self) -> NFElem {
        let mut a = NFElem::zero(&self.field);
        for t in 0..self.triangles.len() {
            let u = self.edge_vector(EdgeRef::new(t, 0));
            let w = self.edge_vector(EdgeRef::new(t, 1));
            a = &a + &cross(&u, &w).abs();
        }
        a.half()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let gl: Vec<[[usize; 2]; 2]> = (0..self.triangles.len())
            .flat_map(|t| (0..3).map(move |e| (t, e)))
            .filter_map(|(t, e)| {
                let p = self.gluings[t][e]?;
                ((t, e) < (p.tri, p.edge)).then_some([[t, e], [p.tri, p.edge]])
            })
            .collect();
        let mp = MinPoly::new(self.field.g()).expect("field genus is valid");
        serde_json::json!({
            "field": {"g": self.field.g(), "minpoly": mp.coeffs},
            "triangles": self.triangles,
            "gluings": gl,
            "labels": self.labels,
        })
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, SurfaceError> {
        let bad = |m: &str| SurfaceError::Invalid(m.to_string());
        let g = v["field"]["g"].as_u64().ok_or_else(|| bad("field.g"))? as u32;
        let field = NumberField::get(g).map_err(|e| bad(&e.to_string()))?;
        let triangles: Vec<[Point; 3]> =
            serde_json::from_value(v["triangles"].clone()).map_err(|e| bad(&e.to_string()))?;
        let pairs: Vec<[[usize; 2]; 2]> =
            serde_json::from_value(v["gluings"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut gluings = vec![[None; 3]; triangles.len()];
        for [[t1, e1], [t2, e2]] in pairs {
            if t1 >= triangles.len() || t2 >= triangles.len() || e1 > 2 || e2 > 2 {
                return Err(bad("gluing index out of range"));
            }
            gluings[t1][e1] = Some(EdgeRef::new(t2, e2));
            gluings[t2][e2] = Some(EdgeRef::new(t1, e1));
        }
        let labels = serde_json::from_value(v["labels"].clone()).unwrap_or(None);
        Ok(SurfaceComplex {
            field,
            triangles,
            gluings,
            labels,
        })
    }

    /// Glue edges by matching endpoints: edge A->B pairs with an edge
    /// B+t -> A+t where `t = translation(tri, A, B)`; t = 0 pairs an edge
    /// with its coincident neighbour. Edges for which no partner exists are
    /// left unglued.
    pub fn glue_by_translation<F>(&mut self, translation: F)
    where
        F: Fn(usize, &Point, &Point) -> Point,
    {
        let mut index: std::collections::HashMap<(Point, Point), EdgeRef> =
            std::collections::HashMap::new();
        for t in 0..self.triangles.len() {
            for e in 0..3 {
                let a = self.vertex(t, e).clone();
                let b = self.vertex(t, e + 1).clone();
                index.insert((a, b), EdgeRef::new(t, e));
            }
        }
        for t in 0..self.triangles.len() {
            for e in 0..3 {
                if self.gluings[t][e].is_some() {
                    continue;
                }
                let a = self.vertex(t, e).clone();
                let b = self.vertex(t, e + 1).clone();
                let tau = translation(t, &a, &b);
                let found = index.get(&(b.add(&tau), a.add(&tau))).copied();
                if let Some(p) = found {
                    if self.gluings[p.tri][p.edge].is_none() && p != EdgeRef::new(t, e) {
                        self.gluings[t][e] = Some(p);
                        self.gluings[p.tri][p.edge] = Some(EdgeRef::new(t, e));
                    }
                }
            }
        }
    }
}
