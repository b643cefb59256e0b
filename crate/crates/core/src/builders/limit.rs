//! Finite truncations of the infinite-genus limit surface, and convergence
//! of the genus-g triangle vertices to their limiting positions.
//!
//! The truncation at depth N is two stacked half-height rectangles L (below)
//! and U (above). In the complex U is drawn to the right of L, shifted by
//! (1, -1/2), so both stand on the base line. L's top is glued to U's bottom
//! by the half swap, U's top to L's bottom by the block half swap on the
//! blocks [1 - 2^(1-n), 1 - 2^-n) for n <= N, with the remaining tail
//! [1 - 2^-N, 1) half swapped as one block. The first return to U's bottom
//! therefore agrees with f_inf away from the tail.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::columns::{build_columns, ColumnSpec, VSeg};
use super::triangles::triangulation_vertices;
use super::BuildError;
use crate::iet::{IetPiece, IntervalExchange};
use crate::numfield::{NFElem, NumberField};
use crate::surface::trace::{Segment, Start, TraceContext, TraceKind, TraceOptions};
use crate::surface::{Point, SurfaceComplex, SurfaceError};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn pow2(k: i32) -> BigRational {
    if k >= 0 {
        BigRational::from_integer(BigInt::one() << k as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
    }
}

/// Start of the tail block that the truncation does not resolve.
pub fn tail_start(n: u32) -> BigRational {
    BigRational::one() - pow2(-(n as i32))
}

fn truncated_block_swap(n: u32) -> IntervalExchange {
    let f = NumberField::get(1).expect("rational field");
    let e = |r: BigRational| NFElem::from_rational(&f, r);
    let mut pieces = Vec::new();
    let mut left = BigRational::zero();
    for k in 1..=n as i32 {
        let h = pow2(-k - 1);
        pieces.push(IetPiece {
            left: e(left.clone()),
            translation: e(h.clone()),
        });
        pieces.push(IetPiece {
            left: e(&left + &h),
            translation: e(-h.clone()),
        });
        left = &left + &h + &h;
    }
    let h = (BigRational::one() - &left) / BigInt::from(2);
    pieces.push(IetPiece {
        left: e(left.clone()),
        translation: e(h.clone()),
    });
    pieces.push(IetPiece {
        left: e(&left + &h),
        translation: e(-h),
    });
    IntervalExchange::new(NFElem::one(&f), pieces).expect("valid")
}

/// The gluing data of the depth-N truncation.
pub fn truncation_columns(n: u32) -> Result<ColumnSpec, BuildError> {
    if n == 0 {
        return Err(BuildError::Depth);
    }
    let f = NumberField::get(1)?;
    let e = |r: BigRational| NFElem::from_rational(&f, r);
    let (z, quarter, half, one, two) = (e(q(0, 1)), e(q(1, 4)), e(q(1, 2)), e(q(1, 1)), e(q(2, 1)));
    let v = |x: &NFElem, lo: &NFElem, hi: &NFElem, r: bool| VSeg::new(x.clone(), lo.clone(), hi.clone(), r);
    // top map on [0, 2): L's top to U's bottom, U's top to L's bottom
    let s = truncated_block_swap(n);
    let mut pieces = vec![
        IetPiece {
            left: z.clone(),
            translation: &half + &one,
        },
        IetPiece {
            left: half.clone(),
            translation: &one - &half,
        },
    ];
    for p in &s.pieces {
        pieces.push(IetPiece {
            left: &p.left + &one,
            translation: &p.translation - &one,
        });
    }
    Ok(ColumnSpec {
        field: f.clone(),
        cuts: vec![z.clone(), one.clone(), two.clone()],
        tops: vec![half.clone(), half.clone()],
        slits: vec![(one.clone(), half.clone())],
        rules: vec![
            (v(&one, &z, &quarter, true), v(&two, &quarter, &half, false)),
            (v(&z, &quarter, &half, true), v(&one, &z, &quarter, false)),
            (v(&one, &quarter, &half, true), v(&one, &quarter, &half, false)),
            (v(&two, &z, &quarter, false), v(&z, &z, &quarter, true)),
        ],
        top_map: IntervalExchange::new(two, pieces)?,
    })
}

pub fn build_limit_truncation(n: u32) -> Result<SurfaceComplex, BuildError> {
    Ok(build_columns(&truncation_columns(n)?)?)
}

/// Point of U's bottom edge at abscissa x in [0, 1), in complex coordinates.
pub fn midline_point(x: &BigRational) -> Point {
    let f = NumberField::get(1).expect("rational field");
    Point::new(
        NFElem::from_rational(&f, x + BigRational::one()),
        NFElem::zero(&f),
    )
}

/// Same point seen from L's top edge.
fn midline_point_below(x: &BigRational) -> Point {
    let f = NumberField::get(1).expect("rational field");
    let h = q(1, 2);
    let xl = if x < &h { x + &h } else { x - &h };
    Point::new(NFElem::from_rational(&f, xl), NFElem::from_rational(&f, h))
}

/// True if no segment endpoint lies on the glued U-top / L-bottom line
/// inside the unresolved tail.
pub fn in_guarantee_zone(n: u32, segments: &[Segment]) -> bool {
    let t = tail_start(n);
    let half = q(1, 2);
    segments.iter().all(|s| {
        [&s.from, &s.to].into_iter().all(|p| {
            let x = p.x.to_rational().expect("rational");
            let y = p.y.to_rational().expect("rational");
            let on_u_top = y == half && x >= BigRational::one() + &t;
            let on_l_bottom = y.is_zero() && x >= t && x <= BigRational::one();
            !(on_u_top || on_l_bottom)
        })
    })
}

/// Is `r` an integral power of 2 (with a possibly negative exponent)?
pub fn is_power_of_two(r: &BigRational) -> bool {
    let pow = |n: &BigInt| n.is_positive() && (n & (n - BigInt::one())).is_zero();
    pow(r.numer()) && pow(r.denom())
}

/// A vertical trajectory piece through the midline. From a singular start
/// each direction is its own connection; otherwise the up and down halves
/// form one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerticalConnection {
    pub x: String,
    pub length: String,
    pub closed: bool,
    pub in_zone: bool,
}

/// Trace the vertical line through the midline point at abscissa x in both
/// directions until singularities. Returns one connection, or two when the
/// point is itself singular.
pub fn vertical_connections(
    ctx: &TraceContext,
    n: u32,
    x: &BigRational,
    budget: usize,
) -> Result<Vec<VerticalConnection>, BuildError> {
    let f = ctx.surface.field().clone();
    let up = Point::new(NFElem::zero(&f), NFElem::one(&f));
    let down = Point::new(NFElem::zero(&f), -NFElem::one(&f));
    let p_up = midline_point(x);
    let p_down = midline_point_below(x);
    let su = ctx.locate(&p_up, &up)?;
    let sd = ctx.locate(&p_down, &down)?;
    let opts = TraceOptions {
        budget,
        section: None,
        max_length: None,
        from_vertex: true,
        turns: &[],
    };
    let ru = ctx.trace(su, &p_up, &up, &opts)?;
    let rd = ctx.trace(sd, &p_down, &down, &opts)?;
    let singular_start = matches!(su, Start::Corner(c) if ctx.is_singular(c));
    let closed = |r: &crate::surface::trace::TraceResult| r.kind == TraceKind::HitsSingularity;
    let zone = |r: &crate::surface::trace::TraceResult| in_guarantee_zone(n, &r.segments);
    let len = |e: &NFElem| e.to_rational().expect("rational");
    let xs = crate::numfield::rational_to_string(x);
    if singular_start {
        Ok([ru, rd]
            .iter()
            .map(|r| VerticalConnection {
                x: xs.clone(),
                length: crate::numfield::rational_to_string(&len(&r.length)),
                closed: closed(r),
                in_zone: zone(r),
            })
            .collect())
    } else {
        let total = len(&ru.length) + len(&rd.length);
        Ok(vec![VerticalConnection {
            x: xs,
            length: crate::numfield::rational_to_string(&total),
            closed: closed(&ru) && closed(&rd),
            in_zone: zone(&ru) && zone(&rd),
        }])
    }
}

/// Named vertex of the triangle presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LimitVertex {
    P(usize),
    Q(usize),
}

impl std::fmt::Display for LimitVertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LimitVertex::P(i) => write!(f, "P{i}"),
            LimitVertex::Q(i) => write!(f, "Q{i}"),
        }
    }
}

/// Limiting position as alpha -> 1/2 and g -> infinity.
pub fn limit_vertex(v: LimitVertex) -> (BigRational, BigRational) {
    match v {
        LimitVertex::P(0) => (q(1, 2), q(1, 2)),
        LimitVertex::P(1) => (q(0, 1), q(3, 4)),
        LimitVertex::P(i) => (BigRational::one() - pow2(1 - i as i32), q(1, 1)),
        LimitVertex::Q(0) => (q(0, 1), q(1, 2)),
        LimitVertex::Q(i) => (BigRational::one() - q(3, 1) * pow2(-(i as i32) - 1), q(1, 1)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationSpec {
    pub n: u32,
    pub tail_start: String,
    pub vertices: Vec<(String, [String; 2])>,
}

pub fn truncation_spec(n: u32) -> TruncationSpec {
    let mut vs = vec![LimitVertex::P(0), LimitVertex::Q(0), LimitVertex::P(1)];
    for i in 1..=n as usize {
        if i >= 2 {
            vs.push(LimitVertex::P(i));
        }
        vs.push(LimitVertex::Q(i));
    }
    let s = crate::numfield::rational_to_string;
    TruncationSpec {
        n,
        tail_start: s(&tail_start(n)),
        vertices: vs
            .into_iter()
            .map(|v| {
                let (x, y) = limit_vertex(v);
                (v.to_string(), [s(&x), s(&y)])
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexDeviation {
    pub g: u32,
    pub vertex: String,
    /// Squared distance to the limit, as an approximation for display.
    pub dist2: f64,
    pub bound2: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexConvergenceReport {
    pub g_max: u32,
    pub i_max: usize,
    pub deviations: Vec<VertexDeviation>,
    /// Genera whose largest deviation is provably below that of the previous genus.
    pub monotone: bool,
    pub all_within: bool,
}

impl VertexConvergenceReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.all_within
    }
}

/// Compare the genus-g vertices P_i, Q_i, i <= min(i_max, g - 1), with their
/// limits for g = 4..=g_max; the squared distance must be at most
/// (8 * 2^-g)^2.
pub fn vertex_convergence_check(g_max: u32, i_max: usize) -> Result<VertexConvergenceReport, BuildError> {
    let width = pow2(-256);
    let mut deviations = Vec::new();
    let mut maxima: Vec<(BigRational, BigRational)> = Vec::new();
    let mut all_within = true;
    for g in 4..=g_max {
        let f = NumberField::get(g)?;
        let tv = triangulation_vertices(g)?;
        let bound = pow2(3 - g as i32);
        let bound2 = NFElem::from_rational(&f, &bound * &bound);
        let top = i_max.min(g as usize - 1);
        let mut worst: Option<(BigRational, BigRational)> = None;
        for i in 0..=top {
            for v in [LimitVertex::P(i), LimitVertex::Q(i)] {
                let pt = match v {
                    LimitVertex::P(i) => &tv.p[i],
                    LimitVertex::Q(i) => &tv.q[i],
                };
                let (lx, ly) = limit_vertex(v);
                let d = pt.sub(&Point::new(NFElem::from_rational(&f, lx), NFElem::from_rational(&f, ly)));
                let d2 = d.norm2();
                let within = d2 <= bound2;
                all_within &= within;
                let iv = d2.interval(&width);
                worst = Some(match worst {
                    None => iv,
                    Some(w) => (w.0.max(iv.0), w.1.max(iv.1)),
                });
                deviations.push(VertexDeviation {
                    g,
                    vertex: v.to_string(),
                    dist2: d2.to_f64(),
                    bound2: bound2.to_f64(),
                    within,
                });
            }
        }
        maxima.push(worst.expect("at least one vertex"));
    }
    let monotone = maxima.windows(2).all(|w| w[1].1 < w[0].0);
    Ok(VertexConvergenceReport {
        g_max,
        i_max,
        deviations,
        monotone,
        all_within,
    })
}

/// Validity and connectedness of a truncation.
pub fn truncation_is_connected(s: &SurfaceComplex) -> Result<bool, SurfaceError> {
    let c = s.components();
    Ok(s.validate().is_valid() && c.iter().all(|&x| x == c[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_of_named_vertices() {
        assert_eq!(limit_vertex(LimitVertex::P(2)), (q(1, 2), q(1, 1)));
        assert_eq!(limit_vertex(LimitVertex::P(4)), (q(7, 8), q(1, 1)));
        assert_eq!(limit_vertex(LimitVertex::Q(1)), (q(1, 4), q(1, 1)));
    }

    #[test]
    fn powers_of_two() {
        assert!(is_power_of_two(&q(1, 8)));
        assert!(is_power_of_two(&q(4, 1)));
        assert!(!is_power_of_two(&q(3, 4)));
    }

    #[test]
    fn truncation_validates() {
        for n in 1..=4 {
            let s = build_limit_truncation(n).unwrap();
            assert!(truncation_is_connected(&s).unwrap());
            assert_eq!(s.area(), NFElem::one(s.field()));
        }
    }
}
