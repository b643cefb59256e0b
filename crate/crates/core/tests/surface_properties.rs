//! Properties of the surface layer checked against independent oracles:
//! mod-2 homology for the genus, primitive-vector counts on the square torus,
//! and first returns of column surfaces with known top maps.

use std::collections::HashMap;
use std::sync::OnceLock;

use ay_core::builders::{
    base_section, build_columns, build_limit_truncation, build_staircase, build_triangulation, ColumnSpec, VSeg,
};
use ay_core::iet::{build_f_g_with, IetPiece, IntervalExchange};
use ay_core::numfield::{NFElem, NumberField};
use ay_core::par::Mode;
use ay_core::surface::saddle::saddle_connections;
use ay_core::surface::trace::{first_return_iet, TraceContext, TraceKind, TraceOptions};
use ay_core::surface::{EdgeRef, Point, SurfaceComplex};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

/// Rank over GF(2) of the rows, each a bitset.
fn rank_gf2(mut rows: Vec<Vec<u64>>) -> usize {
    let width = rows.first().map_or(0, |r| r.len() * 64);
    let mut rank = 0;
    for col in 0..width {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[w] & b != 0 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

/// dim H_1(S; GF(2)) = E - rank d1 - rank d2, computed from the gluings alone.
fn h1_rank(s: &SurfaceComplex) -> usize {
    let n = s.num_triangles();
    // corners identified across glued edges, which run in opposite directions
    let mut uf: Vec<usize> = (0..3 * n).collect();
    let mut edge_id = HashMap::new();
    for t in 0..n {
        for e in 0..3 {
            let p = s.partner(EdgeRef::new(t, e));
            for (a, b) in [(3 * t + e, 3 * p.tri + (p.edge + 1) % 3), (3 * t + (e + 1) % 3, 3 * p.tri + p.edge)] {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
            }
            let key = (t, e).min((p.tri, p.edge));
            let next = edge_id.len();
            edge_id.entry(key).or_insert(next);
        }
    }
    let mut vertex_id = HashMap::new();
    for c in 0..3 * n {
        let r = find(&mut uf, c);
        let next = vertex_id.len();
        vertex_id.entry(r).or_insert(next);
    }
    let (nv, ne) = (vertex_id.len(), edge_id.len());
    let words = |k: usize| vec![0u64; k.div_ceil(64)];
    let mut d1 = vec![words(nv); ne];
    let mut d2 = vec![words(ne); n];
    for t in 0..n {
        for e in 0..3 {
            let p = s.partner(EdgeRef::new(t, e));
            let id = edge_id[&(t, e).min((p.tri, p.edge))];
            d2[t][id / 64] ^= 1 << (id % 64);
            let a = vertex_id[&find(&mut uf, 3 * t + e)];
            let b = vertex_id[&find(&mut uf, 3 * t + (e + 1) % 3)];
            if (t, e) <= (p.tri, p.edge) {
                d1[id] = words(nv);
                d1[id][a / 64] ^= 1 << (a % 64);
                d1[id][b / 64] ^= 1 << (b % 64);
            }
        }
    }
    ne - rank_gf2(d1) - rank_gf2(d2)
}

fn total_genus(s: &SurfaceComplex) -> usize {
    s.topology().unwrap().components.iter().map(|c| c.genus as usize).sum()
}

#[test]
fn genus_agrees_with_mod_two_homology() {
    for g in 1..=6 {
        let s = build_staircase(g).unwrap();
        assert_eq!(h1_rank(&s), 2 * g as usize, "staircase g={g}");
        assert_eq!(h1_rank(&s), 2 * total_genus(&s), "staircase g={g}");
    }
    for g in 3..=6 {
        let s = build_triangulation(g).unwrap();
        assert_eq!(h1_rank(&s), 2 * g as usize, "triangulation g={g}");
    }
    for n in 1..=4 {
        let s = build_limit_truncation(n).unwrap();
        assert_eq!(h1_rank(&s), 2 * total_genus(&s), "truncation N={n}");
    }
}

fn square_torus() -> SurfaceComplex {
    let f = NumberField::get(1).unwrap();
    let p = |x: i64, y: i64| Point::new(NFElem::from_int(&f, x), NFElem::from_int(&f, y));
    let mut s = SurfaceComplex::new(
        f.clone(),
        vec![[p(0, 0), p(1, 0), p(1, 1)], [p(0, 0), p(1, 1), p(0, 1)]],
        vec![[None; 3]; 2],
    );
    for (a, b) in [((0, 0), (1, 1)), ((0, 1), (1, 2)), ((0, 2), (1, 0))] {
        s.gluings[a.0][a.1] = Some(EdgeRef::new(b.0, b.1));
        s.gluings[b.0][b.1] = Some(EdgeRef::new(a.0, a.1));
    }
    s
}

fn primitive_vectors(l2: i64) -> usize {
    let r = (l2 as f64).sqrt() as i64 + 1;
    let mut n = 0;
    for a in -r..=r {
        for b in -r..=r {
            if (a, b) != (0, 0) && a * a + b * b <= l2 && a.gcd(&b) == 1 {
                n += 1;
            }
        }
    }
    n
}

fn q(f: &std::sync::Arc<NumberField>, n: i64, d: i64) -> NFElem {
    NFElem::from_rational(f, BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn staircase(g: u32) -> &'static SurfaceComplex {
    static CACHE: OnceLock<Vec<SurfaceComplex>> = OnceLock::new();
    &CACHE.get_or_init(|| (3..=6).map(|g| build_staircase(g).unwrap()).collect())[g as usize - 3]
}

/// Equal-height columns of the given widths, sides glued cyclically, with
/// the top shifted by `shift` before it is glued to the base.
fn rotation_columns(widths: &[i64], height: i64, shift: i64) -> (ColumnSpec, IntervalExchange) {
    let f = NumberField::get(1).unwrap();
    let e = |x: i64| NFElem::from_int(&f, x);
    let w: i64 = widths.iter().sum();
    let mut cuts = vec![e(0)];
    for x in widths {
        let last = cuts.last().unwrap().clone();
        cuts.push(&last + &e(*x));
    }
    let top_map = IntervalExchange::new(
        e(w),
        vec![
            IetPiece { left: e(0), translation: e(shift) },
            IetPiece { left: e(w - shift), translation: e(shift - w) },
        ],
    )
    .unwrap();
    let spec = ColumnSpec {
        field: f.clone(),
        cuts,
        tops: vec![e(height); widths.len()],
        slits: vec![],
        rules: vec![(VSeg::new(e(w), e(0), e(height), false), VSeg::new(e(0), e(0), e(height), true))],
        top_map: top_map.clone(),
    };
    (spec, top_map)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn torus_saddle_count_is_primitive_count(l2 in 1i64..30) {
        let s = square_torus();
        let f = s.field().clone();
        let conns = saddle_connections(&s, &NFElem::from_int(&f, l2), 1_000_000, Mode::Sequential).unwrap();
        prop_assert_eq!(conns.len(), primitive_vectors(l2));
    }

    #[test]
    fn vertical_trace_returns_by_f_g(g in 3u32..=6, num in 0i64..997) {
        let s = staircase(g);
        let f = s.field().clone();
        let x = q(&f, num, 997);
        let ctx = TraceContext::new(s).unwrap();
        let sec = base_section(s).unwrap();
        let p = Point::new(x.clone(), NFElem::zero(&f));
        let d = Point::new(NFElem::zero(&f), NFElem::one(&f));
        let start = ctx.locate(&p, &d).unwrap();
        let r = ctx.trace(start, &p, &d, &TraceOptions { budget: 10_000, section: Some(&sec), ..Default::default() }).unwrap();
        if r.kind == TraceKind::ReturnsToSection {
            let expected = build_f_g_with(g, false).unwrap().apply(&x).unwrap();
            prop_assert_eq!(r.endpoint.x, expected);
        } else {
            // only the discontinuities of f_g run into a cone point
            prop_assert_eq!(r.kind, TraceKind::HitsSingularity);
        }
    }

    #[test]
    fn rotation_columns_return_by_their_top_map(
        widths in proptest::collection::vec(1i64..5, 1..5),
        height in 1i64..4,
        shift_frac in 1i64..100,
    ) {
        let w: i64 = widths.iter().sum();
        let shift = 1 + shift_frac % (w.max(2) - 1);
        prop_assume!(shift < w);
        let (spec, top) = rotation_columns(&widths, height, shift);
        let s = build_columns(&spec).unwrap();
        prop_assert!(s.validate().is_valid());
        prop_assert_eq!(s.topology().unwrap().genus, Some(1));
        prop_assert_eq!(s.area(), NFElem::from_int(s.field(), w * height));
        let ret = first_return_iet(&s, &base_section(&s).unwrap()).unwrap();
        prop_assert!(ret.equal(&top));
    }
}
