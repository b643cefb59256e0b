//! Piecewise affine maps of [0, L) with exact endpoints, interval exchanges,
//! first-return induction and the maps f_g, h_g and r.
//!
//! All pieces are left-closed and right-open.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfield::{NFElem, NumFieldError, NumberField};

pub const FIRST_RETURN_CAP: usize = 1_000_000;
pub const ORBIT_CAP: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IetError {
    #[error("point {0} outside the domain")]
    OutOfDomain(String),
    #[error("map is not a bijection onto an interval [0, L)")]
    NotBijective,
    #[error("image of the inner map leaves the domain of the outer map")]
    DomainMismatch,
    #[error("first-return induction exceeded {0} refinement steps")]
    IterationCap(usize),
    #[error("conjugated map has a piece with slope different from 1")]
    NotAnExchange,
    #[error("slopes must be positive")]
    NonPositiveSlope,
    #[error("invalid pieces: {0}")]
    BadPieces(String),
    #[error("genus {0} needs the degenerate flag")]
    DegenerateGenus(u32),
    #[error("orbit length {0} exceeds the cap")]
    OrbitCap(u64),
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

/// One affine branch x -> slope * x + offset on [left, next left).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub left: NFElem,
    pub slope: NFElem,
    pub offset: NFElem,
}

/// An injective map of [0, length) that is affine with positive slope on each piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseAffine {
    pub length: NFElem,
    pub pieces: Vec<AffinePiece>,
}

/// Translation x -> x + translation on [left, next left).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IetPiece {
    pub left: NFElem,
    pub translation: NFElem,
}

/// A piecewise translation of [0, domain_length).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalExchange {
    pub g: u32,
    pub domain_length: NFElem,
    pub pieces: Vec<IetPiece>,
}

fn check_lefts<'a>(
    length: &NFElem,
    lefts: impl Iterator<Item = &'a NFElem>,
) -> Result<(), IetError> {
    let mut prev: Option<&NFElem> = None;
    for (i, l) in lefts.enumerate() {
        if i == 0 && !l.is_zero() {
            return Err(IetError::BadPieces("first left endpoint must be 0".into()));
        }
        if let Some(p) = prev {
            if l <= p {
                return Err(IetError::BadPieces(
                    "left endpoints must increase".into(),
                ));
            }
        }
        prev = Some(l);
    }
    match prev {
        None => Err(IetError::BadPieces("no pieces".into())),
        Some(p) if p >= length => Err(IetError::BadPieces(
            "left endpoint beyond domain".into(),
        )),
        _ => Ok(()),
    }
}

impl PiecewiseAffine {
    pub fn new(length: NFElem, pieces: Vec<AffinePiece>) -> Result<Self, IetError> {
        check_lefts(&length, pieces.iter().map(|p| &p.left))?;
        if pieces.iter().any(|p| p.slope.sign() <= 0) {
            return Err(IetError::NonPositiveSlope);
        }
        Ok(PiecewiseAffine { length, pieces })
    }

    pub fn identity(length: NFElem) -> Self {
        let f = length.field().clone();
        PiecewiseAffine {
            pieces: vec![AffinePiece {
                left: NFElem::zero(&f),
                slope: NFElem::one(&f),
                offset: NFElem::zero(&f),
            }],
            length,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.length.field()
    }

    fn right(&self, k: usize) -> &NFElem {
        self.pieces
            .get(k + 1)
            .map(|p| &p.left)
            .unwrap_or(&self.length)
    }

    fn locate(&self, x: &NFElem) -> Result<usize, IetError> {
        if x.sign() < 0 || x >= &self.length {
            return Err(IetError::OutOfDomain(x.to_string()));
        }
        let k = self.pieces.partition_point(|p| &p.left <= x);
        Ok(k - 1)
    }

    pub fn apply(&self, x: &NFElem) -> Result<NFElem, IetError> {
        let p = &self.pieces[self.locate(x)?];
        Ok(&(&p.slope * x) + &p.offset)
    }

    /// Image intervals [a, b) of each piece, in piece order.
    pub fn image_intervals(&self) -> Vec<(NFElem, NFElem)> {
        (0..self.pieces.len())
            .map(|k| {
                let p = &self.pieces[k];
                let a = &(&p.slope * &p.left) + &p.offset;
                let b = &(&p.slope * self.right(k)) + &p.offset;
                (a, b)
            })
            .collect()
    }

    /// Merge adjacent pieces carrying the same affine branch.
    pub fn canonical(&self) -> PiecewiseAffine {
        let mut out: Vec<AffinePiece> = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            if let Some(last) = out.last() {
                if last.slope == p.slope && last.offset == p.offset {
                    continue;
                }
            }
            out.push(p.clone());
        }
        PiecewiseAffine {
            length: self.length.clone(),
            pieces: out,
        }
    }

    /// `self` after `inner`: x -> self(inner(x)).
    pub fn compose(&self, inner: &PiecewiseAffine) -> Result<PiecewiseAffine, IetError> {
        let mut out = Vec::new();
        for k in 0..inner.pieces.len() {
            let p = &inner.pieces[k];
            let (l, r) = (&p.left, inner.right(k));
            let il = &(&p.slope * l) + &p.offset;
            let ir = &(&p.slope * r) + &p.offset;
            if il.sign() < 0 || ir > self.length {
                return Err(IetError::DomainMismatch);
            }
            let mut j = self.locate(&il)?;
            let mut x = l.clone();
            loop {
                let q = &self.pieces[j];
                out.push(AffinePiece {
                    left: x.clone(),
                    slope: &q.slope * &p.slope,
                    offset: &(&q.slope * &p.offset) + &q.offset,
                });
                let cut = self.right(j);
                if cut >= &ir {
                    break;
                }
                // preimage of the next outer breakpoint
                x = (cut - &p.offset).checked_div(&p.slope)?;
                j += 1;
            }
        }
        Ok(PiecewiseAffine {
            length: inner.length.clone(),
            pieces: out,
        }
        .canonical())
    }

    /// Inverse map; requires the images to tile [0, L') for some L'.
    pub fn inverse(&self) -> Result<PiecewiseAffine, IetError> {
        let imgs = self.image_intervals();
        let mut order: Vec<usize> = (0..imgs.len()).collect();
        order.sort_by(|&a, &b| imgs[a].0.cmp(&imgs[b].0));
        let f = self.field().clone();
        let mut cursor = NFElem::zero(&f);
        let mut out = Vec::with_capacity(order.len());
        for &k in &order {
            let (a, b) = &imgs[k];
            if a != &cursor {
                return Err(IetError::NotBijective);
            }
            let p = &self.pieces[k];
            let inv = p.slope.recip()?;
            out.push(AffinePiece {
                left: a.clone(),
                offset: -(&p.offset * &inv),
                slope: inv,
            });
            cursor = b.clone();
        }
        Ok(PiecewiseAffine {
            length: cursor,
            pieces: out,
        }
        .canonical())
    }

    pub fn equal(&self, other: &PiecewiseAffine) -> bool {
        self.canonical() == other.canonical()
    }
}

impl IntervalExchange {
    pub fn new(domain_length: NFElem, pieces: Vec<IetPiece>) -> Result<Self, IetError> {
        check_lefts(&domain_length, pieces.iter().map(|p| &p.left))?;
        Ok(IntervalExchange {
            g: domain_length.g(),
            domain_length,
            pieces,
        })
    }

    pub fn identity(length: NFElem) -> Self {
        let f = length.field().clone();
        IntervalExchange {
            g: f.g(),
            pieces: vec![IetPiece {
                left: NFElem::zero(&f),
                translation: NFElem::zero(&f),
            }],
            domain_length: length,
        }
    }

    /// Build from interval lengths and the translation of each interval.
    pub fn from_lengths(lengths: &[NFElem], translations: &[NFElem]) -> Result<Self, IetError> {
        if lengths.is_empty() || lengths.len() != translations.len() {
            return Err(IetError::BadPieces("length/translation mismatch".into()));
        }
        let f = lengths[0].field().clone();
        let mut left = NFElem::zero(&f);
        let mut pieces = Vec::new();
        for (l, t) in lengths.iter().zip(translations) {
            pieces.push(IetPiece {
                left: left.clone(),
                translation: t.clone(),
            });
            left = &left + l;
        }
        IntervalExchange::new(left, pieces)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.domain_length.field()
    }

    pub fn to_affine(&self) -> PiecewiseAffine {
        let f = self.field().clone();
        PiecewiseAffine {
            length: self.domain_length.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece {
                    left: p.left.clone(),
                    slope: NFElem::one(&f),
                    offset: p.translation.clone(),
                })
                .collect(),
        }
    }

    pub fn from_affine(a: &PiecewiseAffine) -> Result<Self, IetError> {
        let one = NFElem::one(a.field());
        let mut pieces = Vec::with_capacity(a.pieces.len());
        for p in &a.pieces {
            if p.slope != one {
                return Err(IetError::NotAnExchange);
            }
            pieces.push(IetPiece {
                left: p.left.clone(),
                translation: p.offset.clone(),
            });
        }
        Ok(IntervalExchange {
            g: a.field().g(),
            domain_length: a.length.clone(),
            pieces,
        })
    }

    pub fn right(&self, k: usize) -> &NFElem {
        self.pieces
            .get(k + 1)
            .map(|p| &p.left)
            .unwrap_or(&self.domain_length)
    }

    pub fn piece_lengths(&self) -> Vec<NFElem> {
        (0..self.pieces.len())
            .map(|k| self.right(k) - &self.pieces[k].left)
            .collect()
    }

    pub fn locate(&self, x: &NFElem) -> Result<usize, IetError> {
        if x.sign() < 0 || x >= &self.domain_length {
            return Err(IetError::OutOfDomain(x.to_string()));
        }
        Ok(self.pieces.partition_point(|p| &p.left <= x) - 1)
    }

    pub fn apply(&self, x: &NFElem) -> Result<NFElem, IetError> {
        Ok(x + &self.pieces[self.locate(x)?].translation)
    }

    pub fn canonical(&self) -> IntervalExchange {
        Self::from_affine(&self.to_affine().canonical()).expect("slopes stay 1")
    }

    pub fn compose(&self, inner: &IntervalExchange) -> Result<IntervalExchange, IetError> {
        Self::from_affine(&self.to_affine().compose(&inner.to_affine())?)
    }

    pub fn inverse(&self) -> Result<IntervalExchange, IetError> {
        let inv = self.to_affine().inverse()?;
        if inv.length != self.domain_length {
            return Err(IetError::NotBijective);
        }
        Self::from_affine(&inv)
    }

    /// True when the image pieces tile [0, L) exactly.
    pub fn is_bijection(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn equal(&self, other: &IntervalExchange) -> bool {
        self.canonical() == other.canonical()
    }

    /// h o T o h^-1, which must again be a piecewise translation.
    pub fn conjugate(&self, h: &PiecewiseAffine) -> Result<IntervalExchange, IetError> {
        let hinv = h.inverse()?;
        let t = self.to_affine().compose(&hinv)?;
        let c = h.compose(&t)?;
        Self::from_affine(&c)
    }

    /// The map induced on [0, t) by first return, following subintervals exactly.
    pub fn first_return(&self, t: &NFElem) -> Result<IntervalExchange, IetError> {
        if t.sign() <= 0 || t > &self.domain_length {
            return Err(IetError::OutOfDomain(t.to_string()));
        }
        if t == &self.domain_length {
            return Ok(self.canonical());
        }
        // (start in [0,t), length, current position)
        let mut work: Vec<(NFElem, NFElem, NFElem)> = Vec::new();
        for k in 0..self.pieces.len() {
            let l = &self.pieces[k].left;
            if l >= t {
                break;
            }
            let r = self.right(k).min(t);
            work.push((l.clone(), &r - l, l.clone()));
        }
        let mut done: Vec<(NFElem, NFElem)> = Vec::new();
        let mut steps = 0usize;
        while let Some((start, len, pos)) = work.pop() {
            steps += 1;
            if steps > FIRST_RETURN_CAP {
                return Err(IetError::IterationCap(FIRST_RETURN_CAP));
            }
            let k = self.locate(&pos)?;
            let end = &pos + &len;
            let r = self.right(k);
            if &end > r {
                let head = r - &pos;
                work.push((&start + &head, &len - &head, r.clone()));
                work.push((start, head, pos));
                continue;
            }
            let npos = &pos + &self.pieces[k].translation;
            let nend = &npos + &len;
            if &nend <= t {
                done.push((start.clone(), &npos - &start));
            } else if &npos >= t {
                work.push((start, len, npos));
            } else {
                let head = t - &npos;
                work.push((&start + &head, &len - &head, t.clone()));
                done.push((start.clone(), &npos - &start));
            }
        }
        done.sort_by(|a, b| a.0.cmp(&b.0));
        let pieces = done
            .into_iter()
            .map(|(left, translation)| IetPiece { left, translation })
            .collect();
        Ok(IntervalExchange::new(t.clone(), pieces)?.canonical())
    }

    /// Orbit x, T(x), ..., T^n(x); negative n walks backwards.
    pub fn orbit(&self, x: &NFElem, n: i64) -> Result<Vec<NFElem>, IetError> {
        let steps = n.unsigned_abs();
        if steps > ORBIT_CAP {
            return Err(IetError::OrbitCap(steps));
        }
        let map = if n < 0 { self.inverse()? } else { self.clone() };
        let mut out = Vec::with_capacity(steps as usize + 1);
        let mut cur = x.clone();
        map.locate(&cur)?;
        out.push(cur.clone());
        for _ in 0..steps {
            cur = map.apply(&cur)?;
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Partition [0, L) into atoms bounded by domain and image breakpoints,
    /// link atoms whose image meets, and return the connected components
    /// that are exactly invariant. A result with more than one component
    /// exhibits the map as reducible.
    pub fn invariant_components(&self) -> Result<Vec<Vec<(NFElem, NFElem)>>, IetError> {
        let mut pts: Vec<NFElem> = self.pieces.iter().map(|p| p.left.clone()).collect();
        for p in &self.pieces {
            pts.push(&p.left + &p.translation);
        }
        pts.sort();
        pts.dedup();
        let atoms: Vec<(NFElem, NFElem)> = (0..pts.len())
            .map(|i| {
                let r = pts.get(i + 1).cloned().unwrap_or(self.domain_length.clone());
                (pts[i].clone(), r)
            })
            .collect();
        let n = atoms.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, (a, b)) in atoms.iter().enumerate() {
            let tr = &self.pieces[self.locate(a)?].translation;
            let (ia, ib) = (a + tr, b + tr);
            for (j, (c, d)) in atoms.iter().enumerate() {
                if &ia < d && c < &ib {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            let c = *root_of[r].get_or_insert_with(|| {
                comps.push(Vec::new());
                comps.len() - 1
            });
            comps[c].push(i);
        }
        let mut out = Vec::new();
        for c in comps {
            let src = merge_intervals(c.iter().map(|&i| atoms[i].clone()).collect());
            let mut img = Vec::new();
            for &i in &c {
                let (a, b) = &atoms[i];
                let tr = &self.pieces[self.locate(a)?].translation;
                img.push((a + tr, b + tr));
            }
            if merge_intervals(img) != src {
                return Err(IetError::BadPieces(
                    "atom component is not invariant".into(),
                ));
            }
            out.push(src);
        }
        Ok(out)
    }
}

fn merge_intervals(mut v: Vec<(NFElem, NFElem)>) -> Vec<(NFElem, NFElem)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(NFElem, NFElem)> = Vec::new();
    for (a, b) in v {
        if let Some(last) = out.last_mut() {
            if a <= last.1 {
                if b > last.1 {
                    last.1 = b;
                }
                continue;
            }
        }
        out.push((a, b));
    }
    out
}

fn half(f: &Arc<NumberField>) -> NFElem {
    NFElem::from_rational(f, BigRational::new(BigInt::one(), BigInt::from(2)))
}

/// r: exchange [0, 1/2) and [1/2, 1).
pub fn half_swap(f: &Arc<NumberField>) -> IntervalExchange {
    let h = half(f);
    IntervalExchange::new(
        NFElem::one(f),
        vec![
            IetPiece {
                left: NFElem::zero(f),
                translation: h.clone(),
            },
            IetPiece {
                left: h.clone(),
                translation: -h,
            },
        ],
    )
    .expect("valid")
}

/// s_k = alpha + ... + alpha^k, the right end of block k.
pub fn block_ends(f: &Arc<NumberField>) -> Vec<NFElem> {
    let g = f.degree();
    let mut out = Vec::with_capacity(g + 1);
    let mut acc = NFElem::zero(f);
    out.push(acc.clone());
    for k in 1..=g {
        acc = &acc + &NFElem::alpha_pow(f, k);
        out.push(acc.clone());
    }
    out
}

/// Swap the two halves inside each block [s_(k-1), s_k).
pub fn block_half_swap(f: &Arc<NumberField>) -> IntervalExchange {
    let s = block_ends(f);
    let mut pieces = Vec::new();
    for k in 1..s.len() {
        let h = NFElem::alpha_pow(f, k).half();
        pieces.push(IetPiece {
            left: s[k - 1].clone(),
            translation: h.clone(),
        });
        pieces.push(IetPiece {
            left: &s[k - 1] + &h,
            translation: -h,
        });
    }
    IntervalExchange::new(NFElem::one(f), pieces).expect("valid")
}

/// f_g for g >= 2.
pub fn build_f_g(g: u32) -> Result<IntervalExchange, IetError> {
    build_f_g_with(g, false)
}

/// f_g, allowing g = 1 when `allow_degenerate` is set. For g = 1 the single
/// block is the whole circle, so the two half swaps cancel.
pub fn build_f_g_with(g: u32, allow_degenerate: bool) -> Result<IntervalExchange, IetError> {
    if g == 0 || (g < 2 && !allow_degenerate) {
        return Err(IetError::DegenerateGenus(g));
    }
    let f = NumberField::get(g)?;
    half_swap(&f).compose(&block_half_swap(&f))
}

/// h_g: [0, 1) -> [0, alpha), affine with slope alpha on two branches.
pub fn build_h_g(g: u32) -> Result<PiecewiseAffine, IetError> {
    if g < 2 {
        return Err(IetError::DegenerateGenus(g));
    }
    let f = NumberField::get(g)?;
    let a = NFElem::alpha(&f);
    let ag = NFElem::alpha_pow(&f, g as usize);
    let ag1 = NFElem::alpha_pow(&f, g as usize + 1);
    let one = NFElem::one(&f);
    PiecewiseAffine::new(
        one.clone(),
        vec![
            AffinePiece {
                left: NFElem::zero(&f),
                slope: a.clone(),
                offset: (&a + &ag1).half(),
            },
            AffinePiece {
                left: (&one - &ag).half(),
                slope: a.clone(),
                offset: -(&a - &ag1).half(),
            },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(f: &Arc<NumberField>, p: i64, d: i64) -> NFElem {
        NFElem::from_rational(f, BigRational::new(BigInt::from(p), BigInt::from(d)))
    }

    #[test]
    fn f_g_at_zero_and_half() {
        for g in 2..=6 {
            let f = NumberField::get(g).unwrap();
            let t = build_f_g(g).unwrap();
            let a = NFElem::alpha(&f);
            let one = NFElem::one(&f);
            assert_eq!(t.apply(&NFElem::zero(&f)).unwrap(), (&a + &one).half());
            assert_eq!(t.apply(&q(&f, 1, 2)).unwrap(), &one - &a.half());
        }
    }

    #[test]
    fn r_values() {
        let f = NumberField::get(3).unwrap();
        let r = half_swap(&f);
        assert_eq!(r.apply(&q(&f, 1, 4)).unwrap(), q(&f, 3, 4));
        assert_eq!(
            r.orbit(&q(&f, 1, 4), 2).unwrap(),
            vec![q(&f, 1, 4), q(&f, 3, 4), q(&f, 1, 4)]
        );
        assert!(r.apply(&NFElem::one(&f)).is_err());
    }

    #[test]
    fn identity_behaviour() {
        let f = NumberField::get(3).unwrap();
        let id = IntervalExchange::identity(NFElem::one(&f));
        let x = q(&f, 2, 7);
        assert_eq!(id.orbit(&x, 5).unwrap(), vec![x.clone(); 6]);
        assert!(id.inverse().unwrap().equal(&id));
        let t = build_f_g(3).unwrap();
        assert!(t.equal(&t));
        assert!(!t.equal(&id));
    }

    #[test]
    fn f_3_orbit_start() {
        let f = NumberField::get(3).unwrap();
        let t = build_f_g(3).unwrap();
        let o = t.orbit(&NFElem::zero(&f), 1).unwrap();
        assert_eq!(o[1], (&NFElem::alpha(&f) + &NFElem::one(&f)).half());
        let back = t.orbit(&o[1], -1).unwrap();
        assert!(back[1].is_zero());
    }

    #[test]
    fn h_g_at_zero_and_image() {
        for g in 2..=5 {
            let f = NumberField::get(g).unwrap();
            let h = build_h_g(g).unwrap();
            let a = NFElem::alpha(&f);
            let v = h.apply(&NFElem::zero(&f)).unwrap();
            assert_eq!(v, (&a + &NFElem::alpha_pow(&f, g as usize + 1)).half());
            assert_eq!(h.inverse().unwrap().length, a);
        }
    }

    #[test]
    fn rotation_first_return() {
        // rotation by 2/5 induced on [0, 1/2) against brute-force orbits
        let f = NumberField::get(1).unwrap();
        let rot = IntervalExchange::new(
            NFElem::one(&f),
            vec![
                IetPiece {
                    left: NFElem::zero(&f),
                    translation: q(&f, 2, 5),
                },
                IetPiece {
                    left: q(&f, 3, 5),
                    translation: q(&f, -3, 5),
                },
            ],
        )
        .unwrap();
        let t = q(&f, 1, 2);
        let ind = rot.first_return(&t).unwrap();
        for k in 0..50 {
            let x = q(&f, k, 100);
            let mut y = rot.apply(&x).unwrap();
            while y >= t {
                y = rot.apply(&y).unwrap();
            }
            assert_eq!(ind.apply(&x).unwrap(), y, "x={x}");
        }
        assert!(rot.first_return(&NFElem::one(&f)).unwrap().equal(&rot));
    }

    #[test]
    fn non_bijective_rejected() {
        let f = NumberField::get(2).unwrap();
        let bad = IntervalExchange::new(
            NFElem::one(&f),
            vec![
                IetPiece {
                    left: NFElem::zero(&f),
                    translation: NFElem::zero(&f),
                },
                IetPiece {
                    left: q(&f, 1, 2),
                    translation: q(&f, -1, 4),
                },
            ],
        )
        .unwrap();
        assert!(bad.inverse().is_err());
    }

    #[test]
    fn degenerate_genus_flag() {
        assert!(build_f_g(1).is_err());
        let t = build_f_g_with(1, true).unwrap();
        let f = NumberField::get(1).unwrap();
        assert!(t.equal(&IntervalExchange::identity(NFElem::one(&f))));
    }
}
