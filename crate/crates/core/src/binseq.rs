//! Eventually periodic binary sequences and the maps of the infinite interval
//! exchange on [0, 1), read through binary expansions a_0 a_1 a_2 ...
//! (value sum a_i 2^-(i+1)). Sequences ending in all 1s are excluded.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Mode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinSeqError {
    #[error("period must be non-empty")]
    EmptyPeriod,
    #[error("sequence ends in all 1s")]
    AllOnesTail,
    #[error("digits must be 0 or 1")]
    BadDigit,
    #[error("cannot parse {0:?}; expected u(v)")]
    Parse(String),
    #[error("value {0} outside [0, 1)")]
    OutOfRange(String),
    #[error("sequence is not dyadic")]
    NotDyadic,
    #[error("no preimage")]
    NoPreimage,
    #[error("map undefined at the zero sequence")]
    UndefinedAtZero,
}

/// A canonical eventually periodic binary sequence `pre (per)^infinity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinSeq {
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl BinSeq {
    pub fn new(pre: Vec<u8>, per: Vec<u8>) -> Result<Self, BinSeqError> {
        if per.is_empty() {
            return Err(BinSeqError::EmptyPeriod);
        }
        if pre.iter().chain(&per).any(|&d| d > 1) {
            return Err(BinSeqError::BadDigit);
        }
        if per.iter().all(|&d| d == 1) {
            return Err(BinSeqError::AllOnesTail);
        }
        let mut s = BinSeq { pre, per };
        s.canonicalize();
        Ok(s)
    }

    pub fn zero() -> Self {
        BinSeq {
            pre: Vec::new(),
            per: vec![0],
        }
    }

    /// The finite word `w` followed by zeros.
    pub fn dyadic(w: &[u8]) -> Self {
        BinSeq::new(w.to_vec(), vec![0]).expect("valid digits")
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    fn canonicalize(&mut self) {
        let n = self.per.len();
        for d in 1..=n {
            if n % d == 0 && (d..n).all(|i| self.per[i] == self.per[i - d]) {
                self.per.truncate(d);
                break;
            }
        }
        while let Some(&last) = self.pre.last() {
            if last != *self.per.last().expect("non-empty") {
                break;
            }
            self.pre.pop();
            self.per.rotate_right(1);
        }
    }

    pub fn digit(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// Copy with digit `i` flipped.
    pub fn flip(&self, i: usize) -> Self {
        let mut pre = self.pre.clone();
        let mut k = 0;
        while pre.len() <= i {
            pre.push(self.per[k % self.per.len()]);
            k += 1;
        }
        let per: Vec<u8> = (0..self.per.len())
            .map(|j| self.per[(k + j) % self.per.len()])
            .collect();
        pre[i] ^= 1;
        BinSeq::new(pre, per).expect("flipping a prefix digit keeps the tail")
    }

    pub fn prepend(&self, d: u8) -> Self {
        let mut pre = Vec::with_capacity(self.pre.len() + 1);
        pre.push(d);
        pre.extend_from_slice(&self.pre);
        BinSeq::new(pre, self.per.clone()).expect("valid")
    }

    /// Smallest i >= from with pred(a_i), searched over one full period past the preperiod.
    fn find(&self, from: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
        let bound = from + self.pre.len() + self.per.len() + 1;
        (from..bound).find(|&i| pred(i))
    }

    pub fn is_dyadic(&self) -> bool {
        self.per == [0]
    }

    pub fn value(&self) -> BigRational {
        let mut x = BigRational::zero();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut w = half.clone();
        for &d in &self.pre {
            if d == 1 {
                x += &w;
            }
            w = &w * &half;
        }
        // w = 2^-(|pre|+1); the period contributes 2^-|pre| * P / (2^n - 1)
        let n = self.per.len();
        let p = self.per.iter().fold(BigInt::zero(), |acc, &d| acc * 2 + d);
        let den = (BigInt::one() << n) - 1;
        x + w * BigRational::new(p * 2, den)
    }

    pub fn from_rational(q: &BigRational) -> Result<Self, BinSeqError> {
        if q.is_negative() || q >= &BigRational::one() {
            return Err(BinSeqError::OutOfRange(q.to_string()));
        }
        let den = q.denom().clone();
        let mut num = q.numer().clone();
        let mut digits = Vec::new();
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        loop {
            if let Some(&start) = seen.get(&num) {
                let per = digits.split_off(start);
                return BinSeq::new(digits, per);
            }
            seen.insert(num.clone(), digits.len());
            num *= 2;
            if num >= den {
                digits.push(1);
                num -= &den;
            } else {
                digits.push(0);
            }
        }
    }
}

impl fmt::Display for BinSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[u8]| v.iter().map(|d| (b'0' + d) as char).collect::<String>();
        write!(f, "{}({})", s(&self.pre), s(&self.per))
    }
}

impl FromStr for BinSeq {
    type Err = BinSeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BinSeqError::Parse(s.to_string());
        let s = s.trim();
        let (u, rest) = s.split_once('(').ok_or_else(bad)?;
        let v = rest.strip_suffix(')').ok_or_else(bad)?;
        let digits = |w: &str| {
            w.chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<u8>, _>>()
        };
        BinSeq::new(digits(u)?, digits(v)?)
    }
}

impl Serialize for BinSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BinSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn flip_after_first_zero(a: &BinSeq) -> BinSeq {
    let i = a
        .find(0, |i| a.digit(i) == 0)
        .expect("sequences in B contain a 0 in every period");
    a.flip(i + 1)
}

/// f_inf: flip a_(i+1) where i is the first index with a_i = 0, then flip a_0.
pub fn f_inf(a: &BinSeq) -> BinSeq {
    flip_after_first_zero(a).flip(0)
}

pub fn f_inf_inv(a: &BinSeq) -> BinSeq {
    flip_after_first_zero(&a.flip(0))
}

/// Iterate f_inf n times; negative n iterates the inverse.
pub fn f_inf_pow(a: &BinSeq, n: i64) -> BinSeq {
    let mut x = a.clone();
    for _ in 0..n.unsigned_abs() {
        x = if n > 0 { f_inf(&x) } else { f_inf_inv(&x) };
    }
    x
}

/// Value assigned to F_inf at the zero sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FZeroConvention {
    #[default]
    OneThird,
    TwoThirds,
}

impl FZeroConvention {
    pub fn image(self) -> BinSeq {
        match self {
            FZeroConvention::OneThird => BinSeq::new(vec![], vec![0, 1]).expect("valid"),
            FZeroConvention::TwoThirds => BinSeq::new(vec![], vec![1, 0]).expect("valid"),
        }
    }
}

fn flip_down_from(a: &BinSeq, i: usize) -> BinSeq {
    // flip a_(i-1), a_(i-3), ... while the index stays non-negative
    let mut x = a.clone();
    let mut k = i as i64 - 1;
    while k >= 0 {
        x = x.flip(k as usize);
        k -= 2;
    }
    x
}

/// F_inf without the convention at zero.
pub fn f_big_raw(a: &BinSeq) -> Result<BinSeq, BinSeqError> {
    let a0 = a.digit(0);
    let i = a
        .find(1, |i| a.digit(i) != a0)
        .ok_or(BinSeqError::UndefinedAtZero)?;
    Ok(flip_down_from(a, i))
}

pub fn f_big(a: &BinSeq, conv: FZeroConvention) -> BinSeq {
    f_big_raw(a).unwrap_or_else(|_| conv.image())
}

/// Inverse of the algorithmic F_inf; the alternating sequences have no preimage.
pub fn f_big_inv(a: &BinSeq) -> Result<BinSeq, BinSeqError> {
    let i = a
        .find(1, |i| a.digit(i) == a.digit(i - 1))
        .ok_or(BinSeqError::NoPreimage)?;
    Ok(flip_down_from(a, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    R,
    HPrime,
    HDouble,
    HInf,
}

impl FromStr for Generator {
    type Err = BinSeqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "r" => Ok(Generator::R),
            "h'" | "hprime" | "h1" => Ok(Generator::HPrime),
            "h''" | "hdouble" | "h2" => Ok(Generator::HDouble),
            "hinf" | "h_inf" => Ok(Generator::HInf),
            _ => Err(BinSeqError::Parse(s.to_string())),
        }
    }
}

pub fn apply_generator(a: &BinSeq, which: Generator) -> BinSeq {
    match which {
        Generator::R => a.flip(0),
        Generator::HPrime => a.prepend(0),
        Generator::HDouble => a.prepend(1),
        Generator::HInf => a.flip(0).prepend(0),
    }
}

/// Thue-Morse parity of a dyadic sequence.
pub fn tm(a: &BinSeq) -> Result<u8, BinSeqError> {
    if !a.is_dyadic() {
        return Err(BinSeqError::NotDyadic);
    }
    Ok(a.pre.iter().fold(0, |acc, d| acc ^ d))
}

/// Largest index carrying a 1, with 0 for the zero sequence.
pub fn ind(a: &BinSeq) -> Result<usize, BinSeqError> {
    if !a.is_dyadic() {
        return Err(BinSeqError::NotDyadic);
    }
    Ok(a.pre.len().saturating_sub(1))
}

/// 1^k 0(0) or 1^k 01(0), k >= 0.
pub fn is_discontinuity(a: &BinSeq) -> bool {
    if !a.is_dyadic() {
        return false;
    }
    let p = &a.pre;
    let ones = |w: &[u8]| w.iter().all(|&d| d == 1);
    ones(p) || (p.len() >= 2 && p[p.len() - 2..] == [0, 1] && ones(&p[..p.len() - 2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitBase {
    Zero,
    Half,
}

impl OrbitBase {
    pub fn seq(self) -> BinSeq {
        match self {
            OrbitBase::Zero => BinSeq::zero(),
            OrbitBase::Half => BinSeq::dyadic(&[1]),
        }
    }
}

/// a = f_inf^n(base).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClassification {
    pub base: OrbitBase,
    #[serde(with = "bigint_string")]
    pub n: BigInt,
}

impl OrbitClassification {
    /// Half-orbit label; n = 0 is listed with the forward half.
    pub fn label(&self) -> &'static str {
        match (self.base, self.n.is_negative()) {
            (OrbitBase::Zero, false) => "O+(0)",
            (OrbitBase::Zero, true) => "O-(0)",
            (OrbitBase::Half, false) => "O+(1/2)",
            (OrbitBase::Half, true) => "O-(1/2)",
        }
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// The half-orbit predicted from Thue-Morse parity and index, for dyadics
/// other than the two base points.
pub fn table_row(a: &BinSeq) -> Result<(OrbitBase, i32), BinSeqError> {
    let t = tm(a)?;
    let even = ind(a)? % 2 == 0;
    Ok(match (t, even) {
        (0, true) => (OrbitBase::Zero, -1),
        (0, false) => (OrbitBase::Zero, 1),
        (_, true) => (OrbitBase::Half, 1),
        (_, false) => (OrbitBase::Half, -1),
    })
}

/// Solve f_inf^n(base) = a for dyadic a by rewriting the word of h', h''
/// letters read off the digits: each step trades the last letter for a power
/// of f_inf of size 2^(m-1) and a shorter word.
pub fn classify_orbit(a: &BinSeq) -> Result<OrbitClassification, BinSeqError> {
    if !a.is_dyadic() {
        return Err(BinSeqError::NotDyadic);
    }
    let mut word = a.pre.clone();
    let mut n = BigInt::zero();
    loop {
        match word.as_slice() {
            [] => {
                return Ok(OrbitClassification {
                    base: OrbitBase::Zero,
                    n,
                })
            }
            [1] => {
                return Ok(OrbitClassification {
                    base: OrbitBase::Half,
                    n,
                })
            }
            _ => {}
        }
        let m = word.len() - 1;
        let (k, tail): (i64, &[u8]) = if word[m - 1] == 1 { (1, &[]) } else { (-1, &[1]) };
        let zeros = word[..m - 1].iter().filter(|&&d| d == 0).count();
        let sign = if zeros % 2 == 0 { k } else { -k };
        n += BigInt::from(sign) << (m - 1);
        word.truncate(m - 1);
        word.extend_from_slice(tail);
        while word.last() == Some(&0) {
            word.pop();
        }
    }
}

/// Seeded sample: preperiod length 0..=12, period length 1..=8, fair digits.
/// Sample `index` depends only on (seed, index).
pub fn random_binseq(seed: u64, index: u64) -> BinSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let lp = rng.gen_range(0..=12);
    let lq = rng.gen_range(1..=8);
    let pre: Vec<u8> = (0..lp).map(|_| rng.gen_range(0..=1)).collect();
    let mut per: Vec<u8> = (0..lq).map(|_| rng.gen_range(0..=1)).collect();
    if per.iter().all(|&d| d == 1) {
        *per.last_mut().expect("non-empty") = 0;
    }
    BinSeq::new(pre, per).expect("valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub identity: String,
    pub input: BinSeq,
    pub lhs: BinSeq,
    pub rhs: BinSeq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// The four relations of f_inf with r, h', h'' and h_inf at one point.
pub fn conjugacy_failures(a: &BinSeq) -> Vec<Counterexample> {
    use Generator::*;
    let g = apply_generator;
    let f2 = |x: &BinSeq| f_inf(&f_inf(x));
    let cases = [
        ("r f r = f^-1", g(&f_inf(&g(a, R)), R), f_inf_inv(a)),
        ("f^2 h' = h' f^-1", f2(&g(a, HPrime)), g(&f_inf_inv(a), HPrime)),
        ("f^2 h'' = h'' f", f2(&g(a, HDouble)), g(&f_inf(a), HDouble)),
        ("f^2 h_inf = h_inf f", f2(&g(a, HInf)), g(&f_inf(a), HInf)),
    ];
    cases
        .into_iter()
        .filter(|(_, l, r)| l != r)
        .map(|(name, lhs, rhs)| Counterexample {
            identity: name.to_string(),
            input: a.clone(),
            lhs,
            rhs,
        })
        .collect()
}

pub fn verify_conjugacies(samples: usize, seed: u64, mode: Mode) -> ConjugacyReport {
    let fails = par::map_range(mode, samples, |i| {
        conjugacy_failures(&random_binseq(seed, i as u64))
    });
    ConjugacyReport {
        samples,
        seed,
        checks: 4 * samples,
        counterexamples: fails.into_iter().flatten().collect(),
    }
}

/// All dyadic sequences with index at most `max_ind`.
pub fn dyadics_up_to_index(max_ind: usize) -> Vec<BinSeq> {
    let mut out = vec![BinSeq::zero()];
    for len in 1..=max_ind + 1 {
        for bits in 0..(1u64 << (len - 1)) {
            let mut w: Vec<u8> = (0..len - 1).map(|i| ((bits >> i) & 1) as u8).collect();
            w.push(1);
            out.push(BinSeq::dyadic(&w));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub steps: u64,
    pub max_ind: usize,
    pub dyadics: usize,
    pub missing: Vec<BinSeq>,
    pub repeated: Vec<BinSeq>,
    pub table_mismatch: Vec<BinSeq>,
    pub index_mismatch: Vec<BinSeq>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty()
            && self.repeated.is_empty()
            && self.table_mismatch.is_empty()
            && self.index_mismatch.is_empty()
    }
}

/// Iterate f_inf from 0 and 1/2 in both directions and compare what is
/// visited against `classify_orbit` and the sign table.
pub fn orbit_partition_check(steps: u64, max_ind: usize, mode: Mode) -> PartitionReport {
    let walks: Vec<(OrbitBase, i64)> = vec![
        (OrbitBase::Zero, 1),
        (OrbitBase::Zero, -1),
        (OrbitBase::Half, 1),
        (OrbitBase::Half, -1),
    ];
    let visits = par::map_slice(mode, &walks, |&(base, dir)| {
        let mut seen = Vec::new();
        let mut x = base.seq();
        for k in 1..=steps as i64 {
            x = if dir > 0 { f_inf(&x) } else { f_inf_inv(&x) };
            if x.is_dyadic() && ind(&x).expect("dyadic") <= max_ind {
                seen.push((x.clone(), base, dir * k));
            }
        }
        seen
    });
    let mut hits: HashMap<BinSeq, Vec<(OrbitBase, i64)>> = HashMap::new();
    hits.entry(BinSeq::zero())
        .or_default()
        .push((OrbitBase::Zero, 0));
    hits.entry(OrbitBase::Half.seq())
        .or_default()
        .push((OrbitBase::Half, 0));
    for (x, b, n) in visits.into_iter().flatten() {
        hits.entry(x).or_default().push((b, n));
    }
    let all = dyadics_up_to_index(max_ind);
    let mut rep = PartitionReport {
        steps,
        max_ind,
        dyadics: all.len(),
        missing: Vec::new(),
        repeated: Vec::new(),
        table_mismatch: Vec::new(),
        index_mismatch: Vec::new(),
    };
    for a in all {
        let Some(h) = hits.get(&a) else {
            rep.missing.push(a);
            continue;
        };
        if h.len() != 1 {
            rep.repeated.push(a);
            continue;
        }
        let (b, n) = h[0];
        let c = classify_orbit(&a).expect("dyadic");
        if c.base != b || c.n != BigInt::from(n) {
            rep.index_mismatch.push(a.clone());
        }
        if n != 0 {
            let (tb, sgn) = table_row(&a).expect("dyadic");
            if tb != b || sgn as i64 != n.signum() {
                rep.table_mismatch.push(a);
            }
        }
    }
    rep
}

/// All canonical sequences whose preperiod and period lengths sum to at most `max_len`.
pub fn enumerate_canonical(max_len: usize) -> Vec<BinSeq> {
    let mut out = std::collections::HashSet::new();
    for lp in 0..max_len {
        for lq in 1..=max_len - lp {
            for bp in 0..(1u64 << lp) {
                let pre: Vec<u8> = (0..lp).map(|i| ((bp >> i) & 1) as u8).collect();
                for bq in 0..(1u64 << lq) {
                    let per: Vec<u8> = (0..lq).map(|i| ((bq >> i) & 1) as u8).collect();
                    if let Ok(s) = BinSeq::new(pre.clone(), per) {
                        if s.pre.len() == lp && s.per.len() == lq {
                            out.insert(s);
                        }
                    }
                }
            }
        }
    }
    let mut v: Vec<BinSeq> = out.into_iter().collect();
    v.sort();
    v
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub max_len: usize,
    pub sequences: usize,
    pub gaps: Vec<BinSeq>,
    pub injective: bool,
    pub inverse_roundtrip: bool,
    pub hits_gap: bool,
}

/// F_inf image structure on all canonical sequences of bounded size. Gaps are
/// the inputs where the inverse algorithm finds no preimage; every other input
/// is confirmed by mapping its preimage forward.
pub fn f_big_gaps(max_len: usize, mode: Mode) -> GapReport {
    let all = enumerate_canonical(max_len);
    let rows = par::map_slice(mode, &all, |b| {
        let fwd = f_big_raw(b).ok();
        let back = match f_big_inv(b) {
            Ok(p) => Some(f_big_raw(&p).ok().as_ref() == Some(b)),
            Err(_) => None,
        };
        (fwd, back)
    });
    let gaps: Vec<BinSeq> = all
        .iter()
        .zip(&rows)
        .filter(|(_, (_, back))| back.is_none())
        .map(|(b, _)| b.clone())
        .collect();
    let inverse_roundtrip = rows.iter().all(|(_, back)| back != &Some(false));
    let images: Vec<&BinSeq> = rows.iter().filter_map(|(f, _)| f.as_ref()).collect();
    let mut uniq = std::collections::HashSet::new();
    let injective = images.iter().all(|x| uniq.insert(*x));
    let hits_gap = images.iter().any(|x| gaps.contains(x));
    GapReport {
        max_len,
        sequences: all.len(),
        gaps,
        injective,
        inverse_roundtrip,
        hits_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> BinSeq {
        x.parse().unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(s("0101(01)"), s("(01)"));
        assert_eq!(s("1(00)"), s("1(0)"));
        assert_eq!(s("(01)").to_string(), "(01)");
        assert_eq!(s("11(0)").value(), q(3, 4));
        assert_eq!(s("(01)").value(), q(1, 3));
        assert!("(1)".parse::<BinSeq>().is_err());
        assert!("01(11)".parse::<BinSeq>().is_err());
        assert!("2(0)".parse::<BinSeq>().is_err());
        assert_eq!(BinSeq::from_rational(&q(2, 3)).unwrap(), s("(10)"));
    }

    #[test]
    fn map_examples() {
        assert_eq!(f_inf(&s("(0)")), s("11(0)"));
        assert_eq!(f_inf(&s("1(0)")), s("001(0)"));
        assert_eq!(f_big(&s("1(0)"), FZeroConvention::OneThird), s("(0)"));
        assert_eq!(f_big_inv(&s("(0)")).unwrap(), s("1(0)"));
        assert_eq!(f_big_inv(&s("(01)")), Err(BinSeqError::NoPreimage));
        assert_eq!(f_big_inv(&s("(10)")), Err(BinSeqError::NoPreimage));
        assert_eq!(f_big(&s("(0)"), FZeroConvention::OneThird), s("(01)"));
        assert_eq!(f_big(&s("(0)"), FZeroConvention::TwoThirds), s("(10)"));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(apply_generator(&s("01(0)"), Generator::R), s("11(0)"));
        assert_eq!(apply_generator(&s("1(0)"), Generator::HPrime), s("01(0)"));
        assert_eq!(apply_generator(&s("(0)"), Generator::HInf), s("01(0)"));
    }

    #[test]
    fn tm_and_ind() {
        assert_eq!((tm(&s("11(0)")).unwrap(), ind(&s("11(0)")).unwrap()), (0, 1));
        assert_eq!((tm(&s("1(0)")).unwrap(), ind(&s("1(0)")).unwrap()), (1, 0));
        assert_eq!(ind(&s("(0)")).unwrap(), 0);
        assert!(tm(&s("(01)")).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = classify_orbit(&s("11(0)")).unwrap();
        assert_eq!((c.base, c.n.clone()), (OrbitBase::Zero, BigInt::from(1)));
        let c = classify_orbit(&s("001(0)")).unwrap();
        assert_eq!((c.base, c.n.clone()), (OrbitBase::Half, BigInt::from(1)));
        let c = classify_orbit(&s("(0)")).unwrap();
        assert_eq!((c.base, c.n), (OrbitBase::Zero, BigInt::zero()));
    }

    #[test]
    fn discontinuities() {
        assert!(is_discontinuity(&s("(0)")));
        assert!(is_discontinuity(&s("11(0)")));
        assert!(is_discontinuity(&s("1101(0)")));
        assert!(!is_discontinuity(&s("(01)")));
        assert!(!is_discontinuity(&s("001(0)")));
    }

    #[test]
    fn conjugacy_small_cases() {
        assert!(conjugacy_failures(&s("(0)")).is_empty());
        assert!(conjugacy_failures(&s("1(0)")).is_empty());
        let r = verify_conjugacies(200, 7, Mode::Sequential);
        assert!(r.passed());
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(random_binseq(3, 17), random_binseq(3, 17));
    }
}
