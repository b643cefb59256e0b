//! Exact arithmetic in Q(alpha_g), where alpha_g is the unique positive root of
//! x^g + x^(g-1) + ... + x - 1.
//!
//! Elements are stored as rational coefficient vectors in the power basis
//! 1, alpha, ..., alpha^(g-1). Signs are decided by evaluating on a rational
//! interval around the root and bisecting until the answer is unambiguous.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("genus must be at least 1, got {0}")]
    BadGenus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
    #[error("could not parse rational literal {0:?}")]
    BadRational(String),
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational, NumFieldError> {
    let s = s.trim();
    let bad = || NumFieldError::BadRational(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn dyadic(num: BigInt, log2_den: u32) -> BigRational {
    BigRational::new(num, BigInt::one() << log2_den)
}

/// Coefficients of x^g + ... + x - 1, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinPoly {
    pub g: u32,
    pub coeffs: Vec<i64>,
}

impl MinPoly {
    pub fn new(g: u32) -> Result<Self, NumFieldError> {
        if g == 0 {
            return Err(NumFieldError::BadGenus(g));
        }
        let mut coeffs = vec![1i64; g as usize + 1];
        coeffs[0] = -1;
        Ok(MinPoly { g, coeffs })
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat(*c);
        }
        acc
    }
}

/// A closed rational interval [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// One bisection step for the increasing function `minpoly` on x > 0.
    fn bisect(&mut self, p: &MinPoly) {
        let mid = (&self.lo + &self.hi) / rat(2);
        let v = p.eval(&mid);
        if v.is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
        } else if v.is_positive() {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }
}

/// Bisect [1/2, 1] down to width at most `width`. The polynomial is strictly
/// increasing on the positive axis, is negative at 1/2 and non-negative at 1.
pub fn alpha_root(g: u32, width: &BigRational) -> Result<RootInterval, NumFieldError> {
    let p = MinPoly::new(g)?;
    let mut iv = RootInterval {
        lo: BigRational::new(BigInt::one(), BigInt::from(2)),
        hi: BigRational::one(),
    };
    if g == 1 {
        return Ok(RootInterval {
            lo: BigRational::one(),
            hi: BigRational::one(),
        });
    }
    while &iv.width() > width {
        iv.bisect(&p);
    }
    Ok(iv)
}

/// Exact check of 1/2 + 2^-(g+2) < alpha_g < 1/2 + 2^-(g+1).
pub fn check_half_bound(g: u32) -> Result<bool, NumFieldError> {
    let p = MinPoly::new(g)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let lo = &half + dyadic(BigInt::one(), g + 2);
    let hi = &half + dyadic(BigInt::one(), g + 1);
    Ok(p.eval(&lo).is_negative() && p.eval(&hi).is_positive())
}

/// The field Q(alpha_g) together with cached data used for sign decisions.
#[derive(Debug)]
pub struct NumberField {
    g: u32,
    minpoly: MinPoly,
    root: RootInterval,
    lo_pows: Vec<BigRational>,
    hi_pows: Vec<BigRational>,
}

fn powers(x: &BigRational, n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n);
    let mut acc = BigRational::one();
    for _ in 0..n {
        out.push(acc.clone());
        acc = &acc * x;
    }
    out
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<NumberField>>>> = OnceLock::new();

impl NumberField {
    /// Shared handle to Q(alpha_g). Fields are built once per g.
    pub fn get(g: u32) -> Result<Arc<NumberField>, NumFieldError> {
        if g == 0 {
            return Err(NumFieldError::BadGenus(g));
        }
        let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = map.lock().expect("field cache poisoned");
        if let Some(f) = map.get(&g) {
            return Ok(f.clone());
        }
        let minpoly = MinPoly::new(g)?;
        let width = dyadic(BigInt::one(), 2 * g + 64);
        let root = alpha_root(g, &width)?;
        let n = g as usize;
        let f = Arc::new(NumberField {
            g,
            lo_pows: powers(&root.lo, n),
            hi_pows: powers(&root.hi, n),
            minpoly,
            root,
        });
        map.insert(g, f.clone());
        Ok(f)
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.g as usize
    }

    pub fn minpoly(&self) -> &MinPoly {
        &self.minpoly
    }

    pub fn root_interval(&self) -> &RootInterval {
        &self.root
    }
}

/// Lower and upper bounds of sum c_i x^i over x in [lo, hi], 0 < lo.
/// Terms with positive coefficient are increasing in x, negative ones decreasing.
fn eval_bounds(
    c: &[BigRational],
    lo_pows: &[BigRational],
    hi_pows: &[BigRational],
) -> (BigRational, BigRational) {
    let mut low = BigRational::zero();
    let mut high = BigRational::zero();
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let a = ci * &lo_pows[i];
        let b = ci * &hi_pows[i];
        if ci.is_positive() {
            low += a;
            high += b;
        } else {
            low += b;
            high += a;
        }
    }
    (low, high)
}

/// An element of Q(alpha_g).
#[derive(Clone)]
pub struct NFElem {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

impl NFElem {
    pub fn from_coeffs(
        field: &Arc<NumberField>,
        coeffs: Vec<BigRational>,
    ) -> Result<Self, NumFieldError> {
        if coeffs.len() != field.degree() {
            return Err(NumFieldError::BadLength {
                got: coeffs.len(),
                expected: field.degree(),
            });
        }
        Ok(NFElem {
            field: field.clone(),
            coeffs,
        })
    }

    /// Reduce an arbitrary-length polynomial in alpha.
    pub fn from_poly(field: &Arc<NumberField>, mut poly: Vec<BigRational>) -> Self {
        let g = field.degree();
        // alpha^g = 1 - alpha - ... - alpha^(g-1)
        while poly.len() > g {
            let top = poly.pop().expect("non-empty");
            if top.is_zero() {
                continue;
            }
            let base = poly.len() - g;
            poly[base] += &top;
            for j in 1..g {
                poly[base + j] -= &top;
            }
        }
        poly.resize(g, BigRational::zero());
        NFElem {
            field: field.clone(),
            coeffs: poly,
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        let mut c = vec![BigRational::zero(); field.degree()];
        c[0] = q;
        NFElem {
            field: field.clone(),
            coeffs: c,
        }
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// alpha itself. In the degenerate field g = 1 this is 1.
    pub fn alpha(field: &Arc<NumberField>) -> Self {
        Self::alpha_pow(field, 1)
    }

    pub fn alpha_pow(field: &Arc<NumberField>, k: usize) -> Self {
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        Self::from_poly(field, p)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn g(&self) -> u32 {
        self.field.g
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &NFElem) {
        assert_eq!(
            self.field.g, other.field.g,
            "mixing elements of different fields"
        );
    }

    /// -1, 0 or 1. Exact: a nonzero element never vanishes at alpha because the
    /// defining polynomial is irreducible of degree g.
    pub fn sign(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.to_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let f = &self.field;
        let (l, h) = eval_bounds(&self.coeffs, &f.lo_pows, &f.hi_pows);
        if l.is_positive() {
            return 1;
        }
        if h.is_negative() {
            return -1;
        }
        let mut iv = f.root.clone();
        loop {
            iv.bisect(&f.minpoly);
            let n = f.degree();
            let (l, h) = eval_bounds(&self.coeffs, &powers(&iv.lo, n), &powers(&iv.hi, n));
            if l.is_positive() {
                return 1;
            }
            if h.is_negative() {
                return -1;
            }
        }
    }

    /// A rational interval containing the value, of width at most `width`
    /// when possible at the cached precision, refined further otherwise.
    pub fn interval(&self, width: &BigRational) -> (BigRational, BigRational) {
        let f = &self.field;
        let n = f.degree();
        let mut iv = f.root.clone();
        loop {
            let (l, h) = eval_bounds(&self.coeffs, &powers(&iv.lo, n), &powers(&iv.hi, n));
            if &(&h - &l) <= width || iv.width().is_zero() {
                return (l, h);
            }
            iv.bisect(&f.minpoly);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let f = &self.field;
        let (l, h) = eval_bounds(&self.coeffs, &f.lo_pows, &f.hi_pows);
        let mid = (l + h) / rat(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> NFElem {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[x].
    pub fn recip(&self) -> Result<NFElem, NumFieldError> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        let m: Vec<BigRational> = self.field.minpoly.coeffs.iter().map(|c| rat(*c)).collect();
        let a = trim(self.coeffs.clone());
        // invariant: r_i = s_i * a (mod m)
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant
        let c = r0[0].clone();
        let inv: Vec<BigRational> = s0.into_iter().map(|x| x / &c).collect();
        Ok(NFElem::from_poly(&self.field, inv))
    }

    pub fn checked_div(&self, other: &NFElem) -> Result<NFElem, NumFieldError> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, k: u32) -> NFElem {
        let mut acc = NFElem::one(&self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> NFElem {
        NFElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn half(&self) -> NFElem {
        self.scale(&BigRational::new(BigInt::one(), BigInt::from(2)))
    }

    pub fn min(&self, other: &NFElem) -> NFElem {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &NFElem) -> NFElem {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("non-empty") / &lead;
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[shift + j] -= t;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

impl PartialEq for NFElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.g == other.field.g && self.coeffs == other.coeffs
    }
}

impl Eq for NFElem {}

impl Hash for NFElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.g.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for NFElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NFElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Debug for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = rational_to_string(c);
            terms.push(match i {
                0 => cs,
                1 => format!("({cs})*a"),
                _ => format!("({cs})*a^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl<'a> Neg for &'a NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        NFElem {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for NFElem {
    type Output = NFElem;
    fn neg(self) -> NFElem {
        -&self
    }
}

impl<'a> Add<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn add(self, rhs: &NFElem) -> NFElem {
        self.same_field(rhs);
        NFElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn sub(self, rhs: &NFElem) -> NFElem {
        self.same_field(rhs);
        NFElem {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a NFElem> for &'a NFElem {
    type Output = NFElem;
    fn mul(self, rhs: &NFElem) -> NFElem {
        self.same_field(rhs);
        let prod = poly_mul(&self.coeffs, &rhs.coeffs);
        NFElem::from_poly(&self.field, prod)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<NFElem> for NFElem {
            type Output = NFElem;
            fn $m(self, rhs: NFElem) -> NFElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a NFElem> for NFElem {
            type Output = NFElem;
            fn $m(self, rhs: &NFElem) -> NFElem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<NFElem> for &'a NFElem {
            type Output = NFElem;
            fn $m(self, rhs: NFElem) -> NFElem {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[derive(Serialize, Deserialize)]
struct NFElemRepr {
    g: u32,
    coeffs: Vec<String>,
}

impl Serialize for NFElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        NFElemRepr {
            g: self.field.g,
            coeffs: self.coeffs.iter().map(rational_to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NFElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = NFElemRepr::deserialize(d)?;
        let field = NumberField::get(repr.g).map_err(D::Error::custom)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        NFElem::from_coeffs(&field, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn alpha_satisfies_minpoly() {
        for g in 1..=9 {
            let f = NumberField::get(g).unwrap();
            let a = NFElem::alpha(&f);
            let mut s = NFElem::zero(&f);
            for k in 1..=g {
                s = &s + &a.pow(k);
            }
            assert_eq!(s, NFElem::one(&f), "g={g}");
        }
    }

    #[test]
    fn golden_ratio_case() {
        let f = NumberField::get(2).unwrap();
        let a = NFElem::alpha(&f);
        // alpha^2 = 1 - alpha
        assert_eq!(a.pow(2), &NFElem::one(&f) - &a);
        let v = a.to_f64();
        assert!((v - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_roundtrip() {
        let f = NumberField::get(5).unwrap();
        let x = NFElem::from_coeffs(&f, vec![q(1, 2), q(-3, 1), q(0, 1), q(7, 5), q(1, 9)])
            .unwrap();
        let y = x.recip().unwrap();
        assert_eq!(&x * &y, NFElem::one(&f));
        assert!(NFElem::zero(&f).recip().is_err());
    }

    #[test]
    fn sign_of_tiny_elements() {
        let f = NumberField::get(12).unwrap();
        let a = NFElem::alpha(&f);
        let tiny = a.pow(60);
        assert_eq!(tiny.sign(), 1);
        assert_eq!((-&tiny).sign(), -1);
        let half = NFElem::from_rational(&f, q(1, 2));
        assert!(a > half);
    }

    #[test]
    fn half_bound_small() {
        for g in 2..=10 {
            assert!(check_half_bound(g).unwrap(), "g={g}");
        }
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_to_string(&q(6, 4)), "3/2");
    }

    #[test]
    fn serde_roundtrip() {
        let f = NumberField::get(4).unwrap();
        let x = NFElem::alpha_pow(&f, 7).scale(&q(-2, 3));
        let s = serde_json::to_string(&x).unwrap();
        let back: NFElem = serde_json::from_str(&s).unwrap();
        assert_eq!(x, back);
    }
}
