//! 2x2 derivative matrices: trace classification of affine maps and the
//! genus-2 lattice computation in Q(sqrt 5).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfield::{NFElem, NumFieldError, NumberField};
use crate::par::{self, Mode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VeechError {
    #[error("determinant must have absolute value 1")]
    BadDeterminant,
    #[error("integer matrix must have determinant 1")]
    NotUnimodular,
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

/// [[a, b], [c, d]] over a number field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: NFElem,
    pub b: NFElem,
    pub c: NFElem,
    pub d: NFElem,
}

impl Mat2 {
    pub fn new(a: NFElem, b: NFElem, c: NFElem, d: NFElem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(f: &Arc<NumberField>) -> Self {
        let (o, z) = (NFElem::one(f), NFElem::zero(f));
        Mat2::new(o.clone(), z.clone(), z, o)
    }

    pub fn diag(x: NFElem, y: NFElem) -> Self {
        let z = NFElem::zero(x.field());
        Mat2::new(x, z.clone(), z, y)
    }

    pub fn from_ints(f: &Arc<NumberField>, e: [i64; 4]) -> Self {
        let m = |v| NFElem::from_int(f, v);
        Mat2::new(m(e[0]), m(e[1]), m(e[2]), m(e[3]))
    }

    pub fn det(&self) -> NFElem {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> NFElem {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn scale(&self, s: &NFElem) -> Mat2 {
        Mat2::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn inverse(&self) -> Result<Mat2, VeechError> {
        let det = self.det();
        if det.is_zero() {
            return Err(VeechError::Singular);
        }
        let inv = det.recip()?;
        Ok(Mat2::new(
            &self.d * &inv,
            -(&self.b * &inv),
            -(&self.c * &inv),
            &self.a * &inv,
        ))
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn entries(&self) -> [&NFElem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Entries as integers when all are rational integers.
    pub fn to_integers(&self) -> Option<[BigInt; 4]> {
        let mut out: [BigInt; 4] = Default::default();
        for (o, e) in out.iter_mut().zip(self.entries()) {
            let q = e.to_rational()?;
            if !q.is_integer() {
                return None;
            }
            *o = q.to_integer();
        }
        Some(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceClass {
    FiniteOrder,
    ParabolicCylinder,
    PseudoAnosov,
}

/// Classify by |Tr| against 2; requires |det| = 1.
pub fn trace_classify(m: &Mat2) -> Result<TraceClass, VeechError> {
    if m.det().abs() != NFElem::one(m.a.field()) {
        return Err(VeechError::BadDeterminant);
    }
    let t = m.trace().abs();
    let two = NFElem::from_int(m.a.field(), 2);
    Ok(match t.cmp(&two) {
        std::cmp::Ordering::Less => TraceClass::FiniteOrder,
        std::cmp::Ordering::Equal => TraceClass::ParabolicCylinder,
        std::cmp::Ordering::Greater => TraceClass::PseudoAnosov,
    })
}

/// Integer matrix (X, Y, Z, W) = [[X, Y], [Z, W]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMat2 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub w: i64,
}

impl IntMat2 {
    pub fn new(x: i64, y: i64, z: i64, w: i64) -> Self {
        IntMat2 { x, y, z, w }
    }

    pub fn det(&self) -> i64 {
        self.x * self.w - self.y * self.z
    }

    pub fn mul(&self, o: &IntMat2) -> IntMat2 {
        IntMat2::new(
            self.x * o.x + self.y * o.z,
            self.x * o.y + self.y * o.w,
            self.z * o.x + self.w * o.z,
            self.z * o.y + self.w * o.w,
        )
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inverse(&self) -> IntMat2 {
        IntMat2::new(self.w, -self.y, -self.z, self.x)
    }

    fn check(&self) -> Result<(), VeechError> {
        if self.det() != 1 {
            return Err(VeechError::NotUnimodular);
        }
        Ok(())
    }
}

pub fn golden_field() -> Arc<NumberField> {
    NumberField::get(2).expect("g = 2 is valid")
}

/// sqrt 5 = 2 alpha + 1 in Q(alpha_2).
pub fn sqrt5(f: &Arc<NumberField>) -> NFElem {
    &NFElem::alpha(f).scale(&BigRational::from_integer(BigInt::from(2))) + &NFElem::one(f)
}

/// The two lattice matrices [[1, -alpha], [alpha, 1]] and [[alpha, -1], [1, alpha]].
pub fn lattice_matrices() -> (Mat2, Mat2) {
    let f = golden_field();
    let a = NFElem::alpha(&f);
    let o = NFElem::one(&f);
    (
        Mat2::new(o.clone(), -&a, a.clone(), o.clone()),
        Mat2::new(a.clone(), -&o, o, a),
    )
}

/// M2^-1 M1 m M1^-1 M2 computed by matrix products in Q(sqrt 5).
pub fn conjugate_direct(m: &IntMat2) -> Result<Mat2, VeechError> {
    m.check()?;
    let f = golden_field();
    let (m1, m2) = lattice_matrices();
    let p = m2.inverse()?.mul(&m1);
    let q = m1.inverse()?.mul(&m2);
    let mm = Mat2::from_ints(&f, [m.x, m.y, m.z, m.w]);
    Ok(p.mul(&mm).mul(&q))
}

/// Closed form of the conjugated matrix, with its entries over Q.
pub fn conjugation_entries(m: &IntMat2) -> Result<Mat2, VeechError> {
    m.check()?;
    let f = golden_field();
    let IntMat2 { x, y, z, w } = *m;
    let five = BigInt::from(5);
    let e = |n: i64| NFElem::from_rational(&f, BigRational::new(BigInt::from(n), five.clone()));
    Ok(Mat2::new(
        e(4 * x + 2 * (y + z) + w),
        e(4 * y + 2 * (w - x) - z),
        e(4 * z + 2 * (w - x) - y),
        e(4 * w - 2 * (y + z) + x),
    ))
}

/// X + 3Y + 3Z + 4W = 0 mod 5.
pub fn in_intersection(m: &IntMat2) -> Result<bool, VeechError> {
    m.check()?;
    Ok((m.x + 3 * m.y + 3 * m.z + 4 * m.w).rem_euclid(5) == 0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SublatticeReport {
    pub m1_inv_sqrt5_m2: Mat2,
    pub expected: [i64; 4],
    pub det: NFElem,
    pub symmetric_ok: bool,
    pub scalar_ok: bool,
    pub scalar_is_inv_sqrt5: bool,
    pub passed: bool,
}

/// M1^-1 (sqrt5 M2) = [[2, -1], [1, 2]] of determinant 5, the symmetric
/// statement for M2^-1 (sqrt5 M1), and M1^-1 M2 = alpha/(2 - alpha) [[2, -1], [1, 2]].
pub fn sublattice_index5() -> Result<SublatticeReport, VeechError> {
    let f = golden_field();
    let (m1, m2) = lattice_matrices();
    let s5 = sqrt5(&f);
    let a = NFElem::alpha(&f);
    let expected = [2, -1, 1, 2];
    let target = Mat2::from_ints(&f, expected);
    let prod = m1.inverse()?.mul(&m2.scale(&s5));
    let det = prod.det();
    let other = m2.inverse()?.mul(&m1.scale(&s5));
    let symmetric_ok = other == target.transpose();
    let two = NFElem::from_int(&f, 2);
    let scalar = a.checked_div(&(&two - &a))?;
    let scalar_ok = m1.inverse()?.mul(&m2) == target.scale(&scalar);
    let scalar_is_inv_sqrt5 = &scalar * &s5 == NFElem::one(&f);
    let passed = prod == target
        && det == NFElem::from_int(&f, 5)
        && symmetric_ok
        && scalar_ok
        && scalar_is_inv_sqrt5;
    Ok(SublatticeReport {
        m1_inv_sqrt5_m2: prod,
        expected,
        det,
        symmetric_ok,
        scalar_ok,
        scalar_is_inv_sqrt5,
        passed,
    })
}

/// All determinant-1 integer matrices with entries in [-range, range].
pub fn unimodular_in_box(range: i64) -> Vec<IntMat2> {
    let mut out = Vec::new();
    for x in -range..=range {
        for y in -range..=range {
            for z in -range..=range {
                for w in -range..=range {
                    if x * w - y * z == 1 {
                        out.push(IntMat2::new(x, y, z, w));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub range: i64,
    pub candidates: usize,
    pub members: usize,
    pub disagreements: Vec<IntMat2>,
    pub formula_mismatches: Vec<IntMat2>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.formula_mismatches.is_empty()
    }
}

/// Compare the congruence criterion with integrality of the exact conjugate
/// for every candidate, and the closed form with direct conjugation.
pub fn sweep(range: i64, mode: Mode) -> SweepReport {
    let cands = unimodular_in_box(range);
    let rows = par::map_slice(mode, &cands, |m| {
        let direct = conjugate_direct(m).expect("det 1");
        let closed = conjugation_entries(m).expect("det 1");
        let integral = direct.to_integers().is_some();
        let crit = in_intersection(m).expect("det 1");
        (crit, crit == integral, direct == closed)
    });
    let mut rep = SweepReport {
        range,
        candidates: cands.len(),
        members: 0,
        disagreements: Vec::new(),
        formula_mismatches: Vec::new(),
    };
    for (m, (crit, agree, same)) in cands.iter().zip(rows) {
        rep.members += crit as usize;
        if !agree {
            rep.disagreements.push(*m);
        }
        if !same {
            rep.formula_mismatches.push(*m);
        }
    }
    rep
}

/// Entrywise rational value of a matrix lying over Q, for reporting.
pub fn rational_entries(m: &Mat2) -> Option<[BigRational; 4]> {
    let mut out: [BigRational; 4] = Default::default();
    for (o, e) in out.iter_mut().zip(m.entries()) {
        *o = e.to_rational()?;
    }
    Some(out)
}

/// diag(1/alpha_g, alpha_g).
pub fn renormalization_matrix(g: u32) -> Result<Mat2, VeechError> {
    let f = NumberField::get(g)?;
    let a = NFElem::alpha(&f);
    Ok(Mat2::diag(a.recip()?, a))
}

/// diag(2, 1/2) over Q.
pub fn limit_matrix() -> Mat2 {
    let f = NumberField::get(1).expect("g = 1 is valid");
    Mat2::diag(
        NFElem::from_int(&f, 2),
        NFElem::from_rational(&f, BigRational::new(BigInt::one(), BigInt::from(2))),
    )
}

/// Quarter turn [[0, -1], [1, 0]] over Q.
pub fn quarter_turn() -> Mat2 {
    let f = NumberField::get(1).expect("g = 1 is valid");
    Mat2::from_ints(&f, [0, -1, 1, 0])
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let f = NumberField::get(1).unwrap();
        assert_eq!(
            trace_classify(&Mat2::identity(&f)).unwrap(),
            TraceClass::ParabolicCylinder
        );
        assert_eq!(
            trace_classify(&renormalization_matrix(3).unwrap()).unwrap(),
            TraceClass::PseudoAnosov
        );
        assert_eq!(
            trace_classify(&limit_matrix()).unwrap(),
            TraceClass::PseudoAnosov
        );
        assert_eq!(
            trace_classify(&quarter_turn()).unwrap(),
            TraceClass::FiniteOrder
        );
        assert!(trace_classify(&Mat2::from_ints(&f, [2, 0, 0, 1])).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let f = golden_field();
        let id = IntMat2::new(1, 0, 0, 1);
        assert_eq!(conjugation_entries(&id).unwrap(), Mat2::identity(&f));
        assert_eq!(conjugate_direct(&id).unwrap(), Mat2::identity(&f));
        let t5 = IntMat2::new(1, 5, 0, 1);
        assert!(conjugation_entries(&t5).unwrap().to_integers().is_some());
        assert!(in_intersection(&t5).unwrap());
        let t1 = IntMat2::new(1, 1, 0, 1);
        assert!(conjugate_direct(&t1).unwrap().to_integers().is_none());
        assert!(!in_intersection(&t1).unwrap());
        assert!(in_intersection(&IntMat2::new(2, 0, 0, 1)).is_err());
    }

    #[test]
    fn sublattice() {
        let r = sublattice_index5().unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn small_sweep() {
        let r = sweep(3, Mode::Sequential);
        assert!(r.passed(), "{r:?}");
        assert!(r.members > 0);
    }
}
