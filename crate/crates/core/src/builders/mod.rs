//! Constructions of the family: slit staircases, the 4g-triangle
//! presentation, the degenerate genera 1 and 2, and finite truncations of the
//! infinite-genus limit.

pub mod columns;
pub mod limit;
pub mod triangles;

use serde::Serialize;
use thiserror::Error;

use crate::iet::{build_f_g, build_f_g_with, build_h_g, IetError, IntervalExchange};
use crate::numfield::{NFElem, NumFieldError, NumberField};
use crate::surface::trace::first_return_iet;
use crate::surface::{SurfaceComplex, SurfaceError};
use crate::veech::{self, Mat2, TraceClass};

pub use columns::{base_section, build_columns, corner_at, ColumnSpec, VSeg};
pub use limit::{
    build_limit_truncation, in_guarantee_zone, is_power_of_two, limit_vertex, midline_point,
    truncation_is_connected, truncation_spec, vertex_convergence_check, vertical_connections,
    LimitVertex, TruncationSpec, VertexConvergenceReport, VerticalConnection,
};
pub use triangles::{
    build_triangulation, cone_saddle_vectors, presentations_agree, triangulation_vertices, witness_vector,
    TriangulationVertices,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("genus {0} is not supported by this construction")]
    Genus(u32),
    #[error("truncation depth must be at least 1")]
    Depth,
    #[error(transparent)]
    Field(#[from] NumFieldError),
    #[error(transparent)]
    Iet(#[from] IetError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Veech(#[from] veech::VeechError),
}

/// Measurements of the slit staircase of genus g.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StaircaseSpec {
    pub g: u32,
    /// Step widths alpha, ..., alpha^g.
    pub widths: Vec<NFElem>,
    /// Height of each step, left to right.
    pub heights: Vec<NFElem>,
    /// Drops between consecutive steps, then the height of the last step.
    pub drops: Vec<NFElem>,
    pub slit_abscissas: Vec<NFElem>,
    pub slit_lengths: Vec<NFElem>,
}

fn field(g: u32) -> Result<std::sync::Arc<NumberField>, BuildError> {
    Ok(NumberField::get(g)?)
}

/// |sigma_i| = alpha^(i+1) / (1 - alpha) for i < g and (2 alpha - 1)/(1 - alpha)
/// for i = g. For g = 2 these are the heights 1 and alpha.
pub fn slit_lengths(g: u32) -> Result<Vec<NFElem>, BuildError> {
    if g < 2 {
        return Err(BuildError::Genus(g));
    }
    let f = field(g)?;
    let one = NFElem::one(&f);
    let a = NFElem::alpha(&f);
    let den = (&one - &a).recip()?;
    let mut out: Vec<NFElem> = (1..g as usize)
        .map(|i| &NFElem::alpha_pow(&f, i + 1) * &den)
        .collect();
    out.push(&(&(&a + &a) - &one) * &den);
    Ok(out)
}

/// Slit feet x_1, ..., x_g: the images under f_g of the block left
/// endpoints, with sigma_i rising from f_g(s_(g-i)). This is the labelling
/// for which h_g(x_(i+1)) = x_i and h_g(x_1) = 0, i.e. psi_g carries sigma_i
/// onto sigma_(i+1).
pub fn slit_abscissas(g: u32) -> Result<Vec<NFElem>, BuildError> {
    if g < 2 {
        return Err(BuildError::Genus(g));
    }
    let f = field(g)?;
    let fg = build_f_g(g)?;
    let s = crate::iet::block_ends(&f);
    s[..g as usize]
        .iter()
        .rev()
        .map(|x| Ok(fg.apply(x)?))
        .collect()
}

/// Residue of the condition alpha (1 + |sigma_g|) = (1 - alpha) + |sigma_g|.
pub fn condition_residue(g: u32) -> Result<NFElem, BuildError> {
    let f = field(g)?;
    let one = NFElem::one(&f);
    let a = NFElem::alpha(&f);
    let sg = slit_lengths(g)?.pop().expect("g >= 2");
    Ok(&(&a * &(&one + &sg)) - &(&(&one - &a) + &sg))
}

pub fn staircase_spec(g: u32) -> Result<StaircaseSpec, BuildError> {
    let f = field(g)?;
    let gu = g as usize;
    let one = NFElem::one(&f);
    let widths: Vec<NFElem> = (1..=gu).map(|k| NFElem::alpha_pow(&f, k)).collect();
    let mut heights = vec![one.clone()];
    for k in 2..=gu {
        let prev = heights[k - 2].clone();
        heights.push(&prev - &NFElem::alpha_pow(&f, gu - k + 2));
    }
    let mut drops: Vec<NFElem> = (1..gu).map(|k| &heights[k - 1] - &heights[k]).collect();
    drops.push(heights[gu - 1].clone());
    Ok(StaircaseSpec {
        g,
        widths,
        heights,
        drops,
        slit_abscissas: slit_abscissas(g)?,
        slit_lengths: slit_lengths(g)?,
    })
}

fn unit_torus_spec() -> Result<ColumnSpec, BuildError> {
    let f = field(1)?;
    let (zero, one) = (NFElem::zero(&f), NFElem::one(&f));
    Ok(ColumnSpec {
        field: f.clone(),
        cuts: vec![zero.clone(), one.clone()],
        tops: vec![one.clone()],
        slits: vec![],
        rules: vec![(
            VSeg::new(zero.clone(), zero.clone(), one.clone(), true),
            VSeg::new(one.clone(), zero, one.clone(), false),
        )],
        top_map: build_f_g_with(1, true)?,
    })
}

/// Column description of the slit staircase of genus g >= 2.
pub fn staircase_columns(g: u32) -> Result<ColumnSpec, BuildError> {
    let f = field(g)?;
    let sp = staircase_spec(g)?;
    let gu = g as usize;
    let zero = NFElem::zero(&f);
    let one = NFElem::one(&f);
    let a = NFElem::alpha(&f);
    let s = crate::iet::block_ends(&f);
    let x = &sp.slit_abscissas;
    let len = &sp.slit_lengths;
    let y = &sp.heights;
    let mut cuts: Vec<NFElem> = s.iter().chain(x.iter()).cloned().collect();
    cuts.sort();
    cuts.dedup();
    let tops = cuts[..cuts.len() - 1]
        .iter()
        .map(|c| {
            let k = s.partition_point(|b| b <= c);
            y[k - 1].clone()
        })
        .collect();
    let v = |x: &NFElem, lo: &NFElem, hi: &NFElem, r: bool| VSeg::new(x.clone(), lo.clone(), hi.clone(), r);
    let one_minus_a = &one - &a;
    let mut rules = vec![
        (v(&zero, &zero, &a, true), v(&one, &zero, &a, false)),
        (v(&zero, &a, &one, true), v(&x[0], &zero, &one_minus_a, false)),
        (v(&x[0], &one_minus_a, &len[0], false), v(&x[gu - 1], &zero, &len[gu - 1], true)),
    ];
    for i in 2..=gu {
        let k = gu - i + 1;
        rules.push((
            v(&s[k], &y[k], &y[k - 1], false),
            v(&x[i - 2], &zero, &NFElem::alpha_pow(&f, i), true),
        ));
    }
    for i in 1..gu {
        rules.push((
            v(&x[i - 1], &NFElem::alpha_pow(&f, i + 1), &len[i - 1], true),
            v(&x[i], &zero, &len[i], false),
        ));
    }
    Ok(ColumnSpec {
        field: f.clone(),
        cuts,
        tops,
        slits: x.iter().cloned().zip(len.iter().cloned()).collect(),
        rules,
        top_map: build_f_g(g)?,
    })
}

/// The staircase surface of genus g: the unit torus for g = 1, the pair of
/// tori for g = 2, the slit staircase for g >= 3.
pub fn build_staircase(g: u32) -> Result<SurfaceComplex, BuildError> {
    let spec = match g {
        0 => return Err(BuildError::Genus(0)),
        1 => unit_torus_spec()?,
        _ => staircase_columns(g)?,
    };
    Ok(build_columns(&spec)?)
}

/// Vertical first return to the base of the staircase.
pub fn staircase_return_map(s: &SurfaceComplex) -> Result<IntervalExchange, BuildError> {
    let sec = base_section(s)?;
    Ok(first_return_iet(s, &sec)?)
}

/// Derivative data of an affine self-map of a surface in the family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineMapSpec {
    pub name: String,
    pub derivative: Mat2,
    /// Whether the map reverses orientation (derivative of negative determinant).
    pub reverses_orientation: bool,
    pub note: String,
}

impl AffineMapSpec {
    /// Classify the orientation-preserving part by the trace of the derivative.
    pub fn classify(&self) -> Result<TraceClass, BuildError> {
        Ok(veech::trace_classify(&self.derivative)?)
    }
}

pub fn psi_spec(g: u32) -> Result<AffineMapSpec, BuildError> {
    Ok(AffineMapSpec {
        name: format!("psi_{g}"),
        derivative: veech::renormalization_matrix(g)?,
        reverses_orientation: false,
        note: "maps slit i to slit i+1 and contracts verticals by alpha".into(),
    })
}

pub fn rho_spec(g: u32) -> Result<AffineMapSpec, BuildError> {
    let f = field(g)?;
    Ok(AffineMapSpec {
        name: format!("rho_{g}"),
        derivative: Mat2::from_ints(&f, [1, 0, 0, -1]),
        reverses_orientation: true,
        note: "reflection in the horizontal axis exchanging T_i and T'_i".into(),
    })
}

pub fn psi_inf_spec() -> AffineMapSpec {
    AffineMapSpec {
        name: "psi_inf".into(),
        derivative: veech::limit_matrix(),
        reverses_orientation: false,
        note: "expansion constant 2 on the limit surface".into(),
    }
}

pub fn rho_inf_spec() -> Result<AffineMapSpec, BuildError> {
    let f = field(1)?;
    Ok(AffineMapSpec {
        name: "rho_inf".into(),
        derivative: Mat2::from_ints(&f, [1, 0, 0, -1]),
        reverses_orientation: true,
        note: "glide reflection with translation length 1/2".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub g: u32,
    pub conjugacy_exact: bool,
    pub scaling_exact: bool,
    pub condition_exact: bool,
    pub derivative_class: TraceClass,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.conjugacy_exact
            && self.scaling_exact
            && self.condition_exact
            && self.derivative_class == TraceClass::PseudoAnosov
    }
}

/// Check f_g = h_g^-1 o (first return of f_g to [0, alpha)) o h_g, the slit
/// scaling |sigma_(i+1)| = alpha |sigma_i| and the condition equation.
pub fn verify_psi(g: u32) -> Result<PsiReport, BuildError> {
    let f = field(g)?;
    let fg = build_f_g(g)?;
    let h = build_h_g(g)?;
    let a = NFElem::alpha(&f);
    let ret = fg.first_return(&a)?;
    let conj = ret.conjugate(&h.inverse()?)?;
    let len = slit_lengths(g)?;
    let scaling_exact = len.windows(2).all(|w| w[1] == &a * &w[0]);
    Ok(PsiReport {
        g,
        conjugacy_exact: conj.equal(&fg),
        scaling_exact,
        condition_exact: condition_residue(g)?.is_zero(),
        derivative_class: psi_spec(g)?.classify()?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoReport {
    pub g: u32,
    pub r_conjugacy_exact: bool,
    pub mirror_exact: bool,
}

impl RhoReport {
    pub fn passed(&self) -> bool {
        self.r_conjugacy_exact && self.mirror_exact
    }
}

/// Check r o f_g o r = f_g^-1 and that the primed triangles are the mirror
/// images of the unprimed ones.
pub fn verify_rho(g: u32) -> Result<RhoReport, BuildError> {
    let f = field(g)?;
    let fg = build_f_g(g)?;
    let r = crate::iet::half_swap(&f);
    let lhs = r.compose(&fg)?.compose(&r)?;
    let tri = build_triangulation(g)?;
    let n = 2 * g as usize;
    let mirror_exact = tri.num_triangles() == 2 * n
        && (0..n).all(|t| {
            let mut a: Vec<_> = (0..3)
                .map(|k| {
                    let p = tri.vertex(t, k);
                    (p.x.clone(), -&p.y)
                })
                .collect();
            let mut b: Vec<_> = (0..3)
                .map(|k| {
                    let p = tri.vertex(t + n, k);
                    (p.x.clone(), p.y.clone())
                })
                .collect();
            a.sort();
            b.sort();
            a == b
        });
    Ok(RhoReport {
        g,
        r_conjugacy_exact: lhs.equal(&fg.inverse()?),
        mirror_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slit_lengths_satisfy_condition() {
        for g in 3..=8 {
            assert!(condition_residue(g).unwrap().is_zero());
            let l = slit_lengths(g).unwrap();
            let f = NumberField::get(g).unwrap();
            let a = NFElem::alpha(&f);
            let one = NFElem::one(&f);
            // |sigma_1| = alpha^2 / (1 - alpha)
            assert_eq!(&l[0] * &(&one - &a), &a * &a);
        }
    }

    #[test]
    fn psi_moves_each_slit_to_the_next() {
        for g in 2..=8 {
            let h = build_h_g(g).unwrap();
            let x = slit_abscissas(g).unwrap();
            assert!(h.apply(&x[0]).unwrap().is_zero());
            for i in 1..x.len() {
                assert_eq!(h.apply(&x[i]).unwrap(), x[i - 1]);
            }
        }
    }

    #[test]
    fn spec_heights_and_widths() {
        let sp = staircase_spec(5).unwrap();
        let f = NumberField::get(5).unwrap();
        let w = sp.widths.iter().fold(NFElem::zero(&f), |acc, x| &acc + x);
        assert_eq!(w, NFElem::one(&f));
        assert_eq!(sp.heights[4], NFElem::alpha(&f));
        let d = sp.drops.iter().fold(NFElem::zero(&f), |acc, x| &acc + x);
        assert_eq!(d, NFElem::one(&f));
    }

    #[test]
    fn degenerate_genera() {
        let t = build_staircase(1).unwrap();
        let top = t.topology().unwrap();
        assert_eq!(top.genus, Some(1));
        assert_eq!(t.area(), NFElem::one(t.field()));
        let two = build_staircase(2).unwrap().topology().unwrap();
        assert_eq!(two.components.len(), 2);
        assert!(two.components.iter().all(|c| c.genus == 1));
    }

    #[test]
    fn staircase_topology_and_return_map() {
        for g in 3..=5u32 {
            let s = build_staircase(g).unwrap();
            let top = s.topology().unwrap();
            assert_eq!(top.genus, Some(g as i64));
            let mut w: Vec<usize> = s.cone_windings().unwrap().into_iter().filter(|&w| w > 1).collect();
            w.sort();
            assert_eq!(w, vec![g as usize, g as usize]);
            let fg = build_f_g(g).unwrap();
            assert!(staircase_return_map(&s).unwrap().equal(&fg), "g={g}");
        }
    }

    #[test]
    fn psi_and_rho_reports_pass() {
        for g in 3..=5 {
            assert!(verify_psi(g).unwrap().passed());
            assert!(verify_rho(g).unwrap().passed());
        }
    }
}
