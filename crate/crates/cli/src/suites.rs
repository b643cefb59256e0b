//! Verification suites behind `aysurf verify`.

use ay_core::builders::{
    build_staircase, build_triangulation, slit_abscissas, staircase_return_map, verify_psi, verify_rho,
};
use ay_core::iet::{build_f_g_with, half_swap};
use ay_core::numfield::{alpha_root, check_half_bound, NFElem, NumberField};
use ay_core::par::{self, Mode};
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{json, Value};

pub const SUITES: [&str; 5] = ["bounds", "iet", "psi", "rho", "surface"];

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// None when the check does not apply at this genus.
    pub passed: Option<bool>,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: Some(passed),
            detail: detail.into(),
        }
    }

    fn skip(name: &str, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: None,
            detail: detail.into(),
        }
    }

    fn from_result<E: std::fmt::Display>(name: &str, r: Result<(bool, String), E>) -> Self {
        match r {
            Ok((ok, d)) => Check::new(name, ok, d),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }

    fn to_json(&self) -> Value {
        let status = match self.passed {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "skip",
        };
        json!({ "name": self.name, "status": status, "detail": self.detail })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub genus: u32,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed != Some(false))
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.passed == Some(false))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "genus": self.genus,
            "passed": self.passed(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Run one named suite, or all of them (sorted by name) for "all".
pub fn run(suite: &str, g: u32, mode: Mode) -> Vec<SuiteReport> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut out = par::map_slice(mode, &names, |name| run_one(name, g));
    out.sort_by(|a, b| a.suite.cmp(&b.suite));
    out
}

fn run_one(suite: &str, g: u32) -> SuiteReport {
    let checks = match suite {
        "bounds" => bounds(g),
        "iet" => iet(g),
        "psi" => psi(g),
        "rho" => rho(g),
        "surface" => surface(g),
        other => vec![Check::new("suite", false, format!("unknown suite {other}"))],
    };
    SuiteReport {
        suite: suite.to_string(),
        genus: g,
        checks,
    }
}

fn bounds(g: u32) -> Vec<Check> {
    if g < 2 {
        return vec![Check::skip("half_bound", "alpha_1 = 1, no bound to check")];
    }
    let width = BigRational::new(1.into(), num_bigint_pow2(64));
    vec![
        Check::from_result(
            "half_bound",
            check_half_bound(g).map(|ok| (ok, format!("2^-{} < alpha - 1/2 < 2^-{}", g + 2, g + 1))),
        ),
        Check::from_result(
            "root_isolation",
            alpha_root(g, &width).and_then(|iv| {
                let f = NumberField::get(g)?;
                let p = f.minpoly();
                let ok = p.eval(&iv.lo).is_negative() != p.eval(&iv.hi).is_negative() || iv.lo == iv.hi;
                Ok((ok, format!("alpha in [{:.12}, {:.12}]", to_f64(&iv.lo), to_f64(&iv.hi))))
            }),
        ),
    ]
}

fn iet(g: u32) -> Vec<Check> {
    let fg = match build_f_g_with(g, g == 1) {
        Ok(f) => f,
        Err(e) => return vec![Check::new("build_f_g", false, e.to_string())],
    };
    let expected = if g == 1 { 1 } else { 2 * g as usize + 1 };
    let mut checks = vec![
        Check::new("bijection", fg.is_bijection(), "images tile [0, 1)"),
        Check::new(
            "piece_count",
            fg.pieces.len() == expected,
            format!("{} pieces, expected {expected}", fg.pieces.len()),
        ),
        Check::from_result(
            "inverse",
            fg.inverse()
                .and_then(|inv| inv.compose(&fg))
                .map(|id| (id.equal(&ay_core::iet::IntervalExchange::identity(fg.domain_length.clone())), "f^-1 f = id".into())),
        ),
        Check::from_result(
            "reversal",
            (|| {
                let r = half_swap(fg.field());
                let lhs = r.compose(&fg)?.compose(&r)?;
                Ok::<_, ay_core::iet::IetError>((lhs.equal(&fg.inverse()?), "r f r = f^-1".to_string()))
            })(),
        ),
    ];
    if g == 2 {
        checks.push(Check::from_result(
            "reducible",
            fg.invariant_components().map(|c| (c.len() > 1, format!("{} invariant components", c.len()))),
        ));
    }
    checks
}

fn psi(g: u32) -> Vec<Check> {
    if g < 3 {
        return vec![Check::skip("psi", "requires genus >= 3")];
    }
    let mut checks = match verify_psi(g) {
        Ok(r) => vec![
            Check::new("conjugacy", r.conjugacy_exact, "f = h^-1 o first_return(f, alpha) o h"),
            Check::new("slit_scaling", r.scaling_exact, "|sigma_(i+1)| = alpha |sigma_i|"),
            Check::new("condition", r.condition_exact, "alpha (1 + |sigma_g|) = (1 - alpha) + |sigma_g|"),
            Check::new(
                "derivative_class",
                r.derivative_class == ay_core::veech::TraceClass::PseudoAnosov,
                format!("{:?}", r.derivative_class),
            ),
        ],
        Err(e) => vec![Check::new("psi", false, e.to_string())],
    };
    checks.push(Check::from_result("slit_feet", slit_feet(g)));
    checks
}

/// Slit feet strictly inside the base, and their left-to-right order.
fn slit_feet(g: u32) -> Result<(bool, String), ay_core::builders::BuildError> {
    let xs = slit_abscissas(g)?;
    let f = xs[0].field().clone();
    let inside = xs.iter().all(|x| x.sign() > 0 && *x < NFElem::one(&f));
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].cmp(&xs[b]));
    let names: Vec<String> = order.iter().map(|i| format!("sigma_{}", i + 1)).collect();
    Ok((inside, names.join(" < ")))
}

fn rho(g: u32) -> Vec<Check> {
    if g < 3 {
        return vec![Check::skip("rho", "requires genus >= 3")];
    }
    match verify_rho(g) {
        Ok(r) => vec![
            Check::new("r_conjugacy", r.r_conjugacy_exact, "r f r = f^-1"),
            Check::new("mirror", r.mirror_exact, "primed triangles mirror the unprimed ones"),
        ],
        Err(e) => vec![Check::new("rho", false, e.to_string())],
    }
}

fn surface(g: u32) -> Vec<Check> {
    let s = match build_staircase(g) {
        Ok(s) => s,
        Err(e) => return vec![Check::new("staircase", false, e.to_string())],
    };
    let mut checks = vec![Check::new("staircase_valid", s.validate().is_valid(), "gluings consistent")];
    let top = match s.topology() {
        Ok(t) => t,
        Err(e) => {
            checks.push(Check::new("topology", false, e.to_string()));
            return checks;
        }
    };
    let f = s.field().clone();
    match g {
        1 => {
            checks.push(Check::new("genus", top.genus == Some(1), format!("{:?}", top.genus)));
            checks.push(Check::new("area", s.area() == NFElem::one(&f), s.area().to_string()));
        }
        2 => {
            let tori = top.components.len() == 2 && top.components.iter().all(|c| c.genus == 1);
            checks.push(Check::new("two_tori", tori, format!("{} components", top.components.len())));
        }
        _ => {
            checks.push(Check::new("genus", top.genus == Some(g as i64), format!("{:?}", top.genus)));
            let mut w: Vec<usize> = s
                .cone_windings()
                .unwrap_or_default()
                .into_iter()
                .filter(|&w| w > 1)
                .collect();
            w.sort();
            checks.push(Check::new(
                "cone_windings",
                w == vec![g as usize; 2],
                format!("{w:?}"),
            ));
        }
    }
    checks.push(Check::from_result(
        "return_map",
        staircase_return_map(&s).and_then(|t| Ok((t.equal(&build_f_g_with(g, g == 1)?), "vertical first return to the base = f_g".to_string()))),
    ));
    if g >= 3 {
        checks.push(Check::from_result(
            "triangulation",
            build_triangulation(g).and_then(|t| {
                let top = t.topology()?;
                let w = t.cone_windings()?;
                let ok = top.chi == 2 - 2 * g as i64 && w == vec![g as usize; 2] && t.area() == s.area();
                Ok((ok, format!("chi {}, windings {w:?}, {} triangles", top.chi, t.num_triangles())))
            }),
        ));
    }
    checks
}

fn num_bigint_pow2(k: u32) -> num_bigint::BigInt {
    num_bigint::BigInt::from(1) << k
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
