use std::path::PathBuf;

use ay_core::binseq::{
    apply_generator, classify_orbit, conjugacy_failures, f_big, f_big_inv, f_inf_inv, f_inf_pow, ind,
    table_row, tm, verify_conjugacies, BinSeq, FZeroConvention, Generator, OrbitBase,
    OrbitClassification,
};
use ay_core::builders::{
    base_section, build_limit_truncation, build_staircase, build_triangulation, is_power_of_two,
    vertical_connections,
};
use ay_core::iet::build_f_g_with;
use ay_core::numfield::{parse_rational, rational_to_string, NFElem, NumberField};
use ay_core::par::Mode;
use ay_core::surface::svg::render;
use ay_core::surface::trace::{TraceContext, TraceKind, TraceOptions};
use ay_core::surface::{Point, SurfaceComplex};
use ay_core::veech::{self, IntMat2};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::suites;
use crate::{
    BuildArgs, Cli, Command, Direction, Genus, IetCommand, InfiniteCommand, MapName, OutFormat,
    Presentation, TraceArgs, Veech2Command, VerifyArgs, OUT_DIR_VAR,
};

const SVG_SCALE: f64 = 400.0;
const ORBIT_PRINT_CAP: u64 = 100_000;
const SWEEP_RANGE_CAP: i64 = 40;

enum CliError {
    Usage(String),
    Runtime(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

struct Report {
    command: &'static str,
    passed: bool,
    summary: String,
    data: Value,
    /// Printed verbatim on stdout instead of the JSON envelope.
    raw: Option<String>,
}

impl Report {
    fn new(command: &'static str, passed: bool, summary: impl Into<String>, data: Value) -> Self {
        Report {
            command,
            passed,
            summary: summary.into(),
            data,
            raw: None,
        }
    }
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let mode = if cli.sequential {
        Mode::Sequential
    } else {
        Mode::Auto
    };
    let result = match &cli.command {
        Command::Build(a) => build(a, cli.seed),
        Command::Verify(a) => verify(a, mode),
        Command::Iet(c) => iet(c),
        Command::Infinite(c) => infinite(c, cli.seed, mode),
        Command::Trace(a) => trace(a),
        Command::Veech2(c) => veech2(c, mode),
    };
    match result {
        Ok(r) => {
            let out = match &r.raw {
                Some(text) => text.clone(),
                None => envelope(&r, cli.seed) + "\n",
            };
            emit(&out);
            eprintln!("{}", r.summary);
            if r.passed {
                0
            } else {
                1
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            let r = Report::new("error", false, format!("error: {msg}"), json!({ "error": msg }));
            emit(&(envelope(&r, cli.seed) + "\n"));
            eprintln!("{}", r.summary);
            1
        }
    }
}

/// Write to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn envelope(r: &Report, seed: u64) -> String {
    let v = json!({
        "command": r.command,
        "seed": seed,
        "passed": r.passed,
        "summary": r.summary,
        "data": r.data,
    });
    serde_json::to_string_pretty(&v).expect("report serializes")
}

/// Where to write a file: `--path` (relative paths under $AYSURF_OUT_DIR
/// when set), else `default_name` under $AYSURF_OUT_DIR, else nowhere.
fn target_path(path: &Option<PathBuf>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    match (path, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(runtime)?;
    }
    std::fs::write(path, content).map_err(runtime)
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| usage(e.to_string()))
}

fn unit_interval(s: &str, closed: bool) -> Result<BigRational, CliError> {
    let x = rational(s)?;
    let one = BigRational::from_integer(1.into());
    let zero = BigRational::from_integer(0.into());
    if x < zero || x > one || (!closed && x == one) {
        return Err(usage(format!("{s} is outside the unit interval")));
    }
    Ok(x)
}

fn elem_json(x: &NFElem) -> Value {
    json!({ "exact": x.to_string(), "approx": x.to_f64() })
}

fn point_json(p: &Point) -> Value {
    json!({ "x": elem_json(&p.x), "y": elem_json(&p.y) })
}

fn surface_summary(s: &SurfaceComplex) -> Result<Value, CliError> {
    let report = s.validate();
    let top = s.topology().map_err(runtime)?;
    let windings = s.cone_windings().map_err(runtime)?;
    Ok(json!({
        "triangles": s.num_triangles(),
        "valid": report.is_valid(),
        "chi": top.chi,
        "genus": top.genus,
        "components": top.components.iter().map(|c| json!({ "genus": c.genus, "triangles": c.triangles })).collect::<Vec<_>>(),
        "cone_windings": windings,
        "area": elem_json(&s.area()),
    }))
}

fn build_surface(a: &BuildArgs) -> Result<(SurfaceComplex, String), CliError> {
    match (a.genus, a.truncation) {
        (Genus::Inf, None) => Err(usage("--genus inf needs --truncation N")),
        (Genus::Inf, Some(0)) => Err(usage("--truncation must be at least 1")),
        (Genus::Inf, Some(n)) => Ok((build_limit_truncation(n).map_err(runtime)?, format!("inf-n{n}"))),
        (Genus::Finite(_), Some(_)) => Err(usage("--truncation applies only to --genus inf")),
        (Genus::Finite(g), None) => match a.presentation {
            Presentation::Staircase => Ok((build_staircase(g).map_err(runtime)?, format!("g{g}-staircase"))),
            Presentation::Triangles if g < 3 => Err(usage("the triangle presentation needs genus >= 3")),
            Presentation::Triangles => Ok((build_triangulation(g).map_err(runtime)?, format!("g{g}-triangles"))),
        },
    }
}

fn build(a: &BuildArgs, seed: u64) -> Result<Report, CliError> {
    let (s, stem) = build_surface(a)?;
    let summary_data = surface_summary(&s)?;
    let valid = summary_data["valid"].as_bool().unwrap_or(false);
    let presentation = match a.presentation {
        Presentation::Staircase => "staircase",
        Presentation::Triangles => "triangles",
    };
    let mut data = json!({
        "genus": a.genus.to_string(),
        "presentation": if a.genus == Genus::Inf { "truncation" } else { presentation },
        "truncation": a.truncation,
        "summary": summary_data,
    });
    let summary = format!(
        "built genus {} ({}): {} triangles, valid={}",
        a.genus,
        data["presentation"].as_str().unwrap_or(""),
        s.num_triangles(),
        valid
    );
    let (ext, content) = match a.out {
        OutFormat::Svg => ("svg", render(&s, &[], SVG_SCALE)),
        OutFormat::Json => {
            let mut full = data.clone();
            full["surface"] = s.to_json_value();
            ("json", full_envelope(full, &summary, valid, seed))
        }
    };
    match target_path(&a.path, &format!("{stem}.{ext}")) {
        Some(p) => {
            write_file(&p, &content)?;
            data["path"] = json!(p.display().to_string());
            Ok(Report::new("build", valid, format!("{summary}, wrote {}", p.display()), data))
        }
        None => {
            let mut r = Report::new("build", valid, summary, data);
            r.raw = Some(if ext == "json" { content + "\n" } else { content });
            Ok(r)
        }
    }
}

fn full_envelope(data: Value, summary: &str, passed: bool, seed: u64) -> String {
    envelope(&Report::new("build", passed, summary, data), seed)
}

fn verify(a: &VerifyArgs, mode: Mode) -> Result<Report, CliError> {
    if a.genus == 0 {
        return Err(usage("--genus must be at least 1"));
    }
    let reports = suites::run(a.suite.name(), a.genus, mode);
    let passed = reports.iter().all(|r| r.passed());
    let first = reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r.suite.clone(), c.clone())));
    let summary = match &first {
        None => format!(
            "verify genus {}: {} of {} suites passed",
            a.genus,
            reports.len(),
            reports.len()
        ),
        Some((suite, c)) => format!("verify genus {}: FAILED {suite}/{}: {}", a.genus, c.name, c.detail),
    };
    let data = json!({
        "genus": a.genus,
        "suite": a.suite.name(),
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "first_failure": first.map(|(s, c)| json!({ "suite": s, "check": c.name, "detail": c.detail })),
    });
    Ok(Report::new("verify", passed, summary, data))
}

fn iet(c: &IetCommand) -> Result<Report, CliError> {
    let IetCommand::Orbit { genus, start, steps } = c;
    if steps.unsigned_abs() > ORBIT_PRINT_CAP {
        return Err(usage(format!("at most {ORBIT_PRINT_CAP} steps")));
    }
    let x = unit_interval(start, false)?;
    let points: Vec<Value> = match genus {
        Genus::Finite(g) => {
            let f = build_f_g_with(*g, true).map_err(runtime)?;
            let field = NumberField::get(*g).map_err(runtime)?;
            let orbit = f
                .orbit(&NFElem::from_rational(&field, x), *steps)
                .map_err(runtime)?;
            orbit.iter().map(elem_json).collect()
        }
        Genus::Inf => {
            let mut a = BinSeq::from_rational(&x).map_err(runtime)?;
            let mut out = vec![seq_json(&a)];
            for _ in 0..steps.unsigned_abs() {
                a = if *steps < 0 { f_inf_inv(&a) } else { f_inf_pow(&a, 1) };
                out.push(seq_json(&a));
            }
            out
        }
    };
    let summary = format!("orbit of {start} under f_{genus}: {} points", points.len());
    Ok(Report::new(
        "iet orbit",
        true,
        summary,
        json!({ "genus": genus.to_string(), "start": start, "steps": steps, "points": points }),
    ))
}

fn seq_json(a: &BinSeq) -> Value {
    json!({ "seq": a.to_string(), "value": rational_to_string(&a.value()) })
}

fn parse_seq(s: &str) -> Result<BinSeq, CliError> {
    s.parse::<BinSeq>().map_err(|e| usage(format!("bad sequence {s:?}: {e}")))
}

fn base_name(b: OrbitBase) -> &'static str {
    match b {
        OrbitBase::Zero => "0",
        OrbitBase::Half => "1/2",
    }
}

fn signed(n: &impl std::fmt::Display) -> String {
    let s = n.to_string();
    if s.starts_with('-') || s == "0" {
        s
    } else {
        format!("+{s}")
    }
}

fn classification_json(c: &OrbitClassification) -> Value {
    json!({ "base": base_name(c.base), "n": signed(&c.n), "half_orbit": c.label() })
}

fn infinite(c: &InfiniteCommand, seed: u64, mode: Mode) -> Result<Report, CliError> {
    match c {
        InfiniteCommand::Apply { point, map, power } => {
            let a = parse_seq(point)?;
            if *map != MapName::F && *power != 1 {
                return Err(usage("--power applies only to --map f"));
            }
            let (name, image) = match map {
                MapName::F => ("f", Some(f_inf_pow(&a, *power))),
                MapName::FInv => ("f^-1", Some(f_inf_inv(&a))),
                MapName::BigF => ("F", Some(f_big(&a, FZeroConvention::default()))),
                MapName::BigFInv => ("F^-1", f_big_inv(&a).ok()),
                MapName::R => ("r", Some(apply_generator(&a, Generator::R))),
                MapName::HPrime => ("h'", Some(apply_generator(&a, Generator::HPrime))),
                MapName::HDouble => ("h''", Some(apply_generator(&a, Generator::HDouble))),
                MapName::HInf => ("h_inf", Some(apply_generator(&a, Generator::HInf))),
            };
            let summary = match &image {
                Some(b) => format!("{name}({a}) = {b}"),
                None => format!("{a} has no preimage under F"),
            };
            let data = json!({
                "map": name,
                "power": power,
                "input": seq_json(&a),
                "image": image.as_ref().map(seq_json),
            });
            Ok(Report::new("infinite apply", true, summary, data))
        }
        InfiniteCommand::Classify { point } => {
            let a = parse_seq(point)?;
            if !a.is_dyadic() {
                let data = json!({ "input": seq_json(&a), "dyadic": false, "classification": null });
                return Ok(Report::new(
                    "infinite classify",
                    true,
                    format!("{a} is not dyadic, so it lies in neither orbit"),
                    data,
                ));
            }
            let cl = classify_orbit(&a).map_err(runtime)?;
            let summary = format!("{a}: base={}, n={}", base_name(cl.base), signed(&cl.n));
            let data = json!({ "input": seq_json(&a), "dyadic": true, "classification": classification_json(&cl) });
            Ok(Report::new("infinite classify", true, summary, data))
        }
        InfiniteCommand::OrbitIndex { point } => {
            let a = parse_seq(point)?;
            if !a.is_dyadic() {
                return Err(usage(format!("{a} is not dyadic")));
            }
            let cl = classify_orbit(&a).map_err(runtime)?;
            let is_base = a == BinSeq::zero() || a == OrbitBase::Half.seq();
            let predicted = if is_base {
                None
            } else {
                Some(table_row(&a).map_err(runtime)?)
            };
            let consistent = predicted.map_or(true, |(b, sign)| {
                use num_traits::Signed;
                b == cl.base && (if sign > 0 { !cl.n.is_negative() } else { cl.n.is_negative() })
            });
            let data = json!({
                "input": seq_json(&a),
                "ind": ind(&a).map_err(runtime)?,
                "tm": tm(&a).map_err(runtime)?,
                "predicted": predicted.map(|(b, s)| json!({ "base": base_name(b), "sign": s })),
                "classification": classification_json(&cl),
                "consistent": consistent,
            });
            let summary = format!(
                "{a}: Ind={}, n={} in {}, table {}",
                ind(&a).map_err(runtime)?,
                signed(&cl.n),
                cl.label(),
                if consistent { "agrees" } else { "DISAGREES" }
            );
            Ok(Report::new("infinite orbit-index", consistent, summary, data))
        }
        InfiniteCommand::Conjugacies { point, samples } => {
            let (checked, fails) = match point {
                Some(p) => {
                    let a = parse_seq(p)?;
                    (4, conjugacy_failures(&a))
                }
                None => {
                    let r = verify_conjugacies(*samples, seed, mode);
                    (r.checks, r.counterexamples)
                }
            };
            let summary = match fails.first() {
                None => format!("{checked} conjugacy checks, no counterexample"),
                Some(c) => format!("FAILED {} at {}: {} != {}", c.identity, c.input, c.lhs, c.rhs),
            };
            let data = json!({
                "checks": checked,
                "samples": if point.is_some() { 1 } else { *samples },
                "counterexamples": serde_json::to_value(&fails).map_err(runtime)?,
            });
            Ok(Report::new("infinite conjugacies", fails.is_empty(), summary, data))
        }
    }
}

fn trace(a: &TraceArgs) -> Result<Report, CliError> {
    match (a.genus, a.truncation) {
        (Genus::Inf, None) => Err(usage("--genus inf needs --truncation N")),
        (Genus::Inf, Some(0)) => Err(usage("--truncation must be at least 1")),
        (Genus::Inf, Some(n)) => trace_limit(a, n),
        (Genus::Finite(_), Some(_)) => Err(usage("--truncation applies only to --genus inf")),
        (Genus::Finite(g), None) => trace_staircase(a, g),
    }
}

fn trace_staircase(a: &TraceArgs, g: u32) -> Result<Report, CliError> {
    let x = unit_interval(&a.x, false)?;
    let s = build_staircase(g).map_err(runtime)?;
    let f = s.field().clone();
    let ctx = TraceContext::new(&s).map_err(runtime)?;
    let sec = base_section(&s).map_err(runtime)?;
    let xe = NFElem::from_rational(&f, x);
    let p = Point::new(xe.clone(), NFElem::zero(&f));
    let d = match a.direction {
        Direction::Vertical => Point::new(NFElem::zero(&f), NFElem::one(&f)),
        Direction::Horizontal => Point::new(NFElem::one(&f), NFElem::zero(&f)),
    };
    let start = ctx.locate(&p, &d).map_err(runtime)?;
    let opts = TraceOptions {
        budget: a.budget,
        section: (a.direction == Direction::Vertical).then_some(&sec),
        ..Default::default()
    };
    let r = ctx.trace(start, &p, &d, &opts).map_err(runtime)?;
    let kind = serde_json::to_value(r.kind).map_err(runtime)?;
    let mut data = json!({
        "genus": g,
        "x": a.x,
        "direction": format!("{:?}", a.direction).to_lowercase(),
        "kind": kind,
        "length": elem_json(&r.length),
        "crossings": r.crossings.len(),
        "endpoint": point_json(&r.endpoint),
    });
    if r.kind == TraceKind::ReturnsToSection {
        let expected = build_f_g_with(g, true).map_err(runtime)?.apply(&xe).map_err(runtime)?;
        data["first_return_matches_f_g"] = json!(r.endpoint.x == expected);
    }
    let summary = format!(
        "trace from {} on genus {g}: {} after length {:.6}",
        a.x,
        kind.as_str().unwrap_or(""),
        r.length.to_f64()
    );
    let passed = data["first_return_matches_f_g"].as_bool().unwrap_or(true);
    finish_trace(a, &s, &r.segments, &format!("g{g}-trace"), summary, data, passed)
}

fn trace_limit(a: &TraceArgs, n: u32) -> Result<Report, CliError> {
    if a.direction != Direction::Vertical {
        return Err(usage("truncations are traced vertically"));
    }
    let x = unit_interval(&a.x, true)?;
    let s = build_limit_truncation(n).map_err(runtime)?;
    let ctx = TraceContext::new(&s).map_err(runtime)?;
    let conns = vertical_connections(&ctx, n, &x, a.budget).map_err(runtime)?;
    let rows: Vec<Value> = conns
        .iter()
        .map(|c| {
            let pow2 = parse_rational(&c.length).map(|l| is_power_of_two(&l)).unwrap_or(false);
            json!({ "length": c.length, "closed": c.closed, "in_zone": c.in_zone, "power_of_two": pow2 })
        })
        .collect();
    let summary = format!(
        "vertical line at x = {} on truncation {n}: lengths {}",
        a.x,
        conns.iter().map(|c| c.length.as_str()).collect::<Vec<_>>().join(", ")
    );
    let data = json!({ "truncation": n, "x": a.x, "connections": rows });
    finish_trace(a, &s, &[], &format!("inf-n{n}-trace"), summary, data, true)
}

fn finish_trace(
    a: &TraceArgs,
    s: &SurfaceComplex,
    segments: &[ay_core::surface::trace::Segment],
    stem: &str,
    summary: String,
    mut data: Value,
    passed: bool,
) -> Result<Report, CliError> {
    if a.out == OutFormat::Svg {
        let svg = render(s, segments, SVG_SCALE);
        return match target_path(&a.path, &format!("{stem}.svg")) {
            Some(p) => {
                write_file(&p, &svg)?;
                data["path"] = json!(p.display().to_string());
                Ok(Report::new("trace", passed, summary, data))
            }
            None => {
                let mut r = Report::new("trace", passed, summary, data);
                r.raw = Some(svg);
                Ok(r)
            }
        };
    }
    Ok(Report::new("trace", passed, summary, data))
}

fn veech2(c: &Veech2Command, mode: Mode) -> Result<Report, CliError> {
    match c {
        Veech2Command::Check { x, y, z, w } => {
            let m = IntMat2::new(*x, *y, *z, *w);
            if m.det() != 1 {
                return Err(usage(format!("determinant is {}, not 1", m.det())));
            }
            let member = veech::in_intersection(&m).map_err(runtime)?;
            let conj = veech::conjugation_entries(&m).map_err(runtime)?;
            let entries: Vec<String> = match veech::rational_entries(&conj) {
                Some(e) => e.iter().map(rational_to_string).collect(),
                None => conj.entries().iter().map(|e| e.to_string()).collect(),
            };
            let verdict = if member { "in intersection" } else { "not in intersection" };
            let data = json!({
                "matrix": [x, y, z, w],
                "in_intersection": member,
                "conjugate": entries,
            });
            Ok(Report::new("veech2 check", true, verdict, data))
        }
        Veech2Command::Sweep { range } => {
            if !(0..=SWEEP_RANGE_CAP).contains(range) {
                return Err(usage(format!("--range must lie in 0..={SWEEP_RANGE_CAP}")));
            }
            let rep = veech::sweep(*range, mode);
            let sub = veech::sublattice_index5().map_err(runtime)?;
            let passed = rep.passed() && sub.passed;
            let summary = format!(
                "{} det-1 matrices in [-{range}, {range}], {} in the intersection, {} disagreements; sublattice identity {}",
                rep.candidates,
                rep.members,
                rep.disagreements.len(),
                if sub.passed { "holds" } else { "FAILS" }
            );
            let data = json!({
                "sweep": serde_json::to_value(&rep).map_err(runtime)?,
                "sublattice": serde_json::to_value(&sub).map_err(runtime)?,
            });
            Ok(Report::new("veech2 sweep", passed, summary, data))
        }
    }
}
