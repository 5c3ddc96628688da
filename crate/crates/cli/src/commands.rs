use std::path::Path;

use serde_json::json;

use qei_core::applications::{
    mirror_bound_parts, mirror_vacuum_energy, null_averages, unweighted_demo, worldline_bound, worldvolume_bound, BoundRecord, DemoParams, MirrorTrajectory,
    TensorWeight, WorldlineCurve, WorldlineKind,
};
use qei_core::circle::{LineReparam, MobiusElement};
use qei_core::numerics::{integrate, uniform_nodes, Interval, RealFunction, Tail};
use qei_core::qei::{sharpness_experiment_with, NPolicy};
use qei_core::virasoro::{report, HighestWeight};
use qei_core::weights::{catalog, load_weight_csv, phi_squared_integral, qei_functional, standard_bump, WeightFunction};
use qei_core::ToleranceSet;

use crate::config::RunConfig;
use crate::output::{num, Report};
use crate::CliError;

/// A report to emit, and the contract failure (if any) to raise after it.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, failure: None }
    }
}

pub const DEFAULT_EPS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];
pub const DEFAULT_LAMBDAS: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];
pub const DEFAULT_LEVEL: usize = 10;
pub const COMMUTATOR_LIMIT: f64 = 1e-9;
const LINEARITY_TOL: f64 = 1e-6;
const AWEC_FLOOR: f64 = -1e-9;

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command.as_str() {
        "bound" => cmd_bound(cfg),
        "sharpness" => cmd_sharpness(cfg),
        "mirror" => cmd_mirror(cfg),
        "worldline" => cmd_worldline(cfg),
        "volume" => cmd_volume(cfg),
        "demo-unweighted" => cmd_demo_unweighted(cfg),
        "virasoro-check" => cmd_virasoro(cfg),
        other => Err(CliError::validation(format!("unknown command '{other}'"))),
    }
}

fn tolerances(cfg: &RunConfig) -> Result<ToleranceSet, CliError> {
    let mut tol = ToleranceSet::default();
    if let Some(t) = cfg.f64("tol")? {
        if t <= 0.0 {
            return Err(CliError::validation("tol must be positive"));
        }
        tol = tol.with_rel(t);
    }
    Ok(tol)
}

fn central_charges(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let cs = cfg.f64_list_or("c", &[1.0])?;
    if let Some(c) = cs.iter().find(|c| **c <= 0.0) {
        return Err(CliError::validation(format!("central charge must be positive, got {c}")));
    }
    Ok(cs)
}

fn central_charge(cfg: &RunConfig) -> Result<f64, CliError> {
    Ok(central_charges(cfg)?[0])
}

fn common_meta(r: &mut Report, cfg: &RunConfig) -> Result<(), CliError> {
    r.meta("seed", cfg.u64_or("seed", 0)?);
    Ok(())
}

/// Weight from `input` (CSV) or from `catalog`/`params`, with `grid` as the
/// default node count.
pub fn load_weight(cfg: &RunConfig, default_catalog: &str) -> Result<WeightFunction, CliError> {
    if let Some(path) = cfg.get("input") {
        return Ok(load_weight_csv(Path::new(path), cfg.f64("tail_exponent")?)?);
    }
    let mut params = cfg.params("params")?;
    if cfg.get("grid").is_some() && !params.contains_key("nodes") {
        params.insert("nodes".into(), cfg.usize_or("grid", 0)? as f64);
    }
    Ok(catalog(cfg.str_or("catalog", default_catalog), &params)?)
}

fn descriptor(g: &WeightFunction, cfg: &RunConfig) -> String {
    match cfg.get("input") {
        Some(_) => g.label().to_string(),
        None => {
            let p = cfg.get("params").map(|p| format!("[{}]", p.replace(',', ";"))).unwrap_or_default();
            format!("{}{p}", g.label())
        }
    }
}

fn cmd_bound(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tol = tolerances(cfg)?;
    let cs = central_charges(cfg)?;
    let g = load_weight(cfg, "gaussian")?;
    let phi2 = phi_squared_integral(&g, &tol)?;
    let desc = descriptor(&g, cfg);
    let mut r = Report::new(vec!["weight", "c", "bound", "phi_sq_integral", "outside_hypotheses"]);
    common_meta(&mut r, cfg)?;
    let mut records = Vec::new();
    for &c in &cs {
        let b = qei_functional(&g, c, &tol)?;
        r.row(vec![desc.clone(), num(c), num(b), num(phi2), g.outside_hypotheses().to_string()]);
        records.push(
            BoundRecord::new(b)
                .with_hash(cfg.hash())
                .component("c", c)
                .component("phi_sq_integral", phi2)
                .flag("outside_hypotheses", g.outside_hypotheses()),
        );
    }
    r.json = json!({ "weight": desc, "records": records });
    Ok(Outcome::ok(r))
}

fn cmd_sharpness(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tol = tolerances(cfg)?;
    let c = central_charge(cfg)?;
    let g = load_weight(cfg, "bump")?;
    let eps = cfg.f64_list_or("eps", &DEFAULT_EPS)?;
    let policy = match cfg.f64("n")? {
        Some(n) => NPolicy::Fixed(n),
        None => NPolicy::Auto,
    };
    let tab = sharpness_experiment_with(&g, c, &eps, policy, &tol)?;
    let mut r = Report::new(vec!["eps", "n", "lhs", "bound", "gap", "rel_gap", "runtime_ms"]);
    common_meta(&mut r, cfg)?;
    r.meta("weight", descriptor(&g, cfg));
    r.meta("c", num(c));
    if let Some(m) = tab.window {
        r.meta("window", num(m));
    }
    for row in &tab.rows {
        r.row(vec![num(row.eps), num(row.n), num(row.lhs), num(row.bound), num(row.gap), num(row.gap / row.bound.abs()), format!("{:.3}", row.runtime_ms)]);
    }
    r.json = json!({ "window": tab.window, "rows": tab.rows });
    let positive = tab.rows.iter().all(|x| x.gap > 0.0);
    let decreasing = tab.rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let failure = (!(positive && decreasing)).then(|| CliError::contract(format!("sharpness convergence failure (gaps positive: {positive}, strictly decreasing: {decreasing})")));
    Ok(Outcome { report: r, failure })
}

fn range(cfg: &RunConfig, key: &str, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let v = cfg.f64_list_or(key, &[default.0, default.1])?;
    match v.as_slice() {
        [a, b] if a < b => Ok((*a, *b)),
        _ => Err(CliError::validation(format!("{key}: expected lo,hi with lo < hi"))),
    }
}

/// Two-column `(u, p(u))` trajectory, continued by the affine map through its
/// end points.
pub fn load_trajectory(path: &Path) -> Result<MirrorTrajectory, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let (mut u, mut p) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split(',').map(|t| t.trim().parse::<f64>());
        match (it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b))) => {
                u.push(a);
                p.push(b);
            }
            _ if u.is_empty() => continue,
            _ => return Err(CliError::validation(format!("trajectory row {} is not numeric", i + 1))),
        }
    }
    if u.len() < 8 {
        return Err(CliError::validation("trajectory needs at least 8 samples"));
    }
    if let Some(k) = (1..p.len()).find(|&k| p[k] <= p[k - 1]) {
        return Err(CliError::validation(format!("trajectory not monotone at u = {}", u[k])));
    }
    let n = u.len();
    let slope = (p[n - 1] - p[0]) / (u[n - 1] - u[0]);
    let tail = MobiusElement::affine(slope, p[0] - slope * u[0])?;
    let f = RealFunction::from_samples(u, p, Tail::Zero, Tail::Zero)?;
    Ok(MirrorTrajectory::new(LineReparam::from_samples(f, tail)?))
}

pub fn mirror_nodes() -> Vec<f64> {
    uniform_nodes(-6.0, 3.0, 9001)
}

fn builtin_trajectory(cfg: &RunConfig) -> Result<(String, MirrorTrajectory), CliError> {
    let params = cfg.params("params")?;
    let name = cfg.str_or("trajectory", "accelerating");
    let t = match name {
        "identity" => MirrorTrajectory::identity(mirror_nodes())?,
        "mobius" => {
            let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
            let m = MobiusElement::normalized(get("a", 1.0), get("b", 0.0), get("c", 0.0), get("d", 1.0))?;
            MirrorTrajectory::from_mobius(m, mirror_nodes())?
        }
        "accelerating" => MirrorTrajectory::accelerating(params.get("amplitude").copied().unwrap_or(0.5), mirror_nodes())?,
        other => return Err(CliError::validation(format!("unknown trajectory '{other}' (known: identity, mobius, accelerating)"))),
    };
    Ok((name.to_string(), t))
}

/// Tensor weight whose right-moving projection sits at `u ≈ 0` and whose
/// left-moving projection sits at `u ≈ −3`, both at `v ≈ 3`.
pub fn locality_weight() -> Result<TensorWeight, CliError> {
    let b = |x: f64| standard_bump(x / 0.5);
    Ok(TensorWeight::from_null_components((-0.6, 2.1), (0.9, 3.6), move |u, v| 2.0 * b(u) * b(v - 3.0), move |u, v| 2.0 * b(u + 3.0) * b(v - 3.0))?)
}

/// Scalar Gaussian weight `e^{−(x⁰)²−(x¹−3)²}`.
pub fn separable_weight() -> Result<TensorWeight, CliError> {
    Ok(TensorWeight::scalar((-6.0, 6.0), (-3.0, 9.0), |s, t| (-(s * s) - (t - 3.0).powi(2)).exp())?)
}

fn tensor_from(cfg: &RunConfig, path_key: &str) -> Result<Option<(String, TensorWeight)>, CliError> {
    if let Some(p) = cfg.get(path_key) {
        return Ok(Some((p.to_string(), TensorWeight::load_csv(Path::new(p))?)));
    }
    match cfg.get("scenario") {
        None => Ok(None),
        Some("locality") => Ok(Some(("locality".into(), locality_weight()?))),
        Some("separable") => Ok(Some(("separable".into(), separable_weight()?))),
        Some(other) => Err(CliError::validation(format!("unknown scenario '{other}' (known: locality, separable)"))),
    }
}

fn cmd_mirror(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = central_charge(cfg)?;
    let (name, traj) = match cfg.get("input") {
        Some(p) => (p.to_string(), load_trajectory(Path::new(p))?),
        None => builtin_trajectory(cfg)?,
    };
    let t = mirror_vacuum_energy(&traj, c)?;
    let (a0, b0) = range(cfg, "x0", (-2.0, 2.0))?;
    let (a1, b1) = range(cfg, "x1", (-2.0, 2.0))?;
    let n = cfg.usize_or("grid", 21)?;
    if n < 2 {
        return Err(CliError::validation("grid must be at least 2"));
    }
    let mut r = Report::new(vec!["x0", "x1", "u", "t00"]);
    common_meta(&mut r, cfg)?;
    r.meta("trajectory", &name);
    r.meta("c", num(c));
    let mut grid = Vec::with_capacity(n * n);
    for s in uniform_nodes(a0, b0, n) {
        for x in uniform_nodes(a1, b1, n) {
            let u = s - x;
            let e = t.eval(u);
            r.row(vec![num(s), num(x), num(u), num(e)]);
            grid.push([s, x, e]);
        }
    }
    let mut bound = None;
    if let Some((label, fw)) = tensor_from(cfg, "tensor")? {
        let parts = mirror_bound_parts(&fw, &traj, c)?;
        let total = parts.smeared + parts.motion;
        r.meta("tensor", &label);
        r.meta("mirror_bound", num(total));
        bound = Some(BoundRecord::new(total).with_hash(cfg.hash()).component("smeared", parts.smeared).component("motion", parts.motion));
    }
    r.json = json!({ "trajectory": name, "grid": grid, "bound": bound });
    Ok(Outcome::ok(r))
}

fn cmd_worldline(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = central_charge(cfg)?;
    let (cl, cr) = (cfg.f64_or("cl", c)?, cfg.f64_or("cr", c)?);
    let g = load_weight(cfg, "gaussian")?;
    let lambda = g.function().nodes().to_vec();
    let name = cfg.str_or("curve", "static").to_string();
    let curve = match name.as_str() {
        "static" => WorldlineCurve::static_line(lambda, cfg.f64_or("offset", 0.0)?)?,
        "boosted" => WorldlineCurve::boosted_line(lambda, cfg.f64_or("rapidity", 0.0)?)?,
        "spacelike" => WorldlineCurve::spacelike_line(lambda, cfg.f64_or("rapidity", 0.0)?)?,
        path if path.ends_with(".csv") => {
            let kind = match cfg.str_or("kind", "timelike") {
                "timelike" => WorldlineKind::Timelike,
                "spacelike" => WorldlineKind::Spacelike,
                other => return Err(CliError::validation(format!("unknown curve kind '{other}'"))),
            };
            WorldlineCurve::load_csv(Path::new(path), kind, ToleranceSet::default().null_slope_min)?
        }
        other => return Err(CliError::validation(format!("unknown curve '{other}' (known: static, boosted, spacelike, or a lambda,u,v CSV path)"))),
    };
    let b = worldline_bound(&curve, &g, cl, cr)?;
    let mut r = Report::new(vec!["curve", "weight", "c_l", "c_r", "bound"]);
    common_meta(&mut r, cfg)?;
    let desc = descriptor(&g, cfg);
    r.row(vec![name.clone(), desc.clone(), num(cl), num(cr), num(b)]);
    r.json = json!({ "curve": name, "weight": desc, "record": BoundRecord::new(b).with_hash(cfg.hash()).component("c_l", cl).component("c_r", cr) });
    Ok(Outcome::ok(r))
}

fn cmd_volume(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = central_charge(cfg)?;
    let (cl, cr) = (cfg.f64_or("cl", c)?, cfg.f64_or("cr", c)?);
    let (label, fw) = match tensor_from(cfg, "input")? {
        Some(x) => x,
        None => ("locality".into(), locality_weight()?),
    };
    let na = null_averages(&fw)?;
    let il = integrate(&na.f_l, Interval::real_line())?;
    let ir = integrate(&na.f_r, Interval::real_line())?;
    let b = worldvolume_bound(&fw, cl, cr)?;
    let mut r = Report::new(vec!["tensor", "c_l", "c_r", "bound", "int_f_l", "int_f_r"]);
    common_meta(&mut r, cfg)?;
    r.row(vec![label.clone(), num(cl), num(cr), num(b), num(il), num(ir)]);
    let rec = BoundRecord::new(b)
        .with_hash(cfg.hash())
        .component("int_f_l", il)
        .component("int_f_r", ir)
        .flag("f_l_nonnegative", na.f_l_nonnegative)
        .flag("f_r_nonnegative", na.f_r_nonnegative);
    r.json = json!({ "tensor": label, "record": rec });
    Ok(Outcome::ok(r))
}

fn demo_params(cfg: &RunConfig) -> Result<DemoParams, CliError> {
    let mut p = DemoParams::default();
    for (k, v) in cfg.params("params")? {
        match k.as_str() {
            "amplitude" => p.amplitude = v,
            "s" => p.s = v,
            "c1" => p.c1 = v,
            "c2" => p.c2 = v,
            "c3" => p.c3 = v,
            "comp_lo" => p.compensator.0 = v,
            "comp_hi" => p.compensator.1 = v,
            "nodes" => p.nodes = v as usize,
            other => return Err(CliError::validation(format!("unknown demo parameter '{other}'"))),
        }
    }
    if let Some(n) = cfg.get("grid") {
        p.nodes = n.parse().map_err(|_| CliError::validation("grid must be an integer"))?;
    }
    Ok(p)
}

fn cmd_demo_unweighted(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c = central_charge(cfg)?;
    let lambdas = cfg.f64_list_or("lambda", &DEFAULT_LAMBDAS)?;
    if lambdas.iter().any(|l| *l <= 0.0) {
        return Err(CliError::validation("λ values must be positive"));
    }
    let params = demo_params(cfg)?;
    let demo = match unweighted_demo(&params, &lambdas, c) {
        Err(qei_core::Error::HypothesisFailed(h)) => return Err(CliError::contract(format!("hypothesis check failed: {h}"))),
        other => other?,
    };
    let slope = demo.rows.iter().map(|x| x.lambda * x.half_line).sum::<f64>() / demo.rows.iter().map(|x| x.lambda * x.lambda).sum::<f64>();
    let mut r = Report::new(vec!["lambda", "half_line", "full_line", "half_line_per_lambda"]);
    common_meta(&mut r, cfg)?;
    r.meta("c", num(c));
    r.meta("kappa", num(demo.kappa));
    r.meta("slope", num(slope));
    for row in &demo.rows {
        r.row(vec![num(row.lambda), num(row.half_line), num(row.full_line), num(row.half_line / row.lambda)]);
    }
    let per: Vec<f64> = demo.rows.iter().map(|x| x.half_line / x.lambda).collect();
    let spread = per.iter().map(|x| ((x - per[0]) / per[0]).abs()).fold(0.0, f64::max);
    let min_full = demo.rows.iter().map(|x| x.full_line).fold(f64::INFINITY, f64::min);
    r.json = json!({
        "params": demo.params,
        "kappa": demo.kappa,
        "hypotheses": demo.hypotheses,
        "identity_residual": demo.identity_residual,
        "slope": slope,
        "rows": demo.rows,
    });
    let mut problems = Vec::new();
    if !(slope < 0.0) {
        problems.push(format!("slope {slope} is not negative"));
    }
    if spread > LINEARITY_TOL {
        problems.push(format!("I(λ)/λ varies by {spread:.3e}"));
    }
    if min_full < AWEC_FLOOR {
        problems.push(format!("full-line integral {min_full} below {AWEC_FLOOR}"));
    }
    let failure = (!problems.is_empty()).then(|| CliError::contract(format!("linearity check failed: {}", problems.join("; "))));
    Ok(Outcome { report: r, failure })
}

/// A `(c, h)` point with its declared unitarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub c: f64,
    pub h: f64,
    pub expect_unitary: bool,
}

pub fn parse_points(s: &str) -> Result<Vec<Point>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            let f = |x: &str| x.parse::<f64>().map_err(|_| CliError::validation(format!("bad number '{x}' in point '{t}'")));
            let expect_unitary = match parts.get(2).copied() {
                None | Some("unitary") => true,
                Some("non-unitary") => false,
                Some(o) => return Err(CliError::validation(format!("expectation must be unitary or non-unitary, got '{o}'"))),
            };
            if !(2..=3).contains(&parts.len()) {
                return Err(CliError::validation(format!("point '{t}' must be c,h[,expectation]")));
            }
            Ok(Point { c: f(parts[0])?, h: f(parts[1])?, expect_unitary })
        })
        .collect()
}

fn cmd_virasoro(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let level = cfg.usize_or("level", DEFAULT_LEVEL)?;
    let limit = cfg.f64("tol")?.unwrap_or(COMMUTATOR_LIMIT);
    let points = parse_points(cfg.str_or("points", "0.5,0;0.5,0.0625;0.5,0.5"))?;
    if points.is_empty() {
        return Err(CliError::validation("no (c, h) points given"));
    }
    let mut r = Report::new(vec!["c", "h", "N", "expected_unitary", "unitary", "min_gram_eig_relative", "commutator_max_residual", "pass"]);
    r.json_primary = true;
    common_meta(&mut r, cfg)?;
    let mut entries = Vec::new();
    let mut failed = Vec::new();
    for p in &points {
        let rep = report(HighestWeight::new(p.c, p.h)?, level)?;
        let min_eig = rep.gram_min_eig_relative_per_level.iter().copied().fold(f64::INFINITY, f64::min);
        let pass = rep.unitary == p.expect_unitary && rep.commutator_max_residual.is_none_or(|x| x < limit);
        if !pass {
            failed.push(format!("({}, {})", p.c, p.h));
        }
        r.row(vec![
            num(p.c),
            num(p.h),
            level.to_string(),
            p.expect_unitary.to_string(),
            rep.unitary.to_string(),
            num(min_eig),
            rep.commutator_max_residual.map(num).unwrap_or_default(),
            pass.to_string(),
        ]);
        entries.push(json!({ "expected_unitary": p.expect_unitary, "pass": pass, "report": rep }));
    }
    r.json = json!(entries);
    let failure = (!failed.is_empty()).then(|| CliError::contract(format!("Virasoro check failed at {}", failed.join(", "))));
    Ok(Outcome { report: r, failure })
}
