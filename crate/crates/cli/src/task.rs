//! Task specs: one JSON object per run, resolved against defaults and
//! executed against the library.
//!
//! ```json
//! {"task": "split", "preset": "heisenberg", "U": [1, 0], "V": [0, 1]}
//! ```
//!
//! The group is given either inline as `"group": {...}` or through the
//! top-level `preset`, `n` and `m` keys. Unknown keys are rejected.

use std::sync::Arc;

use carnot_core::analysis::{
    corpus, directional_derivative, horizontal_gradient, linearity_defect, mcshane_extend, membership_a,
    minimal_lipschitz, pansu_quotient, porosity_probe, regularity_defect, CorpusOptions, Ladder, MembershipOptions,
    PansuOptions, PorosityOptions, RegularityOptions, Sample, ScalarField, Sidedness,
};
use carnot_core::config::{explicit_config, group_hash, rational_strings, scalar_value, GroupConfig};
use carnot_core::decompose::{path_decompose, split_sum};
use carnot_core::group::hom_norm_f64;
use carnot_core::lie::validate;
use carnot_core::metric::{self, CcOptions};
use carnot_core::scalar::{format_rational, Scalar};
use carnot_core::suite::run_suite;
use carnot_core::{Error, GroupPoint, HorizontalWord, LieVector, Rational, StratifiedAlgebra};
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

pub const TASKS: [&str; 13] = [
    "validate",
    "eval",
    "probe",
    "split",
    "path",
    "dd",
    "grad",
    "pansu",
    "linearity",
    "regularity",
    "porosity",
    "memberA",
    "suite",
];

/// Exact scalar, read from a number or a `"p/q"` string, written as a string.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        scalar_value(&v).map(Exact).map_err(D::Error::custom)
    }
}

/// Float scalar, read from a number or a `"p/q"` string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Num(pub f64);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        if let Value::Number(n) = &v {
            if let Some(x) = n.as_f64() {
                return Ok(Num(x));
            }
        }
        scalar_value(&v).map(|r| Num(r.to_f64())).map_err(D::Error::custom)
    }
}

fn exact(v: &[Exact]) -> Vec<Rational> {
    v.iter().map(|e| e.0.clone()).collect()
}

fn floats(v: &[Num]) -> Vec<f64> {
    v.iter().map(|n| n.0).collect()
}

/// How a run ended, before it is mapped to an exit code.
#[derive(Debug)]
pub enum Failure {
    /// bad spec or parameters
    Usage(String),
    /// a limit or estimate needed by the task did not converge
    Check(String),
    /// the library broke one of its own guarantees
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) => Failure::Invariant(e.to_string()),
            Error::NonConvergent(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Invariant(m) => f.write_str(m),
        }
    }
}

pub struct Outcome {
    pub passed: bool,
    pub report: Value,
    /// extra JSON lines emitted after the report (`eval`)
    pub lines: Vec<Value>,
}

pub fn parse_spec(text: &str) -> Result<Value, Failure> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("task spec: {e}")))?;
    if !v.is_object() {
        return Err(Failure::Usage("task spec must be a JSON object".into()));
    }
    Ok(v)
}

fn params<T: DeserializeOwned + Serialize>(rest: Map<String, Value>) -> Result<(T, Value), Failure> {
    let p: T = serde_json::from_value(Value::Object(rest)).map_err(|e| Failure::Usage(format!("task parameters: {e}")))?;
    let resolved = serde_json::to_value(&p).expect("parameters serialize");
    Ok((p, resolved))
}

fn take_group(map: &mut Map<String, Value>) -> Result<Option<GroupConfig>, Failure> {
    let inline = map.remove("group");
    let mut preset = Map::new();
    for key in ["preset", "n", "m"] {
        if let Some(v) = map.remove(key) {
            preset.insert(key.to_string(), v);
        }
    }
    let value = match (inline, preset.is_empty()) {
        (Some(_), false) => return Err(Failure::Usage("give either `group` or `preset`, not both".into())),
        (Some(g), true) => g,
        (None, false) => Value::Object(preset),
        (None, true) => return Ok(None),
    };
    serde_json::from_value(value)
        .map(Some)
        .map_err(|e| Failure::Usage(format!("group config: {e}")))
}

/// Runs one task spec. `seed` overrides any `seed` key in the spec.
pub fn execute(spec: &Value, seed: Option<u64>, default_seed: u64) -> Result<Outcome, Failure> {
    let mut map = spec.as_object().cloned().ok_or_else(|| Failure::Usage("task spec must be an object".into()))?;
    let task = match map.remove("task") {
        Some(Value::String(t)) => t,
        Some(other) => return Err(Failure::Usage(format!("`task` must be a string, got {other}"))),
        None => return Err(Failure::Usage("missing `task`".into())),
    };
    let spec_seed = match map.remove("seed") {
        None => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| Failure::Usage(format!("`seed` must be a non-negative integer, got {v}")))?),
    };
    let seed = seed.or(spec_seed).unwrap_or(default_seed);
    // a spec without a group runs on heisenberg(1); the report names it
    let group = match take_group(&mut map)? {
        None if task != "suite" && TASKS.contains(&task.as_str()) => {
            Some(GroupConfig::from_json(r#"{"preset": "heisenberg"}"#).expect("builtin preset"))
        }
        g => g,
    };
    let alg = match (&group, task.as_str()) {
        (_, "suite") => None,
        (Some(g), _) => Some(g.build()?),
        (None, _) => None,
    };

    let (passed, resolved, result, lines) = match task.as_str() {
        "validate" => {
            let (_, resolved) = params::<NoParams>(map)?;
            let report = validate(alg.as_ref().expect("group"));
            (report.passed(), resolved, serde_json::to_value(&report).expect("serializable"), vec![])
        }
        "eval" => {
            let (p, resolved) = params::<EvalParams>(map)?;
            let lines = eval(alg.as_ref().expect("group"), &p)?;
            (true, resolved, json!({"points": p.points.len()}), lines)
        }
        "probe" => {
            let (p, resolved) = params::<ProbeParams>(map)?;
            let report = probe(alg.as_ref().expect("group"), &p, seed)?;
            let finite = report.max_ratio.is_finite();
            (finite, resolved, serde_json::to_value(&report).expect("serializable"), vec![])
        }
        "split" => {
            let (mut p, _) = params::<SplitParams>(map)?;
            p.normalize()?;
            let resolved = serde_json::to_value(&p).expect("parameters serialize");
            (true, resolved, split(alg.as_ref().expect("group"), &p)?, vec![])
        }
        "path" => {
            let (p, resolved) = params::<PathParams>(map)?;
            (true, resolved, path(alg.as_ref().expect("group"), &p)?, vec![])
        }
        "dd" | "grad" | "pansu" | "linearity" | "regularity" | "memberA" => {
            let alg = alg.as_ref().expect("group");
            let (result, resolved) = analyze(&task, alg, map, seed)?;
            (true, resolved, result, vec![])
        }
        "porosity" => {
            let (p, resolved) = params::<PorosityParams>(map)?;
            let report = porosity(alg.as_ref().expect("group"), &p, seed)?;
            (true, resolved, serde_json::to_value(&report).expect("serializable"), vec![])
        }
        "suite" => {
            let (p, resolved) = params::<SuiteParams>(map)?;
            let report = run_suite(&p.name, seed)?;
            (report.passed, resolved, serde_json::to_value(&report).expect("serializable"), vec![])
        }
        other => {
            return Err(Failure::Usage(format!(
                "unknown task `{other}` (expected one of {})",
                TASKS.join(", ")
            )))
        }
    };

    let group_json = match (&group, &alg) {
        (Some(g), Some(a)) => json!({
            "spec": g,
            "explicit": explicit_config(a),
            "hash": group_hash(a),
        }),
        _ => Value::Null,
    };
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "task": task,
        "seed": seed,
        "group": group_json,
        "parameters": resolved,
        "status": if passed { "pass" } else { "fail" },
        "result": result,
    });
    Ok(Outcome { passed, report, lines })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalParams {
    points: Vec<Vec<Exact>>,
}

fn point(alg: &Arc<StratifiedAlgebra>, coords: &[Exact]) -> Result<GroupPoint<Rational>, Failure> {
    Ok(GroupPoint::new(alg.clone(), exact(coords))?)
}

// one line per point, then the ordered product
fn eval(alg: &Arc<StratifiedAlgebra>, p: &EvalParams) -> Result<Vec<Value>, Failure> {
    let mut lines = Vec::with_capacity(p.points.len() + 1);
    let mut product = GroupPoint::identity(alg.clone());
    for (i, c) in p.points.iter().enumerate() {
        let x = point(alg, c)?;
        product = product.multiply(&x)?;
        lines.push(json!({
            "index": i + 1,
            "point": rational_strings(x.coords()),
            "hom_norm": x.hom_norm(),
            "inverse": rational_strings(x.inverse().coords()),
        }));
    }
    lines.push(json!({
        "product": rational_strings(product.coords()),
        "hom_norm": product.hom_norm(),
    }));
    Ok(lines)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    Conjugation,
    FlowDistance,
    Equivalence,
    QuasiTriangle,
    Path,
    Splitting,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CcParams {
    segments: Option<usize>,
    budget: usize,
    tolerance: f64,
    random_starts: usize,
}

impl Default for CcParams {
    fn default() -> Self {
        let d = CcOptions::default();
        Self {
            segments: d.segments,
            budget: d.budget,
            tolerance: d.tolerance,
            random_starts: d.random_starts,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeParams {
    lemma: Lemma,
    #[serde(default = "default_samples")]
    samples: usize,
    /// flow-distance only; `null` draws λ uniformly
    #[serde(default)]
    lambda: Option<f64>,
    /// equivalence only
    #[serde(default)]
    cc: CcParams,
}

fn default_samples() -> usize {
    10_000
}

fn probe(alg: &Arc<StratifiedAlgebra>, p: &ProbeParams, seed: u64) -> Result<metric::ConstantsReport, Failure> {
    if p.samples == 0 {
        return Err(Failure::Usage("`samples` must be positive".into()));
    }
    if p.lambda.is_some() && p.lemma != Lemma::FlowDistance {
        return Err(Failure::Usage("`lambda` applies to the flow-distance lemma only".into()));
    }
    if let Some(l) = p.lambda {
        if !(l > 0.0 && l < 1.0) {
            return Err(Failure::Usage(format!("`lambda` must lie in (0, 1), got {l}")));
        }
    }
    Ok(match p.lemma {
        Lemma::Conjugation => metric::check_conjugation_bound(alg, p.samples, seed),
        Lemma::FlowDistance => metric::check_flow_distance(alg, p.samples, seed, p.lambda),
        Lemma::Equivalence => {
            let opts = CcOptions {
                segments: p.cc.segments,
                budget: p.cc.budget,
                tolerance: p.cc.tolerance,
                random_starts: p.cc.random_starts,
                seed,
                initial: None,
            };
            metric::estimate_norm_equivalence(alg, p.samples, seed, &opts)?
        }
        Lemma::QuasiTriangle => metric::quasi_triangle_constant(alg, p.samples, seed),
        Lemma::Path => metric::path_constant(alg, p.samples, seed)?,
        Lemma::Splitting => metric::splitting_constant(alg, p.samples, seed)?,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitParams {
    /// pairs `[U, V]` of first-layer coefficient vectors
    #[serde(default)]
    pairs: Vec<(Vec<Exact>, Vec<Exact>)>,
    #[serde(rename = "U", default, skip_serializing)]
    u: Option<Vec<Exact>>,
    #[serde(rename = "V", default, skip_serializing)]
    v: Option<Vec<Exact>>,
}

fn word_json(w: &HorizontalWord<Rational>) -> Value {
    let m = w.algebra().horizontal_dim();
    Value::Array(
        w.steps()
            .iter()
            .map(|s| {
                json!({
                    "t": format_rational(&s.t),
                    "direction": rational_strings(&s.direction.coeffs()[..m]),
                })
            })
            .collect(),
    )
}

impl SplitParams {
    // folds the `U`, `V` shorthand into `pairs`
    fn normalize(&mut self) -> Result<(), Failure> {
        match (self.u.take(), self.v.take()) {
            (Some(u), Some(v)) => self.pairs.insert(0, (u, v)),
            (None, None) => {}
            _ => return Err(Failure::Usage("give both `U` and `V`".into())),
        }
        if self.pairs.is_empty() {
            return Err(Failure::Usage("no (U, V) pair given".into()));
        }
        Ok(())
    }
}

fn split(alg: &Arc<StratifiedAlgebra>, p: &SplitParams) -> Result<Value, Failure> {
    let mut results = Vec::with_capacity(p.pairs.len());
    for (u, v) in &p.pairs {
        let u = LieVector::horizontal(alg.clone(), &exact(u))?;
        let v = LieVector::horizontal(alg.clone(), &exact(v))?;
        let s = split_sum(&u, &v)?;
        let endpoint = s.word.endpoint();
        let target = GroupPoint::exp(&u.add(&v)?);
        if endpoint != target {
            return Err(Failure::Invariant("split_sum word does not reach exp(U+V)".into()));
        }
        results.push(json!({
            "U": rational_strings(&u.coeffs()[..alg.horizontal_dim()]),
            "V": rational_strings(&v.coeffs()[..alg.horizontal_dim()]),
            "word": word_json(&s.word),
            "operands": s.operands,
            "rho": rational_strings(&s.rho),
            "N": s.steps,
            "max_abs_rho": format_rational(&s.max_rho),
            "constant": s.constant(),
            "degenerate": s.degenerate,
            "length": s.word.length(),
            "endpoint": rational_strings(endpoint.coords()),
            "exact": true,
        }));
    }
    Ok(json!({ "splittings": results }))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathParams {
    points: Vec<Vec<Exact>>,
}

fn path(alg: &Arc<StratifiedAlgebra>, p: &PathParams) -> Result<Value, Failure> {
    if p.points.is_empty() {
        return Err(Failure::Usage("no points given".into()));
    }
    let mut results = Vec::with_capacity(p.points.len());
    for c in &p.points {
        let h = point(alg, c)?;
        let d = path_decompose(&h)?;
        if d.word.endpoint() != h {
            return Err(Failure::Invariant("path_decompose word does not reach h".into()));
        }
        results.push(json!({
            "h": rational_strings(h.coords()),
            "word": word_json(&d.word),
            "M": d.steps,
            "step_bound": d.step_bound,
            "total_time": format_rational(&d.total_time),
            "hom_norm": d.hom_norm,
            "ratio": d.ratio,
            "scale": format_rational(&d.scale),
            "exact": true,
        }));
    }
    Ok(json!({ "paths": results }))
}

/// A builtin corpus name or an inline sample list for a McShane extension.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Builtin(String),
    Samples(SampleField),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleField {
    #[serde(default = "sample_field_name")]
    name: String,
    samples: Vec<Sample>,
    /// `null` uses the smallest compatible constant
    #[serde(default)]
    lipschitz: Option<f64>,
}

fn sample_field_name() -> String {
    "samples".into()
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldParams {
    field: FieldSpec,
    /// `linear-v` coefficients
    #[serde(default)]
    v: Option<Vec<Num>>,
    /// extra rays sampled by `heis-sqrt`
    #[serde(default)]
    probe_directions: Vec<Vec<Num>>,
}

fn build_field(alg: &Arc<StratifiedAlgebra>, p: &FieldParams) -> Result<(ScalarField, Value), Failure> {
    let name = match &p.field {
        FieldSpec::Builtin(name) => name.as_str(),
        FieldSpec::Samples(_) => "",
    };
    if p.v.is_some() && name != "linear-v" {
        return Err(Failure::Usage("`v` applies to the linear-v field only".into()));
    }
    if !p.probe_directions.is_empty() && name != "heis-sqrt" {
        return Err(Failure::Usage("`probe_directions` applies to the heis-sqrt field only".into()));
    }
    match &p.field {
        FieldSpec::Builtin(name) => {
            let opts = CorpusOptions {
                v: p.v.as_ref().map(|v| floats(v)),
                probe_directions: p.probe_directions.iter().map(|d| floats(d)).collect(),
            };
            let f = corpus(name, alg, &opts)?;
            let info = json!({"name": name, "provenance": f.provenance(), "lipschitz": f.lipschitz()});
            Ok((f, info))
        }
        FieldSpec::Samples(s) => {
            let l = match s.lipschitz {
                Some(l) => l,
                None => minimal_lipschitz(alg, &s.samples)?,
            };
            let f = mcshane_extend(alg, s.samples.clone(), l, s.name.clone())?;
            let info = json!({"name": s.name, "provenance": f.provenance(), "lipschitz": l, "samples": s.samples.len()});
            Ok((f, info))
        }
    }
}

// flattened, so unknown keys land in `extra` and are checked per task
#[derive(Debug, Serialize, Deserialize)]
struct AnalyzeParams {
    #[serde(flatten)]
    field: FieldParams,
    point: Vec<Num>,
    /// `dd`, `regularity`: horizontal direction as first-layer coefficients
    #[serde(default)]
    direction: Option<Vec<Num>>,
    /// `linearity`, `memberA`
    #[serde(rename = "U", default)]
    u: Option<Vec<Num>>,
    #[serde(rename = "V", default)]
    v_dir: Option<Vec<Num>>,
    #[serde(default)]
    ladder: Ladder,
    #[serde(default)]
    side: Option<Sidedness>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PansuParams {
    #[serde(default = "pansu_scales")]
    scales: Vec<f64>,
    #[serde(default = "default_probe_samples")]
    samples: usize,
    /// full-dimensional unit vectors; `null` samples the unit sphere
    #[serde(default)]
    directions: Option<Vec<Vec<Num>>>,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_floor")]
    floor: f64,
}

fn pansu_scales() -> Vec<f64> {
    PansuOptions::default().scales
}

fn default_probe_samples() -> usize {
    64
}

fn default_tol() -> f64 {
    PansuOptions::default().tol
}

fn default_floor() -> f64 {
    PansuOptions::default().floor
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegularityParams {
    #[serde(default = "default_probe_samples")]
    samples: usize,
    #[serde(default)]
    extra: Vec<Vec<Num>>,
    #[serde(default = "default_threshold")]
    threshold: f64,
}

fn default_threshold() -> f64 {
    RegularityOptions::default().threshold
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberParams {
    #[serde(default)]
    y: f64,
    #[serde(default)]
    z: f64,
    epsilon: f64,
    #[serde(default = "default_delta")]
    delta: f64,
    #[serde(default = "default_ppo")]
    points_per_octave: usize,
    #[serde(default = "default_octaves")]
    octaves: usize,
    /// `null` uses the splitting surrogate of `split_sum(U, V)`
    #[serde(default)]
    c2: Option<f64>,
}

fn default_delta() -> f64 {
    MembershipOptions::default().delta
}

fn default_ppo() -> usize {
    MembershipOptions::default().points_per_octave
}

fn default_octaves() -> usize {
    MembershipOptions::default().octaves
}

fn required(v: &Option<Vec<Num>>, key: &str, task: &str) -> Result<Vec<f64>, Failure> {
    v.as_ref()
        .map(|v| floats(v))
        .ok_or_else(|| Failure::Usage(format!("task `{task}` needs `{key}`")))
}

fn horizontal_to_full(alg: &StratifiedAlgebra, e: &[f64]) -> Result<Vec<f64>, Failure> {
    if e.len() != alg.horizontal_dim() {
        return Err(Error::DimensionMismatch { expected: alg.horizontal_dim(), found: e.len() }.into());
    }
    Ok(e.to_vec())
}

fn analyze(task: &str, alg: &Arc<StratifiedAlgebra>, map: Map<String, Value>, seed: u64) -> Result<(Value, Value), Failure> {
    let p: AnalyzeParams =
        serde_json::from_value(Value::Object(map)).map_err(|e| Failure::Usage(format!("task parameters: {e}")))?;
    let extra = Value::Object(p.extra.clone());
    let (f, info) = build_field(alg, &p.field)?;
    let x = floats(&p.point);
    let uses = |keys: &[&str], present: &[(&str, bool)]| -> Result<(), Failure> {
        for (k, on) in present {
            if *on && !keys.contains(k) {
                return Err(Failure::Usage(format!("task `{task}` does not take `{k}`")));
            }
        }
        Ok(())
    };
    uses(
        match task {
            "dd" | "regularity" => &["direction"],
            "linearity" => &["U", "V", "side"],
            "memberA" => &["U", "V", "side"],
            _ => &[],
        },
        &[
            ("direction", p.direction.is_some()),
            ("U", p.u.is_some()),
            ("V", p.v_dir.is_some()),
            ("side", p.side.is_some()),
        ],
    )?;
    fn sub<T: DeserializeOwned + Serialize>(extra: &Value) -> Result<(T, Value), Failure> {
        let t: T = serde_json::from_value(extra.clone()).map_err(|e| Failure::Usage(format!("task parameters: {e}")))?;
        let v = serde_json::to_value(&t).expect("parameters serialize");
        Ok((t, v))
    }
    let no_extra = || -> Result<Value, Failure> { sub::<NoParams>(&extra).map(|(_, v)| v) };

    let (result, specific) = match task {
        "dd" => {
            let e = horizontal_to_full(alg, &required(&p.direction, "direction", task)?)?;
            let d = directional_derivative(&f, &x, &e, &p.ladder)?;
            (serde_json::to_value(&d).expect("serializable"), no_extra()?)
        }
        "grad" => {
            let g = horizontal_gradient(&f, &x, &p.ladder)?;
            (serde_json::to_value(&g).expect("serializable"), no_extra()?)
        }
        "linearity" => {
            let u = horizontal_to_full(alg, &required(&p.u, "U", task)?)?;
            let v = horizontal_to_full(alg, &required(&p.v_dir, "V", task)?)?;
            let side = p.side.unwrap_or(Sidedness::TwoSided);
            let d = linearity_defect(&f, &x, &u, &v, &p.ladder, side)?;
            (serde_json::to_value(&d).expect("serializable"), no_extra()?)
        }
        "pansu" => {
            let (q, resolved) = sub::<PansuParams>(&extra)?;
            let opts = PansuOptions {
                scales: q.scales,
                samples: q.samples,
                directions: q.directions.map(|d| d.iter().map(|u| floats(u)).collect()),
                seed,
                tol: q.tol,
                floor: q.floor,
                ladder: p.ladder,
            };
            let r = pansu_quotient(&f, &x, &opts)?;
            (serde_json::to_value(&r).expect("serializable"), resolved)
        }
        "regularity" => {
            let e = horizontal_to_full(alg, &required(&p.direction, "direction", task)?)?;
            let (q, resolved) = sub::<RegularityParams>(&extra)?;
            let opts = RegularityOptions {
                ladder: p.ladder,
                samples: q.samples,
                extra: q.extra.iter().map(|u| floats(u)).collect(),
                seed,
                threshold: q.threshold,
            };
            let r = regularity_defect(&f, &x, &e, &opts)?;
            (serde_json::to_value(&r).expect("serializable"), resolved)
        }
        "memberA" => {
            let u = horizontal_to_full(alg, &required(&p.u, "U", task)?)?;
            let v = horizontal_to_full(alg, &required(&p.v_dir, "V", task)?)?;
            let (q, resolved) = sub::<MemberParams>(&extra)?;
            let opts = MembershipOptions {
                delta: q.delta,
                points_per_octave: q.points_per_octave,
                octaves: q.octaves,
                side: p.side.unwrap_or(Sidedness::TwoSided),
                c2: q.c2,
            };
            let r = membership_a(&f, &x, &u, &v, q.y, q.z, q.epsilon, &opts)?;
            (serde_json::to_value(&r).expect("serializable"), resolved)
        }
        other => unreachable!("not an analysis task: {other}"),
    };

    let mut resolved = serde_json::to_value(&p).expect("parameters serialize");
    let obj = resolved.as_object_mut().expect("object");
    for key in p.extra.keys() {
        obj.remove(key);
    }
    if let Value::Object(s) = specific {
        obj.extend(s);
    }
    if let Some(side) = p.side.or(matches!(task, "linearity" | "memberA").then_some(Sidedness::TwoSided)) {
        obj.insert("side".into(), serde_json::to_value(side).expect("serializable"));
    }
    for key in ["U", "V", "direction", "side"] {
        if obj.get(key).is_some_and(Value::is_null) {
            obj.remove(key);
        }
    }
    // field options only echo for the fields that read them
    let builtin = match &p.field.field {
        FieldSpec::Builtin(name) => name.as_str(),
        FieldSpec::Samples(_) => "",
    };
    if builtin != "linear-v" {
        obj.remove("v");
    }
    if builtin != "heis-sqrt" {
        obj.remove("probe_directions");
    }
    Ok((json!({"field": info, "estimate": result}), resolved))
}

/// Test sets for the porosity probe.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SetKind {
    /// `{x_1 = 0}`
    Hyperplane,
    /// closed unit ball of the homogeneous norm
    Ball,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PorosityParams {
    set: SetKind,
    point: Vec<Num>,
    #[serde(default = "porosity_lambdas")]
    lambdas: Vec<f64>,
    #[serde(default = "porosity_scales")]
    scales: Vec<f64>,
    #[serde(default = "porosity_candidates")]
    candidates: usize,
    #[serde(default = "porosity_ball_samples")]
    ball_samples: usize,
}

fn porosity_lambdas() -> Vec<f64> {
    PorosityOptions::default().lambdas
}

fn porosity_scales() -> Vec<f64> {
    PorosityOptions::default().scales
}

fn porosity_candidates() -> usize {
    PorosityOptions::default().candidates
}

fn porosity_ball_samples() -> usize {
    PorosityOptions::default().ball_samples
}

fn porosity(
    alg: &Arc<StratifiedAlgebra>,
    p: &PorosityParams,
    seed: u64,
) -> Result<carnot_core::analysis::ProbeReport, Failure> {
    let opts = PorosityOptions {
        lambdas: p.lambdas.clone(),
        scales: p.scales.clone(),
        candidates: p.candidates,
        ball_samples: p.ball_samples,
        seed,
    };
    let a = floats(&p.point);
    let alg2 = alg.clone();
    let report = match p.set {
        SetKind::Hyperplane => porosity_probe(alg, &|x: &[f64]| x[0] == 0.0, &a, &opts)?,
        SetKind::Ball => porosity_probe(alg, &move |x: &[f64]| hom_norm_f64(&alg2, x) <= 1.0, &a, &opts)?,
    };
    Ok(report)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteParams {
    #[serde(default = "default_suite")]
    name: String,
}

fn default_suite() -> String {
    "all".into()
}
