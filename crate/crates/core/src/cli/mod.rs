//! Input files, run configuration, JSON reports and batch runs.

pub mod parse;
pub mod svg;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{
    classify_operator, newton_polygon, ser, ClassifyError, ClassifyOptions, GroupDesc, NewtonPolygon, TraceStep,
    Witness,
};
use crate::field::qpoly::QVec;
use crate::field::{Case, Constants, Ctx, DiffFieldSpec, Level, SpecError};
use crate::ore::{gauge, OreOp};
use crate::transcend::{transcendence_check, TranscendError, TranscendenceReport};

pub use parse::{parse_constant, parse_matrix, parse_operator, parse_ratfunc, ParseError, Scope};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Config(_) => 3,
            CliError::Unsupported(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::UnsupportedOrder(_) | ClassifyError::UnsupportedCase => CliError::Unsupported(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<TranscendError> for CliError {
    fn from(e: TranscendError) -> Self {
        match e {
            TranscendError::UnsupportedOrder(_) => CliError::Unsupported(e.to_string()),
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub case: String,
    /// h (case S) or q (case Q), as text.
    pub param: String,
    pub ramification: u32,
    pub substitutions: BTreeMap<String, String>,
    pub allow_extensions: bool,
    pub transcendence_bound: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: "S".into(),
            param: "1".into(),
            ramification: 1,
            substitutions: BTreeMap::new(),
            allow_extensions: false,
            transcendence_bound: None,
        }
    }
}

/// An operator text together with the header of its input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputFile {
    pub config: RunConfig,
    pub operator: String,
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected a boolean, got '{v}'"))),
    }
}

impl RunConfig {
    /// Applies one `key: value` header entry.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key.trim() {
            "case" => {
                let c = v.to_ascii_uppercase();
                if c != "S" && c != "Q" {
                    return Err(CliError::Unsupported(format!("case '{v}' (expected S or Q)")));
                }
                self.case = c;
            }
            "q" | "h" | "param" => self.param = v.to_string(),
            "ramification" => {
                self.ramification = v
                    .parse()
                    .map_err(|_| CliError::Config(format!("ramification: expected a positive integer, got '{v}'")))?;
            }
            "allow_extensions" => self.allow_extensions = parse_bool(key, v)?,
            "transcendence" => {
                let b = v
                    .parse()
                    .map_err(|_| CliError::Config(format!("transcendence: expected an integer, got '{v}'")))?;
                self.transcendence_bound = Some(b);
            }
            name => {
                if !name.chars().all(|c| c.is_alphanumeric() || c == '_') || name.is_empty() {
                    return Err(CliError::Config(format!("bad parameter name '{name}'")));
                }
                self.substitutions.insert(name.to_string(), v.to_string());
            }
        }
        Ok(())
    }

    fn case_enum(&self) -> Case {
        if self.case == "Q" {
            Case::Q
        } else {
            Case::S
        }
    }

    fn param_name(&self) -> &'static str {
        match self.case_enum() {
            Case::S => "h",
            Case::Q => "q",
        }
    }

    /// Difference field and the name bindings for operator text.
    pub fn context(&self) -> Result<(Ctx, Scope), CliError> {
        self.context_with(Constants::new())
    }

    fn context_with(&self, consts: Constants) -> Result<(Ctx, Scope), CliError> {
        let mut scope = Scope::new(consts.clone());
        let param = parse_constant(&self.param, &scope)?;
        let case = self.case_enum();
        if case == Case::Q && (param.is_zero() || param.is_root_of_unity()) {
            return Err(CliError::Config(format!("q = {param} is zero or a root of unity")));
        }
        let spec = DiffFieldSpec::ramified(case, param.clone(), self.ramification, &consts)?;
        scope.bind(self.param_name(), param);
        for (name, text) in &self.substitutions {
            let v = parse_constant(text, &scope)?;
            scope.bind(name, v);
        }
        Ok((Ctx::new(spec, consts), scope))
    }
}

/// Header lines `key: value` (or `key = value`), `#` comments, then `op:` with the operator,
/// which may continue over the following lines.
pub fn parse_input(text: &str) -> Result<InputFile, CliError> {
    let mut config = RunConfig::default();
    let mut op: Option<String> = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        if let Some(o) = op.as_mut() {
            o.push(' ');
            o.push_str(line.trim());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once(':').or_else(|| line.split_once('=')) else {
            return Err(CliError::Config(format!(
                "expected 'key: value', got '{}'",
                line.trim()
            )));
        };
        if k.trim() == "op" {
            op = Some(v.trim().to_string());
        } else {
            config.set(k, v)?;
        }
    }
    let operator = op.ok_or_else(|| CliError::Config("missing 'op:' line".into()))?;
    Ok(InputFile {
        config,
        operator: operator.trim().to_string(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub operator: String,
    pub normalized: String,
    pub config: RunConfig,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerLevel {
    pub name: String,
    /// Minimal polynomial over Q, coefficients in increasing degree.
    pub minpoly: Vec<String>,
    /// Previous generator as a polynomial in this one.
    pub parent_gen: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificates {
    #[serde(serialize_with = "ser::matrix")]
    pub input: crate::ore::MatK,
    #[serde(serialize_with = "ser::matrix")]
    pub gauge: crate::ore::MatK,
    #[serde(serialize_with = "ser::matrix")]
    pub reduced: crate::ore::MatK,
    pub reduced_exact: bool,
    pub gauge_verified: bool,
    pub membership_verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timings {
    pub classify_ms: f64,
    pub transcendence_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub tower_depth: usize,
    pub tower: Vec<TowerLevel>,
    pub trace: Vec<TraceStep>,
    pub timings: Timings,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u64,
    pub input: InputEcho,
    pub classification: GroupDesc,
    pub certificates: Certificates,
    pub witnesses: Vec<Witness>,
    pub newton: Option<NewtonPolygon>,
    pub transcendence: Option<TranscendenceReport>,
    pub diagnostics: Diagnostics,
}

fn qvec_strings(v: &QVec) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn tower_levels(consts: &Constants) -> Vec<TowerLevel> {
    let mut out = Vec::new();
    let mut cur = consts.top();
    while let Some(l) = cur {
        out.push(TowerLevel {
            name: l.generator_name(),
            minpoly: qvec_strings(&l.minpoly),
            parent_gen: qvec_strings(&l.parent_gen),
        });
        cur = l.parent.clone();
    }
    out.reverse();
    out
}

/// Classification of one operator, with the optional ∂-transcendence check.
pub fn run(input: &InputFile) -> Result<Report, CliError> {
    let (ctx, scope) = input.config.context()?;
    let l = parse_operator(&input.operator, &scope, &ctx)?;
    let order = l.order().unwrap_or(0);
    if !(1..=3).contains(&order) {
        return Err(CliError::Unsupported(format!("operator of order {order}")));
    }
    if l.coeff(0).is_zero() {
        return Err(CliError::Config("trailing coefficient vanishes".into()));
    }
    let opts = ClassifyOptions {
        allow_extensions: input.config.allow_extensions,
        ..ClassifyOptions::default()
    };
    let t0 = Instant::now();
    let c = classify_operator(&l, &ctx, &opts)?;
    let classify_ms = t0.elapsed().as_secs_f64() * 1e3;
    let newton = (ctx.spec.case == Case::Q).then(|| newton_polygon(&l)).transpose()?;
    let (transcendence, transcendence_ms) = match input.config.transcendence_bound {
        Some(b) if order == 3 => {
            let t1 = Instant::now();
            let r = transcendence_check(&l, b, &ctx)?;
            (Some(r), Some(t1.elapsed().as_secs_f64() * 1e3))
        }
        Some(_) => return Err(CliError::Unsupported("the transcendence check needs order 3".into())),
        None => (None, None),
    };
    Ok(Report {
        schema: SCHEMA_VERSION,
        input: InputEcho {
            operator: input.operator.clone(),
            normalized: l.to_expr(),
            config: input.config.clone(),
        },
        classification: c.group.clone(),
        certificates: Certificates {
            input: c.input.clone(),
            gauge: c.gauge.clone(),
            reduced: c.reduced.clone(),
            reduced_exact: c.reduced_exact,
            gauge_verified: c.certificate_holds(),
            membership_verified: c.membership_holds(),
        },
        witnesses: c.witnesses,
        newton,
        transcendence,
        diagnostics: Diagnostics {
            tower_depth: ctx.consts.depth(),
            tower: tower_levels(&ctx.consts),
            trace: c.trace,
            timings: Timings {
                classify_ms,
                transcendence_ms,
            },
        },
    })
}

fn field<'a>(v: &'a Value, path: &[&str]) -> Result<&'a Value, String> {
    let mut cur = v;
    for k in path {
        cur = cur.get(k).ok_or_else(|| format!("missing field {}", path.join(".")))?;
    }
    Ok(cur)
}

fn str_rows(v: &Value) -> Result<Vec<Vec<String>>, String> {
    let rows = v.as_array().ok_or("matrix is not an array")?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or("matrix row is not an array".to_string())?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or("matrix entry is not a string".to_string())
                })
                .collect()
        })
        .collect()
}

fn qvec_from(v: &Value) -> Result<QVec, String> {
    v.as_array()
        .ok_or("expected an array of rationals")?
        .iter()
        .map(|x| {
            x.as_str()
                .ok_or("expected a string".to_string())?
                .parse::<BigRational>()
                .map_err(|e| e.to_string())
        })
        .collect()
}

/// Rebuilds the constant tower recorded in a report.
fn rebuild_tower(levels: &Value) -> Result<Constants, String> {
    let consts = Constants::new();
    let mut parent: Option<Arc<Level>> = None;
    for l in levels.as_array().ok_or("tower is not an array")? {
        let level = Level::new(
            qvec_from(field(l, &["minpoly"])?)?,
            parent.clone(),
            qvec_from(field(l, &["parent_gen"])?)?,
        );
        consts.set_top(level.clone());
        parent = Some(level);
    }
    Ok(consts)
}

/// Checks a serialized report: schema, required fields, and B = φ(T)·A·T⁻¹ after re-parsing.
pub fn validate_report(v: &Value) -> Result<(), String> {
    if field(v, &["schema"])?.as_u64() != Some(SCHEMA_VERSION) {
        return Err("unknown schema version".into());
    }
    field(v, &["classification", "kind"])?
        .as_str()
        .ok_or("classification.kind is not a string")?;
    for k in ["trace", "tower_depth", "timings"] {
        field(v, &["diagnostics", k])?;
    }
    let cfg = field(v, &["input", "config"])?;
    let mut config = RunConfig::default();
    for key in ["case", "param"] {
        config
            .set(key, field(cfg, &[key])?.as_str().ok_or("config entry is not a string")?)
            .map_err(|e| e.to_string())?;
    }
    config.ramification = field(cfg, &["ramification"])?.as_u64().ok_or("bad ramification")? as u32;
    if let Some(subs) = field(cfg, &["substitutions"])?.as_object() {
        for (k, x) in subs {
            config
                .set(k, x.as_str().ok_or("substitution is not a string")?)
                .map_err(|e| e.to_string())?;
        }
    }
    let consts = rebuild_tower(field(v, &["diagnostics", "tower"])?)?;
    let (ctx, scope) = config.context_with(consts).map_err(|e| e.to_string())?;
    let mat = |k: &str| -> Result<crate::ore::MatK, String> {
        parse_matrix(&str_rows(field(v, &["certificates", k])?)?, &scope, &ctx).map_err(|e| e.to_string())
    };
    let (a, t, b) = (mat("input")?, mat("gauge")?, mat("reduced")?);
    let l = parse_operator(
        field(v, &["input", "normalized"])?
            .as_str()
            .ok_or("normalized is not a string")?,
        &scope,
        &ctx,
    )
    .map_err(|e| e.to_string())?;
    if l.companion().map_err(|e| e.to_string())? != a {
        return Err("input matrix is not the companion matrix of the operator".into());
    }
    if gauge(&a, &t).map_err(|e| e.to_string())? != b {
        return Err("reduced ≠ φ(gauge)·input·gauge⁻¹".into());
    }
    Ok(())
}

/// One entry of a batch run: the report or the error with its exit code.
#[derive(Debug, Serialize)]
pub struct BatchEntry {
    pub source: String,
    pub report: Option<Report>,
    pub error: Option<String>,
    pub exit_code: i32,
}

/// Runs independent inputs concurrently; entries keep the input order.
pub fn run_batch(inputs: &[(String, String)]) -> Vec<BatchEntry> {
    inputs
        .par_iter()
        .map(|(source, text)| match parse_input(text).and_then(|f| run(&f)) {
            Ok(r) => BatchEntry {
                source: source.clone(),
                report: Some(r),
                error: None,
                exit_code: 0,
            },
            Err(e) => BatchEntry {
                source: source.clone(),
                report: None,
                error: Some(e.to_string()),
                exit_code: e.exit_code(),
            },
        })
        .collect()
}

/// Report as a JSON value.
pub fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).unwrap_or_else(|e| json!({ "error": e.to_string() }))
}

/// Parses operator text under a configuration.
pub fn operator_from(config: &RunConfig, text: &str) -> Result<(OreOp, Ctx), CliError> {
    let (ctx, scope) = config.context()?;
    Ok((parse_operator(text, &scope, &ctx)?, ctx))
}

#[cfg(test)]
mod tests;
