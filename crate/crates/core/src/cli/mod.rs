//! Command-line front end. Every command prints one JSON report (or `key: value` lines with
//! `--format text`) echoing its configuration, seed, tolerance and the library version.
//!
//! Exit codes: 0 success, 2 malformed input, 3 degenerate configuration, 4 inconclusive or
//! unstable result.

pub mod parse;
pub mod render;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::birational::{is_caustic_birational, is_projection_birational, MatrixCurve};
use crate::caustic::{
    caustic_degree, degree_d, envelope_points, gamma_degree, point_caustic, DEFAULT_FIT_TOL,
};
use crate::detgeom::{classify_pencil, pencil_det_form, Pencil, PencilClass};
use crate::error::{Error, Result};
use crate::euclid::{to_cx, Curve};
use crate::poly::{Cx, GRat, DEFAULT_ROOT_TOL};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Degree of Γ, the class of the caustic
    Class,
    /// Fiber test of the caustic map P ↦ Λ_P
    Birational,
    /// Fiber test of the projections of a matrix curve
    Project,
    /// Classify a pencil of symmetric matrices
    Pencil,
    /// Envelope points of the reflected family
    Envelope,
    /// Implicit equation of the caustic
    Implicit,
    /// Normal counts and the degree of D
    Normals,
    /// SVG picture of rays and envelope
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "caustics", version, about = "Caustics by reflection of plane algebraic curves")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Homogeneous polynomial in x0, x1, x2
    #[arg(long)]
    pub curve: Option<String>,
    /// Source point as three comma separated coordinates
    #[arg(long, allow_hyphen_values = true)]
    pub source: Option<String>,
    /// JSON file with slots b00..b22, each a polynomial in t
    #[arg(long)]
    pub matrix_curve: Option<PathBuf>,
    /// Pencil generator b00,b01,b02,b11,b12,b22
    #[arg(long, allow_hyphen_values = true)]
    pub b0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b1: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Write the report (or the SVG for render) here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// xmin,xmax,ymin,ymax
    #[arg(long, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
    pub viewport: String,
    #[arg(long, default_value_t = 24)]
    pub rays: usize,
}

/// What a command produced: a JSON report, plus an SVG document for `render`.
#[derive(Clone, Debug)]
pub struct Output {
    pub report: Value,
    pub svg: Option<String>,
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

fn load_curve(cfg: &RunConfig) -> Result<Curve> {
    Curve::new(parse::parse_curve(required(&cfg.curve, "curve")?)?)
}

fn load_source(cfg: &RunConfig) -> Result<[crate::poly::Rat; 3]> {
    parse::parse_point(required(&cfg.source, "source")?)
}

fn grat_strings(v: &[GRat; 3]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

fn cx_pair(z: &Cx) -> Value {
    json!([z.re, z.im])
}

fn point_json(p: &[Cx; 3]) -> Value {
    Value::Array(p.iter().map(cx_pair).collect())
}

fn to_object(v: impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("reports serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    }
}

fn finish(cfg: &RunConfig, mut body: Map<String, Value>, tolerance: f64) -> Value {
    body.insert("command".into(), serde_json::to_value(cfg.command).expect("enum"));
    body.insert("config".into(), serde_json::to_value(cfg).expect("config"));
    body.insert("seed".into(), json!(cfg.seed));
    body.entry("tolerance").or_insert(json!(tolerance));
    body.insert("version".into(), json!(VERSION));
    Value::Object(body)
}

pub fn cmd_class(cfg: &RunConfig) -> Result<Value> {
    let curve = load_curve(cfg)?;
    let source = load_source(cfg)?;
    let mut report = gamma_degree(&curve, &source, cfg.seed)?;
    if let Some(max_degree) = cfg.max_degree {
        let tol = cfg.tol.unwrap_or(DEFAULT_FIT_TOL);
        let n = cfg.samples.unwrap_or((max_degree + 1) * (max_degree + 2) / 2 + 10);
        match caustic_degree(&curve, &to_cx(&source), n, max_degree, cfg.seed, tol) {
            Ok(fit) => {
                report.caustic_degree = Some(fit.degree);
                report.implicit_equation = Some(fit.equation.to_string());
            }
            Err(Error::PointCaustic) => report.caustic_degree = Some(0),
            Err(e) => return Err(e),
        }
    }
    let tol = report.tolerance;
    Ok(finish(cfg, to_object(report), tol))
}

pub fn cmd_birational(cfg: &RunConfig) -> Result<Value> {
    let curve = load_curve(cfg)?;
    let source = load_source(cfg)?;
    let report = is_caustic_birational(&curve, &source, cfg.samples.unwrap_or(5), cfg.seed)?;
    let tol = report.tolerance;
    Ok(finish(cfg, to_object(report), tol))
}

pub fn cmd_project(cfg: &RunConfig) -> Result<Value> {
    let path = cfg.matrix_curve.as_ref().ok_or_else(|| Error::InvalidInput("missing --matrix-curve".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let d = MatrixCurve::new(parse::parse_matrix_curve_json(&text)?)?;
    let report = is_projection_birational(&d, cfg.samples.unwrap_or(5), cfg.seed)?;
    let mut body = to_object(&report);
    body.insert("matrix_degree".into(), json!(d.degree()));
    body.insert("span_dimension".into(), json!(d.span_dimension()));
    Ok(finish(cfg, body, 0.0))
}

pub fn cmd_pencil(cfg: &RunConfig) -> Result<Value> {
    let b0 = parse::parse_sym_matrix(required(&cfg.b0, "b0")?)?;
    let b1 = parse::parse_sym_matrix(required(&cfg.b1, "b1")?)?;
    let p = Pencil::new(b0, b1)?;
    let form = pencil_det_form(&p);
    let mut body = Map::new();
    body.insert("det_form".into(), json!(form.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    match classify_pencil(&p)? {
        PencilClass::NotInDelta => {
            body.insert("class".into(), json!("not_in_delta"));
            body.insert("delta_s".into(), Value::Null);
            body.insert("delta_l".into(), Value::Null);
        }
        PencilClass::InDelta { delta_s, delta_l } => {
            body.insert("class".into(), json!("in_delta"));
            body.insert("delta_s".into(), delta_s.as_ref().map_or(Value::Null, |s| json!(grat_strings(s))));
            body.insert("delta_l".into(), delta_l.as_ref().map_or(Value::Null, |l| json!(grat_strings(l))));
        }
    }
    Ok(finish(cfg, body, 0.0))
}

pub fn cmd_envelope(cfg: &RunConfig) -> Result<Value> {
    let curve = load_curve(cfg)?;
    let source = load_source(cfg)?;
    let tol = cfg.tol.unwrap_or(1e-6);
    let pts = envelope_points(&curve, &to_cx(&source), cfg.samples.unwrap_or(40), cfg.seed)?;
    if pts.is_empty() {
        return Err(Error::StationaryFamily);
    }
    let mut body = Map::new();
    if let Some(p) = point_caustic(&pts, tol) {
        body.insert("caustic".into(), json!("point caustic"));
        body.insert("point".into(), point_json(&p));
    } else {
        body.insert("caustic".into(), json!("curve"));
    }
    body.insert("points".into(), Value::Array(pts.iter().map(point_json).collect()));
    Ok(finish(cfg, body, tol))
}

pub fn cmd_implicit(cfg: &RunConfig) -> Result<Value> {
    let curve = load_curve(cfg)?;
    let source = load_source(cfg)?;
    let tol = cfg.tol.unwrap_or(DEFAULT_FIT_TOL);
    let max_degree = cfg.max_degree.unwrap_or(12);
    let n = cfg.samples.unwrap_or((max_degree + 1) * (max_degree + 2) / 2 + 10);
    let fit = caustic_degree(&curve, &to_cx(&source), n, max_degree, cfg.seed, tol)?;
    let mut body = Map::new();
    body.insert("degree".into(), json!(fit.degree));
    body.insert("equation".into(), json!(fit.equation.to_string()));
    body.insert("relative_sigma".into(), json!(fit.relative_sigma));
    body.insert("gap".into(), if fit.gap.is_finite() { json!(fit.gap) } else { Value::Null });
    body.insert("samples".into(), json!(n));
    Ok(finish(cfg, body, tol))
}

pub fn cmd_normals(cfg: &RunConfig) -> Result<Value> {
    let curve = load_curve(cfg)?;
    let report = degree_d(&curve, cfg.seed)?;
    let mut body = to_object(report);
    body.insert("bound_holds".into(), json!(report.degree_d >= 4));
    Ok(finish(cfg, body, DEFAULT_ROOT_TOL))
}

fn parse_viewport(s: &str) -> Result<render::Viewport> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad viewport value {x:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != 4 {
        return Err(Error::InvalidInput("viewport needs four values xmin,xmax,ymin,ymax".into()));
    }
    render::Viewport::new(v[0], v[1], v[2], v[3])
}

pub fn cmd_render(cfg: &RunConfig) -> Result<Output> {
    let curve = load_curve(cfg)?;
    let source = load_source(cfg)?;
    let spec = render::RenderSpec::new(parse_viewport(&cfg.viewport)?, cfg.rays);
    let r = render::render(&curve, &source, &spec)?;
    let mut body = Map::new();
    body.insert("render".into(), serde_json::to_value(&spec).expect("spec"));
    body.insert("real_points".into(), json!(r.real_points));
    body.insert("envelope_points".into(), json!(r.envelope_points));
    Ok(Output { report: finish(cfg, body, 0.0), svg: Some(r.svg) })
}

pub fn run(cfg: &RunConfig) -> Result<Output> {
    let report = match cfg.command {
        Command::Class => cmd_class(cfg)?,
        Command::Birational => cmd_birational(cfg)?,
        Command::Project => cmd_project(cfg)?,
        Command::Pencil => cmd_pencil(cfg)?,
        Command::Envelope => cmd_envelope(cfg)?,
        Command::Implicit => cmd_implicit(cfg)?,
        Command::Normals => cmd_normals(cfg)?,
        Command::Render => return cmd_render(cfg),
    };
    Ok(Output { report, svg: None })
}

/// `key: value` lines for the top-level fields.
pub fn to_text(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = report {
        for (k, v) in m {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    out
}

fn emit(cfg: &RunConfig, out: &Output) -> std::io::Result<()> {
    let text = match cfg.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.report).expect("json")),
        Format::Text => to_text(&out.report),
    };
    match (&out.svg, &cfg.out) {
        (Some(svg), Some(path)) => {
            std::fs::write(path, svg)?;
            std::io::stdout().write_all(text.as_bytes())
        }
        (Some(svg), None) => std::io::stdout().write_all(svg.as_bytes()),
        (None, Some(path)) => std::fs::write(path, text),
        (None, None) => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cfg) {
        Ok(out) => match emit(&cfg, &out) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                3
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
