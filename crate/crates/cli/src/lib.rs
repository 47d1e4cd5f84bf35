//! Command-line front end for `heisplane`.
//!
//! Every subcommand writes one document: JSON of the form
//! `{"input": .., "result": .., "diagnostics": ..}` or an SVG drawing. Module
//! errors become `{"error": {"kind": .., "detail": ..}}` with exit code 1;
//! malformed arguments exit with code 2.

mod json;
mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use heisplane::limits::{
    classify_algebra, conjugated_algebra_at, limit_algebra, subspace_distance, BaseAlgebra, DiagPath,
};
use heisplane::models::GeometryKind;
use heisplane::orbifolds::{deformation_membership, extend_holonomy, relation_residuals, OrbifoldType};
use heisplane::regeneration::{midlines, regenerate_sequence, translation_fundamental_domain, cone_torus_from_parallelogram};
use heisplane::rep::{classify_params_with_tol, normal_form, RepParams};
use heisplane::tori::{closed_geodesic_classes_with_tol, develop_tiling, dichotomy_check};
use heisplane::HeisElem;
use serde_json::{json, Value};

/// Default `--tol`.
pub const CLI_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "heisplane", version, about = "Heisenberg plane structures on tori and orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form and holonomy type of a representation.
    Classify {
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// SVG of the developed tiling of a complete torus.
    Develop {
        #[command(flatten)]
        rep: RepArgs,
        /// Tiles `m, n ∈ −N..=N`.
        #[arg(long, default_value_t = 2)]
        range: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Primitive classes up to `N` and which contain closed geodesics.
    Geodesics {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long = "max-class", default_value_t = 5)]
        max_class: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cone tori converging to a translation torus.
    Regenerate {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long, value_enum)]
        geometry: Geometry,
        #[arg(long, value_parser = parse_pair, default_value = "2,1")]
        exponents: [f64; 2],
        #[arg(long, value_parser = parse_list, default_value = "10,100,1000")]
        times: FloatList,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Conjugacy limit of a Lie algebra along a diagonal path.
    Limit {
        #[arg(long, value_enum)]
        algebra: Algebra,
        #[arg(long, value_parser = parse_pair, default_value = "2,1")]
        exponents: [f64; 2],
        #[arg(long, value_parser = parse_list, default_value = "10,100,1000,10000")]
        times: FloatList,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Membership and holonomy extension for one of the nine orbifolds.
    Orbifold {
        #[arg(long = "type")]
        orbifold: String,
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct RepArgs {
    /// `r,phi,theta,lambda`, or `r,phi,theta` together with `--uvec`.
    #[arg(long, value_parser = parse_list)]
    pub params: FloatList,
    /// Central part `w,z` of the representation, replacing `lambda`.
    #[arg(long, value_parser = parse_pair)]
    pub uvec: Option<[f64; 2]>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this path instead of stdout (a directory for per-time SVGs).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, conflicts_with = "svg")]
    pub json: bool,
    #[arg(long)]
    pub svg: bool,
    /// Classification tolerance, loose enough for decimals typed to six places.
    #[arg(long, default_value_t = CLI_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Geometry {
    Sph,
    Euc,
    Hyp,
}

impl From<Geometry> for GeometryKind {
    fn from(g: Geometry) -> Self {
        match g {
            Geometry::Sph => GeometryKind::Sph,
            Geometry::Euc => GeometryKind::Euc,
            Geometry::Hyp => GeometryKind::Hyp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Algebra {
    So3,
    So21,
    Euc2,
    Heis,
}

impl From<Algebra> for BaseAlgebra {
    fn from(a: Algebra) -> Self {
        match a {
            Algebra::So3 => BaseAlgebra::So3,
            Algebra::So21 => BaseAlgebra::So21,
            Algebra::Euc2 => BaseAlgebra::Euc2,
            Algebra::Heis => BaseAlgebra::Heis,
        }
    }
}

/// Comma-separated numbers given as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<FloatList, String> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()
        .map(FloatList)
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    match parse_list(s)?.0.as_slice() {
        [a, b] => Ok([*a, *b]),
        other => Err(format!("expected two comma-separated numbers, got {}", other.len())),
    }
}

/// Failure modes of one invocation.
enum Failure {
    Usage(String),
    Module(heisplane::Error),
    Io(std::io::Error),
}

impl From<heisplane::Error> for Failure {
    fn from(e: heisplane::Error) -> Self {
        Failure::Module(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

enum Format {
    Json,
    Svg,
}

impl OutputArgs {
    fn format(&self, default: Format) -> Format {
        match (self.json, self.svg) {
            (true, _) => Format::Json,
            (_, true) => Format::Svg,
            _ => default,
        }
    }

    fn json_only(&self) -> Result<(), Failure> {
        if self.svg {
            return Err(Failure::Usage("this subcommand has no SVG output".into()));
        }
        Ok(())
    }
}

impl RepArgs {
    fn params(&self) -> Result<RepParams, Failure> {
        match (self.params.0.as_slice(), self.uvec) {
            ([r, phi, theta, lambda], None) => Ok(RepParams::new(*r, *phi, *theta, *lambda)),
            ([r, phi, theta], Some(uvec)) => Ok(RepParams::with_uvec(*r, *phi, *theta, uvec)),
            (_, None) => Err(Failure::Usage("--params takes r,phi,theta,lambda".into())),
            (_, Some(_)) => Err(Failure::Usage("with --uvec, --params takes r,phi,theta".into())),
        }
    }

    fn input(&self, p: &RepParams) -> Value {
        let mut v = json!({ "r": p.r, "phi": p.phi, "theta": p.theta });
        match p.uvec {
            Some(u) => v["uvec"] = json!(u),
            None => v["lambda"] = json!(p.lambda),
        }
        v
    }
}

fn document(input: Value, result: Value, diagnostics: Value) -> Value {
    json!({ "input": input, "result": result, "diagnostics": diagnostics })
}

fn normal_form_json(p: &RepParams) -> Value {
    let mut v = json!({ "r": p.r, "phi": p.phi, "theta": p.theta, "lambda": p.lambda });
    if let Some(u) = p.uvec {
        v["uvec"] = json!(u);
    }
    v
}

fn matrix_json(g: &HeisElem) -> Value {
    let m = g.matrix();
    json!((0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect::<Vec<_>>())
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(v: &Value, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), Failure> {
    emit(&json::to_string(v), out, stdout)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { rep, out } => {
            out.json_only()?;
            let p = rep.params()?;
            let rho = p.to_rep();
            let nf = normal_form(&rho);
            let class = classify_params_with_tol(&nf, out.tol);
            let doc = document(
                rep.input(&p),
                json!({ "normal_form": normal_form_json(&nf), "class": class.name(), "complete": class.is_complete() }),
                json!({ "tol": out.tol, "in_variety": rho.in_variety() }),
            );
            emit_json(&doc, out.out.as_deref(), stdout)
        }
        Command::Develop { rep, range, out } => {
            let p = rep.params()?;
            let tiles = develop_tiling(&p, [0.0, 0.0], range)?;
            match out.format(Format::Svg) {
                Format::Svg => emit(&svg::tiling(&tiles), out.out.as_deref(), stdout),
                Format::Json => {
                    let result: Vec<Value> = tiles
                        .iter()
                        .map(|t| json!({ "m": t.m, "n": t.n, "corners": t.corners() }))
                        .collect();
                    let doc = document(
                        json!({ "params": rep.input(&p), "range": range }),
                        json!({ "tiles": result }),
                        json!({ "tile_count": tiles.len() }),
                    );
                    emit_json(&doc, out.out.as_deref(), stdout)
                }
            }
        }
        Command::Geodesics { rep, max_class, out } => {
            out.json_only()?;
            let p = rep.params()?;
            let classes = closed_geodesic_classes_with_tol(&p, max_class, out.tol)?;
            let closed: Vec<_> = classes.iter().filter(|c| c.closed).collect();
            let all_parallel = closed.iter().all(|c| closed.iter().all(|d| c.is_parallel_to(d, out.tol)));
            let doc = document(
                json!({ "params": rep.input(&p), "max_class": max_class }),
                json!({
                    "class": p.classify().name(),
                    "classes": classes,
                    "closed_count": closed.len(),
                    "all_parallel": all_parallel,
                }),
                json!({ "tol": out.tol, "dichotomy_holds": dichotomy_check(&p, max_class)? }),
            );
            emit_json(&doc, out.out.as_deref(), stdout)
        }
        Command::Regenerate { rep, geometry, exponents, times, out } => {
            let p = rep.params()?;
            let kind = GeometryKind::from(geometry);
            let report = regenerate_sequence(&p, kind, (exponents[0], exponents[1]), &times.0)?;
            match out.format(Format::Json) {
                Format::Json => {
                    let skipped = report.rows.iter().filter(|r| r.metrics.is_none()).count();
                    let doc = document(
                        json!({ "params": rep.input(&p), "geometry": kind.name(), "exponents": exponents, "times": times.0 }),
                        serde_json::to_value(&report).expect("report serializes"),
                        json!({ "rows_outside_domain": skipped }),
                    );
                    emit_json(&doc, out.out.as_deref(), stdout)
                }
                Format::Svg => {
                    let dir = out
                        .out
                        .as_deref()
                        .ok_or_else(|| Failure::Usage("--svg for regenerate needs --out DIR".into()))?;
                    std::fs::create_dir_all(dir)?;
                    let (q, _, _) = translation_fundamental_domain(&p)?;
                    for (i, row) in report.rows.iter().enumerate() {
                        if row.metrics.is_none() {
                            continue;
                        }
                        let m = heisplane::models::GeometryModel::along_path(kind, exponents[0], exponents[1], row.t)?;
                        let ct = cone_torus_from_parallelogram(&m, &q)?;
                        let lines = midlines(&ct)?;
                        let text = svg::cone_torus(&ct, &lines)?;
                        std::fs::write(dir.join(format!("regenerate_{i:02}.svg")), text)?;
                    }
                    Ok(())
                }
            }
        }
        Command::Limit { algebra, exponents, times, out } => {
            out.json_only()?;
            let base = BaseAlgebra::from(algebra);
            let path = DiagPath::new(exponents[0], exponents[1])?;
            let lim = limit_algebra(base, &path);
            let distances = times
                .0
                .iter()
                .map(|&t| subspace_distance(&conjugated_algebra_at(base, &path, t), &lim))
                .collect::<heisplane::Result<Vec<f64>>>()?;
            let basis: Vec<Vec<f64>> = lim
                .basis
                .iter()
                .map(|m| (0..3).flat_map(|i| (0..3).map(move |j| m[(i, j)])).collect())
                .collect();
            let doc = document(
                json!({ "algebra": base.name(), "exponents": exponents, "times": times.0 }),
                json!({
                    "classification": classify_algebra(&lim)?.name(),
                    "limit_basis": basis,
                    "distances": distances,
                }),
                json!({ "closure_residual": lim.closure_residual()? }),
            );
            emit_json(&doc, out.out.as_deref(), stdout)
        }
        Command::Orbifold { orbifold, rep, out } => {
            out.json_only()?;
            let o: OrbifoldType = orbifold.parse()?;
            let p = rep.params()?;
            let member = deformation_membership(o, &p);
            let (extension, residuals) = if member {
                let e = extend_holonomy(o, &p)?;
                let mut gens = serde_json::Map::new();
                gens.insert("a".into(), matrix_json(&e.a));
                gens.insert("b".into(), matrix_json(&e.b));
                for (name, g) in &e.extras {
                    gens.insert(name.clone(), matrix_json(g));
                }
                let res: serde_json::Map<String, Value> =
                    relation_residuals(&e).into_iter().map(|(k, v)| (k, json!(v))).collect();
                (json!({ "base": normal_form_json(&e.base), "generators": gens }), Value::Object(res))
            } else {
                (Value::Null, Value::Null)
            };
            let doc = document(
                json!({ "type": o.name(), "params": rep.input(&p) }),
                json!({ "member": member, "extension": extension }),
                json!({ "relation_residuals": residuals }),
            );
            emit_json(&doc, out.out.as_deref(), stdout)
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Module(e)) => {
            let doc = json!({ "error": { "kind": e.kind(), "detail": e.to_string() } });
            let _ = stdout.write_all(json::to_string(&doc).as_bytes());
            1
        }
        Err(Failure::Io(e)) => {
            let doc = json!({ "error": { "kind": "IoError", "detail": e.to_string() } });
            let _ = stdout.write_all(json::to_string(&doc).as_bytes());
            1
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
