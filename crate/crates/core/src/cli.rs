//! Command-line front end: JSON input, report output, census runner and grid export.
//!
//! Exit codes: 0 success, 2 malformed input, 3 a mathematical stage failed
//! (the stage tag is printed on stderr).

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::census::{self, CENSUS};
use crate::dixon::reconstruct;
use crate::error::Error;
use crate::families::{self, gram, FAMILY_NAMES};
use crate::mesh::{self, GridSpec};
use crate::nodes::{
    census_verify, symmetroid_profile, Node, NodeOptions, NodeSystem, SymmetroidProfile,
};
use crate::pencil::QPencil;
use crate::poly::json::poly_from_json;
use crate::poly::point::{point_set_distance, ProjPoint};
use crate::poly::scalar::parse_rational;
use crate::poly::{QUni, Rational, C64};
use crate::projection::{lift_nine_nodes, project_from_node};

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "symmetroid",
    version,
    about = "Nodes, projections and determinantal representations of quartic symmetroids"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every randomized stage; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Point-set tolerance for round-trip comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Output file (stdout when absent). For `mesh` this is the grid file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Source {
    /// JSON file: `{"matrices": [A0, A1, A2, A3]}` with integer or "p/q" entries.
    #[arg(long, group = "source")]
    pub input: Option<PathBuf>,

    /// Embedded census entry, as `rho,sigma`.
    #[arg(long, group = "source", value_parser = parse_label)]
    pub census: Option<(usize, usize)>,

    /// Named family pencil.
    #[arg(long, group = "source")]
    pub family: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile all twenty census entries and compare with their labels.
    Census,
    /// Nodes, counts (rho, sigma), lines and interior point of one pencil.
    Analyze {
        #[command(flatten)]
        source: Source,
    },
    /// Projection from a rank-2 node: branch conic, cubics, nine image points.
    Project {
        #[command(flatten)]
        source: Source,
        /// Index into the node list of `analyze`; the base node when absent.
        #[arg(long)]
        node_index: Option<usize>,
    },
    /// Rebuild a determinantal representation from a node.
    Reconstruct {
        /// A pencil, or `{"quartic": poly, "node": [x0, x1, x2, x3]}`.
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        node_index: Option<usize>,
    },
    /// Gram spectrahedron of a binary sextic, `{"coefficients": [c0, .., c6]}` in ascending powers.
    Gram {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Skip the node census of the Kummer pencil.
        #[arg(long)]
        no_nodes: bool,
    },
    /// Print the pencil of a named family.
    Family { name: String },
    /// Sample the quartic on a grid in an affine chart.
    Mesh {
        #[command(flatten)]
        source: Source,
        /// Homogeneous coordinate set to one.
        #[arg(long, default_value_t = 0)]
        chart: usize,
        /// Box `lo,hi` applied to all three axes.
        #[arg(long = "box", value_parser = parse_box, default_value = "-3,3")]
        bounds: (f64, f64),
        /// Samples per axis.
        #[arg(long, default_value_t = mesh::DEFAULT_GRID)]
        grid: usize,
        /// Also write the zero level set as Wavefront OBJ.
        #[arg(long)]
        obj: Option<PathBuf>,
    },
}

fn parse_label(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected rho,sigma")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

fn parse_box(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| e.to_string());
    Ok((p(a)?, p(b)?))
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Math { stage: String, error: Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Math { .. } => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input(m) => json!({"error": "input", "message": m}),
            CliError::Math { stage, error } => {
                json!({"error": "math", "stage": stage, "message": error.to_string()})
            }
        }
    }
}

fn math(stage: &'static str) -> impl Fn(Error) -> CliError {
    move |e: Error| {
        let stage = match e.stage() {
            Some(inner) => format!("{stage}/{inner}"),
            None => stage.to_string(),
        };
        CliError::Math { stage, error: e }
    }
}

fn output_err(e: std::io::Error) -> CliError {
    math("output")(e.into())
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_pencil(src: &Source) -> Result<QPencil, CliError> {
    if let Some((r, s)) = src.census {
        let e =
            census::entry(r, s).ok_or_else(|| input_err(format!("no census entry ({r},{s})")))?;
        return e.pencil().map_err(input_err);
    }
    if let Some(name) = &src.family {
        if !FAMILY_NAMES.contains(&name.as_str()) {
            return Err(input_err(format!(
                "unknown family {name:?}; one of {}",
                FAMILY_NAMES.join(", ")
            )));
        }
        return families::family_pencil(name).map_err(math("family"));
    }
    let path = src
        .input
        .as_ref()
        .ok_or_else(|| input_err("one of --input, --census, --family is required"))?;
    QPencil::from_json(&read_json(path)?).map_err(input_err)
}

fn profile(p: &QPencil, seed: u64) -> Result<SymmetroidProfile, CliError> {
    symmetroid_profile(p, &NodeOptions::with_seed(seed)).map_err(math("nodes"))
}

fn pick_node(prof: &SymmetroidProfile, index: Option<usize>) -> Result<Node, CliError> {
    match index {
        Some(i) => prof.nodes.get(i).cloned().ok_or_else(|| {
            input_err(format!(
                "node index {i} out of range ({} nodes)",
                prof.nodes.len()
            ))
        }),
        None => {
            let base = prof.base_node.as_ref();
            prof.nodes
                .iter()
                .find(|n| Some(&n.point) == base)
                .or_else(|| prof.nodes.iter().find(|n| n.rank == 2))
                .cloned()
                .ok_or_else(|| CliError::Math {
                    stage: "nodes".into(),
                    error: Error::NotFound("no rank-2 node".into()),
                })
        }
    }
}

fn census_report(seed: u64) -> (String, Value, bool) {
    let rows = census_verify(seed);
    let mut table = String::from("label     computed  transversal  pass\n");
    for r in &rows {
        let computed = r
            .computed
            .map(|(a, b)| format!("({a},{b})"))
            .unwrap_or_else(|| "-".into());
        table.push_str(&format!(
            "{:<9} {:<9} {:<12} {}\n",
            format!("({},{})", r.label.0, r.label.1),
            computed,
            r.transversal,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    let all = rows.iter().all(|r| r.pass);
    table.push_str(&format!(
        "{}/{} pass (seed {seed})\n",
        rows.iter().filter(|r| r.pass).count(),
        CENSUS.len()
    ));
    (
        table,
        json!({"seed": seed, "rows": rows, "all_pass": all}),
        all,
    )
}

fn parse_sextic(v: &Value) -> Result<QUni, CliError> {
    let arr = v
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(|| input_err("expected {\"coefficients\": [c0, .., c6]}"))?;
    if arr.len() != 7 {
        return Err(input_err(format!(
            "expected 7 coefficients, got {}",
            arr.len()
        )));
    }
    let c = arr
        .iter()
        .map(|x| match x {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("bad coefficient {other}"))),
        })
        .collect::<Result<Vec<Rational>, Error>>()
        .map_err(input_err)?;
    Ok(QUni::new(c))
}

fn parse_point(v: &Value) -> Result<ProjPoint, CliError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| input_err("node must be an array of 4 coordinates"))?;
    let coords = arr
        .iter()
        .map(|x| match x {
            Value::Number(n) => n.as_f64().map(|r| C64::new(r, 0.0)),
            Value::Array(p) if p.len() == 2 => Some(C64::new(p[0].as_f64()?, p[1].as_f64()?)),
            _ => None,
        })
        .collect::<Option<Vec<C64>>>()
        .ok_or_else(|| input_err("coordinates must be numbers or [re, im] pairs"))?;
    ProjPoint::new(coords).map_err(input_err)
}

fn reconstruct_report(
    src: &Source,
    node_index: Option<usize>,
    seed: u64,
) -> Result<Value, CliError> {
    if let Some(path) = &src.input {
        let v = read_json(path)?;
        if let Some(q) = v.get("quartic") {
            let f = poly_from_json(q).map_err(input_err)?;
            if f.nvars() != 4 {
                return Err(input_err("quartic must have 4 variables"));
            }
            let node = parse_point(v.get("node").ok_or_else(|| input_err("missing \"node\""))?)?;
            let r = reconstruct(&f, &node, None, seed).map_err(math("reconstruct"))?;
            return Ok(json!({"seed": seed, "node": node, "result": r.to_json()}));
        }
    }
    let p = load_pencil(src)?;
    let prof = profile(&p, seed)?;
    let node = pick_node(&prof, node_index)?;
    let r = reconstruct(&p.determinant(), &node.point, None, seed).map_err(math("reconstruct"))?;
    Ok(json!({"seed": seed, "node": node, "result": r.to_json()}))
}

fn project_report(
    p: &QPencil,
    node_index: Option<usize>,
    seed: u64,
    tol: f64,
) -> Result<Value, CliError> {
    let prof = profile(p, seed)?;
    let node = pick_node(&prof, node_index)?;
    let proj = project_from_node(p, &node.point, seed).map_err(math("project"))?;
    let sys = NodeSystem::new(&p.determinant());
    let lifted = lift_nine_nodes(&proj, &sys).map_err(math("lift"))?;
    let mut rebuilt = vec![node.point.clone()];
    rebuilt.extend(lifted);
    let all: Vec<ProjPoint> = prof.nodes.iter().map(|n| n.point.clone()).collect();
    let d = point_set_distance(&rebuilt, &all);
    Ok(json!({
        "seed": seed,
        "projection": proj.to_json(),
        "round_trip": {"distance": d, "tolerance": tol, "pass": d < tol, "lifted": rebuilt},
    }))
}

/// Run one command and return what goes to stdout.
pub fn execute(cfg: &RunConfig) -> Result<String, CliError> {
    if !(cfg.tol.is_finite() && cfg.tol > 0.0) {
        return Err(input_err("--tol must be positive"));
    }
    let seed = cfg.seed;
    let json_out = |v: &Value| -> Result<String, CliError> {
        let text = serde_json::to_string_pretty(v).map_err(input_err)? + "\n";
        write_or_return(cfg.out.as_deref(), text)
    };
    match &cfg.command {
        Command::Census => {
            let (table, v, all) = census_report(seed);
            if let Some(path) = &cfg.out {
                let text = serde_json::to_string_pretty(&v).map_err(input_err)? + "\n";
                fs::write(path, text).map_err(output_err)?;
            }
            if !all {
                return Err(CliError::Math {
                    stage: "census".into(),
                    error: Error::NotFound(format!("census mismatch\n{table}")),
                });
            }
            Ok(table)
        }
        Command::Analyze { source } => {
            let p = load_pencil(source)?;
            let prof = profile(&p, seed)?;
            let mut v = serde_json::to_value(&prof).map_err(input_err)?;
            v["seed"] = json!(seed);
            json_out(&v)
        }
        Command::Project { source, node_index } => {
            let p = load_pencil(source)?;
            json_out(&project_report(&p, *node_index, seed, cfg.tol)?)
        }
        Command::Reconstruct { source, node_index } => {
            json_out(&reconstruct_report(source, *node_index, seed)?)
        }
        Command::Gram { input, no_nodes } => {
            let p = match input {
                Some(path) => parse_sextic(&read_json(path)?)?,
                None => gram::default_sextic(),
            };
            let r = gram::gram_report(&p, seed, !no_nodes).map_err(math("gram"))?;
            let mut v = r.to_json();
            v["seed"] = json!(seed);
            json_out(&v)
        }
        Command::Family { name } => {
            let src = Source {
                family: Some(name.clone()),
                ..Default::default()
            };
            let p = load_pencil(&src)?;
            json_out(&json!({"family": name, "seed": seed, "pencil": p.to_json()}))
        }
        Command::Mesh {
            source,
            chart,
            bounds,
            grid,
            obj,
        } => {
            let spec = GridSpec {
                chart: *chart,
                lo: bounds.0,
                hi: bounds.1,
                n: *grid,
            };
            spec.validate().map_err(input_err)?;
            let out = cfg
                .out
                .as_ref()
                .ok_or_else(|| input_err("mesh needs --out for the grid file"))?;
            let p = load_pencil(source)?;
            let prof = profile(&p, seed)?;
            let g = mesh::sample_grid(&p, &spec).map_err(math("mesh"))?;
            let header = mesh::grid_header(&g, &prof.nodes, seed);
            let mut w = BufWriter::new(fs::File::create(out).map_err(output_err)?);
            mesh::write_grid(&mut w, &g, &header).map_err(math("output"))?;
            w.flush().map_err(output_err)?;
            let mut summary = json!({
                "seed": seed,
                "grid": out,
                "header": header,
            });
            if let Some(path) = obj {
                let m = mesh::zero_level_mesh(&g).map_err(math("mesh"))?;
                let mut w = BufWriter::new(fs::File::create(path).map_err(output_err)?);
                let comment = format!(
                    "zero set of det A, chart x{} = 1, box [{}, {}], grid {}, seed {seed}",
                    spec.chart, spec.lo, spec.hi, spec.n
                );
                mesh::write_obj(&mut w, &m, &comment).map_err(math("output"))?;
                w.flush().map_err(output_err)?;
                summary["obj"] = json!({"path": path, "triangles": m.triangles.len()});
            }
            Ok(serde_json::to_string_pretty(&summary).map_err(input_err)? + "\n")
        }
    }
}

fn write_or_return(out: Option<&Path>, text: String) -> Result<String, CliError> {
    match out {
        Some(path) => {
            fs::write(path, &text).map_err(output_err)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// Parse `argv`, run, print, and return the process exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cfg) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("symmetroid").chain(args.iter().copied()))
            .unwrap()
    }

    #[test]
    fn family_output_is_deterministic() {
        let a = execute(&cfg(&["family", "toeplitz", "--seed", "3"])).unwrap();
        let b = execute(&cfg(&["family", "toeplitz", "--seed", "3"])).unwrap();
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["seed"], 3);
    }

    #[test]
    fn malformed_json_exits_two() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{\"matrices\": [").unwrap();
        let err = execute(&cfg(&["analyze", "--input", path.to_str().unwrap()])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_family_is_input_error() {
        let err = execute(&cfg(&["family", "nope"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn grid_limit_enforced() {
        let err = execute(&cfg(&[
            "mesh",
            "--family",
            "toeplitz",
            "--grid",
            "257",
            "--out",
            "/dev/null",
        ]))
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn parse_helpers() {
        assert_eq!(parse_label("10, 6"), Ok((10, 6)));
        assert_eq!(parse_box("-2,2.5"), Ok((-2.0, 2.5)));
        assert!(parse_box("2").is_err());
    }
}
