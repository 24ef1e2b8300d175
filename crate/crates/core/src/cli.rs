//! The `trop` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::amoeba;
use crate::building::{build_building, build_building_with_levels, describe_building, extract_levels, LeveledDualGraph};
use crate::matching::{self, MatchingError, StabilityRule};
use crate::moduli;
use crate::rational::Rational;
use crate::render::{self, RenderSpec};
use crate::tropical::{tropicalize_line, LineFamily, TropicalCurve};

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

enum Failure {
    Input(String),
    Internal(String),
}

type Outcome = Result<String, Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "trop", version, about = "Tropical limits of lines in the plane relative to the coordinate axes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Union,
    PerDirection,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WhichFan {
    Exploded,
    Ionel,
    Complete,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit type of x_n = n^-p, y_n = n^-q.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        p: Rational,
        #[arg(long, allow_hyphen_values = true)]
        q: Rational,
        #[arg(long)]
        json: bool,
    },
    /// Tropical limit curve.
    Tropicalize {
        #[arg(long, allow_hyphen_values = true)]
        p: Rational,
        #[arg(long, allow_hyphen_values = true)]
        q: Rational,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Leveled dual graph of the limit building.
    Building {
        #[arg(long, allow_hyphen_values = true, requires = "q", conflicts_with = "curve")]
        p: Option<Rational>,
        #[arg(long, allow_hyphen_values = true, requires = "p")]
        q: Option<Rational>,
        /// Tropical curve JSON, as written by `tropicalize --json`.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Additional level value; repeatable.
        #[arg(long = "extra-level", allow_hyphen_values = true)]
        extra_level: Vec<Rational>,
        #[arg(long)]
        json: bool,
    },
    /// Matching system, solution cone, stability, weights and realization.
    Match {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "union")]
        rule: RuleArg,
        #[arg(long)]
        keep_trivial: bool,
    },
    /// Moduli fan in text form.
    Fan {
        #[arg(long, value_enum)]
        which: WhichFan,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Blowups from the exploded fan to the Ionel fan.
    Blowups {
        #[arg(long)]
        json: bool,
    },
    /// Table of limit types.
    Types {
        #[arg(long)]
        json: bool,
    },
    /// Hausdorff distance of rescaled log images to the tropical limit.
    Amoeba {
        #[arg(long, allow_hyphen_values = true)]
        p: Rational,
        #[arg(long, allow_hyphen_values = true)]
        q: Rational,
        /// Comma separated rescaling bases, e.g. 1e3,1e4,1e6,1e8.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        #[arg(long)]
        csv: PathBuf,
        /// Per-point cloud at the largest base.
        #[arg(long)]
        points_csv: Option<PathBuf>,
    },
    /// Picture of the curve realized at the witness of a graph.
    Render {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<I, S>(args: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = std::iter::once("trop".to_string()).chain(args.into_iter().map(Into::into)).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    CommandResult { code: EXIT_OK, stdout: e.render().to_string(), stderr: String::new() }
                }
                _ => {
                    let text = e.render().to_string();
                    let line = text.lines().next().unwrap_or("error: invalid arguments").to_string();
                    CommandResult { code: EXIT_INPUT, stdout: String::new(), stderr: line + "\n" }
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(stdout) => CommandResult { code: EXIT_OK, stdout, stderr: String::new() },
        Err(Failure::Input(m)) => CommandResult { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Internal(m)) => {
            CommandResult { code: EXIT_INTERNAL, stdout: String::new(), stderr: format!("internal error: {m}\n") }
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Classify { p, q, json } => classify(&p, &q, json),
        Command::Tropicalize { p, q, svg, json } => tropicalize(&p, &q, svg.as_deref(), json),
        Command::Building { p, q, curve, extra_level, json } => building(p, q, curve.as_deref(), &extra_level, json),
        Command::Match { graph, rule, keep_trivial } => match_graph(&graph, rule, keep_trivial),
        Command::Fan { which, svg } => fan(which, svg.as_deref()),
        Command::Blowups { json } => blowups(json),
        Command::Types { json } => types(json),
        Command::Amoeba { p, q, n, samples, csv, points_csv } => amoeba_cmd(&p, &q, &n, samples, &csv, points_csv.as_deref()),
        Command::Render { graph, svg } => render_graph(&graph, &svg),
    }
}

fn pretty(v: &impl serde::Serialize) -> Outcome {
    let mut s = serde_json::to_string_pretty(v).map_err(internal)?;
    s.push('\n');
    Ok(s)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

/// A directory target gets the default name `<command>-<params>.svg`.
fn svg_target(path: &Path, default_name: &str) -> PathBuf {
    if path.is_dir() {
        path.join(default_name)
    } else {
        path.to_path_buf()
    }
}

fn param(r: &Rational) -> String {
    r.to_string().replace('/', "_")
}

fn family(p: &Rational, q: &Rational) -> Result<LineFamily, Failure> {
    LineFamily::new(p.clone(), q.clone()).map_err(input)
}

fn classify(p: &Rational, q: &Rational, as_json: bool) -> Outcome {
    let t = moduli::classify(p, q).map_err(input)?;
    if as_json {
        return pretty(&json!({
            "p": p,
            "q": q,
            "type": t.label,
            "kind": t.kind,
            "cone": t.cone,
            "mirror": t.mirror,
        }));
    }
    Ok(format!("type: {}\nmirror: {}\n", t.label, t.mirror))
}

fn describe_curve(c: &TropicalCurve) -> String {
    let mut out = String::new();
    for v in c.vertices() {
        let _ = writeln!(out, "vertex {} {}", v.id, v.position());
    }
    for s in c.segments() {
        let _ = writeln!(out, "segment {} -> {} contact {} length {}", s.tail, s.head, s.contact, s.length);
    }
    for r in c.rays() {
        let _ = writeln!(out, "ray {} contact {}", r.base, r.contact);
    }
    out
}

fn default_window(c: &TropicalCurve) -> Rational {
    let far = c
        .vertices()
        .iter()
        .flat_map(|v| [v.x.clone(), v.y.clone()])
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::from((far.floor() + 2u32).max(2u32.into()))
}

fn tropicalize(p: &Rational, q: &Rational, svg: Option<&Path>, as_json: bool) -> Outcome {
    let curve = tropicalize_line(&family(p, q)?);
    if let Some(path) = svg {
        let spec = RenderSpec { window: default_window(&curve), ..RenderSpec::default() };
        let doc = render::render_tropical(&curve, Some(&extract_levels(&curve)), &spec);
        write(&svg_target(path, &format!("tropicalize-p{}-q{}.svg", param(p), param(q))), &doc)?;
    }
    if as_json {
        pretty(&curve)
    } else {
        Ok(describe_curve(&curve))
    }
}

fn building(
    p: Option<Rational>,
    q: Option<Rational>,
    curve_path: Option<&Path>,
    extra: &[Rational],
    as_json: bool,
) -> Outcome {
    let curve = match (p, q, curve_path) {
        (Some(p), Some(q), None) => tropicalize_line(&family(&p, &q)?),
        (None, None, Some(path)) => serde_json::from_str::<TropicalCurve>(&read(path)?)
            .map_err(|e| input(format!("invalid curve JSON in {}: {e}", path.display())))?,
        _ => return Err(input("give either --p and --q, or --curve")),
    };
    let levels = extract_levels(&curve)
        .refined(extra)
        .ok_or_else(|| input("extra levels must be positive"))?;
    let b = if extra.is_empty() { build_building(&curve) } else { build_building_with_levels(&curve, &levels) }
        .map_err(input)?;
    if as_json {
        pretty(&b.graph)
    } else {
        Ok(describe_building(&b))
    }
}

fn load_graph(path: &Path) -> Result<LeveledDualGraph, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| input(format!("invalid graph JSON in {}: {e}", path.display())))
}

fn structural(e: MatchingError) -> Failure {
    match e {
        MatchingError::AmbiguousChain { .. }
        | MatchingError::InconsistentChain { .. }
        | MatchingError::InconsistentZeroContact { .. }
        | MatchingError::UndeterminedPosition { .. }
        | MatchingError::ZeroContactNode(_)
        | MatchingError::NoNontrivialPiece => input(e),
        other => internal(other),
    }
}

fn match_graph(path: &Path, rule: RuleArg, keep_trivial: bool) -> Outcome {
    let g = load_graph(path)?;
    let sys = matching::build_system(&g).map_err(structural)?;
    let cone = matching::solve(&sys);
    let rule = match rule {
        RuleArg::Union => StabilityRule::Union,
        RuleArg::PerDirection => StabilityRule::PerDirection,
    };
    let verdict = matching::check_stability(&g, rule);
    let equations: Vec<Value> = sys
        .equations
        .iter()
        .zip(&sys.provenance)
        .map(|(e, prov)| json!({"text": sys.format_equation(e), "coefficients": e.coefficients, "provenance": prov}))
        .collect();
    let (weights, realized) = match &cone.witness {
        Some(w) => {
            let table = matching::torus_weights(&g, &cone).map_err(structural)?;
            let weights: Vec<Value> = table
                .pieces
                .iter()
                .map(|pw| json!({"piece": pw.piece, "rows": pw.rows, "rank": pw.rank()}))
                .collect();
            let curve = match matching::realize(&g, w, keep_trivial) {
                Ok(c) => serde_json::to_value(&c).map_err(internal)?,
                Err(e @ (MatchingError::ZeroContactNode(_) | MatchingError::NoNontrivialPiece)) => {
                    json!({"error": e.to_string()})
                }
                Err(e) => return Err(internal(format!("witness does not realize: {e}"))),
            };
            (Value::from(weights), curve)
        }
        None => (Value::Null, Value::Null),
    };
    let variables: Vec<String> = sys.variables.iter().map(ToString::to_string).collect();
    pretty(&json!({
        "variables": variables,
        "equations": equations,
        "rank": sys.rank(),
        "dimension": cone.dimension,
        "kernel_basis": cone.kernel_basis,
        "feasible": cone.feasible(),
        "witness": cone.witness,
        "stable": verdict.stable,
        "stability": verdict,
        "weights": weights,
        "realized": realized,
    }))
}

fn fan(which: WhichFan, svg: Option<&Path>) -> Outcome {
    let (f, name) = match which {
        WhichFan::Exploded => (moduli::exploded_fan(false), "exploded"),
        WhichFan::Ionel => (moduli::ionel_fan(false), "ionel"),
        WhichFan::Complete => (moduli::ionel_fan(true), "complete"),
    };
    if let Some(path) = svg {
        let spec = RenderSpec { window: Rational::from(4), scale: 80, ..RenderSpec::default() };
        write(&svg_target(path, &format!("fan-{name}.svg")), &render::render_fan(&f, &spec))?;
    }
    Ok(f.to_text())
}

fn blowups(as_json: bool) -> Outcome {
    let steps = moduli::blowup_sequence(&moduli::exploded_fan(false), &moduli::ionel_fan(false)).map_err(internal)?;
    if as_json {
        let v: Vec<Value> = steps.iter().map(|(c, r)| json!({"cone": c, "ray": r})).collect();
        return pretty(&v);
    }
    let mut out = String::new();
    for (k, (c, r)) in steps.iter().enumerate() {
        let _ = writeln!(out, "{}: subdivide {c} at {r}", k + 1);
    }
    Ok(out)
}

fn types(as_json: bool) -> Outcome {
    let table = moduli::type_table();
    if as_json {
        return pretty(&table);
    }
    let header = ["type", "kind", "kernel", "quotient", "mirror", "conditions"];
    let rows: Vec<[String; 6]> = table
        .iter()
        .map(|r| {
            [
                r.label.clone(),
                format!("{:?}", r.kind).to_uppercase(),
                r.kernel_dimension.to_string(),
                r.quotient_dimension.to_string(),
                r.mirror.clone(),
                r.sequence_conditions.join(", "),
            ]
        })
        .collect();
    let mut widths = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| if i + 1 == cells.len() { c.to_string() } else { format!("{c:<w$}") })
            .collect();
        padded.join("  ") + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    Ok(out)
}

fn amoeba_cmd(p: &Rational, q: &Rational, bases: &str, samples: usize, csv: &Path, points: Option<&Path>) -> Outcome {
    let bases: Vec<f64> = bases
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| input(format!("bad base `{s}`"))))
        .collect::<Result<_, _>>()?;
    if bases.is_empty() {
        return Err(input("no bases given"));
    }
    let fam = family(p, q)?;
    let report = amoeba::convergence(&fam, &bases, samples).map_err(input)?;
    write(csv, &report.to_csv())?;
    if let Some(path) = points {
        let largest = bases.iter().copied().fold(f64::MIN, f64::max);
        write(path, &amoeba::sample_amoeba(&fam, largest, samples).map_err(input)?.to_csv())?;
    }
    let mut out = String::new();
    for (n, d) in &report.rows {
        let _ = writeln!(out, "n={n} hausdorff={d:.6}");
    }
    let _ = writeln!(out, "fit C={:.6} r2={:.6}", report.constant, report.r_squared);
    Ok(out)
}

fn render_graph(path: &Path, svg: &Path) -> Outcome {
    let g = load_graph(path)?;
    let cone = matching::solve(&matching::build_system(&g).map_err(structural)?);
    let witness = cone.witness.ok_or_else(|| input("graph has no strictly negative solution"))?;
    let curve = matching::realize(&g, &witness, false).map_err(structural)?;
    let spec = RenderSpec { window: default_window(&curve), ..RenderSpec::default() };
    let doc = render::render_tropical(&curve, Some(&extract_levels(&curve)), &spec);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph");
    let target = svg_target(svg, &format!("render-{stem}.svg"));
    write(&target, &doc)?;
    Ok(format!("wrote {}\n", target.display()))
}
