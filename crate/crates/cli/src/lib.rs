//! Command-line front end for `digitop`.
//!
//! [`run`] parses an argument vector, executes the command and returns a
//! [`CommandResult`]; the binary only prints it and exits with its code.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use digitop::classify::{Classification, Contractibility, SearchConfig, Topology};
use digitop::digitize::{refine_and_compare, voxelize_surface, BoundingBox, Surface};
use digitop::error::{
    ClassifyError, DigitizeError, FormatError, RecognizeError, SpaceError, TransformError,
};
use digitop::format::{read_dspace, write_dspace};
use digitop::generate::{minimal_disk, minimal_sphere, torus_grid};
use digitop::invariants::{Field, InvariantReport};
use digitop::recognize::{check_criterion, is_compressed, Criterion};
use digitop::space::{join_relabeled, DigitalSpace};
use digitop::transform::{compress, parse_steps, random_expansion, reduce_contractible, replay, DEFAULT_SIZE_CAP};
use digitop::Decision;

#[derive(Debug, Parser)]
#[command(name = "digitop", version, about = "Digital topology on finite graphs")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a standard space in dspace format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write the space here instead of stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Classify a space.
    Classify {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Decide contractibility and print a certificate.
    Contractible {
        file: PathBuf,
        #[arg(long, default_value_t = SearchConfig::default().contraction_budget)]
        budget: usize,
    },
    /// Compress a closed manifold by collapsing disks.
    Compress {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the replayable trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
    },
    /// Clique counts, Euler characteristic and Betti numbers.
    Invariants {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = FieldArg::Rationals)]
        field: FieldArg,
    },
    /// Evaluate sphere recognition criteria on a closed manifold.
    Recognize {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        /// `thm-5.1`, `thm-5.2`, `thm-6.1`, `thm-6.2` or `all` (defaults for the dimension).
        #[arg(long, default_value = "all")]
        criterion: String,
        #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
        cap: usize,
        /// Also test whether the manifold is compressed.
        #[arg(long)]
        compressed: bool,
    },
    /// Digitize an implicit surface into a cube intersection graph.
    Digitize(DigitizeArgs),
    /// Write a space as a DOT graph with its classification as attributes.
    ExportDot {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a trace on a space.
    Replay {
        trace: PathBuf,
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Minimal n-sphere (join of n+1 zero-spheres).
    Sphere {
        #[arg(short = 'n', allow_negative_numbers = true)]
        n: i32,
    },
    /// Minimal n-disk (cone over the minimal (n-1)-sphere).
    Disk {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Join of two spaces read from files.
    Join { a: PathBuf, b: PathBuf },
    /// Toroidal grid with diagonals.
    TorusGrid {
        #[arg(long, default_value_t = 4)]
        rows: u32,
        #[arg(long, default_value_t = 4)]
        cols: u32,
    },
    /// Minimal n-sphere after random ball expansions (uses --seed).
    ExpandedSphere {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 1)]
        expansions: usize,
        #[arg(long, default_value_t = 2)]
        subdivisions: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FieldArg {
    Rationals,
    TwoElement,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Rationals => Field::Rationals,
            FieldArg::TwoElement => Field::TwoElement,
        }
    }
}

#[derive(Debug, Args)]
pub struct DigitizeArgs {
    #[command(subcommand)]
    pub surface: SurfaceArg,
    /// Cube side.
    #[arg(long, default_value_t = 0.5, global = true)]
    pub side: f64,
    /// Half-width of the box `[-w, w]^3` (ignored when --min/--max are given).
    #[arg(long, default_value_t = 1.5, global = true)]
    pub half: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, global = true)]
    pub min: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, global = true)]
    pub max: Option<Vec<f64>>,
    /// Compare this many refinement levels (side, side/2, ...) instead of
    /// emitting a graph.
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Emit the graph after contractible reduction.
    #[arg(long, global = true)]
    pub reduce: bool,
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum SurfaceArg {
    Sphere {
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    Torus { major: f64, minor: f64 },
    Plane {
        #[arg(long, default_value_t = 0.5)]
        height: f64,
    },
}

impl From<SurfaceArg> for Surface {
    fn from(s: SurfaceArg) -> Self {
        match s {
            SurfaceArg::Sphere { radius } => Surface::Sphere { radius },
            SurfaceArg::Torus { major, minor } => Surface::Torus { major, minor },
            SurfaceArg::Plane { height } => Surface::Plane { height },
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}", line = .source.line, message = .source.message)]
    Parse { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Recognize(#[from] RecognizeError),
    #[error(transparent)]
    Digitize(#[from] DigitizeError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn is_indeterminate(&self) -> bool {
        matches!(
            self,
            CliError::Transform(TransformError::Indeterminate) | CliError::Recognize(RecognizeError::Indeterminate)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Error,
    Indeterminate,
}

impl Status {
    fn from_decisions<I: IntoIterator<Item = Decision>>(ds: I) -> Self {
        if ds.into_iter().any(|d| d == Decision::Indeterminate) {
            Status::Indeterminate
        } else {
            Status::Ok
        }
    }
}

/// Outcome of one invocation. Text and JSON renderings come from the same
/// payload.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub text: String,
}

impl CommandResult {
    fn ok(payload: Value, text: String) -> Self {
        Self {
            status: Status::Ok,
            payload,
            text,
        }
    }

    fn error(message: String) -> Self {
        Self {
            status: Status::Error,
            payload: json!({ "error": message }),
            text: format!("error: {message}\n"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Indeterminate => 2,
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let doc = json!({ "status": self.status, "payload": self.payload });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
        } else {
            self.text.clone()
        }
    }
}

/// Parses `argv` (including the program name) and executes the command.
/// Returns the result and whether JSON rendering was requested.
pub fn run<I, T>(argv: I) -> (CommandResult, bool)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let status = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Status::Ok,
                _ => Status::Error,
            };
            return (
                CommandResult {
                    status,
                    payload: json!({ "usage": text }),
                    text,
                },
                false,
            );
        }
    };
    let json = cli.json;
    let result = execute(&cli).unwrap_or_else(|e| {
        let mut r = CommandResult::error(e.to_string());
        if e.is_indeterminate() {
            r.status = Status::Indeterminate;
        }
        r
    });
    (result, json)
}

fn read_space(path: &Path) -> Result<DigitalSpace, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    read_dspace(&text).map_err(|source| CliError::Parse {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `contents` to `output` when given; otherwise returns it as the
/// text rendering.
fn emit(output: Option<&Path>, contents: String, summary: String) -> Result<String, CliError> {
    match output {
        Some(p) => {
            write_file(p, &contents)?;
            Ok(summary)
        }
        None => Ok(contents),
    }
}

fn space_payload(g: &DigitalSpace) -> Value {
    json!({ "points": g.len(), "edges": g.edge_count(), "dspace": write_dspace(g) })
}

fn ids<'a, I: IntoIterator<Item = &'a u32>>(it: I) -> String {
    it.into_iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn classification_text(c: &Classification) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "normal_dimension: {}", c.normal_dimension);
    let _ = writeln!(s, "dimension: {}", c.dimension);
    let _ = writeln!(s, "closed_manifold: {}", c.is_closed_manifold);
    let _ = writeln!(s, "sphere: {}", c.is_sphere);
    if let Some(w) = c.sphere_witness {
        let _ = writeln!(s, "sphere_witness: {w}");
    }
    let _ = writeln!(s, "disk: {}", c.is_disk);
    let _ = writeln!(s, "boundary: {}", ids(&c.boundary));
    let _ = writeln!(s, "interior: {}", ids(&c.interior));
    s
}

fn classification_status(c: &Classification) -> Status {
    Status::from_decisions([c.is_closed_manifold, c.is_sphere, c.is_disk])
}

fn execute(cli: &Cli) -> Result<CommandResult, CliError> {
    let topo = Topology::default();
    match &cli.command {
        Command::Gen { kind, output } => {
            let g = generate(kind, cli.seed, &topo)?;
            let text = emit(
                output.as_deref(),
                write_dspace(&g),
                format!("wrote {} points\n", g.len()),
            )?;
            Ok(CommandResult::ok(space_payload(&g), text))
        }
        Command::Classify { file, dim } => {
            let g = read_space(file)?;
            let c = topo.classify(&g, *dim);
            let mut r = CommandResult::ok(serde_json::to_value(&c).unwrap(), classification_text(&c));
            r.status = classification_status(&c);
            Ok(r)
        }
        Command::Contractible { file, budget } => {
            let g = read_space(file)?;
            let topo = Topology::new(SearchConfig {
                contraction_budget: *budget,
            });
            let outcome = topo.is_contractible(&g)?;
            let (status, payload, text) = match &outcome {
                Contractibility::Contractible(cert) => {
                    let mut text = String::from("contractible: true\n");
                    for m in &cert.moves {
                        let _ = match m {
                            digitop::classify::Deletion::Point { v } => writeln!(text, "ct-delete-point v={v}"),
                            digitop::classify::Deletion::Edge { u, v } => writeln!(text, "ct-delete-edge u={u} v={v}"),
                        };
                    }
                    (Status::Ok, json!({ "contractible": true, "certificate": cert }), text)
                }
                Contractibility::NotContractible => (
                    Status::Ok,
                    json!({ "contractible": false }),
                    "contractible: false\n".to_string(),
                ),
                Contractibility::Indeterminate => (
                    Status::Indeterminate,
                    json!({ "contractible": "indeterminate" }),
                    "contractible: indeterminate\n".to_string(),
                ),
            };
            Ok(CommandResult { status, payload, text })
        }
        Command::Compress {
            file,
            dim,
            output,
            trace,
            cap,
        } => {
            let g = read_space(file)?;
            let (out, tr) = compress(&g, *dim, *cap, &topo)?;
            if let Some(p) = trace {
                let header = format!("# compress n={dim} cap={cap} points={} -> {}\n", g.len(), out.len());
                write_file(p, &(header + &tr.to_text()))?;
            }
            let summary = format!("compressed {} -> {} points in {} steps\n", g.len(), out.len(), tr.len());
            let text = emit(output.as_deref(), write_dspace(&out), summary)?;
            let mut payload = space_payload(&out);
            payload["steps"] = json!(tr.len());
            payload["initial_points"] = json!(g.len());
            Ok(CommandResult::ok(payload, text))
        }
        Command::Invariants { file, field } => {
            let g = read_space(file)?;
            let r = InvariantReport::compute(&g, (*field).into());
            Ok(CommandResult::ok(serde_json::to_value(&r).unwrap(), r.to_text()))
        }
        Command::Recognize {
            file,
            dim,
            criterion,
            cap,
            compressed,
        } => {
            let g = read_space(file)?;
            let criteria = if criterion == "all" {
                Criterion::for_dimension(*dim)
            } else {
                vec![Criterion::from_id(criterion)
                    .ok_or_else(|| CliError::Usage(format!("unknown criterion `{criterion}`")))?]
            };
            let mut verdicts = Vec::new();
            let mut text = String::new();
            for c in criteria {
                let v = check_criterion(&g, c, *dim, *cap, &topo)?;
                let _ = write!(text, "{}: holds={} conclusion={:?}", v.criterion, v.holds, v.conclusion);
                if let Some(w) = &v.witness {
                    let _ = write!(text, " witness={:?}:{}", w.role, ids(&w.vertices));
                }
                text.push('\n');
                verdicts.push(v);
            }
            let mut payload = json!({ "verdicts": verdicts });
            if *compressed {
                let report = is_compressed(&g, *dim, *cap, &topo)?;
                let _ = writeln!(text, "compressed: {}", report.compressed);
                payload["compression"] = serde_json::to_value(&report).unwrap();
            }
            let status = Status::from_decisions(verdicts.iter().map(|v| v.holds));
            Ok(CommandResult { status, payload, text })
        }
        Command::Digitize(args) => digitize(args, &topo),
        Command::ExportDot { file, dim, output } => {
            let g = read_space(file)?;
            let c = topo.classify(&g, *dim);
            let dot = to_dot(&g, &c);
            let text = emit(output.as_deref(), dot.clone(), "wrote DOT graph\n".to_string())?;
            Ok(CommandResult::ok(json!({ "dot": dot }), text))
        }
        Command::Replay { trace, file, output } => {
            let g = read_space(file)?;
            let raw = fs::read_to_string(trace).map_err(|source| CliError::Io {
                path: trace.clone(),
                source,
            })?;
            let steps = parse_steps(&raw).map_err(|source| CliError::Parse {
                path: trace.clone(),
                source,
            })?;
            let out = replay(&g, &steps, &topo)?;
            let summary = format!("replayed {} steps: {} -> {} points\n", steps.len(), g.len(), out.len());
            let text = emit(output.as_deref(), write_dspace(&out), summary)?;
            Ok(CommandResult::ok(space_payload(&out), text))
        }
    }
}

fn generate(kind: &GenKind, seed: u64, topo: &Topology) -> Result<DigitalSpace, CliError> {
    Ok(match kind {
        GenKind::Sphere { n } => {
            if *n < -1 {
                return Err(CliError::Usage(format!("sphere dimension must be at least -1, got {n}")));
            }
            minimal_sphere(*n)
        }
        GenKind::Disk { n } => minimal_disk(*n),
        GenKind::Join { a, b } => join_relabeled(&read_space(a)?, &read_space(b)?).0,
        GenKind::TorusGrid { rows, cols } => {
            if *rows < 4 || *cols < 4 {
                return Err(CliError::Usage("torus grid sides must be at least 4".into()));
            }
            torus_grid(*rows, *cols)
        }
        GenKind::ExpandedSphere {
            n,
            expansions,
            subdivisions,
        } => {
            if *n < 1 {
                return Err(CliError::Usage("expanded spheres need dimension at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = minimal_sphere(*n as i32);
            for _ in 0..*expansions {
                let v = g.vertices()[rng.gen_range(0..g.len())];
                g = random_expansion(&g, v, *n, *subdivisions, &mut rng, topo)?.0;
            }
            g.normalized()
        }
    })
}

fn digitize(args: &DigitizeArgs, topo: &Topology) -> Result<CommandResult, CliError> {
    let bounds = match (&args.min, &args.max) {
        (Some(lo), Some(hi)) if lo.len() == 3 && hi.len() == 3 => BoundingBox::new([lo[0], lo[1], lo[2]], [hi[0], hi[1], hi[2]])?,
        (None, None) => BoundingBox::cube(args.half)?,
        _ => return Err(CliError::Usage("--min and --max take three comma-separated coordinates and go together".into())),
    };
    let surface: Surface = args.surface.into();
    if let Some(levels) = args.levels {
        let report = refine_and_compare(&surface, bounds, args.side, levels, 2, topo)?;
        let mut text = String::new();
        for l in &report.levels {
            let _ = writeln!(
                text,
                "side={} points={} closed_manifold={} euler={} betti={} | reduced points={} closed_manifold={} euler={} betti={}",
                l.side,
                l.points,
                l.classification.is_closed_manifold,
                l.invariants.euler,
                ids_usize(&l.invariants.betti),
                l.reduced_points,
                l.reduced_classification.is_closed_manifold,
                l.reduced_invariants.euler,
                ids_usize(&l.reduced_invariants.betti),
            );
        }
        let _ = writeln!(text, "euler_stable: {}\nbetti_stable: {}", report.euler_stable, report.betti_stable);
        return Ok(CommandResult::ok(serde_json::to_value(&report).unwrap(), text));
    }
    let model = voxelize_surface(&surface, bounds, args.side)?;
    let g = if args.reduce {
        reduce_contractible(&model.graph, topo).0
    } else {
        model.graph.clone()
    };
    let text = emit(
        args.output.as_deref(),
        write_dspace(&g),
        format!("wrote {} points ({} cubes selected)\n", g.len(), model.cubes.len()),
    )?;
    let mut payload = space_payload(&g);
    payload["cubes"] = json!(model.cubes.len());
    Ok(CommandResult::ok(payload, text))
}

fn ids_usize(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// DOT rendering with the classification as graph attributes.
pub fn to_dot(g: &DigitalSpace, c: &Classification) -> String {
    let mut s = String::from("graph digital_space {\n");
    let _ = writeln!(
        s,
        "  graph [normal_dimension=\"{}\", dimension=\"{}\", closed_manifold=\"{}\", sphere=\"{}\", disk=\"{}\"];",
        c.normal_dimension, c.dimension, c.is_closed_manifold, c.is_sphere, c.is_disk
    );
    for v in g.vertices() {
        let role = if c.boundary.contains(v) { " [boundary=\"true\"]" } else { "" };
        let _ = writeln!(s, "  {v}{role};");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(s, "  {a} -- {b};");
    }
    s.push_str("}\n");
    s
}
