//! Command-line arguments and the commands behind them.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use simplex_tree::flag::{build_rips_limited, RipsParams};
use simplex_tree::geometry::{
    load_points, sample_synthetic, PointCloud, PointFormat, SyntheticKind,
};
use simplex_tree::io::write_words;
use simplex_tree::witness::{
    build_relaxed_witness_limited, build_witness_limited, insert_landmark, reverse_nn,
    RelaxedParams, WitnessSetup,
};
use simplex_tree::SimplexTree;

use crate::bench;
use crate::report::RunReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] simplex_tree::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 usage, 3 input, 4 resource limit.
    pub fn exit_code(&self) -> u8 {
        use simplex_tree::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                E::NodeLimit(_) => 4,
                E::InvalidParameter(_) | E::Precondition(_) => 2,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "stree",
    version,
    about = "Build and measure simplicial complexes stored in simplex trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rips complex of a point cloud.
    Rips(RipsArgs),
    /// Witness complex.
    Witness(WitnessArgs),
    /// Relaxed witness complex.
    Rwitness(RwitnessArgs),
    /// Witness complex, then insert one more landmark incrementally.
    AddLandmark(AddLandmarkArgs),
    /// Timing experiments, written as CSV.
    Bench(BenchArgs),
}

fn parse_synthetic(s: &str) -> std::result::Result<SyntheticKind, String> {
    s.parse().map_err(|e: simplex_tree::Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<PointFormat, String> {
    s.parse().map_err(|e: simplex_tree::Error| e.to_string())
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["points", "synthetic"])))]
pub struct PointSource {
    /// Point file (CSV, whitespace-separated or OFF).
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Synthetic sample: sphere:D, cube:D or klein.
    #[arg(long, value_parser = parse_synthetic)]
    pub synthetic: Option<SyntheticKind>,
    /// Number of synthetic points.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Point file format; guessed from the extension by default.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<PointFormat>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the complex in stl-words v1 format.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print the report as one JSON line.
    #[arg(long)]
    pub json: bool,
    /// Abort with exit code 4 once the complex exceeds this many faces.
    #[arg(long)]
    pub max_faces: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RipsArgs {
    #[command(flatten)]
    pub source: PointSource,
    #[arg(long)]
    pub r: f64,
    /// Maximal dimension.
    #[arg(long)]
    pub dim: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("wsource").required(true).args(["landmarks", "synthetic"])))]
pub struct WitnessSource {
    #[arg(long, requires = "witnesses")]
    pub landmarks: Option<PathBuf>,
    #[arg(long, requires = "landmarks")]
    pub witnesses: Option<PathBuf>,
    /// Synthetic sample split into landmarks (first points) and witnesses.
    #[arg(long, value_parser = parse_synthetic, conflicts_with = "landmarks")]
    pub synthetic: Option<SyntheticKind>,
    /// Total number of synthetic points.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Number of synthetic points used as landmarks.
    #[arg(long, default_value_t = 100)]
    pub landmarks_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<PointFormat>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    #[arg(long)]
    pub dim: usize,
    /// Keep per-face witness counters.
    #[arg(long)]
    pub counters: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RwitnessArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub rho: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AddLandmarkArgs {
    #[command(flatten)]
    pub source: WitnessSource,
    #[arg(long)]
    pub dim: usize,
    /// Coordinates of the new landmark, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Facets,
    Cofaces,
    RipsGrid,
    RwitnessGrid,
    MaximalVsTotal,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    /// Synthetic sample; each scenario has its own default.
    #[arg(long, value_parser = parse_synthetic)]
    pub synthetic: Option<SyntheticKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Landmarks for the witness-based scenarios.
    #[arg(long)]
    pub landmarks_count: Option<usize>,
    /// Maximal dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Relaxation for the facets and cofaces scenarios.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Comma-separated grid of r or rho values.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    /// Faces sampled per dimension.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Timed passes over the sampled faces.
    #[arg(long, default_value_t = 20)]
    pub passes: usize,
    /// CSV destination; stdout by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_faces: Option<usize>,
}

pub fn load(path: &Path, format: Option<PointFormat>) -> CliResult<PointCloud> {
    let format = format.unwrap_or_else(|| PointFormat::from_path(path));
    Ok(load_points(path, format)?)
}

fn point_cloud(src: &PointSource) -> CliResult<(PointCloud, Vec<(String, Value)>)> {
    match (&src.points, src.synthetic) {
        (Some(path), _) => Ok((
            load(path, src.format)?,
            vec![("points".into(), Value::from(path.display().to_string()))],
        )),
        (None, Some(kind)) => Ok((
            sample_synthetic(kind, src.n, src.seed)?,
            vec![
                ("synthetic".into(), Value::from(kind.to_string())),
                ("n".into(), Value::from(src.n)),
                ("seed".into(), Value::from(src.seed)),
            ],
        )),
        (None, None) => Err(CliError::Usage(
            "one of --points or --synthetic is required".into(),
        )),
    }
}

/// Splits a synthetic sample into landmarks and witnesses.
pub fn synthetic_split(
    kind: SyntheticKind,
    n: usize,
    landmarks: usize,
    seed: u64,
) -> CliResult<(PointCloud, PointCloud)> {
    if landmarks == 0 || landmarks >= n {
        return Err(CliError::Usage(format!(
            "--landmarks-count must be between 1 and n-1 (n = {n})"
        )));
    }
    let all = sample_synthetic(kind, n, seed)?;
    Ok(all.split_at(landmarks))
}

type Params = Vec<(String, Value)>;

fn witness_clouds(src: &WitnessSource) -> CliResult<(PointCloud, PointCloud, Params)> {
    match (&src.landmarks, &src.witnesses, src.synthetic) {
        (Some(l), Some(w), _) => Ok((
            load(l, src.format)?,
            load(w, src.format)?,
            vec![
                ("landmarks".into(), Value::from(l.display().to_string())),
                ("witnesses".into(), Value::from(w.display().to_string())),
            ],
        )),
        (None, None, Some(kind)) => {
            let (l, w) = synthetic_split(kind, src.n, src.landmarks_count, src.seed)?;
            Ok((
                l,
                w,
                vec![
                    ("synthetic".into(), Value::from(kind.to_string())),
                    ("n".into(), Value::from(src.n)),
                    ("landmarks_count".into(), Value::from(src.landmarks_count)),
                    ("seed".into(), Value::from(src.seed)),
                ],
            ))
        }
        _ => Err(CliError::Usage(
            "give --landmarks and --witnesses, or --synthetic".into(),
        )),
    }
}

fn finish(
    report: &RunReport,
    tree: &SimplexTree,
    output: &OutputArgs,
    out: &mut dyn Write,
) -> CliResult<()> {
    if let Some(path) = &output.out {
        let mut w = BufWriter::new(File::create(path)?);
        write_words(tree, &mut w)?;
        w.flush()?;
    }
    write!(out, "{}", report.to_table())?;
    if output.json {
        writeln!(out, "{}", report.to_json())?;
    }
    Ok(())
}

pub fn cmd_rips(args: &RipsArgs, out: &mut dyn Write) -> CliResult<RunReport> {
    let (cloud, mut params) = point_cloud(&args.source)?;
    params.push(("r".into(), Value::from(args.r)));
    params.push(("dim".into(), Value::from(args.dim)));
    let build = build_rips_limited(
        &cloud,
        RipsParams::new(args.r, args.dim)?,
        args.output.max_faces,
    )?;
    let report = RunReport {
        command: "rips".into(),
        params,
        preprocessing: "T_g",
        t_pre: build.graph_time.as_secs_f64(),
        t_build: build.expansion_time.as_secs_f64(),
        edges: Some(build.edges),
        faces_per_dimension: build.tree.faces_per_dimension(),
        extra: Vec::new(),
    };
    finish(&report, &build.tree, &args.output, out)?;
    Ok(report)
}

pub fn cmd_witness(args: &WitnessArgs, out: &mut dyn Write) -> CliResult<RunReport> {
    let (l, w, mut params) = witness_clouds(&args.source)?;
    params.push(("dim".into(), Value::from(args.dim)));
    let start = Instant::now();
    let setup = WitnessSetup::new(l, w, args.dim)?;
    let t_pre = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let tree = build_witness_limited(&setup, args.counters, args.output.max_faces)?;
    let report = RunReport {
        command: "witness".into(),
        params,
        preprocessing: "T_nn",
        t_pre,
        t_build: start.elapsed().as_secs_f64(),
        edges: None,
        faces_per_dimension: tree.faces_per_dimension(),
        extra: Vec::new(),
    };
    finish(&report, &tree, &args.output, out)?;
    Ok(report)
}

pub fn cmd_rwitness(args: &RwitnessArgs, out: &mut dyn Write) -> CliResult<RunReport> {
    let (l, w, mut params) = witness_clouds(&args.source)?;
    params.push(("dim".into(), Value::from(args.dim)));
    params.push(("rho".into(), Value::from(args.rho)));
    let relaxed = RelaxedParams::new(args.rho, args.dim)?;
    let start = Instant::now();
    let setup = WitnessSetup::relaxed(l, w, args.dim, args.rho)?;
    let t_pre = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let tree = build_relaxed_witness_limited(&setup, relaxed, args.output.max_faces)?;
    let report = RunReport {
        command: "rwitness".into(),
        params,
        preprocessing: "T_nn",
        t_pre,
        t_build: start.elapsed().as_secs_f64(),
        edges: None,
        faces_per_dimension: tree.faces_per_dimension(),
        extra: Vec::new(),
    };
    finish(&report, &tree, &args.output, out)?;
    Ok(report)
}

fn parse_point(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad coordinate {t:?} in --point")))
        })
        .collect()
}

pub fn cmd_add_landmark(args: &AddLandmarkArgs, out: &mut dyn Write) -> CliResult<RunReport> {
    let x = parse_point(&args.point)?;
    let (l, w, mut params) = witness_clouds(&args.source)?;
    params.push(("dim".into(), Value::from(args.dim)));
    params.push(("point".into(), Value::from(args.point.clone())));
    let start = Instant::now();
    let mut setup = WitnessSetup::new(l, w, args.dim)?;
    let t_pre = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let mut tree = build_witness_limited(&setup, true, args.output.max_faces)?;
    let t_build = start.elapsed().as_secs_f64();
    let faces_before = tree.num_simplices();

    let start = Instant::now();
    let upd = reverse_nn(&setup, &x)?;
    insert_landmark(&mut tree, &mut setup, &upd)?;
    let t_insert = start.elapsed().as_secs_f64();
    let report = RunReport {
        command: "add-landmark".into(),
        params,
        preprocessing: "T_nn",
        t_pre,
        t_build,
        edges: None,
        faces_per_dimension: tree.faces_per_dimension(),
        extra: vec![
            ("new_label".into(), Value::from(upd.label.get())),
            ("affected_witnesses".into(), Value::from(upd.affected.len())),
            ("faces_before".into(), Value::from(faces_before)),
            (
                "T_insert".into(),
                Value::from(crate::report::sig3(t_insert)),
            ),
        ],
    };
    finish(&report, &tree, &args.output, out)?;
    Ok(report)
}

/// Defaults of the facet and coface scenarios: a relaxed witness complex
/// of dimension 13 on a 3-sphere sample.
pub const FACETS_SYNTHETIC: SyntheticKind = SyntheticKind::Sphere(3);
pub const FACETS_N: usize = 2000;
pub const FACETS_LANDMARKS: usize = 50;
pub const FACETS_DIM: usize = 13;
pub const FACETS_RHO: f64 = 0.35;

/// The relaxed witness complex used by the per-dimension scenarios.
pub fn facets_complex(
    kind: SyntheticKind,
    n: usize,
    landmarks: usize,
    k: usize,
    rho: f64,
    seed: u64,
    limit: Option<usize>,
) -> CliResult<SimplexTree> {
    let (l, w) = synthetic_split(kind, n, landmarks, seed)?;
    let setup = WitnessSetup::relaxed(l, w, k, rho)?;
    Ok(build_relaxed_witness_limited(
        &setup,
        RelaxedParams::new(rho, k)?,
        limit,
    )?)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let csv = match args.scenario {
        Scenario::Facets | Scenario::Cofaces => {
            let tree = facets_complex(
                args.synthetic.unwrap_or(FACETS_SYNTHETIC),
                args.n.unwrap_or(FACETS_N),
                args.landmarks_count.unwrap_or(FACETS_LANDMARKS),
                args.dim.unwrap_or(FACETS_DIM),
                args.rho.unwrap_or(FACETS_RHO),
                args.seed,
                args.max_faces,
            )?;
            let rows = if args.scenario == Scenario::Facets {
                bench::facet_timings(&tree, args.samples, args.passes)
            } else {
                bench::coface_timings(&tree, args.samples, args.passes)
            };
            bench::dim_timings_csv(&rows)
        }
        Scenario::RipsGrid | Scenario::MaximalVsTotal => {
            let kind = args.synthetic.unwrap_or(SyntheticKind::Sphere(4));
            let cloud = sample_synthetic(kind, args.n.unwrap_or(10_000), args.seed)?;
            let default_grid = if args.scenario == Scenario::RipsGrid {
                vec![0.26, 0.28, 0.3, 0.32, 0.34, 0.36]
            } else {
                vec![0.3, 0.35, 0.4]
            };
            let grid = args.grid.clone().unwrap_or(default_grid);
            let rows = bench::rips_grid(
                &cloud,
                &grid,
                args.dim.unwrap_or(5),
                args.scenario == Scenario::MaximalVsTotal,
                args.max_faces,
            )?;
            bench::grid_csv("r", &rows)
        }
        Scenario::RwitnessGrid => {
            let (l, w) = synthetic_split(
                args.synthetic.unwrap_or(SyntheticKind::KleinBottleR5),
                args.n.unwrap_or(10_000),
                args.landmarks_count.unwrap_or(500),
                args.seed,
            )?;
            let grid = args
                .grid
                .clone()
                .unwrap_or_else(|| vec![0.0, 0.05, 0.1, 0.15]);
            let rows = bench::rwitness_grid(&l, &w, args.dim.unwrap_or(5), &grid, args.max_faces)?;
            bench::grid_csv("rho", &rows)
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => write!(out, "{csv}")?,
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Rips(a) => cmd_rips(a, out).map(drop),
        Command::Witness(a) => cmd_witness(a, out).map(drop),
        Command::Rwitness(a) => cmd_rwitness(a, out).map(drop),
        Command::AddLandmark(a) => cmd_add_landmark(a, out).map(drop),
        Command::Bench(a) => cmd_bench(a, out),
    }
}
