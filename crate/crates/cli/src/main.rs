use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use inka::geometry::{measure, AreaMode, CrossingMethod};
use inka::harness::{analyze_drawing, run_bench_to, BenchConfig};
use inka::ink::{
    bounds_report, ink_total, partial_edge_formulas, scale_ink_delta, zoom_ink, InkMode,
};
use inka::io::{read_graph, read_layout, write_layout_csv, GraphFormat, ReportFormat};
use inka::layout::{layout, Algorithm, LayoutConfig};
use inka::raster::{rasterize_ink, render_svg, RasterConfig};
use inka::transforms::{measure_stub_crossings, partial_edges, scale_layout, zoom_drawing};
use inka::{BoldDrawing, Graph, RenderParams};

#[derive(Parser)]
#[command(name = "inka", version, about = "Ink accounting for bold node-link drawings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ink, bounds, clarity terms and properness of one drawing.
    Analyze(AnalyzeArgs),
    /// Feasible ranges for r, w, L and cr, measured or from raw quantities.
    Bounds(BoundsArgs),
    /// Compute a layout and write it as CSV.
    Layout(LayoutArgs),
    /// Scale, zoom or shorten edges and compare predicted and measured ink.
    Transform(TransformArgs),
    /// Partial-edge report for one stub ratio.
    Partial(PartialArgs),
    /// Write the drawing as SVG.
    Render(RenderArgs),
    /// Pixel-count ink next to the analytic value.
    Raster(RasterArgs),
    /// Run a bench config over graphs, layouts and (r, w) settings.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum InkModeArg {
    Clamped,
    Strict,
}

impl From<InkModeArg> for InkMode {
    fn from(m: InkModeArg) -> Self {
        match m {
            InkModeArg::Clamped => InkMode::Clamped,
            InkModeArg::Strict => InkMode::Strict,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum CrossingArg {
    Auto,
    Sweep,
    Pruned,
    BruteForce,
}

impl From<CrossingArg> for CrossingMethod {
    fn from(m: CrossingArg) -> Self {
        match m {
            CrossingArg::Auto => CrossingMethod::Auto,
            CrossingArg::Sweep => CrossingMethod::Sweep,
            CrossingArg::Pruned => CrossingMethod::Pruned,
            CrossingArg::BruteForce => CrossingMethod::BruteForce,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file (.mtx, .graph, or an edge list).
    #[arg(long)]
    graph: PathBuf,
    /// Override the format guessed from the extension.
    #[arg(long = "graph-format")]
    graph_format: Option<GraphFormat>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        Ok(read_graph(&self.graph, self.graph_format)?)
    }
}

#[derive(Args)]
struct DrawingArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Layout CSV with header node,x,y.
    #[arg(long)]
    layout: PathBuf,
    /// Node disk radius r.
    #[arg(long)]
    radius: f64,
    /// Edge width w.
    #[arg(long, alias = "thickness")]
    width: f64,
    /// Density ceiling gamma in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Drawing area: `auto` (bounding box) or a number.
    #[arg(long, default_value = "auto")]
    area: AreaMode,
    #[arg(long, value_enum, default_value = "auto")]
    crossings: CrossingArg,
    /// `clamped` drops the edge term of edges shorter than 2r.
    #[arg(long = "ink-mode", value_enum, default_value = "clamped")]
    ink_mode: InkModeArg,
}

impl DrawingArgs {
    fn load(&self) -> Result<BoldDrawing> {
        let g = self.graph.load()?;
        let layout = read_layout(&self.layout, g.node_count())?;
        let params = RenderParams::new(self.radius, self.width, self.gamma)?;
        Ok(BoldDrawing::new(g, layout, params)?)
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    drawing: DrawingArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, requires = "layout")]
    graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    layout: Option<PathBuf>,
    #[arg(long, required_unless_present = "graph")]
    nodes: Option<usize>,
    #[arg(long, required_unless_present = "graph")]
    edges: Option<usize>,
    /// Total edge length L.
    #[arg(long, required_unless_present = "graph")]
    length: Option<f64>,
    /// Crossing count cr.
    #[arg(long = "crossing-count", default_value_t = 0)]
    crossing_count: u64,
    #[arg(long)]
    radius: f64,
    #[arg(long, alias = "thickness")]
    width: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Must be a number unless a drawing is given.
    #[arg(long, default_value = "auto")]
    area: AreaMode,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LayoutArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// random, circular, force-directed or multilevel.
    #[arg(long)]
    algorithm: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    iterations: Option<usize>,
    /// Target edge length of the force-directed algorithms.
    #[arg(long = "edge-length")]
    edge_length: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("op").required(true).multiple(false).args(["scale", "zoom", "partial"])))]
struct TransformArgs {
    #[command(flatten)]
    drawing: DrawingArgs,
    /// Multiply edge lengths by sigma.
    #[arg(long)]
    scale: Option<f64>,
    /// Multiply areas (positions, r and w) by zeta.
    #[arg(long)]
    zoom: Option<f64>,
    /// Keep a fraction p of every edge as two stubs.
    #[arg(long)]
    partial: Option<f64>,
    /// Transformed layout CSV (stub CSV for --partial).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PartialArgs {
    #[command(flatten)]
    drawing: DrawingArgs,
    /// Stub ratio p in (0, 1].
    #[arg(long)]
    ratio: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    drawing: DrawingArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RasterArgs {
    #[command(flatten)]
    drawing: DrawingArgs,
    #[arg(long, default_value_t = 2048)]
    resolution: usize,
    #[arg(long, default_value_t = 2)]
    supersampling: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML bench config; relative graph paths resolve against its directory.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads().and_then(|()| run(cli.command)) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("INKA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("INKA_THREADS must be a non-negative integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

/// Writes all of `text` or nothing: files go through a temporary sibling.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
            std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn name_of(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Bounds(a) => bounds(a),
        Command::Layout(a) => layout_cmd(a),
        Command::Transform(a) => transform(a),
        Command::Partial(a) => partial(a),
        Command::Render(a) => {
            let d = a.drawing.load()?;
            emit(a.out.as_deref(), &render_svg(&d))
        }
        Command::Raster(a) => raster(a),
        Command::Bench(a) => bench(a),
    }
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let dr = &a.drawing;
    let d = dr.load()?;
    let analysis = analyze_drawing(
        &d,
        &name_of(&dr.graph.graph),
        &name_of(&dr.layout),
        dr.area,
        dr.crossings.into(),
        dr.ink_mode.into(),
    )?;
    let text = match a.output.format {
        FormatArg::Json => json(&analysis)?,
        FormatArg::Csv => {
            let b = &analysis.bounds;
            let c = &analysis.clarity;
            eprintln!(
                "clarity: nodes {} edges {} overlap {}",
                c.clarity_nodes, c.clarity_edges, c.ambiguity_overlap
            );
            eprintln!(
                "bounds: r in [{}, {}], w in [{}, {}], min-ink radius {}",
                b.r_interval.map_or(f64::NAN, |i| i.lo),
                b.r_interval.map_or(f64::NAN, |i| i.hi),
                b.w_interval.map_or(f64::NAN, |i| i.lo),
                b.w_interval.map_or(f64::NAN, |i| i.hi),
                b.min_ink.map_or(f64::NAN, |m| m.radius),
            );
            if !analysis.properness.verdict {
                eprintln!(
                    "not proper: {} disk overlaps, {} concurrent points, {} collinear overlaps",
                    analysis.properness.disk_overlaps.len(),
                    analysis.properness.concurrent_points.len(),
                    analysis.properness.collinear_overlaps.len()
                );
            }
            inka::io::emit_report(std::slice::from_ref(&analysis.row), ReportFormat::Csv)?
        }
    };
    emit(a.output.out.as_deref(), &text)
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let (n, m, l, cr, area) = match (&a.graph, &a.layout) {
        (Some(g), Some(lp)) => {
            let graph = read_graph(g, None)?;
            let layout = read_layout(lp, graph.node_count())?;
            let d = BoldDrawing::new(graph, layout, RenderParams::new(a.radius, a.width, a.gamma)?)?;
            let mt = measure(&d, a.area, CrossingMethod::Auto);
            (d.node_count(), d.edge_count(), mt.total_edge_length, mt.crossings, mt.area)
        }
        _ => {
            let AreaMode::Fixed(area) = a.area else {
                bail!("--area must be a number when no drawing is given");
            };
            RenderParams::new(a.radius, a.width, a.gamma)?;
            (
                a.nodes.expect("required by clap"),
                a.edges.expect("required by clap"),
                a.length.expect("required by clap"),
                a.crossing_count,
                area,
            )
        }
    };
    let report = bounds_report(n, m, a.radius, a.width, l, cr, a.gamma, area);
    emit(a.out.as_deref(), &json(&report)?)
}

fn layout_cmd(a: LayoutArgs) -> Result<()> {
    let algorithm = a.algorithm.parse::<Algorithm>().map_err(|_| {
        let names: Vec<_> = Algorithm::ALL.iter().map(|x| x.name()).collect();
        anyhow::anyhow!("unknown algorithm `{}`; supported: {}", a.algorithm, names.join(", "))
    });
    let algorithm = match algorithm {
        Ok(x) => x,
        Err(e) => {
            // unknown names are usage errors
            use clap::CommandFactory;
            Cli::command()
                .error(clap::error::ErrorKind::InvalidValue, e.to_string())
                .exit();
        }
    };
    let g = a.graph.load()?;
    let mut cfg = LayoutConfig::new(algorithm, a.seed);
    if let Some(i) = a.iterations {
        cfg.iterations = i;
    }
    if let Some(k) = a.edge_length {
        cfg.ideal_edge_length = k;
    }
    let l = layout(&g, &cfg)?;
    emit(a.out.as_deref(), &write_layout_csv(&l))
}

#[derive(Serialize)]
struct DeltaReport {
    operation: &'static str,
    factor: f64,
    ink_before: f64,
    ink_after: f64,
    predicted_delta: f64,
    measured_delta: f64,
    crossings_before: u64,
    crossings_after: u64,
    radius_after: f64,
    width_after: f64,
}

fn transform(a: TransformArgs) -> Result<()> {
    let dr = &a.drawing;
    let d = dr.load()?;
    let mode: InkMode = dr.ink_mode.into();
    let method: CrossingMethod = dr.crossings.into();
    let before_m = measure(&d, dr.area, method);
    let before = ink_total(&d, &before_m, mode)?.ink_total;
    let p = d.params();
    let (report, file) = if let Some(sigma) = a.scale {
        let scaled = d.with_layout(scale_layout(d.layout(), sigma)?)?;
        let mt = measure(&scaled, dr.area, method);
        let after = ink_total(&scaled, &mt, mode)?.ink_total;
        let predicted = scale_ink_delta(p.width, before_m.total_edge_length, sigma);
        let r = DeltaReport {
            operation: "scale",
            factor: sigma,
            ink_before: before,
            ink_after: after,
            predicted_delta: predicted,
            measured_delta: after - before,
            crossings_before: before_m.crossings,
            crossings_after: mt.crossings,
            radius_after: p.radius,
            width_after: p.width,
        };
        (r, write_layout_csv(scaled.layout()))
    } else if let Some(zeta) = a.zoom {
        let zoomed = zoom_drawing(&d, zeta)?;
        let area = match dr.area {
            AreaMode::Fixed(x) => AreaMode::Fixed(x * zeta),
            AreaMode::Auto => AreaMode::Auto,
        };
        let mt = measure(&zoomed, area, method);
        let after = ink_total(&zoomed, &mt, mode)?.ink_total;
        let zp = zoomed.params();
        let r = DeltaReport {
            operation: "zoom",
            factor: zeta,
            ink_before: before,
            ink_after: after,
            predicted_delta: zoom_ink(before, zeta) - before,
            measured_delta: after - before,
            crossings_before: before_m.crossings,
            crossings_after: mt.crossings,
            radius_after: zp.radius,
            width_after: zp.width,
        };
        (r, write_layout_csv(zoomed.layout()))
    } else {
        let ratio = a.partial.expect("clap enforces one transform");
        let stubs = partial_edges(&d, ratio)?;
        let cr_partial = measure_stub_crossings(&stubs, method);
        let pr = partial_edge_formulas(
            d.node_count(),
            d.edge_count(),
            p.radius,
            p.width,
            before_m.total_edge_length,
            ratio,
            before_m.crossings,
            cr_partial,
            p.gamma,
            before_m.area,
        )?;
        let measured = inka::ink::ink_value(
            d.node_count(),
            d.edge_count(),
            p.radius,
            p.width,
            stubs.total_length(),
            cr_partial,
        );
        let strict_before = inka::ink::ink_value(
            d.node_count(),
            d.edge_count(),
            p.radius,
            p.width,
            before_m.total_edge_length,
            before_m.crossings,
        );
        let r = DeltaReport {
            operation: "partial",
            factor: ratio,
            ink_before: strict_before,
            ink_after: measured,
            predicted_delta: pr.ink_partial - strict_before,
            measured_delta: measured - strict_before,
            crossings_before: before_m.crossings,
            crossings_after: cr_partial,
            radius_after: p.radius,
            width_after: p.width,
        };
        let mut csv = String::from("parent_u,parent_v,x1,y1,x2,y2\n");
        for (s, (u, v)) in stubs.segments.iter().zip(&stubs.parents) {
            csv.push_str(&format!("{u},{v},{:?},{:?},{:?},{:?}\n", s.p.x, s.p.y, s.q.x, s.q.y));
        }
        (r, csv)
    };
    let text = json(&report)?;
    if let Some(out) = &a.out {
        emit(Some(out), &file)?;
    }
    emit(None, &text)
}

fn partial(a: PartialArgs) -> Result<()> {
    let dr = &a.drawing;
    let d = dr.load()?;
    let method: CrossingMethod = dr.crossings.into();
    let mt = measure(&d, dr.area, method);
    let stubs = partial_edges(&d, a.ratio)?;
    let cr_partial = measure_stub_crossings(&stubs, method);
    let p = d.params();
    let report = partial_edge_formulas(
        d.node_count(),
        d.edge_count(),
        p.radius,
        p.width,
        mt.total_edge_length,
        a.ratio,
        mt.crossings,
        cr_partial,
        p.gamma,
        mt.area,
    )?;
    #[derive(Serialize)]
    struct Out {
        ratio: f64,
        crossings_full: u64,
        crossings_partial: u64,
        stub_length: f64,
        #[serde(flatten)]
        report: inka::ink::PartialEdgeReport,
    }
    let out = Out {
        ratio: a.ratio,
        crossings_full: mt.crossings,
        crossings_partial: cr_partial,
        stub_length: stubs.total_length(),
        report,
    };
    emit(a.out.as_deref(), &json(&out)?)
}

fn raster(a: RasterArgs) -> Result<()> {
    let dr = &a.drawing;
    let d = dr.load()?;
    let cfg = RasterConfig::new(a.resolution, a.supersampling)?;
    let mt = measure(&d, dr.area, dr.crossings.into());
    let analytic = ink_total(&d, &mt, dr.ink_mode.into())?.ink_total;
    let raster_ink = rasterize_ink(&d, &cfg)?;
    #[derive(Serialize)]
    struct Out {
        resolution: usize,
        supersampling: usize,
        analytic_ink: f64,
        raster_ink: f64,
        signed_gap: f64,
        relative_gap: f64,
        crossings: u64,
    }
    let out = Out {
        resolution: cfg.resolution,
        supersampling: cfg.supersampling,
        analytic_ink: analytic,
        raster_ink,
        signed_gap: raster_ink - analytic,
        relative_gap: (raster_ink - analytic) / analytic.abs(),
        crossings: mt.crossings,
    };
    emit(a.out.as_deref(), &json(&out)?)
}

fn bench(a: BenchArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.config)
        .with_context(|| format!("reading {}", a.config.display()))?;
    let cfg = BenchConfig::from_toml(&text).with_context(|| format!("in {}", a.config.display()))?;
    let base = a.config.parent().unwrap_or(Path::new("."));
    let format: ReportFormat = a.output.format.into();
    let outcome = match &a.output.out {
        Some(out) => run_bench_to(&cfg, base, out, format)?,
        None => {
            let o = inka::harness::run_bench(&cfg, base).map_err(|(_, e)| e)?;
            inka::io::write_report(&o.rows, format, None)?;
            o
        }
    };
    let s = &outcome.summary;
    eprintln!("rows: {}", s.rows);
    for (label, t) in [
        ("base setting uses least ink", &s.base_least_ink),
        ("(1,1) to (2,1) changes ink by < 10% on sparse graphs", &s.slight_radius_change),
    ] {
        eprintln!("{label}: held {}/{}", t.held, t.applicable);
        for v in &t.violations {
            eprintln!("  {v}");
        }
    }
    Ok(())
}
