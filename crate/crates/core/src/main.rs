use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gapratio::coreset::{approx_sample_on, CORESET_GUARD};
use gapratio::fpi::{farthest_point_insertion, rho};
use gapratio::gap::{gap_ratio, Sample};
use gapratio::geometry::{delaunay_angle_audit, gap_report_unit_square};
use gapratio::io::{parse_graph, parse_point_rows, parse_points, parse_sample, read_text};
use gapratio::measures::{
    analytic_bounds, gap_based_discrepancy_bound, star_discrepancy, SpaceKind,
};
use gapratio::metric::{FiniteMetric, Graph, PointCloud};
use gapratio::oracle::optimal_gap_ratio;
use gapratio::reductions::{check_eds_equivalence, check_genmet_equivalence, genmet_reduce};
use gapratio::report::{to_json, to_value, RunReport};
use gapratio::stream::run_stream;
use gapratio::subsets::DEFAULT_GUARD;
use gapratio::{GapError, Result};

/// Uniform point sampling by gap-ratio minimization.
#[derive(Parser)]
#[command(name = "gapratio", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel enumeration (default: $THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print a human summary on standard error.
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Include the wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MetricInput {
    /// Point file: one point per line, comma or whitespace separated.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Graph file: header "n m", then "u v [w]" per edge.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct Arithmetic {
    /// Require exact doubled-integer arithmetic.
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Force floating-point arithmetic.
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct PointsInput {
    /// Point file: one point per line, comma or whitespace separated.
    #[arg(long)]
    points: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Graph,
    UnitSquare,
    PathConnected,
}

#[derive(Subcommand)]
enum Command {
    /// Gap ratio of a given sample.
    Evaluate {
        #[command(flatten)]
        input: MetricInput,
        /// Sample file: one site index per line.
        #[arg(long)]
        sample: PathBuf,
        #[command(flatten)]
        arith: Arithmetic,
    },
    /// Farthest-point insertion with a per-step trace.
    Fpi {
        #[command(flatten)]
        input: MetricInput,
        #[arg(short)]
        k: usize,
        #[command(flatten)]
        arith: Arithmetic,
    },
    /// (1+eps)-approximate sample through a static grid coreset.
    Coreset {
        #[command(flatten)]
        input: PointsInput,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        epsilon: f64,
        /// Seed for the random choice of cell representatives.
        #[arg(long)]
        seed: Option<u64>,
        /// Maximum number of coreset subsets to enumerate.
        #[arg(long, default_value_t = CORESET_GUARD)]
        guard: u128,
        /// Ignore the enumeration guard.
        #[arg(long)]
        force: bool,
    },
    /// (1+eps)-approximate sample from a one-pass streaming coreset.
    Stream {
        #[command(flatten)]
        input: PointsInput,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = CORESET_GUARD)]
        guard: u128,
        #[arg(long)]
        force: bool,
    },
    /// Exhaustive optimal gap ratio.
    Oracle {
        #[command(flatten)]
        input: MetricInput,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        arith: Arithmetic,
    },
    /// Gap ratio of a planar sample over the unit square.
    Square {
        #[command(flatten)]
        input: PointsInput,
    },
    /// Angle audit of the Delaunay triangulation of a planar sample.
    DelaunayAudit {
        #[command(flatten)]
        input: PointsInput,
    },
    /// Star discrepancy and its gap-based upper bound.
    Discrepancy {
        #[command(flatten)]
        input: PointsInput,
    },
    /// {1,2}-metric of a graph, optionally with the independent-domination
    /// certificate for sample size k.
    Reduce {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
    },
    /// Closed-form lower bound on the gap ratio.
    Bounds {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(short)]
        k: Option<usize>,
    },
    /// Domination certificates for one graph, or for every graph on up to
    /// --max-n vertices.
    Certify {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: u128,
    },
}

struct Loaded {
    metric: FiniteMetric,
    input: Value,
    warnings: Vec<String>,
}

fn context(path: &Path) -> String {
    path.display().to_string()
}

fn load_cloud(path: &Path, warnings: &mut Vec<String>) -> Result<(PointCloud, Value)> {
    let cloud = parse_points(&read_text(path)?, &context(path))?;
    if cloud.duplicates_removed() > 0 {
        warnings.push(format!(
            "removed {} duplicate points",
            cloud.duplicates_removed()
        ));
    }
    let input = json!({"sites": cloud.len(), "dim": cloud.dim()});
    Ok((cloud, input))
}

fn load_graph(path: &Path) -> Result<(Graph, Value)> {
    let g = parse_graph(&read_text(path)?, &context(path))?;
    let input = json!({"vertices": g.n(), "edges": g.edges().len(), "weighted": g.is_weighted()});
    Ok((g, input))
}

fn load_metric(input: &MetricInput, arith: &Arithmetic) -> Result<Loaded> {
    let mut warnings = Vec::new();
    let (metric, input) = match (&input.points, &input.graph) {
        (Some(p), _) => {
            let (cloud, input) = load_cloud(p, &mut warnings)?;
            (FiniteMetric::from_cloud(&cloud)?, input)
        }
        (None, Some(g)) => {
            let (graph, input) = load_graph(g)?;
            (FiniteMetric::from_graph(&graph)?, input)
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let metric = if arith.float {
        metric.without_exact()
    } else if arith.exact && !metric.has_exact() {
        return Err(GapError::ExactUnavailable);
    } else {
        metric
    };
    Ok(Loaded {
        metric,
        input,
        warnings,
    })
}

fn guard(guard: u128, force: bool) -> u128 {
    if force {
        u128::MAX
    } else {
        guard
    }
}

fn space_kind(space: Space) -> SpaceKind {
    match space {
        Space::Graph => SpaceKind::Graph,
        Space::UnitSquare => SpaceKind::UnitSquare,
        Space::PathConnected => SpaceKind::PathConnected,
    }
}

/// Runs the command; returns (input digest, result, warnings, summary).
fn execute(command: &Command) -> Result<(Value, Value, Vec<String>, String)> {
    Ok(match command {
        Command::Evaluate {
            input,
            sample,
            arith,
        } => {
            let l = load_metric(input, arith)?;
            let indices = parse_sample(&read_text(sample)?, &context(sample))?;
            let s = Sample::new(indices, l.metric.n())?;
            let rep = gap_ratio(&l.metric, &s)?;
            let summary = format!("gap ratio {} (r {}, R {})", rep.gap_ratio, rep.r, rep.big_r);
            let result = json!({"sample": s, "report": to_value(&rep)?});
            (l.input, result, l.warnings, summary)
        }
        Command::Fpi { input, k, arith } => {
            let l = load_metric(input, arith)?;
            let (s, trace) = farthest_point_insertion(&l.metric, *k)?;
            let summary = format!(
                "fpi sample {:?}, gap ratio {}",
                s.indices(),
                trace.final_report.gap_ratio
            );
            let result = json!({
                "sample": s,
                "gap_ratio": trace.final_report.gap_ratio,
                "trace": to_value(&trace)?,
            });
            (l.input, result, l.warnings, summary)
        }
        Command::Coreset {
            input,
            k,
            epsilon,
            seed,
            guard: g,
            force,
        } => {
            let mut warnings = Vec::new();
            let (cloud, digest) = load_cloud(&input.points, &mut warnings)?;
            let m = FiniteMetric::from_cloud(&cloud)?;
            let res = approx_sample_on(&cloud, &m, *k, *epsilon, *seed, guard(*g, *force))?;
            let summary = format!(
                "coreset of {} cells, sample {:?}, gap ratio {}",
                res.coreset.size(),
                res.sample.indices(),
                res.report.gap_ratio
            );
            let result = json!({
                "sample": res.sample,
                "gap_ratio": res.report.gap_ratio,
                "report": to_value(&res.report)?,
                "coreset_report": to_value(&res.coreset_report)?,
                "params": to_value(&res.params)?,
                "coreset": {
                    "cells": res.coreset.size(),
                    "cell_side": res.coreset.cell_side,
                    "origin": res.coreset.origin,
                    "representatives": res.coreset.representatives(),
                },
            });
            (digest, result, warnings, summary)
        }
        Command::Stream {
            input,
            k,
            epsilon,
            guard: g,
            force,
        } => {
            let rows = parse_point_rows(&read_text(&input.points)?, &context(&input.points))?;
            let digest = json!({"points": rows.len(), "dim": rows[0].len()});
            let res = run_stream(&rows, *k, *epsilon, guard(*g, *force))?;
            let mut warnings = Vec::new();
            let cloud = PointCloud::new(rows[0].len(), rows.clone())?;
            let over_input = if cloud.duplicates_removed() == 0 {
                let m = FiniteMetric::from_cloud(&cloud)?;
                Some(to_value(&gap_ratio(&m, &res.sample)?)?)
            } else {
                warnings.push("stream repeats points; report over the input omitted".into());
                None
            };
            let summary = format!(
                "stream coreset of {} cells (peak {}), sample {:?}",
                res.grid.cells,
                res.peak_cells,
                res.sample.indices()
            );
            let result = json!({
                "sample": res.sample,
                "coreset_report": to_value(&res.coreset_report)?,
                "report": over_input,
                "grid": to_value(&res.grid)?,
                "peak_cells": res.peak_cells,
                "phases": res.phase,
                "R_thresh": res.threshold,
                "centers": res.centers,
            });
            (digest, result, warnings, summary)
        }
        Command::Oracle {
            input,
            k,
            guard: g,
            force,
            arith,
        } => {
            let l = load_metric(input, arith)?;
            let o = optimal_gap_ratio(&l.metric, *k, guard(*g, *force))?;
            let summary = format!(
                "optimal gap ratio {} at {:?}",
                o.gap_ratio,
                o.best_sample.indices()
            );
            let mut result = to_value(&o)?;
            result["gap_ratio"] = json!(o.gap_ratio);
            result["exact"] = json!(o.report.exact);
            (l.input, result, l.warnings, summary)
        }
        Command::Square { input } => {
            let mut warnings = Vec::new();
            let (cloud, digest) = load_cloud(&input.points, &mut warnings)?;
            let rep = gap_report_unit_square(&cloud)?;
            let summary = format!("gap ratio {} over the unit square", rep.gap_ratio);
            (digest, to_value(&rep)?, warnings, summary)
        }
        Command::DelaunayAudit { input } => {
            let mut warnings = Vec::new();
            let (cloud, digest) = load_cloud(&input.points, &mut warnings)?;
            let rep = delaunay_angle_audit(&cloud)?;
            let summary = format!(
                "{} interior triangles of {}, {} violations",
                rep.interior_triangles.len(),
                rep.triangles,
                rep.violations.len()
            );
            (digest, to_value(&rep)?, warnings, summary)
        }
        Command::Discrepancy { input } => {
            let mut warnings = Vec::new();
            let (cloud, digest) = load_cloud(&input.points, &mut warnings)?;
            let d = star_discrepancy(&cloud)?;
            let mut result = to_value(&d)?;
            if cloud.len() >= 2 {
                let gap = gap_report_unit_square(&cloud)?;
                result["gap_bound"] = json!(gap_based_discrepancy_bound(&cloud, gap.r, gap.big_r)?);
                result["r"] = json!(gap.r);
                result["R"] = json!(gap.big_r);
            }
            let summary = format!("star discrepancy {}", d.d_star);
            (digest, result, warnings, summary)
        }
        Command::Reduce { graph, k, guard } => {
            let (g, digest) = load_graph(graph)?;
            let m = genmet_reduce(&g)?;
            let matrix: Vec<Vec<f64>> = (0..m.n()).map(|i| m.row(i).to_vec()).collect();
            let mut result = json!({"distances": matrix});
            let mut summary = format!("reduced metric on {} sites", m.n());
            if let Some(k) = k {
                let (agree, cert) = check_genmet_equivalence(&g, *k, *guard)?;
                result["agree"] = json!(agree);
                result["certificate"] = to_value(&cert)?;
                summary.push_str(&format!(", equivalence holds: {agree}"));
            }
            (digest, result, Vec::new(), summary)
        }
        Command::Bounds { space, k } => {
            let value = analytic_bounds(space_kind(*space), *k)?;
            let mut result = json!({"bound": value});
            if let (Space::UnitSquare, Some(k)) = (space, k) {
                result["fpi_ratio"] = json!(rho(*k)?);
            }
            let digest = json!({"k": k});
            (digest, result, Vec::new(), format!("lower bound {value}"))
        }
        Command::Certify {
            graph,
            k,
            max_n,
            guard,
        } => certify(graph.as_deref(), *k, *max_n, *guard)?,
    })
}

fn certify_one(g: &Graph, ks: &[usize], guard: u128) -> Result<Value> {
    let mut rows = Vec::new();
    for &k in ks {
        let (genmet, gcert) = check_genmet_equivalence(g, k, guard)?;
        let eds = if g.is_connected() {
            let (ok, cert) = check_eds_equivalence(g, k, guard)?;
            json!({"holds": ok, "certificate": to_value(&cert)?})
        } else {
            Value::Null
        };
        rows.push(json!({
            "k": k,
            "genmet": {"holds": genmet, "certificate": to_value(&gcert)?},
            "eds": eds,
        }));
    }
    Ok(Value::Array(rows))
}

fn certify(
    graph: Option<&Path>,
    k: Option<usize>,
    max_n: usize,
    guard: u128,
) -> Result<(Value, Value, Vec<String>, String)> {
    if let Some(path) = graph {
        let (g, digest) = load_graph(path)?;
        let ks: Vec<usize> = match k {
            Some(k) => vec![k],
            None => (2..g.n()).collect(),
        };
        let rows = certify_one(&g, &ks, guard)?;
        return Ok((
            digest,
            json!({"checks": rows}),
            Vec::new(),
            "certified one graph".into(),
        ));
    }
    if !(3..=7).contains(&max_n) {
        return Err(GapError::InvalidParameter {
            name: "max-n",
            value: max_n as f64,
            reason: "exhaustive certification supports 3 to 7 vertices",
        });
    }
    let mut per_n = Vec::new();
    let mut all_hold = true;
    for n in 3..=max_n {
        let pairs = n * (n - 1) / 2;
        let (mut graphs, mut connected, mut failures) = (0u64, 0u64, Vec::new());
        for mask in 0u64..(1 << pairs) {
            let g = Graph::from_edge_mask(n, mask)?;
            graphs += 1;
            let conn = g.is_connected();
            connected += conn as u64;
            for kk in 2..n {
                if k.is_some_and(|k| k != kk) {
                    continue;
                }
                let genmet = check_genmet_equivalence(&g, kk, guard)?.0;
                let eds = !conn || check_eds_equivalence(&g, kk, guard)?.0;
                if !(genmet && eds) && failures.len() < 16 {
                    failures.push(json!({"mask": mask, "k": kk, "genmet": genmet, "eds": eds}));
                }
            }
        }
        all_hold &= failures.is_empty();
        per_n.push(json!({"n": n, "graphs": graphs, "connected": connected, "failures": failures}));
    }
    let summary = format!("certificates hold for all graphs up to {max_n} vertices: {all_hold}");
    Ok((
        json!({"max_n": max_n}),
        json!({"holds": all_hold, "sizes": per_n}),
        Vec::new(),
        summary,
    ))
}

fn init_threads(threads: Option<usize>) {
    let threads = threads.or_else(|| std::env::var("THREADS").ok()?.parse().ok());
    if let Some(n) = threads.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let start = Instant::now();
    let outcome = execute(&cli.command).and_then(|(input, result, warnings, summary)| {
        let report = RunReport {
            command: std::env::args().skip(1).collect(),
            input,
            result,
            warnings,
            wall_time_ms: cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        };
        Ok((to_json(&report)?, summary, report.warnings))
    });
    match outcome {
        Ok((json, summary, warnings)) => {
            println!("{json}");
            if cli.verbose {
                for w in warnings {
                    eprintln!("warning: {w}");
                }
                eprintln!("{summary}");
                eprintln!("took {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
