//! Subcommands. Machine-readable output goes to the supplied writer (stdout
//! in the binary); warnings go to stderr.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use netstrength_core::datasets::{generate, GeneratorSpec, RandomModel};
use netstrength_core::dismantle::ilp::{emit_ilp, verify_ilp_solution};
use netstrength_core::eval::{compare_suite, match_stats, rmse, MatchReport, SuiteEntry};
use netstrength_core::metrics::evaluate;
use netstrength_core::{
    build_system, default_weights, fit_weights, DismantleQuery, ExtensionPolicy, Graph, MetricId,
    Objective, SearchBudget, WeightVector,
};

use crate::formats::{self, DismantleReport, FitReport, IlpReport, Manifest, ManifestModel};
use crate::parallel::{best_removal_parallel, default_threads};

#[derive(Debug, Parser)]
#[command(
    name = "netstrength",
    version,
    about = "Component-size network strength and dismantling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate seeded G(n,p) / G(n,m) graphs as edge lists plus a manifest.
    Gen(GenArgs),
    /// Strength of one graph under the selected metrics.
    Strength(StrengthArgs),
    /// Fit a weight vector to survey estimates by least squares.
    FitWeights(FitArgs),
    /// Exact search for the k nodes whose removal weakens the graph most.
    Dismantle(DismantleArgs),
    /// Score predictions against ground truth.
    Eval(EvalArgs),
    /// Normalized metric values and RMSE against ground truth for a suite.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    Gnp,
    Gnm,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (gnp).
    #[arg(long)]
    pub p: Option<f64>,
    /// Edge count (gnm).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value = "graph")]
    pub stem: String,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// `default` for the bundled vector, or a `size,weight` CSV.
    #[arg(long, default_value = "default")]
    pub weights: String,
    /// Reuse the last weight for components larger than the vector.
    #[arg(long)]
    pub clamp_weights: bool,
}

impl WeightArgs {
    pub fn load(&self) -> Result<WeightVector> {
        let w = if self.weights == "default" {
            default_weights()
        } else {
            formats::load_weights(Path::new(&self.weights))
                .with_context(|| format!("reading weights from {}", self.weights))?
        };
        Ok(w.with_policy(if self.clamp_weights {
            ExtensionPolicy::ClampToLast
        } else {
            ExtensionPolicy::Error
        }))
    }
}

#[derive(Debug, Args)]
pub struct StrengthArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Report all four metrics instead of the proposed one.
    #[arg(long)]
    pub all_metrics: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with `graph_id,participant_id,estimate`.
    #[arg(long)]
    pub survey: PathBuf,
    /// Directory holding `<graph_id>.edges`.
    #[arg(long)]
    pub graphs: PathBuf,
    /// Ridge parameter.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Where to write the fitted `size,weight` CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON-lines report (appended); stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DismantleArgs {
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value = "proposed", value_parser = parse_metric)]
    pub objective: MetricId,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Only consider sets of exactly k nodes.
    #[arg(long)]
    pub exact_size: bool,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Replace the default size guard by a limit on candidate sets.
    #[arg(long)]
    pub max_subsets: Option<u64>,
    /// Also write the integer program in LP format.
    #[arg(long)]
    pub emit_lp: Option<PathBuf>,
    /// Check a solver solution (`name value` lines) against the program.
    #[arg(long)]
    pub check_solution: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EvalMode {
    Strength,
    Match,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum)]
    pub mode: EvalMode,
    /// strength: `graph_id,value`; match: `graph_id,members`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// strength: `graph_id,mean_estimate`; match: `graph_id,rank,members,vote_share`.
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Directory of `<graph_id>.edges` (strength mode, to normalize by n).
    #[arg(long)]
    pub graphs: Option<PathBuf>,
    /// CSV report destination (match mode).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Directory of `<graph_id>.edges`.
    #[arg(long)]
    pub graphs: PathBuf,
    /// `graph_id,mean_estimate`.
    #[arg(long)]
    pub ground_truth: PathBuf,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Comma-separated subset of proposed,cole1,cole2,gfp.
    #[arg(long, value_delimiter = ',', value_parser = parse_metric,
          default_value = "proposed,cole1,cole2,gfp")]
    pub metrics: Vec<MetricId>,
}

fn parse_metric(s: &str) -> std::result::Result<MetricId, String> {
    s.parse()
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Strength(a) => cmd_strength(&a, out),
        Command::FitWeights(a) => cmd_fit(&a, out),
        Command::Dismantle(a) => cmd_dismantle(&a, out),
        Command::Eval(a) => cmd_eval(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    let loaded =
        formats::load_edge_list(path).with_context(|| format!("reading {}", path.display()))?;
    if loaded.self_loops + loaded.duplicates > 0 {
        eprintln!(
            "warning: {}: dropped {} self-loop(s) and {} duplicate edge(s)",
            path.display(),
            loaded.self_loops,
            loaded.duplicates
        );
    }
    Ok(loaded.graph)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let (model, manifest_model) = match (a.model, a.p, a.m) {
        (ModelKind::Gnp, Some(p), None) => (
            RandomModel::Gnp { n: a.n, p },
            ManifestModel::Gnp { n: a.n, p },
        ),
        (ModelKind::Gnm, None, Some(m)) => (
            RandomModel::Gnm { n: a.n, m },
            ManifestModel::Gnm { n: a.n, m },
        ),
        (ModelKind::Gnp, _, _) => bail!("gnp needs --p (and no --m)"),
        (ModelKind::Gnm, _, _) => bail!("gnm needs --m (and no --p)"),
    };
    let graphs = generate(&GeneratorSpec {
        model,
        seed: a.seed,
        count: a.count,
    })?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut files = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let name = format!("{}_{}.edges", a.stem, i);
        formats::save_edge_list(g, &a.out.join(&name))?;
        files.push(name);
    }
    let manifest = Manifest {
        model: manifest_model,
        seed: a.seed,
        count: a.count,
        rng: "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = graph index".into(),
        files,
    };
    let manifest_path = a.out.join(format!("{}_manifest.json", a.stem));
    fs::write(
        &manifest_path,
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    for f in &manifest.files {
        writeln!(out, "{}", a.out.join(f).display())?;
    }
    writeln!(out, "{}", manifest_path.display())?;
    Ok(())
}

pub fn cmd_strength(a: &StrengthArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let metrics: &[MetricId] = if a.all_metrics {
        &MetricId::ALL
    } else {
        &[MetricId::Proposed]
    };
    let weights = if metrics.contains(&MetricId::Proposed) {
        Some(a.weights.load()?)
    } else {
        None
    };
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["metric", "n", "raw", "normalized"])?;
    for &m in metrics {
        let v = evaluate(m, &g, weights.as_ref())?;
        wtr.write_record([
            m.as_str().to_string(),
            g.n().to_string(),
            v.raw.to_string(),
            v.normalized.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn cmd_fit(a: &FitArgs, out: &mut dyn Write) -> Result<()> {
    let file =
        fs::File::open(&a.survey).with_context(|| format!("opening {}", a.survey.display()))?;
    let ds = formats::read_survey(file, &a.graphs)?;
    let dm = build_system(&ds)?;
    let fit = fit_weights(&dm, a.lambda)?;
    let mut buf = Vec::new();
    formats::write_weights(&fit.weights, &mut buf)?;
    fs::write(&a.out, buf).with_context(|| format!("writing {}", a.out.display()))?;
    let report = FitReport {
        residual_norm: fit.residual_norm,
        rank: fit.rank,
        lambda: fit.regularization,
        graphs: dm.rows(),
        columns: dm.cols(),
    };
    let line = serde_json::to_string(&report)?;
    match &a.report {
        Some(path) => {
            let mut f = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?;
            writeln!(f, "{line}")?;
        }
        None => writeln!(out, "{line}")?,
    }
    Ok(())
}

pub fn cmd_dismantle(a: &DismantleArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    ensure!(
        a.k >= 1 && a.k < g.n(),
        "--k must satisfy 1 <= k < n = {}",
        g.n()
    );
    let needs_weights =
        a.objective == MetricId::Proposed || a.emit_lp.is_some() || a.check_solution.is_some();
    let weights = if needs_weights {
        Some(a.weights.load()?)
    } else {
        None
    };
    let objective = match a.objective {
        MetricId::Proposed => Objective::Proposed(weights.clone().expect("loaded above")),
        MetricId::Cole1 => Objective::Cole1,
        MetricId::Cole2 => Objective::Cole2,
        MetricId::Gfp => Objective::Gfp,
    };
    let budget = a
        .max_subsets
        .map_or(SearchBudget::Default, SearchBudget::MaxSubsets);
    let q = DismantleQuery::new(&g, a.k, objective)
        .allow_fewer(!a.exact_size)
        .budget(budget);
    let result = best_removal_parallel(&q, a.threads.unwrap_or_else(default_threads))?;

    if let Some(path) = &a.emit_lp {
        let lp = emit_ilp(&g, a.k, weights.as_ref().expect("loaded above"))?;
        fs::write(path, lp).with_context(|| format!("writing {}", path.display()))?;
    }
    let solution_check = match &a.check_solution {
        Some(path) => {
            let file =
                fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let assignment = formats::read_solution(file)?;
            let check = verify_ilp_solution(
                &g,
                a.k,
                weights.as_ref().expect("loaded above"),
                &assignment,
            )?;
            Some(IlpReport {
                objective: check.objective,
                removed: check.removed.iter().map(|&v| g.label(v)).collect(),
                residual_value: check.residual_value,
                gap: check.gap(),
                optimum_gap: check.objective - result.residual_value,
            })
        }
        None => None,
    };
    let report = DismantleReport {
        removed: result.removed.iter().map(|&v| g.label(v)).collect(),
        residual_value: result.residual_value,
        objective: result.objective.as_str().into(),
        k: result.k,
        ties: result.ties,
        solution_check,
    };
    writeln!(out, "{}", serde_json::to_string(&report)?)?;
    Ok(())
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let open = |p: &Path| fs::File::open(p).with_context(|| format!("opening {}", p.display()));
    match a.mode {
        EvalMode::Strength => {
            let dir = a.graphs.as_ref().context("strength mode needs --graphs")?;
            let preds = formats::read_strength_predictions(open(&a.predictions)?)?;
            let truth: BTreeMap<String, f64> =
                formats::read_strength_truth(open(&a.ground_truth)?)?
                    .into_iter()
                    .collect();
            let mut pred_values = Vec::with_capacity(preds.len());
            let mut gt_values = Vec::with_capacity(preds.len());
            let mut wtr = csv::Writer::from_writer(out);
            wtr.write_record(["graph_id", "n", "gt_norm", "prediction"])?;
            for (graph_id, value) in &preds {
                let mean = *truth
                    .get(graph_id)
                    .with_context(|| format!("no ground truth for graph `{graph_id}`"))?;
                let n = formats::load_graph_by_id(dir, graph_id)?.n();
                ensure!(
                    (1.0..=n as f64).contains(&mean),
                    "mean estimate {mean} for `{graph_id}` outside [1, {n}]"
                );
                let gt_norm = mean / n as f64;
                wtr.write_record([
                    graph_id.clone(),
                    n.to_string(),
                    gt_norm.to_string(),
                    value.to_string(),
                ])?;
                pred_values.push(*value);
                gt_values.push(gt_norm);
            }
            let err = rmse(&pred_values, &gt_values)?;
            wtr.write_record(["rmse".into(), String::new(), String::new(), err.to_string()])?;
            wtr.flush()?;
        }
        EvalMode::Match => {
            let preds = formats::read_set_predictions(open(&a.predictions)?)?;
            let truth = formats::read_ranked_truth(open(&a.ground_truth)?)?;
            let report = match_stats(&preds, &truth)?;
            if let Some(path) = &a.out {
                let file = fs::File::create(path)
                    .with_context(|| format!("creating {}", path.display()))?;
                write_match_csv(&report, file)?;
            }
            write_match_table(&report, out)?;
        }
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn join_set(set: &netstrength_core::eval::NodeSet) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(";")
}

pub fn write_match_csv<W: Write>(report: &MatchReport, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["graph_id", "predicted", "rank", "vote_share"])?;
    for d in &report.details {
        wtr.write_record([
            d.graph_id.clone(),
            join_set(&d.predicted),
            d.rank.map_or_else(|| "-".into(), |r| r.to_string()),
            fmt_opt(d.vote_share),
        ])?;
    }
    wtr.write_record(["exact_match", "", "", &report.exact_match.to_string()])?;
    wtr.write_record(["rank_match", "", "", &fmt_opt(report.rank_match)])?;
    wtr.write_record([
        "percentage_match",
        "",
        "",
        &fmt_opt(report.percentage_match),
    ])?;
    wtr.flush()?;
    Ok(())
}

pub fn write_match_table(report: &MatchReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{:<12} {:<16} {:>5}", "graph", "predicted", "rank")?;
    for d in &report.details {
        let rank = d.rank.map_or_else(|| "-".into(), |r| r.to_string());
        writeln!(
            out,
            "{:<12} {:<16} {:>5}",
            d.graph_id,
            join_set(&d.predicted),
            rank
        )?;
    }
    writeln!(out, "exact match:      {}", report.exact_match)?;
    writeln!(out, "rank match:       {}", fmt_opt(report.rank_match))?;
    writeln!(
        out,
        "percentage match: {}",
        fmt_opt(report.percentage_match)
    )?;
    Ok(())
}

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<()> {
    ensure!(!a.metrics.is_empty(), "no metrics selected");
    let file = fs::File::open(&a.ground_truth)
        .with_context(|| format!("opening {}", a.ground_truth.display()))?;
    let truth = formats::read_strength_truth(file)?;
    let weights = if a.metrics.contains(&MetricId::Proposed) {
        Some(a.weights.load()?)
    } else {
        None
    };
    let mut entries = Vec::with_capacity(truth.len());
    for (graph_id, mean_estimate) in truth {
        let graph = formats::load_graph_by_id(&a.graphs, &graph_id)?;
        entries.push(SuiteEntry {
            graph_id,
            graph,
            mean_estimate,
        });
    }
    let table = compare_suite(&entries, &a.metrics, weights.as_ref())?;
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["graph_id".to_string(), "n".into(), "gt_norm".into()];
    header.extend(table.metrics.iter().map(|m| format!("{m}_norm")));
    wtr.write_record(&header)?;
    for row in &table.rows {
        let mut rec = vec![
            row.graph_id.clone(),
            row.n.to_string(),
            row.gt_norm.to_string(),
        ];
        rec.extend(row.values.iter().map(f64::to_string));
        wtr.write_record(&rec)?;
    }
    let mut rec = vec!["rmse".to_string(), String::new(), String::new()];
    rec.extend(table.rmse.iter().map(f64::to_string));
    wtr.write_record(&rec)?;
    wtr.flush()?;
    Ok(())
}
