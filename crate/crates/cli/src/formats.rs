//! On-disk formats: edge lists, weight vectors, survey and ground-truth CSVs,
//! solver solutions, and the JSON documents the CLI writes.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use netstrength_core::eval::{node_set, Candidate, NodeSet, RankedGroundTruth};
use netstrength_core::weight_fit::{SurveyDataset, SurveyRecord};
use netstrength_core::{Graph, GraphBuilder, WeightVector};
use serde::{Deserialize, Serialize};

/// Lines starting with this declare a node, so isolated nodes survive a
/// round-trip. Other tools read them as comments.
pub const NODE_DIRECTIVE: &str = "#! node";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] netstrength_core::Error),
}

type Result<T> = std::result::Result<T, FormatError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A parsed edge list together with what had to be dropped.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Reads whitespace-separated label pairs. Labels become ids in order of
/// first appearance; `#` starts a comment line.
pub fn read_edge_list<R: Read>(reader: R) -> Result<LoadedGraph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        ids.insert(label.to_string(), labels.len());
        labels.push(label.to_string());
        labels.len() - 1
    };
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| FormatError::Malformed {
            line: line_no,
            reason: e.to_string(),
        })?;
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(NODE_DIRECTIVE) {
            let mut tokens = rest.split_whitespace();
            match (tokens.next(), tokens.next()) {
                (Some(label), None) => {
                    intern(label);
                }
                _ => {
                    return Err(FormatError::Malformed {
                        line: line_no,
                        reason: "node directive needs exactly one label".into(),
                    })
                }
            }
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(FormatError::Malformed {
                line: line_no,
                reason: format!("expected 2 labels, found {}", tokens.len()),
            });
        }
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        edges.push((u, v));
    }
    let mut builder = GraphBuilder::new(labels.len()).labels(labels);
    for (u, v) in edges {
        builder.add_edge(u, v)?;
    }
    let (self_loops, duplicates) = (builder.dropped_self_loops(), builder.dropped_duplicates());
    Ok(LoadedGraph {
        graph: builder.build(),
        self_loops,
        duplicates,
    })
}

pub fn load_edge_list(path: &Path) -> Result<LoadedGraph> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    read_edge_list(file)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> std::io::Result<()> {
    for v in 0..g.n() {
        let label = g.label(v);
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidInput,
                format!("label {label:?} cannot be written to an edge list"),
            ));
        }
        writeln!(out, "{NODE_DIRECTIVE} {label}")?;
    }
    for &(u, v) in g.edges() {
        writeln!(out, "{} {}", g.label(u), g.label(v))?;
    }
    Ok(())
}

pub fn save_edge_list(g: &Graph, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).map_err(io_err(path))?;
    fs::write(path, buf).map_err(io_err(path))
}

#[derive(Debug, Serialize, Deserialize)]
struct WeightRow {
    size: usize,
    weight: f64,
}

/// `size,weight` rows for `i = 1..N`. Floats use the shortest decimal that
/// round-trips.
pub fn write_weights<W: Write>(w: &WeightVector, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for (i, &weight) in w.as_slice().iter().enumerate() {
        wtr.serialize(WeightRow {
            size: i + 1,
            weight,
        })?;
    }
    wtr.flush()
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok(())
}

pub fn read_weights<R: Read>(reader: R) -> Result<WeightVector> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut weights = Vec::new();
    for row in rdr.deserialize() {
        let row: WeightRow = row?;
        if row.size != weights.len() + 1 {
            return Err(FormatError::Invalid(format!(
                "weight rows must list sizes 1, 2, ... in order; found {} at position {}",
                row.size,
                weights.len() + 1
            )));
        }
        weights.push(row.weight);
    }
    Ok(WeightVector::new(weights)?)
}

pub fn load_weights(path: &Path) -> Result<WeightVector> {
    read_weights(fs::File::open(path).map_err(io_err(path))?)
}

fn graph_path(dir: &Path, graph_id: &str) -> PathBuf {
    dir.join(format!("{graph_id}.edges"))
}

pub fn load_graph_by_id(dir: &Path, graph_id: &str) -> Result<Graph> {
    Ok(load_edge_list(&graph_path(dir, graph_id))?.graph)
}

#[derive(Debug, Deserialize)]
struct SurveyRow {
    graph_id: String,
    #[allow(dead_code)]
    participant_id: String,
    estimate: f64,
}

/// `graph_id,participant_id,estimate`; graphs resolve to
/// `<dir>/<graph_id>.edges`. Records keep first-appearance order.
pub fn read_survey<R: Read>(reader: R, graph_dir: &Path) -> Result<SurveyDataset> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut order: Vec<String> = Vec::new();
    let mut estimates: HashMap<String, Vec<f64>> = HashMap::new();
    for row in rdr.deserialize() {
        let row: SurveyRow = row?;
        let entry = estimates.entry(row.graph_id.clone()).or_insert_with(|| {
            order.push(row.graph_id.clone());
            Vec::new()
        });
        entry.push(row.estimate);
    }
    let mut records = Vec::with_capacity(order.len());
    for graph_id in order {
        let graph = load_graph_by_id(graph_dir, &graph_id)?;
        let estimates = estimates.remove(&graph_id).unwrap_or_default();
        records.push(SurveyRecord {
            graph_id,
            graph,
            estimates,
        });
    }
    Ok(SurveyDataset { records })
}

#[derive(Debug, Deserialize)]
struct StrengthTruthRow {
    graph_id: String,
    mean_estimate: f64,
}

/// `graph_id,mean_estimate`, in file order.
pub fn read_strength_truth<R: Read>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: StrengthTruthRow = row?;
        out.push((row.graph_id, row.mean_estimate));
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct StrengthPredictionRow {
    graph_id: String,
    value: f64,
}

/// `graph_id,value` with normalized strengths.
pub fn read_strength_predictions<R: Read>(reader: R) -> Result<Vec<(String, f64)>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: StrengthPredictionRow = row?;
        out.push((row.graph_id, row.value));
    }
    Ok(out)
}

fn parse_members(field: &str) -> NodeSet {
    node_set(field.split(';').map(str::trim).filter(|s| !s.is_empty()))
}

#[derive(Debug, Deserialize)]
struct RankedRow {
    graph_id: String,
    rank: usize,
    members: String,
    #[serde(default)]
    vote_share: Option<f64>,
}

/// `graph_id,rank,members,vote_share` with `;`-separated members and an
/// optional vote share in percent.
pub fn read_ranked_truth<R: Read>(reader: R) -> Result<BTreeMap<String, RankedGroundTruth>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let mut grouped: BTreeMap<String, Vec<(usize, Candidate)>> = BTreeMap::new();
    for row in rdr.deserialize() {
        let row: RankedRow = row?;
        grouped.entry(row.graph_id).or_default().push((
            row.rank,
            Candidate {
                members: parse_members(&row.members),
                vote_share: row.vote_share,
            },
        ));
    }
    let mut out = BTreeMap::new();
    for (graph_id, mut rows) in grouped {
        rows.sort_by_key(|(rank, _)| *rank);
        for (i, (rank, _)) in rows.iter().enumerate() {
            if *rank != i + 1 {
                return Err(FormatError::Invalid(format!(
                    "graph `{graph_id}`: ranks must be 1..{} without gaps or repeats",
                    rows.len()
                )));
            }
        }
        let truth = RankedGroundTruth::new(&graph_id, rows.into_iter().map(|(_, c)| c).collect())?;
        out.insert(graph_id, truth);
    }
    Ok(out)
}

#[derive(Debug, Deserialize)]
struct SetPredictionRow {
    graph_id: String,
    members: String,
}

/// `graph_id,members` with `;`-separated members.
pub fn read_set_predictions<R: Read>(reader: R) -> Result<BTreeMap<String, NodeSet>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = BTreeMap::new();
    for row in rdr.deserialize() {
        let row: SetPredictionRow = row?;
        if out
            .insert(row.graph_id.clone(), parse_members(&row.members))
            .is_some()
        {
            return Err(FormatError::Invalid(format!(
                "duplicate prediction for graph `{}`",
                row.graph_id
            )));
        }
    }
    Ok(out)
}

/// Solver solution: one `name value` pair per line, `#` comments.
pub fn read_solution<R: Read>(reader: R) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line.map_err(|e| FormatError::Malformed {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(name), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(FormatError::Malformed {
                line: idx + 1,
                reason: "expected `name value`".into(),
            });
        };
        let value: f64 = value.parse().map_err(|_| FormatError::Malformed {
            line: idx + 1,
            reason: format!("`{value}` is not a number"),
        })?;
        out.insert(name.to_string(), value);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ManifestModel {
    Gnp { n: usize, p: f64 },
    Gnm { n: usize, m: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(flatten)]
    pub model: ManifestModel,
    pub seed: u64,
    pub count: usize,
    pub rng: String,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlpReport {
    pub objective: f64,
    pub removed: Vec<String>,
    pub residual_value: f64,
    pub gap: f64,
    pub optimum_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DismantleReport {
    pub removed: Vec<String>,
    pub residual_value: f64,
    pub objective: String,
    pub k: usize,
    pub ties: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solution_check: Option<IlpReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub residual_norm: f64,
    pub rank: usize,
    pub lambda: f64,
    pub graphs: usize,
    pub columns: usize,
}
