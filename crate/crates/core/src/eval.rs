//! Agreement between metric outputs and human ground truth.
//!
//! Strength comparisons use RMSE over node-count-normalized values.
//! Authoritative-node predictions are scored against ranked candidate lists:
//!
//! * exact match: share of graphs whose prediction is the top candidate;
//! * rank match: mean 1-based rank of the prediction, undefined as soon as
//!   one prediction is missing from its list;
//! * percentage match: mean vote share of the predicted candidate (0 when
//!   absent), defined only when every list carries vote shares.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::graph::Graph;
use crate::metrics::{evaluate, MetricId, WeightVector};
use crate::{Error, Result};

/// Unordered set of node labels.
pub type NodeSet = BTreeSet<String>;

pub fn node_set<I, S>(labels: I) -> NodeSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    labels.into_iter().map(Into::into).collect()
}

pub fn rmse(pred: &[f64], gt: &[f64]) -> Result<f64> {
    if pred.len() != gt.len() {
        return Err(Error::LengthMismatch {
            left: pred.len(),
            right: gt.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::EmptyInput);
    }
    let sum: f64 = pred.iter().zip(gt).map(|(p, g)| (p - g) * (p - g)).sum();
    Ok(libm::sqrt(sum / pred.len() as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub members: NodeSet,
    /// Percent of respondents choosing this candidate.
    pub vote_share: Option<f64>,
}

/// Candidates in descending order of votes; rank 1 first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RankedGroundTruth {
    candidates: Vec<Candidate>,
}

impl RankedGroundTruth {
    pub fn new(graph_id: &str, candidates: Vec<Candidate>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidGroundTruth {
            graph_id: graph_id.into(),
            reason,
        };
        if candidates.is_empty() {
            return Err(invalid("no candidates".into()));
        }
        for (i, c) in candidates.iter().enumerate() {
            if c.members.is_empty() {
                return Err(invalid(format!("candidate {} is empty", i + 1)));
            }
            if candidates[..i].iter().any(|d| d.members == c.members) {
                return Err(invalid(format!(
                    "candidate {} repeats an earlier one",
                    i + 1
                )));
            }
            if let Some(v) = c.vote_share {
                if !(0.0..=100.0).contains(&v) {
                    return Err(invalid(format!("vote share {v} outside [0, 100]")));
                }
            }
        }
        let total: f64 = candidates.iter().filter_map(|c| c.vote_share).sum();
        if total > 100.0 + 1e-9 {
            return Err(invalid(format!("vote shares sum to {total}")));
        }
        Ok(Self { candidates })
    }

    /// Convenience constructor without vote shares.
    pub fn from_sets(graph_id: &str, sets: Vec<NodeSet>) -> Result<Self> {
        Self::new(
            graph_id,
            sets.into_iter()
                .map(|members| Candidate {
                    members,
                    vote_share: None,
                })
                .collect(),
        )
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    /// 1-based rank of `set`, if listed.
    pub fn rank_of(&self, set: &NodeSet) -> Option<usize> {
        self.candidates
            .iter()
            .position(|c| &c.members == set)
            .map(|i| i + 1)
    }

    fn has_vote_shares(&self) -> bool {
        self.candidates.iter().all(|c| c.vote_share.is_some())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchDetail {
    pub graph_id: String,
    pub predicted: NodeSet,
    pub rank: Option<usize>,
    pub vote_share: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchReport {
    pub exact_match: f64,
    pub rank_match: Option<f64>,
    pub percentage_match: Option<f64>,
    pub details: Vec<MatchDetail>,
}

pub fn match_stats(
    preds: &BTreeMap<String, NodeSet>,
    gt: &BTreeMap<String, RankedGroundTruth>,
) -> Result<MatchReport> {
    if preds.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut details = Vec::with_capacity(preds.len());
    let mut with_shares = true;
    for (graph_id, predicted) in preds {
        let truth = gt
            .get(graph_id)
            .ok_or_else(|| Error::MissingGroundTruth(graph_id.clone()))?;
        with_shares &= truth.has_vote_shares();
        let rank = truth.rank_of(predicted);
        let vote_share = match rank {
            Some(r) => truth.candidates[r - 1].vote_share,
            None => Some(0.0),
        };
        details.push(MatchDetail {
            graph_id: graph_id.clone(),
            predicted: predicted.clone(),
            rank,
            vote_share,
        });
    }
    let count = details.len() as f64;
    let hits = details.iter().filter(|d| d.rank == Some(1)).count();
    let rank_match = details
        .iter()
        .map(|d| d.rank)
        .sum::<Option<usize>>()
        .map(|total| total as f64 / count);
    let percentage_match =
        with_shares.then(|| details.iter().filter_map(|d| d.vote_share).sum::<f64>() / count);
    Ok(MatchReport {
        exact_match: hits as f64 / count,
        rank_match,
        percentage_match,
        details,
    })
}

/// A graph with its averaged human strength estimate on `[1, n]`.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub graph_id: String,
    pub graph: Graph,
    pub mean_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRow {
    pub graph_id: String,
    pub n: usize,
    pub gt_norm: f64,
    /// Normalized values, one per metric of the table.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteTable {
    pub metrics: Vec<MetricId>,
    pub rows: Vec<SuiteRow>,
    /// RMSE against `gt_norm`, one per metric.
    pub rmse: Vec<f64>,
}

pub fn compare_suite(
    entries: &[SuiteEntry],
    metrics: &[MetricId],
    weights: Option<&WeightVector>,
) -> Result<SuiteTable> {
    if entries.is_empty() {
        return Err(Error::EmptyInput);
    }
    if metrics.contains(&MetricId::Proposed) && weights.is_none() {
        return Err(Error::MissingWeights);
    }
    let mut rows = Vec::with_capacity(entries.len());
    for e in entries {
        let n = e.graph.n();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if !(e.mean_estimate >= 1.0 && e.mean_estimate <= n as f64) {
            return Err(Error::InvalidGroundTruth {
                graph_id: e.graph_id.clone(),
                reason: format!("mean estimate {} outside [1, {n}]", e.mean_estimate),
            });
        }
        let values = metrics
            .iter()
            .map(|&m| evaluate(m, &e.graph, weights).map(|v| v.normalized))
            .collect::<Result<Vec<_>>>()?;
        rows.push(SuiteRow {
            graph_id: e.graph_id.clone(),
            n,
            gt_norm: e.mean_estimate / n as f64,
            values,
        });
    }
    let gt: Vec<f64> = rows.iter().map(|r| r.gt_norm).collect();
    let mut rmse_per_metric = vec![0.0; metrics.len()];
    for (k, slot) in rmse_per_metric.iter_mut().enumerate() {
        let pred: Vec<f64> = rows.iter().map(|r| r.values[k]).collect();
        *slot = rmse(&pred, &gt)?;
    }
    Ok(SuiteTable {
        metrics: metrics.to_vec(),
        rows,
        rmse: rmse_per_metric,
    })
}
