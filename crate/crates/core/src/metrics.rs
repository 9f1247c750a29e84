//! Strength measures computed from the component size distribution.
//!
//! * `sigma`: the perception-weighted measure `sum_i i * w_i * nc_i`.
//! * `cole1`: `n / c`, with `c` the number of components.
//! * `cole2`: size of the largest component.
//! * `gfp_score`: `sum_i n_i^2 / n` over component sizes `n_i`.
//!
//! All four map a connected graph to a value on the node-count scale, so
//! dividing by `n` puts graphs of different sizes on a common axis.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::{ccsd, Ccsd, Graph};
use crate::{Error, Result};

/// What to do when a component is larger than the weight vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExtensionPolicy {
    #[default]
    Error,
    /// Reuse the last weight for every larger size.
    ClampToLast,
}

/// Per-component-size weights `w_1..w_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
    policy: ExtensionPolicy,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteWeight { index: i + 1 });
        }
        Ok(Self {
            weights,
            policy: ExtensionPolicy::Error,
        })
    }

    /// All-ones weights of length `len`; with these `sigma` equals `n`.
    pub fn ones(len: usize) -> Self {
        Self::new(alloc::vec![1.0; len.max(1)]).expect("ones are finite")
    }

    pub fn with_policy(mut self, policy: ExtensionPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn policy(&self) -> ExtensionPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights in order `w_1, w_2, ...`.
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of a component of `size` nodes (1-based).
    pub fn get(&self, size: usize) -> Result<f64> {
        debug_assert!(size >= 1);
        match self.weights.get(size - 1) {
            Some(&w) => Ok(w),
            None => match self.policy {
                ExtensionPolicy::ClampToLast => Ok(*self.weights.last().expect("non-empty")),
                ExtensionPolicy::Error => Err(Error::ComponentTooLarge {
                    size,
                    len: self.weights.len(),
                }),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MetricId {
    Proposed,
    Cole1,
    Cole2,
    Gfp,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [
        MetricId::Proposed,
        MetricId::Cole1,
        MetricId::Cole2,
        MetricId::Gfp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Proposed => "proposed",
            MetricId::Cole1 => "cole1",
            MetricId::Cole2 => "cole2",
            MetricId::Gfp => "gfp",
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| alloc::format!("unknown metric `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrengthValue {
    pub raw: f64,
    pub normalized: f64,
    pub metric: MetricId,
}

impl StrengthValue {
    fn new(metric: MetricId, raw: f64, n: usize) -> Self {
        Self {
            raw,
            normalized: normalize(raw, n),
            metric,
        }
    }
}

pub fn normalize(raw: f64, n: usize) -> f64 {
    raw / n as f64
}

/// `sum_i i * w_i * nc_i`, summed in ascending component size.
pub fn sigma_from_ccsd(c: &Ccsd, w: &WeightVector) -> Result<f64> {
    let mut total = 0.0;
    for (size, count) in c.nonzero() {
        total += size as f64 * w.get(size)? * count as f64;
    }
    Ok(total)
}

pub fn cole1_from_ccsd(c: &Ccsd) -> f64 {
    c.n() as f64 / c.component_count() as f64
}

pub fn cole2_from_ccsd(c: &Ccsd) -> f64 {
    c.largest() as f64
}

pub fn gfp_from_ccsd(c: &Ccsd) -> f64 {
    let squares: usize = c.nonzero().map(|(s, k)| s * s * k).sum();
    squares as f64 / c.n() as f64
}

/// Raw value of `metric` for a distribution. `weights` is required only
/// for the proposed metric.
pub fn raw_from_ccsd(metric: MetricId, c: &Ccsd, weights: Option<&WeightVector>) -> Result<f64> {
    match metric {
        MetricId::Proposed => sigma_from_ccsd(c, weights.ok_or(Error::MissingWeights)?),
        MetricId::Cole1 => Ok(cole1_from_ccsd(c)),
        MetricId::Cole2 => Ok(cole2_from_ccsd(c)),
        MetricId::Gfp => Ok(gfp_from_ccsd(c)),
    }
}

pub fn evaluate(
    metric: MetricId,
    g: &Graph,
    weights: Option<&WeightVector>,
) -> Result<StrengthValue> {
    let c = ccsd(g)?;
    Ok(StrengthValue::new(
        metric,
        raw_from_ccsd(metric, &c, weights)?,
        g.n(),
    ))
}

pub fn sigma(g: &Graph, w: &WeightVector) -> Result<StrengthValue> {
    evaluate(MetricId::Proposed, g, Some(w))
}

pub fn cole1(g: &Graph) -> Result<StrengthValue> {
    evaluate(MetricId::Cole1, g, None)
}

pub fn cole2(g: &Graph) -> Result<StrengthValue> {
    evaluate(MetricId::Cole2, g, None)
}

pub fn gfp_score(g: &Graph) -> Result<StrengthValue> {
    evaluate(MetricId::Gfp, g, None)
}
