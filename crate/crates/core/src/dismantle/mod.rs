//! Exact search for the node removal set that leaves the weakest residual
//! graph.
//!
//! Every candidate set `S` with `|S| <= k` (or `|S| = k`) is scored by the
//! chosen metric on the induced subgraph `G - S`. The enumeration runs over
//! lexicographically ordered combinations and can be cut into independent
//! rank ranges ([`plan`], [`search_chunk`]) whose partial optima merge with a
//! deterministic tie-break, so the answer never depends on how the work was
//! split.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dsu::Dsu;
use crate::graph::{Ccsd, Graph};
use crate::metrics::{raw_from_ccsd, MetricId, WeightVector};
use crate::{Error, Result};

pub mod ilp;

#[derive(Clone, Debug, PartialEq)]
pub enum Objective {
    Proposed(WeightVector),
    Cole1,
    Cole2,
    Gfp,
}

impl Objective {
    pub fn metric(&self) -> MetricId {
        match self {
            Objective::Proposed(_) => MetricId::Proposed,
            Objective::Cole1 => MetricId::Cole1,
            Objective::Cole2 => MetricId::Cole2,
            Objective::Gfp => MetricId::Gfp,
        }
    }

    pub fn weights(&self) -> Option<&WeightVector> {
        match self {
            Objective::Proposed(w) => Some(w),
            _ => None,
        }
    }
}

/// Guard against enumerations that would take too long.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchBudget {
    /// `n <= 40` for `k <= 2`, `n <= 25` for `k = 3`, nothing larger.
    #[default]
    Default,
    /// Any instance whose candidate count stays within the limit.
    MaxSubsets(u64),
}

impl SearchBudget {
    fn admits(self, n: usize, k: usize, candidates: u128) -> bool {
        match self {
            SearchBudget::Default => match k {
                0..=2 => n <= 40,
                3 => n <= 25,
                _ => false,
            },
            SearchBudget::MaxSubsets(limit) => candidates <= u128::from(limit),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DismantleQuery<'a> {
    pub graph: &'a Graph,
    pub k: usize,
    pub objective: Objective,
    /// Search `1 <= |S| <= k` instead of `|S| = k`.
    pub allow_fewer: bool,
    pub budget: SearchBudget,
}

impl<'a> DismantleQuery<'a> {
    pub fn new(graph: &'a Graph, k: usize, objective: Objective) -> Self {
        Self {
            graph,
            k,
            objective,
            allow_fewer: true,
            budget: SearchBudget::Default,
        }
    }

    pub fn allow_fewer(mut self, allow: bool) -> Self {
        self.allow_fewer = allow;
        self
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    fn sizes(&self) -> core::ops::RangeInclusive<usize> {
        if self.allow_fewer {
            1..=self.k
        } else {
            self.k..=self.k
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.graph.n();
        if self.k == 0 || self.k >= n {
            return Err(Error::InvalidBudget { k: self.k, n });
        }
        let candidates: u128 = self
            .sizes()
            .map(|s| binomial(n, s))
            .fold(0, u128::saturating_add);
        if !self.budget.admits(n, self.k, candidates) {
            return Err(Error::SearchTooLarge { n, k: self.k });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DismantleResult {
    /// Removed node ids, ascending.
    pub removed: Vec<usize>,
    /// Objective value on the induced residual graph.
    pub residual_value: f64,
    /// Number of candidate sets attaining `residual_value`.
    pub ties: u64,
    pub objective: MetricId,
    pub k: usize,
}

/// A contiguous range of lexicographic ranks among the `size`-subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchChunk {
    pub size: usize,
    pub start: u128,
    pub end: u128,
}

/// Best candidate found in some part of the search space.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Partial {
    best: Option<(f64, Vec<usize>)>,
    ties: u64,
}

/// Smaller sets first, then lexicographic on the sorted ids.
fn tie_order(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Partial {
    fn offer(&mut self, value: f64, set: &[usize]) {
        match &mut self.best {
            None => {
                self.best = Some((value, set.to_vec()));
                self.ties = 1;
            }
            Some((best, best_set)) => {
                if value < *best {
                    *best = value;
                    best_set.clear();
                    best_set.extend_from_slice(set);
                    self.ties = 1;
                } else if value == *best {
                    self.ties += 1;
                    if tie_order(set, best_set) == Ordering::Less {
                        best_set.clear();
                        best_set.extend_from_slice(set);
                    }
                }
            }
        }
    }

    /// Associative, commutative combination of two partial optima.
    pub fn merge(self, other: Partial) -> Partial {
        match (self.best, other.best) {
            (None, b) => Partial {
                best: b,
                ties: other.ties,
            },
            (a, None) => Partial {
                best: a,
                ties: self.ties,
            },
            (Some((va, sa)), Some((vb, sb))) => {
                if va < vb {
                    Partial {
                        best: Some((va, sa)),
                        ties: self.ties,
                    }
                } else if vb < va {
                    Partial {
                        best: Some((vb, sb)),
                        ties: other.ties,
                    }
                } else {
                    let set = if tie_order(&sa, &sb) == Ordering::Greater {
                        sb
                    } else {
                        sa
                    };
                    Partial {
                        best: Some((va, set)),
                        ties: self.ties + other.ties,
                    }
                }
            }
        }
    }
}

/// Splits the search space of `q` into at most `chunks` pieces per size.
pub fn plan(q: &DismantleQuery<'_>, chunks: usize) -> Result<Vec<SearchChunk>> {
    q.validate()?;
    let chunks = chunks.max(1) as u128;
    let n = q.graph.n();
    let mut out = Vec::new();
    for size in q.sizes() {
        let total = binomial(n, size);
        let step = total.div_ceil(chunks).max(1);
        let mut start = 0;
        while start < total {
            let end = (start + step).min(total);
            out.push(SearchChunk { size, start, end });
            start = end;
        }
    }
    Ok(out)
}

/// Scores every candidate in `chunk`.
pub fn search_chunk(q: &DismantleQuery<'_>, chunk: SearchChunk) -> Result<Partial> {
    let mut partial = Partial::default();
    if chunk.start >= chunk.end {
        return Ok(partial);
    }
    let mut eval = ResidualEvaluator::new(q.graph);
    let mut set = unrank(q.graph.n(), chunk.size, chunk.start);
    let mut rank = chunk.start;
    loop {
        let value = eval.evaluate(&q.objective, &set)?;
        partial.offer(value, &set);
        rank += 1;
        if rank >= chunk.end || !next_combination(&mut set, q.graph.n()) {
            break;
        }
    }
    Ok(partial)
}

/// Turns the merged optimum into a result.
pub fn finish(q: &DismantleQuery<'_>, partial: Partial) -> Result<DismantleResult> {
    let (residual_value, removed) = partial.best.ok_or(Error::InvalidBudget {
        k: q.k,
        n: q.graph.n(),
    })?;
    Ok(DismantleResult {
        removed,
        residual_value,
        ties: partial.ties,
        objective: q.objective.metric(),
        k: q.k,
    })
}

/// Same as [`best_removal`], evaluated as `chunks` independent pieces.
pub fn best_removal_chunked(q: &DismantleQuery<'_>, chunks: usize) -> Result<DismantleResult> {
    let mut total = Partial::default();
    for chunk in plan(q, chunks)? {
        total = total.merge(search_chunk(q, chunk)?);
    }
    finish(q, total)
}

/// Exact minimizer of the objective on the residual graph over all
/// admissible removal sets.
pub fn best_removal(q: &DismantleQuery<'_>) -> Result<DismantleResult> {
    best_removal_chunked(q, 1)
}

/// [`best_removal`] restricted to the structural baselines: fewest nodes per
/// component (component count), smallest largest component, and smallest
/// fragmentation score.
pub fn best_removal_baseline(q: &DismantleQuery<'_>) -> Result<DismantleResult> {
    if let Objective::Proposed(_) = q.objective {
        return Err(Error::NotABaseline(MetricId::Proposed));
    }
    best_removal(q)
}

/// Scores removal sets without materializing the residual graph.
#[derive(Debug)]
struct ResidualEvaluator<'g> {
    graph: &'g Graph,
    dsu: Dsu,
    removed: Vec<bool>,
    sizes: Vec<usize>,
}

impl<'g> ResidualEvaluator<'g> {
    fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            dsu: Dsu::new(graph.n()),
            removed: vec![false; graph.n()],
            sizes: Vec::new(),
        }
    }

    fn evaluate(&mut self, objective: &Objective, set: &[usize]) -> Result<f64> {
        for &v in set {
            self.removed[v] = true;
        }
        self.dsu.reset();
        for &(u, v) in self.graph.edges() {
            if !self.removed[u] && !self.removed[v] {
                self.dsu.union(u, v);
            }
        }
        self.sizes.clear();
        for v in 0..self.graph.n() {
            if !self.removed[v] && self.dsu.find(v) == v {
                self.sizes.push(self.dsu.component_size(v));
            }
        }
        for &v in set {
            self.removed[v] = false;
        }
        let c = Ccsd::from_sizes(self.graph.n() - set.len(), &self.sizes);
        raw_from_ccsd(objective.metric(), &c, objective.weights())
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// The `rank`-th `size`-subset of `0..n` in lexicographic order.
fn unrank(n: usize, size: usize, mut rank: u128) -> Vec<usize> {
    let mut set = Vec::with_capacity(size);
    let mut next = 0;
    for slot in 0..size {
        let mut c = next;
        loop {
            let below = binomial(n - c - 1, size - slot - 1);
            if rank < below {
                break;
            }
            rank -= below;
            c += 1;
        }
        set.push(c);
        next = c + 1;
    }
    set
}

fn next_combination(set: &mut [usize], n: usize) -> bool {
    let size = set.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if set[i] < n - size + i {
            set[i] += 1;
            for j in i + 1..size {
                set[j] = set[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
