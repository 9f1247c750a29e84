//! Seeded Erdős–Rényi generators.
//!
//! Graph `index` of a suite draws from ChaCha8 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64(seed)` on stream `index`, so each graph is a pure function
//! of `(model, seed, index)` and suites can be generated in any order.
//! `G(n, p)` visits pairs `(u, v)`, `u < v`, in lexicographic order and keeps
//! each with one Bernoulli(p) draw; `G(n, m)` samples `m` distinct pair ranks
//! without replacement.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RandomModel {
    Gnp { n: usize, p: f64 },
    Gnm { n: usize, m: usize },
}

impl RandomModel {
    pub fn n(&self) -> usize {
        match *self {
            RandomModel::Gnp { n, .. } | RandomModel::Gnm { n, .. } => n,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 3 {
            return Err(Error::InvalidGenerator(format!(
                "n = {n} must be at least 3"
            )));
        }
        match *self {
            RandomModel::Gnp { p, .. } if !(0.0..=1.0).contains(&p) => Err(
                Error::InvalidGenerator(format!("p = {p} must lie in [0, 1]")),
            ),
            RandomModel::Gnm { m, .. } if m > pair_count(n) => Err(Error::InvalidGenerator(
                format!("m = {m} exceeds C({n}, 2) = {}", pair_count(n)),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub model: RandomModel,
    pub seed: u64,
    pub count: usize,
}

fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Decodes the lexicographic rank of a pair `(u, v)`, `u < v`.
fn pair_at(n: usize, mut rank: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row = n - 1 - u;
        if rank < row {
            return (u, u + 1 + rank);
        }
        rank -= row;
        u += 1;
    }
}

/// Graph number `index` of the suite defined by `model` and `seed`.
pub fn generate_one(model: RandomModel, seed: u64, index: u64) -> Result<Graph> {
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = model.n();
    let edges: Vec<(usize, usize)> = match model {
        RandomModel::Gnp { p, .. } => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            edges
        }
        RandomModel::Gnm { m, .. } => {
            let mut ranks = index::sample(&mut rng, pair_count(n), m).into_vec();
            ranks.sort_unstable();
            ranks.into_iter().map(|r| pair_at(n, r)).collect()
        }
    };
    Graph::from_edges(n, edges)
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<Graph>> {
    spec.model.validate()?;
    (0..spec.count as u64)
        .map(|i| generate_one(spec.model, spec.seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gnp(n: usize, p: f64, seed: u64, count: usize) -> Vec<Graph> {
        generate(&GeneratorSpec {
            model: RandomModel::Gnp { n, p },
            seed,
            count,
        })
        .unwrap()
    }

    #[test]
    fn pair_ranks_roundtrip() {
        let n = 7;
        let mut rank = 0;
        for u in 0..n {
            for v in u + 1..n {
                assert_eq!(pair_at(n, rank), (u, v));
                rank += 1;
            }
        }
    }

    #[test]
    fn p_zero_and_one() {
        assert!(gnp(10, 0.0, 1, 3)
            .iter()
            .all(|g| g.edge_count() == 0 && g.n() == 10));
        assert!(gnp(10, 1.0, 1, 3).iter().all(|g| g.edge_count() == 45));
    }

    #[test]
    fn gnm_exact_and_deterministic() {
        let spec = GeneratorSpec {
            model: RandomModel::Gnm { n: 8, m: 5 },
            seed: 42,
            count: 4,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|g| g.edge_count() == 5));
        assert_ne!(a[0], a[1], "streams differ per index");
        assert_eq!(generate_one(spec.model, 42, 2).unwrap(), a[2]);
    }

    #[test]
    fn complete_gnm() {
        let g = generate_one(RandomModel::Gnm { n: 6, m: 15 }, 0, 0).unwrap();
        assert_eq!(g.edge_count(), 15);
    }

    #[test]
    fn invalid_parameters() {
        for model in [
            RandomModel::Gnm { n: 5, m: 100 },
            RandomModel::Gnp { n: 5, p: 1.5 },
            RandomModel::Gnp { n: 2, p: 0.5 },
        ] {
            assert!(matches!(
                generate_one(model, 0, 0),
                Err(Error::InvalidGenerator(_))
            ));
        }
    }

    #[test]
    fn gnp_mean_edge_count() {
        let (n, p) = (20, 0.2);
        let pairs = pair_count(n) as f64;
        let graphs = gnp(n, p, 2024, 1000);
        let mean = graphs.iter().map(|g| g.edge_count() as f64).sum::<f64>() / 1000.0;
        // Standard deviation of the mean of 1000 binomial counts.
        let sd = libm::sqrt(pairs * p * (1.0 - p) / 1000.0);
        assert!((mean - pairs * p).abs() <= 3.0 * sd, "mean {mean}");
    }
}
