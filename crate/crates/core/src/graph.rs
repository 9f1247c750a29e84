//! Simple undirected graphs, component decomposition and the component size
//! distribution.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::dsu::Dsu;
use crate::{Error, Result};

/// A simple undirected graph over node ids `0..n`.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Optional labels
/// carry dataset-native node names through relabeling and node removal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph, silently dropping self-loops and repeated edges.
    /// Out-of-range endpoints are an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Self {
        GraphBuilder::new(n).build()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `node`, falling back to its numeric id.
    pub fn label(&self, node: usize) -> String {
        match &self.labels {
            Some(labels) => labels[node].clone(),
            None => node.to_string(),
        }
    }

    /// Finds the node carrying `label` (or, for unlabeled graphs, the id).
    pub fn node_by_label(&self, label: &str) -> Option<usize> {
        match &self.labels {
            Some(labels) => labels.iter().position(|l| l == label),
            None => label.parse::<usize>().ok().filter(|&id| id < self.n),
        }
    }

    /// Returns a copy with `labels` attached. Panics if the length is not `n`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "label count must equal node count");
        self.labels = Some(labels);
        self
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && components(self).sizes.len() == 1
    }
}

/// Incremental graph construction that records what it had to discard.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    labels: Option<Vec<String>>,
    self_loops: usize,
    duplicates: usize,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
            labels: None,
            self_loops: 0,
            duplicates: 0,
        }
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "label count must equal node count");
        self.labels = Some(labels);
        self
    }

    /// Adds `{u, v}`. Returns `Ok(false)` when the edge was a self-loop or
    /// already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        for id in [u, v] {
            if id >= self.n {
                return Err(Error::UnknownNode { id, n: self.n });
            }
        }
        if u == v {
            self.self_loops += 1;
            return Ok(false);
        }
        let key = if u < v { (u, v) } else { (v, u) };
        if self.edges.insert(key) {
            Ok(true)
        } else {
            self.duplicates += 1;
            Ok(false)
        }
    }

    pub fn dropped_self_loops(&self) -> usize {
        self.self_loops
    }

    pub fn dropped_duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn build(self) -> Graph {
        let mut adjacency = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            n: self.n,
            edges: self.edges.into_iter().collect(),
            adjacency,
            labels: self.labels,
        }
    }
}

/// Partition of the node set into connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Component index of every node. Indices are ordered by the smallest
    /// node id each component contains.
    pub assignment: Vec<usize>,
    /// Size of every component, indexed like `assignment` values.
    pub sizes: Vec<usize>,
}

impl ComponentDecomposition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Node ids of component `index`, ascending.
    pub fn members(&self, index: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == index)
            .map(|(v, _)| v)
            .collect()
    }
}

pub fn components(g: &Graph) -> ComponentDecomposition {
    let mut dsu = Dsu::new(g.n);
    for &(u, v) in &g.edges {
        dsu.union(u, v);
    }
    let mut root_index = vec![usize::MAX; g.n];
    let mut assignment = Vec::with_capacity(g.n);
    let mut sizes = Vec::new();
    for v in 0..g.n {
        let r = dsu.find(v);
        if root_index[r] == usize::MAX {
            root_index[r] = sizes.len();
            sizes.push(0);
        }
        let c = root_index[r];
        sizes[c] += 1;
        assignment.push(c);
    }
    ComponentDecomposition { assignment, sizes }
}

/// Connected component size distribution: `count(i)` components of size `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ccsd {
    counts: Vec<usize>,
}

impl Ccsd {
    /// Tallies component sizes into a distribution over `1..=n`.
    pub fn from_sizes(n: usize, sizes: &[usize]) -> Self {
        let mut counts = vec![0; n];
        for &s in sizes {
            counts[s - 1] += 1;
        }
        Self { counts }
    }

    /// Number of components of size `size` (1-based; 0 outside `1..=n`).
    pub fn count(&self, size: usize) -> usize {
        if size == 0 {
            return 0;
        }
        self.counts.get(size - 1).copied().unwrap_or(0)
    }

    /// `counts[i - 1]` holds the number of components of size `i`.
    pub fn as_slice(&self) -> &[usize] {
        &self.counts
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    /// `(size, count)` for every size with at least one component.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i + 1, c))
    }

    pub fn component_count(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.nonzero().last().map_or(0, |(s, _)| s)
    }
}

pub fn ccsd(g: &Graph) -> Result<Ccsd> {
    if g.n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(Ccsd::from_sizes(g.n, &components(g).sizes))
}

/// Induced subgraph on the nodes not in `removed`.
///
/// Surviving nodes keep their relative order and are renumbered `0..n-|S|`;
/// the result is always labeled, so original identities survive.
pub fn remove_nodes(g: &Graph, removed: &[usize]) -> Result<Graph> {
    let mut gone = vec![false; g.n];
    for &id in removed {
        if id >= g.n {
            return Err(Error::UnknownNode { id, n: g.n });
        }
        gone[id] = true;
    }
    let mut new_id = vec![usize::MAX; g.n];
    let mut labels = Vec::new();
    for v in 0..g.n {
        if !gone[v] {
            new_id[v] = labels.len();
            labels.push(g.label(v));
        }
    }
    let mut b = GraphBuilder::new(labels.len()).labels(labels);
    for &(u, v) in &g.edges {
        if !gone[u] && !gone[v] {
            b.add_edge(new_id[u], new_id[v])?;
        }
    }
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn empty_graph_has_no_components() {
        let g = Graph::empty(0);
        assert_eq!(components(&g).count(), 0);
        assert_eq!(ccsd(&g), Err(Error::EmptyGraph));
    }

    #[test]
    fn path_plus_isolated() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let d = components(&g);
        assert_eq!(d.sizes, vec![3, 1]);
        assert_eq!(d.assignment, vec![0, 0, 0, 1]);
    }

    #[test]
    fn component_indices_follow_smallest_member() {
        let g = Graph::from_edges(5, [(3, 4), (1, 2)]).unwrap();
        let d = components(&g);
        assert_eq!(d.assignment, vec![0, 1, 1, 2, 2]);
        assert_eq!(d.members(2), vec![3, 4]);
    }

    #[test]
    fn ccsd_connected_is_unit_at_n() {
        let g = path(20);
        let c = ccsd(&g).unwrap();
        let mut expected = vec![0; 20];
        expected[19] = 1;
        assert_eq!(c.as_slice(), expected.as_slice());
    }

    #[test]
    fn ccsd_three_one_one() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(ccsd(&g).unwrap().as_slice(), &[2, 0, 1, 0, 0]);
    }

    #[test]
    fn builder_drops_loops_and_duplicates() {
        let mut b = GraphBuilder::new(3);
        assert!(b.add_edge(0, 1).unwrap());
        assert!(!b.add_edge(1, 0).unwrap());
        assert!(!b.add_edge(2, 2).unwrap());
        assert_eq!(b.add_edge(0, 3), Err(Error::UnknownNode { id: 3, n: 3 }));
        assert_eq!(b.dropped_duplicates(), 1);
        assert_eq!(b.dropped_self_loops(), 1);
        assert_eq!(b.build().edge_count(), 1);
    }

    #[test]
    fn edge_order_does_not_matter() {
        let a = Graph::from_edges(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let b = Graph::from_edges(4, [(3, 2), (2, 1), (1, 0)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn remove_nothing() {
        let g = path(4);
        let r = remove_nodes(&g, &[]).unwrap();
        assert_eq!(r.n(), 4);
        assert_eq!(r.edges(), g.edges());
    }

    #[test]
    fn remove_star_center() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let r = remove_nodes(&g, &[0]).unwrap();
        assert_eq!(r.n(), 4);
        assert_eq!(r.edge_count(), 0);
        assert_eq!(r.labels().unwrap(), &["1", "2", "3", "4"]);
    }

    #[test]
    fn remove_path_interior() {
        let r = remove_nodes(&path(4), &[1]).unwrap();
        let mut sizes = components(&r).sizes;
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2]);
        assert_eq!(r.label(1), "2");
    }

    #[test]
    fn remove_unknown_node() {
        assert_eq!(
            remove_nodes(&path(3), &[7]),
            Err(Error::UnknownNode { id: 7, n: 3 })
        );
    }

    #[test]
    fn labels_survive_repeated_removal() {
        let g = path(5).with_labels(["a", "b", "c", "d", "e"].map(String::from).to_vec());
        let r = remove_nodes(&remove_nodes(&g, &[0]).unwrap(), &[1]).unwrap();
        assert_eq!(r.labels().unwrap(), &["b", "d", "e"]);
        assert_eq!(r.node_by_label("d"), Some(1));
    }
}
