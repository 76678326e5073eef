//! Preprocessed directed graphs in CSR form, plus the undirected view used
//! by clustering and distance statistics.
//!
//! Preprocessing removes self-loops, collapses duplicate edges and drops
//! labels left without any incident edge, then renumbers the surviving
//! labels densely in ascending label order. All downstream statistics are
//! defined on the preprocessed graph.

pub mod manifest;
pub mod parse;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

pub use parse::{parse_edge_list, EdgeListFormat, RawEdgeList};

pub type NodeId = u32;

/// Counts of what preprocessing removed or observed, kept for provenance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub raw_edges: u64,
    pub self_loops_removed: u64,
    pub duplicate_edges_removed: u64,
    pub isolated_labels_dropped: u64,
    /// Nodes on at least one directed cycle (0 for a DAG), found by Kahn
    /// peeling. Citation snapshots are near-acyclic; cycles are a
    /// diagnostic here, never an error.
    pub nodes_on_cycles: u64,
}

/// A directed graph after preprocessing: no self-loops, no duplicate edges,
/// no isolated nodes, node ids contiguous in `0..n`. Both adjacency
/// directions are stored as CSR with sorted neighbour lists.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_targets: Vec<NodeId>,
    labels: Vec<i64>,
    report: PreprocessReport,
}

impl DirectedGraph {
    /// Build a preprocessed graph from a raw edge list.
    pub fn preprocess(raw: &RawEdgeList) -> Result<Self> {
        let raw_edges = raw.edges.len();

        let mut raw_labels: Vec<i64> = raw.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        raw_labels.sort_unstable();
        raw_labels.dedup();

        let mut edges: Vec<(i64, i64)> =
            raw.edges.iter().copied().filter(|&(a, b)| a != b).collect();
        let self_loops_removed = raw_edges - edges.len();
        edges.sort_unstable();
        let before_dedup = edges.len();
        edges.dedup();
        let duplicate_edges_removed = before_dedup - edges.len();

        let mut labels: Vec<i64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.is_empty() {
            return Err(Error::data(
                "graph is empty after preprocessing (no edges besides self-loops)",
            ));
        }
        if labels.len() > u32::MAX as usize {
            return Err(Error::data(format!(
                "graph has {} nodes, more than the supported 2^32-1",
                labels.len()
            )));
        }
        let isolated_labels_dropped = raw_labels.len() - labels.len();

        let n = labels.len();
        let id_of = |label: i64| labels.binary_search(&label).unwrap() as NodeId;

        // Out-CSR falls straight out of the (src, dst) sort; pushing sources
        // in the same order leaves every in-list sorted as well.
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_counts = vec![0usize; n];
        let mut mapped: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            let (u, v) = (id_of(a), id_of(b));
            mapped.push((u, v));
            out_offsets[u as usize + 1] += 1;
            in_counts[v as usize] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets: Vec<NodeId> = mapped.iter().map(|&(_, v)| v).collect();

        let mut in_offsets = vec![0usize; n + 1];
        for i in 0..n {
            in_offsets[i + 1] = in_offsets[i] + in_counts[i];
        }
        let mut in_cursor = in_offsets[..n].to_vec();
        let mut in_targets = vec![0 as NodeId; mapped.len()];
        for &(u, v) in &mapped {
            in_targets[in_cursor[v as usize]] = u;
            in_cursor[v as usize] += 1;
        }

        let mut graph = DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            labels,
            report: PreprocessReport {
                raw_edges: raw_edges as u64,
                self_loops_removed: self_loops_removed as u64,
                duplicate_edges_removed: duplicate_edges_removed as u64,
                isolated_labels_dropped: isolated_labels_dropped as u64,
                nodes_on_cycles: 0,
            },
        };
        graph.report.nodes_on_cycles = graph.count_nodes_on_cycles() as u64;
        Ok(graph)
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of directed edges.
    pub fn m(&self) -> usize {
        self.out_targets.len()
    }

    pub fn out_neighbours(&self, u: NodeId) -> &[NodeId] {
        &self.out_targets[self.out_offsets[u as usize]..self.out_offsets[u as usize + 1]]
    }

    pub fn in_neighbours(&self, u: NodeId) -> &[NodeId] {
        &self.in_targets[self.in_offsets[u as usize]..self.in_offsets[u as usize + 1]]
    }

    pub fn k_out(&self, u: NodeId) -> usize {
        self.out_offsets[u as usize + 1] - self.out_offsets[u as usize]
    }

    pub fn k_in(&self, u: NodeId) -> usize {
        self.in_offsets[u as usize + 1] - self.in_offsets[u as usize]
    }

    /// Total degree `k = k_in + k_out` (parallel edge pairs both count).
    pub fn k(&self, u: NodeId) -> usize {
        self.k_in(u) + self.k_out(u)
    }

    /// The raw label this node id was renumbered from.
    pub fn label(&self, u: NodeId) -> i64 {
        self.labels[u as usize]
    }

    pub fn report(&self) -> &PreprocessReport {
        &self.report
    }

    /// All directed edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.out_neighbours(u as NodeId)
                .iter()
                .map(move |&v| (u as NodeId, v))
        })
    }

    /// Re-export the edge list under raw labels (used to check that
    /// preprocessing is idempotent).
    pub fn to_raw(&self) -> RawEdgeList {
        RawEdgeList {
            edges: self
                .edges()
                .map(|(u, v)| (self.label(u), self.label(v)))
                .collect(),
        }
    }

    /// Merge out- and in-neighbourhoods into one undirected simple graph.
    /// A reciprocal pair `a->b`, `b->a` collapses into a single edge.
    pub fn undirected_view(&self) -> UndirectedView {
        let n = self.n();
        let lists = exec::map_indexed(n, |u| {
            let u = u as NodeId;
            let mut merged: Vec<NodeId> =
                Vec::with_capacity(self.k_out(u) + self.k_in(u));
            merged.extend_from_slice(self.out_neighbours(u));
            merged.extend_from_slice(self.in_neighbours(u));
            merged.sort_unstable();
            merged.dedup();
            merged
        });
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        let mut total = 0usize;
        for list in &lists {
            total += list.len();
            offsets.push(total);
        }
        let mut targets = Vec::with_capacity(total);
        for list in lists {
            targets.extend(list);
        }
        UndirectedView { offsets, targets }
    }

    /// Kahn peeling: repeatedly remove in-degree-0 nodes; whatever survives
    /// sits on a directed cycle.
    fn count_nodes_on_cycles(&self) -> usize {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|u| self.k_in(u as NodeId)).collect();
        let mut queue: Vec<NodeId> =
            (0..n as NodeId).filter(|&u| indeg[u as usize] == 0).collect();
        let mut removed = 0usize;
        while let Some(u) = queue.pop() {
            removed += 1;
            for &v in self.out_neighbours(u) {
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    queue.push(v);
                }
            }
        }
        n - removed
    }
}

/// Symmetric adjacency over the same node ids, CSR with sorted neighbour
/// lists. Each undirected edge appears in both endpoint lists.
#[derive(Clone, Debug)]
pub struct UndirectedView {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl UndirectedView {
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbours(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u as usize]..self.offsets[u as usize + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u as usize + 1] - self.offsets[u as usize]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u as NodeId)).max().unwrap_or(0)
    }

    /// Each undirected edge once, as (lower id, higher id).
    pub fn edge_pairs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            let u = u as NodeId;
            self.neighbours(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v))
        })
    }
}
