//! Weakly connected components and the field bow-tie decomposition.
//!
//! The decomposition splits the largest weakly connected component into
//! three parts by directed degree: the *in-field* (nodes with no outgoing
//! edges), the *out-field* (nodes with no incoming edges) and the *core*
//! (nodes with both). Shares are reported relative to the whole graph, so
//! the three percentages add up to the largest component's share, not 100%.

use crate::graph::{DirectedGraph, NodeId};

/// Weakly connected components: every edge is treated as bidirectional.
#[derive(Clone, Debug)]
pub struct WccResult {
    /// Node id -> component id, components numbered in order of discovery
    /// (ascending smallest member id).
    pub component: Vec<u32>,
    /// Component id -> node count.
    pub sizes: Vec<usize>,
    /// Id of the largest component; size ties break towards the component
    /// containing the smallest node id.
    pub largest: u32,
}

impl WccResult {
    pub fn largest_size(&self) -> usize {
        self.sizes[self.largest as usize]
    }

    /// Share of all nodes that sit in the largest component, in percent.
    pub fn pct_largest(&self) -> f64 {
        100.0 * self.largest_size() as f64 / self.component.len() as f64
    }
}

pub fn weakly_connected_components(g: &DirectedGraph) -> WccResult {
    let n = g.n();
    let mut component = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut queue: Vec<NodeId> = Vec::new();
    for start in 0..n as NodeId {
        if component[start as usize] != u32::MAX {
            continue;
        }
        let comp = sizes.len() as u32;
        let mut size = 0usize;
        component[start as usize] = comp;
        queue.push(start);
        while let Some(u) = queue.pop() {
            size += 1;
            for &v in g.out_neighbours(u).iter().chain(g.in_neighbours(u)) {
                if component[v as usize] == u32::MAX {
                    component[v as usize] = comp;
                    queue.push(v);
                }
            }
        }
        sizes.push(size);
    }
    // max_by_key keeps the last maximum, so compare (size, Reverse(id))
    // explicitly to keep the first one.
    let mut largest = 0u32;
    for (id, &size) in sizes.iter().enumerate() {
        if size > sizes[largest as usize] {
            largest = id as u32;
        }
    }
    WccResult { component, sizes, largest }
}

/// The field bow-tie over the largest weakly connected component.
#[derive(Clone, Debug)]
pub struct FieldBowTie {
    pub in_field: Vec<NodeId>,
    pub core: Vec<NodeId>,
    pub out_field: Vec<NodeId>,
    /// Total node count of the graph the shares are relative to.
    pub n_total: usize,
}

impl FieldBowTie {
    pub fn pct_in_field(&self) -> f64 {
        100.0 * self.in_field.len() as f64 / self.n_total as f64
    }

    pub fn pct_core(&self) -> f64 {
        100.0 * self.core.len() as f64 / self.n_total as f64
    }

    pub fn pct_out_field(&self) -> f64 {
        100.0 * self.out_field.len() as f64 / self.n_total as f64
    }
}

/// Classify every node of the largest component by its directed degrees.
/// Degrees never have to be restricted explicitly: an edge's endpoints
/// always share a weak component, so within-component degrees equal full
/// degrees.
pub fn field_bowtie(g: &DirectedGraph, wcc: &WccResult) -> FieldBowTie {
    let mut decomposition = FieldBowTie {
        in_field: Vec::new(),
        core: Vec::new(),
        out_field: Vec::new(),
        n_total: g.n(),
    };
    for u in 0..g.n() as NodeId {
        if wcc.component[u as usize] != wcc.largest {
            continue;
        }
        if g.k_out(u) == 0 {
            decomposition.in_field.push(u);
        } else if g.k_in(u) == 0 {
            decomposition.out_field.push(u);
        } else {
            decomposition.core.push(u);
        }
    }
    decomposition
}
