//! Clustering coefficients on the undirected view: the standard density
//! variant C, the delta-corrected variant B and the degree-corrected
//! variant D, together with their means, degree profiles and edge mixing.
//!
//! For a node with undirected degree k and t edges among its neighbours:
//! `C = 2t / (k(k-1))`, `B = C * k / h` (h the maximum degree), and
//! `D = t / omega` where omega caps the closable pairs by neighbour
//! degrees: `omega = floor(1/2 * sum over neighbours j of min(k_j - 1,
//! k - 1))`. Whatever the graph, `B <= C <= D` holds per node.

use crate::degree;
use crate::exec;
use crate::graph::{DirectedGraph, NodeId, UndirectedView};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusteringVariant {
    C,
    B,
    D,
}

/// Per-node clustering scores plus the ingredients they derive from.
#[derive(Clone, Debug)]
pub struct ClusteringScores {
    pub c: Vec<f64>,
    pub b: Vec<f64>,
    pub d: Vec<f64>,
    /// Linked neighbour pairs (triangles through the node).
    pub t: Vec<u64>,
    /// Degree-constrained upper bound on t.
    pub omega: Vec<u64>,
    /// Maximum undirected degree in the network.
    pub h: usize,
}

impl ClusteringScores {
    pub fn variant(&self, v: ClusteringVariant) -> &[f64] {
        match v {
            ClusteringVariant::C => &self.c,
            ClusteringVariant::B => &self.b,
            ClusteringVariant::D => &self.d,
        }
    }

    pub fn mean(&self, v: ClusteringVariant) -> f64 {
        let scores = self.variant(v);
        scores.iter().sum::<f64>() / scores.len() as f64
    }
}

pub fn clustering_all(und: &UndirectedView) -> ClusteringScores {
    let n = und.n();
    let h = und.max_degree();

    // t(u) via sorted-list intersections: every triangle through u is seen
    // from both of its other corners, hence the halving.
    let per_node = exec::map_indexed(n, |u| {
        let u = u as NodeId;
        let neigh = und.neighbours(u);
        let k = neigh.len();
        let mut double_t = 0u64;
        let mut omega_raw = 0u64;
        for &v in neigh {
            double_t += intersection_size(neigh, und.neighbours(v));
            omega_raw += (und.degree(v) - 1).min(k - 1) as u64;
        }
        (double_t / 2, omega_raw / 2)
    });

    let mut scores = ClusteringScores {
        c: Vec::with_capacity(n),
        b: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        t: Vec::with_capacity(n),
        omega: Vec::with_capacity(n),
        h,
    };
    for (u, &(t, omega)) in per_node.iter().enumerate() {
        let k = und.degree(u as NodeId) as f64;
        let c = if k >= 2.0 { 2.0 * t as f64 / (k * (k - 1.0)) } else { 0.0 };
        let b = c * k / h as f64;
        let d = if omega > 0 { t as f64 / omega as f64 } else { 0.0 };
        scores.c.push(c);
        scores.b.push(b);
        scores.d.push(d);
        scores.t.push(t);
        scores.omega.push(omega);
    }
    scores
}

fn intersection_size(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Pearson correlation of a clustering score across the directed edges
/// (score at source vs score at target). `None` when either side has zero
/// variance over the edge list.
pub fn clustering_mixing(
    g: &DirectedGraph,
    scores: &ClusteringScores,
    variant: ClusteringVariant,
) -> Option<f64> {
    let s = scores.variant(variant);
    let sums = degree::edge_pair_sums(
        g.n(),
        |u| g.out_neighbours(u),
        |u| s[u as usize],
        |v| s[v as usize],
    );
    degree::pearson_from_sums(&sums)
}

/// Mean C, B and D over the nodes of each occurring undirected degree.
#[derive(Clone, Debug)]
pub struct ClusteringProfile {
    /// `(degree, mean C, mean B, mean D)` ascending.
    pub points: Vec<(u64, f64, f64, f64)>,
}

pub fn clustering_profile(und: &UndirectedView, scores: &ClusteringScores) -> ClusteringProfile {
    let mut acc = std::collections::BTreeMap::<u64, (f64, f64, f64, u64)>::new();
    for u in 0..und.n() {
        let k = und.degree(u as NodeId) as u64;
        let e = acc.entry(k).or_insert((0.0, 0.0, 0.0, 0));
        e.0 += scores.c[u];
        e.1 += scores.b[u];
        e.2 += scores.d[u];
        e.3 += 1;
    }
    ClusteringProfile {
        points: acc
            .into_iter()
            .map(|(k, (c, b, d, cnt))| {
                let cnt = cnt as f64;
                (k, c / cnt, b / cnt, d / cnt)
            })
            .collect(),
    }
}
