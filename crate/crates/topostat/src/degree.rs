//! Degree distributions, power-law tail fits and degree-mixing coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{DirectedGraph, NodeId, UndirectedView};

/// Which degree a statistic ranges over. `Total` is `k = k_in + k_out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeMode {
    Total,
    In,
    Out,
}

impl DegreeMode {
    pub fn of(self, g: &DirectedGraph, u: NodeId) -> u64 {
        (match self {
            DegreeMode::Total => g.k(u),
            DegreeMode::In => g.k_in(u),
            DegreeMode::Out => g.k_out(u),
        }) as u64
    }

    pub fn degrees(self, g: &DirectedGraph) -> Vec<u64> {
        (0..g.n() as NodeId).map(|u| self.of(g, u)).collect()
    }
}

/// Histogram of node degrees in one mode.
#[derive(Clone, Debug)]
pub struct DegreeDistribution {
    pub mode: DegreeMode,
    /// `(degree, node count)` ascending; only degrees with at least one node.
    pub counts: Vec<(u64, u64)>,
    pub mean: f64,
}

pub fn degree_distribution(g: &DirectedGraph, mode: DegreeMode) -> DegreeDistribution {
    let degrees = mode.degrees(g);
    let mut counts = std::collections::BTreeMap::<u64, u64>::new();
    let mut total = 0u64;
    for &d in &degrees {
        *counts.entry(d).or_insert(0) += 1;
        total += d;
    }
    DegreeDistribution {
        mode,
        counts: counts.into_iter().collect(),
        mean: total as f64 / g.n() as f64,
    }
}

/// How the tail cutoff for power-law fitting is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KminPolicy {
    /// Fit at every candidate cutoff (10 and 25) and keep the fit with the
    /// smaller KS distance; ties go to the smaller cutoff (larger tail).
    Both,
    Fixed(u64),
}

pub const KMIN_CANDIDATES: [u64; 2] = [10, 25];

impl std::fmt::Display for KminPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KminPolicy::Both => write!(f, "both"),
            KminPolicy::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl std::str::FromStr for KminPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "both" {
            return Ok(KminPolicy::Both);
        }
        match s.parse::<u64>() {
            Ok(k) if k >= 2 => Ok(KminPolicy::Fixed(k)),
            _ => Err(Error::data(format!(
                "kmin policy must be \"both\" or an integer >= 2, got {s:?}"
            ))),
        }
    }
}

/// Maximum-likelihood power-law fit of a degree tail.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PowerLawFit {
    pub kmin: u64,
    /// `1 + tail_n / Σ ln(k/kmin)`; +inf when the tail is degenerate.
    pub gamma: f64,
    pub tail_n: usize,
    /// Max |empirical - fitted| tail CCDF over the distinct tail values;
    /// NaN when the tail is degenerate (serialized as null).
    pub ks_distance: f64,
    /// All tail values equal kmin, so the log-sum vanishes and the MLE
    /// diverges.
    pub degenerate_tail: bool,
}

impl PowerLawFit {
    /// KS distance beyond which the tail should not be read as a power law.
    /// Clean power-law tails at the sample sizes in scope stay well under
    /// 0.05; quasi-exponential tails forced through the MLE land far above.
    pub const POOR_FIT_KS: f64 = 0.10;

    pub fn poor_fit(&self) -> bool {
        self.degenerate_tail || self.ks_distance > Self::POOR_FIT_KS
    }
}

/// Fit the tail `{k : k >= kmin}` of a degree sample by maximum likelihood.
/// Degree-0 nodes fall out of the tail by construction.
pub fn fit_power_law(samples: &[u64], kmin: u64) -> Result<PowerLawFit> {
    if kmin < 1 {
        return Err(Error::data("kmin must be at least 1"));
    }
    let mut tail: Vec<u64> = samples.iter().copied().filter(|&k| k >= kmin).collect();
    if tail.is_empty() {
        return Err(Error::data(format!("no degree values reach kmin = {kmin}")));
    }
    tail.sort_unstable();
    let tail_n = tail.len();

    let log_sum: f64 = tail.iter().map(|&k| (k as f64 / kmin as f64).ln()).sum();
    if log_sum == 0.0 {
        return Ok(PowerLawFit {
            kmin,
            gamma: f64::INFINITY,
            tail_n,
            ks_distance: f64::NAN,
            degenerate_tail: true,
        });
    }
    let gamma = 1.0 + tail_n as f64 / log_sum;

    // Empirical tail CCDF against the fitted (x/kmin)^(1-gamma), evaluated
    // at each distinct tail value.
    let mut ks = 0.0f64;
    let mut idx = 0;
    while idx < tail_n {
        let x = tail[idx];
        // Entries below idx are < x, so tail_n - idx have value >= x.
        let empirical = (tail_n - idx) as f64 / tail_n as f64;
        let fitted = (x as f64 / kmin as f64).powf(1.0 - gamma);
        ks = ks.max((empirical - fitted).abs());
        let mut next = idx;
        while next < tail_n && tail[next] == x {
            next += 1;
        }
        idx = next;
    }

    Ok(PowerLawFit { kmin, gamma, tail_n, ks_distance: ks, degenerate_tail: false })
}

/// Fit under a cutoff policy. With `KminPolicy::Both`, candidates whose tail
/// is empty are skipped; if every candidate is empty the error of the
/// smallest candidate propagates.
pub fn fit_power_law_auto(samples: &[u64], policy: KminPolicy) -> Result<PowerLawFit> {
    let candidates: &[u64] = match policy {
        KminPolicy::Fixed(k) => return fit_power_law(samples, k),
        KminPolicy::Both => &KMIN_CANDIDATES,
    };
    let mut best: Option<PowerLawFit> = None;
    for &kmin in candidates {
        let Ok(fit) = fit_power_law(samples, kmin) else { continue };
        let score = if fit.degenerate_tail { f64::INFINITY } else { fit.ks_distance };
        let better = match &best {
            None => true,
            Some(b) => {
                let best_score =
                    if b.degenerate_tail { f64::INFINITY } else { b.ks_distance };
                score < best_score
            }
        };
        if better {
            best = Some(fit);
        }
    }
    match best {
        Some(fit) => Ok(fit),
        None => fit_power_law(samples, candidates[0]),
    }
}

/// Mean same-mode degree of the (undirected) neighbours of nodes with a
/// given mode-degree.
#[derive(Clone, Debug)]
pub struct NeighbourConnectivityProfile {
    pub mode: DegreeMode,
    /// `(degree, mean neighbour degree)` ascending, only occurring degrees.
    pub points: Vec<(u64, f64)>,
}

pub fn neighbour_connectivity(
    g: &DirectedGraph,
    und: &UndirectedView,
    mode: DegreeMode,
) -> NeighbourConnectivityProfile {
    let degrees = mode.degrees(g);
    // Sums of integer degrees stay far below 2^53, so f64 accumulation is
    // exact and order-independent.
    let mut acc = std::collections::BTreeMap::<u64, (f64, u64)>::new();
    for u in 0..g.n() as NodeId {
        let d = degrees[u as usize];
        let entry = acc.entry(d).or_insert((0.0, 0));
        for &v in und.neighbours(u) {
            entry.0 += degrees[v as usize] as f64;
            entry.1 += 1;
        }
    }
    NeighbourConnectivityProfile {
        mode,
        points: acc
            .into_iter()
            .filter(|&(_, (_, cnt))| cnt > 0)
            .map(|(d, (sum, cnt))| (d, sum / cnt as f64))
            .collect(),
    }
}

/// The five mixing coefficients of a profile. `None` marks an undefined
/// coefficient (zero variance on either side of the edge list).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixingCoefficients {
    pub r: Option<f64>,
    pub r_in_in: Option<f64>,
    pub r_in_out: Option<f64>,
    pub r_out_in: Option<f64>,
    pub r_out_out: Option<f64>,
}

pub fn mixing_coefficients(g: &DirectedGraph, und: &UndirectedView) -> MixingCoefficients {
    MixingCoefficients {
        r: degree_mixing_undirected(und),
        r_in_in: degree_mixing_directed(g, DegreeMode::In, DegreeMode::In),
        r_in_out: degree_mixing_directed(g, DegreeMode::In, DegreeMode::Out),
        r_out_in: degree_mixing_directed(g, DegreeMode::Out, DegreeMode::In),
        r_out_out: degree_mixing_directed(g, DegreeMode::Out, DegreeMode::Out),
    }
}

/// Pearson correlation over the m directed edges of (α-degree of source,
/// β-degree of target), with edge-population means and deviations.
pub fn degree_mixing_directed(
    g: &DirectedGraph,
    alpha: DegreeMode,
    beta: DegreeMode,
) -> Option<f64> {
    let ka = alpha.degrees(g);
    let kb = beta.degrees(g);
    let sums = edge_pair_sums(g.n(), |u| g.out_neighbours(u), |u| ka[u as usize] as f64, |v| {
        kb[v as usize] as f64
    });
    pearson_from_sums(&sums)
}

/// Pearson correlation of endpoint degrees over the undirected edge list,
/// every edge counted once in each orientation.
pub fn degree_mixing_undirected(und: &UndirectedView) -> Option<f64> {
    let deg: Vec<f64> = (0..und.n()).map(|u| und.degree(u as NodeId) as f64).collect();
    let sums = edge_pair_sums(
        und.n(),
        |u| und.neighbours(u),
        |u| deg[u as usize],
        |v| deg[v as usize],
    );
    pearson_from_sums(&sums)
}

#[derive(Clone, Copy, Default)]
pub(crate) struct PairSums {
    pub n: f64,
    pub sx: f64,
    pub sy: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

/// Accumulate Pearson sums over an adjacency relation, chunked by source
/// node so parallel and sequential builds reduce in the same order.
pub(crate) fn edge_pair_sums<'a, N, X, Y>(n: usize, neigh: N, x: X, y: Y) -> PairSums
where
    N: Fn(NodeId) -> &'a [NodeId] + Sync + Send,
    X: Fn(NodeId) -> f64 + Sync + Send,
    Y: Fn(NodeId) -> f64 + Sync + Send,
{
    let partials = exec::map_chunks(n, |range| {
        let mut p = PairSums::default();
        for u in range {
            let xu = x(u as NodeId);
            for &v in neigh(u as NodeId) {
                let yv = y(v);
                p.n += 1.0;
                p.sx += xu;
                p.sy += yv;
                p.sxx += xu * xu;
                p.syy += yv * yv;
                p.sxy += xu * yv;
            }
        }
        p
    });
    let mut total = PairSums::default();
    for p in partials {
        total.n += p.n;
        total.sx += p.sx;
        total.sy += p.sy;
        total.sxx += p.sxx;
        total.syy += p.syy;
        total.sxy += p.sxy;
    }
    total
}

pub(crate) fn pearson_from_sums(s: &PairSums) -> Option<f64> {
    if s.n < 2.0 {
        return None;
    }
    let var_x = s.n * s.sxx - s.sx * s.sx;
    let var_y = s.n * s.syy - s.sy * s.sy;
    if var_x <= 0.0 || var_y <= 0.0 {
        return None;
    }
    let r = (s.n * s.sxy - s.sx * s.sy) / (var_x.sqrt() * var_y.sqrt());
    Some(r.clamp(-1.0, 1.0))
}
