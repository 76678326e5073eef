//! Hop plots and effective diameters, estimated with the approximate
//! neighbourhood function (Flajolet-Martin bitmask sketches) or computed
//! exactly by all-pairs BFS on small graphs.
//!
//! A hop plot tracks the number of ordered node pairs (u, v), u != v, with
//! v reachable from u in at most delta hops. The effective diameter is the
//! interpolated hop count where the curve crosses 90% of all finally
//! reachable pairs.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::graph::{DirectedGraph, NodeId};

/// Flajolet-Martin bias correction for the mean least-zero-bit estimate.
const PHI: f64 = 0.77351;

/// Largest graph exact_hop_plot accepts by default.
pub const DEFAULT_EXACT_CAP: usize = 10_000;

/// Guard against pathological sketch allocations (two n x trials buffers).
const ANF_MEMORY_BOUND_BYTES: u64 = 8 << 30;

#[derive(Clone, Debug)]
pub struct HopPlot {
    pub directed: bool,
    /// Per-realization cumulative reachable-pair counts, indexed by hop;
    /// entry 0 belongs to hop 0 and is always 0 (self-pairs are excluded).
    pub realizations: Vec<Vec<f64>>,
    /// Per-hop mean of the realization curves, each normalized by its own
    /// saturated pair count, so the final entry is 1.
    pub mean_curve: Vec<f64>,
    /// Standard error of the mean of those normalized curves.
    pub sem_curve: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct EffectiveDiameter {
    pub mean: f64,
    /// Sample standard deviation over realizations divided by sqrt(count).
    pub sem: f64,
    pub directed: bool,
}

/// Exact hop plot by BFS from every node. Refuses graphs beyond `cap`
/// nodes; the approximate estimator exists for those.
pub fn exact_hop_plot(g: &DirectedGraph, directed: bool, cap: usize) -> Result<HopPlot> {
    if g.n() > cap {
        return Err(Error::data(format!(
            "exact hop plot limited to {cap} nodes, graph has {}; use the ANF estimator",
            g.n()
        )));
    }
    let und = if directed { None } else { Some(g.undirected_view()) };
    let n = g.n();

    // Per-chunk histograms of pair counts by distance, merged in order.
    let partials = exec::map_chunks(n, |range| {
        let mut hist: Vec<u64> = Vec::new();
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for start in range {
            dist.fill(u32::MAX);
            dist[start] = 0;
            queue.push_back(start as NodeId);
            while let Some(u) = queue.pop_front() {
                let du = dist[u as usize];
                let neighbours = match &und {
                    Some(view) => view.neighbours(u),
                    None => g.out_neighbours(u),
                };
                for &v in neighbours {
                    if dist[v as usize] == u32::MAX {
                        dist[v as usize] = du + 1;
                        if hist.len() < (du + 1) as usize + 1 {
                            hist.resize((du + 1) as usize + 1, 0);
                        }
                        hist[(du + 1) as usize] += 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        hist
    });

    let mut hist: Vec<u64> = Vec::new();
    for partial in partials {
        if partial.len() > hist.len() {
            hist.resize(partial.len(), 0);
        }
        for (i, c) in partial.into_iter().enumerate() {
            hist[i] += c;
        }
    }
    if hist.len() < 2 {
        hist.resize(2, 0);
    }
    let mut curve = Vec::with_capacity(hist.len());
    let mut cum = 0u64;
    for &c in &hist {
        cum += c;
        curve.push(cum as f64);
    }
    build_hop_plot(directed, vec![curve])
}

/// Estimate the hop plot with `realizations` independent runs of the
/// approximate neighbourhood function, each using `trials` bitmask sketches
/// per node, OR-merged along edges until no sketch changes.
pub fn anf_hop_plot(
    g: &DirectedGraph,
    directed: bool,
    realizations: usize,
    trials: usize,
    seed: u64,
) -> Result<HopPlot> {
    if realizations < 1 || trials < 1 {
        return Err(Error::data("realizations and trials must both be at least 1"));
    }
    let n = g.n();
    let bytes = 2u128 * n as u128 * trials as u128 * 8;
    if bytes > ANF_MEMORY_BOUND_BYTES as u128 {
        return Err(Error::Resource(format!(
            "ANF sketches would need {bytes} bytes ({n} nodes x {trials} trials x 2 buffers), \
             bound is {ANF_MEMORY_BOUND_BYTES}"
        )));
    }
    let und = if directed { None } else { Some(g.undirected_view()) };

    let mut curves = Vec::with_capacity(realizations);
    let mut cur = vec![0u64; n * trials];
    let mut next = vec![0u64; n * trials];
    for r in 0..realizations {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
        for mask in cur.iter_mut() {
            // Bit i with probability 2^-(i+1): the trailing-zero count of a
            // uniform word is geometric.
            *mask = 1u64 << (rng.next_u64().trailing_zeros().min(63));
        }

        let baseline = estimate_sum(&cur, trials);
        let mut curve = vec![0.0f64];
        loop {
            exec::for_each_row_mut(&mut next, trials, |u, row| {
                let u = u as NodeId;
                row.copy_from_slice(&cur[u as usize * trials..(u as usize + 1) * trials]);
                let neighbours = match &und {
                    Some(view) => view.neighbours(u),
                    None => g.out_neighbours(u),
                };
                for &v in neighbours {
                    let src = &cur[v as usize * trials..(v as usize + 1) * trials];
                    for (dst, s) in row.iter_mut().zip(src) {
                        *dst |= s;
                    }
                }
            });
            if next == cur {
                break;
            }
            std::mem::swap(&mut cur, &mut next);
            curve.push(estimate_sum(&cur, trials) - baseline);
            // Bits only accumulate, so any graph saturates within n hops;
            // the guard protects against sketch-merge regressions.
            if curve.len() > n + 1 {
                return Err(Error::data("hop plot failed to saturate within n hops"));
            }
        }
        curves.push(curve);
    }
    build_hop_plot(directed, curves)
}

/// Sum of per-node neighbourhood-size estimates, chunked for a fixed
/// reduction order.
fn estimate_sum(masks: &[u64], trials: usize) -> f64 {
    let n = masks.len() / trials;
    exec::map_chunks(n, |range| {
        let mut sum = 0.0f64;
        for u in range {
            let row = &masks[u * trials..(u + 1) * trials];
            let mean_b: f64 = row
                .iter()
                .map(|&m| (!m).trailing_zeros() as f64)
                .sum::<f64>()
                / trials as f64;
            sum += mean_b.exp2() / PHI;
        }
        sum
    })
    .into_iter()
    .sum()
}

fn derive_seed(master: u64, idx: u64) -> u64 {
    // splitmix64 of master xor a golden-ratio stride keeps realization
    // streams decorrelated while staying reproducible.
    let mut z = master ^ (idx.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn build_hop_plot(directed: bool, curves: Vec<Vec<f64>>) -> Result<HopPlot> {
    let max_len = curves.iter().map(Vec::len).max().unwrap_or(0);
    let mut normalized: Vec<Vec<f64>> = Vec::with_capacity(curves.len());
    for curve in &curves {
        let &last = curve.last().expect("curves always hold hop 0");
        if last <= 0.0 {
            return Err(Error::data(
                "reachable-pair estimate never grew above zero; increase trials",
            ));
        }
        let mut f: Vec<f64> = curve.iter().map(|&c| c / last).collect();
        f.resize(max_len, 1.0);
        normalized.push(f);
    }
    let rn = curves.len() as f64;
    let mut mean_curve = Vec::with_capacity(max_len);
    let mut sem_curve = Vec::with_capacity(max_len);
    for h in 0..max_len {
        let mean = normalized.iter().map(|f| f[h]).sum::<f64>() / rn;
        let sem = if curves.len() > 1 {
            let var = normalized.iter().map(|f| (f[h] - mean).powi(2)).sum::<f64>()
                / (rn - 1.0);
            (var / rn).sqrt()
        } else {
            0.0
        };
        mean_curve.push(mean);
        sem_curve.push(sem);
    }
    let mut padded = curves;
    for curve in padded.iter_mut() {
        let &last = curve.last().unwrap();
        curve.resize(max_len, last);
    }
    Ok(HopPlot { directed, realizations: padded, mean_curve, sem_curve })
}

/// Interpolated hop count where each realization's curve crosses
/// `quantile` of its saturated pair count; mean and s.e.m. across
/// realizations.
pub fn effective_diameter(hp: &HopPlot, quantile: f64) -> Result<EffectiveDiameter> {
    if !(quantile > 0.0 && quantile < 1.0) {
        return Err(Error::data(format!(
            "effective-diameter quantile must lie in (0,1), got {quantile}"
        )));
    }
    let mut crossings = Vec::with_capacity(hp.realizations.len());
    for curve in &hp.realizations {
        let last = *curve.last().expect("realization curves are never empty");
        let cross = curve
            .iter()
            .position(|&c| c / last >= quantile)
            .expect("normalized curves end at 1.0 >= quantile");
        let value = if cross == 0 {
            0.0
        } else {
            let lo = curve[cross - 1] / last;
            let hi = curve[cross] / last;
            (cross - 1) as f64 + (quantile - lo) / (hi - lo)
        };
        crossings.push(value);
    }
    let rn = crossings.len() as f64;
    let mean = crossings.iter().sum::<f64>() / rn;
    let sem = if crossings.len() > 1 {
        let var = crossings.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / (rn - 1.0);
        (var / rn).sqrt()
    } else {
        0.0
    };
    Ok(EffectiveDiameter { mean, sem, directed: hp.directed })
}
