//! Release acceptance checks. Each criterion is one test that prints a
//! single machine-greppable line, "ACCEPT cN <name>: PASS|FAIL|SKIP (...)",
//! straight to stdout so the lines survive harness capture.
//!
//! Criteria c1-c4 reproduce published reference measurements on public
//! SNAP datasets and skip with a pointer to scripts/fetch-datasets.sh when
//! the files are absent (set TOPOSTAT_DATA_DIR to use another directory).
//! c5-c8 run entirely from fixtures and synthetic data. Reference values
//! live in fixtures/reference_profiles.csv; tolerances reflect the rounding
//! of the published tables plus estimator noise where sampling is involved.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topostat::bowtie::{field_bowtie, weakly_connected_components};
use topostat::clustering::{clustering_all, clustering_mixing, ClusteringVariant};
use topostat::compare::{
    compare, friedman_from_mean_ranks, nemenyi_cd, preset, rank_datasets, significant_pairs,
    studentized_residuals, Alpha, StatMatrix,
};
use topostat::degree::{
    fit_power_law, fit_power_law_auto, mixing_coefficients, DegreeMode, KminPolicy,
};
use topostat::distance::{anf_hop_plot, effective_diameter, exact_hop_plot};
use topostat::graph::{parse_edge_list, DirectedGraph, EdgeListFormat, RawEdgeList};
use topostat::profile::{compute_profile, ComputeOptions};

enum Outcome {
    Pass(String),
    Skip(String),
}

/// Write one line directly to the real stdout, bypassing the harness
/// capture so the ACCEPT lines appear in plain `cargo test` output.
fn announce(line: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

fn criterion<F>(id: &str, name: &str, f: F)
where
    F: FnOnce() -> Result<Outcome, String>,
{
    match f() {
        Ok(Outcome::Pass(detail)) => announce(&format!("ACCEPT {id} {name}: PASS ({detail})")),
        Ok(Outcome::Skip(detail)) => announce(&format!("ACCEPT {id} {name}: SKIP ({detail})")),
        Err(detail) => {
            announce(&format!("ACCEPT {id} {name}: FAIL ({detail})"));
            panic!("{id} {name}: {detail}");
        }
    }
}

fn within(errors: &mut Vec<String>, label: &str, got: f64, want: f64, tol: f64) {
    if !((got - want).abs() <= tol) {
        errors.push(format!("{label}: got {got:.4}, want {want} +/- {tol}"));
    }
}

fn within_opt(errors: &mut Vec<String>, label: &str, got: Option<f64>, want: f64, tol: f64) {
    match got {
        Some(v) => within(errors, label, v, want, tol),
        None => errors.push(format!("{label}: undefined, want {want} +/- {tol}")),
    }
}

fn finish(errors: Vec<String>, detail: String) -> Result<Outcome, String> {
    if errors.is_empty() {
        Ok(Outcome::Pass(detail))
    } else {
        Err(errors.join("; "))
    }
}

fn data_dir() -> PathBuf {
    std::env::var_os("TOPOSTAT_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"))
}

fn dataset_path(file: &str) -> Option<PathBuf> {
    let path = data_dir().join(file);
    path.is_file().then_some(path)
}

fn load_graph(file: &str) -> Option<DirectedGraph> {
    let path = dataset_path(file)?;
    let reader = std::io::BufReader::new(std::fs::File::open(&path).expect("open dataset"));
    let raw = parse_edge_list(reader, EdgeListFormat::Snap).expect("parse dataset");
    Some(DirectedGraph::preprocess(&raw).expect("preprocess dataset"))
}

fn skip_missing(file: &str) -> Result<Outcome, String> {
    Ok(Outcome::Skip(format!(
        "{file} not found under {}; run scripts/fetch-datasets.sh",
        data_dir().display()
    )))
}

fn fixtures() -> StatMatrix {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/reference_profiles.csv");
    StatMatrix::from_csv(std::fs::File::open(path).expect("open fixtures")).expect("parse fixtures")
}

fn fx(m: &StatMatrix, dataset: &str, stat: &str) -> f64 {
    let d = m.datasets.iter().position(|x| x == dataset).unwrap();
    let s = m.stats.iter().position(|x| x == stat).unwrap();
    m.value(d, s)
}

/// Restrict a matrix to the named rows, in the given order.
fn subset_rows(m: &StatMatrix, names: &[&str]) -> StatMatrix {
    let mut values = Vec::with_capacity(names.len() * m.n_stats());
    for name in names {
        let i = m.datasets.iter().position(|d| d == name).expect("fixture row");
        values.extend((0..m.n_stats()).map(|j| m.value(i, j)));
    }
    StatMatrix::new(
        names.iter().map(|s| s.to_string()).collect(),
        m.stats.clone(),
        values,
    )
    .unwrap()
}

const ARXIV: &str = "cit-HepPh.txt";
const GNUTELLA: &str = "p2p-Gnutella31.txt";
const TWITTER: &str = "twitter_combined.txt";

#[test]
fn c1_structure() {
    criterion("c1", "structure", || {
        let Some(g) = load_graph(ARXIV) else { return skip_missing(ARXIV) };
        let t0 = Instant::now();
        let wcc = weakly_connected_components(&g);
        let bt = field_bowtie(&g, &wcc);
        let secs = t0.elapsed().as_secs_f64();

        let m = fixtures();
        let mut errors = Vec::new();
        if g.n() != fx(&m, "arxiv", "n") as usize {
            errors.push(format!("n: got {}, want {}", g.n(), fx(&m, "arxiv", "n")));
        }
        if g.m() != fx(&m, "arxiv", "m") as usize {
            errors.push(format!("m: got {}, want {}", g.m(), fx(&m, "arxiv", "m")));
        }
        within(&mut errors, "pct_wcc", wcc.pct_largest(), fx(&m, "arxiv", "pct_wcc"), 0.1);
        within(&mut errors, "pct_in_field", bt.pct_in_field(), fx(&m, "arxiv", "pct_in_field"), 0.1);
        within(&mut errors, "pct_core", bt.pct_core(), fx(&m, "arxiv", "pct_core"), 0.1);
        within(&mut errors, "pct_out_field", bt.pct_out_field(), fx(&m, "arxiv", "pct_out_field"), 0.1);
        // Budget 10s with 2x slack for unoptimized builds and CI noise.
        if secs > 20.0 {
            errors.push(format!("runtime {secs:.1}s exceeds 20s"));
        }
        finish(errors, format!("n/m exact, wcc and fields within 0.1, {secs:.1}s"))
    });
}

#[test]
fn c2_degrees() {
    criterion("c2", "degrees", || {
        if dataset_path(ARXIV).is_none() {
            return skip_missing(ARXIV);
        }
        let m = fixtures();
        let mut errors = Vec::new();
        let mut covered = Vec::new();
        for (name, file) in [("arxiv", ARXIV), ("gnutella", GNUTELLA), ("twitter", TWITTER)] {
            let Some(g) = load_graph(file) else { continue };
            covered.push(name);
            let und = g.undirected_view();
            let label = |stat: &str| format!("{name} {stat}");

            let mean_degree = 2.0 * g.m() as f64 / g.n() as f64;
            within(&mut errors, &label("mean_degree"), mean_degree, fx(&m, name, "mean_degree"), 0.005);

            let fits = [
                ("gamma", DegreeMode::Total),
                ("gamma_in", DegreeMode::In),
                ("gamma_out", DegreeMode::Out),
            ]
            .map(|(stat, mode)| {
                let fit = fit_power_law_auto(&mode.degrees(&g), KminPolicy::Both)
                    .expect("nonempty tail on these datasets");
                within(&mut errors, &label(stat), fit.gamma, fx(&m, name, stat), 0.05);
                fit
            });
            if name == "gnutella" && !fits[0].poor_fit() {
                errors.push(format!(
                    "gnutella total-degree fit not flagged poor (ks {:.3})",
                    fits[0].ks_distance
                ));
            }

            let mixing = mixing_coefficients(&g, &und);
            within_opt(&mut errors, &label("r"), mixing.r, fx(&m, name, "r"), 0.005);
            within_opt(&mut errors, &label("r_in_in"), mixing.r_in_in, fx(&m, name, "r_in_in"), 0.005);
            within_opt(&mut errors, &label("r_out_out"), mixing.r_out_out, fx(&m, name, "r_out_out"), 0.005);
        }
        finish(errors, format!("datasets covered: {}", covered.join(", ")))
    });
}

#[test]
fn c3_clustering() {
    criterion("c3", "clustering", || {
        let Some(g) = load_graph(ARXIV) else { return skip_missing(ARXIV) };
        let und = g.undirected_view();
        let scores = clustering_all(&und);

        let m = fixtures();
        let mut errors = Vec::new();
        within(&mut errors, "mean_c", scores.mean(ClusteringVariant::C), fx(&m, "arxiv", "mean_c"), 0.005);
        within(&mut errors, "mean_b", scores.mean(ClusteringVariant::B), fx(&m, "arxiv", "mean_b"), 0.0005);
        let mean_d = scores.mean(ClusteringVariant::D);
        if !((mean_d - fx(&m, "arxiv", "mean_d")).abs() <= 0.01) {
            // The reference leaves the exact pair-bound convention open; a
            // miss here means the floor-of-half-sum cap needs revisiting.
            errors.push(format!(
                "mean_d: got {mean_d:.4}, want {} +/- 0.01 (check the degree-capped pair bound convention)",
                fx(&m, "arxiv", "mean_d")
            ));
        }
        within_opt(&mut errors, "r_b", clustering_mixing(&g, &scores, ClusteringVariant::B), fx(&m, "arxiv", "r_b"), 0.02);
        within_opt(&mut errors, "r_d", clustering_mixing(&g, &scores, ClusteringVariant::D), fx(&m, "arxiv", "r_d"), 0.02);
        finish(errors, "means and clustering mixing within tolerance".into())
    });
}

#[test]
fn c4_diameters() {
    criterion("c4", "diameters", || {
        let Some(g) = load_graph(ARXIV) else { return skip_missing(ARXIV) };
        let t0 = Instant::now();
        let hop_dir = anf_hop_plot(&g, true, 100, 32, 42).map_err(|e| e.to_string())?;
        let hop_und = anf_hop_plot(&g, false, 100, 32, 42).map_err(|e| e.to_string())?;
        let diam_dir = effective_diameter(&hop_dir, 0.9).map_err(|e| e.to_string())?;
        let diam_und = effective_diameter(&hop_und, 0.9).map_err(|e| e.to_string())?;
        let secs = t0.elapsed().as_secs_f64();

        let m = fixtures();
        let mut errors = Vec::new();
        // Tolerances are three reference standard errors of the mean.
        within(&mut errors, "eff_diam", diam_dir.mean, fx(&m, "arxiv", "eff_diam"), 0.36);
        within(&mut errors, "eff_diam_und", diam_und.mean, fx(&m, "arxiv", "eff_diam_und"), 0.06);
        // Budget 5min with 2x slack for unoptimized builds and CI noise.
        if secs > 600.0 {
            errors.push(format!("runtime {secs:.0}s exceeds 600s"));
        }
        finish(
            errors,
            format!(
                "directed {:.2} +/- {:.3}, undirected {:.2} +/- {:.3}, {secs:.0}s",
                diam_dir.mean, diam_dir.sem, diam_und.mean, diam_und.sem
            ),
        )
    });
}

#[test]
fn c5_pipeline_golden() {
    criterion("c5", "pipeline-golden", || {
        let mut errors = Vec::new();
        let cd05 = nemenyi_cd(6, 10, Alpha::A05).map_err(|e| e.to_string())?;
        let cd10 = nemenyi_cd(6, 10, Alpha::A10).map_err(|e| e.to_string())?;
        within(&mut errors, "cd at 0.05", cd05, 2.38, 0.01);
        within(&mut errors, "cd at 0.10", cd10, 2.17, 0.01);

        let friedman = friedman_from_mean_ranks(&[2.2, 3.1, 3.1, 3.6, 4.0, 5.0], 10)
            .map_err(|e| e.to_string())?;
        within(&mut errors, "friedman statistic", friedman.statistic, 12.91, 0.02);
        if friedman.p >= 0.05 {
            errors.push(format!("friedman p {:.4} does not reject at 0.05", friedman.p));
        }
        finish(
            errors,
            format!("cd {cd05:.4}/{cd10:.4}, friedman {:.3} p {:.4}", friedman.statistic, friedman.p),
        )
    });
}

#[test]
fn c6_fixture_compare() {
    criterion("c6", "fixture-compare", || {
        let m = fixtures();
        let bib6 = ["wos", "citeseer", "cora", "histcite", "dblp", "arxiv"];
        let matrix = subset_rows(&m, &bib6)
            .select(preset("paper10").unwrap())
            .map_err(|e| e.to_string())?;
        let residuals = studentized_residuals(&matrix).map_err(|e| e.to_string())?;
        let ranks = rank_datasets(&residuals).map_err(|e| e.to_string())?;

        let out05 = compare(&ranks, Alpha::A05).map_err(|e| e.to_string())?;
        let out10 = compare(&ranks, Alpha::A10).map_err(|e| e.to_string())?;
        let names = |pairs: &[(usize, usize)]| -> Vec<(String, String)> {
            pairs
                .iter()
                .map(|&(a, b)| (bib6[a].to_string(), bib6[b].to_string()))
                .collect()
        };
        let pairs05 = names(&significant_pairs(&out05.groups, bib6.len()));
        let pairs10 = names(&significant_pairs(&out10.groups, bib6.len()));

        let mut errors = Vec::new();
        if !out05.rejected {
            errors.push(format!("friedman p {:.4} does not reject at 0.05", out05.friedman.p));
        }
        let want = vec![("wos".to_string(), "dblp".to_string())];
        if pairs05 != want {
            errors.push(format!("pairs at 0.05: got {pairs05:?}, want {want:?}"));
        }
        if out10.groups != out05.groups {
            errors.push(format!(
                "group structure differs between alphas: {:?} vs {:?}",
                out05.groups, out10.groups
            ));
        }
        if pairs10 != want {
            errors.push(format!("pairs at 0.10: got {pairs10:?}, want {want:?}"));
        }
        let best = ranks
            .mean_ranks
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let worst = ranks
            .mean_ranks
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        if (bib6[best], bib6[worst]) != ("wos", "dblp") {
            errors.push(format!(
                "rank extremes: got ({}, {}), want (wos, dblp)",
                bib6[best], bib6[worst]
            ));
        }
        finish(
            errors,
            format!("wos-dblp the only pair at both alphas, mean ranks {:?}", ranks.mean_ranks),
        )
    });
}

fn random_raw(rng: &mut ChaCha8Rng, nodes: i64, max_edges: usize) -> RawEdgeList {
    let m = rng.random_range(1..=max_edges);
    RawEdgeList {
        edges: (0..m)
            .map(|_| (rng.random_range(0..nodes), rng.random_range(0..nodes)))
            .collect(),
    }
}

fn backbone_graph(seed: u64, n: usize, m: usize) -> DirectedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m + n);
    for v in 1..n {
        edges.push((rng.random_range(0..v) as i64, v as i64));
    }
    for _ in 0..m {
        edges.push((rng.random_range(0..n) as i64, rng.random_range(0..n) as i64));
    }
    DirectedGraph::preprocess(&RawEdgeList { edges }).expect("backbone graph is non-empty")
}

fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    let n = pairs.len() as f64;
    if pairs.len() < 2 {
        return None;
    }
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    if vx <= 0.0 || vy <= 0.0 {
        return None;
    }
    Some((cov / (vx.sqrt() * vy.sqrt())).clamp(-1.0, 1.0))
}

/// Deterministic re-run of the randomized property suites at the sizes the
/// release gate requires. The proptest versions in tests/properties.rs
/// explore fresh cases every run; this sweep pins seeds so the acceptance
/// line is reproducible.
#[test]
fn c7_properties() {
    criterion("c7", "properties", || {
        let mut errors = Vec::new();

        // Partition and ordering invariants on 1,000 random graphs each.
        let mut checked = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        while checked < 1000 {
            let Ok(g) = DirectedGraph::preprocess(&random_raw(&mut rng, 32, 64)) else {
                continue;
            };
            checked += 1;
            let wcc = weakly_connected_components(&g);
            let bt = field_bowtie(&g, &wcc);
            let mut seen = vec![false; g.n()];
            for part in [&bt.in_field, &bt.core, &bt.out_field] {
                for &v in part {
                    if seen[v as usize] {
                        errors.push(format!("graph {checked}: node {v} classified twice"));
                    }
                    seen[v as usize] = true;
                }
            }
            let classified = seen.iter().filter(|&&s| s).count();
            if classified != wcc.largest_size() {
                errors.push(format!(
                    "graph {checked}: classified {classified} of {}",
                    wcc.largest_size()
                ));
            }
            let share = bt.pct_in_field() + bt.pct_core() + bt.pct_out_field();
            if (share - wcc.pct_largest()).abs() >= 1e-9 {
                errors.push(format!("graph {checked}: shares sum {share}"));
            }

            let und = g.undirected_view();
            let scores = clustering_all(&und);
            for v in 0..g.n() {
                if scores.b[v] > scores.c[v] + 1e-12 || scores.c[v] > scores.d[v] + 1e-12 {
                    errors.push(format!("graph {checked}: node {v} violates B <= C <= D"));
                }
            }
            if errors.len() > 5 {
                return Err(errors.join("; "));
            }
        }

        // Brute-force oracle equivalence on 200 graphs of at most 40 nodes.
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let mut checked = 0;
        while checked < 200 {
            let Ok(g) = DirectedGraph::preprocess(&random_raw(&mut rng, 40, 120)) else {
                continue;
            };
            checked += 1;
            let und = g.undirected_view();
            let scores = clustering_all(&und);
            for v in 0..g.n() as u32 {
                let neigh = und.neighbours(v);
                let mut triangles = 0u64;
                for (i, &a) in neigh.iter().enumerate() {
                    for &b in &neigh[i + 1..] {
                        if und.neighbours(a).binary_search(&b).is_ok() {
                            triangles += 1;
                        }
                    }
                }
                if scores.t[v as usize] != triangles {
                    errors.push(format!("graph {checked}: node {v} triangle count"));
                }
            }
            let pairs: Vec<(f64, f64)> = g
                .edges()
                .map(|(u, v)| {
                    (DegreeMode::In.of(&g, u) as f64, DegreeMode::In.of(&g, v) as f64)
                })
                .collect();
            let got = topostat::degree::degree_mixing_directed(&g, DegreeMode::In, DegreeMode::In);
            let want = pearson(&pairs);
            let ok = match (got, want) {
                (None, None) => true,
                (Some(a), Some(b)) => (a - b).abs() < 1e-10,
                _ => false,
            };
            if !ok {
                errors.push(format!("graph {checked}: mixing {got:?} vs {want:?}"));
            }
            if errors.len() > 5 {
                return Err(errors.join("; "));
            }
        }

        // Sketch-based hop plots track exact enumeration within 5% mean
        // relative error up to 1,000 nodes.
        for (seed, n) in [(1u64, 60usize), (2, 150), (3, 400), (4, 1000)] {
            let g = backbone_graph(seed, n, 3 * n);
            for directed in [false, true] {
                let exact = exact_hop_plot(&g, directed, 10_000).map_err(|e| e.to_string())?;
                let anf =
                    anf_hop_plot(&g, directed, 24, 64, 1234 + seed).map_err(|e| e.to_string())?;
                let at = |curve: &[f64], h: usize| *curve.get(h).or(curve.last()).unwrap();
                let hops = exact.mean_curve.len().max(anf.mean_curve.len());
                let (mut err_sum, mut count) = (0.0, 0);
                for h in 1..hops {
                    let e = at(&exact.mean_curve, h);
                    if e > 0.0 {
                        err_sum += (at(&anf.mean_curve, h) - e).abs() / e;
                        count += 1;
                    }
                }
                let mean_err = err_sum / count as f64;
                if mean_err >= 0.05 {
                    errors.push(format!("hop plot n={n} directed={directed}: error {mean_err:.3}"));
                }
            }
        }

        // Residual invariance: bitwise under power-of-two scaling (with rank
        // equality), within rounding under shifts.
        let mut rng = ChaCha8Rng::seed_from_u64(300);
        for case in 0..100 {
            let len = rng.random_range(6..10);
            let column: Vec<f64> =
                (0..len).map(|_| rng.random_range(-1000..1000) as f64).collect();
            let scale = f64::from(2u32.pow(rng.random_range(1..8)));
            let shift = rng.random_range(-500..500) as f64;
            let mk = |values: Vec<f64>| {
                StatMatrix::new(
                    (0..len).map(|i| format!("d{i}")).collect(),
                    vec!["s".into()],
                    values,
                )
                .unwrap()
            };
            let r1 = studentized_residuals(&mk(column.clone())).unwrap();
            let r2 =
                studentized_residuals(&mk(column.iter().map(|v| scale * v).collect())).unwrap();
            if r1.residuals != r2.residuals {
                errors.push(format!("case {case}: scaling changed residual bits"));
            }
            if r1.residuals.iter().all(Option::is_some) {
                let k1 = rank_datasets(&r1).unwrap();
                let k2 = rank_datasets(&r2).unwrap();
                if k1.ranks != k2.ranks {
                    errors.push(format!("case {case}: scaling changed ranks"));
                }
            }
            let r3 =
                studentized_residuals(&mk(column.iter().map(|v| v + shift).collect())).unwrap();
            for (a, b) in r1.residuals.iter().zip(&r3.residuals) {
                let ok = match (a, b) {
                    (None, None) => true,
                    (Some(a), Some(b)) => (a - b).abs() <= 1e-9 * (1.0 + a.abs()),
                    _ => false,
                };
                if !ok {
                    errors.push(format!("case {case}: shift moved residual {a:?} -> {b:?}"));
                }
            }
        }

        // The tail estimator recovers a known exponent from 1e5 synthetic
        // draws of a rounded continuous power law.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<u64> = (0..100_000)
            .map(|_| {
                let u: f64 = rng.random();
                (10.0 * u.powf(-1.0 / 1.5)).round() as u64
            })
            .collect();
        let fit = fit_power_law(&samples, 10).map_err(|e| e.to_string())?;
        within(&mut errors, "recovered exponent", fit.gamma, 2.5, 0.05);
        if fit.poor_fit() {
            errors.push(format!("synthetic tail flagged poor (ks {:.3})", fit.ks_distance));
        }

        finish(
            errors,
            "1000 partition/order graphs, 200 oracle graphs, 8 hop-plot runs, \
             100 residual columns, 1e5-sample exponent recovery"
                .into(),
        )
    });
}

#[test]
fn c8_determinism() {
    criterion("c8", "determinism", || {
        let g = backbone_graph(7, 500, 1500);
        let opts = ComputeOptions {
            seed: 42,
            anf_realizations: 20,
            anf_trials: 16,
            kmin_policy: KminPolicy::Both,
        };
        let json = |label: &str| -> Result<Vec<u8>, String> {
            compute_profile(&g, label, &opts)
                .map(|a| a.profile.to_json())
                .map_err(|e| e.to_string())
        };
        let first = json("det")?;
        let second = json("det")?;
        let mut errors = Vec::new();
        if first != second {
            errors.push("repeated runs differ".into());
        }

        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .map_err(|e| e.to_string())?;
            let single = pool.install(|| json("det"))?;
            if single != first {
                errors.push("single-threaded pool run differs".into());
            }
        }

        // Cross-build check: each feature configuration drops its bytes in
        // the shared target tmpdir; whichever build runs second compares.
        let mode = if cfg!(feature = "parallel") { "parallel" } else { "sequential" };
        let other = if cfg!(feature = "parallel") { "sequential" } else { "parallel" };
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
        std::fs::write(dir.join(format!("acceptance_profile_{mode}.json")), &first)
            .map_err(|e| e.to_string())?;
        let mut cross = "other build not run yet";
        if let Ok(bytes) = std::fs::read(dir.join(format!("acceptance_profile_{other}.json"))) {
            if bytes == first {
                cross = "matches other build byte for byte";
            } else {
                errors.push(format!("{mode} and {other} builds disagree"));
            }
        }
        finish(errors, format!("repeat and single-thread runs identical; {cross}"))
    });
}
