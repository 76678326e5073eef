//! Per-dataset statistic profiles: computing the full set of topology
//! statistics for one graph and persisting them as JSON or long-format CSV.
//! Profiles are the currency of the comparison pipeline, so values computed
//! here can be compared against values transcribed from published tables
//! without recomputation.

use serde::{Deserialize, Serialize};

use crate::bowtie::{field_bowtie, weakly_connected_components};
use crate::clustering::{clustering_all, clustering_mixing, clustering_profile, ClusteringProfile, ClusteringVariant};
use crate::compare::StatMatrix;
use crate::degree::{
    degree_distribution, fit_power_law_auto, mixing_coefficients, neighbour_connectivity,
    DegreeDistribution, DegreeMode, KminPolicy, NeighbourConnectivityProfile, PowerLawFit,
};
use crate::distance::{anf_hop_plot, effective_diameter, HopPlot};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, PreprocessReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Canonical statistic names shared by profiles, presets and CSV columns.
pub mod names {
    pub const PCT_WCC: &str = "pct_wcc";
    pub const PCT_IN_FIELD: &str = "pct_in_field";
    pub const PCT_CORE: &str = "pct_core";
    pub const PCT_OUT_FIELD: &str = "pct_out_field";
    pub const MEAN_DEGREE: &str = "mean_degree";
    pub const GAMMA: &str = "gamma";
    pub const GAMMA_IN: &str = "gamma_in";
    pub const GAMMA_OUT: &str = "gamma_out";
    pub const R: &str = "r";
    pub const R_IN_IN: &str = "r_in_in";
    pub const R_IN_OUT: &str = "r_in_out";
    pub const R_OUT_IN: &str = "r_out_in";
    pub const R_OUT_OUT: &str = "r_out_out";
    pub const MEAN_C: &str = "mean_c";
    pub const MEAN_B: &str = "mean_b";
    pub const MEAN_D: &str = "mean_d";
    pub const R_C: &str = "r_c";
    pub const R_B: &str = "r_b";
    pub const R_D: &str = "r_d";
    pub const EFF_DIAM: &str = "eff_diam";
    pub const EFF_DIAM_UND: &str = "eff_diam_und";
    pub const EFF_DIAM_SEM: &str = "eff_diam_sem";
    pub const EFF_DIAM_UND_SEM: &str = "eff_diam_und_sem";

    /// Every topology statistic, in canonical order.
    pub const ALL21: &[&str] = &[
        PCT_WCC,
        PCT_IN_FIELD,
        PCT_CORE,
        PCT_OUT_FIELD,
        MEAN_DEGREE,
        GAMMA,
        GAMMA_IN,
        GAMMA_OUT,
        R,
        R_IN_IN,
        R_IN_OUT,
        R_OUT_IN,
        R_OUT_OUT,
        MEAN_C,
        MEAN_B,
        MEAN_D,
        R_C,
        R_B,
        R_D,
        EFF_DIAM,
        EFF_DIAM_UND,
    ];
}

/// The statistic values of one profile. `None` means the statistic is
/// undefined for the dataset (degenerate power-law tail, zero-variance
/// mixing) and serializes as JSON null / an empty CSV cell.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StatValues {
    pub pct_wcc: Option<f64>,
    pub pct_in_field: Option<f64>,
    pub pct_core: Option<f64>,
    pub pct_out_field: Option<f64>,
    pub mean_degree: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_in: Option<f64>,
    pub gamma_out: Option<f64>,
    pub r: Option<f64>,
    pub r_in_in: Option<f64>,
    pub r_in_out: Option<f64>,
    pub r_out_in: Option<f64>,
    pub r_out_out: Option<f64>,
    pub mean_c: Option<f64>,
    pub mean_b: Option<f64>,
    pub mean_d: Option<f64>,
    pub r_c: Option<f64>,
    pub r_b: Option<f64>,
    pub r_d: Option<f64>,
    pub eff_diam: Option<f64>,
    pub eff_diam_und: Option<f64>,
    pub eff_diam_sem: Option<f64>,
    pub eff_diam_und_sem: Option<f64>,
}

impl StatValues {
    pub fn get(&self, name: &str) -> Option<Option<f64>> {
        self.as_pairs().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }

    /// All statistics in canonical order, the two s.e.m. companions last.
    pub fn as_pairs(&self) -> Vec<(&'static str, Option<f64>)> {
        vec![
            (names::PCT_WCC, self.pct_wcc),
            (names::PCT_IN_FIELD, self.pct_in_field),
            (names::PCT_CORE, self.pct_core),
            (names::PCT_OUT_FIELD, self.pct_out_field),
            (names::MEAN_DEGREE, self.mean_degree),
            (names::GAMMA, self.gamma),
            (names::GAMMA_IN, self.gamma_in),
            (names::GAMMA_OUT, self.gamma_out),
            (names::R, self.r),
            (names::R_IN_IN, self.r_in_in),
            (names::R_IN_OUT, self.r_in_out),
            (names::R_OUT_IN, self.r_out_in),
            (names::R_OUT_OUT, self.r_out_out),
            (names::MEAN_C, self.mean_c),
            (names::MEAN_B, self.mean_b),
            (names::MEAN_D, self.mean_d),
            (names::R_C, self.r_c),
            (names::R_B, self.r_b),
            (names::R_D, self.r_d),
            (names::EFF_DIAM, self.eff_diam),
            (names::EFF_DIAM_UND, self.eff_diam_und),
            (names::EFF_DIAM_SEM, self.eff_diam_sem),
            (names::EFF_DIAM_UND_SEM, self.eff_diam_und_sem),
        ]
    }
}

/// Power-law fit details kept alongside the headline gamma values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitBlock {
    pub kmin: u64,
    pub gamma: Option<f64>,
    pub tail_n: usize,
    pub ks_distance: Option<f64>,
    pub degenerate_tail: bool,
    pub poor_fit: bool,
}

impl FitBlock {
    fn from_fit(fit: &PowerLawFit) -> FitBlock {
        FitBlock {
            kmin: fit.kmin,
            gamma: fit.gamma.is_finite().then_some(fit.gamma),
            tail_n: fit.tail_n,
            ks_distance: fit.ks_distance.is_finite().then_some(fit.ks_distance),
            degenerate_tail: fit.degenerate_tail,
            poor_fit: fit.poor_fit(),
        }
    }
}

/// `None` for a degree direction whose tail is empty at every candidate
/// cutoff (tiny graphs), leaving the corresponding gamma undefined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitDetails {
    pub gamma: Option<FitBlock>,
    pub gamma_in: Option<FitBlock>,
    pub gamma_out: Option<FitBlock>,
}

/// Everything needed to reproduce the profile byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: u64,
    pub anf_realizations: usize,
    pub anf_trials: usize,
    pub kmin_policy: String,
    pub preprocessing: PreprocessReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatProfile {
    pub schema_version: u32,
    pub dataset: String,
    pub n: u64,
    pub m: u64,
    pub stats: StatValues,
    pub fits: FitDetails,
    pub provenance: Provenance,
}

impl StatProfile {
    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("profile serializes");
        bytes.push(b'\n');
        bytes
    }

    pub fn from_json(bytes: &[u8]) -> Result<StatProfile> {
        let profile: StatProfile = serde_json::from_slice(bytes)
            .map_err(|e| Error::data(format!("profile JSON: {e}")))?;
        if profile.schema_version != SCHEMA_VERSION {
            return Err(Error::data(format!(
                "profile schema version {} not supported (expected {})",
                profile.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(profile)
    }

    /// Long-format CSV mirror of the JSON stats block: one `statistic,value`
    /// row per field, empty value for undefined statistics.
    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["statistic", "value"]).map_err(|e| Error::data(e.to_string()))?;
        wtr.write_record(["n", &self.n.to_string()]).map_err(|e| Error::data(e.to_string()))?;
        wtr.write_record(["m", &self.m.to_string()]).map_err(|e| Error::data(e.to_string()))?;
        for (name, value) in self.stats.as_pairs() {
            let cell = value.map(|v| format!("{v}")).unwrap_or_default();
            wtr.write_record([name, &cell]).map_err(|e| Error::data(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub seed: u64,
    pub anf_realizations: usize,
    pub anf_trials: usize,
    pub kmin_policy: KminPolicy,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            seed: 42,
            anf_realizations: 100,
            anf_trials: 32,
            kmin_policy: KminPolicy::Both,
        }
    }
}

/// The profile plus the per-distribution artifacts the CLI writes as CSVs.
#[derive(Clone, Debug)]
pub struct ProfileArtifacts {
    pub profile: StatProfile,
    pub degree_distributions: Vec<DegreeDistribution>,
    pub neighbour_connectivity: Vec<NeighbourConnectivityProfile>,
    pub clustering_profile: ClusteringProfile,
    pub hop_plot: HopPlot,
    pub hop_plot_und: HopPlot,
}

/// Compute all statistics for one preprocessed graph. The undirected view,
/// component structure, degree fits, mixing coefficients, clustering scores
/// and both hop plots are derived in one pass so the CLI can emit every
/// artifact without touching the graph twice.
pub fn compute_profile(
    graph: &DirectedGraph,
    dataset: &str,
    opts: &ComputeOptions,
) -> Result<ProfileArtifacts> {
    let und = graph.undirected_view();

    let wcc = weakly_connected_components(graph);
    let bowtie = field_bowtie(graph, &wcc);

    let modes = [DegreeMode::Total, DegreeMode::In, DegreeMode::Out];
    let distributions: Vec<DegreeDistribution> =
        modes.iter().map(|&mode| degree_distribution(graph, mode)).collect();
    // An Err here means the tail is empty at every cutoff; the gamma is
    // then undefined rather than a dataset error.
    let fit_total = fit_power_law_auto(&DegreeMode::Total.degrees(graph), opts.kmin_policy).ok();
    let fit_in = fit_power_law_auto(&DegreeMode::In.degrees(graph), opts.kmin_policy).ok();
    let fit_out = fit_power_law_auto(&DegreeMode::Out.degrees(graph), opts.kmin_policy).ok();

    let mixing = mixing_coefficients(graph, &und);

    let scores = clustering_all(&und);
    let r_c = clustering_mixing(graph, &scores, ClusteringVariant::C);
    let r_b = clustering_mixing(graph, &scores, ClusteringVariant::B);
    let r_d = clustering_mixing(graph, &scores, ClusteringVariant::D);

    let nc: Vec<NeighbourConnectivityProfile> =
        modes.iter().map(|&mode| neighbour_connectivity(graph, &und, mode)).collect();
    let cp = clustering_profile(&und, &scores);

    let hop_dir = anf_hop_plot(graph, true, opts.anf_realizations, opts.anf_trials, opts.seed)?;
    let hop_und = anf_hop_plot(graph, false, opts.anf_realizations, opts.anf_trials, opts.seed)?;
    let diam_dir = effective_diameter(&hop_dir, 0.9)?;
    let diam_und = effective_diameter(&hop_und, 0.9)?;

    let finite = |v: f64| v.is_finite().then_some(v);
    let stats = StatValues {
        pct_wcc: Some(wcc.pct_largest()),
        pct_in_field: Some(bowtie.pct_in_field()),
        pct_core: Some(bowtie.pct_core()),
        pct_out_field: Some(bowtie.pct_out_field()),
        mean_degree: Some(2.0 * graph.m() as f64 / graph.n() as f64),
        gamma: fit_total.as_ref().and_then(|f| finite(f.gamma)),
        gamma_in: fit_in.as_ref().and_then(|f| finite(f.gamma)),
        gamma_out: fit_out.as_ref().and_then(|f| finite(f.gamma)),
        r: mixing.r,
        r_in_in: mixing.r_in_in,
        r_in_out: mixing.r_in_out,
        r_out_in: mixing.r_out_in,
        r_out_out: mixing.r_out_out,
        mean_c: Some(scores.mean(ClusteringVariant::C)),
        mean_b: Some(scores.mean(ClusteringVariant::B)),
        mean_d: Some(scores.mean(ClusteringVariant::D)),
        r_c,
        r_b,
        r_d,
        eff_diam: Some(diam_dir.mean),
        eff_diam_und: Some(diam_und.mean),
        eff_diam_sem: finite(diam_dir.sem),
        eff_diam_und_sem: finite(diam_und.sem),
    };

    let profile = StatProfile {
        schema_version: SCHEMA_VERSION,
        dataset: dataset.to_string(),
        n: graph.n() as u64,
        m: graph.m() as u64,
        stats,
        fits: FitDetails {
            gamma: fit_total.as_ref().map(FitBlock::from_fit),
            gamma_in: fit_in.as_ref().map(FitBlock::from_fit),
            gamma_out: fit_out.as_ref().map(FitBlock::from_fit),
        },
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: opts.seed,
            anf_realizations: opts.anf_realizations,
            anf_trials: opts.anf_trials,
            kmin_policy: opts.kmin_policy.to_string(),
            preprocessing: graph.report().clone(),
        },
    };

    Ok(ProfileArtifacts {
        profile,
        degree_distributions: distributions,
        neighbour_connectivity: nc,
        clustering_profile: cp,
        hop_plot: hop_dir,
        hop_plot_und: hop_und,
    })
}

/// Assemble a comparison matrix from profiles, keeping the named statistics.
/// A statistic undefined in any profile is an error naming the offender, so
/// the caller can drop it from the selection.
pub fn matrix_from_profiles(profiles: &[StatProfile], stat_names: &[&str]) -> Result<StatMatrix> {
    let mut values = Vec::with_capacity(profiles.len() * stat_names.len());
    for profile in profiles {
        for name in stat_names {
            let cell = profile
                .stats
                .get(name)
                .ok_or_else(|| Error::data(format!("unknown statistic {name:?}")))?;
            match cell {
                Some(v) => values.push(v),
                None => {
                    return Err(Error::data(format!(
                        "statistic {name:?} is undefined for {:?}; drop it from the selection",
                        profile.dataset
                    )))
                }
            }
        }
    }
    StatMatrix::new(
        profiles.iter().map(|p| p.dataset.clone()).collect(),
        stat_names.iter().map(|s| s.to_string()).collect(),
        values,
    )
}
