//! Command line for computing per-dataset graph statistic profiles,
//! comparing profiles across datasets, and emitting hop plots.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
//! malformed input, failed expectations), 3 resource error (estimated
//! memory over budget).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use topostat::compare::{preset, rank_datasets, studentized_residuals, Alpha, StatMatrix};
use topostat::degree::{DegreeMode, KminPolicy};
use topostat::distance::{
    anf_hop_plot, effective_diameter, exact_hop_plot, HopPlot, DEFAULT_EXACT_CAP,
};
use topostat::graph::manifest::load_dataset;
use topostat::graph::EdgeListFormat;
use topostat::profile::{compute_profile, ComputeOptions, ProfileArtifacts, StatProfile};
use topostat::report::{build_report, report_cd_svg, write_residual_csv};

#[derive(Parser)]
#[command(
    name = "topostat",
    version,
    about = "Directed graph topology statistics and cross-dataset comparison"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the full statistic profile of one edge-list dataset
    Stats(StatsArgs),
    /// Compare statistic profiles and draw a critical difference diagram
    Compare(CompareArgs),
    /// Emit a hop plot (ANF approximation or exact BFS) as CSV
    Hopplot(HopplotArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Edge-list file or dataset manifest
    dataset: PathBuf,
    /// Input format: "snap" (# comments) or "konect" (% comments);
    /// defaults to the manifest's format, or snap
    #[arg(long)]
    format: Option<String>,
    /// Master seed for the neighbourhood-function estimator
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Independent estimator realizations behind the diameter s.e.m.
    #[arg(long, default_value_t = 100)]
    anf_realizations: usize,
    /// Bitmask trials per realization
    #[arg(long, default_value_t = 32)]
    anf_trials: usize,
    /// Power-law tail cutoff: "both" picks the better of 10 and 25,
    /// an integer fixes the cutoff
    #[arg(long, default_value = "both")]
    kmin_policy: String,
    /// Directory for the profile and distribution artifacts
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Profile JSON files and/or value-matrix CSV files
    #[arg(required = true)]
    profiles: Vec<PathBuf>,
    /// Statistic selection: paper10, validation10 or all21
    #[arg(long, conflicts_with = "stats")]
    preset: Option<String>,
    /// Explicit comma-separated statistic selection
    #[arg(long, value_delimiter = ',')]
    stats: Vec<String>,
    /// Keep only these datasets (comma separated; default: all loaded)
    #[arg(long, value_delimiter = ',')]
    datasets: Vec<String>,
    /// Significance level: 0.05 or 0.10
    #[arg(long, default_value = "0.05")]
    alpha: String,
    /// Write the critical difference diagram here
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the residual/rank table here
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args)]
struct HopplotArgs {
    /// Edge-list file or dataset manifest
    dataset: PathBuf,
    /// Input format: "snap" or "konect"
    #[arg(long)]
    format: Option<String>,
    /// Directed reachability instead of the undirected view
    #[arg(long)]
    directed: bool,
    /// Exact BFS enumeration instead of the ANF estimate
    #[arg(long)]
    exact: bool,
    /// Node-count cap for --exact
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    anf_realizations: usize,
    #[arg(long, default_value_t = 32)]
    anf_trials: usize,
    /// Output CSV path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Lib(topostat::Error),
}

impl From<topostat::Error> for CliError {
    fn from(e: topostat::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(topostat::Error::Io(e))
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Stats(args) => run_stats(args),
        Command::Compare(args) => run_compare(args),
        Command::Hopplot(args) => run_hopplot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Lib(err)) => {
            eprintln!("error: {err}");
            match err {
                topostat::Error::Resource(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn parse_format(arg: &Option<String>) -> Result<Option<EdgeListFormat>, CliError> {
    arg.as_deref()
        .map(|s| EdgeListFormat::from_str(s).map_err(|e| usage(e.to_string())))
        .transpose()
}

fn run_stats(args: StatsArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let kmin_policy =
        KminPolicy::from_str(&args.kmin_policy).map_err(|e| usage(e.to_string()))?;
    let started = std::time::Instant::now();

    let loaded = load_dataset(&args.dataset, format)?;
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }

    let opts = ComputeOptions {
        seed: args.seed,
        anf_realizations: args.anf_realizations,
        anf_trials: args.anf_trials,
        kmin_policy,
    };
    let artifacts = compute_profile(&loaded.graph, &loaded.name, &opts)?;
    std::fs::create_dir_all(&args.out)?;
    let written = write_stats_artifacts(&args.out, &artifacts)?;

    let profile = &artifacts.profile;
    println!("dataset {}: n={} m={}", profile.dataset, profile.n, profile.m);
    for (name, value) in profile.stats.as_pairs() {
        match value {
            Some(v) => println!("{name} = {}", sig6(v)),
            None => println!("{name} = undefined"),
        }
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    eprintln!("computed in {:.2?}", started.elapsed());
    Ok(())
}

/// Write profile JSON/CSV plus the distribution artifacts, returning the
/// paths in a fixed order.
fn write_stats_artifacts(
    out: &Path,
    artifacts: &ProfileArtifacts,
) -> Result<Vec<PathBuf>, CliError> {
    let name = &artifacts.profile.dataset;
    let mut written = Vec::new();
    let mut target = |suffix: &str| {
        let path = out.join(format!("{name}.{suffix}"));
        written.push(path.clone());
        path
    };

    std::fs::write(target("profile.json"), artifacts.profile.to_json())?;

    let mut csv_bytes = Vec::new();
    artifacts.profile.to_csv(&mut csv_bytes)?;
    std::fs::write(target("profile.csv"), csv_bytes)?;

    let mut degree = String::from("mode,degree,count\n");
    for dist in &artifacts.degree_distributions {
        for &(k, count) in &dist.counts {
            degree.push_str(&format!("{},{k},{count}\n", mode_name(dist.mode)));
        }
    }
    std::fs::write(target("degree_dist.csv"), degree)?;

    let mut nc = String::from("mode,degree,mean_neighbour_degree\n");
    for profile in &artifacts.neighbour_connectivity {
        for &(k, knn) in &profile.points {
            nc.push_str(&format!("{},{k},{knn}\n", mode_name(profile.mode)));
        }
    }
    std::fs::write(target("neighbour_connectivity.csv"), nc)?;

    let mut cp = String::from("degree,mean_c,mean_b,mean_d\n");
    for &(k, c, b, d) in &artifacts.clustering_profile.points {
        cp.push_str(&format!("{k},{c},{b},{d}\n"));
    }
    std::fs::write(target("clustering_profile.csv"), cp)?;

    std::fs::write(target("hopplot.csv"), hop_plot_csv(&artifacts.hop_plot))?;
    std::fs::write(target("hopplot_und.csv"), hop_plot_csv(&artifacts.hop_plot_und))?;
    Ok(written)
}

fn mode_name(mode: DegreeMode) -> &'static str {
    match mode {
        DegreeMode::Total => "total",
        DegreeMode::In => "in",
        DegreeMode::Out => "out",
    }
}

fn hop_plot_csv(hp: &HopPlot) -> String {
    let mut out = String::from("hop,reached_fraction,sem\n");
    for (hop, (&mean, &sem)) in hp.mean_curve.iter().zip(&hp.sem_curve).enumerate() {
        out.push_str(&format!("{hop},{mean},{sem}\n"));
    }
    out
}

/// One loaded comparison row: dataset name plus its defined statistics.
struct Row {
    name: String,
    values: BTreeMap<String, f64>,
}

fn load_rows(paths: &[PathBuf]) -> Result<Vec<Row>, CliError> {
    let mut rows: Vec<Row> = Vec::new();
    for path in paths {
        let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        let mut new_rows = Vec::new();
        if is_csv {
            let file = std::fs::File::open(path)?;
            let matrix = StatMatrix::from_csv(file)?;
            for (i, name) in matrix.datasets.iter().enumerate() {
                let values = matrix
                    .stats
                    .iter()
                    .enumerate()
                    .map(|(j, stat)| (stat.clone(), matrix.value(i, j)))
                    .collect();
                new_rows.push(Row { name: name.clone(), values });
            }
        } else {
            let bytes = std::fs::read(path)?;
            let profile = StatProfile::from_json(&bytes)?;
            let values = profile
                .stats
                .as_pairs()
                .into_iter()
                .filter_map(|(stat, v)| v.map(|v| (stat.to_string(), v)))
                .collect();
            new_rows.push(Row { name: profile.dataset, values });
        }
        for row in new_rows {
            if rows.iter().any(|r| r.name == row.name) {
                return Err(topostat::Error::data(format!(
                    "dataset {:?} appears twice across the inputs",
                    row.name
                ))
                .into());
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

fn run_compare(args: CompareArgs) -> Result<(), CliError> {
    let alpha = Alpha::from_str(&args.alpha).map_err(|e| usage(e.to_string()))?;
    let selection: Vec<String> = if let Some(name) = &args.preset {
        preset(name)
            .ok_or_else(|| usage(format!("unknown preset {name:?} (paper10, validation10, all21)")))?
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else if !args.stats.is_empty() {
        args.stats.clone()
    } else {
        preset("paper10").expect("builtin preset").iter().map(|s| s.to_string()).collect()
    };

    let mut rows = load_rows(&args.profiles)?;
    if !args.datasets.is_empty() {
        for wanted in &args.datasets {
            if !rows.iter().any(|r| &r.name == wanted) {
                return Err(
                    topostat::Error::data(format!("dataset {wanted:?} not among the inputs")).into()
                );
            }
        }
        rows.retain(|r| args.datasets.contains(&r.name));
    }

    let mut values = Vec::with_capacity(rows.len() * selection.len());
    for row in &rows {
        for stat in &selection {
            match row.values.get(stat) {
                Some(&v) => values.push(v),
                None => {
                    return Err(topostat::Error::data(format!(
                        "statistic {stat:?} is missing or undefined for {:?}; drop it from the selection",
                        row.name
                    ))
                    .into())
                }
            }
        }
    }
    let matrix = StatMatrix::new(
        rows.iter().map(|r| r.name.clone()).collect(),
        selection,
        values,
    )?;

    let report = build_report(&matrix, alpha)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(&report.to_json())?;

    if let Some(path) = &args.svg {
        std::fs::write(path, report_cd_svg(&report))?;
    }
    if let Some(path) = &args.residuals {
        let residuals = studentized_residuals(&matrix)?;
        let ranks = rank_datasets(&residuals)?;
        let file = std::fs::File::create(path)?;
        write_residual_csv(&matrix, &residuals, &ranks, file)?;
    }
    Ok(())
}

fn run_hopplot(args: HopplotArgs) -> Result<(), CliError> {
    let format = parse_format(&args.format)?;
    let loaded = load_dataset(&args.dataset, format)?;
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }

    let hp = if args.exact {
        exact_hop_plot(&loaded.graph, args.directed, args.exact_cap)?
    } else {
        anf_hop_plot(
            &loaded.graph,
            args.directed,
            args.anf_realizations,
            args.anf_trials,
            args.seed,
        )?
    };
    let diam = effective_diameter(&hp, 0.9)?;
    eprintln!(
        "effective diameter (0.9): {} (s.e.m. {})",
        sig6(diam.mean),
        sig6(diam.sem)
    );

    let csv = hop_plot_csv(&hp);
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// Six significant digits for human-facing numbers.
fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}
