//! Cross-dataset statistical comparison.
//!
//! Pipeline: a datasets x statistics value matrix is reduced to externally
//! studentized residuals (how far each dataset sits from the others on each
//! statistic), residual magnitudes are ranked per statistic, statistic pairs
//! can be screened for rank correlation (Spearman rho + Fisher z test), the
//! Friedman test checks whether mean ranks could be uniform, and the Nemenyi
//! critical difference splits datasets into indistinguishable groups.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};
use crate::profile::names;

/// Value matrix: `datasets.len()` rows by `stats.len()` columns, no holes.
#[derive(Clone, Debug, Serialize)]
pub struct StatMatrix {
    pub datasets: Vec<String>,
    pub stats: Vec<String>,
    values: Vec<f64>,
}

impl StatMatrix {
    pub fn new(datasets: Vec<String>, stats: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() != datasets.len() * stats.len() {
            return Err(Error::data(format!(
                "matrix needs {} x {} = {} values, got {}",
                datasets.len(),
                stats.len(),
                datasets.len() * stats.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!(
                "matrix cell ({}, {}) is not finite",
                datasets[bad / stats.len()],
                stats[bad % stats.len()]
            )));
        }
        Ok(StatMatrix { datasets, stats, values })
    }

    pub fn n_datasets(&self) -> usize {
        self.datasets.len()
    }

    pub fn n_stats(&self) -> usize {
        self.stats.len()
    }

    pub fn value(&self, dataset: usize, stat: usize) -> f64 {
        self.values[dataset * self.stats.len() + stat]
    }

    pub fn column(&self, stat: usize) -> Vec<f64> {
        (0..self.datasets.len()).map(|i| self.value(i, stat)).collect()
    }

    /// Restrict to the named statistics, in the given order.
    pub fn select(&self, names: &[&str]) -> Result<StatMatrix> {
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            let idx = self
                .stats
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| Error::data(format!("statistic {name:?} not in matrix")))?;
            indices.push(idx);
        }
        let mut values = Vec::with_capacity(self.datasets.len() * indices.len());
        for i in 0..self.datasets.len() {
            for &j in &indices {
                values.push(self.value(i, j));
            }
        }
        StatMatrix::new(
            self.datasets.clone(),
            names.iter().map(|s| s.to_string()).collect(),
            values,
        )
    }

    /// Read `dataset,stat1,stat2,...` CSV produced by [`StatMatrix::to_csv`].
    /// Lines starting with `#` are comments.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<StatMatrix> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::data(format!("matrix csv: {e}")))?
            .clone();
        let stats: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut datasets = Vec::new();
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::data(format!("matrix csv: {e}")))?;
            let mut fields = record.iter();
            datasets.push(
                fields
                    .next()
                    .ok_or_else(|| Error::data(format!("matrix csv row {} is empty", row + 2)))?
                    .to_string(),
            );
            for field in fields {
                values.push(field.parse::<f64>().map_err(|_| {
                    Error::data(format!("matrix csv row {}: bad number {field:?}", row + 2))
                })?);
            }
        }
        StatMatrix::new(datasets, stats, values)
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = vec!["dataset".to_string()];
        header.extend(self.stats.iter().cloned());
        wtr.write_record(&header).map_err(|e| Error::data(e.to_string()))?;
        for (i, name) in self.datasets.iter().enumerate() {
            let mut row = vec![name.clone()];
            row.extend((0..self.stats.len()).map(|j| format!("{}", self.value(i, j))));
            wtr.write_record(&row).map_err(|e| Error::data(e.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Externally studentized residuals with two-tailed t p-values. `None`
/// marks an undefined cell: the other datasets agree exactly but this one
/// deviates, so the deviation has no finite scale.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualMatrix {
    pub datasets: Vec<String>,
    pub stats: Vec<String>,
    pub residuals: Vec<Option<f64>>,
    pub p_values: Vec<Option<f64>>,
    pub loo_mean: Vec<f64>,
    pub loo_sd: Vec<f64>,
}

impl ResidualMatrix {
    pub fn residual(&self, dataset: usize, stat: usize) -> Option<f64> {
        self.residuals[dataset * self.stats.len() + stat]
    }

    pub fn p_value(&self, dataset: usize, stat: usize) -> Option<f64> {
        self.p_values[dataset * self.stats.len() + stat]
    }
}

/// Residual of each cell against the leave-one-out mean and deviation of
/// its column: `(x - mean_loo) / (sd_loo * sqrt(1 - 1/N))`, with the
/// leave-one-out variance using the N-2 denominator. p-values come from the
/// two-tailed t distribution with N-2 degrees of freedom.
pub fn studentized_residuals(x: &StatMatrix) -> Result<ResidualMatrix> {
    let n = x.n_datasets();
    if n < 4 {
        return Err(Error::data(format!(
            "residuals need at least 4 datasets (t distribution with N-2 df), got {n}"
        )));
    }
    let t_dist = StudentsT::new(0.0, 1.0, (n - 2) as f64)
        .expect("n >= 4 keeps the degrees of freedom positive");
    let correction = (1.0 - 1.0 / n as f64).sqrt();

    let cells = n * x.n_stats();
    let mut out = ResidualMatrix {
        datasets: x.datasets.clone(),
        stats: x.stats.clone(),
        residuals: vec![None; cells],
        p_values: vec![None; cells],
        loo_mean: vec![0.0; cells],
        loo_sd: vec![0.0; cells],
    };
    for j in 0..x.n_stats() {
        let column = x.column(j);
        for i in 0..n {
            let mut sum = 0.0;
            for (k, &v) in column.iter().enumerate() {
                if k != i {
                    sum += v;
                }
            }
            let mean = sum / (n - 1) as f64;
            let mut ss = 0.0;
            for (k, &v) in column.iter().enumerate() {
                if k != i {
                    ss += (v - mean) * (v - mean);
                }
            }
            let sd = (ss / (n - 2) as f64).sqrt();
            let cell = i * x.n_stats() + j;
            out.loo_mean[cell] = mean;
            out.loo_sd[cell] = sd;
            let deviation = column[i] - mean;
            if sd > 0.0 {
                let r = deviation / (sd * correction);
                out.residuals[cell] = Some(r);
                out.p_values[cell] = Some((2.0 * t_dist.sf(r.abs())).clamp(f64::MIN_POSITIVE, 1.0));
            } else if deviation == 0.0 {
                out.residuals[cell] = Some(0.0);
                out.p_values[cell] = Some(1.0);
            }
        }
    }
    Ok(out)
}

/// Per-statistic ranks of |residual| (rank 1 = smallest deviation), ties
/// averaged, plus per-dataset mean ranks.
#[derive(Clone, Debug, Serialize)]
pub struct RankMatrix {
    pub datasets: Vec<String>,
    pub stats: Vec<String>,
    pub ranks: Vec<f64>,
    pub mean_ranks: Vec<f64>,
}

impl RankMatrix {
    pub fn rank(&self, dataset: usize, stat: usize) -> f64 {
        self.ranks[dataset * self.stats.len() + stat]
    }

    pub fn stat_ranks(&self, stat: usize) -> Vec<f64> {
        (0..self.datasets.len()).map(|i| self.rank(i, stat)).collect()
    }
}

pub fn rank_datasets(res: &ResidualMatrix) -> Result<RankMatrix> {
    let n = res.datasets.len();
    let s = res.stats.len();
    let mut ranks = vec![0.0; n * s];
    for j in 0..s {
        let mut magnitudes = Vec::with_capacity(n);
        for i in 0..n {
            match res.residual(i, j) {
                Some(r) => magnitudes.push(r.abs()),
                None => {
                    return Err(Error::data(format!(
                        "statistic {:?} has an undefined residual for {:?}; drop it from the selection",
                        res.stats[j], res.datasets[i]
                    )))
                }
            }
        }
        for (i, rank) in average_ranks(&magnitudes).into_iter().enumerate() {
            ranks[i * s + j] = rank;
        }
    }
    let mean_ranks: Vec<f64> =
        (0..n).map(|i| (0..s).map(|j| ranks[i * s + j]).sum::<f64>() / s as f64).collect();
    Ok(RankMatrix {
        datasets: res.datasets.clone(),
        stats: res.stats.clone(),
        ranks,
        mean_ranks,
    })
}

/// Ascending ranks starting at 1; exact ties share the average of their
/// positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite magnitudes"));
    let mut ranks = vec![0.0; values.len()];
    let mut pos = 0;
    while pos < order.len() {
        let mut end = pos;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[pos]] {
            end += 1;
        }
        // Positions pos..=end (0-based) hold equal values; ranks are
        // 1-based, so the shared rank is the mean of pos+1 ..= end+1.
        let shared = (pos + end) as f64 / 2.0 + 1.0;
        for &idx in &order[pos..=end] {
            ranks[idx] = shared;
        }
        pos = end + 1;
    }
    ranks
}

/// Pearson correlation of two tie-averaged rank vectors.
pub fn spearman(ranks_a: &[f64], ranks_b: &[f64]) -> Option<f64> {
    assert_eq!(ranks_a.len(), ranks_b.len());
    let n = ranks_a.len() as f64;
    if ranks_a.len() < 2 {
        return None;
    }
    let ma = ranks_a.iter().sum::<f64>() / n;
    let mb = ranks_b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (&a, &b) in ranks_a.iter().zip(ranks_b) {
        cov += (a - ma) * (b - mb);
        va += (a - ma) * (a - ma);
        vb += (b - mb) * (b - mb);
    }
    if va <= 0.0 || vb <= 0.0 {
        return None;
    }
    Some((cov / (va.sqrt() * vb.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FisherTest {
    pub rho: f64,
    pub z: f64,
    pub p: f64,
    /// |rho| reached 1, so z diverges and p collapses to 0.
    pub saturated: bool,
}

/// Fisher z test of a rank correlation against independence:
/// `z = (sqrt(N-3)/2) * ln((1+rho)/(1-rho))`, two-tailed normal p.
pub fn fisher_independence_test(rho: f64, n: usize) -> Result<FisherTest> {
    if n < 4 {
        return Err(Error::data(format!("Fisher test needs N >= 4, got {n}")));
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::data(format!("correlation {rho} outside [-1, 1]")));
    }
    let scale = ((n - 3) as f64).sqrt();
    if rho.abs() == 1.0 {
        return Ok(FisherTest {
            rho,
            z: rho.signum() * f64::INFINITY,
            p: 0.0,
            saturated: true,
        });
    }
    let z = scale / 2.0 * ((1.0 + rho) / (1.0 - rho)).ln();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let p = (2.0 * normal.sf(z.abs())).min(1.0);
    Ok(FisherTest { rho, z, p, saturated: false })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FriedmanOutcome {
    pub statistic: f64,
    /// Upper-tail chi-squared probability with N-1 degrees of freedom.
    pub p: f64,
}

pub fn friedman_test(ranks: &RankMatrix) -> Result<FriedmanOutcome> {
    friedman_from_mean_ranks(&ranks.mean_ranks, ranks.stats.len())
}

/// `(12S / (N(N+1))) * (sum R_i^2 - N(N+1)^2/4)` over per-dataset mean
/// ranks, where S is the number of statistics the ranks were averaged over.
pub fn friedman_from_mean_ranks(mean_ranks: &[f64], s: usize) -> Result<FriedmanOutcome> {
    let n = mean_ranks.len();
    if n < 2 || s < 1 {
        return Err(Error::data(format!(
            "Friedman test needs at least 2 datasets and 1 statistic, got N={n}, S={s}"
        )));
    }
    let nf = n as f64;
    let sum_sq: f64 = mean_ranks.iter().map(|&r| r * r).sum();
    let statistic = 12.0 * s as f64 / (nf * (nf + 1.0)) * (sum_sq - nf * (nf + 1.0).powi(2) / 4.0);
    let chi = ChiSquared::new((n - 1) as f64).expect("n >= 2");
    // Tiny negative values can fall out of the subtraction when all mean
    // ranks are equal; the statistic is 0 there by construction.
    let statistic = statistic.max(0.0);
    let p = chi.sf(statistic).clamp(0.0, 1.0);
    Ok(FriedmanOutcome { statistic, p })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Alpha {
    #[serde(rename = "0.05")]
    A05,
    #[serde(rename = "0.10")]
    A10,
}

impl Alpha {
    pub fn value(self) -> f64 {
        match self {
            Alpha::A05 => 0.05,
            Alpha::A10 => 0.10,
        }
    }
}

impl std::str::FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0.05" => Ok(Alpha::A05),
            "0.10" | "0.1" => Ok(Alpha::A10),
            other => Err(Error::data(format!(
                "alpha must be 0.05 or 0.10, got {other:?}"
            ))),
        }
    }
}

/// Two-tailed Nemenyi critical values q_alpha for N = 2..=20 compared
/// groups: studentized range quantiles divided by sqrt(2), as tabulated in
/// Demsar (2006).
const Q_05: [f64; 19] = [
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164, 3.219, 3.268, 3.313, 3.354,
    3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
];
const Q_10: [f64; 19] = [
    1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920, 2.978, 3.030, 3.077, 3.120,
    3.159, 3.196, 3.230, 3.261, 3.291, 3.319,
];

/// Critical difference `q_alpha * sqrt(N(N+1) / (6S))` for N datasets
/// compared over S statistics.
pub fn nemenyi_cd(n: usize, s: usize, alpha: Alpha) -> Result<f64> {
    if !(2..=20).contains(&n) {
        return Err(Error::data(format!(
            "Nemenyi critical values tabulated for 2..=20 datasets, got {n}"
        )));
    }
    if s < 1 {
        return Err(Error::data("Nemenyi needs at least one statistic"));
    }
    let q = match alpha {
        Alpha::A05 => Q_05[n - 2],
        Alpha::A10 => Q_10[n - 2],
    };
    let nf = n as f64;
    Ok(q * (nf * (nf + 1.0) / (6.0 * s as f64)).sqrt())
}

/// Maximal runs of rank-sorted datasets whose mean ranks span less than cd.
/// Every dataset appears in at least one group; runs contained in a longer
/// run are dropped. Indices refer to the original dataset order.
pub fn cd_groups(mean_ranks: &[f64], cd: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..mean_ranks.len()).collect();
    order.sort_by(|&a, &b| {
        mean_ranks[a]
            .partial_cmp(&mean_ranks[b])
            .expect("finite mean ranks")
            .then(a.cmp(&b))
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut prev_end = 0usize;
    for start in 0..order.len() {
        let mut end = start;
        while end + 1 < order.len()
            && mean_ranks[order[end + 1]] - mean_ranks[order[start]] < cd
        {
            end += 1;
        }
        if start == 0 || end > prev_end {
            groups.push(order[start..=end].to_vec());
            prev_end = end;
        }
    }
    groups
}

/// Datasets that share no group differ by at least the critical difference.
pub fn significant_pairs(groups: &[Vec<usize>], n: usize) -> Vec<(usize, usize)> {
    let mut together = vec![false; n * n];
    for group in groups {
        for &a in group {
            for &b in group {
                together[a * n + b] = true;
            }
        }
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !together[a * n + b] {
                pairs.push((a, b));
            }
        }
    }
    pairs
}

/// Friedman + Nemenyi summary at one significance level.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonOutcome {
    pub friedman: FriedmanOutcome,
    pub alpha: Alpha,
    pub rejected: bool,
    pub cd: f64,
    pub groups: Vec<Vec<usize>>,
}

pub fn compare(ranks: &RankMatrix, alpha: Alpha) -> Result<ComparisonOutcome> {
    let friedman = friedman_test(ranks)?;
    let cd = nemenyi_cd(ranks.datasets.len(), ranks.stats.len(), alpha)?;
    let groups = cd_groups(&ranks.mean_ranks, cd);
    Ok(ComparisonOutcome {
        friedman,
        alpha,
        rejected: friedman.p < alpha.value(),
        cd,
        groups,
    })
}

/// The statistic selections shipped as presets. `paper10` is the canonical
/// ten-statistic bibliographic comparison; `validation10` the variant
/// calibrated for the bibliographic-vs-online validation; `all21` every
/// topology statistic.
pub fn preset(name: &str) -> Option<&'static [&'static str]> {
    match name {
        "paper10" => Some(&PRESET_PAPER10),
        "validation10" => Some(&PRESET_VALIDATION10),
        "all21" => Some(names::ALL21),
        _ => None,
    }
}

pub const PRESET_PAPER10: [&str; 10] = [
    names::PCT_IN_FIELD,
    names::PCT_CORE,
    names::MEAN_DEGREE,
    names::GAMMA_IN,
    names::GAMMA_OUT,
    names::R_IN_IN,
    names::R_OUT_OUT,
    names::MEAN_D,
    names::R_D,
    names::EFF_DIAM_UND,
];

pub const PRESET_VALIDATION10: [&str; 10] = [
    names::MEAN_B,
    names::MEAN_D,
    names::PCT_CORE,
    names::EFF_DIAM_UND,
    names::GAMMA_IN,
    names::GAMMA_OUT,
    names::MEAN_DEGREE,
    names::R_C,
    names::R_D,
    names::R_IN_IN,
];
