//! Comparison report assembly and rendering: a JSON report bundling every
//! pipeline stage, a long-format residual/rank CSV, and the critical
//! difference diagram as SVG.

use serde::Serialize;

use crate::compare::{
    cd_groups, compare, fisher_independence_test, rank_datasets, significant_pairs, spearman,
    studentized_residuals, Alpha, FisherTest, FriedmanOutcome, RankMatrix, ResidualMatrix,
    StatMatrix,
};
use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Full outcome of one comparison run. Matrix-shaped fields are nested
/// `[dataset][statistic]` rows except `independence`, which is
/// `[statistic][statistic]` with `None` on the diagonal and wherever a rank
/// column has zero variance.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub alpha: Alpha,
    pub datasets: Vec<String>,
    pub stats: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub residuals: Vec<Vec<Option<f64>>>,
    pub residual_p: Vec<Vec<Option<f64>>>,
    pub ranks: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
    pub independence: Vec<Vec<Option<FisherTest>>>,
    pub friedman: FriedmanOutcome,
    pub friedman_rejected: bool,
    pub cd: f64,
    /// Rank-sorted maximal groups of indistinguishable datasets, as indices
    /// into `datasets`.
    pub groups: Vec<Vec<usize>>,
    /// Dataset index pairs separated by at least the critical difference.
    pub significant_pairs: Vec<(usize, usize)>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serializes");
        bytes.push(b'\n');
        bytes
    }
}

/// Run the whole pipeline on a value matrix: residuals, ranks, pairwise
/// independence screen over statistics, Friedman test and Nemenyi groups.
pub fn build_report(matrix: &StatMatrix, alpha: Alpha) -> Result<ComparisonReport> {
    let residuals = studentized_residuals(matrix)?;
    let ranks = rank_datasets(&residuals)?;
    let outcome = compare(&ranks, alpha)?;

    let n = matrix.n_datasets();
    let s = matrix.n_stats();
    let mut independence = vec![vec![None; s]; s];
    for j in 0..s {
        for k in 0..s {
            if j == k {
                continue;
            }
            if let Some(rho) = spearman(&ranks.stat_ranks(j), &ranks.stat_ranks(k)) {
                independence[j][k] = Some(fisher_independence_test(rho, n)?);
            }
        }
    }

    Ok(ComparisonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        alpha,
        datasets: matrix.datasets.clone(),
        stats: matrix.stats.clone(),
        values: (0..n).map(|i| (0..s).map(|j| matrix.value(i, j)).collect()).collect(),
        residuals: (0..n).map(|i| (0..s).map(|j| residuals.residual(i, j)).collect()).collect(),
        residual_p: (0..n).map(|i| (0..s).map(|j| residuals.p_value(i, j)).collect()).collect(),
        ranks: (0..n).map(|i| (0..s).map(|j| ranks.rank(i, j)).collect()).collect(),
        mean_ranks: ranks.mean_ranks.clone(),
        independence,
        friedman: outcome.friedman,
        friedman_rejected: outcome.rejected,
        cd: outcome.cd,
        significant_pairs: significant_pairs(&outcome.groups, n),
        groups: outcome.groups,
    })
}

/// One `dataset,statistic,value,residual,p_value,rank` row per matrix cell,
/// dataset-major; undefined residual cells leave their columns empty.
pub fn write_residual_csv<W: std::io::Write>(
    matrix: &StatMatrix,
    residuals: &ResidualMatrix,
    ranks: &RankMatrix,
    writer: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["dataset", "statistic", "value", "residual", "p_value", "rank"])
        .map_err(|e| Error::data(e.to_string()))?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    for i in 0..matrix.n_datasets() {
        for j in 0..matrix.n_stats() {
            wtr.write_record([
                matrix.datasets[i].as_str(),
                matrix.stats[j].as_str(),
                &format!("{}", matrix.value(i, j)),
                &opt(residuals.residual(i, j)),
                &opt(residuals.p_value(i, j)),
                &format!("{}", ranks.rank(i, j)),
            ])
            .map_err(|e| Error::data(e.to_string()))?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Geometry of a critical difference diagram, kept separate from the SVG
/// text so tests can check positions without parsing XML. The rank axis
/// runs left to right from best (lowest) to worst mean rank; datasets hang
/// off the axis towards the left or right margin; bars below the axis join
/// groups the Nemenyi test cannot separate.
#[derive(Clone, Debug)]
pub struct CdDiagramLayout {
    pub width: f64,
    pub height: f64,
    pub axis_y: f64,
    pub axis_x0: f64,
    pub axis_x1: f64,
    pub rank_lo: f64,
    pub rank_hi: f64,
    pub cd: f64,
    pub alpha: Alpha,
    pub labels: Vec<DatasetLabel>,
    pub group_bars: Vec<GroupBar>,
}

#[derive(Clone, Debug)]
pub struct DatasetLabel {
    pub name: String,
    pub mean_rank: f64,
    /// x of the connector where it meets the axis.
    pub axis_x: f64,
    /// y of the horizontal label line.
    pub line_y: f64,
    pub left_side: bool,
}

#[derive(Clone, Debug)]
pub struct GroupBar {
    pub x0: f64,
    pub x1: f64,
    pub y: f64,
}

const MARGIN: f64 = 110.0;
const WIDTH: f64 = 720.0;
const AXIS_Y: f64 = 60.0;
const BAR_GAP: f64 = 9.0;
const LABEL_GAP: f64 = 22.0;

impl CdDiagramLayout {
    pub fn x_of_rank(&self, rank: f64) -> f64 {
        let span = (self.rank_hi - self.rank_lo).max(1e-9);
        self.axis_x0 + (rank - self.rank_lo) / span * (self.axis_x1 - self.axis_x0)
    }
}

pub fn cd_diagram_layout(
    datasets: &[String],
    mean_ranks: &[f64],
    cd: f64,
    alpha: Alpha,
) -> CdDiagramLayout {
    assert_eq!(datasets.len(), mean_ranks.len());
    let n = datasets.len();
    let rank_lo = 1.0;
    let rank_hi = n as f64;
    let mut layout = CdDiagramLayout {
        width: WIDTH,
        height: 0.0,
        axis_y: AXIS_Y,
        axis_x0: MARGIN,
        axis_x1: WIDTH - MARGIN,
        rank_lo,
        rank_hi,
        cd,
        alpha,
        labels: Vec::new(),
        group_bars: Vec::new(),
    };

    let groups = cd_groups(mean_ranks, cd);
    let mut bar_row_ends: Vec<f64> = Vec::new();
    for group in groups.iter().filter(|g| g.len() > 1) {
        let lo = group.iter().map(|&i| mean_ranks[i]).fold(f64::MAX, f64::min);
        let hi = group.iter().map(|&i| mean_ranks[i]).fold(f64::MIN, f64::max);
        let x0 = layout.x_of_rank(lo) - 3.0;
        let x1 = layout.x_of_rank(hi) + 3.0;
        let row = bar_row_ends.iter().position(|&end| x0 > end).unwrap_or_else(|| {
            bar_row_ends.push(f64::MIN);
            bar_row_ends.len() - 1
        });
        bar_row_ends[row] = x1;
        layout.group_bars.push(GroupBar { x0, x1, y: AXIS_Y + BAR_GAP * (row + 1) as f64 });
    }
    let bars_bottom = AXIS_Y + BAR_GAP * (bar_row_ends.len() + 1) as f64;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        mean_ranks[a].partial_cmp(&mean_ranks[b]).expect("finite ranks").then(a.cmp(&b))
    });
    let left_count = n.div_ceil(2);
    for (pos, &idx) in order.iter().enumerate() {
        let left_side = pos < left_count;
        // Left labels stack top-down in rank order, right labels bottom-up,
        // so the outermost lines belong to the outermost ranks.
        let row = if left_side { pos } else { n - 1 - pos };
        layout.labels.push(DatasetLabel {
            name: datasets[idx].clone(),
            mean_rank: mean_ranks[idx],
            axis_x: layout.x_of_rank(mean_ranks[idx]),
            line_y: bars_bottom + LABEL_GAP * (row + 1) as f64,
            left_side,
        });
    }
    let labels_bottom = layout
        .labels
        .iter()
        .map(|l| l.line_y)
        .fold(bars_bottom, f64::max);
    layout.height = labels_bottom + 30.0;
    layout
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Render the layout as standalone SVG. Output is deterministic: fixed
/// float formatting, element order fixed by the layout.
pub fn render_cd_svg(layout: &CdDiagramLayout) -> String {
    let mut svg = String::new();
    let fmt = |v: f64| format!("{v:.2}");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = fmt(layout.width),
        h = fmt(layout.height)
    ));
    svg.push_str(
        "<style>text{font-family:sans-serif;font-size:12px;}.tick{font-size:11px;}</style>\n",
    );

    // Rank axis with one tick per integer rank.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(layout.axis_x0),
        fmt(layout.axis_y),
        fmt(layout.axis_x1),
        fmt(layout.axis_y)
    ));
    let mut rank = layout.rank_lo;
    while rank <= layout.rank_hi + 1e-9 {
        let x = layout.x_of_rank(rank);
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"black\"/>\n",
            x = fmt(x),
            y0 = fmt(layout.axis_y - 5.0),
            y1 = fmt(layout.axis_y)
        ));
        svg.push_str(&format!(
            "<text class=\"tick\" x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(layout.axis_y - 10.0),
            rank as i64
        ));
        rank += 1.0;
    }

    // Critical difference bracket above the axis, anchored at rank 1.
    let cd_x0 = layout.x_of_rank(layout.rank_lo);
    let cd_x1 = layout.x_of_rank(layout.rank_lo + layout.cd);
    let cd_y = layout.axis_y - 32.0;
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{cd_y}\" x2=\"{}\" y2=\"{cd_y}\" stroke=\"black\"/>\n",
        fmt(cd_x0),
        fmt(cd_x1),
        cd_y = fmt(cd_y)
    ));
    for x in [cd_x0, cd_x1] {
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(cd_y - 4.0),
            fmt(cd_y + 4.0),
            x = fmt(x)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">CD = {:.2} (alpha {})</text>\n",
        fmt((cd_x0 + cd_x1) / 2.0),
        fmt(cd_y - 8.0),
        layout.cd,
        match layout.alpha {
            Alpha::A05 => "0.05",
            Alpha::A10 => "0.10",
        }
    ));

    // Group bars join datasets the test cannot separate.
    for bar in &layout.group_bars {
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"4\"/>\n",
            fmt(bar.x0),
            fmt(bar.x1),
            y = fmt(bar.y)
        ));
    }

    // Dataset connectors and labels.
    for label in &layout.labels {
        let (end_x, anchor, text_x) = if label.left_side {
            (layout.axis_x0 - 14.0, "end", layout.axis_x0 - 18.0)
        } else {
            (layout.axis_x1 + 14.0, "start", layout.axis_x1 + 18.0)
        };
        svg.push_str(&format!(
            "<polyline points=\"{ax},{ay} {ax},{ly} {ex},{ly}\" fill=\"none\" stroke=\"black\"/>\n",
            ax = fmt(label.axis_x),
            ay = fmt(layout.axis_y),
            ly = fmt(label.line_y),
            ex = fmt(end_x)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\">{} ({:.2})</text>\n",
            fmt(text_x),
            fmt(label.line_y - 3.0),
            xml_escape(&label.name),
            label.mean_rank
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Convenience wrapper producing the SVG straight from a report.
pub fn report_cd_svg(report: &ComparisonReport) -> String {
    let layout =
        cd_diagram_layout(&report.datasets, &report.mean_ranks, report.cd, report.alpha);
    render_cd_svg(&layout)
}
