use std::fs;
use std::path::{Path, PathBuf};

use super::{plot, Cell, MetricsReport};
use crate::error::{Error, Result};

pub const ADR_FILE: &str = "adr.csv";
pub const NUS_FILE: &str = "nus.csv";
pub const AET_FILE: &str = "aet.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";
pub const SVG_FILE: &str = "metrics.svg";
pub const GNUPLOT_FILE: &str = "metrics.gp";

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub adr: PathBuf,
    pub nus: PathBuf,
    pub aet: PathBuf,
    pub manifest: Option<PathBuf>,
    pub svg: PathBuf,
    pub gnuplot: PathBuf,
}

/// A parsed metric CSV. Empty fields (absent intervals) read back as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl MetricTable {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

struct Metric {
    unit: &'static str,
    value: fn(&Cell) -> f64,
    ci: Option<fn(&Cell) -> Option<f64>>,
}

const ADR: Metric = Metric {
    unit: "bits_per_s",
    value: |c| c.adr,
    ci: Some(|c| c.adr_ci_pct),
};
const NUS: Metric = Metric {
    unit: "count",
    value: |c| c.nus,
    ci: Some(|c| c.nus_ci_pct),
};
const AET: Metric = Metric {
    unit: "ms",
    value: |c| c.aet_ms,
    ci: None,
};

fn render_csv(report: &MetricsReport, metric: &Metric) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![report.sweep_variable.column().to_string()];
    for a in &report.algorithms {
        header.push(format!("{a}_{}", metric.unit));
        if metric.ci.is_some() {
            header.push(format!("{a}_ci95_pct"));
        }
    }
    w.write_record(&header)?;
    for (p, x) in report.sweep_points.iter().enumerate() {
        let mut rec = vec![x.to_string()];
        for row in &report.cells {
            let cell = &row[p];
            rec.push((metric.value)(cell).to_string());
            if let Some(ci) = metric.ci {
                rec.push(ci(cell).map(|v| v.to_string()).unwrap_or_default());
            }
        }
        w.write_record(&rec)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// The three metric tables as `(file name, contents)`.
pub fn render_tables(report: &MetricsReport) -> Result<Vec<(&'static str, String)>> {
    Ok(vec![
        (ADR_FILE, render_csv(report, &ADR)?),
        (NUS_FILE, render_csv(report, &NUS)?),
        (AET_FILE, render_csv(report, &AET)?),
    ])
}

/// Writes metric CSVs, the plot files and, if given, the manifest.
///
/// Everything is rendered before the first file is touched.
pub fn emit_results(
    report: &MetricsReport,
    out_dir: &Path,
    manifest: Option<&str>,
) -> Result<OutputFiles> {
    let mut files = render_tables(report)?;
    files.push((SVG_FILE, plot::render_svg(report)));
    files.push((GNUPLOT_FILE, plot::gnuplot_script(report)));
    if let Some(m) = manifest {
        files.push((MANIFEST_FILE, m.to_string()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    for (name, body) in &files {
        let path = out_dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(OutputFiles {
        adr: out_dir.join(ADR_FILE),
        nus: out_dir.join(NUS_FILE),
        aet: out_dir.join(AET_FILE),
        manifest: manifest.map(|_| out_dir.join(MANIFEST_FILE)),
        svg: out_dir.join(SVG_FILE),
        gnuplot: out_dir.join(GNUPLOT_FILE),
    })
}

pub fn read_metric_csv(path: &Path) -> Result<MetricTable> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| {
                if f.is_empty() {
                    return Ok(None);
                }
                f.parse::<f64>().map(Some).map_err(|e| Error::Parse {
                    kind: "csv",
                    line: i + 2,
                    message: format!("`{f}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(MetricTable { header, rows })
}
