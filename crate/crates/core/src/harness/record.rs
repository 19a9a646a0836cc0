//! One row per search run, written to and read back from CSV.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::config::Algorithm;
use crate::metrics::MetricsReport;

/// Quantities measured on a successful run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunOutcome {
    pub ei_micro: f64,
    pub ei_macro: f64,
    pub causal_emergence: f64,
    pub macro_node_count: usize,
    pub largest_group_size: usize,
    pub accuracy: f64,
    pub micro: MetricsReport,
    pub macro_: MetricsReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub alpha: f64,
    pub sample: usize,
    /// Seed the network was generated from.
    pub seed: u64,
    pub algorithm: Algorithm,
    /// User plus system CPU time spent inside the search.
    pub runtime_seconds: f64,
    pub wall_seconds: f64,
    pub outcome: std::result::Result<RunOutcome, String>,
}

const METRIC_COLUMNS: [&str; 16] = [
    "nodes",
    "ei",
    "determinism",
    "degeneracy",
    "indeterminism",
    "entropy_rate",
    "global_efficiency",
    "mean_betweenness",
    "mean_eigenvector_centrality",
    "macro_node_betweenness",
    "macro_node_eigenvector_centrality",
    "communicability_entropy",
    "mean_degree",
    "degree_variance",
    "assortativity",
    "kernel_dimension",
];

const LEAD_COLUMNS: [&str; 12] = [
    "alpha",
    "sample",
    "seed",
    "algorithm",
    "runtime_seconds",
    "wall_seconds",
    "ei_micro",
    "ei_macro",
    "causal_emergence",
    "macro_node_count",
    "largest_group_size",
    "accuracy",
];

/// Columns that depend on the machine rather than on the inputs.
pub const TIMING_COLUMNS: [&str; 2] = ["runtime_seconds", "wall_seconds"];

/// Column order of `runs.csv`.
pub fn run_columns() -> Vec<String> {
    let mut cols: Vec<String> = LEAD_COLUMNS.iter().map(|s| s.to_string()).collect();
    for scale in ["micro", "macro"] {
        cols.extend(METRIC_COLUMNS.iter().map(|m| format!("{scale}_{m}")));
    }
    cols.push("error".into());
    cols
}

fn fmt_f64(x: f64) -> String {
    // Display prints the shortest string that parses back to the same bits.
    x.to_string()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn metric_cells(r: &MetricsReport) -> Vec<String> {
    vec![
        r.nodes.to_string(),
        fmt_f64(r.ei),
        fmt_f64(r.determinism),
        fmt_f64(r.degeneracy),
        fmt_f64(r.indeterminism),
        fmt_f64(r.entropy_rate),
        fmt_f64(r.global_efficiency),
        fmt_f64(r.mean_betweenness),
        fmt_f64(r.mean_eigenvector_centrality),
        fmt_opt(r.macro_node_betweenness),
        fmt_opt(r.macro_node_eigenvector_centrality),
        fmt_f64(r.communicability_entropy),
        fmt_f64(r.mean_degree),
        fmt_f64(r.degree_variance),
        fmt_opt(r.assortativity),
        r.kernel_dimension.to_string(),
    ]
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn to_row(&self) -> Vec<String> {
        let mut row = vec![
            fmt_f64(self.alpha),
            self.sample.to_string(),
            self.seed.to_string(),
            self.algorithm.to_string(),
            fmt_f64(self.runtime_seconds),
            fmt_f64(self.wall_seconds),
        ];
        match &self.outcome {
            Ok(o) => {
                row.extend([
                    fmt_f64(o.ei_micro),
                    fmt_f64(o.ei_macro),
                    fmt_f64(o.causal_emergence),
                    o.macro_node_count.to_string(),
                    o.largest_group_size.to_string(),
                    fmt_f64(o.accuracy),
                ]);
                row.extend(metric_cells(&o.micro));
                row.extend(metric_cells(&o.macro_));
                row.push(String::new());
            }
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), 6 + 2 * METRIC_COLUMNS.len()));
                row.push(e.clone());
            }
        }
        row
    }

    pub fn from_row(row: &csv::StringRecord) -> Result<Self> {
        let width = run_columns().len();
        if row.len() != width {
            return Err(Error::Config(format!("expected {width} columns, found {}", row.len())));
        }
        let mut cells = Cells { row, at: 0 };
        let alpha = cells.f64()?;
        let sample = cells.parse()?;
        let seed = cells.parse()?;
        let algorithm: Algorithm = cells.next().parse()?;
        let runtime_seconds = cells.f64()?;
        let wall_seconds = cells.f64()?;
        let error = row.get(width - 1).unwrap_or_default();
        let outcome = if error.is_empty() {
            Ok(RunOutcome {
                ei_micro: cells.f64()?,
                ei_macro: cells.f64()?,
                causal_emergence: cells.f64()?,
                macro_node_count: cells.parse()?,
                largest_group_size: cells.parse()?,
                accuracy: cells.f64()?,
                micro: cells.metrics()?,
                macro_: cells.metrics()?,
            })
        } else {
            Err(error.to_string())
        };
        Ok(RunRecord {
            alpha,
            sample,
            seed,
            algorithm,
            runtime_seconds,
            wall_seconds,
            outcome,
        })
    }
}

struct Cells<'a> {
    row: &'a csv::StringRecord,
    at: usize,
}

impl Cells<'_> {
    fn next(&mut self) -> &str {
        let s = self.row.get(self.at).unwrap_or_default();
        self.at += 1;
        s
    }

    fn parse<T: std::str::FromStr>(&mut self) -> Result<T> {
        let col = self.at;
        let s = self.next();
        s.parse()
            .map_err(|_| Error::Config(format!("column {col}: cannot parse {s:?}")))
    }

    fn f64(&mut self) -> Result<f64> {
        self.parse()
    }

    fn opt(&mut self) -> Result<Option<f64>> {
        if self.row.get(self.at).unwrap_or_default().is_empty() {
            self.at += 1;
            return Ok(None);
        }
        self.f64().map(Some)
    }

    fn metrics(&mut self) -> Result<MetricsReport> {
        Ok(MetricsReport {
            nodes: self.parse()?,
            ei: self.f64()?,
            determinism: self.f64()?,
            degeneracy: self.f64()?,
            indeterminism: self.f64()?,
            entropy_rate: self.f64()?,
            global_efficiency: self.f64()?,
            mean_betweenness: self.f64()?,
            mean_eigenvector_centrality: self.f64()?,
            macro_node_betweenness: self.opt()?,
            macro_node_eigenvector_centrality: self.opt()?,
            communicability_entropy: self.f64()?,
            mean_degree: self.f64()?,
            degree_variance: self.f64()?,
            assortativity: self.opt()?,
            kernel_dimension: self.parse()?,
        })
    }
}

pub fn write_runs<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(run_columns())?;
    for r in records {
        w.write_record(r.to_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_runs<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(run_columns().iter().map(String::as_str)) {
        return Err(Error::Config("runs.csv header does not match the expected columns".into()));
    }
    rd.records().map(|row| RunRecord::from_row(&row?)).collect()
}

/// Numeric columns summarised per (alpha, algorithm): everything in
/// `runs.csv` after the identifying columns, minus the error text.
fn summary_names() -> Vec<String> {
    let cols = run_columns();
    cols[4..cols.len() - 1].to_vec()
}

fn summary_values(r: &RunRecord) -> Option<Vec<Option<f64>>> {
    r.outcome.as_ref().ok()?;
    let row = r.to_row();
    Some(row[4..row.len() - 1].iter().map(|c| c.parse().ok()).collect())
}

/// Mean and sample standard deviation of every numeric column, grouped by
/// alpha and algorithm in first-seen order. Optional metrics average over the
/// runs that have them; a standard deviation needs two values.
pub fn write_summary<W: Write>(out: W, records: &[RunRecord]) -> Result<()> {
    let mut groups: Vec<((f64, Algorithm), Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = (r.alpha, r.algorithm);
        match groups.iter_mut().find(|(k, _)| k.0.to_bits() == key.0.to_bits() && k.1 == key.1) {
            Some((_, g)) => g.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    let names = summary_names();

    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["alpha".to_string(), "algorithm".into(), "runs".into(), "errors".into()];
    for name in &names {
        header.push(format!("{name}_mean"));
        header.push(format!("{name}_std"));
    }
    w.write_record(&header)?;
    for ((alpha, algorithm), runs) in groups {
        let ok: Vec<Vec<Option<f64>>> = runs.iter().filter_map(|r| summary_values(r)).collect();
        let mut row = vec![
            fmt_f64(alpha),
            algorithm.to_string(),
            ok.len().to_string(),
            (runs.len() - ok.len()).to_string(),
        ];
        for k in 0..names.len() {
            let xs: Vec<f64> = ok.iter().filter_map(|v| v[k]).collect();
            let (mean, std) = mean_std(&xs);
            row.push(fmt_opt(mean));
            row.push(fmt_opt(std));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (Some(mean), None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(nodes: usize, with_macro: bool) -> MetricsReport {
        MetricsReport {
            nodes,
            ei: 0.1 + nodes as f64 / 3.0,
            determinism: 1.0 / 7.0,
            degeneracy: 2e-17,
            indeterminism: 0.3,
            entropy_rate: 0.25,
            global_efficiency: 0.6,
            mean_betweenness: 0.01,
            mean_eigenvector_centrality: 0.2,
            macro_node_betweenness: with_macro.then_some(0.5),
            macro_node_eigenvector_centrality: with_macro.then_some(0.75),
            communicability_entropy: 5.5,
            mean_degree: 2.0,
            degree_variance: 12.25,
            assortativity: (!with_macro).then_some(-0.9),
            kernel_dimension: 7,
        }
    }

    fn records() -> Vec<RunRecord> {
        vec![
            RunRecord {
                alpha: 1.5,
                sample: 0,
                seed: u64::MAX,
                algorithm: Algorithm::Spectral,
                runtime_seconds: 0.0123,
                wall_seconds: 0.0125,
                outcome: Ok(RunOutcome {
                    ei_micro: 1.0 / 3.0,
                    ei_macro: 0.9,
                    causal_emergence: 0.9 - 1.0 / 3.0,
                    macro_node_count: 4,
                    largest_group_size: 10,
                    accuracy: 1.0,
                    micro: report(13, false),
                    macro_: report(4, true),
                }),
            },
            RunRecord {
                alpha: 1.5,
                sample: 1,
                seed: 3,
                algorithm: Algorithm::Gradient,
                runtime_seconds: 0.5,
                wall_seconds: 0.5,
                outcome: Err("restarts exhausted, \"quoted\"".into()),
            },
        ]
    }

    #[test]
    fn csv_round_trip() {
        let recs = records();
        let mut buf = Vec::new();
        write_runs(&mut buf, &recs).unwrap();
        assert_eq!(read_runs(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn header_is_checked() {
        assert!(read_runs("alpha,seed\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn summary_groups_and_counts() {
        let mut recs = records();
        let mut extra = recs[0].clone();
        extra.sample = 2;
        if let Ok(o) = &mut extra.outcome {
            o.causal_emergence += 0.2;
        }
        recs.push(extra);
        let mut buf = Vec::new();
        write_summary(&mut buf, &recs).unwrap();
        let mut rd = csv::Reader::from_reader(buf.as_slice());
        let header = rd.headers().unwrap().clone();
        let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        let col = |name: &str| header.iter().position(|h| h == name).unwrap();
        assert_eq!(&rows[0][col("algorithm")], "spectral");
        assert_eq!(&rows[0][col("runs")], "2");
        let std: f64 = rows[0][col("causal_emergence_std")].parse().unwrap();
        assert!((std - 0.2 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(&rows[1][col("errors")], "1");
        assert_eq!(&rows[1][col("causal_emergence_mean")], "");
        assert_eq!(&rows[0][col("micro_macro_node_betweenness_mean")], "");
    }
}
