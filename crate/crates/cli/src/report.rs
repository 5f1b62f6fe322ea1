//! `results.csv` rows and `summary.json` metrics.

use std::io::Write;
use std::path::{Path, PathBuf};

use chaoslab_core::Estimate;
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::CliError;

/// One line of `results.csv`: `n,replicate,stat_name,value`. `n` is the
/// experiment's size parameter for that line (sample size, path length,
/// dimension, ...), `replicate` counts repeats at that size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub n: u64,
    pub replicate: u64,
    pub stat_name: String,
    pub value: f64,
}

/// A checked quantity with its pass flag.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub se: Option<f64>,
    pub target: Option<f64>,
    pub tol: Option<f64>,
    pub pass: bool,
}

impl Metric {
    /// `|value - target| <= tol`.
    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            se: None,
            target: Some(target),
            tol: Some(tol),
            pass: (value - target).abs() <= tol,
        }
    }

    /// `|value - target| <= rel · |target|`.
    pub fn near_rel(name: impl Into<String>, value: f64, target: f64, rel: f64) -> Self {
        let mut m = Self::near(name, value, target, rel * target.abs());
        m.tol = Some(rel * target.abs());
        m
    }

    /// `|est - target| <= k·se + extra`.
    pub fn within_se(name: impl Into<String>, est: Estimate, target: f64, k: f64, extra: f64) -> Self {
        let tol = k * est.se + extra;
        Metric {
            name: name.into(),
            value: est.value,
            se: Some(est.se),
            target: Some(target),
            tol: Some(tol),
            pass: (est.value - target).abs() <= tol,
        }
    }

    /// `value < bound`.
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            se: None,
            target: Some(bound),
            tol: None,
            pass: value < bound,
        }
    }

    /// `value > bound`.
    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Metric {
            name: name.into(),
            value,
            se: None,
            target: Some(bound),
            tol: None,
            pass: value > bound,
        }
    }

    /// `est.value > k·est.se`: bounded away from zero.
    pub fn positive(name: impl Into<String>, est: Estimate, k: f64) -> Self {
        Metric {
            name: name.into(),
            value: est.value,
            se: Some(est.se),
            target: Some(0.0),
            tol: Some(k * est.se),
            pass: est.value > k * est.se,
        }
    }

    pub fn flag(name: impl Into<String>, value: f64, pass: bool) -> Self {
        Metric {
            name: name.into(),
            value,
            se: None,
            target: None,
            tol: None,
            pass,
        }
    }
}

/// What an experiment produces.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub metrics: Vec<Metric>,
}

impl Outcome {
    pub fn row(&mut self, n: usize, replicate: usize, stat_name: &str, value: f64) {
        self.rows.push(Row {
            n: n as u64,
            replicate: replicate as u64,
            stat_name: stat_name.to_string(),
            value,
        });
    }

    pub fn metric(&mut self, m: Metric) {
        self.metrics.push(m);
    }

    pub fn all_pass(&self) -> bool {
        self.metrics.iter().all(|m| m.pass)
    }

    pub fn metric_named(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r).map_err(|e| CliError::Output(e.to_string()))?;
        }
        if self.rows.is_empty() {
            wr.write_record(["n", "replicate", "stat_name", "value"])
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn summary_json(&self, config: &ExperimentConfig) -> serde_json::Value {
        json!({
            "experiment": config.experiment,
            "params": config.params.to_json(),
            "seed": config.seed,
            "metrics": self.metrics,
        })
    }

    /// Write `results.csv` and `summary.json` into `dir`.
    pub fn write(&self, config: &ExperimentConfig, dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join("results.csv");
        self.write_csv(std::fs::File::create(&csv_path)?)?;
        let json_path = dir.join("summary.json");
        let text = serde_json::to_string_pretty(&self.summary_json(config)).map_err(|e| CliError::Output(e.to_string()))?;
        std::fs::write(&json_path, text + "\n")?;
        Ok((csv_path, json_path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_rules() {
        assert!(Metric::near("a", 1.0, 1.0 + 1e-13, 1e-12).pass);
        assert!(!Metric::below("b", 0.03, 0.02).pass);
        let est = Estimate { value: 0.5, se: 0.1 };
        assert!(Metric::positive("c", est, 3.0).pass);
        assert!(!Metric::within_se("d", est, 1.0, 4.0, 0.0).pass);
        assert!(Metric::within_se("d", est, 1.0, 4.0, 0.2).pass);
    }

    #[test]
    fn csv_layout() {
        let mut o = Outcome::default();
        o.row(64, 0, "ks", 0.0125);
        let mut buf = Vec::new();
        o.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,replicate,stat_name,value\n64,0,ks,0.0125\n");
        let mut empty = Vec::new();
        Outcome::default().write_csv(&mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap(), "n,replicate,stat_name,value\n");
    }
}
