//! Feature tables, F3 distance matrices and equivalence decisions over a set
//! of labelled documents.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{features, Direction, EntropyOptions, LogBase, Quantifier};
use crate::error::{Error, Result};
use crate::rle::RleDocument;

#[derive(Debug, Clone)]
pub struct Sample {
    pub label: String,
    pub doc: RleDocument,
}

impl Sample {
    pub fn new(label: impl Into<String>, doc: RleDocument) -> Self {
        Sample {
            label: label.into(),
            doc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureRow {
    pub label: String,
    #[serde(rename = "F1")]
    pub f1: f64,
    #[serde(rename = "F2")]
    pub f2: f64,
    #[serde(rename = "F3")]
    pub f3: f64,
}

fn check_labels<'a>(labels: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

/// One row per sample, in input order.
pub fn feature_table(
    samples: &[Sample],
    quantifier: Quantifier,
    direction: Direction,
    opts: EntropyOptions,
) -> Result<Vec<FeatureRow>> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    check_labels(samples.iter().map(|s| s.label.as_str()))?;
    let row = |s: &Sample| {
        let f = features(&s.doc, quantifier, direction, opts);
        FeatureRow {
            label: s.label.clone(),
            f1: f.f1,
            f2: f.f2,
            f3: f.f3,
        }
    };
    Ok(if opts.parallel {
        samples.par_iter().map(row).collect()
    } else {
        samples.iter().map(row).collect()
    })
}

pub fn feature_rows_to_csv(rows: &[FeatureRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub quantifier: Quantifier,
    pub direction: Direction,
    pub log_base: LogBase,
}

impl DistanceMatrix {
    /// `|F3_i − F3_j|` for every pair of rows.
    pub fn from_features(
        rows: &[FeatureRow],
        quantifier: Quantifier,
        direction: Direction,
        log_base: LogBase,
    ) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: rows.len(),
            });
        }
        check_labels(rows.iter().map(|r| r.label.as_str()))?;
        let values = rows
            .iter()
            .map(|a| rows.iter().map(|b| (a.f3 - b.f3).abs()).collect())
            .collect();
        Ok(DistanceMatrix {
            labels: rows.iter().map(|r| r.label.clone()).collect(),
            values,
            quantifier,
            direction,
            log_base,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.values[i][i] == 0.0 && (0..n).all(|j| self.values[i][j] == self.values[j][i]))
    }

    /// Header row `sample,<labels...>`, then one row per label.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(std::iter::once("sample").chain(self.labels.iter().map(String::as_str)))?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn distance_matrix(
    samples: &[Sample],
    quantifier: Quantifier,
    direction: Direction,
    opts: EntropyOptions,
) -> Result<DistanceMatrix> {
    if samples.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let rows = feature_table(samples, quantifier, direction, opts)?;
    DistanceMatrix::from_features(&rows, quantifier, direction, opts.log_base)
}

/// True when the two documents' F3 values differ by at most `tolerance`.
pub fn equivalence_check(
    a: &RleDocument,
    b: &RleDocument,
    quantifier: Quantifier,
    direction: Direction,
    tolerance: f64,
    opts: EntropyOptions,
) -> Result<bool> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tolerance} must be >= 0")));
    }
    let fa = features(a, quantifier, direction, opts).f3;
    let fb = features(b, quantifier, direction, opts).f3;
    Ok((fa - fb).abs() <= tolerance)
}
