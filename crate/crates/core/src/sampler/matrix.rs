use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::{draw_isonormal, hermite_table, CompiledChaos};
use crate::algebra::ChaosVectorSpec;
use crate::error::Result;
use crate::rng::substream;

/// Rows drawn from one substream. Fixed so that the sample does not depend
/// on the number of worker threads.
pub const BATCH_ROWS: usize = 1024;

const STREAM: &str = "isonormal";

/// Row-major draws of a chaos vector; column `i` is component `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMatrix {
    cols: usize,
    data: Vec<f64>,
    seed: u64,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    seed: u64,
    stream: &'a str,
    batch_rows: usize,
    rows: usize,
    cols: usize,
}

impl SampleMatrix {
    pub fn from_rows(cols: usize, data: Vec<f64>, seed: u64) -> Self {
        assert_eq!(data.len() % cols.max(1), 0);
        SampleMatrix { cols, data, seed }
    }

    pub fn rows_len(&self) -> usize {
        if self.cols == 0 {
            0
        } else {
            self.data.len() / self.cols
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows().map(|r| r[i]).collect()
    }

    /// CSV with header `comp_1,..,comp_d`, one row per draw.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let header: Vec<String> = (1..=self.cols).map(|i| format!("comp_{i}")).collect();
        writeln!(w, "{}", header.join(","))?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// JSON record of how the sample was seeded.
    pub fn sidecar_json(&self) -> String {
        serde_json::to_string_pretty(&Sidecar {
            seed: self.seed,
            stream: STREAM,
            batch_rows: BATCH_ROWS,
            rows: self.rows_len(),
            cols: self.cols,
        })
        .expect("sidecar serializes")
    }
}

/// Evaluate every component of `v` on `n_samples` shared isonormal draws.
pub fn sample_vector(v: &ChaosVectorSpec, n_samples: usize, seed: u64) -> Result<SampleMatrix> {
    let compiled: Vec<CompiledChaos> = v.components().iter().map(CompiledChaos::new).collect();
    let qmax = compiled.iter().map(|c| c.max_mult()).max().unwrap_or(0);
    let d = v.dim();
    let batches = n_samples.div_ceil(BATCH_ROWS);
    let data: Vec<f64> = (0..batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let rows = BATCH_ROWS.min(n_samples - b * BATCH_ROWS);
            let mut rng = substream(seed, STREAM, b as u64);
            let mut out = Vec::with_capacity(rows * compiled.len());
            for _ in 0..rows {
                let xi = draw_isonormal(&mut rng, d);
                let table = hermite_table(&xi, qmax);
                out.extend(compiled.iter().map(|c| c.eval_with_table(&table)));
            }
            out
        })
        .collect();
    Ok(SampleMatrix::from_rows(compiled.len(), data, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{covariance_estimate, mean_estimate};
    use crate::tensor::SymmetricTensor;

    #[test]
    fn shared_draws_and_reproducibility() {
        let e1 = SymmetricTensor::basis(2, 1).unwrap();
        let e2 = SymmetricTensor::basis(2, 2).unwrap();
        let v = ChaosVectorSpec::new(vec![e1.clone(), e2, e1]).unwrap();
        let s = sample_vector(&v, 5000, 1).unwrap();
        assert_eq!(s.rows_len(), 5000);
        assert_eq!(s.column(0), s.column(2));
        let c = covariance_estimate(&s.column(0), &s.column(1));
        assert!(c.value.abs() < 4.0 / (5000f64).sqrt());
        assert_eq!(s, sample_vector(&v, 5000, 1).unwrap());
    }

    #[test]
    fn chi_square_type_is_centered() {
        let f = SymmetricTensor::from_entries(2, 2, [(vec![1, 1], 0.5), (vec![2, 2], 0.5)]).unwrap();
        let v = ChaosVectorSpec::new(vec![f]).unwrap();
        let s = sample_vector(&v, 20_000, 3).unwrap();
        assert!(mean_estimate(&s.column(0)).within(0.0, 4.0));
    }

    #[test]
    fn csv_layout() {
        let m = SampleMatrix::from_rows(2, vec![1.0, -0.5, 0.25, 2.0], 9);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "comp_1,comp_2\n1.0,-0.5\n0.25,2.0\n");
        assert!(m.sidecar_json().contains("\"seed\": 9"));
    }
}
