//! Joint moments and joint cumulants indexed by multisets of component
//! indices, related through sums over set partitions.

use std::collections::BTreeMap;

use super::SampleMatrix;
use crate::combinat::{factorial, set_partitions, sorted_tuples};
use crate::error::{Error, Result};
use crate::stats::mean;

pub const DEFAULT_MAX_ORDER: usize = 8;

/// A multiset of 0-based component indices, stored sorted. The key
/// `[0, 0, 1]` stands for `E[X_0² X_1]` or `κ(X_0, X_0, X_1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CumulantKey(Vec<usize>);

impl CumulantKey {
    pub fn new(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        CumulantKey(idx)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl<const N: usize> From<[usize; N]> for CumulantKey {
    fn from(v: [usize; N]) -> Self {
        CumulantKey::new(v.to_vec())
    }
}

/// A table of joint moments or joint cumulants.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MomentTable {
    entries: BTreeMap<CumulantKey, f64>,
}

impl MomentTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<CumulantKey>, value: f64) {
        self.entries.insert(key.into(), value);
    }

    pub fn get(&self, key: &CumulantKey) -> Option<f64> {
        self.entries.get(key).copied()
    }

    fn lookup(&self, key: CumulantKey) -> Result<f64> {
        self.get(&key).ok_or(Error::MissingMoment(key.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CumulantKey, f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.entries.keys().map(|k| k.order()).max().unwrap_or(0)
    }
}

/// Sum over set partitions `π` of the key's positions of
/// `weight(|π|) Π_{B ∈ π} table[key restricted to B]`.
fn partition_sum(key: &CumulantKey, table: &MomentTable, weight: impl Fn(usize) -> f64) -> Result<f64> {
    let m = key.order();
    if m == 0 {
        return Ok(1.0);
    }
    let mut total = 0.0;
    for p in set_partitions(m) {
        let mut prod = weight(p.len());
        for block in &p {
            let sub = CumulantKey::new(block.iter().map(|&l| key.0[l]).collect());
            prod *= table.lookup(sub)?;
        }
        total += prod;
    }
    Ok(total)
}

/// `κ(X_{j_1}, .., X_{j_m}) = Σ_π (-1)^{|π|-1} (|π|-1)! Π_B E[Π_{l∈B} X_{j_l}]`.
pub fn joint_cumulant(key: &CumulantKey, moments: &MomentTable) -> Result<f64> {
    partition_sum(key, moments, |k| {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sign * factorial(k - 1)
    })
}

/// Convert every entry of a moment table to the matching joint cumulant.
pub fn moments_to_cumulants(moments: &MomentTable) -> Result<MomentTable> {
    let mut out = MomentTable::new();
    for (k, _) in moments.iter() {
        out.entries.insert(k.clone(), joint_cumulant(k, moments)?);
    }
    Ok(out)
}

/// Inverse of [`moments_to_cumulants`]: `E[Π X_{j_l}] = Σ_π Π_B κ(B)`.
pub fn cumulants_to_moments(cumulants: &MomentTable) -> Result<MomentTable> {
    let mut out = MomentTable::new();
    for (k, _) in cumulants.iter() {
        out.entries.insert(k.clone(), partition_sum(k, cumulants, |_| 1.0)?);
    }
    Ok(out)
}

/// Empirical joint moments of every multiset of columns up to `max_order`.
pub fn moment_table_from_samples(samples: &SampleMatrix, max_order: usize) -> MomentTable {
    let cols: Vec<Vec<f64>> = (0..samples.cols()).map(|i| samples.column(i)).collect();
    let ids: Vec<u32> = (0..samples.cols() as u32).collect();
    let mut out = MomentTable::new();
    for order in 1..=max_order {
        for key in sorted_tuples(&ids, order) {
            let prods: Vec<f64> = (0..samples.rows_len())
                .map(|r| key.iter().map(|&c| cols[c as usize][r]).product())
                .collect();
            out.entries
                .insert(CumulantKey(key.iter().map(|&c| c as usize).collect()), mean(&prods));
        }
    }
    out
}
