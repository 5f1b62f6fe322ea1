//! Sparse symmetric tensors over a finite orthonormal basis `e_1, .., e_d`.
//!
//! Coefficients follow the function-value convention: the value stored at a
//! sorted multi-index `m` is the value of the symmetric coefficient function
//! at every permutation of `m`. Norms and inner products therefore weight each
//! stored entry by the size of its permutation orbit.

mod bipartite;
mod literal;
mod ops;

use std::collections::BTreeMap;

use rand::Rng;

use crate::combinat::{orbit_size, sorted_tuples};
use crate::error::{Error, Result};

pub use bipartite::BipartiteTensor;
pub use ops::{contract, contraction_norm_sq_dual, symmetrize, symmetrized_contraction};

/// Absolute threshold below which coefficients are dropped after arithmetic.
pub const PRUNE_TOL: f64 = 1e-14;

/// A sorted tuple of 1-based basis indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    /// Sorts the given indices.
    pub fn new(mut indices: Vec<u32>) -> Self {
        indices.sort_unstable();
        MultiIndex(indices)
    }

    pub(crate) fn from_sorted(indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] <= w[1]));
        MultiIndex(indices)
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct orderings of this multi-index.
    pub fn orbit_size(&self) -> f64 {
        orbit_size(&self.0)
    }

    /// True when no index repeats.
    pub fn is_distinct(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }

    pub fn contains(&self, i: u32) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex::new(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex::new(v.to_vec())
    }
}

/// An element of the `q`-th symmetric tensor power of `R^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricTensor {
    order: usize,
    dim: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl SymmetricTensor {
    /// The zero tensor. For order 0 this is the constant 0, which keeps its
    /// single scalar entry.
    pub fn zeros(order: usize, dim: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if order == 0 {
            coeffs.insert(MultiIndex::empty(), 0.0);
        }
        SymmetricTensor { order, dim, coeffs }
    }

    /// An order-0 tensor holding the constant `c`.
    pub fn constant(dim: usize, c: f64) -> Self {
        let mut t = Self::zeros(0, dim);
        t.coeffs.insert(MultiIndex::empty(), c);
        t
    }

    /// The basis vector `e_i` as an order-1 tensor.
    pub fn basis(dim: usize, i: u32) -> Result<Self> {
        Self::from_entries(1, dim, [(vec![i], 1.0)])
    }

    /// Build from `(indices, value)` pairs. Indices may be given in any order;
    /// listing the same multiset twice is an error.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let mut t = Self::zeros(order, dim);
        let mut seen_scalar = false;
        for (idx, v) in entries {
            if idx.len() != order {
                return Err(Error::ShapeMismatch(format!(
                    "entry {idx:?} has length {} but the order is {order}",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&i| i == 0 || i as usize > dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            let key = MultiIndex::new(idx);
            if order == 0 {
                if seen_scalar {
                    return Err(Error::InvalidArgument("duplicate scalar entry".into()));
                }
                seen_scalar = true;
                t.coeffs.insert(key, v);
                continue;
            }
            if t.coeffs.contains_key(&key) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate entry for multi-index {:?}",
                    key.as_slice()
                )));
            }
            if v != 0.0 {
                t.coeffs.insert(key, v);
            }
        }
        Ok(t)
    }

    /// `h^{⊗q}`: the coefficient at `(i_1, .., i_q)` is `prod_j h[i_j]`.
    pub fn tensor_power(h: &[f64], q: usize) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidArgument("tensor_power of an empty vector".into()));
        }
        let dim = h.len();
        if q == 0 {
            return Ok(Self::constant(dim, 1.0));
        }
        let support: Vec<u32> = (1..=dim as u32).filter(|&i| h[i as usize - 1] != 0.0).collect();
        let mut t = Self::zeros(q, dim);
        for idx in sorted_tuples(&support, q) {
            let v: f64 = idx.iter().map(|&i| h[i as usize - 1]).product();
            if v.abs() > PRUNE_TOL {
                t.coeffs.insert(MultiIndex::from_sorted(idx), v);
            }
        }
        Ok(t)
    }

    /// A random sparse tensor with up to `nnz` entries whose values are
    /// uniform in `[-1, 1]`. Multi-indices are drawn uniformly from `[1, dim]^q`
    /// and sorted, so collisions simply overwrite.
    pub fn random_sparse<R: Rng + ?Sized>(rng: &mut R, order: usize, dim: usize, nnz: usize) -> Self {
        let mut t = Self::zeros(order, dim);
        if order == 0 {
            t.coeffs.insert(MultiIndex::empty(), rng.random_range(-1.0..=1.0));
            return t;
        }
        for _ in 0..nnz {
            let idx: Vec<u32> = (0..order).map(|_| rng.random_range(1..=dim as u32)).collect();
            t.coeffs.insert(MultiIndex::new(idx), rng.random_range(-1.0..=1.0));
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) sorted entries.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> + '_ {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.coeffs
    }

    /// Value of the coefficient function at an arbitrary (unsorted) tuple.
    pub fn get(&self, indices: &[u32]) -> f64 {
        let key = MultiIndex::new(indices.to_vec());
        self.coeffs.get(&key).copied().unwrap_or(0.0)
    }

    /// The constant of an order-0 tensor.
    pub fn scalar(&self) -> Option<f64> {
        (self.order == 0).then(|| self.coeffs.get(&MultiIndex::empty()).copied().unwrap_or(0.0))
    }

    /// Overwrite one coefficient (the whole permutation orbit).
    pub fn set(&mut self, indices: Vec<u32>, value: f64) -> Result<()> {
        if indices.len() != self.order {
            return Err(Error::ShapeMismatch(format!(
                "index of length {} for order {}",
                indices.len(),
                self.order
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i as usize > self.dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim: self.dim });
        }
        let key = MultiIndex::new(indices);
        if value == 0.0 && self.order > 0 {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    /// Squared norm over ordered tuples: `sum_m orbit(m) * c_m^2`.
    // fold from +0.0: an empty `sum` of floats is -0.0
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|(k, v)| k.orbit_size() * v * v).fold(0.0, |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product over ordered tuples.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        let (small, large) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        Ok(small
            .coeffs
            .iter()
            .filter_map(|(k, v)| large.coeffs.get(k).map(|w| k.orbit_size() * v * w))
            .sum())
    }

    /// `self + other`, pruning at [`PRUNE_TOL`].
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_with_tol(other, PRUNE_TOL)
    }

    pub fn add_with_tol(&self, other: &Self, tol: f64) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            *out.coeffs.entry(k.clone()).or_insert(0.0) += v;
        }
        out.prune(tol);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `alpha * self`, pruning at [`PRUNE_TOL`].
    pub fn scale(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|v| *v *= alpha);
        out.prune(PRUNE_TOL);
        out
    }

    /// Drop entries with `|c| <= tol`. The scalar slot of an order-0 tensor
    /// is kept.
    pub fn prune(&mut self, tol: f64) {
        if self.order == 0 {
            return;
        }
        self.coeffs.retain(|_, v| v.abs() > tol);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&v| v == 0.0)
    }

    /// Embed as a bipartite tensor with the first `left_order` slots on the
    /// left. Symmetrizing the result returns `self`.
    pub fn to_bipartite(&self, left_order: usize) -> Result<BipartiteTensor> {
        BipartiteTensor::from_symmetric(self, left_order)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.order != other.order {
            return Err(Error::ShapeMismatch(format!(
                "orders {} and {} differ",
                self.order, other.order
            )));
        }
        Ok(())
    }
}
