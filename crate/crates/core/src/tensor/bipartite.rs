use std::collections::BTreeMap;

use super::{MultiIndex, SymmetricTensor, PRUNE_TOL};
use crate::combinat::{merge_sorted, split_multiset};
use crate::error::{Error, Result};

/// A tensor symmetric within each of two slot blocks, such as the
/// contraction `f ⊗_r g` of two symmetric tensors. Slots `0..left_order`
/// form the left block, the remaining `right_order` slots the right block.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteTensor {
    left_order: usize,
    right_order: usize,
    dim: usize,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), f64>,
}

impl BipartiteTensor {
    pub fn zeros(left_order: usize, right_order: usize, dim: usize) -> Self {
        BipartiteTensor {
            left_order,
            right_order,
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// Build from `(left, right, value)` triples; each block is sorted on
    /// insertion. Repeated keys accumulate.
    pub fn from_entries<I>(left_order: usize, right_order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Vec<u32>, f64)>,
    {
        let mut t = Self::zeros(left_order, right_order, dim);
        for (l, r, v) in entries {
            if l.len() != left_order || r.len() != right_order {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({l:?}|{r:?}) does not match block orders ({left_order}|{right_order})"
                )));
            }
            if let Some(&bad) = l.iter().chain(r.iter()).find(|&&i| i == 0 || i as usize > dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            t.accumulate(MultiIndex::new(l), MultiIndex::new(r), v);
        }
        t.prune(0.0);
        Ok(t)
    }

    /// View a symmetric tensor as bipartite with the given left block size.
    pub fn from_symmetric(f: &SymmetricTensor, left_order: usize) -> Result<Self> {
        if left_order > f.order() {
            return Err(Error::ShapeMismatch(format!(
                "left block of size {left_order} exceeds order {}",
                f.order()
            )));
        }
        let mut t = Self::zeros(left_order, f.order() - left_order, f.dim());
        for (m, v) in f.iter() {
            if v == 0.0 {
                continue;
            }
            for (a, b) in split_multiset(m.as_slice(), left_order) {
                t.coeffs.insert((MultiIndex::from_sorted(a), MultiIndex::from_sorted(b)), v);
            }
        }
        Ok(t)
    }

    pub(crate) fn accumulate(&mut self, left: MultiIndex, right: MultiIndex, v: f64) {
        *self.coeffs.entry((left, right)).or_insert(0.0) += v;
    }

    pub(crate) fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, v| v.abs() > tol);
    }

    pub(crate) fn prune_default(&mut self) {
        self.prune(PRUNE_TOL);
    }

    pub fn left_order(&self) -> usize {
        self.left_order
    }

    pub fn right_order(&self) -> usize {
        self.right_order
    }

    pub fn order(&self) -> usize {
        self.left_order + self.right_order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, f64)> + '_ {
        self.coeffs.iter().map(|((a, b), &v)| (a, b, v))
    }

    /// Value at an arbitrary (unsorted) pair of blocks.
    pub fn get(&self, left: &[u32], right: &[u32]) -> f64 {
        let key = (MultiIndex::new(left.to_vec()), MultiIndex::new(right.to_vec()));
        self.coeffs.get(&key).copied().unwrap_or(0.0)
    }

    /// The value of a tensor with both blocks empty, e.g. `f ⊗_q g` for
    /// `p = q = r`.
    pub fn scalar(&self) -> Option<f64> {
        (self.order() == 0).then(|| self.coeffs.values().sum())
    }

    /// Squared norm over ordered tuples in each block.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|((a, b), v)| a.orbit_size() * b.orbit_size() * v * v)
            .fold(0.0, |acc, x| acc + x)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Inner product of two tensors with identical block structure.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.left_order != other.left_order || self.right_order != other.right_order {
            return Err(Error::ShapeMismatch(format!(
                "block orders ({}|{}) and ({}|{}) differ",
                self.left_order, self.right_order, other.left_order, other.right_order
            )));
        }
        let (small, large) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        Ok(small
            .coeffs
            .iter()
            .filter_map(|(k, v)| large.coeffs.get(k).map(|w| k.0.orbit_size() * k.1.orbit_size() * v * w))
            .sum())
    }

    /// Positional inner product of two tensors with the same total order but
    /// possibly different block splits: `Σ_x s(x) t(x)` over ordered tuples
    /// `x`, where slot `k` of `s` is paired with slot `k` of `t`.
    pub fn inner_flat(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.order() != other.order() {
            return Err(Error::ShapeMismatch(format!(
                "total orders {} and {} differ",
                self.order(),
                other.order()
            )));
        }
        let (s, t) = if self.left_order <= other.left_order { (self, other) } else { (other, self) };
        // Common refinement of the two splits: blocks [0,a), [a,c), [c,n).
        let middle = t.left_order - s.left_order;
        let mut total = 0.0;
        for ((a, b), v) in &s.coeffs {
            for (k2, k3) in split_multiset(b.as_slice(), middle) {
                let left = MultiIndex::from_sorted(merge_sorted(a.as_slice(), &k2));
                let right = MultiIndex::from_sorted(k3);
                if let Some(w) = t.coeffs.get(&(left, right.clone())) {
                    let k2 = MultiIndex::from_sorted(k2);
                    total += a.orbit_size() * k2.orbit_size() * right.orbit_size() * v * w;
                }
            }
        }
        Ok(total)
    }

    /// Swap the two blocks.
    pub fn transpose(&self) -> Self {
        BipartiteTensor {
            left_order: self.right_order,
            right_order: self.left_order,
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|((a, b), &v)| ((b.clone(), a.clone()), v)).collect(),
        }
    }

    pub fn scale(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|v| *v *= alpha);
        out.prune_default();
        out
    }
}
