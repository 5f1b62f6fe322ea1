//! Dense brute-force reference implementations used by the test suites.
//!
//! Everything here materializes all `d^n` ordered tuples and, for
//! symmetrization, all `n!` slot permutations. Only usable for tiny shapes.

use chaoslab_core::{BipartiteTensor, SymmetricTensor};

/// A dense real tensor of shape `[dim; order]`, row-major, 0-based internally.
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    pub order: usize,
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn zeros(order: usize, dim: usize) -> Self {
        Dense {
            order,
            dim,
            data: vec![0.0; dim.pow(order as u32)],
        }
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn tuple(&self, mut off: usize) -> Vec<usize> {
        let mut out = vec![0; self.order];
        for slot in (0..self.order).rev() {
            out[slot] = off % self.dim;
            off /= self.dim;
        }
        out
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn inner(&self, other: &Dense) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn max_abs_diff(&self, other: &Dense) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn one_based(idx: &[usize]) -> Vec<u32> {
    idx.iter().map(|&i| i as u32 + 1).collect()
}

/// Expand a symmetric tensor to all ordered tuples.
pub fn dense_symmetric(f: &SymmetricTensor) -> Dense {
    let mut d = Dense::zeros(f.order(), f.dim());
    for off in 0..d.data.len() {
        d.data[off] = f.get(&one_based(&d.tuple(off)));
    }
    d
}

/// Expand a bipartite tensor slot by slot.
pub fn dense_bipartite(t: &BipartiteTensor) -> Dense {
    let mut d = Dense::zeros(t.order(), t.dim());
    for off in 0..d.data.len() {
        let idx = one_based(&d.tuple(off));
        let (l, r) = idx.split_at(t.left_order());
        d.data[off] = t.get(l, r);
    }
    d
}

/// `(f ⊗_r g)(s, t) = Σ_k f(s, k) g(t, k)` over every ordered `k`.
pub fn dense_contract(f: &Dense, g: &Dense, r: usize) -> Dense {
    assert_eq!(f.dim, g.dim);
    let dim = f.dim;
    let (p, q) = (f.order, g.order);
    let mut out = Dense::zeros(p + q - 2 * r, dim);
    let kspace = Dense::zeros(r, dim);
    for off in 0..out.data.len() {
        let idx = out.tuple(off);
        let (s, t) = idx.split_at(p - r);
        let mut acc = 0.0;
        for koff in 0..kspace.data.len() {
            let k = kspace.tuple(koff);
            let fi: Vec<usize> = s.iter().chain(&k).copied().collect();
            let gi: Vec<usize> = t.iter().chain(&k).copied().collect();
            acc += f.get(&fi) * g.get(&gi);
        }
        out.data[off] = acc;
    }
    out
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    out.push(a.clone());
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Average over all `n!` permutations of the slots.
pub fn dense_symmetrize(t: &Dense) -> Dense {
    let perms = permutations(t.order);
    let mut out = Dense::zeros(t.order, t.dim);
    for off in 0..out.data.len() {
        let idx = out.tuple(off);
        let mut acc = 0.0;
        for p in &perms {
            let permuted: Vec<usize> = p.iter().map(|&j| idx[j]).collect();
            acc += t.get(&permuted);
        }
        out.data[off] = acc / perms.len() as f64;
    }
    out
}

/// Probabilists' Hermite polynomial from its explicit sum
/// `H_n(x) = n! Σ_m (-1)^m x^{n-2m} / (m! (n-2m)! 2^m)`.
pub fn hermite_explicit(n: usize, x: f64) -> f64 {
    let fact = |k: usize| (1..=k).fold(1.0, |a, i| a * i as f64);
    (0..=n / 2)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(n) * x.powi((n - 2 * m) as i32) / (fact(m) * fact(n - 2 * m) * 2f64.powi(m as i32))
        })
        .sum()
}
