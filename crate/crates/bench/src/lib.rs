//! Fixed inputs for the kernel benchmarks.

use chaoslab_core::algebra::identities::random_tensor;
use chaoslab_core::rng::substream;
use chaoslab_core::SymmetricTensor;

/// Two random sparse kernels of orders `p` and `q` over `dim` directions,
/// the same for every call with the same arguments.
pub fn kernel_pair(p: usize, q: usize, dim: usize) -> (SymmetricTensor, SymmetricTensor) {
    let mut rng = substream(0, "bench-kernels", (p * 100 + q * 10) as u64 + dim as u64);
    (random_tensor(&mut rng, p, dim), random_tensor(&mut rng, q, dim))
}

/// A dense-ish symmetric kernel: every sorted multi-index over `dim`
/// directions gets a nonzero coefficient.
pub fn full_kernel(order: usize, dim: usize) -> SymmetricTensor {
    fn fill(order: usize, dim: u32, start: u32, idx: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, f64)>) {
        if idx.len() == order {
            let v = idx.iter().map(|&i| i as f64).sum::<f64>().sin();
            out.push((idx.clone(), v));
            return;
        }
        for i in start..=dim {
            idx.push(i);
            fill(order, dim, i, idx, out);
            idx.pop();
        }
    }
    let mut entries = Vec::new();
    fill(order, dim as u32, 1, &mut Vec::new(), &mut entries);
    SymmetricTensor::from_entries(order, dim, entries).expect("sorted indices in range")
}
