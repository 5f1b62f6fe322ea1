use std::collections::BTreeMap;

use super::{BipartiteTensor, MultiIndex, SymmetricTensor, PRUNE_TOL};
use crate::combinat::{merge_sorted, split_multiset};
use crate::error::{Error, Result};

type Slices = BTreeMap<Vec<u32>, Vec<(Vec<u32>, f64)>>;

/// Group the entries of `f` by which size-`r` sub-multiset is contracted:
/// `K -> [(rest, value)]`.
fn slices_by_contracted(f: &SymmetricTensor, r: usize) -> Slices {
    let mut out: Slices = BTreeMap::new();
    for (m, v) in f.iter() {
        if v == 0.0 {
            continue;
        }
        for (k, rest) in split_multiset(m.as_slice(), r) {
            out.entry(k).or_default().push((rest, v));
        }
    }
    out
}

fn check_pair(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    if r > f.order().min(g.order()) {
        return Err(Error::ContractionOrder {
            r,
            p: f.order(),
            q: g.order(),
        });
    }
    Ok(())
}

/// The contraction `f ⊗_r g`: pair the last `r` slots of `f` with the last
/// `r` slots of `g` and sum over ordered `r`-tuples. The left block carries
/// the free slots of `f`, the right block those of `g`. `r = 0` is the plain
/// tensor product and `r = p = q` is a scalar equal to `<f, g>`.
pub fn contract(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<BipartiteTensor> {
    check_pair(f, g, r)?;
    let fs = slices_by_contracted(f, r);
    let gs = slices_by_contracted(g, r);
    let mut out = BipartiteTensor::zeros(f.order() - r, g.order() - r, f.dim());
    for (k, f_rest) in &fs {
        let Some(g_rest) = gs.get(k) else { continue };
        let w = crate::combinat::orbit_size(k);
        for (s, fv) in f_rest {
            for (t, gv) in g_rest {
                out.accumulate(
                    MultiIndex::from_sorted(s.clone()),
                    MultiIndex::from_sorted(t.clone()),
                    w * fv * gv,
                );
            }
        }
    }
    out.prune_default();
    Ok(out)
}

/// Average a bipartite tensor over all permutations of its slots.
pub fn symmetrize(t: &BipartiteTensor) -> SymmetricTensor {
    let order = t.order();
    if order == 0 {
        return SymmetricTensor::constant(t.dim(), t.scalar().unwrap_or(0.0));
    }
    let mut acc: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for (a, b, v) in t.iter() {
        let m = MultiIndex::from_sorted(merge_sorted(a.as_slice(), b.as_slice()));
        let w = a.orbit_size() * b.orbit_size() / m.orbit_size();
        *acc.entry(m).or_insert(0.0) += w * v;
    }
    let mut out = SymmetricTensor::zeros(order, t.dim());
    for (m, v) in acc {
        if v.abs() > PRUNE_TOL {
            out.coeffs.insert(m, v);
        }
    }
    out
}

/// `f ⊗̃_r g`, the symmetrized contraction.
pub fn symmetrized_contraction(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<SymmetricTensor> {
    Ok(symmetrize(&contract(f, g, r)?))
}

/// `‖f ⊗_r g‖²` computed as `<f ⊗_{p-r} f, g ⊗_{q-r} g>` without forming
/// `f ⊗_r g`.
pub fn contraction_norm_sq_dual(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<f64> {
    check_pair(f, g, r)?;
    let ff = contract(f, f, f.order() - r)?;
    let gg = contract(g, g, g.order() - r)?;
    ff.inner(&gg)
}
