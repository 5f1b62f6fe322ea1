//! Numerical check of the generalized Cauchy-Schwarz inequality on a finite
//! weighted measure space.

use rand::Rng;

use crate::error::{Error, Result};

/// Functions `h_1..h_q` of the variable subsets `c_1..c_q` of `{0..C-1}`,
/// integrated against the product of a discrete measure with the given atom
/// weights.
///
/// `functions[i]` holds `h_i` densely over `atoms^{|c_i|}`, row-major in the
/// increasing order of the variables of `c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct GenCsInstance {
    pub num_vars: usize,
    pub weights: Vec<f64>,
    pub cover: Vec<Vec<usize>>,
    pub functions: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenCsReport {
    /// `|∫ Π_i h_i(z_{c_i}) dμ^C|`
    pub lhs: f64,
    /// `Π_i ‖h_i‖`
    pub rhs_gencs: f64,
    /// `‖h_j ⊗_{c_0} h_k‖ Π_{i≠j,k} ‖h_i‖` for the reported pair
    pub rhs_gencs1: f64,
    pub pair: (usize, usize),
}

impl GenCsReport {
    /// `min(rhs_gencs1 - lhs, rhs_gencs - rhs_gencs1)`
    pub fn slack(&self) -> f64 {
        (self.rhs_gencs1 - self.lhs).min(self.rhs_gencs - self.rhs_gencs1)
    }
}

impl GenCsInstance {
    fn atoms(&self) -> usize {
        self.weights.len()
    }

    fn validate(&self) -> Result<()> {
        let c = self.num_vars;
        if c < 1 || self.cover.len() < 2 {
            return Err(Error::InvalidArgument("need at least one variable and two functions".into()));
        }
        if self.weights.is_empty() || self.weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidArgument("atom weights must be nonnegative".into()));
        }
        if self.functions.len() != self.cover.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} functions for {} cover sets",
                self.functions.len(),
                self.cover.len()
            )));
        }
        let mut count = vec![0usize; c];
        for (i, set) in self.cover.iter().enumerate() {
            if set.is_empty() || set.windows(2).any(|w| w[0] >= w[1]) || set.iter().any(|&v| v >= c) {
                return Err(Error::InvalidArgument(format!(
                    "cover set {i} must be a nonempty increasing subset of 0..{c}"
                )));
            }
            let expected = self.atoms().pow(set.len() as u32);
            if self.functions[i].len() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "h_{i} has {} values, expected {expected}",
                    self.functions[i].len()
                )));
            }
            for &v in set {
                count[v] += 1;
            }
        }
        if let Some(v) = count.iter().position(|&n| n != 2) {
            return Err(Error::InvalidArgument(format!(
                "variable {v} appears in {} cover sets, expected exactly 2",
                count[v]
            )));
        }
        Ok(())
    }

    fn eval(&self, i: usize, z: &[usize]) -> f64 {
        let off = self.cover[i].iter().fold(0, |acc, &v| acc * self.atoms() + z[v]);
        self.functions[i][off]
    }

    fn norm(&self, i: usize) -> f64 {
        let k = self.cover[i].len();
        let mut total = 0.0;
        for (off, h) in self.functions[i].iter().enumerate() {
            let mut w = 1.0;
            let mut o = off;
            for _ in 0..k {
                w *= self.weights[o % self.atoms()];
                o /= self.atoms();
            }
            total += w * h * h;
        }
        total.sqrt()
    }
}

/// Iterate over every assignment of `vars` (positions into `z`) to atoms.
fn for_each_assignment(vars: &[usize], atoms: usize, z: &mut [usize], f: &mut dyn FnMut(&[usize])) {
    match vars.split_first() {
        None => f(z),
        Some((&v, rest)) => {
            for a in 0..atoms {
                z[v] = a;
                for_each_assignment(rest, atoms, z, f);
            }
        }
    }
}

fn weight(inst: &GenCsInstance, vars: &[usize], z: &[usize]) -> f64 {
    vars.iter().map(|&v| inst.weights[z[v]]).product()
}

/// Evaluate both sides of the generalized Cauchy-Schwarz inequality by
/// direct summation. `pair` selects `(j, k)`; by default the first pair of
/// cover sets with nonempty intersection is used.
pub fn generalized_cs_check(inst: &GenCsInstance, pair: Option<(usize, usize)>) -> Result<GenCsReport> {
    inst.validate()?;
    let c = inst.num_vars;
    let q = inst.cover.len();
    let atoms = inst.atoms();
    let overlaps = |j: usize, k: usize| inst.cover[j].iter().any(|v| inst.cover[k].contains(v));

    let (j, k) = match pair {
        Some((j, k)) => {
            if j == k || j >= q || k >= q || !overlaps(j, k) {
                return Err(Error::InvalidArgument(format!("pair ({j}, {k}) is not an overlapping pair")));
            }
            (j, k)
        }
        None => (0..q)
            .flat_map(|j| (j + 1..q).map(move |k| (j, k)))
            .find(|&(j, k)| overlaps(j, k))
            .ok_or_else(|| Error::InvalidArgument("no two cover sets intersect".into()))?,
    };

    let all: Vec<usize> = (0..c).collect();
    let mut z = vec![0usize; c];
    let mut integral = 0.0;
    for_each_assignment(&all, atoms, &mut z, &mut |z| {
        let prod: f64 = (0..q).map(|i| inst.eval(i, z)).product();
        integral += weight(inst, &all, z) * prod;
    });

    let norms: Vec<f64> = (0..q).map(|i| inst.norm(i)).collect();
    let rhs_gencs = norms.iter().product();

    let shared: Vec<usize> = inst.cover[j].iter().copied().filter(|v| inst.cover[k].contains(v)).collect();
    let free: Vec<usize> = inst.cover[j]
        .iter()
        .chain(inst.cover[k].iter())
        .copied()
        .filter(|v| !shared.contains(v))
        .collect();
    let mut contraction_sq = 0.0;
    let mut z = vec![0usize; c];
    for_each_assignment(&free, atoms, &mut z, &mut |zf| {
        let mut inner = 0.0;
        let mut zi = zf.to_vec();
        for_each_assignment(&shared, atoms, &mut zi, &mut |zs| {
            inner += weight(inst, &shared, zs) * inst.eval(j, zs) * inst.eval(k, zs);
        });
        contraction_sq += weight(inst, &free, zf) * inner * inner;
    });
    let others: f64 = (0..q).filter(|&i| i != j && i != k).map(|i| norms[i]).product();

    Ok(GenCsReport {
        lhs: integral.abs(),
        rhs_gencs,
        rhs_gencs1: contraction_sq.sqrt() * others,
        pair: (j, k),
    })
}

/// A random valid instance with `2..=max_vars` variables and
/// `1..=max_atoms` atoms. Every variable is placed in two distinct cover
/// sets; the number of sets is between 2 and the number of variables + 1.
pub fn random_gencs_instance<R: Rng + ?Sized>(rng: &mut R, max_vars: usize, max_atoms: usize) -> GenCsInstance {
    let c = rng.random_range(2..=max_vars.max(2));
    let atoms = rng.random_range(1..=max_atoms.max(1));
    let q = rng.random_range(2..=c + 1);
    loop {
        let mut cover = vec![Vec::new(); q];
        for v in 0..c {
            let a = rng.random_range(0..q);
            let mut b = rng.random_range(0..q - 1);
            if b >= a {
                b += 1;
            }
            cover[a].push(v);
            cover[b].push(v);
        }
        if cover.iter().any(|s| s.is_empty()) {
            continue;
        }
        let weights: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.1..2.0)).collect();
        let functions = cover
            .iter()
            .map(|s| (0..atoms.pow(s.len() as u32)).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        return GenCsInstance {
            num_vars: c,
            weights,
            cover,
            functions,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn two_functions_is_plain_cauchy_schwarz() {
        let inst = GenCsInstance {
            num_vars: 2,
            weights: vec![1.0, 0.5],
            cover: vec![vec![0, 1], vec![0, 1]],
            functions: vec![vec![1.0, 2.0, -1.0, 0.5], vec![0.5, -1.0, 2.0, 1.0]],
        };
        let rep = generalized_cs_check(&inst, None).unwrap();
        // <h1,h2> = 1·0.5 + 0.5·(2·-1) + 0.5·(-1·2) + 0.25·(0.5·1)
        let inner: f64 = 0.5 - 1.0 - 1.0 + 0.125;
        assert!((rep.lhs - inner.abs()).abs() < 1e-15);
        assert!((rep.rhs_gencs1 - rep.lhs).abs() < 1e-15);
        assert!(rep.rhs_gencs >= rep.lhs);
    }

    #[test]
    fn triangle_cover_of_indicators() {
        // h = indicator of (atom 0, atom 0), three functions on a triangle.
        let h = vec![1.0, 0.0, 0.0, 0.0];
        let inst = GenCsInstance {
            num_vars: 3,
            weights: vec![1.0, 1.0],
            cover: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            functions: vec![h.clone(), h.clone(), h],
        };
        let rep = generalized_cs_check(&inst, None).unwrap();
        assert_eq!(rep.lhs, 1.0);
        assert_eq!(rep.rhs_gencs, 1.0);
        assert_eq!(rep.rhs_gencs1, 1.0);
    }

    #[test]
    fn rejects_bad_cover() {
        let inst = GenCsInstance {
            num_vars: 2,
            weights: vec![1.0],
            cover: vec![vec![0, 1], vec![0]],
            functions: vec![vec![1.0], vec![1.0]],
        };
        assert!(generalized_cs_check(&inst, None).is_err());
    }

    #[test]
    fn random_instances_satisfy_both_inequalities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let inst = random_gencs_instance(&mut rng, 5, 4);
            let rep = generalized_cs_check(&inst, None).unwrap();
            assert!(rep.slack() >= -1e-12, "{rep:?}");
        }
    }
}
