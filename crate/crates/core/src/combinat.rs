//! Small exact combinatorics shared by the tensor kernels and the cumulant
//! machinery: factorials, binomials, orbit sizes of multi-indices, sub-multiset
//! splits and set-partition enumeration.

/// `n!` as a float. Exact for `n <= 22`, correctly rounded up to 170.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Run-length encoding of a sorted slice: `(value, multiplicity)` pairs.
pub fn multiplicities(sorted: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((last, m)) if *last == v => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Number of distinct orderings of a multiset given as a sorted slice,
/// `len! / prod(alpha_j!)`.
pub fn orbit_size(sorted: &[u32]) -> f64 {
    let denom: f64 = multiplicities(sorted)
        .iter()
        .map(|&(_, m)| factorial(m))
        .product();
    factorial(sorted.len()) / denom
}

/// All distinct ways of splitting a sorted multiset into a sub-multiset of
/// size `r` and its complement. Each returned pair is `(chosen, rest)`, both
/// sorted. Distinct means distinct as multisets, so `[1, 1]` split with
/// `r = 1` yields exactly one pair.
pub fn split_multiset(sorted: &[u32], r: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    if r > sorted.len() {
        return Vec::new();
    }
    let runs = multiplicities(sorted);
    let mut out = Vec::new();
    let mut take = vec![0usize; runs.len()];
    split_rec(&runs, 0, r, &mut take, &mut out);
    out
}

fn split_rec(
    runs: &[(u32, usize)],
    pos: usize,
    remaining: usize,
    take: &mut Vec<usize>,
    out: &mut Vec<(Vec<u32>, Vec<u32>)>,
) {
    if pos == runs.len() {
        if remaining == 0 {
            let mut chosen = Vec::new();
            let mut rest = Vec::new();
            for (&(v, m), &t) in runs.iter().zip(take.iter()) {
                chosen.extend(std::iter::repeat(v).take(t));
                rest.extend(std::iter::repeat(v).take(m - t));
            }
            out.push((chosen, rest));
        }
        return;
    }
    let tail: usize = runs[pos + 1..].iter().map(|&(_, m)| m).sum();
    let (_, m) = runs[pos];
    let lo = remaining.saturating_sub(tail);
    let hi = m.min(remaining);
    for t in lo..=hi {
        take[pos] = t;
        split_rec(runs, pos + 1, remaining - t, take, out);
    }
    take[pos] = 0;
}

/// Merge two sorted slices into one sorted vector.
pub fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// All sorted multi-indices of length `order` drawn from `values` (sorted,
/// distinct), i.e. multisets with repetition.
pub fn sorted_tuples(values: &[u32], order: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(order);
    tuples_rec(values, 0, order, &mut cur, &mut out);
    out
}

fn tuples_rec(values: &[u32], start: usize, order: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == order {
        out.push(cur.clone());
        return;
    }
    for i in start..values.len() {
        cur.push(values[i]);
        tuples_rec(values, i, order, cur, out);
        cur.pop();
    }
}

/// Every set partition of `{0, .., n-1}`, as lists of blocks. Blocks are in
/// order of their smallest element. Enumerated through restricted growth
/// strings, so the count is the Bell number `B(n)`.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut partition = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            partition[b].push(i);
        }
        out.push(partition);

        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in rgs.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}
