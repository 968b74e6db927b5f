//! Subset ranking and assignment indexing.
//!
//! Subsets are sorted `Vec<usize>`. Subsets of a fixed size are ranked in
//! colexicographic order, `rank(S) = Σ_j C(s_j, j + 1)` for `s_0 < s_1 < ...`.
//! Families of subsets of mixed size are ordered by size first, then colex
//! rank.
//!
//! An assignment to a sorted subset `S = (s_0, ..., s_{m-1})` over an alphabet
//! of size `q` is stored row-major: `index = Σ_j value_j · q^(m-1-j)`.

/// Binomial coefficient; saturates at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn colex_rank(subset: &[usize]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(j, &s)| binomial(s, j + 1))
        .sum()
}

pub fn colex_unrank(mut rank: u128, size: usize) -> Vec<usize> {
    let mut out = vec![0; size];
    for j in (0..size).rev() {
        // largest s with C(s, j+1) <= rank
        let mut s = j;
        while binomial(s + 1, j + 1) <= rank {
            s += 1;
        }
        out[j] = s;
        rank -= binomial(s, j + 1);
    }
    out
}

/// Advances `cur` (a sorted subset of `0..n`) to its colex successor.
/// Returns false, leaving `cur` unspecified, after the last subset.
pub fn next_colex(cur: &mut [usize], n: usize) -> bool {
    let size = cur.len();
    for j in 0..size {
        let limit = if j + 1 < size { cur[j + 1] } else { n };
        if cur[j] + 1 < limit {
            cur[j] += 1;
            for (i, slot) in cur.iter_mut().enumerate().take(j) {
                *slot = i;
            }
            return true;
        }
    }
    false
}

/// All `size`-subsets of `0..n` in colex order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, size).min(1 << 20) as usize);
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        if !next_colex(&mut cur, n) {
            return out;
        }
    }
}

/// All subsets of `0..n` of size at most `max_size`, by size then colex rank.
pub fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<usize>> {
    (0..=max_size.min(n))
        .flat_map(|t| subsets_of_size(n, t))
        .collect()
}

/// Number of subsets of size `< size` (the family offset of the first
/// `size`-subset in size-then-colex order).
pub fn family_offset(n: usize, size: usize) -> u128 {
    (0..size).map(|t| binomial(n, t)).sum()
}

pub fn pow(q: usize, e: usize) -> usize {
    q.checked_pow(e as u32).expect("alphabet power overflow")
}

pub fn checked_pow(q: usize, e: usize) -> Option<u128> {
    (q as u128).checked_pow(e as u32)
}

pub fn encode(values: &[usize], q: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * q + v)
}

pub fn decode(mut index: usize, len: usize, q: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % q;
        index /= q;
    }
    out
}

/// Sorted union of two sorted subsets.
pub fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                out.push(x);
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Positions of the elements of `sub` inside the sorted superset `sup`.
/// Panics if `sub` is not contained in `sup`.
pub fn positions(sub: &[usize], sup: &[usize]) -> Vec<usize> {
    sub.iter()
        .map(|x| sup.binary_search(x).expect("not a subset"))
        .collect()
}

pub fn is_subset(sub: &[usize], sup: &[usize]) -> bool {
    sub.iter().all(|x| sup.binary_search(x).is_ok())
}

/// Sorted distinct elements of a tuple.
pub fn underlying_set(tuple: &[usize]) -> Vec<usize> {
    let mut s = tuple.to_vec();
    s.sort_unstable();
    s.dedup();
    s
}
