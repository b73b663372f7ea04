//! Partition helpers shared by the monomial and power-sum bases.

/// A partition: weakly decreasing positive parts.
pub type Partition = Vec<u32>;

/// Sort decreasing and drop zeros.
pub fn normalize(mut v: Vec<u32>) -> Partition {
    v.retain(|&x| x > 0);
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

pub fn weight(p: &[u32]) -> u32 {
    p.iter().sum()
}

/// All partitions of `k` with at most `max_len` parts, in decreasing lexicographic order.
pub fn partitions_of(k: u32, max_len: usize) -> Vec<Partition> {
    fn go(rem: u32, cap: u32, len_left: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if len_left == 0 {
            return;
        }
        for part in (1..=cap.min(rem)).rev() {
            cur.push(part);
            go(rem - part, part, len_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, max_len, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Order of the stabiliser of `λ` padded with zeros to length `n` in `S_n`.
pub fn stab_size(lambda: &[u32], n: usize) -> u128 {
    debug_assert!(lambda.len() <= n);
    let mut total = factorial(n - lambda.len());
    let mut i = 0;
    while i < lambda.len() {
        let mut j = i;
        while j < lambda.len() && lambda[j] == lambda[i] {
            j += 1;
        }
        total *= factorial(j - i);
        i = j;
    }
    total
}

/// `λ` padded with zeros to length `n`.
pub fn padded(lambda: &[u32], n: usize) -> Vec<u32> {
    let mut v = lambda.to_vec();
    v.resize(n, 0);
    v
}

/// Calls `f` on every distinct permutation of `v`.
pub fn for_each_distinct_perm(v: &[u32], mut f: impl FnMut(&[u32])) {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    loop {
        f(&cur);
        // Next lexicographic permutation.
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// Every composition of `k` (ordered, positive parts).
pub fn compositions_of(k: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (0..1u64 << (k - 1))
        .map(|mask| {
            let mut out = Vec::new();
            let mut run = 1;
            for b in 0..k - 1 {
                if mask >> b & 1 == 1 {
                    out.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            out.push(run);
            out
        })
        .collect()
}
