//! Small counting helpers shared by the enumeration code.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` in `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `C(n, k)` as an arbitrary-precision integer (multiplicative formula).
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Colexicographic ranking of `k`-subsets of `{0, .., n-1}`.
///
/// Used as a dense index for per-subset tables such as the constraint values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    // table[m][j] = C(m, j) for m <= n, j <= k
    table: Vec<Vec<usize>>,
}

impl SubsetRanker {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![vec![0usize; k + 1]; n + 1];
        for m in 0..=n {
            table[m][0] = 1;
            for j in 1..=k.min(m) {
                table[m][j] = table[m - 1][j - 1].saturating_add(table[m - 1][j]);
            }
        }
        SubsetRanker { n, k, table }
    }

    /// Number of `k`-subsets.
    pub fn count(&self) -> usize {
        self.table[self.n][self.k]
    }

    /// Rank of a sorted `k`-subset.
    pub fn rank(&self, subset: &[usize]) -> usize {
        debug_assert_eq!(subset.len(), self.k);
        subset
            .iter()
            .enumerate()
            .map(|(j, &i)| self.table[i][j + 1])
            .sum()
    }
}

/// Odometer over all vectors in `{1, .., m}^len`, in lexicographic order.
/// Yields exactly one empty vector when `len == 0`.
pub struct ValueVectors {
    current: Vec<u32>,
    max: u32,
    done: bool,
}

impl ValueVectors {
    pub fn new(len: usize, max: u32) -> Self {
        ValueVectors { current: vec![1; len], max, done: max == 0 && len > 0 }
    }
}

impl Iterator for ValueVectors {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut pos = self.current.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.current[pos] < self.max {
                self.current[pos] += 1;
                break;
            }
            self.current[pos] = 1;
        }
        Some(out)
    }
}
