//! Exact `A_q(n, d, w)` for tiny instances by maximum-clique search.
//!
//! The vertices are all weight-`w` words; two words are adjacent when their
//! distance is at least `d`. A maximum clique is a largest code. The search
//! is a bitset branch and bound with greedy coloring bounds.

use itertools::Itertools;

use crate::code::{Code, CodeWord};
use crate::combinatorics::{binomial_u128, ValueVectors};
use crate::error::{Error, Result};
use crate::params::CodeParams;

pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

/// Cap on the vertex count accepted by [`max_code_exact`].
pub const DEFAULT_WORD_CAP: u128 = 10_000;

/// Number of weight-`w` words, `C(n, w) * (q-1)^w`, if it fits.
pub fn word_count(p: &CodeParams) -> Option<u128> {
    let supports = binomial_u128(p.n() as u64, p.w() as u64)?;
    let values = u128::from(p.modulus()).checked_pow(p.w() as u32)?;
    supports.checked_mul(values)
}

/// All weight-`w` words, ordered by support then by values.
pub fn enumerate_all_words(p: &CodeParams, cap: u128) -> Result<Vec<CodeWord>> {
    let count = word_count(p);
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "word enumeration",
                size: count.unwrap_or(u128::MAX),
                cap,
            })
        }
    }
    let mut words = Vec::with_capacity(count.unwrap_or(0) as usize);
    for support in (0..p.n()).combinations(p.w()) {
        for values in ValueVectors::new(p.w(), p.modulus()) {
            words.push(CodeWord::from_pairs(p.n(), support.iter().copied().zip(values)));
        }
    }
    Ok(words)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Size of the best code found; exact when `exhausted`.
    pub value: usize,
    pub witness: Code,
    pub nodes_explored: u64,
    /// The search finished without hitting the node limit.
    pub exhausted: bool,
}

pub fn max_code_exact(p: &CodeParams, node_limit: u64) -> Result<OracleResult> {
    let words = enumerate_all_words(p, DEFAULT_WORD_CAP)?;
    max_code_among(p, words, node_limit)
}

/// Largest code with minimum distance `d` inside the given word list. The
/// list order is the tie-break order of the search.
pub fn max_code_among(p: &CodeParams, words: Vec<CodeWord>, node_limit: u64) -> Result<OracleResult> {
    let n_vertices = words.len();
    let blocks = n_vertices.div_ceil(64);

    let mut raw_adj = vec![Bitset::new(blocks); n_vertices];
    for i in 0..n_vertices {
        for j in i + 1..n_vertices {
            if words[i].distance_unchecked(&words[j]) >= p.d() {
                raw_adj[i].insert(j);
                raw_adj[j].insert(i);
            }
        }
    }

    // descending degree, ties by input position
    let order: Vec<usize> = (0..n_vertices)
        .sorted_by_key(|&v| (std::cmp::Reverse(raw_adj[v].count()), v))
        .collect();
    let mut position = vec![0; n_vertices];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let adj: Vec<Bitset> = order
        .iter()
        .map(|&old| {
            let mut row = Bitset::new(blocks);
            for nb in raw_adj[old].iter() {
                row.insert(position[nb]);
            }
            row
        })
        .collect();
    drop(raw_adj);

    let mut search = CliqueSearch {
        adj: &adj,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        node_limit,
        aborted: false,
    };
    search.best = search.greedy_clique(n_vertices);
    let mut all = Bitset::new(blocks);
    for v in 0..n_vertices {
        all.insert(v);
    }
    search.expand(all);

    let CliqueSearch { best, nodes, aborted, .. } = search;
    let mut witness_words: Vec<CodeWord> = best.iter().map(|&v| words[order[v]].clone()).collect();
    witness_words.sort_by(|a, b| a.canonical_cmp(b));
    let witness = Code::new(*p, witness_words)?;
    Ok(OracleResult { value: witness.len(), witness, nodes_explored: nodes, exhausted: !aborted })
}

#[derive(Clone, Debug)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(blocks: usize) -> Self {
        Bitset(vec![0; blocks])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
            .map(|(k, &b)| k * 64 + b.trailing_zeros() as usize)
    }

    fn intersect(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn difference_with(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(k * 64 + tz)
            })
        })
    }
}

struct CliqueSearch<'a> {
    adj: &'a [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    node_limit: u64,
    aborted: bool,
}

impl CliqueSearch<'_> {
    fn greedy_clique(&self, n_vertices: usize) -> Vec<usize> {
        let mut clique: Vec<usize> = Vec::new();
        for v in 0..n_vertices {
            if clique.iter().all(|&u| self.adj[u].contains(v)) {
                clique.push(v);
            }
        }
        clique
    }

    /// Greedy sequential coloring of `candidates`; returns vertices with
    /// their color numbers, colors non-decreasing.
    fn color(&self, candidates: &Bitset) -> Vec<(usize, usize)> {
        let mut uncolored = candidates.clone();
        let mut out = Vec::with_capacity(candidates.count());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut open = uncolored.clone();
            while let Some(v) = open.first() {
                uncolored.remove(v);
                open.remove(v);
                open.difference_with(&self.adj[v]);
                out.push((v, color));
            }
        }
        out
    }

    fn expand(&mut self, mut candidates: Bitset) {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
            return;
        }
        let colored = self.color(&candidates);
        for &(v, color) in colored.iter().rev() {
            if self.current.len() + color <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = candidates.intersect(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.remove(v);
            if self.aborted {
                return;
            }
        }
    }
}
