//! Codes as matchings in the conflict hypergraph.
//!
//! Each candidate word `x` is an edge made of the `(t+1)`-subsets of its
//! support (V1 vertices) and the `t`-subsets of its `(index, value)` pairs
//! (V2 vertices). Two words may share a code only if their edges are
//! disjoint. The hypergraph is never built; vertices are hashed into a
//! [`ConflictIndex`] as words are accepted.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{johnson_bound, main_term, BoundValue};
use crate::code::{Code, CodeWord};
use crate::constraints::{enumerate_x, sample_b, BAssignment, CandidateFamily, DEFAULT_SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::io::write_code;
use crate::params::CodeParams;

/// A `(t+1)`-subset of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct V1Key(pub Vec<usize>);

/// `t` pairs `(index, value)` with distinct indices, sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct V2Key(pub Vec<(usize, u32)>);

pub fn v1_keys(x: &CodeWord, t: usize) -> Vec<V1Key> {
    x.support().into_iter().combinations(t + 1).map(V1Key).collect()
}

pub fn v2_keys(x: &CodeWord, t: usize) -> Vec<V2Key> {
    x.pairs().into_iter().combinations(t).map(V2Key).collect()
}

/// The vertex set of one word's edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeKeys {
    pub v1: Vec<V1Key>,
    pub v2: Vec<V2Key>,
}

impl EdgeKeys {
    pub fn of(x: &CodeWord, t: usize) -> Self {
        EdgeKeys { v1: v1_keys(x, t), v2: v2_keys(x, t) }
    }

    pub fn intersects(&self, other: &EdgeKeys) -> bool {
        self.v1.iter().any(|k| other.v1.contains(k)) || self.v2.iter().any(|k| other.v2.contains(k))
    }
}

/// Occupied hypergraph vertices of a partial matching.
#[derive(Debug, Clone, Default)]
pub struct ConflictIndex {
    used_v1: HashSet<V1Key>,
    used_v2: HashSet<V2Key>,
}

impl ConflictIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn admissible(&self, edge: &EdgeKeys) -> bool {
        !edge.v1.iter().any(|k| self.used_v1.contains(k)) && !edge.v2.iter().any(|k| self.used_v2.contains(k))
    }

    pub fn insert(&mut self, edge: &EdgeKeys) {
        self.used_v1.extend(edge.v1.iter().cloned());
        self.used_v2.extend(edge.v2.iter().cloned());
    }
}

fn edges_of(family: &CandidateFamily) -> Vec<EdgeKeys> {
    let t = family.params().t();
    family.words().par_iter().map(|x| EdgeKeys::of(x, t)).collect()
}

/// Random greedy maximal matching over `edges`, visiting edges in a
/// uniformly random order drawn from `ChaCha8Rng::seed_from_u64(seed)`.
/// Returns the accepted indices in acceptance order.
fn greedy_indices(edges: &[EdgeKeys], seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut index = ConflictIndex::new();
    let mut accepted = Vec::new();
    for i in order {
        if index.admissible(&edges[i]) {
            index.insert(&edges[i]);
            accepted.push(i);
        }
    }
    accepted
}

fn code_from_indices(family: &CandidateFamily, indices: &[usize]) -> Code {
    let mut words: Vec<CodeWord> = indices.iter().map(|&i| family.words()[i].clone()).collect();
    words.sort_by(|a, b| a.canonical_cmp(b));
    Code::new(*family.params(), words).expect("candidate words are distinct")
}

/// One randomized greedy pass: a maximal matching of the hypergraph on `X`,
/// returned as a code in canonical word order.
pub fn greedy_matching(family: &CandidateFamily, seed: u64) -> Code {
    let edges = edges_of(family);
    code_from_indices(family, &greedy_indices(&edges, seed))
}

/// (1,2)-swaps until none applies: drop one matched edge whose removal
/// frees two disjoint edges that conflict with nothing else.
fn improve_by_swaps(edges: &[EdgeKeys], mut selected: Vec<usize>) -> Vec<usize> {
    loop {
        selected.sort_unstable();
        let mut owner_v1: HashMap<&V1Key, usize> = HashMap::new();
        let mut owner_v2: HashMap<&V2Key, usize> = HashMap::new();
        for &s in &selected {
            for k in &edges[s].v1 {
                owner_v1.insert(k, s);
            }
            for k in &edges[s].v2 {
                owner_v2.insert(k, s);
            }
        }
        let in_code: HashSet<usize> = selected.iter().copied().collect();

        // words blocked by exactly one matched edge, grouped by that edge
        let mut freed_by: HashMap<usize, Vec<usize>> = HashMap::new();
        for (y, edge) in edges.iter().enumerate() {
            if in_code.contains(&y) {
                continue;
            }
            let owners: HashSet<usize> = edge
                .v1
                .iter()
                .filter_map(|k| owner_v1.get(k))
                .chain(edge.v2.iter().filter_map(|k| owner_v2.get(k)))
                .copied()
                .collect();
            if owners.len() == 1 {
                let c = *owners.iter().next().unwrap();
                freed_by.entry(c).or_default().push(y);
            }
        }

        let swap = selected.iter().find_map(|&c| {
            let cands = freed_by.get(&c)?;
            cands
                .iter()
                .tuple_combinations()
                .find(|(a, b)| !edges[**a].intersects(&edges[**b]))
                .map(|(a, b)| (c, *a, *b))
        });
        match swap {
            Some((c, a, b)) => {
                selected.retain(|&s| s != c);
                selected.push(a);
                selected.push(b);
            }
            None => return selected,
        }
    }
}

/// Seed of restart `r` under master seed `seed`: the SplitMix64 output
/// function applied to `seed + (r + 1) * 0x9E3779B97F4A7C15` (wrapping).
pub fn child_seed(seed: u64, restart: usize) -> u64 {
    let mut z = seed.wrapping_add((restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct BuildReport {
    pub code: Code,
    /// Constraint values used; `None` in odd-distance mode.
    pub b: Option<BAssignment>,
    pub seed: u64,
    pub x_size: usize,
    pub restarts_run: usize,
    pub best_restart: usize,
    /// The size reference: the main term for even `d`, the odd Johnson bound for odd `d`.
    pub target: BoundValue,
    /// `|code| / target`.
    pub ratio_to_main_term: BigRational,
    pub elapsed: Duration,
}

fn run_restarts(
    family: &CandidateFamily,
    seed: u64,
    restarts: usize,
    improve: bool,
) -> Result<(Code, usize)> {
    if restarts == 0 {
        return Err(Error::InvalidParams("need at least one restart".into()));
    }
    let edges = edges_of(family);
    let runs: Vec<(usize, Code, String)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let code = code_from_indices(family, &greedy_indices(&edges, child_seed(seed, r)));
            let text = write_code(&code);
            (r, code, text)
        })
        .collect();
    // largest code, then smallest serialization, then lowest restart index
    let (best_restart, best, _) = runs
        .into_iter()
        .min_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.2.cmp(&b.2)).then(a.0.cmp(&b.0)))
        .expect("restarts > 0");
    if !improve {
        return Ok((best, best_restart));
    }
    let position: HashMap<&CodeWord, usize> =
        family.words().iter().enumerate().map(|(i, w)| (w, i)).collect();
    let selected: Vec<usize> = best.words().iter().map(|w| position[w]).collect();
    let improved = improve_by_swaps(&edges, selected);
    Ok((code_from_indices(family, &improved), best_restart))
}

fn ratio(size: usize, target: &BoundValue) -> BigRational {
    if target.numerator == num_bigint::BigUint::default() {
        return BigRational::from_integer(BigInt::default());
    }
    BigRational::new(
        BigInt::from(size) * BigInt::from(target.denominator.clone()),
        BigInt::from(target.numerator.clone()),
    )
}

/// Even-distance construction: sample the constraint values from `seed`,
/// enumerate the candidate family, and keep the best of `restarts` greedy
/// matchings (restart `r` uses [`child_seed`]`(seed, r)`).
pub fn construct_code(p: &CodeParams, seed: u64, restarts: usize, improve: bool) -> Result<BuildReport> {
    let start = Instant::now();
    let target = main_term(p)?;
    let b = sample_b(p, seed);
    let family = enumerate_x(&b, DEFAULT_SUPPORT_CAP)?;
    let (code, best_restart) = run_restarts(&family, seed, restarts, improve)?;
    Ok(BuildReport {
        ratio_to_main_term: ratio(code.len(), &target),
        code,
        b: Some(b),
        seed,
        x_size: family.len(),
        restarts_run: restarts,
        best_restart,
        target,
        elapsed: start.elapsed(),
    })
}

/// Cap on the candidate count in odd-distance mode.
pub const ODD_WORD_CAP: u128 = 20_000_000;

/// Odd-distance construction: every weight-`w` word is a candidate and
/// there are no sum constraints.
pub fn construct_code_odd(p: &CodeParams, seed: u64, restarts: usize, improve: bool) -> Result<BuildReport> {
    let start = Instant::now();
    if p.d_is_even() {
        return Err(Error::Parity("an odd"));
    }
    let target = johnson_bound(p);
    let family = CandidateFamily::unconstrained(p, ODD_WORD_CAP)?;
    let (code, best_restart) = run_restarts(&family, seed, restarts, improve)?;
    Ok(BuildReport {
        ratio_to_main_term: ratio(code.len(), &target),
        code,
        b: None,
        seed,
        x_size: family.len(),
        restarts_run: restarts,
        best_restart,
        target,
        elapsed: start.elapsed(),
    })
}

/// Dispatches on the parity of `d`.
pub fn construct(p: &CodeParams, seed: u64, restarts: usize, improve: bool) -> Result<BuildReport> {
    if p.d_is_even() {
        construct_code(p, seed, restarts, improve)
    } else {
        construct_code_odd(p, seed, restarts, improve)
    }
}
