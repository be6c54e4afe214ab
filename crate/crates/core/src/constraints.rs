//! Modular sum constraints on `t`-subsets of a word's support.
//!
//! Every `t`-subset `T` of `[n]` carries a value `B_T` in `{1, .., q-1}`, and
//! a candidate word `x` with `T` inside its support must satisfy
//! `sum_{i in T} x_i = B_T (mod q-1)`. Values in `{1, .., q-1}` are
//! identified with residues mod `q-1` by `v -> v mod (q-1)`, so `q-1`
//! stands for residue 0. With `q = 2` the modulus is 1 and every constraint
//! holds.

use itertools::Itertools;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::CodeWord;
use crate::combinatorics::{binomial_u128, SubsetRanker, ValueVectors};
use crate::error::{Error, Result};
use crate::params::CodeParams;

/// `v mod (q-1)`.
pub fn residue(v: u64, q: u32) -> u32 {
    (v % u64::from(q - 1)) as u32
}

/// The value in `{1, .., q-1}` representing residue `r`.
fn representative(r: u32, q: u32) -> u32 {
    if r == 0 {
        q - 1
    } else {
        r
    }
}

/// A value `B_T` for every `t`-subset `T` of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BAssignment {
    params: CodeParams,
    ranker: SubsetRanker,
    // indexed by colex rank of T
    values: Vec<u32>,
    seed: Option<u64>,
}

impl BAssignment {
    /// Builds an assignment from a function of the (sorted, 0-based) subset.
    pub fn from_fn(params: &CodeParams, mut value: impl FnMut(&[usize]) -> u32) -> Result<Self> {
        let ranker = SubsetRanker::new(params.n(), params.t());
        let mut values = vec![0; ranker.count()];
        for subset in (0..params.n()).combinations(params.t()) {
            let v = value(&subset);
            if v < 1 || v >= params.q() {
                return Err(Error::InvalidParams(format!("B value {v} outside 1..={}", params.q() - 1)));
            }
            values[ranker.rank(&subset)] = v;
        }
        Ok(BAssignment { params: *params, ranker, values, seed: None })
    }

    /// Independent uniform values in `{1, .., q-1}`, one per `t`-subset,
    /// drawn in lexicographic subset order from `ChaCha8Rng::seed_from_u64(seed)`.
    pub fn sample(params: &CodeParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modulus = params.modulus();
        let mut b = BAssignment::from_fn(params, |_| rng.gen_range(1..=modulus))
            .expect("sampled values are in range");
        b.seed = Some(seed);
        b
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `B_T` for a sorted `t`-subset.
    pub fn value(&self, subset: &[usize]) -> u32 {
        self.values[self.ranker.rank(subset)]
    }

    pub fn set_value(&mut self, subset: &[usize], value: u32) -> Result<()> {
        if subset.len() != self.params.t() || subset.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidParams("subset must be sorted with t distinct indices".into()));
        }
        if subset.last().is_some_and(|&i| i >= self.params.n()) {
            return Err(Error::InvalidParams("subset index out of range".into()));
        }
        if value < 1 || value >= self.params.q() {
            return Err(Error::InvalidParams(format!("B value {value} out of range")));
        }
        let r = self.ranker.rank(subset);
        self.values[r] = value;
        self.seed = None;
        Ok(())
    }

    /// `(T, B_T)` in lexicographic order of `T`.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, u32)> + '_ {
        (0..self.params.n()).combinations(self.params.t()).map(move |subset| {
            let v = self.value(&subset);
            (subset, v)
        })
    }

    /// Raw table in colex order; used by exhaustive enumeration over all assignments.
    pub(crate) fn values_mut(&mut self) -> &mut [u32] {
        self.seed = None;
        &mut self.values
    }

    pub(crate) fn rank(&self, subset: &[usize]) -> usize {
        self.ranker.rank(subset)
    }

    fn residue_of(&self, subset: &[usize]) -> u32 {
        residue(u64::from(self.value(subset)), self.params.q())
    }

    fn holds(&self, word: &[u32], subset: &[usize]) -> bool {
        let sum: u64 = subset.iter().map(|&i| u64::from(word[i])).sum();
        residue(sum, self.params.q()) == self.residue_of(subset)
    }
}

/// `sample_B`: see [`BAssignment::sample`].
pub fn sample_b(params: &CodeParams, seed: u64) -> BAssignment {
    BAssignment::sample(params, seed)
}

/// Whether `x` satisfies the constraint of every `t`-subset of its support.
pub fn check_constraints(x: &CodeWord, b: &BAssignment) -> Result<bool> {
    let p = b.params();
    if x.len() != p.n() {
        return Err(Error::LengthMismatch { expected: p.n(), found: x.len() });
    }
    if x.weight() != p.w() {
        return Err(Error::WeightMismatch { expected: p.w(), found: x.weight() });
    }
    Ok(satisfies_all(x.entries(), &x.support(), b))
}

fn satisfies_all(word: &[u32], support: &[usize], b: &BAssignment) -> bool {
    support.iter().copied().combinations(b.params().t()).all(|subset| b.holds(word, &subset))
}

/// All solutions of `a * z = c (mod m)` with `0 <= z < m`, ascending.
fn solve_linear_congruence(a: u64, c: u64, m: u64) -> Vec<u64> {
    let a = a % m;
    let c = c % m;
    let g = a.gcd(&m);
    if c % g != 0 {
        return Vec::new();
    }
    let step = m / g;
    let base = if step == 1 {
        0
    } else {
        let inv = (a / g) as i64;
        let ext = inv.extended_gcd(&(step as i64));
        let inv = ext.x.rem_euclid(step as i64) as u64;
        ((c / g) % step) * inv % step
    };
    (0..g).map(|k| base + k * step).collect()
}

/// The words with support exactly `support` that satisfy all `C(w, t)`
/// constraints inside it, in lexicographic order of their values.
///
/// With `w = t` there is a single constraint and `(q-1)^(t-1)` solutions.
/// With `w > t` the constraints fix every difference `x_i - x_j`, leaving a
/// congruence `t * x = c (mod q-1)` with `gcd(t, q-1)` or zero solutions.
pub fn words_on_support(support: &[usize], b: &BAssignment) -> Vec<CodeWord> {
    let p = b.params();
    let (q, n, t, w) = (p.q(), p.n(), p.t(), support.len());
    let m = p.modulus();
    debug_assert_eq!(w, p.w());

    let build = |values: &[u32]| CodeWord::from_pairs(n, support.iter().copied().zip(values.iter().copied()));

    if w == t {
        let target = u64::from(b.residue_of(support));
        return ValueVectors::new(w - 1, m)
            .map(|mut free| {
                let partial: u64 = free.iter().map(|&v| u64::from(v)).sum();
                let last = (target + u64::from(m) - partial % u64::from(m)) % u64::from(m);
                free.push(representative(last as u32, q));
                build(&free)
            })
            .collect();
    }

    // offsets[k] = x_{s_k} - x_{s_0} (mod m), read off two subsets that
    // differ only by swapping s_0 for s_k
    let m64 = u64::from(m);
    let mut offsets = vec![0u64; w];
    for k in 1..w {
        let rest: Vec<usize> = support
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != 0 && j != k)
            .map(|(_, &i)| i)
            .take(t - 1)
            .collect();
        let with = |extra: usize| {
            let mut s = rest.clone();
            s.push(extra);
            s.sort_unstable();
            u64::from(b.residue_of(&s))
        };
        offsets[k] = (with(support[k]) + m64 - with(support[0])) % m64;
    }

    let first: Vec<usize> = support[..t].to_vec();
    let offset_sum: u64 = offsets[..t].iter().sum::<u64>() % m64;
    let c = (u64::from(b.residue_of(&first)) + m64 - offset_sum) % m64;

    let mut out = Vec::new();
    for base in solve_linear_congruence(t as u64, c, m64) {
        let values: Vec<u32> =
            offsets.iter().map(|&o| representative(((base + o) % m64) as u32, q)).collect();
        let word = build(&values);
        if satisfies_all(word.entries(), support, b) {
            out.push(word);
        }
    }
    // same support, so entry order is value order
    out.sort();
    out
}

/// The constrained candidate words `X`: weight `w`, nonzero entries in
/// `{1, .., q-1}`, and every constraint inside the support satisfied.
/// Without a constraint table every weight-`w` word is a candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFamily {
    params: CodeParams,
    b: Option<BAssignment>,
    words: Vec<CodeWord>,
}

impl CandidateFamily {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn b(&self) -> Option<&BAssignment> {
        self.b.as_ref()
    }

    pub fn words(&self) -> &[CodeWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Every weight-`w` word, with no constraints applied.
    pub fn unconstrained(params: &CodeParams, support_cap: u128) -> Result<Self> {
        let words = crate::oracle::enumerate_all_words(params, support_cap)?;
        Ok(CandidateFamily { params: *params, b: None, words })
    }
}

/// Default cap on the number of supports visited by [`enumerate_x`].
pub const DEFAULT_SUPPORT_CAP: u128 = 50_000_000;

fn check_cap(what: &'static str, size: Option<u128>, cap: u128) -> Result<()> {
    match size {
        Some(size) if size <= cap => Ok(()),
        Some(size) => Err(Error::CapExceeded { what, size, cap }),
        None => Err(Error::CapExceeded { what, size: u128::MAX, cap }),
    }
}

/// Builds `X` with the per-support solver, visiting supports in
/// lexicographic order.
pub fn enumerate_x(b: &BAssignment, support_cap: u128) -> Result<CandidateFamily> {
    let p = b.params();
    check_cap("support enumeration", binomial_u128(p.n() as u64, p.w() as u64), support_cap)?;
    let words = (0..p.n())
        .combinations(p.w())
        .flat_map(|support| words_on_support(&support, b))
        .collect();
    Ok(CandidateFamily { params: *p, b: Some(b.clone()), words })
}

/// Builds `X` by filtering every weight-`w` word through
/// [`check_constraints`]. Slow; kept as a cross-check of [`enumerate_x`].
pub fn enumerate_x_by_filter(b: &BAssignment, word_cap: u128) -> Result<CandidateFamily> {
    let p = b.params();
    let words = crate::oracle::enumerate_all_words(p, word_cap)?
        .into_iter()
        .filter(|x| check_constraints(x, b).unwrap_or(false))
        .collect();
    Ok(CandidateFamily { params: *p, b: Some(b.clone()), words })
}

/// One value assignment on `T'` and the unique entry on `T \ T'` that
/// completes it to a solution of the constraint on `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizedPattern {
    pub pattern: Vec<u32>,
    pub completion: u32,
}

/// For each of the `(q-1)^(t-1)` assignments on the `(t-1)`-subset
/// `sub` of `subset`, the forced value on the remaining index.
pub fn realizable_patterns(subset: &[usize], sub: &[usize], b: &BAssignment) -> Result<Vec<RealizedPattern>> {
    let p = b.params();
    if subset.len() != p.t() || sub.len() + 1 != p.t() || !sub.iter().all(|i| subset.contains(i)) {
        return Err(Error::InvalidParams("need a (t-1)-subset of a t-subset".into()));
    }
    let m = u64::from(p.modulus());
    let target = u64::from(b.residue_of(subset));
    Ok(ValueVectors::new(sub.len(), p.modulus())
        .map(|pattern| {
            let partial: u64 = pattern.iter().map(|&v| u64::from(v)).sum::<u64>() % m;
            let completion = representative(((target + m - partial) % m) as u32, p.q());
            RealizedPattern { pattern, completion }
        })
        .collect())
}
