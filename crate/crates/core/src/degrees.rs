//! Degrees of V2 vertices in the conflict hypergraph.
//!
//! For a tuple `v` of `t` pairs `(index, value)`, its degree is the number
//! of candidate words containing all of `v`. Averaged over the random
//! constraint values (with the constraint on `v`'s own index set left out)
//! this is `E[D] = (q-1)^(w - t - C(w,t) + 1) * C(n-t, w-t)`.

use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::CodeWord;
use crate::combinatorics::{binomial_big, binomial_u128, ValueVectors};
use crate::constraints::{enumerate_x, residue, sample_b, BAssignment, CandidateFamily, DEFAULT_SUPPORT_CAP};
use crate::error::{Error, Result};
use crate::matching::{child_seed, v1_keys, v2_keys, V1Key, V2Key};
use crate::params::CodeParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeMode {
    ExactOverB,
    FixedBCensus,
    MonteCarlo,
}

impl fmt::Display for DegreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegreeMode::ExactOverB => "exact-over-B",
            DegreeMode::FixedBCensus => "fixed-B-census",
            DegreeMode::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport {
    pub params: CodeParams,
    pub mode: DegreeMode,
    pub expected: BigRational,
    /// `None` when nothing was observed.
    pub observed_min: Option<BigRational>,
    pub observed_mean: Option<BigRational>,
    pub observed_max: Option<BigRational>,
    /// Standard error of `observed_mean`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    /// Largest V1 degree, census mode only.
    pub v1_max: Option<u64>,
    pub v1_mean: Option<BigRational>,
}

pub const DEGREES_CSV_HEADER: &str = "n,q,d,w,t,mode,samples,expected,obs_min,obs_mean,obs_max,stderr,seed";

fn fmt_rational(r: &Option<BigRational>) -> String {
    match r {
        None => String::new(),
        Some(r) if r.is_integer() => r.numer().to_string(),
        Some(r) => format!("{}/{}", r.numer(), r.denom()),
    }
}

impl DegreeReport {
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.6},{}",
            p.n(),
            p.q(),
            p.d(),
            p.w(),
            p.t(),
            self.mode,
            self.samples,
            fmt_rational(&Some(self.expected.clone())),
            fmt_rational(&self.observed_min),
            fmt_rational(&self.observed_mean),
            fmt_rational(&self.observed_max),
            self.stderr,
            self.seed.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

/// `(q-1)^(w - t - C(w,t) + 1) * C(n-t, w-t)`; the exponent may be negative.
pub fn expected_degree(p: &CodeParams) -> Result<BigRational> {
    if !p.d_is_even() {
        return Err(Error::Parity("an even"));
    }
    let (w, t) = (p.w() as i64, p.t() as i64);
    let c_wt = binomial_u128(w as u64, t as u64).and_then(|c| i64::try_from(c).ok());
    let c_wt = c_wt.ok_or_else(|| Error::InvalidParams("C(w, t) too large".into()))?;
    let exponent = w - t - c_wt + 1;
    let count = BigInt::from(binomial_big((p.n() - p.t()) as u64, (p.w() - p.t()) as u64));
    let base = BigRational::from_integer(BigInt::from(p.modulus()));
    let power = num_traits::pow::Pow::pow(base, exponent as i32);
    Ok(power * count)
}

fn check_tuple(p: &CodeParams, v: &V2Key) -> Result<()> {
    let idx: Vec<usize> = v.0.iter().map(|&(i, _)| i).collect();
    if idx.len() != p.t()
        || idx.windows(2).any(|w| w[0] >= w[1])
        || idx.last().is_some_and(|&i| i >= p.n())
        || v.0.iter().any(|&(_, x)| x < 1 || x >= p.q())
    {
        return Err(Error::InvalidParams("tuple needs t sorted distinct indices and values in 1..q".into()));
    }
    Ok(())
}

fn contains_tuple(x: &CodeWord, v: &V2Key) -> bool {
    v.0.iter().all(|&(i, value)| x.entries()[i] == value)
}

/// Number of words of `X` whose pairs include every pair of `v`.
pub fn tuple_degree(v: &V2Key, family: &CandidateFamily) -> Result<usize> {
    check_tuple(family.params(), v)?;
    Ok(family.words().iter().filter(|x| contains_tuple(x, v)).count())
}

/// Completions of `v` to a weight-`w` word satisfying every constraint
/// except the one on `v`'s own index set. Equals [`tuple_degree`] when `v`
/// satisfies its own constraint, while `tuple_degree` is 0 otherwise.
pub fn completion_count(v: &V2Key, b: &BAssignment) -> Result<u64> {
    let p = b.params();
    check_tuple(p, v)?;
    let own: Vec<usize> = v.0.iter().map(|&(i, _)| i).collect();
    let rest: Vec<usize> = (0..p.n()).filter(|i| !own.contains(i)).collect();
    let m = u64::from(p.modulus());
    let mut count = 0;
    let mut word = vec![0u32; p.n()];
    for &(i, value) in &v.0 {
        word[i] = value;
    }
    for extra in rest.iter().copied().combinations(p.w() - p.t()) {
        let mut support: Vec<usize> = own.iter().chain(&extra).copied().collect();
        support.sort_unstable();
        let subsets: Vec<Vec<usize>> =
            support.iter().copied().combinations(p.t()).filter(|s| *s != own).collect();
        for values in ValueVectors::new(extra.len(), p.modulus()) {
            for (&i, &x) in extra.iter().zip(&values) {
                word[i] = x;
            }
            let ok = subsets.iter().all(|s| {
                let sum: u64 = s.iter().map(|&i| u64::from(word[i])).sum();
                sum % m == u64::from(b.value(s)) % m
            });
            if ok {
                count += 1;
            }
        }
        for &i in &extra {
            word[i] = 0;
        }
    }
    Ok(count)
}

/// Value in `{1, .., q-1}` that makes `v` satisfy its own constraint.
fn consistent_value(p: &CodeParams, v: &V2Key) -> u32 {
    let sum: u64 = v.0.iter().map(|&(_, x)| u64::from(x)).sum();
    match residue(sum, p.q()) {
        0 => p.q() - 1,
        r => r,
    }
}

/// Cap on the number of assignments enumerated by the exact mode.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 1 << 22;

/// Tuple degree of `v` under every constraint table that agrees with `v`
/// on its own index set, summarized exactly.
pub fn exact_degree_over_b(p: &CodeParams, v: &V2Key, cap: u128) -> Result<DegreeReport> {
    let expected = expected_degree(p)?;
    check_tuple(p, v)?;
    let mut b = BAssignment::from_fn(p, |_| 1)?;
    let own: Vec<usize> = v.0.iter().map(|&(i, _)| i).collect();
    b.set_value(&own, consistent_value(p, v))?;
    let own_rank = b.rank(&own);
    let free = b.len() - 1;
    let total = u128::from(p.modulus())
        .checked_pow(free as u32)
        .filter(|&c| c <= cap)
        .ok_or(Error::CapExceeded { what: "constraint assignments", size: u128::MAX, cap })?;

    let mut min = u64::MAX;
    let mut max = 0;
    let mut sum = BigUint::zero();
    let modulus = p.modulus();
    for _ in 0..total {
        let family = enumerate_x(&b, DEFAULT_SUPPORT_CAP)?;
        let deg = tuple_degree(v, &family)? as u64;
        min = min.min(deg);
        max = max.max(deg);
        sum += deg;
        // odometer over every value except the fixed one
        let values = b.values_mut();
        for (r, slot) in values.iter_mut().enumerate() {
            if r == own_rank {
                continue;
            }
            if *slot < modulus {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    let count = BigInt::from(total);
    Ok(DegreeReport {
        params: *p,
        mode: DegreeMode::ExactOverB,
        expected,
        observed_min: Some(BigRational::from_integer(min.into())),
        observed_mean: Some(BigRational::new(BigInt::from(sum), count)),
        observed_max: Some(BigRational::from_integer(max.into())),
        stderr: 0.0,
        samples: total as u64,
        seed: None,
        v1_max: None,
        v1_mean: None,
    })
}

/// Mean of [`tuple_degree`] over all constraint tables agreeing with `v`
/// on its own index set. Equals [`expected_degree`] exactly.
pub fn exact_mean_degree_over_b(p: &CodeParams, v: &V2Key) -> Result<BigRational> {
    let report = exact_degree_over_b(p, v, DEFAULT_ASSIGNMENT_CAP)?;
    Ok(report.observed_mean.expect("at least one assignment"))
}

/// Tuples followed by the Monte Carlo mode: the first `k` tuples in
/// canonical order (index set `{1..t}`, values lexicographic) and `k`
/// tuples drawn with `ChaCha8Rng::seed_from_u64(seed)`.
pub fn tuple_panel(p: &CodeParams, k: usize, seed: u64) -> Vec<V2Key> {
    let first: Vec<usize> = (0..p.t()).collect();
    let mut panel: Vec<V2Key> = ValueVectors::new(p.t(), p.modulus())
        .take(k)
        .map(|vals| V2Key(first.iter().copied().zip(vals).collect()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..k {
        let mut idx = sample(&mut rng, p.n(), p.t()).into_vec();
        idx.sort_unstable();
        let pairs = idx.into_iter().map(|i| (i, rng.gen_range(1..p.q()))).collect();
        panel.push(V2Key(pairs));
    }
    panel
}

pub const PANEL_SIZE: usize = 4;

fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Draws `samples` independent constraint tables (sample `s` uses
/// [`child_seed`]`(seed, s)`) and records the degree of each panel tuple,
/// excluding the tuple's own constraint. The standard error is taken over
/// the per-sample panel means.
pub fn degree_concentration_mc(p: &CodeParams, samples: u64, seed: u64) -> Result<DegreeReport> {
    let expected = expected_degree(p)?;
    let panel = tuple_panel(p, PANEL_SIZE, seed);
    let mut report = DegreeReport {
        params: *p,
        mode: DegreeMode::MonteCarlo,
        expected,
        observed_min: None,
        observed_mean: None,
        observed_max: None,
        stderr: 0.0,
        samples,
        seed: Some(seed),
        v1_max: None,
        v1_mean: None,
    };
    if samples == 0 {
        return Ok(report);
    }
    let per_sample: Vec<Vec<u64>> = (0..samples)
        .map(|s| {
            let b = sample_b(p, child_seed(seed, s as usize));
            panel.iter().map(|v| completion_count(v, &b)).collect::<Result<Vec<u64>>>()
        })
        .collect::<Result<_>>()?;
    let all: Vec<u64> = per_sample.iter().flatten().copied().collect();
    let total: u64 = all.iter().sum();
    let panel_means: Vec<f64> =
        per_sample.iter().map(|row| row.iter().sum::<u64>() as f64 / row.len() as f64).collect();
    let (_, stderr) = mean_and_stderr(&panel_means);
    report.observed_min = all.iter().min().map(|&m| BigRational::from_integer(m.into()));
    report.observed_max = all.iter().max().map(|&m| BigRational::from_integer(m.into()));
    report.observed_mean = Some(BigRational::new(total.into(), (all.len() as u64).into()));
    report.stderr = stderr;
    Ok(report)
}

/// Coefficient of variation (standard deviation over mean) of each panel
/// tuple's degree across `samples` constraint tables, averaged over the panel.
pub fn relative_spread(p: &CodeParams, samples: u64, seed: u64) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InvalidParams("need at least two samples".into()));
    }
    let panel = tuple_panel(p, PANEL_SIZE, seed);
    let tables: Vec<BAssignment> = (0..samples).map(|s| sample_b(p, child_seed(seed, s as usize))).collect();
    let mut total = 0.0;
    for v in &panel {
        let degrees: Vec<f64> =
            tables.iter().map(|b| completion_count(v, b).map(|c| c as f64)).collect::<Result<_>>()?;
        let (mean, stderr) = mean_and_stderr(&degrees);
        let sd = stderr * (degrees.len() as f64).sqrt();
        total += if mean > 0.0 { sd / mean } else { 0.0 };
    }
    Ok(total / panel.len() as f64)
}

/// Degrees of every V2 vertex (and every V1 vertex) for the constraint
/// table sampled from `seed`.
pub fn degree_census(p: &CodeParams, seed: u64) -> Result<DegreeReport> {
    let expected = expected_degree(p)?;
    let b = sample_b(p, seed);
    let family = enumerate_x(&b, DEFAULT_SUPPORT_CAP)?;
    let mut v2_counts: std::collections::HashMap<V2Key, u64> = Default::default();
    let mut v1_counts: std::collections::HashMap<V1Key, u64> = Default::default();
    for x in family.words() {
        for k in v2_keys(x, p.t()) {
            *v2_counts.entry(k).or_default() += 1;
        }
        for k in v1_keys(x, p.t()) {
            *v1_counts.entry(k).or_default() += 1;
        }
    }
    let v2_total = u128::from(p.modulus()).pow(p.t() as u32 - 1)
        * binomial_u128(p.n() as u64, p.t() as u64).unwrap_or(u128::MAX);
    let v1_total = binomial_u128(p.n() as u64, p.t() as u64 + 1).unwrap_or(u128::MAX);

    let sum: u64 = v2_counts.values().sum();
    let sum_sq: f64 = v2_counts.values().map(|&c| (c as f64).powi(2)).sum();
    let has_zero = (v2_counts.len() as u128) < v2_total;
    let min = if has_zero { 0 } else { v2_counts.values().copied().min().unwrap_or(0) };
    let max = v2_counts.values().copied().max().unwrap_or(0);
    let count = v2_total as f64;
    let mean_f = sum as f64 / count;
    let var = if v2_total > 1 { (sum_sq - count * mean_f * mean_f) / (count - 1.0) } else { 0.0 };

    let v1_sum: u64 = v1_counts.values().sum();
    Ok(DegreeReport {
        params: *p,
        mode: DegreeMode::FixedBCensus,
        expected,
        observed_min: Some(BigRational::from_integer(min.into())),
        observed_mean: Some(BigRational::new(sum.into(), BigInt::from(v2_total))),
        observed_max: Some(BigRational::from_integer(max.into())),
        stderr: (var.max(0.0) / count).sqrt(),
        samples: v2_total.to_u64().unwrap_or(u64::MAX),
        seed: Some(seed),
        v1_max: Some(v1_counts.values().copied().max().unwrap_or(0)),
        v1_mean: (v1_total > 0).then(|| BigRational::new(v1_sum.into(), BigInt::from(v1_total))),
    })
}
