//! Code words, codes and the definitional checks on them.
//!
//! Coordinates are 0-based in this API. The text formats in [`crate::io`]
//! use 1-based indices.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::CodeParams;

/// A length-`n` vector over `{0, .., q-1}`, stored densely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeWord(Vec<u32>);

impl CodeWord {
    pub fn new(entries: Vec<u32>) -> Self {
        CodeWord(entries)
    }

    /// Word of length `n` with the given `(index, value)` pairs set.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut entries = vec![0; n];
        for (i, v) in pairs {
            entries[i] = v;
        }
        CodeWord(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&e| e != 0).count()
    }

    /// Sorted positions of the nonzero entries.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i).collect()
    }

    /// `(index, value)` for each nonzero entry, by increasing index.
    pub fn pairs(&self) -> Vec<(usize, u32)> {
        self.0.iter().copied().enumerate().filter(|&(_, e)| e != 0).collect()
    }

    /// Order by support (lexicographic on the sorted index list), then by
    /// the values on the support.
    pub fn canonical_cmp(&self, other: &CodeWord) -> Ordering {
        self.support()
            .cmp(&other.support())
            .then_with(|| self.nonzero_values().cmp(&other.nonzero_values()))
    }

    fn nonzero_values(&self) -> Vec<u32> {
        self.0.iter().copied().filter(|&e| e != 0).collect()
    }

    pub(crate) fn distance_unchecked(&self, other: &CodeWord) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for CodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

pub fn weight(x: &CodeWord) -> usize {
    x.weight()
}

pub fn support(x: &CodeWord) -> Vec<usize> {
    x.support()
}

pub fn hamming_distance(x: &CodeWord, y: &CodeWord) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: x.len(), found: y.len() });
    }
    Ok(x.distance_unchecked(y))
}

/// A set of words of length `n`, kept in the order given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    params: CodeParams,
    words: Vec<CodeWord>,
}

impl Code {
    /// Rejects words of the wrong length and repeated words. Entry ranges
    /// and the weight/distance conditions are left to [`verify_code`].
    pub fn new(params: CodeParams, words: Vec<CodeWord>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(words.len());
        for (pos, word) in words.iter().enumerate() {
            if word.len() != params.n() {
                return Err(Error::LengthMismatch { expected: params.n(), found: word.len() });
            }
            if !seen.insert(word) {
                return Err(Error::DuplicateWord(pos));
            }
        }
        Ok(Code { params, words })
    }

    pub fn empty(params: CodeParams) -> Self {
        Code { params, words: Vec::new() }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
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

    pub fn into_words(self) -> Vec<CodeWord> {
        self.words
    }

    /// Sorts the words into canonical (support, values) order.
    pub fn canonicalize(&mut self) {
        self.words.sort_by(|a, b| a.canonical_cmp(b));
    }
}

/// Minimum pairwise distance, `None` for fewer than two words.
pub fn min_distance(code: &Code) -> Option<usize> {
    min_distance_pair(code).map(|(_, _, dist)| dist)
}

fn min_distance_pair(code: &Code) -> Option<(usize, usize, usize)> {
    let words = code.words();
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let dist = words[i].distance_unchecked(&words[j]);
            if best.map_or(true, |(_, _, b)| dist < b) {
                best = Some((i, j, dist));
            }
        }
    }
    best
}

/// The first definitional violation found in a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `word` has an entry outside `0..q` at `coordinate`.
    Range { word: usize, coordinate: usize, value: u32 },
    /// `word` does not have weight `w`.
    Weight { word: usize, weight: usize },
    /// Words `first` and `second` are closer than `d`.
    Distance { first: usize, second: usize, distance: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range { word, coordinate, value } => write!(
                f,
                "word {} has entry {} out of range at index {}",
                word + 1,
                value,
                coordinate + 1
            ),
            Violation::Weight { word, weight } => {
                write!(f, "word {} has weight {}", word + 1, weight)
            }
            Violation::Distance { first, second, distance } => {
                write!(f, "words {} and {} are at distance {}", first + 1, second + 1, distance)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub constant_weight: bool,
    pub min_distance_ok: bool,
    pub entries_in_range: bool,
    pub min_distance: Option<usize>,
    /// Reported in the order range, weight, distance.
    pub witness: Option<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.constant_weight && self.min_distance_ok && self.entries_in_range
    }
}

pub fn verify_code(code: &Code) -> VerificationReport {
    let p = code.params();
    let words = code.words();

    let range_witness = words.iter().enumerate().find_map(|(w_idx, word)| {
        word.entries()
            .iter()
            .position(|&e| e >= p.q())
            .map(|c| Violation::Range { word: w_idx, coordinate: c, value: word.entries()[c] })
    });
    let weight_witness = words
        .iter()
        .enumerate()
        .find(|(_, word)| word.weight() != p.w())
        .map(|(i, word)| Violation::Weight { word: i, weight: word.weight() });
    let closest = min_distance_pair(code);
    let distance_witness = closest.filter(|&(_, _, dist)| dist < p.d()).map(
        |(first, second, distance)| Violation::Distance { first, second, distance },
    );

    VerificationReport {
        constant_weight: weight_witness.is_none(),
        min_distance_ok: distance_witness.is_none(),
        entries_in_range: range_witness.is_none(),
        min_distance: closest.map(|(_, _, dist)| dist),
        witness: range_witness.or(weight_witness).or(distance_witness),
    }
}
