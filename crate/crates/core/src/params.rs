use std::fmt;

use crate::error::{Error, Result};

/// The fixed parameters `(q, n, d, w)` of a constant-weight code, together
/// with the derived threshold `t = ceil((2w - d + 1) / 2)`.
///
/// `t` is the largest support intersection two code words may share while
/// still being at distance at least `d` from each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u32,
    n: usize,
    d: usize,
    w: usize,
    t: usize,
}

impl CodeParams {
    pub fn new(q: u32, n: usize, d: usize, w: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParams(format!("q = {q}, need q >= 2")));
        }
        if w < 1 || w > n {
            return Err(Error::InvalidParams(format!("w = {w}, need 1 <= w <= n = {n}")));
        }
        let t = threshold(d, w)?;
        Ok(CodeParams { q, n, d, w, t })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d_is_even(&self) -> bool {
        self.d % 2 == 0
    }

    /// Modulus of the sum constraints, `q - 1`.
    pub fn modulus(&self) -> u32 {
        self.q - 1
    }

    /// Same `(q, d, w)` at a different length.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        CodeParams::new(self.q, n, self.d, self.w)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} n={} d={} w={}", self.q, self.n, self.d, self.w)
    }
}

/// `ceil((2w - d + 1) / 2)` for `1 <= d <= 2w`.
pub(crate) fn threshold(d: usize, w: usize) -> Result<usize> {
    if d < 1 || d > 2 * w {
        return Err(Error::InvalidParams(format!("d = {d}, need 1 <= d <= 2w = {}", 2 * w)));
    }
    Ok((2 * w - d + 2) / 2)
}
