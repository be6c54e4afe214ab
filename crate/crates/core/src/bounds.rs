//! Johnson-type upper bounds on `A_q(n, d, w)`, evaluated exactly.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Pow};

use crate::combinatorics::binomial_big;
use crate::error::{Error, Result};
use crate::params::{threshold, CodeParams};

/// A nonnegative rational in lowest terms together with its floor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundValue {
    pub numerator: BigUint,
    pub denominator: BigUint,
    pub floor_value: BigUint,
}

impl BoundValue {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        assert!(denominator != BigUint::default(), "zero denominator");
        let g = numerator.gcd(&denominator);
        let (numerator, denominator) = if g.is_one() || g == BigUint::default() {
            (numerator, denominator)
        } else {
            (numerator / &g, denominator / &g)
        };
        let floor_value = &numerator / &denominator;
        BoundValue { numerator, denominator, floor_value }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}/{})", self.floor_value, self.numerator, self.denominator)
    }
}

/// `t = ceil((2w - d + 1) / 2)`.
pub fn johnson_t(d: usize, w: usize) -> Result<usize> {
    threshold(d, w)
}

/// `(q-1)^t C(n,t) / C(w,t)` for odd `d`, `(q-1)^(t-1) C(n,t) / C(w,t)` for even `d`.
pub fn johnson_bound(p: &CodeParams) -> BoundValue {
    let t = p.t();
    let exponent = if p.d_is_even() { t - 1 } else { t };
    let numerator = Pow::pow(BigUint::from(p.modulus()), exponent as u32) * binomial_big(p.n() as u64, t as u64);
    BoundValue::new(numerator, binomial_big(p.w() as u64, t as u64))
}

/// The even-`d` asymptotic size `(q-1)^(t-1) C(n,t) / C(w,t)`.
pub fn main_term(p: &CodeParams) -> Result<BoundValue> {
    if !p.d_is_even() {
        return Err(Error::Parity("an even"));
    }
    let t = p.t();
    let numerator = Pow::pow(BigUint::from(p.modulus()), (t - 1) as u32) * binomial_big(p.n() as u64, t as u64);
    let value = BoundValue::new(numerator, binomial_big(p.w() as u64, t as u64));
    debug_assert_eq!(value, johnson_bound(p));
    Ok(value)
}
