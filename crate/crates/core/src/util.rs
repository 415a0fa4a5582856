use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) fn zero() -> BigRational {
    BigRational::zero()
}

pub(crate) fn one() -> BigRational {
    BigRational::one()
}

pub(crate) fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `base^exp` as a dense table size, rejected when it passes `cap`.
pub(crate) fn checked_cells(base: u32, exp: usize, cap: usize) -> Result<usize> {
    let mut n: u128 = 1;
    for _ in 0..exp {
        n = n.saturating_mul(base as u128);
        if n > cap as u128 {
            return Err(Error::CapExceeded { needed: n, cap });
        }
    }
    Ok(n as usize)
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Mixed-radix digits of `index`, most significant first.
pub(crate) fn decode(mut index: usize, alphabet: u32, len: usize) -> Vec<u32> {
    let a = alphabet as usize;
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % a) as u32;
        index /= a;
    }
    out
}

pub(crate) fn encode(symbols: &[u32], alphabet: u32) -> usize {
    symbols
        .iter()
        .fold(0usize, |acc, &s| acc * alphabet as usize + s as usize)
}

/// Advances `digits` as a base-`alphabet` odometer; false after the last word.
pub(crate) fn advance(digits: &mut [u32], alphabet: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < alphabet {
            return true;
        }
        *d = 0;
    }
    false
}
