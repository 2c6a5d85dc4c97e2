//! Exact rational scalars.

use alloc::string::String;
use alloc::string::ToString;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The scalar type of the `VectQ` base category. All arithmetic in this
/// crate is exact; there is no floating-point mode.
pub type Q = num_rational::BigRational;

/// Rational from a machine integer.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `p/q` from machine integers. Panics on `q == 0`.
pub fn q_ratio(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

/// Canonical `"p/q"` rendering; integers print without the denominator.
pub fn q_to_string(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = x.numer().to_string();
        s.push('/');
        s.push_str(&x.denom().to_string());
        s
    }
}

/// Parse `"p"` or `"p/q"`; the inverse of [`q_to_string`].
pub fn q_from_str(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Q::new(p, q))
            }
        }
    }
}

pub fn q_is_negative(x: &Q) -> bool {
    x.numer().is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for (p, q) in [(1i64, 2i64), (-3, 7), (0, 1), (5, 1), (-12, 5)] {
            let x = q_ratio(p, q);
            assert_eq!(q_from_str(&q_to_string(&x)).unwrap(), x);
        }
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(q_from_str("1/0").is_none());
    }
}
