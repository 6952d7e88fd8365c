use num_bigint::BigUint;
use num_traits::{One, Pow};

use crate::error::{Error, Result};

/// Gaussian binomial coefficient via the product formula
/// `prod_{i<k} (q^{n-i} - 1) / prod_{i=1..k} (q^i - 1)`.
pub fn qbinomial(n: u32, k: u32, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::BadRange(format!("k = {k} exceeds n = {n}")));
    }
    if q < 2 {
        return Err(Error::BadRange(format!("q = {q} must be at least 2")));
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= Pow::pow(&q, n - i) - &one;
        den *= Pow::pow(&q, i + 1) - &one;
    }
    debug_assert!((&num % &den) == BigUint::from(0u32));
    Ok(num / den)
}

/// Number of `k`-flats in `F_q^n`: `q^{n-k} * [n choose k]_q`.
pub fn flat_count(n: u32, k: u32, q: u64) -> Result<BigUint> {
    Ok(qbinomial(n, k, q)? * Pow::pow(&BigUint::from(q), n - k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(qbinomial(5, 0, 7).unwrap(), BigUint::one());
        assert_eq!(qbinomial(2, 1, 3).unwrap(), BigUint::from(4u32));
        assert_eq!(qbinomial(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(flat_count(2, 1, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(flat_count(2, 1, 3).unwrap(), BigUint::from(12u32));
        assert!(qbinomial(2, 3, 2).is_err());
    }

    #[test]
    fn exceeds_u64() {
        assert_eq!(qbinomial(8, 4, 5).unwrap(), BigUint::from(200_525_284_806u64));
        let v = qbinomial(20, 10, 5).unwrap();
        assert!(v.bits() > 64);
        assert_eq!(v, qbinomial(20, 10, 5).unwrap());
    }
}
