//! Exact rational scalars.
//!
//! All coefficients and x-exponents in the kernel are arbitrary-precision
//! rationals. `num_rational::BigRational` already maintains the canonical
//! form we need (gcd(|num|, den) = 1, den >= 1), so we use it directly and
//! add the handful of helpers the kernel needs on top.

use num_bigint::{BigInt, Sign};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Shorthand for small rational constants: `rat(2, 3)` is 2/3.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// q^k for integer k (k may be negative; q must be nonzero then).
pub fn rat_pow_int(q: &Rat, k: i64) -> Rat {
    if k == 0 {
        return Rat::one();
    }
    let e = u32::try_from(k.unsigned_abs()).expect("exponent out of range");
    let num = q.numer().pow(e);
    let den = q.denom().pow(e);
    if k > 0 {
        Rat::new(num, den)
    } else {
        Rat::new(den, num)
    }
}

/// Exact n-th root of a nonnegative integer, if it exists.
fn int_nth_root_exact(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_zero() || n.is_one() || k == 1 {
        return Some(n.clone());
    }
    let root = n.nth_root(k);
    if root.pow(k) == *n {
        Some(root)
    } else {
        None
    }
}

/// q^e for rational e, exact or nothing.
///
/// Succeeds only when the result is again rational: the denominator of `e`
/// must divide away into exact integer roots of numerator and denominator.
/// Negative bases are allowed only for integer exponents (odd-root escape
/// hatches are rejected to keep the order structure simple).
pub fn rat_pow_rat(q: &Rat, e: &Rat) -> Option<Rat> {
    if e.is_integer() {
        let k = i64::try_from(e.to_integer()).ok()?;
        if q.is_zero() && k < 0 {
            return None;
        }
        return Some(rat_pow_int(q, k));
    }
    if q.is_negative() || q.is_zero() {
        return None;
    }
    let k = u32::try_from(e.denom().magnitude().clone()).ok()?;
    let num_root = int_nth_root_exact(q.numer(), k)?;
    let den_root = int_nth_root_exact(q.denom(), k)?;
    let root = Rat::new(num_root, den_root);
    let p = i64::try_from(e.numer().clone()).ok()?;
    Some(rat_pow_int(&root, p))
}

/// Parse "p", "-p", or "p/q" with q > 0.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.sign() != Sign::Plus {
            return None;
        }
        Some(Rat::new(num, den))
    } else {
        let num: BigInt = text.parse().ok()?;
        Some(Rat::from_integer(num))
    }
}

/// n! as a rational.
pub fn factorial(n: u64) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_powers() {
        assert_eq!(rat_pow_int(&rat(2, 3), 2), rat(4, 9));
        assert_eq!(rat_pow_int(&rat(2, 3), -1), rat(3, 2));
        assert_eq!(rat_pow_int(&rat(5, 1), 0), rat(1, 1));
    }

    #[test]
    fn rational_powers_exact_roots() {
        assert_eq!(rat_pow_rat(&rat(4, 9), &rat(1, 2)), Some(rat(2, 3)));
        assert_eq!(rat_pow_rat(&rat(8, 27), &rat(2, 3)), Some(rat(4, 9)));
        assert_eq!(rat_pow_rat(&rat(8, 27), &rat(-1, 3)), Some(rat(3, 2)));
        assert_eq!(rat_pow_rat(&rat(2, 1), &rat(1, 2)), None);
        assert_eq!(rat_pow_rat(&rat(-4, 1), &rat(1, 2)), None);
        assert_eq!(rat_pow_rat(&rat(-2, 1), &rat(3, 1)), Some(rat(-8, 1)));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rat("3/4"), Some(rat(3, 4)));
        assert_eq!(parse_rat("-7"), Some(rat(-7, 1)));
        assert_eq!(parse_rat("1/-2"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat_int(1));
        assert_eq!(factorial(5), rat_int(120));
    }
}
