//! High-precision numeric evaluation of truncated series.
//!
//! Everything is computed in rational arithmetic, rounded to a working
//! precision of `digits + GUARD` decimal places after every transcendental
//! step to keep denominators bounded. exp uses argument halving plus the
//! Taylor series; ln reduces to [1, 2) by powers of two and uses the atanh
//! series. No tail estimate is attempted: the value is that of the stored
//! truncated sum.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::{rat_pow_int, Rat};
use crate::series::Series;

const GUARD: u32 = 25;

fn pow10(p: u32) -> BigInt {
    BigInt::from(10u32).pow(p)
}

/// Round to p decimal places.
fn round_p(x: &Rat, p: u32) -> Rat {
    let scale = pow10(p);
    let scaled = x * Rat::from_integer(scale.clone());
    Rat::new(scaled.round().to_integer(), scale)
}

/// e^x to p decimal places, by halving until |x| <= 1/2 then Taylor.
fn exp_approx(x: &Rat, p: u32) -> Result<Rat> {
    // Guard against astronomically large exponents: the result would not
    // even be representable at this precision.
    if x.abs() > Rat::from_integer(200_000.into()) {
        return Err(Error::DomainError(format!(
            "exponent too large for numeric evaluation: {x}"
        )));
    }
    let mut halvings = 0u32;
    let half = Rat::new(BigInt::one(), 2.into());
    let mut y = x.clone();
    while y.abs() > half {
        y /= Rat::from_integer(2.into());
        halvings += 1;
    }
    let work = p + halvings + 10;
    let mut term = Rat::one();
    let mut sum = Rat::one();
    let eps = Rat::new(BigInt::one(), pow10(work));
    let mut n = 1u64;
    while term.abs() > eps {
        term = round_p(&(term * y.clone() / Rat::from_integer(n.into())), work);
        sum += term.clone();
        n += 1;
    }
    for _ in 0..halvings {
        sum = round_p(&(sum.clone() * sum), work);
    }
    Ok(round_p(&sum, p))
}

/// ln 2 via 2·atanh(1/3).
fn ln2(p: u32) -> Rat {
    atanh_small(&Rat::new(BigInt::one(), 3.into()), p)
}

/// 2·atanh(z) = ln((1+z)/(1-z)) for |z| < 1.
fn atanh_small(z: &Rat, p: u32) -> Rat {
    let work = p + 10;
    let eps = Rat::new(BigInt::one(), pow10(work));
    let z2 = round_p(&(z.clone() * z.clone()), work);
    let mut pow = z.clone();
    let mut sum = Rat::zero();
    let mut k = 0u64;
    loop {
        let term = pow.clone() / Rat::from_integer((2 * k + 1).into());
        sum += term.clone();
        if term.abs() < eps {
            break;
        }
        pow = round_p(&(pow * z2.clone()), work);
        k += 1;
    }
    round_p(&(sum * Rat::from_integer(2.into())), p)
}

/// Natural log of a positive rational to p decimal places.
fn ln_approx(y: &Rat, p: u32) -> Result<Rat> {
    if !y.is_positive() {
        return Err(Error::DomainError(format!("log of nonpositive value {y}")));
    }
    let work = p + 10;
    // reduce to m in [1, 2) with y = m·2^k
    let two = Rat::from_integer(2.into());
    let one = Rat::one();
    let mut m = y.clone();
    let mut k: i64 = 0;
    while m >= two {
        m /= two.clone();
        k += 1;
    }
    while m < one {
        m *= two.clone();
        k -= 1;
    }
    let z = (m.clone() - one.clone()) / (m + one);
    let ln_m = atanh_small(&z, work);
    let total = ln_m + Rat::from_integer(k.into()) * ln2(work);
    Ok(round_p(&total, p))
}

fn rat_power_approx(base: &Rat, e: &Rat, p: u32) -> Result<Rat> {
    if e.is_integer() {
        let k = e
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::DomainError("exponent out of range".into()))?;
        return Ok(round_p(&rat_pow_int(base, k), p));
    }
    if !base.is_positive() {
        return Err(Error::DomainError(format!(
            "fractional power of nonpositive value {base}"
        )));
    }
    let work = p + 10;
    exp_approx(&round_p(&(e.clone() * ln_approx(base, work)?), work), p)
}

/// Value of a log-free core at u > 0.
fn core_value(m: &Monomial, u: &Rat, p: u32) -> Result<Rat> {
    if m.is_one() {
        return Ok(Rat::one());
    }
    let work = p + 10;
    let mut acc = if m.x_exp().is_zero() {
        Rat::one()
    } else {
        rat_power_approx(u, m.x_exp(), work)?
    };
    if !m.exp_part().terms().is_empty() {
        let mut expo = Rat::zero();
        for (k, c) in m.exp_part().terms() {
            expo += c.clone() * core_value(k, u, work)?;
        }
        acc *= exp_approx(&round_p(&expo, work), work)?;
    }
    Ok(round_p(&acc, p))
}

fn monomial_value(m: &Monomial, x0: &Rat, p: u32) -> Result<Rat> {
    let mut u = x0.clone();
    for _ in 0..m.depth() {
        u = ln_approx(&u, p + 10)?;
        if !u.is_positive() {
            return Err(Error::DomainError(
                "iterated logarithm is not positive at the evaluation point".into(),
            ));
        }
    }
    core_value(m, &u, p)
}

/// Evaluate the stored truncated sum at x0 with the requested number of
/// significant decimal digits of working precision.
pub fn numeric_eval(t: &Series, x0: &Rat, digits: u32) -> Result<Rat> {
    if !x0.is_positive() {
        return Err(Error::DomainError(
            "evaluation point must be positive".into(),
        ));
    }
    let p = digits + GUARD;
    let mut sum = Rat::zero();
    for (m, c) in t.terms() {
        sum += c.clone() * monomial_value(m, x0, p)?;
    }
    Ok(round_p(&sum, p))
}

/// Format with `digits` significant digits, plain decimal notation.
pub fn format_decimal(x: &Rat, digits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let ax = x.abs();
    // decimal exponent: number of digits before the point, minus one
    let mut mag = 0i64;
    let ten = Rat::from_integer(10.into());
    let one = Rat::one();
    let mut probe = ax.clone();
    while probe >= ten {
        probe /= ten.clone();
        mag += 1;
    }
    while probe < one {
        probe *= ten.clone();
        mag -= 1;
    }
    // round to (digits-1) places after the leading digit
    let places = digits as i64 - 1 - mag;
    let scaled = if places >= 0 {
        ax.clone() * rat_pow_int(&ten, places)
    } else {
        ax.clone() / rat_pow_int(&ten, -places)
    };
    let mut int_digits = scaled.round().to_integer().to_string();
    // rounding may add a digit (e.g. 9.99 -> 10.0)
    let mut places = places;
    if int_digits.len() as i64 > digits as i64 {
        int_digits.pop();
        places -= 1;
    }
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    if places <= 0 {
        s.push_str(&int_digits);
        for _ in 0..(-places) {
            s.push('0');
        }
    } else {
        let places = places as usize;
        if int_digits.len() > places {
            let split = int_digits.len() - places;
            s.push_str(&int_digits[..split]);
            s.push('.');
            s.push_str(&int_digits[split..]);
        } else {
            s.push_str("0.");
            for _ in 0..(places - int_digits.len()) {
                s.push('0');
            }
            s.push_str(&int_digits);
        }
    }
    s
}
