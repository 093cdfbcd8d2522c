//! Fixed-point big-integer arithmetic for the few places where `f64` is
//! not enough: unit phases evaluated at a configurable bit count, and the
//! 50-digit decimal rendering of quadratic surds.
//!
//! A value is represented by its mantissa `m: BigInt` at a scale of
//! `2^bits`, i.e. the real number `m / 2^bits`. Only the operations the
//! crate actually needs are provided.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
#[cfg(test)]
use num_traits::Signed;

/// Floor square root of a big unsigned integer (Newton iteration).
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut x: BigUint = BigUint::one() << (n.bits() / 2 + 1);
    loop {
        // x_{k+1} = (x_k + n/x_k) / 2, monotone decreasing once above the root
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn atan_inv(x: u64, bits: u32) -> BigInt {
    // atan(1/x) = sum_k (-1)^k / ((2k+1) x^(2k+1)) at scale 2^bits
    let xsq = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << bits) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &xsq;
        k += 1;
    }
    sum
}

/// Mantissa of pi at scale `2^bits` (Machin's formula), memoized per bit count.
pub fn pi_fixed(bits: u32) -> BigInt {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let guard = 16;
    let wb = bits + guard;
    let pi = (atan_inv(5, wb) * 16u32 - atan_inv(239, wb) * 4u32) >> guard;
    cache.lock().unwrap().insert(bits, pi.clone());
    pi
}

fn fixed_mul(a: &BigInt, b: &BigInt, bits: u32) -> BigInt {
    (a * b) >> bits
}

/// Floor of `r * 2^bits` for a rational `r`.
fn rational_to_fixed(r: &BigRational, bits: u32) -> BigInt {
    ((r.numer() << bits) as BigInt).div_floor(r.denom())
}

/// `(cos, sin)` of `2*pi*frac` as mantissas at scale `2^bits`.
///
/// `frac` is reduced into `[0,1)` exactly before any rounding, so phases
/// of the form `e^{2*pi*i*k*theta}` keep full accuracy for arbitrarily
/// large integers `k`. Quarter-period fractions come out exact.
pub fn cos_sin_2pi(frac: &BigRational, bits: u32) -> (BigInt, BigInt) {
    let guard = 32;
    let wb = bits + guard;

    let reduced = frac - frac.floor();
    // quadrant q in 0..4 and remainder r in [0, 1), angle = (pi/2) * r
    let scaled = &reduced * BigRational::from(BigInt::from(4));
    let q = scaled.floor().to_integer().to_u8().unwrap_or(0) % 4;
    let r = &scaled - scaled.floor();

    let half_pi = pi_fixed(wb + 1) >> 2; // (pi/2) * 2^wb
    let x = fixed_mul(&half_pi, &rational_to_fixed(&r, wb), wb);

    // Taylor series for sin and cos; terms shrink by x^2/((2k)(2k+1)).
    let xsq = fixed_mul(&x, &x, wb);
    let one = BigInt::one() << wb;
    let mut sin = x.clone();
    let mut cos = one.clone();
    let mut term_s = x;
    let mut term_c = one;
    let mut k: u64 = 1;
    loop {
        term_c = fixed_mul(&term_c, &xsq, wb) / BigInt::from((2 * k - 1) * (2 * k));
        term_s = fixed_mul(&term_s, &xsq, wb) / BigInt::from((2 * k) * (2 * k + 1));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        if k % 2 == 1 {
            cos -= &term_c;
            sin -= &term_s;
        } else {
            cos += &term_c;
            sin += &term_s;
        }
        k += 1;
    }

    let (c, s) = match q {
        0 => (cos, sin),
        1 => (-sin, cos),
        2 => (-cos, -sin),
        _ => (sin, -cos),
    };
    let half = BigInt::one() << (guard - 1);
    ((c + &half) >> guard, (s + half) >> guard)
}

/// Convert a fixed-point mantissa back to `f64`.
pub fn fixed_to_f64(m: &BigInt, bits: u32) -> f64 {
    if bits <= 1000 {
        m.to_f64().unwrap_or(0.0) * (2.0f64).powi(-(bits as i32))
    } else {
        // split the scaling so 2^-bits never underflows
        let shifted = m >> (bits - 64);
        shifted.to_f64().unwrap_or(0.0) * (2.0f64).powi(-64)
    }
}

/// Decimal rendering of the surd `(p + q*sqrt(d)) / 2` (`p, q, d >= 0`),
/// truncated to `sig` significant digits. Digits come from an integer
/// square root at an enlarged decimal scale, so no floating point enters.
pub fn surd_decimal(p: u64, q: u64, d: u128, sig: usize) -> String {
    let extra = 4; // guard digits against truncation at the boundary
    let scale = sig + extra;
    let ten_pow = BigUint::from(10u32).pow(scale as u32);
    let root = isqrt(&(BigUint::from(d) * &ten_pow * &ten_pow));
    let numer = BigUint::from(p) * &ten_pow + BigUint::from(q) * root;
    let value = numer / 2u32; // floor of the surd times 10^scale

    let digits = value.to_str_radix(10);
    let int_len = digits.len().saturating_sub(scale);
    let (int_part, frac_part) = if int_len == 0 {
        ("0".to_string(), format!("{digits:0>scale$}"))
    } else {
        (digits[..int_len].to_string(), digits[int_len..].to_string())
    };
    let sig_used = if int_part == "0" { 0 } else { int_part.len() };
    let frac_keep = sig.saturating_sub(sig_used).min(frac_part.len());
    let frac = frac_part[..frac_keep].trim_end_matches('0');
    if frac.is_empty() {
        int_part
    } else {
        format!("{int_part}.{frac}")
    }
}
