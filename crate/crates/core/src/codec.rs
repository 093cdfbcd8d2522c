//! n-adic positional codecs in exact rational arithmetic.
//!
//! `nadic_value` evaluates a finite word as the prefix of the series
//! `sum x_i / n^i`. `nadic_digits` inverts it under the nonterminating
//! convention: values with a terminating expansion emit the tail of
//! repeated `n-1` digits instead (`1/2 -> 0111...` in base 2), and `0`
//! maps to `000...`. `change_basis` composes the two through the exact
//! rational value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::SymbolicWord;

/// `sum_i w_i / n^i` over the finite prefix, exactly.
pub fn nadic_value(w: &SymbolicWord) -> BigRational {
    let n = BigInt::from(w.alphabet());
    let mut acc = BigRational::zero();
    let mut scale = BigRational::one();
    for &d in w.digits() {
        scale /= BigRational::from(n.clone());
        acc += BigRational::from(BigInt::from(d)) * &scale;
    }
    acc
}

/// First `t` digits of the nonterminating base-n representation of
/// `q` in `[0, 1]`.
///
/// For `q > 0` the digit stream is `d_i = (ceil(q n^i) - 1) - n (ceil(q n^(i-1)) - 1)`,
/// which is the expansion that never ends in repeated zeros; `q = 0`
/// yields all zeros.
pub fn nadic_digits(q: &BigRational, n: u32, t: usize) -> Result<SymbolicWord> {
    if n < 2 {
        return Err(Error::Parse(format!("base {n} < 2")));
    }
    if q.is_negative() || *q > BigRational::one() {
        return Err(Error::Parse(format!("value {q} outside [0, 1]")));
    }
    let mut digits = Vec::with_capacity(t);
    if q.is_zero() {
        digits.resize(t, 0u16);
        return SymbolicWord::new(n, digits);
    }
    let nn = BigInt::from(n);
    // prev = ceil(q * n^(i-1)) - 1, running
    let mut prev = BigInt::zero(); // i = 0: ceil(q) - 1 = 0 for q in (0, 1]
    let mut qni = q.clone();
    for _ in 0..t {
        qni *= BigRational::from(nn.clone());
        let ceil_i = qni.ceil().to_integer();
        let cur = ceil_i - BigInt::one();
        let d = &cur - &nn * &prev;
        let d = num_traits::ToPrimitive::to_u16(&d)
            .ok_or_else(|| Error::Parse(format!("base {n} digit too large for word storage")))?;
        digits.push(d);
        prev = cur;
    }
    SymbolicWord::new(n, digits)
}

/// First `t2` digits, base `n2`, of the value of `w` (extended by zeros),
/// i.e. the change of basis `r_{n2}(v_{n1}(w 000...))`.
///
/// Requires enough input digits to pin down `t2` output digits:
/// `|w| >= ceil(t2 log(n2) / log(n1)) + 2`.
pub fn change_basis(w: &SymbolicWord, n2: u32, t2: usize) -> Result<SymbolicWord> {
    let n1 = w.alphabet() as f64;
    let required = ((t2 as f64) * (n2 as f64).ln() / n1.ln()).ceil() as usize + 2;
    if w.len() < required {
        return Err(Error::ShortInput { required, got: w.len() });
    }
    nadic_digits(&nadic_value(w), n2, t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn word(alphabet: u32, digits: &[u16]) -> SymbolicWord {
        SymbolicWord::new(alphabet, digits.to_vec()).unwrap()
    }

    #[test]
    fn value_of_binary_prefix() {
        assert_eq!(nadic_value(&word(2, &[1, 0, 0, 0])), rat(1, 2));
        assert_eq!(nadic_value(&word(3, &[2])), rat(2, 3));
        assert_eq!(nadic_value(&word(2, &[])), rat(0, 1));
    }

    #[test]
    fn nonterminating_half() {
        // 1/2 = 0.0111... in the nonterminating convention
        let w = nadic_digits(&rat(1, 2), 2, 5).unwrap();
        assert_eq!(w.digits(), &[0, 1, 1, 1, 1]);
    }

    #[test]
    fn zero_is_all_zeros() {
        let w = nadic_digits(&rat(0, 1), 2, 4).unwrap();
        assert_eq!(w.digits(), &[0, 0, 0, 0]);
    }

    #[test]
    fn one_is_all_top_digits() {
        let w = nadic_digits(&rat(1, 1), 2, 4).unwrap();
        assert_eq!(w.digits(), &[1, 1, 1, 1]);
        let w = nadic_digits(&rat(1, 1), 10, 3).unwrap();
        assert_eq!(w.digits(), &[9, 9, 9]);
    }

    #[test]
    fn third_in_base_three() {
        // 1/3 terminates as 0.1 in base 3; nonterminating form is 0.0222...
        let w = nadic_digits(&rat(1, 3), 3, 4).unwrap();
        assert_eq!(w.digits(), &[0, 2, 2, 2]);
    }

    #[test]
    fn nonterminating_digits_never_tail_zero_forever() {
        // for dyadic rationals every truncation ends with a run of ones
        let w = nadic_digits(&rat(3, 8), 2, 10).unwrap();
        assert_eq!(w.digits(), &[0, 1, 0, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn roundtrip_tail_bound() {
        // v(r(q)) differs from q by less than n^-t
        let mut rng = SplitMix64::new(7);
        for n in [2u32, 3, 10] {
            for _ in 0..1000 {
                let den = 1 + rng.next_below(999) as i64;
                let num = rng.next_below(den as u64 + 1) as i64;
                let q = rat(num, den);
                let t = 12;
                let w = nadic_digits(&q, n, t).unwrap();
                let v = nadic_value(&w);
                let diff = (&q - &v).abs();
                // tail of the series is at most n^-t, attained exactly when
                // the expansion terminates within t digits
                let bound = BigRational::new(BigInt::one(), BigInt::from(n).pow(t as u32));
                assert!(diff <= bound, "q={q} n={n} diff={diff}");
                assert!(v <= q, "truncated nonterminating value never exceeds q");
            }
        }
    }

    #[test]
    fn change_basis_half_to_base_four() {
        // value 1/2 in base 4, nonterminating: 0.1333..., first digit 1
        let w = word(2, &[1, 0]);
        let cb = change_basis(&w, 4, 1);
        // |w| = 2 < required -> lengthen the input with zeros (same value)
        assert!(cb.is_err());
        let w = word(2, &[1, 0, 0, 0]);
        let cb = change_basis(&w, 4, 1).unwrap();
        assert_eq!(cb.digits(), &[1]);
        let cb3 = change_basis(&word(2, &[1, 0, 0, 0, 0, 0, 0, 0]), 4, 3).unwrap();
        assert_eq!(cb3.digits(), &[1, 3, 3]);
    }

    #[test]
    fn change_basis_same_base_preserves_value() {
        let w = word(2, &[1, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0]);
        let out = change_basis(&w, 2, 8).unwrap();
        let v_in = nadic_value(&w);
        let v_out = nadic_value(&out);
        let bound = rat(1, 256);
        assert!((v_in - v_out).abs() < bound);
    }

    #[test]
    fn change_basis_zero_word() {
        let w = word(2, &[0; 12]);
        let out = change_basis(&w, 5, 4).unwrap();
        assert_eq!(out.digits(), &[0, 0, 0, 0]);
    }

    #[test]
    fn insufficient_digits_error_names_requirement() {
        let w = word(2, &[1, 0, 1]);
        match change_basis(&w, 16, 4) {
            Err(Error::ShortInput { required, got }) => {
                assert_eq!(got, 3);
                assert!(required >= 16 / 2); // 4 digits base 16 need >= 16 bits + guard
            }
            other => panic!("expected ShortInput, got {other:?}"),
        }
    }
}
