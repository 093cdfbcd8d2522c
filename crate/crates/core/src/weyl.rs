//! Symbolic *-algebra of the noncommutative 2-torus in the ordered
//! monomial basis `u^r v^s`, over the generator relation
//! `v u = e^{2 pi i theta} u v`.
//!
//! Elements are finitely supported sums `sum a_rs u^r v^s`; the tracial
//! state reads off the coefficient at `(0,0)`. All products reduce to the
//! single monomial rule
//!
//! ```text
//! (u^a v^b)(u^c v^d) = e^{2 pi i theta b c} u^{a+c} v^{b+d}
//! ```
//!
//! and the matrix automorphism `u -> u^a v^b`, `v -> u^c v^d` is applied
//! by literal repeated multiplication so no phase convention is hand
//! derived. Phase angles are reduced mod 1 in exact rational arithmetic
//! and evaluated in fixed point at the theta parameter's bit budget, then
//! rounded into the working scalar.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiprec::{cos_sin_2pi, fixed_to_f64};
use crate::scalar::{s, Scalar};
use crate::sl2z::SL2Matrix;

pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// Relative prune threshold for near-zero coefficients after sums.
const PRUNE_REL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
enum ThetaRepr {
    /// Exact rational p/q in lowest terms, 0 <= p/q <= 1/2.
    Rational { p: u64, q: u64 },
    /// High-precision real in [0, 1/2], stored as an exact rational
    /// approximation carrying at least `precision_bits` of the value.
    Real { approx: BigRational },
}

struct ThetaInner {
    repr: ThetaRepr,
    precision_bits: u32,
    /// Phase memo: multiplier k -> e^{2 pi i k theta} rounded to f64 pairs.
    cache: Mutex<HashMap<i128, (f64, f64)>>,
}

impl fmt::Debug for ThetaInner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThetaInner")
            .field("repr", &self.repr)
            .field("precision_bits", &self.precision_bits)
            .finish()
    }
}

/// Deformation parameter of the torus algebra.
///
/// Cheap to clone; phase tables are shared behind an `Arc` and populated
/// lazily. Equality compares the mathematical value, not the cache.
#[derive(Debug, Clone)]
pub struct ThetaParam {
    inner: Arc<ThetaInner>,
}

impl PartialEq for ThetaParam {
    fn eq(&self, other: &Self) -> bool {
        self.inner.repr == other.inner.repr
    }
}

impl ThetaParam {
    /// Exact rational theta = p/q, reduced; must lie in [0, 1/2].
    pub fn rational(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTheta("zero denominator".into()));
        }
        if q > u32::MAX as u64 {
            return Err(Error::InvalidTheta(format!("denominator {q} too large (max {})", u32::MAX)));
        }
        if 2 * p > q {
            return Err(Error::InvalidTheta(format!("{p}/{q} outside [0, 1/2]")));
        }
        let g = num_integer::gcd(p, q);
        Ok(ThetaParam {
            inner: Arc::new(ThetaInner {
                repr: ThetaRepr::Rational { p: p / g, q: q / g },
                precision_bits: DEFAULT_PRECISION_BITS,
                cache: Mutex::new(HashMap::new()),
            }),
        })
    }

    /// Real theta from an exact rational approximation in [0, 1/2].
    pub fn real(approx: BigRational, precision_bits: u32) -> Result<Self> {
        if precision_bits == 0 {
            return Err(Error::InvalidTheta("precision_bits must be positive".into()));
        }
        if approx.is_negative() || approx > BigRational::new(BigInt::one(), BigInt::from(2)) {
            return Err(Error::InvalidTheta(format!("{approx} outside [0, 1/2]")));
        }
        Ok(ThetaParam {
            inner: Arc::new(ThetaInner {
                repr: ThetaRepr::Real { approx },
                precision_bits,
                cache: Mutex::new(HashMap::new()),
            }),
        })
    }

    /// sqrt(2) - 1 ~ 0.4142..., a convenient irrational sample, computed to
    /// `precision_bits` by integer square root.
    pub fn sqrt2_minus_1(precision_bits: u32) -> Self {
        use crate::hiprec::isqrt;
        use num_bigint::BigUint;
        let scale = BigUint::one() << (2 * precision_bits);
        let root = isqrt(&(BigUint::from(2u32) * scale));
        let num = BigInt::from(root) - (BigInt::one() << precision_bits);
        let approx = BigRational::new(num, BigInt::one() << precision_bits);
        ThetaParam::real(approx, precision_bits).expect("sqrt(2)-1 lies in [0,1/2]")
    }

    /// Parse "p/q" or a decimal like "0.41421", optionally trailing.
    pub fn parse(text: &str, precision_bits: u32) -> Result<Self> {
        let t = text.trim();
        if let Some((p, q)) = t.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| Error::InvalidTheta(format!("bad numerator in '{t}'")))?;
            let q: u64 = q.trim().parse().map_err(|_| Error::InvalidTheta(format!("bad denominator in '{t}'")))?;
            return ThetaParam::rational(p, q);
        }
        if let Some((int, frac)) = t.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| Error::InvalidTheta(format!("bad decimal '{t}'")))?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::InvalidTheta(format!("bad decimal '{t}'")));
            }
            let num: BigInt = frac.parse().unwrap();
            let den = BigInt::from(10u8).pow(frac.len() as u32);
            let approx = BigRational::new(num, den.clone()) + BigRational::from(BigInt::from(int));
            return ThetaParam::real(approx, precision_bits);
        }
        let p: u64 = t.parse().map_err(|_| Error::InvalidTheta(format!("cannot parse '{t}'")))?;
        ThetaParam::rational(p, 1)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.inner.repr, ThetaRepr::Rational { .. })
    }

    pub fn precision_bits(&self) -> u32 {
        self.inner.precision_bits
    }

    /// Display form: "p/q" for rationals, a decimal prefix otherwise.
    pub fn describe(&self) -> String {
        match &self.inner.repr {
            ThetaRepr::Rational { p, q } => format!("{p}/{q}"),
            ThetaRepr::Real { approx } => {
                let scaled = (approx * BigRational::from(BigInt::from(10u64).pow(30))).floor();
                let digits = scaled.to_integer().to_string();
                format!("0.{:0>30}", digits)
            }
        }
    }

    /// `k * theta mod 1` as an exact rational in [0, 1).
    fn frac_multiple(&self, k: i128) -> BigRational {
        match &self.inner.repr {
            ThetaRepr::Rational { p, q } => {
                // q is capped at u32::MAX, so (k mod q) * p fits in i128
                let q = *q as i128;
                let r = (k.rem_euclid(q) * *p as i128).rem_euclid(q);
                BigRational::new(BigInt::from(r), BigInt::from(q))
            }
            ThetaRepr::Real { approx } => {
                let v = approx * BigRational::from(BigInt::from(k));
                &v - v.floor()
            }
        }
    }

    /// Full-precision phase `e^{2 pi i k theta}` as fixed-point mantissas
    /// of (cos, sin) at the parameter's bit budget.
    pub fn phase_fixed(&self, k: i128) -> (BigInt, BigInt) {
        cos_sin_2pi(&self.frac_multiple(k), self.inner.precision_bits)
    }

    /// Phase rounded into the working scalar, memoized per multiplier.
    pub fn phase<S: Scalar>(&self, k: i128) -> Complex<S> {
        if k == 0 {
            return Complex::new(S::one(), S::zero());
        }
        let key = match &self.inner.repr {
            ThetaRepr::Rational { q, .. } => k.rem_euclid(*q as i128),
            ThetaRepr::Real { .. } => k,
        };
        let mut cache = self.inner.cache.lock().unwrap();
        let (c, sn) = *cache.entry(key).or_insert_with(|| {
            let bits = self.inner.precision_bits;
            let (c, sn) = cos_sin_2pi(&self.frac_multiple(key), bits);
            (fixed_to_f64(&c, bits), fixed_to_f64(&sn, bits))
        });
        Complex::new(s(c), s(sn))
    }
}

/// Exponent pair of a monomial `u^r v^s`.
pub type Exponents = (i64, i64);

/// Finitely supported element `sum a_rs u^r v^s` of the torus algebra.
#[derive(Debug, Clone)]
pub struct WeylElement<S: Scalar> {
    theta: ThetaParam,
    coeffs: BTreeMap<Exponents, Complex<S>>,
}

impl<S: Scalar> WeylElement<S> {
    pub fn zero(theta: ThetaParam) -> Self {
        WeylElement { theta, coeffs: BTreeMap::new() }
    }

    /// `coeff * u^r v^s`
    pub fn monomial(theta: ThetaParam, r: i64, sxp: i64, coeff: Complex<S>) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != Complex::new(S::zero(), S::zero()) {
            coeffs.insert((r, sxp), coeff);
        }
        WeylElement { theta, coeffs }
    }

    pub fn identity(theta: ThetaParam) -> Self {
        Self::monomial(theta, 0, 0, Complex::new(S::one(), S::zero()))
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex<S>)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, r: i64, sxp: i64) -> Complex<S> {
        self.coeffs
            .get(&(r, sxp))
            .copied()
            .unwrap_or_else(|| Complex::new(S::zero(), S::zero()))
    }

    /// True when the element is a single monomial (or zero).
    pub fn single_term(&self) -> Option<(Exponents, Complex<S>)> {
        if self.coeffs.len() == 1 {
            let (&e, &c) = self.coeffs.iter().next().unwrap();
            Some((e, c))
        } else {
            None
        }
    }

    fn prune(&mut self) {
        let max_sq = self
            .coeffs
            .values()
            .map(|c| c.norm_sqr())
            .fold(S::zero(), |a, b| if b > a { b } else { a });
        if max_sq == S::zero() {
            self.coeffs.clear();
            return;
        }
        let floor = max_sq * s::<S>(PRUNE_REL * PRUNE_REL);
        self.coeffs.retain(|_, c| c.norm_sqr() > floor);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (&e, &c) in &other.coeffs {
            let entry = coeffs.entry(e).or_insert_with(|| Complex::new(S::zero(), S::zero()));
            *entry += c;
        }
        let mut out = WeylElement { theta: self.theta.clone(), coeffs };
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, factor: Complex<S>) -> Self {
        let coeffs = self.coeffs.iter().map(|(&e, &c)| (e, c * factor)).collect();
        WeylElement { theta: self.theta.clone(), coeffs }
    }

    /// Bilinear product from the monomial rule
    /// `(u^a v^b)(u^c v^d) = e^{2 pi i theta b c} u^{a+c} v^{b+d}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        let mut coeffs: BTreeMap<Exponents, Complex<S>> = BTreeMap::new();
        for (&(a, b), &ca) in &self.coeffs {
            for (&(c, d), &cb) in &other.coeffs {
                let phase = self.theta.phase::<S>(b as i128 * c as i128);
                let term = ca * cb * phase;
                let e = (a + c, b + d);
                let entry = coeffs.entry(e).or_insert_with(|| Complex::new(S::zero(), S::zero()));
                *entry += term;
            }
        }
        let mut out = WeylElement { theta: self.theta.clone(), coeffs };
        out.prune();
        Ok(out)
    }

    /// Conjugate-linear involution with
    /// `(u^a v^b)* = e^{2 pi i theta a b} u^{-a} v^{-b}`.
    pub fn adjoint(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&(a, b), &c) in &self.coeffs {
            let phase = self.theta.phase::<S>(a as i128 * b as i128);
            coeffs.insert((-a, -b), c.conj() * phase);
        }
        WeylElement { theta: self.theta.clone(), coeffs }
    }

    /// Tracial state: the coefficient at `(0,0)`.
    pub fn trace_state(&self) -> Complex<S> {
        self.coeff(0, 0)
    }

    /// Largest coefficient deviation from `other`, for tolerance checks.
    pub fn max_deviation(&self, other: &Self) -> S {
        let mut dev = S::zero();
        let keys: std::collections::BTreeSet<Exponents> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        for e in keys {
            let d = (self.coeff(e.0, e.1) - other.coeff(e.0, e.1)).norm();
            if d > dev {
                dev = d;
            }
        }
        dev
    }

    /// JSON form `{"theta": ..., "terms": [{"r","s","re","im"}, ...]}`
    /// with terms sorted by exponent pair.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            r: i64,
            s: i64,
            re: f64,
            im: f64,
        }
        let terms: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(&(r, sxp), c)| Term {
                r,
                s: sxp,
                re: c.re.to_f64().unwrap_or(f64::NAN),
                im: c.im.to_f64().unwrap_or(f64::NAN),
            })
            .collect();
        serde_json::json!({
            "theta": self.theta.describe(),
            "terms": serde_json::to_value(terms).unwrap(),
        })
    }
}

/// Positive power of a single monomial by repeated multiplication.
fn monomial_pow<S: Scalar>(base: &WeylElement<S>, n: u64) -> WeylElement<S> {
    let mut acc = WeylElement::identity(base.theta().clone());
    for _ in 0..n {
        acc = acc.mul(base).expect("same theta");
    }
    acc
}

/// The automorphism induced by `C`: `u -> u^a v^b`, `v -> u^c v^d`,
/// extended linearly. Negative powers go through the adjoint of the
/// positive power, so every phase comes from the product rule itself.
pub fn apply_auto<S: Scalar>(c: &SL2Matrix, x: &WeylElement<S>) -> WeylElement<S> {
    let theta = x.theta().clone();
    let image_u = WeylElement::monomial(theta.clone(), c.a, c.b, Complex::new(S::one(), S::zero()));
    let image_v = WeylElement::monomial(theta.clone(), c.c, c.d, Complex::new(S::one(), S::zero()));

    let mut out = WeylElement::zero(theta.clone());
    for (&(r, sxp), &coeff) in &x.coeffs {
        let pu = if r >= 0 {
            monomial_pow(&image_u, r as u64)
        } else {
            monomial_pow(&image_u, (-r) as u64).adjoint()
        };
        let pv = if sxp >= 0 {
            monomial_pow(&image_v, sxp as u64)
        } else {
            monomial_pow(&image_v, (-sxp) as u64).adjoint()
        };
        let term = pu.mul(&pv).expect("same theta").scale(coeff);
        out = out.add(&term).expect("same theta");
    }
    out
}
