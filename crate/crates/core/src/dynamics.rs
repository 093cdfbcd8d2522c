//! The classical automorphism of the unit 2-torus induced by an SL(2,Z)
//! matrix, grid partitions with exact cell measures, and symbolic orbit
//! translation.
//!
//! Points carry either exact rational coordinates or fixed-point
//! coordinates with `P` fractional bits. The linear step maps multiples
//! of `2^-P` to multiples of `2^-P`, so fixed-point orbits are exact
//! orbits of the quantized seed; the precision precondition
//! `k log2(lambda) + 16 <= P` keeps the first `k` symbols of a generic
//! seed trustworthy against the hyperbolic error growth of the
//! quantization offset.
//!
//! The classical action is taken as the transpose action
//! `(x, y) -> (a x + c y, b x + d y) mod 1`, which matches the algebra
//! automorphism on characters; the direct action is available behind an
//! option.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::sl2z::{classify_matrix, SL2Matrix, TraceMode};
use crate::words::SymbolicWord;

pub const DEFAULT_PRECISION_BITS: u32 = 512;

/// Which linear action of the matrix acts on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusAction {
    /// `(x, y) -> (a x + b y, c x + d y)`
    Direct,
    /// `(x, y) -> (a x + c y, b x + d y)` — matches the algebra side.
    Transpose,
}

impl TorusAction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(TorusAction::Direct),
            "transpose" => Ok(TorusAction::Transpose),
            _ => Err(Error::Parse(format!("unknown action '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Coords {
    Rational { x: BigRational, y: BigRational },
    /// Fixed point: `x/2^bits, y/2^bits`, both in `[0, 2^bits)`.
    Fixed { x: BigUint, y: BigUint, bits: u32 },
}

/// A point of the unit torus `[0,1)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    coords: Coords,
}

fn mod1(r: &BigRational) -> BigRational {
    r - r.floor()
}

impl TorusPoint {
    pub fn rational(x: BigRational, y: BigRational) -> Self {
        TorusPoint { coords: Coords::Rational { x: mod1(&x), y: mod1(&y) } }
    }

    pub fn rational_i64(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        TorusPoint::rational(
            BigRational::new(BigInt::from(xn), BigInt::from(xd)),
            BigRational::new(BigInt::from(yn), BigInt::from(yd)),
        )
    }

    /// Quantize a rational point to `bits` fractional bits (floor).
    pub fn fixed_from_rational(x: &BigRational, y: &BigRational, bits: u32) -> Self {
        let quant = |v: &BigRational| -> BigUint {
            let v = mod1(v);
            ((v.numer() << bits) as BigInt)
                .div_floor(v.denom())
                .to_biguint()
                .expect("non-negative after mod 1")
        };
        TorusPoint { coords: Coords::Fixed { x: quant(x), y: quant(y), bits } }
    }

    /// Generic seed: `bits` random fractional bits per coordinate.
    pub fn random_fixed(rng: &mut SplitMix64, bits: u32) -> Self {
        let draw = |rng: &mut SplitMix64| -> BigUint {
            let words = bits.div_ceil(64);
            let mut v = BigUint::zero();
            for _ in 0..words {
                v = (v << 64) | BigUint::from(rng.next_u64());
            }
            v & ((BigUint::one() << bits) - BigUint::one())
        };
        TorusPoint { coords: Coords::Fixed { x: draw(rng), y: draw(rng), bits } }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.coords, Coords::Rational { .. })
    }

    pub fn precision_bits(&self) -> Option<u32> {
        match &self.coords {
            Coords::Rational { .. } => None,
            Coords::Fixed { bits, .. } => Some(*bits),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match &self.coords {
            Coords::Rational { x, y } => (
                x.to_f64().unwrap_or(f64::NAN),
                y.to_f64().unwrap_or(f64::NAN),
            ),
            Coords::Fixed { x, y, bits } => {
                let scale = (2.0f64).powi(-(*bits as i32).min(1000));
                let top = |v: &BigUint| {
                    if *bits > 1000 {
                        (v >> (*bits - 64)).to_f64().unwrap_or(f64::NAN) * (2.0f64).powi(-64)
                    } else {
                        v.to_f64().unwrap_or(f64::NAN) * scale
                    }
                };
                (top(x), top(y))
            }
        }
    }
}

/// One application of the toral automorphism.
pub fn step(c: &SL2Matrix, action: TorusAction, p: &TorusPoint) -> TorusPoint {
    // row coefficients for (x', y')
    let (m11, m12, m21, m22) = match action {
        TorusAction::Direct => (c.a, c.b, c.c, c.d),
        TorusAction::Transpose => (c.a, c.c, c.b, c.d),
    };
    match &p.coords {
        Coords::Rational { x, y } => {
            let bx = BigRational::from(BigInt::from(m11)) * x
                + BigRational::from(BigInt::from(m12)) * y;
            let by = BigRational::from(BigInt::from(m21)) * x
                + BigRational::from(BigInt::from(m22)) * y;
            TorusPoint::rational(bx, by)
        }
        Coords::Fixed { x, y, bits } => {
            let modulus = BigInt::one() << *bits;
            let xi = BigInt::from(x.clone());
            let yi = BigInt::from(y.clone());
            let nx = (BigInt::from(m11) * &xi + BigInt::from(m12) * &yi).mod_floor(&modulus);
            let ny = (BigInt::from(m21) * &xi + BigInt::from(m22) * &yi).mod_floor(&modulus);
            TorusPoint {
                coords: Coords::Fixed {
                    x: nx.to_biguint().unwrap(),
                    y: ny.to_biguint().unwrap(),
                    bits: *bits,
                },
            }
        }
    }
}

/// `m x m` grid of congruent square cells, each of exact measure `1/m^2`;
/// cell index is row-major `floor(x m) + m floor(y m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridPartition {
    pub m: u32,
}

impl GridPartition {
    pub fn new(m: u32) -> Result<Self> {
        // m >= 2 keeps the symbol alphabet nontrivial
        if m < 2 {
            return Err(Error::Parse("grid size must be at least 2".into()));
        }
        if m > 256 {
            return Err(Error::Parse(format!("grid size {m} too large (max 256)")));
        }
        Ok(GridPartition { m })
    }

    pub fn cell_count(&self) -> u32 {
        self.m * self.m
    }

    pub fn cell_of(&self, p: &TorusPoint) -> u16 {
        let m = self.m;
        match &p.coords {
            Coords::Rational { x, y } => {
                let col = (x * BigRational::from(BigInt::from(m))).floor().to_integer();
                let row = (y * BigRational::from(BigInt::from(m))).floor().to_integer();
                (col.to_u32().unwrap().min(m - 1) + m * row.to_u32().unwrap().min(m - 1)) as u16
            }
            Coords::Fixed { x, y, bits } => {
                let col = ((x * m) >> *bits).to_u32().unwrap().min(m - 1);
                let row = ((y * m) >> *bits).to_u32().unwrap().min(m - 1);
                (col + m * row) as u16
            }
        }
    }
}

/// Fractional bits needed for `k` trustworthy symbols under `c`.
pub fn required_precision_bits(c: &SL2Matrix, k: usize) -> u32 {
    let report = classify_matrix(c, TraceMode::Hyperbolic);
    let log2_lambda = report
        .lambda_max
        .as_ref()
        .map(|l| l.to_f64().log2().max(0.0))
        .unwrap_or(0.0);
    (k as f64 * log2_lambda).ceil() as u32 + 16
}

/// Word of length `k` over the `m^2`-letter alphabet labelling the cells
/// of `p, T p, ..., T^(k-1) p`.
///
/// For fixed-point seeds the precision precondition guards the
/// interpretation of the word as the symbolic orbit of the underlying
/// real point; exceeding it is an error naming the required bit count.
pub fn symbolic_translate(
    c: &SL2Matrix,
    action: TorusAction,
    grid: &GridPartition,
    p: &TorusPoint,
    k: usize,
) -> Result<SymbolicWord> {
    if let Some(bits) = p.precision_bits() {
        let needed = required_precision_bits(c, k);
        if needed > bits {
            return Err(Error::PrecisionBudget { needed, have: bits });
        }
    }
    Ok(lattice_orbit_word(c, action, grid, p, k))
}

/// Symbolic orbit of the point as given, with no trustworthiness check.
///
/// Fixed-point arithmetic is exact on the `2^-P` lattice, so the word is
/// the exact symbolic orbit of the quantized seed at any length; this is
/// the right input for compression-rate estimates over long words, where
/// the seed itself is the object of study rather than a stand-in for a
/// real point.
pub fn lattice_orbit_word(
    c: &SL2Matrix,
    action: TorusAction,
    grid: &GridPartition,
    p: &TorusPoint,
    k: usize,
) -> SymbolicWord {
    let mut word = SymbolicWord::empty(grid.cell_count()).expect("alphabet >= 4");
    let mut cur = p.clone();
    for i in 0..k {
        word.push(grid.cell_of(&cur));
        if i + 1 < k {
            cur = step(c, action, &cur);
        }
    }
    word
}
