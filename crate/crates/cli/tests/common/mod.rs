//! Independent oracles for the acceptance suite. Everything here computes
//! expected values by routes the library does not use: a fixed-point
//! logarithm via the inverse-hyperbolic-tangent series, and exact
//! cylinder measures of the toral automorphism by rational polygon
//! clipping.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

// -- fixed-point logarithm oracle -------------------------------------------

/// Floor square root by Newton iteration, self-checked.
fn isqrt_checked(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    let mut x: BigUint = BigUint::one() << (n.bits() / 2 + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    assert!(&x * &x <= *n && (&x + 1u32) * (&x + 1u32) > *n, "isqrt self-check");
    x
}

/// `ln((t + sqrt(t^2 - 4)) / 2)` for integer trace `t > 2`, computed in
/// fixed point via `2 atanh((lambda - 1)/(lambda + 1))`. Returns the f64
/// rounding and a 30-digit decimal string "0.dddd...".
pub fn ln_lambda_oracle(t: u64, bits: u32) -> (f64, String) {
    let wb = bits as usize;
    let one = BigInt::one() << wb;
    let d = t * t - 4;
    let sqrt_d = BigInt::from(isqrt_checked(&(BigUint::from(d) << (2 * wb))));
    let lam = (BigInt::from(t) * &one + sqrt_d) >> 1;
    let num = &lam - &one;
    let den = &lam + &one;
    let z: BigInt = (num << wb) / &den; // positive operands: truncation is floor
    let zsq = (&z * &z) >> wb;
    let mut term = z.clone();
    let mut sum = z;
    let mut k: u64 = 1;
    loop {
        term = (&term * &zsq) >> wb;
        let add = &term / BigInt::from(2 * k + 1);
        if add.is_zero() {
            break;
        }
        sum += add;
        k += 1;
    }
    let ln: BigInt = sum << 1u32;
    let as_f64 = ln.to_f64().unwrap() * (2.0f64).powi(-(bits as i32));
    let digits = (&ln * BigInt::from(10u8).pow(30)) >> wb;
    (as_f64, format!("0.{:0>30}", digits))
}

// -- exact cylinder-measure oracle -------------------------------------------

type Point = (BigRational, BigRational);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Keep the part of a convex CCW polygon with `a x + b y <= c`.
fn clip_halfplane(poly: &[Point], a: &BigRational, b: &BigRational, c: &BigRational) -> Vec<Point> {
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let fp = a * &p.0 + b * &p.1 - c;
        let fq = a * &q.0 + b * &q.1 - c;
        if !fp.is_positive() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fq.is_negative() && fp.is_positive()) {
            let t = &fp / (&fp - &fq);
            out.push((&p.0 + &t * (&q.0 - &p.0), &p.1 + &t * (&q.1 - &p.1)));
        }
    }
    out
}

fn clip_box(mut poly: Vec<Point>, x0: &BigRational, y0: &BigRational, x1: &BigRational, y1: &BigRational) -> Vec<Point> {
    let m1 = rat(-1, 1);
    let p1 = rat(1, 1);
    let z = rat(0, 1);
    for (a, b, c) in [
        (m1.clone(), z.clone(), -x0.clone()),
        (p1.clone(), z.clone(), x1.clone()),
        (z.clone(), m1, -y0.clone()),
        (z, p1, y1.clone()),
    ] {
        poly = clip_halfplane(&poly, &a, &b, &c);
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    poly
}

/// Twice the signed area (shoelace); positive for CCW.
fn area2(poly: &[Point]) -> BigRational {
    let mut s = BigRational::zero();
    let n = poly.len();
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        s += &p.0 * &q.1 - &q.0 * &p.1;
    }
    s
}

/// Exact block-entropy values `H_1..H_nmax` (bits) of the grid partition
/// under the transpose action of the matrix `(a b; c d)`, by exact
/// forward propagation of convex cylinder pieces.
pub fn exact_block_entropies(mat: (i64, i64, i64, i64), m: i64, nmax: usize) -> Vec<f64> {
    let (a, b, c, d) = mat;
    // transpose action row coefficients
    let (m11, m12, m21, m22) = (a, c, b, d);

    let mut cells: Vec<(usize, BigRational, BigRational, BigRational, BigRational)> = Vec::new();
    for row in 0..m {
        for col in 0..m {
            cells.push((
                (col + m * row) as usize,
                rat(col, m),
                rat(row, m),
                rat(col + 1, m),
                rat(row + 1, m),
            ));
        }
    }

    // piece: convex polygon in current coordinates plus its symbol history
    let mut pieces: Vec<(Vec<Point>, Vec<usize>)> = cells
        .iter()
        .map(|(i, x0, y0, x1, y1)| {
            (
                vec![
                    (x0.clone(), y0.clone()),
                    (x1.clone(), y0.clone()),
                    (x1.clone(), y1.clone()),
                    (x0.clone(), y1.clone()),
                ],
                vec![*i],
            )
        })
        .collect();

    let entropy = |pieces: &[(Vec<Point>, Vec<usize>)]| -> f64 {
        use std::collections::HashMap;
        let mut acc: HashMap<&[usize], BigRational> = HashMap::new();
        for (poly, hist) in pieces {
            *acc.entry(hist.as_slice()).or_insert_with(BigRational::zero) += area2(poly);
        }
        let total: BigRational = acc.values().cloned().fold(BigRational::zero(), |x, y| x + y);
        assert_eq!(total, rat(2, 1), "cylinder measures must sum to 1 exactly");
        let mut h = 0.0;
        for v in acc.values() {
            let p = (v / &total).to_f64().unwrap();
            if p > 0.0 {
                h -= p * p.log2();
            }
        }
        h
    };

    let mut out = vec![entropy(&pieces)];
    for _ in 1..nmax {
        let mut next = Vec::new();
        for (poly, hist) in &pieces {
            let q: Vec<Point> = poly
                .iter()
                .map(|(x, y)| {
                    (
                        rat(m11, 1) * x + rat(m12, 1) * y,
                        rat(m21, 1) * x + rat(m22, 1) * y,
                    )
                })
                .collect();
            let mut minx = q[0].0.clone();
            let mut maxx = q[0].0.clone();
            let mut miny = q[0].1.clone();
            let mut maxy = q[0].1.clone();
            for (x, y) in &q[1..] {
                if *x < minx { minx = x.clone(); }
                if *x > maxx { maxx = x.clone(); }
                if *y < miny { miny = y.clone(); }
                if *y > maxy { maxy = y.clone(); }
            }
            let tx0 = minx.floor().to_integer().to_i64().unwrap();
            let tx1 = maxx.ceil().to_integer().to_i64().unwrap();
            let ty0 = miny.floor().to_integer().to_i64().unwrap();
            let ty1 = maxy.ceil().to_integer().to_i64().unwrap();
            for tx in tx0..=tx1 {
                for ty in ty0..=ty1 {
                    for (ci, x0, y0, x1, y1) in &cells {
                        let shifted = clip_box(
                            q.clone(),
                            &(x0 + rat(tx, 1)),
                            &(y0 + rat(ty, 1)),
                            &(x1 + rat(tx, 1)),
                            &(y1 + rat(ty, 1)),
                        );
                        if shifted.len() >= 3 && area2(&shifted).is_positive() {
                            let back: Vec<Point> = shifted
                                .into_iter()
                                .map(|(x, y)| (x - rat(tx, 1), y - rat(ty, 1)))
                                .collect();
                            let mut h = hist.clone();
                            h.push(*ci);
                            next.push((back, h));
                        }
                    }
                }
            }
        }
        pieces = next;
        out.push(entropy(&pieces));
    }
    out
}
