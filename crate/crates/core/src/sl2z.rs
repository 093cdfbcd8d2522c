//! Exact classification of SL(2,Z) matrices.
//!
//! The induced torus automorphism has dynamical entropy `ln(lambda)` when
//! `Tr(C) > 2` and `0` otherwise, with `lambda` the largest eigenvalue.
//! For `|Tr| > 2` the eigenvalue is the quadratic surd
//! `(|Tr| + sqrt(Tr^2 - 4)) / 2`, which is kept in exact form and rendered
//! to 50 decimal digits through an integer square root.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiprec::surd_decimal;

/// 2x2 integer matrix with determinant exactly 1, entries row-major
/// `(a b; c d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Matrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::InvalidMatrix(format!(
                "det({a},{b};{c},{d}) = {det}, expected 1"
            )));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        SL2Matrix { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Inverse from the determinant-1 cofactor formula.
    pub fn inverse(&self) -> Self {
        SL2Matrix { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn mul(&self, o: &SL2Matrix) -> Self {
        // i128 intermediates; entries themselves must stay within i64
        let m = |x: i128| i64::try_from(x).expect("matrix entry overflow");
        SL2Matrix {
            a: m(self.a as i128 * o.a as i128 + self.b as i128 * o.c as i128),
            b: m(self.a as i128 * o.b as i128 + self.b as i128 * o.d as i128),
            c: m(self.c as i128 * o.a as i128 + self.d as i128 * o.c as i128),
            d: m(self.c as i128 * o.b as i128 + self.d as i128 * o.d as i128),
        }
    }

    /// Parse "a,b,c,d".
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected a,b,c,d, got '{s}'")));
        }
        let mut v = [0i64; 4];
        for (i, p) in parts.iter().enumerate() {
            v[i] = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer '{p}' in matrix")))?;
        }
        SL2Matrix::new(v[0], v[1], v[2], v[3])
    }
}

/// Which trace criterion decides chaoticity.
///
/// `Paper` reproduces the literal criterion `Tr(C) > 2`, which assigns
/// entropy 0 to hyperbolic matrices with trace below -2; `Hyperbolic`
/// uses `|Tr(C)| > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceMode {
    Paper,
    Hyperbolic,
}

impl TraceMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(TraceMode::Paper),
            "hyperbolic" => Ok(TraceMode::Hyperbolic),
            _ => Err(Error::Parse(format!("unknown trace mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjugacyClass {
    Identity,
    MinusIdentity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl ConjugacyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConjugacyClass::Identity => "identity",
            ConjugacyClass::MinusIdentity => "minus_identity",
            ConjugacyClass::Elliptic => "elliptic",
            ConjugacyClass::Parabolic => "parabolic",
            ConjugacyClass::Hyperbolic => "hyperbolic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixOrder {
    Finite(u32),
    Infinite,
}

impl Serialize for MatrixOrder {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self {
            MatrixOrder::Finite(n) => ser.serialize_u32(*n),
            MatrixOrder::Infinite => ser.serialize_str("infinite"),
        }
    }
}

/// `(p + q*sqrt(d)) / 2` with non-negative integer components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticSurd {
    pub p: u64,
    pub q: u64,
    /// Discriminant; u128 so that any i64 trace squares without overflow.
    pub d: u128,
    /// Truncated decimal rendering, 50 significant digits.
    pub decimal: String,
}

impl QuadraticSurd {
    fn eigenvalue_of_trace(abs_trace: u64) -> Self {
        let d = abs_trace as u128 * abs_trace as u128 - 4;
        QuadraticSurd {
            p: abs_trace,
            q: 1,
            d,
            decimal: surd_decimal(abs_trace, 1, d, 50),
        }
    }

    pub fn to_f64(&self) -> f64 {
        (self.p as f64 + self.q as f64 * (self.d as f64).sqrt()) / 2.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub matrix: SL2Matrix,
    pub trace: i64,
    pub conjugacy_class: ConjugacyClass,
    pub matrix_order: MatrixOrder,
    /// Largest eigenvalue as an exact surd; present whenever `|Tr| >= 2`
    /// (equals 1 in the parabolic and +/-identity cases), absent for
    /// elliptic matrices whose eigenvalues are not real.
    pub lambda_max: Option<QuadraticSurd>,
    pub chaotic: bool,
    pub entropy_nats: f64,
    pub entropy_bits: f64,
    pub trace_mode: TraceMode,
}

impl SpectralReport {
    /// TSV row: a,b,c,d,trace,class,order,lambda_decimal,entropy_nats,entropy_bits,chaotic
    pub fn tsv_row(&self) -> String {
        let order = match self.matrix_order {
            MatrixOrder::Finite(n) => n.to_string(),
            MatrixOrder::Infinite => "infinite".to_string(),
        };
        let lambda = self
            .lambda_max
            .as_ref()
            .map(|s| s.decimal.clone())
            .unwrap_or_else(|| "-".to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.12}\t{:.12}\t{}",
            self.matrix.a,
            self.matrix.b,
            self.matrix.c,
            self.matrix.d,
            self.trace,
            self.conjugacy_class.as_str(),
            order,
            lambda,
            self.entropy_nats,
            self.entropy_bits,
            self.chaotic
        )
    }

    pub const TSV_HEADER: &'static str =
        "a\tb\tc\td\ttrace\tclass\torder\tlambda_decimal\tentropy_nats\tentropy_bits\tchaotic";
}

// The maximum finite order in SL(2,Z) is 6; searching to 12 leaves slack.
const ORDER_SEARCH_CAP: u32 = 12;

fn matrix_order(c: &SL2Matrix) -> MatrixOrder {
    // |Tr| >= 2 and C != +-I means infinite order; skipping the iteration
    // there also keeps hyperbolic powers of large-entry matrices from
    // overflowing. Elliptic iterates stay bounded near |C| itself.
    let is_identity = *c == SL2Matrix::identity();
    let is_minus_identity = c.a == -1 && c.b == 0 && c.c == 0 && c.d == -1;
    if c.trace().abs() >= 2 && !is_identity && !is_minus_identity {
        return MatrixOrder::Infinite;
    }
    let mut acc = *c;
    for k in 1..=ORDER_SEARCH_CAP {
        if acc == SL2Matrix::identity() {
            return MatrixOrder::Finite(k);
        }
        acc = acc.mul(c);
    }
    MatrixOrder::Infinite
}

pub fn classify_matrix(c: &SL2Matrix, mode: TraceMode) -> SpectralReport {
    let t = c.trace();
    let class = if *c == SL2Matrix::identity() {
        ConjugacyClass::Identity
    } else if c.a == -1 && c.b == 0 && c.c == 0 && c.d == -1 {
        ConjugacyClass::MinusIdentity
    } else if t.abs() < 2 {
        ConjugacyClass::Elliptic
    } else if t.abs() == 2 {
        ConjugacyClass::Parabolic
    } else {
        ConjugacyClass::Hyperbolic
    };

    let lambda_max = if t.abs() >= 2 {
        Some(QuadraticSurd::eigenvalue_of_trace(t.unsigned_abs()))
    } else {
        None
    };

    let chaotic = match mode {
        TraceMode::Paper => t > 2,
        TraceMode::Hyperbolic => t.abs() > 2,
    };
    let entropy_nats = if chaotic {
        lambda_max.as_ref().map(|l| l.to_f64().ln()).unwrap_or(0.0)
    } else {
        0.0
    };

    SpectralReport {
        matrix: *c,
        trace: t,
        conjugacy_class: class,
        matrix_order: matrix_order(c),
        lambda_max,
        chaotic,
        entropy_nats,
        entropy_bits: entropy_nats / std::f64::consts::LN_2,
        trace_mode: mode,
    }
}

/// All SL(2,Z) matrices with entries in `[-max_entry, max_entry]`,
/// classified, in row-major enumeration order of (a, b, c, d).
pub fn sweep_classify(max_entry: i64, mode: TraceMode) -> Result<Vec<SpectralReport>> {
    if !(0..=10).contains(&max_entry) {
        return Err(Error::Budget(format!(
            "sweep max_entry must be in 0..=10, got {max_entry}"
        )));
    }
    let m = max_entry;
    let mut out = Vec::new();
    for a in -m..=m {
        for b in -m..=m {
            for c in -m..=m {
                for d in -m..=m {
                    if a as i128 * d as i128 - b as i128 * c as i128 == 1 {
                        out.push(classify_matrix(&SL2Matrix { a, b, c, d }, mode));
                    }
                }
            }
        }
    }
    Ok(out)
}
