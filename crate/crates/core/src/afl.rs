//! Entropy production of torus automorphisms under repeated coarse-grained
//! measurement: operational partitions of unity, their refinements along
//! the dynamics, correlation matrices and von Neumann entropies, and
//! finite-n rate profiles.
//!
//! Two routes to the entropy of a refined partition exist and are kept
//! deliberately independent:
//!
//! * the dense route builds the correlation matrix `rho_ij = tau(x_j* x_i)`
//!   and diagonalizes it with the Jacobi solver — works for any partition,
//!   budgeted at dimension 4096;
//! * the exact route applies when every partition element is a single
//!   scaled monomial: `rho` is then block diagonal by exponent class with
//!   rank-one blocks, so its nonzero spectrum is exactly the weight
//!   distribution of exponent classes, obtained by convolving per-step
//!   exponent laws. This extends profiles far beyond the dense budget.
//!
//! Reported profile values are finite-n lower-bound proxies for the
//! supremum-based entropy; no limit claim is made.

use std::collections::HashMap;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jacobi::{hermitian_eigenvalues, HermitianMatrix};
use crate::scalar::{s, Scalar};
use crate::sl2z::SL2Matrix;
use crate::weyl::{apply_auto, ThetaParam, WeylElement};

/// Construction tolerance for the partition-of-unity identity.
const UNITY_TOL: f64 = 1e-10;
/// Hermitian / unit-trace tolerance for correlation matrices.
const RHO_TOL: f64 = 1e-10;
/// PSD slack: eigenvalues below this are a hard error.
const PSD_FLOOR: f64 = -1e-9;

/// Spec tolerances assume an f64-class scalar; coarser scalars widen to a
/// few ulps of their own precision.
fn tol_for<S: Scalar>(spec: f64) -> S {
    let spec = s::<S>(spec);
    let ulp = S::epsilon() * s::<S>(64.0);
    if ulp > spec {
        ulp
    } else {
        spec
    }
}

/// Dense-route budget: largest correlation-matrix dimension.
pub const DENSE_DIM_BUDGET: usize = 4096;
/// Exact-route budget: largest refined-partition size.
pub const EXACT_SIZE_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    Bits,
    Nats,
}

impl LogBase {
    fn apply<S: Scalar>(&self, nats: S) -> S {
        match self {
            LogBase::Nats => nats,
            LogBase::Bits => nats / s(std::f64::consts::LN_2),
        }
    }
}

/// Ordered tuple `(x_1, ..., x_k)` with `sum x_i* x_i = I`, checked at
/// construction to coefficient tolerance 1e-10.
#[derive(Debug, Clone)]
pub struct OperationalPartition<S: Scalar> {
    elements: Vec<WeylElement<S>>,
}

impl<S: Scalar> OperationalPartition<S> {
    pub fn new(elements: Vec<WeylElement<S>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvariantViolation("empty operational partition".into()));
        }
        let theta = elements[0].theta().clone();
        let mut sum = WeylElement::zero(theta.clone());
        for x in &elements {
            if *x.theta() != theta {
                return Err(Error::ThetaMismatch);
            }
            sum = sum.add(&x.adjoint().mul(x)?)?;
        }
        let dev = sum.max_deviation(&WeylElement::identity(theta));
        if dev > tol_for::<S>(UNITY_TOL) {
            return Err(Error::PartitionUnity {
                deviation: dev.to_f64().unwrap_or(f64::INFINITY),
                tolerance: UNITY_TOL,
            });
        }
        Ok(OperationalPartition { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement<S>] {
        &self.elements
    }

    pub fn theta(&self) -> &ThetaParam {
        self.elements[0].theta()
    }

    /// Every element a single scaled monomial?
    pub fn is_monomial(&self) -> bool {
        self.elements.iter().all(|x| x.single_term().is_some())
    }

    /// Elementwise image under the automorphism of `c` (again a partition).
    pub fn apply_auto(&self, c: &SL2Matrix) -> Result<Self> {
        OperationalPartition::new(self.elements.iter().map(|x| apply_auto(c, x)).collect())
    }
}

/// Composition `(x_i y_j)` in lexicographic `(i, j)` order.
pub fn refine<S: Scalar>(
    x: &OperationalPartition<S>,
    y: &OperationalPartition<S>,
) -> Result<OperationalPartition<S>> {
    let mut elements = Vec::with_capacity(x.len() * y.len());
    for xi in x.elements() {
        for yj in y.elements() {
            elements.push(xi.mul(yj)?);
        }
    }
    OperationalPartition::new(elements)
}

/// Hermitian, trace-1, positive semidefinite matrix `tau(x_j* x_i)`.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix<S: Scalar> {
    matrix: HermitianMatrix<S>,
}

impl<S: Scalar> CorrelationMatrix<S> {
    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<S> {
        self.matrix.get(i, j)
    }

    /// Validated constructor used by tests; prefer [`correlation_matrix`].
    pub fn new(dim: usize, data: Vec<Complex<S>>) -> Result<Self> {
        let m = HermitianMatrix::new(dim, data);
        let rho = CorrelationMatrix { matrix: m };
        rho.check_hermitian_trace()?;
        Ok(rho)
    }

    fn check_hermitian_trace(&self) -> Result<()> {
        let n = self.matrix.dim;
        let tol = tol_for::<S>(RHO_TOL);
        for i in 0..n {
            for j in i..n {
                let d = (self.matrix.get(i, j) - self.matrix.get(j, i).conj()).norm();
                if d > tol {
                    return Err(Error::InvariantViolation(format!(
                        "correlation matrix not Hermitian at ({i},{j}): deviation {:.3e}",
                        d.to_f64().unwrap_or(f64::NAN)
                    )));
                }
            }
        }
        let trace: S = (0..n).map(|i| self.matrix.get(i, i).re).sum();
        if (trace - S::one()).abs() > tol {
            return Err(Error::InvariantViolation(format!(
                "correlation matrix trace {} != 1",
                trace
            )));
        }
        Ok(())
    }

    /// Eigenvalues clamped into `[0, 1]` after the PSD check.
    pub fn eigenvalues(&self) -> Result<Vec<S>> {
        let raw = hermitian_eigenvalues(&self.matrix)?;
        let floor = s::<S>(PSD_FLOOR);
        let ceil = S::one() - floor; // 1 + 1e-9
        let mut out = Vec::with_capacity(raw.len());
        for l in raw {
            if l < floor {
                return Err(Error::PsdViolation { eigenvalue: l.to_f64().unwrap_or(f64::NAN) });
            }
            if l > ceil {
                return Err(Error::InvariantViolation(format!(
                    "correlation eigenvalue {l} exceeds 1"
                )));
            }
            out.push(l.max(S::zero()).min(S::one()));
        }
        Ok(out)
    }
}

/// `rho[X]_(i,j) = tau(x_j* x_i)`.
pub fn correlation_matrix<S: Scalar>(x: &OperationalPartition<S>) -> Result<CorrelationMatrix<S>> {
    let k = x.len();
    let mut data = vec![Complex::new(S::zero(), S::zero()); k * k];
    for i in 0..k {
        for j in 0..k {
            let prod = x.elements()[j].adjoint().mul(&x.elements()[i])?;
            data[i * k + j] = prod.trace_state();
        }
    }
    let rho = CorrelationMatrix { matrix: HermitianMatrix::new(k, data) };
    rho.check_hermitian_trace()?;
    Ok(rho)
}

/// `-sum lambda log lambda` over the spectrum, with `0 log 0 = 0`.
pub fn von_neumann_entropy<S: Scalar>(rho: &CorrelationMatrix<S>, base: LogBase) -> Result<S> {
    let eig = rho.eigenvalues()?;
    Ok(base.apply(entropy_of_weights(&eig)))
}

fn entropy_of_weights<S: Scalar>(w: &[S]) -> S {
    let mut h = S::zero();
    for &p in w {
        if p > S::zero() {
            h -= p * p.ln();
        }
    }
    h
}

/// Coarse-graining map `Gamma_X(A) = sum_ij a_ij x_i* x_j`.
pub fn coarse_graining_map<S: Scalar>(
    x: &OperationalPartition<S>,
    a: &[Vec<Complex<S>>],
) -> Result<WeylElement<S>> {
    let k = x.len();
    if a.len() != k || a.iter().any(|row| row.len() != k) {
        return Err(Error::InvariantViolation(format!("coarse-graining matrix must be {k}x{k}")));
    }
    let mut out = WeylElement::zero(x.theta().clone());
    for (i, row) in a.iter().enumerate() {
        let xi_adj = x.elements()[i].adjoint();
        for (j, &aij) in row.iter().enumerate() {
            if aij == Complex::new(S::zero(), S::zero()) {
                continue;
            }
            let term = xi_adj.mul(&x.elements()[j])?.scale(aij);
            out = out.add(&term)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinPartition {
    Weyl2,
    Weyl4,
    Weyl8,
}

impl BuiltinPartition {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "weyl2" => Ok(BuiltinPartition::Weyl2),
            "weyl4" => Ok(BuiltinPartition::Weyl4),
            "weyl8" => Ok(BuiltinPartition::Weyl8),
            _ => Err(Error::Parse(format!("unknown partition '{text}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinPartition::Weyl2 => "weyl2",
            BuiltinPartition::Weyl4 => "weyl4",
            BuiltinPartition::Weyl8 => "weyl8",
        }
    }
}

/// Scaled-unitary monomial families: any unitaries `w_i` satisfy
/// `sum (w_i/sqrt(k))* (w_i/sqrt(k)) = I`.
pub fn builtin_partition<S: Scalar>(
    theta: &ThetaParam,
    which: BuiltinPartition,
) -> OperationalPartition<S> {
    let mono = |r: i64, sx: i64, scale: f64| {
        WeylElement::monomial(theta.clone(), r, sx, Complex::new(s::<S>(scale), S::zero()))
    };
    let elements = match which {
        BuiltinPartition::Weyl2 => {
            let w = 1.0 / 2.0f64.sqrt();
            vec![mono(1, 0, w), mono(0, 1, w)]
        }
        BuiltinPartition::Weyl4 => {
            vec![mono(0, 0, 0.5), mono(1, 0, 0.5), mono(0, 1, 0.5), mono(1, 1, 0.5)]
        }
        BuiltinPartition::Weyl8 => {
            let w = 1.0 / 8.0f64.sqrt();
            vec![
                mono(0, 0, w),
                mono(1, 0, w),
                mono(0, 1, w),
                mono(1, 1, w),
                mono(-1, 0, w),
                mono(0, -1, w),
                mono(2, 0, w),
                mono(0, 2, w),
            ]
        }
    };
    OperationalPartition::new(elements).expect("builtin families satisfy the unity identity")
}

/// How an entropy value in a profile row was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyRoute {
    Jacobi,
    ExponentClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct AflRow {
    pub n: usize,
    /// Size of the n-fold refined partition.
    pub dim: u64,
    pub h_bits: f64,
    pub h_over_n: f64,
    /// `H_n - H_(n-1)`; equals `H_1` at n = 1.
    pub slope: f64,
    pub route: EntropyRoute,
}

#[derive(Debug, Clone, Serialize)]
pub struct AflProfile {
    pub matrix: SL2Matrix,
    pub partition: String,
    pub k: usize,
    pub rows: Vec<AflRow>,
    /// Present when the budget stopped the profile before `n_max`.
    pub truncated: Option<String>,
    /// Finite-n values only; lower-bound proxy for the supremum entropy.
    pub label: &'static str,
}

pub const AFL_PROFILE_LABEL: &str =
    "finite-n lower-bound proxy over a fixed partition family; not a limit";

impl AflProfile {
    pub fn tsv(&self) -> String {
        let mut out = String::from("n\tdim\tH_bits\tH_over_n\tslope\troute\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{:.9}\t{:.9}\t{:.9}\t{}\n",
                r.n,
                r.dim,
                r.h_bits,
                r.h_over_n,
                r.slope,
                match r.route {
                    EntropyRoute::Jacobi => "jacobi",
                    EntropyRoute::ExponentClass => "exponent-class",
                }
            ));
        }
        out
    }
}

/// Exponent-class weights of the n-fold refinement of a monomial
/// partition under the automorphism of `c`: the exact nonzero spectrum of
/// the refined correlation matrix.
///
/// Step `j` contributes exponents `C^j e_i` with weight `|c_i|^2`; the
/// class weights of the product partition are the n-fold convolution of
/// these per-step laws.
pub fn exponent_class_weights<S: Scalar>(
    c: &SL2Matrix,
    x: &OperationalPartition<S>,
    n: usize,
) -> Result<Vec<S>> {
    if !x.is_monomial() {
        return Err(Error::InvariantViolation(
            "exponent-class route requires a monomial partition".into(),
        ));
    }
    let mut step: Vec<((i64, i64), S)> = x
        .elements()
        .iter()
        .map(|e| {
            let ((r, sx), coeff) = e.single_term().expect("monomial checked");
            ((r, sx), coeff.norm_sqr())
        })
        .collect();

    let mut acc: HashMap<(i64, i64), S> = HashMap::new();
    acc.insert((0, 0), S::one());
    for level in 0..n {
        if level > 0 {
            // advance the per-step law by one application of C
            for ((r, sx), _) in step.iter_mut() {
                let (nr, ns) = (c.a * *r + c.c * *sx, c.b * *r + c.d * *sx);
                *r = nr;
                *sx = ns;
            }
        }
        let mut next: HashMap<(i64, i64), S> =
            HashMap::with_capacity(acc.len() * step.len().min(4));
        for (&(ar, asx), &aw) in &acc {
            for &((br, bsx), bw) in &step {
                *next.entry((ar + br, asx + bsx)).or_insert_with(S::zero) += aw * bw;
            }
        }
        acc = next;
        if acc.len() as u64 > EXACT_SIZE_BUDGET {
            return Err(Error::Budget(format!(
                "exponent-class support exceeded {EXACT_SIZE_BUDGET}"
            )));
        }
    }
    // deterministic ordering: hash-map iteration must not leak into sums
    let mut pairs: Vec<((i64, i64), S)> = acc.into_iter().collect();
    pairs.sort_by_key(|(e, _)| *e);
    Ok(pairs.into_iter().map(|(_, w)| w).collect())
}

/// Profile `H_n` for `n = 1..=n_max` of the partition refined along the
/// automorphism, newest factor leftmost:
/// `X_n = alpha^(n-1)(X) o ... o alpha(X) o X`.
///
/// Monomial partitions use the exact exponent-class route; general
/// partitions go through the dense correlation matrix and stop with a
/// truncation marker once `k^n` exceeds [`DENSE_DIM_BUDGET`].
pub fn afl_profile<S: Scalar>(
    c: &SL2Matrix,
    x: &OperationalPartition<S>,
    n_max: usize,
    partition_name: &str,
) -> Result<AflProfile> {
    let k = x.len();
    let monomial = x.is_monomial();
    let mut rows = Vec::new();
    let mut truncated = None;

    // dense-route state, built incrementally
    let mut refined: Option<OperationalPartition<S>> = None;
    let mut newest: Option<OperationalPartition<S>> = None;

    let mut prev_h: f64 = 0.0;
    for n in 1..=n_max {
        let dim = (k as u64).checked_pow(n as u32);
        let h_bits: f64;
        let route;
        if monomial {
            match dim {
                Some(d) if d <= EXACT_SIZE_BUDGET => {}
                _ => {
                    truncated = Some(format!(
                        "exact route budget {EXACT_SIZE_BUDGET} exceeded at n = {n}"
                    ));
                    break;
                }
            }
            let weights = exponent_class_weights(c, x, n)?;
            h_bits = entropy_of_weights(&weights).to_f64().unwrap_or(f64::NAN)
                / std::f64::consts::LN_2;
            route = EntropyRoute::ExponentClass;
        } else {
            match dim {
                Some(d) if d as usize <= DENSE_DIM_BUDGET => {}
                _ => {
                    truncated = Some(format!(
                        "dense route budget {DENSE_DIM_BUDGET} exceeded at n = {n}"
                    ));
                    break;
                }
            }
            let current = match (refined.take(), newest.take()) {
                (None, None) => {
                    newest = Some(x.clone());
                    x.clone()
                }
                (Some(r), Some(nw)) => {
                    let nw2 = nw.apply_auto(c)?;
                    let r2 = refine(&nw2, &r)?;
                    newest = Some(nw2);
                    r2
                }
                _ => unreachable!(),
            };
            let rho = correlation_matrix(&current)?;
            let h: S = von_neumann_entropy(&rho, LogBase::Bits)?;
            h_bits = h.to_f64().unwrap_or(f64::NAN);
            refined = Some(current);
            route = EntropyRoute::Jacobi;
        }
        let dim = dim.expect("within budget");
        rows.push(AflRow {
            n,
            dim,
            h_bits,
            h_over_n: h_bits / n as f64,
            slope: h_bits - prev_h,
            route,
        });
        prev_h = h_bits;
    }

    Ok(AflProfile {
        matrix: *c,
        partition: partition_name.to_string(),
        k,
        rows,
        truncated,
        label: AFL_PROFILE_LABEL,
    })
}

/// Dense-route entropy of the n-fold refined partition, for
/// cross-checking the exact route (bits).
pub fn dense_refined_entropy<S: Scalar>(
    c: &SL2Matrix,
    x: &OperationalPartition<S>,
    n: usize,
) -> Result<S> {
    let mut refined = x.clone();
    let mut newest = x.clone();
    for _ in 1..n {
        newest = newest.apply_auto(c)?;
        refined = refine(&newest, &refined)?;
    }
    if refined.len() > DENSE_DIM_BUDGET {
        return Err(Error::Budget(format!(
            "dense refinement of size {} exceeds {DENSE_DIM_BUDGET}",
            refined.len()
        )));
    }
    von_neumann_entropy(&correlation_matrix(&refined)?, LogBase::Bits)
}
