//! Final classification of a torus automorphism, with the supporting
//! evidence panel.
//!
//! The decision tree is a pure function of the spectral report:
//! chaotic matrices are shallow by theorem (no empirical run needed);
//! finite-order matrices give eventually periodic symbolic orbits, hence
//! compressible, fast-describable words; the remaining non-chaotic cases
//! (parabolic shears and, in literal trace mode, hyperbolic matrices with
//! trace below -2) carry no decision procedure either way, so they are
//! reported as indeterminate with measured evidence attached. No input
//! ever receives a "complex" verdict: there is a theorem excluding depth
//! for chaotic automorphisms but no criterion certifying it for any
//! specific non-chaotic one.

use serde::Serialize;

use crate::afl::{afl_profile, builtin_partition, AflProfile, BuiltinPartition};
use crate::codec::change_basis;
use crate::depth::{DepthBracket, DepthLab};
use crate::dynamics::{GridPartition, TorusAction};
use crate::entropy::{orbit_words, BrudnoReport};
use crate::error::Result;
use crate::sl2z::{classify_matrix, MatrixOrder, SL2Matrix, SpectralReport, TraceMode};
use crate::weyl::ThetaParam;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ChaoticShallow,
    NonchaoticFiniteOrderShallow,
    NonchaoticParabolicIndeterminate,
    NonchaoticIndeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ChaoticShallow => "chaotic_shallow",
            Verdict::NonchaoticFiniteOrderShallow => "nonchaotic_finite_order_shallow",
            Verdict::NonchaoticParabolicIndeterminate => "nonchaotic_parabolic_indeterminate",
            Verdict::NonchaoticIndeterminate => "nonchaotic_indeterminate",
        }
    }
}

/// Fixed enumeration of citable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    AflCntKsFormula,
    ChaoticImpliesShallow,
    CorollaryChaoticSet,
    BrudnoProxy,
    ToyDepth,
}

impl TheoremTag {
    pub fn tag(&self) -> &'static str {
        match self {
            TheoremTag::AflCntKsFormula => "afl-cnt-ks-formula",
            TheoremTag::ChaoticImpliesShallow => "chaotic-implies-shallow",
            TheoremTag::CorollaryChaoticSet => "corollary-chaotic-set",
            TheoremTag::BrudnoProxy => "brudno-proxy",
            TheoremTag::ToyDepth => "toy-depth",
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            TheoremTag::AflCntKsFormula => {
                "the dynamical entropy of the induced automorphism equals ln(lambda) when Tr(C) > 2 and 0 otherwise"
            }
            TheoremTag::ChaoticImpliesShallow => {
                "Quantum chaoticity implies quantum shallowness: Aut_chaotic and Aut_complex are disjoint"
            }
            TheoremTag::CorollaryChaoticSet => {
                "the chaotic automorphisms are exactly those with Tr(C) > 2"
            }
            TheoremTag::BrudnoProxy => {
                "the incremental-parse rate is a computable upper-bound proxy for the per-symbol trajectory complexity"
            }
            TheoremTag::ToyDepth => {
                "depth brackets are toy-machine quantities, exact only relative to their budgets"
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RationaleEntry {
    pub tag: &'static str,
    pub statement: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct BrudnoEvidence {
    pub grid_m: u32,
    pub word_length: usize,
    pub seeds: u64,
    pub mean_rate_bits_per_symbol: f64,
    pub per_seed: Vec<BrudnoReport>,
    pub label: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthEvidence {
    /// Bits fed to the machine: prefix of the base-2 converted orbit word.
    pub bits: String,
    pub bracket: DepthBracket,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Evidence {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub afl: Option<AflProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brudno: Option<BrudnoEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<DepthEvidence>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationVerdict {
    pub matrix: SL2Matrix,
    pub theta: String,
    pub spectral: SpectralReport,
    pub verdict: Verdict,
    pub rationale: Vec<RationaleEntry>,
    pub evidence: Evidence,
    pub seed: u64,
}

/// Everything the evidence pipeline needs; defaults are desk-scale.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    pub trace_mode: TraceMode,
    pub seed: u64,
    pub precision_bits: u32,
    /// Gather the empirical panel even when a theorem already decides.
    pub force_evidence: bool,
    pub afl_partition: BuiltinPartition,
    pub afl_n_max: usize,
    pub brudno_grid_m: u32,
    pub brudno_length: usize,
    pub brudno_seeds: u64,
    pub depth_prefix_bits: usize,
    pub depth_significance: u32,
    pub depth_l_max: u32,
    pub depth_t_max: u64,
    pub action: TorusAction,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            trace_mode: TraceMode::Paper,
            seed: 0x5EED_0001,
            precision_bits: 512,
            force_evidence: false,
            afl_partition: BuiltinPartition::Weyl8,
            afl_n_max: 4,
            brudno_grid_m: 4,
            brudno_length: 1 << 16,
            brudno_seeds: 4,
            depth_prefix_bits: 12,
            depth_significance: 1,
            depth_l_max: 14,
            depth_t_max: 1024,
            action: TorusAction::Transpose,
        }
    }
}

fn gather_evidence(
    c: &SL2Matrix,
    theta: &ThetaParam,
    opts: &ClassifyOptions,
) -> Result<Evidence> {
    let partition = builtin_partition::<f64>(theta, opts.afl_partition);
    let afl = afl_profile(c, &partition, opts.afl_n_max, opts.afl_partition.name())?;

    let grid = GridPartition::new(opts.brudno_grid_m)?;
    let words = orbit_words(
        c,
        &grid,
        opts.brudno_length,
        opts.precision_bits,
        opts.seed,
        opts.brudno_seeds,
        opts.action,
    )?;
    // the trajectory-complexity composition parses the binary conversion
    let per_seed: Vec<BrudnoReport> = words
        .iter()
        .map(crate::entropy::brudno_rate_binary)
        .collect::<Result<_>>()?;
    let mean = per_seed.iter().map(|r| r.rate_bits_per_symbol).sum::<f64>()
        / per_seed.len().max(1) as f64;
    let brudno = BrudnoEvidence {
        grid_m: opts.brudno_grid_m,
        word_length: opts.brudno_length,
        seeds: opts.brudno_seeds,
        mean_rate_bits_per_symbol: mean,
        per_seed,
        label: crate::entropy::BRUDNO_LABEL,
    };

    // depth bracket of a binary prefix of the first orbit word
    let binary = change_basis(&words[0], 2, opts.depth_prefix_bits)?;
    let bits: Vec<u8> = binary.digits().iter().map(|&d| d as u8).collect();
    let lab = DepthLab::build(opts.depth_l_max, opts.depth_t_max)?;
    let bracket = lab.logical_depth(&bits, opts.depth_significance);
    let depth = DepthEvidence {
        bits: bits.iter().map(|b| char::from(b'0' + b)).collect(),
        bracket,
    };

    Ok(Evidence { afl: Some(afl), brudno: Some(brudno), depth: Some(depth) })
}

/// Classify the automorphism of `c` and assemble the verdict report.
pub fn classify_automorphism(
    c: &SL2Matrix,
    theta: &ThetaParam,
    opts: &ClassifyOptions,
) -> Result<ClassificationVerdict> {
    let spectral = classify_matrix(c, opts.trace_mode);

    let mut rationale = vec![RationaleEntry {
        tag: TheoremTag::AflCntKsFormula.tag(),
        statement: TheoremTag::AflCntKsFormula.statement(),
    }];

    let verdict = if spectral.chaotic {
        rationale.push(RationaleEntry {
            tag: TheoremTag::CorollaryChaoticSet.tag(),
            statement: TheoremTag::CorollaryChaoticSet.statement(),
        });
        rationale.push(RationaleEntry {
            tag: TheoremTag::ChaoticImpliesShallow.tag(),
            statement: TheoremTag::ChaoticImpliesShallow.statement(),
        });
        Verdict::ChaoticShallow
    } else if matches!(spectral.matrix_order, MatrixOrder::Finite(_)) {
        Verdict::NonchaoticFiniteOrderShallow
    } else if spectral.conjugacy_class == crate::sl2z::ConjugacyClass::Parabolic {
        Verdict::NonchaoticParabolicIndeterminate
    } else {
        // hyperbolic with trace < -2 under the literal trace criterion
        Verdict::NonchaoticIndeterminate
    };

    let wants_evidence = opts.force_evidence
        || matches!(
            verdict,
            Verdict::NonchaoticParabolicIndeterminate | Verdict::NonchaoticIndeterminate
        );
    let evidence = if wants_evidence {
        let ev = gather_evidence(c, theta, opts)?;
        rationale.push(RationaleEntry {
            tag: TheoremTag::BrudnoProxy.tag(),
            statement: TheoremTag::BrudnoProxy.statement(),
        });
        rationale.push(RationaleEntry {
            tag: TheoremTag::ToyDepth.tag(),
            statement: TheoremTag::ToyDepth.statement(),
        });
        ev
    } else {
        Evidence::default()
    };

    Ok(ClassificationVerdict {
        matrix: *c,
        theta: theta.describe(),
        spectral,
        verdict,
        rationale,
        evidence,
        seed: opts.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> ThetaParam {
        ThetaParam::rational(1, 5).unwrap()
    }

    fn quick_opts() -> ClassifyOptions {
        ClassifyOptions {
            brudno_length: 2048,
            brudno_seeds: 2,
            afl_n_max: 2,
            depth_l_max: 12,
            depth_t_max: 512,
            ..ClassifyOptions::default()
        }
    }

    #[test]
    fn cat_is_chaotic_shallow_with_theorem_citations() {
        let c = SL2Matrix::new(1, 1, 1, 2).unwrap();
        let v = classify_automorphism(&c, &theta(), &quick_opts()).unwrap();
        assert_eq!(v.verdict, Verdict::ChaoticShallow);
        assert!(v
            .rationale
            .iter()
            .any(|r| r.statement.contains("Quantum chaoticity implies quantum shallowness")));
        assert!(v.rationale.iter().any(|r| r.tag == "chaotic-implies-shallow"));
        // lazy evidence: theorems short-circuit the empirical runs
        assert!(v.evidence.afl.is_none());
        assert!(v.evidence.brudno.is_none());
    }

    #[test]
    fn identity_is_finite_order_shallow() {
        let v =
            classify_automorphism(&SL2Matrix::identity(), &theta(), &quick_opts()).unwrap();
        assert_eq!(v.verdict, Verdict::NonchaoticFiniteOrderShallow);
        assert!(!v.rationale.is_empty());
    }

    #[test]
    fn parabolic_shear_is_indeterminate_with_evidence() {
        let c = SL2Matrix::new(1, 1, 0, 1).unwrap();
        let v = classify_automorphism(&c, &theta(), &quick_opts()).unwrap();
        assert_eq!(v.verdict, Verdict::NonchaoticParabolicIndeterminate);
        let b = v.evidence.brudno.as_ref().expect("brudno evidence attached");
        assert!(b.mean_rate_bits_per_symbol >= 0.0);
        assert!(v.evidence.depth.is_some());
        assert!(v.evidence.afl.is_some());
        assert!(v.rationale.iter().any(|r| r.tag == "brudno-proxy"));
        assert!(v.rationale.iter().any(|r| r.tag == "toy-depth"));
    }

    #[test]
    fn negative_cat_depends_on_mode() {
        let c = SL2Matrix::new(-1, -1, -1, -2).unwrap();
        let paper = classify_automorphism(&c, &theta(), &quick_opts()).unwrap();
        assert_eq!(paper.verdict, Verdict::NonchaoticIndeterminate);
        let mut opts = quick_opts();
        opts.trace_mode = TraceMode::Hyperbolic;
        let hyp = classify_automorphism(&c, &theta(), &opts).unwrap();
        assert_eq!(hyp.verdict, Verdict::ChaoticShallow);
    }

    #[test]
    fn no_chaotic_matrix_gets_indeterminate() {
        for r in crate::sl2z::sweep_classify(2, TraceMode::Paper).unwrap() {
            let v = classify_automorphism(&r.matrix, &theta(), &quick_opts()).unwrap();
            if r.chaotic {
                assert_eq!(v.verdict, Verdict::ChaoticShallow);
            } else {
                assert_ne!(v.verdict, Verdict::ChaoticShallow);
            }
        }
    }

    #[test]
    fn verdict_is_deterministic() {
        let c = SL2Matrix::new(1, 1, 0, 1).unwrap();
        let a = classify_automorphism(&c, &theta(), &quick_opts()).unwrap();
        let b = classify_automorphism(&c, &theta(), &quick_opts()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
