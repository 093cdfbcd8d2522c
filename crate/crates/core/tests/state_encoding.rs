//! Roundtrip coverage for the exact state-vector serialization, using
//! rational points on unit spheres from stereographic projection (the
//! standard way to draw exactly normalized rational vectors).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use nct_core::depth::{decode_state, encode_state, GaussianRational};
use nct_core::rng::SplitMix64;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational point on the unit sphere in dimension `dim` from a rational
/// parameter vector t: `((|t|^2 - 1, 2 t_1, ..., 2 t_{dim-1}) / (|t|^2 + 1)`.
fn sphere_point(t: &[BigRational]) -> Vec<BigRational> {
    let norm_sq: BigRational = t.iter().map(|x| x * x).fold(BigRational::zero(), |a, b| a + b);
    let denom = &norm_sq + BigRational::one();
    let mut out = Vec::with_capacity(t.len() + 1);
    out.push((&norm_sq - BigRational::one()) / &denom);
    for x in t {
        out.push(rat(2, 1) * x / &denom);
    }
    out
}

fn random_state(rng: &mut SplitMix64, qubits: u32) -> Vec<GaussianRational> {
    let amp_count = 1usize << qubits;
    // 2 * amp_count real components -> parameter vector one shorter
    let t: Vec<BigRational> = (0..2 * amp_count - 1)
        .map(|_| {
            let num = rng.next_signed(40);
            let den = 1 + rng.next_below(40) as i64;
            rat(num, den)
        })
        .collect();
    let comps = sphere_point(&t);
    comps
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect()
}

#[test]
fn roundtrip_hundred_random_states() {
    let mut rng = SplitMix64::new(0x57A7E);
    for round in 0..100 {
        let qubits = 1 + (round % 3) as u32; // n <= 3
        let psi = random_state(&mut rng, qubits);
        // the parametrization is exactly normalized
        let norm: BigRational = psi
            .iter()
            .map(|(re, im)| re * re + im * im)
            .fold(BigRational::zero(), |a, b| a + b);
        assert!(norm.is_one(), "sphere point must have unit norm");

        let enc = encode_state(&psi).expect("normalized state encodes");
        let dec = decode_state(&enc).expect("encoding decodes");
        assert_eq!(dec, psi, "roundtrip at round {round}");
    }
}

#[test]
fn depth_of_an_encoded_state_is_queryable() {
    // the depth of a state is the depth of its canonical bit encoding
    let zero_ket = vec![(rat(1, 1), rat(0, 1)), (rat(0, 1), rat(0, 1))];
    let bits = encode_state(&zero_ket).unwrap();
    let lab = nct_core::depth::DepthLab::build(14, 2048).unwrap();
    let bracket = lab.logical_depth(&bits, 1);
    assert_eq!(bracket.l_max, 14);
    assert_eq!(bracket.t_max, 2048);
    assert_eq!(bracket.label, "toy-machine depth (budget-relative)");
    // basis-state encodings already exceed the literal reach of this
    // budget unless some structured program hits them; either way the
    // bracket is well-formed
    if let Some(u) = bracket.upper {
        assert!(bracket.lower <= u);
    } else {
        assert!(bracket.no_producer || bracket.lower <= bracket.t_max);
    }
}

#[test]
fn encoding_is_injective_on_a_sample() {
    let mut rng = SplitMix64::new(0x1D);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..50 {
        let psi = random_state(&mut rng, 2);
        let enc = encode_state(&psi).unwrap();
        assert!(seen.insert(enc), "distinct states must encode distinctly");
    }
}
