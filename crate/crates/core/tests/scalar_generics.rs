//! The floating-point layer is generic over the working scalar; this
//! exercises the f32 instantiation end to end and pins the Send + Sync
//! guarantees the concurrency story rests on.

use nct_core::afl::{
    afl_profile, builtin_partition, correlation_matrix, von_neumann_entropy, BuiltinPartition,
    LogBase, OperationalPartition,
};
use nct_core::sl2z::SL2Matrix;
use nct_core::weyl::{apply_auto, ThetaParam, WeylElement};

#[test]
fn f32_algebra_and_profile() {
    let theta = ThetaParam::rational(1, 5).unwrap();
    let u = WeylElement::<f32>::monomial(theta.clone(), 1, 0, num_complex::Complex::new(1.0, 0.0));
    let prod = u.mul(&u.adjoint()).unwrap();
    assert!(prod.max_deviation(&WeylElement::identity(theta.clone())) < 1e-6);

    let cat = SL2Matrix::new(1, 1, 1, 2).unwrap();
    let img = apply_auto(&cat, &u);
    assert_eq!(img.single_term().unwrap().0, (1, 1));

    let x: OperationalPartition<f32> = builtin_partition(&theta, BuiltinPartition::Weyl2);
    let rho = correlation_matrix(&x).unwrap();
    let h = von_neumann_entropy(&rho, LogBase::Bits).unwrap();
    assert!((h - 1.0).abs() < 1e-5, "one bit at f32 precision, got {h}");

    let prof = afl_profile(&cat, &x, 3, "weyl2").unwrap();
    assert!((prof.rows[2].h_bits - 3.0).abs() < 1e-4);
}

#[test]
fn values_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<WeylElement<f64>>();
    check::<ThetaParam>();
    check::<OperationalPartition<f64>>();
    check::<nct_core::sl2z::SpectralReport>();
    check::<nct_core::depth::DepthBracket>();
    check::<nct_core::words::SymbolicWord>();
    check::<nct_core::dynamics::TorusPoint>();
}

#[test]
fn elements_shared_across_threads() {
    let theta = ThetaParam::sqrt2_minus_1(96);
    let u = WeylElement::<f64>::monomial(theta, 1, 0, num_complex::Complex::new(1.0, 0.0));
    let u = std::sync::Arc::new(u);
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let u = u.clone();
            std::thread::spawn(move || {
                let cat = SL2Matrix::new(1, 1, 1, 2).unwrap();
                apply_auto(&cat, &u).single_term().unwrap().0
            })
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), (1, 1));
    }
}
