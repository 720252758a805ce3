//! Shared fixtures for the benchmark targets.

use std::collections::BTreeMap;

use covol_core::numfield::{validate_field, FieldSpec, NumberField};
use covol_core::quatalg::{validate_algebra, QuaternionAlgebra};

pub fn gaussian_field() -> NumberField {
    validate_field(&FieldSpec {
        label: "Qi".into(),
        poly: vec![1, 0, 1],
        r1: 0,
        r2: 1,
        d_k: 4,
        h_k: 1,
        reg_k: 1.0,
        omega_k: 4,
        bad_prime_splittings: BTreeMap::new(),
    })
    .expect("valid field")
}

pub fn cubic_field() -> NumberField {
    validate_field(&FieldSpec {
        label: "C23".into(),
        poly: vec![-1, -1, 0, 1],
        r1: 1,
        r2: 1,
        d_k: 23,
        h_k: 1,
        reg_k: 0.2811995743229618,
        omega_k: 2,
        bad_prime_splittings: BTreeMap::new(),
    })
    .expect("valid field")
}

pub fn gaussian_algebra() -> QuaternionAlgebra {
    validate_algebra(&gaussian_field(), "Qi-B23", &[], &[(2, 0), (3, 0)]).expect("valid algebra")
}
