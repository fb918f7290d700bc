//! Shared proptest strategies.
#![allow(dead_code)]

use fdlab::measure::{DigitBlock, DigitProduct, Measure, Window};
use proptest::prelude::*;

pub fn leaf() -> impl Strategy<Value = Measure> {
    prop_oneof![
        prop::collection::vec((0.0..=1.0f64, 0.01..2.0f64), 1..5).prop_map(|a| Measure::atomic_1d(&a).unwrap()),
        (0.0..0.9f64, 0.01..0.5f64).prop_map(|(a, l)| Measure::uniform_on_intervals(&[(a, (a + l).min(1.0))]).unwrap()),
        (-0.5..0.5f64, 1u64..40, -0.5..0.5f64, 1u64..40)
            .prop_map(|(c1, f1, c2, f2)| Measure::trig_density(&[(c1, f1), (c2, f2)]).unwrap()),
        (2u32..5, 1u32..4).prop_map(|(b, d)| Measure::self_similar_digit(b, &(0..b).step_by(d as usize).collect::<Vec<_>>()).unwrap()),
        (1u32..6).prop_map(|o| Measure::digit_product(DigitProduct::new(2, 12, vec![DigitBlock::no_zero_run(o, 3)]).unwrap()).unwrap()),
    ]
}

pub fn random_measure() -> impl Strategy<Value = Measure> {
    leaf().prop_recursive(2, 8, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), 0.1..2.0f64, 0.1..2.0f64)
                .prop_map(|(a, b, w1, w2)| Measure::mixture(&[a, b], &[w1, w2]).unwrap()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.convolve(&b).unwrap()),
            (inner, -3.0..3.0f64, -1.0..1.0f64).prop_map(|(m, a, b)| {
                let a = if a.abs() < 0.1 { 0.5 } else { a };
                m.scaled(a, b, false).unwrap()
            }),
        ]
    })
}


/// Measures with a density and no self-similar part, for the quadrature oracle.
pub fn density_measure() -> impl Strategy<Value = Measure> {
    let leaf = prop_oneof![
        (0.0..0.9f64, 0.01..0.5f64).prop_map(|(a, l)| Measure::uniform_on_intervals(&[(a, (a + l).min(1.0))]).unwrap()),
        (-0.5..0.5f64, 1u64..40, -0.5..0.5f64, 1u64..40)
            .prop_map(|(c1, f1, c2, f2)| Measure::trig_density(&[(c1, f1), (c2, f2)]).unwrap()),
        (1u32..6).prop_map(|o| Measure::digit_product(DigitProduct::new(2, 10, vec![DigitBlock::no_zero_run(o, 3)]).unwrap()).unwrap()),
        (0.2..0.8f64, 0.1..0.3f64, 2u32..5)
            .prop_map(|(c, r, k)| Measure::lebesgue().windowed(Window::new(c, r, k).unwrap()).unwrap()),
    ];
    leaf.prop_recursive(1, 4, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), 0.1..2.0f64).prop_map(|(a, b, w)| Measure::mixture(&[a, b], &[w, 1.0]).unwrap()),
            (inner, 0.3..2.0f64, -0.5..0.5f64).prop_map(|(m, a, b)| m.scaled(a, b, false).unwrap()),
        ]
    })
}

/// Finite atomic measures on `[0, 1]`.
pub fn atomic_measure() -> impl Strategy<Value = Measure> {
    prop::collection::vec((0.0..=1.0f64, 0.01..2.0f64), 1..6).prop_map(|a| Measure::atomic_1d(&a).unwrap())
}
