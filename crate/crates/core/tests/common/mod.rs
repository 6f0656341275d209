#![allow(dead_code)]

use cii_core::{EstimatorContext, LifeTable, MatrixSequence, Sex};

pub const MALE_LIFE: &str = include_str!("../data/life_male.csv");
pub const FEMALE_LIFE: &str = include_str!("../data/life_female.csv");

/// Synthetic Gompertz-Makeham life table for tests; not real mortality.
pub fn life_table(sex: Sex) -> LifeTable<f64> {
    let text = match sex {
        Sex::Male => MALE_LIFE,
        Sex::Female => FEMALE_LIFE,
    };
    LifeTable::load(text.as_bytes(), sex).unwrap()
}

pub fn context(sex: Sex) -> EstimatorContext<f64> {
    EstimatorContext::with_bundled_rates(life_table(sex)).unwrap()
}

pub fn sequence(sex: Sex) -> MatrixSequence<f64> {
    MatrixSequence::build(&context(sex)).unwrap()
}

pub fn logistic(z: f64) -> f64 {
    z.exp() / (1.0 + z.exp())
}
