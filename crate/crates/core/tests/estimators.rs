#![allow(clippy::needless_range_loop)]

mod common;

use cii_core::{EstimatorContext, Sex};
use common::{context, logistic};
use proptest::prelude::*;

const SEXES: [Sex; 2] = [Sex::Male, Sex::Female];

// Survival distribution written out independently of the estimator code.
fn oracle_pmf(sex: Sex, s: u32) -> [f64; 4] {
    let a = s.max(40) as f64;
    match sex {
        Sex::Male => {
            let le1 = logistic(0.044698 * a);
            let le2 = logistic(3.208851 + 0.044698 * a);
            [0.897059 * le1, 0.102941 * le1, le2 - le1, 1.0 - le2]
        }
        Sex::Female => {
            let w = -0.005435 * a + 0.552179;
            let e = (-w).exp();
            [e, w * e, w * w * e / 2.0, 1.0 - e - w * e - w * w * e / 2.0]
        }
    }
}

#[test]
fn row_families_sum_to_one() {
    for sex in SEXES {
        let ctx = context(sex);
        for s in 20..=100 {
            let row1 = ctx.q11(s).unwrap()
                + ctx.q12(s).unwrap()
                + ctx.q13(s).unwrap()
                + ctx.q17(s).unwrap();
            assert!((row1 - 1.0).abs() < 1e-12, "{sex} {s}: {row1}");
            let (a, b, c) = ctx.q2_row(s).unwrap();
            assert!((a + b + c - 1.0).abs() < 1e-12);
            let z = ctx.zeta.lookup(s).unwrap();
            assert!((ctx.q12(s).unwrap() + ctx.q13(s).unwrap() - z).abs() < 1e-15);
            let t = ctx.terminal_probs(s).unwrap();
            for q in [t.q38, t.q48, t.q58] {
                assert!((0.0..=1.0).contains(&q));
            }
            assert_eq!(t.q68, 1.0);
        }
    }
}

#[test]
fn flat_regions_are_exactly_constant() {
    for sex in SEXES {
        let ctx = context(sex);
        let t40 = ctx.terminal_probs(40).unwrap();
        let r45 = ctx.varrho(45).unwrap();
        for s in 20..=40 {
            assert_eq!(ctx.terminal_probs(s).unwrap(), t40);
        }
        for s in 20..45 {
            assert_eq!(ctx.varrho(s).unwrap(), r45);
        }
    }
}

#[test]
fn terminal_probs_are_hazards_of_the_survival_pmf() {
    for sex in SEXES {
        let ctx = context(sex);
        for s in 20..=100 {
            let pmf = ctx.survival_pmf(s).unwrap();
            let oracle = oracle_pmf(sex, s);
            for k in 0..4 {
                assert!((pmf.0[k] - oracle[k]).abs() < 1e-14, "{sex} {s} k={k}");
            }
            assert!((pmf.0.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let t = ctx.terminal_probs(s).unwrap();
            let h1 = oracle[1] / (1.0 - oracle[0]);
            let h2 = oracle[2] / (1.0 - oracle[0] - oracle[1]);
            assert!((t.q38 - oracle[0]).abs() < 1e-12);
            assert!((t.q48 - h1).abs() < 1e-12, "{sex} {s}: {} vs {h1}", t.q48);
            // the oracle forms 1 − p0 − p1 by subtraction, which costs a few
            // digits when the female Poisson mean is small near age 100
            assert!((t.q58 - h2).abs() < 1e-10, "{sex} {s}: {} vs {h2}", t.q58);
            assert!((pmf.hazard(1) - t.q48).abs() < 1e-12);
            assert!((pmf.hazard(2) - t.q58).abs() < 1e-10);
            assert!((pmf.hazard(3) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn q38_increases_with_age_past_forty() {
    for sex in SEXES {
        let ctx = context(sex);
        for s in 40..100 {
            assert!(ctx.terminal_probs(s + 1).unwrap().q38 > ctx.terminal_probs(s).unwrap().q38);
        }
    }
}

#[test]
fn threshold_continuity_against_printed_constants() {
    let m = context(Sex::Male).terminal_probs(40).unwrap();
    for (got, want) in [(m.q38, 0.768485), (m.q48, 0.380912), (m.q58, 0.953154)] {
        assert!((got - want).abs() < 1e-5, "{got} vs {want}");
    }
    let f = context(Sex::Female).terminal_probs(40).unwrap();
    for (got, want) in [(f.q38, 0.715503), (f.q48, 0.841937), (f.q58, 0.891591)] {
        assert!((got - want).abs() < 1e-5, "{got} vs {want}");
    }
}

#[test]
fn printed_q58_denominator_does_not_reproduce_constant() {
    // The alternative reading with m(s) in the denominator misses 0.953154.
    let m = logistic(0.044698 * 40.0);
    let alt = (logistic(3.208851 + 0.044698 * 40.0) - m) / m;
    assert!((alt - 0.953154).abs() > 0.1);
}

#[test]
fn supported_domain_is_enforced() {
    let ctx = context(Sex::Male);
    assert!(ctx.terminal_probs(19).is_err());
    assert!(ctx.terminal_probs(101).is_err());
    assert!(ctx.varrho(101).is_err());
    assert!(ctx.q12(19).is_err());
}

#[test]
fn mismatched_sex_is_rejected() {
    let male = context(Sex::Male);
    let female = context(Sex::Female);
    let r = EstimatorContext::new(
        male.life_table.clone(),
        female.zeta.clone(),
        male.varpi.clone(),
        male.beta.clone(),
        male.coeffs.clone(),
    );
    assert!(r.is_err());
    let r = EstimatorContext::new(
        male.life_table.clone(),
        male.varpi.clone(),
        male.varpi.clone(),
        male.beta.clone(),
        male.coeffs.clone(),
    );
    assert!(r.is_err());
}

#[test]
fn male_varrho_segment_break_is_reported() {
    let ctx = context(Sex::Male);
    let jump = ctx.varrho_segment_jump().unwrap();
    let want = logistic(3.447079 - 0.074952 * 60.0) - logistic(-6.27958 + 0.09215 * 59.0);
    assert!((jump - want).abs() < 1e-14);
    assert_eq!(context(Sex::Female).varrho_segment_jump().unwrap(), 0.0);
}

proptest! {
    #[test]
    fn outputs_are_probabilities(s in 20u32..=100, male in any::<bool>()) {
        let ctx = context(if male { Sex::Male } else { Sex::Female });
        for q in [ctx.q11(s).unwrap(), ctx.q12(s).unwrap(), ctx.q13(s).unwrap(), ctx.q17(s).unwrap(), ctx.varrho(s).unwrap()] {
            prop_assert!((0.0..=1.0).contains(&q));
        }
        let pmf = ctx.survival_pmf(s).unwrap();
        prop_assert!(pmf.0.iter().all(|p| (0.0..=1.0).contains(p)));
    }

    #[test]
    fn varrho_matches_logistic_oracle(s in 20u32..=100) {
        let m = context(Sex::Male).varrho(s).unwrap();
        let a = s.max(45) as f64;
        let want = if s <= 59 { logistic(-6.27958 + 0.09215 * a) } else { logistic(3.447079 - 0.074952 * a) };
        prop_assert!((m - want).abs() < 1e-14);
        let f = context(Sex::Female).varrho(s).unwrap();
        prop_assert!((f - logistic(-0.024468 * a)).abs() < 1e-14);
    }
}
