//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints its status line under a plain `cargo test`.

#![allow(clippy::needless_range_loop)]

mod common;
mod oracle;

use std::process::ExitCode;
use std::time::Instant;

use cii_core::valuation::{epv_benefits, net_premium, reserve};
use cii_core::{Contract64, DiseaseBenefit, DiseaseTrigger, MultiStateModel, PremiumMode, Sex};
use common::{context, logistic, sequence};
use oracle::{enumerate, oracle_premium, oracle_reserve};

const SEXES: [Sex; 2] = [Sex::Male, Sex::Female];

const MALE_FLAT: [f64; 3] = [0.768485, 0.380912, 0.953154];
const FEMALE_FLAT: [f64; 3] = [0.715503, 0.841937, 0.891591];

fn flat(sex: Sex) -> [f64; 3] {
    match sex {
        Sex::Male => MALE_FLAT,
        Sex::Female => FEMALE_FLAT,
    }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ac1_flat_region() -> Outcome {
    let mut worst: f64 = 0.0;
    for sex in SEXES {
        let ctx = context(sex);
        for s in 20..=40 {
            let t = ctx.terminal_probs(s).map_err(|e| e.to_string())?;
            for (got, want) in [t.q38, t.q48, t.q58].into_iter().zip(flat(sex)) {
                worst = worst.max((got - want).abs());
            }
        }
    }
    if worst <= 1e-5 {
        Ok(format!(
            "max |dev| = {worst:.2e} over s in 20..=40, both sexes"
        ))
    } else {
        Err(format!("max |dev| = {worst:.2e} exceeds 1e-5"))
    }
}

// Closed forms written out here from the raw coefficients, evaluated at 40.
fn closed_form_at_40(sex: Sex) -> [f64; 3] {
    let s = 40.0;
    match sex {
        Sex::Male => {
            let m = logistic(0.044698 * s);
            let m2 = logistic(3.208851 + 0.044698 * s);
            let (w0, w1) = (0.897059, 0.102941);
            [w0 * m, w1 * m / (1.0 - w0 * m), (m2 - m) / (1.0 - m)]
        }
        Sex::Female => {
            let w = 0.552179 - 0.005435 * s;
            let e = (-w).exp();
            let p = [e, w * e, 0.5 * w * w * e];
            [p[0], p[1] / (1.0 - p[0]), p[2] / (1.0 - p[0] - p[1])]
        }
    }
}

fn ac2_threshold_continuity() -> Outcome {
    let mut worst: f64 = 0.0;
    for sex in SEXES {
        let t = context(sex).terminal_probs(40).map_err(|e| e.to_string())?;
        let oracle = closed_form_at_40(sex);
        for ((got, o), want) in [t.q38, t.q48, t.q58].into_iter().zip(oracle).zip(flat(sex)) {
            worst = worst.max((got - want).abs()).max((o - want).abs());
        }
    }
    if worst <= 1e-4 {
        Ok(format!(
            "max |dev| = {worst:.2e} at s = 40 (q58 denominator 1 - m(s))"
        ))
    } else {
        Err(format!("max |dev| = {worst:.2e} exceeds 1e-4"))
    }
}

fn ac3_stochasticity() -> Outcome {
    let model = MultiStateModel::cii();
    let mut worst_sum: f64 = 0.0;
    let mut checked = 0;
    for sex in SEXES {
        for m in sequence(sex).iter() {
            for (i, row) in m.rows().iter().enumerate() {
                let from = i as u8 + 1;
                worst_sum = worst_sum.max((row.iter().sum::<f64>() - 1.0).abs());
                for (j, &q) in row.iter().enumerate() {
                    let to = j as u8 + 1;
                    if !(0.0..=1.0).contains(&q) {
                        return Err(format!("{sex} age {} entry ({from},{to}) = {q}", m.age));
                    }
                    if from != to && (q != 0.0) != model.allows(from, to) {
                        return Err(format!("{sex} age {} mask differs at ({from},{to})", m.age));
                    }
                }
            }
            let problems = m.check(&model, 1e-12);
            if !problems.is_empty() {
                return Err(format!("{sex} age {}: {problems:?}", m.age));
            }
            checked += 1;
        }
    }
    if worst_sum <= 1e-12 {
        Ok(format!(
            "{checked} matrices, max |row sum - 1| = {worst_sum:.2e}"
        ))
    } else {
        Err(format!("max |row sum - 1| = {worst_sum:.2e}"))
    }
}

fn ac4_monte_carlo() -> Outcome {
    let seq = sequence(Sex::Male);
    let analytic = seq.trajectory(50, 20).map_err(|e| e.to_string())?;
    let run = || {
        seq.simulate(50, 20, 1_000_000, 20_240_601)
            .map_err(|e| e.to_string())
    };
    let a = run()?;
    let b = run()?;
    let sup = a.sup_deviation(&analytic.vectors);
    if a != b {
        return Err("seed-fixed reruns differ".into());
    }
    if a.absorbing_exits() != 0 {
        return Err("simulated paths left an absorbing state".into());
    }
    if sup < 0.002 {
        Ok(format!(
            "sup-norm = {sup:.2e} with 1e6 paths, reruns bit-identical"
        ))
    } else {
        Err(format!("sup-norm = {sup:.2e} not below 0.002"))
    }
}

fn ac5_table_round_trip() -> Outcome {
    let model = MultiStateModel::cii();
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for sex in SEXES {
        let seq = sequence(sex);
        let table = seq
            .synthesize_table(100_000.0, 20, 100)
            .map_err(|e| e.to_string())?;
        for s in 20..100 {
            let q = seq.at_age(s).map_err(|e| e.to_string())?;
            for (i, implied) in table.implied_rows(s, &model).iter().enumerate() {
                let Some(implied) = implied else { continue };
                for j in 0..8 {
                    worst = worst.max((implied[j] - q.rows()[i][j]).abs());
                }
                rows += 1;
            }
        }
    }
    if worst <= 1e-9 {
        Ok(format!("{rows} occupied rows, max |dev| = {worst:.2e}"))
    } else {
        Err(format!("max |dev| = {worst:.2e} exceeds 1e-9"))
    }
}

fn contracts(sex: Sex, x: u32, n: u32) -> Vec<Contract64> {
    let mut out = Vec::new();
    for lam in [0.0, 0.35, 1.0] {
        for trigger in [DiseaseTrigger::Metastatic, DiseaseTrigger::FirstDiagnosis] {
            for premium_mode in [PremiumMode::Level, PremiumMode::Single] {
                for disease_benefit in [
                    DiseaseBenefit::LumpSum { amount: 0.25 },
                    DiseaseBenefit::Annuity {
                        rates: [0.3, 0.2, 0.15, 0.1],
                    },
                ] {
                    out.push(Contract64 {
                        sex,
                        entry_age: x,
                        term: n,
                        death_benefit: 1.0,
                        acceleration: lam,
                        disease_benefit,
                        discount: 0.96,
                        premium_mode,
                        trigger,
                    });
                }
            }
        }
    }
    out
}

fn ac6_valuation_brute_force() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for sex in SEXES {
        let seq = sequence(sex);
        for x in [20, 55, 70, 97] {
            for n in 1..=3 {
                let proj = seq.project(x, n).map_err(|e| e.to_string())?;
                for spec in contracts(sex, x, n) {
                    let epv = epv_benefits(&spec, &proj).map_err(|e| e.to_string())?;
                    let prem = net_premium(&spec, &proj).map_err(|e| e.to_string())?;
                    worst = worst.max((epv - enumerate(&spec, &proj.matrices, 1, 0).0).abs());
                    worst = worst.max((prem - oracle_premium(&spec, &proj.matrices)).abs());
                    for k in 0..=n {
                        for state in 1..=6 {
                            let r = reserve(&spec, &proj, k, state).map_err(|e| e.to_string())?;
                            let o = oracle_reserve(&spec, &proj.matrices, k as usize, state);
                            worst = worst.max((r - o).abs());
                        }
                    }
                    cases += 1;
                }
            }
        }
    }
    if worst > 1e-12 {
        return Err(format!(
            "max |dev| vs enumeration = {worst:.2e} exceeds 1e-12"
        ));
    }
    let mut worst_v0: f64 = 0.0;
    for sex in SEXES {
        let seq = sequence(sex);
        for (x, n) in [(20, 80), (40, 30), (60, 15)] {
            let proj = seq.project(x, n).map_err(|e| e.to_string())?;
            for spec in contracts(sex, x, n) {
                if spec.premium_mode != PremiumMode::Level {
                    continue;
                }
                let v0 = reserve(&spec, &proj, 0, 1).map_err(|e| e.to_string())?;
                worst_v0 = worst_v0.max(v0.abs());
            }
        }
    }
    if worst_v0 > 1e-10 {
        return Err(format!("|reserve at issue| = {worst_v0:.2e} exceeds 1e-10"));
    }
    Ok(format!(
        "{cases} contracts, max |dev| = {worst:.2e}; max |reserve at issue| = {worst_v0:.2e}"
    ))
}

fn ac7_fitted_vs_empirical() -> Outcome {
    let male = context(Sex::Male)
        .terminal_probs(65)
        .map_err(|e| e.to_string())?
        .q38;
    let female = context(Sex::Female)
        .terminal_probs(65)
        .map_err(|e| e.to_string())?
        .q38;
    let (dm, df) = ((male - 0.8663).abs(), (female - 0.8272).abs());
    let msg =
        format!("male P(T=0) = {male:.4} (|dev| {dm:.4}), female = {female:.4} (|dev| {df:.4})");
    if dm <= 0.05 && df <= 0.07 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        (
            "AC1",
            "piecewise-constant terminal probabilities",
            ac1_flat_region,
        ),
        (
            "AC2",
            "threshold continuity at 40",
            ac2_threshold_continuity,
        ),
        ("AC3", "stochasticity and sparsity", ac3_stochasticity),
        ("AC4", "Monte Carlo vs analytic occupancy", ac4_monte_carlo),
        (
            "AC5",
            "increment-decrement table round trip",
            ac5_table_round_trip,
        ),
        (
            "AC6",
            "valuation vs path enumeration",
            ac6_valuation_brute_force,
        ),
        (
            "AC7",
            "fitted vs empirical P(T=0) at 65",
            ac7_fitted_vs_empirical,
        ),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("[SKIP] AC8 regression refits: excluded, raw hospitalization data unavailable");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
