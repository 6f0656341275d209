use std::io::Write;

use anyhow::{bail, Result};
use cii_core::engine::{write_matrices_csv, RNG_ALGORITHM};
use cii_core::export::decimal;
use cii_core::valuation::{
    epv_benefits, net_premium, premium_annuity_factor, reserve, viatical_value, CashflowSchedule,
};
use cii_core::{Error, MatrixSequence64, MultiStateModel, Sex};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{provenance, Staged};

/// Transition columns of the rates file, in order.
pub const RATE_COLUMNS: [(u8, u8); 14] = [
    (1, 1),
    (1, 2),
    (1, 3),
    (1, 7),
    (2, 2),
    (2, 3),
    (2, 7),
    (3, 4),
    (3, 8),
    (4, 5),
    (4, 8),
    (5, 6),
    (5, 8),
    (6, 8),
];

const ROUND_TRIP_TOL: f64 = 1e-9;

fn sexes(cfg: &RunConfig) -> Vec<Sex> {
    match cfg.sex {
        Some(s) => vec![s],
        None => vec![Sex::Male, Sex::Female],
    }
}

pub fn rates(cfg: &RunConfig) -> Result<Staged> {
    let hash = cfg.hash();
    let mut out = Staged::new(&cfg.output_dir(), "rates", &hash);
    for sex in sexes(cfg) {
        let seq = MatrixSequence64::build(&cfg.context(sex)?)?;
        out.csv(&format!("rates_{sex}.csv"), |buf| {
            write!(buf, "age")?;
            for (i, j) in RATE_COLUMNS {
                write!(buf, ",q{i}{j}")?;
            }
            writeln!(buf)?;
            for m in seq.iter() {
                write!(buf, "{}", m.age)?;
                for (i, j) in RATE_COLUMNS {
                    write!(buf, ",{}", decimal(m.get(i, j)))?;
                }
                writeln!(buf)?;
            }
            Ok(())
        })?;
    }
    let mut model = serde_json::to_value(MultiStateModel::cii())?;
    model["provenance"] = provenance("rates", &hash);
    out.json("model.json", &model)?;
    Ok(out)
}

pub fn project(cfg: &RunConfig) -> Result<Staged> {
    let sex = cfg.require_sex()?;
    let (x, n) = cfg.require_age_term()?;
    let seq = MatrixSequence64::build(&cfg.context(sex)?)?;
    let trajectory = seq.trajectory(x, n)?;
    let table = seq.synthesize_table(cfg.radix, x, x + n)?;

    // The table must give back the matrices it was built from.
    let model = MultiStateModel::cii();
    let mut worst: f64 = 0.0;
    for s in x..x + n {
        let q = seq.at_age(s)?;
        for (i, row) in table.implied_rows(s, &model).iter().enumerate() {
            if let Some(row) = row {
                for (a, b) in row.iter().zip(&q.rows()[i]) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
    }
    if worst > ROUND_TRIP_TOL {
        bail!("increment-decrement table does not reproduce its inputs (max deviation {worst:e})");
    }

    let tag = format!("{sex}_x{x}_n{n}");
    let mut out = Staged::new(&cfg.output_dir(), "project", &cfg.hash());
    out.csv(&format!("trajectory_{tag}.csv"), |buf| {
        trajectory.write_csv(buf)
    })?;
    out.csv(&format!("idtable_{tag}.csv"), |buf| {
        table.write_csv(buf, cfg.rounded_table)
    })?;
    out.csv(&format!("matrices_{tag}.csv"), |buf| {
        write_matrices_csv(buf, x, seq.slice(x, n)?)
    })?;
    Ok(out)
}

pub fn simulate(cfg: &RunConfig) -> Result<Staged> {
    let sex = cfg.require_sex()?;
    let (x, n) = cfg.require_age_term()?;
    let sim = &cfg.simulation;
    let seq = MatrixSequence64::build(&cfg.context(sex)?)?;
    let analytic = seq.trajectory(x, n)?;
    let result = seq.simulate(x, n, sim.paths, sim.seed)?;
    if result.absorbing_exits() != 0 {
        bail!(
            "{} simulated transitions left an absorbing state",
            result.absorbing_exits()
        );
    }
    let empirical = result.empirical();
    let per_duration: Vec<f64> = empirical
        .iter()
        .zip(&analytic.vectors)
        .map(|(e, a)| {
            e.iter()
                .zip(a)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max)
        })
        .collect();

    let hash = cfg.hash();
    let tag = format!("{sex}_x{x}_n{n}");
    let mut out = Staged::new(&cfg.output_dir(), "simulate", &hash);
    out.csv(&format!("simulation_{tag}.csv"), |buf| {
        write!(buf, "k,age")?;
        for j in 1..=8 {
            write!(buf, ",p{j}")?;
        }
        for j in 1..=8 {
            write!(buf, ",analytic_p{j}")?;
        }
        writeln!(buf)?;
        for (k, (e, a)) in empirical.iter().zip(&analytic.vectors).enumerate() {
            write!(buf, "{k},{}", x + k as u32)?;
            for v in e.iter().chain(a) {
                write!(buf, ",{}", decimal(*v))?;
            }
            writeln!(buf)?;
        }
        Ok(())
    })?;
    let report = json!({
        "provenance": provenance("simulate", &hash),
        "sex": sex,
        "entry_age": x,
        "term": n,
        "paths": result.paths,
        "seed": result.seed,
        "rng": RNG_ALGORITHM,
        "sup_norm": result.sup_deviation(&analytic.vectors),
        "sup_norm_by_duration": per_duration,
        "absorbing_exits": result.absorbing_exits(),
    });
    out.json(&format!("simulation_{tag}.json"), &report)?;
    Ok(out)
}

pub fn price(cfg: &RunConfig) -> Result<Staged> {
    let spec = cfg.contract()?;
    let (x, n) = (spec.entry_age, spec.term);
    let seq = MatrixSequence64::build(&cfg.context(spec.sex)?)?;
    let proj = seq.project(x, n)?;

    let epv = epv_benefits(&spec, &proj)?;
    let factor = premium_annuity_factor(&spec, &proj)?;
    let premium = net_premium(&spec, &proj)?;
    let mut reserves = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let by_state = (1..=6)
            .map(|state| reserve(&spec, &proj, k, state))
            .collect::<cii_core::Result<Vec<f64>>>()?;
        reserves.push(json!({ "k": k, "age": x + k, "by_state": by_state }));
    }
    let viatical = match &cfg.viatical {
        None => serde_json::Value::Null,
        Some(v) => {
            let mut quotes = Vec::new();
            for state in 3..=6 {
                for k in 0..n {
                    match viatical_value(&spec, &proj, state, k, v.purchase_fraction) {
                        Ok(q) => quotes.push(json!(q)),
                        Err(Error::NonPositiveValue(value)) => quotes.push(json!({
                            "state": state, "duration": k, "value": value, "price": null,
                        })),
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            json!({ "purchase_fraction": v.purchase_fraction, "quotes": quotes })
        }
    };
    let cashflows = CashflowSchedule::build(&spec, &proj)?;

    let hash = cfg.hash();
    let tag = format!("{}_x{x}_n{n}", spec.sex);
    let report = json!({
        "provenance": provenance("price", &hash),
        "contract": spec,
        "epv_benefits": epv,
        "premium_annuity_factor": factor,
        "net_premium": premium,
        "reserves": reserves,
        "viatical": viatical,
    });
    let mut out = Staged::new(&cfg.output_dir(), "price", &hash);
    out.json(&format!("price_{tag}.json"), &report)?;
    out.csv(&format!("cashflows_{tag}.csv"), |buf| {
        cashflows.write_csv(buf)
    })?;
    Ok(out)
}
