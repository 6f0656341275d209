//! Brute-force valuation by enumerating every state path and applying the
//! contract rules path by path.

use cii_core::{Contract64, DiseaseBenefit, DiseaseTrigger, Matrix64, PremiumMode};

struct Outcome {
    benefits: f64,
    premium_units: f64,
}

fn path_value(spec: &Contract64, path: &[u8], start_k: usize, start_paid: bool) -> Outcome {
    let v = spec.discount;
    let c = spec.death_benefit;
    let lam = spec.acceleration;
    let mut paid = start_paid;
    let mut benefits = 0.0;
    let mut premium_units = 0.0;
    for t in 0..path.len() - 1 {
        let (from, to) = (path[t], path[t + 1]);
        let k = start_k + t;
        let d_start = v.powi(t as i32);
        let d_end = v.powi(t as i32 + 1);
        let alive = from <= 6;
        if from == 1 || from == 2 {
            let due = match spec.premium_mode {
                PremiumMode::Level => true,
                PremiumMode::Single => k == 0,
            };
            if due {
                premium_units += d_start;
            }
        }
        if let DiseaseBenefit::Annuity { rates } = spec.disease_benefit {
            if (3..=6).contains(&from) {
                benefits += d_end * rates[(from - 3) as usize];
            }
        }
        if !alive || from == to {
            continue;
        }
        let disease_event = match spec.trigger {
            DiseaseTrigger::Metastatic => to == 3,
            DiseaseTrigger::FirstDiagnosis => from == 1 && (to == 2 || to == 3),
        };
        if to == 7 || to == 8 {
            benefits += d_end * if paid { c * (1.0 - lam) } else { c };
        } else if disease_event && !paid {
            let mut amount = c * lam;
            if let DiseaseBenefit::LumpSum { amount: extra } = spec.disease_benefit {
                if lam == 0.0 {
                    amount += extra;
                }
            }
            benefits += d_end * amount;
            paid = true;
        }
    }
    Outcome {
        benefits,
        premium_units,
    }
}

/// Sums over all paths of the given matrices starting from `start`.
pub fn enumerate(spec: &Contract64, mats: &[Matrix64], start: u8, start_k: usize) -> (f64, f64) {
    let start_paid = match spec.trigger {
        DiseaseTrigger::Metastatic => (3..=6).contains(&start),
        DiseaseTrigger::FirstDiagnosis => (2..=6).contains(&start),
    };
    let mut paths: Vec<(Vec<u8>, f64)> = vec![(vec![start], 1.0)];
    for m in mats {
        let mut next = Vec::new();
        for (path, p) in &paths {
            let last = *path.last().unwrap();
            for j in 1..=8u8 {
                let q = m.get(last, j);
                if q > 0.0 {
                    let mut np = path.clone();
                    np.push(j);
                    next.push((np, p * q));
                }
            }
        }
        paths = next;
    }
    let mut benefits = 0.0;
    let mut premiums = 0.0;
    for (path, p) in &paths {
        let o = path_value(spec, path, start_k, start_paid);
        benefits += p * o.benefits;
        premiums += p * o.premium_units;
    }
    (benefits, premiums)
}

pub fn oracle_premium(spec: &Contract64, mats: &[Matrix64]) -> f64 {
    let (b, a) = enumerate(spec, mats, 1, 0);
    match spec.premium_mode {
        PremiumMode::Single => b,
        PremiumMode::Level => b / a,
    }
}

pub fn oracle_reserve(spec: &Contract64, mats: &[Matrix64], k: usize, state: u8) -> f64 {
    let premium = oracle_premium(spec, mats);
    let (b, a) = enumerate(spec, &mats[k..], state, k);
    b - premium * a
}
