//! Expected present values, net premiums, reserves and viatical values on
//! top of a [`Projection`].
//!
//! Timing: premiums are due at the start of each year while the insured is
//! in state 1 or 2; benefits triggered by a transition during year `k` are
//! paid at its end and discounted by `v^(k+1)`. Disease annuity rates `b_j`
//! are paid at the end of each year for which the insured occupied state
//! `j ∈ {3, 4, 5, 6}` at its start.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{Projection, TransitionMatrix};
use crate::error::{Error, Result};
use crate::export::decimal;
use crate::scalar::Scalar;
use crate::state_model::{
    StateId, CANCER_LOCAL, CII_STATES, CII_TRANSITIONS, DEATH_METASTATIC, DEATH_NON_METASTATIC,
    HEALTHY, METASTATIC_FIRST, METASTATIC_LAST,
};
use crate::table_store::Sex;

const N: usize = CII_STATES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiumMode {
    Single,
    /// Level annual premium while in states 1-2.
    Level,
}

/// Event that releases the disease benefit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiseaseTrigger {
    /// Entry into state 3 (metastatic diagnosis), from 1 or 2.
    #[default]
    Metastatic,
    /// First lung cancer diagnosis, i.e. leaving state 1 for 2 or 3.
    FirstDiagnosis,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiseaseBenefit<T> {
    /// Additional lump sum `c^ad`, paid only when the acceleration is zero.
    LumpSum { amount: T },
    /// Annuity rates `b_3..b_6` replacing the lump sum.
    Annuity { rates: [T; 4] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractSpec<T> {
    pub sex: Sex,
    pub entry_age: u32,
    pub term: u32,
    /// Death benefit `c`.
    pub death_benefit: T,
    /// Acceleration parameter `λ`.
    pub acceleration: T,
    pub disease_benefit: DiseaseBenefit<T>,
    /// Annual discount factor `v`.
    pub discount: T,
    pub premium_mode: PremiumMode,
    #[serde(default)]
    pub trigger: DiseaseTrigger,
}

impl<T: Scalar> ContractSpec<T> {
    pub fn check(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Parameter(what));
        if !(self.acceleration >= T::zero() && self.acceleration <= T::one()) {
            return bad(format!("acceleration {} outside [0, 1]", self.acceleration));
        }
        if !(self.discount > T::zero() && self.discount <= T::one()) {
            return bad(format!("discount factor {} outside (0, 1]", self.discount));
        }
        if self.death_benefit.is_nan() || self.death_benefit < T::zero() {
            return bad("death benefit must be nonnegative".into());
        }
        let ok = match self.disease_benefit {
            DiseaseBenefit::LumpSum { amount } => amount >= T::zero(),
            DiseaseBenefit::Annuity { rates } => rates.iter().all(|b| *b >= T::zero()),
        };
        if !ok {
            return bad("disease benefits must be nonnegative".into());
        }
        Ok(())
    }

    fn disease_paid_before(&self, state: StateId) -> bool {
        match self.trigger {
            DiseaseTrigger::Metastatic => (METASTATIC_FIRST..=METASTATIC_LAST).contains(&state),
            DiseaseTrigger::FirstDiagnosis => (CANCER_LOCAL..=METASTATIC_LAST).contains(&state),
        }
    }

    fn is_disease_event(&self, from: StateId, to: StateId) -> bool {
        match self.trigger {
            DiseaseTrigger::Metastatic => to == METASTATIC_FIRST && from != to,
            DiseaseTrigger::FirstDiagnosis => {
                from == HEALTHY && (to == CANCER_LOCAL || to == METASTATIC_FIRST)
            }
        }
    }

    /// Amount released by the disease event: `cλ + 1{λ=0} c^ad`.
    pub fn disease_event_amount(&self) -> T {
        let mut amount = self.death_benefit * self.acceleration;
        if let DiseaseBenefit::LumpSum { amount: extra } = self.disease_benefit {
            if self.acceleration == T::zero() {
                amount += extra;
            }
        }
        amount
    }

    /// Death benefit on death out of `from`: reduced to `c(1 − λ)` once the
    /// disease benefit has been paid.
    pub fn death_amount(&self, from: StateId) -> T {
        if self.disease_paid_before(from) {
            self.death_benefit * (T::one() - self.acceleration)
        } else {
            self.death_benefit
        }
    }

    /// Payment at the end of a year in which the insured moved `from -> to`.
    pub fn transition_payment(&self, from: StateId, to: StateId) -> T {
        if from == to {
            return T::zero();
        }
        if to == DEATH_NON_METASTATIC || to == DEATH_METASTATIC {
            self.death_amount(from)
        } else if self.is_disease_event(from, to) {
            self.disease_event_amount()
        } else {
            T::zero()
        }
    }

    /// Annuity rate for a year started in `state`.
    pub fn annuity_rate(&self, state: StateId) -> T {
        match self.disease_benefit {
            DiseaseBenefit::Annuity { rates }
                if (METASTATIC_FIRST..=METASTATIC_LAST).contains(&state) =>
            {
                rates[(state - METASTATIC_FIRST) as usize]
            }
            _ => T::zero(),
        }
    }

    pub fn pays_premium_in(state: StateId) -> bool {
        state == HEALTHY || state == CANCER_LOCAL
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: serde::de::DeserializeOwned,
    {
        let spec: Self = serde_json::from_str(text)?;
        spec.check()?;
        Ok(spec)
    }
}

/// Expected benefit outgo of one year given the distribution at its start.
fn year_benefits<T: Scalar>(spec: &ContractSpec<T>, p: &[T; N], q: &TransitionMatrix<T>) -> T {
    let mut total = T::zero();
    for (idx, &pi) in p.iter().enumerate() {
        if pi == T::zero() {
            continue;
        }
        let i = idx as StateId + 1;
        total += pi * spec.annuity_rate(i);
        for &(from, to) in CII_TRANSITIONS.iter().filter(|(from, _)| *from == i) {
            let pay = spec.transition_payment(from, to);
            if pay != T::zero() {
                total += pi * q.get(from, to) * pay;
            }
        }
    }
    total
}

fn premium_paying<T: Scalar>(p: &[T; N]) -> T {
    p[HEALTHY as usize - 1] + p[CANCER_LOCAL as usize - 1]
}

fn check_match<T: Scalar>(spec: &ContractSpec<T>, proj: &Projection<T>) -> Result<()> {
    spec.check()?;
    if spec.sex != proj.sex || spec.entry_age != proj.entry_age() || spec.term != proj.term() {
        return Err(Error::Mismatch(format!(
            "contract ({}, x={}, n={}) vs projection ({}, x={}, n={})",
            spec.sex,
            spec.entry_age,
            spec.term,
            proj.sex,
            proj.entry_age(),
            proj.term()
        )));
    }
    Ok(())
}

/// Expected present value at issue of all benefits.
pub fn epv_benefits<T: Scalar>(spec: &ContractSpec<T>, proj: &Projection<T>) -> Result<T> {
    check_match(spec, proj)?;
    let v = spec.discount;
    let mut disc = T::one();
    let mut total = T::zero();
    for (p, q) in proj.trajectory.vectors.iter().zip(&proj.matrices) {
        disc *= v;
        total += disc * year_benefits(spec, p, q);
    }
    Ok(total)
}

/// `Σₖ vᵏ (P(k)₁ + P(k)₂)` over the premium-paying years.
pub fn premium_annuity_factor<T: Scalar>(
    spec: &ContractSpec<T>,
    proj: &Projection<T>,
) -> Result<T> {
    check_match(spec, proj)?;
    let mut disc = T::one();
    let mut total = T::zero();
    for p in proj.trajectory.vectors.iter().take(spec.term as usize) {
        total += disc * premium_paying(p);
        disc *= spec.discount;
    }
    Ok(total)
}

/// Net premium by the equivalence principle.
pub fn net_premium<T: Scalar>(spec: &ContractSpec<T>, proj: &Projection<T>) -> Result<T> {
    let epv = epv_benefits(spec, proj)?;
    match spec.premium_mode {
        PremiumMode::Single => Ok(epv),
        PremiumMode::Level => {
            let factor = premium_annuity_factor(spec, proj)?;
            if factor <= T::zero() {
                return Err(Error::ZeroAnnuityFactor);
            }
            Ok(epv / factor)
        }
    }
}

/// Premium due at duration `k` from a life in a premium-paying state.
fn premium_due<T: Scalar>(spec: &ContractSpec<T>, premium: T, k: u32) -> T {
    match spec.premium_mode {
        PremiumMode::Level => premium,
        PremiumMode::Single if k == 0 => premium,
        PremiumMode::Single => T::zero(),
    }
}

/// Present values at duration `k` of future benefits and future premiums for
/// a life in `state` at that time.
fn conditional_values<T: Scalar>(
    spec: &ContractSpec<T>,
    proj: &Projection<T>,
    state: StateId,
    k: u32,
    premium: T,
) -> Result<(T, T)> {
    if k > spec.term {
        return Err(Error::Parameter(format!(
            "duration {k} beyond term {}",
            spec.term
        )));
    }
    if !(1..=N as StateId).contains(&state) {
        return Err(Error::Parameter(format!("unknown state {state}")));
    }
    let v = spec.discount;
    let mut p = [T::zero(); N];
    p[state as usize - 1] = T::one();
    let (mut benefits, mut premiums) = (T::zero(), T::zero());
    let mut disc = T::one();
    for t in k..spec.term {
        let q = &proj.matrices[t as usize];
        premiums += disc * premium_paying(&p) * premium_due(spec, premium, t);
        disc *= v;
        benefits += disc * year_benefits(spec, &p, q);
        p = q.propagate(&p);
    }
    Ok((benefits, premiums))
}

/// Prospective reserve at duration `k` for a life in `state`, measured just
/// before the premium due at `k`.
pub fn reserve<T: Scalar>(
    spec: &ContractSpec<T>,
    proj: &Projection<T>,
    k: u32,
    state: StateId,
) -> Result<T> {
    if state == DEATH_NON_METASTATIC || state == DEATH_METASTATIC {
        return Err(Error::AbsorbingState(state));
    }
    let premium = net_premium(spec, proj)?;
    let (benefits, premiums) = conditional_values(spec, proj, state, k, premium)?;
    Ok(benefits - premiums)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViaticalQuote<T> {
    pub state: StateId,
    pub duration: u32,
    /// Death benefit EPV less remaining premiums, seen by the purchaser.
    pub value: T,
    pub price: T,
}

/// Value of the policy to a third-party purchaser when the insured is in a
/// metastatic state at duration `k`.
pub fn viatical_value<T: Scalar>(
    spec: &ContractSpec<T>,
    proj: &Projection<T>,
    state: StateId,
    k: u32,
    purchase_fraction: T,
) -> Result<ViaticalQuote<T>> {
    check_match(spec, proj)?;
    if !(METASTATIC_FIRST..=METASTATIC_LAST).contains(&state) {
        return Err(Error::Parameter(format!("state {state} is not metastatic")));
    }
    if !(purchase_fraction > T::zero() && purchase_fraction < T::one()) {
        return Err(Error::Parameter(format!(
            "purchase fraction {purchase_fraction} outside (0, 1)"
        )));
    }
    if k > spec.term {
        return Err(Error::Parameter(format!(
            "duration {k} beyond term {}",
            spec.term
        )));
    }
    let premium = net_premium(spec, proj)?;
    let v = spec.discount;
    let mut p = [T::zero(); N];
    p[state as usize - 1] = T::one();
    let (mut death, mut premiums) = (T::zero(), T::zero());
    let mut disc = T::one();
    for t in k..spec.term {
        let q = &proj.matrices[t as usize];
        premiums += disc * premium_paying(&p) * premium_due(spec, premium, t);
        disc *= v;
        for (idx, &pi) in p.iter().enumerate() {
            let i = idx as StateId + 1;
            let dying = q.get(i, DEATH_NON_METASTATIC) + q.get(i, DEATH_METASTATIC);
            if pi != T::zero() && i < DEATH_NON_METASTATIC {
                death += disc * pi * dying * spec.death_amount(i);
            }
        }
        p = q.propagate(&p);
    }
    let value = death - premiums;
    if value <= T::zero() {
        return Err(Error::NonPositiveValue(value.to_f64_lossy()));
    }
    Ok(ViaticalQuote {
        state,
        duration: k,
        value,
        price: purchase_fraction * value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CashflowRow<T> {
    pub k: u32,
    pub benefits: T,
    pub benefits_discounted: T,
    pub premiums: T,
    pub premiums_discounted: T,
}

/// Expected cashflows per policy year under the net premium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashflowSchedule<T> {
    pub premium: T,
    pub rows: Vec<CashflowRow<T>>,
}

impl<T: Scalar> CashflowSchedule<T> {
    pub fn build(spec: &ContractSpec<T>, proj: &Projection<T>) -> Result<Self> {
        let premium = net_premium(spec, proj)?;
        let v = spec.discount;
        let mut rows = Vec::with_capacity(spec.term as usize);
        let mut disc = T::one();
        for (k, (p, q)) in proj
            .trajectory
            .vectors
            .iter()
            .zip(&proj.matrices)
            .enumerate()
        {
            let k = k as u32;
            let benefits = year_benefits(spec, p, q);
            let premiums = premium_paying(p) * premium_due(spec, premium, k);
            rows.push(CashflowRow {
                k,
                benefits,
                benefits_discounted: benefits * disc * v,
                premiums,
                premiums_discounted: premiums * disc,
            });
            disc *= v;
        }
        Ok(Self { premium, rows })
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(
            out,
            "k,benefits,benefits_discounted,premiums,premiums_discounted"
        )?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.k,
                decimal(r.benefits),
                decimal(r.benefits_discounted),
                decimal(r.premiums),
                decimal(r.premiums_discounted)
            )?;
        }
        Ok(())
    }
}
