//! Transition probability estimators for the lung-cancer CII model.
//!
//! All functions take the attained age `s` and are evaluated on the
//! supported domain 20..=100. Below the regression fitting floors the
//! models are held flat at the floor age (45 for the one-year metastasis
//! probability, 40 for the metastatic survival models).

use crate::error::{Error, Result};
use crate::scalar::{logistic, Scalar};
use crate::table_store::{
    bundled, BandedRateTable, CoefficientSet, LifeTable, RatePurpose, Sex, MAX_AGE, MIN_AGE,
};

const VARRHO_FLOOR: u32 = 45;
const MALE_VARRHO_BREAK: u32 = 59;
const TERMINAL_FLOOR: u32 = 40;

/// Everything the estimators read for one sex.
#[derive(Debug, Clone)]
pub struct EstimatorContext<T> {
    pub sex: Sex,
    pub life_table: LifeTable<T>,
    pub zeta: BandedRateTable<T>,
    pub varpi: BandedRateTable<T>,
    pub beta: BandedRateTable<T>,
    pub coeffs: CoefficientSet<T>,
}

/// Death probabilities out of the metastatic states 3..=6 at one age.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalDeathProbs<T> {
    pub q38: T,
    pub q48: T,
    pub q58: T,
    pub q68: T,
}

/// Distribution of whole years survived after a metastatic diagnosis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalPmf<T>(pub [T; 4]);

impl<T: Scalar> SurvivalPmf<T> {
    /// `P(T = k | T >= k)`.
    pub fn hazard(&self, k: usize) -> T {
        let survived: T = self.0[k..].iter().copied().sum();
        self.0[k] / survived
    }
}

impl<T: Scalar> EstimatorContext<T> {
    pub fn new(
        life_table: LifeTable<T>,
        zeta: BandedRateTable<T>,
        varpi: BandedRateTable<T>,
        beta: BandedRateTable<T>,
        coeffs: CoefficientSet<T>,
    ) -> Result<Self> {
        let sex = life_table.sex;
        let checks = [
            (zeta.sex, zeta.purpose, RatePurpose::Incidence),
            (varpi.sex, varpi.purpose, RatePurpose::CancerMortality),
            (beta.sex, beta.purpose, RatePurpose::MetastasisShare),
        ];
        for (table_sex, got, want) in checks {
            if table_sex != sex {
                return Err(Error::Parameter(format!(
                    "{want:?} table is for {table_sex}, life table is for {sex}"
                )));
            }
            if got != want {
                return Err(Error::Parameter(format!(
                    "expected a {want:?} table, got {got:?}"
                )));
            }
        }
        coeffs.check()?;
        Ok(Self {
            sex,
            life_table,
            zeta,
            varpi,
            beta,
            coeffs,
        })
    }

    /// Context using the bundled rate tables and coefficients with a
    /// caller-supplied life table.
    pub fn with_bundled_rates(life_table: LifeTable<T>) -> Result<Self> {
        let sex = life_table.sex;
        Self::new(
            life_table,
            bundled::table(sex, RatePurpose::Incidence)?,
            bundled::table(sex, RatePurpose::CancerMortality)?,
            bundled::table(sex, RatePurpose::MetastasisShare)?,
            bundled::coefficients(),
        )
    }

    fn check_age(&self, s: u32) -> Result<()> {
        if (MIN_AGE..=MAX_AGE).contains(&s) {
            Ok(())
        } else {
            Err(Error::AgeOutOfRange {
                age: s,
                lo: MIN_AGE,
                hi: MAX_AGE,
            })
        }
    }

    /// Healthy to non-metastatic cancer: `ζ̄ₛ (1 − βₛ)`.
    pub fn q12(&self, s: u32) -> Result<T> {
        Ok(self.zeta.lookup(s)? * (T::one() - self.beta.lookup(s)?))
    }

    /// Healthy to metastatic cancer: `ζ̄ₛ βₛ`.
    pub fn q13(&self, s: u32) -> Result<T> {
        Ok(self.zeta.lookup(s)? * self.beta.lookup(s)?)
    }

    /// Healthy to death from causes other than lung cancer: `qₛ − ϖ̄ₛ`.
    pub fn q17(&self, s: u32) -> Result<T> {
        let q = self.life_table.q(s)?;
        let varpi = self.varpi.lookup(s)?;
        if q < varpi {
            return Err(Error::Inconsistent {
                age: s,
                detail: format!("life-table q = {q} below cancer mortality {varpi}"),
            });
        }
        Ok(q - varpi)
    }

    pub fn q11(&self, s: u32) -> Result<T> {
        let stay = T::one() - self.q17(s)? - self.zeta.lookup(s)?;
        if !(T::zero()..=T::one()).contains(&stay) {
            return Err(Error::Inconsistent {
                age: s,
                detail: format!("q11 = {stay} outside [0, 1]"),
            });
        }
        Ok(stay)
    }

    /// Probability that a non-metastatic patient develops metastases within
    /// the year.
    pub fn varrho(&self, s: u32) -> Result<T> {
        self.check_age(s)?;
        let c = &self.coeffs;
        let age = T::lit(s.max(VARRHO_FLOOR) as f64);
        Ok(match self.sex {
            Sex::Female => logistic(c.female_varrho_slope * age),
            Sex::Male if s <= MALE_VARRHO_BREAK => {
                logistic(c.male_varrho_young_const + c.male_varrho_young_slope * age)
            }
            Sex::Male => logistic(c.male_varrho_old_const + c.male_varrho_old_slope * age),
        })
    }

    /// Jump of the male one-year metastasis probability between the two
    /// fitted age segments (`ϱ₆₀ − ϱ₅₉`). Zero for women.
    pub fn varrho_segment_jump(&self) -> Result<T> {
        if self.sex == Sex::Female {
            return Ok(T::zero());
        }
        Ok(self.varrho(MALE_VARRHO_BREAK + 1)? - self.varrho(MALE_VARRHO_BREAK)?)
    }

    /// Row of state 2 as `(q22, q23, q27)`.
    pub fn q2_row(&self, s: u32) -> Result<(T, T, T)> {
        let q = self.life_table.q(s)?;
        let rho = self.varrho(s)?;
        if q + rho > T::one() {
            return Err(Error::Inconsistent {
                age: s,
                detail: format!("q + varrho = {} exceeds 1", q + rho),
            });
        }
        Ok((T::one() - q - rho, rho, q))
    }

    /// Male ordered-logit cumulative probabilities `(P(T ≤ 1), P(T ≤ 2))`.
    fn male_cumulative(&self, s: u32) -> (T, T) {
        let c = &self.coeffs;
        let age = T::lit(s.max(TERMINAL_FLOOR) as f64);
        let le1 = logistic(c.male_terminal_slope * age);
        let le2 = logistic(c.male_terminal_const3 + c.male_terminal_slope * age);
        (le1, le2)
    }

    /// Female Poisson mean `E(T)` at the clamped age.
    fn female_mean(&self, s: u32) -> Result<T> {
        let c = &self.coeffs;
        let age = T::lit(s.max(TERMINAL_FLOOR) as f64);
        let w = c.female_terminal_const + c.female_terminal_slope * age;
        if w <= T::zero() {
            return Err(Error::Inconsistent {
                age: s,
                detail: format!("Poisson mean {w} is not positive"),
            });
        }
        Ok(w)
    }

    /// Distribution of years survived after metastatic diagnosis at age `s`.
    pub fn survival_pmf(&self, s: u32) -> Result<SurvivalPmf<T>> {
        self.check_age(s)?;
        let p = match self.sex {
            Sex::Male => {
                let (le1, le2) = self.male_cumulative(s);
                let p0 = self.coeffs.male_terminal_w0 * le1;
                let p1 = self.coeffs.male_terminal_w1 * le1;
                [p0, p1, le2 - le1, T::one() - le2]
            }
            Sex::Female => {
                let w = self.female_mean(s)?;
                let e = (-w).exp();
                let p0 = e;
                let p1 = w * e;
                let p2 = T::lit(0.5) * w * w * e;
                [p0, p1, p2, T::one() - p0 - p1 - p2]
            }
        };
        Ok(SurvivalPmf(p))
    }

    /// Death probabilities from states 3..=6 written as the closed forms of
    /// the fitted survival models.
    pub fn terminal_probs(&self, s: u32) -> Result<TerminalDeathProbs<T>> {
        match self.sex {
            Sex::Male => self.terminal_probs_male(s),
            Sex::Female => self.terminal_probs_female(s),
        }
    }

    pub fn terminal_probs_male(&self, s: u32) -> Result<TerminalDeathProbs<T>> {
        self.check_age(s)?;
        let (m, le2) = self.male_cumulative(s);
        let c = &self.coeffs;
        let q38 = c.male_terminal_w0 * m;
        Ok(TerminalDeathProbs {
            q38,
            q48: c.male_terminal_w1 * m / (T::one() - q38),
            q58: (le2 - m) / (T::one() - m),
            q68: T::one(),
        })
    }

    pub fn terminal_probs_female(&self, s: u32) -> Result<TerminalDeathProbs<T>> {
        self.check_age(s)?;
        let w = self.female_mean(s)?;
        let e = (-w).exp();
        // 1 − e^{-w} and 1 − (1 + w)e^{-w} lose digits for small w; the
        // expm1 forms keep the hazards accurate up to age 100.
        Ok(TerminalDeathProbs {
            q38: e,
            q48: w * e / -(-w).exp_m1(),
            q58: T::lit(0.5) * w * w / (w.exp_m1() - w),
            q68: T::one(),
        })
    }
}
