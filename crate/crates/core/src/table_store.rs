//! Tabular inputs: life tables, banded crude rates, metastasis shares and
//! regression coefficient sets.
//!
//! Crude incidence and mortality rates are published per 100000 and stored
//! here as per-person probabilities. Bands are closed integer intervals.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Oldest age covered by any table.
pub const MAX_AGE: u32 = 100;
/// Youngest age at which contracts and estimators are supported.
pub const MIN_AGE: u32 = 20;
/// Radix used when a life table is given by `q` only.
pub const DEFAULT_RADIX: f64 = 100_000.0;

const PER_100K: f64 = 100_000.0;
const CRUDE_RATE_BOUND: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sex {
    Male,
    Female,
}

impl Sex {
    pub fn as_str(self) -> &'static str {
        match self {
            Sex::Male => "male",
            Sex::Female => "female",
        }
    }
}

impl fmt::Display for Sex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "male" | "m" => Ok(Sex::Male),
            "female" | "f" => Ok(Sex::Female),
            other => Err(Error::Parameter(format!("unknown sex '{other}'"))),
        }
    }
}

fn csv_reader<R: Read>(source: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source)
}

fn parse_num<T: std::str::FromStr>(field: &str, what: &str, line: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::Table(format!("line {line}: cannot parse {what} '{field}'")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifeRow<T> {
    pub l: T,
    pub d: T,
    pub q: T,
}

/// Single-decrement life table over a contiguous range of integer ages.
#[derive(Debug, Clone, PartialEq)]
pub struct LifeTable<T> {
    pub sex: Sex,
    first_age: u32,
    rows: Vec<LifeRow<T>>,
}

impl<T: Scalar> LifeTable<T> {
    /// Reads `age,l,d` or `age,q` CSV. A `q`-only table gets `l` and `d`
    /// synthesized from a radix of 100000.
    pub fn load<R: Read>(source: R, sex: Sex) -> Result<Self> {
        let mut rdr = csv_reader(source);
        let headers: Vec<String> = rdr
            .headers()?
            .iter()
            .map(|h| h.to_ascii_lowercase())
            .collect();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let age_col = col("age").ok_or_else(|| Error::Table("missing 'age' column".into()))?;
        let layout = match (col("l"), col("d"), col("q")) {
            (Some(l), Some(d), _) => Layout::Counts(l, d),
            (_, _, Some(q)) => Layout::Probabilities(q),
            _ => return Err(Error::Table("header must be 'age,l,d' or 'age,q'".into())),
        };

        let mut ages = Vec::new();
        let mut values = Vec::new();
        for (idx, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = idx + 2;
            let get = |c: usize| {
                rec.get(c)
                    .ok_or_else(|| Error::Table(format!("line {line}: missing column")))
            };
            ages.push(parse_num::<u32>(get(age_col)?, "age", line)?);
            values.push(match layout {
                Layout::Counts(l, d) => (
                    parse_num::<f64>(get(l)?, "l", line)?,
                    parse_num::<f64>(get(d)?, "d", line)?,
                ),
                Layout::Probabilities(q) => (parse_num::<f64>(get(q)?, "q", line)?, f64::NAN),
            });
        }

        match layout {
            Layout::Counts(..) => {
                let (l, d): (Vec<_>, Vec<_>) = values.into_iter().unzip();
                Self::from_counts(sex, &ages, &l, &d)
            }
            Layout::Probabilities(_) => {
                let q: Vec<_> = values.into_iter().map(|(q, _)| q).collect();
                Self::from_probabilities(sex, &ages, &q, DEFAULT_RADIX)
            }
        }
    }

    pub fn from_counts(sex: Sex, ages: &[u32], l: &[f64], d: &[f64]) -> Result<Self> {
        let first_age = check_contiguous(ages)?;
        let mut rows = Vec::with_capacity(ages.len());
        for (k, (&ls, &ds)) in l.iter().zip(d).enumerate() {
            let age = first_age + k as u32;
            if !(ls >= 0.0 && ds >= 0.0) {
                return Err(Error::Inconsistent {
                    age,
                    detail: format!("negative or missing counts l={ls}, d={ds}"),
                });
            }
            if ds > ls {
                return Err(Error::Inconsistent {
                    age,
                    detail: format!("deaths {ds} exceed survivors {ls}"),
                });
            }
            if k > 0 {
                let prev_l = l[k - 1];
                if ls > prev_l {
                    return Err(Error::Inconsistent {
                        age,
                        detail: format!("l increases with age ({prev_l} -> {ls})"),
                    });
                }
                let expect = prev_l - d[k - 1];
                if (ls - expect).abs() > 1e-9 * prev_l.max(1.0) {
                    return Err(Error::Inconsistent {
                        age,
                        detail: format!("l = {ls} but l - d at previous age gives {expect}"),
                    });
                }
            }
            let q = if ls > 0.0 { ds / ls } else { 1.0 };
            rows.push(LifeRow {
                l: T::lit(ls),
                d: T::lit(ds),
                q: T::lit(q),
            });
        }
        Ok(Self {
            sex,
            first_age,
            rows,
        })
    }

    pub fn from_probabilities(sex: Sex, ages: &[u32], q: &[f64], radix: f64) -> Result<Self> {
        let first_age = check_contiguous(ages)?;
        let mut rows = Vec::with_capacity(q.len());
        let mut l = radix;
        for (k, &qs) in q.iter().enumerate() {
            if !(0.0..=1.0).contains(&qs) {
                return Err(Error::Inconsistent {
                    age: first_age + k as u32,
                    detail: format!("q = {qs} outside [0, 1]"),
                });
            }
            let d = l * qs;
            rows.push(LifeRow {
                l: T::lit(l),
                d: T::lit(d),
                q: T::lit(qs),
            });
            l -= d;
        }
        Ok(Self {
            sex,
            first_age,
            rows,
        })
    }

    pub fn first_age(&self) -> u32 {
        self.first_age
    }

    pub fn last_age(&self) -> u32 {
        self.first_age + self.rows.len() as u32 - 1
    }

    pub fn row(&self, age: u32) -> Result<&LifeRow<T>> {
        age.checked_sub(self.first_age)
            .and_then(|k| self.rows.get(k as usize))
            .ok_or(Error::AgeOutOfRange {
                age,
                lo: self.first_age,
                hi: self.last_age(),
            })
    }

    /// One-year death probability at `age`.
    pub fn q(&self, age: u32) -> Result<T> {
        self.row(age).map(|r| r.q)
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, &LifeRow<T>)> {
        (self.first_age..).zip(self.rows.iter())
    }
}

#[derive(Clone, Copy)]
enum Layout {
    Counts(usize, usize),
    Probabilities(usize),
}

fn check_contiguous(ages: &[u32]) -> Result<u32> {
    let first = *ages
        .first()
        .ok_or_else(|| Error::Table("table has no rows".into()))?;
    for (k, &a) in ages.iter().enumerate() {
        if a != first + k as u32 {
            return Err(Error::Table(format!(
                "ages are not contiguous: expected {} found {a}",
                first + k as u32
            )));
        }
    }
    Ok(first)
}

/// Closed interval of integer ages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AgeBand {
    pub lo: u32,
    pub hi: u32,
}

impl AgeBand {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Table(format!("band {lo}-{hi} has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, age: u32) -> bool {
        (self.lo..=self.hi).contains(&age)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatePurpose {
    /// Crude lung cancer incidence.
    Incidence,
    /// Crude lung cancer mortality.
    CancerMortality,
    /// Share of new diagnoses presenting with distant metastases.
    MetastasisShare,
    /// Empirical one-year metastasis proportion among non-metastatic patients.
    YearMetastasis,
}

impl RatePurpose {
    /// Whether CSV values are published per 100000 (otherwise a fraction).
    pub fn per_100k(self) -> bool {
        matches!(self, RatePurpose::Incidence | RatePurpose::CancerMortality)
    }
}

/// Step function over age bands. Values are per-person probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedRateTable<T> {
    pub sex: Sex,
    pub purpose: RatePurpose,
    bands: Vec<(AgeBand, T)>,
}

impl<T: Scalar> BandedRateTable<T> {
    /// Validates and wraps per-person rates. Bands must be sorted, disjoint
    /// and contiguous.
    pub fn new(sex: Sex, purpose: RatePurpose, bands: Vec<(AgeBand, T)>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::Table("banded table has no bands".into()));
        }
        for pair in bands.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            if b.lo != a.hi + 1 {
                return Err(Error::Table(format!(
                    "bands {}-{} and {}-{} overlap or leave a gap",
                    a.lo, a.hi, b.lo, b.hi
                )));
            }
        }
        for &(band, v) in &bands {
            let bound = if purpose.per_100k() {
                T::lit(CRUDE_RATE_BOUND)
            } else {
                T::one()
            };
            if !(v >= T::zero() && v <= bound) {
                return Err(Error::Table(format!(
                    "{purpose:?} value {v} for band {}-{} outside [0, {bound}]",
                    band.lo, band.hi
                )));
            }
        }
        Ok(Self {
            sex,
            purpose,
            bands,
        })
    }

    /// Reads `age_lo,age_hi,value`. Incidence and mortality values are per
    /// 100000 and are divided through; shares are fractions.
    pub fn load<R: Read>(source: R, sex: Sex, purpose: RatePurpose) -> Result<Self> {
        let scale = if purpose.per_100k() { PER_100K } else { 1.0 };
        let bands = read_bands(source)?
            .into_iter()
            .map(|(b, v)| (b, T::lit(v / scale)))
            .collect();
        Self::new(sex, purpose, bands)
    }

    pub fn bands(&self) -> &[(AgeBand, T)] {
        &self.bands
    }

    pub fn coverage(&self) -> AgeBand {
        AgeBand {
            lo: self.bands[0].0.lo,
            hi: self.bands[self.bands.len() - 1].0.hi,
        }
    }

    /// Value of the band containing `age`.
    pub fn lookup(&self, age: u32) -> Result<T> {
        self.bands
            .iter()
            .find(|(b, _)| b.contains(age))
            .map(|&(_, v)| v)
            .ok_or_else(|| {
                let c = self.coverage();
                Error::AgeOutOfRange {
                    age,
                    lo: c.lo,
                    hi: c.hi,
                }
            })
    }
}

fn read_bands<R: Read>(source: R) -> Result<Vec<(AgeBand, f64)>> {
    let mut rdr = csv_reader(source);
    let headers: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if headers != ["age_lo", "age_hi", "value"] {
        return Err(Error::Table(format!(
            "banded table header must be 'age_lo,age_hi,value', found '{}'",
            headers.join(",")
        )));
    }
    let mut out = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = idx + 2;
        let lo = parse_num::<u32>(&rec[0], "age_lo", line)?;
        let hi = parse_num::<u32>(&rec[1], "age_hi", line)?;
        let v = parse_num::<f64>(&rec[2], "value", line)?;
        out.push((AgeBand::new(lo, hi)?, v));
    }
    Ok(out)
}

/// Raw one-year crude rates, still per 100000.
#[derive(Debug, Clone, PartialEq)]
pub struct YearlyRates<T> {
    pub bands: Vec<(AgeBand, T)>,
}

impl<T: Scalar> YearlyRates<T> {
    pub fn load<R: Read>(source: R) -> Result<Self> {
        Ok(Self {
            bands: read_bands(source)?
                .into_iter()
                .map(|(b, v)| (b, T::lit(v)))
                .collect(),
        })
    }
}

/// Per-band mean of several years of crude rates, converted to per-person
/// probabilities.
pub fn average_crude_rates<T: Scalar>(
    sex: Sex,
    purpose: RatePurpose,
    per_year: &[YearlyRates<T>],
) -> Result<BandedRateTable<T>> {
    let first = per_year
        .first()
        .ok_or_else(|| Error::Table("no yearly tables to average".into()))?;
    for (t, year) in per_year.iter().enumerate().skip(1) {
        let same = year.bands.len() == first.bands.len()
            && year.bands.iter().zip(&first.bands).all(|(a, b)| a.0 == b.0);
        if !same {
            return Err(Error::Table(format!(
                "year {} has different bands from year 1",
                t + 1
            )));
        }
    }
    let years = T::lit(per_year.len() as f64);
    let scale = if purpose.per_100k() {
        T::lit(PER_100K)
    } else {
        T::one()
    };
    let bands = first
        .bands
        .iter()
        .enumerate()
        .map(|(i, &(band, _))| {
            let total: T = per_year.iter().map(|y| y.bands[i].1).sum();
            (band, total / years / scale)
        })
        .collect();
    BandedRateTable::new(sex, purpose, bands)
}

/// Fitted regression coefficients. Names follow the JSON document keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet<T> {
    #[serde(default)]
    pub note: String,
    pub female_varrho_slope: T,
    pub male_varrho_young_const: T,
    pub male_varrho_young_slope: T,
    pub male_varrho_old_const: T,
    pub male_varrho_old_slope: T,
    pub male_terminal_const3: T,
    pub male_terminal_slope: T,
    pub male_terminal_w0: T,
    pub male_terminal_w1: T,
    pub female_terminal_const: T,
    pub female_terminal_slope: T,
    /// Goodness-of-fit figures carried along as metadata.
    #[serde(default)]
    pub fit_statistics: BTreeMap<String, f64>,
}

impl<T: Scalar> CoefficientSet<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CoefficientSet<f64> = serde_json::from_str(text)?;
        let set = raw.cast::<T>();
        set.check()?;
        Ok(set)
    }

    pub fn check(&self) -> Result<()> {
        let all = [
            self.female_varrho_slope,
            self.male_varrho_young_const,
            self.male_varrho_young_slope,
            self.male_varrho_old_const,
            self.male_varrho_old_slope,
            self.male_terminal_const3,
            self.male_terminal_slope,
            self.male_terminal_w0,
            self.male_terminal_w1,
            self.female_terminal_const,
            self.female_terminal_slope,
        ];
        if all.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter("non-finite coefficient".into()));
        }
        let w = self.male_terminal_w0 + self.male_terminal_w1;
        if (w - T::one()).abs() > T::lit(1e-6) {
            return Err(Error::Parameter(format!("w0 + w1 = {w}, expected 1")));
        }
        Ok(())
    }
}

impl CoefficientSet<f64> {
    pub fn cast<U: Scalar>(&self) -> CoefficientSet<U> {
        CoefficientSet {
            note: self.note.clone(),
            female_varrho_slope: U::lit(self.female_varrho_slope),
            male_varrho_young_const: U::lit(self.male_varrho_young_const),
            male_varrho_young_slope: U::lit(self.male_varrho_young_slope),
            male_varrho_old_const: U::lit(self.male_varrho_old_const),
            male_varrho_old_slope: U::lit(self.male_varrho_old_slope),
            male_terminal_const3: U::lit(self.male_terminal_const3),
            male_terminal_slope: U::lit(self.male_terminal_slope),
            male_terminal_w0: U::lit(self.male_terminal_w0),
            male_terminal_w1: U::lit(self.male_terminal_w1),
            female_terminal_const: U::lit(self.female_terminal_const),
            female_terminal_slope: U::lit(self.female_terminal_slope),
            fit_statistics: self.fit_statistics.clone(),
        }
    }
}

/// Tables and coefficients fitted to the Lower Silesia 2006-2010 data,
/// compiled into the crate.
pub mod bundled {
    use super::*;

    pub const COEFFICIENTS_JSON: &str = include_str!("../data/coefficients.json");

    pub fn csv(sex: Sex, purpose: RatePurpose) -> Option<&'static str> {
        Some(match (sex, purpose) {
            (Sex::Male, RatePurpose::Incidence) => include_str!("../data/zeta_male.csv"),
            (Sex::Male, RatePurpose::CancerMortality) => include_str!("../data/varpi_male.csv"),
            (Sex::Male, RatePurpose::MetastasisShare) => include_str!("../data/beta_male.csv"),
            (Sex::Female, RatePurpose::Incidence) => include_str!("../data/zeta_female.csv"),
            (Sex::Female, RatePurpose::CancerMortality) => {
                include_str!("../data/varpi_female.csv")
            }
            (Sex::Female, RatePurpose::MetastasisShare) => include_str!("../data/beta_female.csv"),
            (_, RatePurpose::YearMetastasis) => return None,
        })
    }

    /// File name used when the bundled tables are written out or overridden
    /// from a data directory.
    pub fn file_name(sex: Sex, purpose: RatePurpose) -> String {
        let stem = match purpose {
            RatePurpose::Incidence => "zeta",
            RatePurpose::CancerMortality => "varpi",
            RatePurpose::MetastasisShare => "beta",
            RatePurpose::YearMetastasis => "varrho_empirical",
        };
        format!("{stem}_{sex}.csv")
    }

    pub fn table<T: Scalar>(sex: Sex, purpose: RatePurpose) -> Result<BandedRateTable<T>> {
        let text = csv(sex, purpose)
            .ok_or_else(|| Error::Table(format!("no bundled {purpose:?} table")))?;
        BandedRateTable::load(text.as_bytes(), sex, purpose)
    }

    pub fn coefficients<T: Scalar>() -> CoefficientSet<T> {
        CoefficientSet::from_json(COEFFICIENTS_JSON).expect("bundled coefficients are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_give_q_by_division() {
        let t = LifeTable::<f64>::from_counts(
            Sex::Male,
            &[60, 61],
            &[90_000.0, 89_100.0],
            &[900.0, 1000.0],
        )
        .unwrap();
        assert!((t.q(60).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn q_only_table_uses_radix() {
        let csv = "age,q\n0,0.005\n1,0.001\n";
        let t = LifeTable::<f64>::load(csv.as_bytes(), Sex::Female).unwrap();
        assert_eq!(t.row(0).unwrap().l, 100_000.0);
        assert!((t.row(1).unwrap().l - 99_500.0).abs() < 1e-9);
    }

    #[test]
    fn life_table_rejects_bad_rows() {
        let bad_d = "age,l,d\n60,100,120\n";
        assert!(LifeTable::<f64>::load(bad_d.as_bytes(), Sex::Male).is_err());
        let gap = "age,q\n60,0.01\n62,0.02\n";
        assert!(LifeTable::<f64>::load(gap.as_bytes(), Sex::Male).is_err());
        let big_q = "age,q\n60,1.2\n";
        assert!(LifeTable::<f64>::load(big_q.as_bytes(), Sex::Male).is_err());
        let rising = "age,l,d\n60,100,0\n61,120,0\n";
        assert!(LifeTable::<f64>::load(rising.as_bytes(), Sex::Male).is_err());
        let inconsistent = "age,l,d\n60,100,10\n61,95,0\n";
        assert!(LifeTable::<f64>::load(inconsistent.as_bytes(), Sex::Male).is_err());
        let header = "age,x\n60,1\n";
        assert!(LifeTable::<f64>::load(header.as_bytes(), Sex::Male).is_err());
    }

    #[test]
    fn age_lookup_outside_table_errors() {
        let t = LifeTable::<f64>::from_probabilities(Sex::Male, &[20, 21], &[0.1, 0.2], 1000.0)
            .unwrap();
        assert!(matches!(t.q(22), Err(Error::AgeOutOfRange { .. })));
        assert!(t.q(19).is_err());
    }

    fn yearly(v: f64) -> YearlyRates<f64> {
        YearlyRates {
            bands: vec![(AgeBand::new(60, 64).unwrap(), v)],
        }
    }

    #[test]
    fn averaging_constant_years() {
        let years = vec![yearly(302.086); 5];
        let avg = average_crude_rates(Sex::Male, RatePurpose::Incidence, &years).unwrap();
        assert!((avg.lookup(62).unwrap() - 0.00302086).abs() < 1e-15);

        let years: Vec<_> = (1..=5).map(|v| yearly(v as f64)).collect();
        let avg = average_crude_rates(Sex::Male, RatePurpose::Incidence, &years).unwrap();
        assert!((avg.lookup(60).unwrap() - 0.00003).abs() < 1e-18);
    }

    #[test]
    fn averaging_rejects_mismatched_bands() {
        let other = YearlyRates {
            bands: vec![(AgeBand::new(60, 65).unwrap(), 1.0)],
        };
        let r = average_crude_rates(Sex::Male, RatePurpose::Incidence, &[yearly(1.0), other]);
        assert!(r.is_err());
    }

    #[test]
    fn bundled_lookups() {
        let zeta = bundled::table::<f64>(Sex::Male, RatePurpose::Incidence).unwrap();
        assert!((zeta.lookup(62).unwrap() - 0.00302086).abs() < 1e-15);
        let beta = bundled::table::<f64>(Sex::Female, RatePurpose::MetastasisShare).unwrap();
        assert_eq!(beta.lookup(72).unwrap(), 0.25472);
        assert!(matches!(zeta.lookup(101), Err(Error::AgeOutOfRange { .. })));
        assert!(zeta.lookup(19).is_err());
        assert_eq!(zeta.coverage(), AgeBand { lo: 20, hi: 100 });
    }

    #[test]
    fn all_bundled_tables_load() {
        for sex in [Sex::Male, Sex::Female] {
            for p in [
                RatePurpose::Incidence,
                RatePurpose::CancerMortality,
                RatePurpose::MetastasisShare,
            ] {
                let t = bundled::table::<f64>(sex, p).unwrap();
                assert_eq!(t.coverage(), AgeBand { lo: 20, hi: 100 });
            }
        }
        let c = bundled::coefficients::<f64>();
        assert_eq!(c.male_terminal_w0, 0.897059);
        assert_eq!(c.fit_statistics["male_terminal_aic"], 801.688);
    }

    #[test]
    fn band_table_rejects_gaps_and_implausible_rates() {
        let gap = "age_lo,age_hi,value\n20,24,1\n26,30,1\n";
        assert!(
            BandedRateTable::<f64>::load(gap.as_bytes(), Sex::Male, RatePurpose::Incidence)
                .is_err()
        );
        let huge = "age_lo,age_hi,value\n20,24,6000\n";
        assert!(
            BandedRateTable::<f64>::load(huge.as_bytes(), Sex::Male, RatePurpose::Incidence)
                .is_err()
        );
        let share = "age_lo,age_hi,value\n20,24,1.2\n";
        assert!(BandedRateTable::<f64>::load(
            share.as_bytes(),
            Sex::Male,
            RatePurpose::MetastasisShare
        )
        .is_err());
    }

    #[test]
    fn coefficient_weights_must_sum_to_one() {
        let mut c = bundled::coefficients::<f64>();
        c.male_terminal_w1 = 0.2;
        assert!(c.check().is_err());
    }

    #[test]
    fn sex_parses() {
        assert_eq!("Male".parse::<Sex>().unwrap(), Sex::Male);
        assert_eq!("f".parse::<Sex>().unwrap(), Sex::Female);
        assert!("x".parse::<Sex>().is_err());
    }
}
