//! Multiple increment-decrement tables synthesized from the matrix sequence.

use std::io::Write;

use crate::engine::matrix::MatrixSequence;
use crate::error::{Error, Result};
use crate::export::decimal;
use crate::scalar::Scalar;
use crate::state_model::{MultiStateModel, StateId, StateKind, CII_STATES, CII_TRANSITIONS};

const N: usize = CII_STATES;
const TRANSITIONS: usize = CII_TRANSITIONS.len();

/// Expected counts for a cohort of `radix` lives entering healthy at
/// `first_age`. Counts are fractional.
///
/// `l[k][i]` holds the lives in state `i + 1` at age `first_age + k`; for the
/// absorbing states 7 and 8 it is the cumulative number absorbed. `d[k][t]`
/// is the count moving along `CII_TRANSITIONS[t]` during that year.
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementDecrementTable<T> {
    pub radix: T,
    pub first_age: u32,
    pub l: Vec<[T; N]>,
    pub d: Vec<[T; TRANSITIONS]>,
}

fn column(from: StateId, to: StateId) -> Option<usize> {
    CII_TRANSITIONS.iter().position(|&t| t == (from, to))
}

impl<T: Scalar> IncrementDecrementTable<T> {
    pub fn last_age(&self) -> u32 {
        self.first_age + self.d.len() as u32
    }

    pub fn lives(&self, age: u32, state: StateId) -> T {
        self.l[(age - self.first_age) as usize][state as usize - 1]
    }

    /// `d^{ij}` at `age`, zero for pairs outside the model.
    pub fn decrements(&self, age: u32, from: StateId, to: StateId) -> T {
        column(from, to)
            .map(|c| self.d[(age - self.first_age) as usize][c])
            .unwrap_or_else(T::zero)
    }

    fn outflow(&self, age: u32, state: StateId) -> T {
        CII_TRANSITIONS
            .iter()
            .filter(|(i, _)| *i == state)
            .map(|&(i, j)| self.decrements(age, i, j))
            .sum()
    }

    fn inflow(&self, age: u32, state: StateId) -> T {
        CII_TRANSITIONS
            .iter()
            .filter(|(_, j)| *j == state)
            .map(|&(i, j)| self.decrements(age, i, j))
            .sum()
    }

    /// Transition probabilities implied by the table at `age`: for absorbing
    /// states a unit self-loop, for transient states `d^{ij}/l^i` off the
    /// diagonal and `(l^i − Σⱼ d^{ij})/l^i` on it. `None` where `l^i = 0`.
    pub fn implied_rows(&self, age: u32, model: &MultiStateModel) -> [Option<[T; N]>; N] {
        let mut rows = [None; N];
        for (idx, row) in rows.iter_mut().enumerate() {
            let i = idx as StateId + 1;
            let mut r = [T::zero(); N];
            if model.state(i).map(|s| s.kind) == Some(StateKind::Absorbing) {
                r[idx] = T::one();
                *row = Some(r);
                continue;
            }
            let l = self.lives(age, i);
            if l <= T::zero() {
                continue;
            }
            for j in model.successors(i) {
                r[j as usize - 1] = self.decrements(age, i, j) / l;
            }
            r[idx] = (l - self.outflow(age, i)) / l;
            *row = Some(r);
        }
        rows
    }

    /// Stay probability by the alternative route `(l^i_{s+1} − inflow)/l^i_s`.
    pub fn implied_stay_from_next(&self, age: u32, state: StateId) -> Option<T> {
        let l = self.lives(age, state);
        (l > T::zero()).then(|| (self.lives(age + 1, state) - self.inflow(age, state)) / l)
    }

    /// Total across living states plus cumulative absorbed, per age.
    pub fn totals(&self) -> Vec<T> {
        self.l.iter().map(|row| row.iter().copied().sum()).collect()
    }

    /// Writes one row per age. The last age has no decrement columns.
    /// With `rounded`, counts are rounded to whole lives (presentation only).
    pub fn write_csv<W: Write>(&self, out: &mut W, rounded: bool) -> Result<()> {
        let fmt = |v: T| {
            if rounded {
                format!("{}", v.to_f64_lossy().round())
            } else {
                decimal(v)
            }
        };
        write!(out, "age")?;
        for i in 1..=N {
            write!(out, ",l{i}")?;
        }
        for (i, j) in CII_TRANSITIONS {
            write!(out, ",d{i}{j}")?;
        }
        writeln!(out)?;
        for (k, l) in self.l.iter().enumerate() {
            write!(out, "{}", self.first_age + k as u32)?;
            for v in l {
                write!(out, ",{}", fmt(*v))?;
            }
            match self.d.get(k) {
                Some(d) => {
                    for v in d {
                        write!(out, ",{}", fmt(*v))?;
                    }
                }
                None => write!(out, "{}", ",".repeat(TRANSITIONS))?,
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

impl<T: Scalar> MatrixSequence<T> {
    /// Table for ages `from..=to`: decrements for each year `from..to` and
    /// lives at every age including `to`.
    pub fn synthesize_table(
        &self,
        radix: T,
        from: u32,
        to: u32,
    ) -> Result<IncrementDecrementTable<T>> {
        if radix.is_nan() || radix <= T::zero() {
            return Err(Error::Parameter(format!("radix {radix} must be positive")));
        }
        if from > to {
            return Err(Error::Parameter(format!("empty age range {from}..={to}")));
        }
        let mut l0 = [T::zero(); N];
        l0[0] = radix;
        let mut l = vec![l0];
        let mut d = Vec::with_capacity((to - from) as usize);
        for s in from..to {
            let q = self.at_age(s)?;
            let cur = *l.last().expect("non-empty");
            let mut dec = [T::zero(); TRANSITIONS];
            for (c, &(i, j)) in CII_TRANSITIONS.iter().enumerate() {
                dec[c] = cur[i as usize - 1] * q.get(i, j);
            }
            let mut next = cur;
            for (c, &(i, j)) in CII_TRANSITIONS.iter().enumerate() {
                next[i as usize - 1] -= dec[c];
                next[j as usize - 1] += dec[c];
            }
            for v in next.iter_mut() {
                // cancellation can leave -0 or a few ulps below zero
                if *v < T::zero() {
                    *v = T::zero();
                }
            }
            l.push(next);
            d.push(dec);
        }
        Ok(IncrementDecrementTable {
            radix,
            first_age: from,
            l,
            d,
        })
    }
}
