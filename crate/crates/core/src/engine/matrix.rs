use std::io::Write;

use crate::error::{Error, Result};
use crate::estimators::EstimatorContext;
use crate::export::decimal;
use crate::scalar::Scalar;
use crate::state_model::{MultiStateModel, StateId, StateKind, CII_STATES};
use crate::table_store::{Sex, MAX_AGE, MIN_AGE};

const N: usize = CII_STATES;

/// Row-stochastic one-year transition matrix of the CII model at one
/// attained age. Indexing is by state id (1-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix<T> {
    pub age: u32,
    entries: [[T; N]; N],
}

impl<T: Scalar> TransitionMatrix<T> {
    pub fn from_rows(age: u32, entries: [[T; N]; N]) -> Self {
        Self { age, entries }
    }

    #[inline]
    pub fn get(&self, from: StateId, to: StateId) -> T {
        self.entries[from as usize - 1][to as usize - 1]
    }

    pub fn row(&self, from: StateId) -> &[T; N] {
        &self.entries[from as usize - 1]
    }

    pub fn rows(&self) -> &[[T; N]; N] {
        &self.entries
    }

    /// One step of occupancy propagation: `p'ⱼ = Σᵢ pᵢ qᵢⱼ`.
    pub fn propagate(&self, p: &[T; N]) -> [T; N] {
        let mut next = [T::zero(); N];
        for (pi, row) in p.iter().zip(&self.entries) {
            if *pi == T::zero() {
                continue;
            }
            for (nj, &q) in next.iter_mut().zip(row) {
                *nj += *pi * q;
            }
        }
        next
    }

    /// Checks stochasticity and that the nonzero pattern matches `model`.
    /// Returns a description of every problem found.
    pub fn check(&self, model: &MultiStateModel, tol: T) -> Vec<String> {
        let mut problems = Vec::new();
        for i in 1..=N as StateId {
            let row = self.row(i);
            let sum: T = row.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                problems.push(format!("age {}: row {i} sums to {sum}", self.age));
            }
            let kind = model.state(i).map(|s| s.kind);
            for j in 1..=N as StateId {
                let q = row[j as usize - 1];
                if !(q >= T::zero() && q <= T::one()) {
                    problems.push(format!("age {}: q{i}{j} = {q} outside [0, 1]", self.age));
                }
                let allowed = if i == j {
                    kind != Some(StateKind::Reflex)
                } else {
                    model.allows(i, j)
                };
                if !allowed && q != T::zero() {
                    problems.push(format!(
                        "age {}: q{i}{j} = {q} not allowed by model",
                        self.age
                    ));
                }
            }
            if kind == Some(StateKind::Absorbing) && row[i as usize - 1] != T::one() {
                problems.push(format!(
                    "age {}: absorbing row {i} is not a unit vector",
                    self.age
                ));
            }
        }
        problems
    }
}

/// Builds the transition matrix at attained age `s`.
pub fn assemble<T: Scalar>(ctx: &EstimatorContext<T>, s: u32) -> Result<TransitionMatrix<T>> {
    let (z, o) = (T::zero(), T::one());
    let (q22, q23, q27) = ctx.q2_row(s)?;
    let t = ctx.terminal_probs(s)?;
    let entries = [
        [
            ctx.q11(s)?,
            ctx.q12(s)?,
            ctx.q13(s)?,
            z,
            z,
            z,
            ctx.q17(s)?,
            z,
        ],
        [z, q22, q23, z, z, z, q27, z],
        [z, z, z, o - t.q38, z, z, z, t.q38],
        [z, z, z, z, o - t.q48, z, z, t.q48],
        [z, z, z, z, z, o - t.q58, z, t.q58],
        [z, z, z, z, z, z, z, t.q68],
        [z, z, z, z, z, z, o, z],
        [z, z, z, z, z, z, z, o],
    ];
    Ok(TransitionMatrix::from_rows(s, entries))
}

/// Matrices for a contiguous range of attained ages, computed once and
/// shared by every projection for the same sex. Under the hypothesis of
/// aggregation the matrix for entry age `x` at duration `k` is the base
/// matrix at attained age `x + k`.
#[derive(Debug, Clone)]
pub struct MatrixSequence<T> {
    pub sex: Sex,
    first_age: u32,
    matrices: Vec<TransitionMatrix<T>>,
}

impl<T: Scalar> MatrixSequence<T> {
    /// Matrices for every supported age.
    pub fn build(ctx: &EstimatorContext<T>) -> Result<Self> {
        Self::build_range(ctx, MIN_AGE, MAX_AGE)
    }

    pub fn build_range(ctx: &EstimatorContext<T>, lo: u32, hi: u32) -> Result<Self> {
        if lo < MIN_AGE || hi > MAX_AGE || lo > hi {
            return Err(Error::Parameter(format!(
                "age range {lo}..={hi} outside {MIN_AGE}..={MAX_AGE}"
            )));
        }
        let matrices = (lo..=hi)
            .map(|s| assemble(ctx, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sex: ctx.sex,
            first_age: lo,
            matrices,
        })
    }

    pub fn first_age(&self) -> u32 {
        self.first_age
    }

    pub fn last_age(&self) -> u32 {
        self.first_age + self.matrices.len() as u32 - 1
    }

    pub fn at_age(&self, s: u32) -> Result<&TransitionMatrix<T>> {
        s.checked_sub(self.first_age)
            .and_then(|k| self.matrices.get(k as usize))
            .ok_or(Error::AgeOutOfRange {
                age: s,
                lo: self.first_age,
                hi: self.last_age(),
            })
    }

    /// `Q^[x](k)`, the matrix for entry age `x` at duration `k`.
    pub fn aggregated(&self, x: u32, k: u32) -> Result<&TransitionMatrix<T>> {
        self.at_age(x + k)
    }

    /// The `n` matrices `Q^[x](0..n)` used by a projection.
    pub fn slice(&self, x: u32, n: u32) -> Result<&[TransitionMatrix<T>]> {
        if n == 0 {
            return Ok(&[]);
        }
        self.at_age(x)?;
        self.at_age(x + n - 1)?;
        let start = (x - self.first_age) as usize;
        Ok(&self.matrices[start..start + n as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = &TransitionMatrix<T>> {
        self.matrices.iter()
    }
}

/// Writes `k,age,i,j,value` rows for the nonzero entries of `matrices`.
pub fn write_matrices_csv<T: Scalar, W: Write>(
    out: &mut W,
    entry_age: u32,
    matrices: &[TransitionMatrix<T>],
) -> Result<()> {
    writeln!(out, "k,age,i,j,value")?;
    for m in matrices {
        for i in 1..=N as StateId {
            for j in 1..=N as StateId {
                let q = m.get(i, j);
                if q != T::zero() {
                    writeln!(
                        out,
                        "{},{},{i},{j},{}",
                        m.age - entry_age,
                        m.age,
                        decimal(q)
                    )?;
                }
            }
        }
    }
    Ok(())
}
