use std::io::Write;

use crate::engine::matrix::{MatrixSequence, TransitionMatrix};
use crate::error::{Error, Result};
use crate::export::decimal;
use crate::scalar::Scalar;
use crate::state_model::{StateId, CII_STATES};
use crate::table_store::{Sex, MAX_AGE, MIN_AGE};

const N: usize = CII_STATES;

/// State distributions `P(0..=n)` for a policy issued at age `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyTrajectory<T> {
    pub entry_age: u32,
    pub term: u32,
    pub vectors: Vec<[T; N]>,
}

impl<T: Scalar> OccupancyTrajectory<T> {
    /// `P(k)` for state `state`.
    pub fn prob(&self, k: u32, state: StateId) -> T {
        self.vectors[k as usize][state as usize - 1]
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        write!(out, "k,age")?;
        for j in 1..=N {
            write!(out, ",p{j}")?;
        }
        writeln!(out)?;
        for (k, p) in self.vectors.iter().enumerate() {
            write!(out, "{k},{}", self.entry_age + k as u32)?;
            for v in p {
                write!(out, ",{}", decimal(*v))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Unit distribution on the healthy state.
pub fn initial_healthy<T: Scalar>() -> [T; N] {
    let mut p = [T::zero(); N];
    p[0] = T::one();
    p
}

/// Propagates `p0` through `matrices` in order.
pub fn propagate<T: Scalar>(p0: [T; N], matrices: &[TransitionMatrix<T>]) -> Vec<[T; N]> {
    let mut out = Vec::with_capacity(matrices.len() + 1);
    out.push(p0);
    for m in matrices {
        let next = m.propagate(out.last().expect("non-empty"));
        out.push(next);
    }
    out
}

pub(crate) fn check_domain(x: u32, n: u32) -> Result<()> {
    if x < MIN_AGE || x + n > MAX_AGE {
        return Err(Error::Parameter(format!(
            "entry age {x} and term {n} must satisfy {MIN_AGE} <= x and x + n <= {MAX_AGE}"
        )));
    }
    Ok(())
}

/// Matrices and occupancy for one `(x, n)` pair.
#[derive(Debug, Clone)]
pub struct Projection<T> {
    pub sex: Sex,
    pub matrices: Vec<TransitionMatrix<T>>,
    pub trajectory: OccupancyTrajectory<T>,
}

impl<T: Scalar> Projection<T> {
    /// Projection over caller-supplied matrices, one per policy year,
    /// starting healthy.
    pub fn from_matrices(sex: Sex, entry_age: u32, matrices: Vec<TransitionMatrix<T>>) -> Self {
        let trajectory = OccupancyTrajectory {
            entry_age,
            term: matrices.len() as u32,
            vectors: propagate(initial_healthy(), &matrices),
        };
        Self {
            sex,
            matrices,
            trajectory,
        }
    }

    pub fn entry_age(&self) -> u32 {
        self.trajectory.entry_age
    }

    pub fn term(&self) -> u32 {
        self.trajectory.term
    }

    /// Expected mass moving `from -> to` during period `k`.
    pub fn flow(&self, k: u32, from: StateId, to: StateId) -> T {
        self.trajectory.prob(k, from) * self.matrices[k as usize].get(from, to)
    }
}

impl<T: Scalar> MatrixSequence<T> {
    /// Occupancy from the healthy state at entry age `x` over `n` years.
    pub fn trajectory(&self, x: u32, n: u32) -> Result<OccupancyTrajectory<T>> {
        self.trajectory_from(x, n, initial_healthy())
    }

    /// Occupancy from an explicit initial distribution.
    pub fn trajectory_from(&self, x: u32, n: u32, p0: [T; N]) -> Result<OccupancyTrajectory<T>> {
        check_domain(x, n)?;
        let total: T = p0.iter().copied().sum();
        if p0.iter().any(|p| *p < T::zero()) || (total - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::Parameter(
                "initial vector is not a distribution".into(),
            ));
        }
        let matrices = self.slice(x, n)?;
        Ok(OccupancyTrajectory {
            entry_age: x,
            term: n,
            vectors: propagate(p0, matrices),
        })
    }

    pub fn project(&self, x: u32, n: u32) -> Result<Projection<T>> {
        let trajectory = self.trajectory(x, n)?;
        Ok(Projection {
            sex: self.sex,
            matrices: self.slice(x, n)?.to_vec(),
            trajectory,
        })
    }
}
