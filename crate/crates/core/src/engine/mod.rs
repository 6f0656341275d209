//! Matrix assembly, occupancy propagation, path simulation and
//! increment-decrement table synthesis.

mod idtable;
mod matrix;
mod simulate;
mod trajectory;

pub use idtable::IncrementDecrementTable;
pub use matrix::{assemble, write_matrices_csv, MatrixSequence, TransitionMatrix};
pub use simulate::{SimulationResult, CHUNK_PATHS, RNG_ALGORITHM};
pub use trajectory::{initial_healthy, propagate, OccupancyTrajectory, Projection};

use crate::error::Result;
use crate::estimators::EstimatorContext;
use crate::scalar::Scalar;

/// Occupancy over `n` years for a healthy life aged `x`.
pub fn trajectory<T: Scalar>(
    ctx: &EstimatorContext<T>,
    x: u32,
    n: u32,
) -> Result<OccupancyTrajectory<T>> {
    trajectory::check_domain(x, n)?;
    MatrixSequence::build_range(ctx, x, x + n)?.trajectory(x, n)
}

pub fn simulate<T: Scalar>(
    ctx: &EstimatorContext<T>,
    x: u32,
    n: u32,
    paths: u64,
    seed: u64,
) -> Result<SimulationResult> {
    trajectory::check_domain(x, n)?;
    MatrixSequence::build_range(ctx, x, x + n)?.simulate(x, n, paths, seed)
}

pub fn synthesize_idtable<T: Scalar>(
    ctx: &EstimatorContext<T>,
    radix: T,
    from: u32,
    to: u32,
) -> Result<IncrementDecrementTable<T>> {
    MatrixSequence::build_range(ctx, from, to)?.synthesize_table(radix, from, to)
}
