//! Monte Carlo sampling of individual paths, used as an independent check of
//! the analytic occupancy propagation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::matrix::{MatrixSequence, TransitionMatrix};
use crate::engine::trajectory::check_domain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state_model::{StateId, CII_STATES};

const N: usize = CII_STATES;

/// Name of the random source. Chunk `c` of a run draws from ChaCha8 seeded
/// with the run seed on stream `c`.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-chunk";

/// Paths handled by one random stream.
pub const CHUNK_PATHS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationResult {
    pub entry_age: u32,
    pub term: u32,
    pub paths: u64,
    pub seed: u64,
    /// `occupancy[k][j]`: paths in state `j + 1` at duration `k`.
    pub occupancy: Vec<[u64; N]>,
    /// `transitions[k][i][j]`: paths moving `i + 1 -> j + 1` during period `k`
    /// (including stays).
    pub transitions: Vec<[[u64; N]; N]>,
}

impl SimulationResult {
    fn empty(entry_age: u32, term: u32, seed: u64) -> Self {
        Self {
            entry_age,
            term,
            paths: 0,
            seed,
            occupancy: vec![[0; N]; term as usize + 1],
            transitions: vec![[[0; N]; N]; term as usize],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.paths += other.paths;
        for (a, b) in self.occupancy.iter_mut().zip(&other.occupancy) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.transitions.iter_mut().zip(&other.transitions) {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
        }
        self
    }

    /// Empirical state frequencies per duration.
    pub fn empirical(&self) -> Vec<[f64; N]> {
        let n = self.paths as f64;
        self.occupancy
            .iter()
            .map(|row| row.map(|c| c as f64 / n))
            .collect()
    }

    /// Largest absolute gap between empirical and analytic occupancy.
    pub fn sup_deviation<T: Scalar>(&self, analytic: &[[T; N]]) -> f64 {
        self.empirical()
            .iter()
            .zip(analytic)
            .flat_map(|(e, a)| e.iter().zip(a).map(|(x, y)| (x - y.to_f64_lossy()).abs()))
            .fold(0.0, f64::max)
    }

    /// Count of sampled exits from the absorbing states 7 and 8. Always zero
    /// for a correctly assembled chain.
    pub fn absorbing_exits(&self) -> u64 {
        self.transitions
            .iter()
            .map(|t| {
                [6usize, 7]
                    .iter()
                    .map(|&a| (0..N).filter(|&j| j != a).map(|j| t[a][j]).sum::<u64>())
                    .sum::<u64>()
            })
            .sum()
    }
}

struct Cumulative {
    rows: [[f64; N]; N],
}

impl Cumulative {
    fn new<T: Scalar>(m: &TransitionMatrix<T>) -> Self {
        let mut rows = [[0.0; N]; N];
        for (i, row) in m.rows().iter().enumerate() {
            let mut acc = 0.0;
            for (j, q) in row.iter().enumerate() {
                acc += q.to_f64_lossy();
                rows[i][j] = acc;
            }
        }
        Self { rows }
    }

    fn sample(&self, from: usize, u: f64) -> usize {
        let row = &self.rows[from];
        let total = row[N - 1];
        let target = u * total;
        row.iter().position(|&c| target < c).unwrap_or_else(|| {
            // rounding at the top end: take the last state with positive mass
            (0..N)
                .rev()
                .find(|&j| j == 0 || row[j] > row[j - 1])
                .unwrap_or(from)
        })
    }
}

fn run_chunk(
    cumulative: &[Cumulative],
    start: usize,
    paths: u64,
    chunk: u64,
    seed: u64,
    entry_age: u32,
) -> SimulationResult {
    let term = cumulative.len() as u32;
    let mut out = SimulationResult::empty(entry_age, term, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    for _ in 0..paths {
        let mut state = start;
        out.occupancy[0][state] += 1;
        for (k, cum) in cumulative.iter().enumerate() {
            let next = cum.sample(state, rng.gen::<f64>());
            out.transitions[k][state][next] += 1;
            out.occupancy[k + 1][next] += 1;
            state = next;
        }
    }
    out.paths = paths;
    out
}

impl<T: Scalar> MatrixSequence<T> {
    /// Samples `paths` independent chains starting healthy at age `x` over
    /// `n` years. Deterministic in `seed`, independent of thread count.
    pub fn simulate(&self, x: u32, n: u32, paths: u64, seed: u64) -> Result<SimulationResult> {
        self.simulate_from(x, n, 1, paths, seed)
    }

    pub fn simulate_from(
        &self,
        x: u32,
        n: u32,
        start: StateId,
        paths: u64,
        seed: u64,
    ) -> Result<SimulationResult> {
        if paths == 0 {
            return Err(Error::Parameter("at least one path is required".into()));
        }
        if !(1..=N as StateId).contains(&start) {
            return Err(Error::Parameter(format!("unknown start state {start}")));
        }
        check_domain(x, n)?;
        let cumulative: Vec<Cumulative> = self.slice(x, n)?.iter().map(Cumulative::new).collect();
        let chunks = paths.div_ceil(CHUNK_PATHS);
        let result = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let size = CHUNK_PATHS.min(paths - c * CHUNK_PATHS);
                run_chunk(&cumulative, start as usize - 1, size, c, seed, x)
            })
            .reduce(
                || SimulationResult::empty(x, n, seed),
                SimulationResult::merge,
            );
        Ok(result)
    }
}
