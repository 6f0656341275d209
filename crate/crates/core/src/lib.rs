//! Discrete-time multi-state Markov engine for lung-cancer critical illness
//! insurance.
//!
//! The crate estimates age- and sex-specific transition probabilities of an
//! 8-state model (healthy, local cancer, four one-year metastatic stages and
//! two death states), assembles the yearly transition matrices, propagates
//! cohort occupancy, synthesizes increment-decrement tables and values
//! lump-sum, acceleration and annuity benefits.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix it to `f64`.

pub mod engine;
pub mod error;
pub mod estimators;
pub mod export;
pub mod scalar;
pub mod state_model;
pub mod table_store;
pub mod valuation;

pub use engine::{
    assemble, IncrementDecrementTable, MatrixSequence, OccupancyTrajectory, Projection,
    SimulationResult, TransitionMatrix,
};
pub use error::{Error, Result};
pub use estimators::{EstimatorContext, SurvivalPmf, TerminalDeathProbs};
pub use scalar::Scalar;
pub use state_model::{MultiStateModel, StateDef, StateId, StateKind};
pub use table_store::{AgeBand, BandedRateTable, CoefficientSet, LifeTable, RatePurpose, Sex};
pub use valuation::{CashflowSchedule, ContractSpec, DiseaseBenefit, DiseaseTrigger, PremiumMode};

pub type LifeTable64 = LifeTable<f64>;
pub type BandedRateTable64 = BandedRateTable<f64>;
pub type CoefficientSet64 = CoefficientSet<f64>;
pub type Context64 = EstimatorContext<f64>;
pub type Matrix64 = TransitionMatrix<f64>;
pub type MatrixSequence64 = MatrixSequence<f64>;
pub type Trajectory64 = OccupancyTrajectory<f64>;
pub type Projection64 = Projection<f64>;
pub type IdTable64 = IncrementDecrementTable<f64>;
pub type Contract64 = ContractSpec<f64>;

pub type Context32 = EstimatorContext<f32>;
pub type MatrixSequence32 = MatrixSequence<f32>;
