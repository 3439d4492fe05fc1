//! Analog beam alignment for mmWave links with uniform linear arrays.
//!
//! Exhaustively sweeping both beam-steering angles costs a full grid of
//! rate evaluations. This crate replaces the sweep with algebra: expand the
//! achievable-rate surface as a truncated bivariate Taylor series around a
//! coarse initial guess, threshold-truncate its two partial derivatives
//! into sparse polynomials, bound the number of stationary points through
//! the mixed volume of the Newton polytopes, solve the sparse system with
//! a hidden-variable resultant and dense eigendecompositions, and keep the
//! real root with the best exact rate. The threshold pair trades root-count
//! (solver cost) against sparsity, and the sweep driver benchmarks that
//! trade-off against the exhaustive baseline.
//!
//! Everything numeric is generic over [`scalar::Scalar`] (`f32` or `f64`);
//! the crate root exposes `f64` and `f32` aliases for the common types.

pub mod error;
pub mod model;
pub mod pipeline;
pub mod polytope;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod truncate;

pub use error::{Error, Result};
pub use model::{
    data_rate, exhaustive_search, rate_gradient_fd, steering_vector, BeamAngles, ChannelMatrix,
    RateParams,
};
pub use pipeline::{
    align, dump_series_csv, run_sweep, run_sweep_with_channel, sweep_to_csv, sweep_to_svg,
    write_file, AlignmentConfig, AlignmentOutcome, DerivativeKind, ExperimentRecord, SweepMetrics,
    REPO_SEED,
};
pub use polytope::{convex_hull, minkowski_sum, objective_value, root_bound_eta, NewtonPolytope};
pub use scalar::Scalar;
pub use series::{rate_series, MonomialOrder, TruncatedSeries, Variable};
pub use solver::{
    filter_real_domain, newton_polish, solve_system, PolishOutcome, PolishResult, Root, RootSet,
    SolveOptions,
};
pub use truncate::{approximation_error, normalize_magnitudes, threshold_select, SparsePolynomial};

/// Beam angle pair in double precision.
pub type Angles64 = BeamAngles<f64>;
/// Beam angle pair in single precision.
pub type Angles32 = BeamAngles<f32>;
/// Channel matrix in double precision.
pub type Channel64 = ChannelMatrix<f64>;
/// Channel matrix in single precision.
pub type Channel32 = ChannelMatrix<f32>;
/// Truncated rate series in double precision.
pub type Series64 = TruncatedSeries<f64>;
/// Truncated rate series in single precision.
pub type Series32 = TruncatedSeries<f32>;
/// Sparse truncated polynomial in double precision.
pub type Poly64 = SparsePolynomial<f64>;
/// Sparse truncated polynomial in single precision.
pub type Poly32 = SparsePolynomial<f32>;
/// Solver output in double precision.
pub type Roots64 = RootSet<f64>;
/// Pipeline configuration in double precision.
pub type Config64 = AlignmentConfig<f64>;
