//! LP-based randomized rounding with alteration for k-column-sparse packing
//! integer programs, with exact oracles, integrality-gap families, and
//! Monte Carlo checks of the retention guarantees.

pub mod error;
pub mod exact;
pub mod generators;
pub mod instance;
pub mod lp;
pub mod rng;
pub mod rounding;
pub mod submodular;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{solve_exact, ExactResult};
pub use instance::{FractionalSolution, InstanceError, ItemSet, PipInstance};
pub use lp::{LpError, LpModel, LpSolver, Relaxation, Simplex};
pub use rng::TrialSeed;
pub use rounding::{Algorithm, AlterationRule, RetentionEstimate, RoundingReport};
pub use submodular::{SubmodularOracle, ValueOracle};
