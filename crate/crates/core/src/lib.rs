//! Perfect partitioning of the `4^m - 1` non-identity Pauli strings into
//! `2^m + 1` commuting families, the Clifford rotations that diagonalize
//! each family, grouped expectation values, and graph-coloring baselines.
//!
//! ```
//! use psfam::{PauliString, Solution};
//!
//! let sol = Solution::build(2).unwrap();
//! let yx: PauliString = "YX".parse().unwrap();
//! assert_eq!(sol.lookup(&yx).unwrap().0, 1);
//! ```

pub mod baseline;
pub mod bench;
pub mod circuit;
pub mod diagonalize;
pub mod error;
pub mod gf2;
pub mod measure;
pub mod partition;
pub mod pauli;
pub mod strategy;

pub use baseline::{greedy_color, GroupingResult, Relation};
pub use circuit::{Circuit, Gate};
pub use diagonalize::{build_circuit, diag_generators, measurement_coeffs, member_phase, MeasurementPlan};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use measure::operator::{pauli_decompose, DenseMatrix, WeightedPauliSum};
pub use measure::statevector::{build_ansatz_state, simulate, AnsatzSpec, StateVector};
pub use measure::{expectation_with, grouped_expectation, Mode};
pub use partition::{FamilyId, Solution};
pub use pauli::{PauliString, PhasedPauli};
pub use strategy::{GroupingStrategy, MeasurementSet, StrategyRegistry};
