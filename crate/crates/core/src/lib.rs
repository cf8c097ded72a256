//! Exact hydrogen spectra and wavefunctions in (anti-)de Sitter deformed
//! quantum mechanics, a general Nikiforov-Uvarov reduction engine, and a
//! finite-difference oracle that checks the closed forms independently.

pub mod error;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod poly;
pub mod polynomials;
pub mod quadrature;
pub mod spectra;
pub mod units;
pub mod wavefunctions;

pub use error::{Error, Result};
pub use model::{DeformationModel, QuantumNumbers, Space};
pub use nu::{BranchId, BranchRule, HypergeometricOde, KRoot, NuReduction, Sign, WeightDescriptor};
pub use poly::Poly;
pub use units::UnitSystem;
