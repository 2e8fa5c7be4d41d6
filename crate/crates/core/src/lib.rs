//! Restricted Lie algebras over prime fields: finite-field linear algebra,
//! truncated polynomial rings and their derivations, the Cartan-type
//! families, tori and toral rank, and restricted modules.

pub mod cartanfam;
pub mod ffla;
pub mod interchange;
pub mod liealg;
pub mod repmod;
pub mod torirank;
pub mod truncpoly;
pub mod verify;

pub use cartanfam::{Family, FamilySpec};
pub use ffla::{FflaError, FpMatrix, FpScalar, FpVector, PrimeField, SparseMatrix, SparseVec};
pub use interchange::{AlgebraJson, ElementJson, InterchangeError, ModuleJson};
pub use liealg::{Element, Ideal, LieError, RealizedAlgebra};
pub use repmod::RestrictedModule;
pub use torirank::{ClaimRecord, InvariantReport, Torus};
pub use truncpoly::{Derivation, Ring, TruncPoly};
pub use verify::VerificationReport;
