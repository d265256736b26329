//! Exact computations with isocrystals and filtered isocrystals over unramified
//! p-adic fields.

pub mod bc;
pub mod document;
pub mod error;
pub mod filtered;
pub mod hn;
pub mod isocrystal;
pub mod linalg;
pub mod newton;
pub mod padic;
pub mod poly;
pub mod rational;
pub mod scalar;

pub use bc::{BcAtom, BcInvariants, Ledger, LedgerVerdict, SymbolicBc};
pub use error::{Error, Result};
pub use filtered::{AdmissibilityVerdict, FilteredCategory, FilteredHn, FilteredIsocrystal, FiltrationStep, Subquotient, VerdictMode};
pub use hn::{HnCategory, HnFiltration, HnStep};
pub use isocrystal::{DmEntry, DmType, EnumerationMode, Isocrystal, SubIsocrystals};
pub use newton::{newton_polygon, slope_factorization, NewtonPolygon, Slope, SlopeFactorization};
pub use padic::{PadicScalar, UnramifiedField};
pub use rational::{RationalField, RationalQp};
pub use scalar::{Scalar, ScalarField, Valuation};

/// Matrices over the truncated p-adic scalars.
pub type Matrix = linalg::Matrix<PadicScalar>;
/// Subspaces of K^n over the truncated p-adic scalars.
pub type Subspace = linalg::Subspace<PadicScalar>;
/// σ-semilinear maps over the truncated p-adic scalars.
pub type SigmaLinearMap = linalg::SigmaLinearMap<PadicScalar>;
/// Polynomials over the truncated p-adic scalars.
pub type Poly = poly::Poly<PadicScalar>;
