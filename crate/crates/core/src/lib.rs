//! Exact computations around ovoids of the parabolic quadric `Q(4,q)`.
//!
//! The crate builds candidate ovoids `O_4(f)` from bivariate polynomials,
//! checks the ovoid property with two independent oracles, attaches the
//! hypersurface `S_f` and counts its rational points, evaluates the explicit
//! Lang-Weil type bounds, searches low-degree `f` exhaustively, and checks
//! the linearized permutation-polynomial families in characteristic 3.

pub mod classify;
pub mod error;
pub mod families;
pub mod gf;
pub mod linpp;
pub mod mvpoly;
pub mod quadric;
pub mod surface;

pub use error::{Error, Result};
pub use families::{Family, FamilyParams, FamilySpec};
pub use gf::{Elem, Field, FieldSpec};
pub use mvpoly::{build_sf, BivariatePoly, HomogPoly5, SparsePoly};
pub use quadric::{OvoidCandidate, ProjPoint5};
