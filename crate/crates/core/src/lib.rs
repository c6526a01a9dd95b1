//! Arc schemes of affine schemes along Artinian algebras, rationalization
//! trees for hypersurfaces and their geometric Igusa zeta series, plus a
//! brute-force finite-field counting oracle.

pub mod arcgen;
pub mod artin;
pub mod classring;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod rationalizer;

pub use error::{ArtinError, ClassError, OracleError, PolyError, TreeError};
pub use field::Field;
pub use poly::{parse_poly, scissor_reduce, Monomial, Poly, ScissorPolynomial};
