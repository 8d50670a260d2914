//! Sparse bivariate polynomials, Newton polygons and a factor search.

mod construct;
mod minkowski;
mod oracle;
mod poly;
mod polygon;

use thiserror::Error;

use crate::ffield::FieldError;

pub use construct::{
    p1_hypothesis, p1_poly, p2_boundary_factorization, p2_hypothesis, p2_poly, p2_reducible_r,
    p2_symmetric_factorization, q_construct, qr_family, QConstruction, QuadPoly,
};
pub use minkowski::{minkowski_splits, MinkowskiSplit, SplitKind};
pub use oracle::{
    irreducible_oracle, same_up_to_scalar, IrreducibilityScope, OracleCaps,
    OracleOutcome, Verdict,
};
pub use poly::{Exponent, SharpPart, SparseBivarPoly};
pub use polygon::{newton_polygon, LatticePolygon, Point, PolygonKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NewtonError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("substitution coefficient is zero")]
    ZeroSubstitutionCoefficient,
    #[error("negative exponent ({x}, {y})")]
    NegativeExponent { x: i64, y: i64 },
    #[error("hypothesis fails: {0}")]
    Hypothesis(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
}
