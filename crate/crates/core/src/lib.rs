//! Exact construction and verification of origami rings.
//!
//! Starting from the points `0` and `1`, the ring `R(U_n)` is everything
//! reachable by intersecting lines through known points whose directions come
//! from the `n` equally spaced angles `kπ/n`. This crate provides:
//!
//! * [`cyclotomic`]: exact arithmetic in `Q(ζ_N)` with `N = 2n`,
//! * [`geometry`]: angles, the pairing `⟨x, y⟩ = x y* − x* y` and the
//!   intersection operator,
//! * [`closure`]: breadth-first generation of the ring from the seeds,
//! * [`numtheory`]: cyclotomic identities, integrality checks, ring
//!   membership and decomposition into monomial expressions,
//! * [`synth`]: fold programs that construct any ring element, and a verifier.

pub mod closure;
pub mod cyclotomic;
pub mod geometry;
pub mod literal;
pub mod numtheory;
pub mod poly;
pub mod primes;
pub mod synth;

use thiserror::Error;

pub use closure::{ClosureSet, Witness};
pub use cyclotomic::{integrality_profile, CycNum, CyclotomicField};
pub use geometry::{Angle, LinearMapPair, OrigamiField};
pub use literal::{format_literal, parse_literal};
pub use numtheory::{Membership, MonomialExpr, MonomialTerm, QuotientCertificate, SineQuotient};
pub use poly::{cyclotomic_poly, CycPolyTable, RationalPoly};
pub use synth::{FoldProgram, Instruction, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported precision: {0} bits (only 53 is available)")]
    UnsupportedPrecision(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct LiteralError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("angles must be distinct, got k = {0} twice")]
    EqualAngles(usize),
    #[error("angle order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("angle index {k} out of range for n = {n}")]
    AngleOutOfRange { n: usize, k: usize },
    #[error("nearly parallel lines: |sin| of the angle difference is {0:e}")]
    NearParallel(f64),
    #[error(transparent)]
    Field(#[from] CycError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrigamiError {
    #[error("n = {0} is too small: at least 3 angles are required")]
    OrderTooSmall(usize),
    #[error("n = {n} does not fit: {reason}")]
    BadOrder { n: usize, reason: String },
    #[error("{0}")]
    NotConstructible(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] CycError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProgramError {
    #[error("instruction {index}: {reason}")]
    Malformed { index: usize, reason: String },
    #[error("program orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("seed spacing must be exactly 1, got {0}")]
    SeedSpacing(String),
    #[error("register {0} is not defined")]
    UnknownRegister(usize),
    #[error("invalid program text: {0}")]
    Parse(String),
    #[error(transparent)]
    Origami(#[from] OrigamiError),
}
