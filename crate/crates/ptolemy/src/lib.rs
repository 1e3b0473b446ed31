//! Ptolemy varieties of triangulated 3-manifolds.
//!
//! Pipeline: an ordered triangulation is turned into the degree-2 polynomial
//! system cutting out boundary-unipotent `SL(n,C)` (or `pSL(n,C)`)
//! representations, the system is solved numerically, and each solution is
//! pushed through flattenings and the Rogers dilogarithm to its complex
//! volume. Matrix reconstruction and Thurston's gluing equations provide
//! independent cross-checks.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

pub mod bloch;
pub mod gluing;
pub mod irrep;
pub mod mat;
pub mod reconstruct;
pub mod relations;
pub mod solver;
pub mod triangulation;
pub mod variety;

/// Floating-point scalar the numerical kernels are generic over.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Complex number over a generic scalar.
pub type C<T> = Complex<T>;

/// Concrete double-precision aliases used by the CLI and the test suite.
pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub use bloch::{complex_volume, dilog, rogers_r, Flattening, LiftPolicy, Parity};
pub use solver::{PtolemySolution, SolverConfig};
pub use triangulation::Triangulation;
pub use variety::PolynomialSystem;




