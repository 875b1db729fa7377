//! Associated Euler totient functions of polynomial Euler products.
//!
//! Given local roots `alpha_j(p)`, the crate builds the coefficients
//! `alpha(n)`, the totient `phi(n, F)`, the constant `C(F)`, the error term
//! `E(x, F)` and its split into the saw-tooth part `x f_1(x, F)` and the
//! analytic part `g_1(x, F)/2`, and checks the Volterra integral equation that
//! `E_2` satisfies.

pub mod affine;
pub mod coeffs;
pub mod decomp;
pub mod volterra;
pub mod report;
pub mod cli;
pub mod error;
pub mod numeric;
pub mod primes;
pub mod products;

pub use error::{Error, Result};
pub use numeric::{Abscissa, BoundKind, Scalar, ValueWithBound};
pub use products::{Constants, EulerProductSpec};
