//! Polynomial Euler products and their local and global invariants.

mod character;
mod constants;
mod lvalue;
mod spec;

pub use character::{build_character, jacobi, kronecker, CharacterSource, CharacterSpec};
pub use constants::{a1_constant, c_constant, A1Mode, Constants};
pub use lvalue::{l_value, zeta};
pub use spec::{ComplexRepr, CustomProduct, DefaultRule, EulerProductSpec, ProductFile, ProductKind};
