#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod approx;
pub mod bicomplex;
pub mod diff;
pub mod dirac;
pub mod error;
pub mod field;
pub mod formal;
pub mod goursat;
pub mod grid;
pub mod path;
pub mod quadrature;
pub mod systems;
pub mod transmutation;

pub use bicomplex::{Bicomplex, C64};
pub use error::{Error, Result};
pub use field::{BicomplexField2D, ComplexField1D, ComplexField2D, Field1D, Field2D, Sample};
pub use grid::{Grid2D, SymmetricGrid1D};
