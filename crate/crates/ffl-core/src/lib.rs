//! Dirichlet characters and L-functions over F_q[T].
//!
//! Everything here is `no_std` with `alloc`. Exact quantities live in
//! [`qsqrt::QSqrt`]; character values are `f64` complex numbers.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chargroup;
pub mod error;
pub mod gf;
pub mod lfunc;
pub mod moments;
pub mod multfun;
pub mod poly;
pub mod qsqrt;
pub mod sieveprobe;

pub use error::{Budget, Error, Result};
pub use gf::{Elem, Field};
pub use poly::{Factorization, Poly, Ring, SpfSieve};
pub use qsqrt::QSqrt;
