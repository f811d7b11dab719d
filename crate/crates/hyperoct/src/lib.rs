//! Evaluation of the Lauricella `F_A` hypergeometric function, the
//! fundamental solution of the multidimensional elliptic equation with
//! `n` singular coefficients, and the explicit solution of the Neumann
//! problem in the hyperoctant by boundary quadrature, together with a
//! numerical verification suite for the identities these rest on.

pub mod cli;
pub mod error;
pub mod hyperfun;
pub mod kernel;
pub mod neumann;
pub mod quadrule;
pub mod verify;

pub use error::{Error, Result};
pub use hyperfun::{lauricella_fa, EvalOptions, FAParams, Method, SeriesResult};
pub use kernel::{DomainSpec, KernelConstants, Point};
