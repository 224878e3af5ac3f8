pub mod config;
pub mod error;
pub mod heatkernel;
pub mod hgroup;
pub mod lattice;
pub mod numeric;
pub mod partialweights;
pub mod specfun;
pub mod twisted;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub struct BookIntroduction;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/group.md")]
pub struct BookGroup;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/heat_kernels.md")]
pub struct BookHeatKernels;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/twisted.md")]
pub struct BookTwisted;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/partial_weights.md")]
pub struct BookPartialWeights;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
pub struct BookVerification;
