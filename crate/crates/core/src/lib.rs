//! Exact decision and classification of orthogonal pairs of homogeneous
//! polynomial maps between projective spaces carrying (possibly degenerate)
//! Hermitian forms.
//!
//! A pair `(f1, f2)` from `P^{r,s,t}` to `P^{r',s',t'}` is orthogonal when
//! `<f1(z), f2(w)> = 0` whenever `<z, w> = 0`. The crate decides this
//! property exactly, and classifies orthogonal pairs as null, standard or
//! quasi-standard, attaching witnesses that can be re-verified from scratch.

#![allow(clippy::needless_range_loop, clippy::large_enum_variant)]

pub mod classify;
pub mod cli;
pub mod error;
pub mod hermspace;
pub mod linalg;
pub mod mappair;
pub mod parse;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod segre;
pub mod spanlab;
pub mod workbench;

pub use error::{Error, Result};
pub use hermspace::{Signature, Subspace};
pub use mappair::MapPair;
pub use poly::{MPoly, MonomialOrder};
pub use scalar::{GaussianRational, Gr};
