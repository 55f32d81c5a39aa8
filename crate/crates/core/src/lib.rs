//! Exact-arithmetic toolkit for Gromov-Witten / BPS generating series.
//!
//! The crate works with formal series `sum_A c_A(t) q^A` over a graded
//! lattice of effective classes, where each coefficient `c_A(t)` is an
//! even-exponent Laurent polynomial in `t` with exact rational entries and
//! an explicit truncation order. On top of that ring it provides:
//!
//! - the multi-cover transform between GW series and BPS tables ([`gv`]),
//! - the local-curve series `G_h(q,t)` built from partitions and hook
//!   lengths ([`localcurves`]),
//! - the unitriangular basis change extracting structure coefficients
//!   `e_{A,g}` ([`structure`]),
//! - the exponent-shifted single-class transform for Fano classes
//!   ([`fano`]),
//! - a line-oriented exact text format and deterministic table generators
//!   ([`io`]).
//!
//! All arithmetic is exact; no floating point anywhere.

pub mod error;
pub mod fano;
pub mod gv;
pub mod io;
pub mod kernels;
pub mod lattice;
pub mod localcurves;
pub mod qseries;
pub mod structure;
pub mod tpoly;

pub use error::{Error, Result};
pub use fano::FanoSeries;
pub use gv::BPSTable;
pub use kernels::KernelCache;
pub use lattice::{LatticeClass, LatticeConfig};
pub use localcurves::{LocalBps, Partition};
pub use qseries::QSeries;
pub use structure::{ETable, GSeriesCache};
pub use tpoly::TPoly;

/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(numer.into(), denom.into())
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
