//! Numerical workbench for the average of L^4-norms of holomorphic Hecke
//! cusp forms on SL2(Z).
//!
//! The crate is organized around the objects it verifies:
//!
//! * [`hecke`] — exact q-expansions, the Victor Miller basis, Hecke
//!   operators and Deligne-normalized eigenforms, plus GL(3) symmetric
//!   square coefficients.
//! * [`arith`], [`kloosterman`], [`expsums`], [`poisson`] — arithmetic
//!   functions, Kloosterman sums with the Weil bound, the complete
//!   exponential sums S1/S2/S3 from the error-term analysis, and a
//!   Poisson-summation comparator.
//! * [`gamma`], [`bessel`], [`bessel_avg`] — log-gamma, zeta, J-Bessel
//!   in three regimes (series / oscillatory quadrature / Langer), and
//!   weighted Bessel averages over the weight.
//! * [`afe`], [`lfun`] — completed-L-factor ratios, the cutoff weights
//!   V_{k,j}, central values L(1/2, g) and L(1/2, sym^2 f x g), edge
//!   values L(1, sym^2 f), Bump's identity and the main-term identity.
//! * [`geometry`] — quadrature over the SL2(Z) fundamental domain,
//!   L^2/L^4 norms, triple products and Watson's formula.
//! * [`trace`] — the Petersson trace formula check, the end-to-end
//!   L^4 consistency identity and the dyadic weight average.
//! * [`qcache`], [`report`] — the on-disk q-expansion cache and the
//!   JSON/CSV report types used by the CLI.

pub mod afe;
pub mod arith;
pub mod bessel;
pub mod bessel_avg;
pub mod error;
pub mod expsums;
pub mod gamma;
pub mod geometry;
pub mod hecke;
pub mod kloosterman;
pub mod lfun;
pub mod ntt;
pub mod poisson;
pub mod qcache;
pub mod qseries;
pub mod report;
pub mod trace;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
