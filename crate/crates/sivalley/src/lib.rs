//! Multi-valley effective-mass simulator for electrostatically defined
//! silicon quantum dots.
//!
//! The library computes electric-field-controlled inter-valley coupling in a
//! rectangular dot (spectral sine-product basis, anisotropic masses, finite
//! or hard-wall barriers, magnetic field along z), tracks energy levels
//! across field sweeps, locates avoided crossings, and builds on those
//! results for charge-qubit Rabi dynamics, two-qubit SWAP gate analysis,
//! Monte Carlo Coulomb matrix elements and acoustic-phonon decoherence
//! bounds. The `sivalley` binary drives parameter sweeps and writes CSV
//! files with reproducibility manifests.

pub mod basis;
pub mod config;
pub mod coulomb;
pub mod dot;
pub mod eigen;
pub mod gates;
pub mod output;
pub mod phonon;
pub mod quadrature;
pub mod qubit;
pub mod solver;
pub mod units;
pub mod valley;
