//! Direct and inverse scattering for the selfadjoint half-line Schrödinger
//! operator `-ψ'' + V(x)ψ = k²ψ` with a real, integrable potential supported
//! on `[0, b]` and a general selfadjoint boundary condition at the origin.
//!
//! The toolkit covers:
//! - the direct problem: Jost solution and Jost function on all of ℂ,
//!   scattering matrix, bound states and norming constants, full-line
//!   transmission/reflection coefficients ([`direct`]);
//! - location and classification of imaginary resonances into eligible and
//!   ineligible ones ([`resonance`]);
//! - support-preserving Darboux transformations that add or remove bound
//!   states ([`darboux`]);
//! - recovery of the potential and boundary condition from the scattering
//!   matrix alone, including the two-solution special case ([`marchenko`]);
//! - recovery from the modulus of the Jost function alone, with the full
//!   2^M family of solutions ([`gelfand_levitan`]).
//!
//! Potentials are piecewise constant, which makes every ODE propagation and
//! every quadrature of squared solutions exact per cell.

pub mod darboux;
pub mod direct;
pub mod error;
pub mod fourier;
pub mod fredholm;
pub mod gelfand_levitan;
pub mod grid;
pub mod marchenko;
pub mod potential;
pub mod propagate;
pub mod rational;
pub mod resonance;

pub use error::{Error, Result};
pub use grid::SampledFunction;
pub use potential::{BoundState, BoundStateSet, BoundaryParameter, OperatorSpec, Potential};

/// Default upper end of the k-sampling grid.
pub const KMAX_DEFAULT: f64 = 100.0;
/// Default k-grid spacing.
pub const DK_DEFAULT: f64 = 0.01;
/// Default number of cells for reconstructed potentials.
pub const CELLS_DEFAULT: usize = 512;
