//! Heat exchange between two coupled harmonic oscillators living in a
//! noncommutative (NC) phase space.
//!
//! The NC oscillators are mapped to ordinary canonical variables through a
//! linear Seiberg–Witten map ([`nc_algebra`]), which turns the NC Hamiltonian
//! into a commutative one whose mode coupling rate is shifted by a constant
//! `gamma` ([`hamiltonian`]). Local thermal states and their energies follow
//! in closed form ([`thermo`]). Two independent numerical routes check those
//! closed forms:
//!
//! * [`wigner_oracle`] integrates the Laguerre–Wigner two-mode states with
//!   tensor-product Gauss–Hermite quadrature;
//! * [`gaussian_dynamics`] transports second moments with the symplectic
//!   flow of the pulled-back Hamiltonian.
//!
//! [`cli`] wires everything into the `nctherm` binary.

// `!(x > 0.0)` guards are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod gaussian_dynamics;
pub mod hamiltonian;
pub mod nc_algebra;
pub mod numfmt;
pub mod thermo;
pub mod wigner_oracle;

pub use error::{Error, Result};
pub use gaussian_dynamics::{
    evolve_covariance, initial_pair_covariance, physicality_check, symplectic_propagator,
    CovState, PhysicalityReport, SymplecticPropagator, Units,
};
pub use hamiltonian::{
    build_nc_quadratic_form, closed_form_coefficients, coefficient_residual, gamma_shift,
    parts_commute_check, pullback_quadratic_form, CoeffSet, OscillatorSpec, QuadForm4,
    QuadratureScale,
};
pub use nc_algebra::{
    algebra_residual, nc_commutation_matrix, solve_sw_scaling, sw_map_matrix,
    standard_symplectic, CommutationMatrix, LinearMap4, NcAlgebra,
};
pub use thermo::{
    closed_form_covariance, equilibrium_time, heat_exchanged, heating_power, internal_energy,
    mean_occupation, scale_covariance, second_law_functional, temperature_of, HeatFlow, Mode,
    ThermalCM, ThermalPair,
};
pub use wigner_oracle::{
    laguerre, quadrature_local_moments, wigner_value, xi_forms, FockPair, LocalMoments,
};
