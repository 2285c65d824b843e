//! Casimir-Polder frequency shifts, spin-flip rates and forces for an atom
//! held at distance `z` above a planar slab in vacuum.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`] – physical constants and the SI ↔ reduced-variable conversions.
//! * [`quadrature`] – the adaptive Gauss–Kronrod engine every integral goes through.
//! * [`materials`] – ε(iω) for each response model, plus the Mattis–Bardeen
//!   conductivity of a BCS superconductor.
//! * [`slabgreen`] – Fresnel/scattering coefficients and the equal-position
//!   curl-curl scattering Green tensor on the imaginary and real frequency axes.
//! * [`shifts`] – ground and excited state frequency shifts, spin-flip rates and
//!   the Weisskopf–Wigner amplitude.
//! * [`forces`] – the rescaled dimensionless forces `F_M`, `F_E` and their
//!   dimensional counterparts.
//!
//! Everything below the CLI works in reduced variables (`x = k_A z`,
//! `ξ = ω' z / c`, ...); SI units only appear at the edges.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forces;
pub mod materials;
pub mod quadrature;
pub mod shifts;
pub mod slabgreen;
pub mod units;

pub use error::{Error, Result};
pub use forces::{Coupling, ForcePoint};
pub use materials::MaterialModel;
pub use quadrature::{QuadratureResult, QuadratureSpec};
pub use shifts::{ShiftResult, Transition, TransitionSet};
pub use slabgreen::SlabGeometry;
pub use units::PhysicalConstants;
