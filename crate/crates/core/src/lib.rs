//! Verification laboratory for the Bloch-Nordsieck model of infrared
//! electrodynamics in the Feynman-gauge Gupta-Bleuler formulation.
//!
//! The interacting vector potential of the model is a free field plus a
//! c-number shift that depends on the charge's position and velocity. Every
//! state studied here is therefore "Fock vacuum plus coherent classical
//! shift", and the library is organised around that split:
//!
//! - [`kernel`]: Minkowski geometry, the Gaussian form factor, quadrature and
//!   region classification.
//! - [`fock`]: a finite-mode indefinite-metric Fock algebra.
//! - [`fields`]: the classical shift fields (interior, exterior, Coulomb and
//!   Liénard-Wiechert compensating fields) with closed-form and
//!   momentum-space evaluators.
//! - [`asymptotics`]: Klein-Gordon smearing with free packets and out/in limits.
//! - [`states`]: quasi-free charged states, Gauss-law deviations, Dirac-type
//!   shift automorphisms and charge-class probes.

pub mod asymptotics;
pub mod error;
pub mod fields;
pub mod fock;
pub mod kernel;
pub mod states;

pub use error::{Error, Result};
pub use kernel::{FormFactor, FourVector, Vec3};
