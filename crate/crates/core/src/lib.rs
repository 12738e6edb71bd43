//! Differential phase response of two-sensor atomic detectors to a
//! plane gravitational wave, in the long-wavelength expansion.
//!
//! Everything numerical is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix `f64` for everyday use.
//!
//! ```
//! use gwsense_core::{differential_phase, Scenario, SensorKind, SequenceKind};
//!
//! let spec = Scenario::new(SensorKind::ClockGeodesic, SequenceKind::Echo);
//! let phases = differential_phase(&spec.setup()?)?;
//! assert!(phases.gw_total().abs() < 1e-5);
//! # Ok::<(), gwsense_core::Error>(())
//! ```

pub mod catalog;
pub mod engine;
pub mod error;
pub mod model;
pub mod potential;
pub mod quadrature;
pub mod scalar;
pub mod scenario;
pub mod sequence;
pub mod trajectory;
pub mod verify;

pub use engine::{
    differential_phase, linearity_probe, sensor_phase, signal_amplitude, Component, EngineOptions, SensorKind,
};
pub use error::{Error, Result};
pub use sequence::{sequence_diagnostics, SequenceKind, Side};

pub type GwParams = model::GwParams<f64>;
pub type LaserParams = model::LaserParams<f64>;
pub type AtomParams = model::AtomParams<f64>;
pub type TrapParams = model::TrapParams<f64>;
pub type PulseSequence = sequence::PulseSequence<f64>;
pub type Pulse = sequence::Pulse<f64>;
pub type SensorConfig = engine::SensorConfig<f64>;
pub type DetectorSetup = engine::DetectorSetup<f64>;
pub type PhaseBreakdown = engine::PhaseBreakdown<f64>;
pub type SignalAmplitude = engine::SignalAmplitude<f64>;
pub type Scenario = scenario::ScenarioSpec<f64>;
pub type CatalogInput = catalog::CatalogInput<f64>;
