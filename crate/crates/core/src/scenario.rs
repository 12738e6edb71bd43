//! Dimensionless description of a detector run and its matching closed form.
//!
//! Times are given as GW phases (`ω_G·T`), the wave frequency through `k_G L`,
//! so scenarios stay well-conditioned when sweeping across decades.

use crate::catalog::{
    composite_amplitude, echo_clock, guided_ai, mz_ai, ramsey_clock, CatalogInput, CompositeKind,
};
use crate::engine::{quadratures, Component, DetectorSetup, SensorConfig, SensorKind, SignalAmplitude};
use crate::error::{Error, Result};
use crate::model::{c, validate_configuration, AtomParams, Diagnostics, GwParams, LaserParams};
use crate::scalar::Real;
use crate::sequence::{build, build_custom, PulseSequence, PulseSpec, SequenceKind};
use crate::trajectory::GuidedProfile;

/// Strontium-87 mass, kg.
pub const REFERENCE_MASS: f64 = 1.443e-25;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec<T> {
    pub sensor: SensorKind,
    pub sequence: SequenceKind,
    /// Composite order `N`.
    pub order: usize,
    pub h_plus: T,
    pub phase0: T,
    /// `k_G L`; fixes `ω_G = c k_G`.
    pub k_g_l: T,
    /// `ω_G T`.
    pub omega_g_t: T,
    pub baseline: T,
    pub k_l: T,
    /// Transition wave number; `None` means a resonant laser.
    pub k_a: Option<T>,
    pub mass: T,
    /// `ω_T / ω_G` for clocks.
    pub omega_t_ratio: T,
    /// Differential acceleration of guided sensors, m/s².
    pub accel: T,
    /// `ω_G T_a` for guided sensors.
    pub omega_g_t_a: T,
    pub geodesic_t0: T,
    /// Explicit pulses for `SequenceKind::Custom`.
    pub custom_pulses: Vec<PulseSpec<T>>,
}

impl<T: Real> Default for ScenarioSpec<T> {
    fn default() -> Self {
        Self {
            sensor: SensorKind::ClockGeodesic,
            sequence: SequenceKind::Echo,
            order: 1,
            h_plus: T::lit(1e-6),
            phase0: T::lit(0.3),
            k_g_l: T::lit(1e-4),
            omega_g_t: T::PI(),
            baseline: T::one(),
            k_l: T::one(),
            k_a: None,
            mass: T::lit(REFERENCE_MASS),
            omega_t_ratio: T::lit(100.0),
            accel: T::lit(1e-3),
            omega_g_t_a: T::one(),
            geodesic_t0: T::zero(),
            custom_pulses: Vec::new(),
        }
    }
}

impl<T: Real> ScenarioSpec<T> {
    pub fn new(sensor: SensorKind, sequence: SequenceKind) -> Self {
        Self {
            sensor,
            sequence,
            ..Self::default()
        }
    }

    pub fn omega_g(&self) -> T {
        c::<T>() * self.k_g_l / self.baseline
    }

    pub fn interrogation_time(&self) -> T {
        self.omega_g_t / self.omega_g()
    }

    pub fn tau(&self) -> T {
        self.baseline / c::<T>()
    }

    pub fn gw(&self) -> Result<GwParams<T>> {
        GwParams::new(self.h_plus, self.omega_g(), self.phase0)
    }

    pub fn laser(&self) -> Result<LaserParams<T>> {
        match self.k_a {
            None => LaserParams::resonant(self.k_l),
            Some(ka) => LaserParams::new(self.k_l, ka * c::<T>()),
        }
    }

    pub fn atom(&self) -> Result<AtomParams<T>> {
        AtomParams::from_transition(self.mass, self.laser()?.omega_a())
    }

    pub fn guided_profile(&self) -> Result<GuidedProfile<T>> {
        let w = self.omega_g();
        GuidedProfile::new(self.accel, self.omega_g_t_a / w, self.omega_g_t / w)
    }

    fn check(&self) -> Result<()> {
        if !(self.baseline.is_finite() && self.baseline > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "L",
                value: self.baseline.as_f64(),
                requirement: "finite and > 0",
            });
        }
        for (name, v) in [("k_g_L", self.k_g_l), ("omega_g_T", self.omega_g_t)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v.as_f64(),
                    requirement: "finite and > 0",
                });
            }
        }
        if self.sensor.is_clock() && !(self.omega_t_ratio.is_finite() && self.omega_t_ratio > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "omega_t_ratio",
                value: self.omega_t_ratio.as_f64(),
                requirement: "finite and > 0",
            });
        }
        Ok(())
    }

    /// Pulse sequence with warnings from custom tables.
    pub fn pulse_sequence(&self) -> Result<(PulseSequence<T>, Vec<String>)> {
        self.check()?;
        let (t, tau) = (self.interrogation_time(), self.tau());
        if self.sensor == SensorKind::GuidedAi {
            return Ok((PulseSequence::empty(t, tau), Vec::new()));
        }
        match self.sequence {
            SequenceKind::Custom => build_custom(&self.custom_pulses, t, tau),
            kind => Ok((build(kind, self.order, t, tau)?, Vec::new())),
        }
    }

    pub fn sensor_config(&self) -> Result<SensorConfig<T>> {
        let wt = self.omega_t_ratio * self.omega_g();
        Ok(match self.sensor {
            SensorKind::ClockStationary => SensorConfig::stationary_clock(wt)?,
            SensorKind::ClockGeodesic => SensorConfig::geodesic_clock(wt)?.with_geodesic_t0(self.geodesic_t0),
            SensorKind::LightPulseAi => SensorConfig::lightpulse_ai(),
            SensorKind::GuidedAi => SensorConfig::guided_ai(self.guided_profile()?),
        })
    }

    pub fn setup(&self) -> Result<DetectorSetup<T>> {
        let (seq, _) = self.pulse_sequence()?;
        DetectorSetup::symmetric(
            self.sensor_config()?,
            self.baseline,
            self.gw()?,
            self.laser()?,
            self.atom()?,
            seq,
        )
    }

    /// Regime checks of the parameters.
    pub fn diagnostics(&self) -> Result<Diagnostics> {
        self.check()?;
        let cfg = self.sensor_config()?;
        let trap = cfg.trap.map(|t| t.centered_at(self.baseline));
        validate_configuration(
            &self.gw()?,
            &self.laser()?,
            &self.atom()?,
            trap.as_ref(),
            self.baseline,
            self.sensor.is_clock(),
        )
    }

    /// Engine component with a printed closed form, and the cos/sin
    /// coefficients of that closed form. `None` when no closed form applies.
    pub fn catalog_reference(&self) -> Result<Option<(Component, SignalAmplitude<T>)>> {
        let inp = CatalogInput::new(&self.gw()?, &self.laser()?, self.baseline);
        let t = self.interrogation_time();
        let tau = self.tau();
        let at = |phi: T| inp.with_phase0(phi);
        use SensorKind::*;
        use SequenceKind::*;
        Ok(match (self.sensor, self.sequence) {
            (ClockGeodesic, Ramsey) => Some((Component::K, quadratures(|p| Ok(ramsey_clock(&at(p), t).delta_phi))?)),
            (ClockGeodesic, Echo) => Some((Component::K, quadratures(|p| Ok(echo_clock(&at(p), t).delta_phi))?)),
            (LightPulseAi, MachZehnder) => Some((Component::G, quadratures(|p| Ok(mz_ai(&at(p), t).delta_phi))?)),
            (LightPulseAi, LmtMz) => Some((
                Component::GwTotal,
                composite_amplitude(CompositeKind::Ai, self.order, t, tau, &inp)?,
            )),
            (ClockGeodesic, HyperEcho) => Some((
                Component::GwTotal,
                composite_amplitude(CompositeKind::Clock, self.order, t, tau, &inp)?,
            )),
            (GuidedAi, _) => {
                let profile = self.guided_profile()?;
                let atom = self.atom()?;
                Some((
                    Component::G,
                    quadratures(|p| Ok(guided_ai(&at(p), &profile, &atom).delta_phi))?,
                ))
            }
            _ => None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::signal_amplitude;

    #[test]
    fn reference_scenario_is_in_regime() {
        let s = ScenarioSpec::<f64>::default();
        let d = s.diagnostics().unwrap();
        assert!(d.all_pass(), "{d:?}");
        assert!((s.omega_g() * s.interrogation_time() - core::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn every_reference_pair_matches_its_closed_form() {
        use SensorKind::*;
        use SequenceKind::*;
        for (sensor, seq, n) in [
            (ClockGeodesic, Ramsey, 1),
            (ClockGeodesic, Echo, 1),
            (LightPulseAi, MachZehnder, 1),
            (LightPulseAi, LmtMz, 2),
            (ClockGeodesic, HyperEcho, 2),
            (GuidedAi, Echo, 1),
        ] {
            let spec = ScenarioSpec::<f64> {
                order: n,
                ..ScenarioSpec::new(sensor, seq)
            };
            let (comp, cat) = spec.catalog_reference().unwrap().unwrap();
            let eng = signal_amplitude(&spec.setup().unwrap(), comp).unwrap();
            assert!(eng.relative_error(&cat) < 1e-3, "{sensor} {seq}: {}", eng.relative_error(&cat));
        }
    }

    #[test]
    fn stationary_has_no_closed_form_pairing() {
        let spec = ScenarioSpec::<f64>::new(SensorKind::ClockStationary, SequenceKind::Echo);
        assert!(spec.catalog_reference().unwrap().is_none());
        assert!(spec.setup().is_ok());
    }

    #[test]
    fn invalid_specs() {
        let bad = ScenarioSpec::<f64> {
            baseline: 0.0,
            ..Default::default()
        };
        assert!(bad.setup().is_err());
        let strong = ScenarioSpec::<f64> {
            h_plus: 0.5,
            ..Default::default()
        };
        assert!(matches!(strong.setup(), Err(Error::WeakField(_))));
    }
}
