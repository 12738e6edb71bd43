//! Numerical phase functional: smooth potentials by Gauss–Legendre quadrature
//! between pulses, impulsive ones as exact per-pulse increments.

use core::fmt;
use core::ops::Sub;

use crate::error::{Error, Result};
use crate::model::{c, AtomParams, CenterMode, GwParams, LaserParams, TrapParams};
use crate::potential::{omega_g_common_difference, omega_g_parts, impulsive_phase_increment, smooth_branch_rate, PotentialTerm};
use crate::quadrature::GaussLegendre;
use crate::scalar::Real;
use crate::sequence::{PulseSequence, SequenceKind, Side};
use crate::trajectory::{
    clock_branch_kinematics, guided_branch_kinematics, lightpulse_branch_kinematics, BranchKinematics,
    GuidedProfile, Separation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SensorKind {
    ClockStationary,
    ClockGeodesic,
    LightPulseAi,
    GuidedAi,
}

impl SensorKind {
    pub fn name(self) -> &'static str {
        match self {
            SensorKind::ClockStationary => "clock_stationary",
            SensorKind::ClockGeodesic => "clock_geodesic",
            SensorKind::LightPulseAi => "lightpulse_ai",
            SensorKind::GuidedAi => "guided_ai",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "clock_stationary" => SensorKind::ClockStationary,
            "clock_geodesic" => SensorKind::ClockGeodesic,
            "lightpulse_ai" => SensorKind::LightPulseAi,
            "guided_ai" => SensorKind::GuidedAi,
            _ => return None,
        })
    }

    pub fn is_clock(self) -> bool {
        matches!(self, SensorKind::ClockStationary | SensorKind::ClockGeodesic)
    }
}

impl fmt::Display for SensorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorConfig<T> {
    pub kind: SensorKind,
    pub z_offset: T,
    pub trap: Option<TrapParams<T>>,
    pub guided: Option<GuidedProfile<T>>,
    /// Time at which a geodesic trap centre is at rest.
    pub geodesic_t0: T,
}

impl<T: Real> SensorConfig<T> {
    fn clock(omega_t: T, mode: CenterMode) -> Result<Self> {
        Ok(Self {
            kind: match mode {
                CenterMode::Stationary => SensorKind::ClockStationary,
                CenterMode::Geodesic => SensorKind::ClockGeodesic,
            },
            z_offset: T::zero(),
            trap: Some(TrapParams::new(omega_t, mode, T::zero())?),
            guided: None,
            geodesic_t0: T::zero(),
        })
    }

    pub fn stationary_clock(omega_t: T) -> Result<Self> {
        Self::clock(omega_t, CenterMode::Stationary)
    }

    pub fn geodesic_clock(omega_t: T) -> Result<Self> {
        Self::clock(omega_t, CenterMode::Geodesic)
    }

    pub fn lightpulse_ai() -> Self {
        Self {
            kind: SensorKind::LightPulseAi,
            z_offset: T::zero(),
            trap: None,
            guided: None,
            geodesic_t0: T::zero(),
        }
    }

    pub fn guided_ai(profile: GuidedProfile<T>) -> Self {
        Self {
            kind: SensorKind::GuidedAi,
            z_offset: T::zero(),
            trap: None,
            guided: Some(profile),
            geodesic_t0: T::zero(),
        }
    }

    /// Same sensor placed at `z`; a trap moves with it.
    pub fn at(mut self, z: T) -> Self {
        self.z_offset = z;
        self.trap = self.trap.map(|t| t.centered_at(z));
        self
    }

    pub fn with_geodesic_t0(mut self, t0: T) -> Self {
        self.geodesic_t0 = t0;
        self
    }
}

/// Numerical settings of the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    pub quadrature_order: usize,
    /// Largest GW phase advance `ω_G·Δt` across one quadrature panel.
    pub max_panel_phase: f64,
    /// Reject light-pulse sequences without momentum closure.
    pub strict: bool,
    pub oracle_points: usize,
    pub oracle_tolerance: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            quadrature_order: 32,
            max_panel_phase: core::f64::consts::FRAC_PI_2,
            strict: true,
            oracle_points: 64,
            oracle_tolerance: 1e-6,
        }
    }
}

/// Two sensors at `z = L` (a) and `z = 0` (b) driven by one pulse sequence.
#[derive(Debug, Clone)]
pub struct DetectorSetup<T> {
    sensor_a: SensorConfig<T>,
    sensor_b: SensorConfig<T>,
    baseline: T,
    tau: T,
    gw: GwParams<T>,
    laser: LaserParams<T>,
    atom: AtomParams<T>,
    sequence: PulseSequence<T>,
    options: EngineOptions,
    quad: GaussLegendre<T>,
}

impl<T: Real> DetectorSetup<T> {
    pub fn new(
        sensor_a: SensorConfig<T>,
        sensor_b: SensorConfig<T>,
        baseline: T,
        gw: GwParams<T>,
        laser: LaserParams<T>,
        atom: AtomParams<T>,
        sequence: PulseSequence<T>,
    ) -> Result<Self> {
        if !(baseline.is_finite() && baseline >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "L",
                value: baseline.as_f64(),
                requirement: "finite and >= 0",
            });
        }
        if sensor_a.z_offset != baseline || sensor_b.z_offset != T::zero() {
            return Err(Error::Sensor(format!(
                "sensor a must sit at z = L = {:e} m and sensor b at 0 (got {:e}, {:e})",
                baseline.as_f64(),
                sensor_a.z_offset.as_f64(),
                sensor_b.z_offset.as_f64()
            )));
        }
        let tau = baseline / c::<T>();
        let uses_pulses = [sensor_a.kind, sensor_b.kind]
            .iter()
            .any(|k| *k != SensorKind::GuidedAi);
        if uses_pulses && sequence.kind != SequenceKind::Custom {
            let tol = T::lit(1e-12) * tau.max(T::min_positive_value());
            if (sequence.tau - tau).abs() > tol {
                return Err(Error::Sensor(format!(
                    "sequence delay {:e} s differs from L/c = {:e} s",
                    sequence.tau.as_f64(),
                    tau.as_f64()
                )));
            }
        }
        for s in [&sensor_a, &sensor_b] {
            check_sensor(s, &laser, &atom, &sequence)?;
        }
        let options = EngineOptions::default();
        Ok(Self {
            sensor_a,
            sensor_b,
            baseline,
            tau,
            gw,
            laser,
            atom,
            sequence,
            quad: GaussLegendre::new(options.quadrature_order),
            options,
        })
    }

    /// Identical sensors at `L` and at the origin.
    pub fn symmetric(
        sensor: SensorConfig<T>,
        baseline: T,
        gw: GwParams<T>,
        laser: LaserParams<T>,
        atom: AtomParams<T>,
        sequence: PulseSequence<T>,
    ) -> Result<Self> {
        Self::new(sensor.at(baseline), sensor.at(T::zero()), baseline, gw, laser, atom, sequence)
    }

    pub fn with_options(mut self, options: EngineOptions) -> Self {
        if options.quadrature_order != self.options.quadrature_order {
            self.quad = GaussLegendre::new(options.quadrature_order);
        }
        self.options = options;
        self
    }

    pub fn with_gw(&self, gw: GwParams<T>) -> Result<Self> {
        let mut s = self.clone();
        s.gw = gw;
        for sensor in [&s.sensor_a, &s.sensor_b] {
            check_sensor(sensor, &s.laser, &s.atom, &s.sequence)?;
        }
        Ok(s)
    }

    pub fn with_phase0(&self, phase0: T) -> Result<Self> {
        self.with_gw(self.gw.with_phase0(phase0)?)
    }

    pub fn with_h_plus(&self, h: T) -> Result<Self> {
        self.with_gw(self.gw.with_h_plus(h)?)
    }

    pub fn sensor(&self, side: Side) -> &SensorConfig<T> {
        match side {
            Side::A => &self.sensor_a,
            Side::B => &self.sensor_b,
        }
    }

    pub fn baseline(&self) -> T {
        self.baseline
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn gw(&self) -> &GwParams<T> {
        &self.gw
    }

    pub fn laser(&self) -> &LaserParams<T> {
        &self.laser
    }

    pub fn atom(&self) -> &AtomParams<T> {
        &self.atom
    }

    pub fn sequence(&self) -> &PulseSequence<T> {
        &self.sequence
    }

    pub fn options(&self) -> &EngineOptions {
        &self.options
    }
}

fn check_sensor<T: Real>(
    s: &SensorConfig<T>,
    laser: &LaserParams<T>,
    atom: &AtomParams<T>,
    seq: &PulseSequence<T>,
) -> Result<()> {
    match s.kind {
        SensorKind::ClockStationary | SensorKind::ClockGeodesic => {
            let trap = s
                .trap
                .ok_or_else(|| Error::Sensor(format!("{} needs trap parameters", s.kind)))?;
            let want = if s.kind == SensorKind::ClockStationary {
                CenterMode::Stationary
            } else {
                CenterMode::Geodesic
            };
            if trap.center_mode != want {
                return Err(Error::Sensor(format!("{} with mismatched trap centre mode", s.kind)));
            }
            let eta = trap.lamb_dicke(laser, atom);
            if !(eta < T::one()) {
                return Err(Error::Sensor(format!(
                    "clock outside the Lamb-Dicke regime: eta = {:e}",
                    eta.as_f64()
                )));
            }
        }
        SensorKind::LightPulseAi => {}
        SensorKind::GuidedAi => {
            if s.guided.is_none() {
                return Err(Error::Sensor("guided_ai needs an acceleration profile".into()));
            }
            return Ok(());
        }
    }
    if seq.is_empty() {
        return Err(Error::Sensor(format!("{} needs a non-empty pulse sequence", s.kind)));
    }
    Ok(())
}

/// Phase contributions of one sensor, or their differences between sensors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseBreakdown<T> {
    /// Laser detuning phase (no wave dependence).
    pub phi_omega: T,
    /// `h₊`-independent part of the kick phase.
    pub phi_k_static: T,
    /// Wave-induced part of the kick phase.
    pub phi_k_wave: T,
    pub phi_g: T,
    pub phi_omega_g: T,
    pub phi_k_g: T,
    pub phi_dm_g: T,
    pub phi_trap: T,
}

impl<T: Real> PhaseBreakdown<T> {
    pub fn phi_k(&self) -> T {
        self.phi_k_static + self.phi_k_wave
    }

    pub fn total(&self) -> T {
        self.phi_omega + self.phi_k() + self.phi_g + self.phi_omega_g + self.phi_k_g + self.phi_dm_g + self.phi_trap
    }

    /// Sum of the wave-induced contributions.
    pub fn gw_total(&self) -> T {
        self.phi_k_wave + self.phi_g + self.phi_omega_g + self.phi_k_g + self.phi_dm_g
    }

    pub fn get(&self, c: Component) -> T {
        match c {
            Component::GwTotal => self.gw_total(),
            Component::K => self.phi_k_wave,
            Component::G => self.phi_g,
            Component::OmegaG => self.phi_omega_g,
            Component::KG => self.phi_k_g,
            Component::DmG => self.phi_dm_g,
        }
    }
}

impl<T: Real> Sub for PhaseBreakdown<T> {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self {
            phi_omega: self.phi_omega - o.phi_omega,
            phi_k_static: self.phi_k_static - o.phi_k_static,
            phi_k_wave: self.phi_k_wave - o.phi_k_wave,
            phi_g: self.phi_g - o.phi_g,
            phi_omega_g: self.phi_omega_g - o.phi_omega_g,
            phi_k_g: self.phi_k_g - o.phi_k_g,
            phi_dm_g: self.phi_dm_g - o.phi_dm_g,
            phi_trap: self.phi_trap - o.phi_trap,
        }
    }
}

/// Wave-linear quantities a signal amplitude can be taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    GwTotal,
    K,
    G,
    OmegaG,
    KG,
    DmG,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::GwTotal,
        Component::K,
        Component::G,
        Component::OmegaG,
        Component::KG,
        Component::DmG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::GwTotal => "gw_total",
            Component::K => "phi_k",
            Component::G => "phi_G",
            Component::OmegaG => "phi_omega_G",
            Component::KG => "phi_k_G",
            Component::DmG => "phi_dm_G",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Component::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Kinematics of the sensor on `side`.
pub fn sensor_kinematics<T: Real>(setup: &DetectorSetup<T>, side: Side) -> Result<BranchKinematics<T>> {
    let s = setup.sensor(side);
    match s.kind {
        SensorKind::ClockStationary | SensorKind::ClockGeodesic => {
            let trap = s.trap.expect("validated").centered_at(s.z_offset);
            clock_branch_kinematics(&setup.sequence, side, &trap, s.geodesic_t0, &setup.gw)
        }
        SensorKind::LightPulseAi => lightpulse_branch_kinematics(
            &setup.sequence,
            side,
            &setup.laser,
            &setup.atom,
            s.z_offset,
            &setup.gw,
            setup.options.strict,
        ),
        SensorKind::GuidedAi => Ok(guided_branch_kinematics(
            &s.guided.expect("validated"),
            s.z_offset,
            &setup.gw,
        )),
    }
}

/// `−∫ [V(z₁) − V(z₂)] dt / ħ` over the support of the kinematics.
fn smooth_phase<T: Real>(
    setup: &DetectorSetup<T>,
    kin: &BranchKinematics<T>,
    term: PotentialTerm,
    trap: Option<&TrapParams<T>>,
    omega_max: T,
) -> Result<T> {
    if kin.support().is_none() {
        return Ok(T::zero());
    }
    let width = T::lit(setup.options.max_panel_phase) / omega_max;
    let mut f = |t: T| smooth_branch_rate(term, kin, t, &setup.atom, trap).expect("smooth term");
    Ok(-setup.quad.integrate_piecewise(kin.breakpoints(), width, &mut f)?)
}

/// Phase breakdown of one sensor, plus the sensor-independent part of the
/// `ω`-laser phase kept separate so sensors can be differenced pairwise.
fn sensor_phase_split<T: Real>(setup: &DetectorSetup<T>, side: Side) -> Result<(PhaseBreakdown<T>, T)> {
    let kin = sensor_kinematics(setup, side)?;
    let sensor = setup.sensor(side);
    let mut out = PhaseBreakdown::default();
    let mut common = T::zero();
    if sensor.kind != SensorKind::GuidedAi {
        for p in &setup.sequence.pulses {
            let inc = |term| impulsive_phase_increment(term, p, &kin, side, &setup.laser);
            out.phi_omega = out.phi_omega + inc(PotentialTerm::Omega)?.total();
            let k = inc(PotentialTerm::K)?;
            out.phi_k_static = out.phi_k_static + k.base;
            out.phi_k_wave = out.phi_k_wave + k.wave;
            let (local, shared) = omega_g_parts(p, &kin, side, &setup.laser);
            out.phi_omega_g = out.phi_omega_g + local;
            common = common + shared;
            out.phi_k_g = out.phi_k_g + inc(PotentialTerm::KG)?.wave;
        }
    }
    // the stationary mean carries the trap frequency
    let omega_max = match sensor.kind {
        SensorKind::ClockStationary => sensor.trap.map_or(setup.gw.omega_g(), |t| t.omega_t.max(setup.gw.omega_g())),
        _ => setup.gw.omega_g(),
    };
    if !matches!(kin.separation_kind(), Separation::None) {
        out.phi_g = smooth_phase(setup, &kin, PotentialTerm::Gravity, None, omega_max)?;
        let trap = sensor.trap.map(|t| t.centered_at(sensor.z_offset));
        out.phi_trap = smooth_phase(setup, &kin, PotentialTerm::Trap, trap.as_ref(), omega_max)?;
    }
    out.phi_dm_g = smooth_phase(setup, &kin, PotentialTerm::MassDefect, None, omega_max)?;
    Ok((out, common))
}

/// Phase breakdown of one sensor.
pub fn sensor_phase<T: Real>(setup: &DetectorSetup<T>, side: Side) -> Result<PhaseBreakdown<T>> {
    let (mut out, common) = sensor_phase_split(setup, side)?;
    out.phi_omega_g = out.phi_omega_g + common;
    Ok(out)
}

/// `φ_a − φ_b` component by component.
pub fn differential_phase<T: Real>(setup: &DetectorSetup<T>) -> Result<PhaseBreakdown<T>> {
    let (a, ca) = sensor_phase_split(setup, Side::A)?;
    let (b, cb) = sensor_phase_split(setup, Side::B)?;
    let mut out = a - b;
    let pulsed = |side| setup.sensor(side).kind != SensorKind::GuidedAi;
    let common = if pulsed(Side::A) && pulsed(Side::B) {
        let seq = &setup.sequence;
        seq.pulses.iter().fold(T::zero(), |acc, p| {
            acc + omega_g_common_difference(p, &setup.gw, &setup.laser, seq.interrogation_time, seq.tau)
        })
    } else {
        ca - cb
    };
    out.phi_omega_g = out.phi_omega_g + common;
    Ok(out)
}

/// `δφ(φ) = A cos φ + B sin φ` and its rms over the unknown phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalAmplitude<T> {
    pub cos_coeff: T,
    pub sin_coeff: T,
    pub phi_s: T,
    /// Rms over the equally spaced phase grid, for comparison with `phi_s`.
    pub grid_phi_s: T,
}

impl<T: Real> SignalAmplitude<T> {
    pub fn from_coefficients(cos_coeff: T, sin_coeff: T) -> Self {
        let phi_s = ((cos_coeff * cos_coeff + sin_coeff * sin_coeff) / T::lit(2.0)).sqrt();
        Self {
            cos_coeff,
            sin_coeff,
            phi_s,
            grid_phi_s: phi_s,
        }
    }

    pub fn evaluate(&self, phase0: T) -> T {
        self.cos_coeff * phase0.cos() + self.sin_coeff * phase0.sin()
    }

    /// Norm of the coefficient pair.
    pub fn norm(&self) -> T {
        self.cos_coeff.hypot(self.sin_coeff)
    }

    /// `|(ΔA, ΔB)| / |(A_ref, B_ref)|`.
    pub fn relative_error(&self, reference: &Self) -> T {
        let d = (self.cos_coeff - reference.cos_coeff).hypot(self.sin_coeff - reference.sin_coeff);
        let n = reference.norm();
        if n == T::zero() {
            d
        } else {
            d / n
        }
    }
}

/// Cos/sin coefficients of a function that is linear in `(cos φ, sin φ)`.
pub fn quadratures<T: Real, F: FnMut(T) -> Result<T>>(mut f: F) -> Result<SignalAmplitude<T>> {
    Ok(SignalAmplitude::from_coefficients(f(T::zero())?, f(T::FRAC_PI_2())?))
}

/// Signal amplitude of one component of the differential phase.
pub fn signal_amplitude<T: Real>(setup: &DetectorSetup<T>, component: Component) -> Result<SignalAmplitude<T>> {
    let eval = |phi: T| -> Result<T> { Ok(differential_phase(&setup.with_phase0(phi)?)?.get(component)) };
    let mut amp = quadratures(eval)?;
    let n = setup.options.oracle_points.max(3);
    let mut sum = T::zero();
    for j in 0..n {
        let phi = T::TAU() * T::int(j as i64) / T::int(n as i64);
        let v = eval(phi)?;
        sum = sum + v * v;
    }
    amp.grid_phi_s = (sum / T::int(n as i64)).sqrt();
    let scale = amp.phi_s.max(amp.grid_phi_s);
    let gap = (amp.phi_s - amp.grid_phi_s).abs();
    if gap > T::lit(setup.options.oracle_tolerance) * scale && gap > roundoff_floor(setup) {
        return Err(Error::AmplitudeOracle {
            two_point: amp.phi_s.as_f64(),
            grid: amp.grid_phi_s.as_f64(),
        });
    }
    Ok(amp)
}

/// Rounding noise of the per-pulse strain terms: near zeros of the signal
/// both amplitudes sit at this level and their ratio is meaningless.
fn roundoff_floor<T: Real>(setup: &DetectorSetup<T>) -> T {
    let kicks: i64 = setup.sequence.pulses.iter().map(|p| (p.lambda_k as i64).abs()).sum();
    let reach = setup.sensor_a.z_offset.abs() + setup.sensor_b.z_offset.abs() + setup.baseline;
    let k = setup.laser.k_l() + setup.laser.k_a();
    T::lit(64.0) * T::epsilon() * setup.gw.h_plus().abs() * k * reach * T::int(kicks)
}

/// Departure of the differential phase from exact proportionality to `h₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearityReport<T> {
    /// Largest `|X(s·h₊) − s·X(h₊)| / (|s|·|(A, B)|)` over the individual
    /// components and scales, with `(A, B)` the quadrature coefficients of `X`.
    pub max_deviation: T,
    pub per_component: Vec<(Component, T)>,
    /// Same measure for `gw_total`, which can be a near-cancelling sum.
    pub total_deviation: T,
    /// Whether every wave component vanishes at `h₊ = 0`.
    pub zero_baseline: bool,
}

pub fn linearity_probe<T: Real>(setup: &DetectorSetup<T>, scales: &[T]) -> Result<LinearityReport<T>> {
    let h = setup.gw.h_plus();
    let reference = differential_phase(setup)?;
    // X(φ) and X(φ + π/2) have the same norm as (A, B)
    let quarter = differential_phase(&setup.with_phase0(setup.gw.phase0() + T::FRAC_PI_2())?)?;
    let zero = differential_phase(&setup.with_h_plus(T::zero())?)?;
    let zero_baseline = Component::ALL.iter().all(|c| zero.get(*c) == T::zero());
    let mut worst: Vec<(Component, T)> = Component::ALL.iter().map(|c| (*c, T::zero())).collect();
    for &s in scales {
        let scaled = differential_phase(&setup.with_h_plus(h * s)?)?;
        for (c, w) in worst.iter_mut() {
            let want = s * reference.get(*c);
            let dev = (scaled.get(*c) - want).abs();
            let norm = s.abs() * reference.get(*c).hypot(quarter.get(*c));
            let rel = if norm == T::zero() { dev } else { dev / norm };
            *w = w.max(rel);
        }
    }
    let (total, per_component): (Vec<_>, Vec<_>) = worst.into_iter().partition(|(c, _)| *c == Component::GwTotal);
    Ok(LinearityReport {
        max_deviation: per_component.iter().fold(T::zero(), |m, (_, d)| m.max(*d)),
        total_deviation: total.first().map_or(T::zero(), |(_, d)| *d),
        per_component,
        zero_baseline,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SPEED_OF_LIGHT;
    use crate::sequence::{build_echo, build_mach_zehnder, build_ramsey};
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    const KGL: f64 = 1e-4;

    fn parts(phi: f64) -> (GwParams<f64>, LaserParams<f64>, AtomParams<f64>) {
        let w = SPEED_OF_LIGHT * KGL;
        (
            GwParams::new(1e-6, w, phi).unwrap(),
            LaserParams::resonant(1.0).unwrap(),
            AtomParams::from_transition(1.443e-25, SPEED_OF_LIGHT).unwrap(),
        )
    }

    fn setup(sensor: SensorConfig<f64>, seq: fn(f64, f64) -> Result<PulseSequence<f64>>) -> DetectorSetup<f64> {
        let (g, l, a) = parts(0.3);
        let t = PI / g.omega_g();
        DetectorSetup::symmetric(sensor, 1.0, g, l, a, seq(t, 1.0 / SPEED_OF_LIGHT).unwrap()).unwrap()
    }

    #[test]
    fn zero_strain_gives_zero_wave_phases() {
        for sensor in [SensorConfig::geodesic_clock(1e6).unwrap(), SensorConfig::lightpulse_ai()] {
            let s = setup(sensor, build_echo).with_h_plus(0.0).unwrap();
            let d = differential_phase(&s).unwrap();
            for c in Component::ALL {
                assert_eq!(d.get(c), 0.0);
            }
        }
    }

    #[test]
    fn origin_clock_has_no_kick_phase() {
        let s = setup(SensorConfig::stationary_clock(1e6).unwrap(), build_echo);
        let b = sensor_phase(&s, Side::B).unwrap();
        assert_eq!(b.phi_k(), 0.0);
        assert_eq!(b.phi_omega, 0.0);
    }

    #[test]
    fn collocated_sensors_cancel() {
        let (g, l, a) = parts(0.3);
        let seq = build_echo(1e-4, 0.0).unwrap();
        let s = DetectorSetup::symmetric(SensorConfig::lightpulse_ai(), 0.0, g, l, a, seq).unwrap();
        let d = differential_phase(&s).unwrap();
        assert_eq!(d.total(), 0.0);
    }

    #[test]
    fn echo_clock_close_to_closed_form() {
        let s = setup(SensorConfig::geodesic_clock(1e6).unwrap(), build_echo);
        let amp = signal_amplitude(&s, Component::K).unwrap();
        assert_relative_eq!(amp.phi_s, 2f64.sqrt() * 1e-6, max_relative = 1e-3);
    }

    #[test]
    fn mach_zehnder_doppler_term() {
        let s = setup(SensorConfig::lightpulse_ai(), build_mach_zehnder);
        let amp = signal_amplitude(&s, Component::G).unwrap();
        assert_relative_eq!(amp.phi_s, 2f64.sqrt() * 1e-6, max_relative = 1e-3);
        let d = differential_phase(&s).unwrap();
        assert_relative_eq!(d.phi_k_g, -d.phi_g, max_relative = 1e-3);
    }

    #[test]
    fn linearity_is_exact_for_doubling() {
        for sensor in [
            SensorConfig::geodesic_clock(1e6).unwrap(),
            SensorConfig::stationary_clock(1e6).unwrap(),
            SensorConfig::lightpulse_ai(),
        ] {
            let s = setup(sensor, build_ramsey);
            let r = linearity_probe(&s, &[2.0, 0.5]).unwrap();
            assert!(r.max_deviation <= 1e-12, "{:?}", r);
            assert!(r.zero_baseline);
        }
    }

    #[test]
    fn setup_validation() {
        let (g, l, a) = parts(0.0);
        let seq = build_echo(1e-4, 1.0 / SPEED_OF_LIGHT).unwrap();
        let ai = SensorConfig::lightpulse_ai();
        assert!(DetectorSetup::new(ai.at(2.0), ai, 1.0, g, l, a, seq.clone()).is_err());
        let wrong_tau = build_echo(1e-4, 0.0).unwrap();
        assert!(DetectorSetup::symmetric(ai, 1.0, g, l, a, wrong_tau).is_err());
        let loose = SensorConfig::geodesic_clock(1e-30).unwrap();
        assert!(matches!(
            DetectorSetup::symmetric(loose, 1.0, g, l, a, seq),
            Err(Error::Sensor(m)) if m.contains("Lamb-Dicke")
        ));
    }

    #[test]
    fn amplitude_helpers() {
        let a = SignalAmplitude::from_coefficients(3.0, 0.0);
        assert_relative_eq!(a.phi_s, 3.0 / 2f64.sqrt());
        let b = SignalAmplitude::from_coefficients(3.0, 4.0);
        assert_relative_eq!(b.relative_error(&a), 4.0 / 3.0);
        assert_relative_eq!(b.evaluate(0.0), 3.0);
    }

    #[test]
    fn amplitude_at_a_signal_zero_is_not_an_oracle_failure() {
        let spec = crate::scenario::ScenarioSpec::<f64> {
            omega_g_t: 2.0 * PI,
            ..crate::scenario::ScenarioSpec::new(SensorKind::ClockGeodesic, crate::sequence::SequenceKind::Echo)
        };
        let amp = signal_amplitude(&spec.setup().unwrap(), Component::K).unwrap();
        assert!(amp.phi_s < 1e-18 && amp.grid_phi_s < 1e-18);
    }
}
