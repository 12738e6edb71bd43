//! Closed-form differential phases and signal amplitudes, evaluated exactly as
//! written (including their small-`k_G L` approximations).

use core::fmt;

use crate::engine::{quadratures, SignalAmplitude};
use crate::error::{Error, Result};
use crate::model::{c, AtomParams, GwParams, LaserParams};
use crate::scalar::{sinc, Real};
use crate::trajectory::GuidedProfile;

/// Inputs shared by every closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogInput<T> {
    pub h_plus: T,
    pub omega_g: T,
    pub phase0: T,
    pub k_l: T,
    /// Transition wave number `k_A = ω_A / c`.
    pub k_a: T,
    pub baseline: T,
}

impl<T: Real> CatalogInput<T> {
    pub fn new(gw: &GwParams<T>, laser: &LaserParams<T>, baseline: T) -> Self {
        Self {
            h_plus: gw.h_plus(),
            omega_g: gw.omega_g(),
            phase0: gw.phase0(),
            k_l: laser.k_l(),
            k_a: laser.k_a(),
            baseline,
        }
    }

    pub fn with_phase0(mut self, phase0: T) -> Self {
        self.phase0 = phase0;
        self
    }

    pub fn k_g(&self) -> T {
        self.omega_g / c::<T>()
    }

    /// `Φ_t`.
    pub fn phase_at(&self, t: T) -> T {
        self.omega_g * t + self.phase0
    }

    fn hkl(&self) -> T {
        self.h_plus * self.k_l * self.baseline
    }
}

/// The four contributions of a composite scheme. `lead` is `δφ_G` for
/// interferometers and `δφ_k` for clocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components<T> {
    pub lead: T,
    pub dm_g: T,
    pub omega_g: T,
    pub k_g: T,
}

impl<T: Real> Components<T> {
    pub fn sum(&self) -> T {
        self.lead + self.dm_g + self.omega_g + self.k_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogResult<T> {
    pub delta_phi: T,
    pub phi_s: T,
    pub components: Option<Components<T>>,
}

fn half_sin_sq<T: Real>(x: T) -> T {
    let s = (x * T::lit(0.5)).sin();
    s * s
}

/// Ramsey clock on geodesics, secular term included.
pub fn ramsey_clock<T: Real>(inp: &CatalogInput<T>, t_int: T) -> CatalogResult<T> {
    let half = T::lit(0.5);
    let wt = inp.omega_g * t_int;
    let p0 = inp.phase_at(T::zero());
    let delta_phi = inp.hkl() * half * (p0.cos() - inp.phase_at(t_int).cos() - wt * p0.sin());
    let inner = T::one() - wt.cos() - wt * wt.sin() + wt * wt * half;
    CatalogResult {
        delta_phi,
        phi_s: (inp.hkl() * half * inner.max(T::zero()).sqrt()).abs(),
        components: None,
    }
}

/// Echo clock on geodesics.
pub fn echo_clock<T: Real>(inp: &CatalogInput<T>, t_int: T) -> CatalogResult<T> {
    let s2 = half_sin_sq(inp.omega_g * t_int);
    CatalogResult {
        delta_phi: -T::lit(2.0) * inp.hkl() * inp.phase_at(t_int).cos() * s2,
        phi_s: (T::SQRT_2() * inp.hkl() * s2).abs(),
        components: None,
    }
}

/// Light-pulse Mach–Zehnder interferometer; identical to the echo clock.
pub fn mz_ai<T: Real>(inp: &CatalogInput<T>, t_int: T) -> CatalogResult<T> {
    echo_clock(inp, t_int)
}

/// Guided interferometer with the ramp/hold/ramp acceleration schedule.
pub fn guided_ai<T: Real>(inp: &CatalogInput<T>, profile: &GuidedProfile<T>, atom: &AtomParams<T>) -> CatalogResult<T> {
    let (w, ta, th) = (inp.omega_g, profile.ramp_time(), profile.hold_time());
    let a = profile.acceleration_magnitude();
    let q = w * ta / T::lit(4.0);
    let hold = (w * (th + ta) * T::lit(0.5)).sin();
    let mass_per_hbar = T::one() / atom.recoil_scale();
    let delta_phi = -T::lit(4.0) * inp.h_plus * mass_per_hbar * a * inp.baseline / w
        * q.sin()
        * q.sin()
        * hold
        * inp.phase_at(th * T::lit(0.5) + ta).cos();
    let k_a = profile.k_eff(atom);
    CatalogResult {
        delta_phi,
        phi_s: (inp.h_plus / T::SQRT_2() * k_a * inp.baseline * sinc(q) * q.sin() * hold).abs(),
        components: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompositeKind {
    /// Large-momentum-transfer Mach–Zehnder interferometer.
    Ai,
    /// Hyper-echo clock.
    Clock,
}

impl CompositeKind {
    pub fn name(self) -> &'static str {
        match self {
            CompositeKind::Ai => "ai",
            CompositeKind::Clock => "clock",
        }
    }
}

impl fmt::Display for CompositeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_order(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::Sequence(format!("composite order N must be >= 1, got {n}")));
    }
    Ok(())
}

/// The four printed contributions of the order-`N` composite scheme.
pub fn composite_parts<T: Real>(
    kind: CompositeKind,
    n: usize,
    t_int: T,
    tau: T,
    inp: &CatalogInput<T>,
) -> Result<Components<T>> {
    check_order(n)?;
    let (h, kl, ka, l) = (inp.h_plus, inp.k_l, inp.k_a, inp.baseline);
    let kg = inp.k_g();
    let x = kg * l;
    let nf = T::int(n as i64);
    let (half, two, four) = (T::lit(0.5), T::lit(2.0), T::lit(4.0));
    let wt = inp.omega_g * t_int;
    let st = (wt * half).sin();
    let sn = (nf * x * half).sin();
    let p = |t: T| inp.phase_at(t);
    let late = p((T::lit(3.0) * t_int - (nf - two) * tau) * half);
    let early = p((t_int + nf * tau) * half);
    // sin(N x/2) / sin x, continuous at x = 0
    let ratio = nf * half * sinc(nf * x * half) / sinc(x);
    let g_ai = two * h * kl * l * st * ratio * (early.sin() - x.cos() * late.sin());
    let dm_ai = -h * ka * kg * l * l * st * sn * late.sin();
    let mid = p(t_int + tau * half);
    let omega_ai =
        -four * h * (kl / kg) * st * sn * ((wt - (nf - T::one()) * x) * half).sin() * mid.cos() - (kl / ka) * dm_ai;
    Ok(match kind {
        CompositeKind::Ai => Components {
            lead: g_ai,
            dm_g: dm_ai,
            omega_g: omega_ai,
            k_g: -g_ai,
        },
        CompositeKind::Clock => {
            let late_c = p(t_int + tau);
            let s2 = st * st;
            let k_c = two * g_ai + two * h * kl * l * s2 * late_c.cos();
            Components {
                lead: k_c,
                dm_g: two * dm_ai + h * ka * kg * l * l * s2 * late_c.sin(),
                omega_g: two * omega_ai
                    + h * kl * l * s2 * (two * sinc(x * half) * mid.cos() - x * late_c.sin()),
                k_g: -k_c,
            }
        }
    })
}

/// Printed single-term total of the composite scheme.
pub fn composite_total<T: Real>(kind: CompositeKind, n: usize, t_int: T, tau: T, inp: &CatalogInput<T>) -> Result<T> {
    check_order(n)?;
    let half = T::lit(0.5);
    let x = inp.k_g() * inp.baseline;
    let nf = T::int(n as i64);
    let wt = inp.omega_g * t_int;
    let mid = inp.phase_at(t_int + tau * half).cos();
    let ai = -T::lit(2.0) * inp.h_plus * nf * inp.k_l * inp.baseline
        * (wt * half).sin()
        * sinc(nf * x * half)
        * ((wt - (nf - T::one()) * x) * half).sin()
        * mid;
    Ok(match kind {
        CompositeKind::Ai => ai,
        CompositeKind::Clock => {
            T::lit(2.0) * ai + T::lit(2.0) * inp.hkl() * half_sin_sq(wt) * sinc(x * half) * mid
        }
    })
}

/// Components, printed total, and the amplitude of that total.
pub fn composite_components<T: Real>(
    kind: CompositeKind,
    n: usize,
    t_int: T,
    tau: T,
    inp: &CatalogInput<T>,
) -> Result<CatalogResult<T>> {
    let components = composite_parts(kind, n, t_int, tau, inp)?;
    let delta_phi = composite_total(kind, n, t_int, tau, inp)?;
    let amp = composite_amplitude(kind, n, t_int, tau, inp)?;
    Ok(CatalogResult {
        delta_phi,
        phi_s: amp.phi_s,
        components: Some(components),
    })
}

/// Cos/sin coefficients of the printed composite total.
pub fn composite_amplitude<T: Real>(
    kind: CompositeKind,
    n: usize,
    t_int: T,
    tau: T,
    inp: &CatalogInput<T>,
) -> Result<SignalAmplitude<T>> {
    quadratures(|phi| composite_total(kind, n, t_int, tau, &inp.with_phase0(phi)))
}

/// Small-`N k_G L` signal amplitudes of the composite schemes.
pub fn enhancement_amplitude<T: Real>(kind: CompositeKind, n: usize, t_int: T, inp: &CatalogInput<T>) -> Result<T> {
    check_order(n)?;
    let nf = T::int(n as i64);
    let factor = match kind {
        CompositeKind::Clock => T::lit(2.0) * nf - T::one(),
        CompositeKind::Ai => nf,
    };
    Ok((T::SQRT_2() * inp.hkl() * factor * half_sin_sq(inp.omega_g * t_int)).abs())
}

/// Large-`N` limit `2√2 h₊ N k_L L sin²(ω_G T/2)` of the hyper-echo amplitude.
pub fn enhancement_amplitude_large_n<T: Real>(n: usize, t_int: T, inp: &CatalogInput<T>) -> Result<T> {
    check_order(n)?;
    let nf = T::int(n as i64);
    Ok((T::lit(2.0) * T::SQRT_2() * inp.hkl() * nf * half_sin_sq(inp.omega_g * t_int)).abs())
}

/// `δz̄/L` of an atom in a laboratory-fixed trap.
pub fn stationary_deltaz<T: Real>(t: T, omega_t: T, omega_g: T, phase0: T, h_plus: T) -> Result<T> {
    let denom = omega_t * omega_t - omega_g * omega_g;
    if denom == T::zero() {
        return Err(Error::TrapResonance(omega_t.as_f64()));
    }
    if !(omega_t > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "omega_t",
            value: omega_t.as_f64(),
            requirement: "> 0",
        });
    }
    let cc = omega_t * phase0.cos();
    let ss = omega_g * phase0.sin();
    let xi = -(cc.hypot(ss) / omega_t) * (omega_t * t + ss.atan2(cc)).cos();
    let ratio = omega_g * omega_g / denom;
    Ok(T::one() - h_plus * T::lit(0.5) * ratio * ((omega_g * t + phase0).cos() + xi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SPEED_OF_LIGHT;
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn inp(kgl: f64, phi: f64) -> CatalogInput<f64> {
        CatalogInput {
            h_plus: 1e-6,
            omega_g: SPEED_OF_LIGHT * kgl,
            phase0: phi,
            k_l: 1.0,
            k_a: 1.0,
            baseline: 1.0,
        }
    }

    fn t_for(i: &CatalogInput<f64>, wt: f64) -> f64 {
        wt / i.omega_g
    }

    #[test]
    fn ramsey_values() {
        let i = inp(1e-4, 0.4);
        assert_relative_eq!(
            ramsey_clock(&i, t_for(&i, PI)).phi_s,
            0.5e-6 * (2.0 + PI * PI / 2.0).sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(ramsey_clock(&i, t_for(&i, PI)).phi_s / 1e-6, 1.31671, max_relative = 1e-5);
        let r = ramsey_clock(&i, 1e-30);
        assert!(r.delta_phi.abs() < 1e-25 && r.phi_s < 1e-25);
        let zero = CatalogInput { h_plus: 0.0, ..i };
        assert_eq!(ramsey_clock(&zero, 1.0).delta_phi, 0.0);
    }

    #[test]
    fn echo_values() {
        let i = inp(1e-4, 0.0);
        assert_relative_eq!(echo_clock(&i, t_for(&i, PI)).phi_s, SQRT_2 * 1e-6, max_relative = 1e-15);
        assert!(echo_clock(&i, t_for(&i, 2.0 * PI)).phi_s < 1e-20);
        assert_relative_eq!(echo_clock(&i, t_for(&i, FRAC_PI_2)).phi_s, SQRT_2 / 2.0 * 1e-6, max_relative = 1e-14);
        let i = inp(1e-4, -PI);
        assert_relative_eq!(mz_ai(&i, t_for(&i, PI)).delta_phi, -2e-6, max_relative = 1e-14);
        for phi in [0.0, 0.7, 2.0] {
            let j = inp(1e-4, phi);
            assert_eq!(echo_clock(&j, 3e-5), mz_ai(&j, 3e-5));
        }
    }

    #[test]
    fn guided_values() {
        let i = inp(1e-4, 0.0);
        let atom = AtomParams::from_transition(1.443e-25, 1.0).unwrap();
        let ta = PI / i.omega_g;
        let p = GuidedProfile::new(1e-3, ta, 0.0).unwrap();
        let r = guided_ai(&i, &p, &atom);
        assert_relative_eq!(r.phi_s / (1e-6 * p.k_eff(&atom)), 0.45016, max_relative = 1e-4);
        let sym = GuidedProfile::new(1e-3, ta, ta).unwrap();
        assert!(guided_ai(&i, &sym, &atom).phi_s < 1e-12 * r.phi_s);
        let flat = GuidedProfile::new(0.0, ta, 0.0).unwrap();
        assert_eq!(guided_ai(&i, &flat, &atom).delta_phi, 0.0);
        let amp = quadratures(|phi| Ok(guided_ai(&i.with_phase0(phi), &p, &atom).delta_phi)).unwrap();
        assert_relative_eq!(amp.phi_s, r.phi_s, max_relative = 1e-12);
    }

    #[test]
    fn composite_components_sum_to_total_when_k_a_equals_k_l() {
        for kind in [CompositeKind::Ai, CompositeKind::Clock] {
            for n in 1..=5 {
                for phi in [0.0, 1.1, 2.9] {
                    let i = inp(1e-4, phi);
                    let t = t_for(&i, 2.0);
                    let tau = 1.0 / SPEED_OF_LIGHT;
                    let r = composite_components(kind, n, t, tau, &i).unwrap();
                    let c = r.components.unwrap();
                    assert_relative_eq!(c.k_g, -c.lead);
                    assert!(
                        (c.sum() - r.delta_phi).abs() <= 1e-10 * r.delta_phi.abs().max(1e-12),
                        "{kind} N={n}: {} vs {}",
                        c.sum(),
                        r.delta_phi
                    );
                }
            }
        }
    }

    #[test]
    fn composite_limits() {
        let i = inp(1e-6, 0.5);
        let t = t_for(&i, 1.3);
        let tau = 1.0 / SPEED_OF_LIGHT;
        let clock = composite_total(CompositeKind::Clock, 1, t, tau, &i).unwrap();
        let echo = echo_clock(&i, t).delta_phi;
        assert_relative_eq!(clock, echo, max_relative = 1e-5);
        let ai = composite_amplitude(CompositeKind::Ai, 1, t, tau, &i).unwrap();
        assert_relative_eq!(ai.phi_s, mz_ai(&i, t).phi_s, max_relative = 1e-8);
        assert!(composite_total(CompositeKind::Ai, 0, t, tau, &i).is_err());
    }

    #[test]
    fn enhancement_ratios() {
        let i = inp(1e-4, 0.0);
        let t = t_for(&i, 1.0);
        let base = enhancement_amplitude(CompositeKind::Clock, 1, t, &i).unwrap();
        assert_eq!(base, enhancement_amplitude(CompositeKind::Ai, 1, t, &i).unwrap());
        assert_relative_eq!(enhancement_amplitude(CompositeKind::Clock, 3, t, &i).unwrap() / base, 5.0);
        assert_relative_eq!(enhancement_amplitude(CompositeKind::Ai, 3, t, &i).unwrap() / base, 3.0);
        let big = enhancement_amplitude(CompositeKind::Clock, 1000, t, &i).unwrap()
            / enhancement_amplitude(CompositeKind::Ai, 1000, t, &i).unwrap();
        assert_relative_eq!(big, 2.0, max_relative = 1e-3);
        assert_relative_eq!(
            enhancement_amplitude_large_n(7, t, &i).unwrap(),
            2.0 * SQRT_2 * 7.0 * 1e-6 * (0.5f64).sin().powi(2)
        );
    }

    #[test]
    fn stationary_deltaz_values() {
        assert_eq!(stationary_deltaz(0.7, 10.0, 1.0, 0.3, 0.0).unwrap(), 1.0);
        for phi in [0.0, 1.0, 2.5, 4.0] {
            assert_relative_eq!(stationary_deltaz(0.0, 10.0, 1.0, phi, 1e-6).unwrap(), 1.0, epsilon = 1e-20);
        }
        assert_relative_eq!(0.5 * 1.0 / (100.0f64.powi(2) - 1.0), 5.0005e-5, max_relative = 1e-4);
        assert!(stationary_deltaz(0.0, 1.0, 1.0, 0.0, 1e-6).is_err());
    }

    #[test]
    fn outputs_flip_sign_under_half_turn() {
        let t = 2e-5;
        for phi in [0.0, 0.4, 1.9] {
            let (a, b) = (inp(1e-4, phi), inp(1e-4, phi + PI));
            assert_relative_eq!(ramsey_clock(&a, t).delta_phi, -ramsey_clock(&b, t).delta_phi, max_relative = 1e-9);
            assert_relative_eq!(echo_clock(&a, t).phi_s, echo_clock(&b, t).phi_s, max_relative = 1e-12);
        }
    }
}
