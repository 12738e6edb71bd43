//! Physical parameters of the wave, the interrogating light, the atom and its trap.
//!
//! SI units throughout. Derived quantities (`k_g`, `omega_l`, `k_a`) are never
//! stored; they are recomputed from their defining relation with `c`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Weak-field bound on the strain; larger values are rejected.
pub const MAX_STRAIN: f64 = 0.1;

#[inline]
pub fn c<T: Real>() -> T {
    T::lit(SPEED_OF_LIGHT)
}

#[inline]
pub fn hbar<T: Real>() -> T {
    T::lit(HBAR)
}

fn require_finite<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: value.as_f64(),
            requirement: "finite",
        })
    }
}

fn require_positive<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value > T::zero() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: value.as_f64(),
            requirement: "finite and > 0",
        })
    }
}

fn require_non_negative<T: Real>(name: &'static str, value: T) -> Result<T> {
    if value.is_finite() && value >= T::zero() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: value.as_f64(),
            requirement: "finite and >= 0",
        })
    }
}

/// Plus-polarised gravitational wave seen at `x = y = 0` of the laboratory frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwParams<T> {
    h_plus: T,
    omega_g: T,
    phase0: T,
}

impl<T: Real> GwParams<T> {
    pub fn new(h_plus: T, omega_g: T, phase0: T) -> Result<Self> {
        require_finite("h_plus", h_plus)?;
        if h_plus.abs() >= T::lit(MAX_STRAIN) {
            return Err(Error::WeakField(h_plus.as_f64()));
        }
        require_positive("omega_g", omega_g)?;
        require_finite("phase0", phase0)?;
        Ok(Self {
            h_plus,
            omega_g,
            phase0,
        })
    }

    pub fn h_plus(&self) -> T {
        self.h_plus
    }

    pub fn omega_g(&self) -> T {
        self.omega_g
    }

    pub fn phase0(&self) -> T {
        self.phase0
    }

    /// Wave number `omega_g / c`.
    pub fn k_g(&self) -> T {
        self.omega_g / c()
    }

    /// Same wave with a different strain (used by linearity probes).
    pub fn with_h_plus(&self, h_plus: T) -> Result<Self> {
        Self::new(h_plus, self.omega_g, self.phase0)
    }

    /// Same wave with a different initial phase.
    pub fn with_phase0(&self, phase0: T) -> Result<Self> {
        Self::new(self.h_plus, self.omega_g, phase0)
    }

    /// `omega_g * t + phase0`, never reduced modulo 2π.
    #[inline]
    pub fn phase_arg(&self, t: T) -> T {
        phase_arg(t, self)
    }
}

/// Phase argument of the wave at laboratory time `t`.
#[inline]
pub fn phase_arg<T: Real>(t: T, gw: &GwParams<T>) -> T {
    gw.omega_g * t + gw.phase0
}

/// Interrogating laser and the atomic transition it drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserParams<T> {
    k_l: T,
    omega_a: T,
}

impl<T: Real> LaserParams<T> {
    pub fn new(k_l: T, omega_a: T) -> Result<Self> {
        Ok(Self {
            k_l: require_positive("k_l", k_l)?,
            omega_a: require_positive("omega_a", omega_a)?,
        })
    }

    /// Laser exactly on resonance, `omega_a = c * k_l`.
    pub fn resonant(k_l: T) -> Result<Self> {
        let k_l = require_positive("k_l", k_l)?;
        Self::new(k_l, c::<T>() * k_l)
    }

    pub fn k_l(&self) -> T {
        self.k_l
    }

    pub fn omega_a(&self) -> T {
        self.omega_a
    }

    pub fn omega_l(&self) -> T {
        c::<T>() * self.k_l
    }

    pub fn k_a(&self) -> T {
        self.omega_a / c()
    }

    /// `omega_l - omega_a`.
    pub fn detuning(&self) -> T {
        self.omega_l() - self.omega_a
    }
}

/// Atom mass and the mass defect of its clock transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams<T> {
    mass: T,
    delta_mass: T,
    // Δm/ħ = ω_A/c², kept separately because Δm itself is subnormal in f32.
    defect_per_hbar: T,
}

impl<T: Real> AtomParams<T> {
    /// Builds from the transition frequency, `Δm c² = ħ ω_A`.
    pub fn from_transition(mass: T, omega_a: T) -> Result<Self> {
        let mass = require_positive("mass", mass)?;
        let omega_a = require_non_negative("omega_a", omega_a)?;
        let c2 = c::<T>() * c::<T>();
        Ok(Self {
            mass,
            delta_mass: hbar::<T>() * omega_a / c2,
            defect_per_hbar: omega_a / c2,
        })
    }

    pub fn new(mass: T, delta_mass: T) -> Result<Self> {
        let mass = require_positive("mass", mass)?;
        let delta_mass = require_non_negative("delta_mass", delta_mass)?;
        Ok(Self {
            mass,
            delta_mass,
            defect_per_hbar: delta_mass / hbar::<T>(),
        })
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn delta_mass(&self) -> T {
        self.delta_mass
    }

    /// `Δm / ħ` in s/m².
    pub fn defect_per_hbar(&self) -> T {
        self.defect_per_hbar
    }

    /// `ħ / m`.
    pub fn recoil_scale(&self) -> T {
        hbar::<T>() / self.mass
    }

    pub fn defect_ratio(&self) -> T {
        self.delta_mass / self.mass
    }
}

/// How the trap centre moves in the laboratory frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CenterMode {
    /// Fixed to the laboratory (optical table).
    Stationary,
    /// Freely falling with the wave.
    Geodesic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams<T> {
    pub omega_t: T,
    pub center_mode: CenterMode,
    /// Trap centre at `t = 0`, m.
    pub z_center0: T,
}

impl<T: Real> TrapParams<T> {
    pub fn new(omega_t: T, center_mode: CenterMode, z_center0: T) -> Result<Self> {
        Ok(Self {
            omega_t: require_non_negative("omega_t", omega_t)?,
            center_mode,
            z_center0: require_finite("z_center0", z_center0)?,
        })
    }

    /// Same trap recentred at `z`.
    pub fn centered_at(&self, z: T) -> Self {
        Self {
            z_center0: z,
            ..*self
        }
    }

    /// Lamb–Dicke parameter `k_l * sqrt(ħ / (2 m ω_T))`; infinite for a free atom.
    pub fn lamb_dicke(&self, laser: &LaserParams<T>, atom: &AtomParams<T>) -> T {
        if self.omega_t == T::zero() {
            return T::infinity();
        }
        laser.k_l() * (hbar::<T>() / (T::lit(2.0) * atom.mass() * self.omega_t)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
}

/// One small-parameter check of the regime the formalism assumes.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub status: CheckStatus,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Warn)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, value: f64, threshold: f64, warn_msg: &str) {
        let status = if value.abs() <= threshold {
            CheckStatus::Pass
        } else {
            CheckStatus::Warn
        };
        let message = match status {
            CheckStatus::Pass => format!("{name} = {value:.3e} within {threshold:.1e}"),
            CheckStatus::Warn => format!("{name} = {value:.3e} exceeds {threshold:.1e}: {warn_msg}"),
        };
        self.checks.push(Check {
            name,
            value,
            threshold,
            status,
            message,
        });
    }
}

/// Warning thresholds of [`validate_configuration`].
pub mod thresholds {
    pub const STRAIN: f64 = 1e-3;
    pub const K_G_L: f64 = 0.1;
    pub const LAMB_DICKE: f64 = 1.0;
    pub const DEFECT_RATIO: f64 = 1e-6;
    pub const TRAP_RATIO: f64 = 0.1;
}

/// Reports every small parameter of the configuration against its threshold.
///
/// Hard errors are reserved for invariant violations; everything else is a
/// warning. `clock_mode` enables the trap checks (Lamb–Dicke, `ω_G/ω_T`).
pub fn validate_configuration<T: Real>(
    gw: &GwParams<T>,
    laser: &LaserParams<T>,
    atom: &AtomParams<T>,
    trap: Option<&TrapParams<T>>,
    baseline: T,
    clock_mode: bool,
) -> Result<Diagnostics> {
    // Re-check invariants; the fields are private but a GwParams could have
    // been produced by a future constructor that forgets one.
    if gw.h_plus().abs() >= T::lit(MAX_STRAIN) {
        return Err(Error::WeakField(gw.h_plus().as_f64()));
    }
    require_non_negative("baseline", baseline)?;
    if let Some(trap) = trap {
        require_non_negative("omega_t", trap.omega_t)?;
    }

    let mut d = Diagnostics::default();
    d.push(
        "h_plus",
        gw.h_plus().as_f64(),
        thresholds::STRAIN,
        "first-order treatment in the strain degrades",
    );
    d.push(
        "k_g_L",
        (gw.k_g() * baseline).as_f64(),
        thresholds::K_G_L,
        "baseline not small against the gravitational wavelength",
    );
    d.push(
        "delta_m_over_m",
        atom.defect_ratio().as_f64(),
        thresholds::DEFECT_RATIO,
        "mass defect not small against the rest mass",
    );
    if let (Some(trap), true) = (trap, clock_mode) {
        d.push(
            "lamb_dicke",
            trap.lamb_dicke(laser, atom).as_f64(),
            thresholds::LAMB_DICKE,
            "recoil not suppressed; clock branches separate",
        );
        let ratio = if trap.omega_t > T::zero() {
            (gw.omega_g() / trap.omega_t).as_f64()
        } else {
            f64::INFINITY
        };
        d.push(
            "omega_g_over_omega_t",
            ratio,
            thresholds::TRAP_RATIO,
            "near trap resonance, regime omega_g << omega_t violated",
        );
    }
    Ok(d)
}
