//! Effective potentials acting on the two components of a sensor, the
//! laboratory-frame metric of the wave and the eikonal phase of the light.
//!
//! Components sit at `z₁,₂ = z̄ ± Δz/2` and carry state coefficients `±λ/2`.
//! GW-coupled terms are evaluated on the unperturbed kinematics, which keeps
//! every result exactly first order in `h₊`.

use core::fmt;

use crate::error::{Error, Result};
use crate::model::{c, hbar, AtomParams, GwParams, LaserParams, TrapParams};
use crate::scalar::Real;
use crate::sequence::{Pulse, Side};
use crate::trajectory::BranchKinematics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialTerm {
    /// Harmonic trap `V_T`.
    Trap,
    /// Tidal GW potential `V_G`.
    Gravity,
    /// GW coupling of the mass defect `V_{Δm,G}`.
    MassDefect,
    /// Laser detuning `V_ω`.
    Omega,
    /// Laser wave vector `V_k`.
    K,
    /// GW-modified laser frequency `V_{ω,G}`.
    OmegaG,
    /// GW-modified laser wave vector `V_{k,G}`.
    KG,
}

impl PotentialTerm {
    pub const ALL: [PotentialTerm; 7] = [
        PotentialTerm::Trap,
        PotentialTerm::Gravity,
        PotentialTerm::MassDefect,
        PotentialTerm::Omega,
        PotentialTerm::K,
        PotentialTerm::OmegaG,
        PotentialTerm::KG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PotentialTerm::Trap => "V_T",
            PotentialTerm::Gravity => "V_G",
            PotentialTerm::MassDefect => "V_dm_G",
            PotentialTerm::Omega => "V_omega",
            PotentialTerm::K => "V_k",
            PotentialTerm::OmegaG => "V_omega_G",
            PotentialTerm::KG => "V_k_G",
        }
    }

    /// Smooth terms are integrated over time; the rest act only at pulses.
    pub fn is_smooth(self) -> bool {
        matches!(self, PotentialTerm::Trap | PotentialTerm::Gravity | PotentialTerm::MassDefect)
    }

    pub fn couples_to_wave(self) -> bool {
        matches!(
            self,
            PotentialTerm::Gravity | PotentialTerm::MassDefect | PotentialTerm::OmegaG | PotentialTerm::KG
        )
    }

    fn kind(self) -> &'static str {
        if self.is_smooth() {
            "smooth"
        } else {
            "impulsive"
        }
    }
}

impl fmt::Display for PotentialTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn require_smooth(term: PotentialTerm) -> Result<()> {
    if term.is_smooth() {
        Ok(())
    } else {
        Err(Error::TermKind {
            term: term.name(),
            actual: term.kind(),
            expected: "smooth",
        })
    }
}

/// `[V(z₁,t) − V(z₂,t)] / ħ` in rad/s.
pub fn smooth_branch_rate<T: Real>(
    term: PotentialTerm,
    kin: &BranchKinematics<T>,
    t: T,
    atom: &AtomParams<T>,
    trap: Option<&TrapParams<T>>,
) -> Result<T> {
    require_smooth(term)?;
    let gw = kin.gw();
    let half = T::lit(0.5);
    // z₁ − z₂ and z₁ + z₂ directly; forming z₁, z₂ first rounds Δz away
    let (m, dz) = (kin.zbar_base(t), kin.dz(t));
    let two = T::lit(2.0);
    Ok(match term {
        PotentialTerm::Trap => match trap {
            Some(tr) if tr.omega_t > T::zero() => {
                half * tr.omega_t * tr.omega_t * (dz * two * (m - tr.z_center0)) / atom.recoil_scale()
            }
            _ => T::zero(),
        },
        PotentialTerm::Gravity => {
            let w = gw.omega_g();
            gw.h_plus() * half * (half * w * w) * (dz * two * m) * gw.phase_arg(t).cos()
                / atom.recoil_scale()
        }
        PotentialTerm::MassDefect => {
            let dl = kin.dlambda_omega(t);
            if dl == 0 {
                return Ok(T::zero());
            }
            let w = gw.omega_g();
            gw.h_plus()
                * half
                * atom.defect_per_hbar()
                * (half * w * w)
                * (T::int(dl) * half)
                * (two * m * m + half * dz * dz)
                * gw.phase_arg(t).cos()
        }
        _ => unreachable!("checked smooth"),
    })
}

/// `V(z₁,t) − V(z₂,t)` in joules.
pub fn smooth_branch_difference<T: Real>(
    term: PotentialTerm,
    kin: &BranchKinematics<T>,
    t: T,
    atom: &AtomParams<T>,
    trap: Option<&TrapParams<T>>,
) -> Result<T> {
    Ok(smooth_branch_rate(term, kin, t, atom, trap)? * hbar::<T>())
}

/// Phase picked up at one pulse, split into its `h₊`-independent part and the wave part.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Increment<T> {
    pub base: T,
    pub wave: T,
}

impl<T: Real> Increment<T> {
    pub fn total(&self) -> T {
        self.base + self.wave
    }
}

/// Exact phase contribution of an impulsive term at one pulse.
pub fn impulsive_phase_increment<T: Real>(
    term: PotentialTerm,
    pulse: &Pulse<T>,
    kin: &BranchKinematics<T>,
    side: Side,
    laser: &LaserParams<T>,
) -> Result<Increment<T>> {
    if term.is_smooth() {
        return Err(Error::TermKind {
            term: term.name(),
            actual: "smooth",
            expected: "impulsive",
        });
    }
    let gw = kin.gw();
    let t = pulse.time(side);
    let (lw, lk) = (T::int(pulse.lambda_omega as i64), T::int(pulse.lambda_k as i64));
    let half = T::lit(0.5);
    let zero = T::zero();
    Ok(match term {
        PotentialTerm::Omega => Increment {
            base: -lw * laser.detuning() * t,
            wave: zero,
        },
        PotentialTerm::K => Increment {
            base: lk * laser.k_l() * kin.zbar_base(t),
            wave: lk * laser.k_l() * kin.zbar_perturbation(t),
        },
        PotentialTerm::OmegaG => {
            let (local, common) = omega_g_parts(pulse, kin, side, laser);
            Increment {
                base: zero,
                wave: local + common,
            }
        }
        PotentialTerm::KG => Increment {
            base: zero,
            wave: -gw.h_plus() * half * laser.k_l() * lk * kin.zbar_base(t) * gw.phase_arg(t).cos(),
        },
        _ => unreachable!("checked impulsive"),
    })
}

/// Wave part of the `ω`-laser phase at one pulse, split into the
/// position-dependent piece and `½ h₊ (k_L/k_G) λ_ω sin Φ_t`, which is the
/// same function of time for every sensor.
pub fn omega_g_parts<T: Real>(
    pulse: &Pulse<T>,
    kin: &BranchKinematics<T>,
    side: Side,
    laser: &LaserParams<T>,
) -> (T, T) {
    let gw = kin.gw();
    let t = pulse.time(side);
    let (kg, half) = (gw.k_g(), T::lit(0.5));
    let lw = T::int(pulse.lambda_omega as i64);
    let (m, dz) = (kin.zbar_base(t), kin.dz(t));
    // k_G² (z₁² + z₂²) / 4
    let quad = kg * kg * (T::lit(2.0) * m * m + half * dz * dz) / T::lit(4.0);
    let pre = gw.h_plus() * half * (laser.k_l() / kg) * lw;
    let s = gw.phase_arg(t).sin();
    (-pre * quad * s, pre * s)
}

/// `common(t_a) − common(t_b)` of [`omega_g_parts`] for one pulse, without
/// forming the two nearly equal terms.
pub fn omega_g_common_difference<T: Real>(pulse: &Pulse<T>, gw: &GwParams<T>, laser: &LaserParams<T>, t_int: T, tau: T) -> T {
    let half = T::lit(0.5);
    let dt = match (pulse.epoch_a, pulse.epoch_b) {
        (Some(a), Some(b)) => a.minus(b).eval(t_int, tau),
        _ => pulse.t_a - pulse.t_b,
    };
    let mid = gw.phase_arg((pulse.t_a + pulse.t_b) * half);
    let lw = T::int(pulse.lambda_omega as i64);
    gw.h_plus() * half * (laser.k_l() / gw.k_g()) * lw * T::lit(2.0) * mid.cos() * (gw.omega_g() * dt * half).sin()
}

/// Propagation direction of a light pulse along `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    fn sign<T: Real>(self) -> T {
        match self {
            Direction::Plus => T::one(),
            Direction::Minus => -T::one(),
        }
    }
}

/// First-order GW perturbation of the light phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EikonalPhase<T> {
    pub chi_omega: T,
    pub chi_k: T,
}

impl<T: Real> EikonalPhase<T> {
    pub fn chi_plus(&self) -> T {
        self.chi_omega + self.chi_k
    }

    pub fn chi_minus(&self) -> T {
        self.chi_omega - self.chi_k
    }

    pub fn combined(&self, dir: Direction) -> T {
        match dir {
            Direction::Plus => self.chi_plus(),
            Direction::Minus => self.chi_minus(),
        }
    }
}

/// `χ_ω` and `χ_k` at `(z, t)`; the direction only enters through [`EikonalPhase::combined`].
pub fn chi_perturbation<T: Real>(z: T, t: T, gw: &GwParams<T>, laser: &LaserParams<T>) -> EikonalPhase<T> {
    let half = T::lit(0.5);
    let (kg, kl) = (gw.k_g(), laser.k_l());
    let p = gw.phase_arg(t);
    let x = kg * z;
    EikonalPhase {
        chi_omega: gw.h_plus() * half * (kl / kg) * (x * x * half - T::one()) * p.sin(),
        chi_k: gw.h_plus() * half * kl * z * p.cos(),
    }
}

/// Metric perturbation `h_{μν}` at `x = y = 0`, indices ordered `(t, z, x, y)`.
pub fn metric_perturbation<T: Real>(mu: usize, nu: usize, z: T, t: T, gw: &GwParams<T>) -> Result<T> {
    if mu > 3 || nu > 3 {
        return Err(Error::MetricIndex(mu, nu));
    }
    const PATTERN: [[i64; 4]; 4] = [[3, -2, 0, 0], [-2, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]];
    let x = gw.k_g() * z;
    let scale = gw.h_plus() / T::lit(6.0) * x * x * gw.phase_arg(t).cos();
    Ok(T::int(PATTERN[mu][nu]) * scale)
}

/// `Γ^z_{00} = ½ ∂_z h_{00}` in 1/m (time measured as `c t`).
pub fn christoffel_z00<T: Real>(z: T, t: T, gw: &GwParams<T>) -> T {
    let kg = gw.k_g();
    gw.h_plus() * T::lit(0.5) * kg * kg * z * gw.phase_arg(t).cos()
}

/// Central-difference check of `((1/c)∂_t ± ∂_z) χ_± = ¼ h₊ k_L (k_G z)² cos Φ_t`.
///
/// Time is stepped by `step` and space by `c·step`. The residual is divided by
/// `¼ |h₊| k_L (k_G z_ref)²` with `z_ref = max(|z|, 1/k_G)`.
pub fn eikonal_residual<T: Real>(
    z: T,
    t: T,
    dir: Direction,
    step: T,
    gw: &GwParams<T>,
    laser: &LaserParams<T>,
) -> Result<T> {
    let dz = c::<T>() * step;
    if !(step > T::zero()) || t + step == t || t - step == t || z + dz == z || z - dz == z {
        return Err(Error::StepUnderflow(step.as_f64()));
    }
    if gw.h_plus() == T::zero() {
        return Ok(T::zero());
    }
    let chi = |zz: T, tt: T| chi_perturbation(zz, tt, gw, laser).combined(dir);
    let two = T::lit(2.0);
    let dt_term = (chi(z, t + step) - chi(z, t - step)) / (two * step) / c::<T>();
    let dz_term = (chi(z + dz, t) - chi(z - dz, t)) / (two * dz);
    let lhs = dt_term + dir.sign::<T>() * dz_term;
    let quarter = T::lit(0.25);
    let kg = gw.k_g();
    let rhs = quarter * gw.h_plus() * laser.k_l() * (kg * z) * (kg * z) * gw.phase_arg(t).cos();
    let zref = z.abs().max(T::one() / kg);
    let norm = quarter * gw.h_plus().abs() * laser.k_l() * (kg * zref) * (kg * zref);
    Ok((lhs - rhs) / norm)
}
