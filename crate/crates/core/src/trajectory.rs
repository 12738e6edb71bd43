//! Classical kinematics of the two interfering components of one sensor.
//!
//! The components sit at `z₁,₂ = z̄ ± Δz/2`. Everything the phase engine needs
//! is split into an `h₊`-independent part and a first-order correction so that
//! GW-coupled quantities can be evaluated strictly at first order.

use crate::error::{Error, Result};
use crate::model::{hbar, AtomParams, CenterMode, GwParams, LaserParams, TrapParams};
use crate::potential::christoffel_z00;
use crate::scalar::Real;
use crate::sequence::{sequence_diagnostics, Epoch, PulseSequence, Side};

/// Harmonically trapped atom whose trap centre is fixed at `z₀`, driven by the wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryTrajectory<T> {
    z0: T,
    omega_t: T,
    gw: GwParams<T>,
    /// `ω_G² / (ω_T² − ω_G²)`.
    ratio: T,
    xi_amplitude: T,
    xi_angle: T,
}

impl<T: Real> StationaryTrajectory<T> {
    pub fn new(trap: &TrapParams<T>, gw: &GwParams<T>) -> Result<Self> {
        let (wt, w) = (trap.omega_t, gw.omega_g());
        if !(wt > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "omega_t",
                value: wt.as_f64(),
                requirement: "> 0 for a stationary trap",
            });
        }
        let denom = wt * wt - w * w;
        if denom == T::zero() {
            return Err(Error::TrapResonance(wt.as_f64()));
        }
        let phi = gw.phase0();
        let (cc, ss) = (wt * phi.cos(), w * phi.sin());
        let traj = Self {
            z0: trap.z_center0,
            omega_t: wt,
            gw: *gw,
            ratio: w * w / denom,
            xi_amplitude: cc.hypot(ss) / wt,
            xi_angle: ss.atan2(cc),
        };
        traj.self_check()?;
        Ok(traj)
    }

    // z(0) = z₀ and ż(0) = 0 must hold for the chosen angle convention.
    fn self_check(&self) -> Result<()> {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        let pos = (self.gw.phase0().cos() + self.xi(T::zero())).abs();
        let vel = (self.shape_rate(T::zero()) / self.gw.omega_g()).abs();
        if pos > tol || vel > tol {
            return Err(Error::Sensor(format!(
                "stationary trajectory violates its initial conditions ({:e}, {:e})",
                pos.as_f64(),
                vel.as_f64()
            )));
        }
        Ok(())
    }

    /// Homogeneous part `ξ(t)` fixing the initial conditions.
    pub fn xi(&self, t: T) -> T {
        -self.xi_amplitude * (self.omega_t * t + self.xi_angle).cos()
    }

    fn xi_rate(&self, t: T) -> T {
        self.xi_amplitude * self.omega_t * (self.omega_t * t + self.xi_angle).sin()
    }

    // d/dt [cos Φ_t + ξ(t)]
    fn shape_rate(&self, t: T) -> T {
        -self.gw.omega_g() * self.gw.phase_arg(t).sin() + self.xi_rate(t)
    }

    pub fn suppression_ratio(&self) -> T {
        self.ratio
    }

    /// `z(t) − z₀`.
    pub fn perturbation(&self, t: T) -> T {
        -self.z0 * self.gw.h_plus() * T::lit(0.5) * self.ratio * (self.gw.phase_arg(t).cos() + self.xi(t))
    }

    pub fn position(&self, t: T) -> T {
        self.z0 + self.perturbation(t)
    }

    pub fn velocity(&self, t: T) -> T {
        -self.z0 * self.gw.h_plus() * T::lit(0.5) * self.ratio * self.shape_rate(t)
    }

    pub fn z0(&self) -> T {
        self.z0
    }
}

/// Position of an atom in a laboratory-fixed trap.
pub fn stationary_trap_trajectory<T: Real>(t: T, trap: &TrapParams<T>, gw: &GwParams<T>) -> Result<T> {
    Ok(StationaryTrajectory::new(trap, gw)?.position(t))
}

/// `z(t) − z₀` on a geodesic at rest at `z₀` when `t = t0`.
pub fn geodesic_perturbation<T: Real>(t: T, z0: T, t0: T, gw: &GwParams<T>) -> T {
    let p0 = gw.phase_arg(t0);
    let shape = gw.phase_arg(t).cos() - p0.cos() + gw.omega_g() * (t - t0) * p0.sin();
    z0 * gw.h_plus() * T::lit(0.5) * shape
}

pub fn geodesic_trap_trajectory<T: Real>(t: T, z0: T, t0: T, gw: &GwParams<T>) -> T {
    z0 + geodesic_perturbation(t, z0, t0, gw)
}

pub fn geodesic_trap_velocity<T: Real>(t: T, z0: T, t0: T, gw: &GwParams<T>) -> T {
    let w = gw.omega_g();
    z0 * gw.h_plus() * T::lit(0.5) * w * (gw.phase_arg(t0).sin() - gw.phase_arg(t).sin())
}

/// Motion of the mean position `z̄`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanMotion<T> {
    /// `z̄ = z₀` at all times.
    Fixed,
    /// Freely falling with the wave, at rest at `t0`.
    Geodesic { t0: T },
    Stationary(StationaryTrajectory<T>),
}

/// Acceleration schedule of a guided interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidedProfile<T> {
    a: T,
    t_a: T,
    t_hold: T,
}

impl<T: Real> GuidedProfile<T> {
    pub fn new(a: T, t_a: T, t_hold: T) -> Result<Self> {
        if !(a.is_finite() && a >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "a",
                value: a.as_f64(),
                requirement: "finite and >= 0",
            });
        }
        if !(t_a.is_finite() && t_a > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "T_a",
                value: t_a.as_f64(),
                requirement: "finite and > 0",
            });
        }
        if !(t_hold.is_finite() && t_hold >= T::zero()) {
            return Err(Error::InvalidParameter {
                name: "T",
                value: t_hold.as_f64(),
                requirement: "finite and >= 0",
            });
        }
        Ok(Self { a, t_a, t_hold })
    }

    pub fn acceleration_magnitude(&self) -> T {
        self.a
    }

    pub fn ramp_time(&self) -> T {
        self.t_a
    }

    pub fn hold_time(&self) -> T {
        self.t_hold
    }

    /// `2 T_a + T`.
    pub fn duration(&self) -> T {
        self.t_a + self.t_a + self.t_hold
    }

    /// Effective wave number `k_a = m a T_a / ħ`.
    pub fn k_eff(&self, atom: &AtomParams<T>) -> T {
        self.a * self.t_a / atom.recoil_scale()
    }

    /// Instants where the acceleration switches.
    pub fn switch_times(&self) -> [T; 6] {
        let h = self.t_a * T::lit(0.5);
        let hold_end = self.t_a + self.t_hold;
        [T::zero(), h, self.t_a, hold_end, hold_end + h, self.duration()]
    }

    // first half, valid for 0 <= s <= T_a and constant beyond
    fn ramp(&self, s: T) -> (T, T, T) {
        let (a, half) = (self.a, self.t_a * T::lit(0.5));
        let two = T::lit(2.0);
        if s <= T::zero() {
            (T::zero(), T::zero(), T::zero())
        } else if s < half {
            (a * s * s / two, a * s, a)
        } else if s < self.t_a {
            let u = s - half;
            (a * half * half / two + a * half * u - a * u * u / two, a * (half - u), -a)
        } else {
            (a * self.t_a * self.t_a / T::lit(4.0), T::zero(), T::zero())
        }
    }

    /// `(Δz, Δż, Δz̈)`; the return ramp mirrors the outbound one, so the loop closes exactly.
    pub fn state(&self, t: T) -> (T, T, T) {
        let end = self.duration();
        if t <= T::zero() || t >= end {
            return (T::zero(), T::zero(), T::zero());
        }
        if t <= self.t_a + self.t_hold {
            self.ramp(t)
        } else {
            let (z, v, acc) = self.ramp(end - t);
            (z, -v, acc)
        }
    }

    pub fn separation(&self, t: T) -> T {
        self.state(t).0
    }

    pub fn acceleration(&self, t: T) -> T {
        self.state(t).2
    }
}

/// Separation and acceleration of a guided profile as plain functions of time.
pub fn guided_separation<T: Real>(
    profile: &GuidedProfile<T>,
) -> (impl Fn(T) -> T + '_, impl Fn(T) -> T + '_) {
    (move |t| profile.separation(t), move |t| profile.acceleration(t))
}

#[derive(Debug, Clone, PartialEq)]
struct Kick<T> {
    time: T,
    lambda: i64,
    epoch: Option<Epoch>,
}

/// Momentum kicks of a light-pulse sequence: `Δz(t) = v_r Σ_{t_ℓ ≤ t} λ_ℓ (t − t_ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoilSeparation<T> {
    kicks: Vec<Kick<T>>,
    /// `ħ k_L / m`.
    recoil_velocity: T,
    t_int: T,
    tau: T,
}

impl<T: Real> RecoilSeparation<T> {
    fn cumulative(&self, t: T) -> (i64, T) {
        let mut k = 0;
        let mut exact = Some(Epoch::default());
        let mut float = T::zero();
        for kick in self.kicks.iter().filter(|p| p.time <= t) {
            k += kick.lambda;
            exact = match (exact, kick.epoch) {
                (Some(e), Some(p)) => Some(Epoch::new(
                    e.periods + kick.lambda * p.periods,
                    e.delays + kick.lambda * p.delays,
                )),
                _ => None,
            };
            float = float + T::int(kick.lambda) * kick.time;
        }
        let weighted = exact.map_or(float, |e| e.eval(self.t_int, self.tau));
        (k, weighted)
    }

    pub fn separation(&self, t: T) -> T {
        let (k, s) = self.cumulative(t);
        self.recoil_velocity * (T::int(k) * t - s)
    }

    pub fn velocity(&self, t: T) -> T {
        self.recoil_velocity * T::int(self.cumulative(t).0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Separation<T> {
    /// Components stay co-located (clocks).
    None,
    Recoil(RecoilSeparation<T>),
    Guided(GuidedProfile<T>),
}

/// Mean trajectory, branch separation and state step functions of one sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchKinematics<T> {
    z_offset: T,
    gw: GwParams<T>,
    mean: MeanMotion<T>,
    separation: Separation<T>,
    omega_steps: Vec<(T, i64)>,
    k_steps: Vec<(T, i64)>,
    breakpoints: Vec<T>,
    warnings: Vec<String>,
}

fn step_value<T: Real>(steps: &[(T, i64)], t: T) -> i64 {
    steps.iter().filter(|(s, _)| *s <= t).map(|(_, l)| *l).sum()
}

impl<T: Real> BranchKinematics<T> {
    /// Unperturbed, h-independent mean position.
    pub fn zbar_base(&self, _t: T) -> T {
        self.z_offset
    }

    /// First-order GW correction to the mean position.
    pub fn zbar_perturbation(&self, t: T) -> T {
        match &self.mean {
            MeanMotion::Fixed => T::zero(),
            MeanMotion::Geodesic { t0 } => geodesic_perturbation(t, self.z_offset, *t0, &self.gw),
            MeanMotion::Stationary(s) => s.perturbation(t),
        }
    }

    pub fn zbar(&self, t: T) -> T {
        self.zbar_base(t) + self.zbar_perturbation(t)
    }

    pub fn zbar_velocity(&self, t: T) -> T {
        match &self.mean {
            MeanMotion::Fixed => T::zero(),
            MeanMotion::Geodesic { t0 } => geodesic_trap_velocity(t, self.z_offset, *t0, &self.gw),
            MeanMotion::Stationary(s) => s.velocity(t),
        }
    }

    pub fn dz(&self, t: T) -> T {
        match &self.separation {
            Separation::None => T::zero(),
            Separation::Recoil(r) => r.separation(t),
            Separation::Guided(g) => g.separation(t),
        }
    }

    pub fn dz_velocity(&self, t: T) -> T {
        match &self.separation {
            Separation::None => T::zero(),
            Separation::Recoil(r) => r.velocity(t),
            Separation::Guided(g) => g.state(t).1,
        }
    }

    /// Branch positions `(z₁, z₂)` on the unperturbed trajectory.
    pub fn branches_base(&self, t: T) -> (T, T) {
        let (m, half) = (self.zbar_base(t), self.dz(t) * T::lit(0.5));
        (m + half, m - half)
    }

    /// `ΔΛ_ω(t)`, right-continuous at pulse times.
    pub fn dlambda_omega(&self, t: T) -> i64 {
        step_value(&self.omega_steps, t)
    }

    pub fn dlambda_k(&self, t: T) -> i64 {
        step_value(&self.k_steps, t)
    }

    /// Sorted instants where the kinematics or the step functions are not smooth.
    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Interval outside which no branch-difference potential acts.
    pub fn support(&self) -> Option<(T, T)> {
        Some((*self.breakpoints.first()?, *self.breakpoints.last()?))
    }

    pub fn z_offset(&self) -> T {
        self.z_offset
    }

    pub fn mean(&self) -> &MeanMotion<T> {
        &self.mean
    }

    pub fn separation_kind(&self) -> &Separation<T> {
        &self.separation
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn gw(&self) -> &GwParams<T> {
        &self.gw
    }
}

fn sorted_times<T: Real>(times: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = times.into_iter().collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite pulse times"));
    v.dedup();
    v
}

fn steps_of<T: Real>(seq: &PulseSequence<T>, side: Side, omega: bool) -> Vec<(T, i64)> {
    seq.pulses
        .iter()
        .map(|p| {
            let l = if omega { p.lambda_omega } else { p.lambda_k };
            (p.time(side), l as i64)
        })
        .collect()
}

/// Light-pulse atom interferometer: recoil-driven separation around a fixed mean.
///
/// With `strict`, sequences without momentum closure are rejected; otherwise
/// they produce warnings.
pub fn lightpulse_branch_kinematics<T: Real>(
    seq: &PulseSequence<T>,
    side: Side,
    laser: &LaserParams<T>,
    atom: &AtomParams<T>,
    z_offset: T,
    gw: &GwParams<T>,
    strict: bool,
) -> Result<BranchKinematics<T>> {
    if seq.is_empty() {
        return Err(Error::Sequence("light-pulse sensor needs at least one pulse".into()));
    }
    let diag = sequence_diagnostics(seq);
    let mut warnings = Vec::new();
    if diag.sum_lambda_k != 0 {
        let msg = format!("sum lambda_k = {} leaves the branches moving apart", diag.sum_lambda_k);
        if strict {
            return Err(Error::OpenSequence(msg));
        }
        warnings.push(msg);
    }
    let recoil = RecoilSeparation {
        kicks: seq
            .pulses
            .iter()
            .map(|p| Kick {
                time: p.time(side),
                lambda: p.lambda_k as i64,
                epoch: match side {
                    Side::A => p.epoch_a,
                    Side::B => p.epoch_b,
                },
            })
            .collect(),
        recoil_velocity: laser.k_l() * atom.recoil_scale(),
        t_int: seq.interrogation_time,
        tau: seq.tau,
    };
    let end = seq.times(side).fold(T::neg_infinity(), T::max);
    let gap = recoil.separation(end);
    if diag.sum_lambda_k == 0 && gap != T::zero() {
        warnings.push(format!(
            "open interferometer: branch separation {:e} m remains after the last pulse",
            gap.as_f64()
        ));
    }
    Ok(BranchKinematics {
        z_offset,
        gw: *gw,
        mean: MeanMotion::Fixed,
        separation: Separation::Recoil(recoil),
        omega_steps: steps_of(seq, side, true),
        k_steps: steps_of(seq, side, false),
        breakpoints: sorted_times(seq.times(side)),
        warnings,
    })
}

/// Trapped clock: co-located components whose mean follows the trap.
pub fn clock_branch_kinematics<T: Real>(
    seq: &PulseSequence<T>,
    side: Side,
    trap: &TrapParams<T>,
    geodesic_t0: T,
    gw: &GwParams<T>,
) -> Result<BranchKinematics<T>> {
    let mean = match trap.center_mode {
        CenterMode::Stationary => MeanMotion::Stationary(StationaryTrajectory::new(trap, gw)?),
        CenterMode::Geodesic => MeanMotion::Geodesic { t0: geodesic_t0 },
    };
    let diag = sequence_diagnostics(seq);
    Ok(BranchKinematics {
        z_offset: trap.z_center0,
        gw: *gw,
        mean,
        separation: Separation::None,
        omega_steps: steps_of(seq, side, true),
        k_steps: steps_of(seq, side, false),
        breakpoints: sorted_times(seq.times(side)),
        warnings: diag.warnings(),
    })
}

/// Guided interferometer: programmed separation, mean held at `z_offset`, no pulses.
pub fn guided_branch_kinematics<T: Real>(
    profile: &GuidedProfile<T>,
    z_offset: T,
    gw: &GwParams<T>,
) -> BranchKinematics<T> {
    BranchKinematics {
        z_offset,
        gw: *gw,
        mean: MeanMotion::Fixed,
        separation: Separation::Guided(*profile),
        omega_steps: Vec::new(),
        k_steps: Vec::new(),
        breakpoints: sorted_times(profile.switch_times()),
        warnings: Vec::new(),
    }
}

/// Equation of motion integrated by [`ode_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeKind<T> {
    /// Trap fixed at `trap.z_center0`, atom at rest there at `t = 0`.
    StationaryTrap(TrapParams<T>),
    /// Free fall from rest at `z0` when `t = t0`.
    Geodesic { z0: T, t0: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution<T> {
    pub z: Vec<T>,
    pub steps: usize,
    pub last_change: T,
}

/// Fixed-step RK4 reference for the trap trajectories, sampled at `t_grid`.
///
/// The step is halved until the samples change by less than `1e-10` relative
/// to the largest excursion from `z0`.
pub fn ode_oracle<T: Real>(kind: &OdeKind<T>, gw: &GwParams<T>, t_grid: &[T]) -> Result<OdeSolution<T>> {
    let (z0, t_start, omega_t) = match kind {
        OdeKind::StationaryTrap(trap) => (trap.z_center0, T::zero(), trap.omega_t),
        OdeKind::Geodesic { z0, t0 } => (*z0, *t0, T::zero()),
    };
    if t_grid.is_empty()
        || t_grid.iter().any(|t| !t.is_finite())
        || t_grid.windows(2).any(|w| w[1] < w[0])
        || t_grid[0] < t_start
    {
        return Err(Error::TimeGrid);
    }
    let c = crate::model::c::<T>();
    // forcing from the wave evaluated at the unperturbed position
    let accel = |t: T, u: T, _v: T| -> T {
        -omega_t * omega_t * u - c * c * christoffel_z00(z0, t, gw)
    };
    let span = *t_grid.last().expect("non-empty") - t_start;
    let fastest = gw.omega_g().max(omega_t);
    let mut steps = ((span * fastest / T::lit(0.25)).ceil().to_usize().unwrap_or(1)).max(16);
    let tol = T::lit(1e-10);
    let max_steps = 1usize << 24;
    let mut prev = rk4_samples(&accel, t_start, t_grid, span / T::int(steps as i64));
    let mut last_change = T::infinity();
    while steps <= max_steps {
        steps *= 2;
        let next = rk4_samples(&accel, t_start, t_grid, span / T::int(steps as i64));
        let scale = next.iter().fold(T::zero(), |m, u| m.max(u.abs()));
        let diff = next
            .iter()
            .zip(&prev)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        last_change = if scale == T::zero() { diff } else { diff / scale };
        prev = next;
        if last_change < tol {
            return Ok(OdeSolution {
                z: prev.into_iter().map(|u| z0 + u).collect(),
                steps,
                last_change,
            });
        }
    }
    Err(Error::OdeConvergence {
        steps,
        last_change: last_change.as_f64(),
    })
}

// Integrates the deviation u = z − z0 (u(t_start) = u̇(t_start) = 0), landing exactly on each grid time.
fn rk4_samples<T: Real, F: Fn(T, T, T) -> T>(f: &F, t_start: T, grid: &[T], dt: T) -> Vec<T> {
    let (mut t, mut u, mut v) = (t_start, T::zero(), T::zero());
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut out = Vec::with_capacity(grid.len());
    for &target in grid {
        let len = target - t;
        if len > T::zero() {
            let n = (len / dt).ceil().to_usize().unwrap_or(1).max(1);
            let h = len / T::int(n as i64);
            for i in 0..n {
                let ti = t + h * T::int(i as i64);
                let (k1u, k1v) = (v, f(ti, u, v));
                let (k2u, k2v) = (v + half * h * k1v, f(ti + half * h, u + half * h * k1u, v + half * h * k1v));
                let (k3u, k3v) = (v + half * h * k2v, f(ti + half * h, u + half * h * k2u, v + half * h * k2v));
                let (k4u, k4v) = (v + h * k3v, f(ti + h, u + h * k3u, v + h * k3v));
                u = u + h * sixth * (k1u + T::lit(2.0) * (k2u + k3u) + k4u);
                v = v + h * sixth * (k1v + T::lit(2.0) * (k2v + k3v) + k4v);
            }
            t = target;
        }
        out.push(u);
    }
    out
}

/// Recoil velocity `ħ k_L / m` of a single photon kick.
pub fn recoil_velocity<T: Real>(laser: &LaserParams<T>, atom: &AtomParams<T>) -> T {
    laser.k_l() * hbar::<T>() / atom.mass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LaserParams;
    use crate::sequence::{build_echo, build_hyper_echo, build_lmt_mz, build_mach_zehnder, build_ramsey};
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn gw(h: f64, w: f64, phi: f64) -> GwParams<f64> {
        GwParams::new(h, w, phi).unwrap()
    }

    fn atom() -> AtomParams<f64> {
        AtomParams::from_transition(1.443e-25, 2.7e15).unwrap()
    }

    #[test]
    fn stationary_without_drive_stays_put() {
        let trap = TrapParams::new(50.0, CenterMode::Stationary, 2.0).unwrap();
        for t in [0.0, 0.3, 7.0] {
            assert_eq!(stationary_trap_trajectory(t, &trap, &gw(0.0, 1.0, 0.4)).unwrap(), 2.0);
        }
    }

    #[test]
    fn stationary_initial_conditions_hold_for_all_quadrants() {
        let trap = TrapParams::new(10.0, CenterMode::Stationary, 1.0).unwrap();
        for phi in [0.0, 1.0, 2.0, 3.0, 4.0, 5.5, -2.5] {
            let s = StationaryTrajectory::new(&trap, &gw(1e-6, 1.0, phi)).unwrap();
            assert!((s.position(0.0) - 1.0).abs() <= 1e-12 * 1e-6);
            assert!(s.velocity(0.0).abs() <= 1e-12 * 1e-6);
        }
    }

    #[test]
    fn stationary_amplitude_factor() {
        let trap = TrapParams::new(10.0, CenterMode::Stationary, 1.0).unwrap();
        let s = StationaryTrajectory::new(&trap, &gw(1e-6, 1.0, 0.0)).unwrap();
        assert_relative_eq!(0.5 * s.suppression_ratio(), 0.5 / 99.0, max_relative = 1e-15);
    }

    #[test]
    fn stationary_rejects_resonance_and_free_atom() {
        let g = gw(1e-6, 3.0, 0.0);
        let res = TrapParams::new(3.0, CenterMode::Stationary, 1.0).unwrap();
        assert!(matches!(StationaryTrajectory::new(&res, &g), Err(Error::TrapResonance(_))));
        let free = TrapParams::new(0.0, CenterMode::Stationary, 1.0).unwrap();
        assert!(StationaryTrajectory::new(&free, &g).is_err());
    }

    #[test]
    fn geodesic_examples() {
        let g = gw(1e-3, 1.0, 0.0);
        assert_eq!(geodesic_trap_trajectory(0.0, 2.0, 0.0, &g), 2.0);
        assert_relative_eq!(geodesic_trap_trajectory(PI, 2.0, 0.0, &g), 2.0 * (1.0 - 1e-3), max_relative = 1e-15);
        assert_eq!(geodesic_trap_velocity(0.0, 2.0, 0.0, &g), 0.0);
        let g = gw(1e-3, 2.0, 0.7);
        assert_eq!(geodesic_trap_trajectory(0.4, 3.0, 0.4, &g), 3.0);
    }

    #[test]
    fn ode_oracle_matches_geodesic() {
        let g = gw(1e-6, 2.0 * PI, 0.3);
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.025).collect();
        let sol = ode_oracle(&OdeKind::Geodesic { z0: 1.0, t0: 0.0 }, &g, &grid).unwrap();
        for (t, z) in grid.iter().zip(&sol.z) {
            let exact = geodesic_trap_trajectory(*t, 1.0, 0.0, &g);
            assert!((z - exact).abs() <= 1e-8 * 1e-6);
        }
    }

    #[test]
    fn ode_oracle_flat_and_bad_grid() {
        let trap = TrapParams::new(10.0, CenterMode::Stationary, 1.5).unwrap();
        let sol = ode_oracle(&OdeKind::StationaryTrap(trap), &gw(0.0, 1.0, 0.0), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(sol.z, vec![1.5, 1.5, 1.5]);
        assert_eq!(
            ode_oracle(&OdeKind::StationaryTrap(trap), &gw(0.0, 1.0, 0.0), &[1.0, 0.5]),
            Err(Error::TimeGrid)
        );
    }

    #[test]
    fn guided_profile_shape() {
        let p = GuidedProfile::new(2.0, 1.0, 3.0).unwrap();
        assert_relative_eq!(p.separation(0.5), 2.0 / 8.0);
        assert_relative_eq!(p.separation(1.0), 0.5);
        assert_eq!(p.state(1.0).1, 0.0);
        assert_relative_eq!(p.separation(2.5), 0.5);
        assert_eq!(p.separation(p.duration()), 0.0);
        assert_eq!(p.state(p.duration()).1, 0.0);
        let (dz, ddz) = guided_separation(&p);
        assert_eq!(ddz(0.25), 2.0);
        assert_eq!(ddz(0.75), -2.0);
        assert_eq!(ddz(2.0), 0.0);
        assert_eq!(ddz(4.25), -2.0);
        assert_eq!(ddz(4.75), 2.0);
        assert_relative_eq!(dz(4.5), 2.0 / 8.0, max_relative = 1e-14);
        assert!(GuidedProfile::new(1.0, 0.0, 1.0).is_err());
        assert!(GuidedProfile::new(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn mach_zehnder_separation() {
        let laser = LaserParams::resonant(1e7).unwrap();
        let a = atom();
        let seq = build_mach_zehnder(1.0, 0.0).unwrap();
        let kin = lightpulse_branch_kinematics(&seq, Side::B, &laser, &a, 0.0, &gw(1e-6, 1.0, 0.0), true).unwrap();
        let v = recoil_velocity(&laser, &a);
        assert_relative_eq!(kin.dz(1.0), v, max_relative = 1e-15);
        assert_eq!(kin.dz(2.0), 0.0);
        assert_eq!(kin.dz_velocity(2.0), 0.0);
        assert_eq!(kin.zbar(0.7), 0.0);
        assert!(kin.warnings().is_empty());
    }

    #[test]
    fn ramsey_is_open_in_space() {
        let laser = LaserParams::resonant(1e7).unwrap();
        let seq = build_ramsey(1.0, 0.0).unwrap();
        let kin = lightpulse_branch_kinematics(&seq, Side::B, &laser, &atom(), 0.0, &gw(1e-6, 1.0, 0.0), true).unwrap();
        assert_eq!(kin.dz_velocity(1.0), 0.0);
        assert!(kin.dz(1.0) > 0.0);
        assert!(kin.warnings()[0].contains("open interferometer"));
    }

    #[test]
    fn strict_mode_rejects_unbalanced_kicks() {
        use crate::sequence::{build_custom, PulseSpec};
        let laser = LaserParams::resonant(1.0).unwrap();
        let (seq, _) = build_custom(
            &[PulseSpec { t_a: 0.0, t_b: 0.0, lambda_omega: 1, lambda_k: 1 }],
            1.0,
            0.0,
        )
        .unwrap();
        let g = gw(1e-6, 1.0, 0.0);
        assert!(matches!(
            lightpulse_branch_kinematics(&seq, Side::A, &laser, &atom(), 0.0, &g, true),
            Err(Error::OpenSequence(_))
        ));
        let kin = lightpulse_branch_kinematics(&seq, Side::A, &laser, &atom(), 0.0, &g, false).unwrap();
        assert!(!kin.warnings().is_empty());
    }

    #[test]
    fn composite_loops_close_exactly() {
        let laser = LaserParams::resonant(1.0).unwrap();
        let g = gw(1e-6, 3e4, 0.2);
        for n in 1..=5 {
            for seq in [build_lmt_mz(n, 1e-4, 3.3e-9).unwrap(), build_hyper_echo(n, 1e-4, 3.3e-9).unwrap()] {
                for side in [Side::A, Side::B] {
                    let kin = lightpulse_branch_kinematics(&seq, side, &laser, &atom(), 1.0, &g, true).unwrap();
                    let (_, end) = kin.support().unwrap();
                    assert_eq!(kin.dz(end), 0.0, "N={n} {side:?}");
                    assert_eq!(kin.dz_velocity(end), 0.0);
                    assert_eq!(kin.dlambda_omega(end), 0);
                }
            }
        }
    }

    #[test]
    fn step_functions() {
        let seq = build_echo(1.0, 0.1).unwrap();
        let trap = TrapParams::new(1e3, CenterMode::Geodesic, 1.0).unwrap();
        let kin = clock_branch_kinematics(&seq, Side::A, &trap, 0.0, &gw(1e-6, 1.0, 0.0)).unwrap();
        assert_eq!(kin.dlambda_omega(0.0), 0);
        assert_eq!(kin.dlambda_omega(0.1), 1);
        assert_eq!(kin.dlambda_k(1.5), -1);
        assert_eq!(kin.dlambda_k(2.1), 0);
        assert_eq!(kin.breakpoints(), &[0.1, 1.1, 2.1]);
        assert_eq!(kin.dz(0.5), 0.0);
        assert_eq!(kin.zbar_base(0.5), 1.0);
    }
}
