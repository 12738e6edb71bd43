//! Built-in verification suite: engine against closed forms, ODE and
//! finite-difference oracles, plus structural invariants.

use core::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::catalog::{composite_amplitude, composite_parts, echo_clock, CatalogInput, Components, CompositeKind};
use crate::engine::{
    differential_phase, linearity_probe, quadratures, sensor_kinematics, signal_amplitude, Component,
    EngineOptions, SensorKind, SignalAmplitude,
};
use crate::error::{Error, Result};
use crate::model::{c, CenterMode, TrapParams};
use crate::potential::{christoffel_z00, eikonal_residual, Direction};
use crate::quadrature::GaussLegendre;
use crate::scalar::{rel_diff, Real};
use crate::scenario::ScenarioSpec;
use crate::sequence::{build, sequence_diagnostics, Epoch, PulseSequence, SequenceDiagnostics, SequenceKind, Side};
use crate::trajectory::{
    geodesic_perturbation, geodesic_trap_trajectory, geodesic_trap_velocity, ode_oracle, OdeKind,
    StationaryTrajectory,
};

/// Pass condition of a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Within { target: f64, tol: f64 },
    Equals(f64),
}

impl Bound {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Bound::AtMost(l) => v <= l,
            Bound::Within { target, tol } => (v - target).abs() <= tol,
            Bound::Equals(x) => v == x,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::AtMost(l) => write!(f, "<= {l:e}"),
            Bound::Within { target, tol } => write!(f, "{target} +/- {tol}"),
            Bound::Equals(x) => write!(f, "== {x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
}

impl Metric {
    pub fn passed(&self) -> bool {
        self.bound.holds(self.value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    /// `C1` … `C10`, or `scenario` for a configured run.
    pub label: String,
    pub title: &'static str,
    pub metrics: Vec<Metric>,
    pub notes: Vec<String>,
    /// Set when the criterion could not be evaluated.
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.metrics.is_empty() && self.metrics.iter().all(Metric::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Metric> {
        self.metrics.iter().filter(|m| !m.passed())
    }

    /// Multi-line listing of every metric.
    pub fn detail(&self) -> String {
        let mut s = String::new();
        for m in &self.metrics {
            let tag = if m.passed() { "ok  " } else { "FAIL" };
            s.push_str(&format!("    {tag} {} = {:.6e} ({})\n", m.name, m.value, m.bound));
        }
        for n in &self.notes {
            s.push_str(&format!("    note: {n}\n"));
        }
        s
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{tag}] {} {}: {} checks, {:.2} s",
            self.label,
            self.title,
            self.metrics.len(),
            self.elapsed.as_secs_f64()
        )?;
        if let Some(e) = &self.error {
            write!(f, "; error: {e}")?;
        }
        let failed: Vec<_> = self.failures().collect();
        if !failed.is_empty() {
            write!(f, "; {} failed, first: {} = {:.3e} ({})", failed.len(), failed[0].name, failed[0].value, failed[0].bound)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionReport::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.criteria {
            writeln!(f, "{c}")?;
        }
        let n = self.criteria.iter().filter(|c| c.passed()).count();
        write!(f, "{n}/{} passed in {:.2} s", self.criteria.len(), self.elapsed.as_secs_f64())
    }
}

#[derive(Default)]
struct Collector {
    metrics: Vec<Metric>,
    notes: Vec<String>,
}

impl Collector {
    fn check(&mut self, name: impl Into<String>, value: f64, bound: Bound) {
        self.metrics.push(Metric {
            name: name.into(),
            value,
            bound,
        });
    }

    fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }
}

fn run(id: u8, title: &'static str, f: impl FnOnce(&mut Collector) -> Result<()>) -> CriterionReport {
    run_labelled(format!("C{id}"), title, f)
}

fn run_labelled(label: String, title: &'static str, f: impl FnOnce(&mut Collector) -> Result<()>) -> CriterionReport {
    let start = Instant::now();
    let mut col = Collector::default();
    let error = f(&mut col).err().map(|e| e.to_string());
    CriterionReport {
        label,
        title,
        metrics: col.metrics,
        notes: col.notes,
        error,
        elapsed: start.elapsed(),
    }
}

type Spec = ScenarioSpec<f64>;

fn spec(sensor: SensorKind, seq: SequenceKind) -> Spec {
    Spec::new(sensor, seq)
}

fn engine_vs_catalog(s: &Spec) -> Result<(SignalAmplitude<f64>, SignalAmplitude<f64>)> {
    let (comp, cat) = s
        .catalog_reference()?
        .ok_or_else(|| Error::Sensor(format!("no closed form for {} / {}", s.sensor, s.sequence)))?;
    Ok((signal_amplitude(&s.setup()?, comp)?, cat))
}

fn amplitude(s: &Spec, comp: Component) -> Result<SignalAmplitude<f64>> {
    signal_amplitude(&s.setup()?, comp)
}

const PHASES: [f64; 4] = [0.5, 1.0, PI, 5.0];

/// Echo clock and Mach–Zehnder against the common closed form, and the
/// first-order scaling of the residual with `k_G L`.
pub fn criterion_1() -> CriterionReport {
    run(1, "echo/MZ closed form", |col| {
        for (sensor, seq) in [
            (SensorKind::ClockGeodesic, SequenceKind::Echo),
            (SensorKind::LightPulseAi, SequenceKind::MachZehnder),
        ] {
            for wt in PHASES {
                let mut errs = [0.0; 3];
                for (e, kgl) in errs.iter_mut().zip([1e-3, 1e-4, 1e-5]) {
                    let s = Spec {
                        k_g_l: kgl,
                        omega_g_t: wt,
                        ..spec(sensor, seq)
                    };
                    let (eng, cat) = engine_vs_catalog(&s)?;
                    *e = eng.relative_error(&cat);
                }
                let label = format!("{seq} wT={wt:.4}");
                col.check(format!("{label} rel err @kGL=1e-4"), errs[1], Bound::AtMost(1e-3));
                let p = (errs[0] / errs[2]).ln() / 100f64.ln();
                col.check(format!("{label} error exponent"), p, Bound::Within { target: 1.0, tol: 0.2 });
                if seq == SequenceKind::MachZehnder {
                    col.check(
                        format!("{label} residual ratio 1e-3/1e-4"),
                        errs[0] / errs[1],
                        Bound::Within { target: 10.0, tol: 3.0 },
                    );
                }
            }
        }
        // clock composite total at N = 1 against the echo closed form
        for wt in PHASES {
            let s = Spec {
                omega_g_t: wt,
                ..spec(SensorKind::ClockGeodesic, SequenceKind::Echo)
            };
            let inp = CatalogInput::new(&s.gw()?, &s.laser()?, s.baseline);
            let (t, tau) = (s.interrogation_time(), s.tau());
            let comp = composite_amplitude(CompositeKind::Clock, 1, t, tau, &inp)?;
            let echo = quadratures(|p| Ok(echo_clock(&inp.with_phase0(p), t).delta_phi))?;
            col.note(format!(
                "wT={wt:.4}: composite N=1 clock total vs echo closed form differ by {:.3e}",
                comp.relative_error(&echo)
            ));
        }
        Ok(())
    })
}

/// Ramsey clock with the secular term, and the fitted secular slope.
pub fn criterion_2() -> CriterionReport {
    run(2, "Ramsey secular term", |col| {
        let base = spec(SensorKind::ClockGeodesic, SequenceKind::Ramsey);
        for wt in PHASES {
            let s = Spec { omega_g_t: wt, ..base.clone() };
            let (eng, cat) = engine_vs_catalog(&s)?;
            col.check(format!("Ramsey wT={wt:.4} rel err"), eng.relative_error(&cat), Bound::AtMost(1e-3));
        }
        // δφ(x) at sin Φ₀ = 1 fitted on {1, cos x, sin x, x}, x = ω_G T
        let xs: Vec<f64> = (1..=24).map(|j| 0.25 * j as f64).collect();
        let mut y = DVector::zeros(xs.len());
        let mut a = DMatrix::zeros(xs.len(), 4);
        for (i, &x) in xs.iter().enumerate() {
            let s = Spec {
                omega_g_t: x,
                phase0: FRAC_PI_2,
                ..base.clone()
            };
            y[i] = differential_phase(&s.setup()?)?.get(Component::K);
            a[(i, 0)] = 1.0;
            a[(i, 1)] = x.cos();
            a[(i, 2)] = x.sin();
            a[(i, 3)] = x;
        }
        let coef = a
            .svd(true, true)
            .solve(&y, 1e-12)
            .map_err(|e| Error::Sensor(format!("least squares failed: {e}")))?;
        let w = base.omega_g();
        let slope = coef[3] * w;
        let want = base.h_plus * base.k_l * base.baseline * w / 2.0;
        col.note(format!("fitted slope {slope:.9e} rad/s, magnitude expected {want:.9e}"));
        col.check("secular slope rel err", rel_diff(slope.abs(), want), Bound::AtMost(1e-3));
        Ok(())
    })
}

fn component_of(comp: Component, c: &Components<f64>) -> f64 {
    match comp {
        Component::G | Component::K => c.lead,
        Component::DmG => c.dm_g,
        Component::OmegaG => c.omega_g,
        Component::KG => c.k_g,
        Component::GwTotal => c.sum(),
    }
}

/// Composite schemes: totals and each of the four contributions.
pub fn criterion_3() -> CriterionReport {
    run(3, "composite totals and components", |col| {
        for (kind, sensor, seq, lead) in [
            (CompositeKind::Ai, SensorKind::LightPulseAi, SequenceKind::LmtMz, Component::G),
            (CompositeKind::Clock, SensorKind::ClockGeodesic, SequenceKind::HyperEcho, Component::K),
        ] {
            for n in [1, 2, 3, 5] {
                let s = Spec {
                    order: n,
                    omega_g_t: 2.0,
                    ..spec(sensor, seq)
                };
                let (eng, cat) = engine_vs_catalog(&s)?;
                col.check(format!("{seq} N={n} total"), eng.relative_error(&cat), Bound::AtMost(1e-3));
                let setup = s.setup()?;
                let inp = CatalogInput::new(&s.gw()?, &s.laser()?, s.baseline);
                let (t, tau) = (s.interrogation_time(), s.tau());
                for comp in [lead, Component::DmG, Component::OmegaG, Component::KG] {
                    let want = quadratures(|p| {
                        composite_parts(kind, n, t, tau, &inp.with_phase0(p)).map(|c| component_of(comp, &c))
                    })?;
                    let got = signal_amplitude(&setup, comp)?;
                    col.check(
                        format!("{seq} N={n} {}", comp.name()),
                        got.relative_error(&want),
                        Bound::AtMost(1e-2),
                    );
                }
            }
        }
        Ok(())
    })
}

/// Amplitude enhancement of the composite schemes over their `N = 1` parents.
pub fn criterion_4() -> CriterionReport {
    run(4, "enhancement factors", |col| {
        let kgl = 2e-5;
        let at = |sensor, seq, n| Spec {
            order: n,
            k_g_l: kgl,
            omega_g_t: PI,
            ..spec(sensor, seq)
        };
        let echo = amplitude(&at(SensorKind::ClockGeodesic, SequenceKind::Echo, 1), Component::GwTotal)?.phi_s;
        let mz = amplitude(&at(SensorKind::LightPulseAi, SequenceKind::MachZehnder, 1), Component::GwTotal)?.phi_s;
        for n in 1..=5 {
            let hyper = amplitude(&at(SensorKind::ClockGeodesic, SequenceKind::HyperEcho, n), Component::GwTotal)?.phi_s;
            let lmt = amplitude(&at(SensorKind::LightPulseAi, SequenceKind::LmtMz, n), Component::GwTotal)?.phi_s;
            let (fh, fl) = ((2 * n - 1) as f64, n as f64);
            col.check(format!("hyper-echo N={n} / echo vs {fh}"), rel_diff(hyper / echo, fh), Bound::AtMost(1e-3));
            col.check(format!("LMT N={n} / MZ vs {fl}"), rel_diff(lmt / mz, fl), Bound::AtMost(1e-3));
        }
        Ok(())
    })
}

/// Laser-phase contributions of the geodesic echo clock.
pub fn criterion_5() -> CriterionReport {
    run(5, "laser-phase cancellation", |col| {
        for wt in PHASES {
            let s = Spec {
                omega_g_t: wt,
                ..spec(SensorKind::ClockGeodesic, SequenceKind::Echo)
            };
            let setup = s.setup()?;
            let k = signal_amplitude(&setup, Component::K)?;
            let rest = quadratures(|p| {
                let d = differential_phase(&setup.with_phase0(p)?)?;
                Ok(d.phi_omega_g + d.phi_k_g + d.phi_dm_g)
            })?;
            col.check(format!("wT={wt:.4} |wG+kG+dm| / |k|"), rest.norm() / k.norm(), Bound::AtMost(1e-3));
            let kg = signal_amplitude(&setup, Component::KG)?;
            let minus_k = SignalAmplitude::from_coefficients(-k.cos_coeff, -k.sin_coeff);
            col.check(format!("wT={wt:.4} kG vs -k"), kg.relative_error(&minus_k), Bound::AtMost(1e-6));
        }
        Ok(())
    })
}

/// Trap-frequency scaling of the stationary-trap echo relative to the geodesic one.
pub fn criterion_6() -> CriterionReport {
    run(6, "stationary-trap suppression", |col| {
        let rhos = [10.0, 30.0, 100.0, 300.0];
        let mut pts = Vec::new();
        for rho in rhos {
            let at = |sensor| Spec {
                omega_t_ratio: rho,
                ..spec(sensor, SequenceKind::Echo)
            };
            let st = amplitude(&at(SensorKind::ClockStationary), Component::K)?.phi_s;
            let geo = amplitude(&at(SensorKind::ClockGeodesic), Component::K)?.phi_s;
            col.note(format!("rho={rho}: ratio {:.6e}", st / geo));
            pts.push((rho.ln(), (st / geo).ln()));
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        col.check("log-log slope", sxy / sxx, Bound::Within { target: -2.0, tol: 0.05 });
        Ok(())
    })
}

/// Closed-form trap trajectories against RK4 and direct quadrature.
pub fn criterion_7() -> CriterionReport {
    run(7, "trajectory oracles", |col| {
        let s = Spec::default();
        let gw = s.gw()?;
        let (w, h, z0) = (gw.omega_g(), gw.h_plus(), s.baseline);
        let scale = h * z0;
        let span = 10.0 * TAU / w;
        let grid = |t0: f64| -> Vec<f64> { (0..=400).map(|i| t0 + span * i as f64 / 400.0).collect() };

        let trap = TrapParams::new(10.0 * w, CenterMode::Stationary, z0)?;
        let traj = StationaryTrajectory::new(&trap, &gw)?;
        let ts = grid(0.0);
        let sol = ode_oracle(&OdeKind::StationaryTrap(trap), &gw, &ts)?;
        let dev = ts.iter().zip(&sol.z).map(|(t, z)| (traj.position(*t) - z).abs()).fold(0.0, f64::max);
        col.check("stationary max|dz| / (h z0)", dev / scale, Bound::AtMost(1e-6));
        col.check("stationary z(0) - z0", (traj.position(0.0) - z0).abs() / scale, Bound::AtMost(1e-12));
        col.check("stationary v(0)", traj.velocity(0.0).abs() / (scale * w), Bound::AtMost(1e-12));

        let quad = GaussLegendre::<f64>::new(32);
        for t0 in [0.0, 0.7 / w] {
            let ts = grid(t0);
            let sol = ode_oracle(&OdeKind::Geodesic { z0, t0 }, &gw, &ts)?;
            let dev = ts
                .iter()
                .zip(&sol.z)
                .map(|(t, z)| (geodesic_trap_trajectory(*t, z0, t0, &gw) - z).abs())
                .fold(0.0, f64::max);
            let tag = format!("geodesic t0={t0:.3e}");
            col.check(format!("{tag} max|dz| / (h z0)"), dev / scale, Bound::AtMost(1e-6));
            col.check(
                format!("{tag} z(t0) - z0"),
                (geodesic_trap_trajectory(t0, z0, t0, &gw) - z0).abs() / scale,
                Bound::AtMost(1e-12),
            );
            col.check(
                format!("{tag} v(t0)"),
                geodesic_trap_velocity(t0, z0, t0, &gw).abs() / (scale * w),
                Bound::AtMost(1e-12),
            );
            // u(t) = ∫ (t - s) (-c² Γ) ds
            let cc = c::<f64>() * c::<f64>();
            let mut worst: f64 = 0.0;
            for &t in ts.iter().step_by(20) {
                let u = quad.integrate(t0, t, 0.25 / w, &mut |s| -(t - s) * cc * christoffel_z00(z0, s, &gw));
                worst = worst.max((u - geodesic_perturbation(t, z0, t0, &gw)).abs());
            }
            col.check(format!("{tag} vs double integral"), worst / scale, Bound::AtMost(1e-10));
        }
        Ok(())
    })
}

/// Finite-difference eikonal residual and its step convergence.
pub fn criterion_8() -> CriterionReport {
    run(8, "eikonal verification", |col| {
        let s = Spec::default();
        let gw = s.gw()?;
        let laser = s.laser()?;
        let step = 1e-3 / gw.omega_g();
        for dir in [Direction::Plus, Direction::Minus] {
            let r1 = eikonal_residual(s.baseline, 0.0, dir, step, &gw, &laser)?;
            let r2 = eikonal_residual(s.baseline, 0.0, dir, step / 2.0, &gw, &laser)?;
            col.check(format!("{dir:?} z=L residual"), r1.abs(), Bound::AtMost(1e-6));
            col.check(format!("{dir:?} z=L step ratio"), r1 / r2, Bound::Within { target: 4.0, tol: 0.2 });
            let t = s.interrogation_time() / 3.0;
            for z in [0.0, 1.0 / gw.k_g()] {
                let r = eikonal_residual(z, t, dir, step, &gw, &laser)?;
                col.check(format!("{dir:?} z={z:.3e} t=T/3 residual"), r.abs(), Bound::AtMost(1e-6));
            }
        }
        Ok(())
    })
}

/// Guided interferometer against its closed form, and loop closure.
pub fn criterion_9() -> CriterionReport {
    run(9, "guided interferometer", |col| {
        for wta in [0.5, 1.0, PI] {
            let s = Spec {
                omega_g_t: 1.0,
                omega_g_t_a: wta,
                ..spec(SensorKind::GuidedAi, SequenceKind::Custom)
            };
            let (eng, cat) = engine_vs_catalog(&s)?;
            col.check(format!("wTa={wta:.4} rel err"), eng.relative_error(&cat), Bound::AtMost(1e-3));
            let setup = s.setup()?;
            for side in [Side::A, Side::B] {
                let kin = sensor_kinematics(&setup, side)?;
                let end = kin.support().map_or(0.0, |(_, e)| e);
                col.check(format!("wTa={wta:.4} {side:?} dz(end)"), kin.dz(end), Bound::Equals(0.0));
            }
        }
        Ok(())
    })
}

fn shipped_scenarios() -> Vec<Spec> {
    use SensorKind::*;
    use SequenceKind::*;
    [
        (ClockGeodesic, Ramsey, 1),
        (ClockGeodesic, Echo, 1),
        (ClockStationary, Echo, 1),
        (LightPulseAi, MachZehnder, 1),
        (LightPulseAi, LmtMz, 3),
        (ClockGeodesic, HyperEcho, 3),
        (GuidedAi, Custom, 1),
    ]
    .into_iter()
    .map(|(sensor, seq, n)| Spec { order: n, ..spec(sensor, seq) })
    .collect()
}

/// Structural invariants and the runtime of the whole suite started at `suite_start`.
pub fn criterion_10(suite_start: Instant) -> CriterionReport {
    run(10, "structural invariants", |col| {
        let s = Spec::default();
        let (t, tau) = (s.interrogation_time(), s.tau());
        let (mut worst_k, mut worst_w) = (0i64, 0i64);
        for kind in [
            SequenceKind::Ramsey,
            SequenceKind::Echo,
            SequenceKind::MachZehnder,
            SequenceKind::LmtMz,
            SequenceKind::HyperEcho,
        ] {
            for n in 1..=8 {
                let d = sequence_diagnostics(&build(kind, n, t, tau)?);
                worst_k = worst_k.max(d.sum_lambda_k.abs());
                worst_w = worst_w.max(d.sum_lambda_omega.abs());
            }
        }
        col.check("max |sum lambda_k|, N <= 8", worst_k as f64, Bound::Equals(0.0));
        col.check("max |sum lambda_omega|, N <= 8", worst_w as f64, Bound::Equals(0.0));

        let mut worst_ta: f64 = 0.0;
        for n in 1..=8 {
            let d = sequence_diagnostics(&build(SequenceKind::HyperEcho, n, t, tau)?);
            let w = d.sum_lambda_k_t_a;
            if w.exact != Some(Epoch::default()) {
                worst_ta = worst_ta.max(w.value.abs().max(f64::MIN_POSITIVE));
            }
        }
        col.check("hyper-echo |sum lambda_k t_a|", worst_ta, Bound::Equals(0.0));

        let lmt1 = build(SequenceKind::LmtMz, 1, t, tau)?;
        let mz = build(SequenceKind::MachZehnder, 1, t, tau)?;
        col.check(
            "LMT(1) vs MZ pulse mismatches",
            lmt1.pulses.iter().zip(&mz.pulses).filter(|(a, b)| a != b).count() as f64
                + lmt1.len().abs_diff(mz.len()) as f64,
            Bound::Equals(0.0),
        );
        let phase = |kind| {
            differential_phase(&Spec {
                order: 1,
                ..spec(SensorKind::LightPulseAi, kind)
            }
            .setup()?)
        };
        let (a, b) = (phase(SequenceKind::LmtMz)?, phase(SequenceKind::MachZehnder)?);
        let diff = Component::ALL.iter().map(|c| (a.get(*c) - b.get(*c)).abs()).fold(0.0, f64::max);
        col.check("LMT(1) vs MZ phase difference", diff, Bound::Equals(0.0));

        for sc in shipped_scenarios() {
            let label = format!("{} {} N={}", sc.sensor, sc.sequence, sc.order);
            let setup = sc.setup()?;
            let lin = linearity_probe(&setup, &[2.0, 0.5])?;
            col.check(format!("{label} linearity"), lin.max_deviation, Bound::AtMost(1e-12));
            col.note(format!("{label}: gw_total linearity {:.3e}", lin.total_deviation));
            col.check(
                format!("{label} zero strain"),
                if lin.zero_baseline { 0.0 } else { 1.0 },
                Bound::Equals(0.0),
            );
            let mut worst: f64 = 0.0;
            for comp in Component::ALL.into_iter().filter(|c| *c != Component::GwTotal) {
                let amp = signal_amplitude(&setup, comp)?;
                if amp.phi_s > 0.0 {
                    worst = worst.max(rel_diff(amp.phi_s, amp.grid_phi_s));
                }
            }
            col.check(format!("{label} two-point vs grid"), worst, Bound::AtMost(1e-12));
            let total = signal_amplitude(&setup, Component::GwTotal)?;
            col.note(format!(
                "{label}: gw_total two-point vs grid {:.3e}",
                rel_diff(total.phi_s, total.grid_phi_s)
            ));
        }
        col.check("suite runtime s", suite_start.elapsed().as_secs_f64(), Bound::AtMost(120.0));
        Ok(())
    })
}

/// Runs every criterion in order.
pub fn run_default_suite() -> SuiteReport {
    let start = Instant::now();
    let criteria = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(start),
    ];
    SuiteReport {
        criteria,
        elapsed: start.elapsed(),
    }
}

/// Checks of one configured scenario: closure, agreement with its closed form
/// (when one exists) and the numerical invariants.
pub fn verify_scenario(s: &Spec, options: EngineOptions) -> CriterionReport {
    run_labelled("scenario".into(), "configured scenario", |col| {
        if s.sensor != SensorKind::GuidedAi {
            let (seq, _) = s.pulse_sequence()?;
            let d = sequence_diagnostics(&seq);
            col.check(
                "closure |sum lambda_k| + |sum lambda_omega|",
                (d.sum_lambda_k.abs() + d.sum_lambda_omega.abs()) as f64,
                Bound::Equals(0.0),
            );
            for w in d.warnings() {
                col.note(w);
            }
        }
        let setup = s.setup()?.with_options(options);
        if let Some((comp, cat)) = s.catalog_reference()? {
            let err = |spec: &Spec| -> Result<f64> {
                let (c, cat) = spec.catalog_reference()?.expect("same pairing");
                Ok(signal_amplitude(&spec.setup()?.with_options(options), c)?.relative_error(&cat))
            };
            let e = signal_amplitude(&setup, comp)?.relative_error(&cat);
            col.check(format!("{} vs closed form", comp.name()), e, Bound::AtMost(1e-3));
            let (up, down) = (
                err(&Spec { k_g_l: s.k_g_l * 10.0, ..s.clone() })?,
                err(&Spec { k_g_l: s.k_g_l / 10.0, ..s.clone() })?,
            );
            col.note(format!("residual exponent in k_G L: {:.4}", (up / down).ln() / 100f64.ln()));
        } else {
            col.note("no closed form for this sensor and sequence");
        }
        let lin = linearity_probe(&setup, &[2.0, 0.5])?;
        col.check("linearity", lin.max_deviation, Bound::AtMost(1e-12));
        let mut worst: f64 = 0.0;
        for comp in Component::ALL.into_iter().filter(|c| *c != Component::GwTotal) {
            let amp = signal_amplitude(&setup, comp)?;
            if amp.phi_s > 0.0 {
                worst = worst.max(rel_diff(amp.phi_s, amp.grid_phi_s));
            }
        }
        col.check("two-point vs grid", worst, Bound::AtMost(1e-12));
        Ok(())
    })
}

/// Rejects sequences without momentum or internal-state closure.
pub fn verify_sequence_closure<T: Real>(seq: &PulseSequence<T>) -> Result<SequenceDiagnostics<T>> {
    let d = sequence_diagnostics(seq);
    if !d.closed() {
        return Err(Error::OpenSequence(d.warnings().join("; ")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert!(Bound::AtMost(1.0).holds(1.0));
        assert!(!Bound::AtMost(1.0).holds(f64::NAN));
        assert!(Bound::Within { target: 4.0, tol: 0.2 }.holds(3.9));
        assert!(!Bound::Equals(0.0).holds(1e-300));
    }

    #[test]
    fn report_without_metrics_fails() {
        let r = run(0, "empty", |_| Ok(()));
        assert!(!r.passed());
        let r = run(0, "error", |col| {
            col.check("x", 0.0, Bound::Equals(0.0));
            Err(Error::TimeGrid)
        });
        assert!(!r.passed());
        assert!(r.to_string().starts_with("[FAIL] C0 error"));
    }

    #[test]
    fn open_sequence_rejected() {
        let mut seq = build(SequenceKind::Echo, 1, 1.0, 1e-9).unwrap();
        seq.pulses[1].lambda_k = -1;
        assert!(matches!(verify_sequence_closure(&seq), Err(Error::OpenSequence(_))));
        seq.pulses[1].lambda_k = -2;
        assert!(verify_sequence_closure(&seq).is_ok());
    }
}
