//! Pulse sequences shared by both sensors of a differential detector.
//!
//! Every pulse carries its arrival time at the far sensor `a` (at `z = L`) and
//! at the near sensor `b` (at the origin), together with the differential
//! response coefficients `λ_ω` (internal state) and `λ_k` (momentum).
//! Built-in sequences also keep their timings as exact integer combinations
//! of the interrogation time `T` and the light delay `τ`.

use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SequenceKind {
    Ramsey,
    Echo,
    MachZehnder,
    LmtMz,
    HyperEcho,
    Custom,
}

impl SequenceKind {
    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Ramsey => "ramsey",
            SequenceKind::Echo => "echo",
            SequenceKind::MachZehnder => "mach_zehnder",
            SequenceKind::LmtMz => "lmt_mz",
            SequenceKind::HyperEcho => "hyper_echo",
            SequenceKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ramsey" => SequenceKind::Ramsey,
            "echo" => SequenceKind::Echo,
            "mach_zehnder" | "mz" => SequenceKind::MachZehnder,
            "lmt_mz" | "lmt" => SequenceKind::LmtMz,
            "hyper_echo" => SequenceKind::HyperEcho,
            "custom" => SequenceKind::Custom,
            _ => return None,
        })
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact time `periods·T + delays·τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Epoch {
    pub periods: i64,
    pub delays: i64,
}

impl Epoch {
    pub const fn new(periods: i64, delays: i64) -> Self {
        Self { periods, delays }
    }

    pub fn eval<T: Real>(self, t_int: T, tau: T) -> T {
        T::int(self.periods) * t_int + T::int(self.delays) * tau
    }

    fn scaled(self, k: i64) -> Self {
        Self::new(self.periods * k, self.delays * k)
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.periods + o.periods, self.delays + o.delays)
    }

    pub fn minus(self, o: Self) -> Self {
        self.add(o.scaled(-1))
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}T{:+}tau", self.periods, self.delays)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T> {
    /// 1-based pulse number ℓ.
    pub index: usize,
    pub t_a: T,
    pub t_b: T,
    pub lambda_omega: i8,
    pub lambda_k: i8,
    pub epoch_a: Option<Epoch>,
    pub epoch_b: Option<Epoch>,
}

impl<T: Real> Pulse<T> {
    /// Arrival time at the given sensor.
    pub fn time(&self, side: Side) -> T {
        match side {
            Side::A => self.t_a,
            Side::B => self.t_b,
        }
    }
}

/// Which of the two sensors a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Far sensor at `z = L`.
    A,
    /// Near sensor at the origin.
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence<T> {
    pub pulses: Vec<Pulse<T>>,
    pub interrogation_time: T,
    pub tau: T,
    /// Composite order `N`; 1 for plain sequences.
    pub order: usize,
    pub kind: SequenceKind,
}

impl<T: Real> PulseSequence<T> {
    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn times(&self, side: Side) -> impl Iterator<Item = T> + '_ {
        self.pulses.iter().map(move |p| p.time(side))
    }

    /// Empty sequence, for sensors that are not driven by light.
    pub fn empty(interrogation_time: T, tau: T) -> Self {
        Self {
            pulses: Vec::new(),
            interrogation_time,
            tau,
            order: 1,
            kind: SequenceKind::Custom,
        }
    }

    /// Copy with the given kind tag (same pulses).
    pub fn with_kind(mut self, kind: SequenceKind) -> Self {
        self.kind = kind;
        self
    }
}

fn check_times<T: Real>(t_int: T, tau: T) -> Result<()> {
    if !(t_int.is_finite() && t_int > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "T",
            value: t_int.as_f64(),
            requirement: "finite and > 0",
        });
    }
    if !(tau.is_finite() && tau >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau.as_f64(),
            requirement: "finite and >= 0",
        });
    }
    Ok(())
}

fn from_table<T: Real>(
    table: &[(Epoch, Epoch, i8, i8)],
    t_int: T,
    tau: T,
    order: usize,
    kind: SequenceKind,
) -> PulseSequence<T> {
    let pulses = table
        .iter()
        .enumerate()
        .map(|(i, &(ea, eb, lw, lk))| Pulse {
            index: i + 1,
            t_a: ea.eval(t_int, tau),
            t_b: eb.eval(t_int, tau),
            lambda_omega: lw,
            lambda_k: lk,
            epoch_a: Some(ea),
            epoch_b: Some(eb),
        })
        .collect();
    PulseSequence {
        pulses,
        interrogation_time: t_int,
        tau,
        order,
        kind,
    }
}

/// Plain sequence: pulses at `t_b = n·T`, reaching sensor `a` one delay later.
fn plain<T: Real>(t_int: T, tau: T, lambdas: &[i8], kind: SequenceKind) -> Result<PulseSequence<T>> {
    check_times(t_int, tau)?;
    let table: Vec<_> = lambdas
        .iter()
        .enumerate()
        .map(|(n, &l)| (Epoch::new(n as i64, 1), Epoch::new(n as i64, 0), l, l))
        .collect();
    Ok(from_table(&table, t_int, tau, 1, kind))
}

/// Two π/2 pulses separated by `T`.
pub fn build_ramsey<T: Real>(t_int: T, tau: T) -> Result<PulseSequence<T>> {
    plain(t_int, tau, &[1, -1], SequenceKind::Ramsey)
}

/// π/2 – π – π/2 with spacing `T`.
pub fn build_echo<T: Real>(t_int: T, tau: T) -> Result<PulseSequence<T>> {
    plain(t_int, tau, &[1, -2, 1], SequenceKind::Echo)
}

/// Beam splitter – mirror – beam splitter; same table as the echo.
pub fn build_mach_zehnder<T: Real>(t_int: T, tau: T) -> Result<PulseSequence<T>> {
    plain(t_int, tau, &[1, -2, 1], SequenceKind::MachZehnder)
}

/// Exact arrival epochs `(a, b)` of pulse `l` in the `4N-1` composite scheme.
///
/// Pulses alternate in direction, so some reach `a` before `b`.
pub fn composite_epochs(n: usize, l: usize) -> (Epoch, Epoch) {
    let (n, li) = (n as i64, l as i64);
    // floor division on non-negative operands
    let fl = |x: i64| x.div_euclid(2);
    if li <= n {
        (Epoch::new(0, 2 * fl(li - 1) + 1), Epoch::new(0, 2 * fl(li)))
    } else if li < 3 * n {
        (
            Epoch::new(1, 2 * fl(li) - 2 * n + 1),
            Epoch::new(1, 2 * fl(li + 1) - 2 * n),
        )
    } else {
        (
            Epoch::new(2, 2 * fl(li + 1) - 4 * n + 1),
            Epoch::new(2, 2 * fl(li) - 4 * n + 2),
        )
    }
}

fn composite_checks<T: Real>(n: usize, t_int: T, tau: T) -> Result<()> {
    if n < 1 {
        return Err(Error::Sequence(format!("composite order N must be >= 1, got {n}")));
    }
    check_times(t_int, tau)?;
    if t_int <= T::int(2 * n as i64 - 1) * tau {
        return Err(Error::Sequence(format!(
            "timing collision: T = {:e} s must exceed (2N-1)·tau = {:e} s",
            t_int.as_f64(),
            ((2 * n - 1) as f64) * tau.as_f64()
        )));
    }
    Ok(())
}

fn alternating(l: usize) -> i8 {
    // (-1)^(l+1)
    if l % 2 == 1 {
        1
    } else {
        -1
    }
}

/// Large-momentum-transfer Mach–Zehnder of order `N` (`4N-1` pulses).
pub fn build_lmt_mz<T: Real>(n: usize, t_int: T, tau: T) -> Result<PulseSequence<T>> {
    composite_checks(n, t_int, tau)?;
    let table: Vec<_> = (1..=4 * n - 1)
        .map(|l| {
            let (ea, eb) = composite_epochs(n, l);
            let (lw, lk) = if l <= n || l >= 3 * n {
                (alternating(l), 1)
            } else if l == 2 * n {
                (-2, -2)
            } else {
                (alternating(l), -1)
            };
            (ea, eb, lw, lk)
        })
        .collect();
    Ok(from_table(&table, t_int, tau, n, SequenceKind::LmtMz))
}

/// Hyper-echo clock sequence of order `N`: LMT timings, both components addressed by every pulse.
pub fn build_hyper_echo<T: Real>(n: usize, t_int: T, tau: T) -> Result<PulseSequence<T>> {
    composite_checks(n, t_int, tau)?;
    let last = 4 * n - 1;
    let table: Vec<_> = (1..=last)
        .map(|l| {
            let (ea, eb) = composite_epochs(n, l);
            let (lw, lk) = if l == 1 || l == last {
                (1, 1)
            } else if l <= n || l >= 3 * n {
                (2 * alternating(l), 2)
            } else {
                (2 * alternating(l), -2)
            };
            (ea, eb, lw, lk)
        })
        .collect();
    Ok(from_table(&table, t_int, tau, n, SequenceKind::HyperEcho))
}

/// One user-supplied pulse `(t_a, t_b, λ_ω, λ_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec<T> {
    pub t_a: T,
    pub t_b: T,
    pub lambda_omega: i8,
    pub lambda_k: i8,
}

/// Arbitrary sequence. Pulses are ordered by `t_b` (stable, so simultaneous
/// pulses keep their input order). Closure violations become warnings.
pub fn build_custom<T: Real>(
    specs: &[PulseSpec<T>],
    t_int: T,
    tau: T,
) -> Result<(PulseSequence<T>, Vec<String>)> {
    if specs.is_empty() {
        return Err(Error::Sequence("custom sequence needs at least one pulse".into()));
    }
    for (i, s) in specs.iter().enumerate() {
        if !(s.t_a.is_finite() && s.t_b.is_finite()) {
            return Err(Error::Sequence(format!("pulse {} has non-finite time", i + 1)));
        }
        if s.lambda_omega.abs() > 2 || s.lambda_k.abs() > 2 {
            return Err(Error::Sequence(format!(
                "pulse {}: coefficients must lie in -2..=2, got ({}, {})",
                i + 1,
                s.lambda_omega,
                s.lambda_k
            )));
        }
    }
    let mut sorted: Vec<_> = specs.to_vec();
    sorted.sort_by(|x, y| x.t_b.partial_cmp(&y.t_b).expect("finite times"));
    let pulses = sorted
        .iter()
        .enumerate()
        .map(|(i, s)| Pulse {
            index: i + 1,
            t_a: s.t_a,
            t_b: s.t_b,
            lambda_omega: s.lambda_omega,
            lambda_k: s.lambda_k,
            epoch_a: None,
            epoch_b: None,
        })
        .collect();
    let seq = PulseSequence {
        pulses,
        interrogation_time: t_int,
        tau,
        order: 1,
        kind: SequenceKind::Custom,
    };
    let diag = sequence_diagnostics(&seq);
    Ok((seq, diag.warnings()))
}

/// `Σ λ_k t` in exact `(T, τ)` units when available, plus its float value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedTime<T> {
    pub exact: Option<Epoch>,
    pub value: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceDiagnostics<T> {
    pub sum_lambda_k: i64,
    pub sum_lambda_omega: i64,
    pub sum_lambda_k_t_a: WeightedTime<T>,
    pub sum_lambda_k_t_b: WeightedTime<T>,
    pub t_b_sorted: bool,
    pub t_a_monotone: bool,
    pub max_abs_lambda: i8,
    pub pulse_count: usize,
}

impl<T: Real> SequenceDiagnostics<T> {
    /// Momentum and internal-state closure.
    pub fn closed(&self) -> bool {
        self.sum_lambda_k == 0 && self.sum_lambda_omega == 0
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.sum_lambda_k != 0 {
            w.push(format!("momentum closure violated: sum lambda_k = {}", self.sum_lambda_k));
        }
        if self.sum_lambda_omega != 0 {
            w.push(format!(
                "internal-state closure violated: sum lambda_omega = {}",
                self.sum_lambda_omega
            ));
        }
        if !self.t_a_monotone {
            w.push("t_a not monotone in pulse index".into());
        }
        w
    }
}

fn weighted<T: Real>(seq: &PulseSequence<T>, side: Side) -> WeightedTime<T> {
    let epoch = |p: &Pulse<T>| match side {
        Side::A => p.epoch_a,
        Side::B => p.epoch_b,
    };
    let exact = seq.pulses.iter().try_fold(Epoch::default(), |acc, p| {
        epoch(p).map(|e| acc.add(e.scaled(p.lambda_k as i64)))
    });
    let value = match exact {
        Some(e) => e.eval(seq.interrogation_time, seq.tau),
        None => seq
            .pulses
            .iter()
            .fold(T::zero(), |acc, p| acc + T::int(p.lambda_k as i64) * p.time(side)),
    };
    WeightedTime { exact, value }
}

/// Closure sums and secular weights `Σ λ_k t_ℓ` of a sequence.
pub fn sequence_diagnostics<T: Real>(seq: &PulseSequence<T>) -> SequenceDiagnostics<T> {
    let nondecreasing =
        |side: Side| seq.pulses.windows(2).all(|w| w[0].time(side) <= w[1].time(side));
    SequenceDiagnostics {
        sum_lambda_k: seq.pulses.iter().map(|p| p.lambda_k as i64).sum(),
        sum_lambda_omega: seq.pulses.iter().map(|p| p.lambda_omega as i64).sum(),
        sum_lambda_k_t_a: weighted(seq, Side::A),
        sum_lambda_k_t_b: weighted(seq, Side::B),
        t_b_sorted: nondecreasing(Side::B),
        t_a_monotone: nondecreasing(Side::A),
        max_abs_lambda: seq
            .pulses
            .iter()
            .map(|p| p.lambda_k.abs().max(p.lambda_omega.abs()))
            .max()
            .unwrap_or(0),
        pulse_count: seq.len(),
    }
}

/// Builds any built-in kind; `n` is ignored by the plain sequences.
pub fn build<T: Real>(kind: SequenceKind, n: usize, t_int: T, tau: T) -> Result<PulseSequence<T>> {
    match kind {
        SequenceKind::Ramsey => build_ramsey(t_int, tau),
        SequenceKind::Echo => build_echo(t_int, tau),
        SequenceKind::MachZehnder => build_mach_zehnder(t_int, tau),
        SequenceKind::LmtMz => build_lmt_mz(n, t_int, tau),
        SequenceKind::HyperEcho => build_hyper_echo(n, t_int, tau),
        SequenceKind::Custom => Err(Error::Sequence(
            "custom sequences are built from explicit pulse lists".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lk(s: &PulseSequence<f64>) -> Vec<i8> {
        s.pulses.iter().map(|p| p.lambda_k).collect()
    }
    fn lw(s: &PulseSequence<f64>) -> Vec<i8> {
        s.pulses.iter().map(|p| p.lambda_omega).collect()
    }

    #[test]
    fn ramsey_table() {
        let s = build_ramsey(1.0, 0.0).unwrap();
        assert_eq!(lk(&s), vec![1, -1]);
        assert_eq!(lw(&s), vec![1, -1]);
        assert_eq!(s.times(Side::B).collect::<Vec<_>>(), vec![0.0, 1.0]);
        let d = sequence_diagnostics(&s);
        assert!(d.closed());
        assert_eq!(d.sum_lambda_k_t_b.exact, Some(Epoch::new(-1, 0)));
        assert_eq!(d.sum_lambda_k_t_b.value, -1.0);
    }

    #[test]
    fn echo_and_mz_share_structure() {
        let e = build_echo(1.0, 0.25).unwrap();
        let m = build_mach_zehnder(1.0, 0.25).unwrap();
        assert_eq!(lk(&e), vec![1, -2, 1]);
        assert_eq!(e.times(Side::B).collect::<Vec<_>>(), vec![0.0, 1.0, 2.0]);
        assert_eq!(e.times(Side::A).collect::<Vec<_>>(), vec![0.25, 1.25, 2.25]);
        assert_eq!(e.pulses, m.pulses);
        assert_ne!(e.kind, m.kind);
        let d = sequence_diagnostics(&e);
        assert_eq!(d.sum_lambda_k_t_b.exact, Some(Epoch::default()));
        assert_eq!(d.sum_lambda_k_t_a.exact, Some(Epoch::default()));
    }

    #[test]
    fn plain_builders_reject_bad_t() {
        assert!(build_ramsey(0.0, 0.0).is_err());
        assert!(build_echo(-1.0, 0.0).is_err());
        assert!(build_mach_zehnder(1.0, -1e-9).is_err());
    }

    #[test]
    fn lmt_n1_is_mach_zehnder() {
        let (t, tau) = (1.0, 0.01);
        let l = build_lmt_mz(1, t, tau).unwrap();
        let m = build_mach_zehnder(t, tau).unwrap();
        assert_eq!(l.pulses, m.pulses);
    }

    #[test]
    fn lmt_n2_table() {
        let (t, tau) = (1.0, 0.01);
        let s = build_lmt_mz(2, t, tau).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(lk(&s), vec![1, 1, -1, -2, -1, 1, 1]);
        assert_eq!(lw(&s), vec![1, -1, 1, -2, 1, -1, 1]);
        // third pulse reaches the far sensor before the near one
        assert_eq!(s.pulses[2].epoch_a, Some(Epoch::new(1, -1)));
        assert_eq!(s.pulses[2].epoch_b, Some(Epoch::new(1, 0)));
        assert!(s.pulses[2].t_a < s.pulses[2].t_b);
        let d = sequence_diagnostics(&s);
        assert!(d.t_b_sorted);
        assert!(d.t_a_monotone);
        assert!(d.warnings().is_empty());
    }

    #[test]
    fn hyper_echo_tables() {
        let s1 = build_hyper_echo(1, 1.0, 0.01).unwrap();
        assert_eq!(lk(&s1), vec![1, -2, 1]);
        let s2 = build_hyper_echo(2, 1.0, 0.01).unwrap();
        assert_eq!(lk(&s2), vec![1, 2, -2, -2, -2, 2, 1]);
        assert_eq!(lw(&s2), vec![1, -2, 2, -2, 2, -2, 1]);
        let lmt = build_lmt_mz(2, 1.0, 0.01).unwrap();
        for (p, q) in s2.pulses.iter().zip(&lmt.pulses) {
            assert_eq!((p.t_a, p.t_b), (q.t_a, q.t_b));
        }
    }

    #[test]
    fn hyper_echo_secular_weight_vanishes_exactly() {
        for n in 1..=5 {
            let s = build_hyper_echo(n, 1.0, 0.01).unwrap();
            let d = sequence_diagnostics(&s);
            assert_eq!(d.sum_lambda_k_t_a.exact, Some(Epoch::default()), "N={n}");
        }
    }

    #[test]
    fn timing_collision_and_order_errors() {
        assert!(build_lmt_mz(0, 1.0, 0.01).is_err());
        assert!(matches!(build_lmt_mz(3, 0.05, 0.01), Err(Error::Sequence(m)) if m.contains("collision")));
        assert!(build_hyper_echo(3, 0.051, 0.01).is_ok());
        assert!(build_hyper_echo(1, 1.0, 0.0).is_ok());
    }

    #[test]
    fn custom_sequences_warn_on_open_geometry() {
        let specs = [
            PulseSpec { t_a: 1.0, t_b: 1.0, lambda_omega: -1, lambda_k: -1 },
            PulseSpec { t_a: 0.0, t_b: 0.0, lambda_omega: 1, lambda_k: 1 },
            PulseSpec { t_a: 2.0, t_b: 2.0, lambda_omega: 0, lambda_k: 1 },
        ];
        let (seq, warnings) = build_custom(&specs, 1.0, 0.0).unwrap();
        assert_eq!(seq.pulses[0].t_b, 0.0);
        assert_eq!(seq.pulses[0].index, 1);
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("momentum closure"));
        let bad = [PulseSpec { t_a: 0.0, t_b: 0.0, lambda_omega: 3, lambda_k: 0 }];
        assert!(build_custom(&bad, 1.0, 0.0).is_err());
        assert!(build_custom::<f64>(&[], 1.0, 0.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let s = build_hyper_echo(3, 1.0_f32, 0.01).unwrap();
        let d = sequence_diagnostics(&s);
        assert!(d.closed());
        assert_eq!(d.sum_lambda_k_t_a.value, 0.0_f32);
    }
}
