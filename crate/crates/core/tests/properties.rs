use gwsense_core::engine::{differential_phase, sensor_kinematics, Component};
use gwsense_core::model::{CenterMode, GwParams, TrapParams, SPEED_OF_LIGHT};
use gwsense_core::scalar::sinc;
use gwsense_core::sequence::{build, build_custom, sequence_diagnostics, Epoch, PulseSpec, SequenceKind, Side};
use gwsense_core::trajectory::{GuidedProfile, StationaryTrajectory};
use gwsense_core::{linearity_probe, Scenario, SensorKind};
use proptest::prelude::*;

fn sensor_sequence() -> impl Strategy<Value = (SensorKind, SequenceKind, usize)> {
    prop_oneof![
        Just((SensorKind::ClockGeodesic, SequenceKind::Echo, 1)),
        Just((SensorKind::ClockGeodesic, SequenceKind::Ramsey, 1)),
        Just((SensorKind::ClockStationary, SequenceKind::Echo, 1)),
        Just((SensorKind::LightPulseAi, SequenceKind::MachZehnder, 1)),
        (1usize..6).prop_map(|n| (SensorKind::LightPulseAi, SequenceKind::LmtMz, n)),
        (1usize..6).prop_map(|n| (SensorKind::ClockGeodesic, SequenceKind::HyperEcho, n)),
        Just((SensorKind::GuidedAi, SequenceKind::Custom, 1)),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (sensor_sequence(), 0.2f64..6.0, -7.0f64..7.0, -5.0f64..-3.0).prop_map(|((sensor, seq, n), wt, phi, lk)| Scenario {
        order: n,
        omega_g_t: wt,
        phase0: phi,
        k_g_l: 10f64.powf(lk),
        ..Scenario::new(sensor, seq)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn phase_is_linear_in_strain(s in scenario(), scale in 0.01f64..50.0) {
        let setup = s.setup().unwrap();
        let report = linearity_probe(&setup, &[scale]).unwrap();
        prop_assert!(report.zero_baseline);
        prop_assert!(report.max_deviation <= 1e-12, "{}", report.max_deviation);
    }

    #[test]
    fn phase_is_a_cos_plus_b_sin(s in scenario(), phi in -10.0f64..10.0) {
        let setup = s.setup().unwrap();
        let at = |p: f64| differential_phase(&setup.with_phase0(p).unwrap()).unwrap();
        let (a, b, x) = (at(0.0), at(core::f64::consts::FRAC_PI_2), at(phi));
        for c in Component::ALL.into_iter().filter(|c| *c != Component::GwTotal) {
            let want = a.get(c) * phi.cos() + b.get(c) * phi.sin();
            let scale = a.get(c).hypot(b.get(c));
            prop_assert!((x.get(c) - want).abs() <= 1e-11 * scale + 1e-300, "{c:?}");
        }
    }

    #[test]
    fn built_sequences_close(n in 1usize..17, t in 1e-6f64..10.0) {
        let tau = t / (4.0 * n as f64);
        for kind in [SequenceKind::Echo, SequenceKind::MachZehnder, SequenceKind::Ramsey, SequenceKind::LmtMz, SequenceKind::HyperEcho] {
            let seq = build(kind, n, t, tau).unwrap();
            let d = sequence_diagnostics(&seq);
            prop_assert!(d.closed());
            prop_assert!(d.t_b_sorted);
            if kind == SequenceKind::HyperEcho {
                prop_assert_eq!(d.sum_lambda_k_t_a.exact, Some(Epoch::default()));
                prop_assert_eq!(d.sum_lambda_k_t_b.exact, Some(Epoch::default()));
            }
        }
    }

    #[test]
    fn composite_timing_collision_is_rejected(n in 1usize..9, frac in 0.01f64..1.0) {
        let tau = 1e-3;
        let t = frac * (2 * n - 1) as f64 * tau;
        prop_assert!(build(SequenceKind::LmtMz, n, t, tau).is_err());
        prop_assert!(build(SequenceKind::HyperEcho, n, t, tau).is_err());
    }

    #[test]
    fn closed_light_pulse_loops_end_together(n in 1usize..9, wt in 0.1f64..8.0) {
        for seq in [SequenceKind::MachZehnder, SequenceKind::LmtMz] {
            let s = Scenario { order: n, omega_g_t: wt, ..Scenario::new(SensorKind::LightPulseAi, seq) };
            let setup = s.setup().unwrap();
            for side in [Side::A, Side::B] {
                let kin = sensor_kinematics(&setup, side).unwrap();
                let (_, end) = kin.support().unwrap();
                prop_assert_eq!(kin.dz(end), 0.0);
                prop_assert_eq!(kin.dz(end * 2.0), 0.0);
            }
        }
    }

    #[test]
    fn guided_profile_closes_exactly(a in 1e-6f64..10.0, ta in 1e-6f64..10.0, th in 0.0f64..10.0) {
        let p = GuidedProfile::new(a, ta, th).unwrap();
        let (dz, dv, _) = p.state(p.duration());
        prop_assert_eq!(dz, 0.0);
        prop_assert_eq!(dv, 0.0);
        prop_assert!(p.separation(0.5 * p.duration()) > 0.0);
    }

    #[test]
    fn stationary_trap_starts_at_rest(rho in 1.5f64..1e3, phi in -7.0f64..7.0, z0 in -10.0f64..10.0) {
        let w = SPEED_OF_LIGHT * 1e-4;
        let gw = GwParams::new(1e-6, w, phi).unwrap();
        let trap = TrapParams::new(rho * w, CenterMode::Stationary, z0).unwrap();
        let s = StationaryTrajectory::new(&trap, &gw).unwrap();
        prop_assert!((s.position(0.0) - z0).abs() <= 1e-12 * 1e-6 * z0.abs().max(1.0));
        prop_assert!(s.velocity(0.0).abs() <= 1e-12 * 1e-6 * z0.abs().max(1.0) * w);
    }

    #[test]
    fn custom_tables_are_sorted_by_near_time(
        pulses in prop::collection::vec((0.0f64..10.0, -2i8..=2, -2i8..=2), 1..12)
    ) {
        let specs: Vec<_> = pulses
            .iter()
            .map(|&(t, lw, lk)| PulseSpec { t_a: t + 0.5, t_b: t, lambda_omega: lw, lambda_k: lk })
            .collect();
        let (seq, warnings) = build_custom(&specs, 1.0, 0.5).unwrap();
        prop_assert!(sequence_diagnostics(&seq).t_b_sorted);
        let sum: i64 = pulses.iter().map(|p| p.2 as i64).sum();
        prop_assert_eq!(warnings.iter().any(|w| w.contains("momentum")), sum != 0);
        for (i, p) in seq.pulses.iter().enumerate() {
            prop_assert_eq!(p.index, i + 1);
        }
    }

    #[test]
    fn sinc_is_continuous(x in -1e-3f64..1e-3) {
        let direct = if x == 0.0 { 1.0 } else { x.sin() / x };
        prop_assert!((sinc(x) - direct).abs() <= 1e-15);
    }
}
