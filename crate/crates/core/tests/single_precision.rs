use gwsense_core::engine::{differential_phase, signal_amplitude, Component};
use gwsense_core::scenario::ScenarioSpec;
use gwsense_core::sequence::{build, sequence_diagnostics, SequenceKind};
use gwsense_core::SensorKind;

fn both(sensor: SensorKind, seq: SequenceKind, comp: Component) -> (f32, f64) {
    let single = ScenarioSpec::<f32>::new(sensor, seq);
    let double = ScenarioSpec::<f64>::new(sensor, seq);
    (
        signal_amplitude(&single.setup().unwrap(), comp).unwrap().phi_s,
        signal_amplitude(&double.setup().unwrap(), comp).unwrap().phi_s,
    )
}

#[test]
fn echo_clock_in_f32() {
    let (s, d) = both(SensorKind::ClockGeodesic, SequenceKind::Echo, Component::K);
    assert!(((s as f64 - d) / d).abs() < 1e-4);
}

#[test]
fn mach_zehnder_in_f32() {
    let (s, d) = both(SensorKind::LightPulseAi, SequenceKind::MachZehnder, Component::G);
    assert!(((s as f64 - d) / d).abs() < 1e-3);
}

#[test]
fn guided_in_f32() {
    let (s, d) = both(SensorKind::GuidedAi, SequenceKind::Custom, Component::G);
    assert!(((s as f64 - d) / d).abs() < 1e-3);
}

#[test]
fn f32_sequences_close() {
    for n in 1..=8 {
        let seq = build::<f32>(SequenceKind::HyperEcho, n, 1e-4, 3.3e-9).unwrap();
        assert!(sequence_diagnostics(&seq).closed());
    }
}

#[test]
fn f32_zero_strain() {
    let spec = ScenarioSpec::<f32> {
        h_plus: 0.0,
        ..ScenarioSpec::new(SensorKind::LightPulseAi, SequenceKind::LmtMz)
    };
    assert_eq!(differential_phase(&spec.setup().unwrap()).unwrap().gw_total(), 0.0);
}
