mod common;

use common::{fidelity, max_diff};
use num_complex::Complex64;
use proptest::prelude::*;
use qmean_core::estimator::hypothesis_probs;
use qmean_core::{
    amplify, classical_mean, compile_state_prep, decompose_s, plan_amplification, prepared_state, Amplifier,
    AmplitudeFunction, Control, Gate, GateOp, MeanCircuit, QuantumState, ReferencePoint,
};

/// Normalizable amplitude tables for n in 1..=max_n; roughly a third of the
/// entries are forced to exactly zero to hit empty branches.
fn amplitude_function(max_n: usize) -> impl Strategy<Value = AmplitudeFunction> {
    (1..=max_n)
        .prop_flat_map(|n| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0u8..3), 1 << n)
                .prop_map(move |raw| (n, raw))
        })
        .prop_filter_map("zero vector", |(n, raw)| {
            let values = raw
                .into_iter()
                .map(|(re, im, keep)| if keep == 0 { Complex64::new(0.0, 0.0) } else { Complex64::new(re, im) })
                .collect();
            AmplitudeFunction::normalized(n, values).ok()
        })
}

fn gate_op(m: usize) -> impl Strategy<Value = GateOp> {
    let gate = prop_oneof![
        Just(Gate::H),
        Just(Gate::X),
        (-3.0f64..3.0).prop_map(Gate::Ry),
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Gate::Diag(a, b)),
    ];
    (gate, Just(()).prop_perturb(move |_, mut rng| {
        let mut qubits: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            qubits.swap(i, rng.random_range(0..=i));
        }
        let k = rng.random_range(0..m);
        let controls: Vec<Control> =
            qubits[1..=k].iter().map(|&q| Control { qubit: q, value: rng.random() }).collect();
        (qubits[0], controls)
    }))
        .prop_map(|(g, (target, controls))| GateOp::controlled(g, target, controls).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(ops in prop::collection::vec(gate_op(6), 1..40), seed in 0u64..1000) {
        let mut state = common::random_state(6, seed);
        for op in &ops {
            state.apply_gate(op).unwrap();
        }
        prop_assert!((state.norm_sqr().sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_inverse_undoes_circuit(ops in prop::collection::vec(gate_op(5), 1..30), seed in 0u64..1000) {
        let mut circuit = qmean_core::Circuit::new(5);
        for op in ops {
            circuit.push(op).unwrap();
        }
        let original = common::random_state(5, seed);
        let mut state = original.clone();
        state.apply_circuit(&circuit).unwrap();
        state.apply_circuit(&circuit.inverse()).unwrap();
        prop_assert!(max_diff(state.amplitudes(), original.amplitudes()) < 1e-12);
    }

    #[test]
    fn state_prep_round_trip(amps in amplitude_function(6)) {
        let n = amps.n();
        let prep = compile_state_prep(&amps).unwrap();
        prop_assert!(prep.circuit.len() <= 2 << n);
        let built = prepared_state(&prep.circuit, n).unwrap();
        prop_assert!(fidelity(&amps, &built) >= 1.0 - 1e-12);
        let restored: Vec<Complex64> = built.amplitudes().iter().map(|z| z * prep.phase_factor()).collect();
        prop_assert!(max_diff(&restored, amps.values()) < 1e-12);
    }

    #[test]
    fn s_state_matches_claim(amps in amplitude_function(5), y_seed in any::<usize>()) {
        let n = amps.n();
        let y = ReferencePoint::new(n, y_seed % (1 << n)).unwrap();
        let mc = MeanCircuit::new(&amps, &y).unwrap();
        let s = mc.s_state().unwrap();
        let d = decompose_s(&s, &mc.layout).unwrap();
        let phase = Complex64::from_polar(1.0, mc.prep_phase);
        let oracle = classical_mean(&amps, &y).unwrap();
        let root2 = std::f64::consts::SQRT_2;
        prop_assert!((d.z1 * phase - oracle.mean / root2).norm() < 1e-10);
        prop_assert!((d.z0 * phase - oracle.ref_amplitude / root2).norm() < 1e-10);
        prop_assert!((d.z1.norm_sqr() + d.z0.norm_sqr() + d.chi_sq_norm - 1.0).abs() < 1e-10);

        let omega = mc.layout.omega();
        let p_target = s.probability_of(&[(omega, false)]).unwrap();
        prop_assert!((d.target_prob - p_target).abs() < 1e-10);
        // All omega = 0 mass sits on the two hypothesis basis states.
        let stray: f64 = s.amplitudes().iter().enumerate()
            .filter(|(i, _)| i >> omega & 1 == 0 && *i != mc.layout.z1_index() && *i != mc.layout.z0_index())
            .map(|(_, a)| a.norm_sqr())
            .sum();
        prop_assert!(stray < 1e-10);
    }

    #[test]
    fn z1_does_not_depend_on_y(amps in amplitude_function(4), y_seed in any::<usize>()) {
        let n = amps.n();
        let y = ReferencePoint::new(n, y_seed % (1 << n)).unwrap();
        let base = MeanCircuit::new(&amps, &ReferencePoint::zero(n)).unwrap().decomposition().unwrap();
        let moved = MeanCircuit::new(&amps, &y).unwrap().decomposition().unwrap();
        prop_assert!((base.z1 - moved.z1).norm() < 1e-12);
        prop_assert!((moved.z0 - amps.at(&y) / std::f64::consts::SQRT_2).norm() < 1e-10);
    }

    #[test]
    fn magnitudes_ignore_global_phase(amps in amplitude_function(4), phi in -3.0f64..3.0) {
        let y = ReferencePoint::zero(amps.n());
        let a = MeanCircuit::new(&amps, &y).unwrap().decomposition().unwrap();
        let b = MeanCircuit::new(&amps.with_global_phase(phi), &y).unwrap().decomposition().unwrap();
        prop_assert!((a.z1.norm() - b.z1.norm()).abs() < 1e-12);
        prop_assert!((a.z0.norm() - b.z0.norm()).abs() < 1e-12);
    }

    #[test]
    fn rotation_law_and_ratio_invariance(amps in amplitude_function(4)) {
        let n = amps.n();
        let y = qmean_core::suggest_reference(&amps);
        let mc = MeanCircuit::new(&amps, &y).unwrap();
        let amplifier = Amplifier::new(&mc.circuit, mc.layout).unwrap();
        let mut state = amplifier.start().unwrap();
        let d = decompose_s(&state, &mc.layout).unwrap();
        let plan = plan_amplification(d.target_prob).unwrap();
        let ratio_sq = d.z1.norm_sqr() / d.z0.norm_sqr();
        for j in 0..=2 * plan.j_opt {
            let p = state.probability_of(&[(mc.layout.omega(), false)]).unwrap();
            prop_assert!((p - plan.success_after(j)).abs() < 1e-10, "n={n} j={j}");
            let (p1, p0) = hypothesis_probs(&state, &mc.layout).unwrap();
            if p0 > 1e-12 {
                prop_assert!((p1 / p0 - ratio_sq).abs() < 1e-9);
            }
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
            amplifier.iterate(&mut state).unwrap();
        }
    }
}

#[test]
fn uniform_n2_amplifies_to_certainty() {
    let amps = AmplitudeFunction::uniform(2).unwrap();
    let mc = MeanCircuit::new(&amps, &ReferencePoint::zero(2)).unwrap();
    let state = amplify(&mc.circuit, &mc.layout, 1).unwrap();
    assert!((state.probability_of(&[(mc.layout.omega(), false)]).unwrap() - 1.0).abs() < 1e-10);
    let s = amplify(&mc.circuit, &mc.layout, 0).unwrap();
    assert_eq!(s, mc.s_state().unwrap());
    let once = qmean_core::grover_iterate(s, &mc.circuit, &mc.layout).unwrap();
    assert_eq!(once, state);
}

#[test]
fn plus_state_overshoots() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = AmplitudeFunction::from_real(1, &[h, h]).unwrap();
    let mc = MeanCircuit::new(&amps, &ReferencePoint::zero(1)).unwrap();
    for j in [0, 1] {
        let state = amplify(&mc.circuit, &mc.layout, j).unwrap();
        assert!((state.probability_of(&[(mc.layout.omega(), false)]).unwrap() - 0.5).abs() < 1e-10);
    }
}

#[test]
fn sampling_frequencies_follow_probabilities() {
    let shots = 100_000u64;
    for seed in 0..5u64 {
        let state = common::random_state(4, seed);
        let counts = state.sample_measurements(shots, 1000 + seed);
        assert_eq!(counts.values().sum::<u64>(), shots);
        for q in 0..4 {
            let p = state.probability_of(&[(q, true)]).unwrap();
            let hits: u64 = counts.iter().filter(|(i, _)| *i >> q & 1 == 1).map(|(_, c)| c).sum();
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            assert!((hits as f64 / shots as f64 - p).abs() <= 3.0 * sigma, "seed {seed} qubit {q}");
        }
    }
}

#[test]
fn sampling_is_independent_of_thread_count() {
    let state = common::random_state(10, 3);
    let shots = 300_000;
    let reference = state.sample_measurements(shots, 5);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let single = pool.install(|| state.sample_measurements(shots, 5));
    assert_eq!(reference, single);
}

#[test]
fn zero_branch_inputs_compile() {
    for values in [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.6, 0.0, 0.8], [0.0, 0.0, -1.0, 0.0]] {
        let amps = AmplitudeFunction::from_real(2, &values).unwrap();
        let prep = compile_state_prep(&amps).unwrap();
        let built = prepared_state(&prep.circuit, 2).unwrap();
        assert!(fidelity(&amps, &built) >= 1.0 - 1e-12, "{values:?}");
    }
    let s = QuantumState::basis_state(3, 0).unwrap();
    assert_eq!(s.norm_sqr(), 1.0);
}
