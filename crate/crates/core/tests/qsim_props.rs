use proptest::prelude::*;
use qdiscocirc::linalg::{Matrix, C64};
use qdiscocirc::qsim::{
    build_swap_test, hoeffding_shots, sample_from, Gate, Input, QuantumCircuit, Simulator,
};

const QUBITS: usize = 3;

fn gate() -> impl Strategy<Value = Gate> {
    let q = 0..QUBITS;
    let pair = (0..QUBITS, 0..QUBITS).prop_filter("distinct", |(a, b)| a != b);
    let angle = -3.2f64..3.2;
    prop_oneof![
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::S),
        (q.clone(), angle.clone()).prop_map(|(target, theta)| Gate::Rz { target, theta }),
        (q.clone(), angle.clone(), angle.clone(), angle.clone()).prop_map(
            |(target, theta, phi, lambda)| Gate::U3 {
                target,
                theta,
                phi,
                lambda
            }
        ),
        pair.clone()
            .prop_map(|(control, target)| Gate::Cx { control, target }),
        (pair.clone(), angle).prop_map(|((control, target), theta)| Gate::Crz {
            control,
            target,
            theta
        }),
        pair.clone().prop_map(|(a, b)| Gate::Swap(a, b)),
        Just(Gate::Ccx {
            controls: [0, 1],
            target: 2
        }),
        Just(Gate::Cswap {
            control: 2,
            a: 0,
            b: 1
        }),
    ]
}

fn circuit() -> impl Strategy<Value = QuantumCircuit> {
    prop::collection::vec(gate(), 0..12).prop_map(|gs| {
        let mut qc = QuantumCircuit::new(QUBITS);
        qc.extend(gs);
        qc
    })
}

fn dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn unitary_columns_match_simulation(qc in circuit(), col in 0usize..1 << QUBITS) {
        let u = qc.unitary();
        prop_assert!(u.unitarity_defect() < 1e-10);
        let st = Simulator::default().run(&qc, &Input::Basis(col)).unwrap();
        let column: Vec<C64> = (0..u.rows()).map(|r| u[(r, col)]).collect();
        prop_assert!(dev(st.amplitudes().unwrap(), &column) < 1e-10);
    }

    #[test]
    fn adjoint_inverts(qc in circuit()) {
        let u = qc.unitary().mul(&qc.adjoint().unitary());
        prop_assert!(u.sub(&Matrix::identity(1 << QUBITS)).max_abs() < 1e-10);
    }

    #[test]
    fn lookup_is_an_involution(table in prop::collection::vec(0u64..4, 1..5), input in 0usize..16) {
        let mut qc = QuantumCircuit::new(4);
        let g = Gate::Lookup { address: vec![0, 1], target: vec![2, 3], table };
        qc.push(g.clone()).push(g);
        let st = Simulator::default().run(&qc, &Input::Basis(input)).unwrap();
        prop_assert!((st.probabilities()[input] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_test_zero_probability_is_at_least_half(a in circuit(), b in circuit()) {
        let p = build_swap_test(&a, &b).unwrap().zero_probability(&Simulator::default()).unwrap();
        prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&p));
    }

    #[test]
    fn shots_meet_the_hoeffding_bound(eps in 0.01f64..0.9, delta in 0.01f64..0.9, k in 1usize..20) {
        let n = hoeffding_shots(eps, delta, k).unwrap();
        let need = 8.0 / (eps * eps) * (2.0 * k as f64 / delta).ln();
        prop_assert!(n as f64 >= need - 1e-6 && (n as f64) < need + 1.0);
        prop_assert!(hoeffding_shots(eps / 2.0, delta, k).unwrap() >= n);
    }

    #[test]
    fn sampling_is_seed_deterministic(p in 0.0f64..=1.0, shots in 1u64..2000, seed in any::<u64>()) {
        let a = sample_from(p, shots, seed);
        prop_assert_eq!(&a, &sample_from(p, shots, seed));
        prop_assert!(a.zeros <= shots);
        prop_assert!((a.estimate - (2.0 * a.zeros as f64 / shots as f64 - 1.0)).abs() < 1e-15);
    }
}
