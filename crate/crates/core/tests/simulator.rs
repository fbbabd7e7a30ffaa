use std::f64::consts::{FRAC_PI_2, PI};

use polariton_core::linalg::{c, kron, max_abs, phase_distance, CMatrix, C64, I, ONE, ZERO};
use polariton_core::mappings::{fermion_spin_operators, ladder_creation, Pauli, RegisterLayout};
use polariton_core::simulator::*;
use proptest::prelude::*;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn qubits(n: usize) -> RegisterLayout {
    // n fermionic qubits plus a 2-qubit one-hot block that the tests ignore.
    RegisterLayout::qubit(n, 1).unwrap()
}

fn three_qubit_matrix(gates: &[Gate], theta: &[f64]) -> CMatrix {
    // Sites 0..3 of a 3-fermion-qubit register; the bosonic block is traced out by restriction.
    let layout = qubits(3);
    let full = Program::new(&layout, gates).unwrap().matrix(theta).unwrap();
    let bd = layout.boson_dim();
    CMatrix::from_fn(8, 8, |i, j| full[(i * bd, j * bd)])
}

fn random_state(layout: &RegisterLayout, rng: &mut ChaCha8Rng) -> StateVector {
    let mut amps: Vec<C64> = (0..layout.dim()).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let n = polariton_core::linalg::norm(&amps);
    amps.iter_mut().for_each(|z| *z /= n);
    StateVector::from_amps(layout, amps).unwrap()
}

fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

#[test]
fn givens_endpoints() {
    let l = qubits(2);
    let g = Gate::new(GateKind::GivensQubit, vec![0, 1], Param::slot(0));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = random_state(&l, &mut rng);
    let mut out = psi.clone();
    apply(&mut out, &g, &[0.0]).unwrap();
    assert!(max_abs(&CMatrix::from_vec(psi.dim(), 1, psi.amps.iter().zip(&out.amps).map(|(a, b)| a - b).collect())) < 1e-15);

    // |0_q 1_q'⟩ → |1_q 0_q'⟩ at θ = π/2.
    let mut s = StateVector::basis(&l, 0b01 * l.boson_dim() + 2).unwrap();
    apply(&mut s, &g, &[FRAC_PI_2]).unwrap();
    let target = 0b10 * l.boson_dim() + 2;
    assert!((s.amps[target] - ONE).norm() < 1e-15);

    // cos θ |01⟩ + sin θ |10⟩ at generic θ.
    let mut s = StateVector::basis(&l, 0b01 * l.boson_dim() + 2).unwrap();
    apply(&mut s, &g, &[0.3]).unwrap();
    assert!((s.amps[0b01 * l.boson_dim() + 2] - c(0.3f64.cos())).norm() < 1e-15);
    assert!((s.amps[target] - c(0.3f64.sin())).norm() < 1e-15);
}

#[test]
fn controlled_givens_idle_when_control_is_zero() {
    let l = qubits(3);
    let g = Gate::new(GateKind::ControlledGivensQubit, vec![0, 1, 2], Param::slot(0));
    let bd = l.boson_dim();
    for local in 0..4 {
        let mut s = StateVector::basis(&l, local * bd).unwrap();
        apply(&mut s, &g, &[0.77]).unwrap();
        assert!((s.amps[local * bd] - ONE).norm() < 1e-15);
    }
    assert!(matches!(
        apply(&mut StateVector::basis(&l, 0).unwrap(), &Gate::new(GateKind::ControlledGivensQubit, vec![0, 1, 1], Param::slot(0)), &[0.1]),
        Err(polariton_core::Error::Gate(_))
    ));
}

#[test]
fn controlled_givens_three_forms_agree() {
    for &theta in &[0.0, 0.31, -1.2, 2.5] {
        let native = three_qubit_matrix(&[Gate::new(GateKind::ControlledGivensQubit, vec![0, 1, 2], Param::slot(0))], &[theta]);
        // Oracle: |0⟩⟨0| ⊗ 1 + |1⟩⟨1| ⊗ exp(θ(|10⟩⟨01| − |01⟩⟨10|)).
        let mut g = CMatrix::zeros(4, 4);
        g[(2, 1)] = ONE;
        g[(1, 2)] = -ONE;
        let p0 = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let p1 = CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        let oracle = kron(&p0, &CMatrix::identity(4, 4)) + kron(&p1, &expm(&g.scale(theta)));
        let two_cx = three_qubit_matrix(&controlled_givens_two_cx(0, 1, 2, Param::slot(0)), &[theta]);
        let strings = three_qubit_matrix(&controlled_givens_pauli_strings(0, 1, 2, Param::slot(0)), &[theta]);
        assert!(max_abs(&(&native - &oracle)) < 1e-12);
        assert!(phase_distance(&two_cx, &oracle) < 1e-12, "two-CX form at θ={theta}");
        assert!(phase_distance(&strings, &oracle) < 1e-12, "Pauli-string form at θ={theta}");
        assert!(phase_distance(&two_cx, &strings) < 1e-12);
    }
    let tally = |gs: &[Gate]| gs.iter().filter(|g| g.kind.is_entangling_primitive()).count();
    assert_eq!(tally(&controlled_givens_two_cx(0, 1, 2, Param::slot(0))), 4);
    assert_eq!(tally(&controlled_givens_pauli_strings(0, 1, 2, Param::slot(0))), 6);
    let cg = Gate::new(GateKind::ControlledGivensQubit, vec![0, 1, 2], Param::slot(0));
    assert_eq!(entangling_cost(&cg), 4);
    assert_eq!(expand(&cg.clone().compiled()).len(), 6);
}

#[test]
fn compiled_flag_does_not_change_the_unitary() {
    let l = RegisterLayout::qubit(2, 3).unwrap();
    let native = Gate::new(GateKind::ControlledGivensQubit, vec![0, 3, 2], Param::slot(0));
    let a = gate_matrix(&native, &[0.4], &l).unwrap();
    let b = gate_matrix(&native.clone().compiled(), &[0.4], &l).unwrap();
    assert!(phase_distance(&b, &a) < 1e-12);
}

fn mode_layout(cut: usize) -> RegisterLayout {
    RegisterLayout::qumode(1, cut).unwrap()
}

#[test]
fn controlled_displacement_is_parity_conjugated_displacement() {
    let l = mode_layout(15);
    for &theta in &[0.1, 0.5, 1.0] {
        let cd = gate_matrix(&Gate::new(GateKind::ControlledDisplacement, vec![0, 1], Param::Fixed(theta)), &[], &l).unwrap();
        let cp = gate_matrix(&Gate::fixed(GateKind::ControlledParity, vec![0, 1]), &[], &l).unwrap();
        let d = gate_matrix(&Gate::new(GateKind::Displacement, vec![1], Param::Fixed(theta)), &[], &l).unwrap();
        let composed = &cp * d * cp.adjoint();
        assert!(max_abs(&(&cd - &composed)) < 1e-10, "θ={theta}");
        let compiled = gate_matrix(
            &Gate::new(GateKind::ControlledDisplacement, vec![0, 1], Param::Fixed(theta)).compiled(),
            &[],
            &l,
        )
        .unwrap();
        assert!(max_abs(&(&cd - &compiled)) < 1e-10);
        // Oracle: dense exponential of θ Z ⊗ (b − b†).
        let b = ladder_creation(15).adjoint();
        let oracle = expm(&kron(&Pauli::Z.matrix(), &(&b - b.adjoint())).scale(theta));
        assert!(max_abs(&(&cd - &oracle)) < 1e-10);
    }
    let cd = Gate::new(GateKind::ControlledDisplacement, vec![0, 1], Param::slot(0));
    assert_eq!(entangling_cost(&cd), 2);
}

#[test]
fn controlled_rotation_conjugates_b_into_iz_b() {
    let l = mode_layout(15);
    let cr = gate_matrix(&Gate::new(GateKind::ControlledRotation, vec![0, 1], Param::Fixed(PI)), &[], &l).unwrap();
    let b = ladder_creation(15).adjoint();
    let lhs = &cr * kron(&CMatrix::identity(2, 2), &b) * cr.adjoint();
    let rhs = kron(&Pauli::Z.matrix(), &b).map(|z| z * I);
    // Compare on levels 0..14 of the mode.
    for i in 0..32 {
        for j in 0..32 {
            if i % 16 == 15 || j % 16 == 15 {
                continue;
            }
            assert!((lhs[(i, j)] - rhs[(i, j)]).norm() < 1e-12);
        }
    }
    // The parity primitive equals CR(π) up to the local phase exp(−iπ n / 2).
    let cp = gate_matrix(&Gate::fixed(GateKind::ControlledParity, vec![0, 1]), &[], &l).unwrap();
    let local = kron(&CMatrix::identity(2, 2), &CMatrix::from_fn(16, 16, |i, j| if i == j { C64::from_polar(1.0, -FRAC_PI_2 * i as f64) } else { ZERO }));
    assert!(max_abs(&(&local * &cp - &cr)) < 1e-12);
}

#[test]
fn displacement_on_vacuum_is_a_coherent_state() {
    let l = mode_layout(15);
    let theta = 0.5;
    let mut s = StateVector::product(&l, 0, 0).unwrap();
    let warn = apply_displacement(&mut s, theta).unwrap();
    assert!(warn.is_none());
    let b = ladder_creation(15).adjoint();
    let oracle = expm(&(&b - b.adjoint()).scale(theta));
    let mut fact = 1.0;
    let mut mean = 0.0;
    for n in 0..16 {
        if n > 0 {
            fact *= n as f64;
        }
        let z = s.amps[n];
        assert!((z - oracle[(n, 0)]).norm() < 1e-10);
        let analytic = (-theta * theta / 2.0).exp() * (-theta).powi(n as i32) / fact.sqrt();
        assert!((z.re - analytic).abs() < 1e-10, "n={n}");
        mean += n as f64 * z.norm_sqr();
    }
    assert!((mean - theta * theta).abs() < 1e-6);

    let mut s = StateVector::product(&l, 0, 0).unwrap();
    apply_displacement(&mut s, 0.0).unwrap();
    assert!((s.amps[0] - ONE).norm() < 1e-15);
    let mut s = StateVector::product(&l, 0, 0).unwrap();
    let warn = apply_displacement(&mut s, 3.0).unwrap();
    assert!(warn.is_some_and(|w| w.population > 1e-8));
    let mut q = StateVector::product(&RegisterLayout::qubit(1, 3).unwrap(), 0, 0).unwrap();
    assert!(apply_displacement(&mut q, 0.1).is_err());
}

#[test]
fn fabric_pair_convention() {
    // |HF⟩ = spin orbitals 0, 1 occupied → cos θ |HF⟩ + sin θ |both electrons in orbital 1⟩.
    let l = RegisterLayout::qudit(4, 1).unwrap();
    let mut s = StateVector::product(&l, 0b0011, 0).unwrap();
    apply_fabric_block(&mut s, FabricKind::Pair, 0, 0.3).unwrap();
    assert!((s.amps[l.encode(0b0011, 0).unwrap()] - c(0.3f64.cos())).norm() < 1e-14);
    assert!((s.amps[l.encode(0b1100, 0).unwrap()] - c(0.3f64.sin())).norm() < 1e-14);
    let mut s = StateVector::product(&l, 0b0011, 0).unwrap();
    apply_fabric_block(&mut s, FabricKind::Single, 0, 0.0).unwrap();
    assert!((s.amps[l.encode(0b0011, 0).unwrap()] - ONE).norm() < 1e-15);
    let bad = Gate::new(GateKind::FabricPair, vec![1, 2, 3, 4], Param::Fixed(0.1));
    assert!(apply(&mut s, &bad, &[]).is_err());
}

#[test]
fn fabric_generators_match_excitation_exponentials() {
    // Build the generators from JW ladder matrices independently and exponentiate densely.
    let a = polariton_core::mappings::jw_creation_matrices(4);
    let ad: Vec<CMatrix> = a.iter().map(|m| m.adjoint()).collect();
    let t = &a[2] * &a[3] * &ad[1] * &ad[0];
    let pair = &t - t.adjoint();
    let mut single = CMatrix::zeros(16, 16);
    for s in 0..2 {
        let t = &a[2 + s] * &ad[s];
        single += &t - t.adjoint();
    }
    let l = RegisterLayout::qudit(4, 1).unwrap();
    for (kind, g) in [(GateKind::FabricPair, pair), (GateKind::FabricSingle, single)] {
        let u = gate_matrix(&Gate::new(kind, vec![0, 1, 2, 3], Param::Fixed(0.45)), &[], &l).unwrap();
        let oracle = kron(&expm(&g.scale(0.45)), &CMatrix::identity(2, 2));
        assert!(max_abs(&(u - oracle)) < 1e-12);
    }
}

#[test]
fn qudit_givens_at_two_levels_is_ry_of_twice_the_angle() {
    let l = RegisterLayout::qudit(1, 1).unwrap();
    let lq = qubits(2);
    for &theta in &[0.2, -0.9] {
        let u = gate_matrix(&Gate::new(GateKind::GivensQudit { level: 0 }, vec![1], Param::Fixed(theta)), &[], &l).unwrap();
        let local = CMatrix::from_fn(2, 2, |i, j| u[(i, j)]);
        let ry = gate_matrix(&Gate::new(GateKind::Ry, vec![0], Param::Fixed(2.0 * theta)), &[], &lq).unwrap();
        let bd = lq.boson_dim() * 2;
        let ry_local = CMatrix::from_fn(2, 2, |i, j| ry[(i * bd, j * bd)]);
        assert!(max_abs(&(local - ry_local)) < 1e-14);
    }
    // |l⟩ → cos θ |l⟩ + sin θ |l+1⟩ on a 4-level qudit.
    let l4 = RegisterLayout::qudit(1, 3).unwrap();
    let mut s = StateVector::product(&l4, 0, 1).unwrap();
    apply(&mut s, &Gate::new(GateKind::GivensQudit { level: 1 }, vec![1], Param::Fixed(0.6)), &[]).unwrap();
    assert!((s.amps[1] - c(0.6f64.cos())).norm() < 1e-15);
    assert!((s.amps[2] - c(0.6f64.sin())).norm() < 1e-15);
}

#[test]
fn shared_spin_pair_commutes_with_spin() {
    // Same-orbital ↑/↓ controls with one shared angle commute with Ŝ² and Ŝ_z.
    let l = RegisterLayout::qudit(4, 3).unwrap();
    let spin = fermion_spin_operators(4);
    let lift = |m: &CMatrix| kron(m, &CMatrix::identity(4, 4));
    let (s2, sz) = (lift(&spin.s_squared), lift(&spin.s_z));
    for p in 0..2 {
        let gates = [
            Gate::new(GateKind::ControlledGivensQudit { level: 1 }, vec![2 * p, 4], Param::slot(0)),
            Gate::new(GateKind::ControlledGivensQudit { level: 1 }, vec![2 * p + 1, 4], Param::slot(0)),
        ];
        let u = Program::new(&l, &gates).unwrap().matrix(&[0.83]).unwrap();
        assert!(max_abs(&(&u * &s2 - &s2 * &u)) < 1e-10);
        assert!(max_abs(&(&u * &sz - &sz * &u)) < 1e-10);
        let split = [gates[0].clone(), Gate { param: Param::slot(1), ..gates[1].clone() }];
        let u = Program::new(&l, &split).unwrap().matrix(&[0.83, -0.2]).unwrap();
        assert!(max_abs(&(&u * &s2 - &s2 * &u)) > 1e-3);
    }
}

fn all_gates(l: &RegisterLayout) -> Vec<Gate> {
    let mut g = vec![
        Gate::new(GateKind::FabricSingle, vec![0, 1, 2, 3], Param::slot(0)),
        Gate::new(GateKind::FabricPair, vec![0, 1, 2, 3], Param::slot(1)),
        Gate::new(GateKind::GivensQubit, vec![1, 2], Param::slot(2)),
        Gate::new(GateKind::Cry, vec![0, 3], Param::slot(3)),
    ];
    match l.platform {
        polariton_core::mappings::Platform::Qubit => {
            g.push(Gate::new(GateKind::ControlledGivensQubit, vec![0, 5, 4], Param::slot(4)));
            g.push(Gate::new(GateKind::ControlledGivensQubit, vec![2, 6, 5], Param::slot(4)).compiled());
        }
        polariton_core::mappings::Platform::Qudit => {
            g.push(Gate::new(GateKind::ControlledGivensQudit { level: 0 }, vec![0, 4], Param::slot(4)));
            g.push(Gate::new(GateKind::GivensQudit { level: 2 }, vec![4], Param::slot(4)));
        }
        polariton_core::mappings::Platform::Qumode => {
            g.push(Gate::new(GateKind::ControlledDisplacement, vec![0, 4], Param::slot(4)));
            g.push(Gate::new(GateKind::ControlledDisplacement, vec![3, 4], Param::slot(4)).compiled());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gates_are_norm_preserving_and_linear(seed in 0u64..1000, t in proptest::collection::vec(-3.0f64..3.0, 5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for l in [RegisterLayout::qubit(4, 3).unwrap(), RegisterLayout::qudit(4, 3).unwrap(), RegisterLayout::qumode(4, 15).unwrap()] {
            let a = random_state(&l, &mut rng);
            let b = random_state(&l, &mut rng);
            let (alpha, beta) = (C64::new(0.6, 0.1), C64::new(-0.3, 0.7));
            for g in all_gates(&l) {
                let prog = Program::new(&l, std::slice::from_ref(&g)).unwrap();
                let mut ua = a.clone();
                let mut ub = b.clone();
                prog.run(&mut ua, &t).unwrap();
                prog.run(&mut ub, &t).unwrap();
                prop_assert!((ua.norm() - 1.0).abs() < 1e-10);
                let mut mix = a.clone();
                for (m, (x, y)) in mix.amps.iter_mut().zip(a.amps.iter().zip(&b.amps)) {
                    *m = alpha * x + beta * y;
                }
                prog.run(&mut mix, &t).unwrap();
                let err = mix.amps.iter().zip(ua.amps.iter().zip(&ub.amps)).map(|(m, (x, y))| (m - (alpha * x + beta * y)).norm()).fold(0.0, f64::max);
                prop_assert!(err < 1e-12);
            }
        }
    }

    #[test]
    fn fabric_blocks_preserve_number_and_spin(seed in 0u64..1000, theta in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = RegisterLayout::qudit(4, 1).unwrap();
        let spin = fermion_spin_operators(4);
        let lift = |m: &CMatrix| kron(m, &CMatrix::identity(2, 2));
        let ops = [lift(&spin.number), lift(&spin.s_z), lift(&spin.s_squared)];
        for kind in [FabricKind::Single, FabricKind::Pair] {
            let psi = random_state(&l, &mut rng);
            let mut out = psi.clone();
            apply_fabric_block(&mut out, kind, 0, theta).unwrap();
            for op in &ops {
                prop_assert!((psi.expectation(op) - out.expectation(op)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn one_hot_register_never_leaks(t in proptest::collection::vec(-3.0f64..3.0, 5)) {
        let l = RegisterLayout::qubit(4, 3).unwrap();
        let mut s = StateVector::product(&l, 0b0011, 0).unwrap();
        let mut gates = all_gates(&l);
        for q in 0..4 {
            for n in 0..3 {
                gates.push(Gate::new(GateKind::ControlledGivensQubit, vec![q, 4 + n + 1, 4 + n], Param::slot(4)));
            }
        }
        Program::new(&l, &gates).unwrap().run(&mut s, &t).unwrap();
        prop_assert!(s.leakage() < 1e-12);
    }
}

#[test]
fn gate_unitaries_are_unitary() {
    let l = RegisterLayout::qumode(4, 15).unwrap();
    for g in all_gates(&l) {
        let u = gate_matrix(&g, &[0.3, -0.7, 1.1, 0.4, 0.9], &l).unwrap();
        let d = u.nrows();
        assert!(max_abs(&(u.adjoint() * &u - CMatrix::identity(d, d))) < 1e-12, "{:?}", g.kind);
    }
}
