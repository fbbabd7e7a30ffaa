use std::f64::consts::PI;

use polariton_core::ansatz::*;
use polariton_core::integrals::h2_sto3g;
use polariton_core::linalg::{inner, CMatrix, C64, ZERO};
use polariton_core::mappings::{assemble_platform_hamiltonian, Platform};
use polariton_core::qedfci::{polaritonic_states, CavitySpec, OperatorMatrix};
use polariton_core::savqe::*;
use polariton_core::simulator::StateVector;
use polariton_core::Error;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const R_EQ: f64 = 0.74;

fn problem(p: Platform, lambda: f64, layers: usize) -> PolaritonProblem {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let cav = CavitySpec::new(1.0, lambda, 3).unwrap();
    PolaritonProblem::new(&mi, &cav, p, layers, 15, &EnsembleSpec::default()).unwrap()
}

fn random_theta(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| PI * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

fn quick() -> OptimizerOptions {
    OptimizerOptions { restarts: 1, ..Default::default() }
}

#[test]
fn adjoint_gradient_matches_richardson_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in Platform::ALL {
        let obj = problem(p, 0.1, 2).objective;
        let theta = random_theta(&mut rng, obj.n_params());
        let (e, g) = obj.energy_and_gradient(&theta).unwrap();
        assert!((e - obj.energy(&theta).unwrap()).abs() < 1e-12);
        let central = |i: usize, h: f64| {
            let (mut a, mut b) = (theta.clone(), theta.clone());
            a[i] += h;
            b[i] -= h;
            (obj.energy(&a).unwrap() - obj.energy(&b).unwrap()) / (2.0 * h)
        };
        for i in 0..theta.len() {
            let (d1, d2) = (central(i, 1e-3), central(i, 5e-4));
            let richardson = (4.0 * d2 - d1) / 3.0;
            assert!((richardson - g[i]).abs() < 1e-8, "{p} slot {i}: {richardson} vs {}", g[i]);
            assert!((d2 - g[i]).abs() <= (d1 - g[i]).abs() + 1e-10);
        }
    }
}

#[test]
fn trial_states_stay_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in Platform::ALL {
        let obj = problem(p, 0.2, 3).objective;
        for _ in 0..20 {
            let states = obj.states(&random_theta(&mut rng, obj.n_params())).unwrap();
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((a.inner(b) - C64::new(want, 0.0)).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn ensemble_energy_is_bounded_by_the_exact_ensemble() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in Platform::ALL {
        let prob = problem(p, 0.25, 2);
        let cutoff = prob.circuit.layout.photon_cutoff;
        let exact = polaritonic_states(&mi, &CavitySpec::new(1.0, 0.25, cutoff).unwrap(), 3).unwrap().2.ensemble_energy(3);
        for _ in 0..30 {
            let e = prob.objective.energy(&random_theta(&mut rng, prob.objective.n_params())).unwrap();
            assert!(e >= exact - 1e-10, "{p}: {e} < {exact}");
        }
    }
}

#[test]
fn subspace_trace_and_interlacing() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for p in Platform::ALL {
        let obj = problem(p, 0.1, 2).objective;
        for _ in 0..10 {
            let theta = random_theta(&mut rng, obj.n_params());
            let r = subspace_resolve(&obj, &theta, None).unwrap();
            let diag: Vec<f64> = (0..3).map(|k| r.subspace[(k, k)].re).collect();
            let trace: f64 = diag.iter().sum();
            assert!((trace - 3.0 * obj.energy(&theta).unwrap()).abs() < 1e-10);
            assert!(r.energies.windows(2).all(|w| w[0] <= w[1]));
            let (lo, hi) = diag.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            assert!(r.energies[0] <= lo + 1e-12 && r.energies[2] >= hi - 1e-12);
            for (k, s) in r.states.iter().enumerate() {
                assert!((obj.hamiltonian.expectation(&s.amps) - r.energies[k]).abs() < 1e-10);
                for t in &r.states[k + 1..] {
                    assert!(s.inner(t).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn decoupled_identity_circuit() {
    for p in Platform::ALL {
        let obj = problem(p, 0.0, 1).objective;
        let zero = vec![0.0; obj.n_params()];
        let e: Vec<f64> = obj.states(&zero).unwrap().iter().map(|s| obj.hamiltonian.expectation(&s.amps)).collect();
        assert!((e[2] - e[0] - 1.0).abs() < 1e-12);
        assert!((obj.energy(&zero).unwrap() - e.iter().sum::<f64>() / 3.0).abs() < 1e-12);
        // A diagonal subspace matrix resolves to a permutation.
        let r = subspace_resolve(&obj, &zero, None).unwrap();
        for k in 0..3 {
            let col: Vec<f64> = (0..3).map(|i| r.rotation[(i, k)].norm()).collect();
            assert_eq!(col.iter().filter(|&&x| (x - 1.0).abs() < 1e-12).count(), 1, "{col:?}");
        }
    }
}

#[test]
fn constant_shift_moves_every_energy_and_not_the_optimum() {
    let prob = problem(Platform::Qudit, 0.1, 1);
    let obj = &prob.objective;
    let shift = 2.5;
    let moved = Objective::new(&prob.circuit, obj.hamiltonian.shifted(shift), obj.initial.clone(), obj.weights.clone()).unwrap();
    let theta: Vec<f64> = (0..obj.n_params()).map(|i| 0.3 * (i as f64).cos()).collect();
    assert!((moved.energy(&theta).unwrap() - obj.energy(&theta).unwrap() - shift).abs() < 1e-12);
    let (a, b) = (subspace_resolve(obj, &theta, None).unwrap(), subspace_resolve(&moved, &theta, None).unwrap());
    for (x, y) in a.energies.iter().zip(&b.energies) {
        assert!((y - x - shift).abs() < 1e-12);
    }
    let (ta, ea, _) = minimize(obj, None, &quick()).unwrap();
    let (tb, eb, _) = minimize(&moved, None, &quick()).unwrap();
    assert!((eb - ea - shift).abs() < 1e-9);
    assert!(ta.iter().zip(&tb).all(|(x, y)| (x - y).abs() < 1e-4), "{ta:?} vs {tb:?}");
}

#[test]
fn decoding_preserves_inner_products_and_flags_leakage() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in Platform::ALL {
        let prob = problem(p, 0.1, 1);
        let layout = &prob.circuit.layout;
        let emb = layout.hybrid_embedding(&prob.basis).unwrap();
        let random_physical = |rng: &mut ChaCha8Rng| {
            let mut amps = vec![ZERO; layout.dim()];
            for &i in &emb {
                amps[i] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
            let n = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            amps.iter_mut().for_each(|z| *z /= n);
            StateVector::from_amps(layout, amps).unwrap()
        };
        for _ in 0..10 {
            let (x, y) = (random_physical(&mut rng), random_physical(&mut rng));
            let (dx, dy) = (decode_to_hybrid(&x, &prob.basis).unwrap(), decode_to_hybrid(&y, &prob.basis).unwrap());
            assert!((inner(&dx.amps, &dy.amps) - x.inner(&y)).norm() < 1e-14);
            assert_eq!(dx.truncated, 0.0);
        }
        let a = &prepare_initial_states(layout).unwrap()[0];
        let d = decode_to_hybrid(a, &prob.basis).unwrap();
        let hf = prob.basis.index(prob.basis.det_index(prob.basis.hartree_fock_det()).unwrap(), 0);
        assert_eq!(d.amps[hf], C64::new(1.0, 0.0));
        assert_eq!(d.amps.iter().filter(|z| z.norm() > 0.0).count(), 1);
    }
    // Three electrons on a two-electron basis is leakage.
    let layout = platform_layout(Platform::Qudit, 3, 15).unwrap();
    let prob = problem(Platform::Qudit, 0.1, 1);
    let bad = StateVector::product(&layout, 0b0111, 0).unwrap();
    assert!(matches!(decode_to_hybrid(&bad, &prob.basis), Err(Error::Leakage(_))));
    // A qubit register state outside the one-hot code is leakage.
    let ql = platform_layout(Platform::Qubit, 3, 15).unwrap();
    let qprob = problem(Platform::Qubit, 0.1, 1);
    let off_code = StateVector::basis(&ql, ql.fermion_index(0b0011) * ql.boson_dim()).unwrap();
    assert!(matches!(decode_to_hybrid(&off_code, &qprob.basis), Err(Error::Leakage(_))));
    // Qumode levels above the oracle cutoff are reported, not rejected.
    let mode = platform_layout(Platform::Qumode, 3, 15).unwrap();
    let mprob = problem(Platform::Qumode, 0.1, 1);
    let high = StateVector::product(&mode, 0b0011, 5).unwrap();
    assert_eq!(decode_to_hybrid(&high, &mprob.basis).unwrap().truncated, 1.0);
}

#[test]
fn exact_states_have_zero_diagnostics() {
    for p in Platform::ALL {
        let prob = problem(p, 0.15, 1);
        let states = prob.reference_states().unwrap();
        let result = SAVQEResult {
            platform: p,
            n_layers: 1,
            params: vec![],
            energy_sa: prob.oracle.ensemble_energy(3),
            subspace: CMatrix::from_diagonal(&nalgebra::DVector::from_vec(prob.oracle.energies[..3].iter().map(|&e| C64::new(e, 0.0)).collect())),
            energies: prob.oracle.energies[..3].to_vec(),
            states,
            photon_numbers: vec![0.0; 3],
            trace: minimize(&prob.objective, None, &OptimizerOptions { restarts: 0, max_iterations: 1, ..Default::default() }).unwrap().2,
        };
        let d = diagnostics(&result, &prob.oracle, &prob.basis).unwrap();
        assert!(d.delta_e_sa < 1e-14 && d.delta_e12.unwrap() < 1e-14);
        assert!(d.delta_e.iter().chain(&d.infidelities).all(|&x| x < 1e-12), "{d:?}");
        let mut short = result.clone();
        short.states.pop();
        assert!(diagnostics(&short, &prob.oracle, &prob.basis).is_err());
    }
}

#[test]
fn single_layer_is_exact_without_coupling() {
    for p in Platform::ALL {
        let (res, diag) = problem(p, 0.0, 1).solve(None, &OptimizerOptions::default()).unwrap();
        assert!(diag.delta_e_sa < 1e-6, "{p}: {:e}", diag.delta_e_sa);
        assert!(diag.infidelities.iter().all(|&x| (0.0..=1.0).contains(&x)));
        for (n, want) in res.photon_numbers.iter().zip([0.0, 0.0, 1.0]) {
            assert!((n - want).abs() < 1e-8, "{p}: {:?}", res.photon_numbers);
        }
        let gram = res.states.iter().map(|s| res.states.iter().map(|t| s.inner(t)).collect::<Vec<_>>()).collect::<Vec<_>>();
        for (i, row) in gram.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                assert!((z - C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn optimizer_is_deterministic_and_tracks_the_incumbent() {
    let prob = problem(Platform::Qumode, 0.1, 2);
    let opts = OptimizerOptions { restarts: 3, seed: 42, ..Default::default() };
    let (a, _) = prob.solve(None, &opts).unwrap();
    let (b, _) = prob.solve(None, &opts).unwrap();
    assert_eq!(a.params, b.params);
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.trace.runs, 4);
    assert!(a.trace.best_so_far.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(*a.trace.best_so_far.last().unwrap(), a.energy_sa);
    let c = prob.solve(None, &OptimizerOptions { seed: 43, ..opts }).unwrap().0;
    assert_ne!(a.trace.run_energies[1], c.trace.run_energies[1]);
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let prob = problem(Platform::Qudit, 0.1, 2);
    let opts = OptimizerOptions { restarts: 2, max_iterations: 1, ..Default::default() };
    let (res, diag) = prob.solve(None, &opts).unwrap();
    assert!(!res.trace.converged);
    assert!(res.energy_sa.is_finite() && diag.delta_e_sa > 0.0);
}

#[test]
fn invalid_objectives_are_rejected() {
    let prob = problem(Platform::Qudit, 0.1, 1);
    let c = &prob.circuit;
    let h = prob.objective.hamiltonian.clone();
    let init = prob.objective.initial.clone();
    assert!(Objective::new(c, h.clone(), init.clone(), vec![0.5, 0.5, 0.5]).is_err());
    assert!(Objective::new(c, h.clone(), init.clone(), vec![0.5, 0.5]).is_err());
    let dup = vec![init[0].clone(), init[0].clone()];
    assert!(matches!(Objective::new(c, h.clone(), dup, vec![0.5, 0.5]), Err(Error::Domain(_))));
    let mut m = CMatrix::zeros(64, 64);
    m[(0, 1)] = C64::new(1.0, 0.0);
    assert!(matches!(SparseHamiltonian::from_operator(&OperatorMatrix::new(m)), Err(Error::Domain(_))));
    assert!(prob.objective.energy(&[0.0]).is_err());
    assert!(minimize(&prob.objective, Some(&[0.0]), &quick()).is_err());
}

#[test]
fn sa_energy_matches_the_objective() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let cav = CavitySpec::new(1.0, 0.05, 3).unwrap();
    let layout = platform_layout(Platform::Qubit, 3, 15).unwrap();
    let circuit = build_ansatz(Platform::Qubit, 1, &layout).unwrap();
    let h = assemble_platform_hamiltonian(&mi, &cav, &layout).unwrap();
    let init = prepare_initial_states(&layout).unwrap().to_vec();
    let theta: Vec<f64> = (0..circuit.n_params()).map(|i| 0.2 * i as f64).collect();
    let e = sa_energy(&circuit, &theta, &h, &init, &[1.0 / 3.0; 3]).unwrap();
    let dense: f64 = init.iter().map(|s| circuit.run(s, &theta).unwrap().expectation(&h.matrix).re).sum::<f64>() / 3.0;
    assert!((e - dense).abs() < 1e-12);
}
