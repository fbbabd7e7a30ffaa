use polariton_core::integrals::h2_sto3g;
use polariton_core::linalg::{hermitian_eigen, max_abs, CMatrix};
use polariton_core::mappings::*;
use polariton_core::qedfci::{build_hybrid_basis, diagonalize, pauli_fierz_system, CavitySpec, OperatorMatrix};

const R_EQ: f64 = 0.74;

fn lowest(h: &CMatrix, k: usize) -> Vec<f64> {
    hermitian_eigen(h).0[..k].to_vec()
}

#[test]
fn jordan_wigner_canonical_anticommutation() {
    for n in 1..=6 {
        let a = jw_creation_matrices(n);
        let id = CMatrix::identity(1 << n, 1 << n);
        for p in 0..n {
            for q in 0..n {
                let cc = &a[p] * &a[q] + &a[q] * &a[p];
                assert!(max_abs(&cc) < 1e-14);
                let ca = a[p].adjoint() * &a[q] + &a[q] * a[p].adjoint();
                let want = if p == q { id.clone() } else { CMatrix::zeros(1 << n, 1 << n) };
                assert!(max_abs(&(ca - want)) < 1e-14, "n={n} p={p} q={q}");
            }
            let num = &a[p] * a[p].adjoint();
            assert!((0..1 << n).all(|i| (0..1 << n).all(|j| i == j || num[(i, j)].norm() == 0.0)));
            assert!((0..1 << n).all(|i| num[(i, i)].re == 0.0 || num[(i, i)].re == 1.0));
        }
    }
    assert!(jw_creation(4, 4).is_err());
}

#[test]
fn every_boson_map_is_the_truncated_ladder_on_its_code_space() {
    for n_b_max in 1..=4 {
        let ladder = ladder_creation(n_b_max);
        let one_hot = boson_creation_qubit(n_b_max).unwrap().to_matrix();
        assert!(max_abs(&(restrict_one_hot(&one_hot, n_b_max + 1) - &ladder)) == 0.0);
        let qudit = boson_creation_qudit(n_b_max + 1).unwrap();
        assert!(max_abs(&(&qudit - &ladder)) < 1e-15);
        // The Fock mode at a larger cutoff agrees on the shared levels.
        let (mode, _) = boson_ops_qumode(15).unwrap();
        let shared = CMatrix::from_fn(n_b_max + 1, n_b_max + 1, |i, j| mode[(i, j)]);
        assert!(max_abs(&(shared - &ladder)) < 1e-15);
    }
    // b†|3⟩ = 2|4⟩ on the mode.
    let (mode, b) = boson_ops_qumode(15).unwrap();
    assert!((mode[(4, 3)].re - 2.0).abs() < 1e-15);
    let comm = &b * &mode - &mode * &b;
    for i in 0..16 {
        let want = if i < 15 { 1.0 } else { -15.0 };
        assert!((comm[(i, i)].re - want).abs() < 1e-12);
    }
}

#[test]
fn qudit_register_reproduces_the_oracle_spectrum() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let cav = CavitySpec::new(1.0, 0.05, 3).unwrap();
    let layout = RegisterLayout::qudit(4, 3).unwrap();
    let h = assemble_platform_hamiltonian(&mi, &cav, &layout).unwrap();
    let (basis, oracle) = pauli_fierz_system(&mi, &cav).unwrap();
    // Restricted to the two-electron sector, every eigenvalue matches.
    let emb = layout.hybrid_embedding(&basis).unwrap();
    let sector = restrict(&h.matrix, &emb);
    assert!(max_abs(&(&sector - &oracle.matrix)) < 1e-12);
    let want = diagonalize(&oracle, 3).unwrap().energies;
    let got = diagonalize(&OperatorMatrix::new(sector), 3).unwrap().energies;
    for (a, b) in got.iter().zip(&want) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn qubit_register_reproduces_the_oracle_on_the_physical_subspace() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let cav = CavitySpec::new(1.0, 0.08, 3).unwrap();
    let layout = RegisterLayout::qubit(4, 3).unwrap();
    assert_eq!(layout.n_sites(), 8);
    let h = assemble_platform_hamiltonian(&mi, &cav, &layout).unwrap();
    let (basis, oracle) = pauli_fierz_system(&mi, &cav).unwrap();
    let emb = layout.hybrid_embedding(&basis).unwrap();
    let projected = restrict(&h.matrix, &emb);
    let a = lowest(&projected, 6);
    let b = lowest(&oracle.matrix, 6);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }
    // The physical block is invariant: nothing couples it to non-one-hot states.
    for &i in &emb {
        for j in 0..layout.dim() {
            if layout.decode(j).1.is_none() {
                assert!(h.matrix[(i, j)].norm() < 1e-14);
            }
        }
    }
}

#[test]
fn qumode_register_without_coupling_is_a_full_ladder() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let layout = RegisterLayout::qumode(4, 15).unwrap();
    let cav = CavitySpec::new(1.0, 0.0, 15).unwrap();
    let h = assemble_platform_hamiltonian(&mi, &cav, &layout).unwrap();
    let basis = build_hybrid_basis(2, 2, 15).unwrap();
    let sector = restrict(&h.matrix, &layout.hybrid_embedding(&basis).unwrap());
    let (e_fci, _) = hermitian_eigen(&restrict(&sector, &(0..6).map(|d| d * 16).collect::<Vec<_>>()));
    let mut expected: Vec<f64> = e_fci.iter().flat_map(|e| (0..16).map(move |n| e + n as f64)).collect();
    expected.sort_by(f64::total_cmp);
    let (got, _) = hermitian_eigen(&sector);
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn platform_hamiltonians_are_spin_free() {
    let (mi, _) = h2_sto3g(0.9, 0.4).unwrap();
    for layout in [RegisterLayout::qubit(4, 3).unwrap(), RegisterLayout::qudit(4, 3).unwrap(), RegisterLayout::qumode(4, 15).unwrap()] {
        let cav = CavitySpec::new(1.0, 0.2, layout.photon_cutoff).unwrap();
        let h = assemble_platform_hamiltonian(&mi, &cav, &layout).unwrap().matrix;
        let obs = platform_observables(&layout).unwrap();
        for op in [&obs.s_z, &obs.s_squared, &obs.electron_number] {
            assert!(max_abs(&(&h * op - op * &h)) < 1e-10, "{}", layout.platform);
        }
    }
}

#[test]
fn mismatched_layouts_are_rejected() {
    let (mi, _) = h2_sto3g(R_EQ, 0.0).unwrap();
    let cav = CavitySpec::new(1.0, 0.05, 3).unwrap();
    assert!(assemble_platform_hamiltonian(&mi, &cav, &RegisterLayout::qudit(6, 3).unwrap()).is_err());
    assert!(assemble_platform_hamiltonian(&mi, &cav, &RegisterLayout::qudit(4, 2).unwrap()).is_err());
    assert!("qubit".parse::<Platform>().is_ok());
    assert!("photonic".parse::<Platform>().is_err());
}
