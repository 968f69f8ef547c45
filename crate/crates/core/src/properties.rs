//! Spec-level invariants exercised through the public API.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use proptest::prelude::*;

use crate::analysis::{logical_basis, run_gate, state_fidelity, theta_scan};
use crate::dynamics::{lindblad_rhs, CollapseChannel, DensityState, IntegrationConfig, NoiseMode, Subspace};
use crate::hilbert::{Operator, SpaceLayout};
use crate::holonomy::{
    distance_up_to_phase, gate_params, holonomic_u1_from_h1, u1_matrix, u2_matrix, DfsEncoding, GateSpec,
};
use crate::model::{split_couplings, GateDrive, PhysicalParams};
use crate::scalar::{cis, cx, max_abs_diff, re};
use crate::{CMatrix, CVector};

fn matrix(n: usize, vals: &[f64]) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        cx(vals[k % vals.len()], vals[(k + 1) % vals.len()])
    })
}

fn hermitian(n: usize, vals: &[f64]) -> CMatrix {
    let m = matrix(n, vals);
    (&m + m.adjoint()) * re(0.5)
}

proptest! {
    #[test]
    fn gates_are_unitary_involutions(angle in -4.0f64..4.0, phase in -7.0f64..7.0) {
        for u in [u1_matrix(angle, phase), u2_matrix(angle, phase)] {
            let n = u.nrows();
            let id = CMatrix::identity(n, n);
            prop_assert!(max_abs_diff(&(u.adjoint() * &u), &id) < 1e-12);
            prop_assert!(max_abs_diff(&(&u * &u), &id) < 1e-12);
        }
    }

    #[test]
    fn normalization_keeps_the_gate(angle in -6.0f64..6.0, phase in -4.0f64..4.0) {
        let g = GateSpec::u1(angle, phase);
        let n = g.normalized();
        prop_assert!((0.0..=PI).contains(&n.angle));
        prop_assert!(max_abs_diff(&g.matrix(), &n.matrix()) < 1e-12);
    }

    #[test]
    fn couplings_reproduce_the_angle(theta in 0.01f64..(PI - 0.01), g in 0.1f64..2.0) {
        let (ga, gb) = split_couplings(theta, g).unwrap();
        prop_assert!(ga.max(gb) <= g * (1.0 + 1e-12));
        let (_, back) = gate_params(ga, gb, 10.0).unwrap();
        prop_assert!((back - theta).abs() < 1e-10);
    }

    #[test]
    fn holonomic_u1_matches_analytic(theta in 0.01f64..(PI - 0.01), phi in -PI..PI) {
        let drive = GateDrive::new(&GateSpec::u1(theta, phi), &PhysicalParams::default()).unwrap();
        let u = holonomic_u1_from_h1(&drive.dfs_hamiltonian().unwrap(), drive.tau).unwrap();
        prop_assert!(distance_up_to_phase(&u, &u1_matrix(theta, phi)) < 1e-9);
    }

    #[test]
    fn master_equation_preserves_trace_and_hermiticity(
        vals in prop::collection::vec(-1.0f64..1.0, 64),
        rates in prop::collection::vec(0.0f64..2.0, 2),
    ) {
        let layout = SpaceLayout::new(vec![2, 2]).unwrap();
        let h = Operator::new(layout.clone(), hermitian(4, &vals)).unwrap();
        let rho = hermitian(4, &vals[7..]);
        let channels: Vec<_> = rates
            .iter()
            .enumerate()
            .map(|(k, &r)| CollapseChannel::new("c", Operator::new(layout.clone(), matrix(4, &vals[k * 11..])).unwrap(), r).unwrap())
            .collect();
        let d = lindblad_rhs(&rho, &h, &channels).unwrap();
        prop_assert!(d.trace().norm() < 1e-12);
        prop_assert!(max_abs_diff(&d, &d.adjoint()) < 1e-12);
    }

    #[test]
    fn fidelity_ignores_global_phase(a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, phase in -PI..PI) {
        prop_assume!(a.abs() + b.abs() > 0.1);
        let enc = DfsEncoding::s1();
        let layout = SpaceLayout::cavity_qubits(2, 3).unwrap();
        let amps = CVector::from_vec(vec![cx(a, c), cx(b, 0.0)]);
        let psi = enc.physical_state(&layout, 0, &amps).unwrap();
        let rho = DensityState::pure(Arc::new(Subspace::excitation(&layout, 1)), &psi).unwrap();
        let target = CVector::from_vec(vec![cx(b, 0.3), cx(a, -c)]);
        let f = state_fidelity(&rho, &target, &enc).unwrap();
        let g = state_fidelity(&rho, &(&target * cis(phase)), &enc).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - g).abs() < 1e-12);
    }
}

#[test]
fn single_precision_aliases() {
    let u = u1_matrix::<f32>(FRAC_PI_2 as f32, 0.0);
    assert!((u[(0, 1)].re - 1.0).abs() < 1e-6);
    let layout = SpaceLayout::cavity_qubits(1, 1).unwrap();
    let id = crate::Operator32::identity(&layout);
    assert_eq!(id.dim(), 4);
}

#[test]
fn decoherence_free_gate_stays_in_the_encoding() {
    let params = PhysicalParams::default().without_decoherence();
    let cfg = IntegrationConfig::for_detuning(params.raman_detuning);
    let init = logical_basis(&DfsEncoding::s1(), "0L").unwrap();
    let run = run_gate(&GateSpec::u1(FRAC_PI_2, 0.0), &init, &params, NoiseMode::Collective, &cfg).unwrap();
    assert!(run.final_fidelity() >= 0.99, "{}", run.final_fidelity());
    let leak = run.series.leakage.iter().fold(0.0f64, |m, &x| m.max(x));
    assert!(leak < 0.05, "{leak}");
    for row in &run.series.populations {
        assert!(row.iter().all(|p| (-1e-12..=1.0 + 1e-12).contains(p)));
        assert!(row.iter().sum::<f64>() <= 1.0 + 1e-6);
    }
}

#[test]
fn x_gate_scan_is_symmetric() {
    let params = PhysicalParams::default();
    let cfg = IntegrationConfig::for_detuning(params.raman_detuning);
    let scan = theta_scan(&GateSpec::u1(FRAC_PI_2, 0.0), 5, &params, &cfg).unwrap();
    let f = &scan.max_fidelity_identical;
    for k in 0..f.len() {
        assert!((f[k] - f[f.len() - 1 - k]).abs() < 1e-3, "{f:?}");
    }
}

#[test]
fn scan_endpoint_matches_basis_run() {
    let params = PhysicalParams::default();
    let mut cfg = IntegrationConfig::for_detuning(params.raman_detuning);
    let gate = GateSpec::u1(FRAC_PI_2, 0.0);
    let scan = theta_scan(&gate, 2, &params, &cfg).unwrap();
    let drive = GateDrive::new(&gate, &params).unwrap();
    cfg.t_end = Some(drive.tau * 1.2);
    let init = logical_basis(&DfsEncoding::s1(), "0L").unwrap();
    let run = run_gate(&gate, &init, &params, NoiseMode::Collective, &cfg).unwrap();
    assert_eq!(scan.max_fidelity_identical[0], run.series.max_fidelity().unwrap());
}

#[test]
fn two_qubit_restriction_agrees_with_full_space() {
    use crate::dynamics::Truncation;
    let params = PhysicalParams::default();
    let mut cfg = IntegrationConfig::for_detuning(params.raman_detuning);
    cfg.t_end = Some(3.0);
    cfg.n_max = 1;
    let init = logical_basis(&DfsEncoding::s2(), "01L").unwrap();
    let gate = GateSpec::u2(0.6, 0.0);
    let small = run_gate(&gate, &init, &params, NoiseMode::Individual, &cfg).unwrap();
    cfg.truncation = Truncation::Full;
    let full = run_gate(&gate, &init, &params, NoiseMode::Individual, &cfg).unwrap();
    assert!(small.subspace_dim < full.subspace_dim);
    for (a, b) in small.series.populations.iter().zip(&full.series.populations) {
        for (x, y) in a.iter().zip(b.iter()) {
            let (x, y): (&f64, &f64) = (x, y);
            assert!((x - y).abs() < 1e-10f64);
        }
    }
}
