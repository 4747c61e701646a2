//! End-to-end collision dynamics: the exact reference, the moment-basis
//! simulator, and the adaptive ansatz on the proton-hydrogen benchmark.

mod common;

use qcollide_core::*;

fn benchmark_frames(energy_kev: f64, b: f64, n_steps: usize) -> (TrajectoryContext, LcuHamiltonian) {
    let ctx = TrajectoryContext::new(energy_kev, b, 30.0, n_steps).unwrap();
    let h = build_frames(&ctx).unwrap();
    (ctx, h)
}

#[test]
fn exact_capture_probability_at_benchmark_point() {
    let (ctx, h) = benchmark_frames(10.0, 1.6, 1001);
    let psi0 = StateVector::basis(4, 0b1011);
    let states = propagate_exact(&h, &psi0, &ctx.t_grid, 1e-11, 1e-11).unwrap();
    // Norm drift is the quality metric.
    for s in &states {
        assert!((1.0 - s.norm()).abs() <= 1e-9);
    }
    let p_final = transfer_probability(states.last().unwrap()).unwrap();
    assert!(
        (p_final - 0.80).abs() <= 0.05,
        "final capture probability {p_final} outside 0.80 +/- 0.05"
    );
    // Early times: projectile far away, no capture yet.
    let p_early = transfer_probability(&states[10]).unwrap();
    assert!(p_early < 1e-3, "early capture {p_early}");
}

#[test]
fn qas_matches_exact_to_tight_tolerance() {
    let (ctx, h) = benchmark_frames(10.0, 1.6, 1001);
    let psi0 = StateVector::basis(4, 0b1011);
    let basis = build_moment_basis(&h, &psi0, 16).unwrap();
    assert!(basis.closed);
    assert_eq!(basis.len(), 4);
    let mut model = measure_model(&basis, &h, None, None).unwrap();
    let (record, states) = evolve_qas(&mut model, &h, &ctx, 1e-10, 1e-10).unwrap();
    let exact = propagate_exact(&h, &psi0, &ctx.t_grid, 1e-11, 1e-11).unwrap();
    let infid_final = 1.0 - fidelity(states.last().unwrap(), exact.last().unwrap()).unwrap();
    assert!(infid_final <= 1e-8, "QAS final infidelity {infid_final}");
    let p_exact = transfer_probability(exact.last().unwrap()).unwrap();
    let p_qas = record.p_of_t.last().copied().unwrap();
    assert!((p_qas - p_exact).abs() <= 1e-6, "dP = {}", (p_qas - p_exact).abs());
    // Norm preservation without renormalization.
    for s in &states {
        assert!((s.norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn avqds_tracks_exact_with_two_parameters() {
    let (ctx, h) = benchmark_frames(10.0, 1.6, 1001);
    let outcome = evolve_avqds(&h, &ctx, 0b1011, 0.005, 1e-8, 200).unwrap();
    assert!(outcome.failure.is_none());
    let record = &outcome.record;
    let max_theta = record.n_theta_trace.as_ref().unwrap().iter().max().copied().unwrap();
    assert!(max_theta <= 2, "ansatz grew to {max_theta} parameters");
    let exact = propagate_exact(&h, &StateVector::basis(4, 0b1011), &record.times, 1e-11, 1e-11)
        .unwrap();
    let infid = 1.0 - fidelity(outcome.states.last().unwrap(), exact.last().unwrap()).unwrap();
    assert!(infid <= 1e-5, "AVQDS final infidelity {infid}");
    let p_exact = transfer_probability(exact.last().unwrap()).unwrap();
    let p_avqds = record.p_of_t.last().copied().unwrap();
    assert!((p_avqds - p_exact).abs() <= 1e-4, "dP = {}", (p_avqds - p_exact).abs());
    // Rotations are exactly unitary.
    for s in &outcome.states {
        assert!((s.norm() - 1.0).abs() < 1e-10);
    }
}
