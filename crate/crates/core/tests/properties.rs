use std::f64::consts::PI;

use proptest::prelude::*;

use cluster_core::experiment::pipeline::{ideal_run, master_run, NoiseChannels};
use cluster_core::experiment::ExperimentConfig;
use cluster_core::linalg::{ComplexMatrix, Convention, DensityMatrix, StateVector, C64};
use cluster_core::metrics::{fidelity_mixed, l1_coherence};

fn density(weights: &[f64], amps: &[(f64, f64)], dim: usize) -> DensityMatrix {
    let total: f64 = weights.iter().sum();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for (r, w) in weights.iter().enumerate() {
        let v = amps[r * dim..(r + 1) * dim].iter().map(|&(a, b)| C64::new(a, b)).collect();
        let psi = StateVector::normalized(v, Convention::Computational).unwrap();
        m = &m + &psi.projector().matrix().scale_real(w / total);
    }
    DensityMatrix::new(m).unwrap()
}

fn mixed_state(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    (1usize..=3).prop_flat_map(move |rank| {
        (
            prop::collection::vec(0.05f64..1.0, rank),
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rank * dim),
        )
            .prop_filter("non-degenerate amplitudes", |(_, a)| a.iter().any(|(x, y)| x.abs() + y.abs() > 0.1))
            .prop_map(move |(w, a)| density(&w, &a, dim))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn uhlmann_symmetric_and_bounded(rho in mixed_state(4), sigma in mixed_state(4)) {
        let f1 = fidelity_mixed(&rho, &sigma).unwrap();
        let f2 = fidelity_mixed(&sigma, &rho).unwrap();
        prop_assert!((f1 - f2).abs() <= 1e-8);
        prop_assert!((0.0..=1.0).contains(&f1));
        prop_assert!((fidelity_mixed(&rho, &rho).unwrap() - 1.0).abs() <= 1e-8);
        if f1 >= 1.0 - 1e-8 {
            let diff = rho.matrix() - sigma.matrix();
            prop_assert!(diff.frobenius_norm() <= 1e-3);
        }
    }

    #[test]
    fn coherence_nonnegative(rho in mixed_state(4)) {
        prop_assert!(l1_coherence(&rho) >= 0.0);
    }

    #[test]
    fn ideal_fidelity_is_2pi_periodic(n in 2usize..=5, k in 0usize..1200) {
        let config = ExperimentConfig { n_qubits: n, t_end: 4.0 * PI, ..Default::default() };
        let run = ideal_run(&config).unwrap();
        let t = run.times[k];
        prop_assert!((run.fidelity[k] - run.fidelity_at(t + 2.0 * PI).unwrap()).abs() <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn noise_never_beats_ideal(kappa in 0.2f64..60.0) {
        let config = ExperimentConfig { n_qubits: 3, t_end: 4.0 * PI, kappa, ..Default::default() };
        let ideal = ideal_run(&config).unwrap();
        let t1 = master_run(&config, NoiseChannels::Relaxation, kappa, config.t_end).unwrap();
        let combined = master_run(&config, NoiseChannels::Combined, kappa, config.t_end).unwrap();
        for run in [&t1, &combined] {
            let peaks = run.peaks().unwrap();
            for (t, v) in peaks.peak_times.iter().zip(&peaks.peak_values) {
                prop_assert!(ideal.fidelity_at(*t).unwrap() >= *v);
            }
        }
        let first = |r: &cluster_core::experiment::pipeline::MasterRun| r.peaks().unwrap().revival(0).map(|p| p.1);
        if let (Some(a), Some(b)) = (first(&t1), first(&combined)) {
            prop_assert!(a >= b);
        }
    }
}

#[test]
fn troughs_anchor_at_one_sixteenth() {
    let run = ideal_run(&ExperimentConfig { t_end: 2.5 * PI, ..Default::default() }).unwrap();
    assert!((run.fidelity[0] - 1.0 / 16.0).abs() < 1e-12);
    assert!((run.fidelity_at(2.0 * PI).unwrap() - 1.0 / 16.0).abs() < 1e-12);
}
