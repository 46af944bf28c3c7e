use rayon::prelude::*;

use sparsepr::experiment::random_sparse_signal;
use sparsepr::lifted::{l0_recover_with, verify_uniqueness, RecoveryOptions, Uniqueness};
use sparsepr::rng::{derive_seed, stream};
use sparsepr::{
    equivalent_under_invariances, gaussian_ensemble, has_k_complement_property, intensity_measure,
    InvarianceGroup,
};

/// When the 2k-complement property holds, no support ever carries a second
/// rank-one solution.
#[test]
fn no_second_solution_when_property_holds() {
    let (m, k, n) = (5, 2, 7);
    let trials = 10_000u64;
    let failures: Vec<String> = (0..trials)
        .into_par_iter()
        .filter_map(|t| {
            let seed = derive_seed(0xa11ce, t);
            let phi = gaussian_ensemble(m, n, derive_seed(seed, 0)).unwrap();
            if !has_k_complement_property(&phi, 2 * k).unwrap().holds() {
                return Some(format!("trial {t}: property failed"));
            }
            let x0 = random_sparse_signal(stream(derive_seed(seed, 1), 0), m, 1 + (t as usize % k));
            let y = intensity_measure(&phi, &x0).unwrap();
            let mut opts = RecoveryOptions::new(k);
            opts.check_certificate = false;
            let r = l0_recover_with(&phi, &y, &opts).unwrap();
            let sol = r.solution.as_ref().unwrap();
            let ok = r.alternates.is_empty()
                && equivalent_under_invariances(sol, &x0, InvarianceGroup::SignOnly);
            (!ok).then(|| format!("trial {t}: {x0} -> {sol} (+{})", r.alternates.len()))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn guaranteed_uniqueness_with_4k_minus_1_measurements() {
    for seed in 0..100u64 {
        for k in 1..=2 {
            let phi = gaussian_ensemble(6, 4 * k - 1, seed).unwrap();
            let x0 = random_sparse_signal(stream(seed, 99), 6, k);
            assert_eq!(
                verify_uniqueness(&phi, &x0).unwrap(),
                Uniqueness::GuaranteedUnique,
                "seed {seed} k {k}"
            );
        }
    }
}

/// Below the measurement bound the property fails, and the verdict must be
/// backed by an actual search: every non-ambiguous verdict round-trips.
#[test]
fn round_trip_whenever_not_ambiguous() {
    let mut ambiguous = 0;
    let mut unique = 0;
    for seed in 0..200u64 {
        // two intensities of a dense planar signal are generically ambiguous
        let (m, n) = if seed % 2 == 0 { (5, 4) } else { (2, 2) };
        let phi = gaussian_ensemble(m, n, seed).unwrap();
        let x0 = random_sparse_signal(stream(seed, 5), m, 2);
        match verify_uniqueness(&phi, &x0).unwrap() {
            Uniqueness::Ambiguous { witness, .. } => {
                ambiguous += 1;
                let y0 = intensity_measure(&phi, &x0).unwrap();
                let y1 = intensity_measure(&phi, &witness).unwrap();
                for (a, b) in y0.values().iter().zip(y1.values()) {
                    assert!((a - b).abs() <= 1e-8 * y0.norm());
                }
                assert!(witness.sparsity() <= 2);
                assert!(!equivalent_under_invariances(&witness, &x0, InvarianceGroup::SignOnly));
            }
            _ => {
                unique += 1;
                let y = intensity_measure(&phi, &x0).unwrap();
                let r = sparsepr::l0_recover(&phi, &y, 2).unwrap();
                assert!(equivalent_under_invariances(
                    r.solution.as_ref().unwrap(),
                    &x0,
                    InvarianceGroup::SignOnly
                ));
            }
        }
    }
    assert!(ambiguous > 0 && unique > 0, "{ambiguous} ambiguous, {unique} unique");
}
