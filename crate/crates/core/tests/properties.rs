use proptest::prelude::*;

use sparsepr::fmm::{
    check_fmm_conditions, fmm_recover, is_prime, measurement_bound, next_valid_n,
    PaddedAutocorrArrangement, SIGNAL_GROUP,
};
use sparsepr::lifted::{lift, lifted_matrix};
use sparsepr::signal::{canonicalize_in, orbit};
use sparsepr::{
    ambiguity_from_violation, autocorrelation, canonicalize, equivalent_under_invariances,
    fourier_rows, gaussian_ensemble, has_complement_property, intensity_measure, FmmVerdict,
    InvarianceGroup, RealSignal, ShiftMode,
};

fn int_signal(max_len: usize) -> impl Strategy<Value = RealSignal> {
    prop::collection::vec(-3i32..=3, 1..=max_len)
        .prop_map(|v| RealSignal::new(v.into_iter().map(f64::from).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn autocorrelation_is_centro_symmetric_and_orbit_invariant(x in int_signal(8)) {
        let a = autocorrelation(&x);
        prop_assert_eq!(a.max_asymmetry(), 0.0);
        prop_assert_eq!(a.lag(0), x.values().iter().map(|v| v * v).sum::<f64>());
        for (_, y) in orbit(&x, InvarianceGroup::Full(ShiftMode::Linear)) {
            prop_assert_eq!(autocorrelation(&y), a.clone());
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_constant_on_orbits(x in int_signal(7)) {
        let (c, g) = canonicalize(&x);
        prop_assert_eq!(g.apply(&x), c.clone());
        prop_assert_eq!(canonicalize(&c).0, c.clone());
        for (_, y) in orbit(&x, InvarianceGroup::default()) {
            prop_assert_eq!(canonicalize(&y).0, c.clone());
            prop_assert!(equivalent_under_invariances(&x, &y, InvarianceGroup::default()));
        }
    }

    #[test]
    fn linear_canonical_form_keeps_autocorrelation(x in int_signal(7)) {
        let (c, _) = canonicalize_in(&x, SIGNAL_GROUP);
        prop_assert_eq!(autocorrelation(&c), autocorrelation(&x));
    }

    #[test]
    fn arrangement_layout_invariants(x in int_signal(9)) {
        let q = PaddedAutocorrArrangement::from_autocorrelation(&autocorrelation(&x));
        let m = x.len();
        let v = q.as_slice();
        prop_assert_eq!(v.len(), 2 * m);
        prop_assert_eq!(v[m], 0.0);
        for j in 1..m {
            prop_assert_eq!(v[j], v[2 * m - j]);
        }
    }

    #[test]
    fn fourier_intensities_match_arrangement(x in int_signal(9), pick in 0usize..1000) {
        let m = x.len();
        let freq = pick % (2 * m);
        let phi = fourier_rows(m, &[freq]).unwrap();
        let y = intensity_measure(&phi, &x).unwrap().values()[0];
        let q = PaddedAutocorrArrangement::from_autocorrelation(&autocorrelation(&x));
        let row = phi.complex_matrix();
        let ip: num_complex::Complex64 = q
            .as_slice()
            .iter()
            .enumerate()
            .map(|(j, v)| row[(0, j)].conj() * *v)
            .sum();
        prop_assert!((ip.re - y).abs() <= 1e-8 * y.abs().max(1.0));
        prop_assert!(ip.im.abs() <= 1e-8 * y.abs().max(1.0));
    }

    #[test]
    fn lifted_system_is_exact_on_integers(
        rows in prop::collection::vec(prop::collection::vec(-3i32..=3, 4), 1..8),
        xk in prop::collection::vec(-3i32..=3, 1..=4),
    ) {
        let s = xk.len();
        let a = nalgebra::DMatrix::from_fn(rows.len(), 4, |i, j| f64::from(rows[i][j]));
        let supp: Vec<usize> = (0..s).collect();
        let xf: Vec<f64> = xk.iter().map(|v| f64::from(*v)).collect();
        let b = lifted_matrix(&a, &supp);
        let z = lift(&xf);
        let lhs = &b * &z;
        for (n, row) in rows.iter().enumerate() {
            let ip: i32 = row.iter().zip(&xk).map(|(p, q)| p * q).sum();
            prop_assert_eq!(lhs[n], f64::from(ip * ip));
        }
    }

    #[test]
    fn lifted_system_is_tight_on_floats(seed in any::<u64>(), x in prop::collection::vec(-2.0f64..2.0, 3)) {
        let phi = gaussian_ensemble(5, 9, seed).unwrap();
        let supp = [0usize, 2, 4];
        let b = lifted_matrix(phi.real_matrix().unwrap(), &supp);
        let mut full = vec![0.0; 5];
        for (&j, v) in supp.iter().zip(&x) {
            full[j] = *v;
        }
        let y = intensity_measure(&phi, &RealSignal::new(full)).unwrap();
        let r = (&b * lift(&x)).iter().zip(y.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(r <= 1e-10 * y.norm().max(1.0));
    }

    #[test]
    fn ambiguity_pairs_share_measurements(seed in any::<u64>(), m in 2usize..6, drop in 0usize..3) {
        let n = (2 * m - 2).saturating_sub(drop).max(1);
        let phi = gaussian_ensemble(m, n, seed).unwrap();
        let v = has_complement_property(&phi).unwrap();
        let cert = v.certificate().expect("fewer than 2M-1 vectors");
        cert.validate(&phi).unwrap();
        let (x1, x2) = ambiguity_from_violation(&phi, cert).unwrap();
        let y1 = intensity_measure(&phi, &x1).unwrap();
        let y2 = intensity_measure(&phi, &x2).unwrap();
        for (a, b) in y1.values().iter().zip(y2.values()) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!(!equivalent_under_invariances(&x1, &x2, InvarianceGroup::SignOnly));
    }

    #[test]
    fn measurements_are_sign_invariant(seed in any::<u64>(), x in prop::collection::vec(-5.0f64..5.0, 4)) {
        let phi = gaussian_ensemble(4, 6, seed).unwrap();
        let x = RealSignal::new(x);
        prop_assert_eq!(
            intensity_measure(&phi, &x).unwrap(),
            intensity_measure(&phi, &x.negated()).unwrap()
        );
    }

    #[test]
    fn fmm_pipeline_is_orbit_invariant(
        vals in prop::collection::vec(prop_oneof![-5i32..=-1, 1i32..=5], 3),
        shift in 0isize..4,
        mirror in any::<bool>(),
        negate in any::<bool>(),
    ) {
        // {0, 1, 3} has distinct differences
        let mut v = vec![0.0; 9];
        for (p, x) in [0usize, 1, 3].iter().zip(&vals) {
            v[*p] = f64::from(*x);
        }
        let x0 = RealSignal::new(v);
        let mut g = x0.linear_shift(shift).unwrap();
        if mirror { g = g.reversed(); }
        if negate { g = g.negated(); }
        let freqs: Vec<usize> = (0..17).collect();
        let phi = fourier_rows(9, &freqs).unwrap();
        let r0 = fmm_recover(&intensity_measure(&phi, &x0).unwrap(), &freqs, 9, 3).unwrap();
        let r1 = fmm_recover(&intensity_measure(&phi, &g).unwrap(), &freqs, 9, 3).unwrap();
        prop_assert_eq!(&r0.conditions.verdict, &FmmVerdict::Unique);
        prop_assert!(equivalent_under_invariances(&r0.solution, &r1.solution, SIGNAL_GROUP));
        prop_assert!(equivalent_under_invariances(&r0.solution, &x0, SIGNAL_GROUP));
    }
}

#[test]
fn prime_gate_is_minimal() {
    for k in 0..60 {
        let n = next_valid_n(k);
        assert!(is_prime(n) && n > measurement_bound(k));
        assert!(!is_prime(n - 1) || n - 1 <= measurement_bound(k), "k = {k}");
        for c in measurement_bound(k) + 1..n {
            assert!(!is_prime(c));
        }
    }
}

#[test]
fn verdict_matches_its_definition() {
    let x = RealSignal::from_entries(9, &[(0, 1.0), (1, 1.0), (3, 2.0)]).unwrap();
    for n in 1..40 {
        let r = check_fmm_conditions(&x, n);
        let all = r.n_is_prime && r.bound_ok && r.collision_free;
        assert_eq!(r.verdict == FmmVerdict::Unique, all, "N = {n}");
    }
}
