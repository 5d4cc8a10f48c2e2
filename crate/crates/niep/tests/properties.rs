//! Property suites for the library invariants: canonicalization,
//! rotation, the power map, Newton identities, net-trace inversion, the
//! dual structure routes, and the lift laws.

mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use proptest::prelude::*;

use niep::power_sums::divisors;
use niep::{
    check_frobenius_set, check_positivity_propagation, check_structure, check_trace_conditions,
    cyclic_block_lift, mobius, quotient_spectrum, NetTraces, PolynomialCoefficients, PowerSums,
    SpectrumMultiset, Status,
};

/// Nonzero complex values bounded away from zero and infinity.
fn value_strategy() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64)
        .prop_map(|(re, im)| Complex64::new(re, im))
        .prop_filter("bounded away from zero", |z| z.norm() > 0.1)
}

/// Conjugate-closed multisets of nonzero values, 2..=12 elements.
fn multiset_strategy() -> impl Strategy<Value = SpectrumMultiset> {
    prop::collection::vec(value_strategy(), 1..6).prop_map(|vals| {
        let mut closed = Vec::new();
        for z in vals {
            closed.push(z);
            if z.im != 0.0 {
                closed.push(z.conj());
            }
        }
        SpectrumMultiset::new(&closed).expect("nonzero by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent(s in multiset_strategy()) {
        let again =
            SpectrumMultiset::with_tolerance(&s.values(), s.tolerance()).unwrap();
        prop_assert_eq!(s.entries(), again.entries());
    }

    #[test]
    fn rotation_round_trips(s in multiset_strategy(), theta in 0.0..std::f64::consts::TAU) {
        let zeta = Complex64::from_polar(1.0, theta);
        let rotated = s.rotate(zeta).unwrap();
        prop_assert_eq!(rotated.size(), s.size());
        prop_assert!((rotated.spectral_radius() - s.spectral_radius()).abs() <= 1e-12 * s.spectral_radius());
        let back = rotated.rotate(zeta.conj()).unwrap();
        prop_assert!(back.multiset_equal(&s, 1e-9 * s.spectral_radius().max(1.0)));
    }

    #[test]
    fn power_map_preserves_count_and_closure(s in multiset_strategy(), p in 1u32..5) {
        let mapped = s.power_map(p).unwrap();
        prop_assert_eq!(mapped.size(), s.size());
        prop_assert!(s.is_conjugate_closed(s.tolerance()));
        prop_assert!(mapped.is_conjugate_closed(mapped.tolerance()));
        let rho = s.spectral_radius();
        prop_assert!((mapped.spectral_radius() - rho.powi(p as i32)).abs() <= 1e-9 * rho.powi(p as i32).max(1.0));
    }

    #[test]
    fn newton_identities_round_trip(s in multiset_strategy()) {
        let direct = PowerSums::new(s.clone());
        let pc = PolynomialCoefficients::from_spectrum(&s);
        let k_max = 2 * s.size() as u32 + 4;
        let from_coeffs = pc.power_sums(k_max);
        let rho = s.spectral_radius();
        for k in 1..=k_max {
            let d = direct.value(k).unwrap();
            let c = from_coeffs[k as usize - 1];
            let scale = rho.powi(k as i32).max(1.0) * s.size() as f64;
            prop_assert!((d - c).abs() <= 1e-8 * scale,
                "k = {}: direct {} vs coefficients {}", k, d, c);
        }
    }

    #[test]
    fn net_traces_invert_by_divisor_sums(s in multiset_strategy()) {
        let sums = PowerSums::new(s.clone());
        let net = NetTraces::new(s.clone());
        let rho = s.spectral_radius();
        for k in 1..=20u32 {
            let s_k = sums.value(k).unwrap();
            let mut total = 0.0;
            for d in divisors(k as u64) {
                total += net.value(d as u32).unwrap();
            }
            let scale = rho.powi(k as i32).max(1.0) * s.size() as f64;
            prop_assert!((s_k - total).abs() <= 1e-8 * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structure_routes_agree(n in 1usize..=7, seed in 0u64..1 << 32, density in 0.05..0.6f64) {
        let mut rng = common::rng(seed);
        let m = common::random_pattern(&mut rng, n, density);
        let via_graph = m.irreducible_via_graph(0.0);
        let via_power = m.irreducible_via_power(0.0);
        prop_assert_eq!(via_graph, via_power);
        if via_graph && n <= 6 {
            let primitive = m.period(0.0).unwrap() == 1;
            prop_assert_eq!(primitive, m.primitive_via_power(0.0));
        }
    }

    #[test]
    fn necessity_holds_on_real_spectra(n in 2usize..=6, seed in 0u64..1 << 32) {
        let mut rng = common::rng(seed);
        let m = common::random_irreducible(&mut rng, n, false);
        let nz = m.nonzero_spectrum(None).unwrap();
        let mut entries = check_frobenius_set(&nz.spectrum, 1e-8);
        entries.extend(check_structure(&nz.spectrum, 1e-8));
        entries.push(check_trace_conditions(&nz.spectrum, 30, 1e-8));
        entries.push(check_positivity_propagation(&nz.spectrum, 30, 1e-8));
        for e in entries {
            prop_assert!(e.status != Status::Fails,
                "{} failed on a real spectrum: {}", e.condition_id, e.witness);
        }
    }

    #[test]
    fn integer_necessity_holds_exactly(n in 1usize..=6, seed in 0u64..1 << 32) {
        let mut rng = common::rng(seed);
        let m = common::random_irreducible(&mut rng, n, true);
        for k in 1..=8u32 {
            let t = m.net_trace_exact(k).unwrap();
            prop_assert!(t >= BigInt::zero(), "t_{} = {} < 0", k, t);
            prop_assert!((&t % BigInt::from(k)).is_zero(), "{} does not divide t_{} = {}", k, k, t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lift_laws(m_order in 1usize..=3, p in 1usize..=4, seed in 0u64..1 << 32) {
        let mut rng = common::rng(seed);
        let b = common::random_primitive_integer(&mut rng, m_order);
        let a = cyclic_block_lift(&b, p);
        prop_assert_eq!(a.order(), p * m_order);
        prop_assert!(a.is_irreducible(0.0));
        prop_assert_eq!(a.period(0.0).unwrap(), p);

        let lam_b = b.nonzero_spectrum(None).unwrap().spectrum;
        let lam_a = a.nonzero_spectrum(None).unwrap().spectrum;
        prop_assert_eq!(lam_a.size(), p * lam_b.size());

        // Rotation invariance of the lifted spectrum.
        let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / p as f64);
        let rho_a = lam_a.spectral_radius();
        prop_assert!(lam_a.rotate(zeta).unwrap().multiset_equal(&lam_a, 1e-7 * rho_a.max(1.0)));

        // The p-th power map gives p copies of the base spectrum.
        let mapped = lam_a.power_map(p as u32).unwrap();
        let mut copies = Vec::new();
        for _ in 0..p {
            copies.extend(lam_b.values());
        }
        let expected = SpectrumMultiset::new(&copies).unwrap();
        let rho_b = lam_b.spectral_radius();
        prop_assert!(mapped.multiset_equal(&expected, 1e-6 * rho_b.max(1.0)));

        // The quotient inverts the lift.
        let q = quotient_spectrum(&lam_a, p, 1e-8).unwrap();
        prop_assert!(q.lambda1.multiset_equal(&lam_b, 1e-6 * rho_b.max(1.0)));

        // Power sums vanish off multiples of p and transfer on them.
        let sums_a = PowerSums::new(lam_a.clone());
        let sums_b = PowerSums::new(lam_b.clone());
        for k in 1..=(3 * p as u32) {
            let s = sums_a.value(k).unwrap();
            let scale = rho_a.powi(k as i32).max(1.0);
            if k % p as u32 != 0 {
                prop_assert!(s.abs() <= 1e-6 * scale, "s_{} = {} should vanish", k, s);
            } else {
                let sb = sums_b.value(k / p as u32).unwrap();
                prop_assert!((s - p as f64 * sb).abs() <= 1e-6 * scale);
            }
        }

        // Exact net-trace transfer on the integer side.
        for k in 1..=3u32 {
            let lhs = a.net_trace_exact(k * p as u32).unwrap();
            let rhs = b.net_trace_exact(k).unwrap() * BigInt::from(p);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn mobius_divisor_sum_identity() {
    // The divisor sum of the Möbius function detects one.
    for n in 1u64..=5000 {
        let total: i32 = divisors(n).into_iter().map(mobius).sum();
        assert_eq!(total, i32::from(n == 1), "divisor sum wrong at n = {n}");
    }
}
