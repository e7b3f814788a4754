use proptest::prelude::*;
use crate::ad41::{fe_family, fe_optimal, AD41Context, RecoveryParams};
use crate::channel::{compose, kraus_to_choi, random_channel, validate_cptp, TOL_CPTP};
use crate::chi::chi00;
use crate::fidelity::{average_fidelity, entanglement_fidelity};
use crate::multicycle::{chain_upper_rigorous, composite_chi00_check, recurrence_upper};
use crate::report::format_g10;
use crate::spectator::{f_gamma, qfi_spectator, SpectatorConfig};

fn channel_params() -> impl Strategy<Value = (usize, usize, u64)> {
    (2usize..=4).prop_flat_map(|d| (Just(d), 1..=d * d, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_channels_are_cptp((d, k, seed) in channel_params()) {
        let ch = random_channel(d, d, k, seed).unwrap();
        let rep = validate_cptp(&ch, TOL_CPTP);
        prop_assert!(rep.tp_residual < 1e-10);
        prop_assert!(rep.psd_min_eigenvalue > -1e-10);
        prop_assert!(rep.passed);
    }

    #[test]
    fn choi_roundtrip((d, k, seed) in channel_params()) {
        let ch = random_channel(d, d, k, seed).unwrap();
        let back = kraus_to_choi(&ch).to_channel().unwrap();
        prop_assert!(kraus_to_choi(&ch).distance(&kraus_to_choi(&back)).unwrap() < 1e-10);
    }

    #[test]
    fn fidelity_relations((d, k, seed) in channel_params()) {
        let ch = random_channel(d, d, k, seed).unwrap();
        let fe = entanglement_fidelity(&ch).unwrap();
        let df = d as f64;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&fe));
        prop_assert!((average_fidelity(&ch).unwrap() - (df * fe + 1.0) / (df + 1.0)).abs() < 1e-12);
        prop_assert!((chi00(&ch).unwrap() / df - fe).abs() < 1e-12);
    }

    #[test]
    fn composite_bound_holds((d, k1, s1) in channel_params(), k2 in 1usize..=4, s2 in any::<u64>()) {
        let q = random_channel(d, d, k1, s1).unwrap();
        let s = random_channel(d, d, k2, s2).unwrap();
        let r = composite_chi00_check(&q, &s).unwrap();
        prop_assert!(r.holds, "actual {} bound {}", r.actual, r.bound);
    }

    #[test]
    fn recurrence_symmetric_and_bounded(a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let ab = recurrence_upper(a, b).unwrap();
        prop_assert_eq!(ab, recurrence_upper(b, a).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!(ab >= a.min(b) - 1e-12);
        prop_assert!((recurrence_upper(a, a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rigorous_chain_bound_covers_actual_chains(seeds in prop::collection::vec(any::<u64>(), 2..5)) {
        let chans: Vec<_> = seeds.iter().map(|&s| random_channel(2, 2, 2, s).unwrap()).collect();
        let fes: Vec<f64> = chans.iter().map(|c| entanglement_fidelity(c).unwrap()).collect();
        let bounds = chain_upper_rigorous(&fes).unwrap();
        let mut acc = chans[0].clone();
        for (n, ch) in chans.iter().enumerate().skip(1) {
            acc = compose(ch, &acc).unwrap();
            prop_assert!(entanglement_fidelity(&acc).unwrap() <= bounds[n] + 1e-10);
        }
    }

    #[test]
    fn optimal_recovery_dominates_family(theta in 0.0f64..=1.0, a in 0.0f64..=1.0, psi in -3.2f64..3.2, phi in -3.2f64..3.2) {
        let p = RecoveryParams::new(a, psi, phi).unwrap();
        prop_assert!(fe_family(&p, theta).unwrap() <= fe_optimal(theta).unwrap() + 1e-12);
        let ctx = AD41Context::new(theta).unwrap();
        prop_assert!((ctx.fe_family(&ctx.optimal_params()) - ctx.fe_optimal()).abs() < 1e-12);
    }

    #[test]
    fn spectator_dynamics_in_range(theta in 0.001f64..0.999, gamma in 1.0f64..10.0, m in 1usize..50) {
        let f = f_gamma(theta, gamma).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(f >= theta - 1e-15);
        let cfg = SpectatorConfig::new(gamma, m).unwrap();
        let one = qfi_spectator(theta, &SpectatorConfig::new(gamma, 1).unwrap()).unwrap();
        let qfi = qfi_spectator(theta, &cfg).unwrap();
        prop_assert!(qfi > 0.0);
        prop_assert!((qfi / (m as f64 * one) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g10_formatting_roundtrips_to_ten_digits(x in prop::num::f64::NORMAL) {
        let s = format_g10(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!(((back - x) / x).abs() < 1e-9, "{} -> {}", x, s);
        prop_assert!(!s.contains('+') || s.contains('e'));
    }
}
