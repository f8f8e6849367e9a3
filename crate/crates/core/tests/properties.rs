use num_complex::Complex64;
use proptest::prelude::*;

use juhl_core::cli::{coeff_table, operator_from_json, operator_to_json};
use juhl_core::juhl::{a0_closed_form, build_en, juhl_coeffs, normalization_meta, Parity};
use juhl_core::verify::{ambient, covariance, geometry};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_json_round_trips(n in 1usize..=4, order in 1u32..=4) {
        let op = build_en(n, order);
        let text = serde_json::to_string(&operator_to_json(&op, order)).unwrap();
        let back = operator_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, op);
    }

    #[test]
    fn coefficient_table_shape(n in 1usize..=8, order in 1u32..=6) {
        let t = coeff_table(n, order).unwrap();
        prop_assert_eq!(t.rows.len(), order as usize / 2 + 1);
        let a0 = juhl_coeffs(n, order).unwrap().coeffs()[0].as_poly().unwrap();
        prop_assert_eq!(a0, a0_closed_form(n, order));
    }

    #[test]
    fn juhl_ratio_structure(n in 2usize..=6, order in 1u32..=10) {
        // degree ⌈N/2⌉ in λ, parity of N, and a root at each listed linear factor
        let meta = normalization_meta(n, order).unwrap();
        let ratio = &meta.juhl_ratio;
        prop_assert_eq!(ratio.poly().total_degree(), order.div_ceil(2));
        prop_assert_eq!(ratio.offsets.len() as u32, order.div_ceil(2));
        prop_assert_eq!(meta.parity() == Parity::Even, order % 2 == 0);
        let (ni, oi) = (n as i64, order as i64);
        let want: Vec<i64> = if order % 2 == 0 {
            (1..=oi / 2).map(|j| oi - ni + 2 * j).collect()
        } else {
            (0..=(oi - 1) / 2).map(|j| oi - ni + 1 + 2 * j).collect()
        };
        prop_assert_eq!(&ratio.offsets, &want);
        for &c in &ratio.offsets {
            let root = Complex64::new(-(c as f64) / 2.0, 0.0);
            prop_assert!(ratio.eval(root).norm() < 1e-9);
        }
    }

    #[test]
    fn covariance_holds_for_any_seed(seed in any::<u64>()) {
        let r = covariance::sampled_covariance_e(&[2, 3], 4, seed, 1e-9).unwrap();
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn restricted_covariance_any_seed(seed in any::<u64>()) {
        let r = covariance::sampled_covariance_en(&[3], &[2], 3, seed, 1e-8).unwrap();
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn ambient_identities_any_seed(seed in any::<u64>()) {
        for r in [
            ambient::sampled_ambient_noncompact(&[2, 3], 3, seed, 1e-9).unwrap(),
            ambient::sampled_b_mu_conjugation(&[3], 3, seed, 1e-9).unwrap(),
            ambient::sampled_extension_independence(&[2, 4], 3, seed, 1e-9).unwrap(),
            ambient::sampled_ambient_compact(&[3], 3, seed, 1e-8).unwrap(),
        ] {
            prop_assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn geometry_any_seed(seed in any::<u64>()) {
        prop_assert!(geometry::check_cocycle(8, 1, 4, seed, 1e-10).unwrap().passed);
        prop_assert!(geometry::check_hyperplane_factor(8, 1, 4, seed, 1e-10).unwrap().passed);
        prop_assert!(geometry::check_chart_distance(8, 1, 4, seed, 1e-10).unwrap().passed);
    }
}
