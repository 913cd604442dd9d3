use proptest::prelude::*;
use swe_core::kernels::{wave_multiplier, LimitFunctional, MollifierFamily, RieszKernel};
use swe_core::noise::{SpectralWeights, TorusGrid, ZeroMode};
use swe_core::rng::{stream, Domain};
use swe_core::stats::{kolmogorov_to_normal, wasserstein_to_normal};

proptest! {
    #[test]
    fn wave_multiplier_is_bounded(t in 0.0f64..2.0, r in 0.0f64..1e3) {
        let m = wave_multiplier(t, r);
        prop_assert!(m.abs() <= t + 1e-12);
        prop_assert!(m.abs() <= 1.0 / r.max(1e-300) + 1e-12);
    }

    #[test]
    fn mollifier_transform_is_a_contraction(dim in 1usize..=3, n in 1u32..8, q in 0.0f64..50.0) {
        let family = MollifierFamily::new(dim).unwrap();
        prop_assert!(family.transform(n, q).abs() <= 1.0);
    }

    #[test]
    fn distances_ignore_sample_order(seed in 0u64..1000, rotate in 1usize..50) {
        let mut rng = stream(seed, Domain::Auxiliary, 0, 0);
        let x: Vec<f64> = (0..64).map(|_| rand::Rng::random::<f64>(&mut rng) - 0.5).collect();
        let mut y = x.clone();
        y.rotate_left(rotate);
        y.reverse();
        prop_assert_eq!(wasserstein_to_normal(&x).unwrap(), wasserstein_to_normal(&y).unwrap());
        prop_assert_eq!(kolmogorov_to_normal(&x).unwrap(), kolmogorov_to_normal(&y).unwrap());
    }

    #[test]
    fn limit_covariance_is_symmetric(s in 0.0f64..1.0, t in 0.0f64..1.0, beta in 0.1f64..0.9) {
        let lf = LimitFunctional::new(
            RieszKernel::new(1, beta).unwrap(),
            vec![0.0, 0.5, 1.0],
            vec![1.0, 1.7, 2.9],
            &[1.0, 1.2, 1.5],
        ).unwrap();
        let a = lf.limiting_covariance(s, t).unwrap();
        let b = lf.limiting_covariance(t, s).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        prop_assert!(a * a <= lf.limiting_variance(s).unwrap() * lf.limiting_variance(t).unwrap() * (1.0 + 1e-9) + 1e-15);
    }

    #[test]
    fn spectral_draws_are_hermitian(seed in 0u64..500, n in prop::sample::select(vec![4usize, 6, 8])) {
        let grid = TorusGrid::new(2, n, 3.0).unwrap();
        let w = SpectralWeights::build(grid, RieszKernel::new(2, 1.0).unwrap(), ZeroMode::TorusMean).unwrap();
        let a = w.sample_spectral::<f64, _>(0.1, &mut stream(seed, Domain::Noise, 0, 0));
        for (k, &p) in grid.partner_table().iter().enumerate() {
            prop_assert!((a[k] - a[p].conj()).norm() <= 1e-14);
        }
    }
}
