use approx::assert_relative_eq;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use swe_core::kernels::{tau_beta, LimitFunctional, RieszKernel};
use swe_core::rng::{stream, Domain};
use swe_core::stats::{
    bootstrap_interval, covariance_surface, distance_estimate, picard_gap, tightness_modulus, variance_scaling,
    Ensemble, EnsembleMeta, PicardEnsemble,
};
use swe_core::Error;

const TIMES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn meta(seed: u64) -> EnsembleMeta {
    EnsembleMeta {
        fingerprint: "synthetic".into(),
        seed,
    }
}

/// Gaussian ensemble whose normalized covariance is exactly the limit surface.
fn limit_ensemble(lf: &LimitFunctional, radii: &[f64], reps: usize, seed: u64) -> Ensemble {
    let nt = TIMES.len();
    // Drop t = 0 (identically zero) from the factorization.
    let gamma = DMatrix::from_fn(nt - 1, nt - 1, |i, j| lf.limiting_covariance(TIMES[i + 1], TIMES[j + 1]).unwrap());
    let l = gamma.cholesky().unwrap().l();
    let mut rng = stream(seed, Domain::Auxiliary, 0, 0);
    let mut values = vec![vec![vec![0.0; reps]; nt]; radii.len()];
    for rep in 0..reps {
        for (r, &radius) in radii.iter().enumerate() {
            let z: Vec<f64> = (0..nt - 1).map(|_| rng.sample(StandardNormal)).collect();
            let g = &l * nalgebra::DVector::from_vec(z);
            let scale = radius.powf((2.0 - lf.riesz.beta) / 2.0);
            for j in 1..nt {
                values[r][j][rep] = scale * g[j - 1];
            }
        }
    }
    Ensemble {
        meta: meta(seed),
        times: TIMES.to_vec(),
        radii: radii.to_vec(),
        values,
        smoothed: None,
        center_u: vec![vec![1.0; reps]; nt],
        center_sigma: vec![vec![1.0; reps]; nt],
    }
}

fn limit() -> LimitFunctional {
    LimitFunctional::constant(RieszKernel::new(1, 0.5).unwrap(), 1.0, 1.0).unwrap()
}

#[test]
fn exact_limit_ensemble_passes_variance_and_covariance_checks() {
    let lf = limit();
    let ens = limit_ensemble(&lf, &[4.0, 8.0], 4000, 1);
    for row in variance_scaling(&ens, &lf).unwrap() {
        if row.t > 0.0 {
            assert!(row.z.abs() < 4.0, "{row:?}");
        } else {
            assert_eq!(row.normalized, 0.0);
        }
    }
    let surface = covariance_surface(&ens, &lf, 1).unwrap();
    assert!(surface.cells.iter().all(|c| c.z.abs() < 4.5), "{surface:?}");
    let phi = lf.limiting_covariance(0.5, 1.0).unwrap();
    assert_relative_eq!(phi, 0.785674, max_relative = 1e-5);
    assert_relative_eq!(lf.tau, tau_beta(1, 0.5).unwrap(), max_relative = 1e-12);
}

#[test]
fn too_few_replicates_is_an_error() {
    let lf = limit();
    let ens = limit_ensemble(&lf, &[4.0], 50, 2);
    assert!(matches!(variance_scaling(&ens, &lf), Err(Error::InsufficientReplicates { .. })));
    assert!(matches!(covariance_surface(&ens, &lf, 0), Err(Error::InsufficientReplicates { .. })));
}

#[test]
fn linear_in_time_paths_fit_the_tightness_model_exactly() {
    let beta = 0.5;
    let reps = 200;
    let mut rng = stream(5, Domain::Auxiliary, 0, 0);
    let z: Vec<f64> = (0..reps).map(|_| rng.sample(StandardNormal)).collect();
    let radii = [2.0, 4.0, 8.0];
    let values = radii
        .iter()
        .map(|&r: &f64| {
            let scale = r.powf((2.0 - beta) / 2.0);
            TIMES.iter().map(|&t| z.iter().map(|zi| scale * t * zi).collect()).collect()
        })
        .collect();
    let ens = Ensemble {
        meta: meta(5),
        times: TIMES.to_vec(),
        radii: radii.to_vec(),
        values,
        smoothed: None,
        center_u: vec![vec![1.0; reps]; TIMES.len()],
        center_sigma: vec![vec![1.0; reps]; TIMES.len()],
    };
    let report = tightness_modulus(&ens, 1, beta).unwrap();
    assert!(report.pass);
    assert_relative_eq!(report.min_ratio, 1.0, max_relative = 1e-10);
    assert_relative_eq!(report.max_ratio, 1.0, max_relative = 1e-10);
    for d in &report.doubling {
        assert_relative_eq!(d.ratio, d.expected, max_relative = 1e-10);
    }
}

#[test]
fn picard_gap_refuses_uncoupled_ensembles() {
    let lf = limit();
    let direct = limit_ensemble(&lf, &[4.0], 10, 3);
    let picard = PicardEnsemble {
        meta: meta(4),
        times: TIMES.to_vec(),
        radii: vec![4.0],
        runs: Vec::new(),
    };
    assert!(matches!(picard_gap(&direct, &picard, 0), Err(Error::SeedMismatch(_))));
    let picard = PicardEnsemble { meta: meta(3), ..picard };
    assert!(matches!(picard_gap(&direct, &picard, 0), Err(Error::SeedMismatch(_))));
}

#[test]
fn bootstrap_interval_covers_a_known_mean() {
    let trials = 100;
    let mut covered = 0;
    for trial in 0..trials {
        let mut rng = stream(11, Domain::Auxiliary, trial, 0);
        let x: Vec<f64> = (0..200).map(|_| 0.5 + rng.sample::<f64, _>(StandardNormal)).collect();
        let ((lo, hi), _) = bootstrap_interval(&x, |s| s.iter().sum::<f64>() / s.len() as f64, 500, 0.95, 11, trial);
        if (lo..=hi).contains(&0.5) {
            covered += 1;
        }
    }
    assert!(covered >= 90, "{covered}/{trials}");
}

#[test]
fn gaussian_samples_are_close_to_normal() {
    let mut rng = stream(13, Domain::Auxiliary, 0, 0);
    let x: Vec<f64> = (0..2000).map(|_| 3.0 + 2.0 * rng.sample::<f64, _>(StandardNormal)).collect();
    let est = distance_estimate(&x, 400, 0.95, 13, 0).unwrap();
    assert!(est.wasserstein < 0.06, "{est:?}");
    assert!(est.w_ci.0 < est.w_ci.1 && est.w_se > 0.0);
    assert!(est.kolmogorov_bound_holds(2.0));
}
