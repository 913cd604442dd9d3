use swe_core::kernels::RieszKernel;
use swe_core::noise::{SpectralWeights, TorusGrid, ZeroMode};
use swe_core::oracle::{exact_increment_quadrature, exact_variance_quadrature, DenseSimulator};
use swe_core::rng::{stream, Domain};

const LIMIT: f64 = 2.514_157;

fn kernel() -> RieszKernel {
    RieszKernel::new(1, 0.5).unwrap()
}

#[test]
fn normalized_variance_approaches_the_limit() {
    let k = kernel();
    let gaps: Vec<f64> = [8.0f64, 16.0, 32.0, 64.0]
        .iter()
        .map(|&r| (exact_variance_quadrature(&k, r, 1.0).unwrap() * r.powf(-1.5) - LIMIT).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 2e-3);
}

#[test]
fn variance_is_monotone_in_time_and_radius() {
    let k = kernel();
    let mut last = 0.0;
    for t in [0.1, 0.3, 0.6, 1.0, 1.5] {
        let v = exact_variance_quadrature(&k, 4.0, t).unwrap();
        assert!(v > last);
        last = v;
    }
    let mut last = 0.0;
    for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let v = exact_variance_quadrature(&k, r, 1.0).unwrap();
        assert!(v > last);
        last = v;
    }
}

#[test]
fn increments_vanish_on_the_diagonal_and_start_from_the_variance() {
    let k = kernel();
    let v = exact_variance_quadrature(&k, 8.0, 0.75).unwrap();
    assert!((exact_increment_quadrature(&k, 8.0, 0.0, 0.75).unwrap() / v - 1.0).abs() < 1e-8);
    assert_eq!(exact_increment_quadrature(&k, 8.0, 0.4, 0.4).unwrap(), 0.0);
    // Symmetric in its time arguments.
    let a = exact_increment_quadrature(&k, 8.0, 0.25, 1.0).unwrap();
    let b = exact_increment_quadrature(&k, 8.0, 1.0, 0.25).unwrap();
    assert_eq!(a, b);
}

#[test]
fn dense_increments_reproduce_their_covariance() {
    let grid = TorusGrid::new(1, 16, 4.0).unwrap();
    let w = SpectralWeights::build(grid, kernel(), ZeroMode::TorusMean).unwrap();
    let sim = DenseSimulator::new(&w, 1.0 / 64.0).unwrap();
    let draws = 10_000;
    let n = grid.len();
    let samples: Vec<Vec<f64>> = (0..draws)
        .map(|i| sim.sample_increment(&mut stream(3, Domain::DenseNoise, i, 0)).iter().copied().collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            let prods: Vec<f64> = samples.iter().map(|s| s[i] * s[j]).collect();
            let mean = prods.iter().sum::<f64>() / draws as f64;
            let var = prods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (draws as f64 - 1.0);
            let se = (var / draws as f64).sqrt();
            let z = (mean - sim.gamma()[(i, j)]) / se;
            assert!(z.abs() <= 4.5, "entry ({i}, {j}): z = {z}");
        }
    }
}
