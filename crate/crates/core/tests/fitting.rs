//! Weight fitting, subset selection and the descriptive analyses against
//! generators with known answers and independent reference computations.

mod support;

use rand::seq::SliceRandom;
use rand::Rng;
use support::oracles::{axis_distance, jacobi_eigen};
use support::planted::{labeled, planted_samples, random_trio};
use vantage::analysis::{correlation_matrix, pca_analysis};
use vantage::fitting::{FitMethod, Normalization, SubsetSearch, WeightVector};
use vantage::{combined_score, fit_logistic, select_subset, solve_max_separation, LabeledSample, MeasureId, MEASURE_COUNT};

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[test]
fn logistic_recovers_generator_signs() {
    let mut rng = support::rng(41);
    let (mut agree, mut total) = (0, 0);
    for _ in 0..3 {
        let beta: Vec<f64> = (0..MEASURE_COUNT)
            .map(|_| rng.gen_range(1.0..3.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let samples: Vec<LabeledSample> = (0..10_000)
            .map(|_| {
                let x: [f64; MEASURE_COUNT] = std::array::from_fn(|_| rng.gen());
                let z: f64 = x.iter().zip(&beta).map(|(xi, b)| b * (xi - 0.5)).sum();
                labeled(x, rng.gen::<f64>() < sigmoid(z))
            })
            .collect();
        let report = fit_logistic(&samples, 1e-4).unwrap();
        assert!(report.converged);
        let coefs = report.coefficients.unwrap();
        for (c, b) in coefs.iter().zip(&beta) {
            total += 1;
            if c.signum() == b.signum() {
                agree += 1;
            }
        }
    }
    assert!(agree as f64 >= 0.95 * total as f64, "{agree}/{total}");
}

#[test]
fn planted_trio_is_recovered_by_both_methods() {
    let mut rng = support::rng(42);
    let mut hits = [0; 2];
    let trials = 20;
    for _ in 0..trials {
        let trio = random_trio(&mut rng);
        let samples = planted_samples(&mut rng, &trio, 200, 0.3);
        for (h, method) in hits.iter_mut().zip([FitMethod::Logistic, FitMethod::Separation]) {
            let report = select_subset(&samples, 3, method, SubsetSearch::BackwardElimination).unwrap();
            if report.weights.active_set() == trio {
                *h += 1;
            }
        }
        let full = fit_logistic(&samples, 1e-4).unwrap();
        assert!(full.accuracy >= 0.95, "accuracy {}", full.accuracy);
    }
    assert!(hits.iter().all(|&h| h >= trials - 1), "{hits:?}");
}

#[test]
fn exhaustive_search_agrees_with_elimination_on_clear_signal() {
    let mut rng = support::rng(43);
    let trio = random_trio(&mut rng);
    let samples = planted_samples(&mut rng, &trio, 200, 0.5);
    for method in [FitMethod::Logistic, FitMethod::Separation] {
        let report = select_subset(&samples, 3, method, SubsetSearch::Exhaustive).unwrap();
        assert_eq!(report.weights.active_set(), trio);
    }
}

fn assert_same_weights(a: &WeightVector, b: &WeightVector, tol: f64) {
    for (x, y) in a.weights().iter().zip(b.weights()) {
        assert!((x - y).abs() < tol, "{x} vs {y}");
    }
}

#[test]
fn fits_ignore_duplication_and_order() {
    let mut rng = support::rng(44);
    let trio = random_trio(&mut rng);
    let samples = planted_samples(&mut rng, &trio, 100, 0.3);
    let doubled: Vec<LabeledSample> = samples.iter().chain(&samples).cloned().collect();
    let mut shuffled = samples.clone();
    shuffled.shuffle(&mut rng);

    let lr = fit_logistic(&samples, 1e-4).unwrap();
    let sqp = solve_max_separation(&samples).unwrap();
    for other in [&doubled, &shuffled] {
        let lr2 = fit_logistic(other, 1e-4).unwrap();
        assert_same_weights(&lr.weights, &lr2.weights, 1e-9);
        assert!((lr.intercept.unwrap() - lr2.intercept.unwrap()).abs() < 1e-9);
        assert_same_weights(&sqp.weights, &solve_max_separation(other).unwrap().weights, 1e-9);
    }
}

fn mean_separation(weights: &[f64], samples: &[LabeledSample]) -> f64 {
    let (mut best, mut worst, mut nb, mut nw) = (0.0, 0.0, 0.0, 0.0);
    for s in samples {
        let v: f64 = weights.iter().zip(&s.scores.scores).map(|(w, x)| w * x).sum();
        if s.is_best() {
            best += v;
            nb += 1.0;
        } else {
            worst += v;
            nw += 1.0;
        }
    }
    best / nb - worst / nw
}

#[test]
fn separation_weights_beat_every_single_measure() {
    let mut rng = support::rng(45);
    for _ in 0..10 {
        let trio = random_trio(&mut rng);
        let samples = planted_samples(&mut rng, &trio, 150, 0.2);
        let report = solve_max_separation(&samples).unwrap();
        let combined = mean_separation(report.weights.weights(), &samples);
        assert!((combined - report.mean_separation).abs() < 1e-12);
        for m in MeasureId::ALL {
            let single = mean_separation(WeightVector::single(m).weights(), &samples);
            assert!(combined >= single - 1e-12, "{m}: {combined} < {single}");
        }
    }
}

#[test]
fn separation_solver_is_certified_by_the_closed_form() {
    let mut rng = support::rng(46);
    for _ in 0..1000 {
        let c: Vec<f64> = (0..MEASURE_COUNT).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let scale = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let best = labeled(std::array::from_fn(|i| 0.5 + c[i] / (2.0 * scale)), true);
        let worst = labeled(std::array::from_fn(|i| 0.5 - c[i] / (2.0 * scale)), false);
        let report = solve_max_separation(&[best, worst]).unwrap();
        let plus: Vec<f64> = c.iter().map(|x| x.max(0.0) / scale).collect();
        let norm = plus.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            assert!(report.flags.iter().any(|f| f == "no-measure-favours-best"));
            continue;
        }
        let optimum = norm;
        assert!((optimum - report.objective).abs() < 1e-9, "gap {}", optimum - report.objective);
        for (w, p) in report.weights.weights().iter().zip(&plus) {
            assert!((w - p / norm).abs() < 1e-9);
        }
        assert!(report.converged);
    }
}

#[test]
fn combined_score_is_the_weighted_sum() {
    let mut rng = support::rng(47);
    for _ in 0..100 {
        let raw: [f64; MEASURE_COUNT] = std::array::from_fn(|_| rng.gen());
        let total: f64 = raw.iter().sum();
        let w = WeightVector::new(raw.map(|x| x / total), Normalization::UnitSum, &MeasureId::ALL).unwrap();
        let s = labeled(std::array::from_fn(|_| rng.gen()), true);
        let dot: f64 = (0..MEASURE_COUNT).map(|i| raw[i] / total * s.scores.scores[i]).sum();
        assert!((combined_score(&w, &s.scores) - dot).abs() < 1e-12);
    }
}

fn sample_covariance(samples: &[LabeledSample]) -> Vec<Vec<f64>> {
    let n = samples.len() as f64;
    let mean: Vec<f64> = (0..MEASURE_COUNT)
        .map(|i| samples.iter().map(|s| s.scores.scores[i]).sum::<f64>() / n)
        .collect();
    let mut cov = vec![vec![0.0; MEASURE_COUNT]; MEASURE_COUNT];
    for s in samples {
        for i in 0..MEASURE_COUNT {
            for j in 0..MEASURE_COUNT {
                cov[i][j] += (s.scores.scores[i] - mean[i]) * (s.scores.scores[j] - mean[j]) / (n - 1.0);
            }
        }
    }
    cov
}

#[test]
fn pca_matches_jacobi_oracle() {
    let mut rng = support::rng(48);
    for _ in 0..5 {
        let trio = random_trio(&mut rng);
        let samples = planted_samples(&mut rng, &trio, 150, 0.6);
        let (values, vectors) = jacobi_eigen(sample_covariance(&samples));
        let pca = pca_analysis(&samples).unwrap();
        for k in 0..MEASURE_COUNT {
            assert!((pca.eigenvalues[k] - values[k]).abs() < 1e-8);
            assert!(axis_distance(&pca.components[k], &vectors[k]) < 1e-8, "component {k}");
        }
        let total: f64 = values.iter().sum();
        assert!((pca.explained[0] - values[0] / total).abs() < 1e-8);
        // the planted direction separates the classes along PC1
        assert!(pca.first_component_accuracy(&samples) > 0.9);
    }
}

#[test]
fn independent_measures_are_uncorrelated() {
    let mut rng = support::rng(49);
    let samples = planted_samples(&mut rng, &[], 5_000, 0.0);
    let corr = correlation_matrix(&samples).unwrap();
    for a in MeasureId::ALL {
        assert_eq!(corr.get(a, a), 1.0);
        for b in MeasureId::ALL {
            if a != b {
                assert!(corr.get(a, b).abs() < 0.1);
                assert_eq!(corr.get(a, b), corr.get(b, a));
            }
        }
    }
    assert!(corr.constant.is_empty());
}
