use rand::Rng;
use smc_ancestry::models::{generate_synthetic, kalman_filter, LinearGaussian, Neutral, PzModel};
use smc_ancestry::rng::{stream_rng, Domain};
use smc_ancestry::smc::{offspring_counts, resample, run_filter, ResamplingScheme};

/// E[offspring_i] = N w_i for every scheme.
#[test]
fn resampling_is_unbiased() {
    let n = 16;
    let draws = 100_000;
    let mut rng = stream_rng(99, Domain::Filter, 0);
    let raw: Vec<f64> = (0..n).map(|i| if i == 5 { 0.0 } else { rng.random::<f64>() + 0.05 }).collect();
    let total: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    for scheme in ResamplingScheme::ALL {
        let mut sum = vec![0.0; n];
        let mut sum_sq = vec![0.0; n];
        for d in 0..draws {
            let mut rng = stream_rng(1, Domain::Filter, d);
            let counts = offspring_counts(&resample(&w, scheme, &mut rng).unwrap(), n).unwrap();
            for (i, &c) in counts.iter().enumerate() {
                sum[i] += c as f64;
                sum_sq[i] += (c * c) as f64;
            }
        }
        for i in 0..n {
            let mean = sum[i] / draws as f64;
            let var = sum_sq[i] / draws as f64 - mean * mean;
            let se = (var / draws as f64).sqrt();
            let expected = n as f64 * w[i];
            if se == 0.0 {
                assert!((mean - expected).abs() < 1e-9 || w[i] == 0.0, "{scheme} i={i}");
            } else {
                assert!((mean - expected).abs() <= 4.0 * se, "{scheme} i={i}: {mean} vs {expected} (se {se})");
            }
        }
        assert_eq!(sum[5], 0.0, "{scheme}: zero-weight particle resampled");
    }
}

#[test]
fn systematic_uniform_weights_never_prune() {
    for &(n, t) in &[(1, 10), (7, 30), (64, 100)] {
        let run = run_filter(&Neutral, &vec![(); t], n, ResamplingScheme::Systematic, 3).unwrap();
        assert_eq!(run.tree.node_count(), t * n + n);
        assert_eq!(run.tree.stats().coalescence_time, if n == 1 { t } else { 0 });
    }
}

#[test]
fn stats_history_is_consistent() {
    let model = PzModel {
        substeps: 10,
        ..PzModel::default()
    };
    let data = generate_synthetic(&model, 60, 4).unwrap();
    let run = run_filter(&model, &data.observations, 40, ResamplingScheme::Stratified, 4).unwrap();
    assert_eq!(run.stats.len(), 61);
    for (t, s) in run.stats.iter().enumerate() {
        assert_eq!(s.time(), t);
        assert!(s.node_count >= t + 40);
        assert!(s.node_count <= (t + 1) * 40);
        assert_eq!(s.distance_to_mrca + s.coalescence_time, t);
    }
    assert_eq!(run.stats.last().unwrap(), &run.tree.stats());
}

/// A moderately sized filter tracks the Kalman means closely.
#[test]
fn linear_gaussian_filter_follows_kalman() {
    let model = LinearGaussian::default();
    let data = generate_synthetic(&model, 30, 8).unwrap();
    let kalman = kalman_filter(&model, &data.observations);
    let n = 4000;
    let mut means = Vec::new();
    smc_ancestry::smc::run_filter_with(
        &model,
        &data.observations,
        n,
        ResamplingScheme::Systematic,
        8,
        Default::default(),
        |v| means.push(v.system.weighted_mean(|x| *x)),
    )
    .unwrap();
    for t in 1..=30 {
        let k = &kalman[t - 1];
        let tol = 10.0 * (k.var / n as f64).sqrt();
        assert!((means[t] - k.mean).abs() < tol, "t={t}: {} vs {}", means[t], k.mean);
    }
}
