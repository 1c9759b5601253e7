#![allow(dead_code)]

use eelkit::sim::replication_rng;
use eelkit::Sample;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Random full-rank sample: d in {1, 2, 3}, n in 5..=30, columns a mix of
/// normal and skewed exponential draws.
pub fn fuzz_sample(seed: u64, index: u64) -> Sample {
    let mut rng = replication_rng(seed, index);
    let d = rng.random_range(1..=3usize);
    let n = rng.random_range(5..=30usize);
    let skewed: Vec<bool> = (0..d).map(|_| rng.random::<bool>()).collect();
    let data: Vec<f64> = (0..n * d)
        .map(|k| if skewed[k % d] { Exp1.sample(&mut rng) } else { StandardNormal.sample(&mut rng) })
        .collect();
    Sample::from_flat(data, d).expect("continuous draws give a valid sample")
}

/// Random point in the open hull: a convex combination of the rows with
/// flat Dirichlet weights.
pub fn interior_point<R: Rng>(sample: &Sample, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..sample.n()).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    let mut theta = vec![0.0; sample.dim()];
    for (wi, row) in w.iter().zip(sample.rows()) {
        for (t, x) in theta.iter_mut().zip(row) {
            *t += wi / total * x;
        }
    }
    theta
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
