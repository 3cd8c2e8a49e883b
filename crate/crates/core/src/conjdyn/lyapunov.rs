use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::trigroup::TriangleFamily;

use super::coding::{coding_trajectory, CodingTrajectory, HeckeCoding};
use super::ConjDynError;

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    pub family: TriangleFamily,
    pub sigma: usize,
    pub n_steps: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    /// ln‖A_n^σ‖ / ln‖A_n^id‖ per sample, in sample order.
    pub samples: Vec<f64>,
    /// Starting points redrawn because the orbit hit 0.
    pub retries: u32,
}

/// Samples x₀ uniformly in [−λ/2, λ/2) and runs full-length trajectories; sample i
/// draws from its own stream so results do not depend on scheduling.
fn sample_trajectories(
    coding: &HeckeCoding,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
    record: bool,
) -> (Vec<CodingTrajectory>, u32) {
    let lambda = coding.lambda_dd();
    let results: Vec<(CodingTrajectory, u32)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut retries = 0;
            loop {
                let u: f64 = rng.gen();
                let x0 = lambda * TwoFloat::from(u - 0.5);
                let t = coding_trajectory(coding, x0, n_steps, record);
                if !t.terminated {
                    return (t, retries);
                }
                retries += 1;
            }
        })
        .collect();
    let retries = results.iter().map(|r| r.1).sum();
    (results.into_iter().map(|r| r.0).collect(), retries)
}

fn sigma_index(coding: &HeckeCoding, sigma: usize) -> Result<usize, ConjDynError> {
    coding.sigmas.iter().position(|&s| s == sigma).ok_or(ConjDynError::BadSigma(sigma))
}

/// Monte Carlo estimate of the ratio of the σ-conjugate to the identity Lyapunov exponent.
pub fn lyapunov_ratio(
    family: TriangleFamily,
    sigma: usize,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<LyapunovEstimate, ConjDynError> {
    assert!(n_steps >= 1 && n_samples >= 1);
    let coding = HeckeCoding::new(family)?;
    let k = sigma_index(&coding, sigma)?;
    let (trajs, retries) = sample_trajectories(&coding, n_steps, n_samples, seed, false);
    let samples: Vec<f64> = trajs.iter().map(|t| t.final_log_norms[k] / t.final_log_norms[0]).collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(LyapunovEstimate {
        family,
        sigma,
        n_steps,
        n_samples,
        seed,
        mean,
        stderr: (var / n).sqrt(),
        samples,
        retries,
    })
}

/// Mean over samples of ln‖A_n^σ‖ after every step, for every trace-field embedding.
pub fn lyapunov_profile(
    family: TriangleFamily,
    n_steps: usize,
    n_samples: usize,
    seed: u64,
) -> Result<(Vec<usize>, Vec<Vec<f64>>), ConjDynError> {
    let coding = HeckeCoding::new(family)?;
    let (trajs, _) = sample_trajectories(&coding, n_steps, n_samples, seed, true);
    let m = coding.sigmas.len();
    let mut rows = vec![vec![0.0; m]; n_steps];
    for t in &trajs {
        for (row, ln) in rows.iter_mut().zip(&t.log_norms) {
            for j in 0..m {
                row[j] += ln[j] / trajs.len() as f64;
            }
        }
    }
    Ok((coding.sigmas.clone(), rows))
}
