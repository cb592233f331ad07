use rand::Rng;
use rand_distr::StandardNormal;

use super::{ModelError, StateSpaceModel};

/// Scalar autoregressive model observed in Gaussian noise:
/// `x_t = a x_{t-1} + N(0, q)`, `y_t = x_t + N(0, r)`, `x_0 ~ N(m0, p0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGaussian {
    pub a: f64,
    pub process_var: f64,
    pub obs_var: f64,
    pub initial_mean: f64,
    pub initial_var: f64,
}

impl Default for LinearGaussian {
    fn default() -> Self {
        Self {
            a: 0.9,
            process_var: 1.0,
            obs_var: 1.0,
            initial_mean: 0.0,
            initial_var: 1.0,
        }
    }
}

impl StateSpaceModel for LinearGaussian {
    type State = f64;
    type Obs = f64;

    fn name(&self) -> &'static str {
        "linear-gaussian"
    }

    fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.initial_mean + self.initial_var.sqrt() * rng.sample::<f64, _>(StandardNormal)
    }

    fn sample_transition<R: Rng + ?Sized>(&self, rng: &mut R, x: &f64) -> Result<f64, ModelError> {
        Ok(self.a * x + self.process_var.sqrt() * rng.sample::<f64, _>(StandardNormal))
    }

    fn log_obs_density(&self, y: &f64, x: &f64) -> Result<f64, ModelError> {
        let r = y - x;
        Ok(-0.5 * r * r / self.obs_var - 0.5 * (2.0 * std::f64::consts::PI * self.obs_var).ln())
    }

    fn sample_obs<R: Rng + ?Sized>(&self, rng: &mut R, x: &f64) -> f64 {
        x + self.obs_var.sqrt() * rng.sample::<f64, _>(StandardNormal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KalmanEstimate {
    pub mean: f64,
    pub var: f64,
}

/// Exact filtering means and variances for `t = 1..=T`.
pub fn kalman_filter(model: &LinearGaussian, observations: &[f64]) -> Vec<KalmanEstimate> {
    let mut mean = model.initial_mean;
    let mut var = model.initial_var;
    observations
        .iter()
        .map(|&y| {
            mean *= model.a;
            var = model.a * model.a * var + model.process_var;
            let gain = var / (var + model.obs_var);
            mean += gain * (y - mean);
            var *= 1.0 - gain;
            KalmanEstimate { mean, var }
        })
        .collect()
}
