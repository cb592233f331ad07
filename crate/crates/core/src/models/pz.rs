//! Phytoplankton-zooplankton model.
//!
//! Between integer times the state follows
//!
//! ```text
//! dP/dt = alpha P - c P Z
//! dZ/dt = e c P Z - m_l Z - m_q Z^2
//! ```
//!
//! with the growth rate `alpha ~ N(mu, sigma^2)` redrawn at every integer time
//! and held fixed over the unit interval. Observations are log-normal around
//! `P`: `log y ~ N(log P, sigma_y^2)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{ModelError, StateSpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PzParams {
    pub mu: f64,
    pub sigma: f64,
    pub c: f64,
    pub e: f64,
    pub m_l: f64,
    pub m_q: f64,
    pub sigma_y: f64,
}

impl Default for PzParams {
    fn default() -> Self {
        Self {
            mu: 0.4,
            sigma: 0.2,
            c: 0.25,
            e: 0.3,
            m_l: 0.1,
            m_q: 0.1,
            sigma_y: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PzState {
    pub p: f64,
    pub z: f64,
    /// Growth rate used over the interval that ended at this state.
    pub alpha: f64,
}

fn derivative(p: f64, z: f64, alpha: f64, params: &PzParams) -> (f64, f64) {
    let grazing = params.c * p * z;
    (
        alpha * p - grazing,
        params.e * grazing - params.m_l * z - params.m_q * z * z,
    )
}

/// Integrates the ODE over `dt` with `substeps` classical RK4 steps and a
/// fixed growth rate.
pub fn integrate_pz(
    p: f64,
    z: f64,
    alpha: f64,
    params: &PzParams,
    dt: f64,
    substeps: usize,
) -> (f64, f64) {
    let h = dt / substeps.max(1) as f64;
    let (mut p, mut z) = (p, z);
    for _ in 0..substeps.max(1) {
        let (k1p, k1z) = derivative(p, z, alpha, params);
        let (k2p, k2z) = derivative(p + 0.5 * h * k1p, z + 0.5 * h * k1z, alpha, params);
        let (k3p, k3z) = derivative(p + 0.5 * h * k2p, z + 0.5 * h * k2z, alpha, params);
        let (k4p, k4z) = derivative(p + h * k3p, z + h * k3z, alpha, params);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
    }
    (p, z)
}

/// Draws a growth rate and advances the state by `dt`.
pub fn pz_transition<R: Rng + ?Sized>(
    rng: &mut R,
    state: &PzState,
    params: &PzParams,
    dt: f64,
    substeps: usize,
) -> Result<PzState, ModelError> {
    let alpha = params.mu + params.sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
    let (p, z) = integrate_pz(state.p, state.z, alpha, params, dt, substeps);
    if !p.is_finite() || !z.is_finite() {
        return Err(ModelError::NonFinite(format!("P={p}, Z={z}, alpha={alpha}")));
    }
    if p <= 0.0 || z <= 0.0 {
        return Err(ModelError::NonPositive(format!("P={p}, Z={z}, alpha={alpha}")));
    }
    Ok(PzState { p, z, alpha })
}

/// Log-density of the log-normal observation `y` given phytoplankton `P`.
pub fn pz_log_obs_density(y: f64, state: &PzState, params: &PzParams) -> Result<f64, ModelError> {
    if !(y > 0.0) {
        return Err(ModelError::ObservationSupport(y));
    }
    if !(state.p > 0.0) {
        return Err(ModelError::StateSupport(format!("P={}", state.p)));
    }
    let log_y = y.ln();
    let resid = (log_y - state.p.ln()) / params.sigma_y;
    Ok(-0.5 * resid * resid - (params.sigma_y * (2.0 * PI).sqrt()).ln() - log_y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PzModel {
    pub params: PzParams,
    /// RK4 steps per unit of time.
    pub substeps: usize,
}

impl Default for PzModel {
    fn default() -> Self {
        Self {
            params: PzParams::default(),
            substeps: 100,
        }
    }
}

impl StateSpaceModel for PzModel {
    type State = PzState;
    type Obs = f64;

    fn name(&self) -> &'static str {
        "pz"
    }

    fn sample_initial<R: Rng + ?Sized>(&self, rng: &mut R) -> PzState {
        let log2 = 2f64.ln();
        let log_p = Normal::new(log2, 0.2).expect("valid normal").sample(rng);
        let log_z = Normal::new(log2, 0.1).expect("valid normal").sample(rng);
        PzState {
            p: log_p.exp(),
            z: log_z.exp(),
            alpha: self.params.mu,
        }
    }

    fn sample_transition<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        state: &PzState,
    ) -> Result<PzState, ModelError> {
        pz_transition(rng, state, &self.params, 1.0, self.substeps)
    }

    fn log_obs_density(&self, obs: &f64, state: &PzState) -> Result<f64, ModelError> {
        pz_log_obs_density(*obs, state, &self.params)
    }

    fn sample_obs<R: Rng + ?Sized>(&self, rng: &mut R, state: &PzState) -> f64 {
        let noise: f64 = rng.sample(rand_distr::StandardNormal);
        (state.p.ln() + self.params.sigma_y * noise).exp()
    }
}
