use rand::Rng;

use super::{ModelError, StateSpaceModel};

/// Equal-weights model: constant observation density and a token state.
///
/// Under multinomial resampling its genealogy is the neutral (uniform
/// weights) coalescent, which makes it the reference model for the
/// coalescence-theory checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Neutral;

impl StateSpaceModel for Neutral {
    type State = ();
    type Obs = ();

    fn name(&self) -> &'static str {
        "neutral"
    }

    fn sample_initial<R: Rng + ?Sized>(&self, _rng: &mut R) {}

    fn sample_transition<R: Rng + ?Sized>(&self, _rng: &mut R, _state: &()) -> Result<(), ModelError> {
        Ok(())
    }

    fn log_obs_density(&self, _obs: &(), _state: &()) -> Result<f64, ModelError> {
        Ok(0.0)
    }

    fn sample_obs<R: Rng + ?Sized>(&self, _rng: &mut R, _state: &()) {}
}
