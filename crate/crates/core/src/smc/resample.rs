use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::FilterError;

/// Ancestor-selection schemes. All three are inverse-CDF samplers over a
/// sorted set of uniforms and return ancestors in ascending order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResamplingScheme {
    /// I.i.d. draws from the weights.
    Multinomial,
    /// One uniform per stratum `((i-1)/N, i/N]`.
    Stratified,
    /// A single uniform offset shared by all strata.
    Systematic,
}

impl ResamplingScheme {
    pub const ALL: [ResamplingScheme; 3] = [Self::Multinomial, Self::Stratified, Self::Systematic];

    pub fn name(self) -> &'static str {
        match self {
            Self::Multinomial => "multinomial",
            Self::Stratified => "stratified",
            Self::Systematic => "systematic",
        }
    }
}

impl std::fmt::Display for ResamplingScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ResamplingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multinomial" => Ok(Self::Multinomial),
            "stratified" => Ok(Self::Stratified),
            "systematic" => Ok(Self::Systematic),
            other => Err(format!(
                "unknown resampling scheme `{other}` (expected multinomial, stratified or systematic)"
            )),
        }
    }
}

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

fn check_weights(weights: &[f64]) -> Result<(), FilterError> {
    if weights.is_empty() {
        return Err(FilterError::Weights("empty weight vector".into()));
    }
    if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
        return Err(FilterError::Weights(format!("weight {} is {w}", i + 1)));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(FilterError::Weights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Sorted positions in `[0, 1)` at which the weight CDF is inverted.
fn sorted_positions<R: Rng + ?Sized>(n: usize, scheme: ResamplingScheme, rng: &mut R) -> Vec<f64> {
    let nf = n as f64;
    match scheme {
        ResamplingScheme::Multinomial => {
            // Normalized partial sums of n+1 exponentials are the order
            // statistics of n uniforms.
            let mut acc = 0.0;
            let mut cum: Vec<f64> = (0..n)
                .map(|_| {
                    acc += rng.sample::<f64, _>(Exp1);
                    acc
                })
                .collect();
            let total = acc + rng.sample::<f64, _>(Exp1);
            for c in &mut cum {
                *c /= total;
            }
            cum
        }
        ResamplingScheme::Stratified => (0..n).map(|i| (i as f64 + rng.random::<f64>()) / nf).collect(),
        ResamplingScheme::Systematic => {
            let u: f64 = rng.random();
            (0..n).map(|i| (i as f64 + u) / nf).collect()
        }
    }
}

/// Draws `N` ancestor indices (1-based, ascending) from normalized weights.
pub fn resample<R: Rng + ?Sized>(
    weights: &[f64],
    scheme: ResamplingScheme,
    rng: &mut R,
) -> Result<Vec<usize>, FilterError> {
    check_weights(weights)?;
    let n = weights.len();
    let last_positive = weights.iter().rposition(|&w| w > 0.0).unwrap_or(n - 1);
    let positions = sorted_positions(n, scheme, rng);

    let mut ancestors = Vec::with_capacity(n);
    let mut j = 0usize;
    let mut cdf = weights[0];
    for u in positions {
        while u >= cdf && j < last_positive {
            j += 1;
            cdf += weights[j];
        }
        ancestors.push(j + 1);
    }
    Ok(ancestors)
}

/// `o[i] = #{k : ancestors[k] = i}` for `i = 1..=n`.
pub fn offspring_counts(ancestors: &[usize], n: usize) -> Result<Vec<usize>, FilterError> {
    let mut counts = vec![0usize; n];
    for (k, &a) in ancestors.iter().enumerate() {
        if a == 0 || a > n {
            return Err(FilterError::AncestorRange {
                position: k + 1,
                index: a,
                particles: n,
            });
        }
        counts[a - 1] += 1;
    }
    Ok(counts)
}
