//! Backward-in-time ancestor-count chains.
//!
//! Looking back from the final generation, `K_k` counts the distinct
//! generation-`T-k` ancestors of the `N` leaves under the weight-agnostic
//! approximation `A'` of multinomial resampling; `Z_k` is the same count
//! with uniform weights; `L_k` dominates `K_k` while only ever stepping
//! down by one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::combinatorics::{k_ln, log_sum_exp, LogFactorials, StirlingTable};
use super::TheoryError;

/// Particle count `N` and weight-ratio bound `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    n: usize,
    epsilon: f64,
}

impl ChainParams {
    pub fn new(n: usize, epsilon: f64) -> Result<Self, TheoryError> {
        if n < 1 {
            return Err(TheoryError::Params(format!("N must be >= 1, got {n}")));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(TheoryError::Params(format!("epsilon must lie in [0, 1], got {epsilon}")));
        }
        Ok(Self { n, epsilon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `1 + 8 / epsilon`.
    pub fn delta1(&self) -> f64 {
        1.0 + 8.0 / self.epsilon
    }

    fn check_q(&self, q: usize) -> Result<(), TheoryError> {
        if q < 1 || q > self.n {
            Err(TheoryError::StateOutOfRange { q, n: self.n })
        } else {
            Ok(())
        }
    }
}

/// Transition law from state `q`: `probs[p - 1] = P(next = p | current = q)`
/// for `p = 1..=q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLaw {
    pub q: usize,
    pub probs: Vec<f64>,
}

impl ChainLaw {
    pub fn prob(&self, p: usize) -> f64 {
        if p == 0 || p > self.q {
            0.0
        } else {
            self.probs[p - 1]
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum()
    }

    /// Draws the next state by inversion.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random::<f64>() * self.total();
        let mut acc = 0.0;
        for (i, w) in self.probs.iter().enumerate() {
            acc += w;
            if u < acc {
                return i + 1;
            }
        }
        self.probs.iter().rposition(|&w| w > 0.0).map_or(self.q, |i| i + 1)
    }
}

/// Precomputed tables for the transition laws at fixed `(N, epsilon)`.
#[derive(Debug, Clone)]
pub struct ChainLaws {
    params: ChainParams,
    factorials: LogFactorials,
    stirling: StirlingTable,
}

impl ChainLaws {
    pub fn new(params: ChainParams) -> Self {
        Self {
            params,
            factorials: LogFactorials::new(params.n),
            stirling: StirlingTable::new(params.n),
        }
    }

    /// Tables sufficient for rows `q <= max_q` only.
    fn up_to(params: ChainParams, max_q: usize) -> Self {
        Self {
            params,
            factorials: LogFactorials::new(params.n),
            stirling: StirlingTable::new(max_q.min(params.n)),
        }
    }

    pub fn params(&self) -> ChainParams {
        self.params
    }

    /// `ln [ C(q, q') eps^q' (1-eps)^(q-q') ]`.
    fn ln_split(&self, q: usize, q_unif: usize) -> f64 {
        let eps = self.params.epsilon;
        self.factorials.ln_binomial(q, q_unif) + k_ln(q_unif, eps) + k_ln(q - q_unif, 1.0 - eps)
    }

    /// `ln [ S(q', p') (N)_p' / N^q' ]`: `q'` uniform draws land on exactly
    /// `p'` distinct values.
    fn ln_distinct(&self, draws: usize, distinct: usize) -> f64 {
        let n = self.params.n;
        self.stirling.ln(draws, distinct) + self.factorials.ln_falling(n, distinct)
            - k_ln(draws, n as f64)
    }

    /// `p_{N,q} = P(K_{k+1} = q | K_k = q)`.
    pub fn p_nq(&self, q: usize) -> Result<f64, TheoryError> {
        self.params.check_q(q)?;
        Ok(p_nq_value(&self.factorials, self.params, q))
    }

    /// `1 - p_{N,q}`, summed term by term to avoid cancellation.
    pub fn one_minus_p_nq(&self, q: usize) -> Result<f64, TheoryError> {
        self.params.check_q(q)?;
        Ok(one_minus_p_nq(&self.factorials, self.params, q))
    }

    /// Row `q` of the `K`-chain transition matrix.
    pub fn k_row(&self, q: usize) -> Result<ChainLaw, TheoryError> {
        self.params.check_q(q)?;
        let mut probs = Vec::with_capacity(q);
        for p in 1..q {
            // At least q-p+1 lineages must pick uniformly; of those q',
            // p' = q'-q+p stay distinct.
            let terms: Vec<f64> = (q - p + 1..=q)
                .map(|qu| self.ln_split(q, qu) + self.ln_distinct(qu, qu + p - q))
                .collect();
            probs.push(log_sum_exp(&terms).exp());
        }
        probs.push(self.p_nq(q)?);
        Ok(ChainLaw { q, probs })
    }

    /// Row `q` of the `Z`-chain: `S(q, p) (N)_p / N^q`.
    pub fn z_row(&self, q: usize) -> Result<ChainLaw, TheoryError> {
        self.params.check_q(q)?;
        let probs = (1..=q).map(|p| self.ln_distinct(q, p).exp()).collect();
        Ok(ChainLaw { q, probs })
    }
}

fn one_minus_p_nq(lf: &LogFactorials, params: ChainParams, q: usize) -> f64 {
    let n = params.n;
    let eps = params.epsilon;
    // ln((N)_q' / N^q') accumulated as sum of ln(1 - i/N).
    let mut ln_distinct = 0.0;
    let mut total = 0.0;
    for qu in 1..=q {
        ln_distinct += (-((qu - 1) as f64) / n as f64).ln_1p();
        let split = (lf.ln_binomial(q, qu) + k_ln(qu, eps) + k_ln(q - qu, 1.0 - eps)).exp();
        total += split * -ln_distinct.exp_m1();
    }
    total
}

/// Sums the terms directly when the result is small and takes the
/// complement of [`one_minus_p_nq`] otherwise, so both tails keep their
/// relative accuracy.
fn p_nq_value(lf: &LogFactorials, params: ChainParams, q: usize) -> f64 {
    let n = params.n as f64;
    let eps = params.epsilon;
    let mut ln_distinct = 0.0;
    let mut terms = Vec::with_capacity(q + 1);
    for qu in 0..=q {
        if qu > 0 {
            ln_distinct += (-((qu - 1) as f64) / n).ln_1p();
        }
        terms.push(lf.ln_binomial(q, qu) + k_ln(qu, eps) + k_ln(q - qu, 1.0 - eps) + ln_distinct);
    }
    let direct = log_sum_exp(&terms).exp();
    if direct < 0.5 {
        direct
    } else {
        1.0 - one_minus_p_nq(lf, params, q)
    }
}

/// `p_{N,q}`: probability that `q` lineages keep `q` distinct ancestors.
pub fn p_nq(params: ChainParams, q: usize) -> Result<f64, TheoryError> {
    params.check_q(q)?;
    Ok(p_nq_value(&LogFactorials::new(params.n), params, q))
}

pub fn k_transition_row(params: ChainParams, q: usize) -> Result<ChainLaw, TheoryError> {
    params.check_q(q)?;
    ChainLaws::up_to(params, q).k_row(q)
}

pub fn z_transition_row(n: usize, q: usize) -> Result<ChainLaw, TheoryError> {
    let params = ChainParams::new(n, 1.0)?;
    params.check_q(q)?;
    ChainLaws::up_to(params, q).z_row(q)
}

/// `E[Z_{k+1} | Z_k = q] = N - N (1 - 1/N)^q`.
pub fn z_expected_next(n: usize, q: usize) -> Result<f64, TheoryError> {
    ChainParams::new(n, 1.0)?.check_q(q)?;
    let nf = n as f64;
    Ok(-nf * (q as f64 * (-1.0 / nf).ln_1p()).exp_m1())
}

/// One step of the `A'` construction restricted to `q` lineages: each
/// lineage picks a uniform ancestor with probability `epsilon`, the others
/// take the smallest values not yet used. Returns the number of distinct
/// ancestors.
pub fn simulate_aprime_image<R: Rng + ?Sized>(
    params: ChainParams,
    q: usize,
    rng: &mut R,
) -> Result<usize, TheoryError> {
    params.check_q(q)?;
    let n = params.n;
    let mut used = vec![false; n];
    let mut deterministic = 0usize;
    for _ in 0..q {
        if rng.random::<f64>() < params.epsilon {
            used[rng.random_range(0..n)] = true;
        } else {
            deterministic += 1;
        }
    }
    let mut next_free = 0usize;
    for _ in 0..deterministic {
        while used[next_free] {
            next_free += 1;
        }
        used[next_free] = true;
    }
    Ok(used.iter().filter(|&&u| u).count())
}

/// `E[D] = sum_{q=2}^N 1 / (1 - p_{N,q})`: expected hitting time of 1 for
/// the dominating chain `L`, started at `N`.
pub fn expected_coalescence_bound(params: ChainParams) -> Result<f64, TheoryError> {
    if params.n < 2 {
        return Err(TheoryError::Params(format!("need N >= 2, got {}", params.n)));
    }
    if params.epsilon == 0.0 {
        return Err(TheoryError::InfiniteExpectation);
    }
    let lf = LogFactorials::new(params.n);
    Ok((2..=params.n).map(|q| 1.0 / one_minus_p_nq(&lf, params, q)).sum())
}

/// Decrease probabilities `1 - p_{N,q}` of the `L` chain, indexed by `q`.
fn l_decrease_probs(params: ChainParams) -> Vec<f64> {
    let lf = LogFactorials::new(params.n);
    (0..=params.n)
        .map(|q| if q < 1 { 0.0 } else { one_minus_p_nq(&lf, params, q) })
        .collect()
}

/// Steps the `L` chain from `N` until it reaches 1; returns the number of
/// steps taken.
pub fn simulate_l_hitting<R: Rng + ?Sized>(params: ChainParams, rng: &mut R) -> Result<usize, TheoryError> {
    if params.epsilon == 0.0 && params.n > 1 {
        return Err(TheoryError::InfiniteExpectation);
    }
    let down = l_decrease_probs(params);
    Ok(l_hitting_with(&down, params.n, rng))
}

fn l_hitting_with<R: Rng + ?Sized>(down: &[f64], n: usize, rng: &mut R) -> usize {
    let mut q = n;
    let mut steps = 0;
    while q > 1 {
        steps += 1;
        if rng.random::<f64>() < down[q] {
            q -= 1;
        }
    }
    steps
}

/// Repeated `L`-chain hitting-time simulation sharing one table.
pub fn simulate_l_hitting_many<R: Rng + ?Sized>(
    params: ChainParams,
    reps: usize,
    rng: &mut R,
) -> Result<Vec<usize>, TheoryError> {
    if params.epsilon == 0.0 && params.n > 1 {
        return Err(TheoryError::InfiniteExpectation);
    }
    let down = l_decrease_probs(params);
    Ok((0..reps).map(|_| l_hitting_with(&down, params.n, rng)).collect())
}

/// Jointly simulated `K` and `L` trajectories, both started at `N` and run
/// until `L` reaches 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPath {
    pub k: Vec<usize>,
    pub l: Vec<usize>,
}

impl CoupledPath {
    pub fn dominated(&self) -> bool {
        self.k.iter().zip(&self.l).all(|(k, l)| l >= k)
    }
}

/// Couples the chains: while `L = K` they decrease together (`L` by one),
/// otherwise they move independently.
pub fn simulate_coupled<R: Rng + ?Sized>(params: ChainParams, rng: &mut R) -> Result<CoupledPath, TheoryError> {
    if params.epsilon == 0.0 && params.n > 1 {
        return Err(TheoryError::InfiniteExpectation);
    }
    let down = l_decrease_probs(params);
    let (mut k, mut l) = (params.n, params.n);
    let mut path = CoupledPath {
        k: vec![k],
        l: vec![l],
    };
    while l > 1 {
        let k_next = simulate_aprime_image(params, k, rng)?;
        let l_next = if l == k {
            if k_next < k {
                l - 1
            } else {
                l
            }
        } else if rng.random::<f64>() < down[l] {
            l - 1
        } else {
            l
        };
        k = k_next;
        l = l_next;
        path.k.push(k);
        path.l.push(l);
    }
    Ok(path)
}
