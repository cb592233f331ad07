//! The deterministic majorant of `E[K_k]`.
//!
//! `g(x) = x - eps^2/(2N) x(x-1) + eps^3/(6N^2) x(x-1)(x-2)` bounds the
//! conditional expectation of the next ancestor count; iterating it from
//! `u_0 = N` gives a sequence whose excess `sum (u_k - 1)` controls the
//! crown size.

use super::TheoryError;

fn check_params(n: usize, epsilon: f64) -> Result<(), TheoryError> {
    if n < 3 {
        return Err(TheoryError::Params(format!("need N >= 3, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(TheoryError::Params(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    Ok(())
}

fn g_unchecked(n: f64, eps: f64, x: f64) -> f64 {
    x - eps * eps / (2.0 * n) * x * (x - 1.0) + eps.powi(3) / (6.0 * n * n) * x * (x - 1.0) * (x - 2.0)
}

pub fn g_n_eps(n: usize, epsilon: f64, x: f64) -> Result<f64, TheoryError> {
    check_params(n, epsilon)?;
    if !(1.0..=n as f64).contains(&x) {
        return Err(TheoryError::Params(format!("x = {x} outside [1, {n}]")));
    }
    Ok(g_unchecked(n as f64, epsilon, x))
}

/// The iterates and their excess over 1.
#[derive(Debug, Clone, PartialEq)]
pub struct USequence {
    /// `u_0 = N, u_1, ...`, stopping at the first term with `u_k - 1 < tol`.
    pub values: Vec<f64>,
    /// `sum (u_k - 1)` over the stored terms.
    pub partial_sum: f64,
    /// Geometric upper bound on the remaining terms (ratio `1 - eps^2/(2N)`).
    pub tail_bound: f64,
}

impl USequence {
    /// Upper estimate of the full series `sum_{k>=0} (u_k - 1)`.
    pub fn total(&self) -> f64 {
        self.partial_sum + self.tail_bound
    }
}

/// Summary of the series without the stored iterates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct USeriesSum {
    pub steps: usize,
    pub partial_sum: f64,
    pub tail_bound: f64,
}

impl USeriesSum {
    pub fn total(&self) -> f64 {
        self.partial_sum + self.tail_bound
    }
}

fn iterate(n: usize, epsilon: f64, tol: f64, mut visit: impl FnMut(f64)) -> Result<USeriesSum, TheoryError> {
    check_params(n, epsilon)?;
    if !(tol > 0.0) {
        return Err(TheoryError::Params(format!("tol must be positive, got {tol}")));
    }
    let nf = n as f64;
    let a = epsilon * epsilon / (2.0 * nf);
    let b = epsilon.powi(3) / (6.0 * nf * nf);
    // Iterate on v = u - 1: near the fixed point the decrements fall below
    // the spacing of doubles around 1, so u itself would stall.
    let mut v = nf - 1.0;
    let mut sum = 0.0;
    let mut steps = 0usize;
    loop {
        visit(1.0 + v);
        sum += v;
        steps += 1;
        if v < tol {
            break;
        }
        v *= 1.0 - a * (1.0 + v) + b * (1.0 + v) * (v - 1.0);
    }
    // Below 2 the cubic term is nonpositive, so v shrinks at least
    // geometrically with ratio r.
    let r = 1.0 - a;
    let tail_bound = v * r / (1.0 - r);
    Ok(USeriesSum {
        steps,
        partial_sum: sum,
        tail_bound,
    })
}

pub fn u_sequence(n: usize, epsilon: f64, tol: f64) -> Result<USequence, TheoryError> {
    let mut values = Vec::new();
    let s = iterate(n, epsilon, tol, |u| values.push(u))?;
    Ok(USequence {
        values,
        partial_sum: s.partial_sum,
        tail_bound: s.tail_bound,
    })
}

/// Same series as [`u_sequence`] without keeping the iterates.
pub fn u_series_sum(n: usize, epsilon: f64, tol: f64) -> Result<USeriesSum, TheoryError> {
    iterate(n, epsilon, tol, |_| {})
}
