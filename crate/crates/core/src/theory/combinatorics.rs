//! Log-space combinatorics: Stirling numbers of the second kind, falling
//! factorials and binomial coefficients.

use super::TheoryError;

/// `log(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `log(sum(exp(terms)))`, shifting by the largest term.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `k * ln(x)` with the convention `0 * ln(0) = 0`.
pub(crate) fn k_ln(k: usize, x: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

/// Table of `ln k!` for `k = 0..=max`.
#[derive(Debug, Clone)]
pub struct LogFactorials(Vec<f64>);

impl LogFactorials {
    pub fn new(max: usize) -> Self {
        let mut v = Vec::with_capacity(max + 1);
        v.push(0.0);
        let mut acc = 0.0;
        for k in 1..=max {
            acc += (k as f64).ln();
            v.push(acc);
        }
        Self(v)
    }

    pub fn ln_factorial(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        self.0[n] - self.0[k] - self.0[n - k]
    }

    /// `ln (n)_k = ln n!/(n-k)!`; `-inf` when `k > n`.
    pub fn ln_falling(&self, n: usize, k: usize) -> f64 {
        if k > n {
            f64::NEG_INFINITY
        } else {
            self.0[n] - self.0[n - k]
        }
    }
}

/// `ln S(q, p)` for all `0 <= p <= q <= max_q`, built with the recurrence
/// `S(q, p) = p S(q-1, p) + S(q-1, p-1)` in log space.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    max_q: usize,
    rows: Vec<f64>,
}

impl StirlingTable {
    pub fn new(max_q: usize) -> Self {
        let mut rows = Vec::with_capacity((max_q + 1) * (max_q + 2) / 2);
        rows.push(0.0); // S(0,0) = 1
        for q in 1..=max_q {
            let prev = (q - 1) * q / 2;
            for p in 0..=q {
                let stay = if p < q { (p as f64).ln() + rows[prev + p] } else { f64::NEG_INFINITY };
                let stay = if p == 0 { f64::NEG_INFINITY } else { stay };
                let grow = if p >= 1 { rows[prev + p - 1] } else { f64::NEG_INFINITY };
                rows.push(log_add_exp(stay, grow));
            }
        }
        Self { max_q, rows }
    }

    pub fn max_q(&self) -> usize {
        self.max_q
    }

    /// `ln S(q, p)`; `-inf` for `p > q` or `p = 0 < q`.
    pub fn ln(&self, q: usize, p: usize) -> f64 {
        assert!(q <= self.max_q, "q={q} beyond table size {}", self.max_q);
        if p > q {
            f64::NEG_INFINITY
        } else {
            self.rows[q * (q + 1) / 2 + p]
        }
    }
}

/// `ln S(q, p)` for `1 <= p <= q`.
pub fn log_stirling2(q: usize, p: usize) -> Result<f64, TheoryError> {
    if p < 1 || p > q {
        return Err(TheoryError::StirlingArgs { q, p });
    }
    // Only the last q-p+1 columns of each row are ever needed; keep a rolling row.
    let mut row = vec![f64::NEG_INFINITY; p + 1];
    row[0] = 0.0;
    for r in 1..=q {
        for k in (1..=p.min(r)).rev() {
            let stay = if k < r { (k as f64).ln() + row[k] } else { f64::NEG_INFINITY };
            row[k] = log_add_exp(stay, row[k - 1]);
        }
        row[0] = f64::NEG_INFINITY;
    }
    Ok(row[p])
}
