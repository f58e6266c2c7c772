//! Finite-difference fitting of eventually-polynomial integer sequences.
//!
//! A truncated length function `ell(0..=top)` is fitted by locating the
//! smallest order `d` whose forward differences are constant across the last
//! `window` sample points. The fitted degree is the Krull-dimension candidate
//! and the leading coefficient is `constant / d!`, kept as an exact rational.
//! All checks on the fit are exact integer arithmetic; nothing is floated.

use num_rational::Ratio;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("no difference order stabilizes over a window of {window} points ({len} samples)")]
    PrecisionTooLow { window: usize, len: usize },
    #[error("stability window must be at least 2, got {0}")]
    WindowTooSmall(usize),
}

/// A polynomial in the binomial basis anchored at `base`:
/// `P(x) = sum_k newton[k] * C(x - base, k)`, with `newton[k]` the k-th
/// forward difference of the fitted sequence at `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialFit {
    pub degree: usize,
    pub leading: Ratio<i64>,
    pub base: usize,
    pub newton: Vec<i64>,
}

impl PolynomialFit {
    /// Exact evaluation at a nonnegative integer point.
    pub fn eval(&self, n: usize) -> i64 {
        let x = n as i64 - self.base as i64;
        let mut total: i128 = 0;
        for (k, &c) in self.newton.iter().enumerate() {
            total += i128::from(c) * binomial(x, k);
        }
        i64::try_from(total).expect("fit evaluation overflow")
    }
}

/// `C(x, k)` for integer `x` (zero when `0 <= x < k`).
pub fn binomial(x: i64, k: usize) -> i128 {
    let mut num: i128 = 1;
    for i in 0..k {
        num *= i128::from(x) - i as i128;
    }
    num / factorial(k)
}

pub fn factorial(k: usize) -> i128 {
    (1..=k as i128).product::<i128>().max(1)
}

/// Fits `values` (indexed by 0..len) with the given stability window.
///
/// Returns the minimal-order fit; by minimality the stabilized difference is
/// nonzero except in the order-0 case, so `degree` is the true degree of the
/// fitted polynomial (a constant sequence of zeros fits to the zero
/// polynomial with `leading = 0`).
pub fn fit_sequence(values: &[i64], window: usize) -> Result<PolynomialFit, FitError> {
    if window < 2 {
        return Err(FitError::WindowTooSmall(window));
    }
    let len = values.len();
    let mut diffs: Vec<i64> = values.to_vec();
    let mut order = 0usize;
    while diffs.len() >= window {
        let tail = &diffs[diffs.len() - window..];
        if tail.iter().all(|&v| v == tail[0]) {
            // Base point: first index of the constant tail of this order.
            let base = diffs.len() - window;
            let mut newton = Vec::with_capacity(order + 1);
            let mut level: Vec<i64> = values[base..].to_vec();
            for _ in 0..=order {
                newton.push(level[0]);
                level = forward_difference(&level);
            }
            let constant = tail[0];
            let leading = Ratio::new(constant, i64::try_from(factorial(order)).unwrap());
            let fit = PolynomialFit {
                degree: order,
                leading,
                base,
                newton,
            };
            debug_assert!((base..len).all(|n| fit.eval(n) == values[n]));
            return Ok(fit);
        }
        diffs = forward_difference(&diffs);
        order += 1;
    }
    Err(FitError::PrecisionTooLow { window, len })
}

fn forward_difference(v: &[i64]) -> Vec<i64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}
