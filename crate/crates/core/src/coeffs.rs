//! Slack coefficients of the regular n-gon.
//!
//! For the n-gon inscribed in the unit circle, the slack of vertex k against a
//! facet whose endpoints are vertices 0 and n-1 is
//!
//! ```text
//! c_k = cos(pi/n) - cos((2k+1) pi/n) = 2 sin(k pi/n) sin((k+1) pi/n).
//! ```
//!
//! The function extends to all integers k and satisfies, exactly,
//! c_{k+n} = c_k, c_k = c_{n-1-k} and hence c_{-k} = c_{k-1}. Evaluation uses
//! the product form after exact index reduction so that analytically equal
//! coefficients compare bitwise equal and the analytic zeros c_0 = c_{n-1} = 0
//! come out as exact zeros.

use crate::error::{Error, Result};

/// The coefficient function c_k of a fixed regular n-gon, defined for every
/// integer k.
#[derive(Clone, Debug)]
pub struct CoefficientFn {
    n: usize,
    table: Vec<f64>,
}

impl CoefficientFn {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!(
                "slack coefficients need n >= 3, got {n}"
            )));
        }
        let step = std::f64::consts::PI / n as f64;
        let table = (0..n)
            .map(|m| {
                // c_m = c_{n-1-m}; fold into the range where both sine
                // arguments stay in [0, pi/2 + pi/n].
                let a = m.min(n - 1 - m) as f64;
                2.0 * (a * step).sin() * ((a + 1.0) * step).sin()
            })
            .collect();
        Ok(Self { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// c_1, the smallest nonzero coefficient.
    pub fn c1(&self) -> f64 {
        self.table[1 % self.n]
    }

    /// Length-n table of c_0..c_{n-1}, for hot loops that fold indices
    /// themselves.
    pub(crate) fn table(&self) -> &[f64] {
        &self.table
    }

    /// Evaluates c_k for any integer k.
    #[inline]
    pub fn eval(&self, k: i64) -> f64 {
        let n = self.n as i64;
        let mut m = k;
        if m < -4 * n || m >= 4 * n {
            m = m.rem_euclid(n);
        } else {
            while m < 0 {
                m += n;
            }
            while m >= n {
                m -= n;
            }
        }
        self.table[m as usize]
    }
}

/// The slack coefficient c_k of the regular n-gon.
pub fn slack_coefficient(n: usize, k: i64) -> Result<f64> {
    Ok(CoefficientFn::new(n)?.eval(k))
}
