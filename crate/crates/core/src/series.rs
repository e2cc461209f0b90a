//! Truncation contract for every infinite series in the crate.
//!
//! A series is summed term by term together with an *envelope*, an upper
//! bound on the magnitude of each term that does not depend on oscillating
//! factors. Once the envelope is decreasing with a non-increasing ratio
//! `rho`, the remaining tail is bounded by `env * rho / (1 - rho)`, and
//! summation stops as soon as that bound drops below the tolerance.
//! Gaussian envelopes (`exp(-a n^2)` times a polynomial) satisfy the ratio
//! condition past their peak, which covers every theta-type series here.

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    /// Absolute bound on the discarded tail.
    pub tol: f64,
    /// Hard cap on the number of terms before giving up.
    pub max_terms: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

impl SeriesPolicy {
    pub fn new(tol: f64, max_terms: usize) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::domain(
                "SeriesPolicy::new",
                format!("tol must be positive, got {tol}"),
            ));
        }
        if max_terms == 0 {
            return Err(Error::domain("SeriesPolicy::new", "max_terms must be positive"));
        }
        Ok(SeriesPolicy { tol, max_terms })
    }

    pub fn with_tol(self, tol: f64) -> Self {
        SeriesPolicy { tol, ..self }
    }

    /// Sums `term(n)` for `n = start, start + 1, ...`.
    ///
    /// The closure returns `(term, envelope)` with `|term| <= envelope`.
    pub fn sum<F>(&self, op: &'static str, start: i64, term: F) -> Result<f64>
    where
        F: FnMut(i64) -> (f64, f64),
    {
        self.sum_to(op, start, self.tol, term)
    }

    /// Sums over all of `Z` as the two one-sided series `n >= 0` and
    /// `n <= -1`, each truncated at half the tolerance.
    pub fn sum_z<F>(&self, op: &'static str, mut term: F) -> Result<f64>
    where
        F: FnMut(i64) -> (f64, f64),
    {
        let half = 0.5 * self.tol;
        let upper = self.sum_to(op, 0, half, &mut term)?;
        let lower = self.sum_to(op, 1, half, |m| term(-m))?;
        Ok(upper + lower)
    }

    pub(crate) fn sum_to<F>(&self, op: &'static str, start: i64, tol: f64, mut term: F) -> Result<f64>
    where
        F: FnMut(i64) -> (f64, f64),
    {
        let mut acc = Neumaier::default();
        let mut prev_env = f64::INFINITY;
        let mut prev_ratio = f64::INFINITY;
        for i in 0..self.max_terms {
            let n = start + i as i64;
            let (t, env) = term(n);
            if !t.is_finite() {
                return Err(Error::Overflow { op });
            }
            acc.add(t);
            if env == 0.0 {
                // Envelopes are unimodal: underflow after a nonzero term ends the
                // sum, underflow before the peak does not.
                // A run of leading underflows means the whole tail has underflowed.
                if (prev_env > 0.0 && prev_env.is_finite()) || i >= LEADING_UNDERFLOW_LIMIT {
                    return Ok(acc.total());
                }
                prev_env = 0.0;
                continue;
            }
            let ratio = if prev_env > 0.0 && prev_env.is_finite() {
                env / prev_env
            } else {
                f64::INFINITY
            };
            if ratio < 1.0 && ratio <= prev_ratio && env * ratio / (1.0 - ratio) <= tol {
                return Ok(acc.total());
            }
            prev_ratio = ratio;
            prev_env = env;
        }
        Err(Error::NonConvergent {
            op,
            terms: self.max_terms,
        })
    }
}

/// Leading terms that may underflow before a series is declared zero.
const LEADING_UNDERFLOW_LIMIT: usize = 64;

/// Compensated (Kahan–Babuška–Neumaier) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Neumaier>().total()
}
