use std::f64::consts::PI;

use rand::Rng;

use super::{Family, ThetaDistribution};
use crate::error::{Error, Result};
use crate::series::SeriesPolicy;

/// Inverse-CDF sampling, visiting support points in decreasing pmf order
/// (outward from the mode) so that the expected work is O(1).
pub fn sample_exact<R: Rng + ?Sized>(d: &ThetaDistribution, rng: &mut R) -> i64 {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for step in 0.. {
        // theta_3: 0, 1, -1, 2, -2, ...   theta_2: 0, -1, 1, -2, 2, -3, ...
        let n = match d.family() {
            Family::Theta3 => {
                if step == 0 {
                    0
                } else if step % 2 == 1 {
                    (step + 1) / 2
                } else {
                    -(step / 2)
                }
            }
            Family::Theta2 => {
                if step % 2 == 0 {
                    step / 2
                } else {
                    -(step + 1) / 2
                }
            }
        };
        let p = d.pmf(n);
        acc += p;
        last = n;
        if u < acc || p == 0.0 {
            break;
        }
    }
    last
}

/// Sampling through the infinite sum of independent `+-1/2` Bernoulli
/// variables, truncated once the remaining pairs are nonzero with
/// probability below `policy.tol`.
///
/// Each pair `Z_n^+ + Z_n^-` takes values in `{-1, 0, 1}` (and
/// `-1/2 + Y_0^+` in `{-1, 0}`), so every partial sum is an integer and no
/// resampling is ever needed.
pub fn sample_bernoulli<R: Rng + ?Sized>(d: &ThetaDistribution, rng: &mut R, policy: &SeriesPolicy) -> Result<i64> {
    let c = d.c();
    let offset = match d.family() {
        Family::Theta2 => 0.0,
        Family::Theta3 => 0.5,
    };
    // probability that Z_n^+ = -1/2 (the "flip"), with x = (n - offset) pi c
    let flip = |n: usize| {
        let e = (-2.0 * (n as f64 - offset) * PI * c).exp();
        e / (1.0 + e)
    };
    let ratio = (-2.0 * PI * c).exp();
    let mut n_max = 1;
    // sum_{n > N} 2 flip(n) <= 2 e^{-2 x_{N+1}} / (1 - ratio)
    while 2.0 * (-2.0 * (n_max as f64 + 1.0 - offset) * PI * c).exp() / (1.0 - ratio) >= policy.tol {
        n_max += 1;
        if n_max > policy.max_terms {
            return Err(Error::NonConvergent {
                op: "sample_bernoulli",
                terms: n_max,
            });
        }
    }
    let mut x: i64 = match d.family() {
        Family::Theta2 => {
            if rng.random::<bool>() {
                0
            } else {
                -1
            }
        }
        Family::Theta3 => 0,
    };
    for n in 1..=n_max {
        let p = flip(n);
        // Z_n^+ flips to -1/2, Z_n^- flips to +1/2
        let plus_flipped = rng.random::<f64>() < p;
        let minus_flipped = rng.random::<f64>() < p;
        x += minus_flipped as i64 - plus_flipped as i64;
    }
    Ok(x)
}
