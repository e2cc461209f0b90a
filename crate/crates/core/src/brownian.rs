//! Brownian motion on `[-1, 1]`, reflected or killed at the endpoints.
//!
//! Densities are taken with respect to the speed measure `m(dy) = 2 dy`; use
//! [`lebesgue_density`] for the density with respect to `dy`. Every kernel is
//! available as a Gaussian image sum and as an eigenfunction expansion. The
//! image sums converge fast for small `t`, the spectral sums for large `t`;
//! neither route is ever substituted for the other.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::SeriesPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProcessKind {
    Reflected,
    Killed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MethodKind {
    Images,
    Spectral,
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessKind::Reflected => "reflected",
            ProcessKind::Killed => "killed",
        })
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodKind::Images => "images",
            MethodKind::Spectral => "spectral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityQuery {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl DensityQuery {
    pub fn new(t: f64, x: f64, y: f64) -> Result<Self> {
        check_time("DensityQuery::new", t)?;
        check_point("DensityQuery::new", x)?;
        check_point("DensityQuery::new", y)?;
        Ok(DensityQuery { t, x, y })
    }
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(op, format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn check_point(op: &'static str, x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::domain(op, format!("point must lie in [-1,1], got {x}")));
    }
    Ok(())
}

/// `lambda_n = n^2 pi^2 / 8`, the eigenvalues of `(1/2) d^2/dx^2` on `[-1,1]`.
fn eigenvalue(n: f64) -> f64 {
    n * n * PI * PI / 8.0
}

/// Transition density with respect to `2 dy`.
pub fn density(proc: ProcessKind, method: MethodKind, q: &DensityQuery, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "density";
    let DensityQuery { t, x, y } = *q;
    match method {
        MethodKind::Images => {
            let pre = 0.5 / (2.0 * PI * t).sqrt();
            let sign = match proc {
                ProcessKind::Reflected => 1.0,
                ProcessKind::Killed => -1.0,
            };
            let s = policy.with_tol(policy.tol / pre.max(1.0)).sum_z(OP, |n| {
                let n4 = 4.0 * n as f64;
                let a = (-(x - y + n4).powi(2) / (2.0 * t)).exp();
                let b = (-(x + y + n4 + 2.0).powi(2) / (2.0 * t)).exp();
                (a + sign * b, a + b)
            })?;
            Ok(pre * s)
        }
        MethodKind::Spectral => {
            let (px, py) = (PI * (x + 1.0) / 2.0, PI * (y + 1.0) / 2.0);
            let tail = policy.sum(OP, 1, |n| {
                let m = n as f64;
                let env = 0.5 * (-eigenvalue(m) * t).exp();
                let modes = match proc {
                    ProcessKind::Reflected => (m * px).cos() * (m * py).cos(),
                    ProcessKind::Killed => (m * px).sin() * (m * py).sin(),
                };
                (env * modes, env)
            })?;
            Ok(match proc {
                ProcessKind::Reflected => 0.25 + tail,
                ProcessKind::Killed => tail,
            })
        }
    }
}

/// Transition density with respect to Lebesgue measure `dy`.
pub fn lebesgue_density(proc: ProcessKind, method: MethodKind, q: &DensityQuery, policy: &SeriesPolicy) -> Result<f64> {
    Ok(2.0 * density(proc, method, q, policy)?)
}

fn check_alpha(op: &'static str, alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain(op, format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

/// Bernoulli polynomial `B_2` on `[0,1)`.
fn bernoulli2(u: f64) -> f64 {
    u * u - u + 1.0 / 6.0
}

/// Bernoulli polynomial `B_4` on `[0,1)`.
fn bernoulli4(u: f64) -> f64 {
    let u2 = u * u;
    u2 * u2 - 2.0 * u2 * u + u2 - 1.0 / 30.0
}

/// `sum_{n>=1} cos(2 pi n u) / (alpha + lambda_n)`.
///
/// Split `1/(a+l) = 1/l - a/l^2 + a^2/(l^2 (a+l))`; the first two sums are
/// Fourier series of Bernoulli polynomials and the remainder decays like
/// `n^-6`, so it is truncated by an integral tail bound.
fn resolvent_cosine_sum(alpha: f64, u: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "green";
    let u = u.rem_euclid(1.0);
    // sum cos(2 pi n u)/n^2 = pi^2 B_2(u), sum cos(2 pi n u)/n^4 = -pi^4 B_4(u)/3
    let first = 8.0 * bernoulli2(u);
    let second = 64.0 / 3.0 * alpha * bernoulli4(u);
    // |remainder term| <= a^2 (8/pi^2)^3 / n^6, whose tail past N is below
    // a^2 (8/pi^2)^3 / (5 N^5)
    let c = alpha * alpha * (8.0 / (PI * PI)).powi(3);
    let n_max = (c / (5.0 * policy.tol)).powf(0.2).ceil().max(1.0);
    if n_max > policy.max_terms as f64 {
        return Err(Error::NonConvergent {
            op: OP,
            terms: policy.max_terms,
        });
    }
    let mut acc = crate::series::Neumaier::default();
    for n in 1..=n_max as usize {
        let l = eigenvalue(n as f64);
        acc.add((2.0 * PI * n as f64 * u).cos() / (l * l * (alpha + l)));
    }
    Ok(first + second + alpha * alpha * acc.total())
}

/// Green function `int_0^inf e^{-alpha t} p(t; x, y) dt`.
///
/// `Images` gives the hyperbolic closed form (the Laplace transform of the
/// image sum); `Spectral` gives the eigenvalue sum.
pub fn green(proc: ProcessKind, method: MethodKind, alpha: f64, x: f64, y: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "green";
    check_alpha(OP, alpha)?;
    check_point(OP, x)?;
    check_point(OP, y)?;
    let (x, y) = if y <= x { (x, y) } else { (y, x) };
    match method {
        MethodKind::Images => {
            let s = (2.0 * alpha).sqrt();
            let (a, b) = ((1.0 - x) * s, (1.0 + y) * s);
            // e^{a+b-2s} (1 +- e^{-2a}) (1 +- e^{-2b}) / (2 s (1 - e^{-4s}))
            let lead = (a + b - 2.0 * s).exp() / (2.0 * s * -(-4.0 * s).exp_m1());
            Ok(match proc {
                ProcessKind::Reflected => lead * (1.0 + (-2.0 * a).exp()) * (1.0 + (-2.0 * b).exp()),
                ProcessKind::Killed => lead * (-2.0 * a).exp_m1() * (-2.0 * b).exp_m1(),
            })
        }
        MethodKind::Spectral => {
            let s1 = resolvent_cosine_sum(alpha, (x - y) / 4.0, policy)?;
            let s2 = resolvent_cosine_sum(alpha, (x + y + 2.0) / 4.0, policy)?;
            Ok(match proc {
                ProcessKind::Reflected => 0.5 * (0.5 / alpha + 0.5 * (s1 + s2)),
                ProcessKind::Killed => 0.25 * (s1 - s2),
            })
        }
    }
}

/// `P(H > t)` for the exit time `H` of `(-1, 1)` from 0, by the spectral
/// series; falls back to [`exit_survival_images`] when `t` is so small that
/// the spectral series exhausts the policy.
pub fn exit_survival(t: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "exit_survival";
    check_time(OP, t)?;
    let spectral = policy.sum(OP, 0, |n| {
        let m = (2 * n + 1) as f64;
        let env = 4.0 / (m * PI) * (-m * m * PI * PI * t / 8.0).exp();
        (if n % 2 == 0 { env } else { -env }, env)
    });
    match spectral {
        Err(Error::NonConvergent { .. }) => exit_survival_images(t, policy),
        other => other.map(|v| v.clamp(0.0, 1.0)),
    }
}

/// `P(H > t) = 1 - 2 sum_{k>=0} (-1)^k erfc((2k+1)/sqrt(2t))`, the integral
/// of the killed image kernel.
pub fn exit_survival_images(t: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "exit_survival_images";
    check_time(OP, t)?;
    let s = policy.sum(OP, 0, |k| {
        let v = 2.0 * libm::erfc((2 * k + 1) as f64 / (2.0 * t).sqrt());
        (if k % 2 == 0 { v } else { -v }, v)
    })?;
    Ok((1.0 - s).clamp(0.0, 1.0))
}

/// Density of the exit time `H` from 0.
pub fn exit_density(method: MethodKind, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "exit_density";
    check_time(OP, t)?;
    match method {
        MethodKind::Spectral => policy.sum(OP, 0, |n| {
            let m = (2 * n + 1) as f64;
            let env = PI / 2.0 * m * (-m * m * PI * PI * t / 8.0).exp();
            (if n % 2 == 0 { env } else { -env }, env)
        }),
        MethodKind::Images => {
            // the n and -1-n terms of the sum over Z coincide
            let pre = 2.0 / (2.0 * PI * t.powi(3)).sqrt();
            let s = policy.with_tol(policy.tol / pre.max(1.0)).sum(OP, 0, |n| {
                let m = (2 * n + 1) as f64;
                let env = m * (-m * m / (2.0 * t)).exp();
                (if n % 2 == 0 { env } else { -env }, env)
            })?;
            Ok(pre * s)
        }
    }
}

/// Density of the first hitting time of 1 by a 3-dimensional Bessel process
/// started at 0.
pub fn bessel3_hit_density(method: MethodKind, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "bessel3_hit_density";
    check_time(OP, t)?;
    match method {
        MethodKind::Spectral => policy.sum(OP, 1, |n| {
            let a = (n * n) as f64 * PI * PI / 2.0;
            let env = 2.0 * a * (-a * t).exp();
            (if n % 2 == 1 { env } else { -env }, env)
        }),
        MethodKind::Images => {
            let pre = 2.0 / (t * t * (2.0 * PI * t).sqrt());
            let s = policy.with_tol(policy.tol / pre.max(1.0)).sum(OP, 0, |n| {
                let m2 = ((2 * n + 1) as f64).powi(2);
                let g = (-m2 / (2.0 * t)).exp();
                ((m2 - t) * g, (m2 + t) * g)
            })?;
            Ok(pre * s)
        }
    }
}

/// Distribution function of the Bessel(3) hitting time of 1.
pub fn bessel3_hit_cdf(method: MethodKind, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "bessel3_hit_cdf";
    check_time(OP, t)?;
    match method {
        MethodKind::Spectral => {
            let s = policy.sum(OP, 1, |n| {
                let env = 2.0 * (-((n * n) as f64) * PI * PI * t / 2.0).exp();
                (if n % 2 == 0 { env } else { -env }, env)
            })?;
            Ok(1.0 + s)
        }
        MethodKind::Images => {
            let pre = 4.0 / (2.0 * PI * t).sqrt();
            let s = policy.with_tol(policy.tol / pre.max(1.0)).sum(OP, 0, |n| {
                let m = (2 * n + 1) as f64;
                let g = (-m * m / (2.0 * t)).exp();
                (g, g)
            })?;
            Ok(pre * s)
        }
    }
}

/// `E exp(-alpha H_1) = sqrt(2 alpha) / sinh(sqrt(2 alpha))`.
pub fn bessel3_hit_laplace(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::domain(
            "bessel3_hit_laplace",
            format!("alpha must be nonnegative, got {alpha}"),
        ));
    }
    let s = (2.0 * alpha).sqrt();
    Ok(if s < 1e-4 {
        1.0 - s * s / 6.0
    } else if s > 20.0 {
        2.0 * s * (-s).exp() / -(-2.0 * s).exp_m1()
    } else {
        s / s.sinh()
    })
}

/// Hard cap on Euler steps per exit-time sample.
pub const MC_MAX_STEPS: u64 = 10_000_000;

/// One Euler-scheme exit time of Brownian motion from `(-1, 1)` started at
/// 0, checking absorption only at step ends. The scheme misses excursions
/// between grid points, so samples are biased upwards by `O(sqrt(dt))`.
pub fn mc_exit_sample<R: Rng + ?Sized>(rng: &mut R, dt: f64) -> Result<f64> {
    const OP: &str = "mc_exit_sample";
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(OP, format!("dt must be positive, got {dt}")));
    }
    let sd = dt.sqrt();
    let mut x = 0.0f64;
    for step in 1..=MC_MAX_STEPS {
        let z: f64 = rng.sample(StandardNormal);
        x += sd * z;
        if x.abs() >= 1.0 {
            return Ok(step as f64 * dt);
        }
    }
    Err(Error::NonConvergent {
        op: OP,
        terms: MC_MAX_STEPS as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p() -> SeriesPolicy {
        SeriesPolicy::default()
    }

    fn q(t: f64, x: f64, y: f64) -> DensityQuery {
        DensityQuery::new(t, x, y).unwrap()
    }

    #[test]
    fn reflected_equilibrium() {
        let v = density(ProcessKind::Reflected, MethodKind::Spectral, &q(200.0, 0.3, -0.8), &p()).unwrap();
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn killed_vanishes_on_boundary() {
        for m in [MethodKind::Images, MethodKind::Spectral] {
            for y in [-1.0, 1.0] {
                let v = density(ProcessKind::Killed, m, &q(1.0, 0.0, y), &p()).unwrap();
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn images_match_spectral() {
        for proc in [ProcessKind::Reflected, ProcessKind::Killed] {
            let a = density(proc, MethodKind::Images, &q(1.0, 0.3, -0.2), &p()).unwrap();
            let b = density(proc, MethodKind::Spectral, &q(1.0, 0.3, -0.2), &p()).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 2e-12);
        }
    }

    #[test]
    fn green_closed_forms() {
        let g = green(ProcessKind::Reflected, MethodKind::Images, 0.5, 1.0, 1.0, &p()).unwrap();
        assert_relative_eq!(g, 1.0 / 2f64.tanh(), max_relative = 1e-14);
        let (x, y) = (0.4, -0.3);
        let g = green(ProcessKind::Killed, MethodKind::Images, 1e-10, x, y, &p()).unwrap();
        assert_relative_eq!(g, (1.0 - x) * (1.0 + y) / 2.0, max_relative = 1e-8);
        // symmetric in its arguments
        let g2 = green(ProcessKind::Killed, MethodKind::Images, 1e-10, y, x, &p()).unwrap();
        assert_eq!(g, g2);
    }

    #[test]
    fn green_spectral_matches_closed() {
        for proc in [ProcessKind::Reflected, ProcessKind::Killed] {
            for &alpha in &[0.1, 1.0, 7.0] {
                for &(x, y) in &[(0.0, 0.0), (0.5, -0.5), (1.0, 1.0), (1.0, -1.0), (-0.3, 0.9)] {
                    let a = green(proc, MethodKind::Images, alpha, x, y, &p()).unwrap();
                    let b = green(proc, MethodKind::Spectral, alpha, x, y, &p()).unwrap();
                    assert!((a - b).abs() < 1e-12, "{proc} a={alpha} ({x},{y}): {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn green_closed_form_survives_large_alpha() {
        let g = green(ProcessKind::Reflected, MethodKind::Images, 1e6, 0.0, 0.0, &p()).unwrap();
        assert!(g.is_finite() && g >= 0.0);
    }

    #[test]
    fn survival_limits_and_fallback() {
        assert_abs_diff_eq!(exit_survival(1e-3, &p()).unwrap(), 1.0, epsilon = 1e-15);
        assert!(exit_survival(60.0, &p()).unwrap() < 1e-30);
        let tiny = SeriesPolicy::new(1e-14, 5).unwrap();
        // spectral needs many terms at t = 0.01; the image route takes over
        let v = exit_survival(0.01, &tiny);
        assert!(matches!(v, Err(Error::NonConvergent { .. })) || v.unwrap() > 0.999);
        for &t in &[0.05, 0.3, 1.0, 3.0] {
            assert_abs_diff_eq!(
                exit_survival(t, &p()).unwrap(),
                exit_survival_images(t, &p()).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn exit_density_forms() {
        let a = exit_density(MethodKind::Spectral, 1.0, &p()).unwrap();
        let b = exit_density(MethodKind::Images, 1.0, &p()).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        // single leading spectral term at t = 10
        let lead = PI / 2.0 * (-PI * PI * 10.0 / 8.0).exp();
        assert_relative_eq!(
            exit_density(MethodKind::Images, 10.0, &p()).unwrap(),
            lead,
            max_relative = 1e-8
        );
    }

    #[test]
    fn bessel3_forms() {
        let a = bessel3_hit_density(MethodKind::Spectral, 1.0, &p()).unwrap();
        let b = bessel3_hit_density(MethodKind::Images, 1.0, &p()).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        for &t in &[0.25, 1.0, 4.0] {
            let a = bessel3_hit_cdf(MethodKind::Spectral, t, &p()).unwrap();
            let b = bessel3_hit_cdf(MethodKind::Images, t, &p()).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
        let t: f64 = 0.05;
        let lead = 2.0 * t.powf(-2.5) / (2.0 * PI).sqrt() * (-1.0 / (2.0 * t)).exp();
        assert_relative_eq!(
            bessel3_hit_density(MethodKind::Images, t, &p()).unwrap(),
            lead,
            max_relative = 0.06
        );
    }

    #[test]
    fn laplace_values() {
        assert_eq!(bessel3_hit_laplace(0.0).unwrap(), 1.0);
        assert_relative_eq!(
            bessel3_hit_laplace(0.5).unwrap(),
            1.0 / 1f64.sinh(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            bessel3_hit_laplace(1e-9).unwrap(),
            1.0 - 2e-9 / 6.0,
            max_relative = 1e-15
        );
        assert!(bessel3_hit_laplace(1e4).unwrap() > 0.0);
        assert!(bessel3_hit_laplace(-1.0).is_err());
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(DensityQuery::new(0.0, 0.0, 0.0).is_err());
        assert!(DensityQuery::new(1.0, 1.5, 0.0).is_err());
        assert!(green(ProcessKind::Killed, MethodKind::Images, 0.0, 0.0, 0.0, &p()).is_err());
    }
}
