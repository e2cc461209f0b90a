//! The Kolmogorov distribution `F(h) = P(sup |bridge| < h) = theta_4(0, e^{-2h^2})`
//! and its density, each by independent routes.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::discrete_gaussian::{Family, ThetaDistribution};
use crate::elliptic::modulus_from_lattice;
use crate::error::{Error, Result};
use crate::series::SeriesPolicy;
use crate::theta::{theta_product, ThetaKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CdfRoute {
    /// `sum (-1)^n exp(-2 n^2 h^2)`.
    Series,
    /// The triple product for `theta_4(0, e^{-2h^2})`.
    Product,
    /// `sqrt((2/pi) k' K(k))` with lattice parameter `c = 2h^2/pi`.
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PdfRoute {
    /// `-4h sum (-1)^n n^2 exp(-2 n^2 h^2)`.
    Series,
    /// `(4/pi^2) K (K - E) sqrt(k' K')`.
    Elliptic,
    /// `-4 sqrt(K') E[(-1)^X X^2]` for `X ~ theta_3(2h^2/pi)`.
    SignedMoment,
}

fn check_h(op: &'static str, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::domain(
            op,
            format!("threshold must be positive and finite, got {h}"),
        ));
    }
    Ok(())
}

fn lattice_of(h: f64) -> f64 {
    2.0 * h * h / PI
}

pub fn kolmogorov_cdf(h: f64, route: CdfRoute, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "kolmogorov_cdf";
    check_h(OP, h)?;
    let a = 2.0 * h * h;
    match route {
        CdfRoute::Series => {
            let tail = policy.sum(OP, 1, |n| {
                let env = (-a * (n * n) as f64).exp();
                (if n % 2 == 1 { -env } else { env }, env)
            })?;
            Ok(1.0 + 2.0 * tail)
        }
        CdfRoute::Product => theta_product(ThetaKind::Four, 0.0, (-a).exp(), policy),
        CdfRoute::Elliptic => {
            let m = modulus_from_lattice(lattice_of(h))?;
            Ok((2.0 / PI * m.k_prime * m.big_k).sqrt())
        }
    }
}

pub fn kolmogorov_pdf(h: f64, route: PdfRoute, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "kolmogorov_pdf";
    check_h(OP, h)?;
    match route {
        PdfRoute::Series => {
            let a = 2.0 * h * h;
            let s = policy.with_tol(policy.tol / (4.0 * h).max(1.0)).sum(OP, 1, |n| {
                let env = ((n * n) as f64) * (-a * (n * n) as f64).exp();
                (if n % 2 == 1 { -env } else { env }, env)
            })?;
            Ok(-8.0 * h * s)
        }
        PdfRoute::Elliptic => {
            let m = modulus_from_lattice(lattice_of(h))?;
            Ok(4.0 / (PI * PI) * m.big_k * (m.big_k - m.big_e) * (m.k_prime * m.big_k_prime).sqrt())
        }
        PdfRoute::SignedMoment => {
            let d = ThetaDistribution::new(Family::Theta3, lattice_of(h))?;
            let signed = d.expectation(|n| if n % 2 == 0 { (n * n) as f64 } else { -((n * n) as f64) });
            Ok(-4.0 * d.modulus().big_k_prime.sqrt() * signed)
        }
    }
}

/// The elliptic density expression exactly as it is usually quoted,
///
/// ```text
/// (1/pi^2) (K/K') K'^{-1/2} ( sqrt(k' K')/2 - E(k') K / sqrt(2 pi) ),
/// ```
///
/// kept for comparison only: it does not reproduce the density (it is
/// negative for every `h`). [`PdfRoute::Elliptic`] is the corrected form.
pub fn kolmogorov_pdf_printed_form(h: f64) -> Result<f64> {
    check_h("kolmogorov_pdf_printed_form", h)?;
    let m = modulus_from_lattice(lattice_of(h))?;
    let kp = m.big_k_prime;
    Ok(1.0 / (PI * PI) * (m.big_k / kp) / kp.sqrt()
        * (0.5 * (m.k_prime * kp).sqrt() - m.big_e_prime * m.big_k / (2.0 * PI).sqrt()))
}

/// Inverse of the distribution function by bisection on the series route.
pub fn kolmogorov_quantile(p: f64, policy: &SeriesPolicy) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(
            "kolmogorov_quantile",
            format!("probability must lie in (0, 1), got {p}"),
        ));
    }
    let (mut lo, mut hi) = (0.05, 10.0);
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(mid, CdfRoute::Series, policy)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `sup |B|` for a Brownian bridge on `[0, 1]` sampled at `n_steps` points,
/// built as `S_i - (i/n) S_n` from a Gaussian random walk. The discrete
/// maximum underestimates the continuous one by about `0.58 / sqrt(n)`.
pub fn mc_bridge_sup_sample<R: Rng + ?Sized>(rng: &mut R, n_steps: usize) -> Result<f64> {
    if n_steps < 1000 {
        return Err(Error::domain(
            "mc_bridge_sup_sample",
            format!("need at least 1000 steps, got {n_steps}"),
        ));
    }
    let scale = (n_steps as f64).recip().sqrt();
    let mut walk = Vec::with_capacity(n_steps);
    let mut s = 0.0;
    for _ in 0..n_steps {
        let z: f64 = rng.sample(StandardNormal);
        s += scale * z;
        walk.push(s);
    }
    let end = s;
    let sup = walk
        .iter()
        .enumerate()
        .map(|(i, w)| (w - (i + 1) as f64 / n_steps as f64 * end).abs())
        .fold(0.0, f64::max);
    Ok(sup)
}
