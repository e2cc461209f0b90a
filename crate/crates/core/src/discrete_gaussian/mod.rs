//! The discrete Gaussian `theta_2` and `theta_3` distributions on `Z`:
//!
//! ```text
//! P(X2 = n) = exp(-c pi (n + 1/2)^2) / theta_2(0, q)
//! P(X3 = n) = exp(-c pi n^2)         / theta_3(0, q),     q = exp(-pi c)
//! ```
//!
//! Moments and cumulants are available through independent routes (elliptic
//! closed forms, Lambert series, Eisenstein double sums, direct summation
//! over the support) so they can be checked against each other.

mod laws;
mod sampling;

pub use laws::{
    convolution_defect, duality_defect, entropy_theta3, heine_difference_defect, heine_pmf, signed_moment_defect,
    stability_defect, theta2_signed_first_moment, StabilityMixture,
};
pub use sampling::{sample_bernoulli, sample_exact};

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elliptic::{modulus_from_lattice, EllipticModulus};
use crate::error::{Error, Result};
use crate::series::{neumaier_sum, SeriesPolicy};
use crate::theta::{theta_series, LatticeParam, ThetaKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Theta2,
    Theta3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Theta2 => "theta2",
            Family::Theta3 => "theta3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarianceRoute {
    /// `E K / pi^2` and `(K^2/pi^2)(E/K - k'^2)`.
    Elliptic,
    /// q-series in the nome.
    Lambert,
    /// `sum (n - mean)^2 P(X = n)` over the truncated support.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CumulantRoute {
    Lambert,
    Eisenstein,
}

/// Relative weight below which support points are dropped; the discarded
/// mass is far below one ulp of the total.
const SUPPORT_CUTOFF: f64 = 1e-20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaDistribution {
    family: Family,
    lattice: LatticeParam,
    modulus: EllipticModulus,
    norm: f64,
}

impl ThetaDistribution {
    /// Distribution with lattice parameter `tau = i c`.
    pub fn new(family: Family, c: f64) -> Result<Self> {
        let lattice = LatticeParam::new(c)?;
        let modulus = modulus_from_lattice(c)?;
        Self::build(family, lattice, modulus)
    }

    /// Distribution parametrised by the elliptic modulus, `c = K(k')/K(k)`.
    pub fn from_modulus(family: Family, k: f64) -> Result<Self> {
        let modulus = EllipticModulus::new(k)?;
        let lattice = LatticeParam::new(modulus.lattice())?;
        Self::build(family, lattice, modulus)
    }

    fn build(family: Family, lattice: LatticeParam, modulus: EllipticModulus) -> Result<Self> {
        let kind = match family {
            Family::Theta2 => ThetaKind::Two,
            Family::Theta3 => ThetaKind::Three,
        };
        let policy = SeriesPolicy::new(1e-17, 100_000)?;
        let norm = theta_series(kind, 0.0, lattice.q(), &policy)?;
        Ok(ThetaDistribution {
            family,
            lattice,
            modulus,
            norm,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn c(&self) -> f64 {
        self.lattice.c()
    }

    pub fn q(&self) -> f64 {
        self.lattice.q()
    }

    pub fn lattice(&self) -> LatticeParam {
        self.lattice
    }

    pub fn modulus(&self) -> &EllipticModulus {
        &self.modulus
    }

    /// `theta_2(0, q)` or `theta_3(0, q)`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// The normalisation from Jacobi's identity: `sqrt((2/pi) k K)` for
    /// `theta_2`, `sqrt((2/pi) K)` for `theta_3`.
    pub fn elliptic_norm(&self) -> f64 {
        let m = &self.modulus;
        match self.family {
            Family::Theta2 => (2.0 / PI * m.k * m.big_k).sqrt(),
            Family::Theta3 => (2.0 / PI * m.big_k).sqrt(),
        }
    }

    /// Offset of the lattice: the weight of `n` is `exp(-c pi (n + shift)^2)`.
    fn shift(&self) -> f64 {
        match self.family {
            Family::Theta2 => 0.5,
            Family::Theta3 => 0.0,
        }
    }

    fn weight(&self, n: i64) -> f64 {
        let m = n as f64 + self.shift();
        (-self.c() * PI * m * m).exp()
    }

    pub fn pmf(&self, n: i64) -> f64 {
        self.weight(n) / self.norm
    }

    /// The pmf normalised through the elliptic parametrisation instead of
    /// the theta series.
    pub fn pmf_elliptic(&self, n: i64) -> f64 {
        self.weight(n) / self.elliptic_norm()
    }

    /// Support points carrying non-negligible mass, as an inclusive range.
    pub fn support(&self) -> (i64, i64) {
        let half = ((-SUPPORT_CUTOFF.ln()) / (self.c() * PI)).sqrt().ceil() as i64 + 1;
        match self.family {
            Family::Theta2 => (-half - 1, half),
            Family::Theta3 => (-half, half),
        }
    }

    /// `E f(X)` by compensated summation over the support.
    pub fn expectation<F: Fn(i64) -> f64>(&self, f: F) -> f64 {
        let (lo, hi) = self.support();
        neumaier_sum((lo..=hi).map(|n| f(n) * self.pmf(n)))
    }

    /// Probability mass function on the support as `(n, p)` pairs.
    pub fn table(&self) -> Vec<(i64, f64)> {
        let (lo, hi) = self.support();
        (lo..=hi).map(|n| (n, self.pmf(n))).collect()
    }

    pub(crate) fn law(&self) -> BTreeMap<i64, f64> {
        self.table().into_iter().collect()
    }

    /// `-1/2` for `theta_2`, `0` for `theta_3`.
    pub fn mean(&self) -> f64 {
        -self.shift()
    }

    pub fn variance(&self, route: VarianceRoute) -> Result<f64> {
        const OP: &str = "variance";
        let m = &self.modulus;
        let q = self.q();
        let policy = SeriesPolicy::default();
        match (route, self.family) {
            (VarianceRoute::Elliptic, Family::Theta2) => Ok(m.big_e * m.big_k / (PI * PI)),
            (VarianceRoute::Elliptic, Family::Theta3) => {
                let kp2 = m.k_prime * m.k_prime;
                Ok(m.big_k * m.big_k / (PI * PI) * (m.big_e / m.big_k - kp2))
            }
            (VarianceRoute::Lambert, Family::Theta2) => {
                let s = policy.sum(OP, 1, |n| {
                    let a = q.powi(2 * n as i32);
                    let t = 2.0 * a / ((1.0 + a) * (1.0 + a));
                    (t, t)
                })?;
                Ok(0.25 + s)
            }
            (VarianceRoute::Lambert, Family::Theta3) => policy.sum(OP, 1, |n| {
                let a = q.powi(2 * n as i32 - 1);
                let t = 2.0 * a / ((1.0 + a) * (1.0 + a));
                (t, t)
            }),
            (VarianceRoute::Direct, _) => Ok(self.centered_moment(2)),
        }
    }

    /// `E (X - mean)^order` by direct summation.
    pub fn centered_moment(&self, order: u32) -> f64 {
        let mu = self.mean();
        self.expectation(|n| (n as f64 - mu).powi(order as i32))
    }

    /// Cumulants of `X` itself, i.e. of `log E exp(z X)`. For `theta_2`
    /// this makes `kappa_1 = -1/2`; see [`Self::cumulant_shifted`] for the
    /// convention in which `kappa_1 = +1/2`.
    pub fn cumulant(&self, order: u32, route: CumulantRoute) -> Result<f64> {
        if order == 0 {
            return Err(Error::domain("cumulant", "order must be positive"));
        }
        if order % 2 == 1 {
            return Ok(if order == 1 { self.mean() } else { 0.0 });
        }
        let n = order / 2;
        match route {
            CumulantRoute::Lambert => self.cumulant_lambert(n),
            CumulantRoute::Eisenstein => self.cumulant_eisenstein(n),
        }
    }

    /// Cumulants of `X + 1` (equal in law to `-X` for `theta_2`), whose
    /// generating function is the `e^{-z/2}`-free theta quotient. Even
    /// orders coincide with [`Self::cumulant`].
    pub fn cumulant_shifted(&self, order: u32, route: CumulantRoute) -> Result<f64> {
        match (self.family, order) {
            (Family::Theta2, 1) => Ok(self.mean() + 1.0),
            _ => self.cumulant(order, route),
        }
    }

    fn cumulant_lambert(&self, n: u32) -> Result<f64> {
        const OP: &str = "cumulant";
        let c = self.c();
        let p = (2 * n - 1) as i32;
        let policy = SeriesPolicy::default();
        // 1/sinh(x) = 2 e^{-x} / (1 - e^{-2x}); theta_2 carries an extra e^{-x}
        let extra = match self.family {
            Family::Theta2 => 2.0,
            Family::Theta3 => 1.0,
        };
        let s = policy.sum(OP, 1, |m| {
            let x = c * PI * m as f64;
            let env = (m as f64).powi(p) * 2.0 * (-extra * x).exp() / -(-2.0 * x).exp_m1();
            (if m % 2 == 1 { env } else { -env }, env)
        })?;
        Ok(match self.family {
            Family::Theta2 => -0.5 * euler_at_zero(p as usize) + s,
            Family::Theta3 => s,
        })
    }

    fn cumulant_eisenstein(&self, n: u32) -> Result<f64> {
        const OP: &str = "cumulant_eisenstein";
        let c = self.c();
        let tol = SeriesPolicy::default().tol;
        let two_n = 2 * n as i32;
        // Summation order matters for 2n = 2 (conditional convergence): the
        // real odd index is summed first, then the imaginary index.
        let mut outer = match self.family {
            Family::Theta2 => odd_lattice_row(two_n, 0.0),
            Family::Theta3 => 0.0,
        };
        let mut j = 1u32;
        loop {
            let b = match self.family {
                Family::Theta2 => 2 * j,
                Family::Theta3 => 2 * j - 1,
            } as f64;
            let y = c * b;
            outer += 2.0 * odd_lattice_row(two_n, y);
            // rows decay like |y|^{2n} e^{-pi |y|}
            if PI * y - (two_n as f64) * (1.0 + y).ln() > -tol.ln() + 5.0 {
                break;
            }
            j += 1;
            if j > 1_000_000 {
                return Err(Error::NonConvergent {
                    op: OP,
                    terms: j as usize,
                });
            }
        }
        let fact: f64 = (1..two_n).map(|i| i as f64).product();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        Ok(sign * fact / PI.powi(two_n) * outer)
    }

    /// `E exp(z X)`.
    pub fn mgf(&self, z: f64) -> Result<f64> {
        const OP: &str = "mgf";
        if !z.is_finite() {
            return Err(Error::domain(OP, format!("argument must be finite, got {z}")));
        }
        let c = self.c();
        let shift = self.shift();
        let policy = SeriesPolicy::default().with_tol(1e-17);
        // sum over m = n + shift of exp(-c pi m^2) cosh(m z), then undo the
        // shift; m runs over n >= 0 (theta_2, both signs paired) or over n >= 1
        // plus the m = 0 term (theta_3)
        let half = |m: f64| {
            let a = (-c * PI * m * m + m * z).exp();
            let b = (-c * PI * m * m - m * z).exp();
            (a, b)
        };
        let s = match self.family {
            Family::Theta2 => policy.sum(OP, 0, |n| {
                let (a, b) = half(n as f64 + 0.5);
                (a + b, a + b)
            })?,
            Family::Theta3 => {
                1.0 + policy.sum(OP, 1, |n| {
                    let (a, b) = half(n as f64);
                    (a + b, a + b)
                })?
            }
        };
        let v = (-shift * z).exp() * s / self.norm;
        if !v.is_finite() {
            return Err(Error::Overflow { op: OP });
        }
        Ok(v)
    }

    /// `E (-1)^X`: `0` for `theta_2`, `sqrt(k')` for `theta_3`.
    pub fn signed_mean(&self) -> f64 {
        match self.family {
            Family::Theta2 => 0.0,
            Family::Theta3 => self.modulus.k_prime.sqrt(),
        }
    }

    /// `P(X odd) = (1 - E (-1)^X) / 2`.
    pub fn odd_probability(&self) -> f64 {
        0.5 * (1.0 - self.signed_mean())
    }

    /// Shannon entropy `-sum p log p` over the support (nats).
    pub fn entropy(&self) -> f64 {
        let (lo, hi) = self.support();
        -neumaier_sum((lo..=hi).map(|n| self.pmf(n)).filter(|&p| p > 0.0).map(|p| p * p.ln()))
    }
}

/// Euler polynomial value `E_n(0)` from `sum E_n(0) z^n / n! = 2/(1+e^z)`,
/// i.e. `E_n(0) = -(1/2) sum_{k<n} C(n,k) E_k(0)`.
pub fn euler_at_zero(n: usize) -> f64 {
    let mut e = vec![1.0f64];
    for m in 1..=n {
        let mut binom = 1.0;
        let mut acc = 0.0;
        for (k, ek) in e.iter().enumerate() {
            acc += binom * ek;
            binom = binom * (m - k) as f64 / (k + 1) as f64;
        }
        e.push(-0.5 * acc);
    }
    e[n]
}

/// `sum over odd integers a of (a + i y)^{-2n}`, which is real.
///
/// Pairs `a` and `-a` combine to `2 Re (a + i y)^{-2n}`; the sum runs
/// explicitly up to `a = 2J - 1` and the rest is an Euler-Maclaurin tail.
fn odd_lattice_row(two_n: i32, y: f64) -> f64 {
    let j_max = 64 + (4.0 * y.abs()).ceil() as usize;
    let w = |j: f64| Complex64::new(2.0 * j + 1.0, y);
    let head = neumaier_sum((0..j_max).map(|j| w(j as f64).powi(-two_n).re));
    let wj = w(j_max as f64);
    let p = two_n as f64;
    // g(j) = Re w^{-2n}, dw/dj = 2
    let integral = wj.powi(1 - two_n) / (2.0 * (p - 1.0));
    let g = wj.powi(-two_n);
    let g1 = wj.powi(-two_n - 1) * (-2.0 * p);
    let g3 = wj.powi(-two_n - 3) * (8.0 * (-p) * (-p - 1.0) * (-p - 2.0));
    let tail = integral + g / 2.0 - g1 / 12.0 + g3 / 720.0;
    2.0 * (head + tail.re)
}
