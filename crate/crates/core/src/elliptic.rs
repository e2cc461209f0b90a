//! Complete elliptic integrals, the lattice/modulus bijection
//! `c = K(k')/K(k)`, and the singular moduli `k_r`, `r = 1..10`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arithmetic-geometric mean of `a >= b >= 0`, together with the
/// `sum 2^(n-1) c_n^2` needed for `E`.
fn agm_with_sum(a0: f64, b0: f64, c0: f64) -> (f64, f64) {
    let (mut a, mut b) = (a0, b0);
    let mut pow = 0.5;
    let mut sum = pow * c0 * c0;
    for _ in 0..64 {
        // stop before ulp-level noise in a - b gets amplified by 2^n
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    (a, sum)
}

fn agm(a: f64, b: f64) -> f64 {
    agm_with_sum(a, b, 0.0).0
}

/// `k' = sqrt(1 - k^2)` without cancellation near `k = 1`.
pub fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

/// `K` from the complementary modulus, accurate even when `k'` is tiny.
fn k_from_complement(kp: f64) -> f64 {
    FRAC_PI_2 / agm(1.0, kp)
}

/// `(K, E)` for a modulus given with its complement.
fn k_and_e(k: f64, kp: f64) -> (f64, f64) {
    if kp == 0.0 {
        return (f64::INFINITY, 1.0);
    }
    let (a, s) = agm_with_sum(1.0, kp, k);
    let big_k = FRAC_PI_2 / a;
    (big_k, big_k * (1.0 - s))
}

/// Complete elliptic integral of the first kind `K(k)`, `0 <= k < 1`.
pub fn ellip_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::domain("ellip_k", format!("modulus must lie in [0,1), got {k}")));
    }
    Ok(k_from_complement(complementary(k)))
}

/// Complete elliptic integral of the second kind `E(k)`, `0 <= k <= 1`.
pub fn ellip_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::domain("ellip_e", format!("modulus must lie in [0,1], got {k}")));
    }
    Ok(k_and_e(k, complementary(k)).1)
}

/// A modulus with its complement and the four complete integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticModulus {
    pub k: f64,
    pub k_prime: f64,
    pub big_k: f64,
    pub big_k_prime: f64,
    pub big_e: f64,
    pub big_e_prime: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::domain(
                "EllipticModulus::new",
                format!("modulus must lie in (0,1), got {k}"),
            ));
        }
        Ok(Self::from_pair(k, complementary(k)))
    }

    /// Build from `(k, k')` computed independently, which keeps full
    /// relative precision in whichever of the two is small.
    pub(crate) fn from_pair(k: f64, kp: f64) -> Self {
        let (big_k, big_e) = k_and_e(k, kp);
        let (big_k_prime, big_e_prime) = k_and_e(kp, k);
        EllipticModulus {
            k,
            k_prime: kp,
            big_k,
            big_k_prime,
            big_e,
            big_e_prime,
        }
    }

    /// The modulus with `k` and `k'` exchanged (lattice `c -> 1/c`).
    pub fn complement(&self) -> Self {
        EllipticModulus {
            k: self.k_prime,
            k_prime: self.k,
            big_k: self.big_k_prime,
            big_k_prime: self.big_k,
            big_e: self.big_e_prime,
            big_e_prime: self.big_e,
        }
    }

    /// `c = K(k')/K(k)`.
    pub fn lattice(&self) -> f64 {
        self.big_k_prime / self.big_k
    }

    pub fn nome(&self) -> f64 {
        (-PI * self.lattice()).exp()
    }
}

/// `K E' + K' E - K K' - pi/2`; zero by the Legendre relation.
pub fn legendre_defect(m: &EllipticModulus) -> f64 {
    // the three products are each O(K K'), so cancellation limits accuracy
    // to a few ulps of K K'
    m.big_k * m.big_e_prime + m.big_k_prime * m.big_e - m.big_k * m.big_k_prime - FRAC_PI_2
}

/// `(k, k')` on the logistic-like parametrisation
/// `k = 1/sqrt(1 + e^{-2u})`, `k' = e^{-u}/sqrt(1 + e^{-2u})`,
/// evaluated so that neither coordinate loses precision for large `|u|`.
fn pair_at(u: f64) -> (f64, f64) {
    let s = (-u.abs()).exp();
    let r = (1.0 + s * s).sqrt();
    let (big, small) = (1.0 / r, s / r);
    if u >= 0.0 {
        (big, small)
    } else {
        (small, big)
    }
}

/// `K(k')/K(k) = AGM(1, k') / AGM(1, k)` at parameter `u`.
fn lattice_at(u: f64) -> f64 {
    let (k, kp) = pair_at(u);
    agm(1.0, kp) / agm(1.0, k)
}

const U_BRACKET: f64 = 700.0;

/// Solves `K(k')/K(k) = c` for `k`. The map is strictly decreasing in `k`,
/// so bisection on a bracketing interval always succeeds; it is followed by a
/// safeguarded secant polish.
pub fn modulus_from_lattice(c: f64) -> Result<EllipticModulus> {
    const OP: &str = "modulus_from_lattice";
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(OP, format!("c must be positive and finite, got {c}")));
    }
    // g(u) = lattice_at(u) - c is decreasing in u
    let g = |u: f64| lattice_at(u) - c;
    let (mut lo, mut hi) = (-U_BRACKET, U_BRACKET);
    let (mut glo, mut ghi) = (g(lo), g(hi));
    if glo < 0.0 || ghi > 0.0 {
        return Err(Error::NonConvergent { op: OP, terms: 0 });
    }
    let mut iters = 0;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(from_u(mid));
        }
        if gm > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
        iters += 1;
    }
    // secant on the bracket, falling back to bisection when the step leaves it
    for _ in 0..100 {
        iters += 1;
        let mut u = hi - ghi * (hi - lo) / (ghi - glo);
        if !(u > lo && u < hi) {
            u = 0.5 * (lo + hi);
        }
        let gu = g(u);
        if gu.abs() <= 2.0 * f64::EPSILON * c || hi - lo <= 4.0 * f64::EPSILON * u.abs().max(1.0) {
            return Ok(from_u(u));
        }
        if gu > 0.0 {
            lo = u;
            glo = gu;
        } else {
            hi = u;
            ghi = gu;
        }
    }
    Err(Error::NonConvergent { op: OP, terms: iters })
}

fn from_u(u: f64) -> EllipticModulus {
    let (k, kp) = pair_at(u);
    EllipticModulus::from_pair(k, kp)
}

/// `c = K(k')/K(k)`.
pub fn lattice_from_modulus(k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.lattice())
}

/// Nome `q = exp(-pi K(k')/K(k))`.
pub fn nome_from_modulus(k: f64) -> Result<f64> {
    Ok((-PI * lattice_from_modulus(k)?).exp())
}

/// Ascending Landen map `k -> 2 sqrt(k)/(1+k)`; halves the lattice parameter.
pub fn landen_ascend(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(
            "landen_ascend",
            format!("modulus must lie in (0,1), got {k}"),
        ));
    }
    Ok(2.0 * k.sqrt() / (1.0 + k))
}

/// Singular modulus `k_r` with `K(k_r')/K(k_r) = sqrt(r)`, its `K` and the
/// elliptic alpha function, all from their closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularValue {
    pub r: u32,
    pub k: f64,
    pub big_k: f64,
    pub alpha: f64,
}

fn g(x: f64) -> f64 {
    libm::tgamma(x)
}

fn gprod(num: &[u32], den: f64) -> f64 {
    num.iter().map(|&n| g(n as f64 / den)).product()
}

pub fn singular_reference(r: u32) -> Result<SingularValue> {
    let s2 = SQRT_2;
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let s7 = 7f64.sqrt();
    let sp = PI.sqrt();
    let g14 = g(0.25);
    let (k, big_k, alpha) = match r {
        1 => (s2 / 2.0, g14 * g14 / (4.0 * sp), 0.5),
        2 => (
            s2 - 1.0,
            (s2 + 1.0).sqrt() / (2f64.powf(13.0 / 4.0) * sp) * g(1.0 / 8.0) * g(3.0 / 8.0),
            s2 - 1.0,
        ),
        3 => (
            s2 / 4.0 * (s3 - 1.0),
            3f64.powf(0.25) / (2f64.powf(7.0 / 3.0) * PI) * g(1.0 / 3.0).powi(3),
            (s3 - 1.0) / 2.0,
        ),
        4 => (
            3.0 - 2.0 * s2,
            (s2 + 1.0) / (2f64.powf(3.5) * sp) * g14 * g14,
            2.0 * (s2 - 1.0).powi(2),
        ),
        5 => (
            (0.5 - (s5 - 2.0).sqrt()).sqrt(),
            (s5 + 2.0).powf(0.25) * (gprod(&[1, 3, 7, 9], 20.0) / (160.0 * PI)).sqrt(),
            (s5 - (2.0 * s5 - 2.0).sqrt()) / 2.0,
        ),
        6 => (
            (2.0 - s3) * (s3 - s2),
            ((s2 - 1.0) * (s2 + s3) * (s3 + 2.0)).sqrt() * (gprod(&[1, 5, 7, 11], 24.0) / (384.0 * PI)).sqrt(),
            5.0 * 6f64.sqrt() + 6.0 * s3 - 8.0 * s2 - 11.0,
        ),
        7 => (
            s2 * (3.0 - s7) / 8.0,
            gprod(&[1, 2, 4], 7.0) / (7f64.powf(0.25) * 4.0 * PI),
            (s7 - 2.0) / 2.0,
        ),
        8 => (
            (s2 - (2.0 * s2 + 2.0).sqrt() + 1.0).powi(2),
            ((2.0 * s2 + (5.0 * s2 + 1.0).sqrt()) / (4.0 * s2)).sqrt()
                * (s2 + 1.0).powf(0.25)
                * g(1.0 / 8.0)
                * g(3.0 / 8.0)
                / (8.0 * sp),
            2.0 * (7.0 * s2 + 10.0) * (1.0 - (8f64.sqrt() - 2.0).sqrt()).powi(2),
        ),
        9 => (
            (s2 - 3f64.powf(0.25)) * (s3 - 1.0) / 2.0,
            3f64.powf(0.25) * (s3 + 2.0).sqrt() * g14 * g14 / (12.0 * sp),
            (3.0 - 3f64.powf(0.75) * s2 * (s3 - 1.0)) / 2.0,
        ),
        10 => (
            (10f64.sqrt() - 3.0) * (s2 - 1.0).powi(2),
            (3.0 * s2 + s5 + 2.0).sqrt() * (gprod(&[1, 7, 9, 11, 13, 19, 23, 37], 40.0) / (2560.0 * PI.powi(3))).sqrt(),
            72.0 * s2 - 46.0 * s5 + 33.0 * 10f64.sqrt() - 103.0,
        ),
        _ => {
            return Err(Error::domain(
                "singular_reference",
                format!("r must lie in 1..=10, got {r}"),
            ))
        }
    };
    Ok(SingularValue { r, k, big_k, alpha })
}

/// `alpha(r) = pi/(4K^2) + sqrt(r) - sqrt(r) E/K` evaluated from a modulus.
pub fn alpha_relation(r: u32, m: &EllipticModulus) -> f64 {
    let sr = (r as f64).sqrt();
    PI / (4.0 * m.big_k * m.big_k) + sr - sr * m.big_e / m.big_k
}
