//! Jacobi theta functions for real argument and real nome.
//!
//! Two independent evaluators are provided for each of the four functions:
//! the Fourier series and the Jacobi triple product. The modular identities
//! are exposed as pairs of independently summed real series so that their
//! agreement can be checked rather than assumed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Neumaier, SeriesPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [ThetaKind::One, ThetaKind::Two, ThetaKind::Three, ThetaKind::Four];

    pub fn index(self) -> u8 {
        match self {
            ThetaKind::One => 1,
            ThetaKind::Two => 2,
            ThetaKind::Three => 3,
            ThetaKind::Four => 4,
        }
    }
}

impl TryFrom<u8> for ThetaKind {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(ThetaKind::One),
            2 => Ok(ThetaKind::Two),
            3 => Ok(ThetaKind::Three),
            4 => Ok(ThetaKind::Four),
            _ => Err(Error::domain("ThetaKind", format!("kind must be 1..4, got {v}"))),
        }
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta{}", self.index())
    }
}

/// Lattice parameter `tau = i c` together with its nome `q = exp(-pi c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParam {
    c: f64,
    q: f64,
}

impl LatticeParam {
    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::domain(
                "LatticeParam::new",
                format!("c must be positive and finite, got {c}"),
            ));
        }
        let q = (-PI * c).exp();
        if q <= 0.0 {
            return Err(Error::domain(
                "LatticeParam::new",
                format!("nome underflows for c = {c}"),
            ));
        }
        Ok(LatticeParam { c, q })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The parameter of the dual lattice `tau' = -1/tau`, i.e. `c' = 1/c`.
    pub fn dual(&self) -> Self {
        LatticeParam::new(1.0 / self.c).expect("dual of a valid lattice is valid")
    }
}

fn check_nome(op: &'static str, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(op, format!("nome must lie in (0,1), got {q}")));
    }
    Ok(q.ln())
}

fn check_arg(op: &'static str, z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::domain(op, format!("argument must be finite, got {z}")));
    }
    Ok(())
}

/// Fourier series of `theta_kind(z, q)`.
pub fn theta_series(kind: ThetaKind, z: f64, q: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "theta_series";
    let lnq = check_nome(OP, q)?;
    check_arg(OP, z)?;
    match kind {
        ThetaKind::One => policy.sum(OP, 0, |n| {
            let m = n as f64 + 0.5;
            let env = 2.0 * (lnq * m * m).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (sign * env * (2.0 * m * z).sin(), env)
        }),
        ThetaKind::Two => policy.sum(OP, 0, |n| {
            let m = n as f64 + 0.5;
            let env = 2.0 * (lnq * m * m).exp();
            (env * (2.0 * m * z).cos(), env)
        }),
        ThetaKind::Three | ThetaKind::Four => {
            let alt = kind == ThetaKind::Four;
            let tail = policy.sum(OP, 1, |n| {
                let m = n as f64;
                let env = 2.0 * (lnq * m * m).exp();
                let sign = if alt && n % 2 == 1 { -1.0 } else { 1.0 };
                (sign * env * (2.0 * m * z).cos(), env)
            })?;
            Ok(1.0 + tail)
        }
    }
}

/// `ln` of one triple-product factor `1 + s * 2a cos(2z) + a^2`, where
/// `s = -1` gives the `(1-a)^2 + 4a sin^2 z` family and `s = +1` the
/// `(1-a)^2 + 4a cos^2 z` family.
fn ln_factor(a: f64, s: f64, z: f64) -> f64 {
    if a < 0.5 {
        (a * (a + s * 2.0 * (2.0 * z).cos())).ln_1p()
    } else {
        let w = if s < 0.0 { z.sin() } else { z.cos() };
        ((1.0 - a) * (1.0 - a) + 4.0 * a * w * w).ln()
    }
}

/// Jacobi triple-product evaluation of `theta_kind(z, q)`.
pub fn theta_product(kind: ThetaKind, z: f64, q: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "theta_product";
    let lnq = check_nome(OP, q)?;
    check_arg(OP, z)?;

    let (prefactor, odd, s) = match kind {
        ThetaKind::One => (2.0 * (0.25 * lnq).exp() * z.sin(), false, -1.0),
        ThetaKind::Two => (2.0 * (0.25 * lnq).exp() * z.cos(), false, 1.0),
        ThetaKind::Three => (1.0, true, 1.0),
        ThetaKind::Four => (1.0, true, -1.0),
    };
    if prefactor == 0.0 {
        return Ok(0.0);
    }

    // Sum of log-factors; n-th term is ln(1-q^{2n}) + ln(1 + s 2a cos 2z + a^2)
    // with a = q^{2n-1} (odd) or q^{2n} (even). Both are bounded by
    // 2a/(1-a)^2 + q^{2n}/(1-q^{2n}).
    let mut acc = Neumaier::default();
    let mut prev_env = f64::INFINITY;
    for i in 0..policy.max_terms {
        let n = (i + 1) as f64;
        let q2n = (2.0 * n * lnq).exp();
        let a = if odd { ((2.0 * n - 1.0) * lnq).exp() } else { q2n };
        acc.add((-q2n).ln_1p());
        acc.add(ln_factor(a, s, z));
        let env = 2.0 * a / ((1.0 - a) * (1.0 - a)) + q2n / (1.0 - q2n);
        let ratio = if prev_env.is_finite() {
            env / prev_env
        } else {
            f64::INFINITY
        };
        // log error e translates to a relative error ~e in the product
        if env == 0.0 || (ratio < 1.0 && env * ratio / (1.0 - ratio) <= policy.tol) {
            return Ok(prefactor * acc.total().exp());
        }
        prev_env = env;
    }
    Err(Error::NonConvergent {
        op: OP,
        terms: policy.max_terms,
    })
}

/// `d/dz theta_1(z, q)` by the term-wise differentiated Fourier series.
pub fn theta1_prime(z: f64, q: f64, policy: &SeriesPolicy) -> Result<f64> {
    const OP: &str = "theta1_prime";
    let lnq = check_nome(OP, q)?;
    check_arg(OP, z)?;
    policy.sum(OP, 0, |n| {
        let m = n as f64 + 0.5;
        let env = 4.0 * m * (lnq * m * m).exp();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        (sign * env * (2.0 * m * z).cos(), env)
    })
}

/// Both sides of the real-form modular identity for `kind` at lattice
/// parameter `t`: the `sqrt(t)`-weighted trigonometric series and the
/// Gaussian image sum. They are summed independently.
pub fn modular_pair(kind: ThetaKind, z: f64, t: f64, policy: &SeriesPolicy) -> Result<(f64, f64)> {
    const OP: &str = "modular_pair";
    check_arg(OP, z)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(OP, format!("t must be positive, got {t}")));
    }
    let q = (-PI * t).exp();
    if q <= 0.0 {
        return Err(Error::domain(OP, format!("t = {t} underflows the nome")));
    }
    let lhs = t.sqrt() * theta_series(kind, z, q, policy)?;
    let pt = PI * t;
    let gauss = |x: f64| (-x * x / pt).exp();
    let rhs = match kind {
        // sinh form expanded into its two Gaussian halves
        ThetaKind::One => policy.sum(OP, 0, |n| {
            let m = PI * (n as f64 + 0.5);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let (a, b) = (gauss(z - m), gauss(z + m));
            (sign * (a - b), a.max(b))
        })?,
        ThetaKind::Two => policy.sum_z(OP, |n| {
            let g = gauss(z + PI * n as f64);
            (if n % 2 == 0 { g } else { -g }, g)
        })?,
        ThetaKind::Three => policy.sum_z(OP, |n| {
            let g = gauss(z + PI * n as f64);
            (g, g)
        })?,
        ThetaKind::Four => policy.sum_z(OP, |n| {
            let g = gauss(z + PI * (n as f64 + 0.5));
            (g, g)
        })?,
    };
    Ok((lhs, rhs))
}

/// `theta_4(z, q)` via the quarter-period shift `theta_3(z + pi/2, q)`.
pub fn theta4_by_shift(z: f64, q: f64, policy: &SeriesPolicy) -> Result<f64> {
    theta_series(ThetaKind::Three, z + FRAC_PI_2, q, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p() -> SeriesPolicy {
        SeriesPolicy::default()
    }

    // partial-sum oracle written out independently of the crate helpers
    fn naive_theta3_zero(q: f64) -> f64 {
        1.0 + 2.0 * (1..60).map(|n| q.powi(n * n)).sum::<f64>()
    }

    #[test]
    fn theta3_at_half_nome() {
        let v = theta_series(ThetaKind::Three, 0.0, 0.5, &p()).unwrap();
        assert_abs_diff_eq!(v, naive_theta3_zero(0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 2.128_936_827_211_877, epsilon = 1e-14);
    }

    #[test]
    fn trivial_zeros() {
        assert_eq!(theta_series(ThetaKind::One, 0.0, 0.3, &p()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            theta_series(ThetaKind::Two, FRAC_PI_2, 0.3, &p()).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_eq!(theta_product(ThetaKind::One, 0.0, 0.5, &p()).unwrap(), 0.0);
        assert_abs_diff_eq!(theta1_prime(FRAC_PI_2, 0.5, &p()).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn theta4_product_matches_c2_product() {
        let q: f64 = 0.5;
        let c2: f64 = (1..200).map(|n| (1.0 - q.powi(n)) / (1.0 + q.powi(n))).product();
        let v = theta_product(ThetaKind::Four, 0.0, q, &p()).unwrap();
        assert_abs_diff_eq!(v, c2, epsilon = 1e-14);
        assert_abs_diff_eq!(v, 0.121_124_208_002_580_7, epsilon = 1e-13);
    }

    #[test]
    fn theta1_prime_at_zero() {
        let q: f64 = 0.5;
        let naive: f64 = (0..30)
            .map(|n| {
                let m = n as f64 + 0.5;
                2.0 * (-1f64).powi(n) * (2.0 * m) * q.powf(m * m)
            })
            .sum();
        let v = theta1_prime(0.0, q, &p()).unwrap();
        assert_abs_diff_eq!(v, naive, epsilon = 1e-14);
        assert_abs_diff_eq!(v, 0.548_978_532_560, epsilon = 1e-11);
    }

    #[test]
    fn series_and_product_agree() {
        for kind in ThetaKind::ALL {
            for &q in &[0.05, 0.3, 0.4, 0.7, 0.9] {
                for &z in &[-2.5, -0.7, 0.1, 0.7, 1.3, 3.0] {
                    let s = theta_series(kind, z, q, &p()).unwrap();
                    let r = theta_product(kind, z, q, &p()).unwrap();
                    assert!(
                        (s - r).abs() < 2e-14 * s.abs().max(1.0),
                        "{kind} q={q} z={z}: {s} vs {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn modular_trivial_cases() {
        let (l, r) = modular_pair(ThetaKind::One, 0.0, 2.0, &p()).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        let (l, r) = modular_pair(ThetaKind::Three, 0.0, 1.0, &p()).unwrap();
        assert_abs_diff_eq!(l, r, epsilon = 1e-15);
        let (l, r) = modular_pair(ThetaKind::Two, 0.0, 2.0, &p()).unwrap();
        assert_abs_diff_eq!(l, r, epsilon = 1e-12);
        let alt: f64 = (-30i32..=30)
            .map(|n| (-1f64).powi(n) * (-PI * (n * n) as f64 / 2.0).exp())
            .sum();
        assert_abs_diff_eq!(r, alt, epsilon = 1e-15);
    }

    #[test]
    fn modular_pairs_on_grid() {
        for kind in ThetaKind::ALL {
            for &t in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                for i in 0..9 {
                    let z = -1.0 + 0.25 * i as f64;
                    let (l, r) = modular_pair(kind, z, t, &p()).unwrap();
                    assert!((l - r).abs() < 1e-13, "{kind} t={t} z={z}: {l} vs {r}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_nome() {
        assert!(matches!(
            theta_series(ThetaKind::Three, 0.0, 1.0, &p()),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            theta_product(ThetaKind::Three, 0.0, 0.0, &p()),
            Err(Error::Domain { .. })
        ));
        assert!(modular_pair(ThetaKind::Three, 0.0, -1.0, &p()).is_err());
        assert!(LatticeParam::new(0.0).is_err());
    }

    #[test]
    fn lattice_dual() {
        let l = LatticeParam::new(4.0).unwrap();
        assert_abs_diff_eq!(l.dual().c(), 0.25);
        assert_abs_diff_eq!(l.q(), (-4.0 * PI).exp());
    }
}
