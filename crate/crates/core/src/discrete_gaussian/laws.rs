//! Distributional identities: duality under `k <-> k'`, the Landen
//! convolution law, the stability mixture and the Heine decomposition.
//! Each is exposed as a defect (zero when the identity holds) computed from
//! exact truncated pmfs.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Family, ThetaDistribution, VarianceRoute};
use crate::elliptic::EllipticModulus;
use crate::error::{Error, Result};

type Law = BTreeMap<i64, f64>;

/// Law of `a X + b Y` for independent `X ~ x`, `Y ~ y`.
fn combine(x: &Law, a: i64, y: &Law, b: i64) -> Law {
    let mut out = Law::new();
    for (&m, &p) in x {
        for (&n, &r) in y {
            *out.entry(a * m + b * n).or_insert(0.0) += p * r;
        }
    }
    out
}

fn max_gap(x: &Law, y: &Law) -> f64 {
    x.keys()
        .chain(y.keys())
        .map(|n| (x.get(n).copied().unwrap_or(0.0) - y.get(n).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

fn check_modulus(op: &'static str, k: f64) -> Result<()> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::domain(op, format!("modulus must lie in (0, 1), got {k}")));
    }
    Ok(())
}

/// Difference of the two sides of the moment duality between `theta_3`
/// variables with moduli `k` and `k'`:
///
/// ```text
/// mu_2m(k)/K^2m - (-1)^m mu_2m(k')/K'^2m
///   = sum_{l=1..m} (2m)!/(l!(2m-2l)!) (-1)^{m-l}/(4 pi K K')^l mu_{2m-2l}(k')/K'^{2(m-l)}
/// ```
pub fn duality_defect(k: f64, m: u32) -> Result<f64> {
    const OP: &str = "duality_defect";
    check_modulus(OP, k)?;
    if m == 0 {
        return Err(Error::domain(OP, "moment index must be positive"));
    }
    let x = ThetaDistribution::from_modulus(Family::Theta3, k)?;
    let mk = *x.modulus();
    let y = ThetaDistribution::from_modulus(Family::Theta3, mk.k_prime)?;
    let (big_k, big_kp) = (mk.big_k, mk.big_k_prime);
    let two_m = 2 * m;
    let sign = |e: u32| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let mu_y = |order: u32| if order == 0 { 1.0 } else { y.centered_moment(order) };

    let lhs = x.centered_moment(two_m) / big_k.powi(two_m as i32) - sign(m) * mu_y(two_m) / big_kp.powi(two_m as i32);
    let rhs: f64 = (1..=m)
        .map(|l| {
            let rest = 2 * (m - l);
            fact(two_m) / (fact(l) * fact(rest)) * sign(m - l) / (4.0 * PI * big_k * big_kp).powi(l as i32) * mu_y(rest)
                / big_kp.powi(rest as i32)
        })
        .sum();
    Ok(lhs - rhs)
}

/// `E[(-1)^X X]` for the `theta_2` distribution at modulus `k`.
pub fn theta2_signed_first_moment(k: f64) -> Result<f64> {
    check_modulus("theta2_signed_first_moment", k)?;
    let d = ThetaDistribution::from_modulus(Family::Theta2, k)?;
    Ok(d.expectation(|n| if n % 2 == 0 { n as f64 } else { -(n as f64) }))
}

/// `sqrt(k)/K(k) E[(-1)^X X]` at `k` minus the same at `k'`; the two agree
/// by the modular transformation of `theta_1'`.
pub fn signed_moment_defect(k: f64) -> Result<f64> {
    let m = EllipticModulus::new(k)?;
    let side = |kk: f64, big_k: f64| -> Result<f64> { Ok(kk.sqrt() / big_k * theta2_signed_first_moment(kk)?) };
    Ok(side(m.k, m.big_k)? - side(m.k_prime, m.big_k_prime)?)
}

/// `max_n |P(X2(c) + X3(c) = n) - P(X2(c/2) = n)|`.
pub fn convolution_defect(c: f64) -> Result<f64> {
    let x2 = ThetaDistribution::new(Family::Theta2, c)?;
    let x3 = ThetaDistribution::new(Family::Theta3, c)?;
    let half = ThetaDistribution::new(Family::Theta2, c / 2.0)?;
    Ok(max_gap(&combine(&x2.law(), 1, &x3.law(), 1), &half.law()))
}

/// The Bernoulli mixture weight of the stability law: `aX + bX'` with
/// `X, X' ~ theta_3(c)` follows `Z_3` with probability `p_c` and `Z_2`
/// otherwise, where
///
/// ```text
/// Z_3 = (a + b) U + (a - b) U',          U, U' ~ theta_3(2c)
/// Z_2 = a + (a + b) V + (a - b) V',      V, V' ~ theta_2(2c)
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityMixture {
    pub c: f64,
    pub p_c: f64,
}

impl StabilityMixture {
    pub fn new(c: f64) -> Result<Self> {
        let d = ThetaDistribution::new(Family::Theta3, c)?;
        Ok(StabilityMixture {
            c,
            p_c: 0.5 * (1.0 + d.modulus().k_prime),
        })
    }

    /// `p_c` from the theta constants, `theta_3(0, q^2)^2 / theta_3(0, q)^2`.
    pub fn p_c_from_theta(&self) -> Result<f64> {
        let n1 = ThetaDistribution::new(Family::Theta3, self.c)?.norm();
        let n2 = ThetaDistribution::new(Family::Theta3, 2.0 * self.c)?.norm();
        Ok((n2 / n1).powi(2))
    }

    /// Exact law of the mixture for integer coefficients.
    pub fn law(&self, a: i64, b: i64) -> Result<BTreeMap<i64, f64>> {
        let u = ThetaDistribution::new(Family::Theta3, 2.0 * self.c)?.law();
        let v = ThetaDistribution::new(Family::Theta2, 2.0 * self.c)?.law();
        let z3 = combine(&u, a + b, &u, a - b);
        let z2 = combine(&v, a + b, &v, a - b);
        let mut out = Law::new();
        for (n, p) in z3 {
            *out.entry(n).or_insert(0.0) += self.p_c * p;
        }
        for (n, p) in z2 {
            *out.entry(n + a).or_insert(0.0) += (1.0 - self.p_c) * p;
        }
        Ok(out)
    }
}

/// `max_n |P(aX + bX' = n) - P(mixture = n)|` for `X, X' ~ theta_3(c)`.
pub fn stability_defect(a: i64, b: i64, c: f64) -> Result<f64> {
    if a == 0 || b == 0 {
        return Err(Error::domain("stability_defect", "coefficients must be nonzero"));
    }
    let x = ThetaDistribution::new(Family::Theta3, c)?.law();
    let lhs = combine(&x, a, &x, b);
    Ok(max_gap(&lhs, &StabilityMixture::new(c)?.law(a, b)?))
}

/// `h(X) = (1/2) log((2/pi) K) + pi K' sigma^2 / K` for `theta_3` at modulus `k`.
pub fn entropy_theta3(k: f64) -> Result<f64> {
    check_modulus("entropy_theta3", k)?;
    let d = ThetaDistribution::from_modulus(Family::Theta3, k)?;
    let m = d.modulus();
    let var = d.variance(VarianceRoute::Elliptic)?;
    Ok(0.5 * (2.0 / PI * m.big_k).ln() + PI * m.big_k_prime * var / m.big_k)
}

fn heine_weights(q: f64) -> Vec<f64> {
    let mut w = vec![1.0];
    let mut i = 1;
    loop {
        let prev = w[i - 1];
        let next = prev * q.powi(2 * i as i32 - 1) / (1.0 - q.powi(2 * i as i32));
        if next < 1e-20 * w[0] || next == 0.0 {
            break;
        }
        w.push(next);
        i += 1;
    }
    w
}

/// Heine law on `{0, 1, ...}`: `P(i) proportional to q^{i^2} / (q^2; q^2)_i`.
pub fn heine_pmf(q: f64, i: u64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain("heine_pmf", format!("nome must lie in (0, 1), got {q}")));
    }
    let w = heine_weights(q);
    let total: f64 = w.iter().sum();
    Ok(w.get(i as usize).copied().unwrap_or(0.0) / total)
}

/// `max_n |P(A - B = n) - P(X3(c) = n)|` for independent Heine `A`, `B`
/// with `q = exp(-pi c)`.
pub fn heine_difference_defect(c: f64) -> Result<f64> {
    let d = ThetaDistribution::new(Family::Theta3, c)?;
    let w = heine_weights(d.q());
    let total: f64 = w.iter().sum();
    let heine: Law = w.iter().enumerate().map(|(i, p)| (i as i64, p / total)).collect();
    Ok(max_gap(&combine(&heine, 1, &heine, -1), &d.law()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn duality_first_moment() {
        for &k in &[0.2, 0.4, FRAC_1_SQRT_2, 0.9] {
            assert!(duality_defect(k, 1).unwrap().abs() < 1e-11, "k={k}");
        }
        assert!(duality_defect(0.6, 2).unwrap().abs() < 1e-9);
        assert!(duality_defect(0.35, 3).unwrap().abs() < 1e-8);
    }

    #[test]
    fn duality_in_lattice_form() {
        for &c in &[0.5, 1.3, 3.0] {
            let a = ThetaDistribution::new(Family::Theta3, c).unwrap();
            let b = ThetaDistribution::new(Family::Theta3, 1.0 / c).unwrap();
            let s = c * a.variance(VarianceRoute::Direct).unwrap() + b.variance(VarianceRoute::Direct).unwrap() / c;
            assert_abs_diff_eq!(s, 0.5 / PI, epsilon = 1e-11);
        }
    }

    #[test]
    fn signed_moment_duality() {
        assert!(signed_moment_defect(0.3).unwrap().abs() < 1e-10);
        assert!(signed_moment_defect(0.8).unwrap().abs() < 1e-10);
        assert!(signed_moment_defect(FRAC_1_SQRT_2).unwrap().abs() < 1e-13);
        assert!(theta2_signed_first_moment(0.3).unwrap().abs() > 1e-3);
    }

    #[test]
    fn convolution_law() {
        for &c in &[0.5, 1.0, 2.0] {
            assert!(convolution_defect(c).unwrap() < 1e-12, "c={c}");
        }
        assert!(convolution_defect(4.0).unwrap() < 1e-14);
    }

    #[test]
    fn stability_law() {
        let s = StabilityMixture::new(1.0).unwrap();
        assert_abs_diff_eq!(s.p_c, 0.5 * (1.0 + FRAC_1_SQRT_2), epsilon = 1e-12);
        assert_abs_diff_eq!(s.p_c, s.p_c_from_theta().unwrap(), epsilon = 1e-12);
        for (a, b) in [(1, 1), (1, -1), (2, 3), (-1, 2)] {
            assert!(stability_defect(a, b, 1.0).unwrap() < 1e-12, "({a},{b})");
        }
        assert!(stability_defect(1, 1, 0.4).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_closed_form() {
        for &k in &[0.3, FRAC_1_SQRT_2, 0.95] {
            let d = ThetaDistribution::from_modulus(Family::Theta3, k).unwrap();
            assert_abs_diff_eq!(entropy_theta3(k).unwrap(), d.entropy(), epsilon = 1e-10);
        }
        let g34 = libm::tgamma(0.75);
        let sym = |k: f64| entropy_theta3(k).unwrap() + entropy_theta3((1.0 - k * k).sqrt()).unwrap();
        let min = sym(FRAC_1_SQRT_2);
        assert_abs_diff_eq!(min, 0.5 + 0.5 * (PI / g34.powi(4)).ln(), epsilon = 1e-12);
        for &k in &[0.3, 0.6, 0.69, 0.72, 0.9] {
            assert!(sym(k) > min);
        }
    }

    #[test]
    fn heine() {
        let q = (-PI).exp();
        let total: f64 = (0..40).map(|i| heine_pmf(q, i).unwrap()).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
        assert!(heine_difference_defect(1.0).unwrap() < 1e-12);
        assert!(heine_difference_defect(0.3).unwrap() < 1e-12);
        assert!(heine_pmf(1.0, 0).is_err());
    }
}
