//! Named identity checks. Each check evaluates both sides of an identity on
//! a fixed grid and reports the largest discrepancy; a check never fails by
//! returning an error, only by exceeding its tolerance.

mod ml;
pub mod tables;

pub use ml::{ml_corrected, ml_partial, ml_tail, MlKind};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::brownian::{self, DensityQuery, MethodKind, ProcessKind};
use crate::discrete_gaussian::{self as dg, CumulantRoute, Family, ThetaDistribution, VarianceRoute};
use crate::elliptic::{landen_ascend, legendre_defect, modulus_from_lattice, EllipticModulus};
use crate::error::{Error, Result};
use crate::kolmogorov::{self, CdfRoute, PdfRoute};
use crate::series::SeriesPolicy;
use crate::theta::{modular_pair, theta1_prime, theta_series, ThetaKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub grid: Vec<Vec<f64>>,
    pub max_defect: f64,
    pub tol: f64,
    pub passed: bool,
    /// Set when evaluating the identity itself failed; the report then fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Lattice parameters and times.
pub const T_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
/// Interior points of `[-1, 1]`.
pub const X_GRID: [f64; 5] = [-0.8, -0.4, 0.0, 0.4, 0.8];
pub const K_GRID: [f64; 4] = [0.2, 0.4, FRAC_1_SQRT_2, 0.9];
pub const ML_TERMS: usize = 1000;

fn z_grid() -> Vec<f64> {
    (0..9).map(|i| -1.0 + 0.25 * i as f64).collect()
}

fn h_grid() -> Vec<f64> {
    (0..9).map(|i| 0.4 + 0.2 * i as f64).collect()
}

type Check = fn(&SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>>;

struct Identity {
    name: &'static str,
    tol: f64,
    check: Check,
}

macro_rules! identities {
    ($($name:literal, $tol:expr, $check:expr;)*) => {
        &[$(Identity { name: $name, tol: $tol, check: $check }),*]
    };
}

/// Every registered identity, in reporting order.
const REGISTRY: &[Identity] = identities![
    "modular-1", 1e-11, |p| modular(ThetaKind::One, p);
    "modular-2", 1e-11, |p| modular(ThetaKind::Two, p);
    "modular-3", 1e-11, |p| modular(ThetaKind::Three, p);
    "modular-4", 1e-11, |p| modular(ThetaKind::Four, p);
    "theta-constant-2-4", 1e-11, |p| theta_constant_duality(ThetaKind::Two, ThetaKind::Four, p);
    "theta-constant-4-2", 1e-11, |p| theta_constant_duality(ThetaKind::Four, ThetaKind::Two, p);
    "theta-constant-3-3", 1e-11, |p| theta_constant_duality(ThetaKind::Three, ThetaKind::Three, p);
    "gaussian-periodization", 1e-11, gaussian_periodization;
    "density-reflected-xcheck", 1e-11, |p| density_xcheck(ProcessKind::Reflected, p);
    "density-killed-xcheck", 1e-11, |p| density_xcheck(ProcessKind::Killed, p);
    "green-reflected-xcheck", 1e-8, |p| green_xcheck(ProcessKind::Reflected, p);
    "green-killed-xcheck", 1e-8, |p| green_xcheck(ProcessKind::Killed, p);
    "ml-coth", 1e-8, |_| mittag_leffler(MlKind::Coth);
    "ml-csch", 1e-8, |_| mittag_leffler(MlKind::Csch);
    "ml-tanh", 1e-8, |_| mittag_leffler(MlKind::Tanh);
    "ml-sech", 1e-8, |_| mittag_leffler(MlKind::Sech);
    "exit-density-modular", 1e-11, exit_density_modular;
    "theta1prime-modular", 1e-11, theta1prime_modular;
    "bessel3-density", 1e-11, |p| bessel3(true, p);
    "bessel3-cdf", 1e-11, |p| bessel3(false, p);
    "duality-m1", 1e-11, |_| duality(1, &K_GRID);
    "duality-m2", 1e-9, |_| duality(2, &[0.4, 0.6, 0.8]);
    "parity", 1e-11, |_| parity();
    "signed-moment", 1e-10, |_| signed_moment();
    "convolution", 1e-12, |_| per_c(&[0.5, 1.0, 2.0, 4.0], dg::convolution_defect);
    "stability-1-1", 1e-12, |_| per_c(&[0.5, 1.0, 2.0], |c| dg::stability_defect(1, 1, c));
    "stability-1-minus1", 1e-12, |_| per_c(&[0.5, 1.0, 2.0], |c| dg::stability_defect(1, -1, c));
    "heine-difference", 1e-12, |_| per_c(&[0.5, 1.0, 2.0], dg::heine_difference_defect);
    "kolmogorov-routes", 2e-11, kolmogorov_routes;
    "kolmogorov-density", 2e-9, kolmogorov_density;
    "jacobi-theta-constant", 1e-11, jacobi_theta_constant;
    "legendre", 1e-13, |_| legendre();
    "landen", 1e-11, |_| landen();
    "entropy", 1e-10, |_| entropy();
    "table-1", 1e-10, |_| table_1();
    "table-2", 1e-9, |_| variance_table(Family::Theta2);
    "table-3", 1e-9, |_| variance_table(Family::Theta3);
    "variance-routes", 1e-11, |_| variance_routes();
    "cumulant-routes", 1e-8, |_| cumulant_routes();
];

/// Names of all registered identities, in reporting order.
pub fn registry() -> Vec<&'static str> {
    REGISTRY.iter().map(|i| i.name).collect()
}

/// Default tolerance of a registered identity.
pub fn default_tol(name: &str) -> Result<f64> {
    lookup(name).map(|i| i.tol)
}

fn lookup(name: &str) -> Result<&'static Identity> {
    REGISTRY
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

/// Runs the named identities (in parallel, reported in the order given).
/// `tol` overrides every per-identity tolerance when present.
pub fn run_suite(names: &[&str], tol: Option<f64>, policy: &SeriesPolicy) -> Result<Vec<VerificationReport>> {
    if names.is_empty() {
        return Err(Error::domain("run_suite", "no identities requested"));
    }
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(
                "run_suite",
                format!("tolerance must be positive, got {t}"),
            ));
        }
    }
    let ids = names.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>()?;
    Ok(ids
        .par_iter()
        .map(|id| evaluate(id, tol.unwrap_or(id.tol), policy))
        .collect())
}

/// Runs every registered identity at its default tolerance.
pub fn run_all(policy: &SeriesPolicy) -> Vec<VerificationReport> {
    run_suite(&registry(), None, policy).expect("registry names are valid")
}

fn evaluate(id: &Identity, tol: f64, policy: &SeriesPolicy) -> VerificationReport {
    match (id.check)(policy) {
        Ok(points) => {
            let max_defect = points.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max);
            let nan = points.iter().any(|(_, d)| d.is_nan());
            VerificationReport {
                name: id.name.to_string(),
                grid: points.into_iter().map(|(g, _)| g).collect(),
                max_defect: if nan { f64::NAN } else { max_defect },
                tol,
                passed: !nan && max_defect <= tol,
                error: None,
            }
        }
        Err(e) => VerificationReport {
            name: id.name.to_string(),
            grid: Vec::new(),
            max_defect: f64::INFINITY,
            tol,
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

fn modular(kind: ThetaKind, p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for &t in &T_GRID {
        for z in z_grid() {
            let (l, r) = modular_pair(kind, z, t, p)?;
            out.push((vec![z, t], l - r));
        }
    }
    Ok(out)
}

/// `sqrt(t) theta_a(0, e^{-pi t}) = theta_b(0, e^{-pi/t})`.
fn theta_constant_duality(a: ThetaKind, b: ThetaKind, p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&t| {
            let l = t.sqrt() * theta_series(a, 0.0, (-PI * t).exp(), p)?;
            let r = theta_series(b, 0.0, (-PI / t).exp(), p)?;
            Ok((vec![t], l - r))
        })
        .collect()
}

/// `(pi v)^{-1/2} sum exp(-(r+n)^2/v) = theta_3(pi r, e^{-pi^2 v})`.
fn gaussian_periodization(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for &v in &T_GRID {
        for r in z_grid() {
            let pre = 1.0 / (PI * v).sqrt();
            let l = pre
                * p.with_tol(p.tol / pre.max(1.0)).sum_z("gaussian-periodization", |n| {
                    let g = (-(r + n as f64).powi(2) / v).exp();
                    (g, g)
                })?;
            let rhs = theta_series(ThetaKind::Three, PI * r, (-PI * PI * v).exp(), p)?;
            out.push((vec![r, v], l - rhs));
        }
    }
    Ok(out)
}

fn density_xcheck(proc: ProcessKind, p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for &t in &T_GRID {
        for &x in &X_GRID {
            for &y in &X_GRID {
                let q = DensityQuery::new(t, x, y)?;
                let a = brownian::density(proc, MethodKind::Images, &q, p)?;
                let b = brownian::density(proc, MethodKind::Spectral, &q, p)?;
                out.push((vec![t, x, y], a - b));
            }
        }
    }
    Ok(out)
}

fn green_xcheck(proc: ProcessKind, p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for &alpha in &T_GRID {
        for &x in &X_GRID {
            for &y in &X_GRID {
                let a = brownian::green(proc, MethodKind::Images, alpha, x, y, p)?;
                let b = brownian::green(proc, MethodKind::Spectral, alpha, x, y, p)?;
                out.push((vec![alpha, x, y], a - b));
            }
        }
    }
    Ok(out)
}

fn mittag_leffler(kind: MlKind) -> Result<Vec<(Vec<f64>, f64)>> {
    [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0]
        .iter()
        .map(|&z| Ok((vec![z], ml_corrected(kind, z, ML_TERMS)? - kind.exact(z))))
        .collect()
}

fn exit_density_modular(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&t| {
            let a = brownian::exit_density(MethodKind::Spectral, t, p)?;
            let b = brownian::exit_density(MethodKind::Images, t, p)?;
            Ok((vec![t], a - b))
        })
        .collect()
}

/// `t^{3/2} theta_1'(0 | it) = theta_1'(0 | i/t)`.
fn theta1prime_modular(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&t| {
            let a = t.powf(1.5) * theta1_prime(0.0, (-PI * t).exp(), p)?;
            let b = theta1_prime(0.0, (-PI / t).exp(), p)?;
            Ok((vec![t], a - b))
        })
        .collect()
}

fn bessel3(density: bool, p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&t| {
            let f = if density {
                brownian::bessel3_hit_density
            } else {
                brownian::bessel3_hit_cdf
            };
            Ok((vec![t], f(MethodKind::Spectral, t, p)? - f(MethodKind::Images, t, p)?))
        })
        .collect()
}

fn duality(m: u32, ks: &[f64]) -> Result<Vec<(Vec<f64>, f64)>> {
    ks.iter().map(|&k| Ok((vec![k], dg::duality_defect(k, m)?))).collect()
}

/// `E(-1)^X` by direct summation against `0` and `sqrt(k')`.
fn parity() -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for f in [Family::Theta2, Family::Theta3] {
        for &c in &T_GRID {
            let d = ThetaDistribution::new(f, c)?;
            let direct = d.expectation(|n| if n % 2 == 0 { 1.0 } else { -1.0 });
            let expected = match f {
                Family::Theta2 => 0.0,
                Family::Theta3 => modulus_from_lattice(c)?.k_prime.sqrt(),
            };
            out.push((vec![if f == Family::Theta2 { 2.0 } else { 3.0 }, c], direct - expected));
        }
    }
    Ok(out)
}

fn signed_moment() -> Result<Vec<(Vec<f64>, f64)>> {
    [0.3, 0.5, FRAC_1_SQRT_2, 0.8, 0.95]
        .iter()
        .map(|&k| Ok((vec![k], dg::signed_moment_defect(k)?)))
        .collect()
}

fn per_c(cs: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Vec<(Vec<f64>, f64)>> {
    cs.iter().map(|&c| Ok((vec![c], f(c)?))).collect()
}

fn kolmogorov_routes(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    h_grid()
        .into_iter()
        .map(|h| {
            let s = kolmogorov::kolmogorov_cdf(h, CdfRoute::Series, p)?;
            let e = kolmogorov::kolmogorov_cdf(h, CdfRoute::Elliptic, p)?;
            let q = kolmogorov::kolmogorov_cdf(h, CdfRoute::Product, p)?;
            Ok((vec![h], (s - e).abs().max((s - q).abs())))
        })
        .collect()
}

fn kolmogorov_density(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    h_grid()
        .into_iter()
        .map(|h| {
            let s = kolmogorov::kolmogorov_pdf(h, PdfRoute::Series, p)?;
            let e = kolmogorov::kolmogorov_pdf(h, PdfRoute::Elliptic, p)?;
            Ok((vec![h], s - e))
        })
        .collect()
}

/// `theta_3^4 = theta_2^4 + theta_4^4` at `z = 0`.
fn jacobi_theta_constant(p: &SeriesPolicy) -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&c| {
            let q = (-PI * c).exp();
            let t = |k| theta_series(k, 0.0, q, p).map(|v| v.powi(4));
            Ok((vec![c], t(ThetaKind::Three)? - t(ThetaKind::Two)? - t(ThetaKind::Four)?))
        })
        .collect()
}

fn legendre() -> Result<Vec<(Vec<f64>, f64)>> {
    [0.1, 0.3, 0.5, FRAC_1_SQRT_2, 0.9, 0.99]
        .iter()
        .map(|&k| Ok((vec![k], legendre_defect(&EllipticModulus::new(k)?))))
        .collect()
}

/// The ascending Landen map halves the lattice parameter.
fn landen() -> Result<Vec<(Vec<f64>, f64)>> {
    T_GRID
        .iter()
        .map(|&c| {
            let k = modulus_from_lattice(c)?.k;
            let halved = modulus_from_lattice(c / 2.0)?.k;
            Ok((vec![c], landen_ascend(k)? - halved))
        })
        .collect()
}

fn entropy() -> Result<Vec<(Vec<f64>, f64)>> {
    [0.3, 0.5, FRAC_1_SQRT_2, 0.9]
        .iter()
        .map(|&k| {
            let d = ThetaDistribution::from_modulus(Family::Theta3, k)?;
            Ok((vec![k], dg::entropy_theta3(k)? - d.entropy()))
        })
        .collect()
}

fn table_1() -> Result<Vec<(Vec<f64>, f64)>> {
    tables::ROWS
        .map(|r| Ok((vec![r as f64], tables::singular_row(r)?.max_defect())))
        .collect()
}

fn variance_table(family: Family) -> Result<Vec<(Vec<f64>, f64)>> {
    tables::ROWS
        .map(|r| Ok((vec![r as f64], tables::variance_row(family, r)?.abs_diff)))
        .collect()
}

fn variance_routes() -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for f in [Family::Theta2, Family::Theta3] {
        for &c in &T_GRID {
            let d = ThetaDistribution::new(f, c)?;
            let e = d.variance(VarianceRoute::Elliptic)?;
            let l = d.variance(VarianceRoute::Lambert)?;
            let s = d.variance(VarianceRoute::Direct)?;
            let spread = e.max(l).max(s) - e.min(l).min(s);
            out.push((vec![if f == Family::Theta2 { 2.0 } else { 3.0 }, c], spread));
        }
    }
    Ok(out)
}

fn cumulant_routes() -> Result<Vec<(Vec<f64>, f64)>> {
    let mut out = Vec::new();
    for f in [Family::Theta2, Family::Theta3] {
        for &c in &T_GRID {
            let d = ThetaDistribution::new(f, c)?;
            for order in [2, 4] {
                let l = d.cumulant(order, CumulantRoute::Lambert)?;
                let e = d.cumulant(order, CumulantRoute::Eisenstein)?;
                out.push((
                    vec![if f == Family::Theta2 { 2.0 } else { 3.0 }, c, order as f64],
                    l - e,
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let reports = run_all(&SeriesPolicy::default());
        assert_eq!(reports.len(), REGISTRY.len());
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(reports.iter().all(|r| !r.grid.is_empty()));
    }

    #[test]
    fn ordering_and_unknown_names() {
        let r = run_suite(&["legendre", "modular-3"], Some(1e-11), &SeriesPolicy::default()).unwrap();
        assert_eq!(r[0].name, "legendre");
        assert_eq!(r[1].name, "modular-3");
        assert!(matches!(
            run_suite(&["frobnicate"], None, &SeriesPolicy::default()),
            Err(Error::UnknownIdentity(_))
        ));
    }

    #[test]
    fn tightened_tolerance_fails() {
        let r = run_suite(&["green-killed-xcheck"], Some(1e-300), &SeriesPolicy::default()).unwrap();
        assert!(!r[0].passed);
    }

    #[test]
    fn deterministic() {
        let p = SeriesPolicy::default();
        let names = ["cumulant-routes", "kolmogorov-routes", "ml-sech"];
        assert_eq!(
            run_suite(&names, None, &p).unwrap(),
            run_suite(&names, None, &p).unwrap()
        );
    }
}
