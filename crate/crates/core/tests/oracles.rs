//! Reference values computed independently (closed forms, 30-digit
//! arbitrary-precision evaluations, or elementary sums written out here).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use approx::{assert_abs_diff_eq, assert_relative_eq};
use thetakit::brownian::{self, MethodKind};
use thetakit::discrete_gaussian::{self as dg, CumulantRoute, Family, ThetaDistribution, VarianceRoute};
use thetakit::elliptic::{self, EllipticModulus};
use thetakit::kolmogorov::{self, CdfRoute};
use thetakit::theta::{theta1_prime, theta_product, theta_series};
use thetakit::{SeriesPolicy, ThetaKind};

const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;

fn p() -> SeriesPolicy {
    SeriesPolicy::default()
}

#[test]
fn theta_values_at_half() {
    let cases = [
        (ThetaKind::Two, 2.128_931_250_513_028),
        (ThetaKind::Three, 2.128_936_827_211_877),
        (ThetaKind::Four, 0.121_124_208_002_580_5),
    ];
    for (kind, v) in cases {
        assert_abs_diff_eq!(theta_series(kind, 0.0, 0.5, &p()).unwrap(), v, epsilon = 1e-14);
        assert_abs_diff_eq!(theta_product(kind, 0.0, 0.5, &p()).unwrap(), v, epsilon = 1e-14);
    }
    assert_abs_diff_eq!(
        theta1_prime(0.0, 0.5, &p()).unwrap(),
        0.548_978_532_560_340_6,
        epsilon = 1e-13
    );
}

#[test]
fn jacobi_derivative_identity() {
    for q in [0.05, 0.2, 0.5, 0.8] {
        let prod: f64 = [ThetaKind::Two, ThetaKind::Three, ThetaKind::Four]
            .iter()
            .map(|&k| theta_product(k, 0.0, q, &p()).unwrap())
            .product();
        assert_relative_eq!(theta1_prime(0.0, q, &p()).unwrap(), prod, max_relative = 1e-12);
    }
}

#[test]
fn lemniscatic_values() {
    // theta_3(e^{-pi}) = pi^{1/4} / Gamma(3/4)
    let theta = PI.powf(0.25) / 1.225_416_702_465_177_6;
    assert_abs_diff_eq!(theta, 1.086_434_811_213_308, epsilon = 1e-15);
    assert_abs_diff_eq!(
        theta_series(ThetaKind::Three, 0.0, (-PI).exp(), &p()).unwrap(),
        theta,
        epsilon = 1e-15
    );
    let m = EllipticModulus::new(FRAC_1_SQRT_2).unwrap();
    assert_relative_eq!(m.big_k, GAMMA_QUARTER.powi(2) / (4.0 * PI.sqrt()), max_relative = 1e-15);
    assert_relative_eq!(m.lattice(), 1.0, max_relative = 1e-15);
    let d = ThetaDistribution::new(Family::Theta3, 1.0).unwrap();
    assert_abs_diff_eq!(d.pmf(0), 1.0 / theta, epsilon = 1e-15);
    assert_abs_diff_eq!(
        d.variance(VarianceRoute::Elliptic).unwrap(),
        1.0 / (4.0 * PI),
        epsilon = 1e-15
    );
}

#[test]
fn theta2_variance_at_one() {
    // Table value 0.253728 at r = 1
    let d = ThetaDistribution::new(Family::Theta2, 1.0).unwrap();
    for route in [VarianceRoute::Elliptic, VarianceRoute::Lambert, VarianceRoute::Direct] {
        assert_abs_diff_eq!(d.variance(route).unwrap(), 0.253_727_962_756_657_3, epsilon = 1e-13);
    }
}

#[test]
fn fourth_cumulant_theta3() {
    let d = ThetaDistribution::new(Family::Theta3, 1.0).unwrap();
    let direct = d.centered_moment(4) - 3.0 * d.centered_moment(2).powi(2);
    for route in [CumulantRoute::Lambert, CumulantRoute::Eisenstein] {
        assert_abs_diff_eq!(d.cumulant(4, route).unwrap(), direct, epsilon = 1e-12);
    }
}

#[test]
fn euler_numbers() {
    // E_{2n-1}(0) for n = 1..4: -1/2, 1/4, -1/2, 17/8
    for (n, v) in [(1, -0.5), (2, 0.25), (3, -0.5), (4, 17.0 / 8.0)] {
        assert_abs_diff_eq!(dg::euler_at_zero(2 * n - 1), v, epsilon = 1e-15);
    }
}

#[test]
fn kolmogorov_reference() {
    assert_abs_diff_eq!(
        kolmogorov::kolmogorov_cdf(1.0, CdfRoute::Elliptic, &p()).unwrap(),
        0.730_000_328_322_645_5,
        epsilon = 1e-14
    );
    // classical 95% critical value of the limiting statistic
    let h = kolmogorov::kolmogorov_quantile(0.95, &p()).unwrap();
    assert_abs_diff_eq!(h, 1.358_098_639_322_550_4, epsilon = 1e-9);
}

#[test]
fn exit_time_reference() {
    // survival of (-1, 1) from 0 at t = 1, and the leading asymptote of the density
    let s = brownian::exit_survival(1.0, &p()).unwrap();
    let leading = 4.0 / PI * (-PI * PI / 8.0).exp();
    assert!(s < leading && s > leading * 0.99, "{s}");
    let t = 20.0;
    let d = brownian::exit_density(MethodKind::Spectral, t, &p()).unwrap();
    assert_relative_eq!(d, PI / 2.0 * (-PI * PI * t / 8.0).exp(), max_relative = 1e-12);
}

#[test]
fn singular_moduli_reproduce_their_lattice() {
    for r in 1..=10 {
        let s = elliptic::singular_reference(r).unwrap();
        let m = EllipticModulus::new(s.k).unwrap();
        assert_relative_eq!(m.big_k, s.big_k, max_relative = 1e-13);
        assert_abs_diff_eq!(m.lattice(), (r as f64).sqrt(), epsilon = 1e-12);
    }
}

#[test]
fn heine_pmf_sums_to_one() {
    let q = (-PI).exp();
    let total: f64 = (0..60).map(|i| dg::heine_pmf(q, i).unwrap()).sum();
    assert_abs_diff_eq!(total, 1.0, epsilon = 1e-14);
}
