//! Special functions and the operator constants they define.
//!
//! Derivation chain for the constants used throughout:
//!
//! * fractional-kernel constant  `c(N, s) = s (1-s) Gamma(N/2 + s) 4^s / (Gamma(2-s) pi^(N/2))`,
//!   the normalization making the singular-integral operator match the Fourier
//!   symbol `|xi|^(2s)`; at `N = 1, s = 1/2` it reduces to `1/pi`, the classical
//!   half-Laplacian constant.
//! * log-kernel constant  `c_N = pi^(-N/2) Gamma(N/2)`, so `c_1 = 1` and
//!   `c_2 = 1/pi`.
//! * zero-order constant  `rho_N = 2 ln 2 + psi(N/2) - gamma_EM`; with
//!   `psi(1/2) = -gamma_EM - 2 ln 2` this gives `rho_1 = -2 gamma_EM`, and with
//!   `psi(1) = -gamma_EM` it gives `rho_2 = 2 ln 2 - 2 gamma_EM`.
//!
//! Gamma uses the Lanczos approximation (g = 7, 9 terms), digamma uses the
//! shift recurrence into `x >= 16` plus the Bernoulli asymptotic series; both
//! are accurate to about 1e-14 relative in the ranges used here. Independent
//! cross-checks (a Spouge-series oracle) live in the acceptance tests.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant to f64 precision.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Lanczos coefficients for g = 7.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_C: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments (Lanczos approximation).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the approximation in its accurate half-plane
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_C[0];
    for (i, c) in LANCZOS_C.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Digamma function for positive real arguments.
///
/// Recurrence `psi(x) = psi(x + 1) - 1/x` shifts the argument above 16, where
/// the Bernoulli series `ln x - 1/(2x) - sum B_2n / (2n x^2n)` converges below
/// 1e-17.
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma requires a positive argument");
    let mut x = x;
    let mut acc = 0.0;
    while x < 16.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // coefficients B_2n / (2n): 1/12, -1/120, 1/252, -1/240, 1/132, -691/32760
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - series
}

/// Constants of the zero-order (logarithmic) operator in dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Ambient dimension entering the formulas (geometry stays 1-D).
    pub dim: u32,
    /// Euler-Mascheroni constant.
    pub gamma_em: f64,
    /// Kernel constant `pi^(-dim/2) Gamma(dim/2)`.
    pub c_n: f64,
    /// Zero-order constant `2 ln 2 + psi(dim/2) - gamma_em`.
    pub rho_n: f64,
}

/// Fractional-kernel constant `c(N, s)`; requires `s` strictly inside (0, 1).
pub fn frac_constant(dim: u32, s: f64) -> Result<f64> {
    if dim < 1 {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            requirement: "dim >= 1",
            value: dim as f64,
        });
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "s",
            requirement: "s in (0, 1)",
            value: s,
        });
    }
    let nh = dim as f64 / 2.0;
    Ok(s * (1.0 - s) * gamma(nh + s) * 4f64.powf(s)
        / (gamma(2.0 - s) * std::f64::consts::PI.powf(nh)))
}

/// Constants `(c_N, rho_N)` of the logarithmic operator.
pub fn log_constants(dim: u32) -> Result<Constants> {
    if dim < 1 {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            requirement: "dim >= 1",
            value: dim as f64,
        });
    }
    let nh = dim as f64 / 2.0;
    Ok(Constants {
        dim,
        gamma_em: EULER_MASCHERONI,
        c_n: gamma(nh) / std::f64::consts::PI.powf(nh),
        rho_n: 2.0 * std::f64::consts::LN_2 + digamma(nh) - EULER_MASCHERONI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_hits_exact_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((gamma(2.0) - 1.0).abs() < 1e-14);
        assert!((gamma(5.0) - 24.0).abs() < 24.0 * 1e-14);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((gamma(0.5) - sqrt_pi).abs() < 1e-14);
        assert!((gamma(1.5) - 0.5 * sqrt_pi).abs() < 1e-14);
        // functional equation at a generic point
        let x = 0.731;
        assert!((gamma(x + 1.0) - x * gamma(x)).abs() < 1e-14 * gamma(x + 1.0).abs());
    }

    #[test]
    fn digamma_hits_closed_forms() {
        let ln4 = 2.0 * std::f64::consts::LN_2;
        assert!((digamma(1.0) + EULER_MASCHERONI).abs() < 1e-13);
        assert!((digamma(0.5) + EULER_MASCHERONI + ln4).abs() < 1e-13);
        assert!((digamma(1.5) - (2.0 - EULER_MASCHERONI - ln4)).abs() < 1e-13);
        assert!((digamma(2.0) - (1.0 - EULER_MASCHERONI)).abs() < 1e-13);
        // recurrence at a generic point
        let x = 3.917;
        assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-13);
    }

    #[test]
    fn kernel_constant_matches_half_laplacian() {
        let c = frac_constant(1, 0.5).unwrap();
        assert!((c - 1.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn kernel_constant_small_s_slope_is_one() {
        // c(1, s) / s extends continuously to 1 at s = 0
        let r1 = frac_constant(1, 1e-2).unwrap() / 1e-2;
        let r2 = frac_constant(1, 1e-4).unwrap() / 1e-4;
        assert!((r1 - 1.0).abs() < 2e-2, "got {r1}");
        assert!((r2 - 1.0).abs() < 2e-4, "got {r2}");
    }

    #[test]
    fn kernel_constant_positive_across_range() {
        for k in 1..100 {
            let s = k as f64 / 100.0;
            assert!(frac_constant(1, s).unwrap() > 0.0);
            assert!(frac_constant(2, s).unwrap() > 0.0);
        }
    }

    #[test]
    fn kernel_constant_rejects_bad_s() {
        assert!(frac_constant(1, 0.0).is_err());
        assert!(frac_constant(1, 1.0).is_err());
        assert!(frac_constant(1, -0.3).is_err());
        assert!(frac_constant(1, f64::NAN).is_err());
    }

    #[test]
    fn log_constants_dimension_one_and_two() {
        let c1 = log_constants(1).unwrap();
        assert!((c1.c_n - 1.0).abs() < 1e-14);
        assert!((c1.rho_n + 2.0 * EULER_MASCHERONI).abs() < 1e-13);
        let c2 = log_constants(2).unwrap();
        assert!((c2.c_n - 1.0 / std::f64::consts::PI).abs() < 1e-14);
        let rho2 = 2.0 * std::f64::consts::LN_2 - 2.0 * EULER_MASCHERONI;
        assert!((c2.rho_n - rho2).abs() < 1e-13);
        assert!((c2.rho_n - 0.231_863_1).abs() < 1e-6);
    }
}
