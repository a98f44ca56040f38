//! Closed-form kernel integrals for hat-basis assembly.
//!
//! For translation-invariant kernels `k(|x - y|)` and hat functions
//! `phi_i(x) = T((x - x_i)/h)` (triangle `T`), the pair interaction reduces to
//! a one-dimensional integral against the triangle autocorrelation
//! `Psi(d) = int T(t) T(t + d) dt`:
//!
//! ```text
//!   iint (phi_i(x) - phi_i(y)) (phi_j(x) - phi_j(y)) k(|x-y|) dx dy
//!     = 2 h^2 int_0^inf k(h rho) [2 Psi(m) - Psi(m - rho) - Psi(m + rho)] drho,
//!   m = |i - j|.
//! ```
//!
//! With `k(r) = r^(-1-alpha)` this gives the weights `w_alpha(m)` below, so a
//! full-line stiffness entry is `c * h^(1-alpha) * w_alpha(|i-j|)` including
//! the exterior (zero-extension) contribution. The bracket vanishes cubically
//! at `rho = 0`, so every integral is absolutely convergent for `alpha < 2`.
//!
//! Integration strategy: the pieces touching the kernel singularity
//! (`m <= 1`, and the corner piece of `m = 2`) have exact monomial
//! antiderivatives; the remaining pieces are smooth and use adaptive
//! Gauss-Legendre panels; the constant bracket beyond the autocorrelation
//! support has an exact power (or logarithmic) tail.

use crate::error::{Error, Result};
use crate::quad::adaptive_gauss_split;

/// Panel disagreement tolerance for the smooth far-field pieces.
pub const PANEL_TOL: f64 = 1e-13;

/// Triangle autocorrelation `Psi(d) = int T(t) T(t + d) dt`, supported on
/// `|d| <= 2`; piecewise cubic with `Psi(0) = 2/3`, `Psi(1) = 1/6`.
pub fn triangle_autocorr(d: f64) -> f64 {
    let d = d.abs();
    if d <= 1.0 {
        2.0 / 3.0 - d * d + 0.5 * d * d * d
    } else if d <= 2.0 {
        let t = 2.0 - d;
        t * t * t / 6.0
    } else {
        0.0
    }
}

/// The difference bracket `2 Psi(m) - Psi(m - rho) - Psi(m + rho)`.
pub fn bracket(m: usize, rho: f64) -> f64 {
    let m = m as f64;
    2.0 * triangle_autocorr(m) - triangle_autocorr(m - rho) - triangle_autocorr(m + rho)
}

/// Stable `int_{r1}^{r2} rho^(e-1) drho`; handles the `e = 0` logarithm and
/// near-zero exponents without cancellation. Requires `0 <= r1 < r2` and
/// `e > 0` whenever `r1 = 0`.
fn pow_int(r1: f64, r2: f64, e: f64) -> f64 {
    if r1 == 0.0 {
        debug_assert!(e > 0.0, "divergent monomial integral");
        return r2.powf(e) / e;
    }
    if e.abs() < 1e-14 {
        return (r2 / r1).ln();
    }
    if e.abs() < 0.05 {
        // (r2^e - r1^e)/e = r1^e expm1(e ln(r2/r1)) / e, stable for small e
        return r1.powf(e) * (e * (r2 / r1).ln()).exp_m1() / e;
    }
    (r2.powf(e) - r1.powf(e)) / e
}

/// `int_{r1}^{r2} rho^(-1-alpha) sum_k c_k rho^k drho` for monomial
/// coefficients `c = [c_0, c_1, c_2, c_3]`.
fn poly_piece(c: [f64; 4], r1: f64, r2: f64, alpha: f64) -> f64 {
    let mut acc = 0.0;
    for (k, ck) in c.iter().enumerate() {
        if *ck != 0.0 {
            acc += ck * pow_int(r1, r2, k as f64 - alpha);
        }
    }
    acc
}

/// Monomial coefficients of the bracket on the singular pieces.
/// `m = 0`: bracket = `2 rho^2 - rho^3` on [0,1], `-4/3 + 4 rho - 2 rho^2 + rho^3/3`
/// on [1,2], constant `4/3` beyond.
/// `m = 1`: `-rho^2 + (2/3) rho^3` on [0,1],
/// `7/6 - (7/2) rho + (5/2) rho^2 - rho^3/2` on [1,2],
/// `-25/6 + (9/2) rho - (3/2) rho^2 + rho^3/6` on [2,3], constant `1/3` beyond.
struct NearField {
    pieces: &'static [([f64; 4], f64, f64)],
    tail_const: f64,
    tail_from: f64,
}

const NEAR_M0: NearField = NearField {
    pieces: &[
        ([0.0, 0.0, 2.0, -1.0], 0.0, 1.0),
        ([-4.0 / 3.0, 4.0, -2.0, 1.0 / 3.0], 1.0, 2.0),
    ],
    tail_const: 4.0 / 3.0,
    tail_from: 2.0,
};

const NEAR_M1: NearField = NearField {
    pieces: &[
        ([0.0, 0.0, -1.0, 2.0 / 3.0], 0.0, 1.0),
        ([7.0 / 6.0, -3.5, 2.5, -0.5], 1.0, 2.0),
        ([-25.0 / 6.0, 4.5, -1.5, 1.0 / 6.0], 2.0, 3.0),
    ],
    tail_const: 1.0 / 3.0,
    tail_from: 3.0,
};

/// Full-line fractional weight `w_alpha(m) = int_0^inf rho^(-1-alpha) *
/// bracket(m, rho) drho` for `alpha = 2s in (0, 2)`.
pub fn weight_frac(alpha: f64, m: usize) -> Result<f64> {
    debug_assert!(alpha > 0.0 && alpha < 2.0);
    match m {
        0 | 1 => {
            let near = if m == 0 { &NEAR_M0 } else { &NEAR_M1 };
            let mut acc = 0.0;
            for (c, r1, r2) in near.pieces {
                acc += poly_piece(*c, *r1, *r2, alpha);
            }
            acc += near.tail_const * near.tail_from.powf(-alpha) / alpha;
            Ok(acc)
        }
        _ => weight_far(alpha, m, None),
    }
}

/// Truncated log-kernel weight `w0(m) = int_0^P rho^(-1) bracket(m, rho) drho`,
/// used for the interior part of the logarithmic form; requires `P >= m + 2`
/// so the autocorrelation support is fully inside the truncation.
pub fn weight_log(m: usize, p_max: f64) -> Result<f64> {
    debug_assert!(p_max >= m as f64 + 2.0);
    match m {
        0 | 1 => {
            let near = if m == 0 { &NEAR_M0 } else { &NEAR_M1 };
            let mut acc = 0.0;
            for (c, r1, r2) in near.pieces {
                acc += poly_piece(*c, *r1, *r2, 0.0);
            }
            acc += near.tail_const * (p_max / near.tail_from).ln();
            Ok(acc)
        }
        _ => weight_far(0.0, m, Some(p_max)),
    }
}

/// Weights for `m >= 2`: the bracket is `-Psi(rho - m)` supported on
/// `[m-2, m+2]`, so there is no tail. The `m = 2` piece on [0, 1] touches the
/// kernel singularity but equals `-rho^3/6` exactly there, integrating to
/// `-1/(6 (3 - alpha))`; everything else is smooth and uses adaptive panels.
fn weight_far(alpha: f64, m: usize, _p_max: Option<f64>) -> Result<f64> {
    let mf = m as f64;
    let f = |rho: f64| rho.powf(-1.0 - alpha) * bracket(m, rho);
    if m == 2 {
        let corner = -pow_int(0.0, 1.0, 3.0 - alpha) / 6.0;
        let smooth = adaptive_gauss_split(&f, 1.0, 4.0, &[2.0, 3.0], PANEL_TOL)?;
        Ok(corner + smooth)
    } else {
        adaptive_gauss_split(&f, mf - 2.0, mf + 2.0, &[mf - 1.0, mf, mf + 1.0], PANEL_TOL)
    }
}

/// Closed-form antiderivative records for the kernel integrals
/// `int |x - y|^(-1-alpha) dy` over intervals not containing `x`
/// (`alpha = 2s` fractional, `alpha = 0` logarithmic).
#[derive(Debug, Clone, Copy)]
pub struct KernelTail {
    pub alpha: f64,
}

impl KernelTail {
    /// Tail record for the fractional kernel `|x - y|^(-1-2s)`.
    pub fn fractional(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::ParamOutOfRange {
                name: "s",
                requirement: "s in (0, 1)",
                value: s,
            });
        }
        Ok(KernelTail { alpha: 2.0 * s })
    }

    /// Tail record for the logarithmic kernel `|x - y|^(-1)`.
    pub fn logarithmic() -> Self {
        KernelTail { alpha: 0.0 }
    }

    /// `int_c^d |x - y|^(-1-alpha) dy` for an interval with `x` outside
    /// `(c, d)`. Degenerate intervals (`c >= d`) integrate to zero.
    pub fn interval(&self, x: f64, c: f64, d: f64) -> Result<f64> {
        if c >= d {
            return Ok(0.0);
        }
        if x > c && x < d {
            return Err(Error::ParamOutOfRange {
                name: "x",
                requirement: "x outside the open interval (c, d)",
                value: x,
            });
        }
        // distances from x to the near and far endpoints
        let (t1, t2) = if x <= c {
            (c - x, d - x)
        } else {
            (x - d, x - c)
        };
        if self.alpha == 0.0 {
            if t1 == 0.0 {
                return Err(Error::ParamOutOfRange {
                    name: "x",
                    requirement: "log kernel needs positive distance to the interval",
                    value: x,
                });
            }
            return Ok((t2 / t1).ln());
        }
        if t1 == 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "x",
                requirement: "kernel integral diverges at zero distance",
                value: x,
            });
        }
        Ok((t1.powf(-self.alpha) - t2.powf(-self.alpha)) / self.alpha)
    }

    /// `int_{|y - x| >= r} |x - y|^(-1-alpha) dy = 2 r^(-alpha) / alpha`;
    /// requires `alpha > 0` (the log kernel has no integrable tail).
    pub fn beyond_radius(&self, r: f64) -> Result<f64> {
        if self.alpha <= 0.0 {
            return Err(Error::ParamOutOfRange {
                name: "alpha",
                requirement: "alpha > 0 for an integrable tail",
                value: self.alpha,
            });
        }
        if !(r > 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "r",
                requirement: "r > 0",
                value: r,
            });
        }
        Ok(2.0 * r.powf(-self.alpha) / self.alpha)
    }
}

/// `int_{t1}^{t2} (q2 tau^2 + q1 tau + q0) ln(tau) dtau` for `0 <= t1 < t2`;
/// the antiderivative `q2 tau^3/3 (ln tau - 1/3) + q1 tau^2/2 (ln tau - 1/2)
/// + q0 tau (ln tau - 1)` extends continuously by 0 to `tau = 0`.
pub fn quad_log_integral(q2: f64, q1: f64, q0: f64, t1: f64, t2: f64) -> f64 {
    debug_assert!(0.0 <= t1 && t1 < t2);
    let fpart = |t: f64| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let lt = t.ln();
        q2 * t * t * t / 3.0 * (lt - 1.0 / 3.0) + q1 * t * t / 2.0 * (lt - 0.5) + q0 * t * (lt - 1.0)
    };
    fpart(t2) - fpart(t1)
}
