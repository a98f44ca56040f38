//! Galerkin stiffness matrices for the fractional and logarithmic forms.
//!
//! Fractional: on a uniform grid the hat-pair energy over the full line is
//! translation invariant, so `K_s` is Toeplitz with entries
//! `c_{1,s} h^(1-2s) w_alpha(|i-j|)` (`alpha = 2s`, weights from [`kernel`]).
//! The full-line form automatically carries the exterior contribution of the
//! zero extension, and the symmetric difference form needs no principal
//! value for `s < 1` with piecewise-linear functions.
//!
//! Logarithmic: the quadratic form is the interior double integral with
//! kernel `c_1 |x-y|^(-1)` plus the lumped potential `h (h_Omega(x_i) +
//! rho_1)`. The interior integral is assembled from the truncated full-line
//! weights `w0_P` with `P = n + 1` (so the truncation radius `P h` equals
//! `b - a` exactly) minus the closed-form correction for pairs with one
//! point outside the interval:
//!
//! ```text
//!   A(i,j) = c_1 [ h w0_P(|i-j|) - 2 ln(b-a) Mt(i,j)
//!                  + int phi_i phi_j ln(y-a) dy + int phi_i phi_j ln(b-y) dy ]
//! ```
//!
//! where `Mt` is the consistent mass (`2h/3` diagonal, `h/6` adjacent); the
//! corrections vanish for non-overlapping hats. The log moments against
//! first-element hats use exact antiderivatives; interior elements are
//! smooth and use adaptive panels.
//!
//! Weight computation parallelizes over kernel distances (read-only inputs,
//! one output slot per distance); results are deterministic and independent
//! of scheduling.

use nalgebra::DMatrix;
use rayon::prelude::*;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, GridFunction};
use crate::kernel::{quad_log_integral, weight_frac, weight_log, KernelTail};
use crate::quad::adaptive_gauss;
use crate::special::{frac_constant, log_constants};

/// Which operator a stiffness matrix discretizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Fractional { s: f64 },
    Logarithmic,
}

impl OperatorKind {
    pub fn label(&self) -> &'static str {
        match self {
            OperatorKind::Fractional { .. } => "fractional",
            OperatorKind::Logarithmic => "logarithmic",
        }
    }

    pub fn order(&self) -> Option<f64> {
        match self {
            OperatorKind::Fractional { s } => Some(*s),
            OperatorKind::Logarithmic => None,
        }
    }
}

/// Dense symmetric stiffness matrix tied to its grid.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub grid: Grid1D,
    pub entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn n(&self) -> usize {
        self.grid.n
    }
}

/// Stiffness matrix of the fractional form: `u^T K_s u` equals the (full
/// line, zero-extended) fractional energy of the hat interpolant of `u`.
pub fn assemble_fractional(grid: Grid1D, s: f64) -> Result<OperatorMatrix> {
    let c = frac_constant(1, s)?;
    let alpha = 2.0 * s;
    let n = grid.n;
    let weights: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| weight_frac(alpha, m))
        .collect::<Result<_>>()?;
    let scale = c * grid.h.powf(1.0 - alpha);
    let entries = DMatrix::from_fn(n, n, |i, j| scale * weights[i.abs_diff(j)]);
    Ok(OperatorMatrix {
        kind: OperatorKind::Fractional { s },
        grid,
        entries,
    })
}

/// `int phi_i phi_j ln(y - a) dy` for hats overlapping on at least one
/// element; measured from the left endpoint. The pair must satisfy
/// `|i - j| <= 1` (the moment vanishes otherwise).
fn hat_pair_log_moment(i: usize, j: usize, grid: Grid1D) -> Result<f64> {
    let h = grid.h;
    let (lo, hi) = (i.min(j), i.max(j));
    debug_assert!(hi - lo <= 1 && hi < grid.n);
    // local quadratic q(sigma) on element E_k = [a + k h, a + (k+1) h]:
    // ascending hat phi_k = sigma/h, descending hat phi_(k-1) = (h - sigma)/h
    let elements: &[(usize, [f64; 3])] = if lo == hi {
        // phi_i^2: ascending on E_i, descending on E_(i+1)
        &[(lo, [1.0, 0.0, 0.0]), (lo + 1, [1.0, -2.0, 1.0])]
    } else {
        // phi_i phi_(i+1) overlap on E_(i+1): descending * ascending
        &[(lo + 1, [-1.0, 1.0, 0.0])]
    };
    let mut acc = 0.0;
    for &(k, c) in elements {
        // q(sigma) = (c0 sigma^2 + c1 h sigma + c2 h^2) / h^2
        let (q2, q1, q0) = (c[0] / (h * h), c[1] / h, c[2]);
        if k == 0 {
            acc += quad_log_integral(q2, q1, q0, 0.0, h);
        } else {
            let off = k as f64 * h;
            let f = |sig: f64| (q2 * sig * sig + q1 * sig + q0) * (off + sig).ln();
            acc += adaptive_gauss(&f, 0.0, h, 1e-13)?;
        }
    }
    Ok(acc)
}

/// Stiffness matrix of the logarithmic form: `u^T K_L u` equals the interior
/// double-integral energy plus the lumped potential `h (h_Omega + rho_1)`.
pub fn assemble_log(grid: Grid1D) -> Result<OperatorMatrix> {
    let cst = log_constants(1)?;
    let n = grid.n;
    let h = grid.h;
    // truncation radius P h = (n+1) h = b - a exactly
    let p = (n + 1) as f64;
    let weights: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| weight_log(m, p))
        .collect::<Result<_>>()?;
    let ln_len = (grid.b - grid.a).ln();
    let mut entries = DMatrix::from_fn(n, n, |i, j| cst.c_n * h * weights[i.abs_diff(j)]);
    // boundary corrections on the overlapping band
    for i in 0..n {
        for j in i..(i + 2).min(n) {
            let mt = if i == j { 2.0 * h / 3.0 } else { h / 6.0 };
            let left = hat_pair_log_moment(i, j, grid)?;
            // right moment by reflection: node i maps to n-1-i
            let right = hat_pair_log_moment(n - 1 - j, n - 1 - i, grid)?;
            let corr = cst.c_n * (-2.0 * ln_len * mt + left + right);
            entries[(i, j)] += corr;
            if j > i {
                entries[(j, i)] += corr;
            }
        }
    }
    // lumped potential
    for i in 0..n {
        entries[(i, i)] += h * (h_omega(grid.node(i), grid)? + cst.rho_n);
    }
    Ok(OperatorMatrix {
        kind: OperatorKind::Logarithmic,
        grid,
        entries,
    })
}

/// Boundary potential of the logarithmic operator:
/// `h_Omega(x) = c_1 (int_{B_1(x) \ Omega} |x-y|^(-1) dy
///               - int_{Omega \ B_1(x)} |x-y|^(-1) dy)`,
/// evaluated in closed form over the at most four relevant subintervals.
pub fn h_omega(x: f64, grid: Grid1D) -> Result<f64> {
    let (a, b) = (grid.a, grid.b);
    if !(x > a && x < b) {
        return Err(Error::ParamOutOfRange {
            name: "x",
            requirement: "x inside the open interval (a, b)",
            value: x,
        });
    }
    let tail = KernelTail::logarithmic();
    let mut acc = 0.0;
    // B_1(x) \ Omega: ball parts sticking out of the interval
    acc += tail.interval(x, x - 1.0, a.min(x + 1.0))?;
    acc += tail.interval(x, b.max(x - 1.0), x + 1.0)?;
    // Omega \ B_1(x): interval parts beyond unit distance
    acc -= tail.interval(x, a, (x - 1.0).min(b))?;
    acc -= tail.interval(x, (x + 1.0).max(a), b)?;
    Ok(log_constants(1)?.c_n * acc)
}

/// Quadratic form `u^T K u` of a grid function against a stiffness matrix.
pub fn qform(k: &OperatorMatrix, u: &GridFunction) -> Result<f64> {
    if u.grid != k.grid {
        return Err(Error::DimensionMismatch {
            expected: k.n(),
            got: u.values.len(),
        });
    }
    let n = k.n();
    let mut acc = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += k.entries[(i, j)] * u.values[j];
        }
        acc += u.values[i] * row;
    }
    Ok(acc)
}

/// Matrix-vector product `K u` as a plain vector.
pub fn apply(k: &OperatorMatrix, u: &[f64]) -> Result<Vec<f64>> {
    if u.len() != k.n() {
        return Err(Error::DimensionMismatch {
            expected: k.n(),
            got: u.len(),
        });
    }
    let n = k.n();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += k.entries[(i, j)] * u[j];
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Consistent-mass product `M_c v` with `M_c = tridiag(h/6, 2h/3, h/6)`,
/// the Gram matrix of the hat basis.
pub fn mass_apply(grid: Grid1D, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let h = grid.h;
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 2.0 * h / 3.0 * v[i];
        if i > 0 {
            acc += h / 6.0 * v[i - 1];
        }
        if i + 1 < n {
            acc += h / 6.0 * v[i + 1];
        }
        out[i] = acc;
    }
    out
}

/// Tridiagonal solve `M_c x = rhs` (Thomas algorithm; `M_c` is strictly
/// diagonally dominant, so no pivoting is needed).
pub fn mass_solve(grid: Grid1D, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let h = grid.h;
    let (diag, off) = (2.0 * h / 3.0, h / 6.0);
    let mut c = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut denom = diag;
    c[0] = off / denom;
    x[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag - off * c[i - 1];
        c[i] = off / denom;
        x[i] = (rhs[i] - off * x[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    x
}

/// Smallest Gershgorin disc lower bound `min_i (K_ii - sum_{j != i} |K_ij|)`.
pub fn gershgorin_lower(entries: &DMatrix<f64>) -> f64 {
    let n = entries.nrows();
    let mut lo = f64::INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        for j in 0..n {
            if j != i {
                radius += entries[(i, j)].abs();
            }
        }
        lo = lo.min(entries[(i, i)] - radius);
    }
    lo
}

/// Discrete small-order defect: with `D_s = M_c^(-1) K_s` and
/// `D_L = M_c^(-1) K_L`, returns `max_i |((D_s phi)_i - phi_i)/s - (D_L phi)_i|`
/// over nodes at distance >= 4h from the boundary (interpolants are not
/// smooth at nodes, so the sup is restricted away from the boundary layer).
pub fn small_order_residual(phi: &GridFunction, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 0.25) {
        return Err(Error::ParamOutOfRange {
            name: "s",
            requirement: "s in (0, 1/4)",
            value: s,
        });
    }
    let grid = phi.grid;
    let ks = assemble_fractional(grid, s)?;
    let kl = assemble_log(grid)?;
    let ds = mass_solve(grid, &apply(&ks, &phi.values)?);
    let dl = mass_solve(grid, &apply(&kl, &phi.values)?);
    let n = grid.n;
    if n < 8 {
        return Err(Error::TooFewNodes { n });
    }
    // nodes with min(x_i - a, b - x_i) >= 4h: indices 3 ..= n-4
    let mut worst = 0.0f64;
    for i in 3..=(n - 4) {
        let v = ((ds[i] - phi.values[i]) / s - dl[i]).abs();
        worst = worst.max(v);
    }
    Ok(worst)
}

/// Writes a stiffness matrix in the documented CSV layout: a `n, kind, s`
/// header line, one metadata line, then the entries row-major (full
/// precision), one matrix row per CSV record.
pub fn write_matrix_csv<P: AsRef<Path>>(k: &OperatorMatrix, path: P) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "n,kind,s")?;
    match k.kind.order() {
        Some(s) => writeln!(f, "{},{},{}", k.n(), k.kind.label(), s)?,
        None => writeln!(f, "{},{},", k.n(), k.kind.label())?,
    }
    let n = k.n();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.17e}", k.entries[(i, j)])).collect();
        writeln!(f, "{}", row.join(","))?;
    }
    Ok(())
}

/// Reads back the CSV layout written by [`write_matrix_csv`]; returns the
/// metadata `(n, kind label, s)` and the dense entries.
pub fn read_matrix_csv<P: AsRef<Path>>(path: P) -> Result<(usize, String, Option<f64>, DMatrix<f64>)> {
    let f = BufReader::new(std::fs::File::open(path)?);
    let mut lines = f.lines();
    let header = lines.next().ok_or(Error::DimensionMismatch { expected: 2, got: 0 })??;
    if header.trim() != "n,kind,s" {
        return Err(Error::ParamOutOfRange {
            name: "header",
            requirement: "matrix CSV starts with 'n,kind,s'",
            value: f64::NAN,
        });
    }
    let meta = lines.next().ok_or(Error::DimensionMismatch { expected: 2, got: 1 })??;
    let parts: Vec<&str> = meta.trim().split(',').collect();
    if parts.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: parts.len() });
    }
    let n: usize = parts[0]
        .parse()
        .map_err(|_| Error::ParamOutOfRange { name: "n", requirement: "integer node count", value: f64::NAN })?;
    let kind = parts[1].to_string();
    let s = if parts[2].is_empty() { None } else { parts[2].parse::<f64>().ok() };
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        let line = lines.next().ok_or(Error::DimensionMismatch { expected: n + 2, got: i + 2 })??;
        let row: Vec<&str> = line.trim().split(',').collect();
        if row.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: row.len() });
        }
        for (j, tok) in row.iter().enumerate() {
            entries[(i, j)] = tok.parse::<f64>().map_err(|_| Error::NonFinite { index: j })?;
        }
    }
    Ok((n, kind, s, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::quad::adaptive_gauss_split;
    use nalgebra::Cholesky;

    fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
        let n = m.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = (m[(i, j)] - m[(j, i)]).abs() / m[(i, j)].abs().max(1.0);
                worst = worst.max(d);
            }
        }
        worst
    }

    #[test]
    fn fractional_symmetry_and_positive_definiteness() {
        let grid = make_grid(-1.0, 1.0, 64).unwrap();
        for s in [0.1, 0.25, 0.5, 0.75] {
            let k = assemble_fractional(grid, s).unwrap();
            assert!(symmetry_defect(&k.entries) <= 1e-12, "s = {s}");
            assert!(
                Cholesky::new(k.entries.clone()).is_some(),
                "K_s not positive definite at s = {s}"
            );
        }
    }

    #[test]
    fn ones_vector_recovers_exterior_tail_at_center() {
        // (M^-1 K_s 1) at the center node tends to the exterior tail value
        // c_{1,1/2} int_{|y|>=1} |y|^-2 dy = 2/pi for s = 1/2 on (-1, 1)
        let target = 2.0 / std::f64::consts::PI;
        let mut errs = Vec::new();
        for n in [127usize, 255] {
            let grid = make_grid(-1.0, 1.0, n).unwrap();
            let k = assemble_fractional(grid, 0.5).unwrap();
            let ones = vec![1.0; n];
            let center = (n - 1) / 2; // node at x = 0 for odd n
            let val = apply(&k, &ones).unwrap()[center] / grid.h;
            errs.push((val - target).abs());
        }
        assert!(errs[1] < errs[0], "no refinement improvement: {errs:?}");
        assert!(errs[1] < 0.02 * target, "error too large: {errs:?}");
    }

    #[test]
    fn small_s_stiffness_approaches_consistent_mass() {
        let grid = make_grid(-1.0, 1.0, 16).unwrap();
        let h = grid.h;
        let k = assemble_fractional(grid, 1e-4).unwrap();
        assert!((k.entries[(8, 8)] - 2.0 * h / 3.0).abs() < 1e-2 * h);
        assert!((k.entries[(8, 9)] - h / 6.0).abs() < 1e-2 * h);
        assert!(k.entries[(8, 13)].abs() < 1e-2 * h);
    }

    #[test]
    fn h_omega_matches_reference_points() {
        let g1 = make_grid(-1.0, 1.0, 16).unwrap();
        assert!(h_omega(0.0, g1).unwrap().abs() < 1e-14);
        let want = (4.0f64 / 3.0).ln();
        assert!((h_omega(0.5, g1).unwrap() - want).abs() < 1e-13);
        let g3 = make_grid(-3.0, 3.0, 16).unwrap();
        let want3 = -2.0 * 3.0f64.ln();
        assert!((h_omega(0.0, g3).unwrap() - want3).abs() < 1e-13);
        assert!(h_omega(-1.0, g1).is_err());
        assert!(h_omega(1.7, g1).is_err());
    }

    #[test]
    fn h_omega_closed_form_product_identity() {
        // both regimes collapse to -ln((x-a)(b-x)) in one dimension
        let grid = make_grid(-0.4, 2.2, 16).unwrap();
        for t in [0.05, 0.3, 0.5, 0.77, 0.99] {
            let x: f64 = -0.4 + t * 2.6;
            let want = -((x + 0.4) * (2.2 - x)).ln();
            let got = h_omega(x, grid).unwrap();
            assert!((got - want).abs() < 1e-12, "x = {x}: {got} vs {want}");
        }
    }

    #[test]
    fn hat_log_moments_match_adaptive_quadrature() {
        let grid = make_grid(-1.0, 1.0, 24).unwrap();
        let h = grid.h;
        let hat = |i: usize, y: f64| {
            let t = (y - grid.node(i)) / h;
            (1.0 - t.abs()).max(0.0)
        };
        for (i, j) in [(0usize, 0usize), (0, 1), (3, 3), (3, 4), (22, 23), (23, 23)] {
            let f = |y: f64| hat(i, y) * hat(j, y) * (y - grid.a).ln();
            let lo = grid.a + (i.min(j) as f64) * h;
            let hi = grid.a + ((i.max(j) + 2) as f64) * h;
            let wait = adaptive_gauss_split(&f, lo.max(grid.a + 1e-13), hi, &[lo + h], 1e-13).unwrap();
            let got = hat_pair_log_moment(i, j, grid).unwrap();
            assert!((got - wait).abs() < 1e-9, "pair ({i},{j}): {got} vs {wait}");
        }
    }

    #[test]
    fn log_matrix_symmetry() {
        let grid = make_grid(-1.0, 1.0, 64).unwrap();
        let k = assemble_log(grid).unwrap();
        assert!(symmetry_defect(&k.entries) <= 1e-12);
    }

    #[test]
    fn log_form_on_ones_matches_potential_integral() {
        // difference part vanishes as h -> 0, leaving int_Omega (h_Omega + rho_1);
        // the target comes from 1-D adaptive quadrature of h_omega
        let probe = make_grid(-1.0, 1.0, 8).unwrap();
        let hpart = adaptive_gauss(
            &|x: f64| h_omega(x, probe).unwrap(),
            -1.0 + 1e-12,
            1.0 - 1e-12,
            1e-9,
        )
        .unwrap();
        let target = hpart + 2.0 * log_constants(1).unwrap().rho_n;
        let mut errs = Vec::new();
        for n in [256usize, 512, 1024] {
            let grid = make_grid(-1.0, 1.0, n).unwrap();
            let k = assemble_log(grid).unwrap();
            let ones = GridFunction::new(grid, vec![1.0; n]).unwrap();
            let q = qform(&k, &ones).unwrap();
            errs.push((q - target).abs());
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "errors not decreasing: {errs:?}");
        assert!(errs[2] < 0.02 * target.abs(), "final error too large: {errs:?} vs {target}");
    }

    #[test]
    fn log_matrix_shifted_positive_definite() {
        let grid = make_grid(-3.0, 3.0, 64).unwrap();
        let k = assemble_log(grid).unwrap();
        let shift = (-gershgorin_lower(&k.entries)).max(0.0);
        let shifted = &k.entries + DMatrix::<f64>::identity(64, 64) * shift;
        assert!(Cholesky::new(shifted).is_some());
    }

    #[test]
    fn refinement_consistency_of_quadratic_forms() {
        // Cauchy behavior: the n -> 2n change is controlled by 4x the
        // 2n -> 4n change for a fixed smooth profile
        let profile = |x: f64| (1.0 - x * x).powi(3);
        let mut q_frac = Vec::new();
        let mut q_log = Vec::new();
        for n in [64usize, 128, 256] {
            let grid = make_grid(-1.0, 1.0, n).unwrap();
            let u = GridFunction::from_fn(grid, profile).unwrap();
            q_frac.push(qform(&assemble_fractional(grid, 0.35).unwrap(), &u).unwrap());
            q_log.push(qform(&assemble_log(grid).unwrap(), &u).unwrap());
        }
        for q in [&q_frac, &q_log] {
            let d01 = (q[0] - q[1]).abs();
            let d12 = (q[1] - q[2]).abs();
            assert!(d01 <= 4.0 * d12, "not Cauchy-consistent: {q:?}");
        }
    }

    #[test]
    fn small_order_residual_decreases_and_scales() {
        let grid = make_grid(-1.0, 1.0, 128).unwrap();
        let phi = GridFunction::from_fn(grid, |x| (1.0 - x * x).max(0.0).powi(4)).unwrap();
        let r01 = small_order_residual(&phi, 0.1).unwrap();
        let r005 = small_order_residual(&phi, 0.05).unwrap();
        let r0025 = small_order_residual(&phi, 0.025).unwrap();
        assert!(
            r01 > r005 && r005 > r0025,
            "no monotone decrease: {r01}, {r005}, {r0025}"
        );
        // linearity: residual(c phi) = |c| residual(phi)
        let scaled = GridFunction::new(grid, phi.values.iter().map(|v| -2.5 * v).collect()).unwrap();
        let rs = small_order_residual(&scaled, 0.05).unwrap();
        assert!((rs - 2.5 * r005).abs() <= 1e-10 * r005.max(1.0));
        let zero = GridFunction::zeros(grid);
        assert!(small_order_residual(&zero, 0.05).unwrap() == 0.0);
        assert!(small_order_residual(&phi, 0.3).is_err());
    }

    #[test]
    fn quadratic_form_basics() {
        let grid = make_grid(-1.0, 1.0, 32).unwrap();
        let k = assemble_fractional(grid, 0.4).unwrap();
        let zero = GridFunction::zeros(grid);
        assert_eq!(qform(&k, &zero).unwrap(), 0.0);
        let u = GridFunction::from_fn(grid, |x| x.sin() + 0.2).unwrap();
        assert!(qform(&k, &u).unwrap() > 0.0);
        let other = make_grid(-1.0, 1.0, 16).unwrap();
        let v = GridFunction::zeros(other);
        assert!(qform(&k, &v).is_err());
    }

    #[test]
    fn mass_solve_inverts_mass_apply() {
        let grid = make_grid(-1.0, 1.0, 40).unwrap();
        let v: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).sin()).collect();
        let back = mass_solve(grid, &mass_apply(grid, &v));
        for (x, y) in v.iter().zip(back.iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_csv_round_trip() {
        let dir = std::env::temp_dir().join("fraclap_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ks.csv");
        let grid = make_grid(-1.0, 1.0, 12).unwrap();
        let k = assemble_fractional(grid, 0.3).unwrap();
        write_matrix_csv(&k, &path).unwrap();
        let (n, kind, s, entries) = read_matrix_csv(&path).unwrap();
        assert_eq!(n, 12);
        assert_eq!(kind, "fractional");
        assert_eq!(s, Some(0.3));
        assert!((&entries - &k.entries).abs().max() < 1e-15);
        let kl = assemble_log(grid).unwrap();
        let path2 = dir.join("kl.csv");
        write_matrix_csv(&kl, &path2).unwrap();
        let (_, kind2, s2, entries2) = read_matrix_csv(&path2).unwrap();
        assert_eq!(kind2, "logarithmic");
        assert_eq!(s2, None);
        assert!((&entries2 - &kl.entries).abs().max() < 1e-15);
    }
}
