//! Uniform interval grids, nodal functions, and lumped `L^p` norms.
//!
//! A `Grid1D` carries the `n` interior nodes of an interval `(a, b)` with
//! spacing `h = (b - a) / (n + 1)`. Nodal vectors are identified with the
//! piecewise-linear interpolant that vanishes at `a`, at `b`, and outside
//! `[a, b]` (zero exterior extension). All `L^p` quantities use the lumped
//! (rectangle) rule `h * sum |u_i|^p`, a project-wide convention that keeps
//! the discrete norms consistent with a diagonal mass matrix.

use crate::error::{Error, Result};

/// Uniform interior-node discretization of an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    /// Left endpoint.
    pub a: f64,
    /// Right endpoint.
    pub b: f64,
    /// Number of interior nodes.
    pub n: usize,
    /// Node spacing, `(b - a) / (n + 1)`.
    pub h: f64,
}

impl Grid1D {
    /// Interior node `x_i = a + (i + 1) h` for zero-based `i < n`.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.a + (i as f64 + 1.0) * self.h
    }

    /// All interior nodes, left to right.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Domain measure `b - a`.
    #[inline]
    pub fn measure(&self) -> f64 {
        self.b - self.a
    }

    /// The constant `R = 2 diam(Omega) = 2 (b - a)` entering the sup-norm caps.
    #[inline]
    pub fn cap_radius(&self) -> f64 {
        2.0 * (self.b - self.a)
    }

    /// Grid for the rescaled domain `Omega / |Omega|` with the same node count.
    pub fn rescaled_by_measure(&self) -> Grid1D {
        let m = self.measure();
        // No error path: measure > 0 and n unchanged by construction.
        make_grid(self.a / m, self.b / m, self.n).expect("rescale preserves validity")
    }
}

/// Builds a uniform grid; rejects degenerate intervals and `n < 3`.
pub fn make_grid(a: f64, b: f64, n: usize) -> Result<Grid1D> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidDomain { a, b });
    }
    if n < 3 {
        return Err(Error::TooFewNodes { n });
    }
    let h = (b - a) / (n as f64 + 1.0);
    Ok(Grid1D { a, b, n, h })
}

/// Nodal values on a grid, identified with the hat interpolant that vanishes
/// outside the open interval.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl GridFunction {
    /// Wraps nodal values, validating length and finiteness.
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i });
        }
        Ok(GridFunction { grid, values })
    }

    /// Samples a closed-form function at the nodes.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..grid.n).map(|i| f(grid.node(i))).collect();
        GridFunction::new(grid, values)
    }

    /// The zero function.
    pub fn zeros(grid: Grid1D) -> Self {
        GridFunction {
            grid,
            values: vec![0.0; grid.n],
        }
    }

    /// Piecewise-linear interpolant value at an arbitrary point, zero outside
    /// the open interval.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if x <= g.a || x >= g.b {
            return 0.0;
        }
        // Element index: x lies in [a + k h, a + (k+1) h].
        let t = (x - g.a) / g.h;
        let k = (t.floor() as usize).min(g.n); // k in 0..=n
        let frac = t - k as f64;
        let left = if k == 0 { 0.0 } else { self.values[k - 1] };
        let right = if k >= g.n { 0.0 } else { self.values[k] };
        left + (right - left) * frac
    }
}

/// Lumped `L^p` norm: `(h sum |u_i|^p)^(1/p)`; `p = f64::INFINITY` gives the
/// nodal max. Rejects `p < 1`.
pub fn norm_lp(u: &GridFunction, p: f64) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(u.values.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    if !(p >= 1.0) {
        return Err(Error::ParamOutOfRange {
            name: "p",
            requirement: "p >= 1 or p = infinity",
            value: p,
        });
    }
    let s: f64 = u.values.iter().map(|v| v.abs().powf(p)).sum();
    Ok((u.grid.h * s).powf(1.0 / p))
}

/// Lumped `p`-th power sum `h sum |u_i|^p`, the quantity entering energies.
pub fn power_sum(u: &GridFunction, p: f64) -> f64 {
    u.grid.h * u.values.iter().map(|v| v.abs().powf(p)).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_nodes_match_definition() {
        let g = make_grid(-1.0, 1.0, 3).unwrap();
        assert_eq!(g.h, 0.5);
        assert_eq!(g.nodes(), vec![-0.5, 0.0, 0.5]);

        let g = make_grid(0.0, 2.0, 7).unwrap();
        assert_eq!(g.h, 0.25);
        assert!((g.node(0) - 0.25).abs() < 1e-15);
        assert!((g.node(6) - 1.75).abs() < 1e-15);
        // endpoint gaps are exactly one spacing
        assert!((g.node(0) - g.a - g.h).abs() < 1e-15);
        assert!((g.b - g.node(6) - g.h).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_degenerate_inputs() {
        assert!(matches!(
            make_grid(1.0, 1.0, 5),
            Err(Error::InvalidDomain { .. })
        ));
        assert!(matches!(
            make_grid(2.0, 1.0, 5),
            Err(Error::InvalidDomain { .. })
        ));
        assert!(matches!(make_grid(0.0, 1.0, 2), Err(Error::TooFewNodes { n: 2 })));
    }

    #[test]
    fn grid_function_validates_inputs() {
        let g = make_grid(-1.0, 1.0, 3).unwrap();
        assert!(matches!(
            GridFunction::new(g, vec![1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
        assert!(matches!(
            GridFunction::new(g, vec![1.0, f64::NAN, 3.0]),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn interpolant_evaluates_piecewise_linearly() {
        let g = make_grid(0.0, 1.0, 3).unwrap(); // h = 0.25, nodes 0.25 0.5 0.75
        let u = GridFunction::new(g, vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(u.eval(-0.5), 0.0);
        assert_eq!(u.eval(1.5), 0.0);
        assert!((u.eval(0.25) - 1.0).abs() < 1e-15);
        assert!((u.eval(0.125) - 0.5).abs() < 1e-15); // ramp from 0 at a
        assert!((u.eval(0.375) - 2.0).abs() < 1e-15);
        assert!((u.eval(0.875) - 1.0).abs() < 1e-15); // ramp to 0 at b
    }

    #[test]
    fn norm_matches_hand_sums() {
        let g = make_grid(-1.0, 1.0, 4).unwrap(); // h = 0.4
        let ones = GridFunction::new(g, vec![1.0; 4]).unwrap();
        // |1|_2 = sqrt(h n)
        assert!((norm_lp(&ones, 2.0).unwrap() - (0.4f64 * 4.0).sqrt()).abs() < 1e-15);
        let u = GridFunction::new(g, vec![3.0, -4.0, 0.0, 0.0]).unwrap();
        // hand sum: h (3 + 4) = 2.8 for p = 1; max for p = inf
        assert!((norm_lp(&u, 1.0).unwrap() - 2.8).abs() < 1e-14);
        assert!((norm_lp(&u, f64::INFINITY).unwrap() - 4.0).abs() < 1e-15);
        let zero = GridFunction::zeros(g);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(norm_lp(&zero, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn norm_rejects_p_below_one() {
        let g = make_grid(-1.0, 1.0, 3).unwrap();
        let u = GridFunction::zeros(g);
        assert!(matches!(
            norm_lp(&u, 0.5),
            Err(Error::ParamOutOfRange { name: "p", .. })
        ));
        assert!(norm_lp(&u, f64::NAN).is_err());
    }

    #[test]
    fn rescaled_grid_has_unit_measure() {
        let g = make_grid(-1.0, 1.0, 17).unwrap();
        let r = g.rescaled_by_measure();
        assert!((r.measure() - 1.0).abs() < 1e-15);
        assert_eq!(r.n, g.n);
        assert!((r.a + 0.5).abs() < 1e-15 && (r.b - 0.5).abs() < 1e-15);
    }
}
