//! Galerkin discretizations of the fractional Laplacian `(-Delta)^s` and the
//! logarithmic Laplacian on one-dimensional intervals, with variational
//! solvers and small-order (`s -> 0`) sweep experiments built on top.
//!
//! Layering, bottom to top:
//! - [`grid`]: uniform interior grids and piecewise-linear grid functions;
//! - [`special`]: gamma/digamma and the kernel normalization constants;
//! - [`quad`]: adaptive Gauss-Legendre panels for smooth cross-checks;
//! - [`kernel`]: closed-form kernel weights shared by both operators;
//! - [`operators`]: stiffness matrices, quadratic forms, consistency checks;
//! - [`spectral`]: principal Dirichlet eigenpairs and expansion checks;
//! - [`solvers`]: constrained/unconstrained minimizers for the model problems;
//! - [`sweeps`]: small-order parameter sweeps with explicit bound audits.

pub mod error;
pub mod grid;
pub mod kernel;
pub mod operators;
pub mod quad;
pub mod solvers;
pub mod special;
pub mod spectral;
pub mod sweeps;

pub use error::{Error, Result};
pub use kernel::PANEL_TOL;
pub use grid::{make_grid, norm_lp, power_sum, Grid1D, GridFunction};
pub use operators::{
    assemble_fractional, assemble_log, h_omega, qform, read_matrix_csv, small_order_residual,
    write_matrix_csv, OperatorKind, OperatorMatrix,
};
pub use solvers::{
    energy_j0, energy_js, grad_energy_j0, grad_energy_js, grad_theta_objective,
    path_convexity_check, path_interpolant, solve_lambda_min, solve_lambda_min_from,
    solve_log_sublinear, solve_log_sublinear_from, solve_logistic, solve_logistic_from,
    solve_sublinear_power, solve_sublinear_power_from, solve_theta, solve_theta_from,
    sublinear_amplitude_cap, sublinear_supersolution, theta_objective, write_solution_csv,
    write_solution_json, ConvexityReport, ProblemParams, Solution, SolveWarning, KKT_TOL,
};
pub use special::{frac_constant, log_constants, Constants};
pub use spectral::{
    eigen_expansion_check, first_eigenpair, write_expansion_csv, EigenPair, ExpansionRow,
    EIGEN_TOL,
};
pub use sweeps::{
    audit_bounds, run_schedule, sweep_case2, sweep_logistic, sweep_sublinear, write_sweep_csv,
    write_sweep_json, AuditSummary, BoundAudit, MonotoneCheck, Regime, Schedule, SweepReport,
    SweepRow, AUDIT_SLACK_FRACTION,
};
