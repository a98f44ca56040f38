//! Experiment execution: dispatches a validated config, writes artifacts
//! atomically (write to `<name>.tmp`, then rename), and records every
//! tolerance and constant the run used in `run_manifest.json`.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use fraclap::{
    assemble_fractional, assemble_log, audit_bounds, eigen_expansion_check, first_eigenpair,
    frac_constant, log_constants, make_grid, run_schedule, solve_lambda_min, solve_log_sublinear,
    solve_logistic, solve_sublinear_power, solve_theta, write_expansion_csv, write_matrix_csv,
    write_solution_csv, write_solution_json, write_sweep_csv, write_sweep_json, EigenPair, Grid1D,
    OperatorMatrix, AUDIT_SLACK_FRACTION, EIGEN_TOL, KKT_TOL, PANEL_TOL,
};

use crate::config::{
    parse_config, schedule_from_section, CommandKind, ExperimentConfig, OperatorSection,
    ProblemSection, ScheduleSection,
};

const MANIFEST_NAME: &str = "run_manifest.json";
const REQUIRED: &str = "config validation guarantees the parameter";

struct RunOutcome {
    results: Value,
    outputs: Vec<String>,
    /// `None` for commands without audited bounds (vacuously passing).
    audits_pass: Option<bool>,
    constants: Value,
}

/// Runs one experiment end to end. Returns the process exit code: 0 only
/// when the run completed and every audited bound passed.
pub fn run(
    subcommand: CommandKind,
    config_path: &Path,
    output_dir: Option<PathBuf>,
    quiet: bool,
) -> i32 {
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return 1;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(cfg) => cfg,
        Err(errors) => {
            for e in &errors {
                eprintln!("config error: {e}");
            }
            eprintln!("{} config error(s)", errors.len());
            return 1;
        }
    };
    if cfg.command != subcommand {
        eprintln!(
            "error: config declares command \"{}\" but the \"{}\" subcommand was invoked",
            cfg.command.label(),
            subcommand.label()
        );
        return 1;
    }

    let dir = output_dir
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = fs::create_dir_all(&dir) {
        eprintln!("error: cannot create {}: {e}", dir.display());
        return 1;
    }

    let outcome = execute(&cfg, &dir, quiet);
    let manifest = manifest_value(&cfg, &outcome);
    if let Err(e) = write_manifest(&dir, &manifest) {
        eprintln!("error: cannot write {MANIFEST_NAME}: {e}");
        return 1;
    }
    match outcome {
        Ok(o) if o.audits_pass != Some(false) => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(cfg: &ExperimentConfig, dir: &Path, quiet: bool) -> fraclap::Result<RunOutcome> {
    let d = &cfg.domain;
    let grid = make_grid(d.a, d.b, d.n)?;
    match cfg.command {
        CommandKind::Assemble => {
            run_assemble(cfg.operator.as_ref().expect(REQUIRED), grid, dir, quiet)
        }
        CommandKind::Eigen => run_eigen(cfg.operator.as_ref().expect(REQUIRED), grid, dir, quiet),
        CommandKind::Solve => run_solve(cfg.problem.as_ref().expect(REQUIRED), grid, dir, quiet),
        CommandKind::Sweep => run_sweep(cfg.schedule.as_ref().expect(REQUIRED), grid, dir, quiet),
    }
}

fn assemble_operator(
    op: &OperatorSection,
    grid: Grid1D,
) -> fraclap::Result<(OperatorMatrix, Vec<f64>)> {
    if op.kind == "log" {
        Ok((assemble_log(grid)?, Vec::new()))
    } else {
        let s = op.s.expect(REQUIRED);
        Ok((assemble_fractional(grid, s)?, vec![s]))
    }
}

fn run_assemble(
    op: &OperatorSection,
    grid: Grid1D,
    dir: &Path,
    quiet: bool,
) -> fraclap::Result<RunOutcome> {
    let (k, frac_orders) = assemble_operator(op, grid)?;
    write_atomic(dir, "matrix.csv", |p| write_matrix_csv(&k, p))?;
    if !quiet {
        println!(
            "assembled {} matrix, n = {}, wrote matrix.csv",
            k.kind.label(),
            k.n()
        );
    }
    Ok(RunOutcome {
        results: json!({ "kind": k.kind.label(), "n": k.n(), "s": k.kind.order() }),
        outputs: vec!["matrix.csv".into()],
        audits_pass: None,
        constants: constants_value(&frac_orders),
    })
}

fn run_eigen(
    op: &OperatorSection,
    grid: Grid1D,
    dir: &Path,
    quiet: bool,
) -> fraclap::Result<RunOutcome> {
    if let Some(list) = &op.s_list {
        let rows = eigen_expansion_check(grid, list)?;
        write_atomic(dir, "expansion.csv", |p| write_expansion_csv(&rows, p))?;
        let last = rows.last().expect(REQUIRED);
        if !quiet {
            println!(
                "expansion table over {} orders, lambda1L = {:.9}, final gap = {:.3e}, wrote expansion.csv",
                rows.len(),
                last.lambda1l,
                last.abs_gap
            );
        }
        Ok(RunOutcome {
            results: json!({
                "rows": rows.len(),
                "lambda1L": last.lambda1l,
                "final_abs_gap": last.abs_gap,
            }),
            outputs: vec!["expansion.csv".into()],
            audits_pass: None,
            constants: constants_value(list),
        })
    } else {
        let (k, frac_orders) = assemble_operator(op, grid)?;
        let pair = first_eigenpair(&k)?;
        write_atomic(dir, "eigenfunction.csv", |p| write_eigenfunction_csv(&pair, p))?;
        if !quiet {
            println!(
                "{} ground eigenvalue = {:.12}, residual = {:.3e}, wrote eigenfunction.csv",
                k.kind.label(),
                pair.lambda,
                pair.residual
            );
        }
        Ok(RunOutcome {
            results: json!({
                "kind": k.kind.label(),
                "lambda": pair.lambda,
                "residual": pair.residual,
                "gap_warning": pair.gap_warning,
            }),
            outputs: vec!["eigenfunction.csv".into()],
            audits_pass: None,
            constants: constants_value(&frac_orders),
        })
    }
}

fn run_solve(
    pr: &ProblemSection,
    grid: Grid1D,
    dir: &Path,
    quiet: bool,
) -> fraclap::Result<RunOutcome> {
    let sol = match pr.kind.as_str() {
        "sublinear" => solve_sublinear_power(grid, pr.s.expect(REQUIRED), pr.p.expect(REQUIRED))?,
        "lambda_min" => solve_lambda_min(grid, pr.s.expect(REQUIRED), pr.p.expect(REQUIRED))?,
        "theta" => solve_theta(
            grid,
            pr.s.expect(REQUIRED),
            pr.eps.expect(REQUIRED),
            pr.a.expect(REQUIRED),
            pr.r.expect(REQUIRED),
        )?,
        "logistic" => solve_logistic(
            grid,
            pr.s.expect(REQUIRED),
            pr.k.expect(REQUIRED),
            pr.p.expect(REQUIRED),
        )?,
        _ => solve_log_sublinear(grid, pr.mu.expect(REQUIRED))?,
    };
    write_atomic(dir, "solution.csv", |p| write_solution_csv(&sol, p))?;
    write_atomic(dir, "solution.json", |p| write_solution_json(&sol, p))?;
    if !quiet {
        println!(
            "{}: energy = {:.9}, iterations = {}, kkt residual = {:.3e}, wrote solution.csv and solution.json",
            pr.kind, sol.energy, sol.iterations, sol.kkt_residual
        );
    }
    let frac_orders: Vec<f64> = pr.s.into_iter().collect();
    Ok(RunOutcome {
        results: json!({
            "kind": pr.kind,
            "energy": sol.energy,
            "iterations": sol.iterations,
            "kkt_residual": sol.kkt_residual,
            "multiplier": sol.multiplier,
            "warning": sol.warning,
        }),
        outputs: vec!["solution.csv".into(), "solution.json".into()],
        audits_pass: None,
        constants: constants_value(&frac_orders),
    })
}

fn run_sweep(
    sc: &ScheduleSection,
    grid: Grid1D,
    dir: &Path,
    quiet: bool,
) -> fraclap::Result<RunOutcome> {
    let schedule = schedule_from_section(sc).expect(REQUIRED);
    let report = run_schedule(grid, &schedule)?;
    write_atomic(dir, "sweep.csv", |p| write_sweep_csv(&report, p))?;
    write_atomic(dir, "sweep.json", |p| write_sweep_json(&report, p))?;
    let summary = audit_bounds(&report);
    if !quiet {
        for line in &summary.lines {
            println!("{line}");
        }
        for w in &report.warnings {
            println!("warning: {w}");
        }
        println!(
            "sweep {}: audits {}, monotone decrease {}, wrote sweep.csv and sweep.json",
            report.regime,
            if report.audits_pass { "pass" } else { "FAIL" },
            if report.monotone_pass { "pass" } else { "FAIL" },
        );
    }
    Ok(RunOutcome {
        results: json!({
            "regime": report.regime,
            "rows": report.rows.len(),
            "audits_pass": report.audits_pass,
            "monotone_pass": report.monotone_pass,
            "pass": report.pass,
        }),
        outputs: vec!["sweep.csv".into(), "sweep.json".into()],
        audits_pass: Some(report.pass),
        constants: constants_value(&schedule.s_list),
    })
}

fn write_eigenfunction_csv(pair: &EigenPair, path: &Path) -> fraclap::Result<()> {
    let mut f = BufWriter::new(fs::File::create(path)?);
    writeln!(f, "x,phi")?;
    for (i, &v) in pair.phi.values.iter().enumerate() {
        writeln!(f, "{},{}", pair.phi.grid.node(i), v)?;
    }
    f.flush()?;
    Ok(())
}

fn write_atomic(
    dir: &Path,
    name: &str,
    write: impl FnOnce(&Path) -> fraclap::Result<()>,
) -> fraclap::Result<()> {
    let tmp = dir.join(format!("{name}.tmp"));
    write(&tmp)?;
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

/// Base constants plus the fractional kernel constant at every order the
/// run touched, keyed by the order's shortest decimal form.
fn constants_value(frac_orders: &[f64]) -> Value {
    let base = log_constants(1).expect("dimension-1 constants are defined");
    let mut frac = Map::new();
    for &s in frac_orders {
        if let Ok(c) = frac_constant(1, s) {
            frac.insert(format!("{s}"), json!(c));
        }
    }
    json!({
        "euler_mascheroni": base.gamma_em,
        "c1": base.c_n,
        "rho_1": base.rho_n,
        "frac_constant": Value::Object(frac),
    })
}

fn manifest_value(cfg: &ExperimentConfig, outcome: &Result<RunOutcome, fraclap::Error>) -> Value {
    let d = &cfg.domain;
    let h = make_grid(d.a, d.b, d.n).map(|g| g.h).ok();
    let mut manifest = json!({
        "schema_version": "1",
        "command": cfg.command.label(),
        "domain": { "a": d.a, "b": d.b, "n": d.n, "h": h },
        "parameters": serde_json::to_value(cfg).unwrap_or(Value::Null),
        "config_toml": crate::config::print_config(cfg),
        "tolerances": {
            "kkt_residual": KKT_TOL,
            "eigen_residual": EIGEN_TOL,
            "quadrature_panel_disagreement": PANEL_TOL,
            "audit_slack_fraction": AUDIT_SLACK_FRACTION,
        },
    });
    let obj = manifest.as_object_mut().expect("manifest is an object");
    match outcome {
        Ok(o) => {
            obj.insert("constants".into(), o.constants.clone());
            obj.insert("results".into(), o.results.clone());
            obj.insert("outputs".into(), json!(o.outputs));
            obj.insert("audits_pass".into(), json!(o.audits_pass));
            obj.insert("status".into(), json!("ok"));
        }
        Err(e) => {
            obj.insert("constants".into(), constants_value(&[]));
            obj.insert("results".into(), Value::Null);
            obj.insert("outputs".into(), json!([] as [&str; 0]));
            obj.insert("audits_pass".into(), Value::Null);
            obj.insert("status".into(), json!(e.name()));
            obj.insert("error".into(), json!(e.to_string()));
        }
    }
    manifest
}

fn write_manifest(dir: &Path, manifest: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(manifest).map_err(std::io::Error::other)?;
    let tmp = dir.join(format!("{MANIFEST_NAME}.tmp"));
    fs::write(&tmp, text + "\n")?;
    fs::rename(&tmp, dir.join(MANIFEST_NAME))
}
