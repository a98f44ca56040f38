//! Config document schema and two-phase validation.
//!
//! Phase one is TOML deserialization with unknown keys rejected. Phase two
//! re-checks every parameter invariant the library enforces and collects
//! all violations instead of stopping at the first, so a bad config is
//! fixed in one edit cycle. Each message echoes the offending value and
//! the requirement it violates.

use serde::{Deserialize, Serialize};

use fraclap::{Regime, Schedule};

/// Pipeline selected by the config; must match the invoked subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Assemble,
    Eigen,
    Solve,
    Sweep,
}

impl CommandKind {
    pub fn label(self) -> &'static str {
        match self {
            CommandKind::Assemble => "assemble",
            CommandKind::Eigen => "eigen",
            CommandKind::Solve => "solve",
            CommandKind::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub a: f64,
    pub b: f64,
    /// Interior node count.
    pub n: usize,
}

/// Operator selection for `assemble` and `eigen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSection {
    /// "fractional" or "log".
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Strictly decreasing orders; selects the eigen expansion table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_list: Option<Vec<f64>>,
}

/// Problem selection for `solve`. Keys beyond `kind` are per-kind; `a` is
/// the coefficient of the `r`-power term, not the domain endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    /// One of "sublinear", "lambda_min", "theta", "logistic",
    /// "log_sublinear".
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

/// Decreasing-order schedule for `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    /// One of "case2", "sublinear_power", "logistic".
    pub regime: String,
    pub s_list: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

/// Complete run description. Scalar keys precede the section tables so the
/// document serializes back to valid TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    /// Echoed into the manifest; reserved for randomized test profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub domain: DomainSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSection>,
}

/// Parses and validates a config document; returns every violation found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, Vec<String>> {
    let cfg: ExperimentConfig =
        toml::from_str(text).map_err(|e| vec![format!("config syntax: {}", e.message())])?;
    let errors = validate(&cfg);
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(errors)
    }
}

/// Serializes a config back to TOML; inverse of [`parse_config`] on valid
/// configs.
pub fn print_config(cfg: &ExperimentConfig) -> String {
    toml::to_string(cfg).expect("a deserialized config serializes back")
}

fn validate(cfg: &ExperimentConfig) -> Vec<String> {
    let mut errors = Vec::new();

    if !(cfg.domain.b > cfg.domain.a) {
        errors.push(format!(
            "domain: a = {}, b = {}: must satisfy b > a",
            cfg.domain.a, cfg.domain.b
        ));
    }
    if cfg.domain.n < 3 {
        errors.push(format!("domain.n = {}: must satisfy n >= 3", cfg.domain.n));
    }

    let command = cfg.command;
    let mut need_section = |present: bool, name: &str| {
        if !present {
            errors.push(format!(
                "command \"{}\" requires a [{name}] section",
                command.label()
            ));
        }
    };
    match command {
        CommandKind::Assemble | CommandKind::Eigen => need_section(cfg.operator.is_some(), "operator"),
        CommandKind::Solve => need_section(cfg.problem.is_some(), "problem"),
        CommandKind::Sweep => need_section(cfg.schedule.is_some(), "schedule"),
    }
    let sections = [
        ("operator", cfg.operator.is_some(), matches!(command, CommandKind::Assemble | CommandKind::Eigen)),
        ("problem", cfg.problem.is_some(), command == CommandKind::Solve),
        ("schedule", cfg.schedule.is_some(), command == CommandKind::Sweep),
    ];
    for (name, present, wanted) in sections {
        if present && !wanted {
            errors.push(format!(
                "[{name}] section is not used by command \"{}\"",
                command.label()
            ));
        }
    }

    if let Some(op) = &cfg.operator {
        validate_operator(&mut errors, command, op);
    }
    if let Some(pr) = &cfg.problem {
        validate_problem(&mut errors, pr);
    }
    if let Some(sc) = &cfg.schedule {
        if let Err(mut es) = schedule_from_section(sc) {
            errors.append(&mut es);
        }
    }
    errors
}

fn check_fraction(errors: &mut Vec<String>, key: &str, s: f64) {
    if !(s > 0.0 && s < 1.0) {
        errors.push(format!("{key} = {s}: must satisfy s in (0, 1)"));
    }
}

fn validate_operator(errors: &mut Vec<String>, command: CommandKind, op: &OperatorSection) {
    match op.kind.as_str() {
        "fractional" => match (op.s, &op.s_list) {
            (Some(s), None) => check_fraction(errors, "operator.s", s),
            (None, Some(list)) => {
                if command != CommandKind::Eigen {
                    errors.push(
                        "operator.s_list selects the eigen expansion table and is only valid for the eigen command"
                            .into(),
                    );
                }
                if list.is_empty() {
                    errors.push("operator.s_list must be nonempty".into());
                }
                if list.windows(2).any(|w| !(w[1] < w[0])) {
                    errors.push("operator.s_list must be strictly decreasing".into());
                }
                for &s in list {
                    check_fraction(errors, "operator.s_list entry", s);
                }
            }
            (Some(_), Some(_)) => {
                errors.push("operator: give either s or s_list, not both".into());
            }
            (None, None) => {
                errors.push(
                    "operator.kind = \"fractional\" requires s (or s_list for the eigen expansion table)"
                        .into(),
                );
            }
        },
        "log" => {
            if op.s.is_some() {
                errors.push("operator.s is not used when kind = \"log\"".into());
            }
            if op.s_list.is_some() {
                errors.push("operator.s_list is not used when kind = \"log\"".into());
            }
        }
        other => errors.push(format!(
            "operator.kind = \"{other}\": must be \"fractional\" or \"log\""
        )),
    }
}

fn need(
    errors: &mut Vec<String>,
    kind: &str,
    key: &str,
    value: Option<f64>,
    requirement: &str,
    ok: impl Fn(f64) -> bool,
) {
    match value {
        None => errors.push(format!(
            "problem.{key} is required when kind = \"{kind}\" ({requirement})"
        )),
        Some(v) if !ok(v) => errors.push(format!("problem.{key} = {v}: must satisfy {requirement}")),
        _ => {}
    }
}

fn forbid(errors: &mut Vec<String>, kind: &str, entries: &[(&str, Option<f64>)]) {
    for (key, value) in entries {
        if value.is_some() {
            errors.push(format!("problem.{key} is not used when kind = \"{kind}\""));
        }
    }
}

fn validate_problem(errors: &mut Vec<String>, pr: &ProblemSection) {
    let kind = pr.kind.as_str();
    match kind {
        "sublinear" | "lambda_min" => {
            need(errors, kind, "s", pr.s, "s in (0, 1)", |v| v > 0.0 && v < 1.0);
            need(errors, kind, "p", pr.p, "p in (1, 2)", |v| v > 1.0 && v < 2.0);
            forbid(errors, kind, &[("mu", pr.mu), ("k", pr.k), ("eps", pr.eps), ("a", pr.a), ("r", pr.r)]);
        }
        "theta" => {
            need(errors, kind, "s", pr.s, "s in (0, 1)", |v| v > 0.0 && v < 1.0);
            need(errors, kind, "eps", pr.eps, "eps > 0", |v| v > 0.0);
            need(errors, kind, "a", pr.a, "a > 0", |v| v > 0.0);
            need(errors, kind, "r", pr.r, "r > 2", |v| v > 2.0);
            forbid(errors, kind, &[("p", pr.p), ("mu", pr.mu), ("k", pr.k)]);
        }
        "logistic" => {
            need(errors, kind, "s", pr.s, "s in (0, 1)", |v| v > 0.0 && v < 1.0);
            need(errors, kind, "k", pr.k, "k > 1", |v| v > 1.0);
            need(errors, kind, "p", pr.p, "p > 1", |v| v > 1.0);
            forbid(errors, kind, &[("mu", pr.mu), ("eps", pr.eps), ("a", pr.a), ("r", pr.r)]);
        }
        "log_sublinear" => {
            need(errors, kind, "mu", pr.mu, "mu > 0", |v| v > 0.0);
            forbid(
                errors,
                kind,
                &[("s", pr.s), ("p", pr.p), ("k", pr.k), ("eps", pr.eps), ("a", pr.a), ("r", pr.r)],
            );
        }
        other => errors.push(format!(
            "problem.kind = \"{other}\": must be one of sublinear, lambda_min, theta, logistic, log_sublinear"
        )),
    }
}

/// Builds the validated schedule, collecting presence errors alongside the
/// library's structural and coupling checks.
pub fn schedule_from_section(sc: &ScheduleSection) -> Result<Schedule, Vec<String>> {
    fn sforbid(errors: &mut Vec<String>, label: &str, entries: &[(&str, Option<f64>)]) {
        for (key, value) in entries {
            if value.is_some() {
                errors.push(format!(
                    "schedule.{key} is not used when regime = \"{label}\""
                ));
            }
        }
    }
    let mut errors = Vec::new();
    let regime = match sc.regime.as_str() {
        "case2" => {
            sforbid(&mut errors, "case2", &[("p", sc.p), ("k", sc.k)]);
            match sc.mu {
                Some(mu) => Some(Regime::Case2 { mu }),
                None => {
                    errors.push("schedule.mu is required when regime = \"case2\" (mu > 0)".into());
                    None
                }
            }
        }
        "sublinear_power" => {
            sforbid(&mut errors, "sublinear_power", &[("mu", sc.mu), ("k", sc.k)]);
            match sc.p {
                Some(p) => Some(Regime::SublinearPower { p }),
                None => {
                    errors.push(
                        "schedule.p is required when regime = \"sublinear_power\" (p in (1, 2))".into(),
                    );
                    None
                }
            }
        }
        "logistic" => {
            sforbid(&mut errors, "logistic", &[("mu", sc.mu)]);
            if sc.k.is_none() {
                errors.push("schedule.k is required when regime = \"logistic\" (k > 1)".into());
            }
            if sc.p.is_none() {
                errors.push("schedule.p is required when regime = \"logistic\" (p > 1)".into());
            }
            match (sc.k, sc.p) {
                (Some(k), Some(p)) => Some(Regime::Logistic { k, p }),
                _ => None,
            }
        }
        other => {
            errors.push(format!(
                "schedule.regime = \"{other}\": must be one of case2, sublinear_power, logistic"
            ));
            None
        }
    };
    if let Some(regime) = regime {
        match Schedule::new(regime, sc.s_list.clone()) {
            Ok(schedule) if errors.is_empty() => return Ok(schedule),
            Ok(_) => {}
            Err(e) => errors.push(format!("schedule: {e}")),
        }
    }
    Err(errors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep_config() -> ExperimentConfig {
        ExperimentConfig {
            command: CommandKind::Sweep,
            output_dir: Some("out".into()),
            seed: Some(7),
            domain: DomainSection { a: -1.0, b: 1.0, n: 256 },
            operator: None,
            problem: None,
            schedule: Some(ScheduleSection {
                regime: "logistic".into(),
                s_list: vec![0.1, 0.05, 0.025],
                mu: None,
                p: Some(3.0),
                k: Some(2.0),
            }),
        }
    }

    #[test]
    fn round_trips_through_print() {
        let cfg = sweep_config();
        assert_eq!(parse_config(&print_config(&cfg)).unwrap(), cfg);

        let assemble = ExperimentConfig {
            command: CommandKind::Assemble,
            output_dir: None,
            seed: None,
            domain: DomainSection { a: 0.0, b: 2.0, n: 64 },
            operator: Some(OperatorSection {
                kind: "fractional".into(),
                s: Some(0.5),
                s_list: None,
            }),
            problem: None,
            schedule: None,
        };
        assert_eq!(parse_config(&print_config(&assemble)).unwrap(), assemble);
    }

    #[test]
    fn collects_every_violation() {
        let text = r#"
            command = "solve"
            [domain]
            a = -1.0
            b = 1.0
            n = 2
            [problem]
            kind = "log_sublinear"
            mu = -1.0
        "#;
        let errors = parse_config(text).unwrap_err();
        assert_eq!(errors.len(), 2);
        assert!(errors.iter().any(|e| e.contains("n >= 3")), "{errors:?}");
        assert!(errors.iter().any(|e| e.contains("mu > 0")), "{errors:?}");
    }

    #[test]
    fn theta_names_the_r_requirement() {
        let text = r#"
            command = "solve"
            [domain]
            a = -1.0
            b = 1.0
            n = 32
            [problem]
            kind = "theta"
            s = 0.1
            eps = 1.0
            a = 1.0
            r = 2.0
        "#;
        let errors = parse_config(text).unwrap_err();
        assert!(errors.iter().any(|e| e.contains("r > 2")), "{errors:?}");
    }

    #[test]
    fn rejects_unknown_keys_and_misplaced_sections() {
        let err = parse_config("command = \"eigen\"\nradius = 1.0\n[domain]\na = -1.0\nb = 1.0\nn = 8\n")
            .unwrap_err();
        assert!(err[0].contains("unknown field"), "{err:?}");

        let text = r#"
            command = "sweep"
            [domain]
            a = -1.0
            b = 1.0
            n = 32
            [schedule]
            regime = "case2"
            mu = 1.0
            s_list = [0.1, 0.05, 0.025]
            [problem]
            kind = "log_sublinear"
            mu = 1.0
        "#;
        let errors = parse_config(text).unwrap_err();
        assert!(
            errors.iter().any(|e| e.contains("[problem] section is not used")),
            "{errors:?}"
        );
    }

    #[test]
    fn schedule_errors_surface_library_checks() {
        let text = r#"
            command = "sweep"
            [domain]
            a = -1.0
            b = 1.0
            n = 32
            [schedule]
            regime = "case2"
            mu = 5.0
            s_list = [0.3]
        "#;
        let errors = parse_config(text).unwrap_err();
        assert!(
            errors.iter().any(|e| e.contains("at least three orders")),
            "{errors:?}"
        );

        let text = text.replace("s_list = [0.3]", "s_list = [0.24, 0.22, 0.21]");
        let errors = parse_config(&text).unwrap_err();
        assert!(
            errors.iter().any(|e| e.contains("2 - mu s must stay in (1, 2)")),
            "{errors:?}"
        );
    }
}
