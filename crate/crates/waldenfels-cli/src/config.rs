//! Scenario configuration: a flat, explicitly documented TOML key set with
//! sectioned tables and no programmable expressions. Unknown keys are
//! rejected with the list of valid keys; numeric validation happens before
//! any compute.

use std::path::PathBuf;

use toml::Value;
use waldenfels::field::{
    matrix_registry, scalar_registry, vector_registry, MatrixCoeff, ScalarCoeff, VectorCoeff,
};
use waldenfels::geometry::{implicit_registry, DomainSpec};
use waldenfels::operator::{
    presets as op_presets, CoefficientField, DisplacementDensity, LevyKernelSpec, OperatorSpec,
};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type CResult<T> = Result<T, ConfigError>;

const TOP_KEYS: &[&str] = &["operator", "domain", "scenario"];
const OPERATOR_KEYS: &[&str] = &[
    "preset",
    "dimension",
    "q",
    "q_name",
    "b",
    "b_name",
    "c",
    "c_name",
    "sup_q",
    "sup_b",
    "sup_c",
    "kernel",
];
const KERNEL_KEYS: &[&str] = &[
    "variant",
    "intensity",
    "atoms",
    "uniform_ball_radius",
    "support_radius",
    "index",
    "scale",
    "truncation_radius",
    "inner_cutoff",
];
const DOMAIN_KEYS: &[&str] = &[
    "variant", "center", "radius", "lo", "hi", "r_in", "r_out", "name",
];
const SCENARIO_KEYS: &[&str] = &[
    "task",
    "h",
    "dt",
    "n_paths",
    "t_max",
    "seed",
    "seeds",
    "x0",
    "alpha",
    "k_target",
    "lambda",
    "out_dir",
    "suite",
    "antithetic",
    "t_grid",
    "audit_paths",
    "pass_level",
    "export_matrices",
];

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub operator: OperatorSpec,
    pub domain: DomainSpec,
    pub task: String,
    pub h: f64,
    pub dt: f64,
    pub n_paths: usize,
    pub t_max: Option<f64>,
    pub seed: u64,
    pub seeds: usize,
    pub x0: Vec<f64>,
    pub alpha: f64,
    pub k_target: f64,
    pub lambda: Option<f64>,
    pub out_dir: PathBuf,
    pub suite: String,
    pub antithetic: bool,
    pub t_grid: Vec<f64>,
    pub audit_paths: usize,
    pub pass_level: f64,
    pub export_matrices: bool,
}

pub const VALID_TASKS: &[&str] = &[
    "operator-check",
    "simulate",
    "eigen",
    "gauge",
    "barrier",
    "verify-weak-max",
    "verify-strong-max",
    "verify-bony",
    "verify-hopf",
    "verify-qhl-ia",
    "verify-qhl-ib",
    "verify-qhl-iia",
    "verify-qhl-iib",
    "verify-delta-bound",
    "verify-weak-harnack",
    "verify-harnack-corollary",
    "verify-mc-vs-grid",
    "verify-structural",
    "verify-negative-controls",
    "suite",
    "report",
];

fn check_keys(table: &toml::value::Table, allowed: &[&str], section: &str) -> CResult<()> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError(format!(
                "unknown key '{key}' in [{section}]; valid keys: {}",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn get_f64(t: &toml::value::Table, key: &str) -> CResult<Option<f64>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Float(v)) => Ok(Some(*v)),
        Some(Value::Integer(v)) => Ok(Some(*v as f64)),
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be a number, got {other}"
        ))),
    }
}

fn get_usize(t: &toml::value::Table, key: &str) -> CResult<Option<usize>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be a nonnegative integer, got {other}"
        ))),
    }
}

fn get_str(t: &toml::value::Table, key: &str) -> CResult<Option<String>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be a string, got {other}"
        ))),
    }
}

fn get_bool(t: &toml::value::Table, key: &str) -> CResult<Option<bool>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Boolean(b)) => Ok(Some(*b)),
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be a boolean, got {other}"
        ))),
    }
}

fn get_vec(t: &toml::value::Table, key: &str) -> CResult<Option<Vec<f64>>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Array(a)) => a
            .iter()
            .map(|v| match v {
                Value::Float(f) => Ok(*f),
                Value::Integer(i) => Ok(*i as f64),
                other => Err(ConfigError(format!(
                    "'{key}' entries must be numbers, got {other}"
                ))),
            })
            .collect::<CResult<Vec<f64>>>()
            .map(Some),
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be an array, got {other}"
        ))),
    }
}

fn get_matrix(t: &toml::value::Table, key: &str) -> CResult<Option<Vec<Vec<f64>>>> {
    match t.get(key) {
        None => Ok(None),
        Some(Value::Array(rows)) => {
            let mut out = Vec::new();
            for row in rows {
                match row {
                    Value::Array(cells) => {
                        let r: CResult<Vec<f64>> = cells
                            .iter()
                            .map(|v| match v {
                                Value::Float(f) => Ok(*f),
                                Value::Integer(i) => Ok(*i as f64),
                                other => Err(ConfigError(format!(
                                    "'{key}' entries must be numbers, got {other}"
                                ))),
                            })
                            .collect();
                        out.push(r?);
                    }
                    other => {
                        return Err(ConfigError(format!(
                            "'{key}' rows must be arrays, got {other}"
                        )))
                    }
                }
            }
            Ok(Some(out))
        }
        Some(other) => Err(ConfigError(format!(
            "'{key}' must be an array of rows, got {other}"
        ))),
    }
}

fn parse_kernel(t: &toml::value::Table, dim: usize) -> CResult<LevyKernelSpec> {
    check_keys(t, KERNEL_KEYS, "operator.kernel")?;
    let variant = get_str(t, "variant")?.unwrap_or_else(|| "zero".into());
    match variant.as_str() {
        "zero" => Ok(LevyKernelSpec::Zero),
        "finite-activity" => {
            let intensity = get_f64(t, "intensity")?
                .ok_or_else(|| ConfigError("finite-activity kernel needs 'intensity'".into()))?;
            if intensity < 0.0 {
                return Err(ConfigError("intensity must be nonnegative".into()));
            }
            let density = if let Some(Value::Array(atoms)) = t.get("atoms") {
                let mut list = Vec::new();
                for a in atoms {
                    let Value::Table(at) = a else {
                        return Err(ConfigError("each atom must be a table { y = [...], w = ... }".into()));
                    };
                    check_keys(at, &["y", "w"], "operator.kernel.atoms[..]")?;
                    let y = get_vec(at, "y")?
                        .ok_or_else(|| ConfigError("atom needs 'y'".into()))?;
                    if y.len() != dim {
                        return Err(ConfigError("atom displacement dimension mismatch".into()));
                    }
                    let w = get_f64(at, "w")?.ok_or_else(|| ConfigError("atom needs 'w'".into()))?;
                    list.push((y, w));
                }
                DisplacementDensity::Atoms(list)
            } else if let Some(r) = get_f64(t, "uniform_ball_radius")? {
                DisplacementDensity::UniformBall { radius: r }
            } else {
                return Err(ConfigError(
                    "finite-activity kernel needs 'atoms' or 'uniform_ball_radius'".into(),
                ));
            };
            let support_radius = get_f64(t, "support_radius")?.unwrap_or_else(|| match &density {
                DisplacementDensity::Atoms(atoms) => atoms
                    .iter()
                    .map(|(y, _)| y.iter().map(|v| v * v).sum::<f64>().sqrt())
                    .fold(0.0, f64::max),
                DisplacementDensity::UniformBall { radius } => *radius,
            });
            Ok(LevyKernelSpec::FiniteActivity {
                intensity: ScalarCoeff::constant(intensity),
                density,
                support_radius,
            })
        }
        "truncated-stable" => {
            let need = |k: &str| {
                get_f64(t, k)?.ok_or_else(|| ConfigError(format!("truncated-stable kernel needs '{k}'")))
            };
            Ok(LevyKernelSpec::TruncatedStable {
                index: need("index")?,
                scale: need("scale")?,
                truncation_radius: need("truncation_radius")?,
                inner_cutoff: need("inner_cutoff")?,
            })
        }
        other => Err(ConfigError(format!(
            "unknown kernel variant '{other}'; valid variants: zero, finite-activity, truncated-stable"
        ))),
    }
}

fn parse_operator(t: &toml::value::Table) -> CResult<OperatorSpec> {
    check_keys(t, OPERATOR_KEYS, "operator")?;
    let dim = get_usize(t, "dimension")?;
    if let Some(preset) = get_str(t, "preset")? {
        let d = dim.unwrap_or(1);
        let mut op = op_presets::by_name(&preset, d).map_err(|e| ConfigError(e.to_string()))?;
        // c may still be overridden alongside a preset
        if let Some(c) = get_f64(t, "c")? {
            if c < 0.0 {
                return Err(ConfigError("c must be nonnegative".into()));
            }
            op.coeffs.c = ScalarCoeff::constant(c);
        } else if let Some(name) = get_str(t, "c_name")? {
            op.coeffs.c = scalar_registry(&name, d).map_err(|e| ConfigError(e.to_string()))?;
        }
        return Ok(op);
    }
    let d = dim.ok_or_else(|| ConfigError("operator needs 'dimension' (or a preset)".into()))?;
    if d == 0 || d > 3 {
        return Err(ConfigError("dimension must be 1, 2 or 3".into()));
    }
    let q = if let Some(rows) = get_matrix(t, "q")? {
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(ConfigError("q must be a d×d matrix".into()));
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(sup_rows) = get_matrix(t, "sup_q")? {
            let sup: Vec<f64> = sup_rows.into_iter().flatten().collect();
            if sup.len() != d * d {
                return Err(ConfigError("sup_q must be d×d".into()));
            }
            // constant matrices carry their own sup norms; an explicit
            // override must dominate the constant
            for (a, s) in flat.iter().zip(&sup) {
                if a.abs() > *s {
                    return Err(ConfigError("sup_q must dominate |q|".into()));
                }
            }
        }
        MatrixCoeff::constant(flat)
    } else if let Some(name) = get_str(t, "q_name")? {
        matrix_registry(&name, d).map_err(|e| ConfigError(e.to_string()))?
    } else {
        MatrixCoeff::identity(d)
    };
    let b = if let Some(v) = get_vec(t, "b")? {
        if v.len() != d {
            return Err(ConfigError("b must have d components".into()));
        }
        VectorCoeff::constant(v)
    } else if let Some(name) = get_str(t, "b_name")? {
        vector_registry(&name, d).map_err(|e| ConfigError(e.to_string()))?
    } else {
        VectorCoeff::constant(vec![0.0; d])
    };
    let c = if let Some(v) = get_f64(t, "c")? {
        if v < 0.0 {
            return Err(ConfigError("c must be nonnegative".into()));
        }
        ScalarCoeff::constant(v)
    } else if let Some(name) = get_str(t, "c_name")? {
        scalar_registry(&name, d).map_err(|e| ConfigError(e.to_string()))?
    } else {
        ScalarCoeff::constant(0.0)
    };
    let kernel = match t.get("kernel") {
        None => LevyKernelSpec::Zero,
        Some(Value::Table(kt)) => parse_kernel(kt, d)?,
        Some(other) => {
            return Err(ConfigError(format!(
                "'kernel' must be a table, got {other}"
            )))
        }
    };
    OperatorSpec::new(CoefficientField::new(d, q, b, c), kernel)
        .map_err(|e| ConfigError(e.to_string()))
}

fn parse_domain(t: &toml::value::Table, dim: usize) -> CResult<DomainSpec> {
    check_keys(t, DOMAIN_KEYS, "domain")?;
    let variant =
        get_str(t, "variant")?.ok_or_else(|| ConfigError("domain needs 'variant'".into()))?;
    let dom = match variant.as_str() {
        "ball" => {
            let center = get_vec(t, "center")?.unwrap_or_else(|| vec![0.0; dim]);
            let radius = get_f64(t, "radius")?
                .ok_or_else(|| ConfigError("ball domain needs 'radius'".into()))?;
            if radius <= 0.0 {
                return Err(ConfigError("radius must be positive".into()));
            }
            DomainSpec::ball(center, radius)
        }
        "box" => {
            let lo = get_vec(t, "lo")?.ok_or_else(|| ConfigError("box needs 'lo'".into()))?;
            let hi = get_vec(t, "hi")?.ok_or_else(|| ConfigError("box needs 'hi'".into()))?;
            if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a >= b) {
                return Err(ConfigError("box needs lo < hi componentwise".into()));
            }
            DomainSpec::boxdom(lo, hi)
        }
        "annulus" => {
            let center = get_vec(t, "center")?.unwrap_or_else(|| vec![0.0; dim]);
            let r_in =
                get_f64(t, "r_in")?.ok_or_else(|| ConfigError("annulus needs 'r_in'".into()))?;
            let r_out =
                get_f64(t, "r_out")?.ok_or_else(|| ConfigError("annulus needs 'r_out'".into()))?;
            if !(0.0 < r_in && r_in < r_out) {
                return Err(ConfigError("annulus needs 0 < r_in < r_out".into()));
            }
            DomainSpec::annulus(center, r_in, r_out)
        }
        "implicit" => {
            let name = get_str(t, "name")?
                .ok_or_else(|| ConfigError("implicit domain needs 'name'".into()))?;
            implicit_registry(&name).map_err(|e| ConfigError(e.to_string()))?
        }
        other => {
            return Err(ConfigError(format!(
                "unknown domain variant '{other}'; valid variants: ball, box, annulus, implicit"
            )))
        }
    };
    if dom.dim != dim {
        return Err(ConfigError(format!(
            "domain dimension {} does not match operator dimension {dim}",
            dom.dim
        )));
    }
    Ok(dom)
}

/// Parses and validates a full scenario from TOML text, applying dotted
/// `key=value` overrides first.
pub fn parse_config(text: &str, overrides: &[String]) -> CResult<ScenarioConfig> {
    let mut root: Value = text
        .parse()
        .map_err(|e| ConfigError(format!("TOML parse failure: {e}")))?;
    for kv in overrides {
        apply_override(&mut root, kv)?;
    }
    let Value::Table(top) = &root else {
        return Err(ConfigError("top level must be a table".into()));
    };
    check_keys(top, TOP_KEYS, "top level")?;
    let op_table = match top.get("operator") {
        Some(Value::Table(t)) => t,
        _ => return Err(ConfigError("missing [operator] section".into())),
    };
    let operator = parse_operator(op_table)?;
    let dim = operator.dim();
    let dom_table = match top.get("domain") {
        Some(Value::Table(t)) => t,
        _ => return Err(ConfigError("missing [domain] section".into())),
    };
    let domain = parse_domain(dom_table, dim)?;
    let sc = match top.get("scenario") {
        Some(Value::Table(t)) => t,
        _ => return Err(ConfigError("missing [scenario] section".into())),
    };
    check_keys(sc, SCENARIO_KEYS, "scenario")?;
    let task = get_str(sc, "task")?.ok_or_else(|| ConfigError("scenario needs 'task'".into()))?;
    if !VALID_TASKS.contains(&task.as_str()) {
        return Err(ConfigError(format!(
            "unknown task '{task}'; valid tasks: {}",
            VALID_TASKS.join(", ")
        )));
    }
    let h = get_f64(sc, "h")?.unwrap_or(0.02);
    let dt = get_f64(sc, "dt")?.unwrap_or(1e-3);
    if h <= 0.0 || dt <= 0.0 {
        return Err(ConfigError("h and dt must be positive".into()));
    }
    let n_paths = get_usize(sc, "n_paths")?.unwrap_or(10_000);
    if n_paths == 0 {
        return Err(ConfigError("n_paths must be at least 1".into()));
    }
    let x0 = get_vec(sc, "x0")?.unwrap_or_else(|| vec![0.0; dim]);
    if x0.len() != dim {
        return Err(ConfigError("x0 must have d components".into()));
    }
    let alpha = get_f64(sc, "alpha")?.unwrap_or(0.0);
    if alpha < 0.0 {
        return Err(ConfigError("alpha must be nonnegative".into()));
    }
    let out_root = std::env::var("WALDENFELS_OUT").unwrap_or_else(|_| "out".into());
    let out_dir = get_str(sc, "out_dir")?
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(out_root));
    Ok(ScenarioConfig {
        operator,
        domain,
        task,
        h,
        dt,
        n_paths,
        t_max: get_f64(sc, "t_max")?,
        seed: get_usize(sc, "seed")?.unwrap_or(1) as u64,
        seeds: get_usize(sc, "seeds")?.unwrap_or(200),
        x0,
        alpha,
        k_target: get_f64(sc, "k_target")?.unwrap_or(1.0),
        lambda: get_f64(sc, "lambda")?,
        out_dir,
        suite: get_str(sc, "suite")?.unwrap_or_else(|| "paper-core".into()),
        antithetic: get_bool(sc, "antithetic")?.unwrap_or(false),
        t_grid: get_vec(sc, "t_grid")?
            .unwrap_or_else(|| (0..=20).map(|k| 0.25 * k as f64).collect()),
        audit_paths: get_usize(sc, "audit_paths")?.unwrap_or(0),
        pass_level: get_f64(sc, "pass_level")?.unwrap_or(0.0),
        export_matrices: get_bool(sc, "export_matrices")?.unwrap_or(false),
    })
}

fn apply_override(root: &mut Value, kv: &str) -> CResult<()> {
    let (path, raw) = kv
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("override '{kv}' must be key=value")))?;
    let parsed: Value = if let Ok(i) = raw.parse::<i64>() {
        Value::Integer(i)
    } else if let Ok(f) = raw.parse::<f64>() {
        Value::Float(f)
    } else if let Ok(b) = raw.parse::<bool>() {
        Value::Boolean(b)
    } else {
        Value::String(raw.to_string())
    };
    let mut cursor = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let table = cursor
            .as_table_mut()
            .ok_or_else(|| ConfigError(format!("override path '{path}' crosses a non-table")))?;
        if i + 1 == parts.len() {
            table.insert(part.to_string(), parsed);
            return Ok(());
        }
        cursor = table
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Default::default()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"
[operator]
dimension = 1
q = [[1.0]]
b = [0.0]
c = 1.0

[domain]
variant = "ball"
center = [0.0]
radius = 1.0

[scenario]
task = "eigen"
h = 0.01
seed = 7
"#;

    #[test]
    fn parses_and_validates() {
        let cfg = parse_config(GOOD, &[]).unwrap();
        assert_eq!(cfg.task, "eigen");
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.operator.dim(), 1);
    }

    #[test]
    fn unknown_keys_list_valid_ones() {
        let bad = GOOD.replace("h = 0.01", "hh = 0.01");
        let err = parse_config(&bad, &[]).unwrap_err();
        assert!(
            err.0.contains("hh") && err.0.contains("valid keys"),
            "{err}"
        );
    }

    #[test]
    fn numeric_validation_before_compute() {
        let bad = GOOD.replace("h = 0.01", "h = -0.01");
        assert!(parse_config(&bad, &[]).is_err());
        let bad = GOOD.replace("task = \"eigen\"", "task = \"frobnicate\"");
        let err = parse_config(&bad, &[]).unwrap_err();
        assert!(err.0.contains("valid tasks"));
    }

    #[test]
    fn overrides_apply() {
        let cfg = parse_config(GOOD, &["scenario.h=0.05".into()]).unwrap();
        assert_eq!(cfg.h, 0.05);
    }

    #[test]
    fn kernel_table_parses() {
        let text = r#"
[operator]
dimension = 1
[operator.kernel]
variant = "finite-activity"
intensity = 1.0
atoms = [{ y = [0.5], w = 0.5 }, { y = [-0.5], w = 0.5 }]

[domain]
variant = "ball"
radius = 1.0

[scenario]
task = "simulate"
"#;
        let cfg = parse_config(text, &[]).unwrap();
        assert!(matches!(
            cfg.operator.kernel,
            LevyKernelSpec::FiniteActivity { .. }
        ));
    }
}
