use super::{
    export_lp, naive_lower_bound, parse_solution_file, MilpBackend, MilpError, MilpModel,
    MilpOutcome, MilpStatus,
};
use std::collections::HashMap;
use std::process::Command;
use std::time::Duration;

/// Integer tolerance when reading back solver values.
const ROUND_TOL: f64 = 1e-4;

/// Runs an external MILP solver as a subprocess.
///
/// The command is an argument template. Every argument may contain the
/// placeholders `{lp}` (path of the exported model), `{sol}` (path the
/// solver must write) and `{limit}` (time limit in seconds, `0` meaning
/// none). The solution file starts with `optimal`, `infeasible` or
/// `timeout`, followed by `name value` lines; variables missing from the
/// file default to zero. Warm starts are not forwarded.
pub struct ExternalBackend {
    command: Vec<String>,
}

impl ExternalBackend {
    pub fn new(command: Vec<String>) -> Result<Self, MilpError> {
        if command.is_empty() {
            return Err(MilpError::Backend("empty solver command".into()));
        }
        for required in ["{lp}", "{sol}"] {
            if !command.iter().any(|arg| arg.contains(required)) {
                return Err(MilpError::Backend(format!(
                    "solver command never mentions {required}"
                )));
            }
        }
        Ok(ExternalBackend { command })
    }
}

impl MilpBackend for ExternalBackend {
    fn name(&self) -> &str {
        "external"
    }

    fn solve(
        &self,
        model: &MilpModel,
        _warm: Option<&[i64]>,
        time_limit: Option<Duration>,
    ) -> Result<MilpOutcome, MilpError> {
        let dir = tempfile::tempdir()?;
        let lp_path = dir.path().join("model.lp");
        let sol_path = dir.path().join("model.sol");
        std::fs::write(&lp_path, export_lp(model))?;
        let limit = match time_limit {
            Some(d) => format!("{:.3}", d.as_secs_f64()),
            None => "0".to_string(),
        };
        let subst = |arg: &str| {
            arg.replace("{lp}", &lp_path.to_string_lossy())
                .replace("{sol}", &sol_path.to_string_lossy())
                .replace("{limit}", &limit)
        };
        let output = Command::new(subst(&self.command[0]))
            .args(self.command[1..].iter().map(|a| subst(a)))
            .output()?;
        if !output.status.success() {
            let stderr = String::from_utf8_lossy(&output.stderr);
            return Err(MilpError::Backend(format!(
                "solver exited with {}: {}",
                output.status,
                stderr.trim()
            )));
        }
        let text = std::fs::read_to_string(&sol_path).map_err(|e| {
            MilpError::Backend(format!("solver wrote no solution file: {e}"))
        })?;
        let (status, pairs) =
            parse_solution_file(&text).map_err(|e| MilpError::Solution(e.to_string()))?;

        if status == MilpStatus::Infeasible {
            return Ok(MilpOutcome {
                status,
                objective: None,
                values: None,
                lower_bound: naive_lower_bound(model),
                nodes: 0,
            });
        }
        if status == MilpStatus::Timeout && pairs.is_empty() {
            return Ok(MilpOutcome {
                status,
                objective: None,
                values: None,
                lower_bound: naive_lower_bound(model),
                nodes: 0,
            });
        }

        let ids: HashMap<&str, usize> = model
            .vars()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        let mut values = vec![0i64; model.n_vars()];
        for (name, value) in &pairs {
            let Some(&id) = ids.get(name.as_str()) else {
                return Err(MilpError::Solution(format!("unknown variable {name}")));
            };
            let rounded = value.round();
            if (value - rounded).abs() > ROUND_TOL {
                return Err(MilpError::Solution(format!(
                    "value for {name} is not integral: {value}"
                )));
            }
            values[id] = rounded as i64;
        }
        if !model.is_feasible(&values) {
            return Err(MilpError::Backend(
                "solution returned by the external solver violates the model".into(),
            ));
        }
        let objective = model.objective_of(&values);
        Ok(MilpOutcome {
            status,
            objective: Some(objective),
            values: Some(values),
            lower_bound: if status == MilpStatus::Optimal {
                objective
            } else {
                naive_lower_bound(model)
            },
            nodes: 0,
        })
    }
}
