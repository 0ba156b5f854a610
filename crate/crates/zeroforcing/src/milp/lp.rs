use super::{MilpModel, MilpStatus, Sense, VarKind};
use std::collections::HashMap;
use std::fmt;

/// Longest emitted line; historic LP readers cap lines, so term lists wrap.
const MAX_LINE: usize = 224;

/// Serializes a model in CPLEX-style LP format. The output is deterministic:
/// objective terms in variable order, rows in insertion order, unit
/// coefficients omitted.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("\\ Problem: {}\n", model.name));
    out.push_str("Minimize\n");
    let obj_terms: Vec<(String, i64)> = model
        .vars()
        .iter()
        .filter(|v| v.objective != 0)
        .map(|v| (v.name.clone(), v.objective))
        .collect();
    if obj_terms.is_empty() {
        // A constant objective still needs a variable to be well-formed.
        out.push_str(&format!(" obj: 0 {}\n", model.var(0).name));
    } else {
        push_terms(&mut out, " obj:", &obj_terms, None);
    }
    out.push_str("Subject To\n");
    for row in model.rows() {
        let terms: Vec<(String, i64)> = row
            .terms
            .iter()
            .map(|&(v, a)| (model.var(v).name.clone(), a))
            .collect();
        let sense = match row.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        push_terms(
            &mut out,
            &format!(" {}:", row.name),
            &terms,
            Some(&format!("{} {}", sense, row.rhs)),
        );
    }
    let generals: Vec<_> = model
        .vars()
        .iter()
        .filter(|v| matches!(v.kind, VarKind::Integer { .. }))
        .collect();
    if !generals.is_empty() {
        out.push_str("Bounds\n");
        for v in &generals {
            let (lb, ub) = v.kind.bounds();
            out.push_str(&format!(" {} <= {} <= {}\n", lb, v.name, ub));
        }
    }
    let binaries: Vec<_> = model
        .vars()
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        push_name_list(&mut out, &binaries);
    }
    if !generals.is_empty() {
        out.push_str("Generals\n");
        push_name_list(&mut out, &generals.iter().map(|v| v.name.as_str()).collect::<Vec<_>>());
    }
    out.push_str("End\n");
    out
}

/// Writes `label term term ... [tail]`, breaking between terms at the line cap.
fn push_terms(out: &mut String, label: &str, terms: &[(String, i64)], tail: Option<&str>) {
    let mut line = String::from(label);
    for (i, (name, coeff)) in terms.iter().enumerate() {
        let unit = if i == 0 {
            match coeff {
                1 => name.clone(),
                -1 => format!("- {name}"),
                c if *c < 0 => format!("- {} {name}", -c),
                c => format!("{c} {name}"),
            }
        } else {
            match coeff {
                1 => format!("+ {name}"),
                -1 => format!("- {name}"),
                c if *c < 0 => format!("- {} {name}", -c),
                c => format!("+ {c} {name}"),
            }
        };
        if line.len() + 1 + unit.len() > MAX_LINE {
            out.push_str(&line);
            out.push('\n');
            line = String::from("  ");
        }
        line.push(' ');
        line.push_str(&unit);
    }
    if let Some(tail) = tail {
        if line.len() + 1 + tail.len() > MAX_LINE {
            out.push_str(&line);
            out.push('\n');
            line = String::from("  ");
        }
        line.push(' ');
        line.push_str(tail);
    }
    out.push_str(&line);
    out.push('\n');
}

fn push_name_list(out: &mut String, names: &[&str]) {
    let mut line = String::new();
    for name in names {
        if !line.is_empty() && line.len() + 1 + name.len() > MAX_LINE {
            out.push_str(&line);
            out.push('\n');
            line.clear();
        }
        line.push(' ');
        line.push_str(name);
    }
    if !line.is_empty() {
        out.push_str(&line);
        out.push('\n');
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct LpParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for LpParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for LpParseError {}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, LpParseError> {
    Err(LpParseError {
        line,
        msg: msg.into(),
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Objective,
    Rows,
    Bounds,
    Binaries,
    Generals,
    Done,
}

/// Parses the dialect written by [`export_lp`]: integer data, named rows,
/// every variable declared under Binaries or Generals (with explicit bounds).
/// This is not a general LP reader; maximization, continuous variables and
/// quadratic terms are rejected.
pub fn parse_lp(text: &str) -> Result<MilpModel, LpParseError> {
    // Token streams per section, each token tagged with its source line.
    let mut sections: HashMap<u8, Vec<(usize, String)>> = HashMap::new();
    let mut current: Option<Section> = None;
    let mut name = String::from("lp");
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('\\') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if idx == 0 {
            if let Some(rest) = raw.trim().strip_prefix("\\ Problem:") {
                name = rest.trim().to_string();
            }
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lower = trimmed.to_ascii_lowercase();
        let header = match lower.as_str() {
            "minimize" | "min" | "minimise" => Some(Section::Objective),
            "maximize" | "max" | "maximise" => {
                return err(lineno, "maximization is not supported");
            }
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Rows),
            "bounds" | "bound" => Some(Section::Bounds),
            "binaries" | "binary" | "bin" => Some(Section::Binaries),
            "generals" | "general" | "gen" => Some(Section::Generals),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(section) = header {
            current = Some(section);
            continue;
        }
        let Some(section) = current else {
            return err(lineno, format!("content before any section: {trimmed}"));
        };
        if section == Section::Done {
            return err(lineno, "content after End");
        }
        let bucket = sections.entry(section as u8).or_default();
        for token in trimmed.split_whitespace() {
            bucket.push((lineno, token.to_string()));
        }
    }
    if current != Some(Section::Done) {
        return err(text.lines().count(), "missing End marker");
    }

    let empty = Vec::new();
    let grab = |s: Section| sections.get(&(s as u8)).unwrap_or(&empty);

    let objective = parse_term_list(grab(Section::Objective), true)?;
    let row_specs = parse_rows(grab(Section::Rows))?;
    let bounds = parse_bounds(grab(Section::Bounds))?;
    let binaries: Vec<(usize, String)> = grab(Section::Binaries).clone();
    let generals: Vec<(usize, String)> = grab(Section::Generals).clone();

    // Variables appear in declaration order: objective, rows, then the
    // Binaries/Generals lists.
    let mut model = MilpModel::new(name);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut order: Vec<(usize, String)> = Vec::new();
    let note = |order: &mut Vec<(usize, String)>, line: usize, name: &str| {
        if !order.iter().any(|(_, n)| n == name) {
            order.push((line, name.to_string()));
        }
    };
    for (line, vname, _) in &objective {
        note(&mut order, *line, vname);
    }
    for spec in &row_specs {
        for (line, name, _) in &spec.terms {
            note(&mut order, *line, name);
        }
    }
    for (line, name) in binaries.iter().chain(generals.iter()) {
        note(&mut order, *line, name);
    }
    let binary_names: Vec<&str> = binaries.iter().map(|(_, n)| n.as_str()).collect();
    let general_names: Vec<&str> = generals.iter().map(|(_, n)| n.as_str()).collect();
    for (line, vname) in &order {
        let id = if binary_names.contains(&vname.as_str()) {
            model.add_binary(vname.clone())
        } else if general_names.contains(&vname.as_str()) {
            match bounds.get(vname) {
                Some(&(lb, ub)) => model.add_integer(vname.clone(), lb, ub),
                None => return err(*line, format!("general variable {vname} has no bounds")),
            }
        } else {
            return err(
                *line,
                format!("variable {vname} is neither binary nor general (continuous variables are not supported)"),
            );
        };
        ids.insert(vname.clone(), id);
    }
    for (_, vname, coeff) in &objective {
        model.set_objective(ids[vname], *coeff);
    }
    for spec in row_specs {
        let terms: Vec<(usize, i64)> = spec
            .terms
            .iter()
            .map(|(_, name, coeff)| (ids[name], *coeff))
            .collect();
        model.add_named_row(spec.name, terms, spec.sense, spec.rhs);
    }
    Ok(model)
}

struct RowParse {
    name: String,
    terms: Vec<(usize, String, i64)>,
    sense: Sense,
    rhs: i64,
}

fn is_identifier(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses `[label:] [+|-] [int] name ...`; labels are dropped for the
/// objective. Terms may carry an explicit coefficient token before the name.
fn parse_term_list(
    tokens: &[(usize, String)],
    allow_label: bool,
) -> Result<Vec<(usize, String, i64)>, LpParseError> {
    let mut terms = Vec::new();
    let mut i = 0;
    if allow_label && !tokens.is_empty() && tokens[0].1.ends_with(':') {
        i = 1;
    }
    while i < tokens.len() {
        let (line, _) = tokens[i];
        let (consumed, name, coeff) = parse_term(&tokens[i..], terms.is_empty())?;
        terms.push((line, name, coeff));
        i += consumed;
    }
    Ok(terms)
}

/// One term: sign tokens, optional integer, then an identifier.
fn parse_term(
    tokens: &[(usize, String)],
    first: bool,
) -> Result<(usize, String, i64), LpParseError> {
    let (line, tok) = (tokens[0].0, tokens[0].1.as_str());
    let mut i = 0;
    let mut sign = 1i64;
    match tok {
        "+" => i = 1,
        "-" => {
            sign = -1;
            i = 1;
        }
        _ if !first => return err(line, format!("expected + or - before term, found {tok}")),
        _ => {}
    }
    let mut coeff = sign;
    if i < tokens.len() {
        if let Ok(v) = tokens[i].1.parse::<i64>() {
            coeff = sign * v;
            i += 1;
        }
    }
    if i >= tokens.len() {
        return err(line, "term is missing a variable name");
    }
    let name = tokens[i].1.clone();
    if !is_identifier(&name) {
        return err(tokens[i].0, format!("bad variable name: {name}"));
    }
    Ok((i + 1, name, coeff))
}

fn parse_rows(tokens: &[(usize, String)]) -> Result<Vec<RowParse>, LpParseError> {
    let mut rows = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let (line, tok) = (tokens[i].0, tokens[i].1.as_str());
        let name = if tok.ends_with(':') {
            i += 1;
            tok[..tok.len() - 1].to_string()
        } else {
            format!("c{}", rows.len() + 1)
        };
        // Terms until a sense token.
        let mut terms = Vec::new();
        let sense = loop {
            if i >= tokens.len() {
                return err(line, format!("row {name} has no relational operator"));
            }
            match tokens[i].1.as_str() {
                "<=" | "=<" | "<" => break Sense::Le,
                ">=" | "=>" | ">" => break Sense::Ge,
                "=" => break Sense::Eq,
                _ => {
                    let (consumed, vname, coeff) = parse_term(&tokens[i..], terms.is_empty())?;
                    terms.push((tokens[i].0, vname, coeff));
                    i += consumed;
                }
            }
        };
        i += 1;
        if i >= tokens.len() {
            return err(line, format!("row {name} is missing its right-hand side"));
        }
        let rhs = match tokens[i].1.parse::<i64>() {
            Ok(v) => v,
            Err(_) => return err(tokens[i].0, format!("bad right-hand side: {}", tokens[i].1)),
        };
        i += 1;
        if terms.is_empty() {
            return err(line, format!("row {name} has no terms"));
        }
        rows.push(RowParse {
            name,
            terms,
            sense,
            rhs,
        });
    }
    Ok(rows)
}

/// Only the exported form `lb <= name <= ub` is accepted.
fn parse_bounds(tokens: &[(usize, String)]) -> Result<HashMap<String, (i64, i64)>, LpParseError> {
    let mut map = HashMap::new();
    let mut i = 0;
    while i < tokens.len() {
        if i + 5 > tokens.len() {
            return err(tokens[i].0, "incomplete bound (expected: lb <= name <= ub)");
        }
        let line = tokens[i].0;
        let lb = tokens[i].1.parse::<i64>();
        let ub = tokens[i + 4].1.parse::<i64>();
        let name = &tokens[i + 2].1;
        if lb.is_err()
            || ub.is_err()
            || tokens[i + 1].1 != "<="
            || tokens[i + 3].1 != "<="
            || !is_identifier(name)
        {
            return err(line, "malformed bound (expected: lb <= name <= ub)");
        }
        map.insert(name.clone(), (lb.unwrap(), ub.unwrap()));
        i += 5;
    }
    Ok(map)
}

/// Reads a solver solution file: a status keyword on the first meaningful
/// line (`optimal`, `infeasible` or `timeout`), then `name value` pairs.
/// Lines starting with `#` and blank lines are skipped; an `objective ...`
/// line is tolerated and ignored (the objective is recomputed).
pub fn parse_solution_file(text: &str) -> Result<(MilpStatus, Vec<(String, f64)>), LpParseError> {
    let mut status: Option<MilpStatus> = None;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if status.is_none() {
            status = Some(match line.to_ascii_lowercase().as_str() {
                "optimal" => MilpStatus::Optimal,
                "infeasible" => MilpStatus::Infeasible,
                "timeout" | "time_limit" => MilpStatus::Timeout,
                other => {
                    return err(lineno, format!("expected a status keyword first, found {other}"))
                }
            });
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return err(lineno, format!("expected 'name value', found: {line}"));
        };
        if name.eq_ignore_ascii_case("objective") {
            continue;
        }
        let Ok(v) = value.parse::<f64>() else {
            return err(lineno, format!("bad value for {name}: {value}"));
        };
        values.push((name.to_string(), v));
    }
    match status {
        Some(s) => Ok((s, values)),
        None => err(text.lines().count(), "empty solution file"),
    }
}
