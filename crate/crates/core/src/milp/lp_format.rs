//! LP-file text export and import.
//!
//! The dialect is the common CPLEX-style subset: `Minimize`, `Subject To`,
//! `Bounds`, `Binaries`, `End`. Every variable appears in `Bounds`, in model
//! order, so that a re-import reproduces the same column order. Branch
//! priorities travel as `\ priority <name> <p>` comment lines.

use std::fmt::Write as _;

use thiserror::Error;

use super::model::{MilpModel, ModelError, Sense, VarKind};

#[derive(Debug, Error)]
pub enum LpFormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn num(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        v.to_string()
    }
}

fn write_terms(out: &mut String, model: &MilpModel, terms: &[(usize, f64)]) {
    for (k, &(j, c)) in terms.iter().enumerate() {
        let name = &model.var(j).name;
        if k == 0 {
            let _ = write!(out, " {} {}", num(c), name);
        } else if c < 0.0 {
            let _ = write!(out, " - {} {}", num(-c), name);
        } else {
            let _ = write!(out, " + {} {}", num(c), name);
        }
    }
}

/// Renders the model in LP text form.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    for v in model.vars() {
        if v.priority != 0 {
            let _ = writeln!(out, "\\ priority {} {}", v.name, v.priority);
        }
    }
    out.push_str("Minimize\n obj:");
    write_terms(&mut out, model, model.objective());
    if model.objective_constant() != 0.0 {
        let c = model.objective_constant();
        let _ = write!(out, " {} {}", if c < 0.0 { "-" } else { "+" }, num(c.abs()));
    }
    out.push_str("\nSubject To\n");
    for c in model.constraints() {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, model, &c.coeffs);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), num(c.rhs));
    }
    out.push_str("Bounds\n");
    for v in model.vars() {
        if v.lb == f64::NEG_INFINITY && v.ub == f64::INFINITY {
            let _ = writeln!(out, " {} free", v.name);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", num(v.lb), v.name, num(v.ub));
        }
    }
    out.push_str("Binaries\n");
    for v in model.vars().iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Head,
    Objective,
    Rows,
    Bounds,
    Binaries,
    Done,
}

fn parse_num(tok: &str, line: usize) -> Result<f64, LpFormatError> {
    match tok.to_ascii_lowercase().as_str() {
        "+inf" | "inf" | "+infinity" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|_| LpFormatError::Syntax { line, msg: format!("bad number `{tok}`") }),
    }
}

fn is_num(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

/// Parses `[name:] {[+|-] [coef] var}* [sense rhs]`.
struct Linear {
    name: Option<String>,
    terms: Vec<(String, f64)>,
    constant: f64,
    cmp: Option<(Sense, f64)>,
}

fn parse_linear(text: &str, line: usize) -> Result<Linear, LpFormatError> {
    let err = |msg: String| LpFormatError::Syntax { line, msg };
    let mut toks: Vec<&str> = text.split_whitespace().collect();
    let mut name = None;
    if let Some(first) = toks.first() {
        if let Some(n) = first.strip_suffix(':') {
            name = Some(n.to_string());
            toks.remove(0);
        }
    }
    let mut terms = Vec::new();
    let mut constant = 0.0;
    let mut cmp = None;
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    let mut k = 0;
    while k < toks.len() {
        let t = toks[k];
        match t {
            "+" => sign = 1.0,
            "-" => sign = -sign,
            "<=" | "=<" | "<" | ">=" | "=>" | ">" | "=" => {
                if coef.is_some() {
                    constant += sign * coef.take().unwrap();
                }
                let sense = match t {
                    "<=" | "=<" | "<" => Sense::Le,
                    "=" => Sense::Eq,
                    _ => Sense::Ge,
                };
                let rhs = toks.get(k + 1).ok_or_else(|| err("missing right-hand side".into()))?;
                if k + 2 != toks.len() {
                    return Err(err("trailing tokens after right-hand side".into()));
                }
                cmp = Some((sense, parse_num(rhs, line)?));
                break;
            }
            _ if is_num(t) => {
                if let Some(c) = coef.replace(t.parse().unwrap()) {
                    return Err(err(format!("two numbers in a row near `{c}`")));
                }
            }
            _ => {
                let (t, s) = match t.strip_prefix('-') {
                    Some(rest) => (rest, -1.0),
                    None => (t.strip_prefix('+').unwrap_or(t), 1.0),
                };
                let c = coef.take().unwrap_or(1.0);
                terms.push((t.to_string(), s * sign * c));
                sign = 1.0;
            }
        }
        k += 1;
    }
    if let Some(c) = coef {
        constant += sign * c;
    }
    Ok(Linear { name, terms, constant, cmp })
}

/// Parses LP text produced by [`export_lp`] (and the same dialect by hand).
pub fn import_lp(text: &str) -> Result<MilpModel, LpFormatError> {
    let mut section = Section::Head;
    let mut priorities: Vec<(String, i32)> = Vec::new();
    let mut objective: Option<Linear> = None;
    let mut rows: Vec<(usize, Linear)> = Vec::new();
    let mut bounds: Vec<(String, f64, f64)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    // Logical statements may span lines; buffer until the next keyword or label.
    let mut pending: Option<(usize, String)> = None;

    let flush = |section: Section,
                 pending: &mut Option<(usize, String)>,
                 objective: &mut Option<Linear>,
                 rows: &mut Vec<(usize, Linear)>|
     -> Result<(), LpFormatError> {
        if let Some((line, text)) = pending.take() {
            let lin = parse_linear(&text, line)?;
            match section {
                Section::Objective => *objective = Some(lin),
                Section::Rows => rows.push((line, lin)),
                _ => {}
            }
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('\\') {
            let parts: Vec<&str> = c.split_whitespace().collect();
            if parts.len() == 3 && parts[0] == "priority" {
                let p = parts[2].parse().map_err(|_| LpFormatError::Syntax { line, msg: "bad priority".into() })?;
                priorities.push((parts[1].to_string(), p));
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let lower = trimmed.to_ascii_lowercase();
        let next = match lower.as_str() {
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." | "such that" => Some(Section::Rows),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" | "bin" => Some(Section::Binaries),
            "end" => Some(Section::Done),
            _ => None,
        };
        if let Some(s) = next {
            flush(section, &mut pending, &mut objective, &mut rows)?;
            section = s;
            continue;
        }
        match section {
            Section::Head | Section::Done => {
                return Err(LpFormatError::Syntax { line, msg: format!("unexpected `{trimmed}`") });
            }
            Section::Objective | Section::Rows => {
                let starts_label = trimmed.split_whitespace().next().is_some_and(|t| t.ends_with(':'));
                let complete = pending.as_ref().is_some_and(|(_, b)| {
                    section == Section::Rows && b.split_whitespace().any(|t| matches!(t, "<=" | "=<" | "<" | ">=" | "=>" | ">" | "="))
                });
                if starts_label || complete || pending.is_none() {
                    flush(section, &mut pending, &mut objective, &mut rows)?;
                    pending = Some((line, trimmed.to_string()));
                } else if let Some((_, buf)) = pending.as_mut() {
                    buf.push(' ');
                    buf.push_str(trimmed);
                }
            }
            Section::Bounds => {
                let t: Vec<&str> = trimmed.split_whitespace().collect();
                let b = match t.as_slice() {
                    [n, f] if f.eq_ignore_ascii_case("free") => (n.to_string(), f64::NEG_INFINITY, f64::INFINITY),
                    [lo, "<=", n, "<=", hi] => (n.to_string(), parse_num(lo, line)?, parse_num(hi, line)?),
                    [n, "=", v] => {
                        let v = parse_num(v, line)?;
                        (n.to_string(), v, v)
                    }
                    _ => return Err(LpFormatError::Syntax { line, msg: format!("unsupported bound `{trimmed}`") }),
                };
                bounds.push(b);
            }
            Section::Binaries => binaries.extend(trimmed.split_whitespace().map(str::to_string)),
        }
    }
    flush(section, &mut pending, &mut objective, &mut rows)?;
    if section != Section::Done {
        return Err(LpFormatError::Syntax { line: text.lines().count(), msg: "missing End".into() });
    }

    let mut model = MilpModel::new();
    for (name, lb, ub) in bounds {
        let kind = if binaries.contains(&name) { VarKind::Binary } else { VarKind::Continuous };
        model.add_var(name, lb, ub, kind)?;
    }
    for b in &binaries {
        if model.var_index(b).is_none() {
            model.add_binary(b.clone())?;
        }
    }
    let resolve = |model: &mut MilpModel, terms: &[(String, f64)]| -> Result<Vec<(usize, f64)>, LpFormatError> {
        terms
            .iter()
            .map(|(n, c)| {
                let j = match model.var_index(n) {
                    Some(j) => j,
                    None => model.add_var(n.clone(), 0.0, f64::INFINITY, VarKind::Continuous)?,
                };
                Ok((j, *c))
            })
            .collect()
    };
    let mut unnamed = 0;
    for (line, lin) in rows {
        let (sense, rhs) = lin.cmp.ok_or(LpFormatError::Syntax { line, msg: "row without sense".into() })?;
        let coeffs = resolve(&mut model, &lin.terms)?;
        let name = lin.name.unwrap_or_else(|| {
            unnamed += 1;
            format!("R{unnamed}")
        });
        model.add_constraint(name, coeffs, sense, rhs - lin.constant)?;
    }
    if let Some(obj) = objective {
        let terms = resolve(&mut model, &obj.terms)?;
        model.set_objective(terms, obj.constant)?;
    }
    for (name, p) in priorities {
        let j = model.var_index(&name).ok_or(ModelError::UnknownVariable(name))?;
        model.set_priority(j, p);
    }
    Ok(model)
}
