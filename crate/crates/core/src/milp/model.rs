use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Integrality class of a model variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Continuous,
    Binary,
}

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    /// Signed violation of `activity sense rhs`; positive means violated.
    pub fn violation(self, activity: f64, rhs: f64) -> f64 {
        match self {
            Sense::Le => activity - rhs,
            Sense::Ge => rhs - activity,
            Sense::Eq => (activity - rhs).abs(),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate constraint name `{0}`")]
    DuplicateConstraint(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("variable `{name}` has empty domain [{lb}, {ub}]")]
    EmptyDomain { name: String, lb: f64, ub: f64 },
    #[error("binary variable `{0}` has bounds outside [0, 1]")]
    BinaryBounds(String),
    #[error("variable `{0}` redeclared with a different kind")]
    KindMismatch(String),
    #[error("non-finite coefficient in `{0}`")]
    NonFinite(String),
    #[error("constant row `{0}` is infeasible")]
    InfeasibleConstantRow(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub kind: VarKind,
    pub priority: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// Linear expression over variable names with a constant term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(String, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        LinExpr { terms: Vec::new(), constant: c }
    }

    pub fn var(name: impl Into<String>) -> Self {
        LinExpr { terms: vec![(name.into(), 1.0)], constant: 0.0 }
    }

    pub fn term(mut self, coef: f64, name: impl Into<String>) -> Self {
        self.add_term(coef, name);
        self
    }

    pub fn plus(mut self, c: f64) -> Self {
        self.constant += c;
        self
    }

    pub fn add_term(&mut self, coef: f64, name: impl Into<String>) {
        let name = name.into();
        if let Some(t) = self.terms.iter_mut().find(|t| t.0 == name) {
            t.1 += coef;
        } else {
            self.terms.push((name, coef));
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: f64, other: &LinExpr) {
        for (n, c) in &other.terms {
            self.add_term(scale * c, n.clone());
        }
        self.constant += scale * other.constant;
    }

    pub fn scaled(&self, scale: f64) -> LinExpr {
        let mut e = LinExpr::new();
        e.add_scaled(scale, self);
        e
    }

    pub fn coef(&self, name: &str) -> f64 {
        self.terms.iter().filter(|t| t.0 == name).map(|t| t.1).sum()
    }

    pub fn eval(&self, value: impl Fn(&str) -> f64) -> f64 {
        self.constant + self.terms.iter().map(|(n, c)| c * value(n)).sum::<f64>()
    }

    /// Drops terms whose coefficient magnitude is at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|t| t.1.abs() > tol);
    }
}

/// A constraint expressed over names: `expr sense rhs` with the constant
/// of `expr` already folded into `rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedRow {
    pub name: String,
    pub terms: Vec<(String, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl NamedRow {
    /// Builds `lhs sense rhs` from two expressions.
    pub fn new(name: impl Into<String>, lhs: LinExpr, sense: Sense, rhs: LinExpr) -> Self {
        let mut e = lhs;
        e.add_scaled(-1.0, &rhs);
        e.prune(0.0);
        NamedRow { name: name.into(), rhs: -e.constant, terms: e.terms, sense }
    }

    pub fn le(name: impl Into<String>, lhs: LinExpr, rhs: LinExpr) -> Self {
        Self::new(name, lhs, Sense::Le, rhs)
    }

    pub fn ge(name: impl Into<String>, lhs: LinExpr, rhs: LinExpr) -> Self {
        Self::new(name, lhs, Sense::Ge, rhs)
    }

    pub fn eq(name: impl Into<String>, lhs: LinExpr, rhs: LinExpr) -> Self {
        Self::new(name, lhs, Sense::Eq, rhs)
    }

    pub fn coef(&self, var: &str) -> f64 {
        self.terms.iter().filter(|t| t.0 == var).map(|t| t.1).sum()
    }

    pub fn activity(&self, value: impl Fn(&str) -> f64) -> f64 {
        self.terms.iter().map(|(n, c)| c * value(n)).sum()
    }

    pub fn violation(&self, value: impl Fn(&str) -> f64) -> f64 {
        self.sense.violation(self.activity(value), self.rhs)
    }

    /// Same row rewritten in `<=` form (equalities are left unchanged).
    pub fn to_le(&self) -> NamedRow {
        match self.sense {
            Sense::Ge => NamedRow {
                name: self.name.clone(),
                terms: self.terms.iter().map(|(n, c)| (n.clone(), -c)).collect(),
                sense: Sense::Le,
                rhs: -self.rhs,
            },
            _ => self.clone(),
        }
    }
}

/// Solver-agnostic minimization model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    row_names: HashMap<String, usize>,
    objective: Vec<(usize, f64)>,
    obj_constant: f64,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, j: usize) -> &Variable {
        &self.vars[j]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, f64)] {
        &self.objective
    }

    pub fn objective_constant(&self) -> f64 {
        self.obj_constant
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraint_by_name(&self, name: &str) -> Option<&Constraint> {
        self.row_names.get(name).map(|&r| &self.constraints[r])
    }

    pub fn binaries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vars.len()).filter(|&j| self.vars[j].kind == VarKind::Binary)
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64, kind: VarKind) -> Result<usize, ModelError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(ModelError::DuplicateVariable(name));
        }
        check_domain(&name, lb, ub, kind)?;
        let j = self.vars.len();
        self.index.insert(name.clone(), j);
        self.vars.push(Variable { name, lb, ub, kind, priority: 0 });
        Ok(j)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<usize, ModelError> {
        self.add_var(name, 0.0, 1.0, VarKind::Binary)
    }

    /// Declares a variable, or intersects bounds with an existing one.
    pub fn merge_var(&mut self, name: &str, lb: f64, ub: f64, kind: VarKind) -> Result<usize, ModelError> {
        match self.var_index(name) {
            None => self.add_var(name, lb, ub, kind),
            Some(j) => {
                let v = &mut self.vars[j];
                if v.kind != kind {
                    return Err(ModelError::KindMismatch(name.to_string()));
                }
                let (lo, hi) = (v.lb.max(lb), v.ub.min(ub));
                check_domain(name, lo, hi, kind)?;
                v.lb = lo;
                v.ub = hi;
                Ok(j)
            }
        }
    }

    pub fn set_bounds(&mut self, j: usize, lb: f64, ub: f64) -> Result<(), ModelError> {
        let v = self.vars.get_mut(j).ok_or(ModelError::IndexOutOfRange(j))?;
        check_domain(&v.name, lb, ub, v.kind)?;
        v.lb = lb;
        v.ub = ub;
        Ok(())
    }

    pub fn set_priority(&mut self, j: usize, priority: i32) {
        self.vars[j].priority = priority;
    }

    /// Adds an index-based row. Duplicate indices are summed and zero
    /// coefficients dropped; an empty row is checked and discarded.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<Option<usize>, ModelError> {
        let name = name.into();
        if self.row_names.contains_key(&name) {
            return Err(ModelError::DuplicateConstraint(name));
        }
        if !rhs.is_finite() {
            return Err(ModelError::NonFinite(name));
        }
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            if j >= self.vars.len() {
                return Err(ModelError::IndexOutOfRange(j));
            }
            if !a.is_finite() {
                return Err(ModelError::NonFinite(name));
            }
            match merged.iter_mut().find(|t| t.0 == j) {
                Some(t) => t.1 += a,
                None => merged.push((j, a)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        if merged.is_empty() {
            if sense.violation(0.0, rhs) > 1e-9 {
                return Err(ModelError::InfeasibleConstantRow(name));
            }
            return Ok(None);
        }
        let r = self.constraints.len();
        self.row_names.insert(name.clone(), r);
        self.constraints.push(Constraint { name, coeffs: merged, sense, rhs });
        Ok(Some(r))
    }

    /// Adds a name-based row; every referenced variable must exist.
    pub fn add_row(&mut self, row: &NamedRow) -> Result<Option<usize>, ModelError> {
        let coeffs = row
            .terms
            .iter()
            .map(|(n, c)| self.var_index(n).map(|j| (j, *c)).ok_or_else(|| ModelError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.add_constraint(row.name.clone(), coeffs, row.sense, row.rhs)
    }

    pub fn set_objective(&mut self, terms: Vec<(usize, f64)>, constant: f64) -> Result<(), ModelError> {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (j, c) in terms {
            if j >= self.vars.len() {
                return Err(ModelError::IndexOutOfRange(j));
            }
            match merged.iter_mut().find(|t| t.0 == j) {
                Some(t) => t.1 += c,
                None => merged.push((j, c)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        self.objective = merged;
        self.obj_constant = constant;
        Ok(())
    }

    pub fn set_objective_expr(&mut self, expr: &LinExpr) -> Result<(), ModelError> {
        let terms = expr
            .terms
            .iter()
            .map(|(n, c)| self.var_index(n).map(|j| (j, *c)).ok_or_else(|| ModelError::UnknownVariable(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        self.set_objective(terms, expr.constant)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.obj_constant + self.objective.iter().map(|&(j, c)| c * x[j]).sum::<f64>()
    }

    /// Largest bound or row violation at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (v, &xj) in self.vars.iter().zip(x) {
            worst = worst.max(v.lb - xj).max(xj - v.ub);
        }
        for c in &self.constraints {
            worst = worst.max(c.sense.violation(c.activity(x), c.rhs));
        }
        worst
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.vars.len() && self.max_violation(x) <= tol
    }

    pub fn is_integral(&self, x: &[f64], tol: f64) -> bool {
        self.binaries().all(|j| (x[j] - x[j].round()).abs() <= tol)
    }

    /// Value lookup by name for a point of this model.
    pub fn value<'a>(&'a self, x: &'a [f64]) -> impl Fn(&str) -> f64 + 'a {
        move |name| self.var_index(name).map(|j| x[j]).unwrap_or_else(|| panic!("unknown variable `{name}`"))
    }

    /// Checks every structural invariant of the model.
    pub fn validate(&self) -> Result<(), ModelError> {
        for (j, v) in self.vars.iter().enumerate() {
            check_domain(&v.name, v.lb, v.ub, v.kind)?;
            if self.index.get(&v.name) != Some(&j) {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
        }
        for c in &self.constraints {
            if c.coeffs.iter().any(|&(j, _)| j >= self.vars.len()) {
                return Err(ModelError::UnknownVariable(c.name.clone()));
            }
        }
        Ok(())
    }

    /// Copy with every binary relaxed to a continuous variable.
    pub fn relaxed(&self) -> MilpModel {
        let mut m = self.clone();
        for v in &mut m.vars {
            v.kind = VarKind::Continuous;
        }
        m
    }
}

fn check_domain(name: &str, lb: f64, ub: f64, kind: VarKind) -> Result<(), ModelError> {
    if lb.is_nan() || ub.is_nan() || lb > ub || lb == f64::INFINITY || ub == f64::NEG_INFINITY {
        return Err(ModelError::EmptyDomain { name: name.to_string(), lb, ub });
    }
    if kind == VarKind::Binary && (lb < 0.0 || ub > 1.0) {
        return Err(ModelError::BinaryBounds(name.to_string()));
    }
    Ok(())
}
