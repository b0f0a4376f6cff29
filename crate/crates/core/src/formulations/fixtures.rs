//! Small textbook models used to illustrate how the ground set affects
//! formulation strength.

use crate::embedding::Disjunction;
use crate::milp::{LinExpr, MilpModel, NamedRow, VarKind};

fn model(vars: &[(&str, f64, f64, VarKind)], rows: Vec<NamedRow>, objective: LinExpr) -> MilpModel {
    let mut m = MilpModel::new();
    for (n, lb, ub, k) in vars {
        m.add_var(*n, *lb, *ub, *k).expect("fixture variable");
    }
    for r in &rows {
        m.add_row(r).expect("fixture row");
    }
    m.set_objective_expr(&objective).expect("fixture objective");
    m
}

fn m2(strong: bool) -> MilpModel {
    let v = LinExpr::var;
    let k = if strong { 1.5 } else { 2.0 };
    let rows = vec![
        NamedRow::le("upper", v("x2"), LinExpr::constant(3.0).term(-2.0, "v1").term(-1.0, "x1")),
        NamedRow::le("x1_lo", LinExpr::constant(1.0).term(-1.0, "v1"), v("x1")),
        NamedRow::le("x1_hi", v("x1"), LinExpr::constant(2.0).term(-1.0, "v1")),
        NamedRow::le("split", v("x2").plus(1.0), v("x1").term(k, "v1")),
        NamedRow::eq("code", v("v1").term(1.0, "v2"), LinExpr::constant(1.0)),
        NamedRow::le("common", v("x2"), v("x1").plus(0.5)),
    ];
    let vars = [
        ("x1", 0.0, 2.0, VarKind::Continuous),
        ("x2", 0.0, 2.0, VarKind::Continuous),
        ("v1", 0.0, 1.0, VarKind::Binary),
        ("v2", 0.0, 1.0, VarKind::Binary),
    ];
    model(&vars, rows, LinExpr::new())
}

/// Two-branch model with the common row added after the formulation step.
pub fn m2_weak() -> MilpModel {
    m2(false)
}

/// Same model built with the common row inside the ground set, which
/// strengthens the `split` row to `1 + x2 <= x1 + 3/2 v1`.
pub fn m2_strong() -> MilpModel {
    m2(true)
}

fn m3(strong: bool) -> MilpModel {
    let v = LinExpr::var;
    let mut rows = vec![
        NamedRow::le("x_lo", LinExpr::constant(3.0).term(-3.0, "v1"), v("x1")),
        NamedRow::le("x_hi", v("x1"), LinExpr::constant(4.0).term(-3.0, "v1")),
        NamedRow::eq("code", v("v1").term(1.0, "v2"), LinExpr::constant(1.0)),
    ];
    if strong {
        rows.push(NamedRow::le("abs_pos", v("x1").plus(-2.0).term(2.0, "v1"), v("y1")));
        rows.push(NamedRow::le("abs_neg", LinExpr::constant(4.0).term(-1.0, "x1").term(-2.0, "v1"), v("y1")));
    } else {
        rows.push(NamedRow::le("abs_pos", v("x1").plus(-2.0), v("y1")));
        rows.push(NamedRow::le("abs_neg", LinExpr::constant(2.0).term(-1.0, "x1"), v("y1")));
    }
    let vars = [
        ("x1", 0.0, 4.0, VarKind::Continuous),
        ("y1", 0.0, 10.0, VarKind::Continuous),
        ("v1", 0.0, 1.0, VarKind::Binary),
        ("v2", 0.0, 1.0, VarKind::Binary),
    ];
    model(&vars, rows, v("y1"))
}

/// `min |x1 - 2|` over two intervals, absolute value linearized afterwards.
pub fn m3_weak() -> MilpModel {
    m3(false)
}

/// Same problem with the linearization inside the ground set.
pub fn m3_strong() -> MilpModel {
    m3(true)
}

/// Two overlapping branches `x1 + x2 <= 1` or `x2 <= x1`.
pub fn d1_a() -> Disjunction {
    let v = LinExpr::var;
    Disjunction {
        branches: vec![
            vec![NamedRow::le("a1", v("x1").term(1.0, "x2"), LinExpr::constant(1.0))],
            vec![NamedRow::le("a2", v("x2"), v("x1"))],
        ],
    }
}

/// Refinement of [`d1_a`] into three branches with the same union.
pub fn d1_b() -> Disjunction {
    let v = LinExpr::var;
    let below = || NamedRow::le("below", v("x1").term(1.0, "x2"), LinExpr::constant(1.0));
    Disjunction {
        branches: vec![
            vec![below(), NamedRow::le("left", v("x1"), v("x2"))],
            vec![below(), NamedRow::le("right", v("x2"), v("x1"))],
            vec![NamedRow::ge("above", v("x1").term(1.0, "x2"), LinExpr::constant(1.0)), NamedRow::le("right", v("x2"), v("x1"))],
        ],
    }
}
