use super::OracleError;
use crate::embedding::Disjunction;
use crate::formulations::area_outer_approx;
use crate::instance::{derive_bounds, Axis, FlpInstance, Layout};
use crate::milp::{solve_lp, LinExpr, LpStatus, MilpModel, NamedRow, VarKind};
use crate::names::{c, d, l};

pub const MAX_BOXES: usize = 4;
pub const MAX_BOXES_D8: usize = 3;

#[derive(Debug, Clone)]
pub struct BruteForce {
    pub value: f64,
    pub layout: Layout,
    /// Chosen branch index per pair, pairs in lexicographic order.
    pub branches: Vec<usize>,
    /// Number of LPs solved.
    pub lps: usize,
}

fn base_model(inst: &FlpInstance, area_k: usize) -> Result<MilpModel, OracleError> {
    let bounds = derive_bounds(inst)?;
    let mut m = MilpModel::new();
    for i in 0..inst.n() {
        for s in Axis::BOTH {
            let len = inst.floor_len(s);
            m.add_var(c(s, i), 0.0, len, VarKind::Continuous)?;
            m.add_var(l(s, i), bounds.lb(i, s), bounds.ub(i, s), VarKind::Continuous)?;
            m.add_row(&NamedRow::le(format!("lo_{s}_{i}"), LinExpr::new().term(0.5, l(s, i)), LinExpr::var(c(s, i))))?;
            m.add_row(&NamedRow::le(format!("hi_{s}_{i}"), LinExpr::var(c(s, i)).term(0.5, l(s, i)), LinExpr::constant(len)))?;
        }
    }
    let mut obj = LinExpr::new();
    for (i, j) in inst.pairs() {
        for s in Axis::BOTH {
            m.add_var(d(s, i, j), 0.0, f64::INFINITY, VarKind::Continuous)?;
            let diff = LinExpr::var(c(s, i)).term(-1.0, c(s, j));
            m.add_row(&NamedRow::ge(format!("dp_{s}_{i}_{j}"), LinExpr::var(d(s, i, j)), diff.clone()))?;
            m.add_row(&NamedRow::ge(format!("dn_{s}_{i}_{j}"), LinExpr::var(d(s, i, j)), diff.scaled(-1.0)))?;
            obj.add_term(inst.cost(i, j), d(s, i, j));
        }
    }
    for (i, b) in inst.boxes.iter().enumerate() {
        for r in area_outer_approx(i, b.area, bounds.lb(i, Axis::X), bounds.ub(i, Axis::X), area_k) {
            m.add_row(&r)?;
        }
    }
    m.set_objective_expr(&obj)?;
    Ok(m)
}

/// Reads `(c, l, d)` for `n` boxes out of a model point by variable name.
pub fn layout_from_point(model: &MilpModel, x: &[f64], n: usize) -> Layout {
    let val = model.value(x);
    let mut lay = Layout::new(n);
    for i in 0..n {
        for s in Axis::BOTH {
            lay.centers[i][s.idx()] = val(&c(s, i));
            lay.widths[i][s.idx()] = val(&l(s, i));
        }
        for j in i + 1..n {
            if model.var_index(&d(Axis::X, i, j)).is_some() {
                lay.dist.insert((i, j), [val(&d(Axis::X, i, j)), val(&d(Axis::Y, i, j))]);
            }
        }
    }
    lay
}

fn enumerate(inst: &FlpInstance, area_k: usize, disj: impl Fn(usize, usize) -> Disjunction) -> Result<BruteForce, OracleError> {
    let base = base_model(inst, area_k)?;
    let pairs = inst.pairs();
    let options: Vec<Disjunction> = pairs.iter().map(|&(i, j)| disj(i, j)).collect();
    let k = options.first().map_or(1, |o| o.len());
    let total = k.pow(pairs.len() as u32);
    let mut best: Option<BruteForce> = None;
    let mut choice = vec![0usize; pairs.len()];
    for code in 0..total {
        let mut rest = code;
        for slot in choice.iter_mut() {
            *slot = rest % k;
            rest /= k;
        }
        let mut m = base.clone();
        for (t, o) in options.iter().enumerate() {
            for (q, mut r) in o.le_rows(choice[t]).into_iter().enumerate() {
                r.name = format!("branch_{t}_{q}");
                m.add_row(&r)?;
            }
        }
        let sol = solve_lp(&m);
        if sol.status != LpStatus::Optimal {
            continue;
        }
        if best.as_ref().is_none_or(|b| sol.objective < b.value - 1e-12) {
            best = Some(BruteForce {
                value: sol.objective,
                layout: layout_from_point(&m, &sol.x, inst.n()),
                branches: choice.clone(),
                lps: 0,
            });
        }
    }
    let mut b = best.ok_or(OracleError::Infeasible)?;
    b.lps = total;
    Ok(b)
}

/// Minimum over every assignment of one four-way non-overlap branch per
/// pair of the LP with the linearized objective and `area_k` tangents.
pub fn brute_force_optimum(inst: &FlpInstance, area_k: usize) -> Result<BruteForce, OracleError> {
    inst.validate()?;
    if inst.n() > MAX_BOXES {
        return Err(OracleError::TooLarge { n: inst.n(), max: MAX_BOXES });
    }
    enumerate(inst, area_k, Disjunction::d4)
}

/// Same enumeration over the eight-way refined disjunction.
pub fn brute_force_optimum_d8(inst: &FlpInstance, area_k: usize) -> Result<BruteForce, OracleError> {
    inst.validate()?;
    if inst.n() > MAX_BOXES_D8 {
        return Err(OracleError::TooLarge { n: inst.n(), max: MAX_BOXES_D8 });
    }
    enumerate(inst, area_k, Disjunction::d8)
}
