use std::collections::HashMap;

use super::{pairwise_model, AssemblyOptions, FormulationError, PairwiseKind};
use crate::cuts::{select_cut_subset, symmetry_breaking, translate_cut};
use crate::instance::{derive_bounds, Axis, FlpInstance};
use crate::milp::{LinExpr, MilpModel, ModelError, NamedRow, Sense, VarKind};
use crate::names::{self, c, d, l};

/// Abscissae of the area tangents: `k` points geometrically spaced on
/// `[lo, hi]`, duplicates removed. A single point sits at the geometric mean.
pub fn tangent_points(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let mut pts: Vec<f64> = match k {
        0 => Vec::new(),
        1 => vec![(lo * hi).sqrt()],
        _ => {
            let r = (hi / lo).ln() / (k - 1) as f64;
            (0..k).map(|t| if t + 1 == k { hi } else { lo * (r * t as f64).exp() }).collect()
        }
    };
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    pts
}

/// Tangent rows `(alpha / x^2) l^x + l^y >= 2 alpha / x` to `l^x l^y = alpha`
/// for box `i`.
pub fn area_outer_approx(i: usize, area: f64, lo: f64, hi: f64, k: usize) -> Vec<NamedRow> {
    tangent_points(lo, hi, k)
        .into_iter()
        .enumerate()
        .map(|(t, x)| {
            NamedRow::ge(
                format!("area_{}_{}", i + 1, t + 1),
                LinExpr::new().term(area / (x * x), l(Axis::X, i)).term(1.0, l(Axis::Y, i)),
                LinExpr::constant(2.0 * area / x),
            )
        })
        .collect()
}

fn w_hat(t: usize, p: usize, q: usize) -> LinExpr {
    if p < q {
        LinExpr::var(names::indexed("w", t, p, q))
    } else {
        LinExpr::constant(1.0).term(-1.0, names::indexed("w", t, q, p))
    }
}

/// Global sequence-pair rows `w^{i,j}_t + w^{j,k}_t + w^{k,i}_t <= 2` over
/// all ordered triples of distinct boxes, with `w^{p,q} = 1 - w^{q,p}` for
/// `p > q`.
pub fn sequence_pair_globals(n: usize) -> Vec<NamedRow> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                for t in 1..=2 {
                    let mut e = w_hat(t, i, j);
                    e.add_scaled(1.0, &w_hat(t, j, k));
                    e.add_scaled(1.0, &w_hat(t, k, i));
                    out.push(NamedRow::le(format!("sp{}_{}_{}_{}", t, i + 1, j + 1, k + 1), e, LinExpr::constant(2.0)));
                }
            }
        }
    }
    out
}

/// Branching priority per binary: pairs with larger cost get larger
/// priority; equal costs share a priority.
pub fn branch_priorities(inst: &FlpInstance, kind: PairwiseKind) -> Vec<(String, i32)> {
    let pairs = inst.pairs();
    let mut out = Vec::new();
    for &(i, j) in &pairs {
        let p = inst.cost(i, j);
        let rank = 1 + pairs.iter().filter(|&&(a, b)| inst.cost(a, b) < p).count() as i32;
        for v in kind.code_vars(i, j) {
            out.push((v, rank));
        }
    }
    out
}

struct Builder {
    model: MilpModel,
    rows: HashMap<String, NamedRow>,
}

impl Builder {
    fn row(&mut self, r: NamedRow) -> Result<(), FormulationError> {
        if let Some(old) = self.rows.get(&r.name) {
            if *old == r {
                return Ok(());
            }
            return Err(ModelError::DuplicateConstraint(r.name).into());
        }
        self.model.add_row(&r)?;
        self.rows.insert(r.name.clone(), r);
        Ok(())
    }
}

/// Builds the N-box model: one `(c, l)` block per box, the pairwise
/// formulation of `opts.kind` on every pair, the linearized objective, area
/// tangents, and the requested cuts and symmetry rows.
pub fn assemble_nbox(inst: &FlpInstance, opts: &AssemblyOptions) -> Result<MilpModel, FormulationError> {
    inst.validate()?;
    if opts.kind == PairwiseKind::Extended && opts.cuts != super::CutLevel::None {
        return Err(FormulationError::CutsUnsupported(opts.kind, opts.cuts));
    }
    let bounds = derive_bounds(inst)?;
    let floor = inst.floor;
    let n = inst.n();
    let mut b = Builder { model: MilpModel::new(), rows: HashMap::new() };
    for i in 0..n {
        for s in Axis::BOTH {
            b.model.add_var(c(s, i), 0.0, floor[s.idx()], VarKind::Continuous)?;
            b.model.add_var(l(s, i), bounds.lb(i, s), bounds.ub(i, s), VarKind::Continuous)?;
        }
    }
    let mut objective = LinExpr::new();
    for (i, j) in inst.pairs() {
        for s in Axis::BOTH {
            b.model.add_var(d(s, i, j), 0.0, floor[s.idx()], VarKind::Continuous)?;
            let tag = format!("{}_{}", s, names::pair(i, j));
            b.row(NamedRow::ge(format!("obj_pos_{tag}"), LinExpr::var(d(s, i, j)), LinExpr::var(c(s, i)).term(-1.0, c(s, j))))?;
            b.row(NamedRow::ge(format!("obj_neg_{tag}"), LinExpr::var(d(s, i, j)), LinExpr::var(c(s, j)).term(-1.0, c(s, i))))?;
            let p = inst.cost(i, j);
            if p != 0.0 {
                objective.add_term(p, d(s, i, j));
            }
        }
    }
    for i in 0..n {
        for s in Axis::BOTH {
            let len = floor[s.idx()];
            b.row(NamedRow::ge(format!("sitb_lo_{}_{}", s, i + 1), LinExpr::var(c(s, i)).term(-0.5, l(s, i)), LinExpr::new()))?;
            b.row(NamedRow::le(format!("sitb_hi_{}_{}", s, i + 1), LinExpr::var(c(s, i)).term(0.5, l(s, i)), LinExpr::constant(len)))?;
        }
    }
    for (i, j) in inst.pairs() {
        let frag = pairwise_model(opts.kind, i, j, &bounds, floor, opts.sitb)?;
        for (name, lo, hi, kind) in &frag.vars {
            b.model.merge_var(name, *lo, *hi, *kind)?;
        }
        for r in frag.rows {
            b.row(r)?;
        }
    }
    for (i, bx) in inst.boxes.iter().enumerate() {
        for r in area_outer_approx(i, bx.area, bounds.lb(i, Axis::X), bounds.ub(i, Axis::X), opts.area_k) {
            b.row(r)?;
        }
    }
    if opts.kind == PairwiseKind::SequencePair {
        for r in sequence_pair_globals(n) {
            b.row(r)?;
        }
    }
    for cut in select_cut_subset(inst, &bounds, opts.cuts, opts.kind) {
        b.row(translate_cut(&cut, opts.kind)?)?;
    }
    if opts.symmetry {
        if let Some(sym) = symmetry_breaking(inst, &bounds) {
            for cut in &sym.cuts {
                let row = translate_cut(cut, opts.kind)?;
                if let Some(j) = as_fixing(&b.model, &row) {
                    let v = b.model.var(j);
                    let lb = v.lb;
                    b.model.set_bounds(j, lb, 0.0)?;
                } else {
                    b.row(row)?;
                }
            }
        }
    }
    b.model.set_objective_expr(&objective)?;
    for (v, p) in branch_priorities(inst, opts.kind) {
        if let Some(j) = b.model.var_index(&v) {
            b.model.set_priority(j, p);
        }
    }
    Ok(b.model)
}

/// A row `a x <= 0` with `a > 0` on a single nonnegative variable fixes it to zero.
fn as_fixing(model: &MilpModel, row: &NamedRow) -> Option<usize> {
    if row.sense != Sense::Le || row.rhs != 0.0 || row.terms.len() != 1 || row.terms[0].1 <= 0.0 {
        return None;
    }
    let j = model.var_index(&row.terms[0].0)?;
    (model.var(j).lb == 0.0).then_some(j)
}
