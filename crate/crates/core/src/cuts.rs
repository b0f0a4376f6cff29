//! Valid inequalities for the pairwise and N-box formulations, encoding
//! translation, symmetry breaking and the cut-subset policy.
//!
//! Cuts are generated over refined-unary binaries `z^s_{p,q}` (or over unary
//! binaries `u^s_{p,q}` for the literature families) and rewritten into the
//! binaries of the target formulation with [`translate_cut`].

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formulations::{slot, tight_sitb, CodeFamily, CutLevel, PairwiseKind};
use crate::instance::{Axis, BoxBounds, FlpInstance};
use crate::milp::{LinExpr, NamedRow, Sense};
use crate::names::{self, c, d, l};

const COEF_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("cut `{cut}`: coefficient {coef} on `{var}` is negative, translation needs nonnegative code coefficients")]
    NegativeCoefficient { cut: String, var: String, coef: f64 },
    #[error("cut `{cut}`: code coefficients of pair {pair} use both axes, cannot lift")]
    MixedAxes { cut: String, pair: String },
    #[error("path {0:?} repeats a box")]
    RepeatedBox(Vec<usize>),
    #[error("path {0:?} needs at least one interior box")]
    ShortPath(Vec<usize>),
    #[error("cut `{cut}` is an equality")]
    Equality { cut: String },
}

/// Binaries a cut is stated over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutForm {
    /// Refined-unary binaries `z`.
    Refined,
    /// Unary binaries `u`.
    Unary,
    /// Stated over `z` and valid verbatim for both the refined and the unary encodings.
    Either,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearCut {
    /// Family id plus the pair or path, e.g. `obj3_x_1_2`.
    pub tag: String,
    pub form: CutForm,
    /// The row, named `cut_<tag>`.
    pub row: NamedRow,
}

impl LinearCut {
    fn new(tag: String, form: CutForm, lhs: LinExpr, sense: Sense, rhs: LinExpr) -> Self {
        let row = NamedRow::new(format!("cut_{tag}"), lhs, sense, rhs);
        LinearCut { tag, form, row }
    }

    pub fn family(&self) -> &str {
        self.tag.split('_').next().unwrap_or("")
    }
}

impl fmt::Display for LinearCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.row.name)?;
        for (n, c) in &self.row.terms {
            write!(f, " {c:+} {n}")?;
        }
        write!(f, " {} {}", self.row.sense.symbol(), self.row.rhs)
    }
}

fn z(s: Axis, p: usize, q: usize) -> String {
    names::ordered("z", s, p, q)
}

fn u(s: Axis, p: usize, q: usize) -> String {
    names::ordered("u", s, p, q)
}

/// Upper-bound cuts for the pair `{i, j}`: the four rows
/// `c^s_p + ub^s_q (1 - z^s_{q,p}) >= l^s_p / 2 + l^s_q`, plus the
/// cross-axis rows on `z^r` whenever `L^s < ub^s_p + ub^s_q`.
pub fn ub_cuts(i: usize, j: usize, bounds: &BoxBounds, floor: [f64; 2]) -> Vec<LinearCut> {
    let mut out = Vec::new();
    for s in Axis::BOTH {
        for (p, q) in [(i, j), (j, i)] {
            let ubq = bounds.ub(q, s);
            out.push(LinearCut::new(
                format!("ub1_{}_{}", s, names::pair(p, q)),
                CutForm::Refined,
                LinExpr::var(c(s, p)).plus(ubq).term(-ubq, z(s, q, p)),
                Sense::Ge,
                LinExpr::new().term(0.5, l(s, p)).term(1.0, l(s, q)),
            ));
        }
    }
    for s in Axis::BOTH {
        let len = floor[s.idx()];
        let den = bounds.ub(i, s) + bounds.ub(j, s) - len;
        if den > 0.0 {
            let r = s.other();
            out.push(LinearCut::new(
                format!("ub2_{}_{}", s, names::pair(i, j)),
                CutForm::Either,
                LinExpr::var(z(r, i, j)).term(1.0, z(r, j, i)),
                Sense::Ge,
                LinExpr::new().term(1.0 / den, l(s, i)).term(1.0 / den, l(s, j)).plus(-len / den),
            ));
        }
    }
    out
}

/// Objective cuts on `d^s_{i,j}` for every axis and orientation.
pub fn objective_cuts(i: usize, j: usize, bounds: &BoxBounds, floor: [f64; 2]) -> Vec<LinearCut> {
    let (i, j) = (i.min(j), i.max(j));
    let mut out = Vec::new();
    for s in Axis::BOTH {
        let len = floor[s.idx()];
        let dv = || LinExpr::var(d(s, i, j));
        let both = LinExpr::var(z(s, i, j)).term(1.0, z(s, j, i));
        let mut rhs = LinExpr::new().term(0.5, l(s, i)).term(0.5, l(s, j)).plus(-len);
        rhs.add_scaled(len, &both);
        out.push(LinearCut::new(format!("obj1_{}_{}", s, names::pair(i, j)), CutForm::Refined, dv(), Sense::Ge, rhs));
        for (p, q) in [(i, j), (j, i)] {
            let tag = format!("{}_{}", s, names::pair(p, q));
            let (lbp, lbq) = (bounds.lb(p, s), bounds.lb(q, s));
            let mut rhs = LinExpr::var(c(s, p)).term(-1.0, c(s, q)).term(1.0, l(s, p)).plus(-len).term(len, z(s, p, q));
            rhs.add_scaled(lbq, &both);
            out.push(LinearCut::new(format!("obj2_{tag}"), CutForm::Refined, dv(), Sense::Ge, rhs));
            let rhs = LinExpr::var(c(s, p)).term(-1.0, c(s, q)).term(lbp + lbq, z(s, p, q));
            out.push(LinearCut::new(format!("obj3_{tag}"), CutForm::Refined, dv(), Sense::Ge, rhs));
            let mut rhs = LinExpr::var(l(s, p)).plus(-len);
            rhs.add_scaled(len + lbq, &both);
            out.push(LinearCut::new(format!("obj4_{tag}"), CutForm::Refined, dv().scaled(2.0), Sense::Ge, rhs));
        }
    }
    out
}

/// Chain of boxes `t^0, ..., t^{m+1}` along one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    boxes: Vec<usize>,
    pub axis: Axis,
}

impl Path {
    pub fn new(boxes: Vec<usize>, axis: Axis) -> Result<Self, CutError> {
        if boxes.len() < 3 {
            return Err(CutError::ShortPath(boxes));
        }
        let mut seen = boxes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != boxes.len() {
            return Err(CutError::RepeatedBox(boxes));
        }
        Ok(Path { boxes, axis })
    }

    pub fn boxes(&self) -> &[usize] {
        &self.boxes
    }

    pub fn start(&self) -> usize {
        self.boxes[0]
    }

    pub fn end(&self) -> usize {
        *self.boxes.last().unwrap()
    }

    /// Number of interior boxes.
    pub fn interior(&self) -> usize {
        self.boxes.len() - 2
    }

    /// Sum of interior lower bounds along the path axis.
    pub fn gamma(&self, bounds: &BoxBounds) -> f64 {
        self.boxes[1..self.boxes.len() - 1].iter().map(|&t| bounds.lb(t, self.axis)).sum()
    }

    /// Chain indicator `1 + sum (z_{t^{k-1}, t^k} - 1)`.
    pub fn indicator(&self) -> LinExpr {
        let mut e = LinExpr::constant(1.0);
        for w in self.boxes.windows(2) {
            e.add_term(1.0, z(self.axis, w[0], w[1]));
            e.constant -= 1.0;
        }
        e
    }

    fn label(&self) -> String {
        let ids: Vec<String> = self.boxes.iter().map(|b| (b + 1).to_string()).collect();
        format!("{}_{}", self.axis, ids.join("_"))
    }
}

/// Which multi-box rows to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiboxRows {
    /// Objective rows (first four families).
    Objective,
    /// Position rows (last three families).
    Position,
    All,
}

/// Multi-box cuts for `path`, the pairwise rows tightened by
/// `gamma_P * M_P(z)`.
pub fn multibox_cuts(path: &Path, bounds: &BoxBounds, floor: [f64; 2], which: MultiboxRows) -> Vec<LinearCut> {
    let s = path.axis;
    let (i, j) = (path.start(), path.end());
    let len = floor[s.idx()];
    let g = path.gamma(bounds);
    let m = path.indicator();
    let gm = m.scaled(g);
    let both = LinExpr::var(z(s, i, j)).term(1.0, z(s, j, i));
    let lab = path.label();
    let dv = || LinExpr::var(d(s, i, j));
    let mut out = Vec::new();
    let with = |mut e: LinExpr, extra: &LinExpr, k: f64| {
        e.add_scaled(k, extra);
        e
    };
    if which != MultiboxRows::Position {
        let rhs = with(LinExpr::new().term(0.5, l(s, i)).term(0.5, l(s, j)).plus(-len), &both, len);
        out.push(LinearCut::new(format!("multi1_{lab}"), CutForm::Refined, dv(), Sense::Ge, with(rhs, &gm, 1.0)));
        for (p, q) in [(i, j), (j, i)] {
            let rhs = LinExpr::var(c(s, p)).term(-1.0, c(s, q)).term(1.0, l(s, p)).plus(-len).term(len, z(s, p, q));
            let rhs = with(with(rhs, &both, bounds.lb(q, s)), &gm, 1.0);
            out.push(LinearCut::new(format!("multi2_{lab}_{}", p + 1), CutForm::Refined, dv(), Sense::Ge, rhs));
        }
        let rhs = LinExpr::var(c(s, i)).term(-1.0, c(s, j)).term(bounds.lb(i, s) + bounds.lb(j, s), z(s, i, j));
        out.push(LinearCut::new(format!("multi3_{lab}"), CutForm::Refined, dv(), Sense::Ge, with(rhs, &gm, 1.0)));
        for (p, q) in [(i, j), (j, i)] {
            let rhs = with(LinExpr::var(l(s, p)).plus(-len), &both, len + bounds.lb(q, s));
            out.push(LinearCut::new(format!("multi4_{lab}_{}", p + 1), CutForm::Refined, dv().scaled(2.0), Sense::Ge, with(rhs, &gm, 2.0)));
        }
    }
    if which != MultiboxRows::Objective {
        let lhs = LinExpr::new().term(0.5, l(s, j)).term(bounds.lb(i, s), z(s, i, j));
        out.push(LinearCut::new(format!("multi5_{lab}"), CutForm::Refined, with(lhs, &gm, 1.0), Sense::Le, LinExpr::var(c(s, j))));
        let rhs = LinExpr::constant(len).term(-0.5, l(s, i)).term(-bounds.lb(j, s), z(s, i, j));
        out.push(LinearCut::new(format!("multi6_{lab}"), CutForm::Refined, with(LinExpr::var(c(s, i)), &gm, 1.0), Sense::Le, rhs));
        let lhs = LinExpr::var(c(s, i)).term(0.5, l(s, i));
        let rhs = LinExpr::var(c(s, j)).term(-0.5, l(s, j)).plus(len).term(-len, z(s, i, j));
        out.push(LinearCut::new(format!("multi7_{lab}"), CutForm::Refined, with(lhs, &gm, 1.0), Sense::Le, rhs));
    }
    out
}

/// Cut families from the older unary literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiteratureFamily {
    B2,
    V2,
}

/// B2 or V2 rows for the pair on both axes, stated over `u`. The V2 big-M
/// is `(ub_i + ub_j) / 2`; a smaller one cuts off boxes stacked along the
/// other axis whose widths sum past the floor.
pub fn literature_cuts(i: usize, j: usize, bounds: &BoxBounds, floor: [f64; 2], family: LiteratureFamily) -> Vec<LinearCut> {
    let (i, j) = (i.min(j), i.max(j));
    Axis::BOTH
        .into_iter()
        .map(|s| {
            let both = LinExpr::var(u(s, i, j)).term(1.0, u(s, j, i));
            let tag = format!("{}_{}", s, names::pair(i, j));
            match family {
                LiteratureFamily::B2 => {
                    let k = 0.5 * (bounds.lb(i, s) + bounds.lb(j, s));
                    LinearCut::new(format!("b2_{tag}"), CutForm::Unary, LinExpr::var(d(s, i, j)), Sense::Ge, both.scaled(k))
                }
                LiteratureFamily::V2 => {
                    let k = 0.5 * (bounds.ub(i, s) + bounds.ub(j, s)).min(2.0 * floor[s.idx()]);
                    let mut rhs = LinExpr::new().term(0.5, l(s, i)).term(0.5, l(s, j)).plus(-k);
                    rhs.add_scaled(k, &both);
                    LinearCut::new(format!("v2_{tag}"), CutForm::Unary, LinExpr::var(d(s, i, j)), Sense::Ge, rhs)
                }
            }
        })
        .collect()
}

/// Symmetry-breaking rows for one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryBreaking {
    /// Chosen pair `(p, q)`, `p < q`.
    pub pair: (usize, usize),
    pub cuts: Vec<LinearCut>,
}

/// Pair with the largest cost, ties broken lexicographically. `None` when
/// every cost is zero or `N < 2`.
pub fn symmetry_pair(inst: &FlpInstance) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), f64)> = None;
    for (i, j) in inst.pairs() {
        let p = inst.cost(i, j);
        if p > 0.0 && best.is_none_or(|(_, b)| p > b) {
            best = Some(((i, j), p));
        }
    }
    best.map(|b| b.0)
}

/// Orders the chosen pair along both axes: `c^s_p <= c^s_q`, `z^s_{q,p} <= 0`
/// and a minimum center separation.
pub fn symmetry_breaking(inst: &FlpInstance, bounds: &BoxBounds) -> Option<SymmetryBreaking> {
    let (p, q) = symmetry_pair(inst)?;
    let mut cuts = Vec::new();
    for s in Axis::BOTH {
        cuts.push(LinearCut::new(
            format!("sym_order_{}_{}", s, names::pair(p, q)),
            CutForm::Refined,
            LinExpr::var(c(s, p)),
            Sense::Le,
            LinExpr::var(c(s, q)),
        ));
    }
    for s in Axis::BOTH {
        cuts.push(LinearCut::new(
            format!("sym_fix_{}_{}", s, names::pair(q, p)),
            CutForm::Refined,
            LinExpr::var(z(s, q, p)),
            Sense::Le,
            LinExpr::new(),
        ));
    }
    let sep = Axis::BOTH.map(|s| bounds.lb(p, s) + bounds.lb(q, s));
    let mut lhs = LinExpr::new();
    for s in Axis::BOTH {
        lhs.add_term(1.0, c(s, q));
        lhs.add_term(-1.0, c(s, p));
    }
    cuts.push(LinearCut::new(
        format!("sym_sep_{}", names::pair(p, q)),
        CutForm::Refined,
        lhs,
        Sense::Ge,
        LinExpr::constant(0.5 * sep[0].min(sep[1])),
    ));
    Some(SymmetryBreaking { pair: (p, q), cuts })
}

/// Parses `z_x_1_2` / `u_y_3_1` into (axis, p, q), 0-based.
fn parse_code(name: &str, prefix: &str) -> Option<(Axis, usize, usize)> {
    let mut it = name.split('_');
    if it.next()? != prefix {
        return None;
    }
    let s = match it.next()? {
        "x" => Axis::X,
        "y" => Axis::Y,
        _ => return None,
    };
    let p: usize = it.next()?.parse().ok()?;
    let q: usize = it.next()?.parse().ok()?;
    if it.next().is_some() || p == 0 || q == 0 || p == q {
        return None;
    }
    Some((s, p - 1, q - 1))
}

/// Rewrites `cut` into the binaries of `kind`.
///
/// Refined cuts map to unary and two-bit encodings only when every code
/// coefficient is nonnegative in `<=` form. Unary cuts lift to the refined
/// encoding only when each pair's code coefficients sit on a single axis.
pub fn translate_cut(cut: &LinearCut, kind: PairwiseKind) -> Result<NamedRow, CutError> {
    if cut.row.sense == Sense::Eq {
        return Err(CutError::Equality { cut: cut.tag.clone() });
    }
    let le = cut.row.to_le();
    let prefix = if cut.form == CutForm::Unary { "u" } else { "z" };
    let mut rest = LinExpr::new();
    let mut codes: BTreeMap<(usize, usize), [f64; 4]> = BTreeMap::new();
    for (n, a) in &le.terms {
        match parse_code(n, prefix) {
            Some((s, p, q)) => {
                let key = (p.min(q), p.max(q));
                codes.entry(key).or_insert([0.0; 4])[slot(s, p < q)] += a;
            }
            None => rest.add_term(*a, n.clone()),
        }
    }
    let family = kind.code_family();
    let unary_target = matches!(family, CodeFamily::Unary | CodeFamily::Refined);
    let needs_lift = cut.form == CutForm::Unary && family != CodeFamily::Unary;
    let needs_sign = match cut.form {
        CutForm::Refined => family != CodeFamily::Refined,
        CutForm::Either => !unary_target,
        CutForm::Unary => !unary_target,
    };
    for (&(i, j), dvec) in &codes {
        if needs_lift {
            let y_used = dvec[0].abs() > COEF_TOL || dvec[2].abs() > COEF_TOL;
            let x_used = dvec[1].abs() > COEF_TOL || dvec[3].abs() > COEF_TOL;
            if x_used && y_used {
                return Err(CutError::MixedAxes { cut: cut.tag.clone(), pair: names::pair(i, j) });
            }
        }
        if needs_sign {
            if let Some(k) = (0..4).find(|&k| dvec[k] < -COEF_TOL) {
                let (s, fwd) = crate::formulations::SLOTS[k];
                let var = if fwd { names::ordered(prefix, s, i, j) } else { names::ordered(prefix, s, j, i) };
                return Err(CutError::NegativeCoefficient { cut: cut.tag.clone(), var, coef: dvec[k] });
            }
        }
        let slots = kind.slot_exprs(i, j);
        for k in 0..4 {
            if dvec[k] != 0.0 {
                rest.add_scaled(dvec[k], &slots[k]);
            }
        }
    }
    rest.prune(COEF_TOL);
    Ok(NamedRow::le(le.name, rest, LinExpr::constant(le.rhs)))
}

/// Top `n` pairs by cost, ties lexicographic.
pub fn top_pairs(inst: &FlpInstance, n: usize) -> Vec<(usize, usize)> {
    let mut pairs = inst.pairs();
    pairs.sort_by(|a, b| inst.cost(b.0, b.1).total_cmp(&inst.cost(a.0, a.1)).then(a.cmp(b)));
    pairs.truncate(n);
    pairs
}

/// Top `n` triplets `i < j < k` by `p_ij + p_ik + p_jk`, ties lexicographic.
pub fn top_triplets(inst: &FlpInstance, n: usize) -> Vec<[usize; 3]> {
    let m = inst.n();
    let mut t = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                t.push([i, j, k]);
            }
        }
    }
    let w = |t: &[usize; 3]| inst.cost(t[0], t[1]) + inst.cost(t[0], t[2]) + inst.cost(t[1], t[2]);
    t.sort_by(|a, b| w(b).total_cmp(&w(a)).then(a.cmp(b)));
    t.truncate(n);
    t
}

fn permutations(t: [usize; 3]) -> [[usize; 3]; 6] {
    let [a, b, c] = t;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Cuts added statically at `level` for a model of `kind`.
///
/// `plus` adds B2 and V2 on every pair. `vi` adds, over the `N` costliest
/// pairs, the objective and upper-bound rows, and over the `N` costliest
/// triplets the position multi-box rows on all six orderings and both
/// axes. Refined-unary models also receive the cross-axis upper-bound rows
/// and the tightened stay-on-floor rows. `vi3` adds the multi-box objective
/// rows on the same triplets. Levels are cumulative.
pub fn select_cut_subset(inst: &FlpInstance, bounds: &BoxBounds, level: CutLevel, kind: PairwiseKind) -> Vec<LinearCut> {
    let mut out = Vec::new();
    let floor = inst.floor;
    let n = inst.n();
    if level >= CutLevel::Plus {
        for (i, j) in inst.pairs() {
            out.extend(literature_cuts(i, j, bounds, floor, LiteratureFamily::B2));
            out.extend(literature_cuts(i, j, bounds, floor, LiteratureFamily::V2));
        }
    }
    if level >= CutLevel::Vi {
        let refined = kind == PairwiseKind::RefinedUnary;
        for (i, j) in top_pairs(inst, n) {
            out.extend(objective_cuts(i, j, bounds, floor));
            out.extend(ub_cuts(i, j, bounds, floor).into_iter().filter(|c| refined || c.form != CutForm::Either));
            if refined {
                for s in Axis::BOTH {
                    for (p, q) in [(i, j), (j, i)] {
                        let rows = tight_sitb(p, q, s, floor[s.idx()], bounds.lb(q, s), |a, b| z(s, a, b));
                        for r in rows {
                            out.push(LinearCut {
                                tag: r.name.clone(),
                                form: CutForm::Refined,
                                row: NamedRow { name: format!("cut_{}", r.name), ..r },
                            });
                        }
                    }
                }
            }
        }
    }
    if level >= CutLevel::Vi {
        let which = if level >= CutLevel::Vi3 { MultiboxRows::All } else { MultiboxRows::Position };
        for t in top_triplets(inst, n) {
            for perm in permutations(t) {
                for s in Axis::BOTH {
                    let path = Path::new(perm.to_vec(), s).expect("distinct triplet");
                    out.extend(multibox_cuts(&path, bounds, floor, which));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds2() -> BoxBounds {
        BoxBounds { lb: vec![[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]], ub: vec![[4.0, 4.0], [3.0, 4.0], [4.0, 3.0]] }
    }

    #[test]
    fn ub2_gate() {
        let b = bounds2();
        assert!(ub_cuts(0, 1, &b, [10.0, 10.0]).iter().all(|c| c.family() != "ub2"));
        let cuts = ub_cuts(0, 1, &b, [6.0, 6.0]);
        assert_eq!(cuts.iter().filter(|c| c.family() == "ub2").count(), 2);
        assert_eq!(cuts.iter().filter(|c| c.family() == "ub1").count(), 4);
    }

    #[test]
    fn indicator_is_one_only_on_full_chain() {
        for m in 1..=3 {
            let boxes: Vec<usize> = (0..m + 2).collect();
            let p = Path::new(boxes.clone(), Axis::X).unwrap();
            let e = p.indicator();
            for mask in 0u32..(1 << (m + 1)) {
                let val = e.eval(|n| {
                    let k = boxes.windows(2).position(|w| z(Axis::X, w[0], w[1]) == n).unwrap();
                    f64::from((mask >> k) & 1)
                });
                if mask == (1 << (m + 1)) - 1 {
                    assert_eq!(val, 1.0);
                } else {
                    assert!(val <= 0.0);
                }
            }
        }
    }

    #[test]
    fn path_validation() {
        assert!(matches!(Path::new(vec![0, 1, 0], Axis::X), Err(CutError::RepeatedBox(_))));
        assert!(matches!(Path::new(vec![0, 1], Axis::X), Err(CutError::ShortPath(_))));
    }

    #[test]
    fn translation_rejects_negative_code() {
        let b = bounds2();
        let cut = ub_cuts(0, 1, &b, [6.0, 6.0]).into_iter().find(|c| c.family() == "ub2").unwrap();
        assert!(translate_cut(&cut, PairwiseKind::RefinedUnary).is_ok());
        assert!(translate_cut(&cut, PairwiseKind::Unary).is_ok());
        assert!(matches!(translate_cut(&cut, PairwiseKind::GrayBinary), Err(CutError::NegativeCoefficient { .. })));
    }

    #[test]
    fn gray_translation_of_single_slot() {
        // z^x_{1,2} <= 0 becomes w1 - w2 <= 0
        let cut = LinearCut::new("t".into(), CutForm::Refined, LinExpr::var("z_x_1_2"), Sense::Le, LinExpr::new());
        let r = translate_cut(&cut, PairwiseKind::GrayBinary).unwrap();
        assert_eq!(r.coef("w1_1_2"), 1.0);
        assert_eq!(r.coef("w2_1_2"), -1.0);
        assert_eq!(r.rhs, 0.0);
        // z^y_{1,2} <= 0 becomes 1 - w1 - w2 <= 0
        let cut = LinearCut::new("t".into(), CutForm::Refined, LinExpr::var("z_y_1_2"), Sense::Le, LinExpr::new());
        let r = translate_cut(&cut, PairwiseKind::GrayBinary).unwrap();
        assert_eq!(r.rhs, -1.0);
    }

    #[test]
    fn lift_rejects_mixed_axes() {
        let cut =
            LinearCut::new("t".into(), CutForm::Unary, LinExpr::var("u_x_1_2").term(1.0, "u_y_1_2"), Sense::Le, LinExpr::constant(1.0));
        assert!(matches!(translate_cut(&cut, PairwiseKind::RefinedUnary), Err(CutError::MixedAxes { .. })));
        let b2 = literature_cuts(0, 1, &bounds2(), [10.0, 10.0], LiteratureFamily::B2);
        let r = translate_cut(&b2[0], PairwiseKind::RefinedUnary).unwrap();
        assert!(r.coef("z_x_1_2") > 0.0);
    }

    #[test]
    fn symmetry_pair_choice() {
        let mut inst = FlpInstance::new(10.0, 10.0);
        for _ in 0..3 {
            inst.add_box(4.0, 4.0);
        }
        assert_eq!(symmetry_pair(&inst), None);
        inst.set_cost(0, 1, 5.0);
        inst.set_cost(0, 2, 9.0);
        assert_eq!(symmetry_pair(&inst), Some((0, 2)));
        inst.set_cost(0, 1, 9.0);
        assert_eq!(symmetry_pair(&inst), Some((0, 1)));
    }

    #[test]
    fn v2_coefficient_is_half_width_sum() {
        let b = BoxBounds { lb: vec![[1.0, 1.0]; 2], ub: vec![[8.0, 8.0]; 2] };
        let v2 = literature_cuts(0, 1, &b, [10.0, 10.0], LiteratureFamily::V2);
        // d >= (l_i + l_j)/2 - 8 (1 - u_ij - u_ji); two stacked boxes of width 8 need it
        assert_eq!(v2[0].row.coef("u_x_1_2"), -8.0);
        assert_eq!(v2[0].row.rhs, -8.0);
    }
}
