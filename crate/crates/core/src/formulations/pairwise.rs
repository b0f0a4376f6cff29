use super::{FormulationError, Fragment, PairwiseKind, SitbMode};
use crate::instance::{Axis, BoxBounds};
use crate::milp::{LinExpr, NamedRow, VarKind};
use crate::names::{self, c, l};

fn front(p: usize, s: Axis) -> LinExpr {
    LinExpr::var(c(s, p)).term(0.5, l(s, p))
}

fn back(p: usize, s: Axis) -> LinExpr {
    LinExpr::var(c(s, p)).term(-0.5, l(s, p))
}

pub(crate) fn simple_sitb(frag: &mut Fragment, p: usize, s: Axis, len: f64) {
    frag.row(NamedRow::ge(format!("sitb_lo_{}_{}", s, p + 1), back(p, s), LinExpr::new()));
    frag.row(NamedRow::le(format!("sitb_hi_{}_{}", s, p + 1), front(p, s), LinExpr::constant(len)));
}

/// Tightened stay-on-floor rows for the ordered pair `(p, q)` along `s`,
/// with `code(p, q)` the binary meaning `p <-s q`.
pub(crate) fn tight_sitb(p: usize, q: usize, s: Axis, len: f64, lb_q: f64, code: impl Fn(usize, usize) -> String) -> [NamedRow; 2] {
    let tag = format!("{}_{}", s, names::pair(p, q));
    [
        NamedRow::le(format!("tsitb_lo_{tag}"), LinExpr::new().term(0.5, l(s, p)).term(lb_q, code(q, p)), LinExpr::var(c(s, p))),
        NamedRow::le(format!("tsitb_hi_{tag}"), LinExpr::var(c(s, p)), LinExpr::constant(len).term(-0.5, l(s, p)).term(-lb_q, code(p, q))),
    ]
}

/// `front(p) <= back(q) + rhs`, named `sep_<s>_<p>_<q>`.
fn separation(p: usize, q: usize, s: Axis, rhs: LinExpr) -> NamedRow {
    let mut r = back(q, s);
    r.add_scaled(1.0, &rhs);
    NamedRow::le(format!("sep_{}_{}", s, names::pair(p, q)), front(p, s), r)
}

/// Builds the pairwise formulation of `kind` for boxes `i != j`.
pub fn pairwise_model(
    kind: PairwiseKind,
    i: usize,
    j: usize,
    bounds: &BoxBounds,
    floor: [f64; 2],
    sitb: SitbMode,
) -> Result<Fragment, FormulationError> {
    let n = bounds.lb.len();
    if i == j || i >= n || j >= n {
        return Err(FormulationError::PairOutOfRange(i + 1, j + 1));
    }
    let (i, j) = (i.min(j), i.max(j));
    let len = |s: Axis| floor[s.idx()];
    let mut f = Fragment::default();
    let ub_cap = matches!(kind, PairwiseKind::BigMUnary | PairwiseKind::Extended);
    for p in [i, j] {
        for s in Axis::BOTH {
            f.var(c(s, p), 0.0, len(s), VarKind::Continuous);
            let hi = if ub_cap { bounds.ub(p, s) } else { len(s) };
            f.var(l(s, p), bounds.lb(p, s), hi, VarKind::Continuous);
        }
    }
    for v in kind.code_vars(i, j) {
        f.var(v, 0.0, 1.0, VarKind::Binary);
    }
    let unary_like = matches!(kind, PairwiseKind::Unary | PairwiseKind::RefinedUnary);
    if kind != PairwiseKind::Extended && !(unary_like && sitb == SitbMode::InFormulation) {
        for p in [i, j] {
            for s in Axis::BOTH {
                simple_sitb(&mut f, p, s, len(s));
            }
        }
    }
    let pair = names::pair(i, j);
    match kind {
        PairwiseKind::BigMUnary => {
            let v = kind.code_vars(i, j);
            for (k, (p, q, s)) in [(i, j, Axis::Y), (i, j, Axis::X), (j, i, Axis::Y), (j, i, Axis::X)].into_iter().enumerate() {
                f.row(separation(p, q, s, LinExpr::constant(len(s)).term(-len(s), &v[k])));
            }
            f.row(NamedRow::eq(format!("codes_{pair}"), sum(&v), LinExpr::constant(1.0)));
        }
        PairwiseKind::Unary | PairwiseKind::RefinedUnary => {
            let pre = if kind == PairwiseKind::Unary { "u" } else { "z" };
            let code = |p: usize, q: usize, s: Axis| names::ordered(pre, s, p, q);
            for s in Axis::BOTH {
                for (p, q) in [(i, j), (j, i)] {
                    if sitb == SitbMode::InFormulation {
                        for r in tight_sitb(p, q, s, len(s), bounds.lb(q, s), |a, b| code(a, b, s)) {
                            f.row(r);
                        }
                    }
                    f.row(separation(p, q, s, LinExpr::constant(len(s)).term(-len(s), code(p, q, s))));
                }
            }
            let v = kind.code_vars(i, j);
            if kind == PairwiseKind::Unary {
                f.row(NamedRow::eq(format!("codes_{pair}"), sum(&v), LinExpr::constant(1.0)));
            } else {
                f.row(NamedRow::ge(format!("codes_{pair}"), sum(&v), LinExpr::constant(1.0)));
                for s in Axis::BOTH {
                    f.row(NamedRow::le(
                        format!("excl_{s}_{pair}"),
                        LinExpr::var(code(i, j, s)).term(1.0, code(j, i, s)),
                        LinExpr::constant(1.0),
                    ));
                }
                for s in Axis::BOTH {
                    let both = LinExpr::var(code(i, j, s)).term(1.0, code(j, i, s));
                    for (p, q) in [(i, j), (j, i)] {
                        let lhs = front(p, s).term(len(s), code(p, q, s));
                        let rhs = back(q, s);
                        let mut rhs = rhs;
                        rhs.add_scaled(bounds.lb(p, s) + bounds.lb(q, s), &both);
                        f.row(NamedRow::ge(format!("nsep_{}_{}", s, names::pair(p, q)), lhs, rhs));
                    }
                }
            }
        }
        PairwiseKind::GrayBinary | PairwiseKind::SequencePair => {
            let w = kind.code_vars(i, j);
            let (ly, lx) = (len(Axis::Y), len(Axis::X));
            f.row(separation(i, j, Axis::Y, LinExpr::new().term(ly, &w[0]).term(ly, &w[1])));
            f.row(separation(i, j, Axis::X, LinExpr::constant(lx).term(-lx, &w[0]).term(lx, &w[1])));
            f.row(separation(j, i, Axis::Y, LinExpr::constant(2.0 * ly).term(-ly, &w[0]).term(-ly, &w[1])));
            f.row(separation(j, i, Axis::X, LinExpr::constant(lx).term(lx, &w[0]).term(-lx, &w[1])));
        }
        PairwiseKind::Bldp1 => {
            let y = kind.code_vars(i, j);
            let (ly, lx) = (len(Axis::Y), len(Axis::X));
            f.row(separation(i, j, Axis::Y, LinExpr::new().term(ly, &y[0]).term(ly, &y[1])));
            f.row(separation(i, j, Axis::X, LinExpr::constant(2.0 * lx).term(-lx, &y[0]).term(-lx, &y[1])));
            f.row(separation(j, i, Axis::Y, LinExpr::constant(ly).term(-ly, &y[0]).term(ly, &y[1])));
            f.row(separation(j, i, Axis::X, LinExpr::constant(lx).term(lx, &y[0]).term(-lx, &y[1])));
        }
        PairwiseKind::Extended => extended(&mut f, i, j, bounds, floor),
    }
    Ok(f)
}

fn sum(names: &[String]) -> LinExpr {
    let mut e = LinExpr::new();
    for n in names {
        e.add_term(1.0, n.clone());
    }
    e
}

fn extended(f: &mut Fragment, i: usize, j: usize, bounds: &BoxBounds, floor: [f64; 2]) {
    let v = PairwiseKind::Extended.code_vars(i, j);
    let cc = |s: Axis, p: usize, k: usize| names::copy("ce", s, p, i, j, k);
    let lc = |s: Axis, p: usize, k: usize| names::copy("le", s, p, i, j, k);
    for p in [i, j] {
        for s in Axis::BOTH {
            for k in 1..=4 {
                f.var(cc(s, p, k), 0.0, floor[s.idx()], VarKind::Continuous);
                f.var(lc(s, p, k), 0.0, bounds.ub(p, s), VarKind::Continuous);
            }
        }
    }
    let tag = names::pair(i, j);
    for p in [i, j] {
        for s in Axis::BOTH {
            for k in 1..=4 {
                let vk = &v[k - 1];
                let t = format!("{}_{}_{}_{}", s, p + 1, tag, k);
                f.row(NamedRow::le(format!("ext_clo_{t}"), LinExpr::new().term(0.5, lc(s, p, k)), LinExpr::var(cc(s, p, k))));
                f.row(NamedRow::le(
                    format!("ext_chi_{t}"),
                    LinExpr::var(cc(s, p, k)),
                    LinExpr::new().term(floor[s.idx()], vk).term(-0.5, lc(s, p, k)),
                ));
                f.row(NamedRow::le(format!("ext_llo_{t}"), LinExpr::new().term(bounds.lb(p, s), vk), LinExpr::var(lc(s, p, k))));
                f.row(NamedRow::le(format!("ext_lhi_{t}"), LinExpr::var(lc(s, p, k)), LinExpr::new().term(bounds.ub(p, s), vk)));
            }
        }
    }
    for (k, (p, q, s)) in [(i, j, Axis::Y), (i, j, Axis::X), (j, i, Axis::Y), (j, i, Axis::X)].into_iter().enumerate() {
        let k = k + 1;
        let lhs = LinExpr::var(cc(s, p, k)).term(-1.0, cc(s, q, k)).term(0.5, lc(s, p, k)).term(0.5, lc(s, q, k));
        f.row(NamedRow::le(format!("ext_sep_{}_{}_{}", s, names::pair(p, q), k), lhs, LinExpr::new()));
    }
    for p in [i, j] {
        for s in Axis::BOTH {
            let t = format!("{}_{}_{}", s, p + 1, tag);
            let mut csum = LinExpr::new();
            let mut lsum = LinExpr::new();
            for k in 1..=4 {
                csum.add_term(1.0, cc(s, p, k));
                lsum.add_term(1.0, lc(s, p, k));
            }
            f.row(NamedRow::eq(format!("ext_csum_{t}"), csum, LinExpr::var(c(s, p))));
            f.row(NamedRow::eq(format!("ext_lsum_{t}"), lsum, LinExpr::var(l(s, p))));
        }
    }
    f.row(NamedRow::eq(format!("codes_{tag}"), sum(&v), LinExpr::constant(1.0)));
}
