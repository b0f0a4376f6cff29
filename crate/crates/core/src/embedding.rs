//! Disjunctions, encodings, and the generic big-M embedding construction.
//!
//! An embedding pairs branch `k` of a disjunction with a distinct 0/1 code
//! `h^k`. Given affine functions `R^k_l` that equal `b^k_l` at `h^k` and
//! dominate row `l` of branch `k` over every other branch, the system
//! `x in Q, v in V, (A^k)_l x <= R^k_l(v)` formulates the union.

use thiserror::Error;

use crate::instance::Axis;
use crate::milp::{LinExpr, LpProblem, LpStatus, MilpModel, ModelError, NamedRow, Sense, VarKind};
use crate::names;

#[derive(Debug, Error, PartialEq)]
pub enum EmbeddingError {
    #[error("encoding has duplicate code {0:?}")]
    DuplicateCode(Vec<u8>),
    #[error("encoding codes have differing lengths")]
    RaggedCodes,
    #[error("encoding has {codes} codes but the disjunction has {branches} branches")]
    CountMismatch { codes: usize, branches: usize },
    #[error("ground set variable `{0}` is unbounded")]
    Unbounded(String),
    #[error("no code-set formulation is known for this encoding")]
    Unsupported,
    #[error("big-M function for branch {branch} row {row}: {msg}")]
    BadBigM { branch: usize, row: usize, msg: String },
    #[error("LP failure while bounding branch {branch} row {row}")]
    Lp { branch: usize, row: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Common constraints `Q` over named, bounded variables.
#[derive(Debug, Clone, Default)]
pub struct GroundSet {
    pub vars: Vec<(String, f64, f64)>,
    pub rows: Vec<NamedRow>,
}

impl GroundSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lb: f64, ub: f64) {
        self.vars.push((name.into(), lb, ub));
    }

    pub fn add_row(&mut self, row: NamedRow) {
        self.rows.push(row);
    }

    /// `Q^lb` for a pair: stay-on-floor rows and width lower bounds.
    pub fn q_lb(i: usize, j: usize, floor: [f64; 2], lb: [[f64; 2]; 2]) -> Self {
        let mut q = GroundSet::new();
        for (k, p) in [i, j].into_iter().enumerate() {
            for s in Axis::BOTH {
                let len = floor[s.idx()];
                q.add_var(names::c(s, p), 0.0, len);
                q.add_var(names::l(s, p), lb[k][s.idx()], len);
            }
        }
        for p in [i, j] {
            for s in Axis::BOTH {
                let len = floor[s.idx()];
                let (c, l) = (names::c(s, p), names::l(s, p));
                q.add_row(NamedRow::ge(format!("sitb_lo_{}_{}", s, p + 1), LinExpr::var(&c), LinExpr::new().term(0.5, &l)));
                q.add_row(NamedRow::le(format!("sitb_hi_{}_{}", s, p + 1), LinExpr::var(&c).term(0.5, &l), LinExpr::constant(len)));
            }
        }
        q
    }

    fn check_bounded(&self) -> Result<(), EmbeddingError> {
        match self.vars.iter().find(|v| !v.1.is_finite() || !v.2.is_finite()) {
            Some(v) => Err(EmbeddingError::Unbounded(v.0.clone())),
            None => Ok(()),
        }
    }

    /// Continuous model of `Q` with extra rows appended.
    pub fn model_with(&self, extra: &[NamedRow]) -> Result<MilpModel, ModelError> {
        let mut m = MilpModel::new();
        for (n, lb, ub) in &self.vars {
            m.add_var(n.clone(), *lb, *ub, VarKind::Continuous)?;
        }
        for (k, r) in self.rows.iter().chain(extra).enumerate() {
            let mut r = r.clone();
            r.name = format!("{}#{k}", r.name);
            m.add_row(&r)?;
        }
        Ok(m)
    }
}

/// A disjunction of linear systems.
#[derive(Debug, Clone)]
pub struct Disjunction {
    pub branches: Vec<Vec<NamedRow>>,
}

/// `B_p` precedes `B_q` along `s`, as a `<=` row.
pub fn precedes(p: usize, q: usize, s: Axis) -> NamedRow {
    NamedRow::le(
        format!("prec_{}_{}", s, names::pair(p, q)),
        LinExpr::var(names::c(s, p)).term(0.5, names::l(s, p)),
        LinExpr::var(names::c(s, q)).term(-0.5, names::l(s, q)),
    )
}

/// `B_p` does not precede `B_q` along `s`, as a `<=` row.
pub fn not_precedes(p: usize, q: usize, s: Axis) -> NamedRow {
    NamedRow::le(
        format!("nprec_{}_{}", s, names::pair(p, q)),
        LinExpr::var(names::c(s, q)).term(-0.5, names::l(s, q)),
        LinExpr::var(names::c(s, p)).term(0.5, names::l(s, p)),
    )
}

impl Disjunction {
    /// Four-branch non-overlap: `i <-y j`, `i <-x j`, `j <-y i`, `j <-x i`.
    pub fn d4(i: usize, j: usize) -> Self {
        Disjunction {
            branches: vec![
                vec![precedes(i, j, Axis::Y)],
                vec![precedes(i, j, Axis::X)],
                vec![precedes(j, i, Axis::Y)],
                vec![precedes(j, i, Axis::X)],
            ],
        }
    }

    /// Eight-branch refinement of [`Disjunction::d4`].
    pub fn d8(i: usize, j: usize) -> Self {
        let (x, y) = (Axis::X, Axis::Y);
        let loose = |s: Axis| vec![not_precedes(i, j, s), not_precedes(j, i, s)];
        let with = |mut a: Vec<NamedRow>, b: Vec<NamedRow>| {
            a.extend(b);
            a
        };
        Disjunction {
            branches: vec![
                with(vec![precedes(i, j, y)], loose(x)),
                vec![precedes(i, j, y), precedes(i, j, x)],
                with(vec![precedes(i, j, x)], loose(y)),
                vec![precedes(i, j, x), precedes(j, i, y)],
                with(vec![precedes(j, i, y)], loose(x)),
                vec![precedes(j, i, x), precedes(j, i, y)],
                with(vec![precedes(j, i, x)], loose(y)),
                vec![precedes(j, i, x), precedes(i, j, y)],
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    /// Branch rows in `<=` form; equalities become two rows.
    pub fn le_rows(&self, k: usize) -> Vec<NamedRow> {
        let mut out = Vec::new();
        for r in &self.branches[k] {
            match r.sense {
                Sense::Eq => {
                    let mut a = r.clone();
                    a.sense = Sense::Le;
                    let mut b = r.clone();
                    b.sense = Sense::Ge;
                    out.push(a);
                    out.push(b.to_le());
                }
                _ => out.push(r.to_le()),
            }
        }
        out
    }

    pub fn satisfied(&self, k: usize, value: impl Fn(&str) -> f64, tol: f64) -> bool {
        self.branches[k].iter().all(|r| r.violation(&value) <= tol)
    }
}

/// Positional code assignment: code `k` belongs to branch `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    pub codes: Vec<Vec<u8>>,
}

fn unit(r: usize, t: &[usize]) -> Vec<u8> {
    let mut v = vec![0; r];
    for &k in t {
        v[k] = 1;
    }
    v
}

impl Encoding {
    pub fn new(codes: Vec<Vec<u8>>) -> Result<Self, EmbeddingError> {
        let r = codes.first().map_or(0, Vec::len);
        if codes.iter().any(|c| c.len() != r || c.iter().any(|&b| b > 1)) {
            return Err(EmbeddingError::RaggedCodes);
        }
        for (k, c) in codes.iter().enumerate() {
            if codes[..k].contains(c) {
                return Err(EmbeddingError::DuplicateCode(c.clone()));
            }
        }
        Ok(Encoding { codes })
    }

    /// Unit vectors `e^1..e^k`.
    pub fn unary(k: usize) -> Self {
        Encoding { codes: (0..k).map(|t| unit(k, &[t])).collect() }
    }

    /// Two-bit reflected Gray code, ordered to match branches `d^1..d^4`.
    pub fn gray4() -> Self {
        Encoding { codes: vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 1]] }
    }

    /// Two-bit codes in the order used by the BLDP1 big-M functions.
    pub fn bb4() -> Self {
        Encoding { codes: vec![vec![0, 0], vec![1, 1], vec![1, 0], vec![0, 1]] }
    }

    /// `e1, e1+e2, e2, e2+e3, e3, e3+e4, e4, e4+e1`.
    pub fn c8() -> Self {
        Encoding {
            codes: vec![
                unit(4, &[0]),
                unit(4, &[0, 1]),
                unit(4, &[1]),
                unit(4, &[1, 2]),
                unit(4, &[2]),
                unit(4, &[2, 3]),
                unit(4, &[3]),
                unit(4, &[3, 0]),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.codes.first().map_or(0, Vec::len)
    }

    fn dominated(&self, k: usize) -> bool {
        let h = &self.codes[k];
        self.codes.iter().enumerate().any(|(s, g)| s != k && g.iter().zip(h).all(|(a, b)| a >= b))
    }
}

/// Affine function `constant + sum coeffs[t] v_t` of a code vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineCode {
    pub constant: f64,
    pub coeffs: Vec<f64>,
}

impl AffineCode {
    pub fn eval(&self, v: &[f64]) -> f64 {
        self.constant + self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn eval_code(&self, h: &[u8]) -> f64 {
        self.constant + self.coeffs.iter().zip(h).map(|(a, &b)| a * b as f64).sum::<f64>()
    }
}

/// Linear rows over code bits describing a set of 0/1 vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSet {
    pub width: usize,
    pub rows: Vec<(Vec<f64>, Sense, f64)>,
}

impl CodeSet {
    /// All points of `{0,1}^width` satisfying the rows.
    pub fn solutions(&self) -> Vec<Vec<u8>> {
        (0..1u32 << self.width)
            .map(|m| (0..self.width).map(|t| ((m >> t) & 1) as u8).collect::<Vec<u8>>())
            .filter(|h| {
                self.rows.iter().all(|(a, s, b)| {
                    let act: f64 = a.iter().zip(h).map(|(x, &y)| x * y as f64).sum();
                    s.violation(act, *b) <= 1e-9
                })
            })
            .collect()
    }
}

fn sorted(mut codes: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    codes.sort();
    codes
}

/// Rows whose 0/1 solutions are exactly the codes of `enc`.
pub fn code_set_formulation(enc: &Encoding) -> Result<CodeSet, EmbeddingError> {
    let r = enc.width();
    let target = sorted(enc.codes.clone());
    if target == sorted(Encoding::unary(r).codes) {
        return Ok(CodeSet { width: r, rows: vec![(vec![1.0; r], Sense::Eq, 1.0)] });
    }
    if target.len() == 1 << r {
        return Ok(CodeSet { width: r, rows: Vec::new() });
    }
    if r == 4 && target == sorted(Encoding::c8().codes) {
        // Slots are (z^y_ij, z^x_ij, z^y_ji, z^x_ji).
        return Ok(CodeSet {
            width: 4,
            rows: vec![
                (vec![1.0; 4], Sense::Ge, 1.0),
                (vec![0.0, 1.0, 0.0, 1.0], Sense::Le, 1.0),
                (vec![1.0, 0.0, 1.0, 0.0], Sense::Le, 1.0),
            ],
        });
    }
    Err(EmbeddingError::Unsupported)
}

/// Per-branch LP models `Q(s) = Q ∩ branch s`, built lazily.
struct BranchLps {
    lps: Vec<Option<LpProblem>>,
    feasible: Vec<bool>,
}

impl BranchLps {
    fn new(q: &GroundSet, d: &Disjunction) -> Result<Self, EmbeddingError> {
        let mut lps = Vec::new();
        let mut feasible = Vec::new();
        for k in 0..d.len() {
            let m = match q.model_with(&d.branches[k]) {
                Ok(m) => m,
                // a row like `0 <= -1` leaves the branch empty
                Err(ModelError::InfeasibleConstantRow(_)) => {
                    feasible.push(false);
                    lps.push(None);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let lp = LpProblem::from_model(&m);
            feasible.push(lp.solve().status == LpStatus::Optimal);
            lps.push(Some(lp));
        }
        Ok(BranchLps { lps, feasible })
    }

    /// `max row(x)` over `Q(s)`; `None` when `Q(s)` is empty.
    fn max(&self, q: &GroundSet, s: usize, row: &NamedRow) -> Option<Result<f64, ()>> {
        if !self.feasible[s] {
            return None;
        }
        let lp = self.lps[s].as_ref().expect("built");
        let mut cost = vec![0.0; q.vars.len()];
        for (n, c) in &row.terms {
            let j = q.vars.iter().position(|v| &v.0 == n)?;
            cost[j] -= c;
        }
        let sol = lp.solve_with(lp.lower(), lp.upper(), &cost);
        Some(if sol.status == LpStatus::Optimal { Ok(-sol.objective) } else { Err(()) })
    }
}

/// Maximum of the row's left-hand side over `Q`.
fn lp_max_over(q: &GroundSet, row: &NamedRow) -> Result<f64, EmbeddingError> {
    let m = q.model_with(&[])?;
    let lp = LpProblem::from_model(&m);
    let mut cost = vec![0.0; m.num_vars()];
    for (n, c) in &row.terms {
        let j = m.var_index(n).ok_or_else(|| ModelError::UnknownVariable(n.clone()))?;
        cost[j] -= c;
    }
    let sol = lp.solve_with(lp.lower(), lp.upper(), &cost);
    match sol.status {
        LpStatus::Optimal => Ok(-sol.objective),
        _ => Err(EmbeddingError::Lp { branch: 0, row: 0 }),
    }
}

/// Big-M function for `row` (in `<=` form) of branch `k`:
/// `R(v) = b + (M - b) * delta_k(v)`, where `M` is the LP maximum of the row
/// over `Q` and `delta_k` vanishes at `h^k` and is at least 1 at every other code.
pub fn default_bigm(q: &GroundSet, row: &NamedRow, k: usize, enc: &Encoding) -> Result<AffineCode, EmbeddingError> {
    q.check_bounded()?;
    let row = row.to_le();
    let b = row.rhs;
    let m = lp_max_over(q, &row)?;
    let r = enc.width();
    if m <= b {
        return Ok(AffineCode { constant: b, coeffs: vec![0.0; r] });
    }
    let h = &enc.codes[k];
    let full = enc.dominated(k);
    let mut delta = AffineCode { constant: 0.0, coeffs: vec![0.0; r] };
    for t in 0..r {
        if h[t] == 1 {
            delta.constant += 1.0;
            delta.coeffs[t] -= 1.0;
        } else if full {
            delta.coeffs[t] += 1.0;
        }
    }
    let big = m - b;
    Ok(AffineCode { constant: b + big * delta.constant, coeffs: delta.coeffs.iter().map(|c| big * c).collect() })
}

/// Builds the embedding formulation. `r` holds one function per branch row
/// (rows taken in `Disjunction::le_rows` order); `None` synthesizes them with
/// [`default_bigm`]. Supplied functions are checked against the dominance
/// condition by LP.
pub fn build_bigm_embedding(
    q: &GroundSet,
    d: &Disjunction,
    c: &Encoding,
    v: &CodeSet,
    r: Option<&[Vec<AffineCode>]>,
    code_names: &[String],
) -> Result<MilpModel, EmbeddingError> {
    let c = Encoding::new(c.codes.clone())?;
    q.check_bounded()?;
    if c.len() != d.len() {
        return Err(EmbeddingError::CountMismatch { codes: c.len(), branches: d.len() });
    }
    assert_eq!(code_names.len(), c.width(), "one name per code bit");
    let lps = BranchLps::new(q, d)?;

    let mut model = MilpModel::new();
    for (n, lb, ub) in &q.vars {
        model.add_var(n.clone(), *lb, *ub, VarKind::Continuous)?;
    }
    for row in &q.rows {
        model.add_row(row)?;
    }
    for n in code_names {
        model.add_binary(n.clone())?;
    }
    for (k, (a, s, b)) in v.rows.iter().enumerate() {
        let coeffs = a.iter().enumerate().map(|(t, &x)| (model.var_index(&code_names[t]).unwrap(), x)).collect();
        model.add_constraint(format!("code_{k}"), coeffs, *s, *b)?;
    }

    let mut emitted: Vec<(Vec<(String, f64)>, f64)> = Vec::new();
    for k in 0..d.len() {
        for (l, row) in d.le_rows(k).iter().enumerate() {
            let func = match r {
                Some(r) => {
                    let f = r.get(k).and_then(|fk| fk.get(l)).cloned().ok_or(EmbeddingError::BadBigM {
                        branch: k,
                        row: l,
                        msg: "missing function".into(),
                    })?;
                    check_bigm(q, &lps, &c, k, l, row, &f)?;
                    f
                }
                None => default_bigm(q, row, k, &c)?,
            };
            let mut terms = row.terms.clone();
            for (t, &a) in func.coeffs.iter().enumerate() {
                if a != 0.0 {
                    terms.push((code_names[t].clone(), -a));
                }
            }
            let key = (terms.clone(), func.constant);
            if emitted.iter().any(|e| same_row(e, &key)) {
                continue;
            }
            emitted.push(key);
            let name = format!("bigm_{}_{}", k + 1, l + 1);
            model.add_row(&NamedRow { name, terms, sense: Sense::Le, rhs: func.constant })?;
        }
    }
    Ok(model)
}

fn same_row(a: &(Vec<(String, f64)>, f64), b: &(Vec<(String, f64)>, f64)) -> bool {
    if (a.1 - b.1).abs() > 1e-9 || a.0.len() != b.0.len() {
        return false;
    }
    a.0.iter().all(|(n, c)| b.0.iter().any(|(m, d)| m == n && (c - d).abs() <= 1e-9))
}

fn check_bigm(
    q: &GroundSet,
    lps: &BranchLps,
    c: &Encoding,
    k: usize,
    l: usize,
    row: &NamedRow,
    f: &AffineCode,
) -> Result<(), EmbeddingError> {
    let bad = |msg: String| EmbeddingError::BadBigM { branch: k, row: l, msg };
    let own = f.eval_code(&c.codes[k]);
    if (own - row.rhs).abs() > 1e-9 * row.rhs.abs().max(1.0) {
        return Err(bad(format!("value {own} at its own code differs from right-hand side {}", row.rhs)));
    }
    for s in 0..c.len() {
        if s == k {
            continue;
        }
        match lps.max(q, s, row) {
            None => {}
            Some(Err(())) => return Err(EmbeddingError::Lp { branch: k, row: l }),
            Some(Ok(mx)) => {
                let val = f.eval_code(&c.codes[s]);
                if val < mx - 1e-7 * mx.abs().max(1.0) {
                    return Err(bad(format!("value {val} at code of branch {} is below the maximum {mx}", s + 1)));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_sizes_and_distinctness() {
        assert_eq!(Encoding::c8().len(), 8);
        for e in [Encoding::unary(4), Encoding::gray4(), Encoding::bb4(), Encoding::c8()] {
            assert!(Encoding::new(e.codes.clone()).is_ok());
        }
        assert_eq!(Encoding::unary(4).len(), 4);
        assert_eq!(Encoding::gray4().len(), 4);
        assert_eq!(Encoding::bb4().len(), 4);
        assert_eq!(Encoding::new(vec![vec![0, 1], vec![0, 1]]), Err(EmbeddingError::DuplicateCode(vec![0, 1])));
    }

    #[test]
    fn code_sets_have_exact_solutions() {
        for e in [Encoding::unary(4), Encoding::gray4(), Encoding::bb4(), Encoding::c8()] {
            let v = code_set_formulation(&e).unwrap();
            assert_eq!(sorted(v.solutions()), sorted(e.codes.clone()));
        }
        let odd = Encoding::new(vec![vec![0, 0, 0], vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(code_set_formulation(&odd), Err(EmbeddingError::Unsupported));
    }

    #[test]
    fn interval_example_off_branch_constant() {
        let mut q = GroundSet::new();
        q.add_var("x1", 0.0, 4.0);
        let row = NamedRow::le("r", LinExpr::var("x1"), LinExpr::constant(1.0));
        let f = default_bigm(&q, &row, 0, &Encoding::unary(2)).unwrap();
        assert_eq!(f.eval_code(&[0, 1]), 4.0);
        assert_eq!(f.eval_code(&[1, 0]), 1.0);
        let slack = NamedRow::le("s", LinExpr::var("x1"), LinExpr::constant(5.0));
        let f = default_bigm(&q, &slack, 0, &Encoding::unary(2)).unwrap();
        assert_eq!(f, AffineCode { constant: 5.0, coeffs: vec![0.0, 0.0] });
    }

    #[test]
    fn rejects_unbounded_ground_set() {
        let mut q = GroundSet::new();
        q.add_var("x", 0.0, f64::INFINITY);
        let d = Disjunction { branches: vec![vec![NamedRow::le("a", LinExpr::var("x"), LinExpr::constant(1.0))]] };
        let v = CodeSet { width: 1, rows: vec![] };
        let err = build_bigm_embedding(&q, &d, &Encoding::unary(1), &v, None, &["v1".into()]).unwrap_err();
        assert_eq!(err, EmbeddingError::Unbounded("x".into()));
    }

    #[test]
    fn single_branch_fixes_binary() {
        let mut q = GroundSet::new();
        q.add_var("x", 0.0, 2.0);
        let d = Disjunction { branches: vec![vec![NamedRow::le("a", LinExpr::var("x"), LinExpr::constant(1.0))]] };
        let enc = Encoding::new(vec![vec![1]]).unwrap();
        let v = code_set_formulation(&enc).unwrap();
        let m = build_bigm_embedding(&q, &d, &enc, &v, None, &["v1".into()]).unwrap();
        // v1 = 1 is forced; the branch row is then active.
        let sol = crate::milp::solve_lp(&m);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[1] - 1.0).abs() < 1e-9);
        assert_eq!(m.num_vars(), 2);
    }

    #[test]
    fn empty_branch_code_is_cut_off() {
        let mut q = GroundSet::new();
        q.add_var("x", 0.0, 2.0);
        let empty = NamedRow::le("e", LinExpr::new(), LinExpr::constant(-1.0));
        let d = Disjunction { branches: vec![vec![empty], vec![NamedRow::le("a", LinExpr::var("x"), LinExpr::constant(1.0))]] };
        let enc = Encoding::new(vec![vec![0], vec![1]]).unwrap();
        let v = code_set_formulation(&enc).unwrap();
        let m = build_bigm_embedding(&q, &d, &enc, &v, None, &["v1".into()]).unwrap();
        assert!(!m.is_feasible(&[0.5, 0.0], 1e-9));
        assert!(m.is_feasible(&[0.5, 1.0], 1e-9));
        assert!(!m.is_feasible(&[1.5, 1.0], 1e-9));
    }
}
