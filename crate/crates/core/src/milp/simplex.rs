//! Bounded-variable revised primal simplex with an explicit dense basis inverse.

use super::model::{MilpModel, Sense};

pub const OPT_TOL: f64 = 1e-7;
pub const PIVOT_TOL: f64 = 1e-9;
pub const PRIMAL_TOL: f64 = 1e-6;
const HARRIS_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;
const BLAND_AFTER: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// Row and column data of an LP, reusable across bound changes.
#[derive(Debug, Clone)]
pub struct LpProblem {
    n: usize,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    cost: Vec<f64>,
    obj_constant: f64,
    lb: Vec<f64>,
    ub: Vec<f64>,
}

impl LpProblem {
    /// Continuous relaxation of `model`.
    pub fn from_model(model: &MilpModel) -> Self {
        let n = model.num_vars();
        let m = model.num_constraints();
        let mut cols = vec![Vec::new(); n];
        let mut row_lo = Vec::with_capacity(m);
        let mut row_hi = Vec::with_capacity(m);
        for (i, c) in model.constraints().iter().enumerate() {
            for &(j, a) in &c.coeffs {
                cols[j].push((i, a));
            }
            let (lo, hi) = match c.sense {
                Sense::Le => (f64::NEG_INFINITY, c.rhs),
                Sense::Ge => (c.rhs, f64::INFINITY),
                Sense::Eq => (c.rhs, c.rhs),
            };
            row_lo.push(lo);
            row_hi.push(hi);
        }
        let mut cost = vec![0.0; n];
        for &(j, c) in model.objective() {
            cost[j] += c;
        }
        LpProblem {
            n,
            m,
            cols,
            row_lo,
            row_hi,
            cost,
            obj_constant: model.objective_constant(),
            lb: model.vars().iter().map(|v| v.lb).collect(),
            ub: model.vars().iter().map(|v| v.ub).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> &[f64] {
        &self.lb
    }

    pub fn upper(&self) -> &[f64] {
        &self.ub
    }

    pub fn cost(&self) -> &[f64] {
        &self.cost
    }

    /// Solves with the model bounds and objective.
    pub fn solve(&self) -> LpSolution {
        self.solve_bounds(&self.lb, &self.ub)
    }

    /// Solves with the model objective under replacement bounds.
    pub fn solve_bounds(&self, lb: &[f64], ub: &[f64]) -> LpSolution {
        let mut s = self.solve_with(lb, ub, &self.cost);
        s.objective += self.obj_constant;
        s
    }

    /// Solves `min cost·x` (no objective constant) under the given bounds.
    pub fn solve_with(&self, lb: &[f64], ub: &[f64], cost: &[f64]) -> LpSolution {
        assert_eq!(lb.len(), self.n);
        assert_eq!(ub.len(), self.n);
        assert_eq!(cost.len(), self.n);
        if lb.iter().zip(ub).any(|(l, u)| l > u) {
            return LpSolution { status: LpStatus::Infeasible, objective: f64::NAN, x: Vec::new(), iterations: 0 };
        }
        let mut s = Simplex::new(self, lb, ub);
        let status = s.run(cost);
        let x = s.x[..self.n].to_vec();
        let objective = match status {
            LpStatus::Optimal => cost.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>(),
            _ => f64::NAN,
        };
        LpSolution { status, objective, x, iterations: s.iterations }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    Free,
}

struct Simplex<'a> {
    p: &'a LpProblem,
    m: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    sigma: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
}

impl<'a> Simplex<'a> {
    fn new(p: &'a LpProblem, lb: &[f64], ub: &[f64]) -> Self {
        let (n, m) = (p.n, p.m);
        let total = n + 2 * m;
        let mut lo = Vec::with_capacity(total);
        let mut hi = Vec::with_capacity(total);
        let mut x = vec![0.0; total];
        let mut state = vec![State::Lower; total];
        lo.extend_from_slice(lb);
        hi.extend_from_slice(ub);
        for j in 0..n {
            (x[j], state[j]) = if lb[j].is_finite() {
                (lb[j], State::Lower)
            } else if ub[j].is_finite() {
                (ub[j], State::Upper)
            } else {
                (0.0, State::Free)
            };
        }
        lo.extend_from_slice(&p.row_lo);
        hi.extend_from_slice(&p.row_hi);
        lo.extend(std::iter::repeat_n(0.0, m));
        hi.extend(std::iter::repeat_n(0.0, m));
        let mut act = vec![0.0; m];
        for j in 0..n {
            if x[j] != 0.0 {
                for &(i, a) in &p.cols[j] {
                    act[i] += a * x[j];
                }
            }
        }
        let mut sigma = vec![1.0; m];
        let mut basis = Vec::with_capacity(m);
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            let (s, a) = (n + i, n + m + i);
            if act[i] >= p.row_lo[i] - PRIMAL_TOL * 1e-3 && act[i] <= p.row_hi[i] + PRIMAL_TOL * 1e-3 {
                x[s] = act[i];
                state[s] = State::Basic;
                basis.push(s);
                binv[i * m + i] = -1.0;
            } else {
                let b = if act[i] < p.row_lo[i] { p.row_lo[i] } else { p.row_hi[i] };
                x[s] = b;
                state[s] = if b == p.row_lo[i] { State::Lower } else { State::Upper };
                sigma[i] = if b > act[i] { 1.0 } else { -1.0 };
                x[a] = (b - act[i]).abs();
                hi[a] = f64::INFINITY;
                state[a] = State::Basic;
                basis.push(a);
                binv[i * m + i] = sigma[i];
            }
        }
        Simplex { p, m, lo, hi, x, state, sigma, basis, binv, iterations: 0, since_refactor: 0 }
    }

    fn column(&self, j: usize) -> ColIter<'_> {
        let (n, m) = (self.p.n, self.m);
        if j < n {
            ColIter::Sparse(self.p.cols[j].iter())
        } else if j < n + m {
            ColIter::Single(Some((j - n, -1.0)))
        } else {
            ColIter::Single(Some((j - n - m, self.sigma[j - n - m])))
        }
    }

    fn run(&mut self, cost: &[f64]) -> LpStatus {
        let (n, m) = (self.p.n, self.m);
        let total = n + 2 * m;
        let limit = 50_000 + 50 * (n + m);
        if self.basis.iter().any(|&b| b >= n + m) {
            let mut c1 = vec![0.0; total];
            for c in &mut c1[n + m..] {
                *c = 1.0;
            }
            match self.optimize(&c1, limit) {
                LpStatus::Optimal => {}
                LpStatus::Unbounded => return LpStatus::NumericalFailure,
                other => return other,
            }
            let infeas: f64 = self.x[n + m..].iter().sum();
            let scale = 1.0 + self.p.row_lo.iter().chain(&self.p.row_hi).filter(|v| v.is_finite()).fold(0.0f64, |a, v| a.max(v.abs()));
            if infeas > PRIMAL_TOL * scale {
                return LpStatus::Infeasible;
            }
        }
        for a in n + m..total {
            self.hi[a] = 0.0;
            if self.state[a] != State::Basic {
                self.x[a] = 0.0;
                self.state[a] = State::Lower;
            }
        }
        let mut c2 = vec![0.0; total];
        c2[..n].copy_from_slice(cost);
        self.optimize(&c2, limit)
    }

    fn optimize(&mut self, cost: &[f64], limit: usize) -> LpStatus {
        let m = self.m;
        let total = cost.len();
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut y = vec![0.0; m];
        let mut alpha = vec![0.0; m];
        loop {
            if self.iterations >= limit {
                return LpStatus::IterationLimit;
            }
            for k in 0..m {
                y[k] = 0.0;
            }
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = cost[b];
                if cb != 0.0 {
                    let row = &self.binv[i * m..(i + 1) * m];
                    for k in 0..m {
                        y[k] += cb * row[k];
                    }
                }
            }
            let mut enter: Option<(usize, f64)> = None;
            let mut best = 0.0;
            for j in 0..total {
                let st = self.state[j];
                if st == State::Basic || self.lo[j] == self.hi[j] {
                    continue;
                }
                let d = cost[j] - self.column(j).map(|(r, a)| y[r] * a).sum::<f64>();
                let dir = match st {
                    State::Lower if d < -OPT_TOL => 1.0,
                    State::Upper if d > OPT_TOL => -1.0,
                    State::Free if d.abs() > OPT_TOL => -d.signum(),
                    _ => continue,
                };
                if bland {
                    enter = Some((j, dir));
                    break;
                }
                if d.abs() > best {
                    best = d.abs();
                    enter = Some((j, dir));
                }
            }
            let Some((q, dir)) = enter else {
                if self.since_refactor > 0 {
                    if !self.refactor() {
                        return LpStatus::NumericalFailure;
                    }
                    continue;
                }
                return LpStatus::Optimal;
            };

            for a in alpha.iter_mut() {
                *a = 0.0;
            }
            for (r, a) in self.column(q) {
                for i in 0..m {
                    alpha[i] += self.binv[i * m + r] * a;
                }
            }

            let leave = if bland { self.ratio_bland(&alpha, dir) } else { self.ratio_harris(&alpha, dir) };
            let span = self.hi[q] - self.lo[q];
            let (theta, leave) = match leave {
                Some((r, t)) if t < span => (t, Some(r)),
                _ if span.is_finite() => (span, None),
                Some((r, t)) => (t, Some(r)),
                None => return LpStatus::Unbounded,
            };

            self.iterations += 1;
            if theta <= 1e-12 {
                degenerate += 1;
                if degenerate > BLAND_AFTER {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }

            if theta != 0.0 {
                self.x[q] += dir * theta;
                for i in 0..m {
                    if alpha[i] != 0.0 {
                        self.x[self.basis[i]] -= dir * theta * alpha[i];
                    }
                }
            }
            match leave {
                None => {
                    self.state[q] = if dir > 0.0 { State::Upper } else { State::Lower };
                    self.x[q] = if dir > 0.0 { self.hi[q] } else { self.lo[q] };
                }
                Some(r) => {
                    let b = self.basis[r];
                    let to_lower = -dir * alpha[r] < 0.0;
                    self.x[b] = if to_lower { self.lo[b] } else { self.hi[b] };
                    self.state[b] = if to_lower { State::Lower } else { State::Upper };
                    self.state[q] = State::Basic;
                    self.basis[r] = q;
                    self.pivot(r, &alpha);
                    self.since_refactor += 1;
                    if self.since_refactor >= REFACTOR_EVERY && !self.refactor() {
                        return LpStatus::NumericalFailure;
                    }
                }
            }
        }
    }

    /// Two-pass ratio test: bounded relaxation, then the largest pivot.
    fn ratio_harris(&self, alpha: &[f64], dir: f64) -> Option<(usize, f64)> {
        let mut cap = f64::INFINITY;
        for (i, &a) in alpha.iter().enumerate() {
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[i];
            let delta = -dir * a;
            let r =
                if delta < 0.0 { (self.x[b] - self.lo[b] + HARRIS_TOL) / -delta } else { (self.hi[b] - self.x[b] + HARRIS_TOL) / delta };
            cap = cap.min(r);
        }
        if !cap.is_finite() {
            return None;
        }
        let mut pick: Option<(usize, f64)> = None;
        let mut piv = 0.0;
        for (i, &a) in alpha.iter().enumerate() {
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[i];
            let delta = -dir * a;
            let r = if delta < 0.0 { (self.x[b] - self.lo[b]) / -delta } else { (self.hi[b] - self.x[b]) / delta };
            if r <= cap && a.abs() > piv {
                piv = a.abs();
                pick = Some((i, r.max(0.0)));
            }
        }
        pick
    }

    /// Textbook minimum ratio with smallest-index tie-break.
    fn ratio_bland(&self, alpha: &[f64], dir: f64) -> Option<(usize, f64)> {
        let mut pick: Option<(usize, f64)> = None;
        for (i, &a) in alpha.iter().enumerate() {
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[i];
            let delta = -dir * a;
            let r = if delta < 0.0 { (self.x[b] - self.lo[b]) / -delta } else { (self.hi[b] - self.x[b]) / delta };
            if !r.is_finite() {
                continue;
            }
            let r = r.max(0.0);
            let better = match pick {
                None => true,
                Some((k, t)) => r < t - 1e-12 || (r <= t + 1e-12 && b < self.basis[k]),
            };
            if better {
                pick = Some((i, r));
            }
        }
        pick
    }

    fn pivot(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let inv = 1.0 / alpha[r];
        for k in 0..m {
            self.binv[r * m + k] *= inv;
        }
        let (head, rest) = self.binv.split_at_mut(r * m);
        let (prow, tail) = rest.split_at_mut(m);
        for (i, &a) in alpha.iter().enumerate() {
            if i == r || a == 0.0 {
                continue;
            }
            let row = if i < r { &mut head[i * m..(i + 1) * m] } else { &mut tail[(i - r - 1) * m..(i - r) * m] };
            for k in 0..m {
                row[k] -= a * prow[k];
            }
        }
    }

    /// Rebuilds the inverse by Gauss-Jordan elimination and recomputes basic values.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        self.since_refactor = 0;
        let mut a = vec![0.0; m * m];
        for (k, &b) in self.basis.iter().enumerate() {
            for (r, v) in self.column(b) {
                a[r * m + k] = v;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut p = col;
            let mut best = a[col * m + col].abs();
            for r in col + 1..m {
                let v = a[r * m + col].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best < 1e-12 {
                return false;
            }
            if p != col {
                for k in 0..m {
                    a.swap(p * m + k, col * m + k);
                    inv.swap(p * m + k, col * m + k);
                }
            }
            let d = 1.0 / a[col * m + col];
            for k in 0..m {
                a[col * m + k] *= d;
                inv[col * m + k] *= d;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = a[r * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        a[r * m + k] -= f * a[col * m + k];
                        inv[r * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        let mut rhs = vec![0.0; m];
        for j in 0..self.x.len() {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                for (r, v) in self.column(j) {
                    rhs[r] -= v * self.x[j];
                }
            }
        }
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.x[self.basis[i]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
        true
    }
}

enum ColIter<'a> {
    Sparse(std::slice::Iter<'a, (usize, f64)>),
    Single(Option<(usize, f64)>),
}

impl Iterator for ColIter<'_> {
    type Item = (usize, f64);
    fn next(&mut self) -> Option<(usize, f64)> {
        match self {
            ColIter::Sparse(it) => it.next().copied(),
            ColIter::Single(v) => v.take(),
        }
    }
}

/// Solves the continuous relaxation of `model`.
pub fn solve_lp(model: &MilpModel) -> LpSolution {
    LpProblem::from_model(model).solve()
}
