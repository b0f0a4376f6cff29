use super::OracleError;
use crate::milp::{MilpModel, Sense};

pub const MAX_DIM: usize = 14;
const MAX_ROWS: usize = 128;
const ZERO_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-7;

/// `{x : a x <= b}` over named coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub names: Vec<String>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl Polytope {
    pub fn new(dim: usize) -> Self {
        Polytope { names: (0..dim).map(|k| format!("x{}", k + 1)).collect(), a: Vec::new(), b: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn push(&mut self, a: Vec<f64>, b: f64) {
        assert_eq!(a.len(), self.dim());
        self.a.push(a);
        self.b.push(b);
    }

    /// LP relaxation of `model`: its rows plus finite variable bounds.
    pub fn from_model(model: &MilpModel) -> Self {
        let n = model.num_vars();
        let mut p = Polytope { names: model.vars().iter().map(|v| v.name.clone()).collect(), a: vec![], b: vec![] };
        for r in model.constraints() {
            let mut row = vec![0.0; n];
            for &(j, c) in &r.coeffs {
                row[j] = c;
            }
            if matches!(r.sense, Sense::Le | Sense::Eq) {
                p.push(row.clone(), r.rhs);
            }
            if matches!(r.sense, Sense::Ge | Sense::Eq) {
                p.push(row.iter().map(|v| -v).collect(), -r.rhs);
            }
        }
        for (j, v) in model.vars().iter().enumerate() {
            let mut e = vec![0.0; n];
            if v.ub.is_finite() {
                e[j] = 1.0;
                p.push(e.clone(), v.ub);
            }
            if v.lb.is_finite() {
                e[j] = -1.0;
                p.push(e, -v.lb);
            }
        }
        p
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.a.iter().zip(&self.b).all(|(a, b)| dot(a, x) <= b + tol)
    }

    pub fn coord(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn push_unique(out: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    if !out.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() <= DEDUP_TOL)) {
        out.push(v);
    }
}

/// Solves the square system `m y = r` by Gaussian elimination with partial
/// pivoting; `None` when singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-10 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = m[row][col] / m[col][col];
                if f != 0.0 {
                    for k in col..n {
                        m[row][k] -= f * m[col][k];
                    }
                    r[row] -= f * r[col];
                }
            }
        }
    }
    Some((0..n).map(|k| r[k] / m[k][k]).collect())
}

/// Vertices by the double-description method on the homogenized cone
/// `{(x, t) : a x - b t <= 0, t >= 0}`, with the combinatorial adjacency
/// test. Duplicates within 1e-7 are merged.
pub fn enumerate_vertices(p: &Polytope) -> Result<Vec<Vec<f64>>, OracleError> {
    let d = p.dim();
    if d > MAX_DIM {
        return Err(OracleError::VertexDimension(d));
    }
    let dd = d + 1;
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(p.a.len() + 1);
    let mut tcol = vec![0.0; dd];
    tcol[d] = -1.0;
    h.push(tcol);
    for (a, b) in p.a.iter().zip(&p.b) {
        let mut row = a.clone();
        row.push(-b);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        h.push(row.into_iter().map(|v| v / norm).collect());
    }
    if h.len() > MAX_ROWS {
        return Err(OracleError::TooManyRows(h.len()));
    }
    // initial simplicial cone from dd independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut reduced: Vec<Vec<f64>> = Vec::new();
    for (k, row) in h.iter().enumerate() {
        let mut v = row.clone();
        for r in &reduced {
            let piv = r.iter().position(|x| x.abs() > 1e-12).unwrap();
            let f = v[piv] / r[piv];
            for t in 0..dd {
                v[t] -= f * r[t];
            }
        }
        if let Some(piv) = v.iter().position(|x| x.abs() > 1e-9) {
            let s = v[piv];
            for x in v.iter_mut() {
                *x /= s;
            }
            for r in reduced.iter_mut() {
                let f = r[piv];
                if f != 0.0 {
                    for t in 0..dd {
                        r[t] -= f * v[t];
                    }
                }
            }
            reduced.push(v);
            basis.push(k);
            if basis.len() == dd {
                break;
            }
        }
    }
    if basis.len() < dd {
        return Err(OracleError::Unbounded);
    }
    let hb: Vec<Vec<f64>> = basis.iter().map(|&k| h[k].clone()).collect();
    let mut rays: Vec<(Vec<f64>, u128)> = Vec::new();
    for k in 0..dd {
        let mut rhs = vec![0.0; dd];
        rhs[k] = -1.0;
        let r = solve_square(hb.clone(), rhs).ok_or(OracleError::Unbounded)?;
        let mut zset = 0u128;
        for (t, &b) in basis.iter().enumerate() {
            if t != k {
                zset |= 1 << b;
            }
        }
        rays.push((normalize(r), zset));
    }
    let mut done: u128 = basis.iter().fold(0, |m, &b| m | (1 << b));
    for (k, row) in h.iter().enumerate() {
        if done >> k & 1 == 1 {
            continue;
        }
        let vals: Vec<f64> = rays.iter().map(|(r, _)| dot(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&t| vals[t] > ZERO_TOL).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&t| vals[t] < -ZERO_TOL).collect();
        let mut next: Vec<(Vec<f64>, u128)> = Vec::new();
        for &pi in &pos {
            for &ni in &neg {
                let common = rays[pi].1 & rays[ni].1;
                if (common.count_ones() as usize) + 2 < dd {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(t, (_, z))| t != pi && t != ni && z & common == common);
                if blocked {
                    continue;
                }
                let (sp, sn) = (vals[pi], vals[ni]);
                let y: Vec<f64> = rays[ni].0.iter().zip(&rays[pi].0).map(|(n, p)| sp * n - sn * p).collect();
                next.push((normalize(y), common | (1 << k)));
            }
        }
        for (t, ray) in rays.iter_mut().enumerate() {
            if vals[t].abs() <= ZERO_TOL {
                ray.1 |= 1 << k;
            }
        }
        let mut kept: Vec<(Vec<f64>, u128)> = rays.into_iter().enumerate().filter(|(t, _)| vals[*t] <= ZERO_TOL).map(|(_, r)| r).collect();
        kept.extend(next);
        rays = kept;
        done |= 1 << k;
    }
    let mut out = Vec::new();
    for (r, _) in rays {
        let t = r[d];
        if t > 1e-9 {
            let x: Vec<f64> = r[..d].iter().map(|v| v / t).collect();
            push_unique(&mut out, x);
        } else if r[..d].iter().any(|v| v.abs() > 1e-9) {
            return Err(OracleError::Unbounded);
        }
    }
    Ok(out)
}

fn normalize(mut y: Vec<f64>) -> Vec<f64> {
    let m = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        for v in y.iter_mut() {
            *v /= m;
            if v.abs() < 1e-14 {
                *v = 0.0;
            }
        }
    }
    y
}

/// Vertices by trying every choice of `dim` rows as an active set. Exact
/// but exponential; kept as a cross-check for the double-description code.
pub fn enumerate_vertices_by_bases(p: &Polytope, max_bases: u128) -> Result<Vec<Vec<f64>>, OracleError> {
    let d = p.dim();
    let m = p.a.len();
    let mut total: u128 = 1;
    for k in 0..d as u128 {
        total = total * (m as u128 - k) / (k + 1);
    }
    if total > max_bases {
        return Err(OracleError::TooManyBases(total));
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    if d > m {
        return Ok(out);
    }
    loop {
        let mat = idx.iter().map(|&r| p.a[r].clone()).collect();
        let rhs = idx.iter().map(|&r| p.b[r]).collect();
        if let Some(x) = solve_square(mat, rhs) {
            if p.contains(&x, 1e-9) {
                push_unique(&mut out, x);
            }
        }
        // next combination
        let mut t = d;
        loop {
            if t == 0 {
                return Ok(out);
            }
            t -= 1;
            if idx[t] != t + m - d {
                break;
            }
            if t == 0 {
                return Ok(out);
            }
        }
        idx[t] += 1;
        for u in t + 1..d {
            idx[u] = idx[u - 1] + 1;
        }
    }
}
