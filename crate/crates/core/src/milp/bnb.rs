//! Best-bound branch-and-bound over binary variables.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::{self, Write};
use std::time::Duration;

use web_time::Instant;

use super::model::{MilpModel, VarKind};
use super::simplex::{LpProblem, LpStatus};

pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// The dual bound reached the requested cutoff before optimality was proven.
    BoundLimit,
    NodeLimit,
    TimeLimit,
    /// The relaxation is unbounded below.
    Unbounded,
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::BoundLimit => "bound-limit",
            SolveStatus::NodeLimit => "node-limit",
            SolveStatus::TimeLimit => "time-limit",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NumericalFailure => "numerical-failure",
        }
    }

    pub fn parse(s: &str) -> Option<SolveStatus> {
        [
            SolveStatus::Optimal,
            SolveStatus::Infeasible,
            SolveStatus::BoundLimit,
            SolveStatus::NodeLimit,
            SolveStatus::TimeLimit,
            SolveStatus::Unbounded,
            SolveStatus::NumericalFailure,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }

    pub fn is_limit(self) -> bool {
        matches!(self, SolveStatus::BoundLimit | SolveStatus::NodeLimit | SolveStatus::TimeLimit)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct Limits {
    pub time: Option<Duration>,
    pub nodes: Option<usize>,
    /// Relative gap tolerance used for pruning and termination.
    pub gap_tol: f64,
    /// Stop once the dual bound is at least this value.
    pub cutoff: Option<f64>,
    pub record_log: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { time: None, nodes: None, gap_tol: 1e-6, cutoff: None, record_log: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeLogEntry {
    pub node: usize,
    pub best_bound: f64,
    pub incumbent: Option<f64>,
    pub depth: usize,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub point: Option<Vec<f64>>,
    pub bound: f64,
    pub nodes: usize,
    pub time: Duration,
    pub root_bound: f64,
    pub log: Vec<NodeLogEntry>,
}

impl SolveResult {
    /// Relative gap `100 (U - L) / U`; infinite without an incumbent.
    pub fn gap_pct(&self) -> f64 {
        match self.objective {
            Some(u) => relative_gap(u, self.bound),
            None => f64::INFINITY,
        }
    }
}

pub fn relative_gap(upper: f64, lower: f64) -> f64 {
    let diff = (upper - lower).max(0.0);
    if diff <= 1e-9 * upper.abs().max(1.0) {
        0.0
    } else if upper.abs() < 1e-12 {
        f64::INFINITY
    } else {
        100.0 * diff / upper.abs()
    }
}

/// Writes a node log as CSV with header `node,best_bound,incumbent,depth`.
pub fn write_node_log<W: Write>(mut w: W, log: &[NodeLogEntry]) -> io::Result<()> {
    writeln!(w, "node,best_bound,incumbent,depth")?;
    for e in log {
        let inc = e.incumbent.map(|v| v.to_string()).unwrap_or_default();
        writeln!(w, "{},{},{},{}", e.node, e.best_bound, inc, e.depth)?;
    }
    Ok(())
}

struct Node {
    bound: f64,
    id: usize,
    depth: usize,
    lb: Vec<f64>,
    ub: Vec<f64>,
    x: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Node {
    // Max-heap: smallest bound first, then oldest node.
    fn cmp(&self, o: &Self) -> Ordering {
        o.bound.total_cmp(&self.bound).then(o.id.cmp(&self.id))
    }
}

struct Search<'a> {
    model: &'a MilpModel,
    lp: LpProblem,
    limits: &'a Limits,
    start: Instant,
    nodes: usize,
    incumbent: Option<(f64, Vec<f64>)>,
    numerical: bool,
}

impl Search<'_> {
    fn prunable(&self, bound: f64) -> bool {
        match &self.incumbent {
            Some((u, _)) => bound >= u - self.limits.gap_tol * u.abs().max(1.0),
            None => false,
        }
    }

    /// Solves a node LP; returns its bound and point when it survives.
    fn evaluate(&mut self, lb: &[f64], ub: &[f64], parent: f64) -> Option<(f64, Vec<f64>)> {
        self.nodes += 1;
        let sol = self.lp.solve_bounds(lb, ub);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return None,
            _ => {
                self.numerical = true;
                return None;
            }
        }
        let bound = sol.objective.max(parent);
        if self.prunable(bound) {
            return None;
        }
        if self.model.is_integral(&sol.x, INT_TOL) {
            self.incumbent = Some((sol.objective, sol.x));
            return None;
        }
        Some((bound, sol.x))
    }

    fn branch_var(&self, x: &[f64]) -> Option<usize> {
        let mut best: Option<(i32, f64, usize)> = None;
        for j in self.model.binaries() {
            let frac = (x[j] - x[j].floor()).min(x[j].ceil() - x[j]);
            if frac <= INT_TOL {
                continue;
            }
            let key = (self.model.var(j).priority, frac, j);
            let better = match best {
                None => true,
                Some((p, f, _)) => key.0 > p || (key.0 == p && key.1 > f + 1e-12),
            };
            if better {
                best = Some(key);
            }
        }
        best.map(|b| b.2)
    }
}

/// Solves `model` by LP-based branch-and-bound.
pub fn solve_milp(model: &MilpModel, limits: &Limits) -> SolveResult {
    let start = Instant::now();
    let mut s = Search { model, lp: LpProblem::from_model(model), limits, start, nodes: 0, incumbent: None, numerical: false };
    let lb = s.lp.lower().to_vec();
    let ub = s.lp.upper().to_vec();
    let mut log = Vec::new();
    let mut heap = BinaryHeap::new();

    s.nodes += 1;
    let root = s.lp.solve_bounds(&lb, &ub);
    let root_bound = match root.status {
        LpStatus::Optimal => root.objective,
        LpStatus::Infeasible => f64::INFINITY,
        LpStatus::Unbounded => f64::NEG_INFINITY,
        _ => f64::NAN,
    };
    let early = match root.status {
        LpStatus::Optimal => None,
        LpStatus::Infeasible => Some(SolveStatus::Infeasible),
        LpStatus::Unbounded => Some(SolveStatus::Unbounded),
        _ => Some(SolveStatus::NumericalFailure),
    };
    if let Some(status) = early {
        return SolveResult { status, objective: None, point: None, bound: root_bound, nodes: 1, time: start.elapsed(), root_bound, log };
    }
    if model.is_integral(&root.x, INT_TOL) {
        s.incumbent = Some((root.objective, root.x));
    } else {
        heap.push(Node { bound: root.objective, id: 0, depth: 0, lb, ub, x: root.x });
    }
    let mut next_id = 1;
    let mut log_entry = |s: &Search, heap: &BinaryHeap<Node>, depth: usize| {
        if limits.record_log {
            let inc = s.incumbent.as_ref().map(|i| i.0);
            let open = heap.peek().map(|n| n.bound).unwrap_or(f64::INFINITY);
            let best_bound = match inc {
                Some(u) => open.min(u),
                None => open,
            };
            log.push(NodeLogEntry { node: s.nodes, best_bound, incumbent: inc, depth });
        }
    };
    log_entry(&s, &heap, 0);

    let mut status = SolveStatus::Optimal;
    while let Some(node) = heap.peek() {
        if s.prunable(node.bound) {
            heap.clear();
            break;
        }
        if let Some(c) = limits.cutoff {
            if node.bound >= c {
                status = SolveStatus::BoundLimit;
                break;
            }
        }
        if limits.nodes.is_some_and(|n| s.nodes >= n) {
            status = SolveStatus::NodeLimit;
            break;
        }
        if limits.time.is_some_and(|t| s.start.elapsed() >= t) {
            status = SolveStatus::TimeLimit;
            break;
        }
        let node = heap.pop().expect("peeked");
        let Some(j) = s.branch_var(&node.x) else {
            // Integral within tolerance but rejected earlier; treat as a leaf.
            continue;
        };
        for val in [0.0, 1.0] {
            let (mut clb, mut cub) = (node.lb.clone(), node.ub.clone());
            clb[j] = val;
            cub[j] = val;
            if let Some((bound, x)) = s.evaluate(&clb, &cub, node.bound) {
                heap.push(Node { bound, id: next_id, depth: node.depth + 1, lb: clb, ub: cub, x });
                next_id += 1;
            }
        }
        log_entry(&s, &heap, node.depth + 1);
    }

    let (objective, point) = match s.incumbent.take() {
        Some((v, x)) => (Some(v), Some(x)),
        None => (None, None),
    };
    let open = heap.peek().map(|n| n.bound);
    let bound = match (open, objective) {
        (Some(b), Some(u)) => b.min(u),
        (Some(b), None) => b,
        (None, Some(u)) => u,
        (None, None) => f64::INFINITY,
    };
    if status == SolveStatus::Optimal {
        if objective.is_none() {
            status = SolveStatus::Infeasible;
        }
        if s.numerical {
            status = SolveStatus::NumericalFailure;
        }
    }
    SolveResult { status, objective, point, bound, nodes: s.nodes, time: start.elapsed(), root_bound, log }
}

/// Convenience: true when every variable is continuous.
pub fn is_pure_lp(model: &MilpModel) -> bool {
    model.vars().iter().all(|v| v.kind == VarKind::Continuous)
}
