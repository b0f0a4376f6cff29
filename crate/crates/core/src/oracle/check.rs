use std::fmt::{self, Write as _};

use super::OracleError;
use crate::formulations::area_outer_approx;
use crate::instance::{derive_bounds, Axis, FlpInstance, Layout};
use crate::FEAS_TOL;

/// One checked condition; it passes when `slack >= -tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub slack: f64,
}

/// Four-way non-overlap branches satisfied by a pair, in the order
/// `i <-y j`, `i <-x j`, `j <-y i`, `j <-x i` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct PairVerdict {
    pub i: usize,
    pub j: usize,
    pub branches: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub floor: Vec<Verdict>,
    pub widths: Vec<Verdict>,
    pub area: Vec<Verdict>,
    pub pairs: Vec<PairVerdict>,
    pub objective: f64,
    pub tol: f64,
}

fn min_slack(v: &[Verdict]) -> f64 {
    v.iter().map(|v| v.slack).fold(f64::INFINITY, f64::min)
}

impl FeasibilityReport {
    pub fn floor_ok(&self) -> bool {
        min_slack(&self.floor) >= -self.tol
    }

    pub fn widths_ok(&self) -> bool {
        min_slack(&self.widths) >= -self.tol
    }

    pub fn area_ok(&self) -> bool {
        min_slack(&self.area) >= -self.tol
    }

    pub fn non_overlap_ok(&self) -> bool {
        self.pairs.iter().all(|p| !p.branches.is_empty())
    }

    pub fn feasible(&self) -> bool {
        self.floor_ok() && self.widths_ok() && self.area_ok() && self.non_overlap_ok()
    }

    pub const CSV_HEADER: &'static str = "feasible,objective,floor_slack,width_slack,area_slack,overlapping_pairs";

    pub fn csv_row(&self) -> String {
        let overlapping = self.pairs.iter().filter(|p| p.branches.is_empty()).count();
        format!(
            "{},{},{},{},{},{}",
            self.feasible(),
            self.objective,
            min_slack(&self.floor),
            min_slack(&self.widths),
            min_slack(&self.area),
            overlapping
        )
    }
}

impl fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "feasible: {}", if self.feasible() { "yes" } else { "no" })?;
        writeln!(f, "objective: {}", self.objective)?;
        for (title, list) in [("floor", &self.floor), ("width", &self.widths), ("area", &self.area)] {
            for v in list {
                writeln!(f, "{title} {} {} slack {}", v.name, mark(v.slack >= -self.tol), v.slack)?;
            }
        }
        for p in &self.pairs {
            let mut s = String::new();
            for b in &p.branches {
                let _ = write!(s, " d{}", b + 1);
            }
            if s.is_empty() {
                s.push_str(" none");
            }
            writeln!(f, "pair {} {} {}:{}", p.i + 1, p.j + 1, mark(!p.branches.is_empty()), s)?;
        }
        Ok(())
    }
}

/// Checks a layout against floor, width bounds, exact area and pairwise
/// non-overlap, and evaluates the objective from the centers.
pub fn check_layout(inst: &FlpInstance, layout: &Layout) -> Result<FeasibilityReport, OracleError> {
    check_with_area(inst, layout, None)
}

/// As [`check_layout`], but the area verdict uses the `area_k` tangent rows
/// the formulations impose instead of `l^x l^y >= alpha`.
pub fn check_layout_tangent(inst: &FlpInstance, layout: &Layout, area_k: usize) -> Result<FeasibilityReport, OracleError> {
    check_with_area(inst, layout, Some(area_k))
}

fn check_with_area(inst: &FlpInstance, layout: &Layout, area_k: Option<usize>) -> Result<FeasibilityReport, OracleError> {
    if layout.n() != inst.n() || layout.widths.len() != inst.n() {
        return Err(OracleError::Dimension { got: layout.n(), want: inst.n() });
    }
    let bounds = derive_bounds(inst)?;
    let mut rep = FeasibilityReport { floor: vec![], widths: vec![], area: vec![], pairs: vec![], objective: 0.0, tol: FEAS_TOL };
    for (i, b) in inst.boxes.iter().enumerate() {
        for s in Axis::BOTH {
            let (cc, ll) = (layout.c(i, s), layout.l(i, s));
            rep.floor.push(Verdict { name: format!("{}_{}", s, i + 1), slack: (cc - 0.5 * ll).min(inst.floor_len(s) - cc - 0.5 * ll) });
            rep.widths.push(Verdict { name: format!("{}_{}", s, i + 1), slack: (ll - bounds.lb(i, s)).min(bounds.ub(i, s) - ll) });
        }
        let (lx, ly) = (layout.l(i, Axis::X), layout.l(i, Axis::Y));
        let slack = match area_k {
            None => lx * ly - b.area,
            Some(k) => area_outer_approx(i, b.area, bounds.lb(i, Axis::X), bounds.ub(i, Axis::X), k)
                .iter()
                .map(|r| -r.violation(|n: &str| if n.starts_with("l_x") { lx } else { ly }))
                .fold(f64::INFINITY, f64::min),
        };
        rep.area.push(Verdict { name: format!("{}", i + 1), slack });
    }
    for (i, j) in inst.pairs() {
        let options = [(i, j, Axis::Y), (i, j, Axis::X), (j, i, Axis::Y), (j, i, Axis::X)];
        let branches = (0..4).filter(|&k| layout.precedes(options[k].0, options[k].1, options[k].2, FEAS_TOL)).collect();
        rep.pairs.push(PairVerdict { i, j, branches });
        let p = inst.cost(i, j);
        rep.objective += p * Axis::BOTH.iter().map(|&s| (layout.c(i, s) - layout.c(j, s)).abs()).sum::<f64>();
    }
    Ok(rep)
}
