//! Problem instances, derived width bounds, perturbation, and text I/O.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// A floor axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpec {
    /// 1-based identifier as written in files.
    pub id: usize,
    pub area: f64,
    pub aspect: f64,
}

/// Floor, boxes and pairwise costs.
///
/// Boxes are addressed by 0-based index in the API; `costs` keys are 0-based
/// pairs `(i, j)` with `i < j`. The `name` is metadata and is ignored by
/// equality.
#[derive(Debug, Clone)]
pub struct FlpInstance {
    pub name: String,
    pub floor: [f64; 2],
    pub boxes: Vec<BoxSpec>,
    pub costs: BTreeMap<(usize, usize), f64>,
}

impl PartialEq for FlpInstance {
    fn eq(&self, o: &Self) -> bool {
        self.floor == o.floor && self.boxes == o.boxes && self.costs == o.costs
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("box {id} cannot fit along axis {axis}: area {area} exceeds {limit}")]
    DoesNotFit { id: usize, axis: Axis, area: f64, limit: f64 },
}

impl FlpInstance {
    pub fn new(floor_x: f64, floor_y: f64) -> Self {
        FlpInstance { name: "instance".into(), floor: [floor_x, floor_y], boxes: Vec::new(), costs: BTreeMap::new() }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Appends a box and returns its 0-based index.
    pub fn add_box(&mut self, area: f64, aspect: f64) -> usize {
        let id = self.boxes.len() + 1;
        self.boxes.push(BoxSpec { id, area, aspect });
        id - 1
    }

    /// Sets `p_{i,j}` for 0-based `i != j`.
    pub fn set_cost(&mut self, i: usize, j: usize, p: f64) {
        self.costs.insert((i.min(j), i.max(j)), p);
    }

    pub fn n(&self) -> usize {
        self.boxes.len()
    }

    pub fn floor_len(&self, axis: Axis) -> f64 {
        self.floor[axis.idx()]
    }

    pub fn cost(&self, i: usize, j: usize) -> f64 {
        self.costs.get(&(i.min(j), i.max(j))).copied().unwrap_or(0.0)
    }

    /// All pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        if !(self.floor[0] > 0.0 && self.floor[1] > 0.0) || !self.floor.iter().all(|v| v.is_finite()) {
            return Err(InstanceError::Invalid("floor dimensions must be positive".into()));
        }
        for (k, b) in self.boxes.iter().enumerate() {
            if b.id != k + 1 {
                return Err(InstanceError::Invalid(format!("box ids must be 1..N in order, found {} at position {}", b.id, k + 1)));
            }
            if !(b.area > 0.0 && b.area.is_finite()) {
                return Err(InstanceError::Invalid(format!("box {} must have positive area", b.id)));
            }
            if !(b.aspect >= 1.0 && b.aspect.is_finite()) {
                return Err(InstanceError::Invalid(format!("box {} must have aspect ratio at least 1", b.id)));
            }
        }
        for (&(i, j), &p) in &self.costs {
            if i >= j || j >= self.n() {
                return Err(InstanceError::Invalid(format!("cost key ({}, {}) out of range", i + 1, j + 1)));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(InstanceError::Invalid(format!("cost of pair ({}, {}) must be nonnegative", i + 1, j + 1)));
            }
        }
        Ok(())
    }
}

/// Width bounds per box and axis, indexed `[box][axis]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    pub lb: Vec<[f64; 2]>,
    pub ub: Vec<[f64; 2]>,
}

impl BoxBounds {
    pub fn lb(&self, i: usize, s: Axis) -> f64 {
        self.lb[i][s.idx()]
    }

    pub fn ub(&self, i: usize, s: Axis) -> f64 {
        self.ub[i][s.idx()]
    }
}

/// `ub = min(sqrt(area * aspect), L)` and `lb = area / ub` per axis.
pub fn derive_bounds(inst: &FlpInstance) -> Result<BoxBounds, InstanceError> {
    inst.validate()?;
    let mut lb = Vec::with_capacity(inst.n());
    let mut ub = Vec::with_capacity(inst.n());
    for b in &inst.boxes {
        let mut l = [0.0; 2];
        let mut u = [0.0; 2];
        for s in Axis::BOTH {
            let len = inst.floor_len(s);
            if b.area > len * len {
                return Err(InstanceError::DoesNotFit { id: b.id, axis: s, area: b.area, limit: len * len });
            }
            u[s.idx()] = (b.area * b.aspect).sqrt().min(len);
            l[s.idx()] = b.area / u[s.idx()];
        }
        if u[0] * u[1] < b.area * (1.0 - 1e-12) {
            return Err(InstanceError::DoesNotFit { id: b.id, axis: Axis::X, area: b.area, limit: u[0] * u[1] });
        }
        lb.push(l);
        ub.push(u);
    }
    Ok(BoxBounds { lb, ub })
}

fn fmt_gamma(g: f64) -> String {
    if g.fract() == 0.0 {
        format!("{g:.1}")
    } else {
        g.to_string()
    }
}

/// Scales every nonzero area and cost by `1 + gamma * t`, `t ~ N(0, 1)`, and
/// sets every aspect ratio to `aspect`. Draws with `1 + gamma * t < 0.05` are
/// redrawn.
pub fn perturb_instance(inst: &FlpInstance, gamma: f64, aspect: f64, seed: u64) -> FlpInstance {
    assert!(gamma >= 0.0, "gamma must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factor = || loop {
        let t: f64 = StandardNormal.sample(&mut rng);
        let f = 1.0 + gamma * t;
        if f >= 0.05 {
            return f;
        }
    };
    let mut out = inst.clone();
    for b in &mut out.boxes {
        let f = factor();
        if b.area != 0.0 {
            b.area *= f;
        }
        b.aspect = aspect;
    }
    for p in out.costs.values_mut() {
        let f = factor();
        if *p != 0.0 {
            *p *= f;
        }
    }
    let a = if aspect.fract() == 0.0 { format!("{aspect:.0}") } else { aspect.to_string() };
    out.name = format!("{}-{}({})", inst.name, fmt_gamma(gamma), a);
    out
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<f64, InstanceError> {
    let tok = tok.ok_or_else(|| InstanceError::Parse { line, msg: format!("missing {what}") })?;
    let v: f64 = tok.parse().map_err(|_| InstanceError::Parse { line, msg: format!("bad {what} `{tok}`") })?;
    if !v.is_finite() {
        return Err(InstanceError::Parse { line, msg: format!("non-finite {what}") });
    }
    Ok(v)
}

fn parse_id(tok: Option<&str>, line: usize, what: &str) -> Result<usize, InstanceError> {
    let tok = tok.ok_or_else(|| InstanceError::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| InstanceError::Parse { line, msg: format!("bad {what} `{tok}`") })
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((k + 1, toks))
    })
}

fn expect_len(toks: &[&str], n: usize, line: usize) -> Result<(), InstanceError> {
    if toks.len() != n {
        return Err(InstanceError::Parse { line, msg: format!("`{}` takes {} fields, found {}", toks[0], n - 1, toks.len() - 1) });
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<FlpInstance, InstanceError> {
    let mut floor = None;
    let mut boxes: BTreeMap<usize, (usize, BoxSpec)> = BTreeMap::new();
    let mut costs: Vec<(usize, usize, usize, f64)> = Vec::new();
    for (line, toks) in records(text) {
        let mut it = toks.iter().copied().skip(1);
        match toks[0] {
            "floor" => {
                expect_len(&toks, 3, line)?;
                if floor.is_some() {
                    return Err(InstanceError::Parse { line, msg: "duplicate floor line".into() });
                }
                floor = Some([parse_field(it.next(), line, "floor length")?, parse_field(it.next(), line, "floor length")?]);
            }
            "box" => {
                expect_len(&toks, 4, line)?;
                let id = parse_id(it.next(), line, "box id")?;
                let area = parse_field(it.next(), line, "area")?;
                let aspect = parse_field(it.next(), line, "aspect")?;
                if boxes.insert(id, (line, BoxSpec { id, area, aspect })).is_some() {
                    return Err(InstanceError::Parse { line, msg: format!("duplicate box id {id}") });
                }
            }
            "cost" => {
                expect_len(&toks, 4, line)?;
                let i = parse_id(it.next(), line, "box id")?;
                let j = parse_id(it.next(), line, "box id")?;
                let p = parse_field(it.next(), line, "cost")?;
                if i >= j {
                    return Err(InstanceError::Parse { line, msg: format!("pair must satisfy i<j, got {i} {j}") });
                }
                costs.push((line, i, j, p));
            }
            other => return Err(InstanceError::Parse { line, msg: format!("unknown record `{other}`") }),
        }
    }
    let floor = floor.ok_or(InstanceError::Parse { line: 0, msg: "missing floor line".into() })?;
    let mut inst = FlpInstance::new(floor[0], floor[1]);
    for (k, (&id, (line, b))) in boxes.iter().enumerate() {
        if id != k + 1 {
            return Err(InstanceError::Parse { line: *line, msg: format!("box ids must be consecutive from 1, found {id}") });
        }
        inst.boxes.push(b.clone());
    }
    for (line, i, j, p) in costs {
        if i == 0 || j > inst.n() {
            return Err(InstanceError::Parse { line, msg: format!("cost references unknown box in pair ({i}, {j})") });
        }
        if inst.costs.insert((i - 1, j - 1), p).is_some() {
            return Err(InstanceError::Parse { line, msg: format!("duplicate cost for pair ({i}, {j})") });
        }
    }
    inst.validate()?;
    Ok(inst)
}

pub fn write_instance(inst: &FlpInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "floor {} {}", inst.floor[0], inst.floor[1]);
    for b in &inst.boxes {
        let _ = writeln!(out, "box {} {} {}", b.id, b.area, b.aspect);
    }
    for (&(i, j), p) in &inst.costs {
        let _ = writeln!(out, "cost {} {} {}", i + 1, j + 1, p);
    }
    out
}

/// Continuous layout values, indexed `[box][axis]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub centers: Vec<[f64; 2]>,
    pub widths: Vec<[f64; 2]>,
    /// Optional distance auxiliaries per 0-based pair.
    pub dist: BTreeMap<(usize, usize), [f64; 2]>,
}

impl Layout {
    pub fn new(n: usize) -> Self {
        Layout { centers: vec![[0.0; 2]; n], widths: vec![[0.0; 2]; n], dist: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.centers.len()
    }

    pub fn c(&self, i: usize, s: Axis) -> f64 {
        self.centers[i][s.idx()]
    }

    pub fn l(&self, i: usize, s: Axis) -> f64 {
        self.widths[i][s.idx()]
    }

    /// True when box `i` precedes box `j` along `s` within `tol`.
    pub fn precedes(&self, i: usize, j: usize, s: Axis, tol: f64) -> bool {
        self.c(i, s) + 0.5 * self.l(i, s) <= self.c(j, s) - 0.5 * self.l(j, s) + tol
    }
}

pub fn parse_layout(text: &str) -> Result<Layout, InstanceError> {
    let mut centers: BTreeMap<usize, [f64; 2]> = BTreeMap::new();
    let mut widths: BTreeMap<usize, [f64; 2]> = BTreeMap::new();
    for (line, toks) in records(text) {
        expect_len(&toks, 4, line)?;
        let id = parse_id(toks.get(1).copied(), line, "box id")?;
        let v = [parse_field(toks.get(2).copied(), line, "value")?, parse_field(toks.get(3).copied(), line, "value")?];
        let slot = match toks[0] {
            "center" => &mut centers,
            "width" => &mut widths,
            other => return Err(InstanceError::Parse { line, msg: format!("unknown record `{other}`") }),
        };
        if slot.insert(id, v).is_some() {
            return Err(InstanceError::Parse { line, msg: format!("duplicate {} for box {id}", toks[0]) });
        }
    }
    let n = centers.len();
    if widths.len() != n || (1..=n).any(|id| !centers.contains_key(&id) || !widths.contains_key(&id)) {
        return Err(InstanceError::Invalid("layout needs one center and one width line per box, ids 1..N".into()));
    }
    Ok(Layout { centers: centers.into_values().collect(), widths: widths.into_values().collect(), dist: BTreeMap::new() })
}

pub fn write_layout(layout: &Layout) -> String {
    let mut out = String::new();
    for (k, c) in layout.centers.iter().enumerate() {
        let _ = writeln!(out, "center {} {} {}", k + 1, c[0], c[1]);
    }
    for (k, w) in layout.widths.iter().enumerate() {
        let _ = writeln!(out, "width {} {} {}", k + 1, w[0], w[1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> FlpInstance {
        let mut inst = FlpInstance::new(10.0, 10.0);
        inst.add_box(4.0, 4.0);
        inst.add_box(4.0, 4.0);
        inst.set_cost(0, 1, 1.0);
        inst
    }

    #[test]
    fn bounds_examples() {
        let b = derive_bounds(&toy()).unwrap();
        assert_eq!((b.lb(0, Axis::X), b.ub(0, Axis::X)), (1.0, 4.0));
        let mut sq = FlpInstance::new(10.0, 10.0);
        sq.add_box(1.0, 1.0);
        sq.add_box(100.0, 1.0);
        let b = derive_bounds(&sq).unwrap();
        assert_eq!((b.lb(0, Axis::Y), b.ub(0, Axis::Y)), (1.0, 1.0));
        assert_eq!((b.lb(1, Axis::X), b.ub(1, Axis::X)), (10.0, 10.0));
    }

    #[test]
    fn oversized_box_is_rejected() {
        let mut inst = FlpInstance::new(10.0, 3.0);
        inst.add_box(12.0, 2.0);
        let err = derive_bounds(&inst).unwrap_err();
        assert!(matches!(err, InstanceError::DoesNotFit { id: 1, axis: Axis::Y, .. }), "{err:?}");
    }

    #[test]
    fn parse_examples() {
        let one = parse_instance("floor 5 5\nbox 1 2 1.5\n").unwrap();
        assert_eq!(one.n(), 1);
        assert!(one.costs.is_empty());
        let two = parse_instance("# toy\nfloor 10 10\nbox 1 4 4\nbox 2 4 4\ncost 1 2 1.0\n").unwrap();
        assert_eq!(two.cost(0, 1), 1.0);
        let err = parse_instance("floor 10 10\nbox 1 4 4\nbox 2 4 4\ncost 2 1 5.0\n").unwrap_err();
        assert!(err.to_string().contains("pair must satisfy i<j"), "{err}");
        assert!(matches!(parse_instance("floor 1 1\nbox 1 1 1\nbox 1 1 1\n"), Err(InstanceError::Parse { line: 3, .. })));
        assert!(matches!(parse_instance("floor 9 9\nbox 1 1 1\ncost 1 3 1\n"), Err(InstanceError::Parse { line: 3, .. })));
        assert!(matches!(parse_instance("floor 9 9\nbox 1 1\n"), Err(InstanceError::Parse { line: 2, .. })));
    }

    #[test]
    fn perturbation_naming_and_identity() {
        let base = toy().with_name("toy");
        let p = perturb_instance(&base, 0.0, 5.0, 42);
        assert_eq!(p.name, "toy-0.0(5)");
        assert!(p.boxes.iter().all(|b| b.aspect == 5.0 && b.area == 4.0));
        assert_eq!(p.costs, base.costs);
        assert_eq!(perturb_instance(&base, 0.1, 4.0, 7).name, "toy-0.1(4)");
    }

    #[test]
    fn layout_round_trip() {
        let text = "center 1 1 2\ncenter 2 3.5 2\nwidth 1 2 2\nwidth 2 1 4\n";
        let l = parse_layout(text).unwrap();
        assert_eq!(write_layout(&l), text);
        assert!(l.precedes(0, 1, Axis::X, 0.0));
    }
}
