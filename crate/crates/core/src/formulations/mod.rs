//! Pairwise formulations of the non-overlap disjunction and N-box assembly.

mod assemble;
pub mod fixtures;
mod pairwise;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::instance::{Axis, InstanceError};
use crate::milp::{LinExpr, ModelError, NamedRow, VarKind};
use crate::names;

pub use assemble::{area_outer_approx, assemble_nbox, branch_priorities, sequence_pair_globals, tangent_points};
pub use pairwise::pairwise_model;
pub(crate) use pairwise::tight_sitb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairwiseKind {
    /// Big-M unary formulation with binaries `v1..v4`.
    BigMUnary,
    /// Ideal unary formulation with binaries `u^s_{p,q}`.
    Unary,
    /// Gray-code two-bit formulation with binaries `w1, w2`.
    GrayBinary,
    /// Two-bit formulation on the alternative code order, binaries `y1, y2`.
    Bldp1,
    /// Gray-code formulation plus global sequence-pair rows.
    SequencePair,
    /// Refined unary formulation with binaries `z^s_{p,q}`.
    RefinedUnary,
    /// Disaggregated formulation with per-branch copies of every variable.
    Extended,
}

impl PairwiseKind {
    pub const ALL: [PairwiseKind; 7] = [
        PairwiseKind::Unary,
        PairwiseKind::BigMUnary,
        PairwiseKind::GrayBinary,
        PairwiseKind::Bldp1,
        PairwiseKind::SequencePair,
        PairwiseKind::RefinedUnary,
        PairwiseKind::Extended,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PairwiseKind::Unary => "u",
            PairwiseKind::BigMUnary => "u-bigm",
            PairwiseKind::GrayBinary => "gray",
            PairwiseKind::Bldp1 => "bldp1",
            PairwiseKind::SequencePair => "sp",
            PairwiseKind::RefinedUnary => "ru",
            PairwiseKind::Extended => "ext",
        }
    }

    /// Code-slot encoding family used to translate refined-unary cuts.
    pub fn code_family(self) -> CodeFamily {
        match self {
            PairwiseKind::RefinedUnary => CodeFamily::Refined,
            PairwiseKind::Unary | PairwiseKind::BigMUnary | PairwiseKind::Extended => CodeFamily::Unary,
            PairwiseKind::GrayBinary | PairwiseKind::SequencePair => CodeFamily::Gray,
            PairwiseKind::Bldp1 => CodeFamily::Bb,
        }
    }

    /// Names of the pair's binaries.
    pub fn code_vars(self, i: usize, j: usize) -> Vec<String> {
        match self {
            PairwiseKind::RefinedUnary | PairwiseKind::Unary => {
                let pre = if self == PairwiseKind::Unary { "u" } else { "z" };
                SLOTS.iter().map(|&(s, fwd)| if fwd { names::ordered(pre, s, i, j) } else { names::ordered(pre, s, j, i) }).collect()
            }
            PairwiseKind::BigMUnary | PairwiseKind::Extended => (1..=4).map(|k| names::indexed("v", k, i, j)).collect(),
            PairwiseKind::GrayBinary | PairwiseKind::SequencePair => (1..=2).map(|k| names::indexed("w", k, i, j)).collect(),
            PairwiseKind::Bldp1 => (1..=2).map(|k| names::indexed("y", k, i, j)).collect(),
        }
    }

    /// Affine expressions for the four code slots
    /// `(z^y_{i,j}, z^x_{i,j}, z^y_{j,i}, z^x_{j,i})` in this kind's binaries.
    pub fn slot_exprs(self, i: usize, j: usize) -> [LinExpr; 4] {
        let v = self.code_vars(i, j);
        match self.code_family() {
            CodeFamily::Refined | CodeFamily::Unary => [0, 1, 2, 3].map(|t| LinExpr::var(&v[t])),
            CodeFamily::Gray => [
                LinExpr::constant(1.0).term(-1.0, &v[0]).term(-1.0, &v[1]),
                LinExpr::var(&v[0]).term(-1.0, &v[1]),
                LinExpr::constant(-1.0).term(1.0, &v[0]).term(1.0, &v[1]),
                LinExpr::var(&v[1]).term(-1.0, &v[0]),
            ],
            CodeFamily::Bb => [
                LinExpr::constant(1.0).term(-1.0, &v[0]).term(-1.0, &v[1]),
                LinExpr::constant(-1.0).term(1.0, &v[0]).term(1.0, &v[1]),
                LinExpr::var(&v[0]).term(-1.0, &v[1]),
                LinExpr::var(&v[1]).term(-1.0, &v[0]),
            ],
        }
    }
}

impl fmt::Display for PairwiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairwiseKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PairwiseKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown formulation `{s}`"))
    }
}

/// How a kind's binaries relate to refined-unary code slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    Refined,
    Unary,
    Gray,
    Bb,
}

/// Slot order `(z^y_{i,j}, z^x_{i,j}, z^y_{j,i}, z^x_{j,i})` as (axis, forward).
pub const SLOTS: [(Axis, bool); 4] = [(Axis::Y, true), (Axis::X, true), (Axis::Y, false), (Axis::X, false)];

/// Slot index of `z^s_{p,q}` for the pair `{p, q}`.
pub fn slot(s: Axis, forward: bool) -> usize {
    SLOTS.iter().position(|&t| t == (s, forward)).expect("slot")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutLevel {
    None,
    Plus,
    Vi,
    Vi3,
}

impl CutLevel {
    pub const ALL: [CutLevel; 4] = [CutLevel::None, CutLevel::Plus, CutLevel::Vi, CutLevel::Vi3];

    pub fn as_str(self) -> &'static str {
        match self {
            CutLevel::None => "none",
            CutLevel::Plus => "plus",
            CutLevel::Vi => "vi",
            CutLevel::Vi3 => "vi3",
        }
    }
}

impl fmt::Display for CutLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CutLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CutLevel::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| format!("unknown cut level `{s}`"))
    }
}

/// Where the tightened stay-on-floor rows of the unary-type formulations go.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SitbMode {
    InFormulation,
    AsCuts,
}

#[derive(Debug, Clone)]
pub struct AssemblyOptions {
    pub kind: PairwiseKind,
    pub cuts: CutLevel,
    pub symmetry: bool,
    pub sitb: SitbMode,
    pub area_k: usize,
}

impl AssemblyOptions {
    pub fn new(kind: PairwiseKind) -> Self {
        AssemblyOptions { kind, cuts: CutLevel::None, symmetry: false, sitb: SitbMode::AsCuts, area_k: 8 }
    }

    pub fn cuts(mut self, level: CutLevel) -> Self {
        self.cuts = level;
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.symmetry = on;
        self
    }

    pub fn area_k(mut self, k: usize) -> Self {
        self.area_k = k;
        self
    }

    pub fn sitb(mut self, mode: SitbMode) -> Self {
        self.sitb = mode;
        self
    }
}

#[derive(Debug, Error)]
pub enum FormulationError {
    #[error("pair ({0}, {1}) is out of range")]
    PairOutOfRange(usize, usize),
    #[error("formulation `{0}` does not accept cut level `{1}`")]
    CutsUnsupported(PairwiseKind, CutLevel),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cut(#[from] crate::cuts::CutError),
}

/// Variables and rows of a pairwise formulation.
#[derive(Debug, Clone, Default)]
pub struct Fragment {
    pub vars: Vec<(String, f64, f64, VarKind)>,
    pub rows: Vec<NamedRow>,
}

impl Fragment {
    pub fn var(&mut self, name: impl Into<String>, lb: f64, ub: f64, kind: VarKind) {
        self.vars.push((name.into(), lb, ub, kind));
    }

    pub fn row(&mut self, row: NamedRow) {
        self.rows.push(row);
    }

    pub fn binaries(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().filter(|v| v.3 == VarKind::Binary).map(|v| v.0.as_str())
    }

    /// Standalone model of the fragment (no objective).
    pub fn to_model(&self) -> Result<crate::milp::MilpModel, ModelError> {
        let mut m = crate::milp::MilpModel::new();
        for (n, lb, ub, k) in &self.vars {
            m.merge_var(n, *lb, *ub, *k)?;
        }
        for r in &self.rows {
            m.add_row(r)?;
        }
        Ok(m)
    }
}
