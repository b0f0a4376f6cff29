//! Commands behind the `flp` binary. Each returns data so tests can call
//! them without spawning a process.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use flp_core::formulations::{assemble_nbox, AssemblyOptions, CutLevel, PairwiseKind};
use flp_core::instance::{parse_layout, write_layout};
use flp_core::milp::{export_lp, solve_milp, Limits};
use flp_core::oracle::{brute_force_optimum, check_layout, check_layout_tangent, layout_from_point, FeasibilityReport};
use flp_core::{parse_instance, perturb_instance, write_instance, FlpInstance, Layout, SolveStatus};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "instance,formulation,cuts,symmetry,status,incumbent,bound,gap_pct,nodes,time_ms";

/// Extension used for instance files found by `bench`.
pub const INSTANCE_EXT: &str = "flp";

/// One solve, as written to the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub formulation: String,
    pub cuts: String,
    pub symmetry: bool,
    pub status: String,
    pub incumbent: Option<f64>,
    /// Dual bound; `-inf` when the root relaxation was not solved.
    pub bound: f64,
    /// `inf` without an incumbent.
    pub gap_pct: f64,
    pub nodes: usize,
    pub time_ms: u64,
}

impl BenchRow {
    fn error(instance: &str, opts: &AssemblyOptions) -> Self {
        BenchRow {
            instance: instance.to_string(),
            formulation: opts.kind.to_string(),
            cuts: opts.cuts.to_string(),
            symmetry: opts.symmetry,
            status: "error".into(),
            incumbent: None,
            bound: f64::NEG_INFINITY,
            gap_pct: f64::INFINITY,
            nodes: 0,
            time_ms: 0,
        }
    }
}

pub fn write_rows<W: Write>(w: W, rows: &[BenchRow], header: bool) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(header).from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_rows(text: &str) -> Result<Vec<BenchRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let got: Vec<&str> = rd.headers()?.iter().collect();
    if got.join(",") != CSV_HEADER {
        bail!("unexpected CSV header `{}`", got.join(","));
    }
    rd.deserialize().map(|r| r.map_err(Into::into)).collect()
}

/// Appends rows to `path`, writing the header first when the file is new or empty.
pub fn append_rows(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let f = OpenOptions::new().create(true).append(true).open(path).with_context(|| format!("opening {}", path.display()))?;
    write_rows(f, rows, fresh)
}

/// Reads an instance and names it after the file stem.
pub fn load_instance(path: &Path) -> Result<FlpInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(inst.with_name(name))
}

pub fn load_layout(path: &Path) -> Result<Layout> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_layout(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes the perturbed instance and returns its path. Without `out` the
/// file goes next to the base instance, named `<base>-<gamma>(<alpha>).flp`.
pub fn cmd_gen(base: &Path, gamma: f64, alpha: f64, seed: u64, out: Option<&Path>) -> Result<PathBuf> {
    if !gamma.is_finite() || gamma < 0.0 {
        bail!("gamma must be nonnegative");
    }
    if !alpha.is_finite() || alpha < 1.0 {
        bail!("aspect ratio must be at least 1");
    }
    let inst = load_instance(base)?;
    let gen = perturb_instance(&inst, gamma, alpha, seed);
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => base.with_file_name(format!("{}.{INSTANCE_EXT}", gen.name)),
    };
    fs::write(&path, write_instance(&gen)).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn cmd_build(inst: &FlpInstance, opts: &AssemblyOptions) -> Result<String> {
    let model = assemble_nbox(inst, opts)?;
    Ok(export_lp(&model))
}

/// Result of one `solve`: the CSV row plus the layout when one was found.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub row: BenchRow,
    pub status: SolveStatus,
    pub layout: Option<Layout>,
}

pub fn cmd_solve(inst: &FlpInstance, opts: &AssemblyOptions, limits: &Limits) -> Result<SolveOutcome> {
    let model = assemble_nbox(inst, opts)?;
    let r = solve_milp(&model, limits);
    let layout = r.point.as_ref().map(|x| layout_from_point(&model, x, inst.n()));
    let row = BenchRow {
        instance: inst.name.clone(),
        formulation: opts.kind.to_string(),
        cuts: opts.cuts.to_string(),
        symmetry: opts.symmetry,
        status: r.status.to_string(),
        incumbent: r.objective,
        bound: r.bound,
        gap_pct: r.gap_pct(),
        nodes: r.nodes,
        time_ms: r.time.as_millis() as u64,
    };
    Ok(SolveOutcome { row, status: r.status, layout })
}

/// Instance files in `dir`, sorted by name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == INSTANCE_EXT))
        .collect();
    files.sort();
    Ok(files)
}

/// The option grid run by `bench`.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub kinds: Vec<PairwiseKind>,
    pub levels: Vec<CutLevel>,
    pub symmetry: Vec<bool>,
    pub area_k: usize,
}

impl Matrix {
    pub fn cells(&self) -> Vec<AssemblyOptions> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for &level in &self.levels {
                for &sym in &self.symmetry {
                    out.push(AssemblyOptions::new(kind).cuts(level).symmetry(sym).area_k(self.area_k));
                }
            }
        }
        out
    }
}

/// Runs every instance in `dir` through every cell of `matrix`. Failures
/// become rows with status `error`; `sink` sees each row as it completes.
pub fn cmd_bench(dir: &Path, matrix: &Matrix, limits: &Limits, mut sink: impl FnMut(&BenchRow) -> Result<()>) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for path in instance_files(dir)? {
        let inst = load_instance(&path);
        for opts in matrix.cells() {
            let row = match &inst {
                Ok(inst) => match cmd_solve(inst, &opts, limits) {
                    Ok(o) => o.row,
                    Err(e) => {
                        eprintln!("{} {} {}: {e:#}", inst.name, opts.kind, opts.cuts);
                        BenchRow::error(&inst.name, &opts)
                    }
                },
                Err(e) => {
                    eprintln!("{e:#}");
                    BenchRow::error(&path.file_stem().unwrap_or_default().to_string_lossy(), &opts)
                }
            };
            sink(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Checks a layout with the exact area rule, or with the tangent rows of
/// the models when `area_k` is given.
pub fn cmd_check(inst: &FlpInstance, layout: &Layout, area_k: Option<usize>) -> Result<FeasibilityReport> {
    Ok(match area_k {
        Some(k) => check_layout_tangent(inst, layout, k)?,
        None => check_layout(inst, layout)?,
    })
}

pub fn cmd_oracle(inst: &FlpInstance, area_k: usize) -> Result<(f64, Layout)> {
    let bf = brute_force_optimum(inst, area_k)?;
    Ok((bf.value, bf.layout))
}

pub fn layout_text(layout: &Layout) -> String {
    write_layout(layout)
}

/// Process exit code for a solve status.
pub fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        s if s.is_limit() => 2,
        SolveStatus::Infeasible => 3,
        _ => 1,
    }
}

pub fn limits(time_limit: Option<f64>, node_limit: Option<usize>) -> Result<Limits> {
    let time = match time_limit {
        Some(t) if !t.is_finite() || t < 0.0 => bail!("time limit must be a finite nonnegative number of seconds"),
        Some(t) => Some(Duration::from_secs_f64(t)),
        None => None,
    };
    Ok(Limits { time, nodes: node_limit, ..Limits::default() })
}
