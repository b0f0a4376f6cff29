use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use flp_cli::*;
use flp_core::formulations::{AssemblyOptions, CutLevel, PairwiseKind};
use flp_core::milp::{import_lp, solve_milp, Limits};
use flp_core::{parse_instance, SolveStatus};
use tempfile::TempDir;

const TOY2: &str = "floor 10 10\nbox 1 4 4\nbox 2 4 4\ncost 1 2 1\n";
const TOY3: &str = "floor 10 8\nbox 1 12 3\nbox 2 9 4\nbox 3 6 2\ncost 1 2 2.5\ncost 1 3 1\ncost 2 3 4\n";
const CROWDED: &str = "floor 4 4\nbox 1 9 1\nbox 2 9 1\ncost 1 2 1\n";

fn put(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn flp(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flp")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn opts(kind: PairwiseKind, level: CutLevel) -> AssemblyOptions {
    AssemblyOptions::new(kind).cuts(level)
}

#[test]
fn gen_names_and_determinism() {
    let dir = TempDir::new().unwrap();
    let base = put(dir.path(), "toy.flp", TOY3);
    let p = cmd_gen(&base, 0.0, 5.0, 42, None).unwrap();
    assert_eq!(p.file_name().unwrap(), "toy-0.0(5).flp");
    let gen = load_instance(&p).unwrap();
    let orig = load_instance(&base).unwrap();
    assert_eq!(gen.name, "toy-0.0(5)");
    assert!(gen.boxes.iter().all(|b| b.aspect == 5.0));
    assert!(gen.boxes.iter().zip(&orig.boxes).all(|(a, b)| a.area == b.area));
    assert_eq!(gen.costs, orig.costs);

    let a = fs::read(cmd_gen(&base, 0.1, 5.0, 7, Some(&dir.path().join("a.flp"))).unwrap()).unwrap();
    let b = fs::read(cmd_gen(&base, 0.1, 5.0, 7, Some(&dir.path().join("b.flp"))).unwrap()).unwrap();
    assert_eq!(a, b);
    let moved = parse_instance(std::str::from_utf8(&a).unwrap()).unwrap();
    assert!(moved.costs.iter().any(|(k, p)| orig.costs[k] != *p));
}

#[test]
fn solve_two_box_toy() {
    let dir = TempDir::new().unwrap();
    let inst = load_instance(&put(dir.path(), "toy2.flp", TOY2)).unwrap();
    let (oracle, _) = cmd_oracle(&inst, 8).unwrap();
    let o = cmd_solve(&inst, &opts(PairwiseKind::RefinedUnary, CutLevel::None), &Limits::default()).unwrap();
    assert_eq!(o.row.status, "optimal");
    assert!((o.row.incumbent.unwrap() - 1.0).abs() < 1e-9);
    assert!((oracle - 1.0).abs() < 1e-9);
    assert_eq!(o.row.instance, "toy2");
}

#[test]
fn node_limit_reports_positive_gap() {
    let dir = TempDir::new().unwrap();
    let inst = load_instance(&put(dir.path(), "toy3.flp", TOY3)).unwrap();
    let o = cmd_solve(&inst, &opts(PairwiseKind::Unary, CutLevel::None), &limits(None, Some(1)).unwrap()).unwrap();
    assert_eq!(o.status, SolveStatus::NodeLimit);
    assert_eq!(o.row.status, "node-limit");
    assert!(o.row.gap_pct > 0.0);
}

#[test]
fn cuts_keep_incumbent_and_raise_bound() {
    let dir = TempDir::new().unwrap();
    let inst = load_instance(&put(dir.path(), "toy3.flp", TOY3)).unwrap();
    let plain = cmd_solve(&inst, &opts(PairwiseKind::RefinedUnary, CutLevel::None), &Limits::default()).unwrap().row;
    let vi = cmd_solve(&inst, &opts(PairwiseKind::RefinedUnary, CutLevel::Vi), &Limits::default()).unwrap().row;
    let (a, b) = (plain.incumbent.unwrap(), vi.incumbent.unwrap());
    assert!((a - b).abs() <= 1e-6 * a.abs().max(1.0));
    assert!(vi.bound >= plain.bound - 1e-6);
}

#[test]
fn bench_grid_cardinality_and_round_trip() {
    let dir = TempDir::new().unwrap();
    put(dir.path(), "a.flp", TOY2);
    put(dir.path(), "b.flp", TOY3);
    put(dir.path(), "notes.txt", "not an instance");
    let matrix = Matrix {
        kinds: vec![PairwiseKind::Unary, PairwiseKind::RefinedUnary],
        levels: vec![CutLevel::None, CutLevel::Vi],
        symmetry: vec![false],
        area_k: 8,
    };
    let csv = dir.path().join("out.csv");
    let rows = cmd_bench(dir.path(), &matrix, &Limits::default(), |r| append_rows(&csv, std::slice::from_ref(r))).unwrap();
    assert_eq!(rows.len(), 8);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert_eq!(read_rows(&text).unwrap(), rows);
}

#[test]
fn bench_records_failures_and_continues() {
    let dir = TempDir::new().unwrap();
    put(dir.path(), "a.flp", TOY2);
    let matrix =
        Matrix { kinds: vec![PairwiseKind::Extended], levels: vec![CutLevel::Vi, CutLevel::None], symmetry: vec![false], area_k: 8 };
    let rows = cmd_bench(dir.path(), &matrix, &Limits::default(), |_| Ok(())).unwrap();
    assert_eq!(rows.iter().map(|r| r.status.as_str()).collect::<Vec<_>>(), ["error", "optimal"]);
    let mut buf = Vec::new();
    write_rows(&mut buf, &rows, true).unwrap();
    assert_eq!(read_rows(std::str::from_utf8(&buf).unwrap()).unwrap(), rows);
}

#[test]
fn oracle_layout_checks_against_solve() {
    let dir = TempDir::new().unwrap();
    let inst = load_instance(&put(dir.path(), "toy3.flp", TOY3)).unwrap();
    let (value, layout) = cmd_oracle(&inst, 8).unwrap();
    let rep = cmd_check(&inst, &layout, Some(8)).unwrap();
    assert!(rep.feasible(), "{rep}");
    let row = cmd_solve(&inst, &opts(PairwiseKind::Unary, CutLevel::None), &Limits::default()).unwrap().row;
    let inc = row.incumbent.unwrap();
    assert!((rep.objective - inc).abs() <= 1e-6 * inc);
    assert!((value - inc).abs() <= 1e-6 * inc);
}

#[test]
fn built_model_reimports_with_same_value() {
    let dir = TempDir::new().unwrap();
    let inst = load_instance(&put(dir.path(), "toy3.flp", TOY3)).unwrap();
    for kind in [PairwiseKind::GrayBinary, PairwiseKind::RefinedUnary] {
        let o = opts(kind, CutLevel::Vi);
        let text = cmd_build(&inst, &o).unwrap();
        let r = solve_milp(&import_lp(&text).unwrap(), &Limits::default());
        let direct = cmd_solve(&inst, &o, &Limits::default()).unwrap().row.incumbent.unwrap();
        assert!((r.objective.unwrap() - direct).abs() <= 1e-9 * direct);
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let toy = put(dir.path(), "toy2.flp", TOY2);
    let crowded = put(dir.path(), "crowded.flp", CROWDED);
    let (code, out) = flp(&["solve", "--instance", toy.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with(CSV_HEADER));
    let toy3 = put(dir.path(), "toy3.flp", TOY3);
    assert_eq!(flp(&["solve", "--instance", toy3.to_str().unwrap(), "--formulation", "u", "--node-limit", "1"]).0, 2);
    assert_eq!(flp(&["solve", "--instance", crowded.to_str().unwrap()]).0, 3);
    assert_eq!(flp(&["solve", "--instance", "/nonexistent.flp"]).0, 1);
    assert_eq!(flp(&["solve", "--formulation", "nope"]).0, 1);
    assert_eq!(flp(&["--help"]).0, 0);
}

#[test]
fn check_command_reads_layout_files() {
    let dir = TempDir::new().unwrap();
    let toy = put(dir.path(), "toy2.flp", TOY2);
    let good = put(dir.path(), "good.txt", "center 1 1 2\ncenter 2 2 2\nwidth 1 1 4\nwidth 2 1 4\n");
    let bad = put(dir.path(), "bad.txt", "center 1 1 2\ncenter 2 1.5 2\nwidth 1 1 4\nwidth 2 1 4\n");
    let (code, out) = flp(&["check", "--instance", toy.to_str().unwrap(), "--layout", good.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("objective: 1"));
    assert_eq!(flp(&["check", "--instance", toy.to_str().unwrap(), "--layout", bad.to_str().unwrap()]).0, 3);
}
