use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use flp_cli::*;
use flp_core::formulations::{AssemblyOptions, CutLevel, PairwiseKind};

#[derive(Parser)]
#[command(name = "flp", version, about = "Floor layout MILP formulations and solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a perturbed copy of a base instance.
    Gen {
        #[arg(long)]
        base: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// Aspect ratio given to every box.
        #[arg(long, default_value_t = 5.0)]
        alpha: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Export the model in LP format.
    Build {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build and solve one model, reporting a CSV row.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Append the row to this file instead of printing it.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the best layout found.
        #[arg(long)]
        layout_out: Option<PathBuf>,
    },
    /// Solve every instance in a directory over a grid of options.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "u,u-bigm,gray,bldp1,sp,ru,ext")]
        formulations: Vec<PairwiseKind>,
        #[arg(long, value_delimiter = ',', default_value = "none,plus,vi,vi3")]
        cuts: Vec<CutLevel>,
        /// Symmetry settings to run, e.g. `false,true`.
        #[arg(long, value_delimiter = ',', default_value = "false")]
        symmetry: Vec<bool>,
        #[arg(long, default_value_t = 8)]
        area_k: usize,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check a layout file against an instance.
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        layout: PathBuf,
        /// Judge area by this many tangent rows instead of exactly.
        #[arg(long)]
        area_k: Option<usize>,
    },
    /// Brute-force optimum over all non-overlap branch choices.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 8)]
        area_k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "ru")]
    formulation: PairwiseKind,
    #[arg(long, default_value = "none")]
    cuts: CutLevel,
    #[arg(long)]
    symmetry: bool,
    #[arg(long, default_value_t = 8)]
    area_k: usize,
}

impl ModelArgs {
    fn options(&self) -> AssemblyOptions {
        AssemblyOptions::new(self.formulation).cuts(self.cuts).symmetry(self.symmetry).area_k(self.area_k)
    }
}

#[derive(Args)]
struct LimitArgs {
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    node_limit: Option<usize>,
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen { base, gamma, alpha, seed, out } => {
            let path = cmd_gen(&base, gamma, alpha, seed, out.as_deref())?;
            println!("{}", path.display());
            Ok(0)
        }
        Cmd::Build { model, out } => {
            let inst = load_instance(&model.instance)?;
            write_or_print(out.as_ref(), &cmd_build(&inst, &model.options())?)?;
            Ok(0)
        }
        Cmd::Solve { model, limits: lim, csv, layout_out } => {
            let inst = load_instance(&model.instance)?;
            let o = cmd_solve(&inst, &model.options(), &limits(lim.time_limit, lim.node_limit)?)?;
            match &csv {
                Some(p) => append_rows(p, std::slice::from_ref(&o.row))?,
                None => write_rows(io::stdout().lock(), std::slice::from_ref(&o.row), true)?,
            }
            if let (Some(p), Some(lay)) = (&layout_out, &o.layout) {
                fs::write(p, layout_text(lay)).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(exit_code(o.status))
        }
        Cmd::Bench { dir, csv, formulations, cuts, symmetry, area_k, limits: lim } => {
            let matrix = Matrix { kinds: formulations, levels: cuts, symmetry, area_k };
            let lim = limits(lim.time_limit, lim.node_limit)?;
            let mut first = true;
            cmd_bench(&dir, &matrix, &lim, |row| {
                let r = std::slice::from_ref(row);
                match &csv {
                    Some(p) => append_rows(p, r),
                    None => {
                        let header = std::mem::take(&mut first);
                        write_rows(io::stdout().lock(), r, header)
                    }
                }
            })?;
            Ok(0)
        }
        Cmd::Check { instance, layout, area_k } => {
            let inst = load_instance(&instance)?;
            let rep = cmd_check(&inst, &load_layout(&layout)?, area_k)?;
            print!("{rep}");
            Ok(if rep.feasible() { 0 } else { 3 })
        }
        Cmd::Oracle { instance, area_k, out } => {
            let inst = load_instance(&instance)?;
            let (value, layout) = cmd_oracle(&inst, area_k)?;
            println!("optimum {value}");
            write_or_print(out.as_ref(), &layout_text(&layout))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage exit code would read as a limit hit
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
