use std::ffi::OsString;
use std::fmt::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::Context;
use cfp_core::oracle::DEFAULT_BUDGET;
use cfp_core::{exact_best, multirun, OracleParams, SolveParams, Weight};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::instance::InstanceFile;
use crate::record::{to_csv, ResultRecord};
use crate::render::render_solution;

#[derive(Debug, Parser)]
#[command(
    name = "cfp",
    version,
    about = "Cell formation solver maximizing grouping efficiency"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multistart improvement heuristic
    Solve(SolveArgs),
    /// Exhaustive optimum for small instances
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Instance file; repeat for several instances
    #[arg(long, required = true)]
    pub instance: Vec<PathBuf>,
    /// Weight of the intra-cell loading term, as a/b or a decimal
    #[arg(long, default_value = "1/2")]
    pub q: Weight,
    /// Require at least two machines and two parts per cell
    #[arg(long)]
    pub no_singletons: bool,
    /// Output format; csv and json emit one record per instance
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print the block-diagonal matrix (text format only)
    #[arg(long)]
    pub show_matrix: bool,
    /// Worker thread cap; results do not depend on it
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Random configurations per cell count in the main phase
    #[arg(long, default_value_t = 2000)]
    pub configs: usize,
    /// Random configurations per cell count in the cell-range search
    #[arg(long, default_value_t = 500)]
    pub range_configs: usize,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Base seed; run i uses seed + i
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fix the cell range instead of searching for it
    #[arg(long, requires = "max_cells")]
    pub min_cells: Option<usize>,
    /// Largest cell count of a fixed range
    #[arg(long, requires = "min_cells")]
    pub max_cells: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Smallest cell count
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    /// Largest cell count (default min(m, p))
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Maximum number of solutions to enumerate
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return CommandOutput { code, stdout, stderr };
        }
    };
    let result = match &cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Oracle(args) => run_oracle(args),
    };
    match result {
        Ok(stdout) => CommandOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CommandOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn load_all(common: &Common) -> anyhow::Result<Vec<InstanceFile>> {
    common.instance.iter().map(|p| InstanceFile::load(p)).collect()
}

pub fn run_solve(args: &SolveArgs) -> anyhow::Result<String> {
    let common = &args.common;
    let instances = load_all(common)?;
    let params = SolveParams {
        q: common.q,
        configs_per_k: args.configs,
        range_configs_per_k: args.range_configs,
        allow_singletons: !common.no_singletons,
        seed: args.seed,
        cell_range: args.min_cells.zip(args.max_cells),
        threads: common.threads,
        trace: false,
    };
    let mut records = Vec::new();
    let mut matrices = Vec::new();
    for inst in &instances {
        let report = multirun(&inst.matrix, &params, args.runs).with_context(|| inst.name.clone())?;
        records.push(ResultRecord::from_runs(
            &inst.name,
            &inst.matrix,
            &report,
            common.q,
            params.allow_singletons,
            args.seed,
        )?);
        matrices.push(render_solution(&inst.matrix, &report.best().solution));
    }
    format_records(&records, &matrices, common)
}

pub fn run_oracle(args: &OracleArgs) -> anyhow::Result<String> {
    let common = &args.common;
    let instances = load_all(common)?;
    let mut records = Vec::new();
    let mut matrices = Vec::new();
    for inst in &instances {
        let params = OracleParams {
            q: common.q,
            allow_singletons: !common.no_singletons,
            k_min: args.k_min,
            k_max: args.k_max.unwrap_or(inst.matrix.max_cells()),
            budget: args.budget,
        };
        let started = Instant::now();
        let result = match common.threads {
            Some(n) => rayon_pool(n)?.install(|| exact_best(&inst.matrix, &params)),
            None => exact_best(&inst.matrix, &params),
        }
        .with_context(|| inst.name.clone())?;
        records.push(ResultRecord::from_oracle(
            &inst.name,
            &inst.matrix,
            &result,
            common.q,
            params.allow_singletons,
            (params.k_min, params.k_max.min(inst.matrix.max_cells())),
            started.elapsed(),
        )?);
        matrices.push(render_solution(&inst.matrix, &result.solution));
    }
    format_records(&records, &matrices, common)
}

fn rayon_pool(threads: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build()?)
}

fn format_records(records: &[ResultRecord], matrices: &[String], common: &Common) -> anyhow::Result<String> {
    match common.format {
        Format::Json => Ok(records.iter().map(|r| r.to_json() + "\n").collect()),
        Format::Csv => to_csv(records),
        Format::Text => {
            let mut out = String::new();
            for (r, m) in records.iter().zip(matrices) {
                write_text(&mut out, r);
                if common.show_matrix {
                    out.push('\n');
                    out.push_str(m);
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn write_text(out: &mut String, r: &ResultRecord) {
    let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "instance      {} ({}x{})", r.instance, r.machines, r.parts);
    let _ = writeln!(out, "cells         {} (range {}-{})", r.cells, r.min_cells, r.max_cells);
    let _ = writeln!(out, "efficiency    {:.2}% ({})", r.efficiency_pct, r.efficiency);
    let _ = writeln!(out, "efficacy      {:.2}% ({})", r.efficacy_pct, r.efficacy);
    let _ = writeln!(out, "GCI           {:.2}% ({})", r.gci_pct, r.gci);
    let _ = writeln!(out, "E+V           {}", r.exceptions_plus_voids);
    let _ = writeln!(
        out,
        "runs          {} (min {:.2}%, avg {:.2}%, max {:.2}%)",
        r.runs, r.min_pct, r.avg_pct, r.max_pct
    );
    if let Some(n) = r.enumerated {
        let _ = writeln!(out, "enumerated    {n}");
    }
    let _ = writeln!(out, "time, s       {:.3}", r.elapsed_sec);
    let _ = writeln!(out, "machine cells {}", join(&r.machine_cells));
    let _ = writeln!(out, "part cells    {}", join(&r.part_cells));
}
