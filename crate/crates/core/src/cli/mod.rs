//! The `lcad` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error,
//! 3 nullification or well-orientedness abort, 4 internal invariant violation.

mod problem;
pub mod report;

pub use problem::{parse_problem, ProblemError, ProblemFile};
pub use report::{table, Histogram, RunReport, SCHEMA_VERSION};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::cad::{build_cad, layered, one_layered, Cad, CadError};
use crate::combinatorics::{
    fit_binomial, fit_binomial_proportions, mean_proportions, random_structures, DimensionDistribution,
    GenerationMode, RandomConfig,
};
use crate::heuristics::{
    compare_orderings, layered_heuristic, parallel_layered_heuristic, predict_total, FractionTable, HeuristicError,
    Scheduler,
};
use crate::order::VariableOrder;
use crate::projection::build_projection;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NULLIFICATION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "lcad", version, about = "Cylindrical algebraic decomposition with layered sub-decompositions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// JSON fraction table (`{"n": fraction}`) overriding the defaults and
    /// the LCAD_FRACTION_TABLE environment variable.
    #[arg(long, global = true)]
    pub fraction_table: Option<PathBuf>,
    /// Abort (exit 3) when the projection raises well-orientedness warnings.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct ProblemArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Variable ordering, first projected first: `y,x` or `y≻x`.
    /// Defaults to the declared variable order.
    #[arg(long)]
    pub order: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Complete sign-invariant decomposition.
    Build {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Include the cell dump.
        #[arg(long)]
        cells: bool,
    },
    /// Sub-decomposition with the cells of the top `layers` dimensions.
    Layered {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        cells: bool,
    },
    /// Projection factors per level.
    Project {
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Choose a variable ordering by full-dimensional cell counts.
    Order {
        problem: PathBuf,
        /// First-finisher selection instead of cell counts.
        #[arg(long)]
        parallel: bool,
        /// Deterministic simulated scheduler (implies --parallel).
        #[arg(long, value_name = "SEED")]
        simulate_scheduler: Option<u64>,
        /// Also build every ordering's complete decomposition.
        #[arg(long, conflicts_with_all = ["parallel", "simulate_scheduler"])]
        compare: bool,
    },
    /// Predicted size of the complete decomposition.
    Predict {
        #[arg(long)]
        fulldim: u64,
        #[arg(long)]
        vars: usize,
    },
    /// Combinatorially random cylindrical structures.
    Random {
        #[command(flatten)]
        gen: GenArgs,
        /// List every cell index.
        #[arg(long)]
        list: bool,
    },
    /// Binomial fits of cell-dimension distributions.
    Fit {
        #[command(flatten)]
        gen: GenArgs,
        /// Fit these counts (D_0,...,D_n) instead of random structures.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<u64>>,
    },
    /// Cell-dimension histogram of the complete decomposition.
    Distribution {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Write the histogram as CSV (dimension,count,proportion).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 45)]
    pub count: usize,
    /// `uniform` or `per-cylinder`.
    #[arg(long, default_value = "per-cylinder")]
    pub mode: GenerationMode,
    #[arg(long, default_value_t = 2)]
    pub min_vars: usize,
    #[arg(long, default_value_t = 6)]
    pub max_vars: usize,
    #[arg(long, default_value_t = 1)]
    pub min_sections: u32,
    #[arg(long, default_value_t = 7)]
    pub max_sections: u32,
}

impl GenArgs {
    fn config(&self) -> RandomConfig {
        RandomConfig { n: self.min_vars..=self.max_vars, sections: self.min_sections..=self.max_sections, mode: self.mode }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Cad(#[from] CadError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error("well-orientedness: {0}")]
    NotWellOriented(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Problem(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Cad(CadError::Nullification { .. }) | CliError::NotWellOriented(_) => EXIT_NULLIFICATION,
            CliError::Heuristic(HeuristicError::AllOrderingsFailed(fails))
                if fails.iter().all(|(_, e)| matches!(e, CadError::Nullification { .. })) =>
            {
                EXIT_NULLIFICATION
            }
            CliError::Heuristic(HeuristicError::TableIo { .. }) => EXIT_IO,
            CliError::Heuristic(
                HeuristicError::TableFormat(_)
                | HeuristicError::InvalidFraction { .. }
                | HeuristicError::UnsupportedDimension(_)
                | HeuristicError::BadBlocks(_)
                | HeuristicError::NoOrderings
                | HeuristicError::Order(_),
            ) => EXIT_PARSE,
            CliError::Cad(CadError::NoVariables | CadError::NothingToExtend) => EXIT_PARSE,
            _ => EXIT_INTERNAL,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Problem(p) => p.code(),
            CliError::Usage(_) => "usage",
            CliError::Cad(CadError::Nullification { .. }) => "nullification",
            CliError::NotWellOriented(_) => "not-well-oriented",
            CliError::Heuristic(HeuristicError::AllOrderingsFailed(_)) => "all-orderings-failed",
            CliError::Heuristic(HeuristicError::UnsupportedDimension(_)) => "unsupported-dimension",
            CliError::Heuristic(_) => "heuristic",
            CliError::Cad(_) => "cad",
            CliError::Internal(_) => "internal",
        }
    }

    fn to_json(&self) -> String {
        let mut e = json!({"code": self.code(), "message": self.to_string(), "exit_code": self.exit_code()});
        if let CliError::Problem(p) = self {
            if let Some((line, column)) = p.position().filter(|&(l, _)| l > 0) {
                e["line"] = json!(line);
                e["column"] = json!(column);
            }
        }
        serde_json::to_string_pretty(&json!({ "error": e })).expect("errors serialize")
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let format = cli.format;
    let started = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(&cli, command)));
    let result = match outcome {
        Ok(r) => r,
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(CliError::Internal(msg))
        }
    };
    match result {
        Ok(mut report) => {
            report.wall_seconds = started.elapsed().as_secs_f64();
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let text = match format {
                Format::Json => e.to_json() + "\n",
                Format::Text => format!("error [{}]: {e}\n", e.code()),
            };
            let _ = err.write_all(text.as_bytes());
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_problem(path: &Path) -> Result<ProblemFile, CliError> {
    Ok(parse_problem(&read(path)?)?)
}

/// Defaults, then the environment, then `--fraction-table`, then the
/// problem's own overrides.
fn fraction_table(cli: &Cli, problem: Option<&ProblemFile>) -> Result<FractionTable, CliError> {
    let mut table = match &cli.fraction_table {
        Some(p) => FractionTable::load(p)?,
        None => FractionTable::from_env()?,
    };
    if let Some(p) = problem.filter(|p| !p.fraction_overrides.is_empty()) {
        let mut entries = table.entries().clone();
        entries.extend(p.fraction_overrides.iter().map(|(&k, &v)| (k, v)));
        table = FractionTable::new(entries)?;
    }
    Ok(table)
}

fn parse_order(spec: &str, names: &[String]) -> Result<VariableOrder, CliError> {
    let parts: Vec<&str> = spec.split([',', '≻', '>']).map(str::trim).filter(|s| !s.is_empty()).collect();
    VariableOrder::from_names(&parts, names).map_err(|e| CliError::Usage(format!("--order: {e}")))
}

fn chosen_order(args: &ProblemArgs, p: &ProblemFile) -> Result<VariableOrder, CliError> {
    match &args.order {
        Some(s) => parse_order(s, &p.variables),
        None => Ok(VariableOrder::identity(p.variables.len())),
    }
}

/// Renames the internal variables `x0, x1, ...` in an error's factor.
fn named(e: CadError, order: &VariableOrder, names: &[String]) -> CliError {
    match e {
        CadError::Nullification { level, factor } => {
            let internal = order.internal_names(names);
            let mut out = String::new();
            let mut chars = factor.chars().peekable();
            while let Some(c) = chars.next() {
                let starts_name = c == 'x' && !out.ends_with(|p: char| p.is_ascii_alphanumeric() || p == '_');
                if starts_name && chars.peek().is_some_and(char::is_ascii_digit) {
                    let mut digits = String::new();
                    while let Some(d) = chars.next_if(char::is_ascii_digit) {
                        digits.push(d);
                    }
                    match digits.parse::<usize>().ok().and_then(|i| internal.get(i)) {
                        Some(n) => out.push_str(n),
                        None => {
                            out.push('x');
                            out.push_str(&digits);
                        }
                    }
                } else {
                    out.push(c);
                }
            }
            CliError::Cad(CadError::Nullification { level, factor: out })
        }
        other => CliError::Cad(other),
    }
}

fn check_orientation(cli: &Cli, warnings: &[String]) -> Result<(), CliError> {
    match warnings.first() {
        Some(w) if cli.strict => Err(CliError::NotWellOriented(w.clone())),
        _ => Ok(()),
    }
}

fn cad_summary(cad: &Cad, names: &[String], with_cells: bool) -> serde_json::Value {
    let mut v = json!({
        "ordering": cad.order.display(names),
        "cells": cad.cells.len(),
        "full_dimensional": cad.full_dimensional_count(),
        "stacks_lifted": cad.stacks_lifted,
        "pending_tasks": cad.pending.len(),
        "complete": cad.is_complete(),
    });
    if with_cells {
        v["cell_dump"] = json!(cad.dump());
    }
    v
}

fn verified(cad: Cad) -> Result<Cad, CliError> {
    if cad.is_complete() {
        cad.check_cylindrical().map_err(CliError::Internal)?;
    }
    let hist = cad.dimension_histogram();
    if hist.total() as usize != cad.cells.len() {
        return Err(CliError::Internal("histogram does not account for every cell".into()));
    }
    Ok(cad)
}

fn dispatch(cli: &Cli, command: Vec<String>) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(command);
    match &cli.command {
        Command::Build { problem, cells } => {
            let p = load_problem(&problem.problem)?;
            let order = chosen_order(problem, &p)?;
            let projection = build_projection(&p.polynomials, &order);
            let warnings: Vec<String> = projection.warnings.iter().map(|w| w.to_string()).collect();
            check_orientation(cli, &warnings)?;
            let cad = verified(build_cad(&p.polynomials, &order).map_err(|e| named(e, &order, &p.variables))?)?;
            report.result = cad_summary(&cad, &p.variables, *cells);
            report.histograms.push(Histogram::new("cells by dimension", &cad.dimension_histogram()));
            report.warnings = cad.warnings.clone();
        }
        Command::Layered { problem, layers, cells } => {
            if *layers == 0 {
                return Err(CliError::Usage("--layers must be at least 1".into()));
            }
            let p = load_problem(&problem.problem)?;
            let order = chosen_order(problem, &p)?;
            let cad = layered(&p.polynomials, &order, *layers).map_err(|e| named(e, &order, &p.variables))?;
            check_orientation(cli, &cad.warnings)?;
            let cad = verified(cad)?;
            report.result = cad_summary(&cad, &p.variables, *cells);
            report.result["layers"] = json!(layers);
            report.histograms.push(Histogram::new("cells by dimension", &cad.dimension_histogram()));
            report.warnings = cad.warnings.clone();
        }
        Command::Project { problem } => {
            let p = load_problem(&problem.problem)?;
            let order = chosen_order(problem, &p)?;
            let projection = build_projection(&p.polynomials, &order);
            report.warnings = projection.warnings.iter().map(|w| w.to_string()).collect();
            check_orientation(cli, &report.warnings)?;
            let internal = order.internal_names(&p.variables);
            let levels: Vec<_> = projection
                .to_text(&p.variables)
                .into_iter()
                .enumerate()
                .map(|(i, factors)| json!({"level": i + 1, "variable": internal[i], "factors": factors}))
                .collect();
            report.result = json!({
                "ordering": order.display(&p.variables),
                "total_factors": projection.total_factors(),
                "levels": levels,
            });
        }
        Command::Order { problem, parallel, simulate_scheduler, compare } => {
            let p = load_problem(problem)?;
            let table = fraction_table(cli, Some(&p))?;
            report.seed = simulate_scheduler.or(p.seed.filter(|_| simulate_scheduler.is_some()));
            if *compare {
                let cmp = compare_orderings(&p.polynomials, &p.variables, &p.admissible, &table)?;
                report.result = json!({
                    "algorithm": "compare",
                    "selected": cmp.selected,
                    "tie_break_applied": cmp.tie_break_applied,
                });
                report.rows = cmp.rows;
            } else if *parallel || simulate_scheduler.is_some() {
                let scheduler = match simulate_scheduler {
                    Some(seed) => Scheduler::Simulated { seed: *seed },
                    None => Scheduler::Threads,
                };
                let out = parallel_layered_heuristic(&p.polynomials, &p.variables, &p.admissible, scheduler)?;
                if out.registry.live() != 0 {
                    return Err(CliError::Internal(format!("{} tasks outlived the race", out.registry.live())));
                }
                // what the cell-count rule would have chosen
                let mut by_cells: Option<(usize, VariableOrder)> = None;
                for v in p.admissible.expand(p.variables.len())? {
                    if let Ok(c) = one_layered(&p.polynomials, &v) {
                        if by_cells.as_ref().is_none_or(|(best, _)| c.cells.len() < *best) {
                            by_cells = Some((c.cells.len(), v));
                        }
                    }
                }
                let by_cells = by_cells.map(|(_, v)| v.display(&p.variables));
                let winner = out.winner.display(&p.variables);
                report.result = json!({
                    "algorithm": "first-finisher",
                    "scheduler": if simulate_scheduler.is_some() { "simulated" } else { "threads" },
                    "selected": winner,
                    "selected_by_cell_count": by_cells,
                    "disagrees_with_cell_count": by_cells.as_deref() != Some(winner.as_str()),
                    "full_dimensional": out.fulldim,
                    "complete_cells": out.cad.cells.len(),
                    "finish_order": out.finish_order.iter().map(|v| v.display(&p.variables)).collect::<Vec<_>>(),
                    "stacks": out.stacks.iter().map(|(v, s)| json!({"ordering": v.display(&p.variables), "stacks": s})).collect::<Vec<_>>(),
                    "failures": out.failures.iter().map(|(v, e)| format!("{}: {e}", v.display(&p.variables))).collect::<Vec<_>>(),
                    "orphaned_tasks": out.registry.live(),
                });
                let cad = verified(out.cad)?;
                report.histograms.push(Histogram::new("cells by dimension", &cad.dimension_histogram()));
                report.warnings = cad.warnings.clone();
            } else {
                let (opt, cad, rep) = layered_heuristic(&p.polynomials, &p.variables, &p.admissible, &table)?;
                check_orientation(cli, &cad.warnings)?;
                let cad = verified(cad)?;
                report.result = json!({
                    "algorithm": "cell-count",
                    "selected": opt.display(&p.variables),
                    "tie_break_applied": rep.tie_break_applied,
                    "full_dimensional": cad.full_dimensional_count(),
                    "complete_cells": cad.cells.len(),
                });
                report.rows = rep.rows;
                report.histograms.push(Histogram::new("cells by dimension", &cad.dimension_histogram()));
                report.warnings = cad.warnings.clone();
            }
        }
        Command::Predict { fulldim, vars } => {
            let table = fraction_table(cli, None)?;
            let pred = predict_total(*fulldim, *vars, &table)?;
            report.result = json!({
                "fulldim": fulldim,
                "vars": vars,
                "fraction": table.fraction(*vars),
                "from_table": table.entries().contains_key(vars),
                "prediction": pred.value,
                "rounded": pred.rounded,
            });
        }
        Command::Random { gen, list } => {
            let structures = random_structures(gen.seed, gen.count, &gen.config())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            report.seed = Some(gen.seed);
            let mut items = Vec::new();
            for (i, s) in structures.iter().enumerate() {
                if !s.is_cylindrical() {
                    return Err(CliError::Internal(format!("structure {i} is not cylindrical")));
                }
                let h = s.histogram();
                let mut item = json!({"structure": i, "n": s.n(), "cells": s.len(), "counts": h.counts()});
                if *list {
                    item["indices"] = json!(s
                        .indices()
                        .map(|ix| format!("({})", ix.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")))
                        .collect::<Vec<_>>());
                }
                items.push(item);
            }
            report.result = json!({"mode": gen.mode, "count": gen.count, "structures": items});
        }
        Command::Fit { gen, counts } => {
            if let Some(counts) = counts {
                if counts.is_empty() || counts.iter().all(|&c| c == 0) {
                    return Err(CliError::Usage("--counts needs a nonempty distribution".into()));
                }
                let d = DimensionDistribution::new(counts.clone());
                let fit = fit_binomial(&d);
                report.result = json!({"n": fit.n, "p": fit.p, "distance": fit.distance});
                report.histograms.push(Histogram::new("input", &d));
            } else {
                report.seed = Some(gen.seed);
                let structures = random_structures(gen.seed, gen.count, &gen.config())
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let mut by_n: std::collections::BTreeMap<usize, Vec<DimensionDistribution>> = Default::default();
                for s in &structures {
                    by_n.entry(s.n()).or_default().push(s.histogram());
                }
                let fits: Vec<_> = by_n
                    .iter()
                    .map(|(n, ds)| {
                        let f = fit_binomial_proportions(&mean_proportions(ds));
                        json!({"n": n, "structures": ds.len(), "p": f.p, "distance": f.distance})
                    })
                    .collect();
                report.result = json!({"mode": gen.mode, "count": gen.count, "fits": fits});
            }
        }
        Command::Distribution { problem, csv } => {
            let p = load_problem(&problem.problem)?;
            let order = chosen_order(problem, &p)?;
            let cad = verified(build_cad(&p.polynomials, &order).map_err(|e| named(e, &order, &p.variables))?)?;
            check_orientation(cli, &cad.warnings)?;
            let hist = cad.dimension_histogram();
            if let Some(path) = csv {
                std::fs::write(path, hist.to_csv())
                    .map_err(|source| CliError::Io { path: path.clone(), source })?;
            }
            report.result = json!({
                "ordering": order.display(&p.variables),
                "cells": cad.cells.len(),
                "csv": csv.as_ref().map(|p| p.display().to_string()),
            });
            report.histograms.push(Histogram::new("cells by dimension", &hist));
            report.warnings = cad.warnings.clone();
        }
    }
    Ok(report)
}
