//! hydroshape: shape complexity of D-dimensional hydrogenic states in
//! position and momentum space, by closed form, analytic pipeline, and a
//! brute-force quadrature oracle.

mod output;
mod validate;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hydroshape::closedform::{circular_report, ground_report};
use hydroshape::measures::{oracle_report, pipeline_report, DEFAULT_REL_TOL};
use hydroshape::quadrature::QuadratureError;
use hydroshape::{ComplexityReport, MeasureError, QuantumState};

use output::{
    emit, mu_label, render_table, rows_from_report, write_csv, F17, JsonReport, JsonRow, Row,
    Spaces,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match &e {
            MeasureError::Quadrature(
                QuadratureError::ToleranceTooTight(_)
                | QuadratureError::BreakpointOutsideDomain(_)
                | QuadratureError::PointCount(_),
            ) => CliError::Usage(e.to_string()),
            MeasureError::Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}


#[derive(Parser)]
#[command(
    name = "hydroshape",
    version,
    about = "Shape complexity of D-dimensional hydrogenic states",
    long_about = "Computes disequilibrium, Shannon entropy and shape complexity of \
                  D-dimensional hydrogenic bound states in position and momentum space, \
                  by three cross-validated routes (closed form, analytic pipeline, \
                  quadrature oracle)."
)]
struct Cli {
    /// Relative quadrature tolerance for all measure computations
    #[arg(long, global = true, env = "HYDROSHAPE_REL_TOL")]
    rel_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the measures of a single state
    Compute(ComputeArgs),
    /// Sweep ground/circular states over ranges of D and/or n
    Sweep(SweepArgs),
    /// Run the self-validation battery and emit a JSON summary
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Pipeline,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StateKind {
    Ground,
    Circular,
}

#[derive(Args)]
struct ComputeArgs {
    /// Dimension D >= 2
    #[arg(long = "dim")]
    dim: usize,
    /// State shorthand: ground (n=1, all mu 0) or circular (all mu = n-1)
    #[arg(long)]
    state: Option<StateKind>,
    /// Principal quantum number n
    #[arg(long)]
    n: Option<u32>,
    /// Hyperangular tower mu_1,...,mu_{D-1} (comma separated; last entry may be negative)
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    /// Nuclear charge Z
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    #[arg(long, value_enum, default_value_t = Spaces::Both)]
    space: Spaces,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// State family to sweep
    #[arg(long, value_enum)]
    state: StateKind,
    /// Single dimension
    #[arg(long = "dim", conflicts_with = "dim_range")]
    dim: Option<usize>,
    /// Inclusive dimension range, e.g. 2..4
    #[arg(long)]
    dim_range: Option<String>,
    /// Single principal quantum number (circular only)
    #[arg(long, conflicts_with = "n_range")]
    n: Option<u32>,
    /// Inclusive n range, e.g. 1..5 (circular only)
    #[arg(long)]
    n_range: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    #[arg(long, value_enum, default_value_t = Spaces::Both)]
    space: Spaces,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the series here instead of stdout
    #[arg(long)]
    output: Option<std::path::PathBuf>,
    /// Write a plot script (for an external plotting tool) next to the CSV;
    /// requires --output
    #[arg(long)]
    plot_script: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Z values for the Z-invariance check
    #[arg(long, default_value = "1,2,5,10")]
    z_list: String,
    /// Swap the radial quartic exponent for the non-integrable −D−5
    /// variant (negative control: validate must then fail)
    #[arg(long, hide = true)]
    inject_k1_exponent_bug: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let rel_tol = cli.rel_tol.unwrap_or(DEFAULT_REL_TOL);
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args, rel_tol),
        Command::Sweep(args) => cmd_sweep(args, rel_tol),
        Command::Validate(args) => cmd_validate(args, rel_tol),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_mu(text: &str) -> Result<Vec<i32>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i32>()
                .map_err(|_| CliError::Usage(format!("mu entry `{tok}` is not an integer")))
        })
        .collect()
}

fn build_state(args: &ComputeArgs) -> Result<QuantumState, CliError> {
    if args.state.is_some() && args.mu.is_some() {
        return Err(CliError::Usage("--state and --mu are mutually exclusive".into()));
    }
    let state = match args.state {
        Some(StateKind::Ground) => {
            if args.n.unwrap_or(1) != 1 {
                return Err(CliError::Usage("the ground state has n = 1".into()));
            }
            QuantumState::ground(args.dim)
        }
        Some(StateKind::Circular) => {
            let n = args.n.ok_or_else(|| CliError::Usage("--state circular needs --n".into()))?;
            QuantumState::circular(args.dim, n)
        }
        None => {
            let n = args.n.ok_or_else(|| CliError::Usage("--n is required without --state".into()))?;
            let mu = args
                .mu
                .as_deref()
                .ok_or_else(|| CliError::Usage("--mu is required without --state".into()))?;
            QuantumState::new(args.dim, n, parse_mu(mu)?)
        }
    };
    state.map_err(|e| CliError::Usage(e.to_string()))
}

fn methods_for(arg: MethodArg) -> Vec<MethodArg> {
    match arg {
        MethodArg::All => vec![MethodArg::Closed, MethodArg::Pipeline, MethodArg::Oracle],
        one => vec![one],
    }
}

fn closed_for(state: &QuantumState, z: f64) -> Result<ComplexityReport, MeasureError> {
    if state.is_ground() {
        ground_report(state.dim(), z)
    } else {
        circular_report(state.dim(), state.principal(), z)
    }
}

#[derive(Serialize)]
struct ComputeOutput {
    command: &'static str,
    d: usize,
    n: u32,
    mu: Vec<i32>,
    z: F17,
    rel_tol: F17,
    reports: Vec<JsonReport>,
}

fn cmd_compute(args: ComputeArgs, rel_tol: f64) -> Result<ExitCode, CliError> {
    let state = build_state(&args)?;
    let mut reports: Vec<ComplexityReport> = Vec::new();
    for method in methods_for(args.method) {
        match method {
            MethodArg::Closed => {
                if state.is_circular() {
                    reports.push(closed_for(&state, args.z)?);
                } else if args.method == MethodArg::Closed {
                    return Err(CliError::Usage(
                        "closed forms exist only for ground and circular states; \
                         use --method pipeline or oracle"
                            .into(),
                    ));
                }
            }
            MethodArg::Pipeline => reports.push(pipeline_report(&state, args.z, rel_tol)?),
            MethodArg::Oracle => reports.push(oracle_report(&state, args.z, rel_tol)?),
            MethodArg::All => unreachable!(),
        }
    }
    match args.format {
        Format::Json => {
            let out = ComputeOutput {
                command: "compute",
                d: state.dim(),
                n: state.principal(),
                mu: state.tower().to_vec(),
                z: F17(args.z),
                rel_tol: F17(rel_tol),
                reports: reports.iter().map(|r| JsonReport::from_report(r, args.space)).collect(),
            };
            let mut text = serde_json::to_string_pretty(&out).expect("serializable");
            text.push('\n');
            emit(&text)?;
        }
        Format::Csv | Format::Table => {
            let mut rows = Vec::new();
            for r in &reports {
                rows.extend(rows_from_report(
                    state.dim(),
                    state.principal(),
                    state.tower(),
                    args.z,
                    r,
                    args.space,
                ));
            }
            if args.format == Format::Csv {
                let mut buf = Vec::new();
                write_csv(&mut buf, &rows)?;
                emit(&String::from_utf8(buf).expect("csv is utf-8"))?;
            } else {
                emit(&render_table(&rows))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Inclusive range "a..b" (also accepts a bare "a").
fn parse_range(text: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("{what} range `{text}` is not of the form a..b"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(CliError::Usage(format!("{what} range `{text}` is empty")));
        }
        Ok((lo..=hi).collect())
    } else {
        let v: u32 = text.trim().parse().map_err(|_| bad())?;
        Ok(vec![v])
    }
}

#[derive(Serialize)]
struct SweepOutput {
    command: &'static str,
    rel_tol: F17,
    rows: Vec<JsonRow>,
}

fn cmd_sweep(args: SweepArgs, rel_tol: f64) -> Result<ExitCode, CliError> {
    let dims: Vec<u32> = match (&args.dim, &args.dim_range) {
        (Some(d), None) => vec![*d as u32],
        (None, Some(r)) => parse_range(r, "dim")?,
        (None, None) => return Err(CliError::Usage("give --dim or --dim-range".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let ns: Vec<u32> = match (args.state, &args.n, &args.n_range) {
        (StateKind::Ground, None, None) => vec![1],
        (StateKind::Ground, _, _) => {
            return Err(CliError::Usage("ground sweeps fix n = 1; drop --n/--n-range".into()))
        }
        (StateKind::Circular, Some(n), None) => vec![*n],
        (StateKind::Circular, None, Some(r)) => parse_range(r, "n")?,
        (StateKind::Circular, None, None) => vec![1],
        (StateKind::Circular, Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if dims.is_empty() || ns.is_empty() || dims.iter().any(|&d| d < 2) || ns.contains(&0) {
        return Err(CliError::Usage("sweep range is empty or invalid (D >= 2, n >= 1)".into()));
    }

    let mut rows: Vec<Row> = Vec::new();
    for &d in &dims {
        for &n in &ns {
            let d = d as usize;
            let state = match args.state {
                StateKind::Ground => QuantumState::ground(d),
                StateKind::Circular => QuantumState::circular(d, n),
            }
            .map_err(|e| CliError::Usage(e.to_string()))?;
            for method in methods_for(args.method) {
                let report = match method {
                    MethodArg::Closed => closed_for(&state, args.z),
                    MethodArg::Pipeline => pipeline_report(&state, args.z, rel_tol),
                    MethodArg::Oracle => oracle_report(&state, args.z, rel_tol),
                    MethodArg::All => unreachable!(),
                };
                match report {
                    Ok(r) => rows.extend(rows_from_report(
                        d,
                        state.principal(),
                        state.tower(),
                        args.z,
                        &r,
                        args.space,
                    )),
                    // per-row failure: record and keep sweeping
                    Err(e) => rows.push(Row {
                        d,
                        n: state.principal(),
                        mu: mu_label(state.tower()),
                        z: args.z,
                        space: "-",
                        method: match method {
                            MethodArg::Closed => "closed",
                            MethodArg::Pipeline => "pipeline",
                            MethodArg::Oracle => "oracle",
                            MethodArg::All => unreachable!(),
                        },
                        disequilibrium: None,
                        shannon: None,
                        complexity: None,
                        product: None,
                        err_est: None,
                        error: Some(e.to_string()),
                    }),
                }
            }
        }
    }

    let rendered: Vec<u8> = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &rows)?;
            buf
        }
        Format::Json => {
            let out = SweepOutput {
                command: "sweep",
                rel_tol: F17(rel_tol),
                rows: rows.iter().map(JsonRow::from).collect(),
            };
            let mut buf = serde_json::to_vec_pretty(&out).expect("serializable");
            buf.push(b'\n');
            buf
        }
        Format::Table => {
            emit(&render_table(&rows))?;
            Vec::new()
        }
    };
    match (&args.output, args.format) {
        (_, Format::Table) => {}
        (Some(path), _) => {
            std::fs::write(path, &rendered)
                .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", path.display())))?;
        }
        (None, _) => {
            emit(&String::from_utf8(rendered).expect("output is utf-8"))?;
        }
    }
    if let Some(script) = &args.plot_script {
        let Some(csv_path) = &args.output else {
            return Err(CliError::Usage("--plot-script needs --output (the data file)".into()));
        };
        if args.format != Format::Csv {
            return Err(CliError::Usage("--plot-script needs --format csv".into()));
        }
        std::fs::write(script, plot_script_text(csv_path, dims.len() > 1))
            .map_err(|e| CliError::Numerical(format!("cannot write {}: {e}", script.display())))?;
    }
    if rows.iter().any(|r| r.error.is_some()) {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn plot_script_text(csv_path: &std::path::Path, vs_dim: bool) -> String {
    let x = if vs_dim { "D" } else { "n" };
    format!(
        "#!/usr/bin/env python3\n\
         # Plots the hydroshape sweep written to {csv}\n\
         import csv\n\
         from collections import defaultdict\n\
         import matplotlib\n\
         matplotlib.use('Agg')\n\
         import matplotlib.pyplot as plt\n\
         \n\
         series = defaultdict(list)\n\
         with open({csv:?}) as fh:\n\
         \x20   for row in csv.DictReader(fh):\n\
         \x20       if row['error'] or not row['complexity']:\n\
         \x20           continue\n\
         \x20       key = (row['space'], row['method'])\n\
         \x20       series[key].append((float(row['{x}']), float(row['complexity'])))\n\
         \n\
         fig, ax = plt.subplots(figsize=(6, 4))\n\
         for (space, method), pts in sorted(series.items()):\n\
         \x20   pts.sort()\n\
         \x20   ax.plot([p[0] for p in pts], [p[1] for p in pts], marker='o',\n\
         \x20           label=f'{{space}} ({{method}})')\n\
         ax.set_xlabel('{x}')\n\
         ax.set_ylabel('shape complexity C')\n\
         ax.legend()\n\
         fig.tight_layout()\n\
         fig.savefig({png:?}, dpi=150)\n\
         print('wrote', {png:?})\n",
        csv = csv_path.display().to_string(),
        x = x,
        png = csv_path.with_extension("png").display().to_string(),
    )
}

fn cmd_validate(args: ValidateArgs, rel_tol: f64) -> Result<ExitCode, CliError> {
    let z_list: Vec<f64> = args
        .z_list
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .ok()
                .filter(|z| *z > 0.0)
                .ok_or_else(|| CliError::Usage(format!("bad Z value `{tok}` in --z-list")))
        })
        .collect::<Result<_, _>>()?;
    let summary = validate::run(&validate::Options {
        rel_tol,
        z_list,
        inject_k1_exponent_bug: args.inject_k1_exponent_bug,
    });
    for c in &summary.checks {
        eprintln!(
            "check {:<24} {}  (tolerance {:.1e}, max residual {:.3e}) {}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.tolerance.0,
            c.max_residual.0,
            c.detail,
        );
    }
    let mut text = serde_json::to_string_pretty(&summary).expect("serializable");
    text.push('\n');
    emit(&text)?;
    if summary.pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
