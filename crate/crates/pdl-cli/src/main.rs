//! `pdl` — batch front end over the logic workbench. Subcommands cover
//! model checking, compiling tile sets to formulas, tiling search, machine
//! compilation and simulation, witness search, bounded model finding, the
//! identity suite, and the star-to-loop rewrite.
//!
//! Exit codes: 0 satisfied/pass, 1 unsatisfied/fail, 2 bad input, 3 search
//! budget exhausted.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use pdl_core::laws::run_identity_suite;
use pdl_core::reduction::{gamma, Encoding, Form};
use pdl_core::semantics::truth_set_named;
use pdl_core::surface::files::{
    encode_meta, encode_model, encode_tileset, encode_tiling, encode_witness, parse_model,
    parse_tileset, parse_tm, WitnessBundle,
};
use pdl_core::surface::{parse_prop, print_prop, SourceText};
use pdl_core::tiling::{search_tiling_counted, Shape, Tiling};
use pdl_core::tm::{compile_tm, simulate, SimPolicy};
use pdl_core::witness::{bounded_sat, torus_sat, BoundedSat, TorusSat, WitnessKind};
use pdl_core::Proposition;

#[derive(Parser)]
#[command(name = "pdl", version, about = "Workbench for strict dynamic-logic formulas, tilings, and machines")]
struct Cli {
    /// Write a machine-readable report of this run to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    json_report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model-check a formula file against a model file.
    Check {
        model: PathBuf,
        formula: PathBuf,
        /// Check only this state; default is "anywhere".
        #[arg(long)]
        state: Option<String>,
    },
    /// Compile a tile set into its grid formulas and write them to a directory.
    Reduce {
        tileset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = EncodingArg::Fix)]
        encoding: EncodingArg,
        #[arg(long, value_enum, default_value_t = FormArg::Star)]
        form: FormArg,
    },
    /// Search for a tiling of a rectangle or torus.
    Tile {
        tileset: PathBuf,
        /// rect:W,H or torus:N,M
        #[arg(long)]
        shape: ShapeArg,
        /// Pin this tile at position (0,0).
        #[arg(long)]
        origin: Option<String>,
        /// Also write the tiling as a document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile a Turing machine into a tile set plus decode metadata.
    CompileTm {
        tm: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a machine and print its configurations.
    SimulateTm {
        tm: PathBuf,
        #[arg(long)]
        steps: usize,
        /// Explore every nondeterministic branch instead of the first.
        #[arg(long)]
        all_branches: bool,
    },
    /// Search torus shapes for a model of the tile set's grid constraints.
    Witness {
        tileset: PathBuf,
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        max_m: usize,
        /// Require the full formula (start pin and neon recurrence) at the origin.
        #[arg(long)]
        full_gamma: bool,
        /// Write the witness bundle to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively search for a small model satisfying a formula file.
    FindModel {
        formula: PathBuf,
        #[arg(long)]
        max_states: usize,
        /// Restrict atomic programs to partial functions.
        #[arg(long)]
        det: bool,
        /// Give up after this many candidate models.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check the algebraic identity suite on seeded random models.
    Identities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        models: usize,
        /// Use deterministic models only.
        #[arg(long)]
        det: bool,
    },
    /// Rewrite a formula file's stars into loops and print the result.
    Destar { formula: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Fix,
    Tie,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Star,
    While,
}

impl From<EncodingArg> for Encoding {
    fn from(e: EncodingArg) -> Encoding {
        match e {
            EncodingArg::Fix => Encoding::Fix,
            EncodingArg::Tie => Encoding::Tie,
        }
    }
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Star => Form::Star,
            FormArg::While => Form::While,
        }
    }
}

#[derive(Clone)]
struct ShapeArg(Shape);

impl FromStr for ShapeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<ShapeArg, String> {
        let (kind, dims) = s
            .split_once(':')
            .ok_or_else(|| "expected rect:W,H or torus:N,M".to_string())?;
        let (w, h) = dims
            .split_once(',')
            .ok_or_else(|| "expected two comma-separated sizes".to_string())?;
        let w: usize = w.trim().parse().map_err(|_| format!("bad width {w:?}"))?;
        let h: usize = h.trim().parse().map_err(|_| format!("bad height {h:?}"))?;
        if w == 0 || h == 0 {
            return Err("sizes must be at least 1".to_string());
        }
        match kind {
            "rect" => Ok(ShapeArg(Shape::Rect { width: w, height: h })),
            "torus" => Ok(ShapeArg(Shape::Torus { width: w, height: h })),
            other => Err(format!("unknown shape kind {other:?}")),
        }
    }
}

enum CliError {
    /// Unreadable, unparsable, or invalid input: exit 2.
    Input(String),
    /// A search gave up before exhausting its space: exit 3.
    Budget(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

/// What a successfully dispatched command reports back.
struct Outcome {
    /// One summary line, also echoed into the report.
    line: String,
    /// True means "searched and found nothing" or "suite failed": exit 1.
    negative: bool,
    nodes: Option<u64>,
    bound: Option<String>,
}

impl Outcome {
    fn positive(line: impl Into<String>) -> Outcome {
        Outcome { line: line.into(), negative: false, nodes: None, bound: None }
    }

    fn negative(line: impl Into<String>) -> Outcome {
        Outcome { line: line.into(), negative: true, nodes: None, bound: None }
    }
}

#[derive(Serialize)]
struct InputDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunReport {
    argv: Vec<String>,
    inputs: Vec<InputDigest>,
    outcome: String,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<String>,
    timing_ms: u128,
}

/// Reads a file, recording its digest for the run report.
fn read_input(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    inputs.push(InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
    });
    Ok(text)
}

fn load_formula(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<Proposition, CliError> {
    let text = read_input(path, inputs)?;
    parse_prop(&SourceText::from_file(path.display().to_string(), text))
        .map_err(|e| CliError::Input(e.to_string()))
}

fn write_output(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, content).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Renders a tiling with the top row first, columns aligned.
fn render_grid(t: &Tiling) -> String {
    let shape = t.shape();
    let width = (0..shape.width())
        .flat_map(|i| (0..shape.height()).map(move |j| t.get(i, j).len()))
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    for j in (0..shape.height()).rev() {
        let row: Vec<String> = (0..shape.width())
            .map(|i| format!("{:width$}", t.get(i, j)))
            .collect();
        out.push_str(row.join(" ").trim_end());
        out.push('\n');
    }
    out
}

fn run(cmd: &Command, inputs: &mut Vec<InputDigest>) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check { model, formula, state } => {
            let m = parse_model(&read_input(model, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", model.display())))?;
            let f = load_formula(formula, inputs)?;
            let sat = truth_set_named(&m, &f).map_err(|e| CliError::Input(e.to_string()))?;
            match state {
                Some(s) => {
                    if m.state_ix(s).is_none() {
                        return Err(CliError::Input(format!("no state named {s:?}")));
                    }
                    if sat.contains(s) {
                        Ok(Outcome::positive(format!("satisfied at {s}")))
                    } else {
                        Ok(Outcome::negative(format!("not satisfied at {s}")))
                    }
                }
                None => {
                    if sat.is_empty() {
                        Ok(Outcome::negative("satisfied nowhere"))
                    } else {
                        let states: Vec<&str> = sat.iter().map(String::as_str).collect();
                        Ok(Outcome::positive(format!("satisfied at {}", states.join(", "))))
                    }
                }
            }
        }
        Command::Reduce { tileset, out, encoding, form } => {
            let ts = parse_tileset(&read_input(tileset, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", tileset.display())))?;
            let output = gamma(&ts, (*encoding).into(), (*form).into());
            let files = [
                ("square.pdl", &output.square),
                ("rho1.pdl", &output.rho1),
                ("rho2.pdl", &output.rho2),
                ("rho3.pdl", &output.rho3),
                ("gamma.pdl", &output.gamma),
                ("gamma_t.pdl", &output.gamma_t),
            ];
            for (name, formula) in files {
                write_output(&out.join(name), &(print_prop(formula) + "\n"))?;
            }
            Ok(Outcome::positive(format!("wrote 6 formulas to {}", out.display())))
        }
        Command::Tile { tileset, shape, origin, out } => {
            let ts = parse_tileset(&read_input(tileset, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", tileset.display())))?;
            if let Some(origin) = origin {
                if ts.tile_ix(origin).is_none() {
                    return Err(CliError::Input(format!("no tile named {origin:?}")));
                }
            }
            let (found, nodes) = search_tiling_counted(&ts, shape.0, origin.as_deref());
            match found {
                Some(t) => {
                    print!("{}", render_grid(&t));
                    if let Some(path) = out {
                        write_output(path, &encode_tiling(&t))?;
                    }
                    Ok(Outcome {
                        line: "tiling found".into(),
                        negative: false,
                        nodes: Some(nodes),
                        bound: None,
                    })
                }
                None => Ok(Outcome {
                    line: "no tiling".into(),
                    negative: true,
                    nodes: Some(nodes),
                    bound: None,
                }),
            }
        }
        Command::CompileTm { tm, out } => {
            let machine = parse_tm(&read_input(tm, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", tm.display())))?;
            let compiled = compile_tm(&machine).map_err(|e| CliError::Input(e.to_string()))?;
            write_output(&out.join("tileset.json"), &encode_tileset(&compiled.tileset))?;
            write_output(&out.join("meta.json"), &encode_meta(&compiled.meta))?;
            Ok(Outcome::positive(format!(
                "compiled {} tiles to {}",
                compiled.tileset.tiles.len(),
                out.display()
            )))
        }
        Command::SimulateTm { tm, steps, all_branches } => {
            let machine = parse_tm(&read_input(tm, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", tm.display())))?;
            let policy = if *all_branches {
                SimPolicy::AllBranchesBounded
            } else {
                SimPolicy::FirstTransition
            };
            let runs = simulate(&machine, *steps, policy);
            for (r, run) in runs.iter().enumerate() {
                println!("run {} ({} steps):", r + 1, run.len() - 1);
                for (j, c) in run.iter().enumerate() {
                    println!(
                        "  step {j}: state {} head {} tape {}",
                        c.state,
                        c.head,
                        c.tape.join(" ")
                    );
                }
            }
            Ok(Outcome::positive(format!(
                "{} run(s), longest {} steps",
                runs.len(),
                runs.iter().map(|r| r.len() - 1).max().unwrap_or(0)
            )))
        }
        Command::Witness { tileset, max_n, max_m, full_gamma, out } => {
            let ts = parse_tileset(&read_input(tileset, inputs)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", tileset.display())))?;
            let kind = if *full_gamma { WitnessKind::FullGamma } else { WitnessKind::GammaT };
            let search = torus_sat(&ts, *max_n, *max_m, kind, Encoding::Fix);
            match search.outcome {
                TorusSat::Found { n, m, tiling, model, formula, satisfying } => {
                    print!("{}", render_grid(&tiling));
                    if let Some(path) = out {
                        let bundle = WitnessBundle {
                            tileset: ts,
                            tiling,
                            model,
                            formula,
                            satisfying_states: satisfying.into_iter().collect(),
                        };
                        write_output(path, &encode_witness(&bundle))?;
                    }
                    Ok(Outcome {
                        line: format!("witness on torus {n}x{m}"),
                        negative: false,
                        nodes: Some(search.nodes),
                        bound: None,
                    })
                }
                TorusSat::NoneUpTo { max_n, max_m } => Ok(Outcome {
                    line: format!("no witness up to {max_n}x{max_m}"),
                    negative: true,
                    nodes: Some(search.nodes),
                    bound: Some(format!("{max_n}x{max_m}")),
                }),
            }
        }
        Command::FindModel { formula, max_states, det, budget } => {
            let f = load_formula(formula, inputs)?;
            let search = bounded_sat(&f, *max_states, *det, *budget)
                .map_err(|e| CliError::Budget(e.to_string()))?;
            match search.outcome {
                BoundedSat::Found(m) => {
                    print!("{}", encode_model(&m));
                    Ok(Outcome {
                        line: format!("model with {} state(s)", m.states.len()),
                        negative: false,
                        nodes: Some(search.nodes),
                        bound: None,
                    })
                }
                BoundedSat::NoneUpTo(k) => Ok(Outcome {
                    line: format!("no model up to {k} state(s)"),
                    negative: true,
                    nodes: Some(search.nodes),
                    bound: Some(format!("{k} states")),
                }),
            }
        }
        Command::Identities { seed, models, det } => {
            let results = run_identity_suite(*seed, *models, *det);
            let mut all_good = true;
            for r in &results {
                if r.passed() {
                    println!("pass  {} ({} checks)", r.name, r.checked);
                } else {
                    all_good = false;
                    println!("FAIL  {} ({} of {} checks)", r.name, r.failures, r.checked);
                    for s in &r.samples {
                        println!("      {s}");
                    }
                }
            }
            let line = if all_good {
                format!("all {} laws hold", results.len())
            } else {
                "identity suite failed".to_string()
            };
            if all_good {
                Ok(Outcome::positive(line))
            } else {
                Ok(Outcome::negative(line))
            }
        }
        Command::Destar { formula } => {
            let f = load_formula(formula, inputs)?;
            let rewritten = f.destar().map_err(|e| CliError::Input(e.to_string()))?;
            println!("{}", print_prop(&rewritten));
            Ok(Outcome::positive("rewritten"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut inputs = Vec::new();
    let result = run(&cli.command, &mut inputs);
    let (outcome, code) = match &result {
        Ok(o) => {
            println!("{}", o.line);
            (o.line.clone(), if o.negative { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            (e.to_string(), e.code())
        }
    };
    if let Some(path) = &cli.json_report {
        let (nodes, bound) = match &result {
            Ok(o) => (o.nodes, o.bound.clone()),
            Err(_) => (None, None),
        };
        let report = RunReport {
            argv: std::env::args().collect(),
            inputs,
            outcome,
            exit_code: code,
            nodes,
            bound,
            timing_ms: start.elapsed().as_millis(),
        };
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
