//! Command-line front end: one subcommand per analysis, structured (JSON)
//! or CSV output, deterministic for fixed inputs.
//!
//! Exit codes: 0 on success, 1 when the mathematics says no (criterion not
//! violated, divergence not witnessed, certification failure), 2 on usage
//! errors (bad flags, malformed files, refused exact mode).

mod specs;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use lambda_bv::{
    brute_force_grid, build_function, embed_report, find_violation, integral_modulus,
    shift_profile, solve_closed_form, variation_exact_with_limit, variation_greedy,
    variation_norm, verify_divergence, verify_membership, EmbeddingParams, Error,
    ExtremalProblem, Relaxation, StepFunction, EXACT_GRID_LIMIT,
};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            // domain outcomes: the run was well-formed but the mathematics
            // refused
            CliError::Core(
                Error::CriterionNotViolated { .. }
                | Error::DivergenceNotWitnessed { .. }
                | Error::CertificationFailure(_)
                | Error::Internal(_),
            ) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "lambda-bv", version, about = "Variation, modulus and embedding analysis for step functions")]
struct Cli {
    /// Write the primary output to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the p-Lambda-variation of a step function.
    Variation {
        /// Step function file: {"breakpoints": [...], "values": [...], "periodic": bool}.
        #[arg(long)]
        function: PathBuf,
        /// Weight sequence spec (constant:C, power:A, explicit:V1,V2,... or @file.json).
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Force the exhaustive search (error if the grid exceeds --limit).
        #[arg(long)]
        exact: bool,
        /// Force the greedy lower bound.
        #[arg(long, conflicts_with = "exact")]
        greedy: bool,
        /// Breakpoint-grid cap for the exhaustive search.
        #[arg(long, default_value_t = EXACT_GRID_LIMIT)]
        limit: usize,
    },
    /// Evaluate the integral modulus of continuity of a step function.
    Modulus {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        /// Emit the full shift-distance profile instead of the single value.
        #[arg(long)]
        profile: bool,
        #[arg(long, value_enum, default_value = "structured")]
        format: Format,
    },
    /// Sample the embedding criterion term and report a verdict.
    EmbedCheck {
        #[arg(long)]
        lambda: String,
        /// Gauge spec (power:B, power-log:B,G or @file.json).
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 16384)]
        n_max: usize,
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Solve the constrained block-maximization problem in closed form.
    Extremal {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        budget: f64,
        /// Also run the lattice oracle (n <= 3) and report its value.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Search for a criterion violation, build the counterexample function
    /// and certify it.
    Counterexample {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 1 << 20)]
        n_limit: usize,
        /// Exponent a in the relaxed smallness bound c * 2^(-a k).
        #[arg(long, default_value_t = 4.0)]
        relax_a: f64,
        /// Constant c in the relaxed smallness bound.
        #[arg(long, default_value_t = 1.0)]
        relax_c: f64,
        /// Also write the assembled step function to this file.
        #[arg(long)]
        emit_function: Option<PathBuf>,
    },
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match output {
        Some(path) => write_atomic(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn load_function(path: &Path) -> Result<StepFunction, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read function file '{}': {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed function file '{}': {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let output = cli.output.as_deref();
    match cli.command {
        Command::Variation {
            function,
            lambda,
            p,
            exact,
            greedy,
            limit,
        } => {
            let f = load_function(&function)?;
            let seq = specs::parse_sequence(&lambda)?;
            let result = if exact {
                variation_exact_with_limit(&f, &seq, p, limit)?
            } else if greedy {
                variation_greedy(&f, &seq, p)?
            } else if f.breakpoints().len() <= limit {
                variation_exact_with_limit(&f, &seq, p, limit)?
            } else {
                variation_greedy(&f, &seq, p)?
            };
            let norm = f.eval(0.0)?.abs() + result.value;
            let doc = json!({
                "value": result.value,
                "norm": norm,
                "exact": result.exact,
                "witness": result.witness,
            });
            emit(output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::Modulus {
            function,
            delta,
            q,
            profile,
            format,
        } => {
            let f = load_function(&function)?;
            if profile {
                let prof = shift_profile(&f, delta, q)?;
                match format {
                    Format::Csv => {
                        let mut text = String::from("gamma,distance\n");
                        for (g, v) in prof.gamma_breaks.iter().zip(&prof.values) {
                            text.push_str(&format!("{g},{v}\n"));
                        }
                        emit(output, &text)
                    }
                    Format::Structured => emit(
                        output,
                        &format!("{}\n", serde_json::to_string_pretty(&prof).unwrap()),
                    ),
                }
            } else {
                let value = integral_modulus(&f, delta, q)?;
                match format {
                    Format::Csv => emit(output, &format!("delta,q,omega_q\n{delta},{q},{value}\n")),
                    Format::Structured => {
                        let doc = json!({"delta": delta, "q": q, "omega_q": value});
                        emit(output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
                    }
                }
            }
        }
        Command::EmbedCheck {
            lambda,
            omega,
            p,
            q,
            n_max,
            samples,
            format,
        } => {
            let params = EmbeddingParams::new(
                specs::parse_sequence(&lambda)?,
                specs::parse_modulus(&omega)?,
                p,
                q,
            )?;
            let report = embed_report(&params, n_max, samples)?;
            let summary = json!({
                "verdict": report.verdict,
                "slope": report.slope,
                "sup_term": report.sup_term,
            });
            match format {
                Format::Csv => {
                    let mut text = String::from("n,E_n,k_star\n");
                    for i in 0..report.sampled_n.len() {
                        text.push_str(&format!(
                            "{},{},{}\n",
                            report.sampled_n[i], report.terms[i], report.argmax_k[i]
                        ));
                    }
                    emit(output, &text)?;
                    eprintln!("{summary}");
                    Ok(())
                }
                Format::Structured => emit(
                    output,
                    &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
                ),
            }
        }
        Command::Extremal {
            lambda,
            n,
            r,
            budget,
            brute_force,
            resolution,
        } => {
            let seq = specs::parse_sequence(&lambda)?;
            let problem = ExtremalProblem::new(seq, n, r, budget)?;
            let solution = solve_closed_form(&problem);
            let mut doc = serde_json::to_value(&solution).unwrap();
            if brute_force {
                let grid = brute_force_grid(&problem, resolution)?;
                doc["brute_force_value"] = json!(grid);
                doc["resolution"] = json!(resolution);
            }
            emit(output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
        Command::Counterexample {
            lambda,
            omega,
            p,
            q,
            stages,
            n_limit,
            relax_a,
            relax_c,
            emit_function,
        } => {
            let params = EmbeddingParams::new(
                specs::parse_sequence(&lambda)?,
                specs::parse_modulus(&omega)?,
                p,
                q,
            )?;
            let relaxation = Relaxation {
                a: relax_a,
                c: relax_c,
            };
            let plan = find_violation(&params, stages, n_limit, relaxation)?;
            let g = build_function(&plan, params.p)?;
            let membership = verify_membership(&plan, &params.seq, params.p)?;
            let divergence = verify_divergence(&g, &plan, &params)?;
            let norm = variation_norm(&g, &params.seq, params.p)?;
            let norm_budget: f64 = plan
                .stages
                .iter()
                .map(|st| 2f64.powf(1.0 / params.p) * 0.5f64.powi(st.stage as i32))
                .sum();
            if let Some(path) = emit_function.as_deref() {
                write_atomic(path, &format!("{}\n", serde_json::to_string_pretty(&g).unwrap()))?;
            }
            let doc = json!({
                "plan": plan,
                "membership": membership,
                "divergence": divergence,
                "norm": norm,
                "norm_budget": norm_budget,
            });
            emit(output, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
