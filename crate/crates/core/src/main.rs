use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use paulicap::capacity::{two_qubit_capacity_with, CapacityPath};
use paulicap::pauli::PureState;
use paulicap::search::{ansatz_grid_search, minimize_output_entropy, SearchConfig};
use paulicap::sweep::{
    custom_weights, evaluate_point, format_sig, record_json, render_csv, render_json, sweep_mu, sweep_param,
    threshold_report, ChannelChoice, SweepOutcome,
};
use paulicap::verify::{run_verify, GridDensity};

#[derive(Parser, Debug)]
#[command(name = "paulicap", version, about = "Two-qubit capacity of Pauli channels with memory")]
struct Cli {
    /// Seed for every stochastic component.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Low-discrepancy restarts per search.
    #[arg(long, global = true, default_value_t = 64)]
    restarts: usize,
    /// Entropy agreement (bits) between the two best restarts.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Nelder-Mead iterations per restart.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iterations: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity at a single point.
    Capacity {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        mu: f64,
        #[command(flatten)]
        output: OutputArgs,
        /// Skip the closed form even for the symmetric family.
        #[arg(long)]
        force_numeric: bool,
    },
    /// Capacity over an evenly spaced memory grid.
    SweepMu {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long, default_value_t = 0.0)]
        mu_min: f64,
        #[arg(long, default_value_t = 1.0)]
        mu_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Capacity over an evenly spaced grid of the family parameter at fixed memory.
    SweepP {
        #[arg(long, value_enum, default_value_t = FamilyArg::Symmetric)]
        family: FamilyArg,
        #[arg(long)]
        param_min: f64,
        #[arg(long)]
        param_max: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Memory threshold where the optimal input switches from |00> to a Bell state.
    Threshold {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Minimal output entropy search at a single point.
    Moe {
        #[command(flatten)]
        channel: ChannelArgs,
        #[arg(long)]
        mu: f64,
        /// Also scan both ansatz branches on a (theta, phi) grid.
        #[arg(long)]
        ansatz_grid: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the cross-module self-check.
    Verify {
        #[arg(long, value_enum, default_value_t = DensityArg::Low)]
        grid_density: DensityArg,
    },
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// p for the symmetric family, x for the depolarizing one.
    #[arg(long, alias = "p", alias = "x")]
    param: Option<f64>,
    /// Custom Pauli weights q0,q1,q2,q3.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long)]
    json: bool,
    /// Report capacities per channel use instead of per two uses.
    #[arg(long)]
    per_qubit: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    Symmetric,
    Depolarizing,
    Custom,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DensityArg {
    Low,
    High,
}

enum Failure {
    Usage(String),
    Unconverged(String),
    Verification(String),
    Io(io::Error),
}

impl From<paulicap::Error> for Failure {
    fn from(e: paulicap::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl ChannelArgs {
    fn resolve(&self) -> Result<ChannelChoice, Failure> {
        match (self.family, &self.q, self.param) {
            (None | Some(FamilyArg::Custom), Some(q), None) => Ok(ChannelChoice::Custom { q: custom_weights(q)? }),
            (_, Some(_), _) => Err(Failure::Usage("--q is only valid with --family custom and without --param".into())),
            (Some(FamilyArg::Custom), None, _) => Err(Failure::Usage("--family custom requires --q".into())),
            (_, None, None) => Err(Failure::Usage("--param (or --q for custom weights) is required".into())),
            (None | Some(FamilyArg::Symmetric), None, Some(p)) => Ok(ChannelChoice::Symmetric { p }),
            (Some(FamilyArg::Depolarizing), None, Some(x)) => Ok(ChannelChoice::Depolarizing { x }),
        }
    }
}

fn describe_state(state: &PureState) -> String {
    let amps: Vec<String> = state
        .amplitudes()
        .iter()
        .map(|a| {
            let sign = if a.im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", format_sig(a.re, 6), format_sig(a.im.abs(), 6))
        })
        .collect();
    let [w0, w1] = state.schmidt_weights();
    format!(
        "[{}] in |00>,|01>,|10>,|11>; schmidt weights {}, {}",
        amps.join(", "),
        format_sig(w0, 6),
        format_sig(w1, 6)
    )
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_sweep(cli: &Cli, outcome: &SweepOutcome, output: &OutputArgs) -> Result<(), Failure> {
    let text = if output.json {
        render_json(&outcome.records, output.per_qubit)
    } else {
        render_csv(&outcome.records, output.per_qubit)
    };
    if !outcome.all_converged {
        eprint!("{text}");
        return Err(Failure::Unconverged("at least one grid point did not converge".into()));
    }
    emit(cli, &text)
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format_sig(v, 9))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let config = SearchConfig {
        restarts: cli.restarts,
        max_iterations: cli.max_iterations,
        entropy_tolerance: cli.tolerance,
        seed: cli.seed,
    };
    config.validate()?;

    match &cli.command {
        Command::Capacity { channel, mu, output, force_numeric } => {
            let choice = channel.resolve()?;
            let mut point = evaluate_point(&choice, *mu, &config)?;
            if *force_numeric {
                let r = two_qubit_capacity_with(&choice.spec(*mu)?, &config, CapacityPath::ForceNumeric)?;
                point.record.s_min_bits = r.s_min_bits;
                point.record.capacity_bits = 2.0 - r.s_min_bits;
                point.record.method = paulicap::sweep::SweepMethod::Numeric;
                point.record.regime = paulicap::sweep::RecordRegime::Unknown;
                point.state = r.state;
                point.converged = r.converged;
                point.saturation_gap = r.saturation_gap;
            }
            let rec = &point.record;
            let text = if output.json {
                let mut v = record_json(rec, output.per_qubit);
                if let Value::Object(m) = &mut v {
                    m.insert("saturation_gap".into(), json!(point.saturation_gap));
                    m.insert("converged".into(), json!(point.converged));
                    m.insert("optimal_state".into(), json!(describe_state(&point.state)));
                }
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            } else {
                let (label, cap) = if output.per_qubit {
                    ("capacity_bits_per_qubit", rec.capacity_bits / 2.0)
                } else {
                    ("capacity_bits", rec.capacity_bits)
                };
                format!(
                    "family: {}\nparam: {}\nmu: {}\n{label}: {cap:.9}\ns_min_bits: {:.9}\nregime: {}\nmethod: {}\n\
                     saturation_gap: {:.3e}\nconverged: {}\noptimal_state: {}\n",
                    rec.family.as_str(),
                    format_sig(rec.param, 9),
                    format_sig(rec.mu, 9),
                    rec.s_min_bits,
                    rec.regime.as_str(),
                    rec.method.as_str(),
                    point.saturation_gap,
                    point.converged,
                    describe_state(&point.state),
                )
            };
            if !point.converged {
                eprint!("{text}");
                return Err(Failure::Unconverged("numerical search did not converge".into()));
            }
            emit(cli, &text)
        }
        Command::SweepMu { channel, mu_min, mu_max, steps, output } => {
            let outcome = sweep_mu(&channel.resolve()?, *mu_min, *mu_max, *steps, &config)?;
            emit_sweep(cli, &outcome, output)
        }
        Command::SweepP { family, param_min, param_max, mu, steps, output } => {
            let choice = match family {
                FamilyArg::Symmetric => ChannelChoice::Symmetric { p: *param_min },
                FamilyArg::Depolarizing => ChannelChoice::Depolarizing { x: *param_min },
                FamilyArg::Custom => return Err(Failure::Usage("sweep-p needs a parametrized family".into())),
            };
            let outcome = sweep_param(&choice, *param_min, *param_max, *mu, *steps, &config)?;
            emit_sweep(cli, &outcome, output)
        }
        Command::Threshold { channel, json } => {
            let report = threshold_report(&channel.resolve()?, &config)?;
            let text = if *json {
                format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
            } else {
                format!(
                    "family: {}\np: {}\nmu_t_analytic: {}\nmu_t_numeric: {}\nleft_slope: {}\nright_slope: {}\nnote: {}\n",
                    report.family.as_str(),
                    format_sig(report.p, 9),
                    opt(report.mu_t_analytic),
                    opt(report.mu_t_numeric),
                    opt(report.left_slope),
                    opt(report.right_slope),
                    report.note.as_deref().unwrap_or("none"),
                )
            };
            emit(cli, &text)
        }
        Command::Moe { channel, mu, ansatz_grid, json } => {
            let spec = channel.resolve()?.spec(*mu)?;
            let found = minimize_output_entropy(&spec, &config)?;
            let grid = if *ansatz_grid { Some(ansatz_grid_search(&spec, 91, 72)?) } else { None };
            let text = if *json {
                let mut v = json!({
                    "entropy_bits": found.entropy_bits,
                    "converged": found.converged,
                    "restarts_used": found.restarts_used,
                    "state": describe_state(&found.state),
                });
                if let Some(g) = &grid {
                    v["ansatz_grid_entropy_bits"] = json!(g.entropy_bits);
                    v["ansatz_grid_state"] = json!(describe_state(&g.state));
                }
                format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
            } else {
                let mut t = format!(
                    "entropy_bits: {:.9}\nconverged: {}\nrestarts_used: {}\nstate: {}\n",
                    found.entropy_bits,
                    found.converged,
                    found.restarts_used,
                    describe_state(&found.state)
                );
                if let Some(g) = &grid {
                    t.push_str(&format!(
                        "ansatz_grid_entropy_bits: {:.9}\nansatz_grid_state: {}\n",
                        g.entropy_bits,
                        describe_state(&g.state)
                    ));
                }
                t
            };
            if !found.converged {
                eprint!("{text}");
                return Err(Failure::Unconverged("numerical search did not converge".into()));
            }
            emit(cli, &text)
        }
        Command::Verify { grid_density } => {
            let density = match grid_density {
                DensityArg::Low => GridDensity::Low,
                DensityArg::High => GridDensity::High,
            };
            let report = run_verify(density, cli.seed)?;
            emit(cli, &report.render())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification("verification failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unconverged(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
