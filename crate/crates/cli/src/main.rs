//! denslab: exact analysis of interval-configuration densities.
//!
//! Exit codes: 0 success, 1 an asserted check failed, 2 usage or input
//! error.

mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use denslab_core::constructions::{
    build_cmsn, build_h_approx, optimal_params, solve_bound_constants, CmsnParams,
    DEFAULT_PRECISION_BITS,
};
use denslab_core::io::{config_from_json, config_to_json, profile_csv};
use denslab_core::optimizer::{search, SearchOptions};
use denslab_core::oracles::{lemma1_check, proof_inspect, random_cover_system};
use denslab_core::rational::{
    format_rational, parse_rational, to_decimal_string, to_f64, Rational,
};
use denslab_core::{
    density_profile, profile_extrema, quarter_point, quarter_point_values, Configuration,
};
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "denslab",
    version,
    about = "Exact laboratory for interval-configuration densities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-endpoint density extrema and the escape threshold delta* of a
    /// configuration ("-" reads stdin)
    Analyze(AnalyzeArgs),
    /// Build configurations and self-similar approximations
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// High-precision bound constants from their defining polynomials
    SolveCubic { which: WhichConstant },
    /// Multi-start simplex search for low-threshold configurations
    Optimize(OptimizeArgs),
    /// Full proof-machinery inspection of a counterexample configuration
    Inspect {
        /// Configuration JSON file ("-" reads stdin)
        file: String,
        #[arg(long)]
        delta: String,
    },
    /// Randomized suite for the overlapping-cover density bound
    CheckLemma1 {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The endpoint minimizing lambda(C ∩ (x, inf)) + x/2
    QuarterPoint {
        /// Configuration JSON file ("-" reads stdin)
        file: String,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Configuration JSON file ("-" reads stdin)
    file: String,
    /// Also decide the counterexample question at this delta
    #[arg(long)]
    delta: Option<String>,
    /// Write one density-profile CSV per endpoint into this directory
    #[arg(long)]
    profiles: Option<PathBuf>,
    /// Interior samples per profile piece in the CSV export
    #[arg(long, default_value_t = 8)]
    samples: u32,
    /// Machine output (canonical JSON)
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The N-tooth comb on (1-m, 1) with tooth fraction s
    Cmsn {
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long = "N")]
        n: u32,
        /// Use the equalizing parameters solved from the cubic
        #[arg(long)]
        optimal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-depth self-similar set: attach eps^n-scaled copies at every
    /// endpoint, level by level
    HApprox {
        #[arg(long)]
        eps: String,
        #[arg(long)]
        depth: usize,
        /// Base configuration JSON file ("-" reads stdin)
        #[arg(long)]
        base: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichConstant {
    /// q/2 with q^3 + q^2 + q = 1
    Upper,
    /// root of 4d^3 + 2d^2 + 3d = 1
    Lower,
    /// (sqrt(17) - 3) / 4
    Kolyada,
    /// root of 8d^3 + 4d^2 + 2d = 1
    Conjecture,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    intervals: usize,
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    #[arg(long, default_value_t = 1000)]
    iters: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seed configuration JSON file
    #[arg(long)]
    init: Option<String>,
    /// Write the per-iteration incumbent trace as CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Also write the best configuration JSON here
    #[arg(long)]
    config_out: Option<PathBuf>,
}

enum CliError {
    Input(String),
    Assertion(String),
}

impl From<denslab_core::Error> for CliError {
    fn from(e: denslab_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Assertion(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &str) -> Result<Configuration, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    Ok(config_from_json(&text)?)
}

fn parse_rat(text: &str) -> Result<Rational, CliError> {
    Ok(parse_rational(text)?)
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn precision_bits() -> u32 {
    std::env::var("DF_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Analyze(args) => {
            let config = load_config(&args.file)?;
            let delta = args.delta.as_deref().map(parse_rat).transpose()?;
            let rep = report::analyze(&config, delta.as_ref())?;
            if let Some(dir) = &args.profiles {
                std::fs::create_dir_all(dir)?;
                for (idx, p) in config.endpoints().iter().enumerate() {
                    let prof = density_profile(&config, p)?;
                    let csv = profile_csv(&prof, args.samples);
                    std::fs::write(dir.join(format!("endpoint_{idx:03}.csv")), csv)?;
                }
            }
            if args.json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                print!("{}", report::human_summary(&rep));
            }
            Ok(())
        }
        Cmd::Construct(ConstructCmd::Cmsn {
            m,
            s,
            n,
            optimal,
            out,
        }) => {
            let (m, s) = if optimal {
                if m.is_some() || s.is_some() {
                    return Err(CliError::Input(
                        "--optimal replaces --m and --s; give one or the other".into(),
                    ));
                }
                let opt = optimal_params();
                (opt.m, opt.s)
            } else {
                let m = m.ok_or_else(|| CliError::Input("--m required (or --optimal)".into()))?;
                let s = s.ok_or_else(|| CliError::Input("--s required (or --optimal)".into()))?;
                (parse_rat(&m)?, parse_rat(&s)?)
            };
            let params = CmsnParams::new(m, s, n)?;
            let config = build_cmsn(&params);
            emit(out.as_ref(), &config_to_json(&config))
        }
        Cmd::Construct(ConstructCmd::HApprox {
            eps,
            depth,
            base,
            out,
        }) => {
            let base = load_config(&base)?;
            let eps = parse_rat(&eps)?;
            let h = build_h_approx(&base, &eps, depth)?;
            let mut rendered = serde_json::to_string_pretty(&h)?;
            rendered.push('\n');
            emit(out.as_ref(), &rendered)
        }
        Cmd::SolveCubic { which } => {
            let bc = solve_bound_constants(precision_bits());
            let (value, residual) = match which {
                WhichConstant::Upper => (&bc.delta_upper, &bc.residual_upper),
                WhichConstant::Lower => (&bc.delta_lower, &bc.residual_lower),
                WhichConstant::Kolyada => (&bc.kolyada_upper, &bc.residual_kolyada),
                WhichConstant::Conjecture => (&bc.conjecture, &bc.residual_conjecture),
            };
            println!("{}", to_decimal_string(value, 15));
            println!("residual {:.2e}", to_f64(residual));
            Ok(())
        }
        Cmd::Optimize(args) => {
            let init = args.init.as_deref().map(load_config).transpose()?;
            let result = search(&SearchOptions {
                intervals: args.intervals,
                restarts: args.restarts,
                iters: args.iters,
                seed: args.seed,
                init,
            })?;
            if let Some(path) = &args.trace {
                let mut csv = String::from("iteration,best\n");
                for (k, v) in result.trace.iter().enumerate() {
                    csv.push_str(&format!("{k},{v}\n"));
                }
                std::fs::write(path, csv)?;
            }
            if let Some(path) = &args.config_out {
                std::fs::write(path, config_to_json(&result.best_configuration))?;
            }
            println!("{}", serde_json::to_string_pretty(&result)?);
            if let Some(fatal) = &result.fatal {
                return Err(CliError::Assertion(fatal.clone()));
            }
            Ok(())
        }
        Cmd::Inspect { file, delta } => {
            let config = load_config(&file)?;
            let delta = parse_rat(&delta)?;
            let insp = proof_inspect(&config, &delta)?;
            println!("{}", serde_json::to_string_pretty(&insp)?);
            if !insp.asserted_all_pass() {
                return Err(CliError::Assertion(
                    "an asserted inspection check failed".into(),
                ));
            }
            Ok(())
        }
        Cmd::CheckLemma1 {
            trials,
            delta,
            seed,
        } => {
            use rand::SeedableRng;
            let delta = parse_rat(&delta)?;
            let bound = (Rational::from_integer(1.into()) - &delta)
                / (Rational::from_integer(1.into()) + &delta);
            let mut worst: Option<Rational> = None;
            let mut violations = 0u64;
            for trial in 0..trials {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial));
                let sys = random_cover_system(&mut rng, &delta);
                let rep = lemma1_check(&sys, &delta)?;
                if !rep.holds {
                    violations += 1;
                }
                if worst.as_ref().is_none_or(|w| rep.total_density < *w) {
                    worst = Some(rep.total_density);
                }
            }
            let worst = worst.expect("at least one trial");
            println!(
                "trials {trials}, violations {violations}, bound {} ({}), worst density {} ({})",
                format_rational(&bound),
                to_f64(&bound),
                format_rational(&worst),
                to_f64(&worst)
            );
            if violations > 0 {
                return Err(CliError::Assertion(format!(
                    "{violations} cover-bound violations"
                )));
            }
            Ok(())
        }
        Cmd::QuarterPoint { file } => {
            let config = load_config(&file)?;
            let p = quarter_point(&config);
            let stats = profile_extrema(&config, &p)?;
            println!("quarter point: {}", format_rational(&p.value));
            println!(
                "escape = {} ({}), bound 3/4",
                format_rational(&stats.escape),
                to_f64(&stats.escape)
            );
            for (ep, f) in quarter_point_values(&config) {
                println!(
                    "f({}) = {}",
                    format_rational(&ep.value),
                    format_rational(&f)
                );
            }
            Ok(())
        }
    }
}
