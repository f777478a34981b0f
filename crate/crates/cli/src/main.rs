use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pasec_core::experiments::{
    cas_link, cas_positions, run_cdf, run_sweep, solve_pas, write_cdf, write_sweep, ExperimentConfig, Scheme,
};
use pasec_core::model::{dbm_to_linear, Position};
use pasec_core::multi::{solve_fixed_array, MultiScenario, MultiSolution};
use pasec_core::single::{optimal_position_single, solve_single, ScalarScenario};

mod oracle;

#[derive(Parser)]
#[command(name = "pasec", version, about = "Secrecy-rate experiments for pinching-antenna downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    /// `key = value` experiment file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    drops: Option<usize>,
    /// Output directory (overrides `output_path`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Mean SR against transmit power for every configured case.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Empirical SR distribution at one transmit power.
    Cdf {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, allow_hyphen_values = true)]
        power_dbm: Option<f64>,
    },
    /// Solves one scenario and prints the resulting design.
    Solve {
        /// Bob's ground position `x,y`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        bob: (f64, f64),
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        eve: (f64, f64),
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 10.0)]
        power_dbm: f64,
        #[arg(long, default_value = "pas-an", value_parser = parse_scheme)]
        scheme: Scheme,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Checks the closed forms and the SDP engine against brute force.
    Oracle {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Quartic,
    Sdp,
    Split,
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    let f = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
    Ok((f(x)?, f(y)?))
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: pasec_core::Error| e.to_string())
}

fn load(run: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &run.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = run.seed {
        cfg.rng_seed = seed;
    }
    if run.drops.is_some() {
        cfg.num_drops = run.drops;
    }
    if let Some(out) = &run.out {
        cfg.output_path = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report(paths: &[PathBuf], failed: usize) {
    for p in paths {
        println!("wrote {}", p.display());
    }
    if failed > 0 {
        eprintln!("warning: {failed} drop(s) failed; see the error column of records.csv");
    }
}

fn print_multi(sol: &MultiSolution) {
    println!("positions: {:?}", sol.state.pa_x);
    println!("beamformer: {}", format_vector(sol.beamformer.iter()));
    println!("signal power: {:.6e} mW", sol.state.w.trace().re);
    println!("AN power: {:.6e} mW", sol.state.r_m.trace().re);
    println!(
        "outer iterations: {}, inner iterations: {}, converged: {}",
        sol.outer_iterations, sol.inner_iterations, sol.converged
    );
    println!("R_Bob = {:.6} bps/Hz, R_Eve = {:.6} bps/Hz", sol.rates.rate_bob, sol.rates.rate_eve);
    println!("SR = {:.6} bps/Hz", sol.rates.secrecy_rate);
}

fn format_vector<'a>(v: impl Iterator<Item = &'a pasec_core::model::Complex64>) -> String {
    let parts: Vec<String> = v.map(|z| format!("{:.4e}{:+.4e}j", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

fn solve(
    bob: (f64, f64),
    eve: (f64, f64),
    n: usize,
    power_dbm: f64,
    scheme: Scheme,
    config: Option<&Path>,
) -> Result<()> {
    let cfg = match config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if n < 1 {
        bail!("--n must be at least 1");
    }
    let params = cfg.params.with_num_waveguides(n)?;
    let (bob, eve) = (Position::ground(bob.0, bob.1), Position::ground(eve.0, eve.1));
    let power = dbm_to_linear(power_dbm);
    println!("scheme {scheme}, N = {n}, P = {power_dbm} dBm");
    match (scheme, n) {
        (Scheme::PasAn, 1) => {
            let scen = ScalarScenario::new(bob, eve, params, power)?;
            let sol = solve_single(&scen, cfg.single_tol, cfg.single_max_iters)?;
            println!("position: {:.6} m", sol.position);
            println!("signal power: {:.6e} mW, AN power: {:.6e} mW", sol.signal_power, sol.an_power);
            println!("iterations: {}, converged: {}", sol.iterations, sol.converged);
            println!("R_Bob = {:.6} bps/Hz, R_Eve = {:.6} bps/Hz", sol.rates.rate_bob, sol.rates.rate_eve);
            println!("SR = {:.6} bps/Hz", sol.rates.secrecy_rate);
        }
        (Scheme::PasNoAn, 1) => {
            let scen = ScalarScenario::new(bob, eve, params, power)?;
            let x = optimal_position_single(power, 0.0, &scen);
            let rates = scen.rates(power, 0.0, x);
            println!("position: {x:.6} m");
            println!("R_Bob = {:.6} bps/Hz, R_Eve = {:.6} bps/Hz", rates.rate_bob, rates.rate_eve);
            println!("SR = {:.6} bps/Hz", rates.secrecy_rate);
        }
        (Scheme::PasAn | Scheme::PasNoAn, _) => {
            let scen = MultiScenario::new(bob, eve, params, power)?;
            print_multi(&solve_pas(&scen, &cfg.solver, scheme == Scheme::PasAn)?);
        }
        (Scheme::CasAn, _) => {
            let link = cas_link(&params, &bob, &eve, n, power)?;
            let sol = solve_fixed_array(&link, cas_positions(&params, n), &cfg.solver)?;
            print_multi(&sol);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { run } => {
            let cfg = load(&run)?;
            let out = run_sweep(&cfg)?;
            let paths = write_sweep(&out, &cfg.output_path)
                .with_context(|| format!("writing sweep outputs to {}", cfg.output_path.display()))?;
            report(&paths, out.records.iter().filter(|r| r.error.is_some()).count());
        }
        Command::Cdf { run, power_dbm } => {
            let mut cfg = load(&run)?;
            if let Some(p) = power_dbm {
                cfg.fixed_power = p;
                cfg.validate()?;
            }
            let out = run_cdf(&cfg)?;
            let paths = write_cdf(&out, &cfg.output_path)
                .with_context(|| format!("writing CDF outputs to {}", cfg.output_path.display()))?;
            report(&paths, out.records.iter().filter(|r| r.error.is_some()).count());
        }
        Command::Solve { bob, eve, n, power_dbm, scheme, config } => {
            solve(bob, eve, n, power_dbm, scheme, config.as_deref())?;
        }
        Command::Oracle { suite, seed, count } => {
            let summary = match suite {
                Suite::Quartic => oracle::quartic(seed, count),
                Suite::Sdp => oracle::sdp(seed, count),
                Suite::Split => oracle::split(seed, count),
            }?;
            println!("{}", summary.line);
            if !summary.pass {
                bail!("oracle suite found mismatches");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
