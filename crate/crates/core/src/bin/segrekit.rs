use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use segrekit::cli::{run_command, Command, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "segrekit", version, about = "Segre chains, reflection identities and nondegeneracy of formal CR maps")]
struct Args {
    /// One of verify-manifold, verify-map, segre-type, minimality,
    /// classify-manifold, classify-map, reflect, check-prop51, propagate,
    /// determine, artin-check.
    #[arg(value_parser = parse_command)]
    command: Command,
    /// Manifold or map name, from the inputs or the built-in corpus.
    subject: String,
    /// Input files with [manifold] and [map] sections.
    #[arg(short, long = "input")]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long, default_value_t = 6)]
    kappa_max: u32,
    #[arg(long, default_value_t = 4)]
    gamma_bound: u32,
    #[arg(long, default_value_t = 4)]
    beta_bound: u32,
    #[arg(long, visible_alias = "chain-max", default_value_t = 2)]
    k_max: usize,
    /// Jet order at the end of the propagated chain.
    #[arg(long, default_value_t = 1)]
    kappa: u32,
    #[arg(long, default_value_t = 6)]
    family_size: usize,
    #[arg(long, default_value_t = 3)]
    nu_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse().map_err(|e: segrekit::Error| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut inputs = Vec::new();
    for p in &args.inputs {
        match std::fs::read_to_string(p) {
            Ok(t) => inputs.push(t),
            Err(e) => {
                eprintln!("error={}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
    }
    let mut cfg = RunConfig::new(args.command, &args.subject);
    cfg.order = args.order;
    cfg.kappa_max = args.kappa_max;
    cfg.gamma_bound = args.gamma_bound;
    cfg.beta_bound = args.beta_bound;
    cfg.k_max = args.k_max;
    cfg.kappa = args.kappa;
    cfg.family_size = args.family_size;
    cfg.nu_max = args.nu_max;
    cfg.seed = args.seed;
    cfg.inputs = inputs;
    let out = run_command(&cfg);
    print!("{}", out.text);
    ExitCode::from(out.code as u8)
}
