use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};

use nctherm::cli::{
    mode_from_config, run_simulate, run_sweep, run_verify, run_wigner, time_from_config,
    write_sweep_csv, Params, RunConfig, SweepPoints, DEFAULT_RESOLUTION, KEYS,
};
use nctherm::Error;

const SUBCOMMANDS: &[(&str, &str)] = &[
    ("simulate", "Energies, heats and heating power up to the equilibrium time"),
    ("sweep", "Equilibrium time and power over a list of gamma or a theta x eta grid"),
    ("wigner", "Gaussian Wigner function of one mode on a grid"),
    ("verify", "Cross-check closed forms against both numerical oracles"),
];

fn command() -> Command {
    let mut cmd = Command::new("nctherm")
        .about("Heat flow between two coupled oscillators in noncommutative phase space")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for &(name, about) in SUBCOMMANDS {
        let mut sub = Command::new(name).about(about).arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .value_parser(clap::value_parser!(PathBuf))
                .help("key = value configuration file"),
        );
        for &key in KEYS {
            sub = sub.arg(
                Arg::new(key)
                    .long(key)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .action(ArgAction::Set),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn build_config(m: &ArgMatches) -> Result<RunConfig, Error> {
    let mut cfg = match m.get_one::<PathBuf>("config") {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    for &key in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn open_out(cfg: &RunConfig) -> Result<Box<dyn Write>, Error> {
    match cfg.get("out") {
        Some(path) => {
            let f = File::create(path).map_err(|e| Error::Config(format!("cannot create {path}: {e}")))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_err(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::BrokenPipe {
        // reader went away, e.g. `nctherm simulate | head`
        std::process::exit(0);
    }
    Error::Config(format!("write failed: {e}"))
}

fn run(name: &str, m: &ArgMatches) -> Result<bool, Error> {
    let mut cfg = build_config(m)?;
    if name == "sweep" && !cfg.has("gamma") && !cfg.has("theta") && !cfg.has("eta") {
        // sweep points carry their own deformation
        cfg.set("gamma", "0")?;
    }
    let params = Params::resolve(&cfg)?;
    let mut out = open_out(&cfg)?;
    let passed = match name {
        "simulate" => {
            run_simulate(&params)?.write_csv(&mut out).map_err(write_err)?;
            true
        }
        "sweep" => {
            let rows = run_sweep(&params, &SweepPoints::from_config(&cfg)?);
            write_sweep_csv(&rows, &mut out).map_err(write_err)?;
            true
        }
        "wigner" => {
            let resolution = cfg.usize_or("resolution", DEFAULT_RESOLUTION)?;
            let grid = run_wigner(&params, mode_from_config(&cfg)?, time_from_config(&cfg, &params)?, resolution)?;
            grid.write_to(&mut out).map_err(write_err)?;
            true
        }
        "verify" => {
            let report = run_verify(&params)?;
            report.write_to(&mut out).map_err(write_err)?;
            report.all_passed()
        }
        _ => unreachable!("clap rejects unknown subcommands"),
    };
    out.flush().map_err(write_err)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let matches = command().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    match run(name, sub) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("nctherm {name}: {e}");
            ExitCode::from(2)
        }
    }
}
