use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lammult::derivation::{check_stage_chain, ChainVerdict};
use lammult::harness::{differential, fuzz, unload, FuzzConfig, Verdict};
use lammult::machine::{run, EvalApply, Machine, Outcome, PushEnter, Stg};
use lammult::{parse, Term};

#[derive(Parser)]
#[command(
    name = "lammult",
    version,
    about = "Abstract machines for multi-argument lambda terms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MachineArg {
    Pe,
    Ea,
    Stg,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine and print the unloaded result.
    Eval {
        /// Source file, or `-` for stdin.
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pe")]
        machine: MachineArg,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Print every transition as a JSON line.
    Trace {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "pe")]
        machine: MachineArg,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Cross-check all machines, the derivation stages and the reference
    /// reducer on one term.
    Compare {
        file: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Run the derivation stages and compare them.
    Stages {
        file: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
    },
    /// Differentially test random terms.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 50)]
        max_size: usize,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        fuel: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow free variables in generated terms.
        #[arg(long)]
        open: bool,
    },
}

fn read_term(file: &PathBuf) -> Result<Term, String> {
    let src = if file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?
    };
    parse(&src).map_err(|e| format!("{}: {e}", file.display()))
}

fn eval<M: Machine>(t: &Term, fuel: u64) -> Result<String, String> {
    match run::<M>(t, fuel).0 {
        Outcome::Halted { config, .. } => {
            Ok(unload::<M>(&config).map_err(|e| e.to_string())?.to_string())
        }
        Outcome::FuelExhausted { steps } => Err(format!("fuel exhausted after {steps} steps")),
    }
}

fn trace<M: Machine>(t: &Term, fuel: u64) -> (Vec<String>, bool) {
    let (out, tr) = run::<M>(t, fuel);
    (tr.json_lines(), out.is_halted())
}

fn main() -> ExitCode {
    match real_main(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("lammult: {msg}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: Cli) -> Result<ExitCode, String> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut emit = |s: &str| writeln!(out, "{s}").map_err(|e| e.to_string());
    match cli.command {
        Command::Eval {
            file,
            machine,
            fuel,
        } => {
            let t = read_term(&file)?;
            let result = match machine {
                MachineArg::Pe => eval::<PushEnter>(&t, fuel),
                MachineArg::Ea => eval::<EvalApply>(&t, fuel),
                MachineArg::Stg => eval::<Stg>(&t, fuel),
            };
            match result {
                Ok(s) => {
                    emit(&s)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("lammult: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Trace {
            file,
            machine,
            fuel,
        } => {
            let t = read_term(&file)?;
            let (lines, halted) = match machine {
                MachineArg::Pe => trace::<PushEnter>(&t, fuel),
                MachineArg::Ea => trace::<EvalApply>(&t, fuel),
                MachineArg::Stg => trace::<Stg>(&t, fuel),
            };
            for l in &lines {
                emit(l)?;
            }
            Ok(if halted {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Compare { file, fuel } => {
            let r = differential(&read_term(&file)?, fuel);
            emit(&r.to_json())?;
            Ok(if r.verdict == Verdict::Agree {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Stages { file, fuel } => {
            let r = check_stage_chain(&read_term(&file)?, fuel);
            emit(&r.to_json())?;
            Ok(if r.verdict == ChainVerdict::Diverged {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Fuzz {
            count,
            max_size,
            fuel,
            seed,
            open,
        } => {
            let s = fuzz(&FuzzConfig {
                count,
                max_size,
                fuel,
                seed,
                closed: !open,
            })
            .map_err(|e| e.to_string())?;
            emit(&s.to_json())?;
            Ok(if s.mismatched == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
