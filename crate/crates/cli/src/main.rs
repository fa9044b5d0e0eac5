use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use moncom_core::check::{self, CheckConfig, Suite};
use moncom_core::coalgebra::{MealyError, MealyMachine};
use moncom_core::complexity::{self, Convention, SpaceCounters};
use moncom_core::eval::{partial_eval, universal_eval};
use moncom_core::kleene::{code_of, quine};
use moncom_core::syntax::{parse_prog_or_quote, parse_value};
use moncom_core::turing::{
    self, format::parse_machine, Halting, MachineError, Tape, TuringProcess,
};
use moncom_core::{Outcome, Prog, Registry, Value};

const EVAL_FUEL: u64 = 10_000;

/// Exit statuses besides success.
const USAGE: u8 = 1;
const DIVERGED: u8 = 2;
const STUCK: u8 = 3;

#[derive(Parser)]
#[command(
    name = "moncom",
    version,
    about = "Run, specialize and meter programs and machines; check the laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on an input.
    Eval {
        #[command(flatten)]
        target: ProgramInput,
        #[arg(long, default_value_t = EVAL_FUEL)]
        fuel: u64,
    },
    /// Partially evaluate a program on the first half of its input.
    Specialize {
        #[command(flatten)]
        target: ProgramInput,
    },
    /// Print a program whose output is its own code.
    Quine {
        #[arg(long, default_value_t = EVAL_FUEL)]
        fuel: u64,
    },
    /// Turing machines: run them and meter their time and space.
    Tm {
        #[command(subcommand)]
        command: TmCommand,
    },
    /// Run the law suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Master seed, in hex.
        #[arg(long, value_parser = parse_seed, default_value = "C0A15EED")]
        seed: u64,
        /// Case count for every sampled law.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = check::DEFAULT_FUEL)]
        fuel: u64,
        /// Run a single law of the suite.
        #[arg(long)]
        law: Option<String>,
    },
    /// Print the depth-bounded behaviour of a state of a Mealy machine.
    Unfold {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// One tab-separated `word output` line per word instead of the nested form.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Args)]
struct ProgramInput {
    /// A file holding a program, or the program text itself.
    #[arg(long)]
    program: String,
    #[arg(long)]
    input: String,
}

#[derive(Subcommand)]
enum TmCommand {
    /// Run to the halting state and print the final tape.
    Run(TmArgs),
    /// Count transitions until halting.
    Time(TmArgs),
    /// Measure the span of head offsets.
    Space(TmArgs),
    /// Time and space together.
    Meter(TmArgs),
}

#[derive(Args)]
struct TmArgs {
    #[arg(long)]
    machine: PathBuf,
    /// The word written at offsets 0.., head on its first symbol.
    #[arg(long, default_value = "")]
    tape: String,
    /// Start state; defaults to the machine's.
    #[arg(long)]
    state: Option<String>,
    /// Transition budget.
    #[arg(long, default_value_t = EVAL_FUEL)]
    fuel: u64,
    #[arg(long, default_value_t = Convention::Visited)]
    convention: Convention,
    /// Run through the Kleene fixed program instead of natively.
    #[arg(long)]
    via_program: bool,
    /// Write a TSV trace of the run here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .unwrap_or(s);
    u64::from_str_radix(digits, 16).map_err(|e| format!("'{s}' is not a hex seed: {e}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("{}: cannot read", path.display()))
}

fn load_program(arg: &str) -> Result<Prog> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        parse_prog_or_quote(&text).map_err(|e| anyhow!("{}:{e}", path.display()))
    } else {
        parse_prog_or_quote(arg).map_err(|e| anyhow!("--program:{e}"))
    }
}

fn load_input(arg: &str) -> Result<Value> {
    parse_value(arg).map_err(|e| anyhow!("--input:{e}"))
}

fn load_machine(path: &Path) -> Result<TuringProcess> {
    parse_machine(&read(path)?).map_err(|e| anyhow!("{}:{}: {}", path.display(), e.line, e.message))
}

fn load_mealy(path: &Path) -> Result<MealyMachine> {
    read(path)?.parse().map_err(|e| match e {
        MealyError::At { line, source } => anyhow!("{}:{line}: {source}", path.display()),
        e => anyhow!("{}: {e}", path.display()),
    })
}

/// Values print bare so that output can be fed back as input.
fn outcome(o: Outcome) -> u8 {
    match &o {
        Outcome::Done(v) => println!("{v}"),
        other => println!("{other}"),
    }
    match o {
        Outcome::Done(_) => 0,
        Outcome::Diverged(_) => DIVERGED,
        Outcome::Stuck(_) => STUCK,
    }
}

fn halting<T>(h: &Halting<T>) -> u8 {
    if h.is_halted() {
        0
    } else {
        DIVERGED
    }
}

/// Runtime faults of a well-formed machine are stuck computations.
fn machine_fault(e: MachineError) -> u8 {
    println!("stuck: {e}");
    STUCK
}

fn tm(command: TmCommand) -> Result<u8> {
    let (TmCommand::Run(args)
    | TmCommand::Time(args)
    | TmCommand::Space(args)
    | TmCommand::Meter(args)) = &command;
    let machine = load_machine(&args.machine)?;
    let q = args.state.as_deref().unwrap_or(machine.start()).to_string();
    if machine.state_index(&q).is_none() {
        bail!(
            "--state: '{q}' is not a state of {}",
            args.machine.display()
        );
    }
    let tape = Tape::from_literal(&args.tape);
    if let Some(c) = args.tape.chars().find(|c| !machine.alphabet().contains(c)) {
        bail!(
            "--tape: symbol '{c}' is not in the alphabet of {}",
            args.machine.display()
        );
    }
    let fuel = args.fuel;
    let trace = match complexity::meter_trace(&machine, &q, &tape, fuel) {
        Ok(t) => t,
        Err(e) => return Ok(machine_fault(e)),
    };
    if let Some(path) = &args.trace {
        fs::write(path, trace.to_tsv())
            .with_context(|| format!("{}: cannot write trace", path.display()))?;
    }
    let result = (|| -> Result<u8, MachineError> {
        let time = if args.via_program {
            complexity::time_via_program(&machine, &q, &tape, fuel)?
        } else {
            complexity::time(&machine, &q, &tape, fuel)?
        };
        // on divergence, report the counters at the cutoff
        let space = || -> Result<_, MachineError> {
            let s = if args.via_program {
                complexity::space_via_program(&machine, &q, &tape, fuel, args.convention)?
            } else {
                complexity::space(&machine, &q, &tape, fuel, args.convention)?
            };
            Ok(match s {
                Halting::Halted(n) => n,
                Halting::Diverged(_) => {
                    let mut c: SpaceCounters = SpaceCounters::initial(&tape, args.convention);
                    trace.entries.iter().for_each(|e| c.update(e.dir));
                    c.span()
                }
            })
        };
        let steps = time.halted().copied().unwrap_or(fuel);
        let halted = time.is_halted();
        match &command {
            TmCommand::Run(_) => {
                let out = if args.via_program {
                    turing::run_via_program(&machine, &q, &tape, fuel)?
                } else {
                    turing::run(&machine, &q, &tape, fuel)?
                };
                match &out {
                    Halting::Halted(w) => println!("{w}\n{}", w.render()),
                    Halting::Diverged(n) => println!("diverged after {n} transitions"),
                }
                Ok(halting(&out))
            }
            TmCommand::Time(_) => {
                println!("time={steps} halted={halted}");
                Ok(halting(&time))
            }
            TmCommand::Space(_) => {
                println!(
                    "space={} convention={} halted={halted}",
                    space()?,
                    args.convention
                );
                Ok(halting(&time))
            }
            TmCommand::Meter(_) => {
                println!(
                    "time={steps} space={} convention={} halted={halted}",
                    space()?,
                    args.convention
                );
                Ok(halting(&time))
            }
        }
    })();
    Ok(result.unwrap_or_else(machine_fault))
}

fn run(cli: Cli) -> Result<u8> {
    let registry = Registry::standard();
    match cli.command {
        Command::Eval { target, fuel } => {
            let p = load_program(&target.program)?;
            let a = load_input(&target.input)?;
            Ok(outcome(universal_eval(&registry, &p, a, fuel)))
        }
        Command::Specialize { target } => {
            let p = load_program(&target.program)?;
            let a = load_input(&target.input)?;
            println!("{}", partial_eval(&p, a));
            Ok(0)
        }
        Command::Quine { fuel } => {
            let q = quine();
            let code = code_of(&q);
            match universal_eval(&registry, &q, Value::Unit, fuel) {
                Outcome::Done(v) if v == code => {
                    println!("{code}");
                    Ok(0)
                }
                Outcome::Done(v) => bail!("quine printed {v}, not its own code"),
                other => Ok(outcome(other)),
            }
        }
        Command::Tm { command } => tm(command),
        Command::Check {
            suite,
            seed,
            samples,
            fuel,
            law,
        } => {
            let config = CheckConfig {
                seed,
                fuel,
                samples,
                ..CheckConfig::default()
            };
            let report = match law {
                Some(name) => {
                    let one = check::run_law(suite, &name, &config)
                        .ok_or_else(|| anyhow!("--law: suite {suite} has no law '{name}'"))?;
                    check::Report { laws: vec![one] }
                }
                None => check::run_suite(suite, &config),
            };
            print!("{report}");
            Ok(if report.passed() { 0 } else { USAGE })
        }
        Command::Unfold {
            machine,
            state,
            depth,
            table,
        } => {
            let m = load_mealy(&machine)?;
            let x = m.state_index(&state).map_err(|e| anyhow!("--state: {e}"))?;
            let trie = m.unfold(x, depth);
            if table {
                print!("{}", trie.table());
            } else {
                println!("{}", trie.render());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("moncom: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}
