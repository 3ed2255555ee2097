use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use rfsm::format::{
    parse_bridge, parse_machine, parse_map, parse_omega, render_tables, serialize_covering,
    serialize_machine, TableKind,
};
use rfsm::morphism::{
    check_covering, check_homomorphism, check_isomorphism, search_coverings, DEFAULT_DEPTH,
    DEFAULT_SEARCH_BUDGET,
};
use rfsm::products::{self, InputBridge, DEFAULT_WREATH_BUDGET};
use rfsm::propositions::{run_lift_trials, run_trials, Claim, ProductKind, Side, TrialSummary};
use rfsm::{Machine, StateSubset, Verdict};

/// `print!` that stops quietly when the reader closes the pipe.
macro_rules! put {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("writing to stdout: {e}");
        }
    }};
}

macro_rules! out {
    ($($arg:tt)*) => {{
        put!($($arg)*);
        put!("\n");
    }};
}

#[derive(Parser)]
#[command(name = "rfsm", version, about = "Rough finite state machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    State,
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Full,
    Restricted,
    General,
    Wreath,
    Cascade,
}

#[derive(Clone, Copy, ValueEnum)]
enum Prop {
    RestrictedInFull,
    WreathExchange,
    CascadeInWreath,
    Associativity,
    Lift,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKind {
    Full,
    Restricted,
    Wreath,
    Cascade,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a machine file.
    Validate {
        file: PathBuf,
        /// Also require every entry to be realizable.
        #[arg(long)]
        strict: bool,
    },
    /// Evaluate a word from a state.
    Run {
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Print the block transition table.
    Blocks {
        file: PathBuf,
        #[arg(long)]
        word: Option<String>,
    },
    /// Print the lower and upper approximation of a set of states.
    Approx {
        file: PathBuf,
        /// Comma separated state names.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// Print a transition table.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "state")]
        table: Table,
        #[arg(long)]
        word: Option<String>,
    },
    /// Build a product machine.
    Product {
        #[arg(long, value_enum)]
        kind: Kind,
        file1: PathBuf,
        file2: PathBuf,
        /// Bridge file for the general product: lines `<xbar> <x1> <x2>`.
        #[arg(long)]
        bridge: Option<PathBuf>,
        /// Wiring file for the cascade product: lines `<q2> <x2> <x1>`.
        #[arg(long)]
        omega: Option<PathBuf>,
        /// Wreath alphabet budget.
        #[arg(long, default_value_t = DEFAULT_WREATH_BUDGET)]
        budget: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a homomorphism given by a map file.
    CheckHom {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Also require both maps to be bijections.
        #[arg(long)]
        iso: bool,
    },
    /// Check that the second machine covers the first via a map file.
    CheckCover {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// List every covering of the first machine by the second.
    SearchCover {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u128,
    },
    /// Run a witness construction over seeded random machines.
    Verify {
        #[arg(long, value_enum)]
        prop: Prop,
        /// Product kind for associativity and lifts; all kinds when omitted.
        #[arg(long, value_enum)]
        kind: Option<LiftKind>,
        /// Side for lifts; both when omitted.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Restrict lifts to inputs where the construction is well defined.
        #[arg(long)]
        well_posed: bool,
    },
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Ok,
    Fails,
}

fn load(path: &Path) -> Result<Machine> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_machine(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn verdict(v: Verdict) -> Outcome {
    out!("{v}");
    if v.holds() {
        Outcome::Ok
    } else {
        Outcome::Fails
    }
}

fn lift_kind(k: LiftKind) -> ProductKind {
    match k {
        LiftKind::Full => ProductKind::Full,
        LiftKind::Restricted => ProductKind::Restricted,
        LiftKind::Wreath => ProductKind::Wreath,
        LiftKind::Cascade => ProductKind::Cascade,
    }
}

fn summarize(label: &str, s: &TrialSummary) -> bool {
    let skipped = if s.skipped > 0 {
        format!(", {} skipped", s.skipped)
    } else {
        String::new()
    };
    out!("{label}: {}/{} hold{skipped}", s.holds, s.trials);
    for f in &s.failures {
        out!("  {f}");
    }
    s.failures.is_empty()
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { file, strict } => {
            let m = load(&file)?;
            let violations = if strict {
                m.validate_strict()
            } else {
                m.validate()
            };
            if violations.is_empty() {
                out!(
                    "{}: valid ({} states, {} blocks, {} symbols)",
                    m.name(),
                    m.state_count(),
                    m.space().block_count(),
                    m.symbol_count()
                );
                return Ok(Outcome::Ok);
            }
            for v in &violations {
                out!("{v}");
            }
            Ok(Outcome::Fails)
        }
        Command::Run { file, state, word } => {
            let m = load(&file)?;
            let q = m.state_index(&state)?;
            let w = m.parse_word(&word)?;
            out!("{}", m.space().display_rough(&m.word_step(q, &w)?));
            Ok(Outcome::Ok)
        }
        Command::Blocks { file, word } => {
            let m = load(&file)?;
            let w = word.map(|w| m.parse_word(&w)).transpose()?;
            put!("{}", render_tables(&m, TableKind::Block, w.as_ref())?);
            Ok(Outcome::Ok)
        }
        Command::Approx { file, set } => {
            let m = load(&file)?;
            let names: Vec<&str> = set
                .iter()
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .collect();
            let a = StateSubset::from_names(m.space(), &names)?;
            let rs = m.space().approximate(&a)?;
            out!("lower: {}", m.space().display_definable(&rs.lower));
            out!("upper: {}", m.space().display_definable(&rs.upper));
            out!("definable: {}", rs.lower == rs.upper);
            Ok(Outcome::Ok)
        }
        Command::Render { file, table, word } => {
            let m = load(&file)?;
            let w = word.map(|w| m.parse_word(&w)).transpose()?;
            let kind = match table {
                Table::State => TableKind::State,
                Table::Block => TableKind::Block,
            };
            put!("{}", render_tables(&m, kind, w.as_ref())?);
            Ok(Outcome::Ok)
        }
        Command::Product {
            kind,
            file1,
            file2,
            bridge,
            omega,
            budget,
            output,
        } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let p = match kind {
                Kind::Full => products::full_direct(&m1, &m2)?,
                Kind::Restricted => products::restricted_direct(&m1, &m2)?,
                Kind::General => {
                    let b = match bridge {
                        Some(path) => parse_bridge(&read(&path)?, &m1, &m2)?,
                        None => InputBridge::identity(&m1, &m2),
                    };
                    products::general_direct(&m1, &m2, &b)?
                }
                Kind::Wreath => products::wreath_with_budget(&m1, &m2, budget)?,
                Kind::Cascade => {
                    let Some(path) = omega else {
                        bail!("the cascade product needs --omega");
                    };
                    products::cascade(&m1, &m2, &parse_omega(&read(&path)?, &m1, &m2)?)?
                }
            };
            let text = serialize_machine(&p);
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => put!("{text}"),
            }
            Ok(Outcome::Ok)
        }
        Command::CheckHom {
            file1,
            file2,
            map,
            depth,
            iso,
        } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let pair = parse_map(&read(&map)?)?.to_morphism(&m1, &m2)?;
            let v = if iso {
                check_isomorphism(&m1, &m2, &pair, depth)?
            } else {
                check_homomorphism(&m1, &m2, &pair, depth)?
            };
            Ok(verdict(v))
        }
        Command::CheckCover {
            file1,
            file2,
            map,
            depth,
        } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let pair = parse_map(&read(&map)?)?.to_covering(&m1, &m2)?;
            Ok(verdict(check_covering(&m1, &m2, &pair, depth)?))
        }
        Command::SearchCover {
            file1,
            file2,
            depth,
            budget,
        } => {
            let m1 = load(&file1)?;
            let m2 = load(&file2)?;
            let found = search_coverings(&m1, &m2, depth, budget)?;
            out!("# {} covering(s)", found.len());
            for (i, pair) in found.iter().enumerate() {
                out!("# covering {}", i + 1);
                put!("{}", serialize_covering(&m1, &m2, pair));
            }
            Ok(if found.is_empty() {
                Outcome::Fails
            } else {
                Outcome::Ok
            })
        }
        Command::Verify {
            prop,
            kind,
            side,
            seed,
            trials,
            depth,
            well_posed,
        } => {
            let kinds: Vec<ProductKind> = match kind {
                Some(k) => vec![lift_kind(k)],
                None => ProductKind::ALL.to_vec(),
            };
            let sides = match side {
                Some(SideArg::Left) => vec![Side::Left],
                Some(SideArg::Right) => vec![Side::Right],
                None => vec![Side::Left, Side::Right],
            };
            let mut all_hold = true;
            match prop {
                Prop::RestrictedInFull | Prop::WreathExchange | Prop::CascadeInWreath => {
                    let claim = match prop {
                        Prop::RestrictedInFull => Claim::RestrictedInFull,
                        Prop::WreathExchange => Claim::WreathExchange,
                        _ => Claim::CascadeInWreath,
                    };
                    all_hold &=
                        summarize(&claim.to_string(), &run_trials(claim, seed, trials, depth)?);
                }
                Prop::Associativity => {
                    for k in kinds {
                        let claim = Claim::Associativity(k);
                        all_hold &=
                            summarize(&claim.to_string(), &run_trials(claim, seed, trials, depth)?);
                    }
                }
                Prop::Lift => {
                    for k in kinds {
                        for &s in &sides {
                            let claim = Claim::Lift(k, s);
                            let summary = run_lift_trials(k, s, seed, trials, depth, well_posed)?;
                            all_hold &= summarize(&claim.to_string(), &summary);
                        }
                    }
                }
            }
            Ok(if all_hold {
                Outcome::Ok
            } else {
                Outcome::Fails
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
