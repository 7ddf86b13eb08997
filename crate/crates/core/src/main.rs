use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use ionet::decide::{cube_coverable, cube_live, cube_reachable, EngineChoice, QueryOptions, Quantifier, Verdict, Witness};
use ionet::format::{self, ParseError};
use ionet::generate::{generate_random_instance, Limits};
use ionet::oracle::Oracle;
use ionet::protocol::{check_correct, check_well_specified};
use ionet::transform::{pre_star, post_star};
use ionet::{CountingSet, IONet, Marking};

/// Reachability, coverability and liveness for immediate observation nets,
/// and correctness of immediate observation population protocols.
///
/// Results are JSON on stdout; a short summary goes to stderr. Exit status:
/// 0 true, 1 false, 2 usage or input error, 3 internal error.
#[derive(Parser)]
#[command(name = "ionet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Can some marking of --from reach some marking of --to?
    Reach(QueryArgs),
    /// Can some marking of --from reach a marking covering one of --to?
    Cover(QueryArgs),
    /// Are all (or some) markings of --set live?
    Live {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        set: PathBuf,
        #[arg(long, default_value = "all")]
        quantifier: Quantifier,
    },
    /// Print pre*(--set) as a counting set.
    Prestar(SetArgs),
    /// Print post*(--set) as a counting set.
    Poststar(SetArgs),
    /// Search for a small trajectory from --from to --to.
    Witness {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        bound: Option<u64>,
    },
    #[command(subcommand)]
    Protocol(ProtocolCommand),
    /// Brute-force answers for a single marking.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Print a random instance {"net", "from", "to"}.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        places: usize,
        #[arg(long, default_value_t = 8)]
        transitions: usize,
        #[arg(long, default_value_t = 3)]
        norm: u64,
        /// Also write net.json, from.json and to.json here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QueryArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
    #[arg(long, default_value = "symbolic")]
    engine: EngineChoice,
    /// Override the witness bound of the explicit engine.
    #[arg(long)]
    bound: Option<u64>,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    set: PathBuf,
}

#[derive(Subcommand)]
enum ProtocolCommand {
    /// Does the protocol compute --predicate?
    Check {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        predicate: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_agents: u64,
    },
    /// Does every input stabilize to a unique consensus?
    WellSpecified {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_agents: u64,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// List the markings reachable from --marking, or ask whether one lies
    /// in --to.
    Reach {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        marking: PathBuf,
        #[arg(long)]
        to: Option<PathBuf>,
        #[arg(long, default_value_t = ionet::oracle::DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Is --marking live?
    Live {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        marking: PathBuf,
        #[arg(long, default_value_t = ionet::oracle::DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
    /// Does every fair run of the protocol from --marking stabilize?
    Stabilize {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        marking: PathBuf,
        #[arg(long, default_value_t = ionet::oracle::DEFAULT_STATE_LIMIT)]
        limit: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Model(#[from] ionet::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use ionet::Error as E;
        match self {
            CliError::Model(E::SaturationOverflow { .. } | E::Invariant(_) | E::StateLimitExceeded(_)) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_net(path: &Path) -> Result<IONet, CliError> {
    load(path, format::parse_net)
}

fn load_set(path: &Path, net: &IONet) -> Result<CountingSet, CliError> {
    load(path, |t| format::parse_set(t, net.places()))
}

fn load_marking(path: &Path, places: &[String]) -> Result<Marking, CliError> {
    load(path, |t| format::parse_marking(t, places))
}

/// What a command produced: the JSON for stdout, a one-line summary for
/// stderr, and the answer for the exit status.
struct Outcome {
    json: String,
    summary: String,
    answer: bool,
}

fn verdict(v: &Verdict, net: &IONet, what: &str) -> Outcome {
    let mut summary = format!("{what}: {} ({})", v.answer, v.engine);
    match &v.witness {
        Some(Witness::Trajectory(t)) => {
            summary += &format!("; witness from {} in {} steps", t.start, t.steps.len())
        }
        Some(Witness::Marking(m)) => summary += &format!("; witness marking {m}"),
        None => {}
    }
    Outcome {
        json: format::verdict_to_json(v, net),
        summary,
        answer: v.answer,
    }
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    Ok(match cmd {
        Command::Reach(q) => query(q, false)?,
        Command::Cover(q) => query(q, true)?,
        Command::Live {
            net,
            set,
            quantifier,
        } => {
            let net = load_net(&net)?;
            let s = load_set(&set, &net)?;
            let v = cube_live(&net, &s, quantifier)?;
            verdict(&v, &net, "live")
        }
        Command::Prestar(a) => star(a, true)?,
        Command::Poststar(a) => star(a, false)?,
        Command::Witness {
            net,
            from,
            to,
            bound,
        } => {
            let net = load_net(&net)?;
            let (from, to) = (load_set(&from, &net)?, load_set(&to, &net)?);
            let opts = QueryOptions {
                engine: EngineChoice::Explicit,
                bound,
            };
            let v = cube_reachable(&net, &from, &to, opts)?;
            verdict(&v, &net, "witness")
        }
        Command::Protocol(ProtocolCommand::Check {
            protocol,
            predicate,
            min_agents,
        }) => {
            let p = load(&protocol, format::parse_protocol)?;
            warn(&p);
            let phi = load(&predicate, |t| format::parse_predicate(t, &p))?;
            let v = check_correct(&p, &phi, min_agents)?;
            verdict(&v, &p.to_net()?.0, "correct")
        }
        Command::Protocol(ProtocolCommand::WellSpecified {
            protocol,
            min_agents,
        }) => {
            let p = load(&protocol, format::parse_protocol)?;
            warn(&p);
            let v = check_well_specified(&p, min_agents)?;
            verdict(&v, &p.to_net()?.0, "well-specified")
        }
        Command::Oracle(o) => oracle(o)?,
        Command::Gen {
            seed,
            places,
            transitions,
            norm,
            out,
        } => {
            let limits = Limits {
                places,
                transitions,
                norm,
            };
            let inst = generate_random_instance(seed, limits);
            let places = inst.net.places();
            let net = format::net_to_json(&inst.net);
            let from = format::set_to_json(&inst.from, places);
            let to = format::set_to_json(&inst.to, places);
            if let Some(dir) = out {
                for (name, text) in [("net.json", &net), ("from.json", &from), ("to.json", &to)] {
                    let path = dir.join(name);
                    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })?;
                }
            }
            let doc: serde_json::Value = serde_json::json!({
                "net": serde_json::from_str::<serde_json::Value>(&net).expect("valid json"),
                "from": serde_json::from_str::<serde_json::Value>(&from).expect("valid json"),
                "to": serde_json::from_str::<serde_json::Value>(&to).expect("valid json"),
            });
            Outcome {
                json: serde_json::to_string_pretty(&doc).expect("valid json") + "\n",
                summary: format!(
                    "gen: seed {seed}, {} places, {} transitions",
                    inst.net.num_places(),
                    inst.net.transitions().len()
                ),
                answer: true,
            }
        }
    })
}

fn query(q: QueryArgs, cover: bool) -> Result<Outcome, CliError> {
    let net = load_net(&q.net)?;
    let (from, to) = (load_set(&q.from, &net)?, load_set(&q.to, &net)?);
    let opts = QueryOptions {
        engine: q.engine,
        bound: q.bound,
    };
    let v = if cover {
        cube_coverable(&net, &from, &to, opts)?
    } else {
        cube_reachable(&net, &from, &to, opts)?
    };
    Ok(verdict(&v, &net, if cover { "cover" } else { "reach" }))
}

fn star(a: SetArgs, backward: bool) -> Result<Outcome, CliError> {
    let net = load_net(&a.net)?;
    let s = load_set(&a.set, &net)?;
    let result = if backward { pre_star(&net, &s)? } else { post_star(&net, &s)? }.sorted();
    Ok(Outcome {
        json: format::set_to_json(&result, net.places()),
        summary: format!(
            "{}: {} cubes",
            if backward { "prestar" } else { "poststar" },
            result.cubes().len()
        ),
        answer: true,
    })
}

fn oracle(cmd: OracleCommand) -> Result<Outcome, CliError> {
    use ionet::decide::Engine;
    Ok(match cmd {
        OracleCommand::Reach {
            net,
            marking,
            to,
            limit,
        } => {
            let net = load_net(&net)?;
            let m = load_marking(&marking, net.places())?;
            let mut reach: Vec<Marking> = Oracle::with_limit(&net, limit).reach_set(&m)?.into_iter().collect();
            reach.sort();
            match to {
                None => {
                    let list: Vec<serde_json::Value> = reach
                        .iter()
                        .map(|r| serde_json::from_str(&format::marking_to_json(r, net.places())).expect("valid json"))
                        .collect();
                    Outcome {
                        json: serde_json::to_string_pretty(&list).expect("valid json") + "\n",
                        summary: format!("oracle reach: {} markings", reach.len()),
                        answer: true,
                    }
                }
                Some(to) => {
                    let to = load_set(&to, &net)?;
                    let hit = reach.iter().find(|r| to.contains(r.counts()));
                    let mut v = Verdict::new(hit.is_some(), Engine::Explicit);
                    v.witness = hit.cloned().map(Witness::Marking);
                    v.stat("states", reach.len() as u64);
                    verdict(&v, &net, "oracle reach")
                }
            }
        }
        OracleCommand::Live {
            net,
            marking,
            limit,
        } => {
            let net = load_net(&net)?;
            let m = load_marking(&marking, net.places())?;
            let live = Oracle::with_limit(&net, limit).marking_live(&m)?;
            let mut v = Verdict::new(live, Engine::Explicit);
            v.witness = Some(Witness::Marking(m));
            verdict(&v, &net, "oracle live")
        }
        OracleCommand::Stabilize {
            protocol,
            marking,
            limit,
        } => {
            let p = load(&protocol, format::parse_protocol)?;
            let (net, _) = p.to_net()?;
            let m = load_marking(&marking, p.states())?;
            let b = Oracle::with_limit(&net, limit).fair_stabilization(&m, p.outputs())?;
            let mut v = Verdict::new(b.is_some(), Engine::Explicit);
            v.witness = Some(Witness::Marking(m));
            if let Some(b) = b {
                v.stat("consensus", u64::from(b));
            }
            verdict(&v, &net, "oracle stabilize")
        }
    })
}

fn warn(p: &ionet::protocol::IOProtocol) {
    for w in p.warnings() {
        eprintln!("warning: {w}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let started = Instant::now();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.json);
            eprintln!("{} [{:.1?}]", out.summary, started.elapsed());
            ExitCode::from(if out.answer { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
