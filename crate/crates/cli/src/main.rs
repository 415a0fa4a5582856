use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use extlab::corpus::{
    binary_counter_measure, binary_counter_words, ca_to_sft, disconnected_counterexample, elementary_rule,
    pseudolattice_measure, robinson_tileset, RobinsonReading,
};
use extlab::extension::{
    periodic_config_search, periodic_extension_with, refute_nonextendible, sft_emptiness, PeriodicSearch,
    PeriodicVerdict, SftVerdict, TorusForm, WindowSchedule, WordSet,
};
use extlab::harmonic::{check_stationarity_fourier, fourier_transform};
use extlab::io::{
    domains_from_json, measure_from_json, measure_to_value, parse_rational, signed_measure_from_json,
    torus_to_value, wordset_from_json, wordset_to_json,
};
use extlab::markov::MarkovExtension;
use extlab::measure::{conditional_entropy, entropy_metric};
use extlab::{Caps, Domain, EnvelopeCheck, Error, Measure, PeriodVector, SignedMeasure, StationarityCheck};

const EXIT_POSITIVE: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "extlab", version, about = "Stationary extensions of locally stationary measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Simplex pivot limit per solve.
    #[arg(long, global = true, default_value_t = Caps::default().pivot_limit)]
    pivot_limit: usize,
    /// Backtracking node limit per search.
    #[arg(long, global = true, default_value_t = Caps::default().node_limit)]
    node_limit: u64,
    /// Largest LP a window or torus may produce, in variables.
    #[arg(long, global = true, default_value_t = Caps::default().max_lp_vars)]
    max_lp_vars: usize,
    /// Progress and notes on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact local stationarity check.
    Stationary {
        file: PathBuf,
        /// Accept signed or unnormalized masses.
        #[arg(long)]
        signed: bool,
    },
    /// Markov extension to the window [0..N-1].
    Markov {
        file: PathBuf,
        #[arg(long)]
        window: usize,
    },
    /// P-periodic extension by exact LP on the torus.
    Periodic {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        period: Vec<i64>,
        /// One LP variable per torus configuration instead of per orbit.
        #[arg(long)]
        literal: bool,
    },
    /// Try to prove that no stationary extension exists.
    Refute {
        file: PathBuf,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Emptiness of the SFT generated by a word set.
    Tiling {
        file: PathBuf,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Search for a P-periodic configuration of the SFT.
    Perconfig {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        period: Vec<i64>,
    },
    /// Character table of a measure.
    Fourier {
        file: PathBuf,
        #[arg(long)]
        signed: bool,
    },
    /// D[U,V] for two subsets of the domain.
    EntropyMetric {
        file: PathBuf,
        /// JSON pair of domains, e.g. '[[[0]],[[3]]]'.
        #[arg(long)]
        sets: String,
    },
    /// Emit a built-in measure or word set.
    Corpus {
        #[command(subcommand)]
        name: CorpusName,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScheduleArgs {
    /// Boxes B(1) .. B(N).
    #[arg(long)]
    max_window: Option<usize>,
    /// JSON list of nested domains, inline or as a file path.
    #[arg(long)]
    windows: Option<String>,
}

#[derive(Subcommand)]
enum CorpusName {
    /// Two-site-correlated measure on {0,1,3} with no extension.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        alphabet: u32,
        /// Symbol distribution, comma separated; uniform if omitted.
        #[arg(long, value_delimiter = ',')]
        rho: Vec<String>,
    },
    /// Uniform measure on the 18 pseudolattice tiles.
    Pseudolattice,
    /// Robinson tiles as 3x3 words.
    Robinson {
        /// `distinct`, or a letter from 0aAbBcC that the stray d stands for.
        #[arg(long, default_value = "C")]
        reading: String,
    },
    /// Binary counter with k-bit rows.
    Counter {
        #[arg(long)]
        k: u32,
        /// Emit the word set instead of the uniform measure.
        #[arg(long)]
        words: bool,
    },
    /// Space-time SFT of an elementary cellular automaton.
    Eca {
        #[arg(long)]
        rule: u8,
    },
}

struct Ctx {
    caps: Caps,
    output: Option<PathBuf>,
    verbose: bool,
}

impl Ctx {
    fn emit(&self, v: &Value) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(v).expect("serializable");
        match &self.output {
            Some(p) => std::fs::write(p, text + "\n").map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
            None => {
                use std::io::Write;
                match writeln!(std::io::stdout().lock(), "{text}") {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::usage(format!("stdout: {e}"))),
                    _ => Ok(()),
                }
            }
        }
    }

    fn note(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::SearchAborted(_) => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_measure(path: &Path, ctx: &Ctx) -> Result<Measure, Failure> {
    Ok(measure_from_json(&read(path)?, ctx.caps.max_cells)?)
}

fn load_signed(path: &Path, signed: bool, ctx: &Ctx) -> Result<SignedMeasure, Failure> {
    let text = read(path)?;
    if signed {
        Ok(signed_measure_from_json(&text, ctx.caps.max_cells)?)
    } else {
        Ok(measure_from_json(&text, ctx.caps.max_cells)?.into_signed())
    }
}

/// Inline JSON if it parses, otherwise a path to a JSON file.
fn json_arg(arg: &str) -> Result<Vec<Domain>, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('[') {
        return Ok(domains_from_json(arg)?);
    }
    Ok(domains_from_json(&read(Path::new(arg))?)?)
}

fn schedule(args: &ScheduleArgs) -> Result<WindowSchedule, Failure> {
    match (&args.max_window, &args.windows) {
        (Some(0), _) => Err(Failure::usage("--max-window must be positive")),
        (Some(n), None) => Ok(WindowSchedule::Boxes { max_side: *n }),
        (None, Some(spec)) => Ok(WindowSchedule::Explicit(json_arg(spec)?)),
        _ => Err(Failure::usage("give exactly one of --max-window or --windows")),
    }
}

fn envelope_json(e: &EnvelopeCheck) -> Value {
    match e {
        EnvelopeCheck::Pass => json!("pass"),
        EnvelopeCheck::NotInjective { first, second } => {
            json!({ "not_injective": [first.0, second.0] })
        }
        EnvelopeCheck::Fail { subset, module_shift } => json!({ "fail": { "subset": subset, "module_shift": module_shift } }),
        EnvelopeCheck::Partial { max_subset } => json!({ "partial": { "max_subset": max_subset } }),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut caps = Caps {
        pivot_limit: cli.pivot_limit,
        node_limit: cli.node_limit,
        max_lp_vars: cli.max_lp_vars,
        ..Caps::default()
    };
    if let Ok(v) = std::env::var("EXTLAB_CAP_CELLS") {
        caps.max_cells = v.parse().map_err(|_| Failure::usage(format!("EXTLAB_CAP_CELLS={v:?} is not a count")))?;
    }
    if caps.max_cells == 0 || caps.pivot_limit == 0 || caps.node_limit == 0 || caps.max_lp_vars == 0 {
        return Err(Failure::usage("caps must be positive"));
    }
    let ctx = Ctx { caps, output: cli.output, verbose: cli.verbose };

    match cli.command {
        Command::Stationary { file, signed } => {
            let mu = load_signed(&file, signed, &ctx)?;
            match extlab::measure::is_locally_stationary(&mu) {
                StationarityCheck::Pass => {
                    ctx.emit(&json!({ "stationary": true }))?;
                    Ok(EXIT_POSITIVE)
                }
                StationarityCheck::Fail { subdomain, word, shift } => {
                    ctx.emit(&json!({
                        "stationary": false,
                        "subdomain": subdomain,
                        "word": word,
                        "shift": shift.0,
                    }))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Markov { file, window } => {
            let mu = load_measure(&file, &ctx)?;
            if mu.domain().dim() != 1 || !mu.domain().is_interval() {
                return Err(Failure::usage(format!(
                    "the Markov extension needs a 1-D interval domain, got {}",
                    mu.domain()
                )));
            }
            let ext = MarkovExtension::new(mu)?;
            if window < ext.memory() + 1 {
                return Err(Failure::usage(format!("--window must be at least {}", ext.memory() + 1)));
            }
            let nu = ext.window_measure(window, ctx.caps.max_cells)?;
            let rates = ext.entropy_rate(window, ctx.caps.max_cells)?;
            ctx.emit(&json!({
                "measure": measure_to_value(&nu),
                "entropy": { "approximate": true, "block_rate": rates.block, "markov_rate": rates.markov },
            }))?;
            Ok(EXIT_POSITIVE)
        }
        Command::Periodic { file, period, literal } => {
            let mu = load_measure(&file, &ctx)?;
            let p = PeriodVector::new(period)?;
            let form = if literal { TorusForm::Literal } else { TorusForm::Orbits };
            let out = periodic_extension_with(&mu, &p, form, &ctx.caps)?;
            if !out.envelope.passed() {
                eprintln!("warning: period {p} is not an envelope for {}: {}", mu.domain(), envelope_json(&out.envelope));
            }
            ctx.note(format!("{} variables, system {}", out.variables, out.system_hash));
            let mut v = json!({
                "periods": p.periods(),
                "envelope": envelope_json(&out.envelope),
                "system_hash": out.system_hash,
                "variables": out.variables,
            });
            let code = match out.verdict {
                PeriodicVerdict::Feasible(nu) => {
                    v["verdict"] = json!("feasible");
                    v["torus"] = serde_json::to_value(torus_to_value(&nu)).expect("serializable");
                    EXIT_POSITIVE
                }
                PeriodicVerdict::Infeasible => {
                    v["verdict"] = json!("infeasible");
                    EXIT_NEGATIVE
                }
                PeriodicVerdict::Aborted { pivots } => {
                    v["verdict"] = json!("aborted");
                    v["pivots"] = json!(pivots);
                    EXIT_CAP
                }
            };
            ctx.emit(&v)?;
            Ok(code)
        }
        Command::Refute { file, schedule: s } => {
            let mu = load_measure(&file, &ctx)?;
            let report = refute_nonextendible(&mu, &schedule(&s)?, &ctx.caps)?;
            for n in &report.notes {
                ctx.note(n);
            }
            ctx.emit(&serde_json::to_value(&report).expect("serializable"))?;
            Ok(if report.is_refuted() { EXIT_NEGATIVE } else { EXIT_POSITIVE })
        }
        Command::Tiling { file, schedule: s } => {
            let t = wordset_from_json(&read(&file)?)?;
            let windows = schedule(&s)?.windows(t.domain().dim())?;
            match sft_emptiness(&t, &windows, ctx.caps.node_limit)? {
                SftVerdict::Empty { window } => {
                    ctx.emit(&json!({ "verdict": "empty", "window": window }))?;
                    Ok(EXIT_NEGATIVE)
                }
                SftVerdict::Unknown { largest_window, reason } => {
                    ctx.emit(&json!({ "verdict": "unknown", "largest_window": largest_window, "reason": reason }))?;
                    Ok(EXIT_POSITIVE)
                }
            }
        }
        Command::Perconfig { file, period } => {
            let t = wordset_from_json(&read(&file)?)?;
            let p = PeriodVector::new(period)?;
            match periodic_config_search(&t, &p, ctx.caps.node_limit)? {
                PeriodicSearch::Found(cfg) => {
                    ctx.emit(&json!({ "verdict": "found", "periods": p.periods(), "configuration": cfg }))?;
                    Ok(EXIT_POSITIVE)
                }
                PeriodicSearch::NoneExists => {
                    ctx.emit(&json!({ "verdict": "none", "periods": p.periods() }))?;
                    Ok(EXIT_NEGATIVE)
                }
                PeriodicSearch::Aborted { nodes } => {
                    ctx.emit(&json!({ "verdict": "aborted", "periods": p.periods(), "nodes": nodes }))?;
                    Ok(EXIT_CAP)
                }
            }
        }
        Command::Fourier { file, signed } => {
            let mu = load_signed(&file, signed, &ctx)?;
            let table = fourier_transform(&mu, ctx.caps.max_cells)?;
            let check = check_stationarity_fourier(&mu, ctx.caps.max_cells)?;
            ctx.emit(&json!({
                "approximate": true,
                "table": table.to_json(),
                "fourier_stationary": check.passed(),
            }))?;
            Ok(EXIT_POSITIVE)
        }
        Command::EntropyMetric { file, sets } => {
            let mu = load_measure(&file, &ctx)?;
            let sets = json_arg(&sets)?;
            let [u, v] = <[Domain; 2]>::try_from(sets).map_err(|_| Failure::usage("--sets needs exactly two domains"))?;
            ctx.emit(&json!({
                "approximate": true,
                "u": u,
                "v": v,
                "distance": entropy_metric(&mu, &u, &v)?,
                "h_u_given_v": conditional_entropy(&mu, &u, &v)?,
                "h_v_given_u": conditional_entropy(&mu, &v, &u)?,
            }))?;
            Ok(EXIT_POSITIVE)
        }
        Command::Corpus { name } => {
            corpus(name, &ctx)?;
            Ok(EXIT_POSITIVE)
        }
    }
}

fn emit_wordset(ws: &WordSet, ctx: &Ctx) -> Result<(), Failure> {
    ctx.emit(&serde_json::from_str::<Value>(&wordset_to_json(ws)).expect("valid json"))
}

fn corpus(name: CorpusName, ctx: &Ctx) -> Result<(), Failure> {
    let measure = match name {
        CorpusName::Counterexample { alphabet, rho } => {
            let rho = if rho.is_empty() {
                vec![extlab::BigRational::new(1.into(), alphabet.into()); alphabet as usize]
            } else {
                rho.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?
            };
            disconnected_counterexample(alphabet, &rho)?
        }
        CorpusName::Pseudolattice => pseudolattice_measure()?,
        CorpusName::Robinson { reading } => {
            let reading = match reading.as_str() {
                "distinct" => RobinsonReading::Distinct,
                s if s.chars().count() == 1 => RobinsonReading::Typo(s.chars().next().unwrap()),
                s => return Err(Failure::usage(format!("unknown reading {s:?}"))),
            };
            return emit_wordset(&robinson_tileset(reading)?, ctx);
        }
        CorpusName::Counter { k, words: true } => return emit_wordset(&binary_counter_words(k)?, ctx),
        CorpusName::Counter { k, words: false } => binary_counter_measure(k)?,
        CorpusName::Eca { rule } => {
            let u = Domain::interval(-1, 1);
            let (_, ws) = ca_to_sft(2, &u, &elementary_rule(rule))?;
            return emit_wordset(&ws, ctx);
        }
    };
    ctx.emit(&serde_json::to_value(measure_to_value(&measure)).expect("serializable"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_POSITIVE };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
