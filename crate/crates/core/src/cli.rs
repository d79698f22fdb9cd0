//! The `topl` command-line front end.
//!
//! Exit codes: 0 success (for `check`, no violation), 3 violation found,
//! 1 usage or parse error, 2 invalid input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;

use crate::automaton::AnyAutomaton;
use crate::hl::HlAutomaton;
use crate::json::{self, AutomatonFile, JsonError};
use crate::monitor::{run_trace, MonitorError, MonitorOptions, Report};
use crate::property::{compile_source, EventSchema, PropertyError};
use crate::translate::{emptiness, hl_to_topl, topl_to_hl, topl_to_ra, Emptiness};
use crate::value::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "topl", version, about = "Compile, translate and monitor TOPL automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a property to automaton JSON.
    Compile {
        property: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Monitor a JSON Lines trace.
    Check {
        #[arg(long, conflicts_with = "automaton", required_unless_present = "automaton")]
        property: Option<PathBuf>,
        #[arg(long)]
        automaton: Option<PathBuf>,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        max_configs: Option<usize>,
        /// Include the transitions taken in each verdict.
        #[arg(long)]
        report_path: bool,
        #[arg(long)]
        stop_at_first: bool,
        /// Fail on malformed trace lines instead of skipping them.
        #[arg(long)]
        strict_trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Add wall-clock time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Translate an automaton between models.
    Translate {
        automaton: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decide emptiness, printing a witness if there is one.
    Emptiness { automaton: PathBuf },
    /// Decide membership of a word.
    Member {
        automaton: PathBuf,
        /// JSON array of letters, each an array of strings; null is bottom.
        #[arg(long, conflicts_with = "word_file", required_unless_present = "word_file")]
        word: Option<String>,
        #[arg(long)]
        word_file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Ra,
    Topl,
    Hl,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn invalid(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Syntax(_) => Failure::usage(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<PropertyError> for Failure {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::Syntax { .. } => Failure::usage(e),
            _ => Failure::invalid(e),
        }
    }
}

impl From<MonitorError> for Failure {
    fn from(e: MonitorError) -> Self {
        Failure::invalid(e)
    }
}

impl From<crate::error::TranslateError> for Failure {
    fn from(e: crate::error::TranslateError) -> Self {
        Failure::invalid(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AutomatonFile, Failure> {
    json::parse_automaton(&read(path)?)
        .map_err(|e| Failure::from(e).prefixed(path))
}

impl Failure {
    fn prefixed(mut self, path: &Path) -> Self {
        self.message = format!("{}: {}", path.display(), self.message);
        self
    }
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> Result<(), Failure> {
    match target {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(Failure::invalid),
    }
}

/// Runs the CLI on `args` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Compile { property, out: target } => {
            let c = compile_source(&read(&property)?).map_err(|e| Failure::from(e).prefixed(&property))?;
            emit(out, target.as_deref(), &json::compiled_to_json(&c))?;
            Ok(EXIT_OK)
        }
        Command::Check {
            property,
            automaton,
            trace,
            max_configs,
            report_path,
            stop_at_first,
            strict_trace,
            format,
            timing,
        } => {
            let (aut, schema) = match (property, automaton) {
                (Some(p), _) => {
                    let c = compile_source(&read(&p)?).map_err(|e| Failure::from(e).prefixed(&p))?;
                    (c.automaton, c.schema)
                }
                (None, Some(a)) => monitorable(load(&a)?)?,
                (None, None) => return Err(Failure::usage("one of --property or --automaton is required")),
            };
            let options = MonitorOptions {
                max_configs,
                record_paths: report_path,
                stop_at_first,
            };
            let file = File::open(&trace)
                .map_err(|e| Failure::invalid(format!("{}: {e}", trace.display())))?;
            let report = run_trace(&aut, &schema, BufReader::new(file), &options, strict_trace)?;
            let text = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report.to_json(timing)).expect("reports serialize")
                        + "\n"
                }
                Format::Text => report_text(&report, timing),
            };
            emit(out, None, &text)?;
            Ok(if report.violated() {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
        Command::Translate {
            automaton,
            target,
            out: dest,
        } => {
            let f = load(&automaton)?;
            let text = match (target, f.automaton) {
                (Target::Ra, AnyAutomaton::Topl(a)) => json::ra_to_json(topl_to_ra(&a)?.as_topl()),
                (Target::Ra, AnyAutomaton::Hl(a)) => {
                    json::ra_to_json(topl_to_ra(&hl_to_topl(&a)?)?.as_topl())
                }
                (Target::Topl, AnyAutomaton::Topl(a)) => json::topl_to_json(&a),
                (Target::Topl, AnyAutomaton::Hl(a)) => json::topl_to_json(&hl_to_topl(&a)?),
                (Target::Hl, AnyAutomaton::Topl(a)) => json::hl_to_json(&topl_to_hl(&a)?),
                (Target::Hl, AnyAutomaton::Hl(a)) => json::hl_to_json(&a),
            };
            emit(out, dest.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Emptiness { automaton } => {
            let f = load(&automaton)?;
            let text = match emptiness(&f.automaton)? {
                Emptiness::Empty => "empty\n".to_string(),
                Emptiness::NonEmpty(w) => {
                    format!("non-empty\nwitness: {}\n", json::word_to_json(&w))
                }
            };
            emit(out, None, &text)?;
            Ok(EXIT_OK)
        }
        Command::Member {
            automaton,
            word,
            word_file,
        } => {
            let f = load(&automaton)?;
            let text = match (word, word_file) {
                (Some(w), _) => w,
                (None, Some(p)) => read(&p)?,
                (None, None) => return Err(Failure::usage("one of --word or --word-file is required")),
            };
            let w = json::parse_word(&text)?;
            check_word(&w, f.automaton.arity())?;
            let verdict = if f.automaton.accepts(&w) { "accept" } else { "reject" };
            emit(out, None, &format!("{verdict}\n"))?;
            Ok(EXIT_OK)
        }
    }
}

fn check_word(w: &Word, arity: usize) -> Result<(), Failure> {
    match w.iter().position(|l| l.arity() != arity) {
        Some(i) => Err(Failure::invalid(format!(
            "letter {} has {} values, the automaton reads {arity}",
            i + 1,
            w[i].arity()
        ))),
        None => Ok(()),
    }
}

/// The high-level automaton and event layout to monitor with. TOPL
/// automata are first translated so that their semantics is kept, and a
/// missing `events` section is read off the arity.
fn monitorable(f: AutomatonFile) -> Result<(HlAutomaton, EventSchema), Failure> {
    let aut = match f.automaton {
        AnyAutomaton::Hl(a) => a,
        AnyAutomaton::Topl(a) => topl_to_hl(&a)?,
    };
    let schema = match f.schema {
        Some(s) => s,
        None if aut.arity >= 2 => EventSchema {
            arity: aut.arity - 2,
            variables: IndexMap::new(),
            constants: Vec::new(),
        },
        None => {
            return Err(Failure::invalid(
                "automata without an `events` section need letters of at least two values",
            ))
        }
    };
    Ok((aut, schema))
}

fn report_text(r: &Report, timing: bool) -> String {
    let mut s = String::new();
    for w in &r.warnings {
        let _ = writeln!(s, "warning: trace line {}: {}", w.line, w.message);
    }
    for v in &r.verdicts {
        let _ = writeln!(s, "violation at event {}", v.matched_at);
        for p in v.path.iter().flatten() {
            let span = if p.first_event == p.last_event {
                format!("event {}", p.first_event)
            } else {
                format!("events {}-{}", p.first_event, p.last_event)
            };
            let _ = writeln!(s, "  {} -> {} (transition {}, {span})", p.from, p.to, p.transition);
        }
    }
    if r.verdicts.is_empty() {
        s.push_str("no violation\n");
    }
    let _ = writeln!(
        s,
        "events: {}, peak active: {}, dropped: {}",
        r.stats.events, r.stats.peak_active, r.stats.dropped
    );
    if timing {
        let _ = writeln!(s, "wall time: {:.3} ms", r.wall_time.as_secs_f64() * 1000.0);
    }
    s
}
