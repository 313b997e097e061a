//! Command-line front end. `run` parses arguments, executes one command and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, tag authentic |
//! | 1 | tag mismatch, or no forgeable block found |
//! | 2 | usage or input error |
//! | 3 | the pipeline reached a degenerate state |

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use amac::bench::{self, BENCH_SIZES};
use amac::forge::permute_within_block;
use amac::{amac_encode_with, verify_with, BhfKind, Error, Heuristic, KeyPair, Mode, Tag};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "amac", version, about = "Algebraic message authentication codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the tag of a message.
    Sign {
        #[command(flatten)]
        keys: KeyArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Check a message against a tag. The heuristic is taken from the tag.
    Verify {
        #[command(flatten)]
        keys: KeyArgs,
        /// Tag line as printed by `sign`.
        #[arg(long, required_unless_present = "tag_file", conflicts_with = "tag_file")]
        tag: Option<String>,
        /// File whose first line is the tag.
        #[arg(long)]
        tag_file: Option<PathBuf>,
        /// Recompute with the pseudocode-literal loop.
        #[arg(long)]
        literal: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Reorder bytes inside one block and show that H1 cannot tell.
    ForgeDemo {
        #[command(flatten)]
        keys: KeyArgs,
        #[arg(long, default_value_t = amac::heuristics::DEFAULT_H2_BASE)]
        h2_base: u32,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Time encoding over synthetic messages of increasing size.
    Bench {
        #[arg(long, env = "AMAC_KEY", default_value = "This is the first key.", hide_env_values = true)]
        key: String,
        #[arg(long, env = "AMAC_IDENT", default_value = "theveninester", hide_env_values = true)]
        ident: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Message sizes in bytes.
        #[arg(long, value_delimiter = ',', default_values_t = BENCH_SIZES)]
        sizes: Vec<usize>,
        /// Minimum time spent on each size, in milliseconds.
        #[arg(long, default_value_t = 200)]
        budget_ms: u64,
    },
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// Primary key.
    #[arg(long, env = "AMAC_KEY", hide_env_values = true)]
    pub key: String,
    /// Identifier (secondary key); ASCII.
    #[arg(long, env = "AMAC_IDENT", hide_env_values = true)]
    pub ident: String,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = HeuristicArg::H1)]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = amac::heuristics::DEFAULT_H2_BASE)]
    pub h2_base: u32,
    /// Run the pseudocode-literal loop instead of the amended one.
    #[arg(long)]
    pub literal: bool,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Message file; standard input when omitted or `-`.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    H1,
    H2,
}

impl From<HeuristicArg> for Heuristic {
    fn from(h: HeuristicArg) -> Heuristic {
        match h {
            HeuristicArg::H1 => Heuristic::H1,
            HeuristicArg::H2 => Heuristic::H2,
        }
    }
}

fn mode(literal: bool) -> Mode {
    if literal {
        Mode::Literal
    } else {
        Mode::Amended
    }
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if e.is_degenerate() {
            EXIT_DEGENERATE
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        // A reader that hung up early (`| head -1`) is not an error.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure {
                code: EXIT_OK,
                message: String::new(),
            };
        }
        Failure::usage(e.to_string())
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn message(&mut self, input: &InputArgs) -> Result<Vec<u8>, Failure> {
        match &input.input {
            Some(p) if p.as_os_str() != "-" => {
                fs::read(p).map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))
            }
            _ => {
                let mut buf = Vec::new();
                self.stdin.read_to_end(&mut buf)?;
                Ok(buf)
            }
        }
    }
}

fn key_pair(keys: &KeyArgs) -> Result<KeyPair, Failure> {
    Ok(KeyPair::new(keys.key.as_bytes(), keys.ident.as_bytes())?)
}

fn kind(scheme: &SchemeArgs) -> Result<BhfKind, Failure> {
    Ok(BhfKind::new(scheme.heuristic.into(), scheme.h2_base)?)
}

fn sign(io: &mut Io, keys: &KeyArgs, scheme: &SchemeArgs, input: &InputArgs) -> Result<i32, Failure> {
    let keys = key_pair(keys)?;
    let kind = kind(scheme)?;
    let msg = io.message(input)?;
    let tag = amac_encode_with(&msg, &keys, kind, mode(scheme.literal))?;
    writeln!(io.out, "{}", tag.serialize())?;
    writeln!(io.out, "# value {}", tag.display_value())?;
    Ok(EXIT_OK)
}

fn verify(
    io: &mut Io,
    keys: &KeyArgs,
    tag: Option<&str>,
    tag_file: Option<&PathBuf>,
    literal: bool,
    input: &InputArgs,
) -> Result<i32, Failure> {
    let keys = key_pair(keys)?;
    let text = match (tag, tag_file) {
        (Some(t), _) => t.to_string(),
        (None, Some(p)) => {
            let body = fs::read_to_string(p)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", p.display())))?;
            body.lines().next().unwrap_or_default().to_string()
        }
        (None, None) => return Err(Failure::usage("a tag is required")),
    };
    let expected = Tag::parse(&text)?;
    let msg = io.message(input)?;
    // The verdict is the exit code; a failed status write must not change it.
    match verify_with(&msg, &keys, &expected, mode(literal)) {
        Ok(true) => {
            let _ = writeln!(io.out, "OK");
            Ok(EXIT_OK)
        }
        Ok(false) => {
            let _ = writeln!(io.out, "MISMATCH");
            Ok(EXIT_MISMATCH)
        }
        Err(e) if e.is_degenerate() => {
            let _ = writeln!(io.out, "MISMATCH ({e})");
            Ok(EXIT_MISMATCH)
        }
        Err(e) => Err(e.into()),
    }
}

fn forge_demo(io: &mut Io, keys: &KeyArgs, h2_base: u32, input: &InputArgs) -> Result<i32, Failure> {
    let keys = key_pair(keys)?;
    let h1 = BhfKind::new(Heuristic::H1, h2_base)?;
    let h2 = BhfKind::new(Heuristic::H2, h2_base)?;
    let msg = io.message(input)?;
    let Some(forgery) = permute_within_block(&msg, keys.identifier())? else {
        writeln!(io.out, "no block with two distinct bytes; nothing to permute")?;
        return Ok(EXIT_MISMATCH);
    };
    let (i, j) = forgery.swapped;
    writeln!(
        io.out,
        "block {}..{}: swapped bytes {i} ({:?}) and {j} ({:?})",
        forgery.block.start,
        forgery.block.end,
        char::from(msg[i]),
        char::from(msg[j]),
    )?;
    writeln!(io.out, "original: {}", String::from_utf8_lossy(&forgery.original))?;
    writeln!(io.out, "forged:   {}", String::from_utf8_lossy(&forgery.forged))?;
    for kind in [h1, h2] {
        let label = kind.heuristic();
        let a = amac_encode_with(&forgery.original, &keys, kind, Mode::Amended);
        let b = amac_encode_with(&forgery.forged, &keys, kind, Mode::Amended);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let verdict = if a.serialize() == b.serialize() {
                    "identical"
                } else {
                    "different"
                };
                writeln!(io.out, "{label} original {}", a.serialize())?;
                writeln!(io.out, "{label} forged   {}", b.serialize())?;
                writeln!(io.out, "{label} tags {verdict}")?;
            }
            (a, b) => {
                let err = a.err().or(b.err()).expect("one side failed");
                writeln!(io.out, "{label} encode failed: {err}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn run_bench(
    io: &mut Io,
    key: &str,
    ident: &str,
    scheme: &SchemeArgs,
    sizes: &[usize],
    budget_ms: u64,
) -> Result<i32, Failure> {
    let keys = KeyPair::new(key.as_bytes(), ident.as_bytes())?;
    let kind = kind(scheme)?;
    let rows = bench::run(sizes, &keys, kind, Duration::from_millis(budget_ms))?;
    writeln!(io.out, "{:>10} {:>14} {:>10} {:>6}", "bytes", "best", "ns/byte", "runs")?;
    for row in &rows {
        let per = row
            .ns_per_byte()
            .map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        writeln!(
            io.out,
            "{:>10} {:>14} {:>10} {:>6}",
            row.size,
            format!("{:.3?}", row.best),
            per,
            row.runs
        )?;
    }
    for (n, ratio) in bench::doubling_ratios(&rows) {
        writeln!(io.out, "time({})/time({n}) = {ratio:.2}", 2 * n)?;
    }
    Ok(EXIT_OK)
}

fn execute(cli: &Cli, io: &mut Io) -> Result<i32, Failure> {
    match &cli.command {
        Command::Sign {
            keys,
            scheme,
            input,
        } => sign(io, keys, scheme, input),
        Command::Verify {
            keys,
            tag,
            tag_file,
            literal,
            input,
        } => verify(io, keys, tag.as_deref(), tag_file.as_ref(), *literal, input),
        Command::ForgeDemo {
            keys,
            h2_base,
            input,
        } => forge_demo(io, keys, *h2_base, input),
        Command::Bench {
            key,
            ident,
            scheme,
            sizes,
            budget_ms,
        } => run_bench(io, key, ident, scheme, sizes, *budget_ms),
    }
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let mut io = Io { stdin, out: stdout };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(stderr, "amac: {}", f.message);
            }
            f.code
        }
    }
}
