//! Command-line front end: build the indexes from a text file and a
//! dictionary file, then execute a line-oriented query script.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use idm::{EngineOptions, Fragment, QueryEngine, Text};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Static,
    Dynamic,
}

/// Internal dictionary matching over text fragments.
///
/// Positions everywhere are 1-based and inclusive. The dictionary file has
/// one `start end` fragment per line; the script has one command per line:
/// EXISTS i j, REPORT i j, DISTINCT i j, COUNT i j, CDAPPROX i j,
/// INSERT a b, DELETE a b, REBUILD. Update commands require --mode dynamic;
/// CDAPPROX requires --mode static.
#[derive(Parser, Debug)]
#[command(name = "idm", version)]
struct Args {
    /// Text file (raw bytes; a single trailing newline is ignored).
    text: PathBuf,
    /// Dictionary file: one `start end` pair per line.
    dict: PathBuf,
    /// Query script: one command per line; blank lines and `#` comments skipped.
    script: PathBuf,
    /// Query mode.
    #[arg(long, value_enum, default_value_t = Mode::Static)]
    mode: Mode,
    /// Read the text as whitespace-separated non-negative integers.
    #[arg(long)]
    int_alphabet: bool,
    /// Epoch length between dynamic rebuilds (default ⌈√(n+d)⌉).
    #[arg(long)]
    epoch: Option<usize>,
    /// Seed for the randomized benchmark queries.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append timing statistics after the script output.
    #[arg(long)]
    bench: bool,
}

fn load_text(args: &Args) -> Result<Text> {
    let raw = fs::read(&args.text)
        .with_context(|| format!("cannot read text file {}", args.text.display()))?;
    let letters: Vec<u64> = if args.int_alphabet {
        String::from_utf8(raw)
            .context("text file is not valid UTF-8")?
            .split_whitespace()
            .map(|w| w.parse::<u64>().with_context(|| format!("bad letter {w:?}")))
            .collect::<Result<_>>()?
    } else {
        let mut bytes = raw;
        if bytes.last() == Some(&b'\n') {
            bytes.pop();
            if bytes.last() == Some(&b'\r') {
                bytes.pop();
            }
        }
        bytes.into_iter().map(u64::from).collect()
    };
    Ok(Text::from_ints(&letters)?)
}

fn parse_pair(line: &str, what: &str) -> Result<Fragment> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        bail!("malformed {what} line {line:?}: expected `start end`");
    };
    let start: usize = a.parse().with_context(|| format!("bad position {a:?}"))?;
    let end: usize = b.parse().with_context(|| format!("bad position {b:?}"))?;
    if start == 0 || end < start {
        bail!("invalid fragment ({start},{end}): need 1 <= start <= end");
    }
    Ok(Fragment::new(start, end))
}

fn load_dict(args: &Args) -> Result<Vec<Fragment>> {
    let body = fs::read_to_string(&args.dict)
        .with_context(|| format!("cannot read dictionary file {}", args.dict.display()))?;
    body.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_pair(l, "dictionary"))
        .collect()
}

fn letters_to_string(engine: &QueryEngine, pat: Fragment, int_alphabet: bool) -> String {
    let letters = engine.fragment_letters(pat);
    if int_alphabet {
        letters.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    } else {
        letters.iter().map(|&c| c as u8 as char).collect()
    }
}

#[derive(Clone, Debug)]
enum Command {
    Exists(Fragment),
    Report(Fragment),
    Distinct(Fragment),
    Count(Fragment),
    CdApprox(Fragment),
    Insert(Fragment),
    Delete(Fragment),
    Rebuild,
}

fn parse_script(body: &str, mode: Mode) -> Result<Vec<Command>> {
    let mut out = Vec::new();
    for (no, raw) in body.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (op, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let cmd = match op.to_ascii_uppercase().as_str() {
            "EXISTS" => Command::Exists(parse_pair(rest, "script")?),
            "REPORT" => Command::Report(parse_pair(rest, "script")?),
            "DISTINCT" => Command::Distinct(parse_pair(rest, "script")?),
            "COUNT" => Command::Count(parse_pair(rest, "script")?),
            "CDAPPROX" => Command::CdApprox(parse_pair(rest, "script")?),
            "INSERT" => Command::Insert(parse_pair(rest, "script")?),
            "DELETE" => Command::Delete(parse_pair(rest, "script")?),
            "REBUILD" if rest.trim().is_empty() => Command::Rebuild,
            _ => bail!("script line {}: unknown command {line:?}", no + 1),
        };
        match cmd {
            Command::Insert(_) | Command::Delete(_) | Command::Rebuild if mode == Mode::Static => {
                bail!("script line {}: {op} requires --mode dynamic", no + 1)
            }
            Command::CdApprox(_) if mode == Mode::Dynamic => {
                bail!("script line {}: CDAPPROX requires --mode static", no + 1)
            }
            _ => {}
        }
        out.push(cmd);
    }
    Ok(out)
}

fn run_command(engine: &mut QueryEngine, cmd: &Command, int_alphabet: bool) -> Result<Option<String>> {
    Ok(match *cmd {
        Command::Exists(f) => Some(engine.exists(f.start, f.end)?.to_string()),
        Command::Report(f) => {
            let occs = engine.report(f.start, f.end)?;
            Some(
                occs.into_iter()
                    .map(|(s, p)| format!("({s},{})", letters_to_string(engine, p, int_alphabet)))
                    .collect::<Vec<_>>()
                    .concat(),
            )
        }
        Command::Distinct(f) => Some(
            engine
                .report_distinct(f.start, f.end)?
                .into_iter()
                .map(|p| letters_to_string(engine, p, int_alphabet))
                .collect::<Vec<_>>()
                .join(" "),
        ),
        Command::Count(f) => Some(engine.count(f.start, f.end)?.to_string()),
        Command::CdApprox(f) => Some(engine.count_distinct_approx(f.start, f.end)?.value.to_string()),
        Command::Insert(f) => {
            engine.insert(f)?;
            None
        }
        Command::Delete(f) => {
            engine.delete(f)?;
            None
        }
        Command::Rebuild => {
            engine.rebuild()?;
            None
        }
    })
}

fn bench_report(engine: &QueryEngine, seed: u64, build: std::time::Duration) -> Result<()> {
    let n = engine.text_len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ranges = Vec::with_capacity(1000);
    for _ in 0..1000 {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(i..=n);
        ranges.push((i, j));
    }
    println!("# bench build_ms={:.3}", build.as_secs_f64() * 1e3);
    let timed = |name: &str, f: &dyn Fn(usize, usize)| {
        let t = Instant::now();
        for &(i, j) in &ranges {
            f(i, j);
        }
        println!("# bench {name}_mean_us={:.3}", t.elapsed().as_secs_f64() * 1e6 / ranges.len() as f64);
    };
    timed("exists", &|i, j| {
        engine.exists(i, j).unwrap();
    });
    timed("count", &|i, j| {
        engine.count(i, j).unwrap();
    });
    timed("report", &|i, j| {
        engine.report(i, j).unwrap();
    });
    timed("distinct", &|i, j| {
        engine.report_distinct(i, j).unwrap();
    });
    Ok(())
}

fn run() -> Result<()> {
    let args = Args::parse();
    let text = load_text(&args)?;
    let dict = load_dict(&args)?;
    let script_body = fs::read_to_string(&args.script)
        .with_context(|| format!("cannot read script file {}", args.script.display()))?;
    let commands = parse_script(&script_body, args.mode)?;

    let opts = EngineOptions {
        dynamic: args.mode == Mode::Dynamic,
        epoch: args.epoch,
        with_warmup: false,
    };
    let build_start = Instant::now();
    let mut engine = QueryEngine::new(&text, &dict, &opts)?;
    let build = build_start.elapsed();

    for cmd in &commands {
        if let Some(line) = run_command(&mut engine, cmd, args.int_alphabet)? {
            println!("{line}");
        }
    }
    if args.bench {
        bench_report(&engine, args.seed, build)?;
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
