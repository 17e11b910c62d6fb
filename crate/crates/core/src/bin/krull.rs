use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use krull::report::Format;
use krull::suites::{run_suite, SuiteParams, SUITES};
use krull::tilt::tilt_demo;
use krull::Error;

const DEFAULT_CONFIG: &str = "krull.conf";

#[derive(Parser, Debug)]
#[command(name = "krull", version, about = "Run verification suites on valued-field computations")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Suite to run (see --list).
    suite: Option<String>,
    #[command(flatten)]
    opts: Opts,
    /// List registered suites and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Finite-depth tilt demonstrations.
    Tilt {
        #[command(subcommand)]
        action: TiltAction,
    },
}

#[derive(Subcommand, Debug)]
enum TiltAction {
    /// Quotient table, O^flat/t = O/p table and sharp samples, as JSON.
    Demo(Opts),
}

#[derive(Args, Debug, Default, Clone)]
struct Opts {
    /// Residue characteristic (restricts a suite to one prime).
    #[arg(long)]
    p: Option<u64>,
    /// Exponent q of the power classes F^x/F^xq.
    #[arg(long)]
    q: Option<u64>,
    /// Size parameter (suite-specific; level N for tilts).
    #[arg(long, visible_alias = "N")]
    n: Option<u64>,
    /// Field descriptor, e.g. "Qp(3)[zeta_p]" or "Qp(3)((t))".
    #[arg(long)]
    field: Option<String>,
    /// Working precision (suite-specific units; uniformizer units for tilts).
    #[arg(long)]
    precision: Option<u32>,
    /// Tilt depth or tower depth.
    #[arg(long)]
    depth: Option<u32>,
    /// Sampling seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Emit JSON instead of a text table.
    #[arg(long)]
    json: bool,
    /// Record wall-clock time per case (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// key=value defaults; ./krull.conf is read when present.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("krull: {msg}");
    ExitCode::from(2)
}

/// `key = value` lines, `#` comments.
fn read_config(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
        out.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
    }
    Ok(out)
}

fn apply_config(opts: &mut Opts, cfg: &BTreeMap<String, String>) -> Result<(), String> {
    fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, String> {
        v.parse().map_err(|_| format!("config: `{k}` expects a number, got `{v}`"))
    }
    for (k, v) in cfg {
        match k.as_str() {
            "p" => opts.p = opts.p.or(Some(num(k, v)?)),
            "q" => opts.q = opts.q.or(Some(num(k, v)?)),
            "n" => opts.n = opts.n.or(Some(num(k, v)?)),
            "precision" => opts.precision = opts.precision.or(Some(num(k, v)?)),
            "depth" => opts.depth = opts.depth.or(Some(num(k, v)?)),
            "seed" => opts.seed = opts.seed.or(Some(num(k, v)?)),
            "field" => opts.field = opts.field.take().or(Some(v.clone())),
            "json" => opts.json |= matches!(v.as_str(), "1" | "true" | "yes"),
            "timing" => opts.timing |= matches!(v.as_str(), "1" | "true" | "yes"),
            other => return Err(format!("config: unknown key `{other}`")),
        }
    }
    Ok(())
}

fn load_config(opts: &mut Opts) -> Result<(), String> {
    let path = match &opts.config {
        Some(p) => p.clone(),
        None if Path::new(DEFAULT_CONFIG).exists() => PathBuf::from(DEFAULT_CONFIG),
        None => return Ok(()),
    };
    let cfg = read_config(&path)?;
    apply_config(opts, &cfg)
}

fn write_out(body: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_demo(mut opts: Opts) -> ExitCode {
    if let Err(e) = load_config(&mut opts) {
        return usage(e);
    }
    let p = opts.p.unwrap_or(2);
    let n = opts.n.unwrap_or(2) as u32;
    let depth = opts.depth.unwrap_or(3) as usize;
    let precision = opts.precision.unwrap_or(6) as i64;
    let demo = match tilt_demo(p, n, depth, precision, 4, opts.seed.unwrap_or(0), 1 << 22) {
        Ok(d) => d,
        Err(e) => return usage(e),
    };
    let mut body = serde_json::to_string_pretty(&demo).expect("demo serialises");
    body.push('\n');
    if let Err(e) = write_out(&body, opts.output.as_deref()) {
        return usage(e);
    }
    if demo.iso.holds() && demo.quotient.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.list {
        let width = SUITES.iter().map(|(id, _)| id.len()).max().unwrap_or(0);
        for (id, about) in SUITES {
            println!("{id:width$}  {about}");
        }
        return ExitCode::SUCCESS;
    }
    if let Some(Command::Tilt { action: TiltAction::Demo(opts) }) = cli.command {
        return run_demo(opts);
    }
    let Some(suite) = cli.suite else {
        return usage("no suite given (try --list)");
    };
    let mut opts = cli.opts;
    if let Err(e) = load_config(&mut opts) {
        return usage(e);
    }
    let params = SuiteParams {
        p: opts.p,
        q: opts.q,
        n: opts.n,
        field: opts.field,
        precision: opts.precision,
        depth: opts.depth,
        seed: opts.seed.unwrap_or(0),
        timing: opts.timing,
    };
    let report = match run_suite(&suite, &params) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let format = if opts.json { Format::Json } else { Format::Text };
    if let Err(e) = report.emit(format, opts.output.as_deref()) {
        return usage(e);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
