use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use projcb::characterization::N2Row;
use projcb::constructions::{self, Construction};
use projcb::decoder::{self, DEFAULT_DFS_CAP, DEFAULT_DIAGONAL_CAP};
use projcb::render::{self, Format, Mode, RenderSpec};
use projcb::verify::{self, Bounds, Suite};
use projcb::{report, Board, DiagonalId, Error, Method, PathSpec, Square};

const ORIENTATION: &str = "Squares are (p,q) with 0 <= p < m and 0 <= q < n. \
Maps put row q = n-1 at the top: north is up, east is right.";

#[derive(Parser)]
#[command(name = "projcb", version, about = "Hamiltonian paths in projective checkerboards", after_help = ORIENTATION)]
struct Cli {
    /// TOML file with caps and default formats; flags override it
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw the initial or terminal squares of a board, or its diagonals
    #[command(after_help = ORIENTATION)]
    Map(MapArgs),
    /// Build a path by construction kind or from its coordinates
    #[command(after_help = ORIENTATION)]
    Path(PathArgs),
    /// List every hamiltonian path of a board
    Enumerate(EnumerateArgs),
    /// Check predicates, constructions and reductions against enumeration
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Write to FILE instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    /// init, term or diagonals
    #[arg(long)]
    mode: Mode,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// ascii, json or svg
    #[arg(long)]
    format: Option<Format>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PathArgs {
    /// ha, hb, exceptional, n1, n2 or canonical
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    kind: Option<String>,
    /// Decode the path given by --init, --term and --east
    #[arg(long)]
    spec: bool,
    #[arg(long)]
    m: usize,
    /// Implied by the kind for exceptional, n1 and n2
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Row tag A..J of the two-row endpoint table
    #[arg(long)]
    row: Option<String>,
    /// Initial square as p,q
    #[arg(long, value_name = "P,Q")]
    init: Option<String>,
    /// Terminal square as p,q
    #[arg(long, value_name = "P,Q")]
    term: Option<String>,
    /// Comma-separated lower indices of the diagonals that travel east
    #[arg(long, value_name = "IDS", default_value = "")]
    east: String,
    #[arg(long)]
    format: Option<Format>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// diagonal or dfs
    #[arg(long, default_value = "diagonal")]
    method: Method,
    /// Print only the header and footer
    #[arg(long)]
    count_only: bool,
    /// Square limit for dfs, m+n limit for diagonal
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// theorems, props, constructions, reductions, n12 or all
    #[arg(long, default_value = "all")]
    suite: Suite,
    #[arg(long, default_value_t = 6)]
    max_m: usize,
    /// Defaults to --max-m
    #[arg(long)]
    max_n: Option<usize>,
    /// Emit the suite report as json
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Config {
    dfs_cap: Option<usize>,
    diagonal_cap: Option<usize>,
    format: Option<Format>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Config, Failure> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }

    fn dfs_cap(&self) -> usize {
        self.dfs_cap.unwrap_or(DEFAULT_DFS_CAP)
    }

    fn diagonal_cap(&self) -> usize {
        self.diagonal_cap.unwrap_or(DEFAULT_DIAGONAL_CAP)
    }

    fn format(&self, flag: Option<Format>) -> Format {
        flag.or(self.format).unwrap_or_default()
    }
}

/// An error with its exit status, printed as json on stderr.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    hint: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
            hint: None,
        }
    }

    fn hint(mut self, hint: impl Into<String>) -> Failure {
        self.hint = Some(hint.into());
        self
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::CapExceeded { .. } => 3,
            Error::InvalidBoard { .. }
            | Error::OffBoard { .. }
            | Error::Parse(_)
            | Error::Precondition(_)
            | Error::InvalidSpec(_)
            | Error::NotSquareBoard { .. } => 2,
            _ => 1,
        };
        let hint = match &err {
            Error::CapExceeded { .. } => Some(format!(
                "raise --cap or set dfs-cap / diagonal-cap in --config (dfs hard limit {})",
                decoder::DFS_HARD_LIMIT
            )),
            _ => None,
        };
        Failure {
            code,
            kind: err.kind(),
            message: err.to_string(),
            hint,
        }
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 1,
            kind: "io",
            message: format!("{}: {e}", path.display()),
            hint: None,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_square(flag: &str, value: Option<&str>) -> Result<Square, Failure> {
    let value = value.ok_or_else(|| Failure::usage(format!("--spec needs --{flag}")))?;
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [p, q] => match (p.parse(), q.parse()) {
            (Ok(p), Ok(q)) => Ok(Square::new(p, q)),
            _ => Err(Failure::usage(format!("--{flag} {value:?}: expected p,q"))),
        },
        _ => Err(Failure::usage(format!("--{flag} {value:?}: expected p,q"))),
    }
}

fn parse_east(value: &str) -> Result<Vec<DiagonalId>, Failure> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim_start_matches(['D', 'd'])
                .parse()
                .map(DiagonalId)
                .map_err(|_| Failure::usage(format!("--east: {s:?} is not a diagonal index")))
        })
        .collect()
}

fn need(flag: &str, value: Option<usize>, kind: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::usage(format!("--kind {kind} needs --{flag}")))
}

fn cmd_map(args: MapArgs, config: &Config) -> Result<(), Failure> {
    if args.mode == Mode::Path {
        return Err(Failure::usage(
            "map draws init, term or diagonals; use the path command for paths",
        ));
    }
    let board = Board::new(args.m, args.n)?;
    if args.n > args.m && args.mode != Mode::Diagonals {
        return Err(Failure::usage(format!("endpoint maps need m >= n, got {board}"))
            .hint(format!("transpose: --m {} --n {}", args.n, args.m)));
    }
    let spec = RenderSpec::new(args.mode, config.format(args.format), board);
    emit(&args.output, &render::render(&spec)?)
}

fn build_path(args: &PathArgs) -> Result<Construction, Failure> {
    if args.spec {
        let board = Board::new(args.m, args.n.ok_or_else(|| Failure::usage("--spec needs --n"))?)?;
        let initial = parse_square("init", args.init.as_deref())?;
        let terminal = parse_square("term", args.term.as_deref())?;
        let spec = PathSpec::new(initial, terminal, parse_east(&args.east)?);
        return Ok(constructions::construct(
            &constructions::ConstructionRequest::Canonical { board, spec },
        )?);
    }
    let kind = args.kind.as_deref().expect("clap requires --kind without --spec");
    let board = || -> Result<Board, Failure> {
        let n = args
            .n
            .ok_or_else(|| Failure::usage(format!("--kind {kind} needs --n")))?;
        Ok(Board::new(args.m, n)?)
    };
    let built = match kind {
        "ha" => constructions::construct_ha(&board()?, need("a", args.a, kind)?),
        "hb" => {
            let board = board()?;
            let a = need("a", args.a, kind)?;
            let b = args.b.unwrap_or((board.m() + board.n() - 3).saturating_sub(a));
            constructions::construct_hb(&board, a, b)
        }
        "exceptional" => constructions::construct_exceptional(args.m),
        "n1" => constructions::construct_n1(args.m, need("p", args.p, kind)?),
        "n2" => {
            let row = args
                .row
                .as_deref()
                .ok_or_else(|| Failure::usage("--kind n2 needs --row"))?;
            constructions::construct_n2(args.m, N2Row::from_tag(row)?, args.p, args.q)
        }
        "canonical" => {
            return Err(Failure::usage(
                "--kind canonical is spelled --spec --init P,Q --term P,Q --east IDS",
            ))
        }
        other => return Err(Failure::usage(format!("unknown kind {other:?}"))),
    };
    Ok(built?)
}

fn cmd_path(args: PathArgs, config: &Config) -> Result<(), Failure> {
    let built = build_path(&args)?;
    if !built.walk.is_hamiltonian_path() {
        return Err(Error::ConstructionInvalid(built.walk.to_string()).into());
    }
    let format = config.format(args.format);
    let spec = RenderSpec::new(Mode::Path, format, built.walk.board()).with_walk(built.walk.clone());
    let rendered = render::render(&spec)?;
    let text = match format {
        Format::Ascii => {
            let log = serde_json::to_string(&built.log).expect("json");
            format!("{rendered}construction: {log}\n")
        }
        Format::Json => {
            let mut doc: serde_json::Value = serde_json::from_str(&rendered).expect("render emits json");
            doc["construction"] = serde_json::to_value(&built.log).expect("json");
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Format::Svg => rendered,
    };
    emit(&args.output, &text)
}

fn cmd_enumerate(args: EnumerateArgs, config: &Config) -> Result<(), Failure> {
    let board = Board::new(args.m, args.n)?;
    let result = match args.method {
        Method::Dfs => decoder::enumerate_dfs_with_cap(&board, args.cap.unwrap_or(config.dfs_cap())),
        Method::Diagonal => decoder::enumerate_diagonal_with_cap(&board, args.cap.unwrap_or(config.diagonal_cap())),
    };
    emit(&args.output, &report::write_report(&result?, args.count_only))
}

fn cmd_verify(args: VerifyArgs, config: &Config) -> Result<(), Failure> {
    let bounds = Bounds {
        max_m: args.max_m,
        max_n: args.max_n.unwrap_or(args.max_m),
        dfs_cap: config.dfs_cap(),
        diagonal_cap: config.diagonal_cap(),
    };
    let result = verify::run(args.suite, &bounds);
    let text = if args.json { result.to_json() } else { result.to_text() };
    emit(&args.output, &text)?;
    if result.passed() {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            kind: "verification_failed",
            message: format!("{} FAIL entries", result.count(verify::Status::Fail)),
            hint: None,
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Map(args) => cmd_map(args, &config),
        Command::Path(args) => cmd_path(args, &config),
        Command::Enumerate(args) => cmd_enumerate(args, &config),
        Command::Verify(args) => cmd_verify(args, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut doc = json!({"error": f.kind, "message": f.message});
            if let Some(h) = f.hint {
                doc["hint"] = json!(h);
            }
            eprintln!("{doc}");
            ExitCode::from(f.code)
        }
    }
}
