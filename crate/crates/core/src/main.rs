use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diffgal::classify::newton_polygon;
use diffgal::cli::{self, parse_input, report_json, run, run_batch, svg, BatchEntry, CliError, InputFile};

#[derive(Parser)]
#[command(name = "diffgal", version, about = "Difference Galois groups of order 1-3 equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the operator of one input file.
    Classify(ClassifyArgs),
    /// Classify several input files; prints a JSON array in input order.
    Batch {
        files: Vec<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a JSON report: schema and the gauge certificate after re-parsing.
    Validate { report: PathBuf },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Input file (`-` for stdin); optional when --op is given.
    file: Option<PathBuf>,
    #[arg(long)]
    op: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long = "newton-svg")]
    newton_svg: Option<PathBuf>,
    /// Run the ∂-transcendence check with this differential-order bound.
    #[arg(long)]
    transcendence: Option<usize>,
    #[arg(long = "allow-extensions")]
    allow_extensions: bool,
    #[arg(long)]
    case: Option<String>,
    /// h (case S) or q (case Q).
    #[arg(long, allow_hyphen_values = true)]
    param: Option<String>,
    #[arg(long)]
    ramification: Option<u32>,
    /// name=value substitution, repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(|e| CliError::Other(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Other(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Other(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn input_from(a: &ClassifyArgs) -> Result<InputFile, CliError> {
    let mut input = match (&a.file, &a.op) {
        (Some(f), None) => parse_input(&read(f)?)?,
        (None, Some(op)) => InputFile {
            config: cli::RunConfig::default(),
            operator: op.clone(),
        },
        (Some(f), Some(op)) => {
            let mut i = parse_input(&format!("{}\nop: {op}", read(f)?.replace("op:", "# op:")))?;
            i.operator = op.clone();
            i
        }
        (None, None) => return Err(CliError::Config("give an input file or --op".into())),
    };
    let c = &mut input.config;
    if let Some(v) = &a.case {
        c.set("case", v)?;
    }
    if let Some(v) = &a.param {
        c.set("param", v)?;
    }
    if let Some(v) = a.ramification {
        c.ramification = v;
    }
    for kv in &a.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects NAME=VALUE, got '{kv}'")))?;
        c.set(k, v)?;
    }
    if a.allow_extensions {
        c.allow_extensions = true;
    }
    if a.transcendence.is_some() {
        c.transcendence_bound = a.transcendence;
    }
    Ok(input)
}

fn classify(a: &ClassifyArgs) -> Result<(), CliError> {
    let input = input_from(a)?;
    let report = run(&input)?;
    if let Some(p) = &a.newton_svg {
        let (l, _) = cli::operator_from(&input.config, &input.operator)?;
        let np = newton_polygon(&l).map_err(|e| CliError::Unsupported(e.to_string()))?;
        std::fs::write(p, svg::newton_svg(&np)).map_err(|e| CliError::Other(format!("{}: {e}", p.display())))?;
    }
    let text = serde_json::to_string_pretty(&report_json(&report)).map_err(|e| CliError::Other(e.to_string()))?;
    write_out(a.json.as_deref(), &text)
}

fn batch(files: &[PathBuf], json: Option<&Path>) -> Result<(), CliError> {
    let mut inputs = Vec::new();
    let mut unreadable = Vec::new();
    for (i, f) in files.iter().enumerate() {
        match read(f) {
            Ok(text) => inputs.push((f.display().to_string(), text)),
            Err(e) => unreadable.push((
                i,
                BatchEntry {
                    source: f.display().to_string(),
                    report: None,
                    error: Some(e.to_string()),
                    exit_code: e.exit_code(),
                },
            )),
        }
    }
    let mut out = run_batch(&inputs);
    for (i, e) in unreadable {
        out.insert(i, e);
    }
    let worst = out.iter().map(|e| e.exit_code).max().unwrap_or(0);
    let text = serde_json::to_string_pretty(&out).map_err(|e| CliError::Other(e.to_string()))?;
    write_out(json, &text)?;
    if worst != 0 {
        return Err(CliError::Other(format!(
            "{} of {} inputs failed",
            out.iter().filter(|e| e.exit_code != 0).count(),
            out.len()
        )));
    }
    Ok(())
}

fn validate(path: &Path) -> Result<(), CliError> {
    let v: serde_json::Value = serde_json::from_str(&read(path)?).map_err(|e| {
        CliError::Parse(cli::ParseError {
            pos: e.column(),
            msg: e.to_string(),
        })
    })?;
    cli::validate_report(&v).map_err(CliError::Other)?;
    println!("ok");
    Ok(())
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            // usage errors share the configuration exit code
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let res = match &args.command {
        Command::Classify(a) => classify(a),
        Command::Batch { files, json } => batch(files, json.as_deref()),
        Command::Validate { report } => validate(report),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("diffgal: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
