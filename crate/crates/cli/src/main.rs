use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use ncorep::input::{parse_order, parse_subst, AlgebraFile};
use ncorep::suite::{self, Command, Options};

/// Verify twisted corepresentations of quantum matrix bialgebras.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on input errors.
#[derive(Parser, Debug)]
#[command(name = "ncorep", version)]
struct Cli {
    /// One of: validate-theta, ybe, relations, compare-ideals, det, normal-form,
    /// confluence, pbw-count, d-commutations, antipode, gamma-table, cocycle,
    /// twist-r, integrability, full-report.
    command: String,

    /// Algebra definition file, or the name of a shipped example such as `qplane_qprs`.
    #[arg(long)]
    input: String,

    /// Also write the JSON report here (`-` for standard output instead of text).
    #[arg(long)]
    json: Option<PathBuf>,

    /// NAME=EXPR, applied in the order given.
    #[arg(long = "subst", value_name = "NAME=EXPR")]
    subst: Vec<String>,

    /// Generator precedence for rewriting, e.g. `a<b<c<d`.
    #[arg(long)]
    order: Option<String>,

    #[arg(long, default_value_t = 3)]
    max_degree: usize,

    /// Element to reduce with `normal-form`; repeatable.
    #[arg(long = "expr")]
    expr: Vec<String>,
}

fn load(input: &str) -> Result<(String, String), String> {
    let path = Path::new(input);
    if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| format!("{input}: {e}"))?;
        return Ok((input.to_string(), text));
    }
    match ncorep::golden::by_name(input) {
        Some(text) => Ok((input.to_string(), text.to_string())),
        None => Err(format!("{input}: no such file or shipped example")),
    }
}

fn run(cli: &Cli) -> Result<bool, String> {
    let command: Command = cli.command.parse().map_err(|e| format!("{e}"))?;
    let (name, text) = load(&cli.input)?;
    let file = AlgebraFile::parse(&text).map_err(|e| format!("{name}: {e}"))?;
    let substitutions = cli
        .subst
        .iter()
        .map(|s| parse_subst(s, &file.params))
        .collect::<Result<Vec<_>, _>>()?;
    let order = cli.order.as_deref().map(|o| parse_order(o, file.dim)).transpose()?;
    let opts = Options {
        substitutions,
        order,
        max_degree: cli.max_degree,
        exprs: cli.expr.clone(),
    };
    let report = suite::run(command, &file, &name, &opts).map_err(|e| e.to_string())?;
    match cli.json.as_deref() {
        Some(p) if p == Path::new("-") => print!("{}", report.to_json()),
        Some(p) => {
            print!("{}", report.to_text());
            fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        None => print!("{}", report.to_text()),
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
