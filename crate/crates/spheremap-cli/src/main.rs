//! Command-line front end: canonical polynomials, verification bundles,
//! tensoring, rank-exact construction, spectrum search, and script replay.
//!
//! Exit codes: 0 on success (a verification that reports `false` is a
//! successful run), 1 on domain errors such as a bad group or an
//! unrepresentable target rank, 2 on usage and syntax errors. Results go to
//! stdout, diagnostics to stderr. JSON output has sorted keys and a fixed
//! term order, so identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spheremap::poly::rational_json;
use spheremap::{
    canonical_polynomial, construct_thm1, construct_thm2, explore_spectrum, extract_map,
    parse_script, replay_script, sqrt_display, tensor_at, verify_bundle, ConstructionTrace,
    DiagonalCyclicGroup, MapComponent, ParseError, Polynomial, SearchConfig, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "spheremap",
    version,
    about = "Group-invariant monomial sphere maps via exact polynomial arithmetic"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print only the primary result in text mode
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GroupArgs {
    /// Group order p
    #[arg(long)]
    p: i64,

    /// Comma-separated integer weights, e.g. 1,2,4
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    weights: Vec<i64>,
}

impl GroupArgs {
    fn build(&self) -> Result<DiagonalCyclicGroup, CliError> {
        DiagonalCyclicGroup::new(self.p, &self.weights).map_err(domain)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the canonical invariant polynomial, its rank, signature, and
    /// map components
    Canonical {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Check invariance, the hyperplane identity, and non-negativity of a
    /// polynomial under a group
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        /// Polynomial, inline or a file path (text grammar or JSON)
        #[arg(long)]
        poly: String,
    },
    /// Split a polynomial into monomial map components
    Map {
        /// Polynomial, inline or a file path (text grammar or JSON)
        #[arg(long)]
        poly: String,
        /// Number of variables (defaults to the largest index used)
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Apply one tensoring step at a monomial
    Tensor {
        #[command(flatten)]
        group: GroupArgs,
        /// Polynomial to operate on, inline or a file path
        #[arg(long)]
        poly: String,
        /// Target monomial, e.g. "x1^3"
        #[arg(long)]
        at: String,
        /// Fraction of the term to move, in (0, 1]
        #[arg(long, default_value = "1")]
        fraction: String,
    },
    /// Build a trace of exactly the requested rank
    Construct {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "target-rank")]
        target_rank: usize,
        #[arg(long, value_enum)]
        method: Method,
    },
    /// Breadth-first search of achievable ranks
    Spectrum {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "max-depth")]
        max_depth: usize,
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
        /// Comma-separated fractions, e.g. 1,1/2
        #[arg(long, value_delimiter = ',')]
        fractions: Option<Vec<String>>,
        /// Only report ranks inside lo,hi
        #[arg(long = "rank-window", value_delimiter = ',')]
        rank_window: Option<Vec<usize>>,
    },
    /// Replay a script of steps (one `mul <monomial>` or `split <monomial>`
    /// per line) from the canonical polynomial
    Replay {
        #[command(flatten)]
        group: GroupArgs,
        /// Script file path, or `-` for stdin
        #[arg(long)]
        script: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Thm1,
    Thm2,
}

enum CliError {
    /// Semantic failure: exit 1.
    Domain(String),
    /// Malformed input: exit 2.
    Parse(String),
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn parse_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Parse(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Canonical { group } => cmd_canonical(cli, group),
        Command::Verify { group, poly } => cmd_verify(cli, group, poly),
        Command::Map { poly, vars } => cmd_map(cli, poly, *vars),
        Command::Tensor {
            group,
            poly,
            at,
            fraction,
        } => cmd_tensor(cli, group, poly, at, fraction),
        Command::Construct {
            group,
            target_rank,
            method,
        } => cmd_construct(cli, group, *target_rank, *method),
        Command::Spectrum {
            group,
            max_depth,
            max_degree,
            fractions,
            rank_window,
        } => cmd_spectrum(
            cli,
            group,
            *max_depth,
            *max_degree,
            fractions.as_deref(),
            rank_window.as_deref(),
        ),
        Command::Replay { group, script } => cmd_replay(cli, group, script),
    }
}

/// Resolve a polynomial argument: a readable file is loaded, anything else
/// is treated as inline. A first non-blank byte of `{` selects the JSON
/// schema, otherwise the text grammar applies.
fn load_polynomial(input: &str, vars: Option<usize>) -> Result<Polynomial, CliError> {
    let path = Path::new(input);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| CliError::Domain(format!("reading {input}: {e}")))?
    } else {
        input.to_string()
    };
    let poly = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(parse_err)?;
        Polynomial::from_json(&v).map_err(parse_err)?
    } else {
        Polynomial::parse(&text, vars).map_err(parse_err)?
    };
    if let Some(n) = vars {
        if poly.num_vars() != n {
            return Err(CliError::Domain(format!(
                "polynomial has {} variables, the group acts on {n}",
                poly.num_vars()
            )));
        }
    }
    Ok(poly)
}

fn map_components_json(components: &[MapComponent]) -> Result<Value, CliError> {
    let items = components
        .iter()
        .map(|c| {
            Ok(json!({
                "coeff2": rational_json(&c.squared_coeff).map_err(domain)?,
                "exps": c.exponent.exponents(),
                "side": c.side.as_str(),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Value::Array(items))
}

fn map_components_text(components: &[MapComponent]) -> String {
    let mut out = String::new();
    for c in components {
        let coeff2 = if c.squared_coeff.is_integer() {
            c.squared_coeff.numer().to_string()
        } else {
            format!("{}/{}", c.squared_coeff.numer(), c.squared_coeff.denom())
        };
        let _ = writeln!(
            out,
            "  {}  coeff2 = {:<8} coeff ~ {:<14} {}",
            c.side.as_str(),
            coeff2,
            sqrt_display(&c.squared_coeff),
            c.exponent.display_z()
        );
    }
    out
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON serialization cannot fail")
    );
}

fn cmd_canonical(cli: &Cli, group: &GroupArgs) -> Result<(), CliError> {
    let g = group.build()?;
    let res = canonical_polynomial(&g).map_err(domain)?;
    let components = extract_map(&res.f_gamma);
    match cli.format {
        Format::Json => {
            let mut v = res.f_gamma.to_json().map_err(domain)?;
            let obj = v.as_object_mut().expect("polynomial JSON is an object");
            obj.insert("rank".into(), json!(res.n_gamma));
            obj.insert(
                "signature".into(),
                json!([res.signature.n_plus, res.signature.n_minus]),
            );
            obj.insert("map".into(), map_components_json(&components)?);
            print_json(&v);
        }
        Format::Text => {
            if cli.quiet {
                println!("{}", res.f_gamma);
                return Ok(());
            }
            println!("group = {}", g);
            println!("f_gamma = {}", res.f_gamma);
            println!("rank = {}", res.n_gamma);
            println!("signature = {}", res.signature);
            if res.signature.n_minus == 0 {
                println!("target = S^{}", 2 * res.n_gamma - 1);
            }
            println!("map:");
            print!("{}", map_components_text(&components));
        }
    }
    Ok(())
}

fn verification_text(report: &VerificationReport, quiet: bool) -> String {
    let mut out = String::new();
    if quiet {
        let _ = writeln!(out, "{}", report.all_pass());
        return out;
    }
    let _ = writeln!(out, "invariant = {}", report.invariant);
    let _ = writeln!(out, "hyperplane = {}", report.hyperplane);
    let _ = writeln!(out, "nonnegative = {}", report.nonnegative);
    let _ = writeln!(out, "rank = {}", report.rank);
    let _ = writeln!(out, "signature = {}", report.signature);
    match report.sphere_target {
        Some(d) => {
            let _ = writeln!(out, "sphere_target = S^{d}");
        }
        None => {
            let _ = writeln!(out, "sphere_target = none");
        }
    }
    out
}

fn cmd_verify(cli: &Cli, group: &GroupArgs, poly: &str) -> Result<(), CliError> {
    let g = group.build()?;
    let poly = load_polynomial(poly, Some(g.dimension()))?;
    let report = verify_bundle(&g, &poly).map_err(domain)?;
    match cli.format {
        Format::Json => print_json(&report.to_json()),
        Format::Text => print!("{}", verification_text(&report, cli.quiet)),
    }
    Ok(())
}

fn cmd_map(cli: &Cli, poly: &str, vars: Option<usize>) -> Result<(), CliError> {
    let poly = load_polynomial(poly, vars)?;
    let components = extract_map(&poly);
    match cli.format {
        Format::Json => print_json(&json!({
            "map": map_components_json(&components)?,
            "rank": poly.rank(),
        })),
        Format::Text => {
            if !cli.quiet {
                println!("rank = {}", poly.rank());
                println!("map:");
            }
            print!("{}", map_components_text(&components));
        }
    }
    Ok(())
}

fn cmd_tensor(
    cli: &Cli,
    group: &GroupArgs,
    poly: &str,
    at: &str,
    fraction: &str,
) -> Result<(), CliError> {
    let g = group.build()?;
    let res = canonical_polynomial(&g).map_err(domain)?;
    let poly = load_polynomial(poly, Some(g.dimension()))?;
    let target = spheremap::poly::parse::parse_monomial(at, g.dimension()).map_err(parse_err)?;
    let s = spheremap::poly::parse::parse_rational(fraction).map_err(parse_err)?;
    let out = tensor_at(&poly, &target, &s, &res.f_gamma).map_err(domain)?;
    match cli.format {
        Format::Json => {
            let mut v = out.to_json().map_err(domain)?;
            let obj = v.as_object_mut().expect("polynomial JSON is an object");
            obj.insert("rank".into(), json!(out.rank()));
            print_json(&v);
        }
        Format::Text => {
            if cli.quiet {
                println!("{out}");
            } else {
                println!("result = {out}");
                println!("rank = {}", out.rank());
            }
        }
    }
    Ok(())
}

fn trace_text(trace: &ConstructionTrace, quiet: bool) -> String {
    let mut out = String::new();
    if quiet {
        let _ = writeln!(out, "{}", trace.result);
        return out;
    }
    let _ = writeln!(out, "group = {}", trace.group);
    for (i, (step, rank)) in trace
        .steps
        .iter()
        .zip(&trace.rank_after_each_step)
        .enumerate()
    {
        let _ = writeln!(out, "step {}: {} -> rank {}", i + 1, step, rank);
    }
    let _ = writeln!(out, "result = {}", trace.result);
    let _ = writeln!(out, "final rank = {}", trace.final_rank());
    out
}

fn cmd_construct(
    cli: &Cli,
    group: &GroupArgs,
    target_rank: usize,
    method: Method,
) -> Result<(), CliError> {
    let g = group.build()?;
    let trace = match method {
        Method::Thm1 => construct_thm1(&g, target_rank).map_err(domain)?,
        Method::Thm2 => construct_thm2(&g, target_rank).map_err(domain)?,
    };
    match cli.format {
        Format::Json => print_json(&trace.to_json().map_err(domain)?),
        Format::Text => print!("{}", trace_text(&trace, cli.quiet)),
    }
    Ok(())
}

fn cmd_spectrum(
    cli: &Cli,
    group: &GroupArgs,
    max_depth: usize,
    max_degree: Option<u32>,
    fractions: Option<&[String]>,
    rank_window: Option<&[usize]>,
) -> Result<(), CliError> {
    let g = group.build()?;
    let mut config = SearchConfig::new(max_depth);
    config.max_degree = max_degree;
    if let Some(fracs) = fractions {
        let parsed = fracs
            .iter()
            .map(|s| spheremap::poly::parse::parse_rational(s))
            .collect::<Result<Vec<_>, ParseError>>()
            .map_err(parse_err)?;
        config.allowed_fractions = parsed;
    }
    if let Some(window) = rank_window {
        if window.len() != 2 {
            return Err(CliError::Parse("--rank-window takes exactly lo,hi".into()));
        }
        config.rank_window = Some((window[0], window[1]));
    }
    let report = explore_spectrum(&g, &config).map_err(domain)?;
    match cli.format {
        Format::Json => print_json(&report.to_json().map_err(domain)?),
        Format::Text => {
            let ranks: Vec<String> = report
                .achieved_ranks()
                .iter()
                .map(|r| r.to_string())
                .collect();
            println!("achieved ranks: {}", ranks.join(", "));
            if cli.quiet {
                return Ok(());
            }
            for (rank, trace) in &report.achieved {
                let steps: Vec<String> = trace.steps.iter().map(|s| s.to_string()).collect();
                let path = if steps.is_empty() {
                    "(start)".to_string()
                } else {
                    steps.join("; ")
                };
                println!("rank {rank}: {path}");
            }
            let sizes: Vec<String> = report
                .frontier_size_per_level
                .iter()
                .map(|s| s.to_string())
                .collect();
            println!("frontier sizes: {}", sizes.join(", "));
        }
    }
    Ok(())
}

fn cmd_replay(cli: &Cli, group: &GroupArgs, script: &str) -> Result<(), CliError> {
    let g = group.build()?;
    let text = if script == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Domain(format!("reading stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(script)
            .map_err(|e| CliError::Domain(format!("reading {script}: {e}")))?
    };
    let steps = parse_script(&text, g.dimension()).map_err(parse_err)?;
    let states = replay_script(&g, &steps).map_err(domain)?;
    match cli.format {
        Format::Json => {
            let items = states
                .iter()
                .map(|(rank, poly)| {
                    Ok(json!({ "rank": rank, "polynomial": poly.to_json().map_err(domain)? }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            print_json(&json!({ "states": items }));
        }
        Format::Text => {
            if cli.quiet {
                let ranks: Vec<String> = states.iter().map(|(r, _)| r.to_string()).collect();
                println!("{}", ranks.join(", "));
                return Ok(());
            }
            for (i, (rank, poly)) in states.iter().enumerate() {
                if i == 0 {
                    println!("start: rank {rank}  {poly}");
                } else {
                    println!("after {}: rank {rank}  {poly}", step_label(&steps[i - 1]));
                }
            }
        }
    }
    Ok(())
}

fn step_label(step: &spheremap::ScriptStep) -> String {
    let kind = match step.kind {
        spheremap::StepKind::Mul => "mul",
        spheremap::StepKind::Split => "split",
    };
    format!("{kind} {}", step.target)
}
