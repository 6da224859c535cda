use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use realbott::action::{action_profile, effective_element, fixed_components};
use realbott::classifier::{
    classify, family_members, known_class_count, verify_table, ClassifyOptions, FamilySpec,
};
use realbott::equivalence::{equivalent, orbit};
use realbott::{block_type, normal_form, BottMatrix, ClassificationReport, FixedPointProfile};

mod cache;
mod text;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] realbott::Error),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Usage(_) => "Usage",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Real Bott manifolds: normal forms, fixed points and classification.
#[derive(Debug, Parser)]
#[command(name = "realbott", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify every Bott matrix of one size into diffeomorphism classes.
    Classify {
        #[arg(long)]
        dim: usize,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Read the report from this file if valid, otherwise write it there.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Check every matrix's invariant key, not only for small sizes.
        #[arg(long)]
        audit: bool,
    },
    /// List the class of a matrix.
    Orbit {
        #[arg(long)]
        input: PathBuf,
    },
    /// Decide whether two matrices give diffeomorphic manifolds.
    Equivalent {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Append pairs with equal invariants but different classes here.
        #[arg(long)]
        audit_log: Option<PathBuf>,
    },
    /// Seifert normal form (k, s, C, B).
    NormalForm {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fixed-point sets of the effective group acting on the base.
    FixedPoints {
        #[arg(long)]
        input: PathBuf,
        /// Element of the effective group, as a bit vector over the basis of
        /// the row space of C (bit 0 = first basis row).
        #[arg(long, value_parser = parse_bitmask)]
        element: Option<u32>,
    },
    /// Check the built-in reference class lists (sizes 2 to 4).
    Verify {
        #[arg(long)]
        dim: usize,
    },
    /// Count the classes meeting a family.
    Family {
        #[arg(long)]
        dim: usize,
        /// One of: corank-le-2, circle-over-circle-torus, circle-over-torus-t2,
        /// circle-over-torus-klein, torus-over-torus:K, circle-over-chain:K.
        #[arg(long)]
        spec: String,
    },
}

fn parse_bitmask(s: &str) -> Result<u32, String> {
    let parsed = if let Some(bin) = s.strip_prefix("0b") {
        u32::from_str_radix(bin, 2)
    } else if let Some(hex) = s.strip_prefix("0x") {
        u32::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| format!("`{s}` is not a bit mask (decimal, 0b.. or 0x..)"))
}

fn read_matrix(path: &Path) -> Result<BottMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(BottMatrix::parse(&text)?)
}

/// Command output: JSON value plus its text rendering.
struct Output {
    json: Value,
    text: String,
    /// Exit code for a successful run that still reports a problem.
    code: u8,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output serializes")
}

fn classify_report(
    dim: usize,
    jobs: usize,
    cache_path: Option<&Path>,
    audit: bool,
) -> Result<ClassificationReport, CliError> {
    if let Some(path) = cache_path {
        if let Some(report) = cache::load(path, dim) {
            // a cache never overrides a known count
            if known_class_count(dim).is_none_or(|c| c == report.class_count) {
                return Ok(report);
            }
        }
    }
    let report = classify(dim, ClassifyOptions { jobs, audit })?.report;
    if let Some(path) = cache_path {
        cache::store(path, &report)?;
    }
    Ok(report)
}

fn run(command: Command) -> Result<Output, CliError> {
    let out = match command {
        Command::Classify {
            dim,
            jobs,
            cache,
            audit,
        } => {
            let report = classify_report(dim, jobs, cache.as_deref(), audit)?;
            Output {
                text: text::classification(&report),
                json: to_value(&report),
                code: 0,
            }
        }
        Command::Orbit { input } => {
            let a = read_matrix(&input)?;
            let members: Vec<BottMatrix> = orbit(&a).into_iter().collect();
            let json = json!({
                "n": a.size(),
                "representative": members[0],
                "size": members.len(),
                "members": members,
            });
            Output {
                text: text::orbit(&members),
                json,
                code: 0,
            }
        }
        Command::Equivalent { a, b, audit_log } => {
            let (x, y) = (read_matrix(&a)?, read_matrix(&b)?);
            let verdict = equivalent(&x, &y)?;
            if let (Some(path), Some(record)) = (audit_log, &verdict.audit) {
                let io = |e: std::io::Error| CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                };
                let mut file = fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(io)?;
                let line = serde_json::to_string(record).expect("record serializes");
                writeln!(file, "{line}").map_err(io)?;
            }
            Output {
                text: text::verdict(&verdict),
                json: to_value(&verdict),
                code: 0,
            }
        }
        Command::NormalForm { input } => {
            let a = read_matrix(&input)?;
            let sf = normal_form(&a);
            let mut json = to_value(&sf);
            json["block_type"] = to_value(&block_type(sf.base()).sizes());
            Output {
                text: text::normal_form(&sf),
                json,
                code: 0,
            }
        }
        Command::FixedPoints { input, element } => fixed_points(&read_matrix(&input)?, element)?,
        Command::Verify { dim } => {
            let report = verify_table(&classify(dim, ClassifyOptions::default())?)?;
            Output {
                text: text::table(&report),
                code: if report.ok { 0 } else { 2 },
                json: to_value(&report),
            }
        }
        Command::Family { dim, spec } => {
            let family: FamilySpec = spec.parse()?;
            let members = family_members(&classify(dim, ClassifyOptions::default())?, &family)?;
            let json = json!({
                "n": dim,
                "spec": family.to_string(),
                "count": members.len(),
                "representatives": members,
            });
            Output {
                text: text::family(&family, dim, &members),
                json,
                code: 0,
            }
        }
    };
    Ok(out)
}

fn fixed_points(a: &BottMatrix, element: Option<u32>) -> Result<Output, CliError> {
    let sf = normal_form(a);
    let blocks = block_type(sf.base());
    let selectors: Vec<u32> = match element {
        Some(0) => {
            return Err(CliError::Usage(
                "element 0 is the identity; choose a nontrivial element".into(),
            ))
        }
        Some(e) => vec![e],
        None => (1..1u32 << sf.s()).collect(),
    };
    let mut elements = Vec::new();
    for sel in selectors {
        let action = effective_element(&sf, sel)?;
        let components = fixed_components(&action, sf.base(), &blocks)?;
        let profile = FixedPointProfile::from_components(&components);
        elements.push(json!({
            "element": sel,
            "action": action,
            "profile": profile,
            "components": components,
        }));
    }
    let basis: Vec<String> = sf
        .effective_basis()
        .iter()
        .map(|&r| {
            (0..sf.base_size())
                .map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect();
    let mut json = json!({
        "k": sf.k(),
        "s": sf.s(),
        "B": sf.base().to_text(),
        "block_type": blocks.sizes(),
        "basis": basis,
        "elements": elements,
    });
    if element.is_none() {
        let aggregate = action_profile(&sf)?.aggregate();
        json["aggregate"] = to_value(&aggregate);
    }
    Ok(Output {
        text: text::fixed_points(&json),
        json,
        code: 0,
    })
}

fn fail(err: &CliError) -> ExitCode {
    let body = json!({ "error": err.kind(), "message": err.to_string() });
    eprintln!("{body}");
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim_end().to_owned())),
    };
    match run(cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("output serializes")
                ),
                Format::Text => print!("{}", out.text),
            }
            ExitCode::from(out.code)
        }
        Err(e) => fail(&e),
    }
}
