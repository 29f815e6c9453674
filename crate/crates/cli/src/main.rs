mod output;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frankl_core::{
    find_witness_with, height_decomposition, random_family, render_dot, tent_of, verify_all,
    Error as CoreError, FamilyCensus, SetFamily, WitnessReport, WitnessTrace,
};

use output::{
    emit, fmt_set, CloseResult, DotResult, Envelope, FamilyDoc, HeightResult, LayerOut,
    RandomResult, TentOut, TentsResult,
};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_NOT_CLOSED: u8 = 4;
const EXIT_INVARIANT: u8 = 5;
const EXIT_CONJECTURE: u8 = 6;
const EXIT_VIOLATIONS: u8 = 7;

#[derive(Parser)]
#[command(
    name = "frankl",
    version,
    about = "Analyze union-closed set families: height layers, tents, abundant-element witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close a family of generator sets under unions
    Close(InputArgs),
    /// Peel the family into its height layers
    Height(InputArgs),
    /// Show the tent over every member
    Tents(InputArgs),
    /// Pick an element guaranteed to lie in more than half of the members
    Witness(InputArgs),
    /// Check every union-closed family on a small universe exhaustively
    Verify(VerifyArgs),
    /// Generate a seeded pseudorandom union-closed family
    Random(RandomArgs),
    /// Render the family's Hasse diagram as DOT, ranked by height layer
    Dot(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Family file to read (default: standard input)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Universe size to sweep (1 to 4)
    #[arg(long)]
    n: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct RandomArgs {
    /// Universe size (1 to 64)
    #[arg(long)]
    n: usize,
    /// Number of generator sets to draw
    #[arg(long)]
    gens: usize,
    /// Seed for the deterministic generator stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

enum Failure {
    Io(String, std::io::Error),
    Core(CoreError),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

fn exit_code_for(e: &CoreError) -> u8 {
    match e {
        CoreError::EmptySetLine { .. }
        | CoreError::MalformedToken { .. }
        | CoreError::TooManyElements { .. }
        | CoreError::EmptyFamily
        | CoreError::NoGenerators
        | CoreError::EmptyGenerator { .. } => EXIT_PARSE,
        CoreError::NotUnionClosed { .. } => EXIT_NOT_CLOSED,
        CoreError::ParameterOutOfRange { .. } => EXIT_USAGE,
        CoreError::ConjectureViolation { .. } => EXIT_CONJECTURE,
        CoreError::IndexOutOfRange { .. }
        | CoreError::DecompositionMismatch
        | CoreError::DifferentLayers { .. }
        | CoreError::SameApex
        | CoreError::NoLayerBelow
        | CoreError::Precondition { .. }
        | CoreError::InternalInvariant { .. } => EXIT_INVARIANT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(Failure::Io(what, e)) => {
            eprintln!("frankl: {what}: {e}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Core(e)) => {
            eprintln!("frankl: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(command: Command) -> Result<(String, u8), Failure> {
    match command {
        Command::Close(args) => {
            let f = read_family(&args.input)?;
            Ok((cmd_close(&f, args.format), 0))
        }
        Command::Height(args) => {
            let f = read_family(&args.input)?;
            Ok((cmd_height(&f, args.format)?, 0))
        }
        Command::Tents(args) => {
            let f = read_family(&args.input)?;
            Ok((cmd_tents(&f, args.format)?, 0))
        }
        Command::Witness(args) => {
            let f = read_family(&args.input)?;
            cmd_witness(&f, args.format)
        }
        Command::Verify(args) => cmd_verify(args.n, args.format),
        Command::Random(args) => {
            let f = random_family(args.n, args.gens, args.seed)?;
            Ok((cmd_random(&f, &args), 0))
        }
        Command::Dot(args) => {
            let f = read_family(&args.input)?;
            Ok((cmd_dot(&f, args.format)?, 0))
        }
    }
}

fn read_family(input: &Option<PathBuf>) -> Result<SetFamily, Failure> {
    let text = match input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Failure::Io(path.display().to_string(), e))?,
        None => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| Failure::Io("standard input".into(), e))?;
            buffer
        }
    };
    let (family, report) = SetFamily::parse_with_report(&text)?;
    if report.duplicates_removed > 0 {
        eprintln!(
            "frankl: note: {} duplicate set(s) removed",
            report.duplicates_removed
        );
    }
    Ok(family)
}

fn cmd_close(f: &SetFamily, format: Format) -> String {
    let closed = f.union_closure();
    let added = closed.member_count() - f.member_count();
    match format {
        Format::Human => format!(
            "# union closure: {} generator sets, {} members ({} added)\n{}",
            f.member_count(),
            closed.member_count(),
            added,
            closed
        ),
        Format::Structured => emit(&Envelope {
            command: "close",
            family: Some(FamilyDoc::of(&closed)),
            result: CloseResult {
                generators: f.member_count(),
                added,
            },
        }),
    }
}

fn cmd_height(f: &SetFamily, format: Format) -> Result<String, Failure> {
    let d = height_decomposition(f)?;
    match format {
        Format::Human => {
            let mut out = format!("H = {}\n", d.h());
            for p in 1..=d.h() {
                let sets: Vec<String> = d.layer(p).iter().map(|&i| f.member_display(i)).collect();
                out.push_str(&format!(
                    "layer {p} (height number {}): {}\n",
                    d.h() + 1 - p,
                    sets.join(" ")
                ));
            }
            Ok(out)
        }
        Format::Structured => {
            let layers = (1..=d.h())
                .map(|p| LayerOut {
                    peel: p,
                    height_number: d.h() + 1 - p,
                    members: d.layer(p).iter().map(|&i| f.member_labels(i)).collect(),
                })
                .collect();
            Ok(emit(&Envelope {
                command: "height",
                family: Some(FamilyDoc::of(f)),
                result: HeightResult { h: d.h(), layers },
            }))
        }
    }
}

fn cmd_tents(f: &SetFamily, format: Format) -> Result<String, Failure> {
    let d = height_decomposition(f)?;
    let mut tents = Vec::with_capacity(f.member_count());
    for apex in 0..f.member_count() {
        tents.push(tent_of(f, &d, apex)?);
    }
    match format {
        Format::Human => {
            let mut out = String::new();
            for tent in &tents {
                let base = if tent.base.is_empty() {
                    "empty".to_string()
                } else {
                    tent.base
                        .iter()
                        .map(|&i| f.member_display(i))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                out.push_str(&format!(
                    "T({}): base {base} (size {})\n",
                    f.member_display(tent.apex),
                    tent.size()
                ));
            }
            Ok(out)
        }
        Format::Structured => Ok(emit(&Envelope {
            command: "tents",
            family: Some(FamilyDoc::of(f)),
            result: TentsResult {
                tents: tents
                    .iter()
                    .map(|t| TentOut {
                        apex: f.member_labels(t.apex),
                        base: t.base.iter().map(|&i| f.member_labels(i)).collect(),
                        size: t.size(),
                    })
                    .collect(),
            },
        })),
    }
}

fn cmd_witness(f: &SetFamily, format: Format) -> Result<(String, u8), Failure> {
    let d = height_decomposition(f)?;
    let report = find_witness_with(f, &d)?;
    let code = if report.guaranteed { 0 } else { EXIT_CONJECTURE };
    let text = match format {
        Format::Human => {
            let flag = if report.guaranteed {
                "guaranteed"
            } else {
                "not guaranteed"
            };
            let mut out = format!(
                "element {}, {}/{}, {}, {flag}\n",
                report.element, report.frequency, report.m, report.branch
            );
            for line in trace_lines(&report) {
                out.push_str(&line);
                out.push('\n');
            }
            out
        }
        Format::Structured => emit(&Envelope {
            command: "witness",
            family: Some(FamilyDoc::of(f)),
            result: report,
        }),
    };
    Ok((text, code))
}

fn trace_lines(report: &WitnessReport) -> Vec<String> {
    match &report.trace {
        WitnessTrace::Universe => {
            vec!["trace: the single member is the whole universe".to_string()]
        }
        WitnessTrace::MissesAtMostOne { missing } => {
            vec![format!("trace: missing from {missing} bottom-layer set(s)")]
        }
        WitnessTrace::TentComplement {
            apex,
            tent_size,
            missing_members,
            quotient,
        } => {
            let sets: Vec<String> = missing_members.iter().map(|m| fmt_set(m)).collect();
            let mut lines = vec![format!(
                "trace: the {tent_size} members missing the element form the tent of {}: {}",
                fmt_set(apex),
                sets.join(" ")
            )];
            if quotient.is_some() {
                lines.push("trace: computed after merging inseparable elements".to_string());
            }
            lines
        }
        WitnessTrace::FrequencyScan { quotient } => {
            let mut lines = vec!["trace: frequency scan".to_string()];
            if quotient.is_some() {
                lines.push("trace: computed after merging inseparable elements".to_string());
            }
            lines
        }
        WitnessTrace::MinimalMember { member } => {
            vec![format!("trace: smallest member {}", fmt_set(member))]
        }
        WitnessTrace::ExhaustiveScan => {
            vec!["trace: exhaustive scan, no structural guarantee".to_string()]
        }
    }
}

fn cmd_verify(n: usize, format: Format) -> Result<(String, u8), Failure> {
    let census = verify_all(n)?;
    let code = if census.is_clean() { 0 } else { EXIT_VIOLATIONS };
    let text = match format {
        Format::Human => human_census(&census),
        Format::Structured => emit(&Envelope {
            command: "verify",
            family: None,
            result: census,
        }),
    };
    Ok((text, code))
}

fn human_census(census: &FamilyCensus) -> String {
    let mut out = format!(
        "universe size {}: {} of {} candidates are union-closed and covering\n",
        census.n, census.families, census.candidates
    );
    let buckets: Vec<String> = census
        .buckets
        .iter()
        .map(|b| format!("({},{},{})", b.m, b.h, b.count))
        .collect();
    out.push_str(&format!("buckets (m,H,count): {}\n", buckets.join(" ")));
    let branches: Vec<String> = census
        .branches
        .iter()
        .map(|(b, c)| format!("{b} {c}"))
        .collect();
    out.push_str(&format!("branches: {}\n", branches.join(", ")));
    if census.is_clean() {
        out.push_str("no violations\n");
    } else {
        out.push_str(&format!("violations: {}\n", census.violations.len()));
        for v in &census.violations {
            let family = v.family.trim_end().replace('\n', "; ");
            out.push_str(&format!("- [{}] {} — family: {family}\n", v.check, v.detail));
        }
    }
    out
}

fn cmd_random(f: &SetFamily, args: &RandomArgs) -> String {
    match args.format {
        Format::Human => format!(
            "# random family: n={}, {} generators, seed {}\n{}",
            args.n, args.gens, args.seed, f
        ),
        Format::Structured => emit(&Envelope {
            command: "random",
            family: Some(FamilyDoc::of(f)),
            result: RandomResult {
                n: args.n,
                generators: args.gens,
                seed: args.seed,
            },
        }),
    }
}

fn cmd_dot(f: &SetFamily, format: Format) -> Result<String, Failure> {
    let d = height_decomposition(f)?;
    let dot = render_dot(f, &d)?;
    match format {
        Format::Human => Ok(dot),
        Format::Structured => Ok(emit(&Envelope {
            command: "dot",
            family: Some(FamilyDoc::of(f)),
            result: DotResult { dot },
        })),
    }
}
