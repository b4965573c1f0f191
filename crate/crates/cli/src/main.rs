use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use cdvblow::blowup::{default_max_coord, enumerate_weights, touches_boundary};
use cdvblow::newton::{build_diagram, check_nondegeneracy, NondegVerdict};
use cdvblow::normalform::{default_truncation, reduce_to_normal_form, SingularityType};
use cdvblow::theorems::{
    analyze, candidate_weights, compare_with_catalog, lemma_quadruples, run_corpus, Analysis, AnalyzeOptions, Summary,
    DEFAULT_BOUND,
};
use cdvblow::{parse_polynomial, Poly};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "cdvblow", version, about = "Discrepancy-one weighted blowups of cDV threefold points")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct InputArgs {
    /// file holding the polynomial (`-` for standard input)
    #[arg(long)]
    input: PathBuf,
    /// truncation degree for coordinate changes
    #[arg(long)]
    truncation: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Singularity type of the equation
    Classify(InputArgs),
    /// Newton diagram and non-degeneracy of each face
    Diagram(InputArgs),
    /// Weights whose blowup has a discrepancy-one divisor
    Weights {
        #[command(flatten)]
        input: InputArgs,
        /// box bound for the weight search
        #[arg(long)]
        max_weight: Option<u64>,
    },
    /// Full divisor report with the uniqueness summary
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        max_weight: Option<u64>,
    },
    /// Quadruples and catalog weights for a type
    Lemmas {
        /// cD:N, cE6, cE7 or cE8
        #[arg(long = "type", value_parser = parse_type)]
        kind: SingularityType,
        /// largest m scanned
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
    },
    /// Run the generated normal-form corpus
    Corpus,
}

fn parse_type(s: &str) -> Result<SingularityType, String> {
    match s {
        "cE6" => Ok(SingularityType::CE6),
        "cE7" => Ok(SingularityType::CE7),
        "cE8" => Ok(SingularityType::CE8),
        _ => {
            let n = s
                .strip_prefix("cD:")
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| format!("expected cD:N, cE6, cE7 or cE8, got {s:?}"))?;
            if n < 4 {
                return Err(format!("cD:N needs N >= 4, got {n}"));
            }
            Ok(SingularityType::CD(n))
        }
    }
}

/// Problems with what the user supplied (exit status 2).
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read_polynomial(args: &InputArgs) -> Result<(String, Poly)> {
    let text = if args.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        std::fs::read_to_string(&args.input)
            .map_err(|e| input_error(format!("cannot read {}: {e}", args.input.display())))?
    };
    let source = text.trim().to_string();
    let f = parse_polynomial(&source).map_err(|e| input_error(format!("{}: {e}", args.input.display())))?;
    if f.is_zero() {
        return Err(input_error("the polynomial is zero"));
    }
    if f.terms().any(|(e, _)| e.degree() == 0) {
        return Err(input_error(format!("nonzero constant term {}: the origin is not on the hypersurface", f.constant_term())));
    }
    Ok((source, f))
}

struct Output {
    json: Value,
    text: String,
    status: u8,
}

fn envelope(command: &str, input: Option<&str>, seed: u64, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("command bodies are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    obj.insert("input".into(), json!(input));
    obj.insert("seed".into(), json!(seed));
    body
}

fn classify(args: &InputArgs, seed: u64) -> Result<Output> {
    let (src, f) = read_polynomial(args)?;
    let tr = args.truncation.unwrap_or_else(|| default_truncation(&f));
    let cert = reduce_to_normal_form(&f, tr).map_err(|e| anyhow!(e))?;
    let text = format!("type: {}\nnormal form: {}\n", cert.kind, cert.reduced);
    let json = envelope("classify", Some(&src), seed, json!({ "type": cert.kind, "normal_form": cert }));
    Ok(Output { json, text, status: 0 })
}

fn diagram(args: &InputArgs, seed: u64) -> Result<Output> {
    let (src, f) = read_polynomial(args)?;
    let d = build_diagram(&f)?;
    let verdicts = check_nondegeneracy(&d, seed);
    let overall = NondegVerdict::worst(verdicts.iter().map(|v| &v.verdict));
    let mut text = String::new();
    let vs: Vec<String> = d.vertices.iter().map(|v| format!("{v:?}")).collect();
    writeln!(text, "vertices: {}", vs.join(" "))?;
    for v in &verdicts {
        writeln!(text, "face dim {} : {} : {}", v.dimension, v.face_polynomial, v.verdict)?;
    }
    writeln!(text, "non-degeneracy: {overall}")?;
    let json = envelope(
        "diagram",
        Some(&src),
        seed,
        json!({ "diagram": { "vertices": d.vertices, "faces": d.faces, "nondegeneracy": overall, "face_verdicts": verdicts } }),
    );
    Ok(Output { json, text, status: 0 })
}

fn weights(args: &InputArgs, max_weight: Option<u64>, seed: u64) -> Result<Output> {
    let (src, f) = read_polynomial(args)?;
    let d = build_diagram(&f)?;
    let max = max_weight.unwrap_or_else(|| default_max_coord(&d));
    let list = enumerate_weights(&d, max);
    let touched = touches_boundary(&list, max);
    let mut text = String::new();
    for w in &list {
        writeln!(text, "{w}")?;
    }
    writeln!(text, "{} weights (bound {max}{})", list.len(), if touched { ", reached" } else { "" })?;
    let json = envelope(
        "weights",
        Some(&src),
        seed,
        json!({ "weights": { "max_coord": max, "boundary_touched": touched, "list": list } }),
    );
    Ok(Output { json, text, status: 0 })
}

fn analysis_text(a: &Analysis) -> Result<String> {
    let mut t = String::new();
    writeln!(t, "type: {}", a.kind)?;
    writeln!(t, "analyzed equation: {}", a.analyzed)?;
    writeln!(t, "non-degeneracy: {}", a.diagram.nondegeneracy)?;
    writeln!(t, "weights ({}): {}", a.weights.list.len(), a.weights.list.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "))?;
    for r in &a.divisors {
        write!(t, "  {} [{}] m={} a={} {}", r.weight, r.component, r.multiplicity, r.discrepancy, r.verdict)?;
        if let Some(g) = r.genus {
            write!(t, " genus={g}")?;
        }
        if let Some(h) = r.hyperelliptic {
            write!(t, " hyperelliptic={h}")?;
        }
        writeln!(t, " ({})", r.rule)?;
    }
    let s = &a.summary;
    writeln!(
        t,
        "non-rational discrepancy-one divisors: {}{}",
        s.non_rational,
        if s.theorem_violation { " (THEOREM VIOLATION)" } else { "" }
    )?;
    for w in &a.warnings {
        writeln!(t, "warning: {w}")?;
    }
    Ok(t)
}

/// Exit status of an analysis: 3 flags a uniqueness violation.
fn analysis_status(s: &Summary) -> u8 {
    if s.theorem_violation {
        3
    } else {
        0
    }
}

fn analyze_cmd(args: &InputArgs, max_weight: Option<u64>, seed: u64) -> Result<Output> {
    let (src, f) = read_polynomial(args)?;
    let opts = AnalyzeOptions { truncation: args.truncation, max_coord: max_weight, seed };
    let a = analyze(&f, &opts)?;
    let text = analysis_text(&a)?;
    let status = analysis_status(&a.summary);
    let json = envelope(
        "analyze",
        Some(&src),
        seed,
        json!({
            "type": a.kind,
            "normal_form": a.normal_form,
            "analyzed": a.analyzed,
            "diagram": a.diagram,
            "weights": a.weights,
            "divisors": a.divisors,
            "summary": a.summary,
            "warnings": a.warnings,
        }),
    );
    Ok(Output { json, text, status })
}

fn lemmas(kind: SingularityType, bound: u64, seed: u64) -> Result<Output> {
    let qs = lemma_quadruples(kind, bound);
    let cmp = compare_with_catalog(kind, bound);
    let mut text = format!("{kind}: {} quadruples\n", qs.len());
    for q in &qs {
        writeln!(text, "  {q}  m={}  weight {}", q.m, q.derived_weight)?;
    }
    let cat: Vec<String> = candidate_weights(kind).iter().map(|w| w.to_string()).collect();
    writeln!(text, "catalog: {}", cat.join(" "))?;
    for w in &cmp.unlisted {
        writeln!(text, "warning: derived weight {w} is not in the catalog")?;
    }
    for w in &cmp.underived {
        writeln!(text, "warning: catalog weight {w} is not derived from any quadruple")?;
    }
    let json = envelope(
        "lemmas",
        None,
        seed,
        json!({ "type": kind, "bound": bound, "quadruples": qs, "candidate_weights": candidate_weights(kind), "comparison": cmp }),
    );
    Ok(Output { json, text, status: 0 })
}

fn corpus(seed: u64) -> Result<Output> {
    let r = run_corpus(seed);
    let mut text = String::new();
    for o in &r.outcomes {
        let ws: Vec<String> = o.non_rational_weights.iter().map(|w| w.to_string()).collect();
        writeln!(text, "{} +{} #{}: non-rational [{}] genera {:?}", o.instance.kind, o.instance.offset, o.instance.draw, ws.join(" "), o.genera)?;
    }
    writeln!(
        text,
        "{} instances, {} degenerate, max non-rational per instance {}, {} theorem violations, {} genus-bound violations",
        r.instances, r.degenerate_instances, r.max_non_rational, r.theorem_violations, r.genus_bound_violations
    )?;
    let status = if r.theorem_violations > 0 { 3 } else { 0 };
    let json = envelope("corpus", None, seed, json!({ "corpus": r }));
    Ok(Output { json, text, status })
}

fn run(cli: &Cli) -> Result<Output> {
    let seed = cli.seed;
    match &cli.command {
        Command::Classify(a) => classify(a, seed),
        Command::Diagram(a) => diagram(a, seed),
        Command::Weights { input, max_weight } => weights(input, *max_weight, seed),
        Command::Analyze { input, max_weight } => analyze_cmd(input, *max_weight, seed),
        Command::Lemmas { kind, bound } => {
            if *bound == 0 {
                return Err(input_error("--bound must be positive"));
            }
            lemmas(*kind, *bound, seed)
        }
        Command::Corpus => corpus(seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable report") + "\n",
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().write_all(rendered.as_bytes());
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
