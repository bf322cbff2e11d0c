//! `depth2-kit`: batch front end to depth2-core.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use depth2_core::duality::{canonical_frame, complex_algebra, AlgebraFile};
use depth2_core::frames::{enumerate_frames, FrameFile, WorldSet};
use depth2_core::logic::{axiom, axiom_name, meet_axiom};
use depth2_core::semantics::{eval_in_model, frame_validates, Budget, Valuation};
use depth2_core::verify::{run_all, run_suite, VerifyParams};
use depth2_core::{EnumConstraints, Error, Formula, Frame, FrameCondition, Verdict};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "depth2-kit", version, about = "Finite closure algebras of depth two and their frames")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print it in normal form.
    Parse { formula: String },
    /// Frame queries.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Algebra queries.
    #[command(subcommand)]
    Alg(AlgCommand),
    /// Duality maps between frame and algebra files.
    #[command(subcommand)]
    Dual(DualCommand),
    /// List frames up to isomorphism.
    Enum {
        #[arg(long)]
        worlds: usize,
        #[arg(long)]
        quasiorder: bool,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Evaluate a formula in a model, or check frame validity without a valuation.
    Eval {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        formula: String,
        /// JSON object from variable names to world lists, inline or as a file path.
        #[arg(long)]
        valuation: Option<String>,
    },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = VerifyParams::default().atoms)]
        atoms: usize,
        #[arg(long, default_value_t = VerifyParams::default().worlds)]
        worlds: usize,
    },
    /// Print the meet formula of two formulas or catalog axioms.
    MeetAxiom { first: String, second: String },
}

#[derive(Subcommand)]
enum FrameCommand {
    /// Check a frame condition or the validity of a catalog axiom.
    Check {
        file: PathBuf,
        #[arg(long, conflicts_with = "axiom", required_unless_present = "axiom")]
        condition: Option<String>,
        #[arg(long)]
        axiom: Option<String>,
    },
    /// Cluster poset, depth and extremal shapes.
    Classify { file: PathBuf },
}

#[derive(Subcommand)]
enum AlgCommand {
    /// Family labels, irreducibility and closed elements.
    Classify { file: PathBuf },
}

#[derive(Subcommand)]
enum DualCommand {
    /// Complex algebra of a frame file.
    Cm {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Canonical frame of an algebra file.
    Ult {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(Error::Budget { .. } | Error::Size { .. }) => 3,
            _ => 2,
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn budget() -> Result<Budget, Failure> {
    match std::env::var("D2_BUDGET") {
        Ok(text) => text
            .trim()
            .parse()
            .map(Budget::new)
            .map_err(|_| Failure::Usage(format!("D2_BUDGET must be a non-negative integer, got `{text}`"))),
        Err(_) => Ok(Budget::DEFAULT),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_frame(path: &Path) -> Result<Frame, Failure> {
    Ok(Frame::from_file(&read_json::<FrameFile>(path)?)?)
}

fn parse_formula(text: &str) -> Result<Formula, Failure> {
    Formula::parse(text).map_err(|e| Failure::Core(e.into()))
}

/// A catalog name if it is one, otherwise formula text.
fn formula_or_axiom(text: &str) -> Result<Formula, Failure> {
    match axiom_name(text) {
        Ok(_) => Ok(axiom(text)?),
        Err(_) => parse_formula(text),
    }
}

fn worlds(set: WorldSet) -> Vec<usize> {
    (0..32).filter(|i| set >> i & 1 == 1).collect()
}

fn valuation_json(v: &Valuation) -> Value {
    json!(v.iter().map(|(k, &s)| (k.clone(), json!(worlds(s)))).collect::<BTreeMap<_, _>>())
}

fn valuation_text(v: &Valuation) -> String {
    v.iter()
        .map(|(k, &s)| format!("{k} = {:?}", worlds(s)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn write_out(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let json_out = cli.format == Format::Json;
    match cli.command {
        Command::Parse { formula } => {
            let f = parse_formula(&formula)?;
            if json_out {
                print_json(&json!({
                    "formula": f.to_string(),
                    "variables": f.variables(),
                    "size": f.size(),
                    "depth": f.depth(),
                }));
            } else {
                println!("{f}");
            }
            Ok(true)
        }
        Command::Frame(FrameCommand::Check { file, condition, axiom: name }) => {
            let frame = read_frame(&file)?;
            if let Some(cond) = condition {
                let cond: FrameCondition = cond.parse()?;
                let verdict = frame.condition(cond)?;
                if json_out {
                    print_json(&json!({
                        "condition": cond.name(),
                        "holds": verdict.holds(),
                        "witness": verdict.witness(),
                    }));
                } else {
                    match verdict.witness() {
                        None => println!("{cond}: holds"),
                        Some(w) => println!("{cond}: fails at worlds {w:?}"),
                    }
                }
                return Ok(verdict.holds());
            }
            let name = name.expect("clap enforces one of --condition and --axiom");
            let formula = axiom(&name)?;
            let verdict = frame_validates(&frame, &formula, budget()?)?;
            report_validity(&format!("{} ({formula})", axiom_name(&name)?), &verdict, json_out);
            Ok(verdict.holds())
        }
        Command::Frame(FrameCommand::Classify { file }) => {
            let frame = read_frame(&file)?;
            let shapes = frame.classify_extremal();
            let poset = frame.is_quasiorder().then(|| frame.cluster_poset()).transpose()?;
            if json_out {
                print_json(&json!({
                    "quasiorder": frame.is_quasiorder(),
                    "clusters": poset.as_ref().map(|p| p.clusters.iter().map(|&c| worlds(c)).collect::<Vec<_>>()),
                    "levels": poset.as_ref().map(|p| p.levels.clone()),
                    "depth": poset.as_ref().map(|p| p.depth),
                    "extremal": shapes.iter().map(|m| json!({
                        "kind": m.kind.name(), "u": worlds(m.u), "v": worlds(m.v),
                    })).collect::<Vec<_>>(),
                }));
            } else {
                println!("{frame}");
                match &poset {
                    None => println!("not a quasiorder"),
                    Some(p) => {
                        println!("depth {}", p.depth);
                        for (c, members) in p.clusters.iter().enumerate() {
                            let above: Vec<usize> =
                                (0..p.clusters.len()).filter(|&d| d != c && p.order[c] >> d & 1 == 1).collect();
                            println!(
                                "  cluster {c} {:?} level {} sees {above:?}",
                                worlds(*members),
                                p.levels[c]
                            );
                        }
                    }
                }
                if shapes.is_empty() {
                    println!("extremal: none");
                }
                for m in &shapes {
                    println!("extremal: {} U = {:?} V = {:?}", m.kind, worlds(m.u), worlds(m.v));
                }
            }
            Ok(true)
        }
        Command::Alg(AlgCommand::Classify { file }) => {
            let alg = read_json::<AlgebraFile>(&file)?.to_algebra()?;
            let labels = alg.classify();
            let irreducibility = alg.irreducibility()?;
            let closed: Vec<String> = alg.closed_elements().iter().map(|c| c.to_string()).collect();
            if json_out {
                print_json(&json!({
                    "closure": alg.is_closure(),
                    "labels": labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                    "subdirectly_irreducible": irreducibility.is_si(),
                    "simple": irreducibility.is_simple(),
                    "least_closed": irreducibility.witness.map(|w| w.to_string()),
                    "closed_elements": closed,
                }));
            } else {
                println!("{alg}");
                println!("closure operator: {}", alg.is_closure());
                let names: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
                println!("labels: {}", if names.is_empty() { "none".into() } else { names.join(", ") });
                println!("{irreducibility}");
                println!("closed elements: {}", closed.join(" "));
            }
            Ok(true)
        }
        Command::Dual(DualCommand::Cm { file, output }) => {
            let alg = complex_algebra(&read_frame(&file)?)?;
            let text = serde_json::to_string_pretty(&AlgebraFile::from_algebra(&alg)).expect("serializable");
            write_out(&text, output.as_deref())?;
            Ok(true)
        }
        Command::Dual(DualCommand::Ult { file, output }) => {
            let alg = read_json::<AlgebraFile>(&file)?.to_algebra()?;
            let frame = canonical_frame(&alg)?;
            let text = serde_json::to_string_pretty(&frame.to_file()).expect("serializable");
            write_out(&text, output.as_deref())?;
            Ok(true)
        }
        Command::Enum { worlds: n, quasiorder, max_depth } => {
            let frames = enumerate_frames(n, EnumConstraints { quasiorder, max_depth })?;
            if json_out {
                print_json(&json!(frames.iter().map(|f| f.to_file()).collect::<Vec<_>>()));
            } else {
                for f in &frames {
                    println!("{f}");
                }
                println!("{} frames", frames.len());
            }
            Ok(true)
        }
        Command::Eval { frame, formula, valuation } => {
            let frame = read_frame(&frame)?;
            let formula = formula_or_axiom(&formula)?;
            match valuation {
                Some(text) => {
                    let v = parse_valuation(&text, frame.n_worlds())?;
                    let truth = eval_in_model(&frame, &v, &formula)?;
                    if json_out {
                        print_json(&json!({ "formula": formula.to_string(), "worlds": worlds(truth) }));
                    } else {
                        println!("{formula}: {:?}", worlds(truth));
                    }
                    Ok(true)
                }
                None => {
                    let verdict = frame_validates(&frame, &formula, budget()?)?;
                    report_validity(&formula.to_string(), &verdict, json_out);
                    Ok(verdict.holds())
                }
            }
        }
        Command::Verify { suite, atoms, worlds } => {
            let params = VerifyParams { atoms, worlds };
            let reports = match suite {
                Some(name) => vec![run_suite(&name, params)?],
                None => run_all(params)?,
            };
            if json_out {
                let value = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
                print_json(&value);
            } else {
                for r in &reports {
                    print!("{r}");
                }
            }
            Ok(reports.iter().all(|r| r.passed()))
        }
        Command::MeetAxiom { first, second } => {
            let meet = meet_axiom(&formula_or_axiom(&first)?, &formula_or_axiom(&second)?);
            if json_out {
                print_json(&json!({ "formula": meet.to_string() }));
            } else {
                println!("{meet}");
            }
            Ok(true)
        }
    }
}

fn report_validity(label: &str, verdict: &Verdict<Valuation>, json_out: bool) {
    if json_out {
        print_json(&json!({
            "formula": label,
            "valid": verdict.holds(),
            "falsifying_valuation": verdict.witness().map(valuation_json),
        }));
    } else {
        match verdict.witness() {
            None => println!("{label}: valid"),
            Some(v) => println!("{label}: refuted by {}", valuation_text(v)),
        }
    }
}

fn parse_valuation(text: &str, n_worlds: usize) -> Result<Valuation, Failure> {
    let source = if Path::new(text).is_file() {
        fs::read_to_string(text).map_err(|e| Failure::Usage(format!("{text}: {e}")))?
    } else {
        text.to_string()
    };
    let raw: BTreeMap<String, Vec<usize>> =
        serde_json::from_str(&source).map_err(|e| Failure::Usage(format!("valuation: {e}")))?;
    raw.into_iter()
        .map(|(name, ws)| {
            let mut set: WorldSet = 0;
            for w in ws {
                if w >= n_worlds {
                    return Err(Failure::Usage(format!("valuation of `{name}` names world {w}, frame has {n_worlds}")));
                }
                set |= 1 << w;
            }
            Ok((name, set))
        })
        .collect()
}
