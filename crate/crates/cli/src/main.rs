//! `slidebij`: count, enumerate, convert and check slide trees.
//!
//! Exit codes: 0 success, 1 a labeling or verification failed, 2 input
//! could not be parsed, 3 input parsed but is not valid for the request.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use slidebij::bijection::{tree_of_word, word_of};
use slidebij::caterpillar::{caterpillar_member, enumerate_caterpillar_words};
use slidebij::compositions::{asym_multinomial, is_reverse_catalan, multinomial};
use slidebij::ones_case::{phi, rho};
use slidebij::parking::{cpf_to_slide, enumerate_cpf, ParkingFunction};
use slidebij::patterns::{enumerate_avoiders, Pattern};
use slidebij::slide_rules::{LabelingOutcome, SlideLabeling};
use slidebij::trees::parse_labeled_tree;
use slidebij::verify::{run_suite, Fault, Suite};
use slidebij::{enumerate_slide_set, slide_labeling, Composition, SlideRule, StableTree, Word};

const SCHEMA: u32 = 1;
const DEFAULT_MAX_N: usize = 7;

#[derive(Parser)]
#[command(name = "slidebij", version, about = "Slide trees, column-restricted parking functions and the bijections between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the objects attached to a composition.
    Count {
        /// Comma-separated parts, or `-` for standard input.
        comp: String,
        #[arg(long, value_enum, default_value_t = Method::Recursion)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the members of a set in canonical order.
    Enumerate {
        comp: String,
        #[arg(long, value_enum)]
        set: Set,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Convert between parking functions, words, trees and permutations.
    Map {
        #[arg(long, value_enum)]
        from: Repr,
        #[arg(long, value_enum)]
        to: Repr,
        /// The object to convert, or `-` for standard input.
        #[arg(long)]
        input: String,
        /// Composition of an unlabeled input tree.
        #[arg(long)]
        comp: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the labeling algorithm on a tree.
    Label {
        /// Tree text such as `(a,b,(c,1))`, or `-` for standard input.
        tree: String,
        #[arg(long)]
        comp: String,
        #[arg(long, value_enum, default_value_t = Rule::Omega)]
        rule: Rule,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify a word: its content, its ω slide tree and caterpillar membership.
    Word {
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Words of a given content avoiding patterns such as `23-1` or `23-~2-1`.
    Avoid {
        comp: String,
        #[arg(long = "pattern", required = true)]
        patterns: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the counting, bijection and structural identities exhaustively.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Deliberately break the labeling comparison to test the harness.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Recursion,
    SlideOmega,
    SlidePsi,
    Cpf,
    Multinomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Set {
    SlideOmega,
    SlidePsi,
    Cpf,
    CatWordsPsi,
    CatWordsOmega,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Repr {
    Cpf,
    Word,
    Tree,
    Perm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Psi,
    Omega,
}

impl From<Rule> for SlideRule {
    fn from(r: Rule) -> SlideRule {
        match r {
            Rule::Psi => SlideRule::Psi,
            Rule::Omega => SlideRule::Omega,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line, each carrying `"schema"`.
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Counts,
    Bijection,
    Caterpillar,
    Ones,
    Structure,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Bijection => Suite::Bijection,
            SuiteArg::Caterpillar => Suite::Caterpillar,
            SuiteArg::Ones => Suite::Ones,
            SuiteArg::Structure => Suite::Structure,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipComparison,
}

enum CliError {
    /// Exit 1, after printing the report.
    Failed,
    Parse(String),
    Invalid(String),
    /// Stdout went away, as in `slidebij ... | head`.
    Closed,
    Io(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_err(e: impl ToString) -> CliError {
    CliError::Parse(e.to_string())
}

fn write_err(e: io::Error) -> CliError {
    match e.kind() {
        io::ErrorKind::BrokenPipe => CliError::Closed,
        _ => CliError::Io(e.to_string()),
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

/// The argument itself, or standard input when it is `-`.
fn read_arg(arg: &str) -> Result<String> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(parse_err)?;
    Ok(s.trim().to_string())
}

fn composition(arg: &str) -> Result<Composition> {
    read_arg(arg)?.parse().map_err(parse_err)
}

fn balanced(arg: &str) -> Result<Composition> {
    let k = composition(arg)?;
    k.check_balanced().map_err(invalid)?;
    Ok(k)
}

fn max_n() -> Result<usize> {
    match std::env::var("SLIDEBIJ_MAX_N") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("SLIDEBIJ_MAX_N={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn guard(n: usize) -> Result<()> {
    let cap = max_n()?;
    if n > cap {
        return Err(CliError::Invalid(format!("n = {n} exceeds the limit {cap}; raise SLIDEBIJ_MAX_N to allow it")));
    }
    Ok(())
}

/// A JSON number when it fits, a string of digits otherwise.
fn count_value(c: &BigUint) -> Value {
    match c.to_u64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

struct Out {
    stdout: io::StdoutLock<'static>,
    format: Format,
}

impl Out {
    fn new(format: Format) -> Out {
        Out { stdout: io::stdout().lock(), format }
    }

    fn record(&mut self, text: &str, mut value: Value) -> Result<()> {
        let line = match self.format {
            Format::Json => {
                value.as_object_mut().expect("records are objects").insert("schema".into(), json!(SCHEMA));
                value.to_string()
            }
            _ => text.to_string(),
        };
        writeln!(self.stdout, "{line}").map_err(write_err)
    }

    fn raw(&mut self, text: &str) -> Result<()> {
        writeln!(self.stdout, "{text}").map_err(write_err)
    }
}

fn labeled_tree(tree: &StableTree, k: &Composition, rule: SlideRule) -> Option<SlideLabeling> {
    slide_labeling(tree, k, rule).ok()?.into_labeling()
}

fn no_dot(format: Format, what: &str) -> Result<()> {
    if format == Format::Dot {
        return Err(CliError::Parse(format!("--format dot applies to trees, not {what}")));
    }
    Ok(())
}

fn cmd_count(comp: &str, method: Method, format: Format) -> Result<()> {
    no_dot(format, "counts")?;
    let k = composition(comp)?;
    let value = match method {
        Method::Multinomial => multinomial(&k),
        Method::Recursion => asym_multinomial(&k).map_err(invalid)?,
        Method::SlideOmega | Method::SlidePsi | Method::Cpf => {
            k.check_balanced().map_err(invalid)?;
            guard(k.len())?;
            let len = match method {
                Method::SlideOmega => enumerate_slide_set(&k, SlideRule::Omega).map_err(invalid)?.len(),
                Method::SlidePsi => enumerate_slide_set(&k, SlideRule::Psi).map_err(invalid)?.len(),
                _ => enumerate_cpf(&k).len(),
            };
            len.into()
        }
    };
    let method_name = method.to_possible_value().expect("not skipped").get_name().to_string();
    Out::new(format).record(&value.to_string(), json!({"command": "count", "composition": k.to_string(), "method": method_name, "count": count_value(&value)}))
}

fn cmd_enumerate(comp: &str, set: Set, format: Format) -> Result<()> {
    let k = balanced(comp)?;
    guard(k.len())?;
    let mut out = Out::new(format);
    let set_name = set.to_possible_value().expect("not skipped").get_name().to_string();
    match set {
        Set::SlideOmega | Set::SlidePsi => {
            let rule = if matches!(set, Set::SlideOmega) { SlideRule::Omega } else { SlideRule::Psi };
            for tree in enumerate_slide_set(&k, rule).map_err(invalid)? {
                let lab = labeled_tree(&tree, &k, rule).expect("generated trees are members");
                let g = tree.graph();
                if format == Format::Dot {
                    out.raw(&lab.to_dot(&g))?;
                } else {
                    let text = lab.to_text(&g);
                    out.record(&text, json!({"set": set_name, "composition": k.to_string(), "tree": tree.to_string(), "labeled": text}))?;
                }
            }
        }
        Set::Cpf => {
            no_dot(format, "parking functions")?;
            for p in enumerate_cpf(&k) {
                let text = p.to_string();
                out.record(&text, json!({"set": set_name, "composition": k.to_string(), "cpf": text, "word": p.word().to_string()}))?;
            }
        }
        Set::CatWordsPsi | Set::CatWordsOmega => {
            no_dot(format, "words")?;
            let rule = if matches!(set, Set::CatWordsOmega) { SlideRule::Omega } else { SlideRule::Psi };
            for w in enumerate_caterpillar_words(&k, rule) {
                let text = w.to_string();
                out.record(&text, json!({"set": set_name, "composition": k.to_string(), "word": text}))?;
            }
        }
    }
    Ok(())
}

/// Every conversion goes through the ω slide tree and its composition.
fn to_tree(from: Repr, input: &str, comp: Option<&str>) -> Result<(StableTree, Composition)> {
    match from {
        Repr::Cpf => {
            let p: ParkingFunction = input.parse().map_err(parse_err)?;
            let t = cpf_to_slide(&p).map_err(invalid)?;
            Ok((t, p.composition()))
        }
        Repr::Word => {
            let w: Word = input.parse().map_err(parse_err)?;
            let t = tree_of_word(&w).map_err(invalid)?;
            Ok((t, w.content().map_err(invalid)?))
        }
        Repr::Perm => {
            let p: Word = input.parse().map_err(parse_err)?;
            let t = rho(&p).map_err(invalid)?;
            Ok((t, Composition::ones(p.len())))
        }
        Repr::Tree => {
            let parsed = parse_labeled_tree(input).map_err(parse_err)?;
            let tree = parsed.tree.canonicalize();
            let k = match comp {
                Some(c) => composition(c)?,
                None if parsed.has_labels() => {
                    let mut parts = vec![0u32; tree.n()];
                    for l in parsed.edge_labels.iter().flatten() {
                        let slot = parts.get_mut(*l as usize - 1).ok_or_else(|| invalid(format!("edge label {l} exceeds {}", tree.n())))?;
                        *slot += 1;
                    }
                    Composition::new(parts)
                }
                None => return Err(CliError::Parse("an unlabeled tree needs --comp".into())),
            };
            let ok = slide_labeling(&tree, &k, SlideRule::Omega).map_err(invalid)?;
            if let LabelingOutcome::Failed(f) = ok {
                return Err(invalid(format!("tree is not in Slide^omega({k}): {f}")));
            }
            Ok((tree, k))
        }
    }
}

fn cmd_map(from: Repr, to: Repr, input: &str, comp: Option<&str>, format: Format) -> Result<()> {
    let input = read_arg(input)?;
    let (tree, k) = to_tree(from, &input, comp)?;
    let g = tree.graph();
    let lab = labeled_tree(&tree, &k, SlideRule::Omega).expect("checked member");
    let text = match to {
        Repr::Tree if format == Format::Dot => return Out::new(format).raw(&lab.to_dot(&g)),
        Repr::Tree => lab.to_text(&g),
        Repr::Word => word_of(&tree, &k).map_err(invalid)?.to_string(),
        Repr::Cpf => {
            let w = word_of(&tree, &k).map_err(invalid)?;
            let p = ParkingFunction::from_word(&w.reversed()).map_err(invalid)?;
            if !p.is_cpf() {
                return Err(invalid(format!("{p} is not column-restricted")));
            }
            p.to_string()
        }
        Repr::Perm => {
            if k != Composition::ones(k.len()) {
                return Err(invalid(format!("permutations need composition 1,...,1, not {k}")));
            }
            phi(&tree).map_err(invalid)?.to_string()
        }
    };
    no_dot(format, "non-tree output")?;
    let name = |r: Repr| r.to_possible_value().expect("not skipped").get_name().to_string();
    Out::new(format).record(&text, json!({"command": "map", "from": name(from), "to": name(to), "input": input, "output": text, "composition": k.to_string()}))
}

fn cmd_label(tree: &str, comp: &str, rule: Rule, format: Format) -> Result<()> {
    let tree = parse_labeled_tree(&read_arg(tree)?).map_err(parse_err)?.tree.canonicalize();
    let k = composition(comp)?;
    let rule = SlideRule::from(rule);
    let outcome = slide_labeling(&tree, &k, rule).map_err(invalid)?;
    let g = tree.graph();
    let mut out = Out::new(format);
    match outcome {
        LabelingOutcome::Labeled(lab) if format == Format::Dot => out.raw(&lab.to_dot(&g)),
        LabelingOutcome::Labeled(lab) => {
            let text = lab.to_text(&g);
            out.record(&text, json!({"command": "label", "rule": rule.to_string(), "composition": k.to_string(), "labeled": true, "tree": text}))
        }
        LabelingOutcome::Failed(f) => {
            let partial = f.partial.to_text(&g);
            match format {
                Format::Dot => out.raw(&f.partial.to_dot(&g))?,
                _ => out.record(
                    &format!("no {rule} labeling for ({k}): {f}\npartial: {partial}"),
                    json!({"command": "label", "rule": rule.to_string(), "composition": k.to_string(), "labeled": false, "step": f.step, "reason": f.to_string(), "partial": partial}),
                )?,
            }
            Err(CliError::Failed)
        }
    }
}

fn cmd_word(word: &str, format: Format) -> Result<()> {
    no_dot(format, "words")?;
    let w: Word = read_arg(word)?.parse().map_err(parse_err)?;
    let k = w.content().map_err(invalid)?;
    let tree = tree_of_word(&w).ok();
    let (cat_psi, cat_omega) = (caterpillar_member(&w, SlideRule::Psi), caterpillar_member(&w, SlideRule::Omega));
    let rc = is_reverse_catalan(&k);
    let mut text = format!("word {w}\ncontent {k}\nreverse-catalan {rc}\n");
    match &tree {
        Some(t) => text += &format!("omega tree {}\n", labeled_tree(t, &k, SlideRule::Omega).expect("member").to_text(&t.graph())),
        None => text += "omega tree none\n",
    }
    text += &format!("caterpillar psi {cat_psi}\ncaterpillar omega {cat_omega}");
    Out::new(format).record(
        &text,
        json!({"command": "word", "word": w.to_string(), "composition": k.to_string(), "reverse_catalan": rc,
               "omega_tree": tree.map(|t| t.to_string()), "caterpillar_psi": cat_psi, "caterpillar_omega": cat_omega}),
    )
}

fn cmd_avoid(comp: &str, patterns: &[String], format: Format) -> Result<()> {
    no_dot(format, "words")?;
    let k = composition(comp)?;
    guard(k.total() as usize)?;
    let pats: Vec<Pattern> = patterns.iter().map(|p| p.parse().map_err(parse_err)).collect::<Result<_>>()?;
    let names: Vec<String> = pats.iter().map(Pattern::to_string).collect();
    let mut out = Out::new(format);
    for w in enumerate_avoiders(&k, &pats) {
        let text = w.to_string();
        out.record(&text, json!({"command": "avoid", "composition": k.to_string(), "patterns": names, "word": text}))?;
    }
    Ok(())
}

fn cmd_verify(max_n_arg: usize, suite: SuiteArg, fault: Option<FaultArg>, format: Format) -> Result<()> {
    no_dot(format, "reports")?;
    guard(max_n_arg)?;
    let fault = match fault {
        Some(FaultArg::FlipComparison) => Fault::FlipComparison,
        None => Fault::None,
    };
    let suite = Suite::from(suite);
    let reports = run_suite(suite, max_n_arg, fault);
    let mut out = Out::new(format);
    for r in &reports {
        out.record(
            &r.to_string(),
            json!({"command": "verify", "suite": suite.to_string(), "criterion": r.criterion, "name": r.name, "max_n": r.max_n,
                   "cases": r.cases, "failures": r.failures, "passed": r.passed(), "counterexample": r.counterexample}),
        )?;
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Count { comp, method, format } => cmd_count(comp, *method, *format),
        Command::Enumerate { comp, set, format } => cmd_enumerate(comp, *set, *format),
        Command::Map { from, to, input, comp, format } => cmd_map(*from, *to, input, comp.as_deref(), *format),
        Command::Label { tree, comp, rule, format } => cmd_label(tree, comp, *rule, *format),
        Command::Word { word, format } => cmd_word(word, *format),
        Command::Avoid { comp, patterns, format } => cmd_avoid(comp, patterns, *format),
        Command::Verify { max_n, suite, inject_fault, format } => cmd_verify(*max_n, *suite, *inject_fault, *format),
    };
    match res {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
