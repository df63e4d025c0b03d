//! Command-line front end. [`run`] takes the argument list and returns the
//! exit code with captured output, so the binary is a thin wrapper.
//!
//! Exit codes: 0 definite positive, 3 definite negative, 2 unknown within
//! budget, 1 usage or input error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{
    classify_report, conclude, ibn_check, purely_infinite_simple_check, serre_check_with,
    stably_free_check, Classification, Dialect, IbnReport, SerreReport, SerreVerdict, VertexSerre,
};
use crate::element::MonoidElement;
use crate::fixtures::{fixture, FIXTURE_NAMES};
use crate::graph::Graph;
use crate::monoid::{
    certificate_json, Certificate, Enumeration, MonoidEngine, Verdict, MAX_ENUMERATED_CLASSES,
};
use crate::search::SearchBudget;
use crate::talented::{
    GradedElement, GradedEngine, GradedSerreVerdict, GradedVertexOutcome, ShiftWindow,
};

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "leavitt-lab",
    version,
    about = "Exact graph-monoid computations for Leavitt path algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Built-in graph instead of a file
    #[arg(long, value_name = "NAME", global = true)]
    pub fixture: Option<String>,
    /// Machine-readable report
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, value_name = "N", global = true, default_value_t = SearchBudget::default().max_steps)]
    pub max_steps: usize,
    #[arg(long, value_name = "N", global = true, default_value_t = SearchBudget::default().max_element_size)]
    pub max_size: u64,
    #[arg(long, value_name = "N", global = true, default_value_t = SearchBudget::default().max_frontier)]
    pub max_frontier: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    Lpa,
    Cstar,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Dialect {
        match d {
            DialectArg::Lpa => Dialect::Lpa,
            DialectArg::Cstar => Dialect::Cstar,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct WindowArg {
    /// Shift window for graded candidates
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Option<Vec<i64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full pipeline: Serre check, pure infiniteness, K0, classification
    Classify {
        path: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lpa")]
        dialect: DialectArg,
        #[command(flatten)]
        common: Common,
    },
    /// Decide equality of two elements, e.g. `eq --fixture e2 u 2u`
    Eq {
        /// [PATH] LHS RHS
        #[arg(num_args = 2..=3, required = true)]
        operands: Vec<String>,
        /// Compare in the talented monoid; terms may carry shifts, `u(1)`
        #[arg(long)]
        graded: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Is every vertex a positive multiple of 1_E?
    Serre {
        path: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "lpa")]
        dialect: DialectArg,
        #[command(flatten)]
        common: Common,
    },
    /// Is every v(0) a sum of shifted units 1_E(i)?
    GradedSerre {
        path: Option<PathBuf>,
        #[command(flatten)]
        window: WindowArg,
        #[command(flatten)]
        common: Common,
    },
    /// K0 with the class of 1_E and of each vertex
    K0 {
        path: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Invariant basis number
    Ibn {
        path: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Are all finitely generated projectives stably free?
    StablyFree {
        path: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Purely infinite simple test with the failing conditions
    Pis {
        path: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Cuntz splice at a vertex; prints graph JSON
    Splice {
        /// [PATH] VERTEX
        #[arg(num_args = 1..=2, required = true)]
        operands: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// All classes of a finite graph monoid
    Enumerate {
        path: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print a generated graph as JSON
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// One vertex with N loops
    Rose { n: usize },
    /// The graph of M_d(L_n)
    Matrix { d: usize, n: usize },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_POSITIVE
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(code, text)
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(msg) => Outcome::input_error(msg),
    }
}

fn execute(command: Command) -> Result<Outcome, String> {
    match command {
        Command::Classify {
            path,
            dialect,
            common,
        } => {
            let g = load(&common, path.as_ref())?;
            cmd_classify(&g, &common, dialect.into())
        }
        Command::Eq {
            operands,
            graded,
            common,
        } => {
            let (path, rest) = split_operands(&common, &operands, 2)?;
            let g = load(&common, path.as_ref())?;
            cmd_eq(&g, &common, &rest[0], &rest[1], graded)
        }
        Command::Serre {
            path,
            dialect,
            common,
        } => {
            let g = load(&common, path.as_ref())?;
            cmd_serre(&g, &common, dialect.into())
        }
        Command::GradedSerre {
            path,
            window,
            common,
        } => {
            let g = load(&common, path.as_ref())?;
            let window = match window.window.as_deref() {
                None => ShiftWindow::default(),
                Some([lo, hi]) => ShiftWindow::new(*lo, *hi)?,
                Some(_) => return Err("--window takes LO HI".into()),
            };
            cmd_graded_serre(&g, &common, window)
        }
        Command::K0 { path, common } => {
            let g = load(&common, path.as_ref())?;
            Ok(cmd_k0(&g, &common))
        }
        Command::Ibn { path, common } => {
            let g = load(&common, path.as_ref())?;
            cmd_ibn(&g, &common)
        }
        Command::StablyFree { path, common } => {
            let g = load(&common, path.as_ref())?;
            Ok(cmd_stably_free(&g, &common))
        }
        Command::Pis { path, common } => {
            let g = load(&common, path.as_ref())?;
            Ok(cmd_pis(&g, &common))
        }
        Command::Splice { operands, common } => {
            let (path, rest) = split_operands(&common, &operands, 1)?;
            let g = load(&common, path.as_ref())?;
            let spliced = g.cuntz_splice(&rest[0]).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(EXIT_POSITIVE, spliced.to_json() + "\n"))
        }
        Command::Enumerate { path, common } => {
            let g = load(&common, path.as_ref())?;
            cmd_enumerate(&g, &common)
        }
        Command::Gen { kind } => {
            let g = match kind {
                GenKind::Rose { n } => Graph::rose(n),
                GenKind::Matrix { d, n } => Graph::matrix_graph(d, n).map_err(|e| e.to_string())?,
            };
            Ok(Outcome::ok(EXIT_POSITIVE, g.to_json() + "\n"))
        }
    }
}

/// With `--fixture`, every operand is positional data; otherwise the
/// first one is the graph path.
fn split_operands(
    common: &Common,
    operands: &[String],
    data: usize,
) -> Result<(Option<PathBuf>, Vec<String>), String> {
    match (common.fixture.is_some(), operands.len()) {
        (true, n) if n == data => Ok((None, operands.to_vec())),
        (false, n) if n == data + 1 => {
            Ok((Some(PathBuf::from(&operands[0])), operands[1..].to_vec()))
        }
        _ => Err(format!(
            "expected {} operand(s) after {}",
            data,
            if common.fixture.is_some() {
                "--fixture"
            } else {
                "the graph path"
            }
        )),
    }
}

fn load(common: &Common, path: Option<&PathBuf>) -> Result<Graph, String> {
    match (&common.fixture, path) {
        (Some(_), Some(_)) => Err("give either --fixture or a graph path, not both".into()),
        (Some(name), None) => fixture(name).map_err(|e| e.to_string()),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Graph::from_json(&text).map_err(|e| format!("{}: {e}", p.display()))
        }
        (None, None) => Err(format!(
            "no graph given: pass a JSON file or --fixture NAME ({})",
            FIXTURE_NAMES.join(", ")
        )),
    }
}

fn budget(common: &Common) -> Result<SearchBudget, String> {
    SearchBudget::new(common.max_steps, common.max_size, common.max_frontier)
}

fn budget_line(b: &SearchBudget) -> String {
    format!(
        "budget: max_steps={} max_size={} max_frontier={}",
        b.max_steps, b.max_element_size, b.max_frontier
    )
}

fn with_schema(mut v: Value, command: &str) -> String {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("schema".into(), json!(crate::classify::REPORT_SCHEMA));
        obj.insert("command".into(), json!(command));
    }
    serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
}

fn chain_text<E, L>(
    c: &Certificate<E, L>,
    show: impl Fn(&E) -> String,
    label: impl Fn(&L) -> String,
) -> String {
    let mut out = String::new();
    for (start, steps, side) in [
        (&c.left_start, &c.left, "lhs"),
        (&c.right_start, &c.right, "rhs"),
    ] {
        write!(out, "  {side}: {}", show(start)).unwrap();
        for s in steps {
            write!(out, " ->[{}] {}", label(&s.at), show(&s.result)).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "  common descendant: {}", show(&c.common)).unwrap();
    out
}

fn cmd_classify(g: &Graph, common: &Common, dialect: Dialect) -> Result<Outcome, String> {
    let b = budget(common)?;
    let report = classify_report(g, &b).map_err(|e| e.to_string())?;
    let code = if report.classification.is_definite() {
        EXIT_POSITIVE
    } else {
        EXIT_UNKNOWN
    };
    if common.json {
        return Ok(Outcome::ok(
            code,
            with_schema(report.to_json(g, dialect), "classify"),
        ));
    }
    let mut out = String::new();
    writeln!(
        out,
        "graph: {} vertices, {} edges",
        g.vertex_count(),
        g.edge_count()
    )
    .unwrap();
    out.push_str(&serre_text(g, &report.serre));
    writeln!(
        out,
        "purely infinite simple: {}",
        if report.pis.holds() { "yes" } else { "no" }
    )
    .unwrap();
    writeln!(
        out,
        "K0: {}, [1_E] = {:?}",
        report.k0.group_description(),
        report.k0.unit
    )
    .unwrap();
    writeln!(
        out,
        "classification: {} ({})",
        report.classification.kind(),
        report.classification.label(dialect)
    )
    .unwrap();
    Ok(Outcome::ok(code, out))
}

fn serre_text(g: &Graph, r: &SerreReport) -> String {
    let mut out = String::new();
    writeln!(out, "serre: {}", r.verdict_str()).unwrap();
    for (v, o) in &r.vertices {
        let line = match o {
            VertexSerre::Free { k, certificate } => {
                format!(
                    "{} = {k}·1_E ({} rewrite steps)",
                    g.name(*v),
                    certificate.steps()
                )
            }
            VertexSerre::NoK0Solution => {
                format!("{}: no k >= 1 with [v] = k[1_E] in K0", g.name(*v))
            }
            VertexSerre::MonoidRefuted { refutations, .. } => format!(
                "{}: refuted in the monoid ({})",
                g.name(*v),
                refutations
                    .iter()
                    .map(|(k, w)| format!("k={k}: {}", w.describe()))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
            VertexSerre::Unknown { undecided, .. } => format!(
                "{}: undecided for k in {:?}",
                g.name(*v),
                undecided
                    .iter()
                    .map(|(k, _)| k.to_string())
                    .collect::<Vec<_>>()
            ),
        };
        writeln!(out, "  {line}").unwrap();
    }
    writeln!(out, "  {}", budget_line(&r.budget)).unwrap();
    out
}

fn cmd_serre(g: &Graph, common: &Common, dialect: Dialect) -> Result<Outcome, String> {
    let b = budget(common)?;
    let engine = MonoidEngine::new(g);
    let report = serre_check_with(&engine, &b);
    let code = match report.verdict {
        SerreVerdict::Holds { .. } => EXIT_POSITIVE,
        SerreVerdict::Fails { .. } => EXIT_NEGATIVE,
        SerreVerdict::Unknown => EXIT_UNKNOWN,
    };
    let classification = if g.vertex_count() == 0 {
        None
    } else {
        let pis = purely_infinite_simple_check(g);
        Some(conclude(g, &report, &pis, engine.k0()).map_err(|e| e.to_string())?)
    };
    let conclusion = serre_conclusion(&report, classification.as_ref(), dialect);
    if common.json {
        let certificates: Vec<Value> = report
            .certificates()
            .map(|(v, k, c)| {
                json!({
                    "vertex": g.name(v),
                    "k": k.to_string(),
                    "certificate": certificate_json(c, |e| e.display(g), |&u| g.name(u).to_string()),
                })
            })
            .collect();
        let body = json!({
            "dialect": match dialect { Dialect::Lpa => "lpa", Dialect::Cstar => "cstar" },
            "serre": report.to_json(g),
            "conclusion": conclusion,
            "classification": classification.map(|c| c.to_json(dialect)),
            "certificates": certificates,
        });
        return Ok(Outcome::ok(code, with_schema(body, "serre")));
    }
    let mut out = serre_text(g, &report);
    writeln!(out, "conclusion: {conclusion}").unwrap();
    Ok(Outcome::ok(code, out))
}

fn serre_conclusion(r: &SerreReport, c: Option<&Classification>, dialect: Dialect) -> String {
    let algebra = match dialect {
        Dialect::Lpa => "L_k(E)",
        Dialect::Cstar => "C*(E)",
    };
    match (&r.verdict, c) {
        (SerreVerdict::Holds { .. }, Some(c)) => format!(
            "every finitely generated projective module over {algebra} is free; {algebra} is {}",
            c.label(dialect)
        ),
        (SerreVerdict::Holds { .. }, None) => {
            format!("every finitely generated projective module over {algebra} is free")
        }
        (SerreVerdict::Fails { .. }, _) => {
            format!("some finitely generated projective module over {algebra} is not free")
        }
        (SerreVerdict::Unknown, _) => "undetermined within budget".into(),
    }
}

fn cmd_eq(
    g: &Graph,
    common: &Common,
    lhs: &str,
    rhs: &str,
    graded: bool,
) -> Result<Outcome, String> {
    let b = budget(common)?;
    let (kind, json_body, text) = if graded {
        let a = GradedElement::parse(g, lhs).map_err(|e| e.to_string())?;
        let c = GradedElement::parse(g, rhs).map_err(|e| e.to_string())?;
        let v = GradedEngine::new(g).decide_equal(&a, &c, &b);
        let text = match &v {
            Verdict::Equal(cert) => chain_text(
                cert,
                |e| e.display(g),
                |&(u, i)| GradedElement::generator(u, i).display(g),
            ),
            Verdict::Unequal(w) => format!("  witness: {}\n", w.describe()),
            Verdict::Unknown(_) => format!("  {}\n", budget_line(&b)),
        };
        (v.kind(), v.to_json(g), text)
    } else {
        let a = MonoidElement::parse(g, lhs).map_err(|e| e.to_string())?;
        let c = MonoidElement::parse(g, rhs).map_err(|e| e.to_string())?;
        let v = MonoidEngine::new(g).decide_equal(&a, &c, &b);
        let text = match &v {
            Verdict::Equal(cert) => chain_text(cert, |e| e.display(g), |&u| g.name(u).to_string()),
            Verdict::Unequal(w) => format!("  witness: {}\n", w.describe()),
            Verdict::Unknown(_) => format!("  {}\n", budget_line(&b)),
        };
        (v.kind(), v.to_json(g), text)
    };
    let code = match kind {
        crate::monoid::VerdictKind::Equal => EXIT_POSITIVE,
        crate::monoid::VerdictKind::Unequal => EXIT_NEGATIVE,
        crate::monoid::VerdictKind::Unknown => EXIT_UNKNOWN,
    };
    if common.json {
        let mut body = json_body;
        body["graded"] = json!(graded);
        return Ok(Outcome::ok(code, with_schema(body, "eq")));
    }
    Ok(Outcome::ok(code, format!("{}\n{text}", kind.as_str())))
}

fn cmd_graded_serre(g: &Graph, common: &Common, window: ShiftWindow) -> Result<Outcome, String> {
    let b = budget(common)?;
    let report = GradedEngine::new(g).serre_check(&b, window);
    let code = match report.verdict {
        GradedSerreVerdict::Holds => EXIT_POSITIVE,
        GradedSerreVerdict::Fails | GradedSerreVerdict::FailsWithinWindow => EXIT_NEGATIVE,
        GradedSerreVerdict::Unknown => EXIT_UNKNOWN,
    };
    if common.json {
        return Ok(Outcome::ok(
            code,
            with_schema(report.to_json(g), "graded-serre"),
        ));
    }
    let mut out = format!(
        "graded serre: {} (window [{}, {}])\n",
        report.verdict.as_str(),
        window.lo,
        window.hi
    );
    for (v, o) in &report.vertices {
        let line = match o {
            GradedVertexOutcome::Free { shifts, certificate } => format!(
                "{} = {} ({} rewrite steps)",
                g.name(*v),
                shifts
                    .iter()
                    .map(|i| format!("1_E({i})"))
                    .collect::<Vec<_>>()
                    .join(" + "),
                certificate.steps()
            ),
            GradedVertexOutcome::NotFree(r) => format!("{}: not a sum of shifted units ({r:?})", g.name(*v)),
            GradedVertexOutcome::NoneInWindow { candidates_refuted } => format!(
                "{}: no sum of shifted units in the window ({candidates_refuted} candidates refuted)",
                g.name(*v)
            ),
            GradedVertexOutcome::Unknown { candidates_tried } => {
                format!("{}: undecided after {candidates_tried} candidates", g.name(*v))
            }
        };
        writeln!(out, "  {line}").unwrap();
    }
    writeln!(out, "  {}", budget_line(&b)).unwrap();
    Ok(Outcome::ok(code, out))
}

fn cmd_k0(g: &Graph, common: &Common) -> Outcome {
    let k0 = MonoidEngine::new(g).k0().clone();
    if common.json {
        return Outcome::ok(EXIT_POSITIVE, with_schema(k0.to_json(), "k0"));
    }
    let mut out = format!("K0 = {}\n[1_E] = {:?}\n", k0.group_description(), k0.unit);
    for (v, c) in k0.vertex_classes.iter().enumerate() {
        writeln!(out, "[{}] = {:?}", g.name(v), c).unwrap();
    }
    Outcome::ok(EXIT_POSITIVE, out)
}

fn cmd_ibn(g: &Graph, common: &Common) -> Result<Outcome, String> {
    let b = budget(common)?;
    let report = ibn_check(g, &b);
    let code = match report {
        IbnReport::Ibn => EXIT_POSITIVE,
        IbnReport::NotIbn { .. } => EXIT_NEGATIVE,
        IbnReport::Unknown { .. } => EXIT_UNKNOWN,
    };
    if common.json {
        return Ok(Outcome::ok(code, with_schema(report.to_json(g), "ibn")));
    }
    let text = match &report {
        IbnReport::Ibn => "IBN: [1_E] has infinite order in K0\n".to_string(),
        IbnReport::NotIbn { n, m, certificate } => format!(
            "not IBN: {n}·1_E = {m}·1_E\n{}",
            chain_text(certificate, |e| e.display(g), |&u| g.name(u).to_string())
        ),
        IbnReport::Unknown { bound, unit_order } => format!(
            "unknown: [1_E] has order {unit_order} and no n <= {bound} gave n·1_E = (n+{unit_order})·1_E\n  {}\n",
            budget_line(&b)
        ),
    };
    Ok(Outcome::ok(code, text))
}

fn cmd_stably_free(g: &Graph, common: &Common) -> Outcome {
    let holds = stably_free_check(g);
    let code = if holds { EXIT_POSITIVE } else { EXIT_NEGATIVE };
    if common.json {
        let k0 = MonoidEngine::new(g).k0().clone();
        return Outcome::ok(
            code,
            with_schema(
                json!({"stably_free": holds, "k0": k0.to_json()}),
                "stably-free",
            ),
        );
    }
    let text = if holds {
        "stably free: [1_E] generates K0\n"
    } else {
        "not stably free: [1_E] does not generate K0\n"
    };
    Outcome::ok(code, text.into())
}

fn cmd_pis(g: &Graph, common: &Common) -> Outcome {
    let report = purely_infinite_simple_check(g);
    let code = if report.holds() {
        EXIT_POSITIVE
    } else {
        EXIT_NEGATIVE
    };
    if common.json {
        return Outcome::ok(code, with_schema(report.to_json(g), "pis"));
    }
    if report.holds() {
        return Outcome::ok(code, "purely infinite simple\n".into());
    }
    let mut out = "not purely infinite simple\n".to_string();
    for f in &report.failures {
        writeln!(out, "  {}", failure_text(g, f)).unwrap();
    }
    Outcome::ok(code, out)
}

fn failure_text(g: &Graph, f: &crate::classify::PisFailure) -> String {
    use crate::classify::PisFailure;
    match f {
        PisFailure::EmptyGraph => "the graph is empty".into(),
        PisFailure::NontrivialIdeal(h) => format!(
            "proper hereditary saturated set {{{}}}",
            h.names(g).join(", ")
        ),
        PisFailure::ExitlessCycle(c) => format!(
            "cycle without exit through {}",
            c.iter()
                .map(|&v| g.name(v))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
        PisFailure::NoCycle => "no cycle".into(),
    }
}

fn cmd_enumerate(g: &Graph, common: &Common) -> Result<Outcome, String> {
    let b = budget(common)?;
    let result = MonoidEngine::new(g).enumerate(&b, MAX_ENUMERATED_CLASSES);
    let (code, classes, reason) = match &result {
        Enumeration::Complete(c) => (EXIT_POSITIVE, c, None),
        Enumeration::Unknown {
            classes_found,
            reason,
        } => (EXIT_UNKNOWN, classes_found, Some(reason.clone())),
    };
    let shown: Vec<String> = classes.iter().map(|e| e.display(g)).collect();
    if common.json {
        let body = json!({
            "complete": reason.is_none(),
            "classes": shown,
            "reason": reason,
            "budget": serde_json::to_value(b).expect("budget serializes"),
        });
        return Ok(Outcome::ok(code, with_schema(body, "enumerate")));
    }
    let mut out = match &reason {
        None => format!("{} classes\n", shown.len()),
        Some(r) => format!(
            "incomplete after {} classes: {r}\n  {}\n",
            shown.len(),
            budget_line(&b)
        ),
    };
    for s in shown {
        writeln!(out, "  {s}").unwrap();
    }
    Ok(Outcome::ok(code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("leavitt-lab").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run_args(&["eq", "--fixture", "e2", "u", "2u"]).code,
            EXIT_POSITIVE
        );
        assert_eq!(
            run_args(&["eq", "--fixture", "ex34-2", "v", "z"]).code,
            EXIT_NEGATIVE
        );
        assert_eq!(
            run_args(&["eq", "--fixture", "e2", "u", "q"]).code,
            EXIT_INPUT
        );
        assert_eq!(run_args(&["classify"]).code, EXIT_INPUT);
        assert_eq!(run_args(&["bogus"]).code, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).code, EXIT_POSITIVE);
    }

    #[test]
    fn graded_eq() {
        // the single rewrite of u(0) is 2u(1) + v(1); 1_E(1) is a different element
        let o = run_args(&["eq", "--fixture", "e2-minus", "--graded", "u", "2u(1)+v(1)"]);
        assert_eq!(o.code, EXIT_POSITIVE, "{o:?}");
        let o = run_args(&[
            "eq",
            "--fixture",
            "e2-minus",
            "--graded",
            "u",
            "u(1)+v(1)+w(1)",
        ]);
        assert_eq!(o.code, EXIT_NEGATIVE, "{o:?}");
    }

    #[test]
    fn window_parses_negative_bounds() {
        let o = run_args(&["graded-serre", "--fixture", "ex36", "--window", "-4", "4"]);
        assert_eq!(o.code, EXIT_POSITIVE, "{o:?}");
        assert!(o.stdout.contains("1_E(2)"));
        assert_eq!(
            run_args(&["graded-serre", "--fixture", "ex36", "--window", "3", "1"]).code,
            EXIT_INPUT
        );
    }
}
