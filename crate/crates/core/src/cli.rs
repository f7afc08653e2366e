//! Command-line front end. Exit codes: 0 when every requested verdict passes,
//! 1 when one fails, 2 on input or precondition errors, 3 when a verdict is
//! undecided.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bits;
use crate::chrono::ChronoModel;
use crate::completion::{build_completion, Completion, Verdict};
use crate::error::{Error, Result};
use crate::fixtures::{self, FixtureDescriptor, Manifest};
use crate::limit_ops::{
    associated_operator, derived_topology, order_of, star_operator, validate_operator,
    TailLimitOperator,
};
use crate::separation::{
    separating_refinement, verify_minimality, DomainDesignation, DEFAULT_MAX_ENUM,
};
use crate::sweeps;
use crate::topology::{density_check, FinTopology, TopologyJson};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "seqtop",
    version,
    about = "Limit operators, separating topologies and causal completions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DotTarget {
    /// The core order of a model, families as boxes.
    Core,
    /// The node chronology of the completion.
    Completion,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a topology, operator or model file.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Minimal D-separating refinement of a topology, with the starred operator.
    Refine {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated designation; overrides `D` in the file.
        #[arg(long = "D", value_delimiter = ',')]
        d: Option<Vec<String>>,
    },
    /// Order of a limit operator (or of the associated operator of a topology).
    Order {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Completion nodes, chronology and limit table of a model.
    Complete {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also write the completion JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the DOT rendering here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Admissibility report of a model, optionally checked against a manifest.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Generate a fixture and check its manifest.
    Gen {
        id: String,
        /// `key=value`, repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// DOT rendering of a topology, operator or model.
    ExportDot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DotTarget::Completion)]
        what: DotTarget,
    },
    /// Exhaustive finite sweeps and the theorem suite.
    Suite {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        /// Antitone operators checked exhaustively up to this size.
        #[arg(long, default_value_t = 3)]
        exhaustive_points: usize,
        /// Number of random operators on up to five points.
        #[arg(long, default_value_t = 10_000)]
        random: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// What a command produced: an exit code plus text, JSON and optional DOT renderings.
#[derive(Debug, Clone)]
pub struct Output {
    pub code: i32,
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
}

impl Output {
    fn new(code: i32, text: String, json: Value) -> Self {
        Self {
            code,
            text,
            json,
            dot: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                serde_json::to_string_pretty(&self.json).expect("JSON value serializes") + "\n"
            }
            Format::Dot => self.dot.clone().unwrap_or_else(|| self.text.clone()),
        }
    }
}

/// Maximum ground size for exhaustive topology enumeration, from `SEQTOP_MAX_ENUM`.
pub fn max_enum() -> Result<usize> {
    match std::env::var("SEQTOP_MAX_ENUM") {
        Err(_) => Ok(DEFAULT_MAX_ENUM),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("SEQTOP_MAX_ENUM must be a number, got `{v}`"))),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_FAIL,
        _ => EXIT_INPUT,
    }
}

/// Parses arguments, runs the command and prints its output. Returns the exit code.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

enum Input {
    Topology(TopologyJson),
    Operator(TailLimitOperator),
    Model(String),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Tells the input kind by its top-level keys.
fn load(path: &Path) -> Result<Input> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| {
        Error::Input(format!(
            "{}: JSON syntax at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let has = |k: &str| v.get(k).is_some();
    let at = |e: Error| Error::Input(format!("{}: {e}", path.display()));
    if has("opens") {
        Ok(Input::Topology(TopologyJson::parse(&text).map_err(at)?))
    } else if has("table") {
        Ok(Input::Operator(
            TailLimitOperator::from_json(&text).map_err(at)?,
        ))
    } else if has("core") {
        Ok(Input::Model(text))
    } else {
        Err(Error::Input(format!(
            "{}: cannot tell the input kind; expected `opens` (topology), `table` (operator) or `core` (model)",
            path.display()
        )))
    }
}

fn model_of(text: &str) -> Result<ChronoModel> {
    let json = serde_json::from_str(text).map_err(|e| {
        Error::Input(format!(
            "model JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    ChronoModel::build(json)
}

fn is_undecided(msg: &str) -> bool {
    msg.contains("undecided") || msg.contains("unverified")
}

pub fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Validate { input } => validate(&load(input)?),
        Command::Refine { input, d } => match load(input)? {
            Input::Topology(t) => {
                let d = d.clone().or(t.d.clone()).unwrap_or_default();
                refine(&t.build()?, &d)
            }
            _ => Err(Error::Input("refine needs a topology file".into())),
        },
        Command::Order { input } => {
            let l = match load(input)? {
                Input::Topology(t) => associated_operator(&t.build()?),
                Input::Operator(l) => l,
                Input::Model(_) => {
                    return Err(Error::Input(
                        "order needs a topology or operator file".into(),
                    ))
                }
            };
            let ord = order_of(&l)?;
            Ok(Output::new(
                EXIT_PASS,
                format!("{ord}\n"),
                json!({ "order": ord.to_string() }),
            ))
        }
        Command::Complete { input, out, dot } => {
            let comp = completion_of(&load(input)?)?;
            let j = comp.to_json()?;
            let d = comp.to_dot();
            if let Some(p) = out {
                write(
                    p,
                    &(serde_json::to_string_pretty(&j).expect("serializes") + "\n"),
                )?;
            }
            if let Some(p) = dot {
                write(p, &d)?;
            }
            let code = if comp.notes().iter().any(|n| is_undecided(n)) {
                EXIT_UNDECIDED
            } else {
                EXIT_PASS
            };
            let mut o = Output::new(code, completion_text(&comp), j);
            o.dot = Some(d);
            Ok(o)
        }
        Command::Report { input, manifest } => report(input, manifest.as_deref()),
        Command::Gen {
            id,
            params,
            out,
            manifest,
        } => gen(id, params, out.as_deref(), manifest.as_deref()),
        Command::ExportDot { input, what } => {
            let d = match (load(input)?, what) {
                (Input::Topology(t), _) => topology_dot(&t.build()?),
                (Input::Operator(l), _) => topology_dot(&derived_topology(&l)?),
                (Input::Model(text), DotTarget::Core) => model_of(&text)?.to_dot(),
                (m @ Input::Model(_), DotTarget::Completion) => completion_of(&m)?.to_dot(),
            };
            let mut o = Output::new(EXIT_PASS, d.clone(), json!({ "dot": d }));
            o.dot = Some(d);
            Ok(o)
        }
        Command::Suite {
            max_points,
            exhaustive_points,
            random,
            seed,
        } => suite(*max_points, *exhaustive_points, *random, *seed),
    }
}

fn validate(input: &Input) -> Result<Output> {
    match input {
        Input::Topology(t) => {
            let tau = match t.build() {
                Ok(tau) => tau,
                Err(e) => {
                    return Ok(Output::new(
                        EXIT_FAIL,
                        format!("invalid topology: {e}\n"),
                        json!({"valid": false, "error": e.to_string()}),
                    ))
                }
            };
            let mut text = format!(
                "topology on {} points with {} open sets\n",
                tau.ground().len(),
                tau.opens().len()
            );
            let mut j =
                json!({"valid": true, "points": tau.ground().len(), "opens": tau.opens().len()});
            let mut code = EXIT_PASS;
            if let Some(d) = &t.d {
                let ds = tau.ground().subset(d)?;
                match DomainDesignation::new(&tau, ds) {
                    Ok(_) => text.push_str(&format!(
                        "D = {} is a valid designation\n",
                        tau.ground().show(ds)
                    )),
                    Err(e) => {
                        text.push_str(&format!(
                            "D = {} is not valid: {e}\n",
                            tau.ground().show(ds)
                        ));
                        j["valid"] = false.into();
                        j["error"] = e.to_string().into();
                        code = EXIT_FAIL;
                    }
                }
            }
            Ok(Output::new(code, text, j))
        }
        Input::Operator(l) => {
            let r = validate_operator(l);
            let ok = r.is_valid();
            let mut text = format!(
                "operator on {} points: {}\n",
                l.ground().len(),
                if ok { "valid" } else { "invalid" }
            );
            for &(a, b) in &r.antitone_violations {
                let g = l.ground();
                text.push_str(&format!(
                    "  not antitone: {} ⊂ {} but L({}) ⊄ L({})\n",
                    g.show(a),
                    g.show(b),
                    g.show(b),
                    g.show(a)
                ));
            }
            let j = json!({"valid": ok, "report": format!("{r:?}")});
            Ok(Output::new(if ok { EXIT_PASS } else { EXIT_FAIL }, text, j))
        }
        Input::Model(text) => {
            let m = model_of(text)?;
            let r = m.validate()?;
            let code = if r.errors.is_empty() {
                EXIT_PASS
            } else if r.errors.iter().all(|e| is_undecided(e)) {
                EXIT_UNDECIDED
            } else {
                EXIT_FAIL
            };
            let mut out = String::new();
            let _ = writeln!(
                out,
                "model: {}",
                if code == EXIT_PASS {
                    "valid"
                } else {
                    "invalid"
                }
            );
            for e in &r.errors {
                let _ = writeln!(out, "  error: {e}");
            }
            for n in &r.notes {
                let _ = writeln!(out, "  note: {n}");
            }
            Ok(Output::new(
                code,
                out,
                json!({"valid": code == EXIT_PASS, "errors": r.errors, "notes": r.notes}),
            ))
        }
    }
}

fn opens_of(t: &FinTopology) -> Vec<Vec<String>> {
    t.opens().iter().map(|&u| t.ground().names(u)).collect()
}

fn refine(tau: &FinTopology, d: &[String]) -> Result<Output> {
    let g = tau.ground();
    let ds = if d.is_empty() { 0 } else { g.subset(d)? };
    let dd = DomainDesignation::new(tau, ds)?;
    let r = separating_refinement(tau, &dd)?;
    let lt = associated_operator(tau);
    let ls = star_operator(&lt, &dd)?;
    let tls = derived_topology(&ls)?;
    let chain = tau.is_coarser_than(&r) && r.is_coarser_than(&tls);
    let equal = tls == r;
    let (before, after) = density_check(tau, &r, ds)?;
    let cap = max_enum()?;
    let minimality = if g.len() <= cap {
        Some(verify_minimality(&r, tau, &dd, cap)?)
    } else {
        None
    };
    let minimal_ok = minimality
        .as_ref()
        .is_none_or(|m| m.minimal && m.unique_minimum && m.a_fin && m.a_sep);
    let code = if chain && equal && minimal_ok {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };

    let mut text = String::new();
    let _ = writeln!(text, "τ  = {}", tau.show());
    let _ = writeln!(text, "D  = {}", g.show(ds));
    let _ = writeln!(
        text,
        "τ* = {}{}",
        r.show(),
        if r == FinTopology::discrete(g.clone()) {
            "  (discrete)"
        } else {
            ""
        }
    );
    let _ = writeln!(text, "L* = {}", ls.show());
    let _ = writeln!(text, "chain τ ⊆ τ* ⊆ τ_L*: {}", verdict_word(chain));
    let _ = writeln!(text, "τ_L* = τ*: {}", verdict_word(equal));
    match &minimality {
        Some(m) => {
            let _ = writeln!(
                text,
                "minimal: {}, unique minimum: {}",
                m.minimal, m.unique_minimum
            );
        }
        None => {
            let _ = writeln!(
                text,
                "minimality: not enumerated ({} points > SEQTOP_MAX_ENUM = {cap})",
                g.len()
            );
        }
    }
    let _ = writeln!(text, "D dense in τ: {before}, in τ*: {after}");
    let j = json!({
        "tau": opens_of(tau),
        "D": g.names(ds),
        "tau_star": opens_of(&r),
        "star_operator": ls.to_json(),
        "chain": chain,
        "derived_equals_refinement": equal,
        "minimality": minimality.as_ref().map(|m| json!({
            "minimal": m.minimal,
            "unique_minimum": m.unique_minimum,
            "a_fin": m.a_fin,
            "a_sep": m.a_sep,
            "admissible_count": m.admissible_count,
        })),
        "dense_before": before,
        "dense_after": after,
    });
    Ok(Output::new(code, text, j))
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn completion_of(input: &Input) -> Result<Completion> {
    match input {
        Input::Model(text) => build_completion(&model_of(text)?),
        _ => Err(Error::Input("this command needs a model file".into())),
    }
}

fn completion_text(c: &Completion) -> String {
    let mut t = String::new();
    let g = c.ground();
    let _ = writeln!(t, "nodes: {}", g.labels().join(", "));
    let _ = writeln!(t, "boundary: {}", c.show(c.boundary()));
    for (i, name) in g.labels().iter().enumerate() {
        let _ = writeln!(t, "  {name} ≪ {}", c.show(c.chron()[i]));
    }
    if let Ok(seqs) = c.sequences() {
        for (name, a) in seqs {
            let _ = writeln!(
                t,
                "sequence {name}: L = {}, L* = {}",
                c.show(c.chron_limit(a)),
                c.show(c.chron_star(a))
            );
        }
    }
    for n in c.notes() {
        let _ = writeln!(t, "note: {n}");
    }
    t
}

/// Text output keeps details to one readable line; JSON keeps them whole.
fn clip(detail: &str) -> String {
    const MAX: usize = 160;
    if detail.chars().count() <= MAX {
        return detail.to_string();
    }
    let head: String = detail.chars().take(MAX).collect();
    format!(
        "{head}... ({} chars, full text in --format json)",
        detail.chars().count()
    )
}

fn report(input: &Path, manifest: Option<&Path>) -> Result<Output> {
    let text = read(input)?;
    let loaded = load(input)?;
    let comp = completion_of(&loaded)?;
    let rep = comp.admissibility_report(max_enum()?)?;
    let mut out = String::new();
    for c in &rep.checks {
        let v = match c.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
            Verdict::Info => "info",
        };
        let _ = writeln!(out, "{:<34} {v:<5} {}", c.name, clip(&c.detail));
    }
    for n in &rep.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let mut code = if rep.notes.iter().any(|n| is_undecided(n)) {
        EXIT_UNDECIDED
    } else {
        EXIT_PASS
    };
    let mut j = serde_json::to_value(&rep).expect("report serializes");
    if let Some(mp) = manifest {
        let m: Manifest = serde_json::from_str(&read(mp)?).map_err(|e| {
            Error::Input(format!(
                "{}: manifest at line {}, column {}: {e}",
                mp.display(),
                e.line(),
                e.column()
            ))
        })?;
        let data: Value = serde_json::from_str(&text).map_err(|e| Error::Input(e.to_string()))?;
        let outcomes = fixtures::check_manifest(&data, &m)?;
        let bad = outcomes.iter().filter(|o| !o.pass).count();
        let _ = writeln!(
            out,
            "manifest {}: {} of {} claims hold",
            m.id,
            outcomes.len() - bad,
            outcomes.len()
        );
        for o in outcomes.iter().filter(|o| !o.pass) {
            let _ = writeln!(out, "  mismatch: {} ({})", o.claim, o.detail);
        }
        if bad > 0 {
            code = EXIT_FAIL;
        }
        j["manifest"] = serde_json::to_value(&outcomes).expect("outcomes serialize");
    }
    let mut o = Output::new(code, out, j);
    o.dot = Some(comp.to_dot());
    Ok(o)
}

fn gen(id: &str, params: &[String], out: Option<&Path>, manifest: Option<&Path>) -> Result<Output> {
    let mut desc = FixtureDescriptor::new(id);
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("parameter `{p}` is not key=value")))?;
        desc = desc.with_param(k.trim(), v.trim());
    }
    let fx = fixtures::generate(&desc)?;
    let data = serde_json::to_string_pretty(&fx.data).expect("serializes") + "\n";
    let man = serde_json::to_string_pretty(&fx.manifest).expect("serializes") + "\n";
    if let Some(p) = out {
        write(p, &data)?;
    }
    if let Some(p) = manifest {
        write(p, &man)?;
    }
    let mut text = format!(
        "{} ({}): {} manifest claims hold\n",
        fx.id,
        fx.kind,
        fx.manifest.claims.len()
    );
    for n in &fx.notes {
        text.push_str(&format!("note: {n}\n"));
    }
    if out.is_none() {
        text.push_str(&data);
    }
    Ok(Output::new(
        EXIT_PASS,
        text,
        serde_json::to_value(&fx).expect("fixture serializes"),
    ))
}

/// Hasse diagram of the specialization order: an edge `x -> y` when `y` lies in
/// every open set containing `x`, with implied edges dropped.
fn topology_dot(tau: &FinTopology) -> String {
    let g = tau.ground();
    let nb = tau.min_neighbourhoods();
    let mut out = String::from("digraph topology {\n  rankdir=BT;\n");
    for l in g.labels() {
        out.push_str(&format!("  \"{l}\";\n"));
    }
    for x in 0..g.len() {
        let above = nb[x] & !bits::single(x);
        for y in bits::members(above) {
            let implied =
                bits::members(above).any(|z| z != y && bits::contains(nb[z] & !bits::single(z), y));
            if !implied {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    g.labels()[x],
                    g.labels()[y]
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn suite(max_points: usize, exhaustive_points: usize, random: usize, seed: u64) -> Result<Output> {
    let fin = sweeps::finite_sweep(max_points)?;
    let ex = sweeps::exhaustive_theorem_sweep(exhaustive_points)?;
    let rnd = sweeps::random_theorem_sweep(random, 5, seed)?;
    let mut t = String::new();
    let line = |t: &mut String, name: &str, o: &sweeps::SweepOutcome| {
        let _ = writeln!(
            t,
            "{name:<28} {:>8} instances  {:>4} failures",
            o.instances, o.failures
        );
        for e in &o.examples {
            let _ = writeln!(t, "    {e}");
        }
    };
    let _ = writeln!(
        t,
        "topologies on <= {max_points} points: {}",
        fin.topologies
    );
    line(&mut t, "refinement + minimality", &fin.refinement);
    line(&mut t, "derived topology of L*", &fin.derived);
    line(&mut t, "associated first order", &fin.associated_order);
    line(&mut t, "density", &fin.density.outcome);
    let dn = &fin.density;
    let _ = writeln!(
        t,
        "    witnessed {}  witnessed+preserved {}  dense before {}  after {}  lost {}",
        dn.witnessed, dn.witnessed_and_preserved, dn.dense_before, dn.dense_after, dn.lost
    );
    line(
        &mut t,
        &format!("theorems exhaustive <= {exhaustive_points}"),
        &ex.outcome,
    );
    let _ = writeln!(
        t,
        "    passes {}  hypothesis not met {}",
        ex.passes, ex.hypothesis_not_met
    );
    line(&mut t, &format!("theorems random x{random}"), &rnd.outcome);
    let _ = writeln!(
        t,
        "    passes {}  hypothesis not met {}",
        rnd.passes, rnd.hypothesis_not_met
    );
    let ok = fin.refinement.ok()
        && fin.derived.ok()
        && fin.associated_order.ok()
        && fin.density.outcome.ok()
        && ex.outcome.ok()
        && rnd.outcome.ok();
    let j = json!({"finite": fin, "theorems_exhaustive": ex, "theorems_random": rnd, "ok": ok});
    Ok(Output::new(if ok { EXIT_PASS } else { EXIT_FAIL }, t, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str, text: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("seqtop-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn refine_sierpinski_is_discrete() {
        let p = tmp(
            "sier.json",
            r#"{"points":["p","q"],"opens":[[],["p"],["p","q"]]}"#,
        );
        let o = run(&Command::Refine {
            input: p,
            d: Some(vec!["p".into()]),
        })
        .unwrap();
        assert_eq!(o.code, EXIT_PASS);
        assert_eq!(o.json["tau_star"], json!([[], ["p"], ["q"], ["p", "q"]]));
        assert!(o.text.contains("(discrete)"));
    }

    #[test]
    fn order_of_cascade() {
        let p = tmp(
            "cascade.json",
            r#"{"points":["a","b","c"],"table":{"a":["a","b"],"b":["b","c"],"c":["b","c"]},"coherent":true,"autofill":"antitone-max"}"#,
        );
        let o = run(&Command::Order { input: p }).unwrap();
        assert_eq!((o.code, o.text.as_str()), (EXIT_PASS, "KthOrder(2)\n"));
    }

    #[test]
    fn schema_errors_point_at_the_problem() {
        let p = tmp(
            "bad.json",
            "{\"points\": [\"p\"],\n \"opens\": [[], [\"p\"]], \"extra\": 1}",
        );
        let e = run(&Command::Validate { input: p }).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
        assert!(e.to_string().contains("line 2"), "{e}");
        let p = tmp("syntax.json", "{\"points\": [\"p\",]}");
        let e = run(&Command::Validate { input: p }).unwrap_err();
        assert!(e.to_string().contains("column"), "{e}");
    }

    #[test]
    fn axiom_violation_fails_validation() {
        let p = tmp(
            "notop.json",
            r#"{"points":["p","q"],"opens":[[],["p"],["q"]]}"#,
        );
        let o = run(&Command::Validate { input: p }).unwrap();
        assert_eq!(o.code, EXIT_FAIL);
    }

    #[test]
    fn report_matches_the_generated_manifest() {
        let dir = std::env::temp_dir().join(format!("seqtop-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (m, f) = (dir.join("rp.json"), dir.join("rp.manifest.json"));
        let o = run(&Command::Gen {
            id: "removed-point".into(),
            params: vec![],
            out: Some(m.clone()),
            manifest: Some(f.clone()),
        })
        .unwrap();
        assert_eq!(o.code, EXIT_PASS);
        let o = run(&Command::Report {
            input: m,
            manifest: Some(f),
        })
        .unwrap();
        assert_eq!(o.code, EXIT_PASS, "{}", o.text);
        assert!(o.text.contains("claims hold"));
    }

    #[test]
    fn unknown_fixture_is_an_input_error() {
        let e = run(&Command::Gen {
            id: "nope".into(),
            params: vec![],
            out: None,
            manifest: None,
        })
        .unwrap_err();
        assert_eq!(exit_code(&e), EXIT_INPUT);
    }

    #[test]
    fn topology_dot_has_hasse_edges() {
        let g = crate::topology::GroundSet::new(["x", "y", "z"]).unwrap();
        let chain = FinTopology::from_opens(g, [0, 0b100, 0b110, 0b111]).unwrap();
        let d = topology_dot(&chain);
        assert!(d.contains("\"x\" -> \"y\"") && d.contains("\"y\" -> \"z\""));
        assert!(!d.contains("\"x\" -> \"z\""));
    }
}
