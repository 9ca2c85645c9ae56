//! Command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict (not glued, not equal, not in
//! the language, invalid input document, inconsistent scan), 2 input or
//! usage error, 3 undetermined (word-problem budget or certification depth
//! exhausted).
//!
//! Wherever a system is expected, either a catalog name (`gasket`) or a path
//! to a system JSON file is accepted.  Tuples may be given as a path, as
//! `<entry>/<tuple>` (`dendrite-3/grigorchuk`), as a tuple name of the
//! catalog system in use (`rho_phi`), or as `trivial`.  Diagrams may be given
//! as a path or as `<entry>/<diagram>` (`gasket/r`).

use crate::catalog;
use crate::contract::{scan_contractivity, Contractor, Parallelism, ScanOptions};
use crate::diagram::{Diagram, DiagramError};
use crate::hypergraph::{Hypergraph, HypergraphSpec};
use crate::replacement::{Expansion, System};
use crate::selfsim::{GeneratorVerdict, Triviality, Tuple, TupleError};
use crate::shiftlang::{Ctx, Ray};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(
    name = "hyperess",
    version,
    about = "Hyperedge replacement systems, gluing relations, self-similar diagram groups and contractivity scans",
    after_help = "Exit codes: 0 success, 1 negative verdict, 2 input error, 3 undetermined."
)]
pub struct Cli {
    /// Certification depth for boundary actions and compatibility checks.
    #[arg(long, global = true, default_value_t = crate::selfsim::DEFAULT_DEPTH)]
    pub depth: usize,
    /// Cap on the number of states explored by the word-problem oracle.
    #[arg(long, global = true, default_value_t = crate::selfsim::DEFAULT_BUDGET)]
    pub budget: usize,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for scans (output does not depend on it).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a hypergraph, replacement system, tuple or diagram document.
    Validate(ValidateArgs),
    /// Build an expansion from its leaf set.
    Expand(ExpandArgs),
    /// Language of addresses.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Gluing relation.
    #[command(subcommand)]
    Glue(GlueCmd),
    /// Points of the limit space.
    #[command(subcommand)]
    Point(PointCmd),
    /// Self-similar tuples: compatibility, word problem, actions.
    #[command(subcommand)]
    Tuple(TupleCmd),
    /// Diagrams (elements of the ESS group).
    #[command(subcommand)]
    Diagram(DiagramCmd),
    /// π-contraction sites and contractivity scans.
    #[command(subcommand)]
    Contract(ContractCmd),
    /// The flag complex of contraction classes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Built-in systems, tuples and diagrams.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Document path, or a catalog name for systems.
    pub input: String,
    /// What the document is; guessed from its fields when omitted.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// System a tuple or diagram refers to (diagrams default to their "system" field).
    #[arg(long)]
    pub system: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Hypergraph,
    System,
    Tuple,
    Diagram,
}

#[derive(Args, Debug)]
pub struct ExpansionInput {
    /// Expansion JSON file `{"system":..,"leaves":[..]}`.
    #[arg(long, conflicts_with = "leaves")]
    pub expansion: Option<PathBuf>,
    /// Comma-separated leaf addresses.
    #[arg(long, value_delimiter = ',')]
    pub leaves: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    pub system: String,
    #[command(flatten)]
    pub input: ExpansionInput,
    /// Additionally expand these leaves (comma-separated), in order.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum LangCmd {
    /// Membership of a finite address.
    Check { system: String, address: String },
    /// Number of addresses of each depth.
    Count {
        system: String,
        #[arg(long = "max-depth", default_value_t = 6)]
        max_depth: usize,
    },
    /// The color graph.
    Colorgraph {
        system: String,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Random eventually periodic addresses (uses --seed).
    Sample {
        system: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long = "max-prefix", default_value_t = 4)]
        max_prefix: usize,
        #[arg(long = "max-period", default_value_t = 3)]
        max_period: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum GlueCmd {
    /// The trimmed gluing automaton.
    Automaton {
        system: String,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Whether two eventually periodic addresses are glued.
    Decide { system: String, alpha: String, beta: String },
}

#[derive(Subcommand, Debug)]
pub enum PointCmd {
    /// Regular, singular or isolated.
    Classify { system: String, address: String },
}

#[derive(Subcommand, Debug)]
pub enum TupleCmd {
    /// Compatibility with the gluing relation and boundary groups.
    Check { system: String, tuple: String },
    /// Word problem for a group word of a color.
    Trivial { system: String, tuple: String, color: String, word: String },
    /// Action of a group word on an address of its cone.
    Act { system: String, tuple: String, color: String, word: String, address: String },
}

#[derive(Args, Debug)]
pub struct TupleOverride {
    /// Tuple to use instead of the diagram's "tuple" field.
    #[arg(long)]
    pub tuple: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum DiagramCmd {
    Validate {
        system: String,
        diagram: String,
        #[command(flatten)]
        t: TupleOverride,
    },
    /// Image of an eventually periodic address.
    Apply {
        system: String,
        diagram: String,
        address: String,
        #[command(flatten)]
        t: TupleOverride,
    },
    /// `f ∘ g` (apply `g` first).
    Compose {
        system: String,
        f: String,
        g: String,
        #[command(flatten)]
        t: TupleOverride,
    },
    Invert {
        system: String,
        diagram: String,
        #[command(flatten)]
        t: TupleOverride,
    },
    /// Equality as group elements.
    Equal {
        system: String,
        f: String,
        g: String,
        #[command(flatten)]
        t: TupleOverride,
    },
    /// Reduced representative.
    Minimize {
        system: String,
        diagram: String,
        #[command(flatten)]
        t: TupleOverride,
    },
}

#[derive(Subcommand, Debug)]
pub enum ContractCmd {
    /// Sites of one expansion.
    Sites {
        system: String,
        tuple: String,
        #[command(flatten)]
        input: ExpansionInput,
        /// Parallelism without the objecthood requirement.
        #[arg(long)]
        pairwise: bool,
    },
    /// Enumerate expansions and report those with too few parallel sites.
    Scan {
        /// System file or catalog name.
        system: String,
        /// Tuple file, `entry/tuple`, tuple name of the system, or `trivial`.
        tuple: String,
        /// Enumerate expansions with at most this many leaves.
        #[arg(long = "max-leaves")]
        max_leaves: usize,
        /// Required number of pairwise-parallel sites (the n of n-contractivity).
        #[arg(long)]
        target: usize,
        /// Also write the full JSON report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Parallelism without the objecthood requirement.
        #[arg(long)]
        pairwise: bool,
        /// Also build K_x for every expansion and check the connectivity bound.
        #[arg(long)]
        complex: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    /// Build K_x with its groundedness and connectivity bound.
    Build {
        system: String,
        tuple: String,
        #[command(flatten)]
        input: ExpansionInput,
        /// Parallelism without the objecthood requirement.
        #[arg(long)]
        pairwise: bool,
        /// Also write the complex as Graphviz DOT to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    List,
    /// Write the system, tuple and diagram files of an entry.
    Emit {
        name: String,
        #[arg(long)]
        dir: PathBuf,
    },
}

/// Result of a command before rendering.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
}

impl Outcome {
    fn ok(text: impl Into<String>, json: Value) -> Outcome {
        Outcome { code: 0, text: text.into(), json, dot: None }
    }

    fn verdict(yes: bool, text: impl Into<String>, json: Value) -> Outcome {
        Outcome { code: if yes { 0 } else { 1 }, text: text.into(), json, dot: None }
    }

    fn with_dot(mut self, dot: String) -> Outcome {
        self.dot = Some(dot);
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Undetermined(_) => 3,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn diagram_err(e: DiagramError) -> CliError {
    match e {
        DiagramError::Undetermined(_) => CliError::Undetermined(e.to_string()),
        e => CliError::Input(e.to_string()),
    }
}

/// Runs the command line and returns `(exit code, stdout, stderr)`.
pub fn run_capture<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 { (0, rendered, String::new()) } else { (2, String::new(), rendered) };
        }
    };
    if let Some(n) = cli.workers {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out.json).unwrap() + "\n",
                Format::Text => {
                    let mut t = out.text;
                    if !t.ends_with('\n') {
                        t.push('\n');
                    }
                    t
                }
                Format::Dot => match out.dot {
                    Some(d) => d,
                    None => return (2, String::new(), "this command has no DOT output\n".into()),
                },
            };
            (out.code, rendered, String::new())
        }
        Err(e) => (e.code(), String::new(), format!("error: {e}\n")),
    }
}

/// Runs the command line, printing to stdout/stderr; returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (code, out, err) = run_capture(args);
    print!("{out}");
    eprint!("{err}");
    code
}

// ---------------------------------------------------------------- resolving

struct SystemRef {
    system: System,
    /// Catalog entry name when the system came from the catalog.
    entry: Option<String>,
    /// Name written into output documents.
    name: String,
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve_system(r: &str) -> Result<SystemRef, CliError> {
    let path = Path::new(r);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(input)?;
        let system = System::from_json(&text).map_err(|e| CliError::Input(format!("{r}: {e}")))?;
        let name = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_else(|| r.to_string());
        return Ok(SystemRef { system, entry: None, name });
    }
    let e = catalog::entry(r).map_err(|e| CliError::Input(format!("{e} (and no such file)")))?;
    let system = System::compile(e.system).map_err(input)?;
    Ok(SystemRef { system, entry: Some(r.to_string()), name: r.to_string() })
}

fn resolve_tuple(s: &SystemRef, r: &str, cli: &Cli) -> Result<(Tuple, String), CliError> {
    let doc = if Path::new(r).is_file() {
        read_json(Path::new(r))?
    } else if let Some((entry, name)) = r.split_once('/') {
        catalog::entry(entry).and_then(|e| e.tuple(name)).map_err(input)?
    } else if r == "trivial" {
        json!({"groups": {}})
    } else {
        let entry = s
            .entry
            .as_ref()
            .ok_or_else(|| CliError::Input(format!("tuple `{r}` is neither a file nor a catalog reference")))?;
        catalog::entry(entry).and_then(|e| e.tuple(r)).map_err(input)?
    };
    let mut t = Tuple::from_json(&s.system, &doc).map_err(input)?;
    t.depth = cli.depth;
    t.budget = cli.budget;
    let name = if r.contains('/') || Path::new(r).is_file() || s.entry.is_none() {
        r.to_string()
    } else {
        format!("{}/{r}", s.name)
    };
    Ok((t, name))
}

fn resolve_diagram_doc(r: &str) -> Result<Value, CliError> {
    if Path::new(r).is_file() {
        return read_json(Path::new(r));
    }
    match r.split_once('/') {
        Some((entry, name)) => catalog::entry(entry).and_then(|e| e.diagram(name)).map_err(input),
        None => Err(CliError::Input(format!("diagram `{r}` is neither a file nor a catalog reference"))),
    }
}

/// Tuple for a diagram command: the override, or the first diagram's field.
fn diagram_tuple(s: &SystemRef, doc: &Value, over: &TupleOverride, cli: &Cli) -> Result<(Tuple, String), CliError> {
    let r = match &over.tuple {
        Some(t) => t.clone(),
        None => doc
            .get("tuple")
            .and_then(Value::as_str)
            .ok_or_else(|| CliError::Input("diagram has no \"tuple\" field; pass --tuple".into()))?
            .to_string(),
    };
    resolve_tuple(s, &r, cli)
}

fn resolve_expansion(s: &SystemRef, inp: &ExpansionInput) -> Result<Expansion, CliError> {
    let leaves: Vec<String> = match (&inp.expansion, &inp.leaves) {
        (Some(p), _) => {
            let v = read_json(p)?;
            v.get("leaves")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::Input("expansion JSON needs a \"leaves\" array".into()))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| CliError::Input("leaves must be strings".into())))
                .collect::<Result<_, _>>()?
        }
        (None, Some(l)) => l.clone(),
        (None, None) => return Ok(s.system.base_expansion()),
    };
    s.system.parse_expansion_leaves(&leaves).map_err(input)
}

fn parse_ray(s: &System, text: &str) -> Result<Ray, CliError> {
    s.parse_ray(text).map_err(|e| CliError::Input(format!("`{text}`: {e}")))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------- commands

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Validate(a) => validate(cli, a),
        Command::Expand(a) => expand(a),
        Command::Lang(c) => lang(cli, c),
        Command::Glue(c) => glue(c),
        Command::Point(PointCmd::Classify { system, address }) => {
            let s = resolve_system(system)?;
            let r = parse_ray(&s.system, address)?;
            let class = s.system.classify_point(&r);
            let text = match &class {
                crate::gluing::PointClass::Regular => "regular".to_string(),
                crate::gluing::PointClass::Singular { vertex, depth } => {
                    format!("singular (vertex {vertex} from depth {depth})")
                }
                crate::gluing::PointClass::Isolated { prefix } => format!("isolated (trivial cell {prefix})"),
            };
            Ok(Outcome::ok(text, json!({"address": address, "class": class})))
        }
        Command::Tuple(c) => tuple_cmd(cli, c),
        Command::Diagram(c) => diagram_cmd(cli, c),
        Command::Contract(c) => contract_cmd(cli, c),
        Command::Complex(ComplexCmd::Build { system, tuple, input, pairwise, dot }) => {
            let s = resolve_system(system)?;
            let (t, tname) = resolve_tuple(&s, tuple, cli)?;
            let x = resolve_expansion(&s, input)?;
            let mode = if *pairwise { Parallelism::Pairwise } else { Parallelism::Strict };
            let c = Contractor::new(&t, x.leaves.len(), mode);
            let a = c.analyze(&x).map_err(input_err)?;
            let k = c.build_complex(&a);
            let labels: Vec<String> = a
                .sites
                .iter()
                .map(|st| st.leaves.iter().map(|w| s.system.addr_string(w)).collect::<Vec<_>>().join(" "))
                .collect();
            let dot_text = k.to_dot(&labels);
            if let Some(p) = dot {
                write_file(p, &dot_text)?;
            }
            let conn = k.connectivity_bound(c.d).ok();
            let grounded = k.groundedness(c.d).ok();
            let text = match &conn {
                Some(cn) => format!(
                    "K: {} vertices, {} edges; ground simplex m={} (d={}); connectivity bound {}{}",
                    k.nvertices,
                    k.edges.len(),
                    cn.m,
                    cn.d,
                    cn.bound,
                    match cn.skeleton_connected {
                        Some(true) => "; 1-skeleton connected",
                        Some(false) => "; 1-skeleton DISCONNECTED",
                        None => "",
                    }
                ),
                None => "K is empty (no contraction sites)".to_string(),
            };
            Ok(Outcome::ok(
                text,
                json!({
                    "system": s.name, "tuple": tname, "parallelism": mode, "depth": t.depth,
                    "certified_depth": k.certified_depth,
                    "vertices": labels, "edges": k.edges, "rejected_pairs": k.rejected_pairs,
                    "ground_simplex": grounded.map(|g| g.simplex),
                    "connectivity": conn,
                }),
            )
            .with_dot(dot_text))
        }
        Command::Catalog(c) => catalog_cmd(c),
    }
}

fn input_err(e: crate::contract::ContractError) -> CliError {
    CliError::Input(e.to_string())
}

fn validate(cli: &Cli, a: &ValidateArgs) -> Result<Outcome, CliError> {
    let path = Path::new(&a.input);
    if !path.is_file() {
        // catalog system
        let s = resolve_system(&a.input)?;
        return Ok(system_report(&s));
    }
    let doc = read_json(path)?;
    let kind = a.kind.unwrap_or_else(|| {
        if doc.get("hyperedges").is_some() {
            Kind::Hypergraph
        } else if doc.get("rules").is_some() {
            Kind::System
        } else if doc.get("groups").is_some() {
            Kind::Tuple
        } else {
            Kind::Diagram
        }
    });
    match kind {
        Kind::Hypergraph => {
            let spec: HypergraphSpec = serde_json::from_value(doc).map_err(input)?;
            match Hypergraph::validate(spec) {
                Ok(h) => Ok(Outcome::ok(
                    format!("valid hypergraph: {} vertices, {} hyperedges", h.nverts(), h.nedges()),
                    json!({"valid": true, "canonical": h.canonical_string()}),
                )
                .with_dot(h.to_dot("hypergraph"))),
                Err(d) => Ok(Outcome::verdict(
                    false,
                    format!("invalid hypergraph: {d}"),
                    json!({"valid": false, "errors": d.0.iter().map(|e| e.to_string()).collect::<Vec<_>>()}),
                )),
            }
        }
        Kind::System => {
            let text = serde_json::to_string(&doc).unwrap();
            match System::from_json(&text) {
                Ok(system) => {
                    let name = path.file_stem().map(|s| s.to_string_lossy().to_string()).unwrap_or_default();
                    Ok(system_report(&SystemRef { system, entry: None, name }))
                }
                Err(e) => Ok(Outcome::verdict(false, format!("invalid system: {e}"), json!({"valid": false, "errors": [e]}))),
            }
        }
        Kind::Tuple => {
            let sref = a.system.as_deref().ok_or_else(|| CliError::Input("validating a tuple needs --system".into()))?;
            let s = resolve_system(sref)?;
            match Tuple::from_json(&s.system, &doc) {
                Ok(mut t) => {
                    t.depth = cli.depth;
                    t.budget = cli.budget;
                    Ok(compat_report(&s, &t, &a.input))
                }
                Err(e) => Ok(Outcome::verdict(false, format!("invalid tuple: {e}"), json!({"valid": false, "errors": [e.to_string()]}))),
            }
        }
        Kind::Diagram => {
            let sref = match &a.system {
                Some(s) => s.clone(),
                None => doc
                    .get("system")
                    .and_then(Value::as_str)
                    .ok_or_else(|| CliError::Input("diagram has no \"system\" field; pass --system".into()))?
                    .to_string(),
            };
            let s = resolve_system(&sref)?;
            let (t, _) = diagram_tuple(&s, &doc, &TupleOverride { tuple: None }, cli)?;
            let d = Diagram::from_json(&t, &doc);
            let res = d.and_then(|d| d.validate(&t).map(|_| d));
            match res {
                Ok(d) => Ok(Outcome::ok(
                    format!("valid diagram with {} leaves", d.nleaves()),
                    json!({"valid": true, "leaves": d.nleaves(), "depth": t.depth}),
                )),
                Err(DiagramError::Undetermined(w)) => Err(CliError::Undetermined(format!("budget exhausted after {} states", w.0))),
                Err(e) => Ok(Outcome::verdict(false, format!("invalid diagram: {e}"), json!({"valid": false, "errors": [e.to_string()]}))),
            }
        }
    }
}

fn system_report(s: &SystemRef) -> Outcome {
    let sys = &s.system;
    let c = &sys.class;
    let names = |set: &std::collections::BTreeSet<u32>| set.iter().map(|&k| sys.colors[k as usize].clone()).collect::<Vec<_>>();
    let class = format!("{:?}", c.class);
    let text = format!(
        "valid replacement system `{}`: {} colors, class {class}, trivial colors {:?}, isolated colors {:?}, max rule size {}",
        s.name,
        sys.ncolors(),
        names(&c.trivial),
        names(&c.isolated),
        c.max_rule_size
    );
    Outcome::ok(
        text,
        json!({
            "valid": true, "system": s.name, "colors": sys.colors,
            "orders": c.orders, "class": c.class,
            "trivial": names(&c.trivial), "isolated": names(&c.isolated),
            "max_rule_size": c.max_rule_size,
        }),
    )
    .with_dot(sys.to_dot())
}

fn compat_report(s: &SystemRef, t: &Tuple, tname: &str) -> Outcome {
    let rep = t.check_compatibility(t.depth);
    let mut lines = vec![];
    let mut gens = vec![];
    for (color, g, v) in &rep.generators {
        let (status, witness) = match v {
            GeneratorVerdict::Compatible { exact: true, .. } => ("compatible".to_string(), Value::Null),
            GeneratorVerdict::Compatible { exact: false, depth } => (format!("compatible to depth {depth}"), Value::Null),
            GeneratorVerdict::Incompatible { inverse, witness } => (
                format!("INCOMPATIBLE{}: {} ~ {}", if *inverse { " (inverse)" } else { "" }, witness.0, witness.1),
                json!([witness.0, witness.1]),
            ),
        };
        lines.push(format!("  {color}/{g}: {status}"));
        gens.push(json!({"color": color, "generator": g, "verdict": v, "witness": witness}));
    }
    let mut groups = vec![];
    for c in 0..s.system.ncolors() as u32 {
        let bg = t.boundary_perm_group(c, t.depth);
        lines.push(format!(
            "  boundary group of {}: order {}{}{}",
            s.system.colors[c as usize],
            bg.group.order(),
            if bg.exact { "" } else { " (depth-certified)" },
            if bg.excluded.is_empty() { String::new() } else { format!(", non-restricting: {:?}", bg.excluded) }
        ));
        groups.push(json!({
            "color": s.system.colors[c as usize],
            "elements": bg.group.elements.iter().map(|p| p.to_one_line()).collect::<Vec<_>>(),
            "excluded": bg.excluded, "exact": bg.exact,
        }));
    }
    let ok = rep.compatible();
    let head = if ok { "compatible tuple" } else { "incompatible tuple" };
    Outcome::verdict(
        ok,
        format!("{head} `{tname}` (depth {})\n{}", rep.depth, lines.join("\n")),
        json!({"tuple": tname, "compatible": ok, "exact": rep.exact(), "depth": rep.depth, "generators": gens, "boundary_groups": groups}),
    )
}

fn expand(a: &ExpandArgs) -> Result<Outcome, CliError> {
    let s = resolve_system(&a.system)?;
    let mut x = resolve_expansion(&s, &a.input)?;
    for w in &a.at {
        let addr = s.system.parse_addr(w).map_err(|e| CliError::Input(format!("`{w}`: {e}")))?;
        x = s.system.expand_hyperedge(&x, &addr).map_err(input)?;
    }
    let h = s.system.expansion_hypergraph(&x);
    let leaves: Vec<String> = x.leaves.iter().map(|w| s.system.addr_string(w)).collect();
    let mut doc = s.system.expansion_json(&x, &s.name);
    doc["hypergraph"] = serde_json::to_value(h.spec()).unwrap();
    Ok(Outcome::ok(
        format!("{} leaves: {}\n{}", leaves.len(), leaves.join(" "), h.canonical_string()),
        doc,
    )
    .with_dot(s.system.expansion_dot(&x)))
}

fn lang(cli: &Cli, c: &LangCmd) -> Result<Outcome, CliError> {
    match c {
        LangCmd::Check { system, address } => {
            let s = resolve_system(system)?;
            match s.system.language_check(address).map_err(input)? {
                None => Ok(Outcome::verdict(
                    true,
                    format!("{address} belongs to the language"),
                    json!({"address": address, "member": true}),
                )),
                Some(p) => Ok(Outcome::verdict(
                    false,
                    format!("{address} does not belong to the language: fails at position {p}"),
                    json!({"address": address, "member": false, "position": p}),
                )),
            }
        }
        LangCmd::Count { system, max_depth } => {
            let s = resolve_system(system)?;
            let counts = s.system.language_counts(*max_depth);
            let text = counts.iter().enumerate().map(|(i, n)| format!("depth {}: {n}", i + 1)).collect::<Vec<_>>().join("\n");
            Ok(Outcome::ok(text, json!({"counts": counts.iter().map(|n| n.to_string()).collect::<Vec<_>>()})))
        }
        LangCmd::Colorgraph { system, dot } => {
            let s = resolve_system(system)?;
            let g = s.system.color_graph();
            let d = g.to_dot();
            if let Some(p) = dot {
                write_file(p, &d)?;
            }
            Ok(Outcome::ok(d.clone(), serde_json::to_value(&g).unwrap()).with_dot(d))
        }
        LangCmd::Sample { system, count, max_prefix, max_period } => {
            let s = resolve_system(system)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let mut out = vec![];
            while out.len() < *count {
                let pre = rng.gen_range(1..=max_prefix + 1);
                let per = rng.gen_range(1..=(*max_period).max(1));
                let mut ctx = Ctx::Base;
                let mut word = vec![];
                for _ in 0..pre + per {
                    let x = rng.gen_range(0..s.system.nletters(ctx)) as u16;
                    word.push(x);
                    ctx = Ctx::Color(s.system.letter_color(ctx, x));
                }
                let period = word.split_off(pre);
                if let Some(r) = Ray::new(&s.system, Ctx::Base, word, period) {
                    out.push(s.system.ray_string(&r));
                }
            }
            Ok(Outcome::ok(out.join("\n"), json!({"seed": cli.seed, "addresses": out})))
        }
    }
}

fn glue(c: &GlueCmd) -> Result<Outcome, CliError> {
    match c {
        GlueCmd::Automaton { system, dot, json: json_path } => {
            let s = resolve_system(system)?;
            let a = s.system.gluing_automaton().map_err(input)?;
            let d = a.to_dot(&s.system);
            let j = a.to_json(&s.system);
            if let Some(p) = dot {
                write_file(p, &d)?;
            }
            if let Some(p) = json_path {
                write_file(p, &serde_json::to_string_pretty(&j).unwrap())?;
            }
            let labels: Vec<String> = (0..a.nstates()).map(|k| a.state_label(&s.system, k)).collect();
            Ok(Outcome::ok(
                format!("{} live states, {} transitions\n{}", a.nstates(), a.delta.len(), labels.join("\n")),
                j,
            )
            .with_dot(d))
        }
        GlueCmd::Decide { system, alpha, beta } => {
            let s = resolve_system(system)?;
            let a = s.system.gluing_automaton().map_err(input)?;
            let (x, y) = (parse_ray(&s.system, alpha)?, parse_ray(&s.system, beta)?);
            let g = a.decide(&x, &y);
            Ok(Outcome::verdict(
                g,
                if g { "glued" } else { "not glued" },
                json!({"alpha": alpha, "beta": beta, "glued": g}),
            ))
        }
    }
}

fn color_of(s: &System, name: &str) -> Result<u32, CliError> {
    s.color_id(name).ok_or_else(|| CliError::Input(format!("unknown color `{name}`")))
}

fn tuple_cmd(cli: &Cli, c: &TupleCmd) -> Result<Outcome, CliError> {
    match c {
        TupleCmd::Check { system, tuple } => {
            let s = resolve_system(system)?;
            let (t, name) = resolve_tuple(&s, tuple, cli)?;
            Ok(compat_report(&s, &t, &name))
        }
        TupleCmd::Trivial { system, tuple, color, word } => {
            let s = resolve_system(system)?;
            let (t, _) = resolve_tuple(&s, tuple, cli)?;
            let w = t.parse_word(color_of(&s.system, color)?, word).map_err(input)?;
            match t.is_trivial(&w) {
                Triviality::Yes => Ok(Outcome::verdict(true, "trivial", json!({"word": word, "trivial": true}))),
                Triviality::No(moved) => {
                    let m = s.system.word_string(Ctx::Color(w.color), &moved);
                    Ok(Outcome::verdict(
                        false,
                        format!("nontrivial: moves {m}"),
                        json!({"word": word, "trivial": false, "moved": m}),
                    ))
                }
                Triviality::Undetermined(n) => {
                    Err(CliError::Undetermined(format!("budget of {} states exhausted after {n}", t.budget)))
                }
            }
        }
        TupleCmd::Act { system, tuple, color, word, address } => {
            let s = resolve_system(system)?;
            let (t, _) = resolve_tuple(&s, tuple, cli)?;
            let k = color_of(&s.system, color)?;
            let w = t.parse_word(k, word).map_err(input)?;
            let r = s.system.parse_ray_from(Ctx::Color(k), address).map_err(input)?;
            let img = t.act_ray(&w, &r).map_err(|e| CliError::Undetermined(format!("{e:?}")))?;
            let out = s.system.ray_string(&img);
            Ok(Outcome::ok(out.clone(), json!({"word": word, "address": address, "image": out})))
        }
    }
}

fn load_diagram(s: &SystemRef, r: &str, over: &TupleOverride, cli: &Cli) -> Result<(Diagram, Tuple, String), CliError> {
    let doc = resolve_diagram_doc(r)?;
    let (t, tname) = diagram_tuple(s, &doc, over, cli)?;
    let d = Diagram::from_json(&t, &doc).map_err(diagram_err)?;
    Ok((d, t, tname))
}

fn diagram_out(s: &SystemRef, t: &Tuple, tname: &str, d: &Diagram) -> Outcome {
    let j = d.to_json(t, &s.name, tname);
    let lines: Vec<String> = j["map"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| format!("{} -> {} [{}] {}", m["from"].as_str().unwrap(), m["to"].as_str().unwrap(), m["label"].as_str().unwrap(), m["pi"]))
        .collect();
    Outcome::ok(lines.join("\n"), j)
}

fn diagram_cmd(cli: &Cli, c: &DiagramCmd) -> Result<Outcome, CliError> {
    match c {
        DiagramCmd::Validate { system, diagram, t } => {
            let s = resolve_system(system)?;
            let (d, tup, _) = load_diagram(&s, diagram, t, cli)?;
            match d.validate(&tup) {
                Ok(()) => Ok(Outcome::verdict(true, "valid", json!({"valid": true, "depth": tup.depth}))),
                Err(DiagramError::Undetermined(w)) => Err(CliError::Undetermined(format!("budget exhausted after {} states", w.0))),
                Err(e) => Ok(Outcome::verdict(false, format!("invalid: {e}"), json!({"valid": false, "errors": [e.to_string()]}))),
            }
        }
        DiagramCmd::Apply { system, diagram, address, t } => {
            let s = resolve_system(system)?;
            let (d, tup, _) = load_diagram(&s, diagram, t, cli)?;
            let r = parse_ray(&s.system, address)?;
            let img = d.apply(&tup, &r).map_err(diagram_err)?;
            let out = s.system.ray_string(&img);
            Ok(Outcome::ok(out.clone(), json!({"address": address, "image": out})))
        }
        DiagramCmd::Compose { system, f, g, t } => {
            let s = resolve_system(system)?;
            let (df, tup, tname) = load_diagram(&s, f, t, cli)?;
            let dg = Diagram::from_json(&tup, &resolve_diagram_doc(g)?).map_err(diagram_err)?;
            let h = df.compose(&tup, &dg).map_err(diagram_err)?;
            Ok(diagram_out(&s, &tup, &tname, &h))
        }
        DiagramCmd::Invert { system, diagram, t } => {
            let s = resolve_system(system)?;
            let (d, tup, tname) = load_diagram(&s, diagram, t, cli)?;
            Ok(diagram_out(&s, &tup, &tname, &d.invert(&tup)))
        }
        DiagramCmd::Equal { system, f, g, t } => {
            let s = resolve_system(system)?;
            let (df, tup, _) = load_diagram(&s, f, t, cli)?;
            let dg = Diagram::from_json(&tup, &resolve_diagram_doc(g)?).map_err(diagram_err)?;
            let eq = df.equal(&tup, &dg).map_err(diagram_err)?;
            Ok(Outcome::verdict(eq, if eq { "equal" } else { "not equal" }, json!({"equal": eq, "depth": tup.depth})))
        }
        DiagramCmd::Minimize { system, diagram, t } => {
            let s = resolve_system(system)?;
            let (d, tup, tname) = load_diagram(&s, diagram, t, cli)?;
            let m = d.minimize(&tup);
            let mut out = diagram_out(&s, &tup, &tname, &m);
            if !m.certificate.is_empty() {
                out.text.push_str(&format!("\n{}", m.certificate.join("\n")));
                out.json["certificate"] = json!(m.certificate);
            }
            Ok(out)
        }
    }
}

fn contract_cmd(cli: &Cli, c: &ContractCmd) -> Result<Outcome, CliError> {
    match c {
        ContractCmd::Sites { system, tuple, input, pairwise } => {
            let s = resolve_system(system)?;
            let (t, tname) = resolve_tuple(&s, tuple, cli)?;
            let x = resolve_expansion(&s, input)?;
            let mode = if *pairwise { Parallelism::Pairwise } else { Parallelism::Strict };
            let c = Contractor::new(&t, x.leaves.len(), mode);
            let a = c.analyze(&x).map_err(input_err)?;
            let p = c.max_parallel(&a);
            let mut lines = vec![format!("{} sites, max_parallel {} (greedy {})", a.sites.len(), p.size, p.greedy)];
            for (i, st) in a.sites.iter().enumerate() {
                let leaves: Vec<String> = st.leaves.iter().map(|w| s.system.addr_string(w)).collect();
                let mark = if p.witness.contains(&i) { "*" } else { " " };
                lines.push(format!("{mark} [{}] {}", s.system.colors[st.color as usize], leaves.join(" ")));
            }
            Ok(Outcome::ok(
                lines.join("\n"),
                json!({
                    "system": s.name, "tuple": tname, "parallelism": mode, "depth": t.depth,
                    "boundary_groups_exact": c.groups_exact,
                    "sites": a.sites.iter().map(|st| st.to_json(&s.system)).collect::<Vec<_>>(),
                    "rejected": a.rejected,
                    "max_parallel": p.size, "greedy": p.greedy, "witness": p.witness,
                }),
            ))
        }
        ContractCmd::Scan { system, tuple, max_leaves, target, report, pairwise, complex } => {
            let s = resolve_system(system)?;
            let (t, tname) = resolve_tuple(&s, tuple, cli)?;
            let mode = if *pairwise { Parallelism::Pairwise } else { Parallelism::Strict };
            let r = scan_contractivity(
                &t,
                &ScanOptions { max_leaves: *max_leaves, target: *target, mode, with_complex: *complex },
            );
            let mut j = r.to_json(&s.name);
            j["tuple"] = json!(tname);
            if let Some(p) = report {
                write_file(p, &serde_json::to_string_pretty(&j).unwrap())?;
            }
            let mut by_size: std::collections::BTreeMap<usize, usize> = Default::default();
            for e in r.exception_entries() {
                *by_size.entry(e.nleaves).or_default() += 1;
            }
            let mut text = format!(
                "{} expansions ({} classes) up to {} leaves, d = {}, {} parallelism\nexceptions (max_parallel < {}) by size: {:?}\n{}",
                r.entries.len(),
                r.classes,
                r.max_leaves,
                r.d,
                mode.name(),
                r.target,
                by_size,
                r.verdict()
            );
            if *complex {
                text.push_str(&format!("\ncomplex-bound contradictions: {}", r.complex_contradictions));
            }
            Ok(Outcome::verdict(r.consistent, text, j))
        }
    }
}

fn catalog_cmd(c: &CatalogCmd) -> Result<Outcome, CliError> {
    match c {
        CatalogCmd::List => {
            let names = catalog::list();
            let mut lines = vec![];
            let mut items = vec![];
            for n in &names {
                let e = catalog::entry(n).unwrap();
                let tuples: Vec<&String> = e.tuples.iter().map(|(t, _)| t).collect();
                let diagrams: Vec<&String> = e.diagrams.iter().map(|(d, _)| d).collect();
                lines.push(format!("{n}: tuples {tuples:?}, diagrams {diagrams:?}"));
                items.push(json!({"name": n, "tuples": tuples, "diagrams": diagrams, "class": e.class, "notes": e.notes}));
            }
            Ok(Outcome::ok(lines.join("\n"), json!(items)))
        }
        CatalogCmd::Emit { name, dir } => {
            let e = catalog::entry(name).map_err(input)?;
            std::fs::create_dir_all(dir).map_err(input)?;
            let mut files = vec![];
            let sys_path = dir.join(format!("{name}.json"));
            write_file(&sys_path, &e.system_json())?;
            files.push(sys_path);
            for (t, v) in &e.tuples {
                let p = dir.join(format!("{name}.tuple.{t}.json"));
                write_file(&p, &serde_json::to_string_pretty(v).unwrap())?;
                files.push(p);
            }
            for (d, v) in &e.diagrams {
                let p = dir.join(format!("{name}.diagram.{d}.json"));
                write_file(&p, &serde_json::to_string_pretty(v).unwrap())?;
                files.push(p);
            }
            let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
            Ok(Outcome::ok(files.join("\n"), json!({"entry": name, "files": files})))
        }
    }
}

impl From<TupleError> for CliError {
    fn from(e: TupleError) -> Self {
        CliError::Input(e.to_string())
    }
}
