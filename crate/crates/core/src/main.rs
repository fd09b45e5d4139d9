use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hardpaths::cnf::CnfFormula;
use hardpaths::gadgets::{standard, GadgetKind};
use hardpaths::harness::{self, HarnessConfig, Profile};
use hardpaths::io::{self, DotOptions, InstanceDocument, LayoutMeta, RoutingDocument};
use hardpaths::reduction::directed::{self, DirectedCompiled};
use hardpaths::reduction::undirected::{self, CompileOptions, Compiled};
use hardpaths::solver::{self, Engine, Mode, SearchPolicy, Status};
use hardpaths::{validate_routing, Error, Result};

/// Exit codes shared by every subcommand.
const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "hardpaths", version, about = "Compile CNF formulas into disjoint-paths instances and check them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a DIMACS formula into the planar undirected instance.
    CompileUndirected {
        formula: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Accept formulas outside the 3-CNF regime with at least three
        /// clauses and variables.
        #[arg(long)]
        relaxed: bool,
    },
    /// Compile a DIMACS formula into the acyclic directed instance.
    CompileDirected {
        formula: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Merge t1 into s2 and t2 into s1.
        #[arg(long, conflicts_with = "corollary")]
        identify_terminals: bool,
        /// Replace the column demand by wrap arcs and a single path.
        #[arg(long)]
        corollary: bool,
    },
    /// Build the routing a satisfying assignment describes.
    Witness {
        formula: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Use the directed construction.
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        relaxed: bool,
        /// Comma-separated literals, one per variable (e.g. `1,-2,3`);
        /// defaults to the first satisfying assignment.
        #[arg(long, allow_hyphen_values = true)]
        assignment: Option<String>,
    },
    /// Solve an instance document.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, value_enum, default_value = "witness")]
        mode: ModeArg,
        /// Write the result here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run harness cases.
    Verify {
        /// Case ids; the flag takes several values and may be repeated.
        #[arg(long = "case", num_args = 1.., required_unless_present = "all", conflicts_with = "all")]
        cases: Vec<String>,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "full")]
        profile: Profile,
        #[command(flatten)]
        search: SearchArgs,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Export a gadget or an instance document as Graphviz DOT.
    ExportDot {
        /// Instance document; omit when using --gadget.
        #[arg(required_unless_present = "gadget", conflicts_with = "gadget")]
        instance: Option<PathBuf>,
        /// Gadget name (XCH, LIC, YES, NO, ON, IF, LL, TT, VV).
        #[arg(long)]
        gadget: Option<String>,
        /// Routing document to overlay.
        #[arg(long)]
        routing: Option<PathBuf>,
        /// Draw cell clusters from the layout metadata.
        #[arg(long)]
        clusters: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print layout numbers for a formula or an instance document.
    Stats {
        input: PathBuf,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        relaxed: bool,
    },
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Node budget (conflicts for the SAT engine); accepts forms like 1e6.
    /// Defaults to HARDPATHS_BUDGET, then the built-in default.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, value_enum, default_value = "backtrack")]
    engine: EngineArg,
    /// Disable capacity pruning on registered cuts.
    #[arg(long)]
    no_pruning: bool,
}

impl SearchArgs {
    fn budget(&self) -> Result<u64> {
        match &self.budget {
            Some(b) => solver::parse_budget(b),
            None => Ok(solver::budget_from_env()?.unwrap_or(solver::DEFAULT_BUDGET)),
        }
    }

    fn policy(&self, mode: Mode) -> Result<SearchPolicy> {
        Ok(SearchPolicy::new(mode)
            .budget(self.budget()?)
            .threads(self.threads.max(1))
            .engine(self.engine.into())
            .pruning(!self.no_pruning))
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum EngineArg {
    Backtrack,
    Sat,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Backtrack => Engine::Backtrack,
            EngineArg::Sat => Engine::Sat,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Decide,
    Witness,
    Enumerate,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Decide => Mode::Decide,
            ModeArg::Witness => Mode::Witness,
            ModeArg::Enumerate => Mode::Enumerate,
        }
    }
}

/// Writes to standard output; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&(io::to_json(value)? + "\n"));
    Ok(())
}

fn undirected_meta(c: &Compiled) -> LayoutMeta {
    let g = &c.instance.graph;
    let lay = &c.layout;
    let mut m = LayoutMeta::new("undirected")
        .parameter("n", lay.n)
        .parameter("variables", lay.variables)
        .parameter("q", lay.q)
        .parameter("p", lay.p)
        .terminal("x", g, lay.x)
        .terminal("x'", g, lay.x_prime)
        .terminal("y", g, lay.y)
        .terminal("y'", g, lay.y_prime)
        .with_cells(&c.grid)
        .with_cuts((1..lay.n).map(|i| c.grid.columns_upto(i)).collect());
    for (i, (&w, &w2)) in lay.w.iter().zip(&lay.w_prime).enumerate() {
        m = m.terminal(&format!("w{}", i + 1), g, w).terminal(&format!("w'{}", i + 1), g, w2);
    }
    m
}

fn directed_meta(c: &DirectedCompiled) -> LayoutMeta {
    let g = &c.instance.graph;
    let lay = &c.layout;
    let mut cuts: Vec<_> = (1..lay.columns).map(|i| c.grid.columns_upto(i)).collect();
    cuts.extend((1..lay.rows).map(|j| c.grid.rows_upto(j)));
    LayoutMeta::new("directed")
        .parameter("n", lay.n)
        .parameter("variables", lay.variables)
        .parameter("columns", lay.columns)
        .parameter("rows", lay.rows)
        .terminal("s1", g, lay.s1)
        .terminal("s2", g, lay.s2)
        .terminal("t1", g, lay.t1)
        .terminal("t2", g, lay.t2)
        .with_cells(&c.grid)
        .with_cuts(cuts)
}

/// Parses `1,-2,3` into one value per variable.
fn parse_assignment(text: &str, f: &CnfFormula) -> Result<Vec<bool>> {
    let mut a: Vec<Option<bool>> = vec![None; f.num_vars as usize];
    for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let l: i64 = tok.parse().map_err(|_| Error::Input(format!("bad literal `{tok}` in assignment")))?;
        let v = l.unsigned_abs() as usize;
        if l == 0 || v > a.len() {
            return Err(Error::Input(format!("literal `{tok}` names no variable")));
        }
        if a[v - 1].replace(l > 0).is_some() {
            return Err(Error::Input(format!("variable {v} assigned twice")));
        }
    }
    a.iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::Input(format!("variable {} is unassigned", i + 1))))
        .collect()
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => io::write_atomic(p, text.as_bytes()),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::CompileUndirected { formula, output, relaxed } => {
            let f = io::read_formula(&formula)?;
            let c = undirected::compile(&f, CompileOptions { relaxed })?;
            io::write_instance(&output, &InstanceDocument::new(&c.instance, Some(undirected_meta(&c))))?;
            print_json(&undirected::stats(&c))?;
            Ok(PASS)
        }
        Command::CompileDirected { formula, output, identify_terminals, corollary } => {
            let f = io::read_formula(&formula)?;
            let c = directed::compile_full(&f)?;
            let doc = if identify_terminals {
                let id = directed::identify_terminals(&c)?;
                let g = &id.instance.graph;
                let meta = LayoutMeta::new("directed-identified")
                    .parameter("columns", c.layout.columns)
                    .parameter("rows", c.layout.rows)
                    .terminal("s1", g, id.s1)
                    .terminal("s2", g, id.s2);
                InstanceDocument::new(&id.instance, Some(meta))
            } else if corollary {
                let w = directed::corollary_transform(&c)?;
                let meta = LayoutMeta::new("directed-wrapped")
                    .parameter("columns", c.layout.columns)
                    .parameter("rows", c.layout.rows)
                    .parameter("wrap_arcs", w.wrap_arcs.len());
                InstanceDocument::new(&w.instance, Some(meta))
            } else {
                InstanceDocument::new(&c.instance, Some(directed_meta(&c)))
            };
            io::write_instance(&output, &doc)?;
            print_json(&directed::directed_stats(&c))?;
            Ok(PASS)
        }
        Command::Witness { formula, output, directed, relaxed, assignment } => {
            let f = io::read_formula(&formula)?;
            let a = match assignment {
                Some(t) => parse_assignment(&t, &f)?,
                None => match f.first_satisfying() {
                    Some(a) => a,
                    None => {
                        eprintln!("formula is unsatisfiable; no witness exists");
                        return Ok(FAIL);
                    }
                },
            };
            if !f.eval(&a) {
                eprintln!("the assignment does not satisfy the formula");
                return Ok(FAIL);
            }
            let (inst, routing) = if directed {
                let c = directed::compile_full(&f)?;
                let r = directed::witness_directed(&c, &f, &a)?;
                (c.instance, r)
            } else {
                let c = undirected::compile(&f, CompileOptions { relaxed })?;
                let r = undirected::witness(&c, &f, &a)?;
                (c.instance, r)
            };
            let report = validate_routing(&inst, &routing);
            io::write_routing(&output, &RoutingDocument::new(&routing).with_walks(&inst.graph)?)?;
            print_json(&report)?;
            Ok(if report.is_valid() { PASS } else { FAIL })
        }
        Command::Solve { instance, search, mode, output } => {
            let doc = io::read_instance(&instance)?;
            let inst = doc.instance()?;
            let cuts = doc.cut_set(&inst)?;
            let res = solver::solve_with_cuts(&inst, &search.policy(mode.into())?, &cuts)?;
            write_or_print(output.as_deref(), &(io::to_json(&res)? + "\n"))?;
            Ok(if res.status == Status::BudgetExceeded { INCONCLUSIVE } else { PASS })
        }
        Command::Verify { cases, all, profile, search, json } => {
            let cfg = HarnessConfig {
                profile,
                budget: search.budget()?,
                threads: search.threads.max(1),
                pruning: !search.no_pruning,
                ..Default::default()
            };
            let summary = if all {
                harness::run_all(&cfg)?
            } else {
                let ids: Vec<&str> = cases.iter().map(String::as_str).collect();
                if let Some(bad) = ids.iter().find(|id| !harness::CASE_IDS.contains(id)) {
                    return Err(Error::Input(format!(
                        "unknown case `{bad}`; known: {}",
                        harness::CASE_IDS.join(", ")
                    )));
                }
                harness::run_selected(&ids, &cfg)?
            };
            if json {
                print_json(&summary)?;
            } else {
                emit(&summary.table());
            }
            Ok(summary.exit_code() as u8)
        }
        Command::ExportDot { instance, gadget, routing, clusters, output } => {
            let mut opts = DotOptions { mark_crossing: true, ..Default::default() };
            let graph = if let Some(name) = gadget {
                let kind: GadgetKind = name.parse()?;
                let gd = standard(kind);
                opts.name = kind.to_string();
                opts.highlight = gd.ports.values().copied().collect();
                gd.graph.clone()
            } else {
                let path = instance.expect("clap requires an instance without --gadget");
                let doc = io::read_instance(&path)?;
                if let Some(meta) = &doc.layout {
                    opts.name = meta.kind.clone();
                    opts.highlight = meta.terminals.values().filter_map(|n| doc.graph.vertex(n)).collect();
                    if clusters {
                        opts.cells = meta.cells.clone();
                    }
                }
                doc.graph
            };
            if let Some(r) = routing {
                opts.routing = Some(io::read_routing(&r)?.routing);
            }
            write_or_print(output.as_deref(), &io::export_dot(&graph, &opts))?;
            Ok(PASS)
        }
        Command::Stats { input, directed, relaxed } => {
            let text = io::read_text(&input)?;
            if text.trim_start().starts_with('{') {
                let doc = io::parse_instance_document(&text)?;
                print_json(&DocumentStats::of(&doc))?;
            } else {
                let f = io::parse_dimacs(&text)?;
                if directed {
                    print_json(&directed::directed_stats(&directed::compile_full(&f)?))?;
                } else {
                    print_json(&undirected::stats(&undirected::compile(&f, CompileOptions { relaxed })?))?;
                }
            }
            Ok(PASS)
        }
    }
}

#[derive(Serialize)]
struct DocumentStats {
    kind: Option<String>,
    parameters: std::collections::BTreeMap<String, u64>,
    vertices: usize,
    edges: usize,
    directed: bool,
    demands: Vec<u32>,
}

impl DocumentStats {
    fn of(doc: &InstanceDocument) -> Self {
        DocumentStats {
            kind: doc.layout.as_ref().map(|l| l.kind.clone()),
            parameters: doc.layout.as_ref().map(|l| l.parameters.clone()).unwrap_or_default(),
            vertices: doc.graph.vertex_count(),
            edges: doc.graph.edge_count(),
            directed: doc.graph.is_directed(),
            demands: doc.demands.iter().map(|d| d.count).collect(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Input(_) | Error::Parse { .. } | Error::Precondition(_) => USAGE,
                Error::Budget(_) => INCONCLUSIVE,
                _ => FAIL,
            })
        }
    }
}
