//! The `cwdiv` command line.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::corpus::random_decomposition;
use crate::engine::{extract_solution, DpCore, Engine, EngineError};
use crate::graph::{gen_clique, gen_complete_bipartite, gen_path, parse_decomposition, parse_graph, ColoredGraph, CwDecomposition};
use crate::measures::{venn_div, VennMeasure};
use crate::mso::{model_check, parse_formula, Formula, MsoCore};
use crate::oracle::{brute_best_diversity, brute_solutions, is_solution, Objective, ProblemSpec};
use crate::problems::{min_vc, DsCore, VcCore};
use crate::vertex_set::VertexSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cwdiv", version, about = "Diverse solutions on graphs given with a cliquewidth decomposition")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for result tables.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Worker threads for the dynamic programs.
    #[arg(long, default_value_t = 1, global = true)]
    threads: usize,
    /// Re-check results against the brute-force oracle.
    #[arg(long, global = true)]
    verify: bool,
    /// Fill the wall_ms column.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a decomposition and summarize its graph.
    Check { decomp: PathBuf },
    /// Find one solution.
    Solve {
        #[arg(long)]
        decomp: PathBuf,
        /// vc:<k>, ds:<k>, minvc:<k> or mso:<file>.
        #[arg(long)]
        problem: String,
    },
    /// Maximize a Venn diversity measure over r solutions.
    Diverse {
        #[arg(long)]
        decomp: PathBuf,
        /// Comma-separated selectors, one per solution.
        #[arg(long)]
        problems: String,
        /// sum, star or table:<file>.
        #[arg(long, default_value = "sum")]
        measure: String,
        #[arg(long, default_value_t = 0)]
        d: u64,
    },
    /// Find r solutions with all pairwise Hamming distances at least d.
    DiverseMin {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        problems: String,
        #[arg(long, default_value_t = 0)]
        d: u64,
    },
    /// Brute-force optimum over all ordered tuples of solutions.
    Oracle {
        #[arg(long, conflicts_with = "decomp", required_unless_present = "decomp")]
        graph: Option<PathBuf>,
        #[arg(long)]
        decomp: Option<PathBuf>,
        /// Selectors; `minds` is also accepted here.
        #[arg(long)]
        problems: String,
        /// sum, star, table:<file> or min.
        #[arg(long, default_value = "sum")]
        measure: String,
        #[arg(long, default_value_t = 0)]
        d: u64,
    },
    /// Print a generated decomposition.
    Gen {
        #[arg(value_enum)]
        family: Family,
        n: usize,
        /// Second size (biclique) or width (random).
        m: Option<usize>,
        /// Seed for `random`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether the graph satisfies a closed formula.
    MsoCheck {
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        formula: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Path,
    Clique,
    Biclique,
    Random,
}

/// A failed run: message and exit code.
#[derive(Debug)]
pub struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn input(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_INPUT,
            msg: msg.to_string(),
        }
    }

    fn internal(msg: impl fmt::Display) -> Self {
        Self {
            code: EXIT_INTERNAL,
            msg: msg.to_string(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Overflow | EngineError::CoreContract(_) => Self::internal(e),
            _ => Self::input(e),
        }
    }
}

/// One problem selector.
#[derive(Clone, Debug)]
pub enum Selector {
    Vc(usize),
    Ds(usize),
    MinVc(usize),
    MinDs,
    Mso(Formula),
}

fn parse_k(s: &str, what: &str) -> Result<usize, Failure> {
    s.parse().map_err(|_| Failure::input(format!("invalid bound in `{what}`")))
}

pub fn parse_selector(s: &str) -> Result<Selector, Failure> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    match kind {
        "vc" => Ok(Selector::Vc(parse_k(arg, s)?)),
        "ds" => Ok(Selector::Ds(parse_k(arg, s)?)),
        "minvc" => Ok(Selector::MinVc(parse_k(arg, s)?)),
        "minds" if arg.is_empty() => Ok(Selector::MinDs),
        "mso" if !arg.is_empty() => {
            let text = std::fs::read_to_string(arg).map_err(|e| Failure::input(format!("{arg}: {e}")))?;
            Ok(Selector::Mso(parse_formula(&text).map_err(|e| Failure::input(format!("{arg}: {e}")))?))
        }
        _ => Err(Failure::input(format!("unknown problem selector `{s}`"))),
    }
}

fn parse_selectors(s: &str) -> Result<Vec<Selector>, Failure> {
    s.split(',').map(|p| parse_selector(p.trim())).collect()
}

impl Selector {
    fn spec(&self) -> Result<ProblemSpec, Failure> {
        match self {
            Selector::Vc(k) => Ok(ProblemSpec::VertexCover(*k)),
            Selector::Ds(k) => Ok(ProblemSpec::DominatingSet(*k)),
            Selector::MinDs => Ok(ProblemSpec::MinimalDominatingSet),
            Selector::Mso(f) => Ok(ProblemSpec::Mso(f.clone())),
            Selector::MinVc(_) => Err(Failure::input("`minvc` is only available for `solve`")),
        }
    }

    fn core(&self, d: &CwDecomposition) -> Result<Box<dyn DpCore>, Failure> {
        match self {
            Selector::Vc(k) => Ok(Box::new(VcCore::new(*k, d))),
            Selector::Ds(k) => Ok(Box::new(DsCore::new(*k, d))),
            Selector::Mso(f) => Ok(Box::new(MsoCore::new(f, d).map_err(Failure::input)?)),
            Selector::MinVc(_) => Err(Failure::input("`minvc` is only available for `solve`")),
            Selector::MinDs => Err(Failure::input("`minds` is only available for `oracle`")),
        }
    }
}

fn parse_measure(s: &str, r: usize) -> Result<VennMeasure, Failure> {
    let m = match s {
        "sum" => VennMeasure::divsum(r),
        "star" => VennMeasure::divstar(r),
        _ => match s.strip_prefix("table:") {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
                VennMeasure::parse_table(&text)
            }
            None => return Err(Failure::input(format!("unknown measure `{s}`"))),
        },
    }
    .map_err(Failure::input)?;
    if m.arity() != r {
        return Err(Failure::input(format!("measure arity {} does not match {r} problems", m.arity())));
    }
    Ok(m)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_decomposition(path: &Path) -> Result<CwDecomposition, Failure> {
    parse_decomposition(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

/// One result-table row.
#[derive(Debug, Serialize)]
pub struct Row {
    pub instance: String,
    pub r: usize,
    pub measure: String,
    pub d: Option<u64>,
    pub feasible: bool,
    pub best_value: Option<u64>,
    pub solutions: Option<Vec<Vec<String>>>,
    pub wall_ms: Option<u64>,
}

fn names(g: &ColoredGraph, sets: &[VertexSet]) -> Vec<Vec<String>> {
    sets.iter()
        .map(|s| g.set_names(s).into_iter().map(String::from).collect())
        .collect()
}

fn write_rows(rows: &[Row], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, rows).map_err(Failure::internal)?;
            writeln!(out).map_err(Failure::internal)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["instance", "r", "measure", "d", "feasible", "best_value", "solutions", "wall_ms"])
                .map_err(Failure::internal)?;
            let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            for row in rows {
                let solutions = row
                    .solutions
                    .as_ref()
                    .map(|s| s.iter().map(|v| v.join(" ")).collect::<Vec<_>>().join(";"))
                    .unwrap_or_default();
                w.write_record([
                    row.instance.clone(),
                    row.r.to_string(),
                    row.measure.clone(),
                    opt(row.d),
                    row.feasible.to_string(),
                    opt(row.best_value),
                    solutions,
                    opt(row.wall_ms),
                ])
                .map_err(Failure::internal)?;
            }
            w.flush().map_err(Failure::internal)?;
        }
    }
    Ok(())
}

struct Ctx {
    engine: Engine,
    verify: bool,
    timing: bool,
    start: Instant,
}

impl Ctx {
    fn wall(&self) -> Option<u64> {
        self.timing.then(|| self.start.elapsed().as_millis() as u64)
    }
}

/// Oracle lists for the selectors, checking the oracle's size limits.
fn oracle_lists(selectors: &[Selector], g: &ColoredGraph) -> Result<Vec<Vec<VertexSet>>, Failure> {
    selectors
        .iter()
        .map(|s| brute_solutions(&s.spec()?, g).map_err(Failure::input))
        .collect()
}

fn check_solutions(selectors: &[Selector], g: &ColoredGraph, sets: &[VertexSet]) -> Result<(), Failure> {
    for (s, set) in selectors.iter().zip(sets) {
        if !is_solution(&s.spec()?, g, set).map_err(Failure::internal)? {
            return Err(Failure::internal(format!("verification failed: {:?} is not a solution", g.set_names(set))));
        }
    }
    Ok(())
}

fn cmd_diverse(ctx: &Ctx, decomp: &Path, problems: &str, measure: &str, d: u64) -> Result<Row, Failure> {
    let dec = load_decomposition(decomp)?;
    let selectors = parse_selectors(problems)?;
    let r = selectors.len();
    let f = parse_measure(measure, r)?;
    let cores = selectors.iter().map(|s| s.core(&dec)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&dyn DpCore> = cores.iter().map(|c| c.as_ref()).collect();
    let out = ctx.engine.diverse_solve(&refs, &f, d, &dec)?;
    let g = dec.evaluate();
    if ctx.verify {
        let lists = oracle_lists(&selectors, &g)?;
        let best = brute_best_diversity(&lists, &Objective::Venn(f.clone()), &g.all_vertices()).map_err(Failure::input)?;
        if best.as_ref().map(|b| b.0) != out.best_value {
            return Err(Failure::internal(format!(
                "verification failed: engine {:?}, oracle {:?}",
                out.best_value,
                best.map(|b| b.0)
            )));
        }
        if let Some(sets) = &out.solutions {
            check_solutions(&selectors, &g, sets)?;
            let refs: Vec<&VertexSet> = sets.iter().collect();
            if Some(venn_div(&f, &refs, &g.all_vertices()).map_err(Failure::internal)?) != out.best_value {
                return Err(Failure::internal("verification failed: returned tuple does not attain the optimum"));
            }
        }
    }
    Ok(Row {
        instance: instance_name(decomp),
        r,
        measure: f.name().to_owned(),
        d: Some(d),
        feasible: out.feasible,
        best_value: out.best_value,
        solutions: out.solutions.map(|s| names(&g, &s)),
        wall_ms: ctx.wall(),
    })
}

fn cmd_diverse_min(ctx: &Ctx, decomp: &Path, problems: &str, d: u64) -> Result<Row, Failure> {
    let dec = load_decomposition(decomp)?;
    let selectors = parse_selectors(problems)?;
    let cores = selectors.iter().map(|s| s.core(&dec)).collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&dyn DpCore> = cores.iter().map(|c| c.as_ref()).collect();
    let out = ctx.engine.min_diverse_solve(&refs, d, &dec)?;
    let g = dec.evaluate();
    if ctx.verify {
        let lists = oracle_lists(&selectors, &g)?;
        let best = brute_best_diversity(&lists, &Objective::Min, &g.all_vertices()).map_err(Failure::input)?;
        let expected = best.is_some_and(|b| b.0 >= d);
        if expected != out.feasible {
            return Err(Failure::internal(format!(
                "verification failed: engine feasible={}, oracle feasible={expected}",
                out.feasible
            )));
        }
        if let Some(sets) = &out.solutions {
            check_solutions(&selectors, &g, sets)?;
            let refs: Vec<&VertexSet> = sets.iter().collect();
            if crate::measures::div_min(&refs).map_err(Failure::internal)? < d {
                return Err(Failure::internal("verification failed: returned tuple violates the distance bound"));
            }
        }
    }
    Ok(Row {
        instance: instance_name(decomp),
        r: selectors.len(),
        measure: "min".into(),
        d: Some(d),
        feasible: out.feasible,
        best_value: None,
        solutions: out.solutions.map(|s| names(&g, &s)),
        wall_ms: ctx.wall(),
    })
}

fn cmd_solve(ctx: &Ctx, decomp: &Path, problem: &str) -> Result<Row, Failure> {
    let dec = load_decomposition(decomp)?;
    let selector = parse_selector(problem)?;
    let g = dec.evaluate();
    let solution = match &selector {
        Selector::MinVc(k) => min_vc(&dec, *k, &ctx.engine)?,
        _ => {
            let core = selector.core(&dec)?;
            match ctx.engine.solve_single(core.as_ref(), &dec)?.witness {
                Some(w) => Some(extract_solution(core.as_ref(), &dec, &w)?),
                None => None,
            }
        }
    };
    if ctx.verify {
        let spec = match &selector {
            Selector::MinVc(k) => ProblemSpec::VertexCover(*k),
            s => s.spec()?,
        };
        let all = brute_solutions(&spec, &g).map_err(Failure::input)?;
        if all.is_empty() != solution.is_none() {
            return Err(Failure::internal("verification failed: feasibility differs from the oracle"));
        }
        if let Some(s) = &solution {
            if !all.contains(s) {
                return Err(Failure::internal("verification failed: returned set is not a solution"));
            }
            if matches!(selector, Selector::MinVc(_)) && all.iter().any(|t| t.len() < s.len()) {
                return Err(Failure::internal("verification failed: a smaller cover exists"));
            }
        }
    }
    Ok(Row {
        instance: instance_name(decomp),
        r: 1,
        measure: String::new(),
        d: None,
        feasible: solution.is_some(),
        best_value: solution.as_ref().map(|s| s.len() as u64),
        solutions: solution.map(|s| names(&g, &[s])),
        wall_ms: ctx.wall(),
    })
}

fn cmd_oracle(
    ctx: &Ctx,
    graph: Option<&Path>,
    decomp: Option<&Path>,
    problems: &str,
    measure: &str,
    d: u64,
) -> Result<Row, Failure> {
    let (g, path) = match (graph, decomp) {
        (Some(p), _) => (
            parse_graph(&read(p)?).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
            p,
        ),
        (None, Some(p)) => (load_decomposition(p)?.evaluate(), p),
        (None, None) => return Err(Failure::input("either --graph or --decomp is required")),
    };
    let selectors = parse_selectors(problems)?;
    let r = selectors.len();
    let (objective, name) = if measure == "min" {
        (Objective::Min, "min".to_owned())
    } else {
        let f = parse_measure(measure, r)?;
        let name = f.name().to_owned();
        (Objective::Venn(f), name)
    };
    let lists = oracle_lists(&selectors, &g)?;
    let best = brute_best_diversity(&lists, &objective, &g.all_vertices()).map_err(Failure::input)?;
    Ok(Row {
        instance: instance_name(path),
        r,
        measure: name,
        d: Some(d),
        feasible: best.as_ref().is_some_and(|b| b.0 >= d),
        best_value: best.as_ref().map(|b| b.0),
        solutions: best.map(|b| names(&g, &b.1)),
        wall_ms: ctx.wall(),
    })
}

fn cmd_gen(family: Family, n: usize, m: Option<usize>, seed: u64) -> Result<CwDecomposition, Failure> {
    if n == 0 {
        return Err(Failure::input("size must be at least 1"));
    }
    Ok(match family {
        Family::Path => gen_path(n),
        Family::Clique => gen_clique(n),
        Family::Biclique => {
            let m = m.ok_or_else(|| Failure::input("biclique needs two sizes"))?;
            if m == 0 {
                return Err(Failure::input("size must be at least 1"));
            }
            gen_complete_bipartite(n, m)
        }
        Family::Random => {
            let w = m.unwrap_or(3);
            if !(2..64).contains(&w) {
                return Err(Failure::input("width must be between 2 and 63"));
            }
            random_decomposition(n, w as u32, seed)
        }
    })
}

fn exit_for(row: &Row) -> i32 {
    if row.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let ctx = Ctx {
        engine: Engine::new().threads(cli.threads),
        verify: cli.verify,
        timing: cli.timing,
        start: Instant::now(),
    };
    let row = match cli.command {
        Command::Check { decomp } => {
            let dec = load_decomposition(&decomp)?;
            let g = dec.evaluate();
            writeln!(out, "valid, n={} m={} width={}", g.vertex_count(), g.edge_count(), dec.width()).map_err(Failure::internal)?;
            return Ok(EXIT_OK);
        }
        Command::Gen { family, n, m, seed } => {
            write!(out, "{}", cmd_gen(family, n, m, seed)?).map_err(Failure::internal)?;
            return Ok(EXIT_OK);
        }
        Command::MsoCheck { decomp, formula } => {
            let dec = load_decomposition(&decomp)?;
            let f = parse_formula(&read(&formula)?).map_err(|e| Failure::input(format!("{}: {e}", formula.display())))?;
            let holds = model_check(&f, &dec).map_err(Failure::input)?;
            if ctx.verify {
                let naive = crate::oracle::naive_model_check(&f, &dec.evaluate()).map_err(Failure::input)?;
                if naive != holds {
                    return Err(Failure::internal("verification failed: naive evaluation differs"));
                }
            }
            Row {
                instance: instance_name(&decomp),
                r: 0,
                measure: String::new(),
                d: None,
                feasible: holds,
                best_value: None,
                solutions: None,
                wall_ms: ctx.wall(),
            }
        }
        Command::Solve { decomp, problem } => cmd_solve(&ctx, &decomp, &problem)?,
        Command::Diverse {
            decomp,
            problems,
            measure,
            d,
        } => cmd_diverse(&ctx, &decomp, &problems, &measure, d)?,
        Command::DiverseMin { decomp, problems, d } => cmd_diverse_min(&ctx, &decomp, &problems, d)?,
        Command::Oracle {
            graph,
            decomp,
            problems,
            measure,
            d,
        } => cmd_oracle(&ctx, graph.as_deref(), decomp.as_deref(), &problems, &measure, d)?,
    };
    write_rows(std::slice::from_ref(&row), cli.format, out)?;
    Ok(exit_for(&row))
}

/// Runs the command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
