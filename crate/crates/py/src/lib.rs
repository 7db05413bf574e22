//! Python bindings for the `cwdiv` solver.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use cwdiv::corpus::random_decomposition;
use cwdiv::engine::{extract_solution, DpCore, Engine};
use cwdiv::graph::{gen_clique, gen_complete_bipartite, gen_path, parse_decomposition, ColoredGraph, CwDecomposition};
use cwdiv::measures::{venn_div, VennMeasure};
use cwdiv::mso::{model_check, parse_formula, Formula, MsoCore};
use cwdiv::oracle::{brute_best_diversity, brute_solutions, Objective, ProblemSpec};
use cwdiv::problems::{DsCore, VcCore};
use cwdiv::vertex_set::VertexSet;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

/// A cliquewidth decomposition.
#[pyclass(name = "Decomposition", frozen, skip_from_py_object, module = "cwdiverse")]
#[derive(Clone)]
pub struct PyDecomposition {
    inner: CwDecomposition,
}

impl PyDecomposition {
    fn checked(inner: CwDecomposition) -> PyResult<Self> {
        match inner.validate().first() {
            Some(problem) => Err(value_err(problem)),
            None => Ok(Self { inner }),
        }
    }
}

#[pymethods]
impl PyDecomposition {
    /// Parses the text format written by `str(decomposition)`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Self::checked(parse_decomposition(text).map_err(value_err)?)
    }

    #[staticmethod]
    fn path(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(value_err("n must be positive"));
        }
        Self::checked(gen_path(n))
    }

    #[staticmethod]
    fn clique(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(value_err("n must be positive"));
        }
        Self::checked(gen_clique(n))
    }

    #[staticmethod]
    fn biclique(p: usize, q: usize) -> PyResult<Self> {
        if p == 0 || q == 0 {
            return Err(value_err("both sides must be non-empty"));
        }
        Self::checked(gen_complete_bipartite(p, q))
    }

    #[staticmethod]
    #[pyo3(signature = (n, width, seed = 0))]
    fn random(n: usize, width: u32, seed: u64) -> PyResult<Self> {
        if n == 0 || width < 2 {
            return Err(value_err("need n >= 1 and width >= 2"));
        }
        Self::checked(random_decomposition(n, width, seed))
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    fn vertex_names(&self) -> Vec<String> {
        self.inner.evaluate().names().to_vec()
    }

    /// Edges as sorted name pairs.
    fn edges(&self) -> Vec<(String, String)> {
        self.inner.evaluate().named_edges().into_iter().collect()
    }

    /// Decides whether the graph satisfies a closed MSO formula.
    fn model_check(&self, formula: &str) -> PyResult<bool> {
        let f = parse_formula(formula).map_err(value_err)?;
        model_check(&f, &self.inner).map_err(runtime_err)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Decomposition(n={}, width={})", self.inner.vertex_count(), self.inner.width())
    }
}

/// A Venn diversity measure given by its influence table.
#[pyclass(name = "Measure", frozen, skip_from_py_object, module = "cwdiverse")]
#[derive(Clone)]
pub struct PyMeasure {
    inner: VennMeasure,
}

#[pymethods]
impl PyMeasure {
    /// Sum of pairwise Hamming distances.
    #[staticmethod]
    fn sum(r: usize) -> PyResult<Self> {
        Ok(Self { inner: VennMeasure::divsum(r).map_err(value_err)? })
    }

    /// `r² − (number of sets containing the vertex)²` per vertex.
    #[staticmethod]
    fn star(r: usize) -> PyResult<Self> {
        Ok(Self { inner: VennMeasure::divstar(r).map_err(value_err)? })
    }

    /// `values[i]` is the influence of a vertex whose membership bits are
    /// `i` (bit `j` set iff it lies in set `j + 1`).
    #[staticmethod]
    fn table(r: usize, values: Vec<u64>) -> PyResult<Self> {
        Ok(Self { inner: VennMeasure::from_table(r, values).map_err(value_err)? })
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn values(&self) -> Vec<u64> {
        self.inner.table().to_vec()
    }

    /// Diversity of named sets over `universe` (default: their union).
    #[pyo3(signature = (sets, universe = None))]
    fn diversity(&self, sets: Vec<Vec<String>>, universe: Option<Vec<String>>) -> PyResult<u64> {
        let mut names: Vec<&String> = sets.iter().flatten().chain(universe.iter().flatten()).collect();
        names.sort();
        names.dedup();
        let index = |s: &String| names.binary_search(&s).expect("collected above");
        let sets: Vec<VertexSet> = sets.iter().map(|s| s.iter().map(index).collect()).collect();
        let universe: VertexSet = match &universe {
            Some(u) => u.iter().map(index).collect(),
            None => (0..names.len()).collect(),
        };
        if let Some(v) = sets.iter().flat_map(VertexSet::iter).find(|v| !universe.contains(*v)) {
            return Err(value_err(format!("`{}` is not in the universe", names[v])));
        }
        venn_div(&self.inner, &sets.iter().collect::<Vec<_>>(), &universe).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Measure({}, r={})", self.inner.name(), self.inner.arity())
    }
}

#[derive(Clone)]
enum Kind {
    Vc(usize),
    Ds(usize),
    Mso(Formula),
}

/// A vertex problem: `vc(k)`, `ds(k)` or an MSO formula `exists set S ...`.
#[pyclass(name = "Problem", frozen, from_py_object, module = "cwdiverse")]
#[derive(Clone)]
pub struct PyProblem {
    kind: Kind,
}

impl PyProblem {
    fn core(&self, d: &CwDecomposition) -> PyResult<Box<dyn DpCore>> {
        Ok(match &self.kind {
            Kind::Vc(k) => Box::new(VcCore::new(*k, d)),
            Kind::Ds(k) => Box::new(DsCore::new(*k, d)),
            Kind::Mso(f) => Box::new(MsoCore::new(f, d).map_err(value_err)?),
        })
    }

    fn spec(&self) -> ProblemSpec {
        match &self.kind {
            Kind::Vc(k) => ProblemSpec::VertexCover(*k),
            Kind::Ds(k) => ProblemSpec::DominatingSet(*k),
            Kind::Mso(f) => ProblemSpec::Mso(f.clone()),
        }
    }
}

#[pymethods]
impl PyProblem {
    /// Vertex covers of size at most `k`.
    #[staticmethod]
    fn vc(k: usize) -> Self {
        Self { kind: Kind::Vc(k) }
    }

    /// Dominating sets of size at most `k`.
    #[staticmethod]
    fn ds(k: usize) -> Self {
        Self { kind: Kind::Ds(k) }
    }

    #[staticmethod]
    fn mso(formula: &str) -> PyResult<Self> {
        Ok(Self { kind: Kind::Mso(parse_formula(formula).map_err(value_err)?) })
    }

    fn __repr__(&self) -> String {
        match &self.kind {
            Kind::Vc(k) => format!("Problem.vc({k})"),
            Kind::Ds(k) => format!("Problem.ds({k})"),
            Kind::Mso(f) => format!("Problem.mso({:?})", f.to_string()),
        }
    }
}

/// Outcome of a diverse run. `best_value` is `None` for min-diversity runs
/// and when some problem has no solution.
#[pyclass(name = "Result", frozen, get_all, module = "cwdiverse")]
pub struct PyOutcome {
    best_value: Option<u64>,
    feasible: bool,
    solutions: Option<Vec<Vec<String>>>,
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        let best = self.best_value.map_or("None".to_owned(), |v| v.to_string());
        let feasible = if self.feasible { "True" } else { "False" };
        let solutions = match &self.solutions {
            Some(s) => format!("{s:?}"),
            None => "None".to_owned(),
        };
        format!("Result(best_value={best}, feasible={feasible}, solutions={solutions})")
    }
}

fn names(g: &ColoredGraph, sets: &[VertexSet]) -> Vec<Vec<String>> {
    sets.iter().map(|s| g.set_names(s).into_iter().map(str::to_owned).collect()).collect()
}

fn cores(d: &CwDecomposition, problems: &[PyProblem]) -> PyResult<Vec<Box<dyn DpCore>>> {
    problems.iter().map(|p| p.core(d)).collect()
}

/// One solution of `problem`, as sorted vertex names, or `None`.
#[pyfunction]
fn solve(py: Python<'_>, decomposition: &PyDecomposition, problem: &PyProblem) -> PyResult<Option<Vec<String>>> {
    let d = &decomposition.inner;
    let core = problem.core(d)?;
    py.detach(|| {
        let out = Engine::new().solve_single(core.as_ref(), d).map_err(runtime_err)?;
        out.witness
            .map(|w| {
                let s = extract_solution(core.as_ref(), d, &w).map_err(runtime_err)?;
                Ok(names(&d.evaluate(), &[s]).remove(0))
            })
            .transpose()
    })
}

/// Maximizes `measure` over tuples of solutions, one per problem.
#[pyfunction]
#[pyo3(signature = (decomposition, problems, measure, target = 0, threads = 1))]
fn diverse(
    py: Python<'_>,
    decomposition: &PyDecomposition,
    problems: Vec<PyProblem>,
    measure: &PyMeasure,
    target: u64,
    threads: usize,
) -> PyResult<PyOutcome> {
    let d = &decomposition.inner;
    let cores = cores(d, &problems)?;
    py.detach(|| {
        let refs: Vec<&dyn DpCore> = cores.iter().map(|c| c.as_ref()).collect();
        let out = Engine::new()
            .threads(threads)
            .diverse_solve(&refs, &measure.inner, target, d)
            .map_err(value_err)?;
        Ok(PyOutcome {
            best_value: out.best_value,
            feasible: out.feasible,
            solutions: out.solutions.map(|s| names(&d.evaluate(), &s)),
        })
    })
}

/// Solutions with all pairwise Hamming distances at least `target`.
#[pyfunction]
#[pyo3(signature = (decomposition, problems, target, threads = 1))]
fn diverse_min(
    py: Python<'_>,
    decomposition: &PyDecomposition,
    problems: Vec<PyProblem>,
    target: u64,
    threads: usize,
) -> PyResult<PyOutcome> {
    let d = &decomposition.inner;
    let cores = cores(d, &problems)?;
    py.detach(|| {
        let refs: Vec<&dyn DpCore> = cores.iter().map(|c| c.as_ref()).collect();
        let out = Engine::new()
            .threads(threads)
            .min_diverse_solve(&refs, target, d)
            .map_err(value_err)?;
        Ok(PyOutcome {
            best_value: None,
            feasible: out.feasible,
            solutions: out.solutions.map(|s| names(&d.evaluate(), &s)),
        })
    })
}

/// Brute-force optimum over all ordered tuples of solutions. Without a
/// measure the objective is the minimum pairwise distance.
#[pyfunction]
#[pyo3(signature = (decomposition, problems, measure = None))]
fn oracle(
    py: Python<'_>,
    decomposition: &PyDecomposition,
    problems: Vec<PyProblem>,
    measure: Option<&PyMeasure>,
) -> PyResult<PyOutcome> {
    let g = decomposition.inner.evaluate();
    let objective = match measure {
        Some(m) => Objective::Venn(m.inner.clone()),
        None => Objective::Min,
    };
    py.detach(|| {
        let lists = problems
            .iter()
            .map(|p| brute_solutions(&p.spec(), &g))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        let best = brute_best_diversity(&lists, &objective, &g.all_vertices()).map_err(value_err)?;
        Ok(PyOutcome {
            best_value: best.as_ref().map(|b| b.0),
            feasible: best.is_some(),
            solutions: best.map(|b| names(&g, &b.1)),
        })
    })
}

#[pymodule]
fn cwdiverse(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDecomposition>()?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyOutcome>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(diverse, m)?)?;
    m.add_function(wrap_pyfunction!(diverse_min, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    Ok(())
}
