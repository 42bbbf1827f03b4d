//! Python bindings for axiomlab. Rationals cross the boundary as
//! `fractions.Fraction`; inputs may be Fractions, ints or strings like "5/12".

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use axiomlab::axioms::{self, Axiom, CheckOptions, Domain};
use axiomlab::proofkit::{self, SearchOptions, SearchVerdict};
use axiomlab::{codec, polytope, rational, Mechanism, Rational};

fn err(e: axiomlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, value: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational::format(value),))
}

fn from_py(value: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&value.str()?.to_cow()?).map_err(err)
}

/// A strict preference profile over named agents and objects.
#[pyclass(name = "Profile", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile {
    inner: axiomlab::PreferenceProfile,
}

#[pymethods]
impl PyProfile {
    /// Parses lines of `<agent>: <obj>><obj>>...`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: codec::parse_profile(text).map_err(err)? })
    }

    /// Agents named 1..n with the given rankings, e.g. ["a>b>c", "b>a>c", ...].
    #[staticmethod]
    fn from_orders(orders: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = orders.iter().map(String::as_str).collect();
        Ok(Self { inner: axiomlab::PreferenceProfile::from_strs(&refs).map_err(err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn agents(&self) -> Vec<String> {
        self.inner.universe().agents().to_vec()
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.universe().objects().to_vec()
    }

    /// Each agent's ranking as object names, best first.
    fn orders(&self) -> Vec<Vec<String>> {
        let u = self.inner.universe();
        self.inner.orders().iter().map(|o| o.ranking().iter().map(|&j| u.object(j).to_string()).collect()).collect()
    }

    fn __str__(&self) -> String {
        codec::format_profile(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Profile({:?})", codec::format_profile(&self.inner))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// A bistochastic matrix with exact entries.
#[pyclass(name = "Assignment", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAssignment {
    inner: axiomlab::Assignment,
}

#[pymethods]
impl PyAssignment {
    #[new]
    fn new(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(from_py).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: axiomlab::Assignment::new(rows).map_err(err)? })
    }

    #[staticmethod]
    fn uniform(n: usize) -> Self {
        Self { inner: axiomlab::Assignment::uniform(n) }
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner.rows().iter().map(|r| r.iter().map(|v| to_fraction(py, v)).collect()).collect()
    }

    fn entry<'py>(&self, py: Python<'py>, agent: usize, object: usize) -> PyResult<Bound<'py, PyAny>> {
        if agent >= self.inner.n() || object >= self.inner.n() {
            return Err(PyValueError::new_err("index out of range"));
        }
        to_fraction(py, self.inner.entry(agent, object))
    }

    fn __str__(&self) -> String {
        self.inner
            .rows()
            .iter()
            .map(|r| r.iter().map(rational::format).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

fn mechanism(name: &str) -> PyResult<Box<dyn Mechanism>> {
    axiomlab::cli::mechanism(name).map_err(err)
}

/// Evaluates `rsd`, `ps` or `table:<path>` at a profile.
#[pyfunction]
fn evaluate(mechanism_name: &str, profile: &PyProfile) -> PyResult<PyAssignment> {
    Ok(PyAssignment { inner: mechanism(mechanism_name)?.evaluate(&profile.inner).map_err(err)? })
}

#[pyfunction]
fn ps(profile: &PyProfile) -> PyResult<PyAssignment> {
    evaluate("ps", profile)
}

#[pyfunction]
fn rsd(profile: &PyProfile) -> PyResult<PyAssignment> {
    evaluate("rsd", profile)
}

/// Whether `x` strictly ordinally dominates `y` at the profile.
#[pyfunction]
fn strictly_dominates(x: &PyAssignment, y: &PyAssignment, profile: &PyProfile) -> PyResult<bool> {
    Ok(axiomlab::ordinal_dominance(&x.inner, &y.inner, &profile.inner).map_err(err)?.strictly())
}

/// Returns (efficient, dominator or None) via the trading-relation test.
#[pyfunction]
fn is_ordinally_efficient(x: &PyAssignment, profile: &PyProfile) -> PyResult<(bool, Option<PyAssignment>)> {
    let cert = axioms::is_ordinally_efficient(&x.inner, &profile.inner).map_err(err)?;
    Ok((cert.is_efficient(), cert.witness().map(|w| PyAssignment { inner: w.clone() })))
}

/// A strict dominator found by exact LP, or None.
#[pyfunction]
fn find_strict_dominator(x: &PyAssignment, profile: &PyProfile) -> PyResult<Option<PyAssignment>> {
    Ok(axioms::find_strict_dominator(&x.inner, &profile.inner).map_err(err)?.map(|inner| PyAssignment { inner }))
}

/// Returns (efficient, [(weight, permutation)]) over Pareto-undominated permutations.
#[pyfunction]
fn is_expost_efficient<'py>(
    py: Python<'py>,
    x: &PyAssignment,
    profile: &PyProfile,
) -> PyResult<(bool, Vec<(Bound<'py, PyAny>, Vec<usize>)>)> {
    let v = axioms::is_expost_efficient(&x.inner, &profile.inner).map_err(err)?;
    let parts = v.decomposition.iter().map(|(w, p)| Ok((to_fraction(py, w)?, p.clone()))).collect::<PyResult<_>>()?;
    Ok((v.efficient, parts))
}

/// Birkhoff-von Neumann components as (weight, permutation) pairs.
#[pyfunction]
fn bvn<'py>(py: Python<'py>, x: &PyAssignment) -> PyResult<Vec<(Bound<'py, PyAny>, Vec<usize>)>> {
    let d = polytope::bvn_decompose(&x.inner).map_err(err)?;
    d.components.iter().map(|c| Ok((to_fraction(py, &c.weight)?, c.permutation.clone()))).collect()
}

/// Audits a mechanism. Exactly one of `exhaustive` or `sample` selects the
/// domain. Returns the verdicts as JSON text.
#[pyfunction]
#[pyo3(signature = (mechanism_name, axiom_names, exhaustive=None, sample=None, n=4, seed=0, global_sp=false))]
fn check(
    mechanism_name: &str,
    axiom_names: Vec<String>,
    exhaustive: Option<usize>,
    sample: Option<usize>,
    n: usize,
    seed: u64,
    global_sp: bool,
) -> PyResult<String> {
    let domain = match (exhaustive, sample) {
        (Some(k), None) => Domain::Exhaustive(k),
        (None, Some(count)) => Domain::Sampled { n, count, seed },
        _ => return Err(PyValueError::new_err("give exactly one of exhaustive or sample")),
    };
    let list = axiom_names.iter().map(|a| a.parse::<Axiom>()).collect::<Result<Vec<_>, _>>().map_err(err)?;
    let mech = mechanism(mechanism_name)?;
    let options = CheckOptions { global: global_sp, ..CheckOptions::default() };
    let verdicts = axioms::check_axioms(&mech, &domain, &list, &options).map_err(err)?;
    let value: Vec<_> = verdicts.iter().map(|v| v.to_json()).collect();
    Ok(serde_json::to_string(&value).expect("verdicts serialise"))
}

/// Result of replaying a proof script.
#[pyclass(name = "ProofReport", frozen)]
struct PyProofReport {
    inner: proofkit::ProofReport,
}

#[pymethods]
impl PyProofReport {
    #[getter]
    fn success(&self) -> bool {
        self.inner.success
    }

    #[getter]
    fn contradiction(&self) -> Option<String> {
        self.inner.contradiction.clone()
    }

    #[getter]
    fn steps(&self) -> usize {
        self.inner.steps.len()
    }

    /// Node matrix as rendered strings ("x" entries stay symbolic).
    fn matrix(&self, node: &str) -> PyResult<Vec<Vec<String>>> {
        self.inner
            .node(node)
            .map(|n| n.matrix.clone())
            .ok_or_else(|| PyValueError::new_err(format!("no node `{node}`")))
    }

    fn text(&self) -> String {
        self.inner.render_text()
    }

    fn json(&self) -> String {
        self.inner.to_json()
    }
}

#[pyfunction]
#[pyo3(signature = (theorem, pad=0))]
fn replay(theorem: u8, pad: usize) -> PyResult<PyProofReport> {
    let mut script = proofkit::builtin_script(theorem).map_err(err)?;
    if pad > 0 {
        script = proofkit::pad_script(&script, pad).map_err(err)?;
    }
    Ok(PyProofReport { inner: proofkit::replay(&script).map_err(err)? })
}

/// Replays a script given in JSON form.
#[pyfunction]
fn replay_script(json: &str) -> PyResult<PyProofReport> {
    let script = proofkit::ProofScript::from_json(json).map_err(err)?;
    Ok(PyProofReport { inner: proofkit::replay(&script).map_err(err)? })
}

/// Independent search: returns "infeasible", "inconclusive" or a list of
/// (profile, assignment) pairs forming a witness.
#[pyfunction]
#[pyo3(signature = (theorem, drop=Vec::new(), add=Vec::new()))]
fn search<'py>(py: Python<'py>, theorem: u8, drop: Vec<String>, add: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let parse = |v: &[String]| v.iter().map(|a| a.parse::<Axiom>()).collect::<Result<Vec<_>, _>>().map_err(err);
    let options = SearchOptions { drop: parse(&drop)?, add: parse(&add)?, ..SearchOptions::default() };
    let report = py.detach(|| proofkit::independent_search(theorem, &options)).map_err(err)?;
    match report.verdict {
        SearchVerdict::Infeasible(_) => Ok("infeasible".into_pyobject(py)?.into_any()),
        SearchVerdict::Inconclusive { .. } => Ok("inconclusive".into_pyobject(py)?.into_any()),
        SearchVerdict::Witness(fragment) => {
            let items: Vec<(PyProfile, PyAssignment)> =
                fragment.into_iter().map(|(p, x)| (PyProfile { inner: p }, PyAssignment { inner: x })).collect();
            Ok(PyList::new(py, items)?.into_any())
        }
    }
}

#[pymodule]
fn axiomlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProfile>()?;
    m.add_class::<PyAssignment>()?;
    m.add_class::<PyProofReport>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(ps, m)?)?;
    m.add_function(wrap_pyfunction!(rsd, m)?)?;
    m.add_function(wrap_pyfunction!(strictly_dominates, m)?)?;
    m.add_function(wrap_pyfunction!(is_ordinally_efficient, m)?)?;
    m.add_function(wrap_pyfunction!(find_strict_dominator, m)?)?;
    m.add_function(wrap_pyfunction!(is_expost_efficient, m)?)?;
    m.add_function(wrap_pyfunction!(bvn, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(replay_script, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
