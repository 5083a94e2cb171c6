use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use curvezeta::cli::{self, CliError, Prepared};
use curvezeta::motivic::ZetaForm;
use curvezeta::oracle::taylor_expand;
use curvezeta::series::{MultiIndex, Rational};
use curvezeta::valuesemigroup::SemigroupData;
use curvezeta::zeta::{self as z, CheckSelection};

create_exception!(curvezeta, PrecisionError, PyException, "The truncation was too small to certify the result.");
create_exception!(curvezeta, CheckError, PyException, "An internal consistency check failed.");

fn cli_err(e: CliError) -> PyErr {
    match e {
        CliError::Input(m) => PyValueError::new_err(m),
        CliError::Precision(m) => PrecisionError::new_err(m),
        CliError::Check(m) => CheckError::new_err(m),
    }
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<Rational> {
    text.trim()
        .parse()
        .map_err(|_| PyValueError::new_err(format!("malformed rational {text:?}")))
}

/// A value semigroup known on the box `[0, c + 1]`.
#[pyclass(name = "Semigroup", module = "curvezeta", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySemigroup {
    inner: SemigroupData,
}

#[pymethods]
impl PySemigroup {
    /// Semigroup of a one-branch curve from its generators.
    #[staticmethod]
    fn numerical(generators: Vec<u64>) -> PyResult<Self> {
        Ok(PySemigroup {
            inner: SemigroupData::from_numerical_generators(&generators).map_err(value_err)?,
        })
    }

    /// Semigroup from its conductor and all its elements in `[0, c + 1]`.
    #[staticmethod]
    fn from_box(conductor: Vec<u64>, elements: Vec<Vec<u64>>) -> PyResult<Self> {
        let elements: Vec<MultiIndex> = elements.into_iter().map(MultiIndex::new).collect();
        Ok(PySemigroup {
            inner: SemigroupData::from_box(MultiIndex::new(conductor), &elements).map_err(value_err)?,
        })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn conductor(&self) -> Vec<u64> {
        self.inner.conductor().entries().to_vec()
    }

    #[getter]
    fn delta(&self) -> u64 {
        self.inner.delta()
    }

    #[getter]
    fn is_gorenstein(&self) -> bool {
        self.inner.is_gorenstein()
    }

    #[getter]
    fn elements(&self) -> Vec<Vec<u64>> {
        self.inner.box_elements().into_iter().map(MultiIndex::into_entries).collect()
    }

    fn contains(&self, n: Vec<u64>) -> bool {
        n.len() == self.inner.d() && self.inner.contains(&MultiIndex::new(n))
    }

    /// `l(n) = dim O / J_n`.
    fn l(&self, n: Vec<i64>) -> PyResult<u64> {
        if n.len() != self.inner.d() {
            return Err(PyValueError::new_err(format!("expected {} entries", self.inner.d())));
        }
        Ok(self.inner.l_extended(&n))
    }

    fn zeta(&self) -> PyResult<PyZeta> {
        let form = z::universal_zeta(&self.inner).map_err(|e| CheckError::new_err(e.to_string()))?;
        Ok(PyZeta { form })
    }

    fn __repr__(&self) -> String {
        format!(
            "Semigroup(conductor={}, delta={}, gorenstein={})",
            self.inner.conductor(),
            self.inner.delta(),
            self.inner.is_gorenstein()
        )
    }
}

/// A universal zeta function `numerator / prod (1 - U^-1 T_i)^{e_i}`.
#[pyclass(name = "Zeta", module = "curvezeta", frozen)]
struct PyZeta {
    form: ZetaForm,
}

#[pymethods]
impl PyZeta {
    #[getter]
    fn d(&self) -> usize {
        self.form.d()
    }

    /// `{T-exponent tuple: {U-exponent: coefficient}}`.
    #[getter]
    fn numerator<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for (m, c) in self.form.numerator().terms() {
            let inner = PyDict::new(py);
            for (e, k) in c.terms() {
                let k = i64::try_from(k.clone()).map_err(|_| PyValueError::new_err("coefficient overflows i64"))?;
                inner.set_item(*e, k)?;
            }
            out.set_item(PyTuple::new(py, m.entries())?, inner)?;
        }
        Ok(out)
    }

    #[getter]
    fn denominator(&self) -> Vec<u32> {
        self.form.denominator().to_vec()
    }

    fn single(&self) -> PyZeta {
        PyZeta {
            form: z::single_variable(&self.form),
        }
    }

    /// Substitutes `U = q` for a rational `q` given as a string, or keeps `q`
    /// symbolic when `q` is omitted.
    #[pyo3(signature = (q = None))]
    fn specialize(&self, q: Option<&str>) -> PyResult<String> {
        match q {
            None => Ok(z::specialize_symbolic(&self.form).render("q")),
            Some(q) => Ok(z::specialize_u(&self.form, &rational(q)?).map_err(value_err)?.render("")),
        }
    }

    /// The single-variable counting factor, symbolic in `q` unless given.
    #[pyo3(signature = (q = None))]
    fn cartier(&self, q: Option<&str>) -> PyResult<String> {
        match q {
            None => Ok(z::cartier_local_factor_symbolic(&self.form).render("q")),
            Some(q) => Ok(z::cartier_local_factor(&self.form, &rational(q)?).map_err(value_err)?.render("")),
        }
    }

    /// Taylor coefficients up to total degree `bound`, as strings keyed by
    /// `(T-exponent tuple, U-exponent)`.
    fn taylor<'py>(&self, py: Python<'py>, bound: u64) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for (m, c) in taylor_expand(&self.form, bound).poly().terms() {
            for (e, k) in c.terms() {
                out.set_item((PyTuple::new(py, m.entries())?, *e), k.to_string())?;
            }
        }
        Ok(out)
    }

    fn __str__(&self) -> String {
        self.form.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Zeta({})", self.form)
    }

    fn __eq__(&self, other: &PyZeta) -> bool {
        self.form.equals(&other.form)
    }
}

/// An input document resolved to its semigroup and, for ring inputs, a
/// certified truncated model.
#[pyclass(name = "Curve", module = "curvezeta", frozen)]
struct PyCurve {
    prepared: Prepared,
}

#[pymethods]
impl PyCurve {
    #[staticmethod]
    #[pyo3(signature = (text, name = "input"))]
    fn from_json(text: &str, name: &str) -> PyResult<Self> {
        let desc = cli::parse_input(text).map_err(value_err)?;
        Ok(PyCurve {
            prepared: cli::prepare(desc, name).map_err(cli_err)?,
        })
    }

    #[getter]
    fn semigroup(&self) -> PySemigroup {
        PySemigroup {
            inner: self.prepared.report_input.semigroup.clone(),
        }
    }

    #[getter]
    fn truncation(&self) -> Option<Vec<u64>> {
        self.prepared
            .report_input
            .model
            .as_ref()
            .map(|m| m.truncation().entries().to_vec())
    }

    fn zeta(&self) -> PyResult<PyZeta> {
        self.semigroup().zeta()
    }

    /// Runs every applicable check and the listed finite-field counts;
    /// returns `(name, status, detail)` triples.
    #[pyo3(signature = (primes = Vec::new()))]
    fn check(&self, py: Python<'_>, primes: Vec<u64>) -> PyResult<Vec<(String, String, String)>> {
        let sel = CheckSelection {
            finite_field: primes,
            ..Default::default()
        };
        let input = &self.prepared.report_input;
        let report = py
            .detach(|| z::run_report(input, &sel))
            .map_err(|e| CheckError::new_err(e.to_string()))?;
        Ok(report
            .checks
            .into_iter()
            .map(|c| (c.name, c.status.as_str().to_string(), c.detail))
            .collect())
    }
}

/// Runs the command-line tool in-process; returns `(stdout, stderr, exit code)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (String, String, i32) {
    let argv = std::iter::once("curvezeta".to_string()).chain(args);
    let out = cli::execute(argv);
    (out.stdout, out.stderr, out.code)
}

#[pymodule]
#[pyo3(name = "curvezeta")]
fn curvezeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySemigroup>()?;
    m.add_class::<PyZeta>()?;
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("PrecisionError", m.py().get_type::<PrecisionError>())?;
    m.add("CheckError", m.py().get_type::<CheckError>())?;
    Ok(())
}
