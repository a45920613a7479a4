//! Python bindings: the `RatFun` type, dimension queries and the analysis
//! report as a dictionary.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

use ratform::classify::dependence_certificate;
use ratform::dimension::{doubling_map, image_dimension, is_nondegenerate};
use ratform::oracle::symbolic_rank;
use ratform::ratfun::{identifiers, parse, parse_coeff, Coeff};
use ratform::report::{self, Options};
use ratform::{Error, Settings};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::DivisionByZero | Error::Pole => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn settings(seed: u64, prime_bits: u32, samples: usize, max_degree: Option<usize>) -> PyResult<Settings> {
    let s = Settings::with_seed(seed).with_prime_bits(prime_bits).map_err(to_py)?;
    Ok(Settings {
        samples,
        max_degree,
        ..s
    })
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((text,))
}

/// An exact rational function over the rationals in named variables.
#[pyclass(name = "RatFun", module = "pyratform", frozen)]
struct PyRatFun {
    inner: ratform::ratfun::RatFun,
    vars: Vec<String>,
}

impl PyRatFun {
    fn wrap(&self, inner: ratform::ratfun::RatFun) -> Self {
        Self {
            inner,
            vars: self.vars.clone(),
        }
    }

    fn same_vars(&self, other: &Self) -> PyResult<()> {
        if self.vars != other.vars {
            return Err(PyValueError::new_err(format!(
                "variable lists differ: {:?} vs {:?}",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    fn var_index(&self, name: &str) -> PyResult<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown variable `{name}`")))
    }
}

#[pymethods]
impl PyRatFun {
    #[new]
    #[pyo3(signature = (expr, vars=None))]
    fn new(expr: &str, vars: Option<Vec<String>>) -> PyResult<Self> {
        let vars = match vars {
            Some(v) => v,
            None => identifiers(expr).map_err(to_py)?,
        };
        let inner = parse(expr, &vars).map_err(to_py)?;
        Ok(Self { inner, vars })
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.vars.clone()
    }

    #[getter]
    fn arity(&self) -> usize {
        self.inner.arity()
    }

    #[getter]
    fn numerator(&self) -> String {
        self.inner.num().fmt_with(&self.vars)
    }

    #[getter]
    fn denominator(&self) -> String {
        self.inner.den().fmt_with(&self.vars)
    }

    fn __str__(&self) -> String {
        self.inner.fmt_with(&self.vars)
    }

    fn __repr__(&self) -> String {
        format!("RatFun({:?}, vars={:?})", self.__str__(), self.vars)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.vars == other.vars && self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.vars.hash(&mut h);
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(self.wrap(self.inner.add(&other.inner)))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(self.wrap(self.inner.sub(&other.inner)))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(self.wrap(self.inner.mul(&other.inner)))
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.same_vars(other)?;
        Ok(self.wrap(self.inner.div(&other.inner).map_err(to_py)?))
    }

    fn __neg__(&self) -> Self {
        self.wrap(self.inner.neg())
    }

    fn __pow__(&self, e: i64, _modulo: Option<i64>) -> PyResult<Self> {
        Ok(self.wrap(self.inner.powi(e).map_err(to_py)?))
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_constant(&self) -> bool {
        self.inner.is_constant()
    }

    fn partial(&self, var: &str) -> PyResult<Self> {
        Ok(self.wrap(self.inner.partial(self.var_index(var)?)))
    }

    /// Exact value at a point; coordinates may be ints, Fractions or strings
    /// such as "3/4". Returns a `fractions.Fraction`.
    fn eval<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let coords = point
            .iter()
            .map(|v| parse_coeff(&v.str()?.to_string()).map_err(to_py))
            .collect::<PyResult<Vec<Coeff>>>()?;
        let v = self.inner.eval(&coords).map_err(to_py)?;
        py.import("fractions")?.getattr("Fraction")?.call1((v.to_string(),))
    }

    /// Value modulo a prime.
    fn eval_mod(&self, point: Vec<u64>, p: u64) -> PyResult<u64> {
        self.inner.eval_mod(&point, p).map_err(to_py)
    }

    /// Replaces variables by other functions in the same variables.
    fn substitute(&self, assignment: std::collections::HashMap<String, PyRef<'_, Self>>) -> PyResult<Self> {
        let mut pairs = Vec::with_capacity(assignment.len());
        for (name, f) in &assignment {
            self.same_vars(f)?;
            pairs.push((self.var_index(name)?, f.inner.clone()));
        }
        pairs.sort_by_key(|(i, _)| *i);
        Ok(self.wrap(self.inner.substitute(&pairs).map_err(to_py)?))
    }

    fn is_nondegenerate(&self) -> bool {
        is_nondegenerate(&self.inner)
    }

    /// Dimension of the image of the doubling map.
    #[pyo3(signature = (seed=0, prime_bits=31, samples=16))]
    fn image_dimension(&self, seed: u64, prime_bits: u32, samples: usize) -> PyResult<usize> {
        image_dimension(&self.inner, &settings(seed, prime_bits, samples, None)?).map_err(to_py)
    }

    /// Exact rank of the doubling map's Jacobian; limited to small degrees.
    fn symbolic_rank(&self) -> PyResult<usize> {
        let m = doubling_map(&self.inner).map_err(to_py)?;
        symbolic_rank(&m).map_err(to_py)
    }

    /// A polynomial `A(p, q)` with `A(self, s) = 0` of degree at most `dmax`,
    /// as a string, or None.
    #[pyo3(signature = (s, dmax, seed=0))]
    fn dependence_certificate(&self, s: &Self, dmax: u32, seed: u64) -> PyResult<Option<String>> {
        self.same_vars(s)?;
        let cert = dependence_certificate(&self.inner, &s.inner, dmax, &Settings::with_seed(seed)).map_err(to_py)?;
        Ok(cert.map(|c| c.display()))
    }
}

/// Full analysis of one expression, returned as the CLI's JSON report
/// decoded into a dict.
#[pyfunction]
#[pyo3(signature = (expr, vars=None, seed=0, prime_bits=31, samples=16, max_degree=None, probe_conjecture=false))]
#[allow(clippy::too_many_arguments)]
fn analyze<'py>(
    py: Python<'py>,
    expr: &str,
    vars: Option<Vec<String>>,
    seed: u64,
    prime_bits: u32,
    samples: usize,
    max_degree: Option<usize>,
    probe_conjecture: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let st = settings(seed, prime_bits, samples, max_degree)?;
    let opts = Options {
        probe_conjecture,
        timing: false,
    };
    let r = py
        .detach(|| report::analyze(expr, vars.as_deref(), &st, opts))
        .map_err(to_py)?;
    json_to_py(py, &r.to_json())
}

/// Analysis of an existing `RatFun`.
#[pyfunction]
#[pyo3(signature = (f, seed=0))]
fn classify<'py>(py: Python<'py>, f: &PyRatFun, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    analyze(py, &f.__str__(), Some(f.vars.clone()), seed, 31, 16, None, false)
}

#[pymodule]
fn pyratform(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatFun>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
