//! Python bindings: exact cyclotomic numbers, intersections, closures and fold programs.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;
use origami_core::closure::generate;
use origami_core::geometry::{Angle, OrigamiField};
use origami_core::numtheory::{
    check_product_identity, decompose, elementary_monomial, ring_membership,
};
use origami_core::synth::{self, FoldProgram};
use origami_core::CycNum;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The angle group `U_n` with its ambient field `Q(ζ_{2n})`.
#[pyclass(name = "Field", module = "origami_rings", frozen)]
struct PyField {
    inner: Arc<OrigamiField>,
}

/// An exact element of `Q(ζ_{2n})`.
#[pyclass(name = "Cyc", module = "origami_rings", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCyc {
    inner: CycNum,
}

impl PyCyc {
    fn wrap(inner: CycNum) -> Self {
        Self { inner }
    }

    fn same_field(&self, other: &PyCyc) -> PyResult<()> {
        if self.inner.conductor() != other.inner.conductor() {
            return Err(value_err(format!(
                "conductor mismatch: {} vs {}",
                self.inner.conductor(),
                other.inner.conductor()
            )));
        }
        Ok(())
    }
}

fn angle(f: &OrigamiField, k: usize) -> PyResult<Angle> {
    f.angle(k).map_err(value_err)
}

#[pymethods]
impl PyField {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: OrigamiField::checked(n).map_err(value_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn parse(&self, text: &str) -> PyResult<PyCyc> {
        self.inner.parse(text).map(PyCyc::wrap).map_err(value_err)
    }

    fn int(&self, v: i64) -> PyCyc {
        PyCyc::wrap(self.inner.int(v))
    }

    /// `ζ_n^k`
    fn zeta_n(&self, k: i64) -> PyCyc {
        PyCyc::wrap(self.inner.zeta_n_pow(k))
    }

    fn intersect(&self, u: usize, v: usize, p: &PyCyc, q: &PyCyc) -> PyResult<PyCyc> {
        let (u, v) = (angle(&self.inner, u)?, angle(&self.inner, v)?);
        self.inner
            .intersect(u, v, &p.inner, &q.inner)
            .map(PyCyc::wrap)
            .map_err(value_err)
    }

    fn elementary_monomial(&self, u: usize, v: usize) -> PyResult<PyCyc> {
        let (u, v) = (angle(&self.inner, u)?, angle(&self.inner, v)?);
        elementary_monomial(&self.inner, u, v)
            .map(PyCyc::wrap)
            .map_err(value_err)
    }

    /// `(verdict, constructible)`
    fn membership(&self, x: &PyCyc) -> (String, bool) {
        let m = ring_membership(&self.inner, &x.inner);
        let n = self.inner.n();
        (m.verdict(n), m.is_constructible(n))
    }

    /// Monomial decomposition as JSON text.
    fn decompose(&self, x: &PyCyc) -> PyResult<String> {
        decompose(&self.inner, &x.inner)
            .map(|e| e.to_json())
            .map_err(value_err)
    }

    /// A fold program constructing `x`.
    fn synth(&self, x: &PyCyc) -> PyResult<PyProgram> {
        let expr = decompose(&self.inner, &x.inner).map_err(value_err)?;
        let inner = synth::synth_element(&expr).map_err(value_err)?;
        Ok(PyProgram { inner })
    }

    /// Points of the closure as `(depth, Cyc)` pairs, and whether the budget sufficed.
    #[pyo3(signature = (depth, budget = 200_000))]
    fn closure(
        &self,
        py: Python<'_>,
        depth: usize,
        budget: usize,
    ) -> PyResult<(Vec<(usize, PyCyc)>, bool)> {
        let n = self.inner.n();
        let set = py
            .detach(|| generate(n, depth, budget))
            .map_err(value_err)?;
        let points = set
            .points()
            .iter()
            .enumerate()
            .map(|(i, x)| (set.point_depth(i), PyCyc::wrap(x.clone())))
            .collect();
        Ok((points, set.is_complete()))
    }

    fn __repr__(&self) -> String {
        format!("Field(n={})", self.inner.n())
    }
}

#[pymethods]
impl PyCyc {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Cyc('{}', conductor={})",
            self.inner,
            self.inner.conductor()
        )
    }

    fn __add__(&self, other: &PyCyc) -> PyResult<PyCyc> {
        self.same_field(other)?;
        Ok(PyCyc::wrap(&self.inner + &other.inner))
    }

    fn __sub__(&self, other: &PyCyc) -> PyResult<PyCyc> {
        self.same_field(other)?;
        Ok(PyCyc::wrap(&self.inner - &other.inner))
    }

    fn __mul__(&self, other: &PyCyc) -> PyResult<PyCyc> {
        self.same_field(other)?;
        Ok(PyCyc::wrap(&self.inner * &other.inner))
    }

    fn __truediv__(&self, other: &PyCyc) -> PyResult<PyCyc> {
        self.same_field(other)?;
        if other.inner.is_zero() {
            return Err(PyZeroDivisionError::new_err("division by zero"));
        }
        self.inner
            .checked_div(&other.inner)
            .map(PyCyc::wrap)
            .map_err(value_err)
    }

    fn __neg__(&self) -> PyCyc {
        PyCyc::wrap(-&self.inner)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> PyCyc {
        PyCyc::wrap(self.inner.pow(e))
    }

    fn __eq__(&self, other: &PyCyc) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }

    fn __complex__(&self) -> Complex64 {
        self.inner.to_complex()
    }

    fn conj(&self) -> PyCyc {
        PyCyc::wrap(self.inner.conj())
    }

    fn is_real(&self) -> bool {
        self.inner.is_real()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    #[getter]
    fn conductor(&self) -> usize {
        self.inner.conductor()
    }
}

/// A fold program over registers seeded with 0 and 1.
#[pyclass(name = "Program", module = "origami_rings", frozen)]
struct PyProgram {
    inner: FoldProgram,
}

#[pymethods]
impl PyProgram {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FoldProgram::from_json(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[staticmethod]
    fn two(n: usize) -> PyResult<Self> {
        synth::synth_two(n)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    #[staticmethod]
    fn neg_one(n: usize) -> PyResult<Self> {
        synth::synth_neg_one(n)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Register values, seeds included.
    fn run(&self) -> PyResult<Vec<PyCyc>> {
        let trace = synth::run(&self.inner).map_err(value_err)?;
        Ok(trace.registers.into_iter().map(PyCyc::wrap).collect())
    }

    fn value(&self) -> PyResult<PyCyc> {
        let trace = synth::run(&self.inner).map_err(value_err)?;
        Ok(PyCyc::wrap(trace.value().clone()))
    }

    /// `(ok, diagnostic)`
    fn verify(&self, expected: &PyCyc) -> (bool, Option<String>) {
        let v = synth::verify(&self.inner, &expected.inner, None);
        (v.ok, v.diagnostic)
    }

    fn add(&self, other: &PyProgram) -> PyResult<PyProgram> {
        synth::synth_add(&self.inner, &other.inner)
            .map(|inner| PyProgram { inner })
            .map_err(value_err)
    }

    fn neg(&self) -> PyResult<PyProgram> {
        synth::synth_neg(&self.inner)
            .map(|inner| PyProgram { inner })
            .map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Program(n={}, len={})", self.inner.n(), self.inner.len())
    }
}

/// Checks `∏_{k=1}^{n−1} (1 − ζ_n^k) = n` exactly.
#[pyfunction]
fn product_identity(n: usize) -> bool {
    check_product_identity(n).is_ok()
}

#[pymodule]
pub fn origami_rings(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyCyc>()?;
    m.add_class::<PyProgram>()?;
    m.add_function(wrap_pyfunction!(product_identity, m)?)?;
    Ok(())
}
