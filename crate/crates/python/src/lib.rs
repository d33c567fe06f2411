//! Python bindings for `cubiclab`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cubiclab::classgrp::{self, PointIdealClass};
use cubiclab::cubic::{self, SquareTest};
use cubiclab::hcf::{self, UnramifiedCertificate};
use cubiclab::mordell::{self, SearchBounds};
use cubiclab::scan::{self, Check, Format, ScanConfig};

create_exception!(pycubiclab, CubiclabError, PyValueError);

fn py_err(e: cubiclab::Error) -> PyErr {
    CubiclabError::new_err(e.to_string())
}

/// A rational as `fractions.Fraction`.
fn fraction<'py>(py: Python<'py>, q: &num_rational::BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.numer().clone(), q.denom().clone()))
}

/// The field `Q(w)`, `w^3 = m`.
#[pyclass(frozen, module = "pycubiclab")]
struct CubicField {
    inner: cubic::Field,
}

#[pymethods]
impl CubicField {
    #[new]
    fn new(m: BigInt) -> PyResult<Self> {
        Ok(CubicField { inner: cubic::CubicField::new(m).map_err(py_err)? })
    }

    #[getter]
    fn m(&self) -> BigInt {
        self.inner.m().clone()
    }

    #[getter]
    fn discriminant(&self) -> BigInt {
        self.inner.discriminant().clone()
    }

    fn is_monogenic(&self) -> bool {
        self.inner.is_monogenic()
    }

    /// `x + y w + z w^2` with integer coordinates.
    fn element(&self, x: BigInt, y: BigInt, z: BigInt) -> CubicElement {
        CubicElement { inner: cubic::CubicElement::from_ints(&self.inner, x, y, z) }
    }

    fn __repr__(&self) -> String {
        format!("CubicField({})", self.inner.m())
    }
}

#[pyclass(frozen, module = "pycubiclab")]
struct CubicElement {
    inner: cubic::CubicElement,
}

#[pymethods]
impl CubicElement {
    fn coords<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.coords().iter().map(|c| fraction(py, c)).collect()
    }

    fn norm<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.norm())
    }

    fn trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.trace())
    }

    fn __mul__(&self, other: &CubicElement) -> PyResult<CubicElement> {
        Ok(CubicElement { inner: self.inner.checked_mul(&other.inner).map_err(py_err)? })
    }

    fn __add__(&self, other: &CubicElement) -> PyResult<CubicElement> {
        Ok(CubicElement { inner: self.inner.checked_add(&other.inner).map_err(py_err)? })
    }

    fn __sub__(&self, other: &CubicElement) -> PyResult<CubicElement> {
        Ok(CubicElement { inner: self.inner.checked_sub(&other.inner).map_err(py_err)? })
    }

    fn __eq__(&self, other: &CubicElement) -> bool {
        self.inner == other.inner
    }

    /// The square root if there is one, else `None`; raises when undecided.
    fn sqrt(&self) -> PyResult<Option<CubicElement>> {
        match cubic::is_square(&self.inner).map_err(py_err)? {
            SquareTest::Square(r) => Ok(Some(CubicElement { inner: r })),
            SquareTest::NotSquare(_) => Ok(None),
            SquareTest::Undecided { precision_bits } => {
                Err(CubiclabError::new_err(format!("undecided at {precision_bits} bits")))
            }
        }
    }

    /// Coefficients of the minimal polynomial of the square root, constant first.
    fn minpoly_sqrt(&self) -> PyResult<Vec<BigInt>> {
        Ok(cubic::minpoly_sqrt(&self.inner).map_err(py_err)?.poly.coeffs().to_vec())
    }

    /// Prime ideal factorization as `(prime, exponent)` pairs.
    fn factor(&self) -> PyResult<Vec<(String, u32)>> {
        let f = classgrp::factor_element(&self.inner).map_err(py_err)?;
        Ok(f.factors.iter().map(|(q, e)| (q.to_string(), *e)).collect())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CubicElement({} in Q({}^(1/3)))", self.inner, self.inner.m())
    }
}

/// `y^2 = x^3 - m`.
#[pyclass(frozen, module = "pycubiclab")]
struct Curve {
    inner: mordell::Curve,
}

#[pymethods]
impl Curve {
    #[new]
    fn new(m: BigInt) -> PyResult<Self> {
        Ok(Curve { inner: mordell::Curve::new(m).map_err(py_err)? })
    }

    #[getter]
    fn m(&self) -> BigInt {
        self.inner.m().clone()
    }

    /// The point `(r/t^2, s/t^3)`.
    fn point(&self, r: BigInt, s: BigInt, t: BigInt) -> PyResult<CurvePoint> {
        Ok(CurvePoint { inner: self.inner.point(r, s, t).map_err(py_err)? })
    }

    #[pyo3(signature = (t_max = 6, r_max = 5000))]
    fn search(&self, py: Python<'_>, t_max: u64, r_max: u64) -> Vec<CurvePoint> {
        let found = py.detach(|| mordell::search_points(&self.inner, SearchBounds { t_max, r_max }));
        found.into_iter().map(|p| CurvePoint { inner: p }).collect()
    }

    fn root_number(&self) -> PyResult<i32> {
        Ok(mordell::root_number(self.inner.m()).map_err(py_err)?.w)
    }

    fn __repr__(&self) -> String {
        format!("Curve(y^2 = x^3 - {})", self.inner.m())
    }
}

#[pyclass(frozen, module = "pycubiclab")]
struct CurvePoint {
    inner: mordell::CurvePoint,
}

#[pymethods]
impl CurvePoint {
    #[getter]
    fn x<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.x().map(|x| fraction(py, &x)).transpose()
    }

    #[getter]
    fn y<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.y().map(|y| fraction(py, &y)).transpose()
    }

    /// `(r, s, t)`, or `None` at infinity.
    fn rst(&self) -> Option<(BigInt, BigInt, BigInt)> {
        self.inner.affine().map(|a| (a.r.clone(), a.s.clone(), a.t.clone()))
    }

    fn is_infinity(&self) -> bool {
        self.inner.is_infinity()
    }

    fn __add__(&self, other: &CurvePoint) -> PyResult<CurvePoint> {
        Ok(CurvePoint { inner: self.inner.add(&other.inner).map_err(py_err)? })
    }

    fn __neg__(&self) -> CurvePoint {
        CurvePoint { inner: self.inner.negate() }
    }

    fn __mul__(&self, n: i64) -> CurvePoint {
        CurvePoint { inner: self.inner.multiply(n) }
    }

    fn __rmul__(&self, n: i64) -> CurvePoint {
        self.__mul__(n)
    }

    fn __eq__(&self, other: &CurvePoint) -> bool {
        self.inner == other.inner
    }

    /// `r - t^2 w`.
    fn weil(&self) -> PyResult<CubicElement> {
        Ok(CubicElement { inner: mordell::weil_representative(&self.inner).map_err(py_err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("CurvePoint{} on y^2 = x^3 - {}", self.inner, self.inner.curve().m())
    }
}

#[pyclass(frozen, module = "pycubiclab")]
struct ClassGroup {
    inner: classgrp::ClassGroup,
}

#[pymethods]
impl ClassGroup {
    #[getter]
    fn h(&self) -> BigInt {
        self.inner.h().clone()
    }

    #[getter]
    fn invariants(&self) -> Vec<BigInt> {
        self.inner.invariants().to_vec()
    }

    #[getter]
    fn stabilized(&self) -> bool {
        self.inner.status() == classgrp::Stabilization::Stabilized
    }

    /// `(ideal, class, trivial)` for the ideal `a_P` with `(r - t^2 w) = a_P^2`.
    fn point_class(&self, p: &CurvePoint) -> PyResult<(String, Vec<BigInt>, bool)> {
        let PointIdealClass { ideal, class, trivial, .. } =
            classgrp::point_ideal_class(&p.inner, &self.inner).map_err(py_err)?;
        Ok((ideal.to_string(), class, trivial))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| CubiclabError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("ClassGroup(m = {}, invariants = {:?})", self.inner.m(), self.invariants())
    }
}

#[pyclass(frozen, module = "pycubiclab")]
struct Certificate {
    inner: UnramifiedCertificate,
}

#[pymethods]
impl Certificate {
    #[getter]
    fn valid(&self) -> bool {
        self.inner.valid
    }

    #[getter]
    fn alpha(&self) -> String {
        self.inner.alpha_display.clone()
    }

    #[getter]
    fn minpoly(&self) -> Vec<BigInt> {
        self.inner.minpoly.coeffs().to_vec()
    }

    /// Names of the obligations that did not hold.
    #[getter]
    fn failed(&self) -> Vec<String> {
        self.inner.failed.iter().map(|o| format!("{o:?}")).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Certificate> {
        Ok(Certificate { inner: UnramifiedCertificate::from_json(text).map_err(py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Certificate(alpha = {}, valid = {})", self.inner.alpha_display, self.inner.valid)
    }
}

#[pyfunction]
fn factor(n: BigInt) -> PyResult<Vec<(BigInt, u32)>> {
    Ok(cubiclab::intarith::factor(&n).map_err(py_err)?.factors)
}

#[pyfunction]
fn family_m(b: BigInt) -> BigInt {
    cubic::family_m(&b)
}

#[pyfunction]
fn family_point(b: BigInt) -> PyResult<CurvePoint> {
    Ok(CurvePoint { inner: mordell::family_point(&b).map_err(py_err)? })
}

#[pyfunction]
#[pyo3(signature = (m, relation_bound = 12))]
fn class_group(py: Python<'_>, m: BigInt, relation_bound: u32) -> PyResult<ClassGroup> {
    let inner = py.detach(|| classgrp::class_group(&m, relation_bound)).map_err(py_err)?;
    Ok(ClassGroup { inner })
}

#[pyfunction]
fn certify(alpha: &CubicElement) -> PyResult<Certificate> {
    Ok(Certificate { inner: hcf::certify_unramified(&alpha.inner).map_err(py_err)? })
}

/// Certificate from a searched point, or `None` when the search finds nothing usable.
#[pyfunction]
#[pyo3(signature = (m, t_max = 6, r_max = 5000))]
fn construct_from_curve(py: Python<'_>, m: BigInt, t_max: u64, r_max: u64) -> Option<Certificate> {
    let got = py.detach(|| hcf::construct_from_curve(&m, SearchBounds { t_max, r_max }));
    got.certificate().map(|c| Certificate { inner: c.clone() })
}

#[pyfunction]
fn unit_construction(a: BigInt) -> PyResult<Certificate> {
    Ok(Certificate { inner: hcf::unit_construction(&a).map_err(py_err)? })
}

/// Scan report as TSV or JSON text.
#[pyfunction]
#[pyo3(signature = (b_min, b_max, checks = vec!["root-number".to_string()], format = "json"))]
fn run_scan(py: Python<'_>, b_min: u64, b_max: u64, checks: Vec<String>, format: &str) -> PyResult<String> {
    let checks = checks.iter().map(|c| c.parse::<Check>()).collect::<Result<BTreeSet<_>, _>>().map_err(py_err)?;
    let format: Format = format.parse().map_err(py_err)?;
    let config = ScanConfig { b_min, b_max, checks, ..ScanConfig::default() };
    py.detach(|| scan::run_scan(&config).and_then(|r| scan::emit(&r, format))).map_err(py_err)
}

#[pymodule]
fn pycubiclab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CubiclabError", m.py().get_type::<CubiclabError>())?;
    m.add_class::<CubicField>()?;
    m.add_class::<CubicElement>()?;
    m.add_class::<Curve>()?;
    m.add_class::<CurvePoint>()?;
    m.add_class::<ClassGroup>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(family_m, m)?)?;
    m.add_function(wrap_pyfunction!(family_point, m)?)?;
    m.add_function(wrap_pyfunction!(class_group, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(construct_from_curve, m)?)?;
    m.add_function(wrap_pyfunction!(unit_construction, m)?)?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    Ok(())
}
