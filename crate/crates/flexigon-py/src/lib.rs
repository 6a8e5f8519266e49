/*!
Python bindings for the flexigon calculator.

The module mirrors the core crate's surface in a small, pythonic shape: a
[`Lengths`] vector (epsilons realized on construction), a [`Monomial`] of
characteristic classes, and free functions that evaluate, expand, and
enumerate. Both evaluation paths are exposed so a Python session can replay
the algebra-versus-counting cross-check:

```python
import flexigon
l = flexigon.Lengths("3,1,1,1,1")
m = flexigon.Monomial("1:1,2:1")
assert flexigon.evaluate(l, m) == flexigon.evaluate_by_counting(l, m) == -1
```

Every core error surfaces as a `ValueError` carrying the original message.
*/

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use flexigon_core::algebra::RingTag;
use flexigon_core::classes::{
    chern_monomial, euler_power_top, monomial_cocycle, EulerMethod, MonomialSpec,
    RepresentationChoice,
};
use flexigon_core::lengths::{
    chamber_signature, chern_nonvanishing, ChernVanishing, LengthVector, SymbolicLengths,
};
use flexigon_core::oracle::{
    chern_general_triangles, equilateral_closed_forms, euler_power_triangles, list_triangles,
    ClosedFormKind,
};

fn err(e: flexigon_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A polygon's side lengths. Epsilon tokens are realized by perturbation on
/// construction, so the vector is generic from then on.
#[pyclass(frozen)]
struct Lengths {
    realized: LengthVector,
}

#[pymethods]
impl Lengths {
    /// Parse `"3,1,1,1,1"`, `"4+eps,7/2,3,2"`, … and realize the epsilons.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let sym = SymbolicLengths::parse(spec).map_err(err)?;
        Ok(Lengths {
            realized: sym.perturb(),
        })
    }

    /// Number of sides.
    #[getter]
    fn n(&self) -> usize {
        self.realized.n()
    }

    /// The realized side lengths, as exact rational strings.
    #[getter]
    fn values(&self) -> Vec<String> {
        self.realized.values().iter().map(ToString::to_string).collect()
    }

    /// True when no signed sum of the sides vanishes (always holds after
    /// realization).
    #[getter]
    fn is_generic(&self) -> bool {
        self.realized.is_generic()
    }

    /// Do the two vectors lie in the same chamber (equal wall signs, hence
    /// equal intersection numbers throughout)?
    fn same_chamber(&self, other: &Lengths) -> PyResult<bool> {
        if self.realized.n() != other.realized.n() {
            return Ok(false);
        }
        let a = chamber_signature(&self.realized).map_err(err)?;
        let b = chamber_signature(&other.realized).map_err(err)?;
        Ok(a == b)
    }

    /// Edges whose Chern class vanishes here (the three dominant edges of an
    /// exceptional chamber; empty otherwise).
    fn chern_vanishing(&self) -> PyResult<Vec<usize>> {
        let mut zero = Vec::new();
        for i in 1..=self.realized.n() {
            if chern_nonvanishing(&self.realized, i).map_err(err)?
                == ChernVanishing::ZeroExceptional
            {
                zero.push(i);
            }
        }
        Ok(zero)
    }

    fn __len__(&self) -> usize {
        self.realized.n()
    }

    fn __repr__(&self) -> String {
        format!("Lengths(\"{}\")", self.values().join(","))
    }
}

/// A monomial of characteristic classes: `Ch(1)²·Ch(4)` is
/// `Monomial("1:2,4:1")`, the Euler power `e³` is `Monomial("e:3", ring="z2")`.
#[pyclass(frozen)]
struct Monomial {
    spec: MonomialSpec,
}

#[pymethods]
impl Monomial {
    #[new]
    #[pyo3(signature = (spec, ring = "z"))]
    fn new(spec: &str, ring: &str) -> PyResult<Self> {
        let ring = match ring {
            "z" => RingTag::Z,
            "z2" => RingTag::Z2,
            other => {
                return Err(PyValueError::new_err(format!(
                    "ring must be \"z\" or \"z2\", got {other:?}"
                )))
            }
        };
        Ok(Monomial {
            spec: MonomialSpec::parse(spec, ring).map_err(err)?,
        })
    }

    #[getter]
    fn ring(&self) -> &'static str {
        match self.spec.ring() {
            RingTag::Z => "z",
            RingTag::Z2 => "z2",
        }
    }

    /// Total degree, in units of degree-2 classes.
    #[getter]
    fn total(&self) -> u32 {
        self.spec.total()
    }

    /// Edges carrying classes, ascending.
    #[getter]
    fn support(&self) -> Vec<usize> {
        self.spec.support()
    }

    fn __repr__(&self) -> String {
        format!("Monomial(\"{}\", ring=\"{}\")", self.spec, self.ring())
    }
}

/// Require the top degree `n − 3` — the only degree a monomial evaluates at.
fn check_top(l: &Lengths, m: &Monomial) -> PyResult<()> {
    let top = l.realized.n() - 3;
    if m.spec.total() as usize != top {
        return Err(PyValueError::new_err(format!(
            "monomial degree mismatch: total degree {} must equal n−3 = {top}",
            m.spec.total()
        )));
    }
    Ok(())
}

/// Evaluate a top-degree monomial through the cocycle algebra: an integer
/// over ℤ, a parity over ℤ₂.
#[pyfunction]
fn evaluate(l: &Lengths, m: &Monomial) -> PyResult<i64> {
    check_top(l, m)?;
    match m.spec.ring() {
        RingTag::Z => chern_monomial(&l.realized, &m.spec).map_err(err),
        RingTag::Z2 => euler_power_top(&l.realized, EulerMethod::Chain).map_err(err),
    }
}

/// Evaluate the same monomial by counting signed triangular configurations —
/// the independent path `evaluate` is checked against.
#[pyfunction]
fn evaluate_by_counting(l: &Lengths, m: &Monomial) -> PyResult<i64> {
    check_top(l, m)?;
    match m.spec.ring() {
        RingTag::Z => chern_general_triangles(&l.realized, &m.spec).map_err(err),
        RingTag::Z2 => euler_power_triangles(&l.realized, None).map_err(err),
    }
}

/// Expand a monomial (any degree up to `n − 3`) into its cocycle normal
/// form. `reps` overrides dashed partners per class, e.g. `{1: 4}`; a choice
/// that breaks transversality raises `ValueError`.
#[pyfunction]
#[pyo3(signature = (l, m, reps = None))]
fn expand(l: &Lengths, m: &Monomial, reps: Option<BTreeMap<usize, usize>>) -> PyResult<String> {
    let n = l.realized.n();
    let choice = match reps {
        None => RepresentationChoice::canonical(n, &m.spec).map_err(err)?,
        Some(overrides) => {
            if m.spec.ring() == RingTag::Z2 {
                return Err(PyValueError::new_err(
                    "reps overrides dashed Chern partners; the Euler chain has none",
                ));
            }
            RepresentationChoice::with_dashed_overrides(n, &m.spec, &overrides).map_err(err)?
        }
    };
    let c = monomial_cocycle(&l.realized, &m.spec, &choice).map_err(err)?;
    Ok(c.to_string())
}

/// List the contributing triangular configurations as
/// `(groups, sides, sign)` tuples, where `groups` is a list of `(I, J)` edge
/// lists and `sides` are the triangle's exact rational side lengths.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn triangles(
    l: &Lengths,
    m: &Monomial,
) -> PyResult<Vec<(Vec<(Vec<usize>, Vec<usize>)>, Vec<String>, i64)>> {
    let configs = list_triangles(&l.realized, &m.spec).map_err(err)?;
    Ok(configs
        .into_iter()
        .map(|c| {
            let groups = c
                .groups
                .iter()
                .map(|&(i, j)| (i.iter().collect(), j.iter().collect()))
                .collect();
            let sides = c.sides.iter().map(ToString::to_string).collect();
            (groups, sides, c.sign)
        })
        .collect())
}

/// The top Euler power `e^{n−3}` on the planar moduli space: 0 or 1.
#[pyfunction]
fn euler_power(l: &Lengths) -> PyResult<i64> {
    euler_power_top(&l.realized, EulerMethod::Chain).map_err(err)
}

/// Closed form for equilateral polygons: `kind="chern"` gives
/// `Ch^{2k}(i) = (−1)^k·C(2k+1, k)` on a (2k+3)-gon, `kind="euler"` the
/// parity of `C(2s+1, s)` on a (2s+3)-gon.
#[pyfunction]
#[pyo3(signature = (k, kind = "chern"))]
fn closed_form(k: u32, kind: &str) -> PyResult<i64> {
    let kind = match kind {
        "chern" => ClosedFormKind::Chern,
        "euler" => ClosedFormKind::Euler,
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be \"chern\" or \"euler\", got {other:?}"
            )))
        }
    };
    Ok(equilateral_closed_forms(k, kind))
}

#[pymodule]
fn flexigon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Lengths>()?;
    m.add_class::<Monomial>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_by_counting, m)?)?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(triangles, m)?)?;
    m.add_function(wrap_pyfunction!(euler_power, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form, m)?)?;
    Ok(())
}
