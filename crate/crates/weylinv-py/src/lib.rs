//! Python bindings: group-spec parsing, invariant groups and family tables.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use weylinv::cli::{family_rows, mode_from_name, parse_spec, print_spec};
use weylinv::invariants::{self, DEFAULT_HEIGHT};
use weylinv::newton::newton_transform;
use weylinv::root_data::{DynkinType, LatticeModel, SimpleFactor};
use weylinv::syzygy::check_flatness;

create_exception!(weylinv_py, WeylInvError, PyException);

fn py_err(e: weylinv::Error) -> PyErr {
    WeylInvError::new_err(e.to_string())
}

/// Canonical text of a group spec.
#[pyfunction]
fn canonical_spec(text: &str) -> PyResult<String> {
    parse_spec(text).map(|s| print_spec(&s)).map_err(py_err)
}

/// Q, Dec, Sdec (Hermite bases in Killing coordinates) and the invariant
/// factors of Inv_ind and Inv_sd.
#[pyfunction]
#[pyo3(signature = (spec, height = DEFAULT_HEIGHT, mode = None))]
fn invariant_groups<'py>(py: Python<'py>, spec: &str, height: u32, mode: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let (dec_mode, sdec_mode) = mode_from_name(mode).map_err(py_err)?;
    let model = LatticeModel::compile(&parse_spec(spec).map_err(py_err)?).map_err(py_err)?;
    let r = py.detach(|| invariants::invariants(&model, height, dec_mode, sdec_mode)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("spec", print_spec(&r.spec))?;
    out.set_item("Q", r.q.hnf_i64())?;
    out.set_item("Dec", r.dec.hnf_i64())?;
    out.set_item("Sdec", r.sdec.hnf_i64())?;
    out.set_item("dec_exactness", r.dec.exactness.to_string())?;
    out.set_item("sdec_exactness", r.sdec.exactness.to_string())?;
    out.set_item("sdec_mode", r.sdec_mode.to_string())?;
    out.set_item("inv_ind", r.inv_ind.factors_i64())?;
    out.set_item("inv_sd", r.inv_sd.factors_i64())?;
    Ok(out)
}

/// Whether the Newton tuple of a simple factor is flat with unit determinant.
#[pyfunction]
fn newton_is_flat(ty: &str, rank: usize) -> PyResult<bool> {
    let t = match ty {
        "A" => DynkinType::A,
        "C" => DynkinType::C,
        other => return Err(WeylInvError::new_err(format!("Newton tuples exist for A and C, not {other}"))),
    };
    let nt = newton_transform(SimpleFactor::new(t, rank).map_err(py_err)?).map_err(py_err)?;
    Ok(check_flatness(&nt.flat).ok && nt.det_is_unit())
}

/// Rows of a labelled family: `(spec, inv_ind, expected_ind, inv_sd, expected_sd, passed)`.
#[pyfunction]
#[pyo3(signature = (label, max_rank = None))]
#[allow(clippy::type_complexity)]
fn family_table(
    py: Python<'_>,
    label: &str,
    max_rank: Option<usize>,
) -> PyResult<Vec<(String, Option<Vec<i64>>, Option<Vec<i64>>, Option<Vec<i64>>, Option<Vec<i64>>, bool)>> {
    let rows = py.detach(|| family_rows(label, max_rank, DEFAULT_HEIGHT, None)).map_err(py_err)?;
    Ok(rows
        .iter()
        .map(|row| {
            let r = row.report.as_ref().ok();
            (
                print_spec(&row.instance.spec),
                r.map(|r| r.inv_ind.factors_i64()),
                row.instance.expected_ind.clone(),
                r.map(|r| r.inv_sd.factors_i64()),
                row.instance.expected_sd.clone(),
                row.passed(),
            )
        })
        .collect())
}

#[pymodule]
fn weylinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WeylInvError", m.py().get_type::<WeylInvError>())?;
    m.add_function(wrap_pyfunction!(canonical_spec, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_groups, m)?)?;
    m.add_function(wrap_pyfunction!(newton_is_flat, m)?)?;
    m.add_function(wrap_pyfunction!(family_table, m)?)?;
    Ok(())
}
