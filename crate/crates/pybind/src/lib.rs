use pyo3::prelude::*;

#[pymodule]
fn milbag_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
