use std::ffi::CString;

use goodcoord_py::goodcoord_module;
use pyo3::prelude::*;

#[test]
fn python_smoke_script() {
    pyo3::append_to_inittab!(goodcoord_module);
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py");
    let code = CString::new(std::fs::read_to_string(script).unwrap()).unwrap();
    Python::attach(|py| {
        let m = PyModule::from_code(py, &code, c"smoke_test.py", c"smoke_test").unwrap();
        m.getattr("main").unwrap().call0().unwrap();
    });
}
