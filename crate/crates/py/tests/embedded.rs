use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>) -> PyResult<()>>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(starwall_py::starwall_py)(py);
        let locals = PyDict::new(py);
        locals.set_item("sw", m)?;
        f(py, &locals)
    })
    .unwrap_or_else(|e| panic!("{e}"));
}

#[test]
fn checks_from_python() {
    with_module(|py, locals| {
        py.run(
            c"
grid = sw.Grid(-6.0, 1.0, 96, -6.0, 6.0, 96)
wall = sw.ClosedForm(1.0)
free = sw.genvalue_residual_free(wall, 1.0, grid=grid, region=(-6.0, 0.0, -6.0, 6.0))
fourth = sw.fourth_order_residual(wall, 1.0, grid=grid)
assert free.verdict == 'fail' and free.equation_id == 'eq4'
assert fourth.verdict == 'pass' and fourth.equation_id == 'eq26'
ev = sw.Liouville(1.0, 1.0)
pts = sw.sample_rectangle((-2.0, 0.5), (-2.0, 2.0), 3)
assert sw.genvalue_residual_liouville(ev, pts).passed()
",
            Some(locals),
            None,
        )
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, locals| {
        py.run(
            c"
for bad in (lambda: sw.State('wall', -1.0), lambda: sw.State('moon', 1.0), lambda: sw.Grid(0.0, 0.0, 1, 0.0, 1.0, 2)):
    try:
        bad()
    except ValueError:
        pass
    else:
        raise AssertionError('accepted bad input')
try:
    sw.fourth_order_residual(sw.ClosedForm(1.0), 1.0)
except ValueError:
    pass
else:
    raise AssertionError('analytic operand without a grid')
",
            Some(locals),
            None,
        )
    });
}
