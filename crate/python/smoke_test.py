"""Smoke test of the Python bindings. Run after `pip install --no-build-isolation -e crates/py`."""

import math

import starwall as sw


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    v = sw.rho_bar(1.0, -1.0, 0.5)
    assert math.isfinite(v) and v == sw.rho_bar(1.0, -1.0, -0.5)

    grid = sw.Grid(-6.0, 1.0, 128, -6.0, 6.0, 128)
    rho = sw.rho_bar_field(1.0, grid)
    assert grid.shape == (128, 128)
    assert rho.sup_norm() > 0.0

    wall = sw.ClosedForm(1.0)
    free = sw.genvalue_residual_free(wall, 1.0, grid=grid, region=(-6.0, 0.0, -6.0, 6.0))
    fourth = sw.fourth_order_residual(wall, 1.0, grid=grid)
    assert free.verdict == "fail" and free.relative() > 0.1, free
    assert fourth.verdict == "pass", fourth
    printed = sw.fourth_order_residual(wall, 1.0, grid=grid, zeroth="as-printed")
    assert not printed.passed()

    ev = sw.Liouville(2.0, 1.0)
    pts = sw.sample_rectangle((-2.0, 0.5), (-2.0, 2.0), 5)
    assert sw.genvalue_residual_liouville(ev, pts).passed()
    assert sw.difference_eq_residual(ev, pts).passed()
    assert not sw.difference_eq_residual(ev, pts, form="as-printed").passed()
    report, defect, shift = sw.effective_mass_residual(ev, pts)
    assert report.passed() and defect < 1e-8
    assert close(shift.imag, math.pi / 4.0, 1e-12)

    conv = sw.convergence_study([2.0, 4.0, 8.0, 16.0], 1.0)
    d = conv["distances"]
    assert conv["monotone"] and all(b < a for a, b in zip(d, d[1:])), d

    sup = sw.wall_suppression_study([2.0, 4.0, 8.0], 1.0, 0.5, [-2.0, 0.0, 2.0])
    assert sup["decreasing"]

    aligned = sw.Grid.aligned(-6.0, 1.0, 141, 256)
    pure = sw.purity_check(sw.State("wall", 1.0).wigner_lattice(aligned))
    assert pure["purity_metric"] < 1e-8, pure["purity_metric"]

    small = sw.Grid(-4.0, 0.0, 16, -3.0, 3.0, 16)
    field, err = sw.State("robin", 1.0, L=1.0).wigner(small)
    assert err < 1e-8 and field.sup_norm() > 0.0

    unit = sw.Field(small, [[1.0 + 0.0j] * 16 for _ in range(16)])
    back = sw.star(unit, field)
    assert max(abs(a - b) for ra, rb in zip(back.values(), field.values()) for a, b in zip(ra, rb)) < 1e-12

    lr_grid = sw.Grid(-10.0, 0.0, 128, -32.0, 32.0, 256)
    lr = sw.lr_star_residual(sw.rho_bar_field(1.0, lr_grid), 1.0)
    assert lr["interior_points"] > 0 and lr["agreement"] < 1e-5

    try:
        sw.State("wall", -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative k accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
