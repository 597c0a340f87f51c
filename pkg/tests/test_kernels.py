import numpy as np
import pytest

from catmood import kernels
from catmood.driver import advection_case, burgers_case, run_solver, sod_case
from catmood.systems import Burgers, Euler, LinearAdvection

needs_compiled = pytest.mark.skipif("cython" not in kernels.available_backends(),
                                    reason="compiled kernel not built")


def test_python_backend_always_available():
    assert "python" in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


@needs_compiled
@pytest.mark.parametrize("P", [1, 2, 3])
@pytest.mark.parametrize("system", [LinearAdvection(1.3), Burgers(), Euler(1.4)],
                         ids=lambda s: type(s).__name__)
def test_backends_bit_identical(P, system):
    rng = np.random.default_rng(P)
    n = 200
    if isinstance(system, Euler):
        u = system.conserved(rng.uniform(0.2, 2, n), rng.uniform(-1, 1, n), rng.uniform(0.2, 2, n))
    else:
        u = rng.uniform(-1, 2, (n, 1))
    left = np.arange(P - 1, n - P)
    a = kernels.cat_fluxes(u, left, system, P, 0.37, "python")
    b = kernels.cat_fluxes(u, left, system, P, 0.37, "cython")
    np.testing.assert_array_equal(a, b)


@needs_compiled
def test_backends_propagate_nonfinite_alike():
    u = np.ones((10, 3)) * [1.0, 0.0, 2.5]
    u[4, 0] = np.nan
    left = np.arange(2, 7)
    a = kernels.cat_fluxes(u, left, Euler(), 3, 0.3, "python")
    b = kernels.cat_fluxes(u, left, Euler(), 3, 0.3, "cython")
    np.testing.assert_array_equal(np.isfinite(a), np.isfinite(b))


@needs_compiled
@pytest.mark.parametrize("case, scheme, n", [(advection_case(), "catmood6", 40),
                                             (burgers_case(False), "catmood6", 50),
                                             (sod_case(), "catmood6", 100)])
def test_full_runs_identical_across_backends(case, scheme, n):
    a = run_solver(case, scheme, n, backend="python", compute_errors=False)
    b = run_solver(case, scheme, n, backend="cython", compute_errors=False)
    np.testing.assert_array_equal(a.final, b.final)
    assert a.demotions == b.demotions
