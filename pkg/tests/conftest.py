import numpy as np
import pytest

from voltconv import bases


@pytest.fixture(params=["chebyshev", "legendre", "gegenbauer", "jacobi"])
def finite_basis(request):
    return {
        "chebyshev": bases.chebyshev(),
        "legendre": bases.legendre(),
        "gegenbauer": bases.gegenbauer(2.0),
        "jacobi": bases.jacobi(2.0, 1.5),
    }[request.param]


def rand_coeffs(seed, n):
    return np.random.default_rng(seed).uniform(-1.0, 1.0, n)
