import numpy as np
import pytest

from maass_certify.kernels import available_impls


@pytest.fixture(params=[name for name, _ in available_impls()])
def kimpl(request):
    """Run kernel-level tests against every available implementation."""
    return dict(available_impls())[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
