import numpy as np
import pytest

from opticbm import ModelParams

#: Base parameter set used throughout: mu1=1, mu2=0.4, c_c=15000,
#: c_p_uso=10000, with tau/lambda/c_p_so varying per test.
BASE = dict(mu1=1.0, mu2=0.4, c_c=15000.0, c_p_uso=10000.0)


def base_params(lam=0.5, tau=2.0, c_p_so=4000.0, **overrides):
    kw = {**BASE, "lam": lam, "tau": tau, "c_p_so": c_p_so, **overrides}
    return ModelParams(**kw)


def random_params(rng: np.random.Generator) -> ModelParams:
    """A valid random parameter set with moderate rates and periods."""
    mu1 = rng.uniform(0.2, 3.0)
    mu2 = rng.uniform(0.2, 3.0)
    lam = rng.uniform(0.0, 3.0)
    tau = rng.uniform(0.5, 4.0)
    c_c = rng.uniform(5_000.0, 20_000.0)
    c_p_so = rng.uniform(0.05, 0.95) * c_c
    c_p_uso = rng.uniform(c_p_so, 0.99 * c_c)
    return ModelParams(mu1, mu2, lam, tau, c_c, c_p_so, c_p_uso)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
