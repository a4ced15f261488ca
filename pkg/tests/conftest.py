import pytest

from g2lab.ambient import get_model
from g2lab.catalog import default_model, make_immersion
from g2lab.pipeline import theorem_report

CASES = ["plane", "scaled_plane", "holomorphic_graph", "sphere", "catenoid", "torus"]


@pytest.fixture(scope="session")
def catalog_reports():
    """Default-resolution reports for every catalog surface, computed once."""
    out = {}
    for name in CASES:
        out[name] = theorem_report(make_immersion(name), get_model(default_model(name)))
    return out


def custom(exprs, domain=(-1, 1, -1, 1), grid=(16, 16), h=1e-3, params=None):
    exprs = list(exprs) + ["0"] * (7 - len(exprs))
    return make_immersion("custom", params, domain, grid, h, exprs)
