"""Built-in surfaces, each given by component expressions in u, v.

Surfaces in flat R^7 sit in span(e1, e2, e3), which is closed under the
cross product.  The holomorphic graph lives in C^3 x S^1 with coordinates
(x1, y1, x2, y2, x3, y3, t).
"""

from dataclasses import dataclass
from math import comb

from .expr import ImmersionExpr
from .surface import ParametricImmersion

DEFAULT_DOMAIN = (-1.0, 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    components: object   # callable(params) -> list of 7 strings
    defaults: dict
    model: str = "flat_r7"
    domain: tuple = DEFAULT_DOMAIN


def _pad(parts):
    return list(parts) + ["0"] * (7 - len(parts))


def _zk_parts(k):
    """Real and imaginary parts of (u + i v)^k as polynomial strings."""
    re_terms, im_terms = [], []
    for j in range(k + 1):
        factors = [str(comb(k, j))] if comb(k, j) != 1 else []
        factors += [f"u^{k - j}" if k - j > 1 else "u"] if k - j else []
        factors += [f"v^{j}" if j > 1 else "v"] if j else []
        mono = "*".join(factors) or "1"
        # i^j cycles through 1, i, -1, -i
        r = j % 4
        if r == 0:
            re_terms.append(mono)
        elif r == 1:
            im_terms.append(mono)
        elif r == 2:
            re_terms.append(f"-{mono}")
        else:
            im_terms.append(f"-{mono}")
    join = lambda ts: " + ".join(ts).replace("+ -", "- ") if ts else "0"
    return join(re_terms), join(im_terms)


def _holomorphic_graph(p):
    k = int(p["k"])
    if k < 1 or k != p["k"]:
        raise ValueError("holomorphic_graph needs an integer k >= 1")
    re, im = _zk_parts(k)
    return ["u", "v", re, im, "0", "0", "t0"]


CATALOG = {
    "plane": CatalogEntry("plane", lambda p: _pad(["u", "v"]), {}),
    "scaled_plane": CatalogEntry("scaled_plane", lambda p: _pad(["a*u", "b*v"]), {"a": 2.0, "b": 1.0}),
    "holomorphic_graph": CatalogEntry("holomorphic_graph", _holomorphic_graph, {"k": 2, "t0": 0.0},
                                      model="cy_x_s1", domain=(-0.5, 0.5, -0.5, 0.5)),
    # Mercator chart: conformal, no poles on a bounded rectangle
    "sphere": CatalogEntry("sphere", lambda p: _pad(["r*cos(u)/cosh(v)", "r*sin(u)/cosh(v)",
                                                     "r*sinh(v)/cosh(v)"]), {"r": 1.0}),
    "catenoid": CatalogEntry("catenoid", lambda p: _pad(["c*cosh(v)*cos(u)", "c*cosh(v)*sin(u)", "c*v"]),
                             {"c": 1.0}),
    "torus": CatalogEntry("torus", lambda p: _pad(["(R + r*cos(v))*cos(u)", "(R + r*cos(v))*sin(u)",
                                                   "r*sin(v)"]), {"R": 2.0, "r": 1.0}),
}


def catalog_expr(name, params=None):
    """The :class:`ImmersionExpr` of a catalog surface with merged parameters."""
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown surface {name!r}; expected one of {sorted(CATALOG)} or 'custom'") from None
    merged = dict(entry.defaults)
    for key, val in (params or {}).items():
        if key not in merged:
            raise ValueError(f"surface {name!r} has no parameter {key!r}")
        merged[key] = val
    texts = entry.components(merged)
    if name == "holomorphic_graph":
        merged = {"t0": merged["t0"]}
    return ImmersionExpr.from_strings(texts, merged)


def make_immersion(name, params=None, domain=None, grid=(64, 64), fd_step=1e-3, expressions=None):
    """Build a :class:`ParametricImmersion` from the catalog or from expressions."""
    if name == "custom":
        if expressions is None:
            raise ValueError("custom surface needs 'expressions'")
        expr = ImmersionExpr.from_strings(expressions, params)
        domain = domain or DEFAULT_DOMAIN
    else:
        expr = catalog_expr(name, params)
        domain = domain or CATALOG[name].domain
    return ParametricImmersion(expr, tuple(domain), tuple(grid), fd_step, name, expr)


def default_model(name):
    return CATALOG[name].model if name in CATALOG else "flat_r7"
