"""Flat G2 backgrounds: R^7 with phi0 and the product C^3 x S^1."""

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from . import algebra as alg
from .errors import DegeneratePlaneError
from .grassmann import DEGENERACY_TOL

CY_LABELS = ("x1", "y1", "x2", "y2", "x3", "y3", "t")
R7_LABELS = tuple(f"x{i}" for i in range(1, 8))


@dataclass(frozen=True)
class AmbientModel:
    kind: str
    phi: alg.ThreeForm7
    labels: tuple

    @property
    def metric(self):
        return np.eye(7)

    @property
    def name(self):
        return {"FlatR7": "flat_r7", "FlatCYxS1": "cy_x_s1"}[self.kind]

    def christoffel(self, x=None):
        """Levi-Civita symbols in model coordinates; identically zero."""
        return np.zeros((7, 7, 7))


def build_flat_r7():
    return AmbientModel("FlatR7", alg.PHI0, R7_LABELS)


def cy_three_form():
    """Re(Omega) - dt ^ omega in coordinates (x1, y1, x2, y2, x3, y3, t).

    Omega = (dx1 + i dy1) ^ (dx2 + i dy2) ^ (dx3 + i dy3) and
    omega = sum dx_k ^ dy_k, so omega(X, Y) = <J X, Y> with J d/dx = d/dy.
    """
    terms = {}
    # expand Omega: choose dx (real) or i dy from each factor
    for choice in product((0, 1), repeat=3):
        coeff = 1j ** sum(choice)
        idx = tuple(2 * k + 1 + c for k, c in enumerate(choice))
        if abs(coeff.real) > 0:
            terms[idx] = terms.get(idx, 0.0) + coeff.real
    for k in range(3):
        terms[(7, 2 * k + 1, 2 * k + 2)] = terms.get((7, 2 * k + 1, 2 * k + 2), 0.0) - 1.0
    return alg.ThreeForm7.from_terms(terms)


def build_cy_s1():
    return AmbientModel("FlatCYxS1", cy_three_form(), CY_LABELS)


MODELS = {"flat_r7": build_flat_r7, "cy_x_s1": build_cy_s1}


def get_model(name):
    try:
        return MODELS[name]()
    except KeyError:
        raise ValueError(f"unknown model {name!r}; expected one of {sorted(MODELS)}") from None


def eta_for_plane(model, p):
    """``eta = phi(e1, e2, .)`` with the index raised."""
    eta = alg.cross(p.e1, p.e2, model.phi)
    if np.linalg.norm(eta) < DEGENERACY_TOL:
        raise DegeneratePlaneError("degenerate plane")
    return eta


def signed_permutation_to_phi0(phi):
    """Search signed coordinate permutations g with ``phi(g e_i, g e_j, g e_k) = phi0_ijk``.

    Returns ``(perm, signs)`` (0-based, g e_i = signs[i] e_perm[i]) or None.
    """
    target = alg.phi0_terms()
    t = phi.tensor
    if np.count_nonzero(phi.coeffs) != len(target):
        return None
    idx = np.array([i for i, _ in target])
    want = np.array([c for _, c in target], dtype=float)
    sign_choices = np.array(list(product((1, -1), repeat=7)))
    sign_prod = np.prod(sign_choices[:, idx], axis=2)  # (128, 7)
    for perm in permutations(range(7)):
        vals = np.array([t[perm[a], perm[b], perm[c]] for a, b, c in idx])
        if np.any(vals == 0):
            continue
        ok = np.all(sign_prod * vals == want, axis=1)
        if ok.any():
            return perm, sign_choices[int(np.argmax(ok))]
    return None
