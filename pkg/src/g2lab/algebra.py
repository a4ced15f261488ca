"""Exterior algebra of R^7 with the standard G2 three-form.

Vectors are numpy arrays with trailing dimension 7.  Bivectors are stored
as 21 coefficients on ``e_i ^ e_j`` (i < j, lexicographic), three-forms as
35 coefficients on ``eps^{ijk}`` (i < j < k).  Every operation broadcasts
over leading dimensions and accepts complex input where that makes sense.

Indices in docstrings are 1-based to match the usual notation; array
indices are 0-based.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .errors import NotInLambda7Error, NotOrthogonalError

DIM = 7
PAIRS = tuple(combinations(range(DIM), 2))
TRIPLES = tuple(combinations(range(DIM), 3))
PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}
TRIPLE_INDEX = {t: k for k, t in enumerate(TRIPLES)}
_I_UP = np.array([p[0] for p in PAIRS])
_J_UP = np.array([p[1] for p in PAIRS])

EXACT_TOL = 1e-12
DERIVED_TOL = 1e-10


def perm_sign(seq):
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def basis_vector(i, dtype=float):
    """``e_i`` for 1-based ``i``."""
    v = np.zeros(DIM, dtype=dtype)
    v[i - 1] = 1
    return v


def basis_bivector(i, j):
    """``e_i ^ e_j`` for 1-based ``i != j`` as 21 coefficients."""
    out = np.zeros(len(PAIRS))
    a, b = i - 1, j - 1
    s = perm_sign((a, b))
    if s == 0:
        return out
    out[PAIR_INDEX[tuple(sorted((a, b)))]] = s
    return out


def bivector(terms):
    """Bivector from ``{(i, j): coeff}`` with 1-based, possibly unsorted pairs."""
    dtype = complex if any(np.iscomplexobj(c) for c in terms.values()) else float
    out = np.zeros(len(PAIRS), dtype=dtype)
    for (i, j), c in terms.items():
        out = out + c * basis_bivector(i, j)
    return out


def as_matrix(beta):
    """Antisymmetric ``(..., 7, 7)`` matrix with ``M[i, j] = beta_ij``."""
    beta = np.asarray(beta)
    m = np.zeros(beta.shape[:-1] + (DIM, DIM), dtype=beta.dtype)
    m[..., _I_UP, _J_UP] = beta
    m[..., _J_UP, _I_UP] = -beta
    return m


def from_matrix(m):
    """Upper-triangle coefficients of an antisymmetric matrix."""
    m = np.asarray(m)
    return m[..., _I_UP, _J_UP]


def biv_inner(a, b):
    """Bilinear inner product; basis bivectors are orthonormal."""
    return np.sum(np.asarray(a) * np.asarray(b), axis=-1)


def biv_norm(a):
    a = np.asarray(a)
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=-1))


def wedge2(y, z):
    """``y ^ z`` with coefficient ``(i, j) = y_i z_j - y_j z_i``."""
    y = np.asarray(y)
    z = np.asarray(z)
    m = y[..., :, None] * z[..., None, :]
    return m[..., _I_UP, _J_UP] - m[..., _J_UP, _I_UP]


def interior(v, beta):
    """Contraction ``v _| beta``; ``v _| (a ^ b) = <v,a> b - <v,b> a``.

    The pairing is bilinear, also for complex arguments.
    """
    return np.einsum("...i,...ij->...j", np.asarray(v), as_matrix(beta))


# --------------------------------------------------------------------------
# three-forms

def _wedge_terms_to_tensor(terms):
    t = np.zeros((DIM, DIM, DIM))
    for idx, c in terms:
        for p in permutations(range(3)):
            q = tuple(idx[k] for k in p)
            t[q] += c * perm_sign(p)
    return t


def phi0_terms():
    """The seven wedge terms of phi0, 0-based, as ``((i, j, k), sign)``.

    Generated from eps^123 + sum_i eps^i ^ eta^-_i with
    eta^-_1 = eps^45 - eps^67, eta^-_2 = eps^46 - eps^75,
    eta^-_3 = eps^47 - eps^56.
    """
    eta_minus = {
        1: [((4, 5), 1), ((6, 7), -1)],
        2: [((4, 6), 1), ((7, 5), -1)],
        3: [((4, 7), 1), ((5, 6), -1)],
    }
    terms = [((0, 1, 2), 1)]
    for i, pieces in eta_minus.items():
        for (a, b), c in pieces:
            idx = (i - 1, a - 1, b - 1)
            s = perm_sign(idx)
            terms.append((tuple(sorted(idx)), c * s))
    return terms


def tensor_from_coeffs(coeffs):
    """Totally antisymmetric ``(7, 7, 7)`` tensor from 35 coefficients."""
    coeffs = np.asarray(coeffs)
    return _wedge_terms_to_tensor([(t, coeffs[k]) for k, t in enumerate(TRIPLES) if coeffs[k] != 0])


def coeffs_from_tensor(t):
    t = np.asarray(t)
    return np.array([t[i, j, k] for i, j, k in TRIPLES])


@dataclass(frozen=True)
class ThreeForm7:
    """A constant three-form on R^7 given by its 35 coefficients."""

    coeffs: np.ndarray
    tensor: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (len(TRIPLES),):
            raise ValueError(f"expected 35 coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("three-form coefficients must be finite")
        c.setflags(write=False)
        t = tensor_from_coeffs(c)
        t.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "tensor", t)

    @classmethod
    def from_terms(cls, terms):
        """From 1-based ``{(i, j, k): coeff}`` in any index order."""
        c = np.zeros(len(TRIPLES))
        for idx, val in terms.items():
            idx0 = tuple(i - 1 for i in idx)
            s = perm_sign(idx0)
            if s:
                c[TRIPLE_INDEX[tuple(sorted(idx0))]] += s * val
        return cls(c)

    def coefficient(self, i, j, k):
        """Coefficient of ``eps^{ijk}`` (1-based, any order)."""
        return float(self.tensor[i - 1, j - 1, k - 1])

    def __call__(self, x, y, z):
        return np.einsum("ijk,...i,...j,...k->...", self.tensor, x, y, z)


def _phi0():
    c = np.zeros(len(TRIPLES))
    for idx, s in phi0_terms():
        c[TRIPLE_INDEX[idx]] += s
    return ThreeForm7(c)


PHI0 = _phi0()


def _tensor(phi):
    if phi is None:
        return PHI0.tensor
    if isinstance(phi, ThreeForm7):
        return phi.tensor
    return np.asarray(phi)


def phi_eval(x, y, z, phi=None):
    """``phi(x, y, z)``; defaults to the standard form."""
    return np.einsum("ijk,...i,...j,...k->...", _tensor(phi), x, y, z)


def cross(y, z, phi=None):
    """Vector cross product: ``<x, y x z> = phi(x, y, z)``."""
    cm = cross_matrix(np.asarray(y), phi)
    return (cm @ np.asarray(z)[..., None])[..., 0]


def cross_matrix(eta, phi=None):
    """Matrix of ``v -> eta x v``."""
    return np.einsum("kij,...i->...kj", _tensor(phi), eta)


def contract_form(x, phi=None):
    """``x _| phi`` as a bivector (indices raised by the Euclidean metric)."""
    t = _tensor(phi)
    return np.einsum("...i,iab->...ab", x, t)[..., _I_UP, _J_UP]


def _brute_force_table(phi):
    # phi(e_x, e_y, e_z) from the wedge terms as 3x3 determinants; independent of the tensor.
    terms = [(t, c) for t, c in zip(TRIPLES, phi.coeffs) if c != 0]
    eye = np.eye(DIM)
    table = np.zeros((DIM, DIM, DIM))
    for x in range(DIM):
        for y in range(DIM):
            for z in range(DIM):
                rows = np.stack([eye[x], eye[y], eye[z]])
                table[x, y, z] = sum(c * np.linalg.det(rows[:, list(idx)]) for idx, c in terms)
    return table


CROSS_TABLE = np.array(PHI0.tensor)  # CROSS_TABLE[k, i, j] = <e_k, e_i x e_j>
CROSS_TABLE.setflags(write=False)
if not np.allclose(CROSS_TABLE, _brute_force_table(PHI0), atol=1e-14):
    raise RuntimeError("cross-product table disagrees with the phi0 coefficient table")


# --------------------------------------------------------------------------
# Hodge star and the 7/14 splitting of bivectors

def _curl_matrix(phi):
    """21x21 matrix of alpha -> *(phi ^ alpha), by explicit basis combinatorics."""
    full = tuple(range(DIM))
    mat = np.zeros((len(PAIRS), len(PAIRS)))
    for col, (l, m) in enumerate(PAIRS):
        for t, c in zip(TRIPLES, phi.coeffs):
            if c == 0 or l in t or m in t:
                continue
            five = t + (l, m)
            s_wedge = perm_sign(five)
            sorted5 = tuple(sorted(five))
            rest = tuple(k for k in full if k not in sorted5)
            s_star = perm_sign(sorted5 + rest)
            mat[PAIR_INDEX[rest], col] += c * s_wedge * s_star
    return mat


CURL_MATRIX = _curl_matrix(PHI0)
CURL_MATRIX.setflags(write=False)
# contract_form as a 7x21 matrix: lambda(X) = X @ _CONTRACT / 3
_CONTRACT = PHI0.tensor[:, _I_UP, _J_UP]


def curl_op(alpha):
    """``alpha -> *(phi0 ^ alpha)``; -2 on Lambda^2_7, +1 on Lambda^2_14."""
    return np.einsum("ab,...b->...a", CURL_MATRIX, np.asarray(alpha))


def project_split(alpha):
    """Return ``(alpha_7, alpha_14)``."""
    alpha = np.asarray(alpha)
    c = curl_op(alpha)
    return (alpha - c) / 3.0, (2.0 * alpha + c) / 3.0


def pi7(alpha):
    return project_split(alpha)[0]


def pi14(alpha):
    return project_split(alpha)[1]


def lambda7_iso(x):
    """``X -> (1/3) X _| phi0``, an isomorphism of R^7 onto Lambda^2_7."""
    return np.einsum("...i,ia->...a", np.asarray(x), _CONTRACT) / 3.0


def lambda7_iso_inv(beta, tol=DERIVED_TOL):
    """Inverse of :func:`lambda7_iso`; rejects input with a Lambda^2_14 part."""
    beta = np.asarray(beta)
    res = np.max(biv_norm(pi14(beta)), initial=0.0)
    if res > tol:
        raise NotInLambda7Error(res)
    return lambda7_vector(beta)


def lambda7_vector(beta):
    """``X_l = sum_{j<k} phi_ljk beta_jk``; equals lambda7_iso_inv on Lambda^2_7
    and annihilates Lambda^2_14.  On simple bivectors ``X(y ^ z) = y x z``."""
    return np.einsum("ia,...a->...i", _CONTRACT, np.asarray(beta))


def jmap(eta, v, phi=None, tol=DERIVED_TOL):
    """Almost complex structure ``J_eta v = eta x v`` on the complement of eta."""
    eta = np.asarray(eta)
    v = np.asarray(v)
    if np.max(np.abs(np.linalg.norm(eta, axis=-1) - 1.0), initial=0.0) > tol:
        raise NotOrthogonalError("eta must be a unit vector")
    dots = np.abs(np.sum(v * eta, axis=-1))
    if np.max(dots, initial=0.0) > tol:
        raise NotOrthogonalError(f"v is not orthogonal to eta (|<v,eta>| = {np.max(dots):.3e})")
    return cross(eta, v, phi)


# --------------------------------------------------------------------------
# compatibility certification

@dataclass
class CompatReport:
    passed: bool
    residuals: dict
    failures: list  # (identity name, residual, witness dict)

    def __bool__(self):
        return self.passed


def compat_check(phi=None, g_is_euclidean=True, n_samples=1000, seed=0, tol=EXACT_TOL):
    """Certify that ``phi`` defines a G2-type cross product for the Euclidean metric.

    Checks, over random samples, skewness of the cross product,
    ``|y x z| = |y ^ z|``, ``y x z`` orthogonal to y and z, and ``J^2 = -1``
    for unit eta.  Residuals are scaled by the natural magnitude of each
    identity so that the tolerance is relative.
    """
    if not g_is_euclidean:
        raise NotImplementedError("only the Euclidean metric is supported")
    t = _tensor(phi)
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((n_samples, DIM))
    z = rng.standard_normal((n_samples, DIM))
    yz = cross(y, z, t)
    zy = cross(z, y, t)
    scale = np.linalg.norm(y, axis=1) * np.linalg.norm(z, axis=1)
    checks = {}
    checks["skew"] = np.linalg.norm(yz + zy, axis=1) / scale
    checks["norm_identity"] = np.abs(np.linalg.norm(yz, axis=1) - biv_norm(wedge2(y, z))) / scale
    checks["orthogonality"] = np.maximum(
        np.abs(np.sum(yz * y, axis=1)) / (scale * np.linalg.norm(y, axis=1)),
        np.abs(np.sum(yz * z, axis=1)) / (scale * np.linalg.norm(z, axis=1)),
    )
    eta = y / np.linalg.norm(y, axis=1, keepdims=True)
    v = z - np.sum(z * eta, axis=1, keepdims=True) * eta
    jjv = cross(eta, cross(eta, v, t), t)
    checks["j_squared"] = np.linalg.norm(jjv + v, axis=1) / np.linalg.norm(v, axis=1)

    residuals = {}
    failures = []
    for name, r in checks.items():
        k = int(np.argmax(r))
        residuals[name] = float(r[k])
        if not r[k] < tol:
            failures.append((name, float(r[k]), {"y": y[k].copy(), "z": z[k].copy()}))
    return CompatReport(passed=not failures, residuals=residuals, failures=failures)
