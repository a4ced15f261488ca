"""Oriented 2-planes in R^7 and their G2 splitting.

An oriented plane xi = span(e1, e2) determines the unit normal
eta = e1 x e2, the coassociative complement W = <xi, eta>^perp, and the
almost complex structure J = eta x (.) on <eta>^perp.  Complexified
vectors use the convention T^{1,0} = span{v - i J v}, so that
eps = e1 - i e2 is of type (1,0).
"""

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from .errors import DegeneratePlaneError, NotTangentError

DEGENERACY_TOL = 1e-8
FRAME_TOL = 1e-10
TANGENT_TOL = 1e-8


@dataclass(frozen=True)
class OrientedPlane2:
    """Oriented orthonormal 2-frame."""

    e1: np.ndarray
    e2: np.ndarray

    def __post_init__(self):
        e1 = np.asarray(self.e1, dtype=float)
        e2 = np.asarray(self.e2, dtype=float)
        if e1.shape != (7,) or e2.shape != (7,):
            raise ValueError("plane frame vectors must have shape (7,)")
        if alg.biv_norm(alg.wedge2(e1, e2)) < DEGENERACY_TOL:
            raise DegeneratePlaneError("frame vectors are (nearly) parallel")
        if (abs(np.linalg.norm(e1) - 1) > FRAME_TOL or abs(np.linalg.norm(e2) - 1) > FRAME_TOL
                or abs(e1 @ e2) > FRAME_TOL):
            raise ValueError("plane frame must be orthonormal; use OrientedPlane2.from_vectors")
        object.__setattr__(self, "e1", e1)
        object.__setattr__(self, "e2", e2)

    @classmethod
    def from_vectors(cls, y, z):
        """Oriented Gram-Schmidt of an arbitrary spanning pair."""
        y = np.asarray(y, dtype=float)
        z = np.asarray(z, dtype=float)
        if alg.biv_norm(alg.wedge2(y, z)) < DEGENERACY_TOL * np.linalg.norm(y) * np.linalg.norm(z):
            raise DegeneratePlaneError("spanning vectors are (nearly) parallel")
        e1 = y / np.linalg.norm(y)
        w = z - (z @ e1) * e1
        return cls(e1, w / np.linalg.norm(w))

    @property
    def bivector(self):
        return alg.wedge2(self.e1, self.e2)


@dataclass(frozen=True)
class PlaneSplitting:
    eta: np.ndarray
    xi_frame: tuple
    w_frame: np.ndarray      # (4, 7), rows orthonormal
    j_xi: np.ndarray         # (2, 2), M[a, b] = <f_a, J f_b>
    j_w: np.ndarray          # (4, 4)
    phi: np.ndarray = field(repr=False)

    @property
    def e1(self):
        return self.xi_frame[0]

    @property
    def e2(self):
        return self.xi_frame[1]

    @property
    def eps(self):
        """``e1 - i e2``, spanning xi^{1,0}."""
        return self.e1 - 1j * self.e2

    @property
    def w_projector(self):
        return self.w_frame.T @ self.w_frame

    def jmap(self, v):
        return alg.cross(self.eta, v, self.phi)

    def w10(self, x):
        """Component of ``x`` in W^{1,0} (x is first projected onto W)."""
        xw = np.asarray(x) @ self.w_projector
        return 0.5 * (xw - 1j * self.jmap(xw))

    def w01(self, x):
        xw = np.asarray(x) @ self.w_projector
        return 0.5 * (xw + 1j * self.jmap(xw))

    def w10_basis(self):
        """Two unit (Hermitian norm) vectors spanning W^{1,0}."""
        w = self.w_frame
        first = w[0]
        # pick a frame vector orthogonal to span{w0, J w0} for the second generator
        jw0 = self.jmap(first)
        rest = w[1:] - np.outer(w[1:] @ first, first) - np.outer(w[1:] @ jw0, jw0)
        second = rest[np.argmax(np.linalg.norm(rest, axis=1))]
        second = second / np.linalg.norm(second)
        return [(x - 1j * self.jmap(x)) / np.sqrt(2.0) for x in (first, second)]


def _complement_frame(vectors, n_out):
    """Project the ambient basis onto span(vectors)^perp, greedy Gram-Schmidt.

    At each step the candidate with the largest remaining norm is taken,
    ties broken by index order.
    """
    q = np.array(vectors, dtype=float)
    proj = np.eye(7) - q.T @ q
    candidates = proj.copy()  # row k = projection of e_k
    frame = []
    for _ in range(n_out):
        norms = np.linalg.norm(candidates, axis=1)
        k = int(np.argmax(np.round(norms, 12)))
        v = candidates[k] / norms[k]
        frame.append(v)
        candidates = candidates - np.outer(candidates @ v, v)
    return np.array(frame)


def complement_frames(q):
    """Batched :func:`_complement_frame` for ``q`` of shape ``(n, 3, 7)``."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    cand = np.eye(7) - np.einsum("nai,naj->nij", q, q)
    rows = np.arange(n)
    frame = np.empty((n, 4, 7))
    for step in range(4):
        norms = np.linalg.norm(cand, axis=2)
        k = np.argmax(np.round(norms, 12), axis=1)
        v = cand[rows, k] / norms[rows, k][:, None]
        frame[:, step] = v
        cand = cand - np.einsum("nij,nj->ni", cand, v)[:, :, None] * v[:, None, :]
    return frame


def _orthonormal_basis(q):
    # re-orthonormalize rows (e1, e2, eta) against round-off
    out = []
    for v in q:
        for u in out:
            v = v - (v @ u) * u
        out.append(v / np.linalg.norm(v))
    return out


def plane_split(p, phi=None):
    """Splitting ``R^7 = xi + <eta> + W`` for an oriented plane."""
    t = alg._tensor(phi)
    eta = alg.cross(p.e1, p.e2, t)
    n = np.linalg.norm(eta)
    if n < DEGENERACY_TOL:
        raise DegeneratePlaneError("three-form degenerates on this plane")
    eta = eta / n
    base = _orthonormal_basis([p.e1, p.e2, eta])
    w = _complement_frame(base, 4)
    cm = alg.cross_matrix(eta, t)
    xi = np.array([p.e1, p.e2])
    return PlaneSplitting(
        eta=eta,
        xi_frame=(p.e1, p.e2),
        w_frame=w,
        j_xi=xi @ cm @ xi.T,
        j_w=w @ cm @ w.T,
        phi=t,
    )


def fundamental_form_w(s):
    """``omega(v, w) = phi(eta, v, w)`` restricted to W, in the w_frame basis."""
    return np.einsum("ijk,i,aj,bk->ab", s.phi, s.eta, s.w_frame, s.w_frame)


def two_form_on_frame(form_matrix, frame):
    """Evaluate a 2-form given as a 7x7 antisymmetric matrix on frame vectors."""
    return frame @ form_matrix @ frame.T


def volume_pairing(omega):
    """``(omega ^ omega)(w1, w2, w3, w4)`` for a 4x4 antisymmetric matrix."""
    o = omega
    return 2.0 * (o[0, 1] * o[2, 3] - o[0, 2] * o[1, 3] + o[0, 3] * o[1, 2])


@dataclass(frozen=True)
class TangentComponents:
    v1: np.ndarray
    v2: np.ndarray
    a: complex
    b: complex
    residual: float


def tangent_decompose(base, value, s=None, tol=TANGENT_TOL):
    """Write ``value = V1 ^ e1 + V2 ^ e2 + eta ^ (a e1 + b e2)`` with V1, V2 in W."""
    s = s or plane_split(base)
    value = np.asarray(value)
    c1 = alg.interior(s.e1, value)
    c2 = alg.interior(s.e2, value)
    pw = s.w_projector
    v1 = -(c1 @ pw)
    v2 = -(c2 @ pw)
    a = -(c1 @ s.eta)
    b = -(c2 @ s.eta)
    recon = (alg.wedge2(v1, s.e1) + alg.wedge2(v2, s.e2)
             + alg.wedge2(s.eta, a * s.e1 + b * s.e2))
    residual = float(alg.biv_norm(value - recon))
    if residual > tol:
        raise NotTangentError(residual)
    if not np.iscomplexobj(value):
        a, b = float(np.real(a)), float(np.real(b))
    return TangentComponents(v1, v2, a, b, residual)


def holomorphy_components(alpha, s):
    """Holomorphy defect of a complexified tangent vector ``alpha`` at ``s``.

    Returns ``(cW, c3)`` where ``cW`` is the W^{1,0} component and ``c3``
    the eta component of the Hermitian contractions of alpha with
    eps = e1 - i e2 and with its conjugate respectively.  With the bilinear
    contraction this reads ``cW = (conj(eps) _| alpha)^{W,1,0}`` and
    ``c3 = <eta, eps _| alpha>``.  Both vanish iff ``pi_7(alpha)`` lies in
    E^{1,0}.
    """
    alpha = np.asarray(alpha)
    eps = s.eps
    cw = s.w10(alg.interior(np.conj(eps), alpha))
    c3 = alg.interior(eps, alpha) @ s.eta
    return cw, c3


def hermitian_norm(x):
    x = np.asarray(x)
    return np.sqrt(np.sum(np.abs(x) ** 2, axis=-1))


def e01_component(x, s):
    """E^{0,1} part of a complex vector in <eta>^perp (eta part removed first)."""
    x = np.asarray(x)
    x = x - np.multiply.outer(x @ s.eta, s.eta) if x.ndim > 1 else x - (x @ s.eta) * s.eta
    return 0.5 * (x + 1j * s.jmap(x))


def vertical_image(alpha):
    """Variation of eta induced by a variation alpha of the plane.

    eta(xi) corresponds to pi_7(xi) under lambda7_iso, so the linearization
    is ``alpha -> lambda7_vector(alpha)``; on ``a ^ b`` it is ``a x b``.
    """
    return alg.lambda7_vector(alpha)


@dataclass
class PiReport:
    pi7_norm_sq: float
    eta_recovered: np.ndarray
    eta_error: float
    injectivity_ratio_min: float
    n_pairs: int


def pi_invariants(p, n_pairs=1000, seed=0):
    """|pi_7(xi)|^2, recovery of eta from pi_7(xi), and a sampled lower bound of
    |pi_14(xi) - pi_14(xi')| / |xi - xi'| over random plane pairs."""
    xi = p.bivector
    s = plane_split(p)
    a7 = alg.pi7(xi)
    eta_rec = alg.lambda7_iso_inv(a7)
    planes_a = random_planes(n_pairs, seed)
    planes_b = random_planes(n_pairs, seed + 1)
    # include near pairs, where injectivity is tightest
    rng = np.random.default_rng(seed + 2)
    near = random_planes(n_pairs, seed + 3)
    pert = near + 1e-3 * rng.standard_normal(near.shape)
    near_b = np.array([OrientedPlane2.from_vectors(*f).bivector for f in pert])
    near_a = np.array([OrientedPlane2.from_vectors(*f).bivector for f in near])
    xa = np.concatenate([np.array([OrientedPlane2(*f).bivector for f in planes_a]), near_a])
    xb = np.concatenate([np.array([OrientedPlane2(*f).bivector for f in planes_b]), near_b])
    ratio = alg.biv_norm(alg.pi14(xa) - alg.pi14(xb)) / alg.biv_norm(xa - xb)
    return PiReport(
        pi7_norm_sq=float(alg.biv_norm(a7) ** 2),
        eta_recovered=eta_rec,
        eta_error=float(np.linalg.norm(eta_rec - s.eta)),
        injectivity_ratio_min=float(np.min(ratio)),
        n_pairs=len(ratio),
    )


def random_planes(n, seed=0):
    """``(n, 2, 7)`` oriented orthonormal frames, Haar-distributed via QR."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, 7, 2))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    return np.transpose(q, (0, 2, 1))
