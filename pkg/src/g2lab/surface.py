"""Discretized immersions, their jets, fundamental forms and Gauss lifts.

All field computations are batched: a set of sample points ``uv`` of
shape ``(n, 2)`` produces arrays with leading dimension ``n``.  The
per-sample operations (``sample_jet``, ``fundamental_data``, ...) wrap
the batched versions for a single point.

Derivatives are second-order central differences with step ``h``.  In the
flat ambient models covariant derivatives are coordinate derivatives.
"""

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from .errors import BoundaryMarginError, DegenerateSampleError

IMMERSION_TOL = 1e-6
METRIC_DET_TOL = 1e-12
B_FLOOR = 1e-12


@dataclass(frozen=True)
class ParametricImmersion:
    """A chart ``f: [u0, u1] x [v0, v1] -> R^7``.

    ``func`` maps broadcastable arrays ``(u, v)`` to ``(..., 7)``.  When
    ``expr`` is given (an :class:`~g2lab.expr.ImmersionExpr`) exact jets are
    available through :meth:`exact_jets`.
    """

    func: object
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)
    grid: tuple = (64, 64)
    fd_step: float = 1e-3
    name: str = "custom"
    expr: object = field(default=None, compare=False)

    def __post_init__(self):
        u0, u1, v0, v1 = (float(x) for x in self.domain)
        if not (u1 > u0 and v1 > v0):
            raise ValueError("domain must satisfy u0 < u1 and v0 < v1")
        if not self.fd_step > 0:
            raise ValueError("fd_step must be positive")
        object.__setattr__(self, "domain", (u0, u1, v0, v1))
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))

    def __call__(self, u, v):
        return self.func(u, v)

    def grid_axes(self):
        """Cell-centred sample coordinates along u and v."""
        u0, u1, v0, v1 = self.domain
        n, m = self.grid
        u = u0 + (np.arange(n) + 0.5) * (u1 - u0) / n
        v = v0 + (np.arange(m) + 0.5) * (v1 - v0) / m
        return u, v

    def grid_points(self):
        """``(n*m, 2)`` sample points in row-major order (u index outer)."""
        u, v = self.grid_axes()
        uu, vv = np.meshgrid(u, v, indexing="ij")
        return np.stack([uu.ravel(), vv.ravel()], axis=-1)

    def check_margin(self, uv, h=None):
        h = self.fd_step if h is None else h
        uv = np.atleast_2d(uv)
        u0, u1, v0, v1 = self.domain
        m = 2 * h
        bad = ((uv[:, 0] < u0 + m) | (uv[:, 0] > u1 - m) | (uv[:, 1] < v0 + m) | (uv[:, 1] > v1 - m))
        if bad.any():
            k = int(np.argmax(bad))
            raise BoundaryMarginError(
                f"sample {tuple(uv[k])} is closer than 2h = {m:g} to the domain boundary")

    def with_step(self, h):
        return ParametricImmersion(self.func, self.domain, self.grid, h, self.name, self.expr)

    def exact_jets(self, uv):
        if self.expr is None:
            raise ValueError("exact jets need an expression-defined immersion")
        uv = np.atleast_2d(uv)
        u, v = uv[:, 0], uv[:, 1]
        du = self.expr.derivative("u")
        dv = self.expr.derivative("v")
        return JetSample(uv, self.expr(u, v), du(u, v), dv(u, v),
                         du.derivative("u")(u, v), du.derivative("v")(u, v), dv.derivative("v")(u, v))


@dataclass
class JetSample:
    point: np.ndarray
    f: np.ndarray
    fu: np.ndarray
    fv: np.ndarray
    fuu: np.ndarray
    fuv: np.ndarray
    fvv: np.ndarray


def jets(f, uv, h):
    """Batched central-difference jets at points ``uv`` (no margin check)."""
    uv = np.atleast_2d(np.asarray(uv, dtype=float))
    u, v = uv[:, 0], uv[:, 1]
    f0 = f(u, v)
    fpu, fmu = f(u + h, v), f(u - h, v)
    fpv, fmv = f(u, v + h), f(u, v - h)
    fpp, fpm = f(u + h, v + h), f(u + h, v - h)
    fmp, fmm = f(u - h, v + h), f(u - h, v - h)
    return JetSample(
        point=uv,
        f=f0,
        fu=(fpu - fmu) / (2 * h),
        fv=(fpv - fmv) / (2 * h),
        fuu=(fpu - 2 * f0 + fmu) / h**2,
        fuv=(fpp - fpm - fmp + fmm) / (4 * h * h),
        fvv=(fpv - 2 * f0 + fmv) / h**2,
    )


def first_derivatives(f, uv, h):
    uv = np.atleast_2d(uv)
    u, v = uv[:, 0], uv[:, 1]
    return (f(u + h, v) - f(u - h, v)) / (2 * h), (f(u, v + h) - f(u, v - h)) / (2 * h)


def sample_jet(f, p, h=None):
    """Jet of ``f`` at a single point ``p`` (interior with margin 2h)."""
    h = f.fd_step if h is None else h
    f.check_margin(p, h)
    j = jets(f, p, h)
    return JetSample(*(np.asarray(x)[0] for x in
                       (j.point, j.f, j.fu, j.fv, j.fuu, j.fuv, j.fvv)))


# ---------------------------------------------------------------- frames

@dataclass
class FrameField:
    """Oriented orthonormal tangent frame, eta, and projectors at samples."""

    e1: np.ndarray
    e2: np.ndarray
    eta: np.ndarray
    coeffs: np.ndarray      # (n, 2, 2); e_i = coeffs[i,0] f_u + coeffs[i,1] f_v
    metric: np.ndarray      # (n, 3) -> E, F, G
    degenerate: np.ndarray  # bool

    @property
    def xi(self):
        return alg.wedge2(self.e1, self.e2)

    @property
    def tangent_projector(self):
        return (self.e1[..., :, None] * self.e1[..., None, :]
                + self.e2[..., :, None] * self.e2[..., None, :])

    @property
    def w_projector(self):
        eye = np.eye(7)
        return eye - self.tangent_projector - self.eta[..., :, None] * self.eta[..., None, :]


def frame_field(fu, fv, phi=None):
    fu = np.asarray(fu, dtype=float)
    fv = np.asarray(fv, dtype=float)
    E = np.sum(fu * fu, axis=-1)
    F = np.sum(fu * fv, axis=-1)
    G = np.sum(fv * fv, axis=-1)
    det = E * G - F * F
    degenerate = ~(np.sqrt(np.maximum(det, 0.0)) >= IMMERSION_TOL) | ~(det >= METRIC_DET_TOL)
    # keep degenerate samples numerically harmless; they are masked downstream
    fu_s = np.where(degenerate[..., None], np.eye(7)[0], fu)
    fv_s = np.where(degenerate[..., None], np.eye(7)[1], fv)
    E_s = np.where(degenerate, 1.0, E)
    F_s = np.where(degenerate, 0.0, F)
    det_s = np.where(degenerate, 1.0, det)
    sqE = np.sqrt(E_s)
    e1 = fu_s / sqE[..., None]
    w = fv_s - np.sum(fv_s * e1, axis=-1)[..., None] * e1
    e2 = w / np.linalg.norm(w, axis=-1)[..., None]
    d = np.sqrt(det_s / E_s)
    coeffs = np.zeros(fu.shape[:-1] + (2, 2))
    coeffs[..., 0, 0] = 1.0 / sqE
    coeffs[..., 1, 0] = -F_s / (E_s * d)
    coeffs[..., 1, 1] = 1.0 / d
    eta = alg.cross(e1, e2, phi)
    eta = eta / np.linalg.norm(eta, axis=-1)[..., None]
    return FrameField(e1, e2, eta, coeffs, np.stack([E, F, G], axis=-1), degenerate)


class FieldSampler:
    """Evaluates derived fields at the four axis neighbours ``p +- h``.

    Directional derivatives along the unit frame directions combine the
    u and v central differences with the frame coefficients at ``p``.
    """

    def __init__(self, f, uv, h, phi=None):
        self.f = f
        self.uv = np.atleast_2d(np.asarray(uv, dtype=float))
        self.h = h
        self.phi = phi
        shifts = np.array([[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
        pts = self.uv[None, :, :] + shifts[:, None, :]
        fu, fv = first_derivatives(f, pts.reshape(-1, 2), h)
        ff = frame_field(fu, fv, phi)
        n = len(self.uv)
        self.neighbours = [FrameField(*(np.asarray(x).reshape((4, n) + np.shape(x)[1:])[k]
                                        for x in (ff.e1, ff.e2, ff.eta, ff.coeffs, ff.metric, ff.degenerate)))
                           for k in range(4)]

    def partials(self, fn):
        """``(d/du, d/dv)`` of ``fn(frame_field)`` by central differences."""
        vals = [fn(nb) for nb in self.neighbours]
        return (vals[0] - vals[1]) / (2 * self.h), (vals[2] - vals[3]) / (2 * self.h)

    def directional(self, fn, coeffs):
        """Derivatives of ``fn`` along e1 and e2, stacked on axis 1."""
        du, dv = self.partials(fn)
        extra = du.ndim - 1
        out = []
        for i in range(2):
            a = coeffs[:, i, 0].reshape((-1,) + (1,) * extra)
            b = coeffs[:, i, 1].reshape((-1,) + (1,) * extra)
            out.append(a * du + b * dv)
        return np.stack(out, axis=1)

    @property
    def degenerate(self):
        return np.any([nb.degenerate for nb in self.neighbours], axis=0)


# ---------------------------------------------------------------- fundamental data

@dataclass
class FundamentalData:
    first_form: np.ndarray    # (..., 3): E, F, G
    B: np.ndarray             # (..., 3, 7): B(du,du), B(du,dv), B(dv,dv)
    B_frame: np.ndarray       # (..., 3, 7): B(e1,e1), B(e1,e2), B(e2,e2)
    H: np.ndarray             # (..., 7) mean curvature vector, trace_I B
    tau: np.ndarray           # (..., 7) coordinate tension f_uu + f_vv
    r_conf: np.ndarray
    degenerate: np.ndarray

    @property
    def curvature_norm(self):
        """Largest orthonormal-frame value |B(e_i, e_j)|."""
        return np.max(np.linalg.norm(self.B_frame, axis=-1), axis=-1)


def fundamental_data_batch(jet, frames):
    """First and second fundamental forms, mean curvature and tension field."""
    E, F, G = (frames.metric[..., k] for k in range(3))
    pt = frames.tangent_projector
    second = np.stack([jet.fuu, jet.fuv, jet.fvv], axis=-2)
    B = second - np.einsum("...ij,...kj->...ki", pt, second)
    det = np.where(frames.degenerate, 1.0, E * G - F * F)
    ginv = np.stack([G, -F, E], axis=-1) / det[..., None]
    H = ginv[..., 0, None] * B[..., 0, :] + 2 * ginv[..., 1, None] * B[..., 1, :] + ginv[..., 2, None] * B[..., 2, :]
    c = frames.coeffs
    Bf = np.stack([
        _bilinear(B, c[..., 0, :], c[..., 0, :]),
        _bilinear(B, c[..., 0, :], c[..., 1, :]),
        _bilinear(B, c[..., 1, :], c[..., 1, :]),
    ], axis=-2)
    tau = jet.fuu + jet.fvv
    denom = np.where(frames.degenerate, 1.0, E + G)
    r_conf = (np.abs(E - G) + 2 * np.abs(F)) / denom
    return FundamentalData(frames.metric, B, Bf, H, tau, r_conf, frames.degenerate)


def _bilinear(B, a, b):
    # B(a, b) for coordinate coefficient vectors a, b with B stored as (uu, uv, vv)
    return (a[..., 0, None] * b[..., 0, None] * B[..., 0, :]
            + (a[..., 0, None] * b[..., 1, None] + a[..., 1, None] * b[..., 0, None]) * B[..., 1, :]
            + a[..., 1, None] * b[..., 1, None] * B[..., 2, :])


def fundamental_data(jet, model):
    """Single-sample fundamental data; rejects a degenerate metric."""
    frames = frame_field(jet.fu, jet.fv, model.phi)
    if np.any(frames.degenerate):
        raise DegenerateSampleError("degenerate first fundamental form at sample")
    return fundamental_data_batch(jet, frames)


# ---------------------------------------------------------------- Gauss lift

@dataclass
class LiftSample:
    e1: np.ndarray
    e2: np.ndarray
    eta: np.ndarray
    d_eta: np.ndarray     # (..., 2, 7): derivative of eta along d/du, d/dv, projected off eta
    horiz: np.ndarray     # (..., 2, 7): f_u, f_v
    vert: np.ndarray      # same as d_eta
    degenerate: np.ndarray

    @property
    def xi(self):
        return alg.wedge2(self.e1, self.e2)


def gauss_lift_batch(f, uv, h, model, jet=None, frames=None, sampler=None):
    phi = model.phi
    jet = jet if jet is not None else jets(f, uv, h)
    frames = frames if frames is not None else frame_field(jet.fu, jet.fv, phi)
    sampler = sampler if sampler is not None else FieldSampler(f, uv, h, phi)
    du, dv = sampler.partials(lambda nb: nb.eta)
    d_eta = np.stack([du, dv], axis=-2)
    eta = frames.eta
    d_eta = d_eta - np.sum(d_eta * eta[..., None, :], axis=-1)[..., None] * eta[..., None, :]
    horiz = np.stack([jet.fu, jet.fv], axis=-2)
    return LiftSample(frames.e1, frames.e2, eta, d_eta, horiz, d_eta,
                      frames.degenerate | sampler.degenerate)


def gauss_lift(jet, model, f, h=None):
    """Gauss lift at the point of ``jet``; ``f`` supplies the neighbouring
    samples needed to difference the eta field."""
    h = f.fd_step if h is None else h
    uv = np.atleast_2d(jet.point)
    j = JetSample(*(np.atleast_2d(x) for x in (jet.point, jet.f, jet.fu, jet.fv, jet.fuu, jet.fuv, jet.fvv)))
    lift = gauss_lift_batch(f, uv, h, model, jet=j)
    if lift.degenerate[0]:
        raise DegenerateSampleError("degenerate immersion at sample")
    return LiftSample(*(np.asarray(x)[0] for x in
                        (lift.e1, lift.e2, lift.eta, lift.d_eta, lift.horiz, lift.vert, lift.degenerate)))


def tangency_residual(lift):
    """max over d/du, d/dv of |<f_* v, eta>| / |f_* v|."""
    dots = np.abs(np.sum(lift.horiz * lift.eta[..., None, :], axis=-1))
    return np.max(dots / np.linalg.norm(lift.horiz, axis=-1), axis=-1)


def a_eta_residual(fd, lift, floor=B_FLOOR):
    """Largest relative eta-component of the second fundamental form.

    ``|<B, eta>| / (|B| + floor)`` over the three orthonormal-frame values;
    values of B with norm at or below ``floor`` count as zero.
    """
    B = fd.B_frame
    nb = np.linalg.norm(B, axis=-1)
    comp = np.abs(np.sum(B * lift.eta[..., None, :], axis=-1))
    ratio = np.where(nb > floor, comp / (nb + floor), 0.0)
    return np.max(ratio, axis=-1)


def horizontal_residual(lift, phi=None):
    """|f_*(J_Sigma du) - J_eta f_*(du)| / |f_u| with J_Sigma du = dv."""
    fu = lift.horiz[..., 0, :]
    fv = lift.horiz[..., 1, :]
    jfu = alg.cross(lift.eta, fu, phi)
    return np.linalg.norm(fv - jfu, axis=-1) / np.linalg.norm(fu, axis=-1)


# ---------------------------------------------------------------- holomorphy

@dataclass
class HolomorphyData:
    alpha: np.ndarray          # (..., 21) complex, nabla_eps xi with eps = e1 - i e2
    cW: np.ndarray             # (..., 7) complex
    c3: np.ndarray             # (...,) complex
    vertical: np.ndarray       # (..., 7) complex, E^{0,1} part of nabla_eps eta
    eps_contraction: np.ndarray    # eps _| alpha
    epsbar_contraction: np.ndarray  # conj(eps) _| alpha

    @property
    def cW_norm(self):
        return np.sqrt(np.sum(np.abs(self.cW) ** 2, axis=-1))

    @property
    def c3_norm(self):
        return np.abs(self.c3)

    @property
    def vertical_norm(self):
        return np.sqrt(np.sum(np.abs(self.vertical) ** 2, axis=-1))


def holomorphy_batch(frames, sampler, phi=None):
    """Holomorphy defect of the Gauss lift from differences of the plane field.

    ``alpha = nabla_{e1} xi - i nabla_{e2} xi`` where xi = e1 ^ e2 is the
    (frame independent) tangent-plane bivector.  The components follow
    :func:`g2lab.grassmann.holomorphy_components`.
    """
    dxi = sampler.directional(lambda nb: nb.xi, frames.coeffs)
    alpha = dxi[:, 0] - 1j * dxi[:, 1]
    eps = frames.e1 - 1j * frames.e2
    eta = frames.eta
    pw = frames.w_projector
    c_eps = alg.interior(eps, alpha)
    c_bar = alg.interior(np.conj(eps), alpha)
    xw = np.einsum("...ij,...j->...i", pw, c_bar)
    cW = 0.5 * (xw - 1j * alg.cross(eta, xw, phi))
    c3 = np.sum(c_eps * eta, axis=-1)
    deta = sampler.directional(lambda nb: nb.eta, frames.coeffs)
    x = deta[:, 0] - 1j * deta[:, 1]
    x = x - np.sum(x * eta, axis=-1)[..., None] * eta
    vertical = 0.5 * (x + 1j * alg.cross(eta, x, phi))
    return HolomorphyData(alpha, cW, c3, vertical, c_eps, c_bar)


def holomorphy_defect(f, p, model, h=None):
    """``(cW_norm, c3_norm, r_conf)`` at a single point."""
    h = f.fd_step if h is None else h
    f.check_margin(p, h)
    uv = np.atleast_2d(np.asarray(p, dtype=float))
    jet = jets(f, uv, h)
    frames = frame_field(jet.fu, jet.fv, model.phi)
    sampler = FieldSampler(f, uv, h, model.phi)
    if frames.degenerate[0] or sampler.degenerate[0]:
        raise DegenerateSampleError("degenerate immersion at sample")
    hol = holomorphy_batch(frames, sampler, model.phi)
    fd = fundamental_data_batch(jet, frames)
    return float(hol.cW_norm[0]), float(hol.c3_norm[0]), float(fd.r_conf[0])


def proof_identity_residuals(hol, fd):
    """Residuals of ``eps _| alpha = i B(eps, eps)`` and ``conj(eps) _| alpha = -i H``.

    Here ``B(eps, eps) = B11 - B22 - 2i B12`` in the orthonormal frame.  The
    tangential connection terms of the frame cancel between the two wedge
    factors, so no frame correction enters.
    """
    B11, B12, B22 = (fd.B_frame[..., k, :] for k in range(3))
    b_eps = B11 - B22 - 2j * B12
    r1 = np.linalg.norm(hol.eps_contraction - 1j * b_eps, axis=-1)
    r2 = np.linalg.norm(hol.epsbar_contraction + 1j * fd.H, axis=-1)
    return r1, r2
