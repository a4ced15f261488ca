"""The rank-2 Hermitian bundle W = <xi, eta>^perp along an immersed surface.

Tensorial quantities (the Hermitian defect, the derivative of F) are
differenced at the four axis neighbours of each sample, so they do not
depend on how the W frames are chosen.  The aligned frame field on the
grid is used for continuity and connection checks.
"""

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from .errors import FrameAlignmentError
from .grassmann import complement_frames

CONTINUITY_CHORD = 2 * np.sin(np.pi / 8)   # rotation angle pi/4
MAX_FLAG_FRACTION = 0.01


def _phi_on_frame(a, w, phi):
    # phi(a, w_b, w_c) = <a x w_b, w_c>
    return np.einsum("...bk,...ck->...bc", alg.cross(a[..., None, :], w, phi), w)


def w_frames(frames, phi=None):
    """``(n, 4, 7)`` orthonormal W frames, one per sample.

    Greedy projection of the ambient basis, oriented so that
    ``omega ^ omega < 0`` as for ``(e4, e5, e6, e7)``.
    """
    t = alg._tensor(phi)
    base = np.stack([frames.e1, frames.e2, frames.eta], axis=1)
    w = complement_frames(base)
    o = _phi_on_frame(frames.eta, w, t)
    vol = 2.0 * (o[:, 0, 1] * o[:, 2, 3] - o[:, 0, 2] * o[:, 1, 3] + o[:, 0, 3] * o[:, 1, 2])
    w[vol > 0, 3] *= -1
    return w


def _procrustes(frame, target):
    """Rotation R in SO(4) minimizing |R frame - target| (rows are vectors)."""
    u, _, vt = np.linalg.svd(target @ frame.T)
    if np.linalg.det(u @ vt) < 0:
        u[:, -1] = -u[:, -1]
    return u @ vt


@dataclass
class WFrameField:
    frames: np.ndarray      # (n, m, 4, 7)
    j_w: np.ndarray         # (n, m, 4, 4)
    flags: np.ndarray       # (n, m) bool, True where continuity failed

    @property
    def flag_fraction(self):
        return float(np.mean(self.flags)) if self.flags.size else 0.0


def align_frames(raw, grid_shape):
    """Sequential row-major sweep aligning each frame with its predecessor.

    The predecessor is the previous sample in the row, or the first sample
    of the previous row at the start of a row.
    """
    n, m = grid_shape
    raw = raw.reshape(n, m, 4, 7)
    out = np.empty_like(raw)
    flags = np.zeros((n, m), dtype=bool)
    for i in range(n):
        for j in range(m):
            if i == 0 and j == 0:
                out[i, j] = raw[i, j]
                continue
            prev = out[i, j - 1] if j > 0 else out[i - 1, 0]
            aligned = _procrustes(raw[i, j], prev) @ raw[i, j]
            out[i, j] = aligned
            chord = np.max(np.linalg.norm(aligned - prev, axis=1))
            flags[i, j] = chord > CONTINUITY_CHORD
    return out, flags


def w_frame_field(frames, grid_shape, phi=None, degenerate=None):
    """Aligned W frames over the grid with continuity flags.

    Raises :class:`FrameAlignmentError` when more than 1% of the grid is
    flagged.  Degenerate samples, if given, are flagged as well but do not
    count towards the limit.
    """
    t = alg._tensor(phi)
    raw = w_frames(frames, t)
    aligned, flags = align_frames(raw, grid_shape)
    if degenerate is not None:
        flags = flags & ~np.asarray(degenerate).reshape(grid_shape)
    frac = float(np.mean(flags)) if flags.size else 0.0
    if frac > MAX_FLAG_FRACTION:
        raise FrameAlignmentError(
            f"W frame continuity failed on {int(flags.sum())} of {flags.size} samples")
    eta = frames.eta.reshape(grid_shape + (7,))
    cm = alg.cross_matrix(eta, t)
    j_w = np.einsum("...ai,...ij,...bj->...ab", aligned, cm, aligned)
    return WFrameField(aligned, j_w, flags)


def connection_matrices(field, frames, grid_shape, spacing):
    """Connection coefficients ``Gamma[i, a, b] = <nabla_{e_i} w_b, w_a>``.

    Central differences of the aligned grid frame field with grid spacings
    ``(du, dv)``; computed at interior grid samples only.  Returns an array
    of shape ``(n-2, m-2, 2, 4, 4)``.
    """
    w = field.frames
    du, dv = spacing
    dw_du = (w[2:, 1:-1] - w[:-2, 1:-1]) / (2 * du)
    dw_dv = (w[1:-1, 2:] - w[1:-1, :-2]) / (2 * dv)
    c = frames.coeffs.reshape(grid_shape + (2, 2))[1:-1, 1:-1]
    mid = w[1:-1, 1:-1]
    out = []
    for i in range(2):
        d = c[..., i, 0, None, None] * dw_du + c[..., i, 1, None, None] * dw_dv
        out.append(np.einsum("...ak,...bk->...ab", mid, d))
    return np.stack(out, axis=-3)


def metric_compatibility_residual(gamma):
    """|Gamma + Gamma^T|: failure of d<v,w> = <nabla v, w> + <v, nabla w>."""
    return np.max(np.abs(gamma + np.swapaxes(gamma, -1, -2)), axis=(-3, -2, -1))


# ---------------------------------------------------------------- Hermitian defect

@dataclass
class HermitianDefect:
    fd_matrices: np.ndarray       # (n, 2, 4, 4): <(nabla_{e_i} J) w_b, w_a>
    closed_form: np.ndarray       # (n, 2, 4, 4): -<(A^eta e_i) x w_b, w_a>

    @property
    def defect(self):
        return np.max(np.linalg.norm(self.fd_matrices, axis=(-2, -1)), axis=-1)

    @property
    def closed_defect(self):
        return np.max(np.linalg.norm(self.closed_form, axis=(-2, -1)), axis=-1)

    @property
    def mismatch(self):
        return np.max(np.linalg.norm(self.fd_matrices - self.closed_form, axis=(-2, -1)), axis=-1)


def _j_w_field(nb, phi):
    pw = nb.w_projector
    return pw @ alg.cross_matrix(nb.eta, phi) @ pw


def hermitian_defect(frames, sampler, fd, wf, phi=None):
    """Covariant derivative of J on W, by differences and in closed form.

    ``wf`` are per-sample W frames ``(n, 4, 7)``.  The closed form uses the
    shape operator ``A^eta e_i = sum_j <B(e_i, e_j), eta> e_j``.
    """
    t = alg._tensor(phi)
    dj = sampler.directional(lambda nb: _j_w_field(nb, t), frames.coeffs)   # (n, 2, 7, 7)
    fd_m = np.einsum("nak,nikl,nbl->niab", wf, dj, wf)
    b = fd.B_frame
    a11 = np.sum(b[:, 0] * frames.eta, axis=-1)
    a12 = np.sum(b[:, 1] * frames.eta, axis=-1)
    a22 = np.sum(b[:, 2] * frames.eta, axis=-1)
    e1, e2 = frames.e1, frames.e2
    shape_op = np.stack([a11[:, None] * e1 + a12[:, None] * e2,
                         a12[:, None] * e1 + a22[:, None] * e2], axis=1)   # (n, 2, 7)
    closed = -np.swapaxes(_phi_on_frame(shape_op, wf[:, None], t), -1, -2)
    return HermitianDefect(fd_m, closed)


# ---------------------------------------------------------------- the map F

def f_map(Y, s):
    """``F(Y)(v, w) = phi(Y, v, w)`` on the W frame of ``s`` (4x4 antisymmetric)."""
    return np.einsum("ijk,...i,aj,bk->...ab", s.phi, np.asarray(Y), s.w_frame, s.w_frame)


def nabla_f_residual(frames, sampler, wf, phi=None):
    """Norm of ``(nabla_{e_i} F)(e_j, w_b, w_c)`` over all frame arguments.

    F is extended off the surface as ``phi(P_T ., P_W ., P_W .)``; the
    ambient derivative of that extension, evaluated on arguments frozen at
    the sample, is the covariant derivative of F.
    """
    t = alg._tensor(phi)
    tang = np.stack([frames.e1, frames.e2], axis=1)

    def field(nb):
        a = np.einsum("nij,nxj->nxi", nb.tangent_projector, tang)
        w = np.einsum("nij,nbj->nbi", nb.w_projector, wf)
        return _phi_on_frame(a, w[:, None], t)

    vals = sampler.directional(field, frames.coeffs)
    return np.sqrt(np.sum(vals ** 2, axis=(1, 2, 3, 4)))


def f_type_residual(frames, wf, phi=None):
    """max |F(eps)(x, y)| over x, y in W^{0,1} (spanned by w + i J w)."""
    t = alg._tensor(phi)
    eps = frames.e1 - 1j * frames.e2
    jw = alg.cross(frames.eta[:, None, :], wf, t)
    w01 = wf + 1j * jw
    vals = _phi_on_frame(eps, w01, t)
    return np.max(np.abs(vals), axis=(-2, -1))


def f_injectivity(frames, wf, phi=None, n_dirs=8):
    """min over unit tangent directions Y of |F(Y)| (2-form norm on W)."""
    t = alg._tensor(phi)
    ang = np.linspace(0.0, np.pi, n_dirs, endpoint=False)
    ys = (np.cos(ang)[None, :, None] * frames.e1[:, None, :]
          + np.sin(ang)[None, :, None] * frames.e2[:, None, :])
    vals = _phi_on_frame(ys, wf[:, None], t)
    norms = np.sqrt(0.5 * np.sum(vals ** 2, axis=(-2, -1)))
    return np.min(norms, axis=-1)
