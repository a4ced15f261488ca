"""Per-sample theorem checks over a grid, executed in fixed chunks.

Samples are independent, so the grid is cut into fixed blocks of rows that
run on a thread pool.  The block layout never depends on the number of
threads and results are reassembled in row-major order, which keeps output
bit-for-bit reproducible.
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bundle, surface
from .errors import ConfigError
from .report import FLAG_DEGENERATE, FLAG_FRAME, DefectReport

CHUNK_ROWS = 4
ROUNDOFF_FACTOR = 64.0


def thread_count(env=None):
    """Worker count from ``G2LAB_THREADS`` (unset or 0 means one per CPU)."""
    env = os.environ if env is None else env
    raw = env.get("G2LAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"G2LAB_THREADS must be a non-negative integer, got {raw!r}") from None
    if n < 0:
        raise ConfigError(f"G2LAB_THREADS must be a non-negative integer, got {raw!r}")
    return n or (os.cpu_count() or 1)


def roundoff_floors(fmax, h):
    """Resolution of first and second central differences of values of size ``fmax``."""
    eps = np.finfo(float).eps
    base = ROUNDOFF_FACTOR * eps * (1.0 + fmax)
    return base / h, base / h ** 2


def _clip(x, floor):
    return np.where(x > floor, x, 0.0)


def analyze_points(f, model, uv, h, fmax=None):
    """All per-sample residuals at points ``uv`` as a dict of ``(n,)`` arrays."""
    uv = np.atleast_2d(np.asarray(uv, dtype=float))
    phi = model.phi
    jet = surface.jets(f, uv, h)
    if fmax is None:
        fmax = float(np.max(np.abs(jet.f))) if jet.f.size else 0.0
    floor1, floor2 = roundoff_floors(fmax, h)
    frames = surface.frame_field(jet.fu, jet.fv, phi)
    sampler = surface.FieldSampler(f, uv, h, phi)
    degenerate = frames.degenerate | sampler.degenerate
    fd = surface.fundamental_data_batch(jet, frames)
    lift = surface.gauss_lift_batch(f, uv, h, model, jet, frames, sampler)
    hol = surface.holomorphy_batch(frames, sampler, phi)
    id_eta, id_h = surface.proof_identity_residuals(hol, fd)
    wf = bundle.w_frames(frames, phi)
    herm = bundle.hermitian_defect(frames, sampler, fd, wf, phi)

    out = {
        "r_conf": _clip(fd.r_conf, floor1),
        "tau_norm": _clip(np.linalg.norm(fd.tau, axis=-1), floor2),
        "a_eta": surface.a_eta_residual(fd, lift, floor=floor2),
        "cW": _clip(hol.cW_norm, floor2),
        "c3": _clip(hol.c3_norm, floor2),
        "w_defect": _clip(herm.defect, floor2),
        "H_norm": _clip(np.linalg.norm(fd.H, axis=-1), floor2),
        "curvature": _clip(fd.curvature_norm, floor2),
        "tangency": surface.tangency_residual(lift),
        "horizontal": surface.horizontal_residual(lift, model.phi),
        "vertical": _clip(hol.vertical_norm, floor2),
        "identity_eps": _clip(id_eta, floor2),
        "identity_H": _clip(id_h, floor2),
        "w_defect_closed": _clip(herm.closed_defect, floor2),
        "w_defect_mismatch": _clip(herm.mismatch, floor2),
        "nabla_f": _clip(bundle.nabla_f_residual(frames, sampler, wf, phi), floor2),
        "f_type": bundle.f_type_residual(frames, wf, phi),
        "f_injectivity": bundle.f_injectivity(frames, wf, phi),
    }
    for key, val in out.items():
        out[key] = np.where(degenerate, np.nan, val)
    out["degenerate"] = degenerate
    out["_frames"] = frames
    return out


def _merge(parts):
    keys = [k for k in parts[0] if k != "_frames"]
    merged = {k: np.concatenate([p[k] for p in parts]) for k in keys}
    fr = [p["_frames"] for p in parts]
    merged["_frames"] = surface.FrameField(*(np.concatenate([getattr(x, a) for x in fr])
                                             for a in ("e1", "e2", "eta", "coeffs", "metric", "degenerate")))
    return merged


def theorem_report(f, model, grid=None, h=None, threads=None, check_frames=True):
    """Run every per-sample check on the grid of ``f`` and classify the surface.

    Degenerate samples are flagged and excluded from aggregates; the caller
    decides whether their number invalidates the run.
    """
    if grid is not None:
        f = surface.ParametricImmersion(f.func, f.domain, grid, f.fd_step, f.name, f.expr)
    h = f.fd_step if h is None else h
    n, m = f.grid
    uv = f.grid_points()
    if len(uv):
        f.check_margin(uv, h)
    fmax = float(np.max(np.abs(f(uv[:, 0], uv[:, 1])))) if len(uv) else 0.0
    blocks = [uv[i * m:(i + CHUNK_ROWS) * m] for i in range(0, n, CHUNK_ROWS)]
    workers = thread_count() if threads is None else max(1, int(threads))
    if len(blocks) == 0:
        return _empty_report(f, model, h)
    if workers == 1 or len(blocks) == 1:
        parts = [analyze_points(f, model, b, h, fmax) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: analyze_points(f, model, b, h, fmax), blocks))
    data = _merge(parts)
    degenerate = data.pop("degenerate")
    frames = data.pop("_frames")
    flags = np.where(degenerate, FLAG_DEGENERATE, 0)
    if check_frames:
        field = bundle.w_frame_field(frames, (n, m), model.phi, degenerate)
        flags = flags | np.where(field.flags.ravel(), FLAG_FRAME, 0)
    curv = data["curvature"][~degenerate]
    scale = (float(np.max(curv)) if curv.size else 0.0) + 1.0
    values = {k: data.pop(k) for k in ("r_conf", "tau_norm", "a_eta", "cW", "c3", "w_defect")}
    return DefectReport(uv[:, 0], uv[:, 1], values, flags.astype(int), h=h, scale=scale,
                        grid=(n, m), name=f.name, model=model.name, extras=data)


def _empty_report(f, model, h):
    empty = np.zeros(0)
    values = {k: empty for k in ("r_conf", "tau_norm", "a_eta", "cW", "c3", "w_defect")}
    return DefectReport(empty, empty, values, np.zeros(0, dtype=int), h=h, grid=f.grid,
                        name=f.name, model=model.name)
