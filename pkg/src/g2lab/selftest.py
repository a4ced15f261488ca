"""Self-contained check suites for the algebra and the plane splitting."""

import time
from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from .grassmann import OrientedPlane2, holomorphy_components, plane_split, random_planes

# phi0 = e123 + e1^(e45 - e67) + e2^(e46 - e75) + e3^(e47 - e56), 1-based
PHI0_TABLE = {(1, 2, 3): 1, (1, 4, 5): 1, (1, 6, 7): -1, (2, 4, 6): 1,
              (2, 7, 5): -1, (3, 4, 7): 1, (3, 5, 6): -1}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _hnorm(x):
    return float(np.sqrt(np.sum(np.abs(x) ** 2)))


def algebra_selftest(n_samples=1000, seed=0):
    start = time.perf_counter()
    out = []

    expected = alg.ThreeForm7.from_terms({k: float(v) for k, v in PHI0_TABLE.items()})
    diff = float(np.max(np.abs(expected.tensor - alg.PHI0.tensor)))
    out.append(CheckResult("phi0 table", diff == 0.0, f"max coefficient difference {diff:.1e}"))

    ev = np.linalg.eigvals(alg.CURL_MATRIX)
    rounded = np.round(ev.real)
    dist = float(np.max(np.abs(ev - rounded)))
    counts = {int(k): int(np.sum(rounded == k)) for k in np.unique(rounded)}
    ok = dist < 1e-10 and counts == {-2: 7, 1: 14}
    out.append(CheckResult("curl spectrum", ok, f"eigenvalue multiplicities {counts}, off-integer {dist:.1e}"))

    e12 = alg.basis_bivector(1, 2)
    want = (alg.basis_bivector(1, 2) + alg.basis_bivector(4, 7) - alg.basis_bivector(5, 6)) / 3.0
    d = float(np.max(np.abs(alg.pi7(e12) - want)))
    out.append(CheckResult("pi7(e12)", d < alg.EXACT_TOL, f"max difference {d:.1e}"))

    rep = alg.compat_check(alg.PHI0, n_samples=n_samples, seed=seed, tol=alg.EXACT_TOL)
    worst = ", ".join(f"{k} {v:.1e}" for k, v in rep.residuals.items())
    out.append(CheckResult("cross product identities", rep.passed, f"{n_samples} samples; {worst}"))

    elapsed = time.perf_counter() - start
    out.append(CheckResult("algebra runtime", elapsed < 5.0, f"{elapsed:.2f} s"))
    return out


def _random_complex_w10(s, rng):
    c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    w = s.w10(c @ s.w_frame)
    return w / _hnorm(w)


def grassmann_selftest(n_planes=1000, seed=0):
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    frames = random_planes(n_planes, seed)
    splits = [plane_split(OrientedPlane2(*fr)) for fr in frames]
    xis = np.array([alg.wedge2(*fr) for fr in frames])
    out = []

    norms = alg.biv_norm(alg.pi7(xis)) ** 2
    dev = float(np.max(np.abs(norms - 1.0 / 3.0)))
    out.append(CheckResult("|pi7(xi)|^2 = 1/3", dev < 1e-10, f"{n_planes} planes, max deviation {dev:.1e}"))

    worst_zero = 0.0
    smallest = np.inf
    worst_kernel = 0.0
    for s in splits:
        eps = s.eps
        c = complex(rng.standard_normal(), rng.standard_normal())
        cw, c3 = holomorphy_components(alg.wedge2(s.eta, c * eps), s)
        worst_zero = max(worst_zero, _hnorm(cw), abs(c3))

        w10 = _random_complex_w10(s, rng)
        alpha = alg.wedge2(w10, np.conj(eps))
        alpha = alpha / _hnorm(alpha)
        cw, c3 = holomorphy_components(alpha, s)
        smallest = min(smallest, np.sqrt(_hnorm(cw) ** 2 + abs(c3) ** 2))

        w01 = np.conj(_random_complex_w10(s, rng))
        mixed = alg.wedge2(w10, np.conj(eps)) + alg.wedge2(w01, eps)
        worst_kernel = max(worst_kernel, _hnorm(alg.pi7(mixed)))

    out.append(CheckResult("holomorphy components vanish on eta^xi(1,0)", worst_zero < alg.EXACT_TOL,
                           f"max component {worst_zero:.1e}"))
    out.append(CheckResult("holomorphy components >= 1 on W(1,0)^xi(0,1)", smallest >= 1.0,
                           f"min norm over unit inputs {smallest:.3e}"))
    out.append(CheckResult("pi7 kernel on mixed type", worst_kernel < 1e-10, f"max |pi7| {worst_kernel:.1e}"))

    elapsed = time.perf_counter() - start
    out.append(CheckResult("grassmann runtime", elapsed < 5.0, f"{elapsed:.2f} s"))
    return out
