"""Defect reports, verdicts and CSV output."""

import io
from dataclasses import dataclass, field

import numpy as np

COLUMNS = ("r_conf", "tau_norm", "a_eta", "cW", "c3", "w_defect")
HEADER = "u,v," + ",".join(COLUMNS) + ",flag"

FLAG_DEGENERATE = 1
FLAG_FRAME = 2

VERDICTS = ("holomorphic-lift", "conformal-not-harmonic", "non-conformal", "hypothesis-violated", "inconsistent")


@dataclass
class DefectReport:
    """Per-sample residual rows in row-major grid order plus aggregates.

    ``values`` maps each CSV column to an ``(n,)`` array; ``extras`` holds
    further diagnostics that are not written to the CSV.
    """

    u: np.ndarray
    v: np.ndarray
    values: dict
    flags: np.ndarray
    h: float = 1e-3
    scale: float = 1.0
    grid: tuple = (0, 0)
    name: str = ""
    model: str = ""
    extras: dict = field(default_factory=dict)
    verdict: str = ""

    def __post_init__(self):
        if not self.verdict:
            self.verdict = classify(self)

    @property
    def n_samples(self):
        return len(self.u)

    @property
    def valid(self):
        return (self.flags & FLAG_DEGENERATE) == 0

    @property
    def n_degenerate(self):
        return int(np.sum(~self.valid))

    @property
    def degenerate_fraction(self):
        return self.n_degenerate / self.n_samples if self.n_samples else 0.0

    @property
    def tol(self):
        """Zero threshold ``10 h^2 (max |B| + 1)``."""
        return 10.0 * self.h ** 2 * self.scale

    def column(self, name, valid_only=True):
        col = self.values[name] if name in self.values else self.extras[name]
        return col[self.valid] if valid_only else col

    def aggregate(self, how):
        fn = {"max": np.max, "mean": np.mean}[how]
        out = {}
        for name in COLUMNS:
            col = self.column(name)
            out[name] = float(fn(col)) if col.size else float("nan")
        return out

    def max(self, name):
        col = self.column(name)
        return float(np.max(col)) if col.size else float("nan")


def classify(report):
    """Verdict from the aggregate maxima and the report tolerance.

    Checked in order: conformality, harmonicity, the hypothesis B _|_ eta,
    then the holomorphy defect itself.
    """
    if not np.any(report.valid):
        return "inconsistent"
    tol = report.tol
    if report.max("r_conf") > tol:
        return "non-conformal"
    if report.max("tau_norm") > tol:
        return "conformal-not-harmonic"
    if report.max("a_eta") > tol:
        return "hypothesis-violated"
    if max(report.max("cW"), report.max("c3")) <= tol:
        return "holomorphic-lift"
    return "inconsistent"


def _fmt(x):
    return format(float(x), ".9g")


def format_report(report):
    out = io.StringIO()
    out.write(HEADER + "\n")
    for k in range(report.n_samples):
        vals = [_fmt(report.u[k]), _fmt(report.v[k])]
        vals += [_fmt(report.values[c][k]) for c in COLUMNS]
        vals.append(str(int(report.flags[k])))
        out.write(",".join(vals) + "\n")
    n_flagged = int(np.count_nonzero(report.flags))
    for how in ("max", "mean"):
        agg = report.aggregate(how)
        out.write(",".join(["#agg", how] + [_fmt(agg[c]) for c in COLUMNS] + [str(n_flagged)]) + "\n")
    out.write(f"#agg,degenerate,{report.n_degenerate}\n")
    out.write(f"#agg,tol,{_fmt(report.tol)}\n")
    out.write(f"#agg,verdict,{report.verdict}\n")
    return out.getvalue()


def emit_report(report, path):
    """Write the CSV; newline-terminated, identical bytes for identical reports."""
    text = format_report(report)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def read_report(path):
    """Parse a CSV written by :func:`emit_report` into rows and aggregate lines."""
    rows, aggregates = [], {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != HEADER:
            raise ValueError(f"unexpected header {header!r}")
        for line in fh:
            parts = line.strip().split(",")
            if parts[0] == "#agg":
                aggregates[parts[1]] = parts[2:]
            else:
                rows.append([float(x) for x in parts[:-1]] + [int(parts[-1])])
    return rows, aggregates
