"""Numerical toolkit for G2 structures and Gauss lifts of immersed surfaces."""

from .algebra import PHI0, ThreeForm7, cross, pi7, pi14, lambda7_iso, lambda7_iso_inv, compat_check
from .ambient import AmbientModel, build_cy_s1, build_flat_r7, get_model
from .catalog import make_immersion
from .config import ScenarioConfig, load_config
from .estimator import GaussLiftTheoremCheck
from .expr import ImmersionExpr, ParseError, parse_expression
from .grassmann import OrientedPlane2, PlaneSplitting, holomorphy_components, plane_split
from .pipeline import theorem_report
from .report import DefectReport, emit_report
from .scenario import run_scenario
from .surface import ParametricImmersion

__version__ = "0.1.0"

__all__ = [
    "PHI0", "ThreeForm7", "cross", "pi7", "pi14", "lambda7_iso", "lambda7_iso_inv", "compat_check",
    "AmbientModel", "build_cy_s1", "build_flat_r7", "get_model", "make_immersion", "ScenarioConfig",
    "load_config", "GaussLiftTheoremCheck", "ImmersionExpr", "ParseError", "parse_expression",
    "OrientedPlane2", "PlaneSplitting", "holomorphy_components", "plane_split", "theorem_report",
    "DefectReport", "emit_report", "run_scenario", "ParametricImmersion",
]
