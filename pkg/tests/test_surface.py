import numpy as np
import pytest

from conftest import custom
from g2lab import algebra as alg
from g2lab import surface as S
from g2lab.ambient import get_model
from g2lab.catalog import make_immersion
from g2lab.errors import BoundaryMarginError, DegenerateSampleError
from g2lab.pipeline import analyze_points, theorem_report

R7 = get_model("flat_r7")
CY = get_model("cy_x_s1")
e = alg.basis_vector


def test_plane_jet_exact():
    f = make_immersion("plane")
    j = S.sample_jet(f, (0.3, -0.2))
    # central differences of an affine map are exact up to rounding of u +- h
    assert np.allclose(j.fu, e(1), atol=1e-12) and np.allclose(j.fv, e(2), atol=1e-12)
    assert np.max(np.abs([j.fuu, j.fuv, j.fvv])) < 1e-8


def test_quadratic_jet_exact():
    f = custom(["u", "v", "u^2 - v^2", "2*u*v"])
    j = S.sample_jet(f, (0.0, 0.0), 1e-3)
    assert np.allclose(j.fuu, 2 * e(3), atol=1e-9)
    assert np.allclose(j.fvv, -2 * e(3), atol=1e-9)
    assert np.allclose(j.fuv, 2 * e(4), atol=1e-9)


def test_jet_convergence_order():
    f = custom(["sin(u)*cos(v)", "exp(u - v)", "sin(2*u + v)"], grid=(8, 8))
    uv = f.grid_points()
    exact = f.exact_jets(uv)
    errs = []
    for h in (4e-3, 2e-3, 1e-3, 5e-4):
        j = S.jets(f, uv, h)
        errs.append([np.max(np.abs(getattr(j, k) - getattr(exact, k))) for k in ("fu", "fv", "fuu", "fuv", "fvv")])
    errs = np.array(errs)
    ratios = errs[:-1] / errs[1:]
    assert np.all(np.abs(ratios - 4) < 1.0), ratios


def test_margin_enforced():
    f = make_immersion("plane")
    with pytest.raises(BoundaryMarginError):
        S.sample_jet(f, (1.0 - 1e-3, 0.0), 1e-3)


def test_fundamental_data_plane():
    fd = S.fundamental_data(S.sample_jet(make_immersion("plane"), (0.1, 0.1)), R7)
    assert np.allclose(fd.first_form, [1, 0, 1], atol=1e-12)
    assert not np.any(fd.B) and not np.any(fd.H) and fd.r_conf == 0


def test_fundamental_data_latitude_sphere():
    f = custom(["r*cos(u)*cos(v)", "r*sin(u)*cos(v)", "r*sin(v)"], params={"r": 1.5})
    fd = S.fundamental_data(S.sample_jet(f, (0.3, 0.0)), R7)
    assert np.linalg.norm(fd.H) == pytest.approx(2 / 1.5, abs=1e-3)


def test_fundamental_data_graph():
    f = make_immersion("holomorphic_graph")
    for p in [(0.1, 0.2), (-0.3, 0.25)]:
        fd = S.fundamental_data(S.sample_jet(f, p), CY)
        E, F, G = fd.first_form
        want = 1 + 4 * (p[0] ** 2 + p[1] ** 2)
        assert E == pytest.approx(want, abs=1e-9) and G == pytest.approx(want, abs=1e-9)
        assert abs(F) < 1e-9
        assert np.linalg.norm(fd.tau) < 1e-8


def test_fundamental_data_rejects_degenerate():
    f = custom(["u", "u"])
    with pytest.raises(DegenerateSampleError):
        S.fundamental_data(S.sample_jet(f, (0.0, 0.0)), R7)


def test_fundamental_invariants_on_torus():
    f = make_immersion("torus", grid=(12, 12))
    uv = f.grid_points()
    h = f.fd_step
    jet = S.jets(f, uv, h)
    fr = S.frame_field(jet.fu, jet.fv)
    fd = S.fundamental_data_batch(jet, fr)
    scale = np.max(np.linalg.norm(fd.B, axis=-1)) + 1
    for k in range(3):
        assert np.max(np.abs(np.sum(fd.B[:, k] * jet.fu, axis=-1))) < 5 * h * h * scale
        assert np.max(np.abs(np.sum(fd.B[:, k] * jet.fv, axis=-1))) < 5 * h * h * scale
    trace = fd.B_frame[:, 0] + fd.B_frame[:, 2]
    assert np.allclose(trace, fd.H, atol=1e-8)


def test_gauss_lift_plane():
    f = make_immersion("plane")
    lift = S.gauss_lift(S.sample_jet(f, (0.2, 0.3)), R7, f)
    assert np.array_equal(lift.eta, e(3))
    assert not np.any(lift.d_eta)


def test_gauss_lift_graph_eta_is_minus_dt():
    f = make_immersion("holomorphic_graph")
    for p in [(0.0, 0.0), (0.3, -0.2)]:
        lift = S.gauss_lift(S.sample_jet(f, p), CY, f)
        assert np.allclose(lift.eta, -e(7), atol=1e-12)
        assert np.max(np.abs(lift.d_eta)) < 1e-8


def test_gauss_lift_sphere_radial():
    f = make_immersion("sphere", params={"r": 2.0})
    p = (0.4, 0.3)
    jet = S.sample_jet(f, p)
    lift = S.gauss_lift(jet, R7, f)
    radial = jet.f / np.linalg.norm(jet.f)
    assert abs(abs(lift.eta @ radial) - 1) < 1e-9
    for k, v in enumerate((jet.fu, jet.fv)):
        assert np.linalg.norm(lift.d_eta[k]) == pytest.approx(np.linalg.norm(v) / 2.0, abs=1e-3)
        assert abs(lift.d_eta[k] @ lift.eta) < 1e-8


def test_tangency_unconditional(catalog_reports):
    for name, rep in catalog_reports.items():
        assert np.nanmax(rep.extras["tangency"]) < 1e-10, name


def test_tangency_random_surface():
    rng = np.random.default_rng(4)
    c = rng.uniform(0.1, 0.5, 7)
    exprs = [f"u + {c[0]}*sin(u*v)", f"v + {c[1]}*cos(u)", f"{c[2]}*exp(u)*v", f"{c[3]}*sinh(v)",
             f"{c[4]}*u^3", f"{c[5]}*cos(u + v)", f"{c[6]}*u*v"]
    f = custom(exprs, grid=(20, 20))
    rep = theorem_report(f, R7)
    assert np.nanmax(rep.extras["tangency"]) < 1e-8


def test_a_eta_examples(catalog_reports):
    assert catalog_reports["holomorphic_graph"].max("a_eta") < 1e-12
    assert catalog_reports["plane"].max("a_eta") == 0
    cat = catalog_reports["catenoid"].column("a_eta")
    assert np.all(np.abs(cat - 1) < 1e-6)


def test_holomorphy_defect_examples():
    assert S.holomorphy_defect(make_immersion("plane"), (0.1, 0.2), R7) == (0.0, 0.0, 0.0)
    cw, c3, rc = S.holomorphy_defect(make_immersion("holomorphic_graph"), (0.2, -0.1), CY)
    assert max(cw, c3, rc) < 5e-4
    cw, c3, rc = S.holomorphy_defect(make_immersion("catenoid"), (0.2, 0.1), R7)
    assert c3 > 0.5 and rc < 1e-6


def test_sphere_c3_is_truncation_error():
    # the round sphere is totally umbilic, so B(eps, eps) = 0 and c3 vanishes analytically
    f = make_immersion("sphere")
    vals = [S.holomorphy_defect(f, (0.3, 0.4), R7, h)[1] for h in (2e-3, 1e-3, 5e-4)]
    assert vals[0] < 1e-5
    assert vals[0] / vals[1] == pytest.approx(4, rel=0.25)
    assert vals[1] / vals[2] == pytest.approx(4, rel=0.25)


def test_proof_identities(catalog_reports):
    for name, rep in catalog_reports.items():
        tol = rep.tol
        assert np.nanmax(rep.extras["identity_eps"]) < tol, name
        assert np.nanmax(rep.extras["identity_H"]) < tol, name


def test_horizontal_criterion(catalog_reports):
    for name, rep in catalog_reports.items():
        bound = 10 * rep.values["r_conf"] + 1e-8
        assert np.all(rep.extras["horizontal"] < bound), name


def test_vertical_defect_matches_components(catalog_reports):
    # |E01(nabla_eps eta)|^2 = |cW|^2 + |c3|^2 / 2, from independent differences
    for name, rep in catalog_reports.items():
        v = rep.extras["vertical"]
        w = np.sqrt(rep.values["cW"] ** 2 + rep.values["c3"] ** 2 / 2)
        assert np.allclose(v, w, rtol=1e-6, atol=rep.tol), name


@pytest.mark.parametrize("name,verdict", [("plane", "holomorphic-lift"), ("scaled_plane", "non-conformal"),
                                          ("holomorphic_graph", "holomorphic-lift"),
                                          ("sphere", "conformal-not-harmonic"),
                                          ("catenoid", "hypothesis-violated"), ("torus", "non-conformal")])
def test_verdicts(catalog_reports, name, verdict):
    assert catalog_reports[name].verdict == verdict


def test_scaled_plane_r_conf(catalog_reports):
    rc = catalog_reports["scaled_plane"].column("r_conf")
    assert np.all(np.abs(rc - 0.6) < 1e-12)


def test_sphere_mean_curvature(catalog_reports):
    assert np.all(np.abs(catalog_reports["sphere"].column("H_norm") - 2) < 1e-3)


def reparametrized(f, a, b):
    ar, ai = a.real, a.imag
    br, bi = b.real, b.imag

    def g(u, v):
        return f(ar * u - ai * v + br, ai * u + ar * v + bi)
    return S.ParametricImmersion(g, (-10, 10, -10, 10), f.grid, f.fd_step, f.name)


@pytest.mark.parametrize("name", ["holomorphic_graph", "sphere", "catenoid"])
def test_conformal_reparametrization_invariance(name):
    f = make_immersion(name, grid=(12, 12))
    model = CY if name == "holomorphic_graph" else R7
    a, b = 0.8 + 0.5j, 0.05 - 0.1j
    g = reparametrized(f, a, b)
    uv = f.grid_points()
    z = (uv[:, 0] + 1j * uv[:, 1] - b) / a
    pre = np.stack([z.real, z.imag], axis=-1)
    h = f.fd_step
    d0 = analyze_points(f, model, uv, h)
    d1 = analyze_points(g, model, pre, h)
    tol = 10 * h * h * (np.max(d0["curvature"]) + 1)
    for key in ("r_conf", "a_eta", "cW", "c3", "w_defect", "H_norm"):
        m0, m1 = np.max(d0[key]), np.max(d1[key])
        assert abs(m0 - m1) <= 1e-2 * max(m0, m1) + tol, key
        # zero stays zero, nonzero stays nonzero
        assert (m0 > tol) == (m1 > tol), key
    assert (np.max(d0["tau_norm"]) > tol) == (np.max(d1["tau_norm"]) > tol)


def test_nonconformal_stays_nonconformal_under_reparametrization():
    # r_conf itself depends on the chart for a non-conformal map, but cannot drop to zero
    f = make_immersion("scaled_plane", grid=(8, 8))
    g = reparametrized(f, 0.8 + 0.5j, 0.1j)
    d = analyze_points(g, R7, f.grid_points() * 0.5, f.fd_step)
    assert np.min(d["r_conf"]) > 0.5


def test_degenerate_samples_flagged_not_fatal():
    # |f_v| = 9 v^8 is below the immersion tolerance on the two rows nearest v = 0
    f = custom(["u", "v^9"], grid=(16, 16))
    rep = theorem_report(f, R7)
    assert rep.n_degenerate == 32
    assert np.all(np.isnan(rep.values["r_conf"][~rep.valid]))
    assert np.isfinite(rep.aggregate("max")["r_conf"])


def test_catalog_matches_inline_expressions():
    from g2lab.report import format_report
    f = make_immersion("sphere", grid=(16, 16))
    g = custom(["r*cos(u)/cosh(v)", "r*sin(u)/cosh(v)", "r*sinh(v)/cosh(v)"], grid=(16, 16), params={"r": 1.0})
    a = theorem_report(f, R7)
    b = theorem_report(g, R7)
    for k in a.values:
        assert np.allclose(a.values[k], b.values[k], atol=1e-12, rtol=0)
    assert format_report(a) == format_report(b)
