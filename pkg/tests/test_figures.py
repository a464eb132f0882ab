import numpy as np
import pytest

from revcurv.figures import export_figures, eps0_comparison, waist_shape
from revcurv.profile_construction import HALF_PI


def test_eps0_lies_above_comparison_curve():
    ordering = eps0_comparison(0.1)
    assert ordering.min_gap >= -1e-12
    assert ordering.contact_gap <= 1e-12


def test_barbell_waist_is_a_local_minimum(barbell):
    shape = waist_shape(barbell)
    assert shape.is_local_minimum
    assert shape.value == pytest.approx(float(barbell.eps(np.array([HALF_PI]), 0)[0, 0]), abs=1e-15)
    assert shape.left == pytest.approx(shape.right, abs=1e-13)


def test_figures_are_written_deterministically(tmp_path, baseline):
    first = export_figures(baseline, tmp_path / "one")
    second = export_figures(baseline, tmp_path / "two")
    assert sorted(p.name for p in first) == [
        "figure_curvature.csv",
        "figure_curvature.svg",
        "figure_eps0.csv",
        "figure_eps0.svg",
        "figure_profile.csv",
        "figure_profile.svg",
    ]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()
    table = np.loadtxt(tmp_path / "one" / "figure_profile.csv", delimiter=",", skiprows=1)
    assert np.allclose(table[:, 1], np.cos(table[:, 0]), atol=1e-15)
    header = (tmp_path / "one" / "figure_eps0.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "t,eps0,c_minus_cos"
    assert (tmp_path / "one" / "figure_profile.svg").read_text(encoding="utf-8").lstrip().startswith("<?xml")
