"""Figure data: the profile, eps0 against ``c - cos t``, and the curvature.

Each figure is written as a ``.csv`` table and an ``.svg`` line plot. SVG ids
are salted with a fixed string and the date metadata is dropped so repeated
runs produce identical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from loguru import logger  # noqa: E402
from numpy.typing import NDArray  # noqa: E402

from revcurv.metric_geometry import curvature_field  # noqa: E402
from revcurv.profile_construction import HALF_PI, ProfileCurve, eps0_constant, eps0_value  # noqa: E402

log = logger.bind(name="Figures")

FloatArray = NDArray[np.float64]

plt.rcParams["svg.hashsalt"] = "revcurv"
plt.rcParams["svg.fonttype"] = "none"

NEIGHBOURHOOD = 0.2
COMPARISON_SAMPLES = 1001


@dataclass(frozen=True)
class Series:
    label: str
    y: FloatArray


def _write_table(path: Path, t: FloatArray, series: Sequence[Series]) -> Path:
    header = ",".join(["t", *(s.label for s in series)])
    np.savetxt(path, np.column_stack([t, *(s.y for s in series)]), fmt="%.17g", delimiter=",", header=header, comments="")
    return path


def _write_plot(path: Path, t: FloatArray, series: Sequence[Series], title: str, ylabel: str) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for s in series:
        ax.plot(t, s.y, label=s.label, linewidth=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, linewidth=0.3)
    if len(series) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _emit(out_dir: Path, stem: str, t: FloatArray, series: Sequence[Series], title: str, ylabel: str) -> list[Path]:
    return [
        _write_table(out_dir / f"{stem}.csv", t, series),
        _write_plot(out_dir / f"{stem}.svg", t, series, title, ylabel),
    ]


class Eps0Comparison(NamedTuple):
    min_gap: float
    contact_gap: float


def eps0_comparison(delta: float, samples: int = COMPARISON_SAMPLES) -> Eps0Comparison:
    """``eps0 - (c - cos t)`` on ``[delta, pi/2 - delta]``: never negative, zero at the right end."""
    t = np.linspace(delta, HALF_PI - delta, samples)
    gap = np.asarray(eps0_value(t, delta)) - (eps0_constant(delta) - np.cos(t))
    return Eps0Comparison(float(gap.min()), float(abs(gap[-1])))


class WaistShape(NamedTuple):
    is_local_minimum: bool
    value: float
    left: float
    right: float


def waist_shape(profile: ProfileCurve, width: float = NEIGHBOURHOOD) -> WaistShape:
    """Classify ``t = pi/2`` by the profile values a distance ``width`` away."""
    f = profile.derivatives(np.array([HALF_PI - width, HALF_PI, HALF_PI + width]), 0)[0]
    left, value, right = (float(x) for x in f)
    return WaistShape(value < left and value < right, value, left, right)


def export_figures(profile: ProfileCurve, out_dir: str | Path) -> list[Path]:
    """Write the profile, eps0 and curvature figures into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = _emit(out, "figure_profile", profile.t, [Series("f", profile.f)], "profile f(t)", "f")

    delta = profile.params.delta if profile.params else 0.1
    t = np.linspace(0.0, HALF_PI + delta, COMPARISON_SAMPLES)
    paths += _emit(
        out,
        "figure_eps0",
        t,
        [Series("eps0", np.asarray(eps0_value(t, delta))), Series("c_minus_cos", eps0_constant(delta) - np.cos(t))],
        f"eps0 and c - cos t (delta={delta:g})",
        "value",
    )

    field = curvature_field(profile)
    paths += _emit(out, "figure_curvature", field.t, [Series("K", field.k)], "Gauss curvature K(t)", "K")
    log.info("Figures written", out_dir=str(out), files=len(paths))
    return paths
