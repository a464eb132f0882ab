"""revcurv: a rotationally symmetric metric on the 2-sphere with K <= 1 and a
closed geodesic shorter than 2 pi, plus the checks that verify it."""

__version__ = "1.0.0"
