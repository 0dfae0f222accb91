"""Asymptotic calculus of indexed nets and desk-scale generalized functions."""

from . import bigo, colombeau, grids, indexsets, testfn
from ._kernels import BACKEND

__all__ = ["bigo", "colombeau", "grids", "indexsets", "testfn", "BACKEND"]
