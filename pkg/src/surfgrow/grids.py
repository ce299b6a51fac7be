"""Grids and discrete field containers.

The through-thickness grid is one-dimensional in the coordinate ``x2``,
cell-centered field storage, and is rebuilt on ``[0, H(t)]`` with a fixed
cell count whenever the body height changes (fields are resampled by
linear interpolation; cells created above the old height take the inflow
value).  A small periodic-in-``x1`` strip grid supports the
two-dimensional verification transports.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError
from .tensors import require_finite


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on ``[0, height]``."""

    n_cells: int
    height: float

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValidationError(f"n_cells must be >= 4, got {self.n_cells}")
        if not (np.isfinite(self.height) and self.height > 0):
            raise ValidationError(f"height must be positive, got {self.height}")

    @property
    def dx(self) -> float:
        return self.height / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return np.arange(self.n_cells + 1) * self.dx


@dataclass
class FieldState:
    """Discrete fields at one instant: v (n,2), F_e (n,2,2), p (n,), rho (n,)."""

    grid: Grid1D
    t: float
    v: np.ndarray
    F_e: np.ndarray
    p: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        n = self.grid.n_cells
        self.v = require_finite(self.v, "v")
        self.F_e = require_finite(self.F_e, "F_e")
        self.p = require_finite(self.p, "p")
        self.rho = require_finite(self.rho, "rho")
        for name, arr, shape in (("v", self.v, (n, 2)), ("F_e", self.F_e, (n, 2, 2)),
                                 ("p", self.p, (n,)), ("rho", self.rho, (n,))):
            if arr.shape != shape:
                raise ValidationError(f"{name} must have shape {shape}, got {arr.shape}")

    def copy(self) -> "FieldState":
        return replace(self, v=self.v.copy(), F_e=self.F_e.copy(),
                       p=self.p.copy(), rho=self.rho.copy())


@dataclass
class StepRecord:
    """One time level of a run: geometry, solved velocity, and fields.

    ``v_nodes`` holds the tangential velocity at the ``n+1`` cell faces
    (node 0 is the clamped base); ``grad_v`` is the cell-centered velocity
    gradient actually used by the transport step.
    """

    t: float
    grid: Grid1D
    v_nodes: np.ndarray
    grad_v: np.ndarray
    F_e: np.ndarray
    p: np.ndarray
    rho: np.ndarray
    metrics: dict = field(default_factory=dict)

    @property
    def v_cells(self) -> np.ndarray:
        v1 = 0.5 * (self.v_nodes[:-1] + self.v_nodes[1:])
        return np.stack([v1, np.zeros_like(v1)], axis=1)

    def field_state(self) -> FieldState:
        return FieldState(grid=self.grid, t=self.t, v=self.v_cells,
                          F_e=self.F_e.copy(), p=self.p.copy(), rho=self.rho.copy())


def interp_columns(xq: np.ndarray, xp: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Linear interpolation of each trailing component of ``values`` at ``xq``.

    Outside ``xp`` the end values are held constant (first-order
    extrapolation at outflow boundaries).
    """
    values = np.asarray(values, dtype=float)
    flat = values.reshape(values.shape[0], -1)
    cols = [np.interp(xq, xp, flat[:, j]) for j in range(flat.shape[1])]
    out = np.stack(cols, axis=1)
    return out.reshape((len(xq),) + values.shape[1:])


def regrid_fields(old_grid: Grid1D | None, new_grid: Grid1D, fields: dict,
                  inflow: dict) -> dict:
    """Resample cell fields onto a rebuilt grid.

    On a growing rebuild the interpolation table is extended with the
    ``inflow`` value placed at the old boundary height: material between the
    old and new heights is newly accreted, so cells reaching above the old
    body blend into and then take the attachment value.  With
    ``old_grid=None`` the grid is filled entirely from ``inflow`` (a body
    built from nothing).  Shrinking grids (ablation) interpolate only:
    outflow needs no boundary data.
    """
    xq = new_grid.centers
    out = {}
    if old_grid is None:
        for name in fields:
            val = np.asarray(inflow[name], dtype=float)
            out[name] = np.broadcast_to(val, (new_grid.n_cells,) + val.shape).copy()
        return out
    growing = new_grid.height > old_grid.height
    xp = old_grid.centers
    if growing:
        xp = np.append(xp, old_grid.height)
    for name, arr in fields.items():
        src = np.asarray(arr, dtype=float)
        if growing:
            bc = np.asarray(inflow[name], dtype=float)
            src = np.concatenate([src, bc[None, ...]], axis=0)
        out[name] = interp_columns(xq, xp, src)
    return out


@dataclass(frozen=True)
class PeriodicStrip:
    """2-D verification grid: periodic in ``x1``, walls at ``x2 = 0, height``."""

    n1: int
    n2: int
    length: float = 1.0
    height: float = 1.0

    def __post_init__(self):
        if self.n1 < 4 or self.n2 < 4:
            raise ValidationError("strip needs at least 4 cells per direction")

    @property
    def dx1(self) -> float:
        return self.length / self.n1

    @property
    def dx2(self) -> float:
        return self.height / self.n2

    @property
    def centers(self):
        x1 = (np.arange(self.n1) + 0.5) * self.dx1
        x2 = (np.arange(self.n2) + 0.5) * self.dx2
        return np.meshgrid(x1, x2, indexing="ij")
