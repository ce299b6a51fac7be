"""Transport of the elastic deformation and related kinematic machinery.

The elastic deformation ``F_e`` obeys the tensor advection equation

    dF_e/dt + (v . grad) F_e = (grad v) F_e,

the same equation satisfied by the full deformation gradient ``F``; the
zero-stress shape ``F_relax`` rides along pathlines unchanged.  Accretion
makes the growing boundary an inflow for this equation (a boundary value
is required); ablation is an outflow (none is).

Grid transport uses first-order upwinding plus forward-Euler source
integration.  Characteristic transport integrates the equivalent ODE
system along pathlines with an explicit midpoint (RK2) scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (CFLViolation, GrowthNotSupported, MissingInflowBC,
                     OutOfDomain, ValidationError)
from .grids import FieldState, Grid1D, PeriodicStrip, StepRecord, regrid_fields
from .tensors import identity, inverse, require_finite

CFL_LIMIT = 0.9

# sampler(x, t) -> (v, grad_v) with v shape (2,) and grad_v shape (2, 2)
VelocitySampler = Callable[[np.ndarray, float], tuple[np.ndarray, np.ndarray]]


@dataclass
class PathlineRecord:
    """A characteristic curve: times, positions, and F_e along it."""

    t: np.ndarray
    x: np.ndarray
    F_e: np.ndarray

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.F_e = np.asarray(self.F_e, dtype=float)
        if np.any(np.diff(self.t) <= 0):
            raise ValidationError("pathline sample times must be strictly increasing")

    @property
    def seed(self) -> np.ndarray:
        return self.x[0]


def _check_cfl(speed: float, dx: float, dt: float) -> None:
    if speed * dt > CFL_LIMIT * dx * (1.0 + 1e-12):
        raise CFLViolation(
            f"max|v| dt / dx = {speed * dt / dx:.3f} exceeds {CFL_LIMIT}")


def _upwind_term_1d(comps: np.ndarray, v2: np.ndarray, dx: float,
                    top_ghost: np.ndarray | None) -> np.ndarray:
    """(v . grad) of stacked cell components on the x2 grid.

    Ghost cells extrapolate linearly from the interior (a replicated ghost
    would zero the wall-cell gradient and leave a resolution-independent
    kink there); the ghost above the top face is ``top_ghost`` when
    supplied (inflow value) instead.
    """
    below = np.concatenate([(2.0 * comps[:1] - comps[1:2]), comps[:-1]], axis=0)
    if top_ghost is None:
        above = np.concatenate([comps[1:], 2.0 * comps[-1:] - comps[-2:-1]], axis=0)
    else:
        above = np.concatenate([comps[1:], top_ghost[None, :]], axis=0)
    backward = (comps - below) / dx
    forward = (above - comps) / dx
    v2c = v2[:, None]
    return np.where(v2c > 0, v2c * backward, v2c * forward)


def _transport_step_1d(tensor_field: np.ndarray, v: np.ndarray, grad_v: np.ndarray,
                       grid: Grid1D, dt: float, inflow_bc: np.ndarray | None,
                       mass_rate: float) -> np.ndarray:
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    v2 = np.asarray(v, dtype=float)[:, 1]
    _check_cfl(float(np.max(np.abs(v2))), grid.dx, dt)
    if mass_rate > 0 and inflow_bc is None:
        raise MissingInflowBC("accreting boundary requires an inflow tensor value")
    T = np.asarray(tensor_field, dtype=float)
    source = np.asarray(grad_v, dtype=float) @ T
    comps = T.reshape(T.shape[0], 4)
    ghost = None
    if inflow_bc is not None:
        ghost = np.asarray(inflow_bc, dtype=float).reshape(4)
    adv = _upwind_term_1d(comps, v2, grid.dx, ghost).reshape(T.shape)
    return T + dt * (source - adv)


def advance_F_e_grid(state: FieldState, grad_v_field: np.ndarray, dt: float,
                     inflow_bc: np.ndarray | None = None,
                     mass_rate: float = 0.0) -> FieldState:
    """One explicit transport step for the elastic deformation.

    The only advecting velocity on the through-thickness grid is the
    normal component ``v2`` (fields are uniform along ``x1``), so the CFL
    bound is checked against it.  ``inflow_bc`` must be supplied whenever
    the top boundary is accreting (``mass_rate > 0``).
    """
    F_new = _transport_step_1d(state.F_e, state.v, grad_v_field, state.grid, dt,
                               inflow_bc, mass_rate)
    return FieldState(grid=state.grid, t=state.t + dt, v=state.v.copy(),
                      F_e=F_new, p=state.p.copy(), rho=state.rho.copy())


def advance_F_grid(F: np.ndarray, state: FieldState, grad_v_field: np.ndarray,
                   dt: float, inflow_bc: np.ndarray | None = None,
                   mass_rate: float = 0.0) -> np.ndarray:
    """Same transport step applied to a deformation-gradient field.

    ``F`` is carried separately from the state; initial data is the
    identity at the chosen reference time.
    """
    return _transport_step_1d(F, state.v, grad_v_field, state.grid, dt,
                              inflow_bc, mass_rate)


def integrate_characteristics(velocity_sampler: VelocitySampler, seed, t0: float,
                              t1: float, dt: float, F_e0,
                              domain: Callable[[np.ndarray, float], bool] | None = None,
                              ) -> PathlineRecord:
    """Integrate ``dx/dt = v`` and ``dF_e/dt = (grad v) F_e`` along one pathline.

    Explicit midpoint (RK2) in both position and tensor; the record holds
    every step including the seed.  ``dt`` is shrunk slightly if needed so
    an integer number of steps lands exactly on ``t1``.  When ``domain`` is
    given, leaving it raises ``OutOfDomain`` (an ablating boundary should be
    excluded from the predicate by the caller).
    """
    if dt <= 0 or t1 <= t0:
        raise ValidationError("need dt > 0 and t1 > t0")
    n_steps = max(1, int(np.ceil((t1 - t0) / dt - 1e-12)))
    h = (t1 - t0) / n_steps
    x = np.asarray(seed, dtype=float).copy()
    F = np.asarray(F_e0, dtype=float).copy()
    ts = np.empty(n_steps + 1)
    xs = np.empty((n_steps + 1, 2))
    Fs = np.empty((n_steps + 1, 2, 2))
    ts[0], xs[0], Fs[0] = t0, x, F
    t = t0
    for k in range(n_steps):
        v1, L1 = velocity_sampler(x, t)
        x_mid = x + 0.5 * h * v1
        F_mid = F + 0.5 * h * (L1 @ F)
        v2, L2 = velocity_sampler(x_mid, t + 0.5 * h)
        x = x + h * v2
        F = F + h * (L2 @ F_mid)
        t = t0 + (k + 1) * h
        if domain is not None and not domain(x, t):
            raise OutOfDomain(f"characteristic left the body at t = {t:g}, x = {x}")
        ts[k + 1], xs[k + 1], Fs[k + 1] = t, x, F
    return PathlineRecord(t=ts, x=xs, F_e=Fs)


def elastic_rate_with_relax_evolution(F_e, grad_v, F_relax, dFrelaxinv_dt) -> np.ndarray:
    """Material rate of F_e when the relaxed shape itself evolves.

    Reduces to ``(grad v) F_e`` for a pathline-constant relaxed shape.
    """
    F_e = np.asarray(F_e, dtype=float)
    return (np.asarray(grad_v, dtype=float) @ F_e
            + F_e @ np.asarray(F_relax, dtype=float) @ np.asarray(dFrelaxinv_dt, dtype=float))


@dataclass
class ReconstructedFrame:
    """Deformation gradient and relaxed shape recovered at one time level."""

    t: float
    F: np.ndarray
    F_relax: np.ndarray


def reconstruct_reference(history: Sequence[StepRecord],
                          t0: float | None = None) -> list[ReconstructedFrame]:
    """Recover F and F_relax from a stored run.

    The configuration at ``t0`` (default: earliest stored time) is declared
    the reference, so ``F = I`` there; F is then advanced by replaying the
    stored velocities through the same grid transport, and the relaxed shape
    follows from ``F_relax = F_e^{-1} F`` at every sample.

    Material accreted after ``t0`` carries ``F = I`` at its attachment
    instant (its reference is its as-deposited shape), which makes its
    recovered relaxed shape the inverse of the attachment elastic
    deformation.
    """
    if not history:
        raise ValidationError("history is empty")
    times = np.array([rec.t for rec in history])
    if t0 is None:
        i0 = 0
    else:
        i0 = int(np.argmin(np.abs(times - t0)))
        if abs(times[i0] - t0) > 1e-9 * max(1.0, abs(t0)):
            raise ValidationError(f"t0 = {t0:g} is not a stored time level")
    eye = identity((history[i0].grid.n_cells,))
    F = eye.copy()
    frames = [ReconstructedFrame(t=history[i0].t, F=F.copy(),
                                 F_relax=inverse(history[i0].F_e) @ F)]
    for prev, cur in zip(history[i0:], history[i0 + 1:]):
        dt = cur.t - prev.t
        F = _transport_step_1d(F, prev.v_cells, prev.grad_v, prev.grid, dt,
                               inflow_bc=np.eye(2), mass_rate=0.0)
        if cur.grid.height != prev.grid.height or cur.grid.n_cells != prev.grid.n_cells:
            F = regrid_fields(prev.grid, cur.grid, {"F": F}, {"F": np.eye(2)})["F"]
        frames.append(ReconstructedFrame(t=cur.t, F=F.copy(),
                                         F_relax=inverse(cur.F_e) @ F))
    return frames


# ---------------------------------------------------------------------------
# Two-dimensional strip transports (verification of the inverse-motion route
# and of compatibility preservation; not used by the growth scenarios).
# ---------------------------------------------------------------------------

def strip_velocity_gradient(fld: np.ndarray, strip: PeriodicStrip) -> np.ndarray:
    """Gradient of a vector field: periodic centered in x1, one-sided at walls."""
    f = np.asarray(fld, dtype=float)
    d1 = (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * strip.dx1)
    d2 = np.gradient(f, strip.dx2, axis=1)
    return np.stack([d1, d2], axis=-1)


def _strip_upwind(comps: np.ndarray, v: np.ndarray, strip: PeriodicStrip) -> np.ndarray:
    # Wall ghosts extrapolate linearly; see _upwind_term_1d.
    v1 = v[..., 0][..., None]
    v2 = v[..., 1][..., None]
    bwd1 = (comps - np.roll(comps, 1, axis=0)) / strip.dx1
    fwd1 = (np.roll(comps, -1, axis=0) - comps) / strip.dx1
    below = np.concatenate([2.0 * comps[:, :1] - comps[:, 1:2], comps[:, :-1]], axis=1)
    above = np.concatenate([comps[:, 1:], 2.0 * comps[:, -1:] - comps[:, -2:-1]], axis=1)
    bwd2 = (comps - below) / strip.dx2
    fwd2 = (above - comps) / strip.dx2
    return (np.where(v1 > 0, v1 * bwd1, v1 * fwd1)
            + np.where(v2 > 0, v2 * bwd2, v2 * fwd2))


def _strip_cfl(v: np.ndarray, strip: PeriodicStrip, dt: float) -> None:
    rate = np.abs(v[..., 0]) / strip.dx1 + np.abs(v[..., 1]) / strip.dx2
    if float(rate.max()) * dt > CFL_LIMIT * (1.0 + 1e-12):
        raise CFLViolation(f"strip CFL number {float(rate.max()) * dt:.3f} exceeds {CFL_LIMIT}")


def advance_deformation_strip(F: np.ndarray, v: np.ndarray, grad_v: np.ndarray,
                              strip: PeriodicStrip, dt: float) -> np.ndarray:
    """One upwind/Euler step of the deformation-gradient transport on the strip."""
    _strip_cfl(v, strip, dt)
    F = np.asarray(F, dtype=float)
    shape = F.shape
    adv = _strip_upwind(F.reshape(shape[:2] + (4,)), v, strip).reshape(shape)
    return F + dt * (np.asarray(grad_v, dtype=float) @ F - adv)


def advance_inverse_motion(ref_dev: np.ndarray, v: np.ndarray, strip: PeriodicStrip,
                           dt: float, mass_rate: float = 0.0) -> np.ndarray:
    """Advect the inverse motion as a passive vector field (no-growth only).

    The stored quantity is the deviation ``chi^{-1}(x, t) - x`` so that the
    field stays periodic in x1; it obeys the same transport with source
    ``-v``.  Feeding an inflow for the inverse motion would amount to
    constructing the reference configuration, so any growth is rejected.
    """
    if mass_rate != 0.0:
        raise GrowthNotSupported("inverse-motion transport is restricted to a "
                                 "fixed particle set (mass rate must be zero)")
    _strip_cfl(v, strip, dt)
    q = np.asarray(ref_dev, dtype=float)
    adv = _strip_upwind(q, v, strip)
    return q + dt * (-adv - v)


def deformation_from_inverse_motion(ref_dev: np.ndarray, strip: PeriodicStrip) -> np.ndarray:
    """Recover ``F = (grad chi^{-1})^{-1}`` from the stored deviation field."""
    g = strip_velocity_gradient(require_finite(ref_dev, "ref_dev"), strip)
    return inverse(np.eye(2) + g)


def strip_row_curl(T: np.ndarray, strip: PeriodicStrip) -> np.ndarray:
    """Row-wise spatial curl ``dT[i,0]/dx2 - dT[i,1]/dx1`` of a tensor field."""
    T = np.asarray(T, dtype=float)
    d2_col0 = np.gradient(T[..., 0], strip.dx2, axis=1)
    d1_col1 = (np.roll(T[..., 1], -1, axis=0) - np.roll(T[..., 1], 1, axis=0)) / (2.0 * strip.dx1)
    return d2_col0 - d1_col1
