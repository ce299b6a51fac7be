"""End-to-end growth scenarios, their oracles, and convergence studies.

Three through-thickness scenarios are bundled:

``non_normal``
    Accretion of layers whose attachment elastic deformation is a unit
    shear ``[[1, -alpha], [0, 1]]`` on a clamped substrate, traction-free
    surface, viscous regularization.  Has a closed-form solution used as
    the oracle.

``fdm_shear``
    Layer-by-layer deposition with horizontal feed velocity: the momentum
    flux of arriving material shears the body.  The steady uniform-shear
    state is exact on any grid.

``thermal``
    Deposition with an isotropic attachment mismatch ``F_e = (1/alpha) I``
    (material shrinks after attachment).  No closed form; verified by
    properties.

Each driver marches: quasistatic momentum solve, explicit transport of
F_e, then domain growth by regridding with the attachment value filling
the fresh cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .balance import (BoundaryKind, GrowthInput, SideState, advance_domain,
                      boundary_normal_velocity, density_update, growth_traction,
                      jump_residuals, quasistatic_momentum_solve_1d)
from .constitutive import (AttachmentSpec, MaterialParams,
                           attach_elastic_deformation, total_stress)
from .errors import (IncompatibleAnsatz, NoOracle, OutOfBody, ValidationError)
from .grids import Grid1D, StepRecord, interp_columns, regrid_fields
from .kinematics import (PathlineRecord, advance_F_e_grid,
                         integrate_characteristics, reconstruct_reference)
from .tensors import det, identity

KINDS = ("non_normal", "fdm_shear", "thermal")

# Residual levels beyond which the through-thickness reduction is deemed
# inconsistent rather than merely inaccurate.
ANSATZ_RESIDUAL_LIMIT = 1e-6


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one scenario run.

    ``alpha`` is the attachment shear for ``non_normal`` and the
    contraction ratio for ``thermal``.  ``h``, ``v0``, ``L`` define the
    deposition rate of ``fdm_shear`` (mass rate ``rho h v0 / L``).  Units
    are whatever consistent system the caller adopts; the defaults form
    the canonical nondimensional setup G = rho = V_G = 1.
    """

    kind: str
    params: MaterialParams = field(default_factory=MaterialParams)
    alpha: float = 0.5
    H0: float | None = None
    V_G: float = 1.0
    h: float = 0.1
    v0: float = 1.0
    L: float = 1.0
    n_cells: int = 200
    dt: float | None = None
    t_end: float = 1.0
    mu_sweep: tuple[float, ...] | None = None
    n_snapshots: int = 11

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.t_end > 0:
            raise ValidationError(f"t_end must be positive, got {self.t_end}")
        if self.n_cells < 16:
            raise ValidationError(f"n_cells must be >= 16, got {self.n_cells}")
        if self.dt is not None and not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if self.kind == "fdm_shear" and not self.height0 > 0:
            raise ValidationError("H0 must be positive for fdm_shear")
        if self.kind != "fdm_shear" and not self.V_G > 0:
            raise ValidationError(f"V_G must be positive, got {self.V_G}")
        if self.kind == "thermal" and not self.alpha > 0:
            raise ValidationError(f"alpha must be positive for thermal, got {self.alpha}")
        if self.height0 < 0:
            raise ValidationError(f"H0 must be nonnegative, got {self.H0}")
        if self.n_snapshots < 1:
            raise ValidationError("n_snapshots must be >= 1")

    @property
    def height0(self) -> float:
        if self.H0 is not None:
            return self.H0
        return {"non_normal": 0.0, "fdm_shear": 1.0, "thermal": 0.5}[self.kind]

    @property
    def mass_rate(self) -> float:
        if self.kind == "fdm_shear":
            return self.params.rho * self.h * self.v0 / self.L
        return self.params.rho * self.V_G

    @property
    def boundary_rate(self) -> float:
        """Normal boundary speed V_b . n = v . n + M / rho (v . n = 0 here)."""
        return boundary_normal_velocity(self.mass_rate, self.params.rho,
                                        np.zeros(2), np.array([0.0, 1.0]))

    def attachment_deformation(self) -> np.ndarray:
        if self.kind == "non_normal":
            return np.array([[1.0, -self.alpha], [0.0, 1.0]])
        if self.kind == "thermal":
            return np.eye(2) / self.alpha
        traction = growth_traction(self.mass_rate, np.array([self.v0, 0.0]),
                                   np.zeros(2), np.zeros(2))
        F_att, _ = attach_elastic_deformation(
            AttachmentSpec.from_traction(traction, self.params), self.params)
        return F_att

    def growth_input(self) -> GrowthInput:
        v_a = np.array([self.v0, 0.0]) if self.kind == "fdm_shear" else None
        return GrowthInput(M=self.mass_rate, v_a=v_a, t_b=np.zeros(2),
                           F_e_attach=self.attachment_deformation())

    def resolve_dt(self) -> tuple[float, int]:
        """Step size and count; dt is snapped so the steps tile [0, t_end]."""
        if self.dt is not None:
            base = self.dt
        else:
            base = self.t_end / (4.0 * self.n_cells)
            if self.kind == "non_normal":
                # explicit relaxation stability/accuracy: G dt / mu bounded
                base = min(base, 0.5 * self.params.mu / self.params.G)
        n_steps = max(1, int(math.ceil(self.t_end / base - 1e-12)))
        return self.t_end / n_steps, n_steps

    def sweep_values(self) -> tuple[float, ...]:
        if self.mu_sweep is not None:
            return self.mu_sweep
        scale = self.params.G * self.t_end
        return tuple(c * scale for c in (1.0, 0.3, 0.1, 0.03, 0.01))


@dataclass
class ConvergenceRow:
    n_cells: int
    dt: float
    linf: float
    l2: float
    order: float | None


@dataclass
class RunResult:
    """Full-resolution history of one run plus derived diagnostics."""

    config: ScenarioConfig
    history: list[StepRecord]
    oracle_errors: dict[str, np.ndarray] = field(default_factory=dict)
    pathlines: list[PathlineRecord] = field(default_factory=list)
    convergence: list[ConvergenceRow] = field(default_factory=list)

    @property
    def final(self) -> StepRecord:
        return self.history[-1]

    def max_metric(self, name: str) -> float:
        return max(rec.metrics[name] for rec in self.history)

    def probe(self, x2: float, record: StepRecord | None = None) -> dict:
        """Interpolated field values at one height (clamped to the body)."""
        rec = record if record is not None else self.final
        xq = np.array([min(max(x2, 0.0), rec.grid.height)])
        F = interp_columns(xq, rec.grid.centers, rec.F_e)[0]
        p = float(np.interp(xq, rec.grid.centers, rec.p)[0])
        v1 = float(np.interp(xq, rec.grid.faces, rec.v_nodes)[0])
        return {"F_e": F, "p": p, "v1": v1}


def analytic_non_normal(x2, t: float, alpha: float, G: float, mu: float, V_G: float):
    """Closed-form (v1, F_e12, p) for the sheared-attachment scenario.

    Valid for ``0 <= x2 <= V_G t``; above the growth front raises
    ``OutOfBody``.  Requires ``mu > 0``; the inviscid limit is reached as
    ``mu -> 0`` with fields relaxing immediately after attachment.
    """
    if not mu > 0:
        raise ValidationError(f"mu must be positive, got {mu}")
    x2a = np.asarray(x2, dtype=float)
    top = V_G * t
    if np.any(x2a < -1e-12) or np.any(x2a > top * (1 + 1e-12) + 1e-15):
        raise OutOfBody(f"x2 outside [0, {top:g}]")
    lam = G / mu
    age = t - x2a / V_G
    F_e12 = -alpha * np.exp(-lam * age)
    v1 = V_G * alpha * (np.exp(-lam * age) - np.exp(-lam * t))
    p = np.full_like(x2a, float(G))
    if np.isscalar(x2) or x2a.ndim == 0:
        return float(v1), float(F_e12), float(G)
    return v1, F_e12, p


def _ambient_stress(t_b: np.ndarray) -> np.ndarray:
    # Symmetric ambient stress whose traction on n = e2 is t_b.
    return np.array([[0.0, t_b[0]], [t_b[0], t_b[1]]])


def _step_metrics(config: ScenarioConfig, sol, F_e, rho, grid, t, t_b,
                  v_a_fixed) -> dict:
    params = config.params
    M = config.mass_rate
    v_surf = np.array([sol.v_nodes[-1], 0.0])
    v_a = v_a_fixed if v_a_fixed is not None else v_surf
    n_hat = np.array([0.0, 1.0])
    V_b = np.array([0.0, boundary_normal_velocity(M, rho[-1], v_surf, n_hat)])
    sigma_top = total_stress(F_e[-1], sol.grad_v[-1], sol.p[-1], params)
    body = SideState(rho=float(rho[-1]), v=v_surf, sigma=sigma_top)
    ambient = SideState(rho=0.0, v=v_a, sigma=_ambient_stress(t_b))
    mass_res, mom_res = jump_residuals(body, ambient, V_b, n_hat, M, v_a)
    d = det(F_e)
    return {
        "t": t,
        "H": grid.height,
        "mass_residual": abs(mass_res),
        "momentum_residual": float(np.max(np.abs(mom_res))),
        "traction_residual": sol.traction_residual,
        "system_residual": sol.system_residual,
        "det_drift": float(np.max(np.abs(d - 1.0))),
        "max_F_e21": float(np.max(np.abs(F_e[:, 1, 0]))),
        "max_p_dev": float(np.max(np.abs(sol.p - params.G))),
    }


def _run_1d(config: ScenarioConfig, initial_F_e12: float | None = None,
            check_ansatz: bool = False) -> RunResult:
    params = config.params
    n = config.n_cells
    H0 = config.height0
    rate = config.boundary_rate
    M = config.mass_rate
    dt, n_steps = config.resolve_dt()
    growth = config.growth_input()
    F_att = growth.F_e_attach
    rho0 = params.rho
    t_b = growth.t_b

    grid = Grid1D(n, H0) if H0 > 0 else None
    F_e = rho = None
    if grid is not None:
        F_e = identity((n,))
        if initial_F_e12 is not None:
            # one-shot equilibration: the body jumps to the sheared state
            # consistent with the surface momentum flux at t = 0+
            F_e[:, 0, 1] = initial_F_e12
        rho = np.full(n, rho0)
    v_surf_prev = np.zeros(2)
    records: list[StepRecord] = []

    def traction_now():
        if growth.v_a is None:
            return t_b.copy()
        return growth_traction(M, growth.v_a, v_surf_prev, t_b)

    def solve_and_record(t):
        nonlocal v_surf_prev
        tau = traction_now()
        sol = quasistatic_momentum_solve_1d(F_e, grid, params, tau,
                                            base=BoundaryKind.CLAMPED)
        if check_ansatz and max(sol.traction_residual,
                                sol.system_residual) > ANSATZ_RESIDUAL_LIMIT:
            raise IncompatibleAnsatz(
                f"reduced solve residual {max(sol.traction_residual, sol.system_residual):.3e} "
                f"at t = {t:g}; the through-thickness ansatz is inconsistent")
        metrics = _step_metrics(config, sol, F_e, rho, grid, t, t_b, growth.v_a)
        records.append(StepRecord(t=t, grid=grid, v_nodes=sol.v_nodes,
                                  grad_v=sol.grad_v, F_e=F_e.copy(),
                                  p=sol.p.copy(), rho=rho.copy(), metrics=metrics))
        v_surf_prev = np.array([sol.v_nodes[-1], 0.0])
        return sol

    t = 0.0
    for k in range(1, n_steps + 1):
        if grid is not None:
            sol = solve_and_record(t)
            state = records[-1].field_state()
            state = advance_F_e_grid(state, sol.grad_v, dt, inflow_bc=F_att,
                                     mass_rate=M)
            F_e = state.F_e
            rho = density_update(rho, state.v, grid, dt, inflow_rho=rho0,
                                 mass_rate=M)
        H_new = advance_domain(H0, rate, dt, n_steps=k)
        new_grid = Grid1D(n, H_new)
        fields = regrid_fields(grid, new_grid, {"F_e": F_e, "rho": rho},
                               {"F_e": F_att, "rho": rho0})
        F_e, rho = fields["F_e"], fields["rho"]
        grid = new_grid
        t = k * dt
    solve_and_record(n_steps * dt)
    return RunResult(config=config, history=records)


def _attach_oracle_errors_non_normal(result: RunResult) -> None:
    cfg = result.config
    p = cfg.params
    t = np.array([rec.t for rec in result.history])
    linf_f, rms_f, linf_v, linf_p = [], [], [], []
    for rec in result.history:
        x = rec.grid.centers
        v1_ref, f_ref, p_ref = analytic_non_normal(x, rec.t, cfg.alpha, p.G,
                                                   p.mu, cfg.V_G)
        ef = rec.F_e[:, 0, 1] - f_ref
        v1 = 0.5 * (rec.v_nodes[:-1] + rec.v_nodes[1:])
        linf_f.append(float(np.max(np.abs(ef))))
        rms_f.append(float(np.sqrt(np.mean(ef ** 2))))
        linf_v.append(float(np.max(np.abs(v1 - v1_ref))))
        linf_p.append(float(np.max(np.abs(rec.p - p_ref))))
    result.oracle_errors = {"t": t, "linf_F_e12": np.array(linf_f),
                            "rms_F_e12": np.array(rms_f),
                            "linf_v1": np.array(linf_v),
                            "linf_p": np.array(linf_p)}


def _attach_oracle_errors_fdm(result: RunResult) -> None:
    cfg = result.config
    G = cfg.params.G
    M = cfg.mass_rate
    gamma = M * cfg.v0 / G
    s12_ref, s11_ref = M * cfg.v0, (M * cfg.v0) ** 2 / G
    t = np.array([rec.t for rec in result.history])
    linf_f, linf_v, linf_s12, linf_s11 = [], [], [], []
    for rec in result.history:
        sigma = total_stress(rec.F_e, rec.grad_v, rec.p, cfg.params)
        linf_f.append(float(np.max(np.abs(rec.F_e[:, 0, 1] - gamma))))
        linf_v.append(float(np.max(np.abs(rec.v_nodes))))
        linf_s12.append(float(np.max(np.abs(sigma[:, 0, 1] - s12_ref))))
        linf_s11.append(float(np.max(np.abs(sigma[:, 0, 0] - s11_ref))))
    result.oracle_errors = {"t": t, "linf_F_e12": np.array(linf_f),
                            "linf_v1": np.array(linf_v),
                            "linf_sigma12": np.array(linf_s12),
                            "linf_sigma11": np.array(linf_s11)}


def run_non_normal(config: ScenarioConfig) -> RunResult:
    """March the sheared-attachment scenario and score it against the oracle."""
    if config.kind != "non_normal":
        raise ValidationError(f"config.kind must be 'non_normal', got {config.kind!r}")
    result = _run_1d(config)
    _attach_oracle_errors_non_normal(result)
    return result


def run_fdm_shear(config: ScenarioConfig) -> RunResult:
    """March the deposition-with-shear scenario.

    The initial condition applies the jump equilibration: at ``t = 0+`` the
    whole body carries the uniform shear ``M v0 / G`` consistent with the
    momentum flux of arriving material.
    """
    if config.kind != "fdm_shear":
        raise ValidationError(f"config.kind must be 'fdm_shear', got {config.kind!r}")
    gamma = config.mass_rate * config.v0 / config.params.G
    result = _run_1d(config, initial_F_e12=gamma)
    _attach_oracle_errors_fdm(result)
    return result


def run_thermal(config: ScenarioConfig) -> RunResult:
    """March deposition with isotropic attachment mismatch (property-verified)."""
    if config.kind != "thermal":
        raise ValidationError(f"config.kind must be 'thermal', got {config.kind!r}")
    return _run_1d(config, check_ansatz=True)


def run_scenario(config: ScenarioConfig) -> RunResult:
    return {"non_normal": run_non_normal, "fdm_shear": run_fdm_shear,
            "thermal": run_thermal}[config.kind](config)


def run_mu_sweep(config: ScenarioConfig, probe_x2: float = 0.25,
                 mu_values: tuple[float, ...] | None = None):
    """Quasistatic-limit sweep: rerun ``non_normal`` over decreasing viscosity.

    Each member uses ``dt = min(mu/(2G), t_end/64)`` so the explicit
    relaxation factor ``1 - G dt / mu`` stays within the stability range and
    the discrete decay remains below the analytic envelope.  Returns
    ``[(mu, |F_e12|(probe_x2, t_end)), ...]``.
    """
    if config.kind != "non_normal":
        raise ValidationError("the viscosity sweep applies to the non_normal kind")
    mus = mu_values if mu_values is not None else config.sweep_values()
    out = []
    for mu in mus:
        params = replace(config.params, mu=mu)
        dt = min(0.5 * mu / params.G, config.t_end / 64.0)
        cfg = replace(config, params=params, dt=dt)
        res = run_non_normal(cfg)
        out.append((mu, abs(float(res.probe(probe_x2)["F_e"][0, 1]))))
    return out


def convergence_study(config: ScenarioConfig, resolutions) -> list[ConvergenceRow]:
    """Refinement study against the scenario oracle (dt scales with 1/n)."""
    if config.kind == "thermal":
        raise NoOracle("the thermal scenario has no closed-form oracle")
    rows: list[ConvergenceRow] = []
    for n in resolutions:
        cfg = replace(config, n_cells=int(n), dt=None)
        dt, _ = cfg.resolve_dt()
        res = run_scenario(cfg)
        if config.kind == "non_normal":
            linf = float(np.max(res.oracle_errors["linf_F_e12"]))
            l2 = float(np.max(res.oracle_errors["rms_F_e12"]))
        else:
            linf = max(float(np.max(res.oracle_errors[k]))
                       for k in ("linf_F_e12", "linf_v1", "linf_sigma12",
                                 "linf_sigma11"))
            l2 = linf
        order = None
        if rows and rows[-1].linf > 0 and linf > 0:
            order = math.log2(rows[-1].linf / linf)
        rows.append(ConvergenceRow(n_cells=int(n), dt=dt, linf=linf, l2=l2,
                                   order=order))
    return rows


# ---------------------------------------------------------------------------
# Pathlines against a stored run
# ---------------------------------------------------------------------------

class HistoryVelocitySampler:
    """Velocity/gradient sampler over a stored history.

    Piecewise linear in ``x2`` (faces for the velocity, face-padded cell
    centers for the gradient) and piecewise constant in time within a step.
    """

    def __init__(self, history):
        self.history = list(history)
        self.times = np.array([rec.t for rec in self.history])
        self._cache = []
        for rec in self.history:
            g = rec.grad_v[:, 0, 1]
            gx = np.concatenate([[0.0], rec.grid.centers, [rec.grid.height]])
            gv = np.concatenate([[g[0]], g, [g[-1]]])
            self._cache.append((rec.grid.height, rec.grid.faces, rec.v_nodes, gx, gv))

    def _index(self, t: float) -> int:
        i = int(np.searchsorted(self.times, t * (1 + 1e-14), side="right")) - 1
        return min(max(i, 0), len(self.history) - 1)

    def __call__(self, x, t):
        H, faces, v_nodes, gx, gv = self._cache[self._index(t)]
        x2 = min(max(float(x[1]), 0.0), H)
        v1 = float(np.interp(x2, faces, v_nodes))
        g = float(np.interp(x2, gx, gv))
        return np.array([v1, 0.0]), np.array([[0.0, g], [0.0, 0.0]])

    def inside(self, x, t) -> bool:
        H = self._cache[self._index(t)][0]
        return -1e-9 <= float(x[1]) <= H + 1e-9


def trace_history_pathlines(result: RunResult, count: int = 20) -> list[PathlineRecord]:
    """Integrate characteristics through the stored velocity history.

    Seeds are spread through the final body; each pathline starts at the
    first stored time level whose body contains the seed height, with the
    grid field interpolated there as its starting F_e, and is integrated
    with the run's own step size.  Sample times coincide with the stored
    levels, so grid/characteristic comparisons need no time interpolation.
    """
    history = result.history
    sampler = HistoryVelocitySampler(history)
    t_end = history[-1].t
    dt = history[1].t - history[0].t if len(history) > 1 else t_end
    H_end = history[-1].grid.height
    pathlines = []
    for i in range(count):
        x2_seed = (i + 0.5) * H_end / count
        j0 = next(j for j, rec in enumerate(history) if rec.grid.height >= x2_seed)
        rec = history[j0]
        if rec.t >= t_end:
            continue
        F0 = interp_columns(np.array([x2_seed]), rec.grid.centers, rec.F_e)[0]
        pl = integrate_characteristics(sampler, np.array([0.0, x2_seed]),
                                       rec.t, t_end, dt, F0,
                                       domain=sampler.inside)
        pathlines.append(pl)
    return pathlines


def pathline_grid_discrepancy(result: RunResult, pathlines) -> float:
    """L-infinity gap between grid-transported and characteristic F_e."""
    history = result.history
    t0 = history[0].t
    dt = history[1].t - history[0].t if len(history) > 1 else 1.0
    worst = 0.0
    for pl in pathlines:
        for m, t in enumerate(pl.t):
            k = int(round((t - t0) / dt))
            rec = history[k]
            xq = np.array([min(max(pl.x[m, 1], 0.0), rec.grid.height)])
            F_grid = interp_columns(xq, rec.grid.centers, rec.F_e)[0]
            worst = max(worst, float(np.max(np.abs(F_grid - pl.F_e[m]))))
    return worst


def reconstruction_roundtrip_error(result: RunResult, t0: float | None = None) -> float:
    """Max relative defect of F_e F_relax against the replayed F."""
    frames = reconstruct_reference(result.history, t0=t0)
    i0 = len(result.history) - len(frames)
    worst = 0.0
    for frame, rec in zip(frames, result.history[i0:]):
        recon = rec.F_e @ frame.F_relax
        scale = max(1.0, float(np.max(np.abs(frame.F))))
        worst = max(worst, float(np.max(np.abs(recon - frame.F))) / scale)
    return worst
