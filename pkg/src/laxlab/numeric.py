"""Complex ODE harness for the scalar and matrix flows.

Integrates the second-order flows (``pii``, ``p34``, ``matrix-pii``) and the
third-order flow (``dpii3``) for N x N complex matrix unknowns along a real
interval, then audits every trajectory with finite-difference residuals that
are computed independently of the integrator: the sampled values of u alone
are differenced with high-order central stencils and compared against the
right-hand side.

Conventions (matching the symbolic catalog):

* ``pii`` / ``matrix-pii``:  u'' = 2*u^3 - z*u + alpha   (pii-classical)
* ``p34``:                   u'' = 2*u^3 + z*u - alpha   (the convention under
  which the map p = u^2 + u' + z/2 closes onto the second-order p-equation)
* ``dpii3``:                 u''' = 2*(u'*u^2 + u*u'*u + u^2*u') - u/3 - z*u'/3

Matrix powers are ordered products; the scalar coefficient z multiplies
entrywise, which is the scalar image of the anticommutator (1/2)*[z, u]_+.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .ncexpr import LaxlabError

POLE_THRESHOLD = 1e8
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_GRID = 161

RHS_IDS = ("pii", "p34", "matrix-pii", "dpii3")


class NumericError(LaxlabError):
    """Invalid numeric problem or failed numeric check."""


class PoleEncountered(NumericError):
    """The trajectory left the working domain: |u| blew past the pole
    threshold or the integrator's step size collapsed."""


def _as_matrix(value, n: int, name: str) -> np.ndarray:
    try:
        a = np.asarray(value, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise NumericError(f"{name} is not a complex matrix: {exc}") from None
    if a.ndim == 0:
        a = a * np.eye(n, dtype=complex)
    if a.shape != (n, n):
        raise NumericError(
            f"{name} has shape {a.shape}, expected ({n}, {n})"
        )
    return a


@dataclass
class ODEProblem:
    """One initial-value problem.  Scalars passed for u0/du0/ddu0 are
    promoted to multiples of the identity."""

    rhs: str
    alpha: complex = 0.0
    n: int = 1
    z0: float = 1.0
    z1: float = 5.0
    u0: object = 0.0
    du0: object = 0.0
    ddu0: object = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    grid_points: int = DEFAULT_GRID

    def __post_init__(self):
        if self.rhs not in RHS_IDS:
            raise NumericError(
                f"unknown rhs {self.rhs!r}; expected one of {RHS_IDS}"
            )
        if not isinstance(self.n, int) or self.n < 1:
            raise NumericError("n must be an integer >= 1")
        if self.grid_points < 9:
            raise NumericError("grid_points must be at least 9")
        if float(self.z0) == float(self.z1):
            raise NumericError("empty integration span")
        self.alpha = complex(self.alpha)
        self.u0 = _as_matrix(self.u0, self.n, "u0")
        self.du0 = _as_matrix(self.du0, self.n, "du0")
        if self.rhs == "dpii3":
            if self.ddu0 is None:
                raise NumericError("dpii3 needs an initial u''")
            self.ddu0 = _as_matrix(self.ddu0, self.n, "ddu0")
        elif self.ddu0 is not None:
            raise NumericError(f"{self.rhs} takes no initial u''")

    @property
    def depth(self) -> int:
        return 3 if self.rhs == "dpii3" else 2


def _second_rhs(rhs: str, z: float, u: np.ndarray, alpha: complex,
                n: int) -> np.ndarray:
    cube = u @ u @ u
    eye = np.eye(n, dtype=complex)
    if rhs == "p34":
        return 2.0 * cube + z * u - alpha * eye
    return 2.0 * cube - z * u + alpha * eye


def _third_rhs(z: float, u: np.ndarray, du: np.ndarray) -> np.ndarray:
    spread = du @ u @ u + u @ du @ u + u @ u @ du
    return 2.0 * spread - u / 3.0 - z * du / 3.0


def _flow(problem: ODEProblem):
    n, depth = problem.n, problem.depth
    m = depth * n * n
    rhs, alpha = problem.rhs, problem.alpha

    def f(z, y):
        c = y[:m] + 1j * y[m:]
        blocks = c.reshape(depth, n, n)
        if depth == 2:
            out = np.stack(
                [blocks[1], _second_rhs(rhs, z, blocks[0], alpha, n)]
            )
        else:
            out = np.stack(
                [blocks[1], blocks[2], _third_rhs(z, blocks[0], blocks[1])]
            )
        flat = out.reshape(m)
        return np.concatenate([flat.real, flat.imag])

    return f


def _pole_event(problem: ODEProblem):
    m = problem.depth * problem.n * problem.n
    m0 = problem.n * problem.n

    def ev(z, y):
        umax = np.max(np.hypot(y[:m0], y[m : m + m0]))
        return POLE_THRESHOLD - umax

    ev.terminal = True
    return ev


def _pack(problem: ODEProblem) -> np.ndarray:
    blocks = [problem.u0, problem.du0]
    if problem.depth == 3:
        blocks.append(problem.ddu0)
    flat = np.stack(blocks).reshape(-1)
    return np.concatenate([flat.real, flat.imag])


def _solve(problem: ODEProblem, grid: np.ndarray, rtol: float,
           atol: float) -> np.ndarray:
    sol = solve_ivp(
        _flow(problem),
        (float(problem.z0), float(problem.z1)),
        _pack(problem),
        method="DOP853",
        t_eval=grid,
        rtol=rtol,
        atol=atol,
        events=[_pole_event(problem)],
    )
    if sol.status == 1:
        where = sol.t_events[0][0] if len(sol.t_events[0]) else problem.z1
        raise PoleEncountered(
            f"|u| exceeded {POLE_THRESHOLD:g} near z = {where:.6g}"
        )
    if sol.status != 0 or sol.y.shape[1] != len(grid):
        raise PoleEncountered(f"integration stalled: {sol.message}")
    m = problem.depth * problem.n * problem.n
    c = sol.y[:m] + 1j * sol.y[m:]
    # (m, G) -> (G, depth, n, n)
    return c.T.reshape(len(grid), problem.depth, problem.n, problem.n)


def _fd_weights(offsets, order: int) -> np.ndarray:
    """Stencil weights for the given derivative order on integer offsets
    (unit spacing), from the Taylor-expansion Vandermonde system."""
    pts = np.asarray(offsets, dtype=float)
    a = np.vander(pts, increasing=True).T
    b = np.zeros(len(pts))
    b[order] = math.factorial(order)
    return np.linalg.solve(a, b)


_W7_D1 = _fd_weights(range(-3, 4), 1)
_W7_D2 = _fd_weights(range(-3, 4), 2)
_W9_D1 = _fd_weights(range(-4, 5), 1)
_W9_D3 = _fd_weights(range(-4, 5), 3)


def _stencil(samples: np.ndarray, weights: np.ndarray, k: int,
             h: float, order: int) -> np.ndarray:
    half = (len(weights) - 1) // 2
    window = samples[k - half : k + half + 1]
    return np.tensordot(weights, window, axes=(0, 0)) / h**order


def _fd_residual(problem: ODEProblem, grid: np.ndarray,
                 states: np.ndarray) -> np.ndarray:
    g = len(grid)
    h = grid[1] - grid[0]
    res = np.full(g, np.nan)
    u = states[:, 0]
    if problem.depth == 2:
        for k in range(3, g - 3):
            d2 = _stencil(u, _W7_D2, k, h, 2)
            want = _second_rhs(problem.rhs, grid[k], u[k], problem.alpha,
                               problem.n)
            res[k] = np.max(np.abs(d2 - want))
    else:
        for k in range(4, g - 4):
            d3 = _stencil(u, _W9_D3, k, h, 3)
            d1 = _stencil(u, _W9_D1, k, h, 1)
            want = _third_rhs(grid[k], u[k], d1)
            res[k] = np.max(np.abs(d3 - want))
    return res


@dataclass
class Trajectory:
    """Sampled solution plus its independent audit columns."""

    problem: ODEProblem
    grid: np.ndarray
    states: np.ndarray       # (G, depth, n, n) complex
    fd_residual: np.ndarray  # (G,) float; NaN where the stencil hangs over
    est_error: np.ndarray    # (G,) float; gap to a tighter-tolerance rerun

    @property
    def u(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def du(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def ddu(self) -> np.ndarray:
        if self.states.shape[1] < 3:
            raise NumericError("second-order trajectory stores no u''")
        return self.states[:, 2]

    def max_fd_residual(self) -> float:
        return float(np.nanmax(self.fd_residual))

    def max_est_error(self) -> float:
        return float(np.max(self.est_error))

    def to_csv(self) -> str:
        names = ["u", "du", "ddu"][: self.states.shape[1]]
        n = self.problem.n
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        header = ["z"]
        for name in names:
            for r in range(n):
                for c in range(n):
                    header += [f"{name}_re_{r}_{c}", f"{name}_im_{r}_{c}"]
        header.append("fd_residual")
        writer.writerow(header)
        for k, z in enumerate(self.grid):
            row = [f"{z:.12g}"]
            for b in range(self.states.shape[1]):
                for r in range(n):
                    for c in range(n):
                        v = self.states[k, b, r, c]
                        row += [f"{v.real:.16e}", f"{v.imag:.16e}"]
            r = self.fd_residual[k]
            row.append("" if np.isnan(r) else f"{r:.6e}")
            writer.writerow(row)
        return out.getvalue()


def integrate(problem: ODEProblem) -> Trajectory:
    grid = np.linspace(float(problem.z0), float(problem.z1),
                       problem.grid_points)
    states = _solve(problem, grid, problem.rtol, problem.atol)
    tight = _solve(problem, grid, max(problem.rtol * 1e-2, 3e-14),
                   max(problem.atol * 1e-2, 1e-15))
    est = np.max(np.abs(states - tight).reshape(len(grid), -1), axis=1)
    res = _fd_residual(problem, grid, states)
    return Trajectory(problem, grid, states, res, est)


def p34_map_check(alpha, ic, span=(1.0, 2.5), rtol=1e-12,
                  atol=1e-14, grid_points=121,
                  pass_tol=1e-6, rhs="p34") -> dict:
    """Integrate the scalar flow, push the trajectory through
    p = u^2 + u' + z/2, and test which second-order p-equation the image
    satisfies: the (alpha - 1/2)^2 pairing (q side) or the
    (alpha + 1/2)^2 pairing (r side).  Exactly one must hold unless the
    two coefficients coincide."""
    u0, du0 = ic
    problem = ODEProblem(rhs, alpha=alpha, n=1, z0=span[0], z1=span[1],
                         u0=u0, du0=du0, rtol=rtol, atol=atol,
                         grid_points=grid_points)
    tr = integrate(problem)
    z = tr.grid
    u = tr.u[:, 0, 0]
    du = tr.du[:, 0, 0]
    p = u * u + du + z / 2.0
    if np.min(np.abs(p)) < 1e-6:
        raise NumericError(
            "p(z) passes too close to zero for the quotient form"
        )
    h = z[1] - z[0]
    g = len(z)
    c2 = {
        "q": (complex(alpha) - 0.5) ** 2,
        "r": (complex(alpha) + 0.5) ** 2,
    }
    residual = {}
    for tag, coeff in c2.items():
        worst = 0.0
        for k in range(3, g - 3):
            d1 = _stencil(p, _W7_D1, k, h, 1)
            d2 = _stencil(p, _W7_D2, k, h, 2)
            pk = p[k]
            r = (d2 - d1 * d1 / (2.0 * pk) - 2.0 * pk * pk + z[k] * pk
                 + coeff / (2.0 * pk))
            worst = max(worst, abs(r))
        residual[tag] = worst
    tie = abs(c2["q"] - c2["r"]) < 1e-12
    winner = "q" if residual["q"] <= residual["r"] else "r"
    result = {
        "winner": winner,
        "winner_c2": c2[winner],
        "residual_q": residual["q"],
        "residual_r": residual["r"],
        "coincident_pairings": tie,
        "pass_tol": pass_tol,
        "map": "p = u^2 + u' + z/2 over u'' = 2*u^3 + z*u - alpha",
    }
    if residual[winner] > pass_tol:
        raise NumericError(
            "neither pairing closes: q residual "
            f"{residual['q']:.3e}, r residual {residual['r']:.3e} "
            "(upstream convention error)"
        )
    return result


def dpii_first_integral_check(ic, span=(1.0, 4.0), n=1, rtol=DEFAULT_RTOL,
                              atol=DEFAULT_ATOL,
                              grid_points=DEFAULT_GRID) -> dict:
    """Integrate the third-order flow and report the drift of its first
    integral u'' - 2*u^3 + z*u/3 along the trajectory."""
    u0, du0, ddu0 = ic
    problem = ODEProblem("dpii3", n=n, z0=span[0], z1=span[1], u0=u0,
                         du0=du0, ddu0=ddu0, rtol=rtol, atol=atol,
                         grid_points=grid_points)
    tr = integrate(problem)
    z = tr.grid
    vals = []
    for k in range(len(z)):
        u, ddu = tr.u[k], tr.ddu[k]
        vals.append(ddu - 2.0 * (u @ u @ u) + z[k] * u / 3.0)
    vals = np.array(vals)
    drift = float(np.max(np.abs(vals - vals[0])))
    return {
        "drift": drift,
        "integral": "u'' - 2*u^3 + (1/3)*z*u",
        "initial_value_max": float(np.max(np.abs(vals[0]))),
        "samples": len(z),
    }
