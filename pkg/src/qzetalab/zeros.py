"""Zeros of zeta_q^(nu): bracketing on the real axis, Newton with a grid
fallback off it, continuation in q, and rectangle scans."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import (
    BracketContainsPole,
    ClippedRegion,
    DomainError,
    EnteredZeroFreeRegion,
    GridTooCoarse,
    InsufficientData,
    NoSignChange,
    NotConverged,
    ParamError,
    PoleProximity,
)
from .qcore import as_qparam
from .qzeta.series import SeriesSpec, value_and_ds, zeta_expansion

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 50
# Newton steps longer than this are shortened to it.
MAX_NEWTON_STEP = 1.0
JUMP_FACTOR = 10.0
JUMP_FLOOR = 0.05
FIRST_STEP_MAX = 1.0
MAX_SUBDIVISIONS = 6


class ZeroMethod(enum.Enum):
    BISECTION = "bisection"
    NEWTON = "newton"
    GRID = "grid"


class PointStatus(enum.Enum):
    CONVERGED = "CONVERGED"
    REFINED_AFTER_RESTART = "REFINED_AFTER_RESTART"
    LOST = "LOST"


class ScanMode(enum.Enum):
    CANDIDATES = "candidates"
    FIELD = "field"


@dataclass(frozen=True)
class Zero:
    s: complex
    q: float
    nu: int
    residual: float
    method: ZeroMethod
    iterations: int


def _zeta(s: complex, nu: int, q) -> complex:
    return zeta_expansion(SeriesSpec.zeta(s, nu), q).value


def _check_zero_free(s: complex, nu: int):
    if s.real >= 2 * nu:
        raise EnteredZeroFreeRegion(f"Re(s) = {s.real:g} >= 2 nu = {2 * nu}: no zeros there")


# ----------------------------------------------------------------------------
# single zeros


def find_real_zero(nu: int, q, bracket: tuple, tol: float = 1e-12) -> Zero:
    """Brent's method on a sign-changing bracket of the real axis."""
    a, b = sorted(float(x) for x in bracket)
    if b >= 2 * nu:
        raise EnteredZeroFreeRegion(f"bracket ({a}, {b}) reaches Re(s) >= 2 nu = {2 * nu}")
    for k in range(1, nu + 1):
        if a <= k <= b:
            raise BracketContainsPole(f"bracket ({a}, {b}) contains the pole s = {k}")
    qp = as_qparam(q)

    def f(x: float) -> float:
        return _zeta(complex(x), nu, qp).real

    fa, fb = f(a), f(b)
    if fa == 0:
        return Zero(complex(a), qp.q, nu, 0.0, ZeroMethod.BISECTION, 0)
    if fb == 0:
        return Zero(complex(b), qp.q, nu, 0.0, ZeroMethod.BISECTION, 0)
    if (fa > 0) == (fb > 0):
        raise NoSignChange(f"zeta has the same sign at {a} and {b}")
    root, info = optimize.brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, full_output=True)
    return Zero(complex(root), qp.q, nu, abs(f(root)), ZeroMethod.BISECTION, info.iterations)


def _newton(s: complex, nu: int, qp, max_iter: int, real: bool, tol: float = DEFAULT_TOL):
    """Newton with step capping. Returns (s, iterations) or None on failure.

    Stops on a step below 1e-13 (1 + |s|), or, once |zeta| < tol, as soon as
    steps stop halving: that is the noise floor of the evaluation.
    """
    last = math.inf
    for it in range(1, max_iter + 1):
        try:
            v, d = value_and_ds(SeriesSpec.zeta(s, nu), qp)
        except PoleProximity:
            return None
        if v == 0:
            return s, it
        if d == 0 or not (np.isfinite(d.real) and np.isfinite(d.imag)):
            return None
        step = v / d
        if real:
            step = complex(step.real, 0.0)
        size = abs(step)
        if size > MAX_NEWTON_STEP:
            step *= MAX_NEWTON_STEP / size
        s = s - step
        if s.real >= 2 * nu or not np.isfinite(abs(s)):
            return None
        if size <= 1e-13 * (1 + abs(s)):
            return s, it
        if abs(v) < tol and size > 0.5 * last:
            return s, it
        last = size
    return None


def _residual(s: complex, nu: int, qp) -> float:
    try:
        return abs(_zeta(s, nu, qp))
    except PoleProximity:
        return math.inf


def _sign_cells(values: np.ndarray) -> np.ndarray:
    """Boolean (ny-1, nx-1) mask of cells whose four corners change sign in Re and in Im."""
    re, im = values.real, values.imag
    ok = np.isfinite(re) & np.isfinite(im)

    def changes(part):
        c = [part[:-1, :-1], part[:-1, 1:], part[1:, :-1], part[1:, 1:]]
        lo = np.minimum.reduce(c)
        hi = np.maximum.reduce(c)
        return (lo <= 0) & (hi >= 0)

    fin = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, :-1] & ok[1:, 1:]
    return changes(re) & changes(im) & fin


def _eval_grid(nu: int, qp, re: np.ndarray, im: np.ndarray) -> np.ndarray:
    out = np.empty((im.size, re.size), dtype=complex)
    for i, y in enumerate(im):
        for j, x in enumerate(re):
            try:
                out[i, j] = _zeta(complex(x, y), nu, qp)
            except (PoleProximity, DomainError):
                out[i, j] = complex(np.nan, np.nan)
    return out


def _grid_refine(centre: complex, nu: int, qp, half: float = 0.5, cells: int = 8, levels: int = 8):
    """Shrink a box around cells where both components change sign; returns a point or None."""
    for _ in range(3):
        c = centre
        h = half
        found = False
        for _ in range(levels):
            hi_re = min(c.real + h, 2 * nu - 1e-9)
            re = np.linspace(c.real - h, hi_re, cells + 1)
            im = np.linspace(c.imag - h, c.imag + h, cells + 1)
            mask = _sign_cells(_eval_grid(nu, qp, re, im))
            idx = np.argwhere(mask)
            if idx.size == 0:
                break
            mids = [complex((re[j] + re[j + 1]) / 2, (im[i] + im[i + 1]) / 2) for i, j in idx]
            c = min(mids, key=lambda z: (abs(z - centre), z.real, z.imag))
            h = (re[1] - re[0])
            found = True
        if found:
            return c
        half *= 2
    return None


def find_complex_zero(nu: int, q, guess: complex, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> Zero:
    """Newton from ``guess``; on failure, sign-change grid refinement and Newton again.

    A real guess keeps the iteration on the real axis.
    """
    guess = complex(guess)
    _check_zero_free(guess, nu)
    qp = as_qparam(q)
    real = guess.imag == 0
    # a guess sitting on a pole is an input error, not a divergence
    value_and_ds(SeriesSpec.zeta(guess, nu), qp)
    out = _newton(guess, nu, qp, max_iter, real, tol)
    method = ZeroMethod.NEWTON
    if out is not None and _residual(out[0], nu, qp) >= tol:
        out = None
    if out is None:
        start = _grid_refine(guess, nu, qp)
        if start is not None:
            out = _newton(start, nu, qp, max_iter, real and start.imag == 0, tol)
            method = ZeroMethod.GRID
    if out is None:
        raise NotConverged(f"no zero found from guess {guess} at q = {qp.q}")
    s, its = out
    _check_zero_free(s, nu)
    res = _residual(s, nu, qp)
    if not res < tol:
        raise NotConverged(f"residual {res:.3g} above {tol:g} at s = {s}")
    return Zero(s, qp.q, nu, res, method, its)


# ----------------------------------------------------------------------------
# continuation in q


@dataclass(frozen=True)
class QSchedule:
    points: tuple

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise ParamError("empty schedule")
        if any(not (0 < p < 1) for p in pts):
            raise ParamError("schedule values must lie in (0, 1)")
        if any(b >= a for a, b in zip(pts, pts[1:])):
            raise ParamError("schedule must be strictly decreasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def standard(cls) -> "QSchedule":
        """0.99, 0.98, ..., 0.01, then 1e-3, 1e-4, 1e-5."""
        return cls(tuple(round(1 - k / 100, 2) for k in range(1, 100)) + (1e-3, 1e-4, 1e-5))

    @classmethod
    def parse(cls, text: str) -> "QSchedule":
        vals = [float(tok) for tok in text.replace(",", " ").split() if tok and not tok.startswith("#")]
        return cls(tuple(vals))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class TrajectoryPoint:
    q: float
    s: complex
    residual: float
    status: PointStatus
    newton_iters: int
    slope_estimate: float
    zero: Optional[Zero] = None


@dataclass
class Trajectory:
    nu: int
    origin: complex
    points: list = field(default_factory=list)

    def tracked(self) -> list:
        return [p for p in self.points if p.status is not PointStatus.LOST]

    @property
    def endpoint(self) -> Optional[TrajectoryPoint]:
        good = self.tracked()
        return good[-1] if good else None


def _delta_abs(q: float) -> float:
    return 2 * math.pi / abs(math.log(q))


def _try_step(s: complex, nu: int, q: float, limit: float, tol: float, max_iter: int, real: bool):
    qp = as_qparam(q)
    out = _newton(s, nu, qp, max_iter, real, tol)
    if out is None:
        return None
    s_new, its = out
    if abs(s_new - s) > limit:
        return None
    res = _residual(s_new, nu, qp)
    if not res < tol:
        return None
    return s_new, its, res


def _jump_limit(prev_step: Optional[float], q: float) -> float:
    base = FIRST_STEP_MAX if prev_step is None else max(JUMP_FACTOR * prev_step, JUMP_FLOOR)
    # zeros one delta apart are impostors; never accept a move that long
    return min(base, 0.5 * _delta_abs(q))


def track_trajectory(nu: int, origin: complex, schedule=None, tol: float = DEFAULT_TOL,
                     max_iter: int = DEFAULT_MAX_ITER, max_subdivisions: int = MAX_SUBDIVISIONS) -> Trajectory:
    """Continue a zero along the schedule, previous zero as the guess.

    A step that fails (no Newton convergence, or a move longer than the
    jump limit) is retried through 2, 4, ... geometric intermediate q
    values; a point that still fails is LOST and the next q restarts from
    the last tracked zero.
    """
    sched = QSchedule.standard() if schedule is None else (schedule if isinstance(schedule, QSchedule) else QSchedule(tuple(schedule)))
    origin = complex(origin)
    real = origin.imag == 0
    traj = Trajectory(nu, origin)
    s_prev, q_prev = origin, 1.0
    prev_step: Optional[float] = None
    for q in sched:
        limit = _jump_limit(prev_step, q)
        got = _try_step(s_prev, nu, q, limit, tol, max_iter, real)
        status = PointStatus.CONVERGED
        if got is None:
            got = _subdivide(s_prev, q_prev, q, nu, prev_step, tol, max_iter, real, max_subdivisions)
            status = PointStatus.REFINED_AFTER_RESTART
        if got is None:
            traj.points.append(TrajectoryPoint(q, s_prev, math.nan, PointStatus.LOST, 0, math.nan))
            continue
        s_new, its, res = got
        move = abs(s_new - s_prev)
        slope = move / abs(q_prev - q)
        zero = Zero(s_new, q, nu, res, ZeroMethod.NEWTON, its)
        traj.points.append(TrajectoryPoint(q, s_new, res, status, its, slope, zero))
        prev_step = move
        s_prev, q_prev = s_new, q
    return traj


def _subdivide(s: complex, q_from: float, q_to: float, nu: int, prev_step, tol, max_iter, real, levels):
    lf, lt = math.log(q_from), math.log(q_to)
    for level in range(1, levels + 1):
        k = 2**level
        cur, step, total = s, (prev_step / k if prev_step is not None else None), 0
        ok = True
        for i in range(1, k + 1):
            qi = math.exp(lf + (lt - lf) * i / k) if i < k else q_to
            got = _try_step(cur, nu, qi, _jump_limit(step, qi), tol, max_iter, real)
            if got is None:
                ok = False
                break
            nxt, its, res = got
            step = abs(nxt - cur)
            cur = nxt
            total += its
        if ok:
            return cur, total, res
    return None


@dataclass(frozen=True)
class CrystalClass:
    nearest_integer: int
    final_distance: float
    tangency_slope: float


def crystal_classifier(traj: Trajectory) -> CrystalClass:
    """Nearest integer to the last tracked zero, its distance, and |ds/dq| over the last two points."""
    good = traj.tracked()
    if len(good) < 3:
        raise InsufficientData(f"need at least 3 tracked points, have {len(good)}")
    last, before = good[-1], good[-2]
    n = int(round(last.s.real))
    slope = abs(last.s - before.s) / abs(before.q - last.q)
    return CrystalClass(n, abs(last.s - n), slope)


# ----------------------------------------------------------------------------
# rectangle scans


@dataclass(frozen=True)
class CandidateCell:
    re0: float
    re1: float
    im0: float
    im1: float

    @property
    def centre(self) -> complex:
        return complex((self.re0 + self.re1) / 2, (self.im0 + self.im1) / 2)

    def contains(self, s: complex) -> bool:
        return self.re0 <= s.real <= self.re1 and self.im0 <= s.imag <= self.im1


@dataclass(frozen=True)
class ScanField:
    re: np.ndarray
    im: np.ndarray
    log10_abs: np.ndarray  # shape (len(im), len(re)); NaN at pole nodes


def _rect_bounds(rect: Sequence[complex]):
    a, b = complex(rect[0]), complex(rect[1])
    return min(a.real, b.real), max(a.real, b.real), min(a.imag, b.imag), max(a.imag, b.imag)


def scan_rectangle(nu: int, q, rect: Sequence[complex], grid: tuple, emit=ScanMode.CANDIDATES, clip: bool = True):
    """Sample zeta_q^(nu) on an nx-by-ny node lattice over ``rect``.

    CANDIDATES returns the cells where both Re and Im change sign; FIELD
    returns log10|zeta|.  With ``clip`` the part with Re(s) >= 2 nu is dropped.
    """
    emit = ScanMode(emit)
    nx, ny = int(grid[0]), int(grid[1])
    if nx < 2 or ny < 2:
        raise ParamError("grid needs at least 2 nodes per side")
    x0, x1, y0, y1 = _rect_bounds(rect)
    if not (x0 < x1 and y0 < y1):
        raise ParamError("degenerate rectangle")
    qp = as_qparam(q)
    wall = 2 * nu
    if clip and x1 >= wall:
        if x0 >= wall:
            warnings.warn(f"rectangle lies in the zero-free region Re(s) >= {wall}", ClippedRegion, stacklevel=2)
            if emit is ScanMode.CANDIDATES:
                return []
            return ScanField(np.array([]), np.linspace(y0, y1, ny), np.empty((ny, 0)))
        warnings.warn(f"clipping the rectangle to Re(s) < {wall}", ClippedRegion, stacklevel=2)
        step = (x1 - x0) / (nx - 1)
        keep = int(math.floor((wall - x0) / step - 1e-12)) + 1
        keep = min(keep, nx)
        x1 = x0 + step * (keep - 1)
        nx = keep
        if nx < 2:
            return [] if emit is ScanMode.CANDIDATES else ScanField(np.array([x0]), np.linspace(y0, y1, ny), np.full((ny, 1), np.nan))
    re = np.linspace(x0, x1, nx)
    im = np.linspace(y0, y1, ny)
    values = _eval_grid(nu, qp, re, im)
    if emit is ScanMode.FIELD:
        with np.errstate(divide="ignore", invalid="ignore"):
            field_ = np.log10(np.abs(values))
        return ScanField(re, im, field_)
    mask = _sign_cells(values)
    idx = [tuple(map(int, ij)) for ij in np.argwhere(mask)]
    if _touching(idx):
        warnings.warn("adjacent candidate cells: refine the grid", GridTooCoarse, stacklevel=2)
    return [CandidateCell(float(re[j]), float(re[j + 1]), float(im[i]), float(im[i + 1])) for i, j in idx]


def _touching(idx: Iterable[tuple]) -> bool:
    cells = set(idx)
    for i, j in cells:
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if (di or dj) and (i + di, j + dj) in cells:
                    return True
    return False


def field_minima(scan: ScanField, axis: str = "row") -> list:
    """Valleys of log10|zeta| along Im, as (re, im) pairs.

    ``axis='row'`` takes the minimum across each row (fixed Im) and keeps
    the rows where that profile has a local minimum, paired with the Re of
    the smallest node in the row.
    """
    f = scan.log10_abs
    if axis == "row":
        prof = np.nanmin(f, axis=1)
        out = []
        for i in range(1, len(prof) - 1):
            if prof[i] < prof[i - 1] and prof[i] <= prof[i + 1]:
                j = int(np.nanargmin(f[i]))
                out.append((float(scan.re[j]), float(scan.im[i])))
        return out
    raise ParamError(f"unknown axis {axis!r}")
