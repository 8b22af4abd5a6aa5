"""Perpendicular-bisector conformal classes and critical-point search.

A conformal class is fixed by base lengths ``L_e``; a vertex function ``f``
picks the metric ``l_uw = exp((f_u + f_w) / 2) * L_uw``.  Constant scalar
curvature metrics are critical points of LEHR or VEHR along such variations.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .complex import Complex
from .curvature import CurvatureReport, Metric, fmt, report
from .errors import ArgumentError, DomainError, NumericalError

__all__ = [
    "AdmissibilityResult",
    "ConformalData",
    "CriticalPointResult",
    "conformal_lengths",
    "cyclic_admissibility",
    "find_critical_point",
    "functional",
    "grad_lehr_fd",
    "grad_vehr_fd",
]

TARGETS = ("lehr", "vehr")


@dataclass(frozen=True, eq=False)
class ConformalData:
    complex: Complex
    base: np.ndarray
    f: np.ndarray = None

    def __post_init__(self):
        base = np.array(self.base, dtype=float)
        if base.shape != (len(self.complex.edges),):
            raise ArgumentError(f"base needs {len(self.complex.edges)} lengths, got {base.shape}")
        if np.any(base <= 0) or not np.all(np.isfinite(base)):
            raise ArgumentError("base lengths must be positive and finite")
        f = np.zeros(self.complex.n) if self.f is None else np.array(self.f, dtype=float)
        if f.shape != (self.complex.n,):
            raise ArgumentError(f"f needs {self.complex.n} values, got {f.shape}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "f", f)

    def with_f(self, f) -> ConformalData:
        return ConformalData(self.complex, self.base, f)

    def lengths(self) -> np.ndarray:
        E = np.asarray(self.complex.edges)
        return np.exp(0.5 * (self.f[E[:, 0]] + self.f[E[:, 1]])) * self.base


def conformal_lengths(cd: ConformalData, check: bool = True) -> Metric:
    g = Metric(cd.complex, cd.lengths())
    if check:
        g.require_realizable()
    return g


def functional(c: Complex, cd: ConformalData, target: str = "lehr") -> float:
    if target not in TARGETS:
        raise ArgumentError(f"target must be one of {TARGETS}, got {target!r}")
    r = report(c, conformal_lengths(cd), threads=1)
    return r.lehr if target == "lehr" else r.vehr


def _grad_fd(c, cd, target, h, richardson=True):
    n = c.n

    def central(step):
        g = np.empty(n)
        for v in range(n):
            e = np.zeros(n)
            e[v] = step
            try:
                fp = functional(c, cd.with_f(cd.f + e), target)
                fm = functional(c, cd.with_f(cd.f - e), target)
            except DomainError as exc:
                raise DomainError(
                    f"finite-difference stencil at vertex {v} leaves the realizable region",
                    where=exc.where,
                ) from exc
            g[v] = (fp - fm) / (2 * step)
        return g

    g = central(h)
    if richardson:
        g2 = central(2 * h)
        # central differences are O(h^2): D(h) - D(2h) ~ -3 * error(h)
        err = np.max(np.abs(g - g2)) / 3.0
        if err > 1e-4 * (1.0 + np.max(np.abs(g))):
            raise NumericalError(f"finite-difference gradient unstable (Richardson error {err:.3e})")
    return g


def grad_lehr_fd(c: Complex, cd: ConformalData, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of LEHR with respect to f."""
    return _grad_fd(c, cd, "lehr", h)


def grad_vehr_fd(c: Complex, cd: ConformalData, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of VEHR with respect to f."""
    return _grad_fd(c, cd, "vehr", h)


def project(v: np.ndarray) -> np.ndarray:
    """Remove the constant (uniform scaling) component."""
    return v - v.mean()


@dataclass
class TraceRow:
    iteration: int
    value: float
    grad_norm: float
    step: float
    min_cm: float


@dataclass
class CriticalPointResult:
    f: np.ndarray
    converged: bool
    status: str
    iterations: int
    report: CurvatureReport
    trace: list[TraceRow] = field(default_factory=list)

    def trace_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "value", "grad_norm", "step", "min_cm"])
        for row in self.trace:
            w.writerow([row.iteration, fmt(row.value), fmt(row.grad_norm), fmt(row.step), fmt(row.min_cm)])
        return buf.getvalue()


def find_critical_point(
    c: Complex,
    base,
    f0=None,
    target: str = "lehr",
    tol: float = 1e-8,
    max_iter: int = 500,
    h: float = 1e-5,
    alpha0: float = 1.0,
    armijo: float = 1e-4,
    shrink: float = 0.5,
    min_step: float = 1e-14,
) -> CriticalPointResult:
    """Gradient descent with Armijo backtracking on LEHR or VEHR over sum(f) = 0.

    The first trial step of each line search is the Barzilai-Borwein step
    from the previous iteration.  Trial points whose metric is not realizable
    are rejected like points with insufficient decrease.  ``status`` is one of

    ``"converged"``  projected gradient norm below ``tol``;
    ``"max_iter"``   iteration budget exhausted;
    ``"boundary"``   every trial step left the realizable region;
    ``"stalled"``    no step gave sufficient decrease (round-off floor).

    On failure ``f`` is the last accepted (feasible) point.  ``h`` defaults
    larger than for :func:`grad_lehr_fd` to keep finite-difference noise
    well below ``tol``.
    """
    if target not in TARGETS:
        raise ArgumentError(f"target must be one of {TARGETS}, got {target!r}")
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    cd = ConformalData(c, base, f0)
    f = project(cd.f)
    g_metric = conformal_lengths(cd.with_f(f))

    def value(x):
        try:
            return functional(c, cd.with_f(x), target)
        except DomainError:
            return math.inf

    F = value(f)
    trace = []
    alpha = alpha0
    status = "max_iter"
    it = 0
    prev = None
    while True:
        grad = project(_grad_fd(c, cd.with_f(f), target, h))
        gnorm = float(np.linalg.norm(grad))
        trace.append(TraceRow(it, F, gnorm, 0.0 if it == 0 else alpha, g_metric.min_cayley_menger()))
        if gnorm < tol:
            status = "converged"
            break
        if it >= max_iter:
            break
        step = alpha
        if prev is not None:
            s_vec, y_vec = f - prev[0], grad - prev[1]
            sy = float(s_vec @ y_vec)
            if sy > 0:
                step = float(s_vec @ s_vec) / sy
        infeasible = False
        while step >= min_step:
            trial = f - step * grad
            Ft = value(trial)
            infeasible = math.isinf(Ft)
            if Ft <= F - armijo * step * gnorm**2:
                break
            step *= shrink
        else:
            status = "boundary" if infeasible else "stalled"
            break
        alpha = step
        prev = (f, grad)
        f, F = project(trial), Ft
        g_metric = conformal_lengths(cd.with_f(f))
        it += 1

    final = report(c, conformal_lengths(cd.with_f(f)), threads=1)
    return CriticalPointResult(f, status == "converged", status, it, final, trace)


@dataclass
class AdmissibilityResult:
    admissible: bool
    residual: float
    f: np.ndarray | None
    levels: np.ndarray | None

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "residual": self.residual,
            "f": None if self.f is None else [float(x) for x in self.f],
            "levels": None if self.levels is None else [float(x) for x in self.levels],
        }


def admissibility_system(c: Complex, base) -> tuple[np.ndarray, np.ndarray]:
    """Linear system in (f_0..f_{n-1}, mu_1..mu_{m+1}) plus the gauge row.

    Edge rows encode (f_i + f_j) / 2 - mu_{D_ij} = -log L_ij.
    """
    base = np.asarray(base, dtype=float)
    n, k = c.n, c.m + 1
    E = np.asarray(c.edges)
    A = np.zeros((len(E) + 1, n + k))
    rows = np.arange(len(E))
    A[rows, E[:, 0]] += 0.5
    A[rows, E[:, 1]] += 0.5
    A[rows, n + c.distances - 1] = -1.0
    A[-1, :n] = 1.0
    b = np.concatenate([-np.log(base), [0.0]])
    return A, b


def cyclic_admissibility(c: Complex, base, threshold: float = 1e-9) -> AdmissibilityResult:
    """Does the conformal class of ``base`` contain a cyclic length metric?

    Solved as least squares on the log-linear system; the residual is the
    largest equation mismatch.  When admissible, ``f`` is a witness with zero
    mean and ``levels`` the resulting L_1 .. L_{m+1}.
    """
    base = np.asarray(base, dtype=float)
    if base.shape != (len(c.edges),) or np.any(base <= 0):
        raise ArgumentError("base lengths must be positive, one per edge")
    A, b = admissibility_system(c, base)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ x - b)))
    if residual < threshold:
        return AdmissibilityResult(True, residual, x[: c.n], np.exp(x[c.n :]))
    return AdmissibilityResult(False, residual, None, None)
