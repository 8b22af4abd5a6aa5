"""Regge curvatures and the normalized Einstein-Hilbert-Regge functionals.

Given a :class:`~cyclic_regge.complex.Complex` and an edge-length vector this
module computes edge curvatures ``K_e = (2*pi - sum of dihedral angles) * l_e``,
vertex curvatures ``K_v = 1/2 sum_{e > v} K_e``, the length and volume
normalizations and the per-vertex shares ``L_v`` and ``V_v`` used by the
constant scalar curvature equations.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .complex import LOCAL_EDGES, LOCAL_FACES, Complex, classify_tetra
from .errors import ArgumentError, DomainError
from .geometry import (
    batch_cayley_menger,
    batch_dihedral_angles,
    batch_dual_terms,
    batch_realizable,
    dihedral_angles,
)

__all__ = [
    "CSCVerdict",
    "CurvatureReport",
    "Metric",
    "check_csc",
    "cyclic_metric",
    "edge_curvature",
    "report",
    "vertex_curvature",
]

TWO_PI = 2.0 * math.pi


def default_threads() -> int:
    """Worker count from ``REGGE_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("REGGE_THREADS", "0").strip() or "0"
    try:
        val = int(raw)
    except ValueError:
        raise ArgumentError(f"REGGE_THREADS must be an integer, got {raw!r}") from None
    if val < 0:
        raise ArgumentError(f"REGGE_THREADS must be >= 0, got {val}")
    return val or (os.cpu_count() or 1)


@dataclass(frozen=True, eq=False)
class Metric:
    """Edge lengths on a complex, indexed like ``complex.edges``."""

    complex: Complex
    lengths: np.ndarray

    def __post_init__(self):
        arr = np.array(self.lengths, dtype=float)
        if arr.shape != (len(self.complex.edges),):
            raise ArgumentError(
                f"expected {len(self.complex.edges)} edge lengths, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ArgumentError("edge lengths must be positive and finite")
        arr.setflags(write=False)
        object.__setattr__(self, "lengths", arr)

    @cached_property
    def tetra_lengths(self) -> np.ndarray:
        return self.lengths[self.complex.tet_edges]

    @cached_property
    def realizable_mask(self) -> np.ndarray:
        return batch_realizable(self.tetra_lengths)

    @property
    def realizable(self) -> bool:
        return bool(np.all(self.realizable_mask))

    def bad_tetrahedra(self) -> list[tuple[int, ...]]:
        return [self.complex.tetrahedra[i] for i in np.flatnonzero(~self.realizable_mask)]

    def require_realizable(self) -> None:
        bad = self.bad_tetrahedra()
        if bad:
            raise DomainError(
                f"{len(bad)} tetrahedra are degenerate or non-realizable, first {bad[0]}",
                where=bad,
            )

    def min_cayley_menger(self) -> float:
        """Smallest scale-normalized Cayley-Menger determinant over all tetrahedra."""
        L = self.tetra_lengths
        return float(np.min(batch_cayley_menger(L) / np.mean(L, axis=1) ** 6))

    def scaled(self, s: float) -> Metric:
        return Metric(self.complex, s * self.lengths)


def cyclic_metric(c: Complex, levels) -> Metric:
    """Metric with ``l_ij = levels[D_ij - 1]`` (levels holds L_1 .. L_{m+1})."""
    levels = np.asarray(levels, dtype=float)
    if levels.shape != (c.m + 1,):
        raise ArgumentError(f"n={c.n} needs m+1={c.m + 1} levels, got {levels.shape}")
    if np.any(levels <= 0) or not np.all(np.isfinite(levels)):
        raise ArgumentError("levels must be positive and finite")
    g = Metric(c, levels[c.distances - 1])
    bad = g.bad_tetrahedra()
    if bad:
        kinds = sorted({str(classify_tetra(c, t)) for t in bad})
        raise DomainError(
            f"levels {levels.tolist()} are not realizable; failing types: {', '.join(kinds)}",
            where=kinds,
        )
    return g


def edge_curvature(c: Complex, g: Metric, e) -> float:
    """K_e for one edge, given as an index or a vertex pair."""
    ei = c.edge_id(*e) if isinstance(e, tuple) else int(e)
    u, v = c.edges[ei]
    total = 0.0
    for ti in c.edge_tetra_incidence[ei]:
        tet = c.tetrahedra[ti]
        L = g.tetra_lengths[ti]
        if not g.realizable_mask[ti]:
            raise DomainError(f"tetrahedron {tet} is degenerate", where=[tet])
        local = (tet.index(u), tet.index(v))
        total += dihedral_angles(L)[_local_col(local)]
    return (TWO_PI - total) * float(g.lengths[ei])


def _local_col(pair):
    a, b = sorted(pair)
    return LOCAL_EDGES.index((a, b))


def vertex_curvature(c: Complex, g: Metric, v: int) -> float:
    return 0.5 * sum(edge_curvature(c, g, ei) for ei, e in enumerate(c.edges) if v in e)


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    n: int
    edges: tuple
    distances: np.ndarray
    lengths: np.ndarray
    betas: np.ndarray  # (T, 6) dihedral angles in LOCAL_EDGES order
    K_e: np.ndarray
    K_v: np.ndarray
    L_v: np.ndarray
    V_v: np.ndarray
    tetra_volumes: np.ndarray
    total_length: float
    total_volume: float
    ehr: float

    @property
    def lehr(self) -> float:
        return self.ehr / self.total_length

    @property
    def vehr(self) -> float:
        return self.ehr / self.total_volume ** (1.0 / 3.0)

    @property
    def lambda_L(self) -> float:
        return self.ehr / self.total_length

    @property
    def lambda_V(self) -> float:
        return self.ehr / (3.0 * self.total_volume)

    @property
    def lcsc_residual(self) -> np.ndarray:
        return self.K_v - self.lambda_L * self.L_v

    @property
    def vcsc_residual(self) -> np.ndarray:
        return self.K_v - self.lambda_V * self.V_v

    def to_dict(self) -> dict:
        verdict = check_csc(self)
        return {
            "n": self.n,
            "totals": {
                "total_length": self.total_length,
                "total_volume": self.total_volume,
                "ehr": self.ehr,
                "lehr": self.lehr,
                "vehr": self.vehr,
                "lambda_L": self.lambda_L,
                "lambda_V": self.lambda_V,
            },
            "csc": verdict.to_dict(),
            "vertices": [
                {
                    "v": v,
                    "K_v": float(self.K_v[v]),
                    "L_v": float(self.L_v[v]),
                    "V_v": float(self.V_v[v]),
                    "lcsc_residual": float(self.lcsc_residual[v]),
                    "vcsc_residual": float(self.vcsc_residual[v]),
                }
                for v in range(self.n)
            ],
            "edges": [
                {
                    "e": list(e),
                    "D": int(self.distances[i]),
                    "length": float(self.lengths[i]),
                    "K_e": float(self.K_e[i]),
                }
                for i, e in enumerate(self.edges)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """Vertex table, a blank line, then the edge table."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["v", "K_v", "L_v", "V_v", "lcsc_residual", "vcsc_residual"])
        lr, vr = self.lcsc_residual, self.vcsc_residual
        for v in range(self.n):
            w.writerow([v] + [fmt(x) for x in (self.K_v[v], self.L_v[v], self.V_v[v], lr[v], vr[v])])
        w.writerow([])
        w.writerow(["e", "D_ij", "length", "K_e"])
        for i, (a, b) in enumerate(self.edges):
            w.writerow([f"{a}-{b}", int(self.distances[i]), fmt(self.lengths[i]), fmt(self.K_e[i])])
        return buf.getvalue()


def fmt(x) -> str:
    return format(float(x), ".17g")


def _tetra_terms(L):
    return batch_dihedral_angles(L), *batch_dual_terms(L)


def report(c: Complex, g: Metric, threads: int | None = None) -> CurvatureReport:
    """Every curvature quantity of ``(c, g)`` in one pass over the tetrahedra.

    Per-tetrahedron geometry may be split over threads; the results are
    concatenated in canonical order before any accumulation, so the output
    does not depend on the worker count.
    """
    if g.complex is not c and g.complex.tetrahedra != c.tetrahedra:
        raise ArgumentError("metric belongs to a different complex")
    g.require_realizable()
    L = g.tetra_lengths
    T = len(L)
    workers = default_threads() if threads is None else max(1, int(threads))
    if workers > 1 and T >= 512:
        chunks = np.array_split(np.arange(T), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda idx: _tetra_terms(L[idx]), chunks))
        betas = np.concatenate([p[0] for p in parts])
        vols = np.concatenate([p[1] for p in parts])
        hA = np.concatenate([p[2] for p in parts])
    else:
        betas, vols, hA = _tetra_terms(L)

    n_edges = len(c.edges)
    beta_sum = np.zeros(n_edges)
    np.add.at(beta_sum, c.tet_edges.ravel(), betas.ravel())
    K_e = (TWO_PI - beta_sum) * g.lengths

    edges = np.array(c.edges)
    K_v = np.zeros(c.n)
    L_v = np.zeros(c.n)
    np.add.at(K_v, edges.ravel(), np.repeat(0.5 * K_e, 2))
    np.add.at(L_v, edges.ravel(), np.repeat(0.5 * g.lengths, 2))

    # V_v = 1/3 * sum over tetrahedra t > v and faces f of t containing v of h_{f<t} A_f
    V_v = np.zeros(c.n)
    tets = c.tet_array
    for k, face in enumerate(LOCAL_FACES):
        share = hA[:, k] / 3.0
        for a in face:
            np.add.at(V_v, tets[:, a], share)

    return CurvatureReport(
        n=c.n,
        edges=c.edges,
        distances=c.distances,
        lengths=g.lengths,
        betas=betas,
        K_e=K_e,
        K_v=K_v,
        L_v=L_v,
        V_v=V_v,
        tetra_volumes=vols,
        total_length=math.fsum(g.lengths),
        total_volume=math.fsum(vols),
        ehr=math.fsum(K_e),
    )


@dataclass(frozen=True)
class CSCVerdict:
    lcsc: bool
    vcsc: bool
    max_lcsc_residual: float
    max_vcsc_residual: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "lcsc": self.lcsc,
            "vcsc": self.vcsc,
            "max_lcsc_residual": self.max_lcsc_residual,
            "max_vcsc_residual": self.max_vcsc_residual,
            "threshold": self.threshold,
        }


def check_csc(r: CurvatureReport, tol: float = 1e-9) -> CSCVerdict:
    """LCSC / VCSC test with threshold ``tol * (|EHR| / n + 1)``."""
    if tol <= 0:
        raise ArgumentError(f"tolerance must be positive, got {tol}")
    thresh = tol * (abs(r.ehr) / r.n + 1.0)
    lmax = float(np.max(np.abs(r.lcsc_residual)))
    vmax = float(np.max(np.abs(r.vcsc_residual)))
    return CSCVerdict(lmax <= thresh, vmax <= thresh, lmax, vmax, thresh)
