"""Combinatorics of the boundary complex of the cyclic 4-polytope C(n, 4).

Vertices are labelled ``0..n-1`` so that the distinguished Hamiltonian cycle
is ``(0, 1), (1, 2), ..., (n-1, 0)``.  A 4-subset is a facet exactly when it is
the union of two vertex-disjoint edges of that cycle; :func:`gale_facets_oracle`
checks this independently against the convex hull of points on the moment
curve.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ArgumentError, NumericalError

__all__ = [
    "Complex",
    "TetraType",
    "build_complex",
    "classify_tetra",
    "cyclic_distance",
    "gale_facets_oracle",
    "type_census",
    "vertex_star_census",
    "verify_dihedral_symmetry",
]

# Local edge order of a tetrahedron (a, b, c, d) -> lengths vector of size 6.
LOCAL_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# Face k is opposite local vertex k.
LOCAL_FACES = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))


def min_level(n: int) -> int:
    """The parameter m with n = 2m + 3 (odd) or n = 2m + 2 (even)."""
    return (n - 3) // 2 if n % 2 else (n - 2) // 2


def cyclic_distance(i: int, j: int, n: int) -> int:
    """Number of cycle edges on the shorter path between vertices i and j."""
    if not (0 <= i < n and 0 <= j < n):
        raise ArgumentError(f"vertex indices ({i}, {j}) out of range for n={n}")
    d = abs(i - j)
    return min(d, n - d)


@dataclass(frozen=True, order=True)
class TetraType:
    """Isometry class of a facet under any cyclic length metric.

    ``kind`` is ``"standard"`` (the T_k family, 1 <= k < m), ``"odd_max"``
    (T_m^o, odd n) or ``"even_max"`` (T_m^e, even n).
    """

    k: int
    kind: str = "standard"

    def __post_init__(self):
        if self.kind not in ("standard", "odd_max", "even_max"):
            raise ArgumentError(f"unknown tetrahedron kind {self.kind!r}")
        if self.k < 1:
            raise ArgumentError(f"type level must be >= 1, got {self.k}")

    def __str__(self):
        suffix = {"standard": "", "odd_max": "^o", "even_max": "^e"}[self.kind]
        return f"T_{self.k}{suffix}"

    def validate_for(self, n: int) -> None:
        m = min_level(n)
        if self.kind == "standard":
            ok = 1 <= self.k <= m - 1
        elif self.kind == "odd_max":
            ok = n % 2 == 1 and self.k == m
        else:
            ok = n % 2 == 0 and self.k == m
        if not ok:
            raise ArgumentError(f"type {self} does not occur for n={n}")

    def level_pattern(self, n: int) -> tuple[int, ...]:
        """Cyclic distances on LOCAL_EDGES for the labelling (i, j, k, l).

        ``ij`` and ``kl`` are the two cycle edges and ``ik`` spans the gap.
        """
        p = self.k
        if self.kind == "standard":
            # ij, ik, il, jk, jl, kl
            return (1, p, p + 1, p + 1, p + 2, 1)
        if self.kind == "odd_max":
            return (1, p, p + 1, p + 1, p + 1, 1)
        return (1, p, p + 1, p + 1, p, 1)


def types_for(n: int) -> list[TetraType]:
    m = min_level(n)
    out = [TetraType(k) for k in range(1, m)]
    out.append(TetraType(m, "odd_max" if n % 2 else "even_max"))
    return out


@dataclass(frozen=True)
class Complex:
    """The simplicial 3-sphere bounding C(n, 4).

    All simplex lists are tuples of sorted vertex tuples in lexicographic
    order, so two complexes with the same facets compare equal.
    """

    n: int
    tetrahedra: tuple[tuple[int, int, int, int], ...]
    edges: tuple[tuple[int, int], ...] = field(init=False)
    faces: tuple[tuple[int, int, int], ...] = field(init=False)

    def __post_init__(self):
        tets = tuple(sorted(tuple(sorted(t)) for t in self.tetrahedra))
        object.__setattr__(self, "tetrahedra", tets)
        edges = sorted({e for t in tets for e in itertools.combinations(t, 2)})
        faces = sorted({f for t in tets for f in itertools.combinations(t, 3)})
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "faces", tuple(faces))

    @property
    def m(self) -> int:
        return min_level(self.n)

    @property
    def parity(self) -> str:
        return "odd" if self.n % 2 else "even"

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def cycle(self) -> tuple[tuple[int, int], ...]:
        return tuple(tuple(sorted((i, (i + 1) % self.n))) for i in range(self.n))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    @cached_property
    def edge_tetra_incidence(self) -> tuple[tuple[int, ...], ...]:
        inc = [[] for _ in self.edges]
        for ti, t in enumerate(self.tetrahedra):
            for e in itertools.combinations(t, 2):
                inc[self.edge_index[e]].append(ti)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def face_tetra_incidence(self) -> dict[tuple[int, int, int], tuple[int, ...]]:
        inc = {f: [] for f in self.faces}
        for ti, t in enumerate(self.tetrahedra):
            for f in itertools.combinations(t, 3):
                inc[f].append(ti)
        return {f: tuple(x) for f, x in inc.items()}

    @cached_property
    def vertex_star(self) -> tuple[tuple[int, ...], ...]:
        star = [[] for _ in range(self.n)]
        for ti, t in enumerate(self.tetrahedra):
            for v in t:
                star[v].append(ti)
        return tuple(tuple(s) for s in star)

    @cached_property
    def distances(self) -> np.ndarray:
        """Cyclic distance D_ij of every edge, in edge order."""
        return np.array([cyclic_distance(u, v, self.n) for u, v in self.edges], dtype=int)

    @cached_property
    def tet_array(self) -> np.ndarray:
        return np.array(self.tetrahedra, dtype=int).reshape(-1, 4)

    @cached_property
    def tet_edges(self) -> np.ndarray:
        """(T, 6) global edge indices of each tetrahedron in LOCAL_EDGES order."""
        tets = self.tet_array
        out = np.empty((len(tets), 6), dtype=int)
        for col, (a, b) in enumerate(LOCAL_EDGES):
            out[:, col] = [self.edge_index[(int(u), int(v))] for u, v in tets[:, [a, b]]]
        return out

    @cached_property
    def types(self) -> tuple[TetraType, ...]:
        return tuple(classify_tetra(self, t) for t in self.tetrahedra)

    def to_document(self) -> dict:
        """Canonical JSON-compatible description (sorted, deterministic)."""
        census = type_census(self)
        return {
            "n": self.n,
            "m": self.m,
            "parity": self.parity,
            "counts": {
                "vertices": self.n,
                "edges": len(self.edges),
                "faces": len(self.faces),
                "tetrahedra": len(self.tetrahedra),
            },
            "edges": [list(e) for e in self.edges],
            "tetrahedra": [list(t) for t in self.tetrahedra],
            "types": [str(t) for t in self.types],
            "census": {str(k): v for k, v in sorted(census.items())},
            "dihedral_symmetric": verify_dihedral_symmetry(self),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_document(), indent=2, sort_keys=True)


def _cycle_pairs(n: int):
    """Unordered pairs of vertex-disjoint cycle edges, as (i, j) with i < j."""
    for i in range(n):
        for j in range(i + 1, n):
            a = {i, (i + 1) % n}
            b = {j, (j + 1) % n}
            if not a & b:
                yield i, j


def build_complex(n: int) -> Complex:
    if not isinstance(n, (int, np.integer)) or n < 5:
        raise ArgumentError(f"C(n, 4) needs n >= 5, got {n!r}")
    n = int(n)
    tets = {tuple(sorted((i, (i + 1) % n, j, (j + 1) % n))) for i, j in _cycle_pairs(n)}
    return Complex(n, tuple(tets))


def moment_curve(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.stack([t, t**2, t**3, t**4], axis=-1)


def gale_facets_oracle(n: int, params=None, rtol: float = 1e-9) -> list[tuple[int, ...]]:
    """Facets of conv{x(t_i)} found by brute force over all 4-subsets.

    A 4-subset is a facet when every remaining point lies strictly on one side
    of the hyperplane through it.  Sides are the signs of 5x5 determinants
    ``det[[x_a, 1], ..., [x_d, 1], [q, 1]]``, evaluated by Laplace expansion
    along the last row.
    """
    if n < 5:
        raise ArgumentError(f"C(n, 4) needs n >= 5, got {n}")
    t = np.arange(1, n + 1, dtype=float) if params is None else np.asarray(params, dtype=float)
    if t.shape != (n,):
        raise ArgumentError(f"expected {n} parameters, got shape {t.shape}")
    if np.any(np.diff(t) <= 0):
        raise ArgumentError("moment-curve parameters must be strictly increasing")

    # An increasing affine reparametrisation acts on the moment curve by an
    # affine map with positive determinant, so every side test is preserved.
    s = 2.0 * (t - t[0]) / (t[-1] - t[0]) - 1.0
    pts = np.hstack([moment_curve(s), np.ones((n, 1))])

    subsets = np.array(list(itertools.combinations(range(n), 4)))
    rows = pts[subsets]  # (S, 4, 5)
    # Cofactors along the appended fifth row give the hyperplane coefficients.
    cof = np.empty((len(subsets), 5))
    for c in range(5):
        minor = np.delete(rows, c, axis=2)
        cof[:, c] = (-1) ** (4 + c) * np.linalg.det(minor)

    dets = cof @ pts.T  # (S, n)
    scale = np.linalg.norm(cof, axis=1)[:, None] * np.linalg.norm(pts, axis=1)[None, :]
    normed = dets / scale
    member = np.zeros_like(normed, dtype=bool)
    np.put_along_axis(member, subsets, True, axis=1)

    facets = []
    for si, sub in enumerate(subsets):
        vals = normed[si, ~member[si]]
        if np.any(np.abs(vals) <= rtol):
            raise NumericalError(
                f"hyperplane through {tuple(sub)} is numerically degenerate "
                f"(min |normalized det| = {np.abs(vals).min():.3e})"
            )
        if np.all(vals > 0) or np.all(vals < 0):
            facets.append(tuple(int(x) for x in sub))
    return facets


def _decompose(tet, n):
    """All ways to write a 4-set as two disjoint cycle edges (u, u+1), (w, w+1)."""
    s = set(tet)
    starts = [v for v in tet if (v + 1) % n in s]
    out = []
    for u, w in itertools.combinations(starts, 2):
        if not {u, (u + 1) % n} & {w, (w + 1) % n}:
            out.append((u, w))
    return out


def classify_tetra(c: Complex, tet) -> TetraType:
    """Type of a facet from the gap between its two cycle edges.

    The result is cross-checked against the cyclic-distance pattern each type
    must carry; a mismatch indicates an indexing bug and raises.
    """
    tet = tuple(sorted(int(v) for v in tet))
    n = c.n
    pairs = _decompose(tet, n)
    if len(tet) != 4 or len(set(tet)) != 4 or not pairs:
        raise ArgumentError(f"{tet} is not a facet of the boundary of C({n}, 4)")
    m = c.m
    found = set()
    for u, w in pairs:
        gap_uw = (w - u - 2) % n  # vertices strictly between u+1 and w
        gap_wu = (u - w - 2) % n
        if gap_uw <= gap_wu:
            i, j, k, l = (u + 1) % n, u, w, (w + 1) % n
            p = gap_uw + 1
        else:
            i, j, k, l = (w + 1) % n, w, u, (u + 1) % n
            p = gap_wu + 1
        if p < m:
            tt = TetraType(p)
        elif p == m:
            tt = TetraType(m, "odd_max" if n % 2 else "even_max")
        else:
            raise ArgumentError(f"gap {p} exceeds m={m} for {tet}")
        labelled = (i, j, k, l)
        got = tuple(cyclic_distance(labelled[a], labelled[b], n) for a, b in LOCAL_EDGES)
        if got != tt.level_pattern(n):
            raise AssertionError(
                f"distance pattern {got} of {tet} does not match {tt} ({tt.level_pattern(n)})"
            )
        found.add(tt)
    if len(found) != 1:
        raise AssertionError(f"{tet} decomposes inconsistently: {found}")
    return found.pop()


def labelled_vertices(c: Complex, tet) -> tuple[int, int, int, int]:
    """Vertices of a facet ordered (i, j, k, l) so LOCAL_EDGES match level_pattern."""
    n = c.n
    (u, w), *_ = _decompose(tuple(sorted(tet)), n)
    if (w - u - 2) % n <= (u - w - 2) % n:
        return (u + 1) % n, u, w, (w + 1) % n
    return (w + 1) % n, w, u, (u + 1) % n


def type_census(c: Complex) -> dict[TetraType, int]:
    return dict(Counter(c.types))


def vertex_star_census(c: Complex, v: int) -> dict[TetraType, int]:
    if not 0 <= v < c.n:
        raise ArgumentError(f"vertex {v} out of range for n={c.n}")
    return dict(Counter(c.types[ti] for ti in c.vertex_star[v]))


def verify_dihedral_symmetry(c: Complex) -> bool:
    """True iff rotation i -> i+1 and reflection i -> -i both preserve the facets."""
    n = c.n
    tets = set(c.tetrahedra)
    for g in (lambda i: (i + 1) % n, lambda i: (-i) % n):
        image = {tuple(sorted(g(v) for v in t)) for t in tets}
        if image != tets:
            return False
    return True
