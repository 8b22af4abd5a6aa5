"""Euclidean geometry of a single tetrahedron given its six edge lengths.

Lengths are passed as a length-6 sequence in the local edge order
``(01, 02, 03, 12, 13, 23)``.  The ``batch_*`` helpers take an array of shape
``(T, 6)`` and are what the curvature code uses; the scalar functions wrap
them and add argument checking.
"""
from __future__ import annotations

import numpy as np

from .complex import LOCAL_EDGES, LOCAL_FACES
from .errors import ArgumentError, DomainError, NumericalError

__all__ = [
    "cayley_menger",
    "circumcenter",
    "dihedral_angle",
    "dihedral_angles",
    "embed_tetra",
    "face_angle",
    "face_area",
    "is_realizable",
    "signed_height",
    "tetra_volume",
]

CM_RTOL = 1e-12
CLAMP_TOL = 1e-12

_EDGE_POS = {e: i for i, e in enumerate(LOCAL_EDGES)}
_EDGE_POS.update({(b, a): i for (a, b), i in list(_EDGE_POS.items())})


def _as_lengths(lengths) -> np.ndarray:
    arr = np.asarray(lengths, dtype=float)
    if arr.shape != (6,):
        raise ArgumentError(f"expected 6 edge lengths, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ArgumentError(f"edge lengths must be positive and finite: {arr}")
    return arr


def _safe_arccos(x):
    x = np.asarray(x, dtype=float)
    bad = np.abs(x) > 1 + CLAMP_TOL
    if np.any(bad):
        raise NumericalError(f"arccos argument out of range: {x[bad].ravel()[:3]}")
    return np.arccos(np.clip(x, -1.0, 1.0))


def _heron_sq16(a, b, c):
    """16 * area**2 of a triangle with sides a, b, c (negative if impossible)."""
    a2, b2, c2 = a * a, b * b, c * c
    return 2 * (a2 * b2 + a2 * c2 + b2 * c2) - (a2 * a2 + b2 * b2 + c2 * c2)


def _face_sides(L, face):
    i, j, k = face
    return L[..., _EDGE_POS[(j, k)]], L[..., _EDGE_POS[(i, k)]], L[..., _EDGE_POS[(i, j)]]


def batch_cayley_menger(L) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    sq = L**2
    M = np.zeros(L.shape[:-1] + (5, 5))
    M[..., 0, 1:] = 1.0
    M[..., 1:, 0] = 1.0
    for (a, b), col in _EDGE_POS.items():
        M[..., a + 1, b + 1] = sq[..., col]
    return np.linalg.det(M)


def batch_realizable(L) -> np.ndarray:
    """Boolean mask: every face passes Heron and the tetrahedron has positive volume."""
    L = np.asarray(L, dtype=float)
    ok = np.all(L > 0, axis=-1)
    scale = np.mean(L, axis=-1)
    for face in LOCAL_FACES:
        a, b, c = _face_sides(L, face)
        ok &= _heron_sq16(a, b, c) > CM_RTOL * scale**4
    ok &= batch_cayley_menger(L) > CM_RTOL * scale**6
    return ok


def cayley_menger(lengths) -> float:
    """Bordered Cayley-Menger determinant; equals 288 * volume**2."""
    return float(batch_cayley_menger(_as_lengths(lengths)))


def is_realizable(lengths) -> bool:
    return bool(batch_realizable(_as_lengths(lengths)))


def _require_realizable(L):
    if not is_realizable(L):
        raise DomainError(f"lengths {L.tolist()} do not span a Euclidean tetrahedron")


def tetra_volume(lengths) -> float:
    L = _as_lengths(lengths)
    _require_realizable(L)
    return float(np.sqrt(batch_cayley_menger(L) / 288.0))


def face_angle(a: float, b: float, c: float) -> float:
    """Angle opposite side ``a`` by the law of cosines."""
    if min(a, b, c) <= 0 or not (a < b + c and b < a + c and c < a + b):
        raise DomainError(f"sides ({a}, {b}, {c}) violate the strict triangle inequality")
    return float(_safe_arccos((b * b + c * c - a * a) / (2 * b * c)))


def face_area(a: float, b: float, c: float) -> float:
    s16 = _heron_sq16(a, b, c)
    if min(a, b, c) <= 0 or s16 <= 0:
        raise DomainError(f"sides ({a}, {b}, {c}) do not form a triangle")
    return float(np.sqrt(s16) / 4.0)


def _cos_face_angle(opp, s1, s2):
    return (s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2)


def batch_dihedral_angles(L) -> np.ndarray:
    """Dihedral angles at the six local edges via the spherical law of cosines.

    For edge (a, b) the three face angles at vertex ``a`` are used:
    cos(beta) = (cos(gamma_cd) - cos(gamma_bc) cos(gamma_bd)) / (sin(gamma_bc) sin(gamma_bd)).
    """
    L = np.asarray(L, dtype=float)
    out = np.empty(L.shape)
    for col, (a, b) in enumerate(LOCAL_EDGES):
        c, d = (v for v in range(4) if v not in (a, b))
        ab, ac, ad = L[..., _EDGE_POS[(a, b)]], L[..., _EDGE_POS[(a, c)]], L[..., _EDGE_POS[(a, d)]]
        bc, bd, cd = L[..., _EDGE_POS[(b, c)]], L[..., _EDGE_POS[(b, d)]], L[..., _EDGE_POS[(c, d)]]
        cos_bc = _cos_face_angle(bc, ab, ac)
        cos_bd = _cos_face_angle(bd, ab, ad)
        cos_cd = _cos_face_angle(cd, ac, ad)
        sin_bc = np.sqrt(np.clip(1 - cos_bc**2, 0.0, None))
        sin_bd = np.sqrt(np.clip(1 - cos_bd**2, 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            out[..., col] = _safe_arccos((cos_cd - cos_bc * cos_bd) / (sin_bc * sin_bd))
    return out


def dihedral_angles(lengths) -> np.ndarray:
    L = _as_lengths(lengths)
    _require_realizable(L)
    return batch_dihedral_angles(L)


def dihedral_angle(lengths, edge) -> float:
    """Interior dihedral angle at a local edge such as ``(0, 1)``."""
    a, b = edge
    if (a, b) not in _EDGE_POS or a == b:
        raise ArgumentError(f"{edge!r} is not a local edge of a tetrahedron")
    return float(dihedral_angles(lengths)[_EDGE_POS[(a, b)]])


def batch_embed(L) -> np.ndarray:
    """Coordinates (T, 4, 3) in the frame of :func:`embed_tetra`."""
    L = np.asarray(L, dtype=float)
    l01, l02, l03, l12, l13, l23 = (L[..., i] for i in range(6))
    x2 = (l01**2 + l02**2 - l12**2) / (2 * l01)
    y2 = np.sqrt(np.clip(l02**2 - x2**2, 0.0, None))
    x3 = (l01**2 + l03**2 - l13**2) / (2 * l01)
    y3 = (x2**2 + y2**2 - 2 * x2 * x3 + l03**2 - l23**2) / (2 * y2)
    z3 = np.sqrt(np.clip(l03**2 - x3**2 - y3**2, 0.0, None))
    P = np.zeros(L.shape[:-1] + (4, 3))
    P[..., 1, 0] = l01
    P[..., 2, 0] = x2
    P[..., 2, 1] = y2
    P[..., 3, 0] = x3
    P[..., 3, 1] = y3
    P[..., 3, 2] = z3
    return P


def embed_tetra(lengths) -> np.ndarray:
    """Place a tetrahedron with vertex 0 at the origin, vertex 1 on +x,
    vertex 2 in the upper xy half-plane and vertex 3 above the xy-plane."""
    L = _as_lengths(lengths)
    _require_realizable(L)
    return batch_embed(L)


def circumcenter(points) -> np.ndarray:
    """Circumcenter of k+1 affinely independent points (k <= 3) in their span."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or not 2 <= len(P) <= 4:
        raise ArgumentError(f"need 2 to 4 points, got shape {P.shape}")
    A = P[1:] - P[0]
    G = A @ A.T
    norms = np.diag(G)
    if np.any(norms == 0) or np.linalg.det(G) <= 1e-12 * np.prod(norms):
        raise DomainError("points are affinely dependent")
    w = np.linalg.solve(2 * G, norms)
    return P[0] + w @ A


def batch_circumcenters(P) -> np.ndarray:
    """Circumcenters of (T, 4, 3) tetrahedra."""
    A = P[..., 1:, :] - P[..., :1, :]
    rhs = 0.5 * np.sum(A * A, axis=-1)
    return P[..., 0, :] + np.linalg.solve(A, rhs[..., None])[..., 0]


def batch_dual_terms(L):
    """Volumes (T,) and signed h_{f<t} * A_f for faces opposite each vertex (T, 4).

    The face circumcenter is the orthogonal projection of the tetrahedron's
    circumcenter onto the face plane, so h is the signed distance from the
    tetrahedron circumcenter to that plane, positive toward the opposite vertex.
    """
    P = batch_embed(L)
    C = batch_circumcenters(P)
    hA = np.empty(P.shape[:-2] + (4,))
    for k, (a, b, c) in enumerate(LOCAL_FACES):
        N = np.cross(P[..., b, :] - P[..., a, :], P[..., c, :] - P[..., a, :])
        side = np.sign(np.sum(N * (P[..., k, :] - P[..., a, :]), axis=-1))
        hA[..., k] = 0.5 * side * np.sum(N * (C - P[..., a, :]), axis=-1)
    vol = np.sqrt(np.clip(batch_cayley_menger(L), 0.0, None) / 288.0)
    return vol, hA


def signed_height(lengths, face) -> float:
    """Signed distance between the circumcenters of a face and of the tetrahedron.

    Positive when the tetrahedron's circumcenter is on the same side of the
    face plane as the opposite vertex.
    """
    face = tuple(sorted(face))
    if face not in LOCAL_FACES:
        raise ArgumentError(f"{face!r} is not a local face")
    P = embed_tetra(lengths)
    (opp,) = set(range(4)) - set(face)
    c_tet = circumcenter(P)
    c_face = circumcenter(P[list(face)])
    normal = np.cross(P[face[1]] - P[face[0]], P[face[2]] - P[face[0]])
    dist = float(np.linalg.norm(c_tet - c_face))
    same_side = np.dot(normal, c_tet - P[face[0]]) * np.dot(normal, P[opp] - P[face[0]])
    return dist if same_side >= 0 else -dist


def t_type_dihedrals(a: float, b: float, c: float, d: float) -> tuple[float, float]:
    """Closed forms for the dihedral angles at edges il and jk of a T_k tetrahedron.

    Labelling: l_ij = l_kl = a, l_ik = b, l_il = l_jk = c, l_jl = d.  The two
    expressions share a numerator and a product of face-area factors and differ
    only in the prefactor that cancels, which is why the angles agree.
    """
    a2, b2, c2, d2 = a * a, b * b, c * c, d * d
    num = a2 * a2 - (b2 - 2 * c2 + d2) * a2 - 3 * c2 * c2 + c2 * d2 + b2 * (c2 + d2)
    P = a2 * a2 - 2 * (b2 + c2) * a2 + (b2 - c2) ** 2
    Q = a2 * a2 - 2 * (c2 + d2) * a2 + (c2 - d2) ** 2
    beta_il = _safe_arccos(num / (4 * a * b * c2 * np.sqrt(P * Q / (16 * a2 * b2 * c2 * c2))))
    beta_jk = _safe_arccos(num / (4 * a * c2 * d * np.sqrt(P * Q / (16 * a2 * c2 * c2 * d2))))
    return float(beta_il), float(beta_jk)
