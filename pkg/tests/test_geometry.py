import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_regge.complex import LOCAL_EDGES, LOCAL_FACES
from cyclic_regge.errors import ArgumentError, DomainError
from cyclic_regge.geometry import (
    batch_dual_terms,
    cayley_menger,
    circumcenter,
    dihedral_angle,
    dihedral_angles,
    embed_tetra,
    face_angle,
    face_area,
    is_realizable,
    signed_height,
    t_type_dihedrals,
    tetra_volume,
)

from conftest import random_tetra_lengths

REGULAR = [1.0] * 6


def lengths_from_points(P):
    return np.array([np.linalg.norm(P[a] - P[b]) for a, b in LOCAL_EDGES])


def normal_dihedrals(P):
    """Dihedral angles from outward face normals of an embedded tetrahedron."""
    out = []
    for a, b in LOCAL_EDGES:
        c, d = (v for v in range(4) if v not in (a, b))
        axis = P[b] - P[a]
        axis /= np.linalg.norm(axis)

        def perp(x):
            w = P[x] - P[a]
            return w - np.dot(w, axis) * axis

        u, w = perp(c), perp(d)
        out.append(math.acos(np.clip(np.dot(u, w) / np.linalg.norm(u) / np.linalg.norm(w), -1, 1)))
    return np.array(out)


class TestCayleyMenger:
    def test_regular(self):
        # 288 * (sqrt(2)/12)^2 = 4
        assert cayley_menger(REGULAR) == pytest.approx(4.0, rel=1e-14)

    def test_flat(self):
        # points 0, 1, 2 on a line with a fourth at distance 1 from the middle one, coplanar
        P = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [1, 1, 0]], dtype=float)
        assert cayley_menger(lengths_from_points(P)) == pytest.approx(0.0, abs=1e-12)
        assert not is_realizable(lengths_from_points(P))

    def test_too_long_edge(self):
        L = [1, 1, 1, 1, 1, 2.0]
        assert cayley_menger(L) < 0
        # faces (0,2,3) and (1,2,3) have sides 1, 1, 2: no embedding exists
        with pytest.raises(DomainError):
            face_area(1, 1, 2.0)
        assert not is_realizable(L)


class TestVolume:
    def test_regular(self):
        assert tetra_volume(REGULAR) == pytest.approx(math.sqrt(2) / 12, rel=1e-14)
        assert tetra_volume(REGULAR) == pytest.approx(0.1178511302, abs=1e-10)

    @given(st.floats(0.1, 10.0))
    def test_scaling(self, s):
        assert tetra_volume([s] * 6) == pytest.approx(s**3 * math.sqrt(2) / 12, rel=1e-12)

    def test_against_embedding(self):
        L = [1, 1, 1, 1, 1, 1.2]
        P = embed_tetra(L)
        assert tetra_volume(L) == pytest.approx(abs(np.linalg.det(P[1:] - P[0])) / 6, rel=1e-12)

    def test_non_realizable(self):
        with pytest.raises(DomainError):
            tetra_volume([1, 1, 1, 1, 1, 2.0])

    def test_bad_input(self):
        with pytest.raises(ArgumentError):
            tetra_volume([1, 1, 1])
        with pytest.raises(ArgumentError):
            tetra_volume([1, 1, 1, 1, 1, -1])


class TestFaceAngleArea:
    def test_examples(self):
        assert face_angle(1, 1, 1) == pytest.approx(math.pi / 3, rel=1e-15)
        assert face_angle(math.sqrt(2), 1, 1) == pytest.approx(math.pi / 2, rel=1e-15)

    def test_law_of_sines(self):
        a, b, c = 1.5, 1.2, 1.1
        A, B, C = face_angle(a, b, c), face_angle(b, a, c), face_angle(c, a, b)
        assert a / math.sin(A) == pytest.approx(b / math.sin(B), rel=1e-12)
        assert a / math.sin(A) == pytest.approx(c / math.sin(C), rel=1e-12)
        assert A + B + C == pytest.approx(math.pi, rel=1e-14)

    def test_triangle_inequality(self):
        with pytest.raises(DomainError):
            face_angle(2, 1, 1)
        with pytest.raises(DomainError):
            face_area(3, 1, 1)

    def test_areas(self):
        assert face_area(1, 1, 1) == pytest.approx(math.sqrt(3) / 4, rel=1e-15)
        assert face_area(3, 4, 5) == pytest.approx(6.0, rel=1e-15)

    def test_area_vs_cross_product(self):
        a, b, c = 1.1, 1.2, 1.3
        # place side c on the x-axis
        x = (b * b + c * c - a * a) / (2 * c)
        P = np.array([[0, 0, 0], [c, 0, 0], [x, math.sqrt(b * b - x * x), 0]])
        cross = 0.5 * np.linalg.norm(np.cross(P[1] - P[0], P[2] - P[0]))
        assert face_area(a, b, c) == pytest.approx(cross, rel=1e-12)


class TestDihedral:
    def test_regular(self):
        for e in LOCAL_EDGES:
            assert dihedral_angle(REGULAR, e) == pytest.approx(math.acos(1 / 3), rel=1e-14)
        assert dihedral_angle(REGULAR, (0, 1)) == pytest.approx(1.2309594173, abs=1e-10)
        P = embed_tetra(REGULAR)
        np.testing.assert_allclose(normal_dihedrals(P), math.acos(1 / 3), rtol=1e-12)

    def test_matches_normals_random(self, rng):
        worst = 0.0
        for _ in range(1000):
            L = random_tetra_lengths(rng)
            worst = max(worst, np.max(np.abs(dihedral_angles(L) - normal_dihedrals(embed_tetra(L)))))
        assert worst < 1e-10

    def test_t_type_equal_lengths_equal_angles(self, rng):
        count = 0
        while count < 300:
            a, b, c, d = rng.uniform(0.5, 1.5, 4)
            L = [a, b, c, c, d, a]  # i, j, k, l = 0, 1, 2, 3
            if not is_realizable(L):
                continue
            count += 1
            B = dihedral_angles(L)
            assert abs(B[2] - B[3]) < 1e-12  # il vs jk
            assert abs(B[0] - B[5]) < 1e-12  # ij vs kl
            il, jk = t_type_dihedrals(a, b, c, d)
            assert il == pytest.approx(B[2], abs=1e-12)
            assert jk == pytest.approx(B[3], abs=1e-12)

    def test_flattening_hinges(self):
        # square folded slightly along diagonal 02: the hinge angles at 02 and 13 approach pi
        for eps in (1e-2, 1e-3):
            P = np.array([[1, 0, 0], [0, 1, eps], [-1, 0, 0], [0, -1, eps]], dtype=float)
            B = dihedral_angles(lengths_from_points(P))
            assert B[LOCAL_EDGES.index((0, 2))] > math.pi - 10 * eps
            assert B[LOCAL_EDGES.index((1, 3))] > math.pi - 10 * eps

    def test_bad_edge(self):
        with pytest.raises(ArgumentError):
            dihedral_angle(REGULAR, (0, 0))
        with pytest.raises(DomainError):
            dihedral_angle([1, 1, 1, 1, 1, 2.0], (0, 1))


class TestEmbed:
    def test_regular_frame(self):
        P = embed_tetra(REGULAR)
        np.testing.assert_allclose(P[0], 0, atol=0)
        np.testing.assert_allclose(P[1], [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(P[2], [0.5, math.sqrt(3) / 2, 0], atol=1e-15)
        assert P[3, 2] > 0

    def test_round_trip(self, rng):
        for _ in range(200):
            L = random_tetra_lengths(rng)
            P = embed_tetra(L)
            np.testing.assert_allclose(lengths_from_points(P), L, rtol=1e-12)
            assert np.linalg.det(P[1:] - P[0]) > 0
            assert P[2, 1] > 0 and P[3, 2] > 0

    @given(st.floats(0.05, 20.0))
    def test_scaling(self, s):
        L = np.array([1, 1.1, 1.2, 1.05, 0.95, 1.15])
        np.testing.assert_allclose(embed_tetra(s * L), s * embed_tetra(L), rtol=1e-12, atol=1e-13 * s)


class TestCircumcenter:
    def test_triangle(self):
        P = np.array([[0, 0, 0], [1, 0, 0], [0.5, math.sqrt(3) / 2, 0]])
        c = circumcenter(P)
        np.testing.assert_allclose(c, P.mean(axis=0), atol=1e-15)
        assert np.linalg.norm(P[0] - c) == pytest.approx(1 / math.sqrt(3), rel=1e-14)

    def test_regular_tetra(self):
        P = embed_tetra(REGULAR)
        c = circumcenter(P)
        np.testing.assert_allclose(c, P.mean(axis=0), atol=1e-15)
        assert np.linalg.norm(P[3] - c) == pytest.approx(math.sqrt(3 / 8), rel=1e-14)

    def test_segment(self):
        np.testing.assert_allclose(circumcenter([[0, 0, 0], [2, 0, 0]]), [1, 0, 0])

    def test_equidistance_random(self, rng):
        for _ in range(100):
            P = embed_tetra(random_tetra_lengths(rng))
            for k in (2, 3, 4):
                c = circumcenter(P[:k])
                r = np.linalg.norm(P[:k] - c, axis=1)
                assert np.ptp(r) < 1e-10 * r.max()

    def test_dependent(self):
        with pytest.raises(DomainError):
            circumcenter([[0, 0, 0], [1, 0, 0], [2, 0, 0]])
        with pytest.raises(ArgumentError):
            circumcenter([[0, 0, 0]])


class TestSignedHeight:
    def test_regular(self):
        for f in LOCAL_FACES:
            assert signed_height(REGULAR, f) == pytest.approx(math.sqrt(1 / 24), rel=1e-12)
        assert signed_height(REGULAR, (0, 1, 2)) == pytest.approx(0.2041241, abs=1e-7)

    def test_sliver_negative(self):
        # apex barely above the base, inside its circumcircle: circumcenter lies below the base
        P = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.3, 0.3, 0.05]])
        L = lengths_from_points(P)
        h = signed_height(L, (0, 1, 2))
        assert h < 0
        # half-space check directly on P
        A = P[1:] - P[0]
        c = np.linalg.solve(2 * A, np.sum(A * A, axis=1))
        assert c[2] < 0 and P[3, 2] > 0
        assert abs(h) == pytest.approx(abs(c[2]), rel=1e-9)

    def test_dual_identity(self, rng):
        for _ in range(300):
            L = random_tetra_lengths(rng, 0.3, 1.7)
            total = sum(
                signed_height(L, f) * face_area(*(L[LOCAL_EDGES.index(p)] for p in itertools.combinations(f, 2)))
                for f in LOCAL_FACES
            )
            assert total == pytest.approx(3 * tetra_volume(L), rel=1e-10)

    def test_batch_matches_scalar(self, rng):
        Ls = np.array([random_tetra_lengths(rng) for _ in range(50)])
        vols, hA = batch_dual_terms(Ls)
        for L, v, row in zip(Ls, vols, hA):
            assert v == pytest.approx(tetra_volume(L), rel=1e-12)
            for k, f in enumerate(LOCAL_FACES):
                area = face_area(*(L[LOCAL_EDGES.index(p)] for p in itertools.combinations(f, 2)))
                assert row[k] == pytest.approx(signed_height(L, f) * area, rel=1e-9, abs=1e-13)

    def test_bad_face(self):
        with pytest.raises(ArgumentError):
            signed_height(REGULAR, (0, 1))


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(0.8, 1.2), min_size=6, max_size=6),
    st.floats(0.01, 100.0),
)
def test_homogeneity(L, s):
    L = np.array(L)
    if not is_realizable(L):
        return
    sL = s * L
    np.testing.assert_allclose(dihedral_angles(sL), dihedral_angles(L), rtol=1e-10)
    assert tetra_volume(sL) == pytest.approx(s**3 * tetra_volume(L), rel=1e-10)
    assert face_area(*sL[[0, 1, 3]]) == pytest.approx(s**2 * face_area(*L[[0, 1, 3]]), rel=1e-10)
    assert signed_height(sL, (0, 1, 2)) == pytest.approx(s * signed_height(L, (0, 1, 2)), rel=1e-8, abs=1e-12 * s)
