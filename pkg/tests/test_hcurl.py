import numpy as np
import pytest
from numpy.testing import assert_allclose

from hpdual import audit, h1, hcurl
from hpdual.biorth import assemble_gram, sparsity_pattern
from hpdual.family import ShapeIndex
from oracles import (
    cartesian_gram, fd_curl, fd_gradient, random_interior_points, rodrigues_jacobi,
)

ELEMENTS = ("quad", "tri", "tet")


def S(element, tag, *ind):
    return ShapeIndex(element, tag, tuple(ind))


def interior_of(element, p, tag):
    return [S(element, tag, *ind) for ind in hcurl._interior(element, p)]


class TestIndexSets:
    @pytest.mark.parametrize("p", [2, 3, 6])
    def test_counts(self, p):
        n = p - 1
        assert len(hcurl.primal_indices("quad", p)) == 2 * n * n + 2 * n
        ntri = (p - 1) * (p - 2) // 2
        assert len(hcurl.primal_indices("tri", p)) == 2 * ntri + (p - 1)
        ntet = len(h1.h1_indices("tet", p))
        nedge = (p - 1) * (p - 2) // 2
        assert len(hcurl.primal_indices("tet", p)) == 3 * ntet + nedge

    @pytest.mark.parametrize("element", ELEMENTS)
    def test_square_aux_system(self, element):
        for p in (2, 4, 7):
            assert len(hcurl.aux_indices(element, p)) == len(hcurl.primal_indices(element, p))
            assert len(hcurl.dual_aux_indices(element, p)) == len(hcurl.aux_indices(element, p))

    def test_quad_edge_layout(self):
        edge = [i for i in hcurl.primal_indices("quad", 4) if i.tag == "III"]
        assert [i.indices for i in edge] == [(1, 2), (1, 3), (1, 4), (2, 1), (3, 1), (4, 1)]

    def test_hex_rejected(self):
        with pytest.raises(ValueError):
            hcurl.primal_indices("hex", 4)

    @pytest.mark.parametrize("bad", [S("tri", "III", 2, 1), S("tri", "I", 1, 1),
                                     S("tet", "IV", 2, 1, 1), S("quad", "III", 2, 2),
                                     S("tri", "auxIII", 2, 1)])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            hcurl.hcurl_primal_eval(bad, np.zeros(3 if bad.element == "tet" else 2))


class TestPrimalExamples:
    def test_quad_type_one_centre(self):
        assert_allclose(hcurl.hcurl_primal_eval(S("quad", "I", 2, 2), [0.0, 0.0]), [0.0, 0.0],
                        atol=1e-16)

    def test_triangle_type_three_factor(self):
        rng = np.random.default_rng(2)
        pts = random_interior_points("tri", 50, rng)
        x, y = pts.T
        grad_f1 = (1 - y)[:, None] / 4 * np.stack([np.ones_like(x), x / (1 - y)], -1)
        # P^3_j(y) = (1 + y)/j * P_{j-1}^{(2,1)}(y)
        for j in range(1, 6):
            vals = hcurl.hcurl_primal_eval(S("tri", "III", 1, j), pts)
            scal = (1 + y) / j * rodrigues_jacobi(j - 1, 2, 1)(y)
            assert_allclose(vals, grad_f1 * scal[:, None], rtol=1e-12, atol=1e-15)

    def test_tet_type_four_first_component(self):
        eta = np.linspace(-1, 1, 9)
        for ind in [(1, 1, 1), (1, 2, 3), (1, 3, 1)]:
            for chi, z in [(0.3, -0.2), (-0.7, 0.5)]:
                c = np.stack([eta, np.full(9, chi), np.full(9, z)], -1)
                first = hcurl.primal_evaluator(S("tet", "IV", *ind), c)[:, 0]
                assert np.ptp(first) <= 1e-15 * max(1.0, np.abs(first).max())

    def test_tet_type_four_is_scaled_whitney_field(self):
        # 2 (lam1 grad lam2 - lam2 grad lam1) for the edge from vertex 1 to vertex 2
        verts = np.array([[-1, -1, -1], [1, -1, -1], [0, 1, -1], [0, 0, 1]], float)
        T = np.vstack([verts.T, np.ones(4)])
        coef = np.linalg.inv(T)
        pts = random_interior_points("tet", 20, np.random.default_rng(4))
        lam = (coef @ np.vstack([pts.T, np.ones(len(pts))])).T
        g1, g2 = coef[0, :3], coef[1, :3]
        whitney = lam[:, [0]] * g2 - lam[:, [1]] * g1
        vals = hcurl.hcurl_primal_eval(S("tet", "IV", 1, 1, 1), pts)
        # g_{11} h_{111} with P^_1 = 1 + t
        chi = 2 * pts[:, 1] / (1 - pts[:, 2])
        scal = (1 + chi) * (1 - pts[:, 2]) / 2 * (1 + pts[:, 2])
        assert_allclose(vals, 2 * whitney * scal[:, None], rtol=1e-12, atol=1e-15)


class TestSplitting:
    @pytest.mark.parametrize("element", ELEMENTS)
    def test_signed_sums(self, element):
        rng = np.random.default_rng(8)
        pts = random_interior_points(element, 200, rng)
        for idx in interior_of(element, 6, "I"):
            ind = idx.indices
            aux = [hcurl.hcurl_aux_eval(S(element, t, *ind), pts) for t in hcurl.AUX_TAGS[element]]
            for row, tag in zip(hcurl.MIXING[element], hcurl.PRIMAL_TAGS[element]):
                expect = sum(s * a for s, a in zip(row, aux))
                got = hcurl.hcurl_primal_eval(S(element, tag, *ind), pts)
                assert_allclose(got, expect, rtol=0, atol=1e-12)

    def test_quad_aux_first_zero_second(self):
        pts = random_interior_points("quad", 30, np.random.default_rng(0))
        for i in range(1, 5):
            for j in range(2, 5):
                assert np.all(hcurl.hcurl_aux_eval(S("quad", "auxI", i, j), pts)[:, 1] == 0)

    def test_triangle_sum_is_type_one(self):
        pts = random_interior_points("tri", 40, np.random.default_rng(9))
        a = hcurl.hcurl_aux_eval(S("tri", "auxI", 3, 2), pts)
        b = hcurl.hcurl_aux_eval(S("tri", "auxII", 3, 2), pts)
        assert_allclose(a + b, hcurl.hcurl_primal_eval(S("tri", "I", 3, 2), pts), atol=1e-13)


class TestGradientFields:
    @pytest.mark.parametrize("element,p", [("quad", 5), ("tri", 6), ("tet", 5)])
    def test_type_one_is_gradient(self, element, p):
        pts = random_interior_points(element, 100, np.random.default_rng(21))
        for idx in interior_of(element, p, "I"):
            bubble = ShapeIndex(element, "u", idx.indices)
            fd = fd_gradient(lambda q: h1.h1_primal_eval(bubble, q), pts, h=1e-6)
            field = hcurl.hcurl_primal_eval(idx, pts)
            assert np.max(np.abs(field - fd)) <= 1e-6 * max(1.0, np.abs(field).max())

    @pytest.mark.parametrize("element,p", [("quad", 5), ("tri", 6), ("tet", 5)])
    def test_type_one_is_curl_free(self, element, p):
        pts = random_interior_points(element, 100, np.random.default_rng(22))
        for idx in interior_of(element, p, "I"):
            curl = fd_curl(lambda q: hcurl.hcurl_primal_eval(idx, q), pts, h=1e-5)
            assert np.max(np.abs(curl)) <= 1e-6


class TestAuxDuals:
    def test_triangle_b21_at_origin(self):
        assert_allclose(hcurl.hcurl_dual_aux_eval(S("tri", "B", 2, 1), [0.0, 0.0]), [0.0, 0.0])

    def test_triangle_c21(self):
        pts = random_interior_points("tri", 20, np.random.default_rng(3))
        x, y = pts.T
        s = (1 - y) / 2
        eta = x / s
        # (2+k-1) P_1^{(1,1)}(eta) s P_0 and -2*2 P_0^{(1,1)} s P_0
        expect = np.stack([3 * (2 * eta) * s, -4 * s], -1)
        assert_allclose(hcurl.hcurl_dual_aux_eval(S("tri", "C", 2, 1), pts), expect, rtol=1e-12)

    def test_tet_d_third_component(self):
        pts = random_interior_points("tet", 20, np.random.default_rng(6))
        z = pts[:, 2]
        for n in (1, 2, 4):
            got = hcurl.hcurl_dual_aux_eval(S("tet", "D", 2, 1, n), pts)[:, 2]
            expect = (1 - z) / 2 * rodrigues_jacobi(n - 1, 6, 0)(z)
            assert_allclose(got, expect, rtol=1e-11, atol=1e-14)

    def test_q_polynomial_examples(self):
        chi = np.linspace(-1, 1, 7)
        assert_allclose(hcurl.q_polynomial("Qm1", 2, 1, chi), np.full(7, 1.25), rtol=1e-15)
        assert_allclose(hcurl.q_polynomial("Qm2", 2, 1, 0.0), 1 / 8, rtol=1e-15)
        with pytest.raises(ValueError):
            hcurl.q_polynomial("Qm3", 2, 1, 0.0)

    def test_q_polynomial_degrees(self):
        t = np.cos(np.linspace(0, np.pi, 40))
        for l in range(1, 6):
            for m in range(1, 9):
                q1 = np.polynomial.Polynomial.fit(t, hcurl.q_polynomial("Qm1", l, m, t), m)
                c1 = q1.convert().coef
                assert abs(c1[m]) <= 1e-9 * np.abs(c1).max()
                q2 = np.polynomial.Polynomial.fit(t, hcurl.q_polynomial("Qm2", l, m, t), m + 1)
                c2 = q2.convert().coef
                assert abs(c2[m + 1]) <= 1e-9 * np.abs(c2).max()
                assert abs(c2[m]) > 1e-9 * np.abs(c2).max()

    @pytest.mark.parametrize("element,p", [("quad", 10), ("tri", 10), ("tet", 8)])
    def test_aux_biorthogonality(self, element, p):
        g = assemble_gram(hcurl.aux_family(element, p), hcurl.dual_aux_family(element, p), p)
        d = np.diag(g.values)
        assert np.all(d != 0)
        rel = np.abs(g.values) / np.sqrt(np.outer(np.abs(d), np.abs(d)))
        np.fill_diagonal(rel, 0)
        assert rel.max() <= 1e-11

    @pytest.mark.parametrize("element,p", [("quad", 4), ("tri", 5), ("tet", 4)])
    def test_aux_gram_independent_quadrature(self, element, p):
        rows = hcurl.aux_indices(element, p)
        cols = hcurl.dual_aux_indices(element, p)
        ref = cartesian_gram(element, rows, cols, hcurl.hcurl_aux_eval,
                             hcurl.hcurl_dual_aux_eval, p + 5)
        got = assemble_gram(hcurl.aux_family(element, p), hcurl.dual_aux_family(element, p), p)
        assert_allclose(got.values, ref, rtol=0, atol=1e-13 * np.abs(ref).max())

    @pytest.mark.parametrize("element,p", [("quad", 8), ("tri", 8), ("tet", 7)])
    def test_measured_diagonals_match_derived_closed_forms(self, element, p):
        for row in audit.diagonal_table(element, "hcurl", p):
            assert_allclose(row.measured, row.derived, rtol=1e-12)


class TestEdgeTypeOrthogonality:
    @staticmethod
    def _relative(element, p, edge_tag, cols):
        prim = hcurl.primal_family(element, p)
        edge = prim.subset([i for i in prim.indices if i.tag == edge_tag])
        dual = hcurl.dual_aux_family(element, p)
        cfam = dual.subset([c for c in dual.indices if c.tag in cols and c.indices[0] >= 2])
        g = assemble_gram(edge, cfam, p).values
        nr = np.sqrt(np.diag(assemble_gram(edge, edge, p).values))
        nc = np.sqrt(np.diag(assemble_gram(cfam, cfam, p).values))
        return np.max(np.abs(g) / np.outer(nr, nc))

    @pytest.mark.parametrize("p", [3, 5, 8])
    def test_triangle_type_three(self, p):
        assert self._relative("tri", p, "III", ("B", "C")) <= 1e-11

    @pytest.mark.parametrize("p", [4, 6, 8])
    def test_tet_type_four(self, p):
        assert self._relative("tet", p, "IV", ("B", "C", "D")) <= 1e-11

    def test_tet_interior_fields_orthogonal_to_edge_dual(self):
        p = 6
        prim = hcurl.primal_family("tet", p)
        inner = prim.subset([i for i in prim.indices if i.tag != "IV"])
        dual = hcurl.dual_aux_family("tet", p)
        edge_dual = dual.subset([c for c in dual.indices if c.tag == "B" and c.indices[0] == 1])
        g = assemble_gram(inner, edge_dual, p).values
        assert np.abs(g).max() <= 1e-13


class TestCombinedDuals:
    @pytest.mark.parametrize("element,p", [("quad", 10), ("tri", 10), ("tet", 8)])
    def test_identity(self, element, p):
        g = assemble_gram(hcurl.primal_family(element, p), hcurl.dual_family(element, p), p)
        assert np.max(np.abs(g.values - np.eye(len(g.rows)))) <= 1e-10

    def test_quad_edge_dual_is_scaled_b(self):
        pts = random_interior_points("quad", 10, np.random.default_rng(1))
        for l in range(2, 6):
            dual = hcurl.hcurl_dual_eval(S("quad", "bIII", 1, l), pts)
            base = hcurl.hcurl_dual_aux_eval(S("quad", "B", 1, l), pts)
            ratio = dual[:, 0] / base[:, 0]
            assert_allclose(ratio, ratio[0], rtol=1e-12)
            assert np.all(dual[:, 1] == 0)

    def test_triangle_edge_dual_paper_mode(self):
        pts = random_interior_points("tri", 10, np.random.default_rng(1))
        for j in range(1, 5):
            a3 = (2 * j + 2) * (j + 2) / 16
            assert_allclose(hcurl.hcurl_dual_eval(S("tri", "bIII", 1, j), pts, mode="paper"),
                            a3 * hcurl.hcurl_dual_aux_eval(S("tri", "B", 1, j), pts), rtol=1e-14)

    def test_tet_alpha2_example(self):
        a2 = hcurl.paper_alphas("tet", (2, 1, 1))["alpha2"]
        assert_allclose(a2, 3 * 5 * 7 * 6 / 2 ** 6, rtol=1e-15)
        measured = hcurl.measured_aux_diagonal(S("tet", "auxII", 2, 1, 1))
        assert_allclose(a2, 1 / measured, rtol=1e-11)

    def test_paper_mode_is_not_identity(self):
        # the published constants do not normalize every pairing
        for element, p in (("quad", 4), ("tri", 4), ("tet", 4)):
            g = assemble_gram(hcurl.primal_family(element, p),
                              hcurl.dual_family(element, p, "paper"), p)
            assert np.max(np.abs(g.values - np.eye(len(g.rows)))) > 1e-3

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            hcurl.dual_family("tri", 4, mode="magic")

    def test_basis_against_aux_duals_pattern(self):
        p = 6
        g = assemble_gram(hcurl.primal_family("tri", p), hcurl.dual_aux_family("tri", p), p)
        pat = sparsity_pattern(g, 1e-10)
        for r, row in enumerate(g.rows):
            hits = {g.cols[c] for c in np.flatnonzero(pat[r])}
            if row.tag == "III":
                assert hits == {S("tri", "B", *row.indices)}
            else:
                assert hits == {S("tri", "B", *row.indices), S("tri", "C", *row.indices)}


class TestPublishedDiagonals:
    """Published closed forms of the split-field pairings, compared up to sign."""

    @pytest.mark.parametrize("tag", ["auxI", "auxII", "auxIII"])
    def test_tet_printed_values(self, tag):
        for ind in hcurl._interior("tet", 6):
            idx = S("tet", tag, *ind)
            ratio = audit.measured_diagonal(idx) / audit.printed_diagonal(idx)
            assert abs(abs(ratio) - 1) <= 1e-11, f"{idx}: measured/printed = {ratio}"

    @pytest.mark.parametrize("tag", ["auxI", "auxII"])
    def test_triangle_printed_values(self, tag):
        for ind in hcurl._interior("tri", 8):
            idx = S("tri", tag, *ind)
            assert_allclose(audit.measured_diagonal(idx), audit.printed_diagonal(idx), rtol=1e-11)

    def test_quad_printed_values_up_to_sign(self):
        for row in audit.diagonal_table("quad", "hcurl", 8):
            if row.printed is not None:
                assert abs(abs(row.ratio) - 1) <= 1e-11
