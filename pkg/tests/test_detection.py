"""Тесты для detection.py"""
from fractions import Fraction

import numpy as np
import pytest

from tri_lab.const import PART_PAIRS
from tri_lab.constructions import (
    Construction51Params,
    ExtremalRegularParams,
    PlaneOrder,
    c6_blowup,
    construction_5_1,
    extremal_regular,
    projective_plane_bipartite,
    random_graph,
)
from tri_lab.detection import (
    STATUS_FOUND,
    STATUS_HYPOTHESIS_NOT_MET,
    STATUS_NOT_APPLICABLE,
    K3sWitness,
    KssWitness,
    ceil_sqrt,
    d_tilde,
    extract_k32_via_dtilde,
    find_k3s,
    find_kss,
    k32_through_edge,
    kst_bound,
    verify_k3s,
    verify_kss,
    witness_from_dict,
)
from tri_lab.exceptions import (
    InvalidParameterError,
    MalformedWitnessError,
    ParameterOutOfRangeError,
)
from tri_lab.graph import (
    BipartiteGraph,
    TripartiteGraph,
    Vertex,
    complete_tripartite,
    next_part,
    prev_part,
    triangles_through_edge,
)
from tests.oracles import brute_has_k3s, brute_has_kss


def _six_cycle():
    """C6 как двудольный граф 3×3."""
    return BipartiteGraph.from_edges(3, 3, [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)])


class TestKstBound:
    """Тесты оценки Кёвари-Шош-Турана"""

    def test_values(self):
        """Тест известных значений"""
        assert kst_bound(1, 1, 2) == pytest.approx(2)
        assert kst_bound(7, 7, 2) == pytest.approx(7 * 7**0.5 + 7)
        assert kst_bound(7, 7, 2) == pytest.approx(25.52, abs=0.01)
        assert kst_bound(13, 13, 2) == pytest.approx(59.87, abs=0.01)

    def test_planes_below_bound(self):
        """Тест: плоскости без K_{2,2} не превышают оценку"""
        for q in (2, 3):
            plane = projective_plane_bipartite(PlaneOrder(q))
            assert plane.edge_count() <= kst_bound(plane.m, plane.n, 2)

    def test_s_below_two(self):
        """Тест s < 2"""
        with pytest.raises(InvalidParameterError):
            kst_bound(3, 3, 1)


class TestFindKss:
    """Тесты поиска K_{s,s}"""

    def test_complete_two_by_two(self):
        """Тест K_{2,2}"""
        graph = BipartiteGraph(2, 2, [0b11, 0b11])
        witness = find_kss(graph, 2)
        assert witness == KssWitness((0, 1), (0, 1))
        assert verify_kss(graph, witness)

    def test_six_cycle_absent(self):
        """Тест C6: каждая пара имеет ровно одного общего соседа"""
        assert find_kss(_six_cycle(), 2) is None

    def test_plane_absent(self):
        """Тест PG(2, 2)"""
        assert find_kss(projective_plane_bipartite(PlaneOrder(2)), 2) is None

    def test_wide_graph_uses_columns(self):
        """Тест графа с m > n: сертификат в исходной ориентации"""
        graph = BipartiteGraph.from_edges(4, 2, [(1, 0), (1, 1), (3, 0), (3, 1)])
        witness = find_kss(graph, 2)
        assert witness == KssWitness((1, 3), (0, 1))
        assert verify_kss(graph, witness)

    @pytest.mark.parametrize("seed", range(40))
    def test_matches_brute_force(self, seed):
        """Тест совпадения с перебором"""
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        matrix = rng.random((m, n)) < 0.5
        graph = BipartiteGraph.from_edges(m, n, [(int(u), int(v)) for u, v in zip(*np.nonzero(matrix))])
        for s in (2, 3):
            witness = find_kss(graph, s)
            assert (witness is not None) == brute_has_kss(graph, s)
            if witness is not None:
                assert verify_kss(graph, witness)

    def test_verify_rejects_bad_witness(self):
        """Тест отказа для несмежной пары и неравных сторон"""
        graph = _six_cycle()
        assert not verify_kss(graph, KssWitness((0, 1), (0, 1)))
        assert not verify_kss(graph, KssWitness((0,), (0, 1)))
        assert not verify_kss(graph, KssWitness((0, 5), (0, 1)))


class TestFindK3s:
    """Тесты точного поиска K_3(s)"""

    def test_k32_is_whole_graph(self):
        """Тест K_3(2)"""
        witness = find_k3s(complete_tripartite(2), 2)
        assert witness == K3sWitness(((0, 1), (0, 1), (0, 1)))

    def test_c51_absent(self):
        """Тест K_3(2)-свободной конструкции"""
        assert find_k3s(construction_5_1(Construction51Params(13, 2)), 2) is None

    def test_random_graph_matches_oracle(self):
        """Тест random_graph(7, 0, 3) против перебора троек пар"""
        graph = random_graph(7, 0, 3)
        assert (find_k3s(graph, 2) is not None) == brute_has_k3s(graph, 2)

    @pytest.mark.parametrize("seed", range(40))
    def test_random_oracle_equivalence(self, seed):
        """Тест совпадения с перебором на случайных графах"""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 6))
        graph = random_graph(n, int(rng.integers(n, 2 * n + 1)), seed)
        witness = find_k3s(graph, 2)
        assert (witness is not None) == brute_has_k3s(graph, 2)
        if witness is not None:
            assert verify_k3s(graph, witness)

    def test_s_three(self):
        """Тест K_3(3) в K_3(3) и его отсутствие после удаления ребра"""
        graph = complete_tripartite(3)
        assert find_k3s(graph, 3) is not None
        relations = {pair: list(rows) for pair, rows in graph.relations().items()}
        relations[(1, 2)][0] &= ~1
        assert find_k3s(TripartiteGraph(3, relations), 3) is None

    def test_s_larger_than_n(self):
        """Тест s > n"""
        with pytest.raises(ParameterOutOfRangeError):
            find_k3s(complete_tripartite(2), 3)

    def test_verify_rejects_missing_edge(self):
        """Тест проверки сертификата с отсутствующим ребром"""
        graph = TripartiteGraph.from_edges(2, [(1, 0, 2, 0)])
        assert not verify_k3s(graph, K3sWitness(((0, 1), (0, 1), (0, 1))))
        assert not verify_k3s(graph, K3sWitness(((0, 0), (0, 1), (0, 1))))


class TestK32ThroughEdge:
    """Тесты локальной проверки K_3(2) через ребро"""

    def test_found_in_complete_graph(self):
        """Тест K_3(3)"""
        graph = complete_tripartite(3)
        witness = k32_through_edge(graph, Vertex(1, 2), Vertex(3, 1))
        assert witness is not None
        assert verify_k3s(graph, witness)
        assert 2 in witness.in_part(1)
        assert 1 in witness.in_part(3)

    def test_non_edge(self):
        """Тест несмежной пары"""
        graph = TripartiteGraph.from_edges(2, [(1, 0, 2, 0)])
        assert k32_through_edge(graph, Vertex(1, 1), Vertex(2, 1)) is None

    def test_free_graph(self):
        """Тест графа без K_3(2)"""
        graph = construction_5_1(Construction51Params(13, 2))
        for i, u, j, v in list(graph.edges())[:200]:
            assert k32_through_edge(graph, Vertex(i, u), Vertex(j, v)) is None


class TestDTilde:
    """Тесты множеств D̃ и извлечения K_3(2)"""

    def test_complete_graph_is_whole_neighbourhood(self):
        """Тест K_3(n): D̃^+ совпадает с N^+(v)"""
        graph = complete_tripartite(4)
        result = d_tilde(graph, Vertex(2, 1), "+", 1)
        assert result.members == (0, 1, 2, 3)
        assert result.part == 3
        assert len(d_tilde(graph, Vertex(2, 1), "-", Fraction(1, 2))) == 4

    def test_triangle_free_is_empty(self):
        """Тест раздутия C6"""
        graph = c6_blowup(3)
        assert d_tilde(graph, Vertex(1, 0), "+", Fraction(1, 6)).members == ()

    @pytest.mark.parametrize("alpha", [0, "3/2", -1])
    def test_alpha_out_of_range(self, alpha):
        """Тест α вне (0, 1]"""
        with pytest.raises(InvalidParameterError):
            d_tilde(complete_tripartite(2), Vertex(1, 0), "+", alpha)

    def test_bad_direction(self):
        """Тест направления"""
        with pytest.raises(InvalidParameterError):
            d_tilde(complete_tripartite(2), Vertex(1, 0), "*", 1)

    def test_edge_insertion_never_shrinks(self):
        """Тест: добавление ребра не уменьшает D̃ ни одной вершины"""
        rng = np.random.default_rng(17)
        alpha = Fraction(1, 3)
        for seed in range(6):
            n = int(rng.integers(3, 7))
            graph = random_graph(n, n, seed)
            missing = [
                (i, a, j, b)
                for i, j in PART_PAIRS
                for a in range(n)
                for b in range(n)
                if not graph.has_edge(Vertex(i, a), Vertex(j, b))
            ]
            if not missing:
                continue
            i, a, j, b = missing[int(rng.integers(len(missing)))]
            relations = {pair: list(rows) for pair, rows in graph.relations().items()}
            relations[(i, j)][a] |= 1 << b
            denser = TripartiteGraph(n, relations)
            for part in (1, 2, 3):
                for index in range(n):
                    v = Vertex(part, index)
                    for direction in ("+", "-"):
                        before = set(d_tilde(graph, v, direction, alpha).members)
                        after = set(d_tilde(denser, v, direction, alpha).members)
                        assert before <= after

    def test_larger_alpha_gives_subset(self):
        """Тест: при α ≤ α' множество D̃_{α'} вложено в D̃_α"""
        alphas = [Fraction(1, 5), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4), Fraction(1)]
        for seed in range(5):
            graph = random_graph(5, 6, seed)
            for part in (1, 2, 3):
                for index in range(5):
                    v = Vertex(part, index)
                    for direction in ("+", "-"):
                        sets = [set(d_tilde(graph, v, direction, alpha).members) for alpha in alphas]
                        for smaller, larger in zip(sets, sets[1:]):
                            assert larger <= smaller

    def test_matches_edge_triangle_counts(self):
        """Тест экстремального графа (4, 2) против T(vw) ≥ αn по определению"""
        graph = extremal_regular(ExtremalRegularParams(4, 2))
        for alpha in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)):
            for part in (1, 2, 3):
                for index in range(4):
                    v = Vertex(part, index)
                    for direction, other in (("+", next_part(part)), ("-", prev_part(part))):
                        expected = tuple(
                            w
                            for w in graph.neighbors(v, other)
                            if triangles_through_edge(graph, v, Vertex(other, w)) >= alpha * 4
                        )
                        result = d_tilde(graph, v, direction, alpha)
                        assert result.part == other
                        assert result.members == expected

    def test_ceil_sqrt(self):
        """Тест целого корня сверху"""
        assert ceil_sqrt(Fraction(26244)) == 162
        assert ceil_sqrt(Fraction(26245)) == 163
        assert ceil_sqrt(Fraction(1, 4)) == 1
        assert ceil_sqrt(Fraction(0)) == 0

    @pytest.mark.slow
    def test_extract_from_large_complete_graph(self):
        """Тест K_3(324), k = 3: порог 162, сертификат проверяется"""
        graph = complete_tripartite(324)
        result = extract_k32_via_dtilde(graph, 3)
        assert result.threshold == 162
        assert result.status == STATUS_FOUND
        assert verify_k3s(graph, result.witness)

    def test_extract_not_applicable(self):
        """Тест k²√n > n"""
        result = extract_k32_via_dtilde(complete_tripartite(8), 3)
        assert result.status == STATUS_NOT_APPLICABLE
        assert result.witness is None

    def test_extract_triangle_free(self):
        """Тест раздутия C6: все D̃ пусты"""
        result = extract_k32_via_dtilde(c6_blowup(10), "11/10")
        assert result.status == STATUS_HYPOTHESIS_NOT_MET
        assert result.witness is None

    def test_extract_on_free_construction(self):
        """Тест конструкции без K_3(2)"""
        result = extract_k32_via_dtilde(construction_5_1(Construction51Params(31, 4)), "11/10")
        assert result.witness is None

    def test_k_not_above_one(self):
        """Тест k ≤ 1"""
        with pytest.raises(InvalidParameterError):
            extract_k32_via_dtilde(complete_tripartite(4), 1)


class TestWitnessCodec:
    """Тесты преобразования сертификатов"""

    def test_k3s_from_dict_sorts(self):
        """Тест нормализации порядка"""
        witness = witness_from_dict({"type": "k3s", "s": 2, "parts": [[1, 0], [0, 1], [1, 0]]})
        assert witness == K3sWitness(((0, 1), (0, 1), (0, 1)))
        assert witness.to_dict()["parts"] == [[0, 1], [0, 1], [0, 1]]

    def test_kss_with_pair(self):
        """Тест K_{s,s} с указанием пары долей"""
        witness = witness_from_dict({"type": "kss", "left": [0, 1], "right": [2, 3], "pair": [1, 3]})
        assert witness == KssWitness((0, 1), (2, 3), (1, 3))
        assert witness.to_dict()["pair"] == [1, 3]

    def test_unknown_type(self):
        """Тест неизвестного типа"""
        with pytest.raises(MalformedWitnessError) as exc_info:
            witness_from_dict({"type": "k4"})
        assert exc_info.value.translation_key == "malformed_witness"
