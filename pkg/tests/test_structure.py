"""Тесты для structure.py"""
from fractions import Fraction

import pytest

from tri_lab.constructions import (
    Construction51Params,
    c6_blowup,
    construction_5_1,
    double_c6_instance,
)
from tri_lab.detection import verify_k3s
from tri_lab.exceptions import (
    HypothesisViolationError,
    InvalidParameterError,
    MalformedInstanceError,
    ParameterOutOfRangeError,
)
from tri_lab.graph import BipartiteGraph, complete_tripartite, full_mask
from tri_lab.structure import (
    STATUS_PARTITION,
    C6CloseInstance,
    ConditionCheck,
    block_part,
    check_partial_degree_hypothesis,
    conclude_c6_close,
    extract_c6,
    refine_ab,
    validate_c6_close,
)


def _planted_sets(graph):
    ranges = graph.meta["ranges"]
    return {i: tuple(range(*ranges[f"W{i}"])) for i in range(1, 7)}


class TestExtractC6:
    """Тесты извлечения разбиения по раздутию C6"""

    @pytest.mark.parametrize("m", [5, 10, 20])
    @pytest.mark.parametrize("u", [0, 3])
    def test_planted_recovery(self, m, u):
        """Тест точного восстановления блоков W при ε = 0"""
        graph = c6_blowup(m, u)
        result = extract_c6(graph, 0)
        assert result.status == STATUS_PARTITION
        partition = result.partition
        assert dict(partition.w) == _planted_sets(graph)
        assert partition.u[1] == tuple(range(2 * m, 2 * m + u))
        assert partition.passed
        assert partition.beta == Fraction(m, 2 * m + u)

    def test_w_sets_lie_in_their_part(self):
        """Тест: W_j и W_{j+3} в доле V_j, U_j - остаток"""
        partition = extract_c6(c6_blowup(4, 1), 0).partition
        for j in range(1, 4):
            assert block_part(j) == block_part(j + 3) == j
            members = set(partition.w[j]) | set(partition.w[j + 3]) | set(partition.u[j])
            assert members == set(range(9))
        assert partition.members("U2") == partition.u[2]

    def test_lemma_hypotheses_reported(self):
        """Тест гипотез леммы: раздутие C6 без U удовлетворяет всем"""
        result = extract_c6(c6_blowup(5), "1/10")
        names = [check.name for check in result.hypotheses]
        assert names == ["min_degree", "min_out_degree", "max_edge_triangles"]
        assert all(check.passed for check in result.hypotheses)

    def test_complete_graph_degenerate(self):
        """Тест K_3(n): все W пусты, диагностика не проходит"""
        result = extract_c6(complete_tripartite(4), "1/10")
        assert result.status == STATUS_PARTITION
        partition = result.partition
        assert all(partition.w[i] == () for i in range(1, 7))
        assert partition.u[1] == (0, 1, 2, 3)
        assert not partition.passed
        assert not result.hypotheses[2].passed

    def test_serialization(self):
        """Тест JSON-представления с запасами"""
        data = extract_c6(c6_blowup(3), 0).to_dict()
        assert data["status"] == STATUS_PARTITION
        assert data["partition"]["W"]["1"] == [0, 1, 2]
        assert len(data["partition"]["path"]) == 13
        assert {check["name"] for check in data["partition"]["diagnostics"]} == {
            "a_part_membership", "b_set_sizes", "c_adjacency", "d_degrees",
        }

    @pytest.mark.parametrize("epsilon", [-1, 1, "3/2"])
    def test_epsilon_out_of_range(self, epsilon):
        """Тест ε вне [0, 1)"""
        with pytest.raises(InvalidParameterError):
            extract_c6(c6_blowup(2), epsilon)


class TestRefineAB:
    """Тесты уточнения B"""

    def test_complete_bipartite(self):
        """Тест полного двудольного графа при λ = 0"""
        graph = BipartiteGraph(4, 6, [full_mask(6)] * 4)
        assert refine_ab(graph, 0) == list(range(6))

    def test_minus_perfect_matching(self):
        """Тест K_{20,20} без совершенного паросочетания при λ = 1/20"""
        graph = BipartiteGraph(20, 20, [full_mask(20) & ~(1 << a) for a in range(20)])
        assert refine_ab(graph, Fraction(1, 20)) == list(range(20))

    def test_common_missing_vertex(self):
        """Тест: все a не видят одну b*"""
        graph = BipartiteGraph(10, 10, [full_mask(10) & ~(1 << 3)] * 10)
        kept = refine_ab(graph, "1/10")
        assert kept == [0, 1, 2, 4, 5, 6, 7, 8, 9]
        assert len(kept) >= (1 - 5 * Fraction(1, 10)) * 10

    def test_hypothesis_violation(self):
        """Тест вершины a со слишком малой степенью"""
        graph = BipartiteGraph(2, 10, [full_mask(10), full_mask(8)])
        with pytest.raises(HypothesisViolationError) as exc_info:
            refine_ab(graph, "1/10")
        assert exc_info.value.translation_key == "hypothesis_violated"
        assert "a=1" in exc_info.value.translation_placeholders["witness"]

    def test_lambda_out_of_range(self):
        """Тест λ > 1/10"""
        with pytest.raises(ParameterOutOfRangeError):
            refine_ab(BipartiteGraph(1, 1, [1]), "1/5")


class TestC6CloseInstance:
    """Тесты экземпляра двух близких раздутий C6"""

    def test_c_must_exceed_one(self):
        """Тест c ≤ 1"""
        with pytest.raises(InvalidParameterError):
            C6CloseInstance.from_sets({f"W{i}": [] for i in range(1, 7)}, 1, 0)

    def test_overlapping_sets(self):
        """Тест пересечения множеств одной доли"""
        sets = {f"W{i}": [] for i in range(1, 7)}
        sets["W1"] = [0, 1]
        sets["X4"] = [1]
        with pytest.raises(MalformedInstanceError) as exc_info:
            C6CloseInstance.from_sets(sets, 2, 0)
        assert exc_info.value.translation_key == "malformed_instance"

    def test_from_dict_rejects_missing_sets(self):
        """Тест отсутствия W6"""
        data = {f"W{i}": [] for i in range(1, 6)}
        with pytest.raises(MalformedInstanceError):
            C6CloseInstance.from_dict(data, 4, 2, 0)

    def test_from_dict_defaults_x(self):
        """Тест X по умолчанию пусты"""
        data = {f"W{i}": [i - 1] for i in range(1, 7)}
        instance = C6CloseInstance.from_dict(data, 6, "7/2", 1)
        assert instance.x[3] == ()
        assert instance.c == Fraction(7, 2)
        assert instance.to_dict()["W6"] == [5]


class TestValidateC6Close:
    """Тесты проверки гипотез для двух близких раздутий C6"""

    def test_single_blowup_windows(self):
        """Тест пустых X при d = 0: окна размеров и степени W выполнены"""
        graph, instance = double_c6_instance(10, 0, "3/2", 0)
        report = validate_c6_close(graph, instance)
        assert report.check("c_range").passed
        assert report.check("w_sizes").passed
        assert report.check("x_sizes").passed
        assert report.check("w_degrees").passed
        assert not report.check("min_degree").passed
        assert not report.all_passed
        assert report.witness is None
        assert not report.alarm

    def test_shrunk_w_named(self):
        """Тест: уменьшенное W_1 нарушает окно размеров"""
        graph, instance = double_c6_instance(10, 0, 10, 0)
        sets = {f"W{i}": instance.w[i] for i in range(1, 7)}
        sets["W1"] = instance.w[1][:5]
        report = validate_c6_close(graph, C6CloseInstance.from_sets(sets, 10, 0))
        check = report.check("w_sizes")
        assert not check.passed
        assert check.witness == "W1"
        assert check.slack == -3

    def test_double_instance_wiring(self):
        """Тест условий на степени в двойном раздутии"""
        graph, instance = double_c6_instance(6, 3, 2, 3)
        report = validate_c6_close(graph, instance)
        assert report.check("w_degrees").passed
        assert report.check("x_degrees").passed

    def test_pure_predicate(self):
        """Тест повторного вызова"""
        graph, instance = double_c6_instance(5, 2, 2, 2)
        assert validate_c6_close(graph, instance) == validate_c6_close(graph, instance)

    def test_index_outside_graph(self):
        """Тест индекса за пределами доли"""
        sets = {f"W{i}": [] for i in range(1, 7)}
        sets["W2"] = [99]
        with pytest.raises(MalformedInstanceError):
            validate_c6_close(c6_blowup(2), C6CloseInstance.from_sets(sets, 2, 0))

    def test_conclusion_exhibits_witness(self):
        """Тест: при выполненных условиях детектор дает K_3(2)"""
        graph = complete_tripartite(2)
        checks = (ConditionCheck("all", True, Fraction(0)),)
        report = conclude_c6_close(graph, checks)
        assert verify_k3s(graph, report.witness)
        assert not report.alarm

    def test_conclusion_alarm(self):
        """Тест сигнала при выполненных условиях без K_3(2)"""
        graph = construction_5_1(Construction51Params(13, 2))
        report = conclude_c6_close(graph, (ConditionCheck("all", True, Fraction(1)),))
        assert report.alarm
        assert report.to_dict()["alarm"] is True


class TestPartialDegreeHypothesis:
    """Тесты гипотез теоремы о линейной частичной степени"""

    def test_complete_graph(self):
        """Тест K_3(10): частичная степень выполнена, оценка δ нет"""
        report = check_partial_degree_hypothesis(complete_tripartite(10), 58)
        assert report.check("min_partial_degree").passed
        assert not report.check("min_degree").passed

    def test_half_partial_degree(self):
        """Тест раздутия C6: частичной степени n/2 достаточно"""
        report = check_partial_degree_hypothesis(c6_blowup(5), 60)
        assert report.check("min_partial_degree").passed

    def test_c_below_minimum(self):
        """Тест c < 58"""
        with pytest.raises(ParameterOutOfRangeError):
            check_partial_degree_hypothesis(complete_tripartite(2), 57)
