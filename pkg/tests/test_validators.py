"""Тесты для validators.py"""
import pytest

from tri_lab.validators import (
    GRAPH_SCHEMA,
    validate_graph_data,
    validate_instance_data,
    validate_witness_data,
)
from tri_lab.exceptions import (
    MalformedGraphError,
    MalformedInstanceError,
    MalformedWitnessError,
)


class TestValidateGraphData:
    """Тесты для validate_graph_data"""

    def test_valid_minimal_graph(self):
        """Тест минимального корректного графа"""
        data = {"format": "tri-v1", "n": 1, "edges": []}
        is_valid, errors = validate_graph_data(data)
        assert is_valid
        assert len(errors) == 0

    def test_meta_allowed(self):
        """Тест необязательного поля meta"""
        data = {"format": "tri-v1", "n": 2, "edges": [[1, 0, 2, 1]], "meta": {"construction": "k3n"}}
        assert GRAPH_SCHEMA(data)["meta"] == {"construction": "k3n"}

    def test_missing_edges(self):
        """Тест отсутствия обязательного поля edges"""
        is_valid, errors = validate_graph_data({"format": "tri-v1", "n": 2})
        assert not is_valid
        assert any("edges" in error for error in errors)

    def test_not_a_dict(self):
        """Тест что не-словарь не проходит"""
        is_valid, errors = validate_graph_data("tri-v1")
        assert not is_valid
        assert errors == ["Graph must be a JSON object"]

    def test_collects_all_edge_errors(self):
        """Тест накопления ошибок без исключения"""
        data = {"format": "tri-v1", "n": 2, "edges": [[1, 0, 1, 1], [2, 0, 3, 7]]}
        is_valid, errors = validate_graph_data(data)
        assert not is_valid
        assert len(errors) == 2

    def test_raise_on_first_error(self):
        """Тест исключения при raise_on_error=True"""
        with pytest.raises(MalformedGraphError) as exc_info:
            validate_graph_data({"format": "tri-v1", "n": 2, "edges": [[1, 0, 1, 1]]}, raise_on_error=True)
        assert "within part 1" in exc_info.value.translation_placeholders["reason"]

    def test_duplicate(self):
        """Тест повторного ребра"""
        data = {"format": "tri-v1", "n": 2, "edges": [[2, 0, 3, 1], [2, 0, 3, 1]]}
        is_valid, errors = validate_graph_data(data)
        assert not is_valid
        assert "duplicated" in errors[0]

    def test_reversed_edge(self):
        """Тест ребра с большей долей на первом месте"""
        data = {"format": "tri-v1", "n": 2, "edges": [[3, 1, 2, 0]]}
        is_valid, errors = validate_graph_data(data)
        assert not is_valid
        assert "lower part first" in errors[0]
        with pytest.raises(MalformedGraphError):
            validate_graph_data(data, raise_on_error=True)

    @pytest.mark.parametrize("edge", [[True, 0, 2, 1], [1, 0, 2, False]])
    def test_bool_coordinate(self, edge):
        """Тест логического значения вместо числа"""
        is_valid, errors = validate_graph_data({"format": "tri-v1", "n": 2, "edges": [edge]})
        assert not is_valid
        assert "expected an integer" in errors[0]

    def test_bool_part_size(self):
        """Тест n = true"""
        assert not validate_graph_data({"format": "tri-v1", "n": True, "edges": []})[0]


class TestValidateWitnessData:
    """Тесты для validate_witness_data"""

    def test_valid_k3s(self):
        """Тест корректного K_3(s)"""
        assert validate_witness_data({"type": "k3s", "s": 1, "parts": [[0], [2], [1]]}, 3) == (True, [])

    def test_k3s_wrong_part_size(self):
        """Тест части не из s вершин"""
        is_valid, errors = validate_witness_data({"type": "k3s", "s": 2, "parts": [[0], [0, 1], [0, 1]]})
        assert not is_valid
        assert "exactly s=2" in errors[0]

    def test_k3s_repeated_vertex(self):
        """Тест повторной вершины"""
        is_valid, _ = validate_witness_data({"type": "k3s", "s": 2, "parts": [[0, 0], [0, 1], [0, 1]]})
        assert not is_valid

    def test_kss_sides_differ(self):
        """Тест сторон разного размера"""
        is_valid, errors = validate_witness_data({"type": "kss", "left": [0, 1], "right": [0]})
        assert not is_valid
        assert errors == ["left and right sides differ in size"]

    def test_kss_same_parts(self):
        """Тест пары из одной доли"""
        is_valid, _ = validate_witness_data({"type": "kss", "left": [0], "right": [1], "pair": [2, 2]})
        assert not is_valid

    def test_kss_part_outside(self):
        """Тест доли вне 1..3"""
        is_valid, _ = validate_witness_data({"type": "kss", "left": [0], "right": [1], "pair": [1, 4]})
        assert not is_valid

    @pytest.mark.parametrize("claim", [{"triangles": 0}, {"min_degree": 12}])
    def test_claims(self, claim):
        """Тест утверждений о графе"""
        assert validate_witness_data(claim)[0]

    @pytest.mark.parametrize("claim", [{"triangles": -1}, {"edges": 3}, {}])
    def test_invalid_claims(self, claim):
        """Тест некорректных утверждений"""
        with pytest.raises(MalformedWitnessError):
            validate_witness_data(claim, raise_on_error=True)

    def test_index_bound_by_n(self):
        """Тест индекса за пределами доли"""
        is_valid, errors = validate_witness_data({"type": "kss", "left": [0, 4], "right": [1, 2]}, 4)
        assert not is_valid
        assert "[0, 4)" in errors[0]


class TestValidateInstanceData:
    """Тесты для validate_instance_data"""

    def test_x_default_to_empty(self):
        """Тест X_i по умолчанию"""
        data = {f"W{i}": [i] for i in range(1, 7)}
        normalized = validate_instance_data(data, 7)
        assert normalized["X3"] == []
        assert normalized["W6"] == [6]

    def test_unknown_key(self):
        """Тест лишнего ключа"""
        data = {f"W{i}": [] for i in range(1, 7)}
        data["Y1"] = []
        with pytest.raises(MalformedInstanceError):
            validate_instance_data(data, 3)

    def test_index_outside(self):
        """Тест индекса ≥ n"""
        data = {f"W{i}": [] for i in range(1, 7)}
        data["X2"] = [3]
        with pytest.raises(MalformedInstanceError) as exc_info:
            validate_instance_data(data, 3)
        assert "X2" in exc_info.value.translation_placeholders["reason"]
