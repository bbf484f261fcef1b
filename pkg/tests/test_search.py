"""Тесты для search.py"""
import numpy as np
import pytest

from tri_lab.const import (
    INITIALIZER_FILE,
    INITIALIZER_GLUE,
    INITIALIZER_RANDOM,
    OBJECTIVE_K32_SURPLUS,
    OBJECTIVE_MIN_TRIANGLES,
)
from tri_lab.constructions import ExtremalRegularParams, extremal_regular, random_graph
from tri_lab.detection import find_k3s
from tri_lab.exceptions import InfeasibleConfigError, InvalidParameterError, ParameterOutOfRangeError
from tri_lab.graph import Vertex, complete_tripartite, degree_profile, triangle_count
from tri_lab.search import (
    SearchConfig,
    WorkingGraph,
    initial_graph,
    probe_k32_free_surplus,
    probe_min_triangles,
    triangle_floor,
)
from tri_lab.serialization import write_graph


class TestTriangleFloor:
    """Тесты доказанной нижней оценки"""

    @pytest.mark.parametrize(
        ("n", "t", "floor"), [(4, 2, 16), (6, 3, 54), (4, 4, 64), (10, 1, 4), (10, 2, 8), (3, 1, 1)]
    )
    def test_values(self, n, t, floor):
        """Тест max{t³, n²(3t−n)/2, 4}"""
        assert triangle_floor(n, t) == floor

    def test_rounds_up(self):
        """Тест округления вверх n²(3t−n)/2 при нечетном n"""
        assert triangle_floor(5, 3) == 50


class TestSearchConfig:
    """Тесты проверки конфигурации"""

    def test_unknown_objective(self):
        """Тест неизвестной цели"""
        with pytest.raises(InvalidParameterError) as exc_info:
            SearchConfig(4, 2, objective="maximize-fun")
        assert exc_info.value.translation_placeholders["name"] == "objective"

    def test_t_above_n_for_triangles(self):
        """Тест t > n для минимизации треугольников"""
        with pytest.raises(ParameterOutOfRangeError):
            SearchConfig(4, 5)

    def test_file_initializer_needs_path(self):
        """Тест инициализации из файла без пути"""
        with pytest.raises(InvalidParameterError):
            SearchConfig(4, 2, initializer=INITIALIZER_FILE)

    def test_workers_not_serialized(self):
        """Тест: число воркеров не попадает в отчет"""
        assert "workers" not in SearchConfig(4, 2, workers=3).to_dict()

    def test_wrong_probe_for_objective(self):
        """Тест вызова не той процедуры"""
        with pytest.raises(InvalidParameterError):
            probe_k32_free_surplus(SearchConfig(4, 2))


class TestInitialGraph:
    """Тесты начальных графов"""

    def test_extremal_start(self):
        """Тест регулярного экстремального графа при 2t ≥ n"""
        graph = initial_graph(SearchConfig(4, 2), 0)
        assert graph == extremal_regular(ExtremalRegularParams(4, 2))

    def test_complete_start_for_odd_n(self):
        """Тест K_3(n) при нечетном n"""
        assert initial_graph(SearchConfig(5, 2), 0) == complete_tripartite(5)

    def test_random_start_respects_floor(self):
        """Тест случайного графа с δ ≥ n + t"""
        graph = initial_graph(SearchConfig(6, 2, initializer=INITIALIZER_RANDOM), 11)
        assert degree_profile(graph).min_degree >= 8

    def test_k32_start_is_free(self):
        """Тест: стартовый граф для K_3(2) свободен от K_3(2)"""
        for n in (7, 13):
            graph = initial_graph(SearchConfig(n, 2, objective=OBJECTIVE_K32_SURPLUS), 0)
            assert find_k3s(graph, 2) is None

    def test_file_start(self, tmp_path):
        """Тест загрузки начального графа из файла"""
        path = tmp_path / "start.json"
        write_graph(extremal_regular(ExtremalRegularParams(6, 3)), path)
        config = SearchConfig(6, 3, initializer=INITIALIZER_FILE, initial_path=str(path))
        assert triangle_count(initial_graph(config, 0)) == 54

    def test_file_start_wrong_size(self, tmp_path):
        """Тест файла с другим n"""
        path = tmp_path / "start.json"
        write_graph(complete_tripartite(3), path)
        config = SearchConfig(6, 3, initializer=INITIALIZER_FILE, initial_path=str(path))
        with pytest.raises(InfeasibleConfigError):
            initial_graph(config, 0)

    def test_glued_k32_start(self):
        """Тест склейки C5.1(13, 2) с собой: n = 26, δ = 28, без K_3(2)"""
        config = SearchConfig(26, 2, objective=OBJECTIVE_K32_SURPLUS, initializer=INITIALIZER_GLUE)
        graph = initial_graph(config, 0)
        assert graph.n == 26
        assert degree_profile(graph).min_degree == 28
        assert graph.meta["start"] == "glue"
        assert find_k3s(graph, 2) is None

    def test_glued_min_triangles_start(self):
        """Тест склейки экстремального графа (4, 2) с собой"""
        graph = initial_graph(SearchConfig(8, 2, initializer=INITIALIZER_GLUE), 0)
        assert degree_profile(graph).min_degree == 10
        assert triangle_count(graph) == 32

    def test_glued_start_unavailable(self):
        """Тест нечетного n для склейки"""
        with pytest.raises(InfeasibleConfigError):
            initial_graph(SearchConfig(13, 2, objective=OBJECTIVE_K32_SURPLUS, initializer=INITIALIZER_GLUE), 0)

    @pytest.mark.parametrize(
        ("config", "start"),
        [
            (SearchConfig(4, 2), "extremal"),
            (SearchConfig(5, 2), "complete"),
            (SearchConfig(13, 2, objective=OBJECTIVE_K32_SURPLUS), "c51"),
            (SearchConfig(6, 2, initializer=INITIALIZER_RANDOM), "random"),
        ],
    )
    def test_start_recorded(self, config, start):
        """Тест записи источника старта в meta"""
        assert initial_graph(config, 0).meta["start"] == start


class TestWorkingGraph:
    """Тесты изменяемой копии графа"""

    def test_add_remove_keeps_degrees(self):
        """Тест согласованности степеней и строк"""
        work = WorkingGraph(complete_tripartite(3))
        x, y = Vertex(1, 0), Vertex(2, 2)
        work.remove(x, y)
        assert not work.has_edge(x, y)
        assert not work.has_edge(y, x)
        assert work.degree(x) == 5
        assert work.min_degree_count() == (5, 2)
        work.add(x, y)
        assert work.to_graph() == complete_tripartite(3)

    def test_common_neighbours(self):
        """Тест |N(x) ∩ N(y)| в третьей доле"""
        work = WorkingGraph(complete_tripartite(4))
        assert work.common(Vertex(1, 0), Vertex(3, 1)) == 4

    def test_min_degree_tracks_random_moves(self):
        """Тест δ(G) и числа минимальных вершин после случайных ходов"""
        rng = np.random.default_rng(21)
        work = WorkingGraph(random_graph(5, 4, 8))
        for _ in range(300):
            i, j = rng.choice(3, size=2, replace=False) + 1
            x, y = Vertex(int(i), int(rng.integers(5))), Vertex(int(j), int(rng.integers(5)))
            if work.has_edge(x, y):
                work.remove(x, y)
            else:
                work.add(x, y)
            graph = work.to_graph()
            degrees = [graph.degree(Vertex(part, u)) for part in (1, 2, 3) for u in range(5)]
            assert work.min_degree_count() == (min(degrees), degrees.count(min(degrees)))


class TestProbeMinTriangles:
    """Тесты минимизации числа треугольников"""

    @pytest.mark.parametrize(("n", "t", "best"), [(4, 2, 16), (6, 3, 54)])
    def test_reaches_floor(self, n, t, best):
        """Тест: старт с экстремального графа, оценка достигнута"""
        report = probe_min_triangles(SearchConfig(n, t, budget=2000, seed=1))
        assert report.best_value == best
        assert report.bound_floor == best
        assert report.triangles == best
        assert report.min_degree >= n + t

    def test_never_below_floor(self):
        """Тест со случайного старта: результат не ниже оценки"""
        config = SearchConfig(6, 2, budget=3000, restarts=2, seed=5, initializer=INITIALIZER_RANDOM)
        report = probe_min_triangles(config)
        assert report.best_value >= triangle_floor(6, 2)
        assert degree_profile(report.best_graph).min_degree >= 8
        assert triangle_count(report.best_graph) == report.best_value

    def test_deterministic(self):
        """Тест: один seed дает один отчет"""
        config = SearchConfig(5, 2, budget=1500, restarts=2, seed=42)
        assert probe_min_triangles(config).to_dict() == probe_min_triangles(config).to_dict()

    def test_workers_do_not_change_result(self):
        """Тест независимости результата от числа воркеров"""
        serial = probe_min_triangles(SearchConfig(5, 2, budget=800, restarts=3, seed=7))
        parallel = probe_min_triangles(SearchConfig(5, 2, budget=800, restarts=3, seed=7, workers=2))
        assert serial.to_dict() == parallel.to_dict()
        assert serial.best_graph == parallel.best_graph

    def test_timing_excluded_by_default(self):
        """Тест: wall_time только по запросу"""
        report = probe_min_triangles(SearchConfig(4, 2, budget=100))
        assert "wall_time" not in report.to_dict()
        assert report.to_dict(include_timing=True)["wall_time"] >= 0

    def test_best_graph_meta(self):
        """Тест конфигурации в meta лучшего графа"""
        report = probe_min_triangles(SearchConfig(4, 2, budget=100, seed=3))
        assert report.best_graph.meta["config"]["seed"] == 3
        assert report.best_graph.meta["construction"] == "search"
        assert report.to_dict()["objective"] == OBJECTIVE_MIN_TRIANGLES

    def test_move_accounting(self):
        """Тест счетчиков ходов"""
        report = probe_min_triangles(SearchConfig(6, 3, budget=500, seed=2))
        moves = report.moves
        assert moves.accepted <= moves.proposed
        assert moves.toggles + moves.swaps == moves.proposed
        assert moves.recounts >= 1
        assert ("n", 6) in report.table_rows()


class TestProbeK32Surplus:
    """Тесты максимизации δ − n без K_3(2)"""

    def test_keeps_construction_surplus(self):
        """Тест n = 13: запас не хуже конструкции, граф без K_3(2)"""
        config = SearchConfig(13, 2, objective=OBJECTIVE_K32_SURPLUS, budget=1500, seed=9)
        report = probe_k32_free_surplus(config)
        assert report.best_value >= 2
        assert report.k32_free is True
        assert find_k3s(report.best_graph, 2) is None
        assert report.min_degree - 13 == report.best_value
        assert report.moves.full_checks >= 1

    def test_rejects_k32_moves(self):
        """Тест отказа от ходов, создающих K_3(2)"""
        config = SearchConfig(7, 1, objective=OBJECTIVE_K32_SURPLUS, budget=1000, seed=4)
        report = probe_k32_free_surplus(config)
        assert report.k32_free is True
        assert report.moves.rejected_k32 > 0

    @pytest.mark.slow
    def test_glued_start_at_26(self):
        """Тест n = 26 со старта склейки: запас не меньше 2"""
        config = SearchConfig(
            26, 2, objective=OBJECTIVE_K32_SURPLUS, initializer=INITIALIZER_GLUE, budget=300, seed=1
        )
        report = probe_k32_free_surplus(config)
        assert report.best_value >= 2
        assert report.k32_free is True
        assert report.best_graph.meta["start"] == "glue"

    def test_report_consistent_with_random_sweep(self):
        """Тест n = 7: согласованность отчета с перебором случайных рестартов"""
        config = SearchConfig(7, 2, objective=OBJECTIVE_K32_SURPLUS, budget=600, restarts=3, seed=13)
        report = probe_k32_free_surplus(config)
        assert report.k32_free is True
        assert find_k3s(report.best_graph, 2) is None
        assert report.min_degree - 7 == report.best_value
        assert degree_profile(report.best_graph).min_degree == report.min_degree
        for seed in range(4):
            sweep = probe_k32_free_surplus(
                SearchConfig(
                    7, 2, objective=OBJECTIVE_K32_SURPLUS, initializer=INITIALIZER_RANDOM, budget=600, seed=seed
                )
            )
            assert find_k3s(sweep.best_graph, 2) is None
            assert degree_profile(sweep.best_graph).min_degree - 7 == sweep.best_value
            assert sweep.best_graph.meta["start"] == "random"
        assert report.restarts[report.best_restart]["best_value"] == report.best_value
