"""Tests for graphs, DIMACS reading/writing and generators"""

import networkx as nx
import pytest

from minids.core.graph import (
    DimacsFormatError,
    DimacsReader,
    GenKind,
    GenParams,
    Graph,
    complement,
    gen_grid,
    gen_random,
    load_graph,
    parse_dimacs,
    serialize_dimacs,
)


class TestGraph:
    """Test the Graph type"""

    def test_from_edges_sorts_and_merges(self):
        """Test neighbor lists are sorted and duplicate pairs merged"""
        graph = Graph.from_edges(4, [(2, 0), (0, 1), (1, 0), (3, 0)])

        assert graph.adjacency[0] == (1, 2, 3)
        assert graph.m == 3
        assert graph.degrees == (3, 1, 1, 1)
        assert graph.max_degree == 3
        assert graph.validate() == []

    def test_from_edges_rejects_self_loop(self):
        """Test a self-loop is rejected"""
        with pytest.raises(ValueError, match="Self-loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_from_edges_rejects_out_of_range(self):
        """Test endpoints must be within 0..n-1"""
        with pytest.raises(ValueError, match="outside"):
            Graph.from_edges(3, [(0, 3)])

    def test_degree_order_breaks_ties_by_id(self, p4):
        """Test degree order is by decreasing degree then increasing id"""
        assert p4.degree_order == (1, 2, 0, 3)

    def test_density_and_has_edge(self, p3):
        """Test density and adjacency queries"""
        assert p3.density == pytest.approx(2 / 3)
        assert p3.has_edge(0, 1)
        assert p3.has_edge(1, 0)
        assert not p3.has_edge(0, 2)

    def test_validate_reports_asymmetry(self):
        """Test validate catches a hand-built asymmetric adjacency"""
        broken = Graph(n=2, m=1, adjacency=((1,), ()), degrees=(1, 0), max_degree=1)

        violations = broken.validate()
        assert any("asymmetric" in violation for violation in violations)


class TestDimacsReader:
    """Test DIMACS parsing"""

    def test_parse_path(self):
        """Test the P3 example"""
        graph = parse_dimacs("p edge 3 2\ne 1 2\ne 2 3")

        assert (graph.n, graph.m, graph.max_degree) == (3, 2, 2)
        assert graph.adjacency == ((1,), (0, 2), (1,))

    def test_duplicate_edges_are_counted(self, caplog):
        """Test duplicate edge lines are merged with a warning"""
        reader = DimacsReader()
        graph = reader.parse("p edge 3 3\ne 1 2\ne 2 3\ne 1 2")

        assert graph.m == 2
        assert reader.duplicate_edges == 1
        assert reader.declared_edges == 3
        assert "duplicate" in caplog.text

    def test_reversed_duplicate_is_counted(self):
        """Test 'e 2 1' after 'e 1 2' counts as a duplicate"""
        reader = DimacsReader()
        graph = reader.parse("p edge 2 2\ne 1 2\ne 2 1")

        assert graph.m == 1
        assert reader.duplicate_edges == 1

    def test_comments_blank_lines_and_bytes(self):
        """Test comments and blank lines are skipped and bytes accepted"""
        reader = DimacsReader()
        graph = reader.parse(b"c hello\n\np col 2 1\nc mid\ne 1 2\n")

        assert graph.m == 1
        assert reader.comments == ["hello", "mid"]

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("p edge 3 1\ne 1 4", "outside"),
            ("p edge 3 1\ne 2 2", "self-loop"),
            ("e 1 2\np edge 3 1", "before"),
            ("p edge 3\ne 1 2", "malformed header"),
            ("p edge 3 1\np edge 3 1", "second"),
            ("p edge 3 1\ne 1 x", "non-integer"),
            ("p edge 3 1\nx 1 2", "unrecognized"),
            ("c only a comment", "missing"),
        ],
    )
    def test_malformed_input(self, text, fragment):
        """Test malformed input raises DimacsFormatError"""
        with pytest.raises(DimacsFormatError, match=fragment):
            parse_dimacs(text)

    def test_error_carries_line_number(self):
        """Test the offending line number is reported"""
        with pytest.raises(DimacsFormatError) as excinfo:
            parse_dimacs("c header\np edge 3 1\ne 1 9")

        assert excinfo.value.line_number == 3
        assert "line 3" in str(excinfo.value)

    def test_serialize_then_parse(self, grid4):
        """Test serialize_dimacs output parses back to the same graph"""
        text = serialize_dimacs(grid4, comment="grid 4x4")
        graph = parse_dimacs(text)

        assert text.startswith("c grid 4x4\np edge 16 24\n")
        assert graph.adjacency == grid4.adjacency


class TestComplementAndLoading:
    """Test complement graphs and file loading"""

    def test_complement_of_path(self, p3):
        """Test complement has exactly the non-edges"""
        comp = complement(p3)

        assert comp.edges() == [(0, 2)]
        assert comp.validate() == []

    def test_complement_is_involution(self, grid4):
        """Test complementing twice gives the original graph"""
        assert complement(complement(grid4)).adjacency == grid4.adjacency

    def test_clq_files_are_complemented(self, tmp_path):
        """Test .clq files are complemented by default and .col files are not"""
        text = "p edge 3 2\ne 1 2\ne 2 3\n"
        (tmp_path / "g.clq").write_text(text)
        (tmp_path / "g.col").write_text(text)

        assert load_graph(tmp_path / "g.clq").edges() == [(0, 2)]
        assert load_graph(tmp_path / "g.col").edges() == [(0, 1), (1, 2)]
        assert load_graph(tmp_path / "g.clq", complement_graph=False).m == 2
        assert load_graph(tmp_path / "g.col", complement_graph=True).m == 1
        assert load_graph(tmp_path / "g.col").name == "g"

    def test_hamming6_4_file(self, dimacs_file):
        """Test the hamming6-4 benchmark file has the published size"""
        graph = load_graph(dimacs_file("hamming6-4.clq"), complement_graph=False)

        assert (graph.n, graph.m) == (64, 704)


class TestGenerators:
    """Test instance generators"""

    def test_random_extremes(self):
        """Test p=0 gives no edges and p=1 gives K5"""
        assert gen_random(5, 0.0, 3).m == 0
        assert gen_random(5, 1.0, 3).m == 10

    def test_random_is_deterministic(self):
        """Test identical (n, p, seed) give identical adjacency"""
        assert gen_random(60, 0.3, 11).adjacency == gen_random(60, 0.3, 11).adjacency
        assert gen_random(60, 0.3, 11).adjacency != gen_random(60, 0.3, 12).adjacency

    def test_random_density_concentrates(self):
        """Test G(1000, 0.5) density lies within [0.49, 0.51] over several seeds"""
        for seed in range(5):
            graph = gen_random(1000, 0.5, seed)
            assert 0.49 <= graph.density <= 0.51

    def test_random_rejects_bad_probability(self):
        """Test p outside [0, 1] is rejected"""
        with pytest.raises(ValueError):
            gen_random(5, 1.5, 0)

    @pytest.mark.parametrize("width,height,n,m", [(1, 1, 1, 0), (2, 2, 4, 4), (10, 10, 100, 180), (3, 5, 15, 22)])
    def test_grid_sizes(self, width, height, n, m):
        """Test grid vertex and edge counts"""
        graph = gen_grid(width, height)

        assert (graph.n, graph.m) == (n, m)
        assert graph.validate() == []

    def test_grid_matches_networkx(self):
        """Test the grid is isomorphic to networkx's grid graph"""
        graph = gen_grid(4, 3)
        reference = nx.grid_2d_graph(3, 4)

        ours = nx.Graph(graph.edges())
        assert nx.is_isomorphic(ours, reference)

    def test_grid_numbering(self):
        """Test point (i, j) is vertex (j-1)*width + (i-1)"""
        graph = gen_grid(3, 2)

        assert graph.has_edge(0, 1)
        assert graph.has_edge(0, 3)
        assert not graph.has_edge(2, 3)


class TestGenParams:
    """Test generator spec parsing"""

    @pytest.mark.parametrize(
        "text,n,p,seed",
        [
            ("random:100:0.2:seed=5", 100, 0.2, 5),
            ("random:100:0.2:5", 100, 0.2, 5),
            ("random:8:0.5", 8, 0.5, 0),
        ],
    )
    def test_parse_random(self, text, n, p, seed):
        """Test the random spec forms"""
        params = GenParams.parse(text)

        assert params.kind is GenKind.RANDOM
        assert (params.n, params.p, params.seed) == (n, p, seed)

    def test_parse_grid_and_build(self):
        """Test grid spec parsing and building"""
        params = GenParams.parse("grid:10x10")

        assert params.kind is GenKind.GRID
        assert params.build().n == 100
        assert params.label() == "grid:10x10"

    def test_label_round_trips(self):
        """Test label() parses back to equal parameters"""
        params = GenParams.parse("random:30:0.25:7")

        assert GenParams.parse(params.label()) == params

    @pytest.mark.parametrize("text", ["random:10", "grid:3", "torus:4x4", "random:10:abc"])
    def test_parse_rejects_unknown(self, text):
        """Test unrecognized specs raise ValueError"""
        with pytest.raises(ValueError):
            GenParams.parse(text)

    def test_probability_out_of_range(self):
        """Test validation rejects p > 1"""
        with pytest.raises(ValueError):
            GenParams.parse("random:10:1.5")
