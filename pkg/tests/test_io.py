import json

import numpy as np
import pytest

from chebext import io
from chebext.chebyshev import ChebCoeffs, NodeGrid
from chebext.fourier_grid import Field, GridSpec, SpatialField


@pytest.fixture
def rng():
    return np.random.default_rng(42)


class TestFieldFiles:
    def test_spatial_round_trip(self, tmp_path, rng):
        g = GridSpec((1.0, 2.5), (5, 7))
        f = SpatialField(g, rng.normal(size=(5, 7)) + 1j * rng.normal(size=(5, 7)), sigma=0.8)
        io.write_field(tmp_path / "f.bin", f)
        back = io.read_field(tmp_path / "f.bin")
        assert isinstance(back, SpatialField)
        assert back.grid == g and back.sigma == 0.8
        assert back.values.tobytes() == f.values.tobytes()

    def test_frequency_round_trip(self, tmp_path, rng):
        g = GridSpec.cube(1, 3.0, 9)
        f = Field(g, rng.normal(size=9))
        io.write_field(tmp_path / "w.bin", f)
        back = io.read_field(tmp_path / "w.bin")
        assert back.domain == "xi" and not isinstance(back, SpatialField)
        assert np.array_equal(back.values, f.values.astype(complex))

    def test_header_and_layout(self, tmp_path):
        f = Field(GridSpec.cube(1, 1.0, 2), np.array([1 + 2j, -3.5 + 0j]))
        io.write_field(tmp_path / "w.bin", f)
        raw = (tmp_path / "w.bin").read_bytes()
        head, payload = raw.split(b"\n", 1)
        header = json.loads(head)
        assert header == {"schema": 1, "domain": "xi", "grid": "uniform", "d": 1,
                          "half_widths": [1.0], "points": [2], "sigma": None}
        assert np.frombuffer(payload, dtype="<f8").tolist() == [1.0, 2.0, -3.5, 0.0]

    def test_node_round_trip(self, tmp_path, rng):
        nodes = NodeGrid(2, 6, 1.5)
        samples = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        io.write_nodes(tmp_path / "n.bin", nodes, samples, sigma=2.0)
        got_nodes, got = io.read_nodes(tmp_path / "n.bin")
        assert got_nodes == nodes
        assert got.tobytes() == samples.tobytes()

    def test_kind_mismatch(self, tmp_path):
        io.write_nodes(tmp_path / "n.bin", NodeGrid(1, 4, 1.0), np.zeros(4))
        with pytest.raises(ValueError):
            io.read_field(tmp_path / "n.bin")
        io.write_field(tmp_path / "f.bin", Field(GridSpec.cube(1, 1.0, 4), np.zeros(4)))
        with pytest.raises(ValueError):
            io.read_nodes(tmp_path / "f.bin")

    def test_truncated_payload(self, tmp_path):
        io.write_field(tmp_path / "f.bin", Field(GridSpec.cube(1, 1.0, 4), np.zeros(4)))
        data = (tmp_path / "f.bin").read_bytes()
        (tmp_path / "f.bin").write_bytes(data[:-8])
        with pytest.raises(ValueError):
            io.read_field(tmp_path / "f.bin")

    def test_unknown_schema(self, tmp_path):
        (tmp_path / "f.bin").write_bytes(b'{"schema": 9, "points": [1]}\n' + bytes(16))
        with pytest.raises(ValueError):
            io.read_field(tmp_path / "f.bin")


class TestCsv:
    def test_field_round_trip(self, tmp_path):
        g = GridSpec.cube(1, 2.0, 11)
        f = SpatialField(g, np.exp(1j * g.axes[0]) / 3)
        io.write_field_csv(tmp_path / "f.csv", f)
        back = io.read_field_csv(tmp_path / "f.csv")
        assert isinstance(back, SpatialField)
        assert np.array_equal(back.values, f.values)
        assert (tmp_path / "f.csv").read_text().splitlines()[0] == "x,re,im"

    def test_rejects_two_dimensions(self, tmp_path):
        with pytest.raises(ValueError):
            io.write_field_csv(tmp_path / "f.csv", Field(GridSpec.cube(2, 1.0, 3), np.zeros((3, 3))))

    def test_rejects_irregular_coordinates(self, tmp_path):
        (tmp_path / "f.csv").write_text("xi,re,im\n-1,0,0\n0.3,0,0\n1,0,0\n")
        with pytest.raises(ValueError):
            io.read_field_csv(tmp_path / "f.csv")

    def test_coeffs(self, tmp_path):
        coeffs = ChebCoeffs(2, 2, 1.0, np.array([[0, 0], [0, 1], [1, 0]]), np.array([1.0, 0.1j, -2 / 3]))
        io.write_coeffs_csv(tmp_path / "c.csv", coeffs)
        lines = (tmp_path / "c.csv").read_text().splitlines()
        assert lines[0] == "k1,k2,re,im"
        assert lines[3].split(",")[:2] == ["1", "0"]
        assert float(lines[3].split(",")[2]) == -2 / 3
