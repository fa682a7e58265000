import math

import pytest
from numpy.testing import assert_allclose

from src.core.qcore import BellDiagonalParams, dicke_state, noisy_ghz, random_density_matrix
from src.utils.errors import StateSpecError
from src.utils.io import write_json
from src.utils.state_spec import parse_state


class TestParseState:
    @pytest.mark.parametrize(
        "spec, nqubits",
        [
            ("bell", 2),
            ("mixed", 2),
            ("mixed:4", 4),
            ("ghz:5", 5),
            ("w:3", 3),
            ("dicke:4,2", 4),
            ("bd:0.2,-0.1,0.3", 2),
            ("noisyghz:3,0.25", 3),
            (f"psitheta:3,{math.pi / 8}", 3),
        ],
    )
    def test_forms(self, spec, nqubits):
        assert parse_state(spec).state.nqubits == nqubits

    def test_bd_params_carried(self):
        parsed = parse_state(" bd:0.2,-0.1,0.3 ")
        assert parsed.bd_params == BellDiagonalParams(0.2, -0.1, 0.3)
        assert parse_state("bell").bd_params == BellDiagonalParams(1.0, 1.0, -1.0)
        assert parse_state("mixed").bd_params == BellDiagonalParams(0.0, 0.0, 0.0)
        assert parse_state("mixed:3").bd_params is None
        assert parse_state("ghz:2").bd_params is None

    def test_values(self):
        assert_allclose(parse_state("dicke:4,2").state.data, dicke_state(4, 2).data)
        assert_allclose(parse_state("noisyghz:3,0.25").state.data, noisy_ghz(3, 0.25).data)

    def test_file(self, tmp_path):
        rho = random_density_matrix(2, seed=1)
        path = write_json(rho.to_dict(), tmp_path / "rho.json")
        assert_allclose(parse_state(f"file:{path}").state.data, rho.data, atol=1e-15)

    @pytest.mark.parametrize(
        "spec",
        [
            "",
            "ghz",
            "ghz:x",
            "dicke:4",
            "bd:1,2",
            "bd:a,b,c",
            "bd:1,1,1",
            "noisyghz:3,1.5",
            "ghz:1",
            "file:/nonexistent/rho.json",
            "bell:2",
        ],
    )
    def test_rejected(self, spec):
        with pytest.raises(StateSpecError):
            parse_state(spec)
