# Copyright 2026 The hcft Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import hcft


def test_version():
    assert hcft.__version__ == "0.1.0"


def test_simulate_shapes_and_determinism():
    s = hcft.simulate(layout="fffa", L=16, T=16, n=4, seed=1)
    assert s.metadata.kind == "fffa"
    assert s.metadata.n == 4
    assert len(s) == len(s.records) > 0
    cols = s.columns()
    assert len(cols["t"]) == len(s)
    assert all(c == 4 for c in cols["count"])
    again = hcft.simulate(layout="fffa", L=16, T=16, n=4, seed=1, workers=4)
    assert again.data_block() == s.data_block()


def test_result_file_round_trip(tmp_path):
    out = tmp_path / "run.csv"
    s = hcft.simulate(layout="fafa", L=16, T=8, n=3, seed=5, schedule="fig8b", out=str(out))
    f = hcft.read_result_file(str(out))
    assert f.series.data_block() == s.data_block()
    assert '"layout":"fafa"' in f.config
    moved = hcft.recompute_collapse(f.series, 0.7)
    assert moved.metadata.y_over_t == 0.7
    assert moved.records[3].tau == pytest.approx(0.7 * 3 / 16)


def test_percolate():
    s = hcft.percolate(L=16, T=8, n=5, coloring="top_vs_bottom", depths="every:4")
    assert [r.t for r in s.records] == [0, 4, 8]
    assert all(0 <= r.mean_nats <= 16 * math.log(2) for r in s.records)
    intact = hcft.percolate(L=16, T=8, p=0.0, n=2, coloring="top_vs_bottom", depths="every:4")
    assert intact.records[2].mean_nats == pytest.approx(16 * math.log(2))


def test_errors():
    with pytest.raises(hcft.ConfigError):
        hcft.simulate(layout="ffff")
    with pytest.raises(ValueError):
        hcft.simulate(L=15)
    with pytest.raises(hcft.FitError):
        hcft.fit_line([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(OSError):
        hcft.read_result_file("/nonexistent/file.csv")


def test_fits_recover_exact_exponents():
    xi = [math.exp(-0.2 * k) for k in range(1, 20)]
    s = [-0.53 * math.log(x) + 1.0 for x in xi]
    r = hcft.fit_log_linear(xi, s)
    assert r.exponent == pytest.approx(0.53, abs=1e-12)
    eta = [10 ** (-1 - 0.1 * k) for k in range(20)]
    i = [2.0 * e**0.9 for e in eta]
    assert hcft.fit_power_law(eta, i).exponent == pytest.approx(0.9, abs=1e-12)


def test_elliptic():
    assert hcft.ellint_K(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert hcft.jacobi_sn(0.3, 0.0) == pytest.approx(math.sin(0.3), abs=1e-14)
    assert hcft.solve_m(0.5)["m"] == pytest.approx(0.5, abs=1e-15)


def test_tableau_entropy():
    bell = hcft.StabilizerTableau.bell_pairs(3)
    assert bell.num_qubits == 6
    assert bell.entropy_bits([0, 1, 2]) == 3
    assert bell.entropy_bits([0, 3]) == 0
    assert hcft.StabilizerTableau.product_state(4).entropy_bits([1, 2]) == 0
