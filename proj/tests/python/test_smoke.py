# Copyright 2026 The ldprepr Authors
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
import os
import pathlib

import pytest

import ldprepr

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_ome_params_reference_point():
    p = ldprepr.ome_params(1.0, 100.0, 550)
    assert p.sensitivity == 550
    assert abs(p.p1 - 0.99009900990099) < 1e-12
    assert abs(p.p2 - 9.99999000001e-07) < 1e-12
    assert abs(p.q - 0.00988318240762078) < 1e-12
    assert abs(ldprepr.paired_product_epsilon(p) - 1.0) < 1e-9


def test_ue_params():
    sue = ldprepr.sue_params(1.0, 100)
    assert sue.p + sue.q == 1.0
    assert sue.protocol == "sue"
    oue = ldprepr.oue_params(1.0, 100)
    assert oue.p == 0.5
    assert abs(ldprepr.audit_max_log_ratio(sue) - 1.0) < 1e-9


def test_codec_round_trip():
    assert ldprepr.encode_value(-3.25) == "1001101000"
    assert ldprepr.decode_value("0111111111") == 15.96875
    values = [math.sin(i) * 3 for i in range(50)]
    bits = ldprepr.encode_vector(values)
    assert len(bits) == 500
    z = ldprepr.zscore(values)
    decoded = ldprepr.decode_vector(bits)
    assert all(abs(a - b) <= 2 ** -5 for a, b in zip(decoded, z))


def test_perturb_is_seeded():
    p = ldprepr.ome_params(1.0, 10.0, 64)
    bits = "1111000011110000" * 4
    a = ldprepr.perturb(bits, p, seed=42)
    assert a == ldprepr.perturb(bits, p, seed=42)
    assert len(a) == 64
    assert set(a) <= {"0", "1"}
    ue = ldprepr.perturb(bits, ldprepr.sue_params(1.0, 100), seed=1)
    assert len(ue) == 64


def test_empirical_rates():
    p = ldprepr.ome_params(1.0, 100.0, 550)
    rates = ldprepr.empirical_flip_rates(p, 100_000, seed=3)
    est = rates.zero_to_one
    assert est["trials"] == 100_000
    assert abs(est["value"] - p.q) <= 4 * math.sqrt(p.q * (1 - p.q) / 1e5)


def test_errors_carry_a_code():
    with pytest.raises(ldprepr.Error) as info:
        ldprepr.ome_params(-1.0, 100.0, 550)
    assert info.value.code == "parameter error"
    with pytest.raises(ldprepr.Error):
        ldprepr.perturb("0101", ldprepr.ome_params(1.0, 10.0, 64), seed=0)


def test_load_and_run_experiment():
    data = ldprepr.load_embeddings(str(DATA / "synthetic_sentiment.emb"))
    assert data["dim"] == 50
    assert len(data["labels"]) == 1000
    report = ldprepr.run_experiment(
        overrides={
            "input": DATA / "synthetic_sentiment.emb",
            "runs": 2,
            "epochs": 1,
            "hidden_units": 8,
            "base_seed": 1,
        }
    )
    assert len(report["accuracies"]) == 2
    assert all(s == "train:perturbed_bits test:perturbed_bits"
               for s in report["model_inputs"])
    assert report["text"].startswith("# ldprepr experiment report")


def test_probability_curves():
    rows = ldprepr.probability_curves(["ome", "oue"], [1.0], [100.0], r=50, l=11)
    assert len(rows) == 2
    assert rows[0]["lambda_"] == 100.0
    assert rows[1]["lambda_"] is None
