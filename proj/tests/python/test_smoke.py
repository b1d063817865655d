# Copyright 2026 The Plumber Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import shutil

import pytest

import plumber

FIXTURE = "Einstein was born in Ulm. He developed relativity."
TOY = "rule-coref+rule-extractor+toykg-entity-linker+toykg-relation-linker@toykg"


def _source_data():
    env = os.environ.get("PLUMBER_TEST_DATA")
    if env:
        return env
    return os.path.join(os.path.dirname(__file__), "..", "..", "data")


@pytest.fixture
def data(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(
        _source_data(), target, ignore=shutil.ignore_patterns("runs", "cache", "*.jsonl.lock")
    )
    for stale in ("feedback.jsonl", "profiles.json"):
        if (target / stale).exists():
            (target / stale).unlink()
    return target


def test_fixture_run(data):
    s = plumber.Service(data)
    result = s.run(FIXTURE, pipeline_id=TOY)
    assert result["status"] == "ok"
    iris = [
        (t["subject"]["iri"], t["predicate"]["iri"], t["object"]["iri"])
        for t in result["triples"]
    ]
    assert iris == [
        ("http://toykg/e/albert_einstein", "http://toykg/p/born_in", "http://toykg/e/ulm"),
        ("http://toykg/e/albert_einstein", "http://toykg/p/developed", "http://toykg/e/relativity"),
    ]
    assert s.get_run(result["run_id"])["triples"] == result["triples"]


def test_automatic_and_feedback(data):
    s = plumber.Service(data)
    result = s.run(FIXTURE)
    assert result["mode"] == "automatic"
    fb = s.feedback(result["run_id"], 0, "accept")
    assert fb["stats"] == {"pipeline_id": TOY, "accepts": 1, "rejects": 0}
    assert s.select(FIXTURE)["pipeline"]["id"] == TOY


def test_errors_carry_codes(data):
    s = plumber.Service(data)
    with pytest.raises(plumber.PlumberError) as info:
        s.get_run("run-missing")
    assert info.value.code == "unknown_run"
    assert info.value.status == 404
    status, body = s.request("POST", "/feedback", {"run_id": "x", "triple_index": 0, "verdict": "accept"})
    assert status == 404 and body["error"]["code"] == "unknown_run"


def test_empty_registry(tmp_path):
    s = plumber.Service(tmp_path)
    assert s.components() == []
    assert s.request("GET", "/components") == (200, [])


def test_helpers():
    assert abs(plumber.blend(0.8, 3, 1, 0.3) - 0.76) < 1e-12
    m = plumber.micro_metrics([(1, 2, 1)])
    assert abs(m["f1"] - 0.4) < 1e-12
    assert plumber.normalize_surface("  Albert   EINSTEIN! ") == "albert einstein"
    codes = dict(plumber.error_codes())
    assert codes["unknown_run"] == 404 and codes["port_in_use"] == 500


def test_cli_in_process(data):
    code, out, err = plumber.cli("--config", data / "missing.json", "pipelines", "list")
    assert code == 1 and "config_invalid" in err
    os.environ["PLUMBER_DATA_DIR"] = str(data)
    try:
        code, out, _ = plumber.cli("pipelines", "list")
    finally:
        del os.environ["PLUMBER_DATA_DIR"]
    assert code == 0 and "1 pipeline(s)" in out
