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

"""Python bindings for the plumber IE pipeline framework.

Thin wrappers over the native core: JSON documents go in and come out as
plain dicts and lists.
"""

import json as _json

from . import _plumber
from ._plumber import PlumberError, error_codes, micro_metrics, normalize_surface

__all__ = [
    "PlumberError",
    "Service",
    "blend",
    "cli",
    "error_codes",
    "micro_metrics",
    "normalize_surface",
]


def blend(score, accepts, rejects, beta=0.3):
    return _plumber.blend(score, accepts, rejects, beta)


def cli(*args):
    """Runs the plumber CLI in-process; returns (exit_code, stdout, stderr)."""
    return _plumber.cli_main([str(a) for a in args])


class Service:
    """In-process gateway. ``config`` takes the keys of config.json."""

    def __init__(self, data_dir="", config=None):
        self._s = _plumber.Service(str(data_dir), _json.dumps(config) if config else "")

    def components(self):
        return _json.loads(self._s.components())

    def pipelines(self, kg=None):
        return _json.loads(self._s.pipelines(kg))

    def validate_pipeline(self, **body):
        return _json.loads(self._s.validate_pipeline(_json.dumps(body)))

    def select(self, text, kg=None):
        body = {"text": text}
        if kg is not None:
            body["kg"] = kg
        return _json.loads(self._s.select(_json.dumps(body)))

    def run(self, text=None, **body):
        if text is not None:
            body["text"] = text
        return _json.loads(self._s.run(_json.dumps(body)))

    def get_run(self, run_id):
        return _json.loads(self._s.get_run(run_id))

    def feedback(self, run_id, triple_index, verdict):
        body = {"run_id": run_id, "triple_index": triple_index, "verdict": verdict}
        return _json.loads(self._s.feedback(_json.dumps(body)))

    def profiles(self):
        return _json.loads(self._s.profiles())

    def health(self):
        return _json.loads(self._s.health())

    def request(self, method, path, body=None, query=None):
        """Same dispatch as the HTTP API; returns (status, decoded body)."""
        raw = "" if body is None else _json.dumps(body)
        status, out = self._s.handle(method, path, raw, query or {})
        return status, _json.loads(out)
