# Copyright 2026 The dualmpc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Dual-MPC quadruped locomotion: footstep and ground-reaction-force MPCs."""

from dualmpc._core import (
    CondensedQP,
    DualMpcError,
    RunResult,
    Scenario,
    bench,
    check,
    check_positive_definite,
    compare,
    preset_names,
    run,
    solve_qp,
)

__all__ = [
    "CondensedQP",
    "DualMpcError",
    "RunResult",
    "Scenario",
    "bench",
    "check",
    "check_positive_definite",
    "compare",
    "preset_names",
    "run",
    "solve_qp",
]
