# Copyright 2026 The tcpa-loopctl Authors
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
"""Loop-control compilation and simulation for tightly coupled processor arrays."""

from ._tcpa import (
    Compiled,
    Error,
    Program,
    compile,
    delay,
    generate,
    helper_schedule,
    kernel_names,
    load_program,
    parse_program,
)

__all__ = [
    "Compiled",
    "Error",
    "Program",
    "compile",
    "delay",
    "generate",
    "helper_schedule",
    "kernel_names",
    "load_program",
    "parse_program",
]
