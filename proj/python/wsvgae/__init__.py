# Copyright 2026 The wsvgae Authors.
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

"""VGAE training and evaluation with optional hidden-layer weight sharing."""

from ._core import (
    Error,
    InvalidArgument,
    NonFiniteError,
    ParseError,
    ami,
    ari,
    average_precision,
    config_text,
    normalized_adjacency,
    param_count,
    roc_auc,
    run,
    sbm,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "NonFiniteError",
    "ParseError",
    "ami",
    "ari",
    "average_precision",
    "config_text",
    "normalized_adjacency",
    "param_count",
    "roc_auc",
    "run",
    "sbm",
]
